//! Acceptance criteria, one `PASS|FAIL` line each. Runs as a plain binary so
//! the lines are always printed; the process fails if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rackle::catalog;
use rackle::iso::{are_isomorphic, is_cover_isomorphism, is_order_isomorphism};
use rackle::lattice::Strategy;
use rackle::reconstruct::{
    find_coset_partition, join_poset, lattice_derived_length, max_normal_abelian, maximal_boolean_elements,
    partition_bijection, is_valid_bijection, DerivedLength, LatticeContext,
};
use rackle::topology::{mobius_bottom_top, reduced_euler_characteristic, ProperPart};
use rackle::verify::{check_coset_joins, pairs_scan, GroupLattice};
use rackle::{Config, FiniteGroup, Rack, SubrackLattice};

struct Outcome {
    pass: bool,
    witness: String,
}

fn outcome(pass: bool, witness: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        witness: witness.into(),
    }
}

fn fail(witness: impl Into<String>) -> Outcome {
    outcome(false, witness)
}

/// Catalog groups with their lattices, built once.
struct Fixture {
    config: Config,
    groups: Vec<(FiniteGroup, GroupLattice, Duration)>,
}

impl Fixture {
    fn new() -> Fixture {
        let config = Config::default();
        let groups = catalog::groups(usize::MAX)
            .into_iter()
            .map(|g| {
                let start = Instant::now();
                let gl = GroupLattice::new(&g, &config).expect("catalog lattice builds");
                let elapsed = start.elapsed();
                (g, gl, elapsed)
            })
            .collect();
        Fixture { config, groups }
    }
}

fn family(gl: &GroupLattice, xs: &[usize]) -> BTreeSet<Vec<usize>> {
    xs.iter().map(|&x| gl.elements(gl.abs.support(x))).collect()
}

fn lattice_sizes(f: &Fixture) -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut checked = 0;
    for (g, gl, elapsed) in &f.groups {
        slowest = slowest.max(*elapsed);
        let start = Instant::now();
        let nc = match SubrackLattice::enumerate_with(&gl.rack, &f.config, Strategy::NextClosure) {
            Ok(nc) => nc,
            Err(e) => return fail(format!("{}: {e}", g.name())),
        };
        slowest = slowest.max(start.elapsed());
        if nc.elements() != gl.lattice.elements() {
            return fail(format!("{}: enumeration strategies differ", g.name()));
        }
        if g.is_abelian() && gl.lattice.len() != 1 << g.order() {
            return fail(format!("{}: size {} is not 2^{}", g.name(), gl.lattice.len(), g.order()));
        }
        if g.order() <= 12 {
            let brute: BTreeSet<Vec<usize>> = common::brute_subracks(g).into_iter().collect();
            let found: BTreeSet<Vec<usize>> = gl.lattice.elements().iter().map(|s| s.to_vec()).collect();
            if brute != found {
                return fail(format!("{}: subset scan finds {} closed sets, enumeration {}", g.name(), brute.len(), found.len()));
            }
        }
        checked += 1;
    }
    let s3 = catalog::symmetric(3);
    let s3_size = SubrackLattice::enumerate(&Rack::group_rack(&s3), &f.config).unwrap().len();
    let transpositions = s3.conjugacy_classes().classes.iter().position(|c| c.len() == 3).unwrap();
    let class_rack = Rack::conjugacy_class_rack(&s3, transpositions).unwrap();
    let class_size = SubrackLattice::enumerate(&class_rack, &f.config).unwrap().len();
    let class_brute = common::brute_rack_subsets(&class_rack.table());
    let pass = s3_size == 18 && class_size == 5 && class_brute == 5 && slowest < Duration::from_secs(1);
    outcome(
        pass,
        format!("groups={checked} S3={s3_size} S3-transpositions={class_size} slowest<1s={}", slowest < Duration::from_secs(1)),
    )
}

fn coatom_duality(f: &Fixture) -> Outcome {
    for (g, gl, _) in &f.groups {
        let start = Instant::now();
        let classes = common::brute_classes(g);
        let all: BTreeSet<usize> = (0..g.order()).collect();
        let complements: BTreeSet<Vec<usize>> = gl
            .lattice
            .coatoms()
            .iter()
            .map(|&c| {
                let members: BTreeSet<usize> = gl.lattice.members(c as usize).iter().collect();
                all.difference(&members).copied().collect()
            })
            .collect();
        if gl.lattice.coatoms().len() != classes.len() || complements != classes || start.elapsed() >= Duration::from_secs(1) {
            return fail(format!("{}: coatoms={} classes={}", g.name(), gl.lattice.coatoms().len(), classes.len()));
        }
    }
    outcome(true, format!("groups={}", f.groups.len()))
}

fn maximal_boolean(f: &Fixture) -> Outcome {
    let mut checked = 0;
    for (g, gl, _) in &f.groups {
        let found = match maximal_boolean_elements(&gl.abs) {
            Ok(x) => family(gl, &x),
            Err(e) => return fail(format!("{}: {e}", g.name())),
        };
        if found != common::maximal_abelian(g) {
            return fail(format!("{}: {found:?}", g.name()));
        }
        checked += 1;
    }
    outcome(true, format!("groups={checked}"))
}

fn normal_abelian(f: &Fixture) -> Outcome {
    for (g, gl, _) in &f.groups {
        let found = LatticeContext::new(&gl.abs)
            .and_then(|ctx| max_normal_abelian(&gl.abs, &ctx.classes))
            .map(|x| family(gl, &x));
        match found {
            Ok(found) if found == common::maximal_normal_abelian(g) => {}
            Ok(found) => return fail(format!("{}: {found:?}", g.name())),
            Err(e) => return fail(format!("{}: {e}", g.name())),
        }
    }
    outcome(true, format!("groups={}", f.groups.len()))
}

fn coset_joins(f: &Fixture) -> Outcome {
    let mut subgroups = 0;
    let mut tuples = 0u64;
    for (g, gl, _) in &f.groups {
        for n in g.normal_subgroups() {
            match check_coset_joins(g, &gl.rack, &n, &f.config) {
                Ok(line) if line.pass => {
                    subgroups += 1;
                    tuples += line
                        .witness
                        .split_whitespace()
                        .find_map(|w| w.strip_prefix("tuples="))
                        .and_then(|t| t.parse::<u64>().ok())
                        .unwrap_or(0);
                }
                Ok(line) => return fail(format!("{}: {line}", g.name())),
                Err(e) => return fail(format!("{}: {e}", g.name())),
            }
        }
    }
    outcome(true, format!("normal-subgroups={subgroups} tuples={tuples}"))
}

fn random_partition(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut points: Vec<usize> = (0..m * n).collect();
    points.shuffle(rng);
    points.chunks(n).map(|c| c.to_vec()).collect()
}

fn partition_instances() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let start = Instant::now();
    for k in 0..10_000 {
        let m = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=8);
        let p = random_partition(&mut rng, m, n);
        let q = if rng.gen_bool(0.2) {
            let mut q = p.clone();
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m);
            if i != j {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let t = q[i][a];
                q[i][a] = q[j][b];
                q[j][b] = t;
            }
            q
        } else {
            random_partition(&mut rng, m, n)
        };
        if !common::perfect_matching_exists(&p, &q) {
            return fail(format!("instance {k}: matching oracle finds no bijection"));
        }
        match partition_bijection(&p, &q) {
            Ok(f) if is_valid_bijection(&p, &q, &f) => {}
            Ok(_) => return fail(format!("instance {k}: invalid bijection")),
            Err(e) => return fail(format!("instance {k}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    outcome(elapsed < Duration::from_secs(10), format!("instances=10000 under-10s={}", elapsed < Duration::from_secs(10)))
}

fn quotients(f: &Fixture) -> Outcome {
    let mut checked = 0;
    for (g, gl, _) in &f.groups {
        let ctx = LatticeContext::new(&gl.abs).unwrap();
        for x in max_normal_abelian(&gl.abs, &ctx.classes).unwrap() {
            let n = gl.elements(gl.abs.support(x));
            let tag = format!("{} N={n:?}", g.name());
            let j = match find_coset_partition(&ctx, x, &f.config).and_then(|c| join_poset(&ctx, &c.parts, &f.config)) {
                Ok(j) => j,
                Err(e) => return fail(format!("{tag}: {e}")),
            };
            let q = g.quotient(&n).unwrap().group;
            let brute = common::brute_subracks(&q);
            let ql = GroupLattice::new(&q, &f.config).unwrap();
            if ql.lattice.len() != brute.len() {
                return fail(format!("{tag}: quotient lattice size"));
            }
            match are_isomorphic(&j.lattice, &ql.abs, f.config.iso_budget) {
                Ok(Some(map)) if is_cover_isomorphism(&j.lattice, &ql.abs, &map) && is_order_isomorphism(&j.lattice, &ql.abs, &map) => {}
                Ok(Some(_)) => return fail(format!("{tag}: map not verified")),
                Ok(None) => return fail(format!("{tag}: {} vs {} elements, not isomorphic", j.lattice.len(), ql.abs.len())),
                Err(e) => return fail(format!("{tag}: {e}")),
            }
            checked += 1;
        }
    }
    outcome(true, format!("pairs={checked}"))
}

fn derived_lengths(f: &Fixture) -> Outcome {
    let mut by_length: BTreeMap<usize, usize> = BTreeMap::new();
    let mut s4_time = Duration::ZERO;
    for (g, gl, built) in &f.groups {
        let Some(expected) = common::derived_length(g) else { continue };
        let start = Instant::now();
        for seed in [None, Some(1), Some(2)] {
            let abs = match seed {
                None => gl.abs.clone(),
                Some(s) => gl.lattice.to_abstract(Some(s)).0,
            };
            match lattice_derived_length(&abs, &f.config) {
                Ok(DerivedLength::Solvable(k)) if k == expected => {}
                Ok(d) => return fail(format!("{}: lattice {d} oracle {expected}", g.name())),
                Err(e) => return fail(format!("{}: {e}", g.name())),
            }
        }
        if g.name() == "S4" {
            s4_time = *built + start.elapsed();
        }
        *by_length.entry(expected).or_default() += 1;
    }
    let lengths: Vec<String> = by_length.iter().map(|(k, n)| format!("dl{k}={n}")).collect();
    let fast = s4_time < Duration::from_secs(300);
    outcome(
        fast && by_length.contains_key(&3),
        format!("{} relabelings=3 S4-under-5min={fast}", lengths.join(" ")),
    )
}

fn pair_scan() -> Outcome {
    let config = Config::default();
    let start = Instant::now();
    let report = match pairs_scan(12, &config) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let elapsed = start.elapsed();
    if let Some(bad) = report.lines.iter().find(|l| !l.pass) {
        return fail(bad.to_string());
    }
    for p in &report.pairs {
        let (a, b) = (&report.groups[p.left], &report.groups[p.right]);
        let ga = catalog::by_name(&a.name).unwrap();
        let gb = catalog::by_name(&b.name).unwrap();
        if common::derived_length(&ga) != common::derived_length(&gb) || ga.is_abelian() != gb.is_abelian() {
            return fail(format!("{}~{}: oracle invariants differ", a.name, b.name));
        }
    }
    let z4 = report
        .pairs
        .iter()
        .any(|p| report.groups[p.left].name == "Z4" && report.groups[p.right].name == "Z2xZ2");
    let nonabelian = report
        .pairs
        .iter()
        .filter(|p| !report.groups[p.left].invariants.is_abelian)
        .count();
    let fast = elapsed < Duration::from_secs(600);
    outcome(
        z4 && fast,
        format!(
            "groups={} isomorphic-pairs={} nonabelian-pairs={nonabelian} Z4~Z2xZ2={z4} under-10min={fast}",
            report.groups.len(),
            report.pairs.len()
        ),
    )
}

fn sphere(f: &Fixture) -> Outcome {
    let mut chain_checked = 0;
    let mut dense_checked = 0;
    for (g, gl, _) in &f.groups {
        let c = common::brute_classes(g).len();
        let mu = mobius_bottom_top(&gl.abs);
        let expected = if c.is_multiple_of(2) { 1 } else { -1 };
        if mu != expected.into() {
            return fail(format!("{}: mu={mu} c={c}", g.name()));
        }
        if gl.lattice.len() <= 2000 {
            let sets: Vec<u64> = gl.lattice.elements().iter().map(|s| s.0).collect();
            if common::dense_mobius(&sets) != expected {
                return fail(format!("{}: dense recursion disagrees", g.name()));
            }
            dense_checked += 1;
        }
        if gl.lattice.len() <= 200 {
            match reduced_euler_characteristic(&ProperPart::of(&gl.abs), 200) {
                Ok(chi) if chi == mu => chain_checked += 1,
                Ok(chi) => return fail(format!("{}: chains={chi} mu={mu}", g.name())),
                Err(e) => return fail(format!("{}: {e}", g.name())),
            }
        }
    }
    outcome(
        true,
        format!("groups={} dense-checked={dense_checked} chain-checked={chain_checked}", f.groups.len()),
    )
}

fn nonsolvable() -> Outcome {
    let config = Config {
        ground_cap: 64,
        ..Config::default()
    };
    let a5 = catalog::alternating(5);
    let a5_verdict = SubrackLattice::enumerate(&Rack::group_rack(&a5), &config)
        .and_then(|l| lattice_derived_length(&l.to_abstract(Some(5)).0, &config));
    let stall = lattice_derived_length(&catalog::stall_lattice(), &config);
    let ok = |r: &rackle::Result<DerivedLength>| matches!(r, Ok(DerivedLength::NotSolvable));
    let show = |r: &rackle::Result<DerivedLength>| match r {
        Ok(d) => d.to_string(),
        Err(e) => format!("error:{e}"),
    };
    outcome(
        ok(&a5_verdict) && ok(&stall),
        format!("A5={} stall-fixture={}", show(&a5_verdict), show(&stall)),
    )
}

fn main() {
    let fixture = Fixture::new();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("lattice-sizes", Box::new(|| lattice_sizes(&fixture))),
        ("coatom-class-duality", Box::new(|| coatom_duality(&fixture))),
        ("maximal-boolean-intervals", Box::new(|| maximal_boolean(&fixture))),
        ("maximal-normal-abelian", Box::new(|| normal_abelian(&fixture))),
        ("coset-joins", Box::new(|| coset_joins(&fixture))),
        ("partition-bijection", Box::new(partition_instances)),
        ("quotient-join-poset", Box::new(|| quotients(&fixture))),
        ("derived-length", Box::new(|| derived_lengths(&fixture))),
        ("pair-scan", Box::new(pair_scan)),
        ("sphere", Box::new(|| sphere(&fixture))),
        ("nonsolvable-detection", Box::new(nonsolvable)),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!("{} criterion-{:02}-{name} {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.witness);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
