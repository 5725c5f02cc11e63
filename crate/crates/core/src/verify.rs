//! Per-group verification pipeline and the pair scan over the catalog.
//!
//! Every check produces a [`CheckLine`], printed as `PASS|FAIL <check>
//! <witness>`. The lattice-side computations only ever see a shuffled
//! abstract copy of the subrack lattice; group-side oracles are used to
//! judge them.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::bits::Bits;
use crate::catalog;
use crate::config::Config;
use crate::error::Result;
use crate::group::{FiniteGroup, GroupInvariants};
use crate::iso::{are_isomorphic, is_cover_isomorphism, is_order_isomorphism};
use crate::lattice::{closed_sets_brute_force, SubrackLattice, Strategy};
use crate::poset::AbstractLattice;
use crate::rack::Rack;
use crate::reconstruct::{
    coset_partition_of, find_coset_partition, is_hypothetical_coset_partition, join_of_cosets, join_poset,
    max_normal_abelian, maximal_boolean_elements, DerivedLength, DerivedLengthSolver, LatticeContext,
};
use crate::topology::sphere_check;
use crate::tuples;

/// Largest group whose subrack lattice is also checked by a full subset scan.
pub const BRUTE_FORCE_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub pass: bool,
    pub check: String,
    pub witness: String,
}

impl CheckLine {
    pub fn new(pass: bool, check: impl Into<String>, witness: impl Into<String>) -> CheckLine {
        CheckLine {
            pass,
            check: check.into(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {}", self.check, self.witness)
    }
}

/// Everything [`verify_group`] learned about one group.
#[derive(Debug, Clone)]
pub struct GroupReport {
    pub group: String,
    pub order: usize,
    pub lattice_size: usize,
    pub classes: usize,
    pub maximal_boolean: usize,
    pub oracle_length: Option<usize>,
    pub lattice_length: Option<DerivedLength>,
    pub sphere: bool,
    pub config: String,
    pub lines: Vec<CheckLine>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn fmt_set(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn fmt_family(f: &BTreeSet<Vec<usize>>) -> String {
    f.iter().map(|s| fmt_set(s)).collect::<Vec<_>>().join(";")
}

/// The subrack lattice of `g` with a shuffled abstract copy and the
/// translation between group elements and atom positions of the copy.
pub struct GroupLattice {
    pub rack: Rack,
    pub lattice: SubrackLattice,
    pub abs: AbstractLattice,
    /// Group element → atom position in `abs`.
    pub atom_of: Vec<usize>,
    /// Atom position in `abs` → group element.
    pub element_of: Vec<usize>,
}

impl GroupLattice {
    pub fn new(g: &FiniteGroup, config: &Config) -> Result<GroupLattice> {
        let rack = Rack::group_rack(g);
        let lattice = SubrackLattice::enumerate(&rack, config)?;
        let (abs, map) = lattice.to_abstract(Some(config.seed));
        let atom_of = lattice.atom_positions(&abs, &map);
        let mut element_of = vec![0; atom_of.len()];
        for (e, &k) in atom_of.iter().enumerate() {
            element_of[k] = e;
        }
        Ok(GroupLattice {
            rack,
            lattice,
            abs,
            atom_of,
            element_of,
        })
    }

    pub fn elements(&self, atoms: Bits) -> Vec<usize> {
        sorted(atoms.iter().map(|k| self.element_of[k]).collect())
    }

    pub fn atoms(&self, elements: &[usize]) -> Bits {
        elements.iter().map(|&e| self.atom_of[e]).collect()
    }
}

/// Checks the coset-join description for one normal subgroup: every coset
/// is a subrack, and for every set `S` of cosets and every choice of one
/// representative per coset in `S`, the join of `S` equals the union of the
/// cosets meeting the subrack generated by the representatives.
pub fn check_coset_joins(g: &FiniteGroup, rack: &Rack, normal: &[usize], config: &Config) -> Result<CheckLine> {
    let cosets = coset_partition_of(g, normal)?;
    let label = format!("coset-join N{}", fmt_set(normal));
    if !cosets.all_closed() {
        let bad = cosets.closed.iter().position(|&c| !c).unwrap();
        return Ok(CheckLine::new(false, label, format!("coset {} is not a subrack", fmt_set(&cosets.parts[bad]))));
    }
    let parts: Vec<Bits> = cosets.parts.iter().map(|p| p.iter().copied().collect()).collect();
    let radix: Vec<u64> = cosets.parts.iter().map(|p| p.len() as u64 + 1).collect();
    let out = tuples::scan(&radix, config, normal.len() as u64, |digits| {
        let mut union = Bits::EMPTY;
        let mut reps = Vec::new();
        for (i, &d) in digits.iter().enumerate() {
            if d > 0 {
                union = union.union(parts[i]);
                reps.push(cosets.parts[i][d as usize - 1]);
            }
        }
        let joined = rack.closure(union).to_vec();
        let predicted = join_of_cosets(g, &cosets, &reps);
        (joined != predicted).then(|| format!("reps={} join={} predicted={}", fmt_set(&reps), fmt_set(&joined), fmt_set(&predicted)))
    });
    let mode = if out.exhaustive { "exhaustive" } else { "sampled" };
    Ok(match out.failure {
        None => CheckLine::new(
            true,
            label,
            format!("cosets={} closed=all tuples={} {mode}", cosets.parts.len(), out.tuples),
        ),
        Some(w) => CheckLine::new(false, label, w),
    })
}

/// Runs the full pipeline on `g`: enumeration, coatoms against classes,
/// maximal Boolean elements, maximal normal abelian elements, coset joins,
/// hypothetical coset partitions, quotient lattices, derived length and the
/// sphere check.
pub fn verify_group(g: &FiniteGroup, config: &Config) -> Result<GroupReport> {
    let name = g.name().to_string();
    let mut lines = Vec::new();
    let gl = GroupLattice::new(g, config)?;
    let l = &gl.lattice;
    let abs = &gl.abs;

    // enumeration: both drivers, plus a subset scan for small groups
    let nc = SubrackLattice::enumerate_with(&gl.rack, config, Strategy::NextClosure)?;
    let mut witness = format!("size={} covers={} nextclosure={}", l.len(), l.cover_count(), agree(nc.elements() == l.elements()));
    let mut ok = nc.elements() == l.elements();
    if g.order() <= BRUTE_FORCE_ORDER {
        let mut brute = closed_sets_brute_force(&gl.rack);
        brute.sort_by(Bits::canonical_cmp);
        ok &= brute == l.elements();
        witness.push_str(&format!(" subset-scan={}", agree(brute == l.elements())));
    }
    lines.push(CheckLine::new(ok, format!("{name}/lattice"), witness));

    // coatoms are complements of classes
    let classes = g.conjugacy_classes();
    let class_sets: BTreeSet<Vec<usize>> = classes.classes.iter().map(|c| sorted(c.clone())).collect();
    let all = Bits::full(g.order());
    let complements: BTreeSet<Vec<usize>> = l
        .coatoms()
        .iter()
        .map(|&c| all.minus(l.members(c as usize)).to_vec())
        .collect();
    let ok = l.coatoms().len() == classes.len() && complements == class_sets;
    lines.push(CheckLine::new(
        ok,
        format!("{name}/coatoms"),
        format!("coatoms={} classes={}", l.coatoms().len(), classes.len()),
    ));

    // recovered classes
    let ctx = LatticeContext::new(abs)?;
    let recovered: BTreeSet<Vec<usize>> = ctx.classes.blocks.iter().map(|&b| gl.elements(b)).collect();
    lines.push(CheckLine::new(
        recovered == class_sets,
        format!("{name}/classes"),
        format!("sizes={:?}", ctx.classes.sizes()),
    ));

    // maximal Boolean elements against maximal abelian subgroups
    let boolean = maximal_boolean_elements(abs)?;
    let lattice_side: BTreeSet<Vec<usize>> = boolean.iter().map(|&x| gl.elements(abs.support(x))).collect();
    let oracle: BTreeSet<Vec<usize>> = g.maximal_abelian_subgroups(config.subgroup_cap)?.into_iter().map(sorted).collect();
    lines.push(CheckLine::new(
        lattice_side == oracle,
        format!("{name}/maximal-boolean"),
        if lattice_side == oracle {
            format!("count={}", oracle.len())
        } else {
            format!("lattice={} oracle={}", fmt_family(&lattice_side), fmt_family(&oracle))
        },
    ));

    // maximal normal abelian elements
    let normals = max_normal_abelian(abs, &ctx.classes)?;
    let lattice_side: BTreeSet<Vec<usize>> = normals.iter().map(|&x| gl.elements(abs.support(x))).collect();
    let oracle: BTreeSet<Vec<usize>> = g
        .maximal_normal_abelian_subgroups(config.subgroup_cap)?
        .into_iter()
        .map(sorted)
        .collect();
    lines.push(CheckLine::new(
        lattice_side == oracle,
        format!("{name}/max-normal-abelian"),
        format!("lattice={} oracle={}", fmt_family(&lattice_side), fmt_family(&oracle)),
    ));

    // coset joins over every normal subgroup
    for n in g.normal_subgroups() {
        let mut line = check_coset_joins(g, &gl.rack, &n, config)?;
        line.check = format!("{name}/{}", line.check);
        lines.push(line);
    }

    // hypothetical coset partitions and quotient lattices
    for &x in &normals {
        let n = gl.elements(abs.support(x));
        let tag = format!("{name}/N{}", fmt_set(&n));
        let cosets = g.quotient(&n)?;
        let true_parts: Vec<Bits> = cosets.cosets.iter().map(|c| gl.atoms(c)).collect();
        let report = is_hypothetical_coset_partition(&ctx, &true_parts, config);
        lines.push(CheckLine::new(
            report.passed(),
            format!("{tag}/coset-partition"),
            condition_witness(&report),
        ));
        let found = match find_coset_partition(&ctx, x, config) {
            Ok(c) => c,
            Err(e) => {
                lines.push(CheckLine::new(false, format!("{tag}/quotient"), format!("search-failed:{e}")));
                continue;
            }
        };
        let j = match join_poset(&ctx, &found.parts, config) {
            Ok(j) => j,
            Err(e) => {
                lines.push(CheckLine::new(false, format!("{tag}/quotient"), format!("join-poset:{e}")));
                continue;
            }
        };
        let q = GroupLattice::new(&cosets.group, config)?;
        let iso = are_isomorphic(&j.lattice, &q.abs, config.iso_budget);
        let (ok, witness) = match iso {
            Ok(Some(map)) => {
                let verified = is_cover_isomorphism(&j.lattice, &q.abs, &map)
                    && (j.lattice.len() > config.lub_exhaustive_cap || is_order_isomorphism(&j.lattice, &q.abs, &map));
                (verified, format!("parts={} size={} map-verified={}", found.parts.len(), j.lattice.len(), agree(verified)))
            }
            Ok(None) => (false, format!("parts={} size={} quotient-size={} not-isomorphic", found.parts.len(), j.lattice.len(), q.abs.len())),
            Err(e) => (false, format!("isomorphism:{e}")),
        };
        lines.push(CheckLine::new(ok, format!("{tag}/quotient"), witness));
    }

    // derived length from two differently labelled copies
    let oracle_length = g.derived_series().length;
    let solver = DerivedLengthSolver::new(config);
    let shuffled = solver.derive(abs)?.length;
    let plain = DerivedLengthSolver::new(config).derive(&l.to_abstract(None).0)?.length;
    let expected = oracle_length.map_or(DerivedLength::NotSolvable, DerivedLength::Solvable);
    lines.push(CheckLine::new(
        shuffled == expected && plain == expected,
        format!("{name}/derived-length"),
        format!("lattice={shuffled} relabelled={plain} oracle={expected}"),
    ));

    // sphere check
    let sphere = sphere_check(abs, classes.len(), config.chain_cap);
    let chains = sphere.chains.as_ref().map_or("over-cap".to_string(), |c| c.to_string());
    lines.push(CheckLine::new(
        sphere.passed(),
        format!("{name}/sphere"),
        format!("mu={} expected={} chains={chains}", sphere.mobius, sphere.expected),
    ));

    Ok(GroupReport {
        group: name,
        order: g.order(),
        lattice_size: l.len(),
        classes: classes.len(),
        maximal_boolean: boolean.len(),
        oracle_length,
        lattice_length: Some(shuffled),
        sphere: sphere.passed(),
        config: config.summary(),
        lines,
    })
}

fn agree(b: bool) -> &'static str {
    if b {
        "agree"
    } else {
        "differ"
    }
}

fn condition_witness(r: &crate::reconstruct::ConditionReport) -> String {
    let failures: Vec<String> = [("partition", &r.partition), ("C1", &r.c1), ("C2", &r.c2), ("C3", &r.c3)]
        .iter()
        .filter_map(|(n, w)| w.as_ref().map(|w| format!("{n}:{w}")))
        .collect();
    let mode = if r.exhaustive { "exhaustive" } else { "sampled" };
    if failures.is_empty() {
        format!("C1 C2 C3 tuples={} {mode}", r.tuples)
    } else {
        failures.join(" ")
    }
}

/// One group of the pair scan.
#[derive(Debug, Clone)]
pub struct ScanGroup {
    pub name: String,
    pub invariants: GroupInvariants,
    pub lattice_size: usize,
    pub lattice_length: DerivedLength,
}

/// One pair of groups with isomorphic subrack lattices.
#[derive(Debug, Clone)]
pub struct ScanPair {
    pub left: usize,
    pub right: usize,
    /// Order isomorphism from the left lattice to the right one.
    pub map: Vec<usize>,
    pub line: CheckLine,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub seed: u64,
    pub config: String,
    pub groups: Vec<ScanGroup>,
    pub pairs: Vec<ScanPair>,
    pub lines: Vec<CheckLine>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    /// Report text: a `#` header with the configuration, then one line per check.
    pub fn render(&self) -> String {
        let mut s = format!("# pair-scan {}\n", self.config);
        for l in &self.lines {
            s.push_str(&l.to_string());
            s.push('\n');
        }
        s
    }
}

fn flag(b: bool) -> u8 {
    b as u8
}

/// Compares every pair of catalog groups of order at most `max_order` whose
/// subrack lattices are isomorphic. Isomorphic lattices must agree on being
/// abelian, nilpotent, solvable and simple and on derived length, both by
/// the group oracles and by the lattice-only computation. Agreement of the
/// nilpotency class is reported but never fails a pair.
pub fn pairs_scan(max_order: usize, config: &Config) -> Result<ScanReport> {
    let groups: Vec<FiniteGroup> = catalog::groups(max_order);
    let built: Vec<(ScanGroup, AbstractLattice)> = groups
        .par_iter()
        .map(|g| -> Result<(ScanGroup, AbstractLattice)> {
            let gl = GroupLattice::new(g, config)?;
            let length = DerivedLengthSolver::new(config).derive(&gl.abs)?.length;
            Ok((
                ScanGroup {
                    name: g.name().to_string(),
                    invariants: g.invariants(),
                    lattice_size: gl.lattice.len(),
                    lattice_length: length,
                },
                gl.abs,
            ))
        })
        .collect::<Result<_>>()?;

    let candidates: Vec<(usize, usize)> = (0..built.len())
        .flat_map(|i| (i + 1..built.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let (a, b) = (&built[i].1, &built[j].1);
            a.len() == b.len() && a.cover_count() == b.cover_count() && a.atoms().len() == b.atoms().len()
        })
        .collect();
    let results: Vec<Option<ScanPair>> = candidates
        .par_iter()
        .map(|&(i, j)| {
            let (ga, la) = (&built[i].0, &built[i].1);
            let (gb, lb) = (&built[j].0, &built[j].1);
            let label = format!("pair {}~{}", ga.name, gb.name);
            match are_isomorphic(la, lb, config.iso_budget) {
                Ok(None) => None,
                Err(e) => Some(ScanPair {
                    left: i,
                    right: j,
                    map: Vec::new(),
                    line: CheckLine::new(false, label, format!("isomorphism:{e}")),
                }),
                Ok(Some(map)) => {
                    let (a, b) = (&ga.invariants, &gb.invariants);
                    let verified = is_cover_isomorphism(la, lb, &map);
                    let same = a.is_abelian == b.is_abelian
                        && a.is_nilpotent() == b.is_nilpotent()
                        && a.is_solvable == b.is_solvable
                        && a.is_simple == b.is_simple
                        && a.derived_length == b.derived_length
                        && ga.lattice_length == gb.lattice_length;
                    let class = |c: Option<usize>| c.map_or("-".to_string(), |c| c.to_string());
                    let witness = format!(
                        "abelian={}/{} nilpotent={}/{} solvable={}/{} simple={}/{} dl={}/{} lattice-dl={}/{} nilclass={}/{}(info) map-verified={}",
                        flag(a.is_abelian),
                        flag(b.is_abelian),
                        flag(a.is_nilpotent()),
                        flag(b.is_nilpotent()),
                        flag(a.is_solvable),
                        flag(b.is_solvable),
                        flag(a.is_simple),
                        flag(b.is_simple),
                        class(a.derived_length),
                        class(b.derived_length),
                        ga.lattice_length,
                        gb.lattice_length,
                        class(a.nilpotency_class),
                        class(b.nilpotency_class),
                        agree(verified),
                    );
                    Some(ScanPair {
                        left: i,
                        right: j,
                        map,
                        line: CheckLine::new(same && verified, label, witness),
                    })
                }
            }
        })
        .collect();
    let pairs: Vec<ScanPair> = results.into_iter().flatten().collect();

    let mut lines: Vec<CheckLine> = built
        .iter()
        .map(|(g, _)| {
            let expected = g.invariants.derived_length.map_or(DerivedLength::NotSolvable, DerivedLength::Solvable);
            CheckLine::new(
                g.lattice_length == expected,
                format!("group {}", g.name),
                format!("size={} lattice-dl={} oracle-dl={expected}", g.lattice_size, g.lattice_length),
            )
        })
        .collect();
    lines.extend(pairs.iter().map(|p| p.line.clone()));
    let nonabelian_free: Vec<&ScanPair> = pairs.iter().collect();
    let example = nonabelian_free
        .first()
        .map_or("none".to_string(), |p| format!("{}~{}", built[p.left].0.name, built[p.right].0.name));
    lines.push(CheckLine::new(
        !pairs.is_empty(),
        "pairs-found",
        format!("groups={} candidates={} isomorphic={} example={example}", built.len(), candidates.len(), pairs.len()),
    ));
    Ok(ScanReport {
        seed: config.seed,
        config: config.summary(),
        groups: built.into_iter().map(|(g, _)| g).collect(),
        pairs,
        lines,
    })
}

/// Report text for one group: a `#` header with the configuration, then one
/// line per check.
pub fn render_group(r: &GroupReport) -> String {
    let mut s = format!("# verify {} {}\n", r.group, r.config);
    for l in &r.lines {
        s.push_str(&l.to_string());
        s.push('\n');
    }
    s
}
