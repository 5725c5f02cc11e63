//! `rackle`: subrack lattices of finite groups from the command line.
//!
//! Exit status is 0 when every reported check passes, 1 when some check
//! fails and 2 when an input cannot be read or lies outside the caps.

mod input;

use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use rackle::formats::write_lattice;
use rackle::iso::{are_isomorphic, is_cover_isomorphism, is_order_isomorphism};
use rackle::reconstruct::{max_normal_abelian, maximal_boolean_elements, recover_classes, DerivedLength, DerivedLengthSolver};
use rackle::topology::{mobius_bottom_top, sphere_check};
use rackle::verify::{pairs_scan, render_group, verify_group, CheckLine};
use rackle::{catalog, Config, Rack, SubrackLattice};

#[derive(Parser)]
#[command(name = "rackle", version, about = "Subrack lattices of finite-group conjugation racks")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

/// Caps, budgets and the seed; every field overrides the library default.
#[derive(Args)]
struct Caps {
    /// Seed for relabelling and sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Check every representative tuple regardless of the tuple budget.
    #[arg(long, global = true)]
    exhaustive: bool,
    /// Tuple count up to which join checks are exhaustive.
    #[arg(long, global = true, visible_alias = "budget")]
    tuple_budget: Option<u64>,
    /// Samples drawn when a tuple space exceeds the budget.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Largest rack ground set (at most 64).
    #[arg(long, global = true)]
    ground_cap: Option<usize>,
    /// Largest number of closed sets kept by an enumeration.
    #[arg(long, global = true)]
    lattice_cap: Option<usize>,
    /// Largest group whose subgroups are enumerated.
    #[arg(long, global = true)]
    subgroup_cap: Option<usize>,
    /// Largest group built from permutation generators.
    #[arg(long, global = true)]
    generation_cap: Option<usize>,
    /// Backtrack nodes allowed to one isomorphism search.
    #[arg(long, global = true)]
    iso_budget: Option<u64>,
    /// Largest partition whose join poset is built.
    #[arg(long, global = true)]
    join_poset_cap: Option<usize>,
    /// Largest proper part for explicit chain counting.
    #[arg(long, global = true)]
    chain_cap: Option<usize>,
    /// Worker threads; `RACKLE_THREADS` is an upper bound.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

impl Caps {
    fn config(&self) -> Config {
        let d = Config::default();
        Config {
            seed: self.seed.unwrap_or(d.seed),
            exhaustive: self.exhaustive,
            tuple_budget: self.tuple_budget.unwrap_or(d.tuple_budget),
            samples: self.samples.unwrap_or(d.samples),
            ground_cap: self.ground_cap.unwrap_or(d.ground_cap),
            lattice_cap: self.lattice_cap.unwrap_or(d.lattice_cap),
            subgroup_cap: self.subgroup_cap.unwrap_or(d.subgroup_cap),
            generation_cap: self.generation_cap.unwrap_or(d.generation_cap),
            iso_budget: self.iso_budget.unwrap_or(d.iso_budget),
            join_poset_cap: self.join_poset_cap.unwrap_or(d.join_poset_cap),
            chain_cap: self.chain_cap.unwrap_or(d.chain_cap),
            threads: self.threads.unwrap_or(d.threads),
            ..d
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Group-level invariants of a `.cay`/`.pgen` file or a catalog name.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Subrack-lattice construction.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Lattice-level invariants of a `.lat` file.
    Invariants {
        #[arg(long)]
        lattice: String,
    },
    /// Derived length from the subrack lattice.
    Derive {
        #[arg(long)]
        group: String,
        /// Skip the comparison with the group-side derived series.
        #[arg(long)]
        lattice_only: bool,
    },
    /// Decides whether two `.lat` files describe isomorphic lattices.
    Compare { a: String, b: String },
    /// Möbius invariant of the subrack lattice against the class count.
    Topology {
        #[arg(long)]
        group: String,
    },
    /// Full verification over the catalog plus the pair scan.
    Verify {
        /// Largest catalog order included.
        #[arg(long, default_value_t = 12)]
        order_max: usize,
        /// Verify one group only and skip the pair scan.
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    Info { group: String },
}

#[derive(Subcommand)]
enum LatticeCommand {
    Build {
        /// Group or `.rk` rack file.
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        out: String,
        /// Worker threads for this enumeration.
        #[arg(long)]
        par: Option<usize>,
    },
}

fn init_threads(requested: Option<usize>) -> Result<()> {
    let bound = match std::env::var("RACKLE_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .with_context(|| format!("RACKLE_THREADS must be a count, found `{v}`"))?,
        ),
        Err(_) => None,
    };
    let n = match (requested.filter(|&n| n > 0), bound.filter(|&n| n > 0)) {
        (Some(r), Some(b)) => r.min(b),
        (Some(r), None) => r,
        (None, Some(b)) => b,
        (None, None) => return Ok(()),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn joined<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn group_info(arg: &str, config: &Config) -> Result<bool> {
    let g = input::group(arg, config)?;
    let inv = g.invariants();
    let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
    println!("name {}", g.name());
    println!("order {}", inv.order);
    println!("abelian {}", yes(inv.is_abelian));
    println!("nilpotency-class {}", opt(inv.nilpotency_class));
    println!("solvable {}", yes(inv.is_solvable));
    println!("derived-length {}", opt(inv.derived_length));
    println!("simple {}", yes(inv.is_simple));
    println!("center {}", g.center().len());
    let classes = g.conjugacy_classes();
    println!("classes {}", classes.len());
    println!("class-sizes {}", joined(classes.sizes()));
    Ok(true)
}

fn lattice_build(arg: &str, out: &str, config: &Config) -> Result<bool> {
    let rack = input::rack(arg, config)?;
    let l = SubrackLattice::enumerate(&rack, config)?;
    fs::write(out, write_lattice(&l)).with_context(|| format!("cannot write {out}"))?;
    println!("elements {}", l.len());
    println!("covers {}", l.cover_count());
    println!("height {}", l.height());
    println!("atoms {}", l.atoms().len());
    println!("coatoms {}", l.coatoms().len());
    Ok(true)
}

fn invariants(arg: &str, config: &Config) -> Result<bool> {
    let file = input::lattice(arg)?;
    let l = &file.lattice;
    println!("elements {}", l.len());
    println!("covers {}", l.cover_count());
    println!("height {}", l.height());
    println!("atoms {}", l.atoms().len());
    println!("coatoms {}", l.coatoms().len());
    println!("atomistic {}", yes(l.is_atomistic()));
    println!("mobius {}", mobius_bottom_top(l));
    let classes = match recover_classes(l) {
        Ok(c) => c,
        Err(e) => {
            println!("group-shaped no ({e})");
            return Ok(true);
        }
    };
    let mut sizes = classes.sizes();
    sizes.sort_unstable();
    println!("classes {}", classes.len());
    println!("class-sizes {}", joined(sizes));
    let boolean = maximal_boolean_elements(l)?;
    let mut bsizes: Vec<usize> = boolean.iter().map(|&x| l.support(x).len()).collect();
    bsizes.sort_unstable();
    println!("maximal-boolean {}", boolean.len());
    println!("maximal-boolean-sizes {}", joined(bsizes));
    let normals = max_normal_abelian(l, &classes)?;
    let mut nsizes: Vec<usize> = normals.iter().map(|&x| l.support(x).len()).collect();
    nsizes.sort_unstable();
    println!("max-normal-abelian-sizes {}", joined(nsizes));
    match DerivedLengthSolver::new(config).derive(l) {
        Ok(d) => println!("derived-length {}", d.length),
        Err(e) => println!("derived-length - ({e})"),
    }
    Ok(true)
}

fn derive(arg: &str, lattice_only: bool, config: &Config) -> Result<bool> {
    let g = input::group(arg, config)?;
    let l = SubrackLattice::enumerate(&Rack::group_rack(&g), config)?;
    let (abs, _) = l.to_abstract(Some(config.seed));
    let d = DerivedLengthSolver::new(config).derive(&abs)?;
    println!("# derive {} {}", g.name(), config.summary());
    println!("lattice-elements {}", abs.len());
    for (k, s) in d.steps.iter().enumerate() {
        println!(
            "step {} lattice={} atoms={} normal-atoms={} parts={}",
            k + 1,
            s.lattice_size,
            s.atoms,
            s.normal_atoms,
            s.parts
        );
    }
    println!("lattice-derived-length {}", d.length);
    if lattice_only {
        return Ok(true);
    }
    let oracle = g.derived_series().length.map_or(DerivedLength::NotSolvable, DerivedLength::Solvable);
    let line = CheckLine::new(d.length == oracle, "derived-length", format!("lattice={} group={oracle}", d.length));
    println!("{line}");
    Ok(line.pass)
}

fn compare(a: &str, b: &str, config: &Config) -> Result<bool> {
    let (fa, fb) = (input::lattice(a)?, input::lattice(b)?);
    let (la, lb) = (&fa.lattice, &fb.lattice);
    let line = match are_isomorphic(la, lb, config.iso_budget)? {
        Some(map) => {
            let verified = is_cover_isomorphism(la, lb, &map)
                && (la.len() > config.lub_exhaustive_cap || is_order_isomorphism(la, lb, &map));
            let image = joined(map.iter().take(16));
            let more = if map.len() > 16 { " ..." } else { "" };
            CheckLine::new(verified, "isomorphic", format!("elements={} map={image}{more}", la.len()))
        }
        None => CheckLine::new(
            false,
            "isomorphic",
            format!("elements={}/{} covers={}/{}", la.len(), lb.len(), la.cover_count(), lb.cover_count()),
        ),
    };
    println!("{line}");
    Ok(line.pass)
}

fn topology(arg: &str, config: &Config) -> Result<bool> {
    let g = input::group(arg, config)?;
    let l = SubrackLattice::enumerate(&Rack::group_rack(&g), config)?;
    let (abs, _) = l.to_abstract(Some(config.seed));
    let c = g.conjugacy_classes().len();
    let s = sphere_check(&abs, c, config.chain_cap);
    let chains = s.chains.as_ref().map_or("over-cap".to_string(), |x| x.to_string());
    let line = CheckLine::new(
        s.passed(),
        "sphere",
        format!("group={} classes={c} mu={} expected={} chains={chains}", g.name(), s.mobius, s.expected),
    );
    println!("{line}");
    Ok(line.pass)
}

fn verify(order_max: usize, group: Option<&str>, config: &Config) -> Result<bool> {
    let groups = match group {
        Some(arg) => vec![input::group(arg, config)?],
        None => catalog::groups(order_max),
    };
    if groups.is_empty() {
        bail!("no catalog group has order at most {order_max}");
    }
    println!("# verify order-max={order_max} {}", config.summary());
    let reports: Vec<_> = groups
        .par_iter()
        .map(|g| verify_group(g, config))
        .collect::<rackle::Result<_>>()?;
    let mut pass = true;
    for r in &reports {
        pass &= r.passed();
        // the header line of each group report repeats the config
        for line in render_group(r).lines().skip(1) {
            println!("{line}");
        }
    }
    if group.is_none() {
        let scan = pairs_scan(order_max, config)?;
        pass &= scan.passed();
        for l in &scan.lines {
            println!("{l}");
        }
    }
    Ok(pass)
}

fn run(cli: Cli) -> Result<bool> {
    let config = cli.caps.config();
    let par = match &cli.command {
        Command::Lattice {
            command: LatticeCommand::Build { par, .. },
        } => par.or(cli.caps.threads),
        _ => cli.caps.threads,
    };
    init_threads(par)?;
    match &cli.command {
        Command::Group {
            command: GroupCommand::Info { group },
        } => group_info(group, &config),
        Command::Lattice {
            command: LatticeCommand::Build { input, out, .. },
        } => lattice_build(input, out, &config),
        Command::Invariants { lattice } => invariants(lattice, &config),
        Command::Derive { group, lattice_only } => derive(group, *lattice_only, &config),
        Command::Compare { a, b } => compare(a, b, &config),
        Command::Topology { group } => topology(group, &config),
        Command::Verify { order_max, group } => verify(*order_max, group.as_deref(), &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
