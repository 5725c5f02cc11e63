//! Hypothetical coset partitions of the atom set and their join posets.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::bits::Bits;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lattice::{covers_of_closure_system, invert};
use crate::poset::AbstractLattice;
use crate::rack::Rack;
use crate::tuples;

use super::classes::{recover_classes, AtomClassPartition};

/// How joins of atom sets are evaluated.
#[derive(Debug, Clone)]
enum JoinEvaluator<'a> {
    /// Through the meet-irreducibles of the lattice.
    Lattice,
    /// As rack closures, with atom position `k` standing for point `point_of_atom[k]`.
    Rack {
        rack: &'a Rack,
        point_of_atom: Vec<usize>,
        atom_of_point: Vec<usize>,
    },
}

/// A lattice together with its recovered classes and a join evaluator.
#[derive(Debug, Clone)]
pub struct LatticeContext<'a> {
    pub lattice: &'a AbstractLattice,
    pub classes: AtomClassPartition,
    join: JoinEvaluator<'a>,
}

impl<'a> LatticeContext<'a> {
    pub fn new(lattice: &'a AbstractLattice) -> Result<LatticeContext<'a>> {
        Ok(LatticeContext {
            lattice,
            classes: recover_classes(lattice)?,
            join: JoinEvaluator::Lattice,
        })
    }

    /// Evaluates joins as closures in `rack`, atom position `k` being point
    /// `point_of_atom[k]`.
    pub fn with_rack(lattice: &'a AbstractLattice, rack: &'a Rack, point_of_atom: Vec<usize>) -> Result<LatticeContext<'a>> {
        if point_of_atom.len() != lattice.atoms().len() || point_of_atom.len() != rack.size() {
            return Err(Error::BadIndex {
                index: point_of_atom.len(),
                size: rack.size(),
            });
        }
        let mut atom_of_point = vec![usize::MAX; rack.size()];
        for (k, &p) in point_of_atom.iter().enumerate() {
            if p >= rack.size() || atom_of_point[p] != usize::MAX {
                return Err(Error::BadIndex {
                    index: p,
                    size: rack.size(),
                });
            }
            atom_of_point[p] = k;
        }
        Ok(LatticeContext {
            lattice,
            classes: recover_classes(lattice)?,
            join: JoinEvaluator::Rack {
                rack,
                point_of_atom,
                atom_of_point,
            },
        })
    }

    /// Atom support of the join of the atoms in `s`.
    pub fn close(&self, s: Bits) -> Bits {
        match &self.join {
            JoinEvaluator::Lattice => self.lattice.close_atoms(s),
            JoinEvaluator::Rack {
                rack,
                point_of_atom,
                atom_of_point,
            } => {
                let pts: Bits = s.iter().map(|k| point_of_atom[k]).collect();
                rack.closure(pts).iter().map(|p| atom_of_point[p]).collect()
            }
        }
    }

    pub fn all_atoms(&self) -> Bits {
        self.lattice.support(self.lattice.top())
    }
}

/// A partition of the atoms passing (C1)–(C3), distinguished part first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypotheticalCosetPartition {
    pub parts: Vec<Bits>,
    pub distinguished: usize,
}

/// Outcome of the (C1)–(C3) checks. `None` means the condition holds;
/// otherwise the string is a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub partition: Option<String>,
    pub c1: Option<String>,
    pub c2: Option<String>,
    pub c3: Option<String>,
    /// Representative tuples examined for (C3).
    pub tuples: u64,
    pub exhaustive: bool,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.partition.is_none() && self.c1.is_none() && self.c2.is_none() && self.c3.is_none()
    }

    /// `PASS|FAIL <check> <witness>` lines.
    pub fn lines(&self, prefix: &str) -> Vec<String> {
        let line = |name: &str, r: &Option<String>, ok: &str| match r {
            None => format!("PASS {prefix}{name} {ok}"),
            Some(w) => format!("FAIL {prefix}{name} {w}"),
        };
        let mode = if self.exhaustive { "exhaustive" } else { "sampled" };
        vec![
            line("partition", &self.partition, "disjoint-cover"),
            line("C1", &self.c1, "equal-sizes"),
            line("C2", &self.c2, "class-union-with-central-atom"),
            line("C3", &self.c3, &format!("tuples={} {mode}", self.tuples)),
        ]
    }
}

pub(crate) fn fmt_bits(b: Bits) -> String {
    let mut s = String::from("{");
    for (i, x) in b.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
    s.push('}');
    s
}

fn partition_problem(ctx: &LatticeContext, parts: &[Bits]) -> Option<String> {
    let mut seen = Bits::EMPTY;
    for (i, &p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Some(format!("part {i} is empty"));
        }
        if !p.is_disjoint(seen) {
            return Some(format!("part {i} overlaps an earlier part"));
        }
        seen = seen.union(p);
    }
    let all = ctx.all_atoms();
    if seen != all {
        return Some(format!("parts cover {} of {} atoms", seen.len(), all.len()));
    }
    None
}

/// Checks (C1), (C2) and (C3) for `parts`, the first part distinguished.
///
/// (C3) runs over every nonempty index set `I` and every choice of one
/// representative per part in `I`. That space has `∏ (|C_i| + 1) − 1`
/// members; it is scanned in full when at most `config.tuple_budget` (or when
/// `config.exhaustive`), otherwise `config.samples` tuples are drawn from a
/// generator seeded with `config.seed`.
///
/// `I = ∅` is left out: its join is the bottom and the condition is vacuous.
pub fn is_hypothetical_coset_partition(ctx: &LatticeContext, parts: &[Bits], config: &Config) -> ConditionReport {
    let mut report = ConditionReport {
        partition: partition_problem(ctx, parts),
        c1: None,
        c2: None,
        c3: None,
        tuples: 0,
        exhaustive: true,
    };
    if report.partition.is_some() {
        let skipped = Some("not-a-partition".to_string());
        report.c1 = skipped.clone();
        report.c2 = skipped.clone();
        report.c3 = skipped;
        return report;
    }
    let size = parts[0].len();
    if let Some(i) = parts.iter().position(|p| p.len() != size) {
        report.c1 = Some(format!("|C{}|={} |C0|={size}", i, parts[i].len()));
    }
    let c0 = parts[0];
    if !ctx.classes.is_union_of_blocks(c0) {
        report.c2 = Some(format!("C0={} is not a union of classes", fmt_bits(c0)));
    } else if ctx.classes.central_atoms().is_disjoint(c0) {
        report.c2 = Some(format!("C0={} has no central atom", fmt_bits(c0)));
    }
    let (c3, tuples, exhaustive) = check_c3(ctx, parts, config);
    report.c3 = c3;
    report.tuples = tuples;
    report.exhaustive = exhaustive;
    report
}

fn check_c3(ctx: &LatticeContext, parts: &[Bits], config: &Config) -> (Option<String>, u64, bool) {
    if parts.len() > 64 {
        return (Some(format!("{} parts exceed 64", parts.len())), 0, true);
    }
    let members: Vec<Vec<usize>> = parts.iter().map(|p| p.to_vec()).collect();
    let radix: Vec<u64> = members.iter().map(|m| m.len() as u64 + 1).collect();
    let joins: Mutex<HashMap<u64, Bits>> = Default::default();
    let join_of = |index_set: u64| -> Bits {
        if let Some(&j) = joins.lock().unwrap().get(&index_set) {
            return j;
        }
        let union = Bits(index_set).iter().fold(Bits::EMPTY, |acc, i| acc.union(parts[i]));
        let j = ctx.close(union);
        joins.lock().unwrap().insert(index_set, j);
        j
    };
    // digit 0: part not in I; digit d: representative d − 1
    let out = tuples::scan(&radix, config, parts[0].0, |digits| {
        let mut index_set = 0u64;
        let mut reps = Bits::EMPTY;
        for (i, &d) in digits.iter().enumerate() {
            if d > 0 {
                index_set |= 1 << i;
                reps.insert(members[i][d as usize - 1]);
            }
        }
        let generated = ctx.close(reps);
        let predicted = parts
            .iter()
            .filter(|p| !p.is_disjoint(generated))
            .fold(Bits::EMPTY, |acc, &p| acc.union(p));
        let joined = join_of(index_set);
        (joined != predicted).then(|| {
            format!(
                "I={} reps={} join={} predicted={}",
                fmt_bits(Bits(index_set)),
                fmt_bits(reps),
                fmt_bits(joined),
                fmt_bits(predicted)
            )
        })
    });
    (out.failure, out.tuples, out.exhaustive)
}

/// Searches for a hypothetical coset partition whose distinguished part is
/// the atom support of `normal`.
///
/// Parts are lattice elements with as many atoms as `normal`, disjoint from
/// it. The search fills the lowest uncovered atom first, in canonical order
/// of candidates, and rejects a choice as soon as the join of two chosen
/// parts cuts through a chosen part. Complete partitions must pass the full
/// (C1)–(C3) check. The number of search nodes is bounded by
/// `config.iso_budget`.
pub fn find_coset_partition(ctx: &LatticeContext, normal: usize, config: &Config) -> Result<HypotheticalCosetPartition> {
    let l = ctx.lattice;
    let s = l.support(normal);
    let all = ctx.all_atoms();
    let k = s.len();
    if k == 0 || !all.len().is_multiple_of(k) {
        return Err(Error::NoPartition);
    }
    let mut by_min: Vec<Vec<Bits>> = vec![Vec::new(); l.atoms().len()];
    for x in 0..l.len() {
        let sx = l.support(x);
        if sx.len() == k && sx.is_disjoint(s) {
            by_min[sx.min().unwrap()].push(sx);
        }
    }
    for c in &mut by_min {
        c.sort_by(Bits::canonical_cmp);
    }
    let mut search = PartitionSearch {
        ctx,
        config,
        all,
        by_min,
        chosen: vec![s],
        nodes: 0,
    };
    if search.dfs(s)? {
        Ok(HypotheticalCosetPartition {
            parts: search.chosen,
            distinguished: 0,
        })
    } else {
        Err(Error::NoPartition)
    }
}

struct PartitionSearch<'c, 'a> {
    ctx: &'c LatticeContext<'a>,
    config: &'c Config,
    all: Bits,
    by_min: Vec<Vec<Bits>>,
    chosen: Vec<Bits>,
    nodes: u64,
}

impl PartitionSearch<'_, '_> {
    fn compatible(&self, c: Bits) -> bool {
        self.chosen.iter().all(|&q| {
            let j = self.ctx.close(c.union(q));
            std::iter::once(c)
                .chain(self.chosen.iter().copied())
                .all(|r| r.is_subset(j) || r.is_disjoint(j))
        })
    }

    fn dfs(&mut self, covered: Bits) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.config.iso_budget {
            return Err(Error::Timeout(self.config.iso_budget));
        }
        if covered == self.all {
            return Ok(is_hypothetical_coset_partition(self.ctx, &self.chosen, self.config).passed());
        }
        let u = self.all.minus(covered).min().unwrap();
        for idx in 0..self.by_min[u].len() {
            let c = self.by_min[u][idx];
            if !c.is_disjoint(covered) || !self.compatible(c) {
                continue;
            }
            self.chosen.push(c);
            if self.dfs(covered.union(c))? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

/// The joins of all subsets of a partition, each recorded as the set of
/// parts it covers, with the empty set as adjoined bottom.
#[derive(Debug, Clone)]
pub struct JoinPoset {
    /// Part sets in canonical order; `elements[0]` is empty.
    pub elements: Vec<Bits>,
    /// Element `i` of the lattice is `elements[i]`; atom `k` is part `k`.
    pub lattice: AbstractLattice,
}

pub fn join_poset(ctx: &LatticeContext, parts: &[Bits], config: &Config) -> Result<JoinPoset> {
    let m = parts.len();
    if m > config.join_poset_cap || m > 30 {
        return Err(Error::TooLarge {
            what: "join poset index",
            size: m,
            cap: config.join_poset_cap.min(30),
        });
    }
    let table: Vec<Bits> = (0u64..1 << m)
        .into_par_iter()
        .map(|mask| {
            let union = Bits(mask).iter().fold(Bits::EMPTY, |acc, i| acc.union(parts[i]));
            let j = ctx.close(union);
            let covered: Bits = (0..m).filter(|&i| parts[i].is_subset(j)).collect();
            let rebuilt = covered.iter().fold(Bits::EMPTY, |acc, i| acc.union(parts[i]));
            if rebuilt == j {
                Ok(covered)
            } else {
                Err(Error::BadPartition(format!(
                    "join of parts {} is not a union of parts",
                    fmt_bits(Bits(mask))
                )))
            }
        })
        .collect::<Result<_>>()?;
    let mut elements: Vec<Bits> = table[1..].iter().copied().collect::<HashSet<Bits>>().into_iter().collect();
    elements.push(Bits::EMPTY);
    elements.sort_by(Bits::canonical_cmp);
    elements.dedup();
    let index: HashMap<Bits, u32> = elements.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
    let up = covers_of_closure_system(m, &elements, &index, |x, a| table[x.with(a).0 as usize]);
    let down = invert(&up);
    let lattice = AbstractLattice::from_adjacency(up, down)?;
    Ok(JoinPoset { elements, lattice })
}
