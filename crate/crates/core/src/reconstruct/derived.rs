//! Derived length from the lattice alone.
//!
//! For each maximal normal abelian element `N` the quotient lattice is the
//! join poset of a coset partition with distinguished part `N`; the derived
//! length is `1 +` the least derived length among these quotients. A lattice
//! whose maximal normal abelian elements are all single atoms has no
//! nontrivial normal abelian subgroup, hence is not solvable.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::iso::are_isomorphic;
use crate::poset::AbstractLattice;

use super::classes::max_normal_abelian;
use super::hypothetical::{find_coset_partition, join_poset, LatticeContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivedLength {
    Solvable(usize),
    NotSolvable,
}

impl DerivedLength {
    pub fn value(self) -> Option<usize> {
        match self {
            DerivedLength::Solvable(n) => Some(n),
            DerivedLength::NotSolvable => None,
        }
    }
}

impl fmt::Display for DerivedLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivedLength::Solvable(n) => write!(f, "{n}"),
            DerivedLength::NotSolvable => f.write_str("not-solvable"),
        }
    }
}

/// One quotient step along a shortest series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub lattice_size: usize,
    pub atoms: usize,
    /// Atoms of the chosen normal abelian element.
    pub normal_atoms: usize,
    /// Parts of the coset partition, i.e. atoms of the quotient.
    pub parts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub length: DerivedLength,
    /// Steps of a shortest series, first quotient first. Empty for length 0
    /// and for non-solvable lattices.
    pub steps: Vec<Step>,
}

type Fingerprint = (usize, usize, usize, Vec<(u32, u32, u32)>);

fn fingerprint(l: &AbstractLattice) -> Fingerprint {
    let mut profile: Vec<(u32, u32, u32)> = (0..l.len())
        .map(|x| (l.rank(x) as u32, l.upper_covers(x).len() as u32, l.lower_covers(x).len() as u32))
        .collect();
    profile.sort_unstable();
    (l.len(), l.cover_count(), l.atoms().len(), profile)
}

/// Recursive solver with a per-run memo keyed by isomorphism type.
pub struct DerivedLengthSolver<'c> {
    config: &'c Config,
    memo: Mutex<HashMap<Fingerprint, Vec<(AbstractLattice, Derivation)>>>,
}

impl<'c> DerivedLengthSolver<'c> {
    pub fn new(config: &'c Config) -> DerivedLengthSolver<'c> {
        DerivedLengthSolver {
            config,
            memo: Mutex::new(HashMap::new()),
        }
    }

    fn lookup(&self, key: &Fingerprint, l: &AbstractLattice) -> Option<Derivation> {
        let known: Vec<(AbstractLattice, Derivation)> = self.memo.lock().unwrap().get(key)?.clone();
        known
            .into_iter()
            .find(|(m, _)| matches!(are_isomorphic(m, l, self.config.iso_budget), Ok(Some(_))))
            .map(|(_, d)| d)
    }

    pub fn derive(&self, l: &AbstractLattice) -> Result<Derivation> {
        if l.len() == 2 {
            return Ok(Derivation {
                length: DerivedLength::Solvable(0),
                steps: Vec::new(),
            });
        }
        if l.len() < 2 {
            return Err(Error::NotGroupLattice("fewer than two elements".into()));
        }
        let key = fingerprint(l);
        if let Some(d) = self.lookup(&key, l) {
            return Ok(d);
        }
        let d = self.derive_uncached(l).map_err(|e| match e {
            Error::NoPartition => Error::NotGroupLattice("no hypothetical coset partition".into()),
            Error::MissingElement(s) => Error::NotGroupLattice(format!("no element with atoms {s:?}")),
            other => other,
        })?;
        self.memo.lock().unwrap().entry(key).or_default().push((l.clone(), d.clone()));
        Ok(d)
    }

    fn derive_uncached(&self, l: &AbstractLattice) -> Result<Derivation> {
        let ctx = LatticeContext::new(l)?;
        let normals = max_normal_abelian(l, &ctx.classes)?;
        if normals.iter().all(|&n| l.support(n).len() <= 1) {
            return Ok(Derivation {
                length: DerivedLength::NotSolvable,
                steps: Vec::new(),
            });
        }
        let branches: Vec<Result<(Step, Derivation)>> = normals
            .par_iter()
            .filter(|&&n| l.support(n).len() > 1)
            .map(|&n| {
                let c = find_coset_partition(&ctx, n, self.config)?;
                let j = join_poset(&ctx, &c.parts, self.config)?;
                let step = Step {
                    lattice_size: l.len(),
                    atoms: l.atoms().len(),
                    normal_atoms: l.support(n).len(),
                    parts: c.parts.len(),
                };
                Ok((step, self.derive(&j.lattice)?))
            })
            .collect();
        let mut best: Option<(Step, Derivation)> = None;
        for b in branches {
            let (step, d) = b?;
            match d.length {
                DerivedLength::NotSolvable => {
                    return Ok(Derivation {
                        length: DerivedLength::NotSolvable,
                        steps: Vec::new(),
                    })
                }
                DerivedLength::Solvable(k) => {
                    let better = match &best {
                        None => true,
                        Some((_, b)) => Some(k) < b.length.value(),
                    };
                    if better {
                        best = Some((step, d));
                    }
                }
            }
        }
        let (step, d) = best.expect("at least one normal element has several atoms");
        let mut steps = vec![step];
        steps.extend(d.steps);
        Ok(Derivation {
            length: DerivedLength::Solvable(d.length.value().unwrap() + 1),
            steps,
        })
    }
}

pub fn lattice_derived_length(l: &AbstractLattice, config: &Config) -> Result<DerivedLength> {
    Ok(DerivedLengthSolver::new(config).derive(l)?.length)
}
