//! Conjugacy classes, maximal abelian subgroups and maximal normal abelian
//! subgroups, read off an abstract lattice.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::poset::AbstractLattice;

/// Partition of the atoms into recovered conjugacy classes.
///
/// Block `j` is the set of atoms not below coatom `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomClassPartition {
    pub blocks: Vec<Bits>,
    /// Atom position → block index.
    pub block_of: Vec<usize>,
}

impl AtomClassPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Atoms forming a block on their own.
    pub fn central_atoms(&self) -> Bits {
        self.blocks.iter().filter(|b| b.len() == 1).fold(Bits::EMPTY, |acc, &b| acc.union(b))
    }

    /// Union of the blocks lying entirely inside `s`.
    pub fn blocks_within(&self, s: Bits) -> Bits {
        self.blocks
            .iter()
            .filter(|b| b.is_subset(s))
            .fold(Bits::EMPTY, |acc, &b| acc.union(b))
    }

    /// True when `s` is a union of blocks.
    pub fn is_union_of_blocks(&self, s: Bits) -> bool {
        self.blocks_within(s) == s
    }

    /// Block sizes in increasing order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        v.sort_unstable();
        v
    }
}

pub(crate) fn require_group_shape(l: &AbstractLattice) -> Result<()> {
    if !l.has_supports() {
        return Err(Error::NotGroupLattice(format!("{} atoms exceed the 64-atom limit", l.atoms().len())));
    }
    if !l.is_atomistic() {
        return Err(Error::NotGroupLattice("lattice is not atomistic".into()));
    }
    Ok(())
}

pub fn recover_classes(l: &AbstractLattice) -> Result<AtomClassPartition> {
    require_group_shape(l)?;
    let all = l.support(l.top());
    let blocks: Vec<Bits> = l.coatoms().iter().map(|&m| all.minus(l.support(m as usize))).collect();
    let mut block_of = vec![usize::MAX; l.atoms().len()];
    for (j, b) in blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(Error::NotGroupLattice(format!("coatom {} lies above every atom", l.coatoms()[j])));
        }
        for a in b.iter() {
            if block_of[a] != usize::MAX {
                return Err(Error::NotGroupLattice(format!(
                    "atom {a} is missed by coatoms {} and {}",
                    l.coatoms()[block_of[a]],
                    l.coatoms()[j]
                )));
            }
            block_of[a] = j;
        }
    }
    if let Some(a) = block_of.iter().position(|&b| b == usize::MAX) {
        return Err(Error::NotGroupLattice(format!("atom {a} lies below every coatom")));
    }
    Ok(AtomClassPartition { blocks, block_of })
}

/// Elements `x` with `[⊥, x]` Boolean and no Boolean upper cover, ordered by
/// atom support.
pub fn maximal_boolean_elements(l: &AbstractLattice) -> Result<Vec<usize>> {
    require_group_shape(l)?;
    let flag = l.boolean_flags();
    let mut out: Vec<usize> = (0..l.len())
        .filter(|&x| flag[x] && !l.upper_covers(x).iter().any(|&y| flag[y as usize]))
        .collect();
    out.sort_by(|&x, &y| l.support(x).canonical_cmp(&l.support(y)));
    Ok(out)
}

/// For every `A` in `maximal`, the element whose atoms are the union of the
/// class blocks below `A`. In `A` order, duplicates kept.
pub fn normal_abelian_candidates(
    l: &AbstractLattice,
    classes: &AtomClassPartition,
    maximal: &[usize],
) -> Result<Vec<usize>> {
    maximal
        .iter()
        .map(|&a| {
            let s = classes.blocks_within(l.support(a));
            l.element_with_support(s).ok_or_else(|| Error::MissingElement(s.to_vec()))
        })
        .collect()
}

/// Inclusion-maximal elements among the class unions below members of
/// `𝖠(L)`, ordered by atom support.
pub fn max_normal_abelian(l: &AbstractLattice, classes: &AtomClassPartition) -> Result<Vec<usize>> {
    let maximal = maximal_boolean_elements(l)?;
    let mut cands = normal_abelian_candidates(l, classes, &maximal)?;
    cands.sort_by(|&x, &y| l.support(x).canonical_cmp(&l.support(y)));
    cands.dedup();
    let keep: Vec<usize> = cands
        .iter()
        .copied()
        .filter(|&x| {
            !cands
                .iter()
                .any(|&y| y != x && l.support(x).is_subset(l.support(y)))
        })
        .collect();
    Ok(keep)
}
