//! Group-side coset subracks and coset joins.

use crate::error::Result;
use crate::group::FiniteGroup;

/// Cosets of a normal subgroup, each flagged by whether it is closed under
/// conjugation of its own elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    /// Coset `0` is the subgroup itself.
    pub parts: Vec<Vec<usize>>,
    pub part_of: Vec<usize>,
    pub closed: Vec<bool>,
}

impl CosetPartition {
    pub fn all_closed(&self) -> bool {
        self.closed.iter().all(|&c| c)
    }
}

pub fn coset_partition_of(g: &FiniteGroup, normal: &[usize]) -> Result<CosetPartition> {
    let q = g.quotient(normal)?;
    let closed = q
        .cosets
        .iter()
        .map(|c| {
            c.iter()
                .all(|&a| c.iter().all(|&b| q.projection[g.conj(a, b)] == q.projection[a]))
        })
        .collect();
    Ok(CosetPartition {
        parts: q.cosets,
        part_of: q.projection,
        closed,
    })
}

/// Closure of `elements` in the group rack of `g`.
pub fn rack_closure(g: &FiniteGroup, elements: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.order()];
    let mut members: Vec<usize> = Vec::new();
    for &x in elements {
        if !inside[x] {
            inside[x] = true;
            members.push(x);
        }
    }
    let mut done = 0;
    while done < members.len() {
        let x = members[done];
        done += 1;
        for i in 0..done {
            let y = members[i];
            for z in [g.conj(x, y), g.conj(y, x)] {
                if !inside[z] {
                    inside[z] = true;
                    members.push(z);
                }
            }
        }
    }
    members.sort_unstable();
    members
}

/// Union of the cosets meeting the rack closure of `reps`, sorted.
pub fn join_of_cosets(g: &FiniteGroup, cosets: &CosetPartition, reps: &[usize]) -> Vec<usize> {
    let mut hit = vec![false; cosets.parts.len()];
    for x in rack_closure(g, reps) {
        hit[cosets.part_of[x]] = true;
    }
    let mut out: Vec<usize> = hit
        .iter()
        .enumerate()
        .filter(|&(_, &h)| h)
        .flat_map(|(i, _)| cosets.parts[i].iter().copied())
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn s3_modulo_a3() {
        let g = catalog::symmetric(3);
        let a3: Vec<usize> = (0..6).filter(|&x| g.element_order(x) != 2).collect();
        let c = coset_partition_of(&g, &a3).unwrap();
        assert_eq!(c.parts.len(), 2);
        assert_eq!(c.parts[0], a3);
        assert!(c.all_closed());
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        assert_eq!(join_of_cosets(&g, &c, &[0, t]), (0..6).collect::<Vec<_>>());
        assert_eq!(join_of_cosets(&g, &c, &[t]).len(), 3);
    }

    #[test]
    fn trivial_and_full_subgroups() {
        let g = catalog::dihedral(8);
        let c = coset_partition_of(&g, &[0]).unwrap();
        assert!(c.parts.iter().all(|p| p.len() == 1) && c.all_closed());
        let all: Vec<usize> = (0..8).collect();
        let c = coset_partition_of(&g, &all).unwrap();
        assert_eq!(c.parts, vec![all]);
    }

    #[test]
    fn d4_modulo_centre() {
        let g = catalog::dihedral(8);
        let z = g.center();
        let c = coset_partition_of(&g, &z).unwrap();
        assert_eq!(c.parts.len(), 4);
        // non-commuting representatives of two distinct non-central cosets:
        // conjugation modulo the centre is trivial, so the closure stays
        // inside their two cosets and never reaches the centre
        for a in 0..8 {
            for b in 0..8 {
                let (i, j) = (c.part_of[a], c.part_of[b]);
                if i == 0 || j == 0 || i == j || g.commutes(a, b) {
                    continue;
                }
                let mut expected: Vec<usize> = c.parts[i].iter().chain(&c.parts[j]).copied().collect();
                expected.sort_unstable();
                assert_eq!(join_of_cosets(&g, &c, &[a, b]), expected);
            }
        }
    }

    #[test]
    fn non_normal_is_rejected() {
        let g = catalog::symmetric(3);
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        assert!(coset_partition_of(&g, &[0, t]).is_err());
    }
}
