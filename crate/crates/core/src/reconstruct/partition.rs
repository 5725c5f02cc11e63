//! Matching the parts of two equal-part partitions so that every part meets
//! its image.
//!
//! The search follows an inductive construction: if some `P_i` equals some
//! `Q_j` the pair is matched and removed; otherwise a meeting pair
//! `(P_i, Q_j)` is chosen and elements of `P_i ∩ Q_k` are exchanged with
//! elements of `Q_j ∖ P_i` until `Q_j = P_i`, and the equal pair is removed.
//!
//! The exchanges change which parts meet, so a match is only accepted when
//! the *original* parts meet, and when the remaining instance has no
//! solution the search backtracks to the next candidate pair. Without those
//! two rules the construction can return a pair that does not meet; see
//! [`literal`].

use std::collections::BTreeSet;

use crate::error::{Error, Result};

type Part = BTreeSet<usize>;

fn validate(p: &[Vec<usize>], q: &[Vec<usize>]) -> Result<(Vec<Part>, Vec<Part>)> {
    if p.len() != q.len() {
        return Err(Error::BadPartition(format!("{} parts against {}", p.len(), q.len())));
    }
    if p.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let n = p[0].len();
    let to_sets = |parts: &[Vec<usize>], side: &str| -> Result<Vec<Part>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            let set: Part = part.iter().copied().collect();
            if set.len() != part.len() {
                return Err(Error::BadPartition(format!("{side}{i} repeats an element")));
            }
            if set.len() != n || n == 0 {
                return Err(Error::BadPartition(format!("{side}{i} has {} elements, expected {n}", set.len())));
            }
            for &x in &set {
                if !seen.insert(x) {
                    return Err(Error::BadPartition(format!("{x} lies in two parts of {side}")));
                }
            }
            out.push(set);
        }
        Ok(out)
    };
    let (ps, qs) = (to_sets(p, "P")?, to_sets(q, "Q")?);
    let left: Part = ps.iter().flatten().copied().collect();
    let right: Part = qs.iter().flatten().copied().collect();
    if left != right {
        return Err(Error::BadPartition("partitions cover different sets".into()));
    }
    Ok((ps, qs))
}

/// Returns `f` with `P_i ∩ Q_{f[i]} ≠ ∅` for every `i`, `f` a permutation.
pub fn partition_bijection(p: &[Vec<usize>], q: &[Vec<usize>]) -> Result<Vec<usize>> {
    let (ps, qs) = validate(p, q)?;
    let m = ps.len();
    let meets: Vec<Vec<bool>> = ps
        .iter()
        .map(|pi| qs.iter().map(|qj| !pi.is_disjoint(qj)).collect())
        .collect();
    let mut f = vec![usize::MAX; m];
    let active_p: Vec<usize> = (0..m).collect();
    let active_q: Vec<usize> = (0..m).collect();
    if solve(&ps, qs, &active_p, &active_q, &meets, &mut f) {
        Ok(f)
    } else {
        // the search covers every matching of the meeting relation, which has
        // a perfect matching by Hall's condition
        Err(Error::BadPartition("no bijection found".into()))
    }
}

/// `qs` holds the current (exchanged) parts; `meets` is the original relation.
fn solve(
    ps: &[Part],
    qs: Vec<Part>,
    active_p: &[usize],
    active_q: &[usize],
    meets: &[Vec<bool>],
    f: &mut [usize],
) -> bool {
    if active_p.is_empty() {
        return true;
    }
    // equal pairs, then pairs meeting in the exchanged parts, then the
    // remaining originally meeting pairs
    let mut tiers: [Vec<(usize, usize)>; 3] = Default::default();
    for &i in active_p {
        for &j in active_q {
            if !meets[i][j] {
                continue;
            }
            let tier = if ps[i] == qs[j] {
                0
            } else if !ps[i].is_disjoint(&qs[j]) {
                1
            } else {
                2
            };
            tiers[tier].push((i, j));
        }
    }
    let pairs: Vec<(usize, usize)> = tiers.concat();
    for (i0, j0) in pairs {
        let next = exchange(&ps[i0], &qs, active_q, j0);
        let ap: Vec<usize> = active_p.iter().copied().filter(|&i| i != i0).collect();
        let aq: Vec<usize> = active_q.iter().copied().filter(|&j| j != j0).collect();
        f[i0] = j0;
        if solve(ps, next, &ap, &aq, meets, f) {
            return true;
        }
        f[i0] = usize::MAX;
    }
    false
}

/// Exchanges elements until `Q_{j0} = P_{i0}`: each element of `P_{i0}` held
/// by another active `Q_j` is traded for an element of `Q_{j0} ∖ P_{i0}`,
/// smallest first.
fn exchange(p_i0: &Part, qs: &[Part], active_q: &[usize], j0: usize) -> Vec<Part> {
    let mut qs = qs.to_vec();
    for &j in active_q {
        if j == j0 {
            continue;
        }
        let incoming: Vec<usize> = qs[j].intersection(p_i0).copied().collect();
        for x in incoming {
            let y = *qs[j0].difference(p_i0).next().expect("equal sizes leave a spare element");
            qs[j].remove(&x);
            qs[j].insert(y);
            qs[j0].remove(&y);
            qs[j0].insert(x);
        }
    }
    debug_assert_eq!(&qs[j0], p_i0);
    qs
}


/// True when `f` is a permutation with every `P_i` meeting `Q_{f[i]}`.
pub fn is_valid_bijection(p: &[Vec<usize>], q: &[Vec<usize>], f: &[usize]) -> bool {
    let m = p.len();
    if f.len() != m || q.len() != m {
        return false;
    }
    let mut hit = vec![false; m];
    for (i, &j) in f.iter().enumerate() {
        if j >= m || hit[j] || !p[i].iter().any(|x| q[j].contains(x)) {
            return false;
        }
        hit[j] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(v: &[&[usize]]) -> Vec<Vec<usize>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn equal_partitions() {
        let p = parts(&[&[1, 2], &[3, 4], &[5, 6]]);
        let f = partition_bijection(&p, &p).unwrap();
        assert_eq!(f, vec![0, 1, 2]);
    }

    #[test]
    fn two_by_two() {
        let p = parts(&[&[1, 2], &[3, 4]]);
        let q = parts(&[&[1, 3], &[2, 4]]);
        let f = partition_bijection(&p, &q).unwrap();
        assert!(is_valid_bijection(&p, &q, &f));
        // both permutations are valid here
        assert!(is_valid_bijection(&p, &q, &[0, 1]) && is_valid_bijection(&p, &q, &[1, 0]));
    }

    #[test]
    fn exchanges_can_mislead_the_greedy_construction() {
        let p = parts(&[&[1, 2], &[3, 4], &[5, 6]]);
        let q = parts(&[&[1, 3], &[2, 5], &[4, 6]]);
        let greedy = literal::partition_bijection(&p, &q).unwrap();
        // P1 ↦ Q1, then the exchanged instance sends P2 to Q2 = {2, 5}
        assert_eq!(greedy[1], 1);
        assert!(!is_valid_bijection(&p, &q, &greedy));
        let f = partition_bijection(&p, &q).unwrap();
        assert!(is_valid_bijection(&p, &q, &f));
    }

    #[test]
    fn malformed_input() {
        let p = parts(&[&[1, 2], &[3, 4]]);
        assert!(partition_bijection(&p, &parts(&[&[1, 2, 3], &[4]])).is_err());
        assert!(partition_bijection(&p, &parts(&[&[1, 2], &[3, 5]])).is_err());
        assert!(partition_bijection(&p, &parts(&[&[1, 2]])).is_err());
        assert!(partition_bijection(&parts(&[&[1, 1], &[3, 4]]), &p).is_err());
    }
}
