//! Independent oracles shared by the integration tests. Each one works from
//! the multiplication table or from plain sets and never calls the
//! algorithms it is used to judge.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rackle::FiniteGroup;

/// Subsets of `g` closed under `(a, b) ↦ a b a⁻¹`, as sorted element lists,
/// found by scanning every subset.
pub fn brute_subracks(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    assert!(n <= 16, "subset scan limited to 16 elements");
    let inv: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| g.mul(a, b) == g.identity()).unwrap()).collect();
    let conj = |a: usize, b: usize| g.mul(g.mul(a, b), inv[a]);
    (0u32..1 << n)
        .filter(|&s| {
            (0..n)
                .filter(|&a| s >> a & 1 == 1)
                .all(|a| (0..n).filter(|&b| s >> b & 1 == 1).all(|b| s >> conj(a, b) & 1 == 1))
        })
        .map(|s| (0..n).filter(|&a| s >> a & 1 == 1).collect())
        .collect()
}

/// Subracks of a rack given by its operation table, by subset scan.
pub fn brute_rack_subsets(table: &[Vec<usize>]) -> usize {
    let n = table.len();
    (0u32..1 << n)
        .filter(|&s| {
            (0..n)
                .filter(|&a| s >> a & 1 == 1)
                .all(|a| (0..n).filter(|&b| s >> b & 1 == 1).all(|b| s >> table[a][b] & 1 == 1))
        })
        .count()
}

/// Conjugacy classes by direct orbit computation.
pub fn brute_classes(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    (0..n)
        .map(|b| {
            let orbit: BTreeSet<usize> = (0..n).map(|a| g.mul(g.mul(a, b), inverse(g, a))).collect();
            orbit.into_iter().collect()
        })
        .collect()
}

fn inverse(g: &FiniteGroup, a: usize) -> usize {
    (0..g.order()).find(|&b| g.mul(a, b) == g.identity()).unwrap()
}

/// Subgroup generated by `gens`, by repeated right multiplication.
fn generated(g: &FiniteGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut h: BTreeSet<usize> = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if h.insert(y) {
                frontier.push(y);
            }
        }
    }
    h
}

/// Every abelian subgroup, found by extending sets of pairwise commuting
/// generators one element at a time.
pub fn abelian_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let commute = |a: usize, b: usize| g.mul(a, b) == g.mul(b, a);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack: Vec<BTreeSet<usize>> = vec![BTreeSet::from([g.identity()])];
    seen.insert(vec![g.identity()]);
    while let Some(h) = stack.pop() {
        for x in 0..n {
            if h.contains(&x) || !h.iter().all(|&y| commute(x, y)) {
                continue;
            }
            let mut gens: Vec<usize> = h.iter().copied().collect();
            gens.push(x);
            let k = generated(g, &gens);
            let key: Vec<usize> = k.iter().copied().collect();
            if seen.insert(key) {
                stack.push(k);
            }
        }
    }
    seen
}

fn maximal(family: &BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
    family
        .iter()
        .filter(|a| {
            !family
                .iter()
                .any(|b| b.len() > a.len() && a.iter().all(|x| b.binary_search(x).is_ok()))
        })
        .cloned()
        .collect()
}

pub fn maximal_abelian(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    maximal(&abelian_subgroups(g))
}

pub fn maximal_normal_abelian(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let normal: BTreeSet<Vec<usize>> = abelian_subgroups(g)
        .into_iter()
        .filter(|h| {
            (0..n).all(|a| {
                h.iter()
                    .all(|&x| h.binary_search(&g.mul(g.mul(a, x), inverse(g, a))).is_ok())
            })
        })
        .collect();
    maximal(&normal)
}

/// Derived length from commutator subgroups computed by generation.
pub fn derived_length(g: &FiniteGroup) -> Option<usize> {
    let mut h: BTreeSet<usize> = (0..g.order()).collect();
    let mut steps = 0;
    while h.len() > 1 {
        let comms: Vec<usize> = h
            .iter()
            .flat_map(|&a| h.iter().map(move |&b| (a, b)))
            .map(|(a, b)| g.mul(g.mul(a, b), g.mul(inverse(g, a), inverse(g, b))))
            .collect();
        let next = generated(g, &comms);
        if next.len() == h.len() {
            return None;
        }
        h = next;
        steps += 1;
    }
    Some(steps)
}

/// Whether some bijection `f` has `p[i] ∩ q[f(i)] ≠ ∅` for all `i`, by
/// augmenting paths.
pub fn perfect_matching_exists(p: &[Vec<usize>], q: &[Vec<usize>]) -> bool {
    let m = p.len();
    let adj: Vec<Vec<usize>> = p
        .iter()
        .map(|pi| (0..m).filter(|&j| pi.iter().any(|x| q[j].contains(x))).collect())
        .collect();
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, adj, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; m];
    (0..m).all(|i| augment(i, &adj, &mut vec![false; m], &mut owner))
}

/// `μ(⊥, ⊤)` of a family of sets ordered by inclusion, from the full order
/// matrix. `sets` must contain a least and a greatest member.
pub fn dense_mobius(sets: &[u64]) -> i64 {
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| sets[i].count_ones());
    let bottom = order[0];
    let top = *order.last().unwrap();
    let mut mu = vec![0i64; sets.len()];
    for (k, &x) in order.iter().enumerate() {
        if x == bottom {
            mu[x] = 1;
            continue;
        }
        mu[x] = -order[..k]
            .iter()
            .filter(|&&y| sets[y] & !sets[x] == 0 && sets[y] != sets[x])
            .map(|&y| mu[y])
            .sum::<i64>();
    }
    mu[top]
}
