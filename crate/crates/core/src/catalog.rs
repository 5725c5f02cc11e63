//! Named group constructors and the default catalog.
//!
//! The catalog holds every isomorphism type of order ≤ 15, twelve of the
//! fourteen types of order 16 (the two missing ones are `C2² ⋊ C4` and the
//! Pauli group), plus `S4` and `SL(2,3)` at order 24. `A5` is available by
//! name but kept out of the default list because its rack has 60 points.

use std::collections::HashMap;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::{covers_of_closure_system, invert};
use crate::poset::AbstractLattice;

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b] = ((a + b) % n) as u32;
        }
    }
    FiniteGroup::from_validated(n, mul, format!("Z{n}"))
}

/// Dihedral group of the given order `2k`; element `r^i s^j` sits at `i + k·j`.
pub fn dihedral(order: usize) -> FiniteGroup {
    assert!(order >= 2 && order.is_multiple_of(2), "dihedral order must be even");
    let k = order / 2;
    semidirect_cyclic(k, 2, k - 1).named(format!("D{k}"))
}

/// Dicyclic group of order `4k`: `⟨a, x | a^{2k}, x² = a^k, x a x⁻¹ = a⁻¹⟩`.
/// Order 8 gives the quaternion group.
pub fn dicyclic(order: usize) -> FiniteGroup {
    assert!(order >= 4 && order.is_multiple_of(4), "dicyclic order must be a multiple of 4");
    let k = order / 4;
    let m = 2 * k;
    let n = order;
    let idx = |i: usize, e: usize| i % m + m * e;
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        let (i, e) = (a % m, a / m);
        for b in 0..n {
            let (j, f) = (b % m, b / m);
            let c = match (e, f) {
                (0, _) => idx(i + j, f),
                (_, 0) => idx(i + m - j, 1),
                _ => idx(i + m - j + k, 0),
            };
            mul[a * n + b] = c as u32;
        }
    }
    let name = match order {
        8 => "Q8".to_string(),
        16 => "Q16".to_string(),
        _ => format!("Dic{k}"),
    };
    FiniteGroup::from_validated(n, mul, name)
}

/// Split metacyclic group `Z_n ⋊ Z_m` with `x a x⁻¹ = a^r`: element
/// `a^i x^j` sits at `i + n·j`.
pub fn semidirect_cyclic(n: usize, m: usize, r: usize) -> FiniteGroup {
    assert!(n >= 1 && m >= 1);
    assert_eq!(pow_mod(r, m, n), 1 % n, "r^m must be 1 mod n");
    let order = n * m;
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        let (i, j) = (a % n, a / n);
        let twist = pow_mod(r, j, n);
        for b in 0..order {
            let (k, l) = (b % n, b / n);
            let c = (i + twist * k) % n + n * ((j + l) % m);
            mul[a * order + b] = c as u32;
        }
    }
    FiniteGroup::from_validated(order, mul, format!("Z{n}:Z{m}"))
}

fn pow_mod(base: usize, exp: usize, modulus: usize) -> usize {
    let mut acc = 1 % modulus;
    for _ in 0..exp {
        acc = acc * base % modulus;
    }
    acc
}

pub fn symmetric(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    FiniteGroup::from_permutation_generators(n, &gens, usize::MAX)
        .expect("symmetric generators are permutations")
        .named(format!("S{n}"))
}

pub fn alternating(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|k| {
            let mut p: Vec<usize> = (0..n).collect();
            p[0] = 1;
            p[1] = k;
            p[k] = 0;
            p
        })
        .collect();
    FiniteGroup::from_permutation_generators(n, &gens, usize::MAX)
        .expect("3-cycles are permutations")
        .named(format!("A{n}"))
}

/// `SL(2, 3)`, the 2×2 matrices of determinant 1 over the field of three
/// elements.
pub fn sl2_3() -> FiniteGroup {
    let mut mats: Vec<[usize; 4]> = Vec::new();
    mats.push([1, 0, 0, 1]);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let m = [a, b, c, d];
                    if (a * d + 3 * 3 - b * c) % 3 == 1 && m != [1, 0, 0, 1] {
                        mats.push(m);
                    }
                }
            }
        }
    }
    let n = mats.len();
    let times = |x: &[usize; 4], y: &[usize; 4]| {
        [
            (x[0] * y[0] + x[1] * y[2]) % 3,
            (x[0] * y[1] + x[1] * y[3]) % 3,
            (x[2] * y[0] + x[3] * y[2]) % 3,
            (x[2] * y[1] + x[3] * y[3]) % 3,
        ]
    };
    let mut mul = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let p = times(&mats[i], &mats[j]);
            mul[i * n + j] = mats.iter().position(|m| *m == p).unwrap() as u32;
        }
    }
    FiniteGroup::from_validated(n, mul, "SL(2,3)".into())
}

fn product(factors: &[FiniteGroup]) -> FiniteGroup {
    let mut it = factors.iter();
    let first = it.next().expect("at least one factor").clone();
    let name = factors.iter().map(|g| g.name().to_string()).collect::<Vec<_>>().join("x");
    it.fold(first, |acc, g| acc.direct_product(g)).named(name)
}

fn factor(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownGroup(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    let g = match name {
        "Q8" => dicyclic(8),
        "Q16" => dicyclic(16),
        "SD16" => semidirect_cyclic(8, 2, 3).named("SD16"),
        "M16" => semidirect_cyclic(8, 2, 5).named("M16"),
        "Z4:Z4" => semidirect_cyclic(4, 4, 3),
        "SL(2,3)" | "SL23" => sl2_3(),
        _ => {
            if let Some(rest) = name.strip_prefix("Dic") {
                let k = num(rest)?;
                if k < 1 {
                    return Err(unknown());
                }
                dicyclic(4 * k)
            } else if let Some(rest) = name.strip_prefix('Z').or_else(|| name.strip_prefix('C')) {
                let n = num(rest)?;
                if n < 1 {
                    return Err(unknown());
                }
                cyclic(n)
            } else if let Some(rest) = name.strip_prefix('D') {
                let k = num(rest)?;
                if k < 1 {
                    return Err(unknown());
                }
                dihedral(2 * k)
            } else if let Some(rest) = name.strip_prefix('S') {
                let n = num(rest)?;
                if !(1..=6).contains(&n) {
                    return Err(unknown());
                }
                symmetric(n)
            } else if let Some(rest) = name.strip_prefix('A') {
                let n = num(rest)?;
                if !(1..=6).contains(&n) {
                    return Err(unknown());
                }
                alternating(n)
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(g)
}

/// Resolves names such as `S3`, `Z2xZ2`, `Q8xZ2`, `Dic3`, `D4` (order 8),
/// `SD16`, `Z4:Z4` or `SL(2,3)`.
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let factors: Vec<FiniteGroup> = name.split('x').map(factor).collect::<Result<_>>()?;
    if factors.len() == 1 {
        return Ok(factors.into_iter().next().unwrap());
    }
    Ok(product(&factors))
}

/// Names in the default catalog, in catalog order.
pub const CATALOG: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3", "Z7", "Z8", "Z4xZ2", "Z2xZ2xZ2",
    "D4", "Q8", "Z9", "Z3xZ3", "Z10", "D5", "Z11", "Z12", "Z6xZ2", "A4", "D6", "Dic3",
    "Z13", "Z14", "D7", "Z15", "Z16", "Z8xZ2", "Z4xZ4", "Z4xZ2xZ2", "Z2xZ2xZ2xZ2", "D8",
    "Q16", "SD16", "M16", "Z4:Z4", "D4xZ2", "Q8xZ2", "S4", "SL(2,3)",
];

/// Catalog groups of order at most `max_order`.
pub fn groups(max_order: usize) -> Vec<FiniteGroup> {
    CATALOG
        .iter()
        .map(|n| by_name(n).expect("catalog names resolve"))
        .filter(|g| g.order() <= max_order)
        .collect()
}

/// A 10-atom closure-system lattice shaped like a group-rack lattice whose
/// only normal abelian element is a single atom.
///
/// Points are `e = 0` and three blocks `X = {1,2,3}`, `Y = {4,5,6}`,
/// `Z = {7,8,9}`. A set is closed when it meets each block in at most one
/// point or in the whole block, and meets all three blocks only if it
/// contains all three. The coatoms are the complements of `{e}`, `X`, `Y`
/// and `Z`; the maximal Boolean elements are the sets `{e, a, b}` with `a`
/// and `b` in distinct blocks, each containing no whole block.
pub fn stall_lattice() -> AbstractLattice {
    const BLOCKS: [Bits; 3] = [Bits(0b1110), Bits(0b111_0000), Bits(0b11_1000_0000)];
    let closed = |s: Bits| {
        let met = BLOCKS.iter().filter(|b| !b.is_disjoint(s)).count();
        let full = BLOCKS.iter().filter(|b| b.is_subset(s)).count();
        let shapes = BLOCKS.iter().all(|b| {
            let k = b.intersect(s).len();
            k <= 1 || k == 3
        });
        shapes && (met < 3 || full == 3)
    };
    let mut elements: Vec<Bits> = (0u64..1 << 10).map(Bits).filter(|&s| closed(s)).collect();
    elements.sort_by(Bits::canonical_cmp);
    let index: HashMap<Bits, u32> = elements.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
    let close = |s: Bits| -> Bits {
        *elements
            .iter()
            .find(|&&c| s.is_subset(c))
            .expect("the full set is closed")
    };
    let up = covers_of_closure_system(10, &elements, &index, |x, a| close(x.with(a)));
    let down = invert(&up);
    AbstractLattice::from_adjacency(up, down).expect("closure systems are lattices")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders_and_counts() {
        let all = groups(usize::MAX);
        assert_eq!(all.len(), CATALOG.len());
        let count = |n: usize| all.iter().filter(|g| g.order() == n).count();
        // number of isomorphism types of each order
        let expected = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(count(i + 1), e, "order {}", i + 1);
        }
        assert_eq!(count(16), 12);
    }

    #[test]
    fn catalog_types_are_distinct() {
        // order, class count, element-order profile, derived length,
        // nilpotency class, centre and number of squares separate every
        // catalog type of order ≤ 16
        let sig = |g: &FiniteGroup| {
            let mut orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
            orders.sort();
            let mut squares: Vec<usize> = (0..g.order()).map(|x| g.mul(x, x)).collect();
            squares.sort();
            squares.dedup();
            let inv = g.invariants();
            (
                g.order(),
                g.conjugacy_classes().len(),
                orders,
                inv.derived_length,
                inv.nilpotency_class,
                g.center().len(),
                squares.len(),
            )
        };
        let all = groups(16);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(sig(a), sig(b), "{} vs {}", a.name(), b.name());
            }
        }
    }

    #[test]
    fn named_constructors() {
        assert_eq!(by_name("Q8").unwrap().center().len(), 2);
        assert_eq!(by_name("D4").unwrap().order(), 8);
        assert_eq!(by_name("Dic3").unwrap().order(), 12);
        assert_eq!(by_name("SL(2,3)").unwrap().order(), 24);
        assert_eq!(by_name("SL(2,3)").unwrap().derived_series().length, Some(3));
        assert_eq!(by_name("A4").unwrap().conjugacy_classes().len(), 4);
        assert_eq!(by_name("Z2xZ2").unwrap().name(), "Z2xZ2");
        assert!(by_name("Z2xZ2").unwrap().is_abelian());
        assert!(matches!(by_name("X9"), Err(Error::UnknownGroup(_))));
        assert!(matches!(by_name("Z0"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn stall_lattice_shape() {
        let l = stall_lattice();
        assert_eq!(l.atoms().len(), 10);
        assert_eq!(l.coatoms().len(), 4);
        assert!(l.is_atomistic());
        assert!(l.check_lattice().is_ok());
    }

    #[test]
    fn dicyclic_relations() {
        for order in [8, 12, 16] {
            let g = dicyclic(order);
            assert!(g.invariants().order == order);
            // exactly one involution
            let inv = (1..order).filter(|&x| g.element_order(x) == 2).count();
            assert_eq!(inv, 1, "order {order}");
        }
    }
}
