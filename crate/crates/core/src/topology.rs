//! Möbius function and reduced Euler characteristic of the proper part.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poset::AbstractLattice;

/// `μ(⊥, ⊤)` by the recursion `μ(⊥,⊥) = 1`, `μ(⊥,x) = −Σ_{y<x} μ(⊥,y)`.
pub fn mobius_bottom_top(l: &AbstractLattice) -> BigInt {
    let n = l.len();
    let mut mu: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut stamp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for &x in l.linear_extension() {
        let x = x as usize;
        if x == l.bottom() {
            mu[x] = BigInt::one();
            continue;
        }
        // walk the strict down-set of x
        let mut sum = BigInt::zero();
        stack.clear();
        for &c in l.lower_covers(x) {
            if stamp[c as usize] != x {
                stamp[c as usize] = x;
                stack.push(c as usize);
            }
        }
        while let Some(y) = stack.pop() {
            sum += &mu[y];
            for &c in l.lower_covers(y) {
                if stamp[c as usize] != x {
                    stamp[c as usize] = x;
                    stack.push(c as usize);
                }
            }
        }
        mu[x] = -sum;
    }
    std::mem::take(&mut mu[l.top()])
}

/// A lattice with its bottom and top removed.
#[derive(Debug, Clone)]
pub struct ProperPart<'a> {
    lattice: &'a AbstractLattice,
    /// Elements other than bottom and top, bottom-to-top.
    elements: Vec<usize>,
}

impl<'a> ProperPart<'a> {
    pub fn of(lattice: &'a AbstractLattice) -> ProperPart<'a> {
        let elements = lattice
            .linear_extension()
            .iter()
            .map(|&x| x as usize)
            .filter(|&x| x != lattice.bottom() && x != lattice.top())
            .collect();
        ProperPart { lattice, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
}

/// `χ̃` of the order complex, `Σ_chains (−1)^(|chain| − 1)` with the empty
/// chain counted, by a dynamic program over chains ending at each element.
pub fn reduced_euler_characteristic(p: &ProperPart, cap: usize) -> Result<BigInt> {
    let k = p.len();
    if k > cap {
        return Err(Error::TooLarge {
            what: "proper part for chain counting",
            size: k,
            cap,
        });
    }
    let l = p.lattice;
    // signed[i]: Σ over chains with top element i of (−1)^(|chain| − 1)
    let mut signed: Vec<BigInt> = Vec::with_capacity(k);
    let mut total = BigInt::from(-1);
    for (i, &x) in p.elements.iter().enumerate() {
        let mut s = BigInt::one();
        for (j, &y) in p.elements[..i].iter().enumerate() {
            if l.leq(y, x) {
                s -= &signed[j];
            }
        }
        total += &s;
        signed.push(s);
    }
    Ok(total)
}

/// Outcome of comparing `μ(⊥, ⊤)` with `(−1)^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereCheck {
    pub mobius: BigInt,
    pub expected: BigInt,
    /// Chain-count value when the proper part is within the cap.
    pub chains: Option<BigInt>,
}

impl SphereCheck {
    pub fn passed(&self) -> bool {
        self.mobius == self.expected && self.chains.as_ref().is_none_or(|c| *c == self.mobius)
    }
}

pub fn sphere_check(l: &AbstractLattice, classes: usize, chain_cap: usize) -> SphereCheck {
    let mobius = mobius_bottom_top(l);
    let expected = if classes.is_multiple_of(2) { BigInt::one() } else { BigInt::from(-1) };
    let chains = reduced_euler_characteristic(&ProperPart::of(l), chain_cap).ok();
    SphereCheck {
        mobius,
        expected,
        chains,
    }
}
