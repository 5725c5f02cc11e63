//! Racks given by operation tables, axiom checking, the three conjugation
//! rack families and the subrack closure operator.

use crate::bits::{Bits, MAX_GROUND};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RackSource {
    Group,
    Class(usize),
    /// `divides` is false when `p` does not divide the group order, in which
    /// case the rack is the single point `{e}`.
    PPower { p: usize, divides: bool },
    Raw,
}

/// A finite rack; `op(a, b)` is `a ▷ b`. Conjugation racks carry the group
/// element behind each point in `labels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rack {
    size: usize,
    op: Vec<u32>,
    labels: Option<Vec<usize>>,
    source: RackSource,
}

/// Outcome of checking (A1) self-distributivity, (A2) bijective left
/// translations and (A3) idempotence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub is_rack: bool,
    pub is_quandle: bool,
    /// `(a, b, c)` with `a▷(b▷c) ≠ (a▷b)▷(a▷c)`.
    pub distributivity_witness: Option<(usize, usize, usize)>,
    /// `(a, b, b')` with `b ≠ b'` and `a▷b = a▷b'`.
    pub bijectivity_witness: Option<(usize, usize, usize)>,
    /// `a` with `a▷a ≠ a`.
    pub idempotence_witness: Option<usize>,
}

impl Rack {
    /// Wraps a raw table without checking any axiom.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Rack> {
        let m = table.len();
        if m == 0 {
            return Err(Error::BadIndex { index: 0, size: 0 });
        }
        let mut op = Vec::with_capacity(m * m);
        for row in table {
            if row.len() != m {
                return Err(Error::BadIndex {
                    index: row.len(),
                    size: m,
                });
            }
            for &x in row {
                if x >= m {
                    return Err(Error::BadIndex { index: x, size: m });
                }
                op.push(x as u32);
            }
        }
        Ok(Rack {
            size: m,
            op,
            labels: None,
            source: RackSource::Raw,
        })
    }

    /// Conjugation rack on `points` (a conjugation-closed subset of `g`).
    fn conjugation(g: &FiniteGroup, points: Vec<usize>, source: RackSource) -> Rack {
        let m = points.len();
        let mut local = vec![usize::MAX; g.order()];
        for (i, &x) in points.iter().enumerate() {
            local[x] = i;
        }
        let mut op = Vec::with_capacity(m * m);
        for &a in &points {
            for &b in &points {
                let c = local[g.conj(a, b)];
                debug_assert!(c != usize::MAX, "point set not closed under conjugation");
                op.push(c as u32);
            }
        }
        Rack {
            size: m,
            op,
            labels: Some(points),
            source,
        }
    }

    /// The group rack `(G, ▷)` with `a ▷ b = a b a⁻¹`.
    pub fn group_rack(g: &FiniteGroup) -> Rack {
        Rack::conjugation(g, (0..g.order()).collect(), RackSource::Group)
    }

    pub fn conjugacy_class_rack(g: &FiniteGroup, class_index: usize) -> Result<Rack> {
        let classes = g.conjugacy_classes();
        let class = classes.classes.get(class_index).ok_or(Error::BadIndex {
            index: class_index,
            size: classes.len(),
        })?;
        Ok(Rack::conjugation(g, class.clone(), RackSource::Class(class_index)))
    }

    /// Elements whose order is a power of `p`, identity included.
    pub fn p_power_rack(g: &FiniteGroup, p: usize) -> Result<Rack> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let points: Vec<usize> = (0..g.order())
            .filter(|&x| is_power_of(g.element_order(x), p))
            .collect();
        let divides = g.order().is_multiple_of(p);
        Ok(Rack::conjugation(g, points, RackSource::PPower { p, divides }))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn source(&self) -> RackSource {
        self.source
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a * self.size + b] as usize
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|a| (0..self.size).map(|b| self.op(a, b)).collect())
            .collect()
    }

    pub fn verify_axioms(&self) -> AxiomReport {
        let m = self.size;
        let mut bijectivity_witness = None;
        'rows: for a in 0..m {
            let mut seen = vec![usize::MAX; m];
            for b in 0..m {
                let c = self.op(a, b);
                if seen[c] != usize::MAX {
                    bijectivity_witness = Some((a, seen[c], b));
                    break 'rows;
                }
                seen[c] = b;
            }
        }
        let mut distributivity_witness = None;
        'outer: for a in 0..m {
            for b in 0..m {
                let ab = self.op(a, b);
                for c in 0..m {
                    if self.op(a, self.op(b, c)) != self.op(ab, self.op(a, c)) {
                        distributivity_witness = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        let idempotence_witness = (0..m).find(|&a| self.op(a, a) != a);
        let is_rack = distributivity_witness.is_none() && bijectivity_witness.is_none();
        AxiomReport {
            is_rack,
            is_quandle: is_rack && idempotence_witness.is_none(),
            distributivity_witness,
            bijectivity_witness,
            idempotence_witness,
        }
    }

    /// Orbits of the points under all left translations, ordered by smallest
    /// member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let m = self.size;
        let mut orbit_of = vec![usize::MAX; m];
        let mut orbits = Vec::new();
        for start in 0..m {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let k = orbits.len();
            let mut orbit = vec![start];
            orbit_of[start] = k;
            let mut i = 0;
            while i < orbit.len() {
                let b = orbit[i];
                // left translations are permutations of a finite set, so
                // forward images alone reach the whole orbit
                for a in 0..m {
                    let c = self.op(a, b);
                    if orbit_of[c] == usize::MAX {
                        orbit_of[c] = k;
                        orbit.push(c);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// `⟨S⟩_rk`: the least superset of `s` closed under `▷`.
    ///
    /// Panics if the ground set exceeds 64 points.
    pub fn closure(&self, s: Bits) -> Bits {
        self.closure_extend(Bits::EMPTY, s)
    }

    /// Closure of `closed ∪ extra`, where `closed` is already closed; only
    /// pairs involving a new point are evaluated.
    pub fn closure_extend(&self, closed: Bits, extra: Bits) -> Bits {
        assert!(self.size <= MAX_GROUND, "closure needs a ground set of at most 64 points");
        let mut set = closed;
        let mut members: Vec<usize> = Vec::with_capacity(self.size);
        members.extend(closed.iter());
        let base = members.len();
        for x in extra.iter() {
            if !set.contains(x) {
                set.insert(x);
                members.push(x);
            }
        }
        let mut i = base;
        while i < members.len() {
            let x = members[i];
            let row = &self.op[x * self.size..(x + 1) * self.size];
            for j in 0..=i {
                let y = members[j];
                let xy = row[y] as usize;
                if !set.contains(xy) {
                    set.insert(xy);
                    members.push(xy);
                }
                let yx = self.op(y, x);
                if !set.contains(yx) {
                    set.insert(yx);
                    members.push(yx);
                }
            }
            i += 1;
        }
        set
    }

    pub fn is_closed(&self, s: Bits) -> bool {
        s.iter().all(|a| s.iter().all(|b| s.contains(self.op(a, b))))
    }

    /// Translates a set of group elements into rack points; elements outside
    /// the rack are dropped.
    pub fn points_of(&self, elements: &[usize]) -> Bits {
        match &self.labels {
            None => elements.iter().copied().filter(|&x| x < self.size).collect(),
            Some(labels) => labels
                .iter()
                .enumerate()
                .filter(|(_, l)| elements.contains(l))
                .map(|(i, _)| i)
                .collect(),
        }
    }

    /// Group elements behind a set of points (identity labels for raw racks).
    pub fn elements_of(&self, points: Bits) -> Vec<usize> {
        match &self.labels {
            None => points.to_vec(),
            Some(labels) => {
                let mut v: Vec<usize> = points.iter().map(|i| labels[i]).collect();
                v.sort_unstable();
                v
            }
        }
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn is_power_of(mut k: usize, p: usize) -> bool {
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s3() -> FiniteGroup {
        catalog::symmetric(3)
    }

    #[test]
    fn trivial_table_is_quandle() {
        let t: Vec<Vec<usize>> = (0..4).map(|_| (0..4).collect()).collect();
        let r = Rack::from_table(&t).unwrap().verify_axioms();
        assert!(r.is_rack && r.is_quandle);
    }

    #[test]
    fn constant_rows_fail_bijectivity() {
        let t = vec![vec![0, 0], vec![1, 1]];
        let r = Rack::from_table(&t).unwrap().verify_axioms();
        assert!(!r.is_rack);
        assert_eq!(r.bijectivity_witness, Some((0, 0, 1)));
    }

    #[test]
    fn non_idempotent_rack() {
        // cyclic permutation rack: a ▷ b = b + 1 mod 3
        let t: Vec<Vec<usize>> = (0..3).map(|_| (0..3).map(|b| (b + 1) % 3).collect()).collect();
        let r = Rack::from_table(&t).unwrap().verify_axioms();
        assert!(r.is_rack);
        assert!(!r.is_quandle);
        assert_eq!(r.idempotence_witness, Some(0));
    }

    #[test]
    fn group_rack_of_s3() {
        let g = s3();
        let r = Rack::group_rack(&g);
        assert!(r.verify_axioms().is_quandle);
        assert_eq!(r.orbits(), g.conjugacy_classes().classes);
    }

    #[test]
    fn abelian_group_rack_is_trivial() {
        let g = catalog::by_name("Z2xZ3").unwrap();
        let r = Rack::group_rack(&g);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(r.op(a, b), b);
            }
        }
        assert_eq!(Rack::group_rack(&catalog::cyclic(1)).size(), 1);
    }

    #[test]
    fn transposition_class_rack() {
        let g = s3();
        let classes = g.conjugacy_classes();
        let k = classes.classes.iter().position(|c| c.len() == 3).unwrap();
        let r = Rack::conjugacy_class_rack(&g, k).unwrap();
        assert_eq!(r.size(), 3);
        assert!(r.verify_axioms().is_quandle);
        for a in 0..3 {
            for b in 0..3 {
                let expected = if a == b { a } else { 3 - a - b };
                assert_eq!(r.op(a, b), expected);
            }
        }
        assert!(matches!(
            Rack::conjugacy_class_rack(&g, 9),
            Err(Error::BadIndex { index: 9, size: 3 })
        ));
        let singleton = classes.classes.iter().position(|c| c.len() == 1).unwrap();
        assert_eq!(Rack::conjugacy_class_rack(&g, singleton).unwrap().size(), 1);
    }

    #[test]
    fn q8_class_of_i_is_trivial_quandle() {
        let q8 = catalog::dicyclic(8);
        let classes = q8.conjugacy_classes();
        for (k, c) in classes.classes.iter().enumerate().filter(|(_, c)| c.len() == 2) {
            let r = Rack::conjugacy_class_rack(&q8, k).unwrap();
            assert_eq!(r.table(), vec![vec![0, 1], vec![0, 1]], "class {c:?}");
        }
    }

    #[test]
    fn p_power_racks() {
        let g = s3();
        assert_eq!(Rack::p_power_rack(&g, 2).unwrap().size(), 4);
        assert_eq!(Rack::p_power_rack(&g, 3).unwrap().size(), 3);
        let z4 = catalog::cyclic(4);
        assert_eq!(Rack::p_power_rack(&z4, 2).unwrap().size(), 4);
        let r = Rack::p_power_rack(&z4, 5).unwrap();
        assert_eq!(r.size(), 1);
        assert_eq!(r.source(), RackSource::PPower { p: 5, divides: false });
        assert_eq!(Rack::p_power_rack(&z4, 4).unwrap_err(), Error::NotPrime(4));
        assert!(Rack::p_power_rack(&catalog::symmetric(4), 2).unwrap().verify_axioms().is_quandle);
    }

    #[test]
    fn closure_examples() {
        let g = s3();
        let rack = Rack::group_rack(&g);
        assert_eq!(rack.closure(Bits::EMPTY), Bits::EMPTY);
        let r = (1..6).find(|&x| g.element_order(x) == 3).unwrap();
        let t = (1..6).find(|&x| g.element_order(x) == 2).unwrap();
        let cl = rack.closure(Bits::singleton(r).with(t));
        assert_eq!(cl, Bits::full(6).minus(Bits::singleton(0)));
        let z = catalog::cyclic(6);
        let zr = Rack::group_rack(&z);
        assert_eq!(zr.closure(Bits(0b101010)), Bits(0b101010));
    }

    #[test]
    fn closure_extend_agrees_with_closure() {
        let g = catalog::symmetric(4);
        let rack = Rack::group_rack(&g);
        let base = rack.closure(Bits(0b1000_0100));
        for x in 0..24 {
            assert_eq!(
                rack.closure_extend(base, Bits::singleton(x)),
                rack.closure(base.with(x))
            );
        }
    }
}
