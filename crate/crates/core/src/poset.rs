//! Label-free bounded lattices.
//!
//! An [`AbstractLattice`] knows nothing but its order relation, stored as a
//! Hasse diagram. Everything else (atoms, the atoms below each element,
//! ranks, meet-irreducibles) is derived from that relation alone, which is
//! what lets the reconstruction code run on lattices stripped of their
//! underlying sets.

use std::collections::{HashMap, VecDeque};

use crate::bits::{Bits, MAX_GROUND};
use crate::error::{Error, Result};

/// Largest non-atomistic lattice for which a dense order matrix is built.
pub const DENSE_CAP: usize = 1 << 14;

#[derive(Debug, Clone)]
enum Order {
    /// `x ≤ y` iff the atoms below `x` are among the atoms below `y`.
    Atomistic,
    /// Row `y` holds the down-set of `y`.
    Dense(Vec<Vec<u64>>),
}

#[derive(Debug, Clone)]
pub struct AbstractLattice {
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
    bottom: usize,
    top: usize,
    /// Linear extension, bottom first.
    linear: Vec<u32>,
    rank: Vec<u32>,
    atoms: Vec<u32>,
    /// Atoms below each element, as positions into `atoms`. Empty when the
    /// lattice has more than 64 atoms.
    support: Vec<Bits>,
    order: Order,
    by_support: HashMap<Bits, u32>,
    meet_irreducible: Vec<u32>,
}

impl PartialEq for AbstractLattice {
    fn eq(&self, other: &Self) -> bool {
        self.up == other.up && self.bottom == other.bottom && self.top == other.top
    }
}

impl AbstractLattice {
    /// Builds a lattice from its cover pairs `(child, parent)`.
    ///
    /// Checks that the relation is acyclic with a unique minimum and maximum.
    /// The lattice property itself is only checked by [`Self::check_lattice`].
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<AbstractLattice> {
        if n == 0 {
            return Err(Error::NotALattice("no elements".into()));
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(c, p) in covers {
            if c >= n || p >= n {
                return Err(Error::BadIndex {
                    index: c.max(p),
                    size: n,
                });
            }
            if c == p {
                return Err(Error::NotALattice(format!("element {c} covers itself")));
            }
            up[c].push(p as u32);
            down[p].push(c as u32);
        }
        for v in up.iter_mut().chain(down.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        AbstractLattice::from_adjacency(up, down)
    }

    /// Builds a lattice from a reflexive order matrix, `leq[x][y]` meaning `x ≤ y`.
    pub fn from_leq(leq: &[Vec<bool>]) -> Result<AbstractLattice> {
        let n = leq.len();
        for x in 0..n {
            if leq[x].len() != n || !leq[x][x] {
                return Err(Error::NotALattice(format!("row {x} malformed or not reflexive")));
            }
            for y in 0..n {
                if x != y && leq[x][y] && leq[y][x] {
                    return Err(Error::NotALattice(format!("{x} and {y} violate antisymmetry")));
                }
                if leq[x][y] && (0..n).any(|z| leq[y][z] && !leq[x][z]) {
                    return Err(Error::NotALattice(format!("transitivity fails from {x} via {y}")));
                }
            }
        }
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y
                    && leq[x][y]
                    && !(0..n).any(|z| z != x && z != y && leq[x][z] && leq[z][y])
                {
                    covers.push((x, y));
                }
            }
        }
        AbstractLattice::from_covers(n, &covers)
    }

    pub(crate) fn from_adjacency(up: Vec<Vec<u32>>, down: Vec<Vec<u32>>) -> Result<AbstractLattice> {
        let n = up.len();
        let minima: Vec<usize> = (0..n).filter(|&x| down[x].is_empty()).collect();
        let maxima: Vec<usize> = (0..n).filter(|&x| up[x].is_empty()).collect();
        if minima.len() != 1 || maxima.len() != 1 {
            return Err(Error::NotALattice(format!(
                "{} minimal and {} maximal elements",
                minima.len(),
                maxima.len()
            )));
        }
        let (bottom, top) = (minima[0], maxima[0]);

        // Kahn from the bottom gives a linear extension and longest-chain ranks
        let mut indegree: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut rank = vec![0u32; n];
        let mut linear = Vec::with_capacity(n);
        let mut queue = VecDeque::from([bottom as u32]);
        while let Some(x) = queue.pop_front() {
            linear.push(x);
            for &y in &up[x as usize] {
                let y = y as usize;
                rank[y] = rank[y].max(rank[x as usize] + 1);
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    queue.push_back(y as u32);
                }
            }
        }
        if linear.len() != n {
            return Err(Error::NotALattice("cover relation has a cycle".into()));
        }

        let atoms: Vec<u32> = up[bottom].clone();
        let mut support = Vec::new();
        let mut atomistic = false;
        if atoms.len() <= MAX_GROUND {
            support = vec![Bits::EMPTY; n];
            for (k, &a) in atoms.iter().enumerate() {
                support[a as usize] = Bits::singleton(k);
            }
            atomistic = true;
            for &x in &linear {
                let x = x as usize;
                for &c in &down[x] {
                    let s = support[c as usize];
                    support[x] = support[x].union(s);
                }
            }
            for x in 0..n {
                for &c in &down[x] {
                    if support[c as usize] == support[x] {
                        atomistic = false;
                    }
                }
            }
        }

        let order = if atomistic {
            Order::Atomistic
        } else {
            if n > DENSE_CAP {
                return Err(Error::TooLarge {
                    what: "non-atomistic lattice",
                    size: n,
                    cap: DENSE_CAP,
                });
            }
            let words = n.div_ceil(64);
            let mut rows = vec![vec![0u64; words]; n];
            for &x in &linear {
                let x = x as usize;
                rows[x][x / 64] |= 1 << (x % 64);
                for &c in &down[x] {
                    let (lo, hi) = if (c as usize) < x {
                        let (a, b) = rows.split_at_mut(x);
                        (&a[c as usize], &mut b[0])
                    } else {
                        let (a, b) = rows.split_at_mut(c as usize);
                        (&b[0], &mut a[x])
                    };
                    for (h, l) in hi.iter_mut().zip(lo) {
                        *h |= l;
                    }
                }
            }
            Order::Dense(rows)
        };

        let by_support = if atomistic {
            support.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect()
        } else {
            HashMap::new()
        };
        let meet_irreducible = (0..n as u32).filter(|&x| up[x as usize].len() == 1).collect();

        Ok(AbstractLattice {
            up,
            down,
            bottom,
            top,
            linear,
            rank,
            atoms,
            support,
            order,
            by_support,
            meet_irreducible,
        })
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn upper_covers(&self, x: usize) -> &[u32] {
        &self.up[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[u32] {
        &self.down[x]
    }

    pub fn atoms(&self) -> &[u32] {
        &self.atoms
    }

    pub fn coatoms(&self) -> &[u32] {
        &self.down[self.top]
    }

    pub fn rank(&self, x: usize) -> usize {
        self.rank[x] as usize
    }

    /// Length of the longest chain.
    pub fn height(&self) -> usize {
        self.rank[self.top] as usize
    }

    /// Elements in a linear extension of the order, bottom first.
    pub fn linear_extension(&self) -> &[u32] {
        &self.linear
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Cover pairs `(child, parent)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|c| self.up[c].iter().map(move |&p| (c, p as usize)))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn is_atomistic(&self) -> bool {
        matches!(self.order, Order::Atomistic)
    }

    /// Atoms below `x`, as positions into [`Self::atoms`].
    ///
    /// Panics for lattices with more than 64 atoms.
    pub fn support(&self, x: usize) -> Bits {
        assert!(!self.support.is_empty(), "atom supports need at most 64 atoms");
        self.support[x]
    }

    pub fn has_supports(&self) -> bool {
        !self.support.is_empty()
    }

    /// Element whose atom support is exactly `s`, in an atomistic lattice.
    pub fn element_with_support(&self, s: Bits) -> Option<usize> {
        self.by_support.get(&s).map(|&x| x as usize)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        match &self.order {
            Order::Atomistic => self.support[x].is_subset(self.support[y]),
            Order::Dense(rows) => rows[y][x / 64] >> (x % 64) & 1 == 1,
        }
    }

    /// Atom support of the join of the atoms in `s`: the intersection of the
    /// supports of all meet-irreducibles above them.
    pub fn close_atoms(&self, s: Bits) -> Bits {
        let mut acc = self.support(self.top);
        for &m in &self.meet_irreducible {
            let sm = self.support[m as usize];
            if s.is_subset(sm) {
                acc = acc.intersect(sm);
            }
        }
        acc
    }

    /// Join of a set of atoms (given as atom positions).
    pub fn join_atoms(&self, s: Bits) -> Result<usize> {
        if self.is_atomistic() {
            let c = self.close_atoms(s);
            return self
                .element_with_support(c)
                .ok_or_else(|| Error::MissingElement(c.to_vec()));
        }
        let mut x = self.bottom;
        for k in s.iter() {
            x = self.join(x, self.atoms[k] as usize)?;
        }
        Ok(x)
    }

    pub fn join(&self, x: usize, y: usize) -> Result<usize> {
        self.check_index(x)?;
        self.check_index(y)?;
        if self.is_atomistic() {
            return self.join_atoms(self.support[x].union(self.support[y]));
        }
        let bounds: Vec<usize> = (0..self.len()).filter(|&z| self.leq(x, z) && self.leq(y, z)).collect();
        bounds
            .iter()
            .copied()
            .find(|&z| bounds.iter().all(|&w| self.leq(z, w)))
            .ok_or_else(|| Error::NotALattice(format!("{x} and {y} have no join")))
    }

    pub fn meet(&self, x: usize, y: usize) -> Result<usize> {
        self.check_index(x)?;
        self.check_index(y)?;
        if self.is_atomistic() {
            let s = self.support[x].intersect(self.support[y]);
            return self
                .element_with_support(s)
                .ok_or_else(|| Error::NotALattice(format!("{x} and {y} have no meet")));
        }
        let bounds: Vec<usize> = (0..self.len()).filter(|&z| self.leq(z, x) && self.leq(z, y)).collect();
        bounds
            .iter()
            .copied()
            .find(|&z| bounds.iter().all(|&w| self.leq(w, z)))
            .ok_or_else(|| Error::NotALattice(format!("{x} and {y} have no meet")))
    }

    /// `{z : x ≤ z ≤ y}` in index order.
    pub fn interval(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok((0..self.len()).filter(|&z| self.leq(x, z) && self.leq(z, y)).collect())
    }

    /// The interval `[x, y]` as a lattice in its own right. Returns the
    /// lattice and the source index of each of its elements.
    pub fn interval_lattice(&self, x: usize, y: usize) -> Result<(AbstractLattice, Vec<usize>)> {
        let members = self.interval(x, y)?;
        if members.is_empty() {
            return Err(Error::NotALattice(format!("{x} is not below {y}")));
        }
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &z)| (z, i)).collect();
        let mut covers = Vec::new();
        for (i, &z) in members.iter().enumerate() {
            for &p in &self.up[z] {
                if let Some(&j) = local.get(&(p as usize)) {
                    covers.push((i, j));
                }
            }
        }
        Ok((AbstractLattice::from_covers(members.len(), &covers)?, members))
    }

    /// Elements below `x` (inclusive), by walking the Hasse diagram down.
    pub fn down_set(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![x];
        seen[x] = true;
        let mut out = Vec::new();
        while let Some(z) = stack.pop() {
            out.push(z);
            for &c in &self.down[z] {
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c as usize);
                }
            }
        }
        out
    }

    /// Relabels elements: element `x` becomes `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<AbstractLattice> {
        let covers: Vec<(usize, usize)> = self.covers().into_iter().map(|(c, p)| (perm[c], perm[p])).collect();
        AbstractLattice::from_covers(self.len(), &covers)
    }

    /// Verifies that covers form a transitive reduction and that every pair
    /// of elements has a join and a meet. Quadratic in the size; meant for
    /// untrusted input and tests.
    pub fn check_lattice(&self) -> Result<()> {
        for y in 0..self.len() {
            for &c in &self.down[y] {
                if self.down[y].iter().any(|&d| d != c && self.leq(c as usize, d as usize)) {
                    return Err(Error::NotALattice(format!("cover ({c}, {y}) is not minimal")));
                }
            }
        }
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                self.join_by_scan(x, y)?;
                self.meet_by_scan(x, y)?;
            }
        }
        Ok(())
    }

    fn join_by_scan(&self, x: usize, y: usize) -> Result<usize> {
        let bounds: Vec<usize> = (0..self.len()).filter(|&z| self.leq(x, z) && self.leq(y, z)).collect();
        bounds
            .iter()
            .copied()
            .find(|&z| bounds.iter().all(|&w| self.leq(z, w)))
            .ok_or_else(|| Error::NotALattice(format!("{x} and {y} have no join")))
    }

    fn meet_by_scan(&self, x: usize, y: usize) -> Result<usize> {
        let bounds: Vec<usize> = (0..self.len()).filter(|&z| self.leq(z, x) && self.leq(z, y)).collect();
        bounds
            .iter()
            .copied()
            .find(|&z| bounds.iter().all(|&w| self.leq(w, z)))
            .ok_or_else(|| Error::NotALattice(format!("{x} and {y} have no meet")))
    }

    fn check_index(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::BadIndex {
                index: x,
                size: self.len(),
            })
        }
    }

    /// `[⊥, x]` is Boolean iff joins of atom subsets biject onto it: it has
    /// `2^k` elements for `k` atoms below `x` and each is the join of the
    /// atoms below it. Scans the interval directly.
    pub fn is_boolean_interval(&self, x: usize) -> bool {
        let below: Vec<usize> = (0..self.len()).filter(|&z| self.leq(z, x)).collect();
        let atoms: Vec<usize> = self
            .atoms
            .iter()
            .map(|&a| a as usize)
            .filter(|&a| self.leq(a, x))
            .collect();
        if atoms.len() >= 63 || below.len() != 1usize << atoms.len() {
            return false;
        }
        below.iter().all(|&z| {
            let mut j = self.bottom;
            for &a in atoms.iter().filter(|&&a| self.leq(a, z)) {
                match self.join(j, a) {
                    Ok(next) => j = next,
                    Err(_) => return false,
                }
            }
            j == z
        })
    }

    /// Boolean-interval flags for every element in one bottom-up pass.
    ///
    /// `[⊥, x]` with `k` atoms is Boolean iff `x` has exactly `k` lower
    /// covers, each with a Boolean lower interval, whose atom sets are the
    /// `k` sets obtained by dropping one atom.
    pub fn boolean_flags(&self) -> Vec<bool> {
        let mut flag = vec![false; self.len()];
        for &x in &self.linear {
            let x = x as usize;
            if x == self.bottom {
                flag[x] = true;
                continue;
            }
            let s = self.support(x);
            let k = s.len();
            let lower = &self.down[x];
            if lower.len() != k {
                continue;
            }
            let mut missing = Bits::EMPTY;
            let ok = lower.iter().all(|&c| {
                let c = c as usize;
                let sc = self.support(c);
                let gap = s.minus(sc);
                if !flag[c] || !sc.is_subset(s) || gap.len() != 1 || !missing.is_disjoint(gap) {
                    return false;
                }
                missing = missing.union(gap);
                true
            });
            flag[x] = ok && missing == s;
        }
        flag
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Power set of `n` points ordered by inclusion; element index = mask.
    pub(crate) fn boolean(n: usize) -> AbstractLattice {
        let mut covers = Vec::new();
        for x in 0..1usize << n {
            for i in 0..n {
                if x >> i & 1 == 0 {
                    covers.push((x, x | 1 << i));
                }
            }
        }
        AbstractLattice::from_covers(1 << n, &covers).unwrap()
    }

    fn chain(n: usize) -> AbstractLattice {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        AbstractLattice::from_covers(n, &covers).unwrap()
    }

    /// The five-element lattice with three atoms, M3.
    fn m3() -> AbstractLattice {
        AbstractLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn boolean_lattice_basics() {
        let b = boolean(3);
        assert!(b.is_atomistic());
        assert_eq!(b.atoms().len(), 3);
        assert_eq!(b.coatoms().len(), 3);
        assert_eq!(b.height(), 3);
        assert_eq!(b.join(1, 2).unwrap(), 3);
        assert_eq!(b.meet(3, 6).unwrap(), 2);
        assert!(b.leq(1, 7) && !b.leq(1, 6));
        assert!(b.is_boolean_interval(7));
        assert!(b.boolean_flags().iter().all(|&f| f));
        b.check_lattice().unwrap();
    }

    #[test]
    fn chain_uses_dense_order() {
        let c = chain(4);
        assert!(!c.is_atomistic());
        assert!(c.leq(0, 3) && !c.leq(3, 1));
        assert_eq!(c.join(1, 2).unwrap(), 2);
        assert_eq!(c.meet(1, 3).unwrap(), 1);
        assert!(c.is_boolean_interval(1));
        assert!(!c.is_boolean_interval(2));
        assert_eq!(c.boolean_flags(), vec![true, true, false, false]);
        c.check_lattice().unwrap();
    }

    #[test]
    fn m3_is_not_boolean() {
        let m = m3();
        assert!(!m.is_boolean_interval(4));
        assert!(m.is_boolean_interval(1));
        let flags = m.boolean_flags();
        assert_eq!(flags, vec![true, true, true, true, false]);
    }

    #[test]
    fn rejects_non_lattices() {
        // two maxima
        assert!(AbstractLattice::from_covers(3, &[(0, 1), (0, 2)]).is_err());
        // cycle
        assert!(AbstractLattice::from_covers(3, &[(0, 1), (1, 2), (2, 1)]).is_err());
        // bowtie: a, b both below c, d; no join of a and b
        let bowtie = AbstractLattice::from_covers(
            6,
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        assert!(bowtie.check_lattice().is_err());
    }

    #[test]
    fn from_leq_recovers_covers() {
        let b = boolean(2);
        let leq: Vec<Vec<bool>> = (0..4).map(|x| (0..4).map(|y| b.leq(x, y)).collect()).collect();
        let again = AbstractLattice::from_leq(&leq).unwrap();
        assert_eq!(again.covers(), b.covers());
    }

    #[test]
    fn interval_lattice_of_boolean_is_boolean() {
        let b = boolean(4);
        let (iv, members) = b.interval_lattice(1, 15).unwrap();
        assert_eq!(members.len(), 8);
        assert_eq!(iv.atoms().len(), 3);
        assert!(iv.is_boolean_interval(iv.top()));
    }

    #[test]
    fn close_atoms_in_m3() {
        let m = m3();
        assert!(m.is_atomistic());
        assert_eq!(m.close_atoms(Bits(0b011)), Bits(0b111));
        assert_eq!(m.close_atoms(Bits(0b001)), Bits(0b001));
        assert_eq!(m.join(1, 2).unwrap(), 4);
    }
}
