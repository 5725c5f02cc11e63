//! Finite groups given by Cayley tables, plus the brute-force group-theoretic
//! oracles (classes, derived series, subgroups, quotients) that the
//! lattice-only pipeline is checked against.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// A finite group stored as a full multiplication table. Element `0` is
/// always the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    name: String,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

/// Conjugacy classes, ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClassPartition {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// The derived series `G ⊇ G' ⊇ G'' ⊇ …` down to the point where it stops
/// changing. `length` is `None` when that point is not the trivial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedSeries {
    pub terms: Vec<Vec<usize>>,
    pub length: Option<usize>,
}

impl DerivedSeries {
    pub fn is_solvable(&self) -> bool {
        self.length.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupInvariants {
    pub order: usize,
    pub is_abelian: bool,
    pub nilpotency_class: Option<usize>,
    pub is_solvable: bool,
    pub derived_length: Option<usize>,
    pub is_simple: bool,
}

impl GroupInvariants {
    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_class.is_some()
    }
}

/// A quotient group together with the projection onto coset indices.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: Vec<usize>,
    /// Cosets in quotient-index order; coset `0` is the subgroup itself.
    pub cosets: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, validating the group axioms. If
    /// the identity is not element `0`, it is swapped into that position.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("entry {bad} in row {i} out of range")));
            }
        }
        for i in 0..n {
            if !is_permutation(table[i].iter().copied(), n) {
                return Err(Error::NotAGroup(format!("row {i} is not a permutation")));
            }
            if !is_permutation((0..n).map(|r| table[r][i]), n) {
                return Err(Error::NotAGroup(format!("column {i} is not a permutation")));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }

        // swap labels 0 and e so the identity sits at index 0
        let relabel = |x: usize| -> usize {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u32;
            }
        }
        Ok(FiniteGroup::from_validated(n, mul, format!("G{n}")))
    }

    /// Closes a set of permutations of `0..degree` under composition. The
    /// product `p·q` applies `q` first.
    pub fn from_permutation_generators(
        degree: usize,
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<FiniteGroup> {
        for g in gens {
            if g.len() != degree || !is_permutation(g.iter().copied(), degree) {
                return Err(Error::NotAGroup(format!(
                    "generator {g:?} is not a permutation of {degree} points"
                )));
            }
        }
        let identity: Vec<u16> = (0..degree as u16).collect();
        let gens: Vec<Vec<u16>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| x as u16).collect())
            .collect();
        let compose = |p: &[u16], q: &[u16]| -> Vec<u16> { q.iter().map(|&x| p[x as usize]).collect() };

        let mut elems = vec![identity.clone()];
        let mut index: HashMap<Vec<u16>, usize> = HashMap::from([(identity, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in &gens {
                let next = compose(&elems[i], g);
                if !index.contains_key(&next) {
                    if elems.len() >= cap {
                        return Err(Error::TooLarge {
                            what: "generated group",
                            size: elems.len() + 1,
                            cap,
                        });
                    }
                    index.insert(next.clone(), elems.len());
                    elems.push(next);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&compose(&elems[a], &elems[b])] as u32;
            }
        }
        Ok(FiniteGroup::from_validated(n, mul, format!("Perm{degree}({n})")))
    }

    /// Table is trusted to be a group table with identity 0.
    pub(crate) fn from_validated(order: usize, mul: Vec<u32>, name: String) -> FiniteGroup {
        let mut inv = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        FiniteGroup {
            order,
            mul,
            inv,
            name,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> FiniteGroup {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `a b a⁻¹`
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commutes(a, b)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.commutes(z, g)))
            .collect()
    }

    pub fn conjugacy_classes(&self) -> ConjClassPartition {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let k = classes.len();
            let mut class = Vec::new();
            for a in 0..n {
                let c = self.conj(a, g);
                if class_of[c] == usize::MAX {
                    class_of[c] = k;
                    class.push(c);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        ConjClassPartition { classes, class_of }
    }

    /// Subgroup generated by `gens`, as a sorted member list.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut members = vec![0];
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        for &g in &gens {
            if !mask[g] {
                mask[g] = true;
                members.push(g);
            }
        }
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in &gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    /// `[H, K]`, the subgroup generated by all commutators of members.
    pub fn commutator_subgroup(&self, h: &[usize], k: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut gens = Vec::new();
        for &a in h {
            for &b in k {
                let c = self.commutator(a, b);
                if !seen[c] {
                    seen[c] = true;
                    gens.push(c);
                }
            }
        }
        self.generate(&gens)
    }

    pub fn derived_series(&self) -> DerivedSeries {
        let mut terms = vec![(0..self.order).collect::<Vec<_>>()];
        loop {
            let last = terms.last().unwrap();
            if last.len() == 1 {
                let length = terms.len() - 1;
                return DerivedSeries {
                    terms,
                    length: Some(length),
                };
            }
            let next = self.commutator_subgroup(last, last);
            if next.len() == last.len() {
                return DerivedSeries {
                    terms,
                    length: None,
                };
            }
            terms.push(next);
        }
    }

    /// Nilpotency class from the lower central series; `None` if the series
    /// stalls above the trivial group.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let all: Vec<usize> = (0..self.order).collect();
        let mut term = all.clone();
        let mut steps = 0;
        while term.len() > 1 {
            let next = self.commutator_subgroup(&term, &all);
            if next.len() == term.len() {
                return None;
            }
            term = next;
            steps += 1;
        }
        Some(steps)
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let mut mask = vec![false; self.order];
        for &x in h {
            mask[x] = true;
        }
        mask[0] && h.iter().all(|&a| h.iter().all(|&b| mask[self.mul(a, self.inv(b))]))
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        let mut mask = vec![false; self.order];
        for &x in h {
            mask[x] = true;
        }
        (0..self.order).all(|a| h.iter().all(|&x| mask[self.conj(a, x)]))
    }

    pub fn is_abelian_subset(&self, h: &[usize]) -> bool {
        h.iter()
            .enumerate()
            .all(|(i, &a)| h[i + 1..].iter().all(|&b| self.commutes(a, b)))
    }

    /// All subgroups, sorted by size then lexicographically. Found by
    /// extending known subgroups by one element at a time.
    pub fn subgroups(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        if self.order > cap {
            return Err(Error::TooLarge {
                what: "group for subgroup enumeration",
                size: self.order,
                cap,
            });
        }
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        found.insert(vec![0]);
        queue.push_back(vec![0]);
        while let Some(h) = queue.pop_front() {
            let mut mask = vec![false; self.order];
            for &x in &h {
                mask[x] = true;
            }
            for g in 0..self.order {
                if mask[g] {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generate(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut all: Vec<Vec<usize>> = found.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(all)
    }

    /// All normal subgroups, found as subgroups generated by unions of
    /// classes. Does not need the full subgroup list.
    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        let classes = self.conjugacy_classes();
        let mut found: HashSet<Vec<usize>> = HashSet::from([vec![0]]);
        let mut queue = VecDeque::from([vec![0usize]]);
        while let Some(n) = queue.pop_front() {
            let mut mask = vec![false; self.order];
            for &x in &n {
                mask[x] = true;
            }
            for class in &classes.classes {
                if mask[class[0]] {
                    continue;
                }
                let mut gens = n.clone();
                gens.extend_from_slice(class);
                let m = self.generate(&gens);
                if found.insert(m.clone()) {
                    queue.push_back(m);
                }
            }
        }
        let mut all: Vec<Vec<usize>> = found.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    pub fn maximal_abelian_subgroups(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let abelian: Vec<Vec<usize>> = self
            .subgroups(cap)?
            .into_iter()
            .filter(|h| self.is_abelian_subset(h))
            .collect();
        Ok(inclusion_maximal(abelian))
    }

    pub fn maximal_normal_abelian_subgroups(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let candidates: Vec<Vec<usize>> = self
            .subgroups(cap)?
            .into_iter()
            .filter(|h| self.is_abelian_subset(h) && self.is_normal(h))
            .collect();
        Ok(inclusion_maximal(candidates))
    }

    pub fn quotient(&self, normal: &[usize]) -> Result<Quotient> {
        if !self.is_subgroup(normal) || !self.is_normal(normal) {
            return Err(Error::NotNormal);
        }
        let n = self.order;
        let mut projection = vec![usize::MAX; n];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if projection[g] != usize::MAX {
                continue;
            }
            let k = cosets.len();
            let mut coset: Vec<usize> = normal.iter().map(|&x| self.mul(g, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                projection[x] = k;
            }
            cosets.push(coset);
        }
        let m = cosets.len();
        let mut mul = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                mul[i * m + j] = projection[self.mul(cosets[i][0], cosets[j][0])] as u32;
            }
        }
        let group = FiniteGroup::from_validated(m, mul, format!("{}/N{}", self.name, normal.len()));
        Ok(Quotient {
            group,
            projection,
            cosets,
        })
    }

    pub fn invariants(&self) -> GroupInvariants {
        let derived = self.derived_series();
        let normals = self.normal_subgroups();
        GroupInvariants {
            order: self.order,
            is_abelian: self.is_abelian(),
            nilpotency_class: self.nilpotency_class(),
            is_solvable: derived.is_solvable(),
            derived_length: derived.length,
            is_simple: self.order > 1 && normals.len() == 2,
        }
    }

    /// Transports the table through `perm` (old index to new index), which
    /// must fix the identity.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteGroup> {
        let n = self.order;
        if perm.len() != n || !is_permutation(perm.iter().copied(), n) || perm[0] != 0 {
            return Err(Error::BadPartition(
                "relabelling must be a permutation fixing the identity".into(),
            ));
        }
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u32;
            }
        }
        Ok(FiniteGroup::from_validated(n, mul, self.name.clone()))
    }

    /// `self × other`, with `(a, b)` stored at `a·|other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n1, n2) = (self.order, other.order);
        let n = n1 * n2;
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / n2, a % n2);
                let (b1, b2) = (b / n2, b % n2);
                mul[a * n + b] = (self.mul(a1, b1) * n2 + other.mul(a2, b2)) as u32;
            }
        }
        FiniteGroup::from_validated(n, mul, format!("{}x{}", self.name, other.name))
    }
}

fn is_permutation(iter: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut count = 0;
    for x in iter {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
        count += 1;
    }
    count == n
}

pub(crate) fn inclusion_maximal(sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let is_sub = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
    sets.iter()
        .filter(|a| {
            !sets
                .iter()
                .any(|b| b.len() > a.len() && is_sub(a, b))
        })
        .cloned()
        .collect()
}
