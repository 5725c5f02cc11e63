//! Enumeration of all subracks of a rack into a concrete lattice.
//!
//! Closed sets are produced by lectic-order closed-set enumeration over the
//! rack closure operator, never by scanning all subsets. Two drivers are
//! provided: Ganter's NextClosure loop, which walks the closed sets in lectic
//! order one at a time, and the equivalent canonical-generation tree (each
//! closed set `B` has children `cl(B ∪ {i})` whose new points start at `i`),
//! whose subtrees are independent and are explored in parallel.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::{Bits, MAX_GROUND};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::poset::AbstractLattice;
use crate::rack::Rack;

/// All subracks of a rack, ordered by size and then lexicographically.
#[derive(Debug, Clone)]
pub struct SubrackLattice {
    rack: Rack,
    elements: Vec<Bits>,
    index: HashMap<Bits, u32>,
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
}

/// How closed sets are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// NextClosure, serial, in lectic order.
    NextClosure,
    /// Canonical-generation tree, subtrees in parallel on the current rayon pool.
    Tree,
}

fn check_ground(rack: &Rack, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_GROUND);
    if rack.size() > cap {
        return Err(Error::TooLarge {
            what: "rack ground set",
            size: rack.size(),
            cap,
        });
    }
    Ok(())
}

fn too_many(cap: usize) -> Error {
    Error::TooLarge {
        what: "subrack lattice",
        size: cap + 1,
        cap,
    }
}

/// Ganter's NextClosure: every closed set, in lectic order.
pub fn next_closure(rack: &Rack, cap: usize) -> Result<Vec<Bits>> {
    let m = rack.size();
    let mut current = rack.closure(Bits::EMPTY);
    let mut out = vec![current];
    'next: loop {
        for i in (0..m).rev() {
            if current.contains(i) {
                continue;
            }
            let prefix = current.intersect(Bits::below(i));
            let candidate = rack.closure(prefix.with(i));
            if candidate.intersect(Bits::below(i)) == prefix {
                current = candidate;
                if out.len() >= cap {
                    return Err(too_many(cap));
                }
                out.push(current);
                continue 'next;
            }
        }
        return Ok(out);
    }
}

struct TreeWalk<'a> {
    rack: &'a Rack,
    cap: usize,
    count: &'a AtomicUsize,
    overflow: &'a AtomicBool,
}

impl TreeWalk<'_> {
    /// Canonical children of `closed` using new points `>= start`.
    fn children(&self, closed: Bits, start: usize) -> Vec<(Bits, usize)> {
        let mut kids = Vec::new();
        for i in start..self.rack.size() {
            if closed.contains(i) {
                continue;
            }
            let next = self.rack.closure_extend(closed, Bits::singleton(i));
            if next.intersect(Bits::below(i)) == closed.intersect(Bits::below(i)) {
                kids.push((next, i + 1));
            }
        }
        kids
    }

    fn note(&self, k: usize) -> bool {
        let total = self.count.fetch_add(k, AtomicOrdering::Relaxed) + k;
        if total > self.cap {
            self.overflow.store(true, AtomicOrdering::Relaxed);
        }
        !self.overflow.load(AtomicOrdering::Relaxed)
    }

    fn walk(&self, closed: Bits, start: usize, out: &mut Vec<Bits>) {
        let kids = self.children(closed, start);
        if !self.note(kids.len()) {
            return;
        }
        for (kid, next) in kids {
            out.push(kid);
            self.walk(kid, next, out);
        }
    }
}

/// Every closed set via the canonical-generation tree; output unsorted.
pub fn closed_sets_tree(rack: &Rack, cap: usize) -> Result<Vec<Bits>> {
    let count = AtomicUsize::new(1);
    let overflow = AtomicBool::new(false);
    let walk = TreeWalk {
        rack,
        cap,
        count: &count,
        overflow: &overflow,
    };
    let root = rack.closure(Bits::EMPTY);
    let mut out = vec![root];
    // expand a frontier of prefixes, then hand each subtree to a worker
    let mut frontier = vec![(root, 0usize)];
    let target = 8 * rayon::current_num_threads().max(1);
    while !frontier.is_empty() && frontier.len() < target {
        let mut next = Vec::new();
        for &(b, start) in &frontier {
            let kids = walk.children(b, start);
            walk.note(kids.len());
            out.extend(kids.iter().map(|k| k.0));
            next.extend(kids);
        }
        frontier = next;
        if overflow.load(AtomicOrdering::Relaxed) {
            return Err(too_many(cap));
        }
    }
    let parts: Vec<Vec<Bits>> = frontier
        .par_iter()
        .map(|&(b, start)| {
            let mut v = Vec::new();
            walk.walk(b, start, &mut v);
            v
        })
        .collect();
    if overflow.load(AtomicOrdering::Relaxed) {
        return Err(too_many(cap));
    }
    for p in parts {
        out.extend(p);
    }
    Ok(out)
}

/// Every subset checked for closure. Exponential; test oracle only.
pub fn closed_sets_brute_force(rack: &Rack) -> Vec<Bits> {
    let m = rack.size();
    assert!(m <= 24, "brute-force scan limited to 24 points");
    (0u64..1 << m).map(Bits).filter(|&s| rack.is_closed(s)).collect()
}

/// Upper covers of every element of a closure system, given in canonical
/// order. Each cover of `x` has the form `cl(x ∪ {a})`, so covers are the
/// minimal sets among those.
pub(crate) fn covers_of_closure_system(
    points: usize,
    elements: &[Bits],
    index: &HashMap<Bits, u32>,
    extend: impl Fn(Bits, usize) -> Bits + Sync,
) -> Vec<Vec<u32>> {
    elements
        .par_iter()
        .map(|&x| {
            let mut cands: Vec<Bits> = Vec::new();
            for a in 0..points {
                if !x.contains(a) {
                    let y = extend(x, a);
                    if !cands.contains(&y) {
                        cands.push(y);
                    }
                }
            }
            let mut ups: Vec<u32> = cands
                .iter()
                .filter(|&&y| !cands.iter().any(|&z| z != y && z.is_subset(y)))
                .map(|y| index[y])
                .collect();
            ups.sort_unstable();
            ups
        })
        .collect()
}

pub(crate) fn invert(up: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut down = vec![Vec::new(); up.len()];
    for (c, ps) in up.iter().enumerate() {
        for &p in ps {
            down[p as usize].push(c as u32);
        }
    }
    down
}

impl SubrackLattice {
    pub fn enumerate(rack: &Rack, config: &Config) -> Result<SubrackLattice> {
        SubrackLattice::enumerate_with(rack, config, Strategy::Tree)
    }

    pub fn enumerate_with(rack: &Rack, config: &Config, strategy: Strategy) -> Result<SubrackLattice> {
        check_ground(rack, config.ground_cap)?;
        let sets = match strategy {
            Strategy::NextClosure => next_closure(rack, config.lattice_cap)?,
            Strategy::Tree => closed_sets_tree(rack, config.lattice_cap)?,
        };
        Ok(SubrackLattice::from_closed_sets(rack.clone(), sets))
    }

    /// Builds the lattice from the complete family of closed sets.
    pub fn from_closed_sets(rack: Rack, mut elements: Vec<Bits>) -> SubrackLattice {
        elements.sort_by(Bits::canonical_cmp);
        elements.dedup();
        let index: HashMap<Bits, u32> = elements.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
        let up = covers_of_closure_system(rack.size(), &elements, &index, |x, a| {
            rack.closure_extend(x, Bits::singleton(a))
        });
        let down = invert(&up);
        SubrackLattice {
            rack,
            elements,
            index,
            up,
            down,
        }
    }

    pub fn rack(&self) -> &Rack {
        &self.rack
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Bits] {
        &self.elements
    }

    pub fn members(&self, x: usize) -> Bits {
        self.elements[x]
    }

    pub fn index_of(&self, set: Bits) -> Option<usize> {
        self.index.get(&set).map(|&i| i as usize)
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    fn check(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::BadIndex {
                index: x,
                size: self.len(),
            })
        }
    }

    pub fn upper_covers(&self, x: usize) -> Result<&[u32]> {
        self.check(x)?;
        Ok(&self.up[x])
    }

    pub fn lower_covers(&self, x: usize) -> Result<&[u32]> {
        self.check(x)?;
        Ok(&self.down[x])
    }

    pub fn atoms(&self) -> &[u32] {
        &self.up[self.bottom()]
    }

    pub fn coatoms(&self) -> &[u32] {
        &self.down[self.top()]
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.elements[x].is_subset(self.elements[y])
    }

    pub fn meet(&self, x: usize, y: usize) -> Result<usize> {
        self.check(x)?;
        self.check(y)?;
        let s = self.elements[x].intersect(self.elements[y]);
        Ok(self.index[&s] as usize)
    }

    pub fn join(&self, x: usize, y: usize) -> Result<usize> {
        self.check(x)?;
        self.check(y)?;
        let s = self.rack.closure_extend(self.elements[x], self.elements[y]);
        Ok(self.index[&s] as usize)
    }

    /// `{z : x ≤ z ≤ y}` in index order.
    pub fn interval(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.check(x)?;
        self.check(y)?;
        Ok((0..self.len()).filter(|&z| self.leq(x, z) && self.leq(z, y)).collect())
    }

    /// Length of the longest chain from bottom to top.
    pub fn height(&self) -> usize {
        let mut rank = vec![0usize; self.len()];
        // canonical order lists subsets before supersets
        for x in 0..self.len() {
            for &p in &self.up[x] {
                rank[p as usize] = rank[p as usize].max(rank[x] + 1);
            }
        }
        rank[self.top()]
    }

    /// Cover pairs `(child, parent)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|c| self.up[c].iter().map(move |&p| (c, p as usize)))
            .collect()
    }

    /// Atom position in `abs` of each rack point, for `(abs, map)` as
    /// returned by [`Self::to_abstract`].
    pub fn atom_positions(&self, abs: &AbstractLattice, map: &[usize]) -> Vec<usize> {
        let position: HashMap<u32, usize> = abs.atoms().iter().enumerate().map(|(k, &a)| (a, k)).collect();
        (0..self.rack.size())
            .map(|p| {
                let concrete = self.index[&Bits::singleton(p)] as usize;
                position[&(map[concrete] as u32)]
            })
            .collect()
    }

    /// Strips the member sets, keeping only the order. With a seed, element
    /// indices are shuffled; the returned vector maps each concrete index to
    /// its abstract index.
    pub fn to_abstract(&self, shuffle: Option<u64>) -> (AbstractLattice, Vec<usize>) {
        let n = self.len();
        let mut perm: Vec<usize> = (0..n).collect();
        if let Some(seed) = shuffle {
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        let mut up = vec![Vec::new(); n];
        for x in 0..n {
            let mut ps: Vec<u32> = self.up[x].iter().map(|&p| perm[p as usize] as u32).collect();
            ps.sort_unstable();
            up[perm[x]] = ps;
        }
        let down = invert(&up);
        let abs = AbstractLattice::from_adjacency(up, down).expect("subrack lattices are bounded and acyclic");
        (abs, perm)
    }
}
