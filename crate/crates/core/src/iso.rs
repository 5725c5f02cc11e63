//! Order isomorphism of abstract lattices: joint colour refinement on the
//! Hasse diagrams, then backtracking over colour classes.

use std::collections::{HashMap, VecDeque};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::poset::AbstractLattice;

/// Returns an order isomorphism `L1 → L2` (as `map[x1] = x2`) if one exists.
pub fn are_isomorphic(a: &AbstractLattice, b: &AbstractLattice, budget: u64) -> Result<Option<Vec<usize>>> {
    if a.len() != b.len() || a.cover_count() != b.cover_count() || a.atoms().len() != b.atoms().len() {
        return Ok(None);
    }
    if a.has_supports() && b.has_supports() {
        let fa = a.boolean_flags()[a.top()];
        let fb = b.boolean_flags()[b.top()];
        if fa != fb {
            return Ok(None);
        }
        if fa {
            return Ok(Some(boolean_map(a, b)));
        }
    }
    let Some((ca, cb)) = refine(a, b) else {
        return Ok(None);
    };
    if a.is_atomistic() && b.is_atomistic() {
        return AtomSearch::new(a, b, &ca, &cb, budget).run();
    }
    search(a, b, &ca, &cb, budget)
}

/// Both lattices are Boolean with the same number of atoms: match atoms by
/// position and extend through atom supports.
fn boolean_map(a: &AbstractLattice, b: &AbstractLattice) -> Vec<usize> {
    (0..a.len())
        .map(|x| b.element_with_support(a.support(x)).expect("Boolean lattices contain every support"))
        .collect()
}

fn coranks(l: &AbstractLattice) -> Vec<u32> {
    let mut co = vec![0u32; l.len()];
    for &x in l.linear_extension().iter().rev() {
        let x = x as usize;
        for &p in l.upper_covers(x) {
            co[x] = co[x].max(co[p as usize] + 1);
        }
    }
    co
}

/// Colour refinement run on both lattices with a shared palette. Returns
/// `None` as soon as the colour histograms differ.
fn refine(a: &AbstractLattice, b: &AbstractLattice) -> Option<(Vec<u32>, Vec<u32>)> {
    let init = |l: &AbstractLattice| -> Vec<(u32, u32, u32, u32)> {
        let co = coranks(l);
        (0..l.len())
            .map(|x| {
                (
                    l.rank(x) as u32,
                    co[x],
                    l.upper_covers(x).len() as u32,
                    l.lower_covers(x).len() as u32,
                )
            })
            .collect()
    };
    let (ka, kb) = (init(a), init(b));
    let mut palette: Vec<_> = ka.iter().chain(kb.iter()).copied().collect();
    palette.sort_unstable();
    palette.dedup();
    let id = |k: &(u32, u32, u32, u32)| palette.binary_search(k).unwrap() as u32;
    let mut ca: Vec<u32> = ka.iter().map(id).collect();
    let mut cb: Vec<u32> = kb.iter().map(id).collect();
    let mut classes = palette.len();

    loop {
        if histogram(&ca) != histogram(&cb) {
            return None;
        }
        let sig = |l: &AbstractLattice, c: &[u32], x: usize| -> (u32, Vec<u32>, Vec<u32>) {
            let mut ups: Vec<u32> = l.upper_covers(x).iter().map(|&p| c[p as usize]).collect();
            let mut downs: Vec<u32> = l.lower_covers(x).iter().map(|&p| c[p as usize]).collect();
            ups.sort_unstable();
            downs.sort_unstable();
            (c[x], ups, downs)
        };
        let sa: Vec<_> = (0..a.len()).map(|x| sig(a, &ca, x)).collect();
        let sb: Vec<_> = (0..b.len()).map(|x| sig(b, &cb, x)).collect();
        let mut pal: Vec<&(u32, Vec<u32>, Vec<u32>)> = sa.iter().chain(sb.iter()).collect();
        pal.sort_unstable();
        pal.dedup();
        let index: HashMap<&(u32, Vec<u32>, Vec<u32>), u32> =
            pal.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
        ca = sa.iter().map(|s| index[s]).collect();
        cb = sb.iter().map(|s| index[s]).collect();
        if pal.len() == classes {
            break;
        }
        classes = pal.len();
    }
    if histogram(&ca) != histogram(&cb) {
        return None;
    }
    Some((ca, cb))
}

fn histogram(c: &[u32]) -> Vec<(u32, usize)> {
    let mut h: HashMap<u32, usize> = HashMap::new();
    for &x in c {
        *h.entry(x).or_default() += 1;
    }
    let mut v: Vec<_> = h.into_iter().collect();
    v.sort_unstable();
    v
}

/// Breadth-first order over the undirected Hasse diagram, with the
/// already-placed neighbour each vertex is reached through.
fn visit_order(l: &AbstractLattice) -> (Vec<usize>, Vec<Option<(usize, bool)>>) {
    let n = l.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut anchor = vec![None; n];
    let mut queue = VecDeque::from([l.bottom()]);
    seen[l.bottom()] = true;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for (&y, up) in l
            .upper_covers(x)
            .iter()
            .map(|y| (y, true))
            .chain(l.lower_covers(x).iter().map(|y| (y, false)))
        {
            let y = y as usize;
            if !seen[y] {
                seen[y] = true;
                // y is reached from x: y is an upper cover of x when `up`
                anchor[y] = Some((x, up));
                queue.push_back(y);
            }
        }
    }
    (order, anchor)
}

fn search(
    a: &AbstractLattice,
    b: &AbstractLattice,
    ca: &[u32],
    cb: &[u32],
    budget: u64,
) -> Result<Option<Vec<usize>>> {
    let n = a.len();
    let (order, anchor) = visit_order(a);
    let mut by_colour: HashMap<u32, Vec<usize>> = HashMap::new();
    for y in 0..n {
        by_colour.entry(cb[y]).or_default().push(y);
    }

    let mut fwd = vec![usize::MAX; n];
    let mut back = vec![usize::MAX; n];
    let mut nodes = 0u64;

    let candidates = |x: usize, fwd: &[usize], back: &[usize]| -> Vec<usize> {
        match anchor[x] {
            Some((u, up)) => {
                let fu = fwd[u];
                let pool = if up { b.upper_covers(fu) } else { b.lower_covers(fu) };
                pool.iter()
                    .map(|&y| y as usize)
                    .filter(|&y| back[y] == usize::MAX && cb[y] == ca[x])
                    .collect()
            }
            None => by_colour
                .get(&ca[x])
                .map(|v| v.iter().copied().filter(|&y| back[y] == usize::MAX).collect())
                .unwrap_or_default(),
        }
    };

    let consistent = |x: usize, y: usize, fwd: &[usize], back: &[usize]| -> bool {
        let check = |xs: &[u32], ys: &[u32]| {
            let mut mapped = 0;
            for &u in xs {
                let fu = fwd[u as usize];
                if fu != usize::MAX {
                    mapped += 1;
                    if !ys.contains(&(fu as u32)) {
                        return false;
                    }
                }
            }
            mapped == ys.iter().filter(|&&v| back[v as usize] != usize::MAX).count()
        };
        check(a.upper_covers(x), b.upper_covers(y)) && check(a.lower_covers(x), b.lower_covers(y))
    };

    // explicit stack: candidates at each depth and the next one to try
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(candidates(order[0], &fwd, &back), 0)];
    loop {
        let depth = stack.len() - 1;
        let x = order[depth];
        if fwd[x] != usize::MAX {
            back[fwd[x]] = usize::MAX;
            fwd[x] = usize::MAX;
        }
        let (cands, pos) = stack.last_mut().unwrap();
        if *pos == cands.len() {
            stack.pop();
            if stack.is_empty() {
                return Ok(None);
            }
            continue;
        }
        let y = cands[*pos];
        *pos += 1;
        nodes += 1;
        if nodes > budget {
            return Err(Error::Timeout(budget));
        }
        if !consistent(x, y, &fwd, &back) {
            continue;
        }
        fwd[x] = y;
        back[y] = x;
        if depth + 1 == n {
            return Ok(Some(fwd));
        }
        let next = candidates(order[depth + 1], &fwd, &back);
        stack.push((next, 0));
    }
}

/// Isomorphisms of atomistic lattices are the atom bijections carrying the
/// family of supports onto itself. Atoms are assigned most-constrained
/// first; each assignment narrows the remaining domains to atoms whose join
/// with the new image has the same colour as in the source.
struct AtomSearch<'a> {
    a: &'a AbstractLattice,
    b: &'a AbstractLattice,
    m: usize,
    /// `pair_a[x * m + z]`: colour and support of the join of atoms `x`, `z`.
    pair_a: Vec<(u32, Bits)>,
    pair_b: Vec<(u32, Bits)>,
    fwd: Vec<usize>,
    back: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<'a> AtomSearch<'a> {
    fn new(a: &'a AbstractLattice, b: &'a AbstractLattice, ca: &[u32], cb: &[u32], budget: u64) -> AtomSearch<'a> {
        let m = a.atoms().len();
        let table = |l: &AbstractLattice, c: &[u32]| -> Vec<(u32, Bits)> {
            (0..m * m)
                .map(|k| {
                    let s = l.close_atoms(Bits::singleton(k / m).with(k % m));
                    let x = l.element_with_support(s).expect("closed supports are elements");
                    (c[x], s)
                })
                .collect()
        };
        AtomSearch {
            a,
            b,
            m,
            pair_a: table(a, ca),
            pair_b: table(b, cb),
            fwd: vec![usize::MAX; m],
            back: vec![usize::MAX; m],
            nodes: 0,
            budget,
        }
    }

    fn run(mut self) -> Result<Option<Vec<usize>>> {
        let m = self.m;
        let domains: Vec<Bits> = (0..m)
            .map(|x| (0..m).filter(|&y| self.pair_a[x * m + x].0 == self.pair_b[y * m + y].0).collect())
            .collect();
        let mut found = None;
        self.extend(domains, &mut found)?;
        Ok(found)
    }

    /// Element map induced by a complete atom bijection, if every support
    /// lands on a support.
    fn induced(&self) -> Option<Vec<usize>> {
        (0..self.a.len())
            .map(|x| {
                let s: Bits = self.a.support(x).iter().map(|k| self.fwd[k]).collect();
                self.b.element_with_support(s)
            })
            .collect()
    }

    fn mapped(&self, s: Bits) -> Bits {
        s.iter().filter(|&k| self.fwd[k] != usize::MAX).map(|k| self.fwd[k]).collect()
    }

    fn placed_b(&self, s: Bits) -> Bits {
        s.iter().filter(|&k| self.back[k] != usize::MAX).collect()
    }

    /// Whether `x ↦ y` keeps every join with an assigned atom consistent.
    fn consistent(&self, x: usize, y: usize) -> bool {
        let m = self.m;
        (0..m).filter(|&u| self.fwd[u] != usize::MAX).all(|u| {
            let v = self.fwd[u];
            let (ka, sa) = self.pair_a[x * m + u];
            let (kb, sb) = self.pair_b[y * m + v];
            ka == kb && self.mapped(sa) == self.placed_b(sb)
        })
    }

    fn extend(&mut self, domains: Vec<Bits>, found: &mut Option<Vec<usize>>) -> Result<bool> {
        let m = self.m;
        let next = (0..m)
            .filter(|&x| self.fwd[x] == usize::MAX)
            .min_by_key(|&x| domains[x].len());
        let Some(x) = next else {
            *found = self.induced();
            return Ok(found.is_some());
        };
        for y in domains[x].iter() {
            if self.back[y] != usize::MAX {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Timeout(self.budget));
            }
            self.fwd[x] = y;
            self.back[y] = x;
            if self.consistent(x, y) {
                let mut narrowed = domains.clone();
                let mut dead = false;
                for z in (0..m).filter(|&z| self.fwd[z] == usize::MAX) {
                    let key = self.pair_a[x * m + z].0;
                    narrowed[z] = narrowed[z]
                        .iter()
                        .filter(|&w| self.back[w] == usize::MAX && self.pair_b[y * m + w].0 == key)
                        .collect();
                    dead |= narrowed[z].is_empty();
                }
                if !dead && self.extend(narrowed, found)? {
                    return Ok(true);
                }
            }
            self.fwd[x] = usize::MAX;
            self.back[y] = usize::MAX;
        }
        Ok(false)
    }
}

/// Checks that `map` is a bijection carrying covers onto covers. Since both
/// sides have the same number of covers this is an order isomorphism.
pub fn is_cover_isomorphism(a: &AbstractLattice, b: &AbstractLattice, map: &[usize]) -> bool {
    if map.len() != a.len() || a.len() != b.len() || a.cover_count() != b.cover_count() {
        return false;
    }
    let mut hit = vec![false; b.len()];
    for &y in map {
        if y >= b.len() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    a.covers()
        .iter()
        .all(|&(c, p)| b.upper_covers(map[c]).contains(&(map[p] as u32)))
}

/// Checks `x ≤ y ⇔ map(x) ≤ map(y)` on every pair.
pub fn is_order_isomorphism(a: &AbstractLattice, b: &AbstractLattice, map: &[usize]) -> bool {
    if map.len() != a.len() || a.len() != b.len() {
        return false;
    }
    let mut hit = vec![false; b.len()];
    for &y in map {
        if y >= b.len() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    (0..a.len()).all(|x| (0..a.len()).all(|y| a.leq(x, y) == b.leq(map[x], map[y])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from(n: usize, covers: &[(usize, usize)]) -> AbstractLattice {
        AbstractLattice::from_covers(n, covers).unwrap()
    }

    #[test]
    fn pentagon_against_relabelled_copy() {
        // N5: 0 < 1 < 2 < 4, 0 < 3 < 4
        let n5 = from(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]);
        let perm = [4, 2, 0, 1, 3];
        let copy = n5.permuted(&perm).unwrap();
        let map = are_isomorphic(&n5, &copy, 1000).unwrap().unwrap();
        assert_eq!(map, perm.to_vec());
        assert!(is_order_isomorphism(&n5, &copy, &map));
    }

    #[test]
    fn pentagon_is_not_diamond() {
        let n5 = from(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]);
        let m3 = from(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(are_isomorphic(&n5, &m3, 1000).unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        // 2 × 3 grid against a relabelled copy: needs a few nodes
        let grid = from(
            6,
            &[(0, 1), (1, 2), (0, 3), (1, 4), (2, 5), (3, 4), (4, 5)],
        );
        let copy = grid.permuted(&[5, 4, 3, 2, 1, 0]).unwrap();
        assert!(matches!(are_isomorphic(&grid, &copy, 2), Err(Error::Timeout(2))));
        assert!(are_isomorphic(&grid, &copy, 1000).unwrap().is_some());
    }

    fn group_lattice(name: &str, seed: u64) -> AbstractLattice {
        let g = crate::catalog::by_name(name).unwrap();
        let config = crate::Config::default();
        crate::SubrackLattice::enumerate(&crate::Rack::group_rack(&g), &config)
            .unwrap()
            .to_abstract(Some(seed))
            .0
    }

    #[test]
    fn atom_search_agrees_with_element_search() {
        for (x, y, iso) in [("D4", "Q8", true), ("S3", "S3", true), ("A4", "D6", false), ("D5", "Dic3", false)] {
            let (a, b) = (group_lattice(x, 1), group_lattice(y, 2));
            let direct = are_isomorphic(&a, &b, 1_000_000).unwrap();
            assert_eq!(direct.is_some(), iso, "{x} {y}");
            if let Some(map) = &direct {
                assert!(is_order_isomorphism(&a, &b, map));
            }
            if a.len() == b.len() {
                let (ca, cb) = match refine(&a, &b) {
                    Some(c) => c,
                    None => {
                        assert!(!iso);
                        continue;
                    }
                };
                let generic = search(&a, &b, &ca, &cb, 10_000_000).unwrap();
                assert_eq!(generic.is_some(), iso, "{x} {y}");
            }
        }
    }
}
