//! Text formats.
//!
//! * `.cay`: `n`, then `n` rows of `n` element indices (a Cayley table).
//! * `.pgen`: the degree `d`, then one generator per line in 1-based cycle
//!   notation such as `(1 2)(3 4)`; `()` is the identity.
//! * `.rk`: `m`, then `m` rows of `m` indices giving `a ▷ b`.
//! * `.lat`: `n_elements n_ground`, then one line per element, either
//!   `id popcount members…` (concrete) or `id -` (abstract, `n_ground = 0`),
//!   then `HASSE` and one `child parent` pair per line.
//!
//! Blank lines and lines starting with `#` are ignored on input.

use std::fmt::Write as _;

use crate::bits::Bits;
use crate::error::{parse_err, Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::SubrackLattice;
use crate::poset::AbstractLattice;
use crate::rack::Rack;

/// Non-blank, non-comment lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}

fn square_table(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut it = lines(text);
    let (l0, head) = it.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let n = number(l0, head)?;
    let mut rows = Vec::with_capacity(n);
    for (ln, l) in it.by_ref().take(n) {
        let row: Vec<usize> = l.split_whitespace().map(|t| number(ln, t)).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(parse_err(ln, format!("row has {} entries, expected {n}", row.len())));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(parse_err(ln, format!("entry {x} out of range 0..{n}")));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(parse_err(l0, format!("expected {n} rows, found {}", rows.len())));
    }
    if let Some((ln, _)) = it.next() {
        return Err(parse_err(ln, "trailing content after the table"));
    }
    Ok(rows)
}

fn write_table(n: usize, entry: impl Fn(usize, usize) -> usize) -> String {
    let mut s = format!("{n}\n");
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| entry(a, b).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn read_cayley(text: &str) -> Result<FiniteGroup> {
    let rows = square_table(text)?;
    if rows.is_empty() {
        return Err(parse_err(1, "a group has at least one element"));
    }
    FiniteGroup::from_cayley_table(&rows)
}

pub fn write_cayley(g: &FiniteGroup) -> String {
    write_table(g.order(), |a, b| g.mul(a, b))
}

/// Parses one generator in 1-based cycle notation into a 0-based image array.
pub fn parse_cycles(line: usize, degree: usize, s: &str) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut moved = vec![false; degree];
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| parse_err(line, format!("expected `(` at `{rest}`")))?;
        let close = body
            .find(')')
            .ok_or_else(|| parse_err(line, "unclosed cycle"))?;
        let points: Vec<usize> = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| number(line, t))
            .collect::<Result<_>>()?;
        for &p in &points {
            if p == 0 || p > degree {
                return Err(parse_err(line, format!("point {p} outside 1..{degree}")));
            }
            if moved[p - 1] {
                return Err(parse_err(line, format!("point {p} appears twice")));
            }
            moved[p - 1] = true;
        }
        for (k, &p) in points.iter().enumerate() {
            perm[p - 1] = points[(k + 1) % points.len()] - 1;
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(perm)
}

pub fn read_permutation_generators(text: &str, cap: usize) -> Result<FiniteGroup> {
    let mut it = lines(text);
    let (l0, head) = it.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let degree = number(l0, head)?;
    let gens: Vec<Vec<usize>> = it.map(|(ln, l)| parse_cycles(ln, degree, l)).collect::<Result<_>>()?;
    FiniteGroup::from_permutation_generators(degree, &gens, cap)
}

pub fn read_rack(text: &str) -> Result<Rack> {
    let rows = square_table(text)?;
    if rows.is_empty() {
        return Err(parse_err(1, "a rack has at least one element"));
    }
    Rack::from_table(&rows)
}

pub fn write_rack(r: &Rack) -> String {
    write_table(r.size(), |a, b| r.op(a, b))
}

fn write_hasse(s: &mut String, covers: &[(usize, usize)]) {
    s.push_str("HASSE\n");
    for &(c, p) in covers {
        let _ = writeln!(s, "{c} {p}");
    }
}

pub fn write_lattice(l: &SubrackLattice) -> String {
    let mut s = format!("{} {}\n", l.len(), l.rack().size());
    for x in 0..l.len() {
        let m = l.members(x);
        let _ = write!(s, "{x} {}", m.len());
        for p in m.iter() {
            let _ = write!(s, " {p}");
        }
        s.push('\n');
    }
    write_hasse(&mut s, &l.covers());
    s
}

pub fn write_abstract_lattice(l: &AbstractLattice) -> String {
    let mut s = format!("{} 0\n", l.len());
    for x in 0..l.len() {
        let _ = writeln!(s, "{x} -");
    }
    let mut covers = l.covers();
    covers.sort_unstable();
    write_hasse(&mut s, &covers);
    s
}

/// A parsed `.lat` file.
#[derive(Debug, Clone)]
pub struct LatticeFile {
    pub lattice: AbstractLattice,
    pub ground: usize,
    /// Member sets, for concrete files.
    pub members: Option<Vec<Bits>>,
}

pub fn read_lattice(text: &str) -> Result<LatticeFile> {
    let mut it = lines(text);
    let (l0, head) = it.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(l0, "expected `n_elements n_ground`"));
    }
    let (n, ground) = (number(l0, toks[0])?, number(l0, toks[1])?);
    if n == 0 {
        return Err(parse_err(l0, "a lattice has at least one element"));
    }
    if ground > crate::bits::MAX_GROUND {
        return Err(parse_err(l0, format!("ground set {ground} exceeds {}", crate::bits::MAX_GROUND)));
    }
    let mut members: Vec<Bits> = Vec::with_capacity(n);
    let mut concrete: Option<bool> = None;
    for x in 0..n {
        let (ln, l) = it.next().ok_or_else(|| parse_err(l0, format!("expected {n} element lines")))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.is_empty() || number(ln, toks[0])? != x {
            return Err(parse_err(ln, format!("expected element id {x}")));
        }
        let is_concrete = !(toks.len() == 2 && toks[1] == "-");
        if *concrete.get_or_insert(is_concrete) != is_concrete {
            return Err(parse_err(ln, "mixes concrete and abstract element lines"));
        }
        if !is_concrete {
            continue;
        }
        let count = number(ln, toks.get(1).copied().unwrap_or(""))?;
        let pts: Vec<usize> = toks[2..].iter().map(|t| number(ln, t)).collect::<Result<_>>()?;
        if pts.len() != count {
            return Err(parse_err(ln, format!("popcount {count} but {} members", pts.len())));
        }
        if pts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(ln, "members must be strictly increasing"));
        }
        if let Some(&p) = pts.iter().find(|&&p| p >= ground) {
            return Err(parse_err(ln, format!("member {p} outside ground set of {ground}")));
        }
        members.push(pts.into_iter().collect());
    }
    let (lh, h) = it.next().ok_or_else(|| parse_err(l0, "missing HASSE section"))?;
    if h != "HASSE" {
        return Err(parse_err(lh, "expected `HASSE`"));
    }
    let mut covers = Vec::new();
    for (ln, l) in it {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(ln, "expected `child parent`"));
        }
        let (c, p) = (number(ln, toks[0])?, number(ln, toks[1])?);
        if c >= n || p >= n || c == p {
            return Err(parse_err(ln, format!("bad cover pair {c} {p}")));
        }
        covers.push((c, p));
    }
    let lattice = AbstractLattice::from_covers(n, &covers).map_err(|e| match e {
        Error::NotALattice(m) => parse_err(lh, m),
        other => other,
    })?;
    Ok(LatticeFile {
        lattice,
        ground,
        members: concrete.unwrap_or(false).then_some(members),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::config::Config;

    #[test]
    fn cayley_round_trip() {
        let g = catalog::symmetric(3);
        let h = read_cayley(&write_cayley(&g)).unwrap();
        assert_eq!(h.table(), g.table());
        assert!(matches!(read_cayley("2\n0 1\n1 1\n"), Err(Error::NotAGroup(_))));
        assert!(matches!(read_cayley("2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(read_cayley("2\n0 1\n1 2\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn cycles() {
        assert_eq!(parse_cycles(1, 4, "(1 2)(3 4)").unwrap(), vec![1, 0, 3, 2]);
        assert_eq!(parse_cycles(1, 3, "(1 2 3)").unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_cycles(1, 3, "()").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_cycles(1, 3, "").unwrap(), vec![0, 1, 2]);
        assert!(parse_cycles(1, 3, "(1 4)").is_err());
        assert!(parse_cycles(1, 3, "(1 2)(2 3)").is_err());
        assert!(parse_cycles(1, 3, "(1 2").is_err());
    }

    #[test]
    fn generators() {
        let g = read_permutation_generators("3\n(1 2)\n(1 2 3)\n", 100).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(read_permutation_generators("4\n", 100).unwrap().order(), 1);
        assert_eq!(read_permutation_generators("4\n(1 2 3 4)\n", 100).unwrap().order(), 4);
        assert!(matches!(
            read_permutation_generators("4\n(1 2)\n(1 2 3 4)\n", 10),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn rack_round_trip() {
        let r = Rack::group_rack(&catalog::symmetric(3));
        let s = read_rack(&write_rack(&r)).unwrap();
        assert_eq!(s.table(), r.table());
    }

    #[test]
    fn lattice_round_trip() {
        let g = catalog::symmetric(3);
        let l = SubrackLattice::enumerate(&Rack::group_rack(&g), &Config::default()).unwrap();
        let text = write_lattice(&l);
        let f = read_lattice(&text).unwrap();
        assert_eq!(f.ground, 6);
        assert_eq!(f.members.as_deref(), Some(l.elements()));
        assert_eq!(f.lattice.len(), 18);
        assert_eq!(f.lattice.cover_count(), l.cover_count());

        let abs = l.to_abstract(Some(1)).0;
        let text = write_abstract_lattice(&abs);
        assert!(text.starts_with("18 0\n0 -\n"));
        let back = read_lattice(&text).unwrap();
        assert!(back.members.is_none());
        assert_eq!(write_abstract_lattice(&back.lattice), text);
    }

    #[test]
    fn lattice_errors() {
        assert!(read_lattice("").is_err());
        assert!(read_lattice("2 1\n0 0\n1 1 0\n").is_err());
        assert!(read_lattice("2 1\n0 0\n1 1 0\nHASSE\n0 2\n").is_err());
        assert!(read_lattice("2 1\n0 0\n1 2 0\nHASSE\n0 1\n").is_err());
        assert!(read_lattice("2 1\n0 0\n1 -\nHASSE\n0 1\n").is_err());
        assert!(read_lattice("2 1\n0 0\n1 1 0\nHASSE\n0 1\n").is_ok());
    }
}
