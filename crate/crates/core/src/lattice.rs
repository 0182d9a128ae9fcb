//! Even lattices given by Gram matrices, with a small expression
//! language for building them out of standard pieces.
//!
//! Expressions look like `U + D8 + E8`, `U(2) + D4^3`, `<2>^2`:
//!
//! ```text
//! expr := term ('+' term)*
//! term := atom ('^' INT)?
//! atom := 'U' | 'U(' INT ')' | 'A' INT | 'D' INT | 'E' INT | '<' INT '>'
//! ```
//!
//! `U` is the rank-two hyperbolic plane, `U(k)` the same form scaled by
//! `k`, `A`/`D`/`E` the negative-definite root lattices, and `<k>` the
//! rank-one lattice generated by a vector of square `k`. Whitespace is
//! ignored.

use crate::error::{Error, Result};
use crate::field::Rat;
use crate::snf::{self, Mat};
use num::bigint::BigInt;
use num::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Atom {
    U,
    UScaled(i64),
    Root(char, u32),
    Diag(i64),
}

impl Atom {
    fn gram(&self) -> Mat {
        match self {
            Atom::U => hyperbolic(1),
            Atom::UScaled(k) => hyperbolic(*k),
            Atom::Root(fam, n) => root_gram(*fam, *n),
            Atom::Diag(k) => vec![vec![BigInt::from(*k)]],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::U => write!(f, "U"),
            Atom::UScaled(k) => write!(f, "U({k})"),
            Atom::Root(fam, n) => write!(f, "{fam}{n}"),
            Atom::Diag(k) => write!(f, "<{k}>"),
        }
    }
}

pub fn hyperbolic(k: i64) -> Mat {
    snf::mat_from_i64(&[vec![0, k], vec![k, 0]])
}

/// Negative-definite root lattice Gram matrix: -2 on the diagonal, +1
/// between bonded nodes. `A n` is the chain; `D n` bonds node n to node
/// n-2 of a length n-1 chain; `E n` (n = 6, 7, 8) bonds node n to node
/// n-3 of a length n-1 chain.
pub fn root_gram(family: char, n: u32) -> Mat {
    let n = n as usize;
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = BigInt::from(-2);
    }
    let mut bond = |i: usize, j: usize| {
        g[i][j] = BigInt::one();
        g[j][i] = BigInt::one();
    };
    let chain = match family {
        'A' => n,
        _ => n - 1,
    };
    for i in 1..chain {
        bond(i - 1, i);
    }
    match family {
        'A' => {}
        'D' => bond(n - 1, n - 3),
        'E' => bond(n - 1, n - 4),
        _ => unreachable!("root family {family}"),
    }
    g
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    terms: Vec<(Atom, u32)>,
    gram: Mat,
}

impl Lattice {
    pub fn from_terms(terms: Vec<(Atom, u32)>) -> Self {
        let mut blocks = Vec::new();
        for (atom, count) in &terms {
            for _ in 0..*count {
                blocks.push(atom.gram());
            }
        }
        Lattice {
            terms,
            gram: block_diagonal(&blocks),
        }
    }

    /// A lattice that exists only as a Gram matrix, e.g. an overlattice.
    pub fn from_gram(gram: Mat) -> Self {
        Lattice {
            terms: vec![],
            gram,
        }
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn terms(&self) -> &[(Atom, u32)] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        snf::det(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        self.gram
            .iter()
            .enumerate()
            .all(|(i, row)| (&row[i] % BigInt::from(2)).is_zero())
    }

    /// Numbers of positive and negative squares; panics on a degenerate
    /// form (nothing in this crate builds one).
    pub fn signature(&self) -> (usize, usize) {
        signature(&self.gram)
    }

    pub fn direct_sum(&self, rhs: &Lattice) -> Lattice {
        let mut terms = self.terms.clone();
        for (atom, count) in &rhs.terms {
            match terms.last_mut() {
                Some((a, c)) if a == atom => *c += count,
                _ => terms.push((atom.clone(), *count)),
            }
        }
        Lattice {
            terms,
            gram: block_diagonal(&[self.gram.clone(), rhs.gram.clone()]),
        }
    }

    /// True when the expression contains a plain `U` summand.
    pub fn has_hyperbolic_summand(&self) -> bool {
        self.terms.iter().any(|(a, _)| *a == Atom::U)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "[rank {} gram]", self.rank());
        }
        let mut first = true;
        for (atom, count) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{atom}")?;
            if *count > 1 {
                write!(f, "^{count}")?;
            }
        }
        Ok(())
    }
}

pub fn block_diagonal(blocks: &[Mat]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut g = vec![vec![BigInt::zero(); n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                g[off + i][off + j] = x.clone();
            }
        }
        off += b.len();
    }
    g
}

pub fn parse_lattice(input: &str) -> Result<Lattice> {
    let src: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |msg: String| Error::Parse(format!("in lattice '{}': {msg}", input.trim()));
    let mut pos = 0;
    let mut terms: Vec<(Atom, u32)> = Vec::new();

    let read_int = |pos: &mut usize, allow_sign: bool| -> Result<i64> {
        let start = *pos;
        if allow_sign && src.get(*pos) == Some(&'-') {
            *pos += 1;
        }
        while src.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
            *pos += 1;
        }
        let text: String = src[start..*pos].iter().collect();
        text.parse()
            .map_err(|_| bad(format!("expected integer at offset {start}")))
    };

    loop {
        let atom = match src.get(pos) {
            Some('U') => {
                pos += 1;
                if src.get(pos) == Some(&'(') {
                    pos += 1;
                    let k = read_int(&mut pos, false)?;
                    if src.get(pos) != Some(&')') {
                        return Err(bad("missing ')'".into()));
                    }
                    pos += 1;
                    if k < 1 {
                        return Err(bad(format!("scale {k} must be positive")));
                    }
                    if k == 1 {
                        Atom::U
                    } else {
                        Atom::UScaled(k)
                    }
                } else {
                    Atom::U
                }
            }
            Some(&fam @ ('A' | 'D' | 'E')) => {
                pos += 1;
                let n = read_int(&mut pos, false)?;
                let ok = match fam {
                    'A' => n >= 1,
                    'D' => n >= 3,
                    _ => (6..=8).contains(&n),
                };
                if !ok {
                    return Err(bad(format!("no root lattice {fam}{n}")));
                }
                Atom::Root(fam, n as u32)
            }
            Some('<') => {
                pos += 1;
                let k = read_int(&mut pos, true)?;
                if src.get(pos) != Some(&'>') {
                    return Err(bad("missing '>'".into()));
                }
                pos += 1;
                if k == 0 {
                    return Err(bad("<0> is degenerate".into()));
                }
                Atom::Diag(k)
            }
            Some(c) => return Err(bad(format!("unexpected '{c}'"))),
            None => return Err(bad("empty summand".into())),
        };

        let mut count = 1u32;
        if src.get(pos) == Some(&'^') {
            pos += 1;
            let e = read_int(&mut pos, false)?;
            if !(1..=32).contains(&e) {
                return Err(bad(format!("exponent {e} out of range")));
            }
            count = e as u32;
        }
        match terms.last_mut() {
            Some((a, c)) if *a == atom => *c += count,
            _ => terms.push((atom, count)),
        }

        match src.get(pos) {
            None => break,
            Some('+') => pos += 1,
            Some(c) => return Err(bad(format!("unexpected '{c}'"))),
        }
    }

    Ok(Lattice::from_terms(terms))
}

/// Sylvester signature of a nondegenerate symmetric integer matrix by
/// exact congruent diagonalization.
#[allow(clippy::needless_range_loop)] // simultaneous row/column updates
pub fn signature(gram: &Mat) -> (usize, usize) {
    let n = gram.len();
    let mut m: Vec<Vec<Rat>> = gram
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_bigint(x.clone())).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else {
                // fully isotropic diagonal: fold in a row with a nonzero
                // pairing so the pivot becomes 2*m[k][j] != 0
                let j = (k + 1..n)
                    .find(|&j| !m[k][j].is_zero())
                    .expect("degenerate symmetric form");
                for i in 0..n {
                    let x = m[j][i].clone();
                    m[k][i] = &m[k][i] + &x;
                }
                for i in 0..n {
                    let x = m[i][j].clone();
                    m[i][k] = &m[i][k] + &x;
                }
            }
        }
        let pivot = m[k][k].clone();
        if pivot.is_negative() {
            neg += 1;
        } else {
            pos += 1;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in 0..n {
                let s = &f * &m[k][j];
                m[i][j] = &m[i][j] - &s;
            }
            for j in 0..n {
                let s = &f * &m[j][k];
                m[j][i] = &m[j][i] - &s;
            }
        }
    }
    (pos, neg)
}

/// The even overlattice `L + Z*(w/2)` of index two, as a Gram matrix in
/// a new basis. `w` is an integer vector of coordinates in `L`; the
/// call fails when `w/2` does not pair integrally with `L` or does not
/// have even square, i.e. when the candidate is not an even lattice.
pub fn extend_by_half_vector(gram: &Mat, w: &[BigInt]) -> Result<Mat> {
    let n = gram.len();
    assert_eq!(w.len(), n);
    let mut stack: Mat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::from(2)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    stack.push(w.to_vec());
    let basis2 = snf::row_hnf(&stack); // basis of 2M inside L
    if basis2.len() != n {
        return Err(Error::Glue("extension is not full rank".into()));
    }
    // Gram of M = (1/4) * B G B^T
    let bg = snf::mat_mul(&basis2, gram);
    let bt: Mat = (0..n)
        .map(|j| (0..n).map(|i| basis2[i][j].clone()).collect())
        .collect();
    let g4 = snf::mat_mul(&bg, &bt);
    let four = BigInt::from(4);
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (q, r) = num::Integer::div_rem(&g4[i][j], &four);
            if !r.is_zero() {
                return Err(Error::Glue(format!(
                    "half vector pairs non-integrally (entry {i},{j})"
                )));
            }
            out[i][j] = q;
        }
    }
    for (i, row) in out.iter().enumerate() {
        if !(&row[i] % BigInt::from(2)).is_zero() {
            return Err(Error::Glue(format!("extension is not even (entry {i})")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_i64(l: &Lattice) -> i64 {
        i64::try_from(&l.det()).unwrap()
    }

    #[test]
    fn root_lattice_determinants() {
        for (fam, n, want) in [
            ('A', 1, -2),
            ('A', 2, 3),
            ('A', 3, -4),
            ('D', 4, 4),
            ('D', 8, 4),
            ('E', 6, 3),
            ('E', 7, -2),
            ('E', 8, 1),
        ] {
            let l = Lattice::from_terms(vec![(Atom::Root(fam, n), 1)]);
            assert_eq!(det_i64(&l), want, "{fam}{n}");
            assert!(l.is_even());
            assert_eq!(l.signature(), (0, n as usize));
        }
    }

    #[test]
    fn hyperbolic_planes() {
        let u = parse_lattice("U").unwrap();
        assert_eq!(det_i64(&u), -1);
        assert_eq!(u.signature(), (1, 1));
        let u2 = parse_lattice("U(2)").unwrap();
        assert_eq!(det_i64(&u2), -4);
        assert_eq!(u2.signature(), (1, 1));
        assert!(u2.is_even());
    }

    #[test]
    fn k3_transcendental_and_picard_shapes() {
        let ns = parse_lattice("U + E8^2 + A1^2").unwrap();
        assert_eq!(ns.rank(), 20);
        assert_eq!(ns.signature(), (1, 19));
        assert_eq!(det_i64(&ns), -4);

        let t = parse_lattice("<2>^2").unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(t.signature(), (2, 0));
        assert_eq!(det_i64(&t), 4);
    }

    #[test]
    fn parse_canonical_rendering() {
        for (src, canon) in [
            ("U+D8+E8", "U + D8 + E8"),
            (" U(2) + D4 ^3 ", "U(2) + D4^3"),
            ("U + U", "U^2"),
            ("U(1)", "U"),
            ("<2>^2", "<2>^2"),
            ("<-4>", "<-4>"),
        ] {
            let l = parse_lattice(src).unwrap();
            assert_eq!(l.to_string(), canon);
            assert_eq!(parse_lattice(&l.to_string()).unwrap(), l);
        }
    }

    #[test]
    fn parse_rejections() {
        for bad in [
            "", "B3", "E9", "E5", "A0", "D2", "U(0)", "<0>", "U+", "U)", "A1^0", "A1 A2",
        ] {
            assert!(parse_lattice(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn direct_sum_merges_terms() {
        let a = parse_lattice("U + D4").unwrap();
        let b = parse_lattice("D4^2").unwrap();
        let s = a.direct_sum(&b);
        assert_eq!(s.to_string(), "U + D4^3");
        assert_eq!(s.rank(), 14);
        assert_eq!(s.det(), parse_lattice("U + D4^3").unwrap().det());
    }

    #[test]
    fn hyperbolic_summand_detection() {
        assert!(parse_lattice("U + D8 + E8").unwrap().has_hyperbolic_summand());
        assert!(!parse_lattice("U(2) + D4^3").unwrap().has_hyperbolic_summand());
        assert!(!parse_lattice("<2>^2").unwrap().has_hyperbolic_summand());
    }

    #[test]
    fn four_orthogonal_roots_glue_to_d4() {
        let a14 = parse_lattice("A1^4").unwrap();
        let w: Vec<BigInt> = vec![1.into(), 1.into(), 1.into(), 1.into()];
        let g = extend_by_half_vector(a14.gram(), &w).unwrap();
        let m = Lattice::from_gram(g);
        assert_eq!(m.det(), parse_lattice("D4").unwrap().det());
        assert!(m.is_even());
        assert_eq!(m.signature(), (0, 4));
        let s = snf::smith_normal_form(m.gram());
        let inv: Vec<i64> = s.diag.iter().map(|d| i64::try_from(d).unwrap()).collect();
        assert_eq!(inv, vec![1, 1, 2, 2]);
    }

    #[test]
    fn bad_glue_is_rejected() {
        let a12 = parse_lattice("A1^2").unwrap();
        // (e1)/2 pairs with e1 by -1: not integral
        let w: Vec<BigInt> = vec![1.into(), 0.into()];
        assert!(extend_by_half_vector(a12.gram(), &w).is_err());
    }

    #[test]
    fn signature_handles_isotropic_diagonal_blocks() {
        let l = parse_lattice("U^3 + E8^2").unwrap();
        assert_eq!(l.signature(), (3, 19));
    }
}
