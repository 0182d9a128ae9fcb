//! Dense univariate polynomials over an exact field.
//!
//! Coefficients are stored in ascending degree with no trailing zeros,
//! so equality of the coefficient vectors is equality of polynomials.
//! The degree of the zero polynomial is `None`.

use crate::field::{Field, Rat};
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    pub fn monomial(c: F, deg: usize) -> Self {
        let mut coeffs = vec![F::zero(); deg];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| F::from_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        Poly::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlead = divisor.leading().unwrap().inv().unwrap();
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![F::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = rem.leading().unwrap().mul(&dlead);
            let shift = rdeg - ddeg;
            quot[shift] = factor.clone();
            let mut sub = vec![F::zero(); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c.mul(&factor)));
            rem = rem.sub(&Poly::new(sub));
        }
        (Poly::new(quot), rem)
    }

    /// Exact quotient; panics when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly<F>) -> bool {
        if other.is_zero() {
            return true;
        }
        if self.is_constant() {
            return !self.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Largest k with self^k dividing `target` (target nonzero, self nonconstant).
    pub fn valuation_in(&self, target: &Poly<F>) -> u32 {
        assert!(!target.is_zero() && !self.is_constant());
        let mut k = 0;
        let mut rest = target.clone();
        loop {
            let (q, r) = rest.div_rem(self);
            if !r.is_zero() {
                return k;
            }
            k += 1;
            rest = q;
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == F::one())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.mul(&F::from_int(i as i64 + 1)))
                .collect(),
        )
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        assert!(!self.is_zero(), "square-free part of zero");
        if self.is_constant() {
            return Poly::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = term_string(c, i);
            let (sign, bare) = match body.strip_prefix('-') {
                Some(rest) => ('-', rest.to_string()),
                None => ('+', body),
            };
            if first {
                if sign == '-' {
                    write!(f, "-{bare}")?;
                } else {
                    write!(f, "{bare}")?;
                }
                first = false;
            } else {
                write!(f, " {sign} {bare}")?;
            }
        }
        Ok(())
    }
}

fn term_string<F: Field>(c: &F, deg: usize) -> String {
    let cs = if c.is_compound() {
        format!("({c})")
    } else {
        c.to_string()
    };
    match deg {
        0 => cs,
        _ => {
            let var = if deg == 1 {
                "t".to_string()
            } else {
                format!("t^{deg}")
            };
            if *c == F::one() {
                var
            } else if *c == F::one().neg() && !c.is_compound() {
                format!("-{var}")
            } else {
                format!("{cs}*{var}")
            }
        }
    }
}

/// Rational roots of a nonzero polynomial, without multiplicity.
///
/// A rational root must annihilate the rational-coordinate polynomial,
/// so candidates come from that projection (or, when it vanishes
/// identically, from the polynomial rescaled by a coefficient inverse,
/// which lands in Q when every coefficient is purely radical) and are
/// confirmed by evaluating the original polynomial.
pub fn rational_roots<F: Field>(f: &Poly<F>) -> Vec<Rat> {
    assert!(!f.is_zero());
    let re = Poly::new(f.coeffs().iter().map(|c| c.rat_component()).collect());
    let probe: Poly<Rat> = if re.is_zero() {
        let unit = f
            .coeffs()
            .iter()
            .find(|c| !c.is_zero())
            .unwrap()
            .inv()
            .unwrap();
        let scaled = f.scale(&unit);
        match scaled.coeffs().iter().map(|c| c.as_rat()).collect() {
            Some(v) => Poly::new(v),
            None => return vec![],
        }
    } else {
        re
    };
    if probe.is_constant() {
        return vec![];
    }
    rat_poly_root_candidates(&probe)
        .into_iter()
        .filter(|c| f.eval(&F::from_rat(c)).is_zero())
        .collect()
}

/// Root candidates for a rational-coefficient polynomial by the integer
/// root bound: clear denominators, then p/q with p | constant term and
/// q | leading term. Zero is a candidate when the constant term vanishes.
fn rat_poly_root_candidates(f: &Poly<Rat>) -> Vec<Rat> {
    if f.is_constant() {
        return vec![];
    }
    let mut den_lcm = BigInt::one();
    for c in f.coeffs() {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den_lcm / c.denom()))
        .collect();
    let mut out = Vec::new();
    let low = match ints.iter().position(|c| !c.is_zero()) {
        Some(i) => i,
        None => return out,
    };
    if low > 0 {
        out.push(Rat::zero());
    }
    let a0 = ints[low].abs();
    let an = ints.last().unwrap().abs();
    let p_divs = small_divisors(&a0);
    let q_divs = small_divisors(&an);
    for p in &p_divs {
        for q in &q_divs {
            let c = Rat::new(p.clone(), q.clone());
            if !out.contains(&c) {
                out.push(c.clone());
            }
            let nc = -c;
            if !out.contains(&nc) {
                out.push(nc);
            }
        }
    }
    out
}

/// All positive divisors of |n| (n nonzero). The polynomials this runs on
/// have small normalized coefficients, so trial division is fine; bail
/// out quietly on huge inputs rather than stall.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    use num::ToPrimitive;
    let mut out = Vec::new();
    if let Some(n) = n.abs().to_u64() {
        let mut d = 1u64;
        while d.saturating_mul(d) <= n {
            if n % d == 0 {
                out.push(BigInt::from(d));
                if d != n / d {
                    out.push(BigInt::from(n / d));
                }
            }
            d += 1;
        }
    }
    out
}

/// Split off linear factors at rational roots: returns the roots with
/// multiplicities and the unsplit cofactor.
pub fn split_rational_roots<F: Field>(f: &Poly<F>) -> (Vec<(Rat, u32)>, Poly<F>) {
    let mut rest = f.clone();
    let mut roots = Vec::new();
    for r in rational_roots(f) {
        let lin = Poly::new(vec![F::from_rat(&r).neg(), F::one()]);
        let mut mult = 0;
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    }
    (roots, rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_frac, rat_int};
    use crate::quad::QuadElem;

    fn p(coeffs: &[i64]) -> Poly<Rat> {
        Poly::from_ints(coeffs)
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let f = Poly::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(f.degree(), Some(0));
        assert!(Poly::<Rat>::new(vec![rat_int(0)]).is_zero());
        assert_eq!(Poly::<Rat>::zero().degree(), None);
    }

    #[test]
    fn division_with_remainder() {
        // (t^3 - 2t + 5) / (t - 1) = t^2 + t - 1 rem 4
        let f = p(&[5, -2, 0, 1]);
        let d = p(&[-1, 1]);
        let (q, r) = f.div_rem(&d);
        assert_eq!(q, p(&[-1, 1, 1]));
        assert_eq!(r, p(&[4]));
        assert_eq!(q.mul(&d).add(&r), f);
    }

    #[test]
    fn gcd_is_monic() {
        // gcd(2(t-1)(t-2), 4(t-2)(t-3)) = t - 2
        let a = p(&[4, -6, 2]);
        let b = p(&[24, -20, 4]);
        assert_eq!(a.gcd(&b), p(&[-2, 1]));
        assert_eq!(p(&[3]).gcd(&Poly::zero()), Poly::one());
    }

    #[test]
    fn squarefree_part_drops_multiplicity() {
        // t^3 (t-1)^2 -> t(t-1)
        let f = Poly::<Rat>::monomial(rat_int(1), 3).mul(&p(&[1, -2, 1]));
        assert_eq!(f.squarefree_part(), p(&[0, 1]).mul(&p(&[-1, 1])));
    }

    #[test]
    fn squarefree_detects_m4_discriminant_cofactor() {
        // both quartic cofactors that show up at lambda = 1 are square-free
        for f in [p(&[3, 0, -22, 0, 27]), p(&[3, 0, -14, 0, 27])] {
            assert!(f.gcd(&f.derivative()).is_constant());
            assert_eq!(f.squarefree_part(), f.monic());
        }
    }

    #[test]
    fn valuations() {
        let t = p(&[0, 1]);
        let f = p(&[0, 0, 0, 4, 0, -4]); // 4t^3(1 - t^2)
        assert_eq!(t.valuation_in(&f), 3);
        assert_eq!(p(&[-1, 1]).valuation_in(&f), 1);
        assert_eq!(p(&[1, 1]).valuation_in(&f), 1);
        assert_eq!(p(&[2, 1]).valuation_in(&f), 0);
    }

    #[test]
    fn eval_horner() {
        let f = p(&[1, -3, 2]); // 2t^2 - 3t + 1
        assert_eq!(f.eval(&rat_int(2)), rat_int(3));
        assert_eq!(f.eval(&rat_frac(1, 2)), rat_int(0));
    }

    #[test]
    fn rational_root_extraction() {
        // 6(t - 1/2)(t + 3)t = 6t^3 + 15t^2 - 9t... build directly
        let f = p(&[0, -9, 15, 6]);
        let (roots, rest) = split_rational_roots(&f);
        assert!(rest.is_constant());
        let mut got: Vec<Rat> = roots.iter().map(|(r, _)| r.clone()).collect();
        got.sort();
        assert_eq!(got, vec![rat_int(-3), rat_int(0), rat_frac(1, 2)]);
    }

    #[test]
    fn no_rational_roots_of_irreducible_quartic() {
        let f = p(&[4, 0, 0, 0, 27]); // 27t^4 + 4
        assert!(rational_roots(&f).is_empty());
        let (roots, rest) = split_rational_roots(&f);
        assert!(roots.is_empty());
        assert_eq!(rest, f);
    }

    #[test]
    fn quadratic_field_polys() {
        // (sqrt3 t^2 - 1)^2 over Q(sqrt 3): square-free part is the base
        let s3 = QuadElem::sqrt(3);
        let base = Poly::new(vec![QuadElem::from_int(-1), QuadElem::zero(), s3]);
        let sq = base.mul(&base);
        assert_eq!(sq.squarefree_part(), base.monic());
        assert!(rational_roots(&sq).is_empty());
    }

    #[test]
    fn display_text() {
        assert_eq!(p(&[3, 0, -14, 0, 27]).to_string(), "27*t^4 - 14*t^2 + 3");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
        assert_eq!(Poly::<Rat>::zero().to_string(), "0");
        let mixed = Poly::new(vec![QuadElem::from_int(2), QuadElem::sqrt(3).neg()]);
        assert_eq!(mixed.to_string(), "-sqrt(3)*t + 2");
    }
}
