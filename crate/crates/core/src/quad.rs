//! Elements of a real or imaginary quadratic field Q(sqrt(d)).
//!
//! A value is `a + b*sqrt(d)` with rational `a`, `b` and a square-free
//! integer radicand `d` (never 0 or 1). Purely rational values carry
//! `d = 0` so that constants such as `zero()` and `one()` need no
//! radicand; binary operations unify the radicands and panic on a
//! genuine mismatch, which is a programming error rather than a data
//! error (the registry layer validates user input before we get here).

use crate::field::{is_squarefree, rat_int, Field, Rat};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadElem {
    a: Rat,
    b: Rat,
    d: i64,
}

impl QuadElem {
    pub fn new(a: Rat, b: Rat, d: i64) -> Self {
        if b.is_zero() {
            return QuadElem { a, b, d: 0 };
        }
        assert!(
            d != 0 && d != 1 && is_squarefree(d),
            "radicand {d} must be square-free and not 0 or 1"
        );
        QuadElem { a, b, d }
    }

    /// sqrt(d) itself.
    pub fn sqrt(d: i64) -> Self {
        QuadElem::new(Rat::zero(), Rat::one(), d)
    }

    pub fn rational(&self) -> &Rat {
        &self.a
    }

    pub fn radical_part(&self) -> &Rat {
        &self.b
    }

    /// Radicand, or 0 for purely rational values.
    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn conj(&self) -> Self {
        QuadElem::new(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm a^2 - d*b^2; zero only on the zero element because d
    /// is not a rational square.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(self.d) * &self.b * &self.b
    }

    fn unify(&self, rhs: &Self) -> i64 {
        match (self.d, rhs.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("mixed radicands sqrt({d1}) and sqrt({d2})"),
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("sqrt({})", self.d);
        let radical = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{radical}")
        } else if self.b.is_negative() {
            // radical already carries its leading minus sign
            write!(f, "{}{}", self.a, radical)
        } else {
            write!(f, "{}+{}", self.a, radical)
        }
    }
}

impl Field for QuadElem {
    fn zero() -> Self {
        QuadElem::new(Rat::zero(), Rat::zero(), 0)
    }
    fn one() -> Self {
        QuadElem::new(Rat::one(), Rat::zero(), 0)
    }
    fn from_int(n: i64) -> Self {
        QuadElem::new(rat_int(n), Rat::zero(), 0)
    }
    fn from_rat(r: &Rat) -> Self {
        QuadElem::new(r.clone(), Rat::zero(), 0)
    }

    fn add(&self, rhs: &Self) -> Self {
        let d = self.unify(rhs);
        QuadElem::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }

    fn sub(&self, rhs: &Self) -> Self {
        let d = self.unify(rhs);
        QuadElem::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }

    fn mul(&self, rhs: &Self) -> Self {
        let d = self.unify(rhs);
        let dr = rat_int(d);
        QuadElem::new(
            &self.a * &rhs.a + &dr * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        )
    }

    fn neg(&self) -> Self {
        QuadElem::new(-self.a.clone(), -self.b.clone(), self.d)
    }

    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        let n = self.norm();
        debug_assert!(!n.is_zero());
        Some(QuadElem::new(&self.a / &n, -&self.b / &n, self.d))
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn as_rat(&self) -> Option<Rat> {
        self.b.is_zero().then(|| self.a.clone())
    }

    fn rat_component(&self) -> Rat {
        self.a.clone()
    }

    fn is_compound(&self) -> bool {
        !self.a.is_zero() && !self.b.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_frac, rat_int};
    use proptest::prelude::*;

    #[test]
    fn sqrt3_squares_to_3() {
        let s = QuadElem::sqrt(3);
        assert_eq!(s.mul(&s), QuadElem::from_int(3));
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        // (1 + sqrt 2)^-1 = sqrt 2 - 1
        let x = QuadElem::new(rat_int(1), rat_int(1), 2);
        let inv = x.inv().unwrap();
        assert_eq!(inv, QuadElem::new(rat_int(-1), rat_int(1), 2));
        assert_eq!(x.mul(&inv), QuadElem::one());
    }

    #[test]
    fn gaussian_arithmetic() {
        // with d = -1: (2 + i)(2 - i) = 5
        let z = QuadElem::new(rat_int(2), rat_int(1), -1);
        assert_eq!(z.mul(&z.conj()), QuadElem::from_int(5));
        assert_eq!(z.norm(), rat_int(5));
    }

    #[test]
    #[should_panic(expected = "square-free")]
    fn rejects_square_radicand() {
        QuadElem::new(rat_int(0), rat_int(1), 4);
    }

    #[test]
    #[should_panic(expected = "mixed radicands")]
    fn rejects_mixed_radicands() {
        let _ = QuadElem::sqrt(2).add(&QuadElem::sqrt(3));
    }

    #[test]
    fn display_forms() {
        assert_eq!(QuadElem::sqrt(3).to_string(), "sqrt(3)");
        assert_eq!(
            QuadElem::new(rat_int(1), rat_int(-1), 3).to_string(),
            "1-sqrt(3)"
        );
        assert_eq!(
            QuadElem::new(rat_int(0), rat_frac(1, 2), 5).to_string(),
            "1/2*sqrt(5)"
        );
        assert_eq!(QuadElem::from_int(-2).to_string(), "-2");
    }

    fn arb_quad() -> impl Strategy<Value = QuadElem> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(|(an, ad, bn, bd)| QuadElem::new(rat_frac(an, ad), rat_frac(bn, bd), 3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn quad_field_axioms(a in arb_quad(), b in arb_quad(), c in arb_quad()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&a.neg()), QuadElem::zero());
            if !Field::is_zero(&a) {
                prop_assert_eq!(a.mul(&a.inv().unwrap()), QuadElem::one());
            }
        }
    }
}
