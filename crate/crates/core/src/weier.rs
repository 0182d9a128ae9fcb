//! Long Weierstrass models over a rational function field in `t`.
//!
//! `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6` with polynomial
//! coefficients. The standard quantities `b2, b4, b6, b8`, the
//! invariants `c4, c6` and the discriminant are computed exactly, and
//! `c4^3 - c6^2 = 1728 disc` is asserted on every computation, so a
//! formula slip cannot survive a single call.

use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassModel<F: Field> {
    pub a1: Poly<F>,
    pub a2: Poly<F>,
    pub a3: Poly<F>,
    pub a4: Poly<F>,
    pub a6: Poly<F>,
}

#[derive(Clone, Debug)]
pub struct CInvariants<F: Field> {
    pub c4: Poly<F>,
    pub c6: Poly<F>,
    pub disc: Poly<F>,
}

impl<F: Field> WeierstrassModel<F> {
    pub fn new(a1: Poly<F>, a2: Poly<F>, a3: Poly<F>, a4: Poly<F>, a6: Poly<F>) -> Self {
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    /// Short form `y^2 = x^3 + a x + b`.
    pub fn short(a4: Poly<F>, a6: Poly<F>) -> Self {
        WeierstrassModel {
            a1: Poly::zero(),
            a2: Poly::zero(),
            a3: Poly::zero(),
            a4,
            a6,
        }
    }

    pub fn b_quantities(&self) -> [Poly<F>; 4] {
        let Self { a1, a2, a3, a4, a6 } = self;
        let b2 = a1.mul(a1).add(&a2.scale(&F::from_int(4)));
        let b4 = a4.scale(&F::from_int(2)).add(&a1.mul(a3));
        let b6 = a3.mul(a3).add(&a6.scale(&F::from_int(4)));
        let b8 = a1
            .mul(a1)
            .mul(a6)
            .add(&a2.mul(a6).scale(&F::from_int(4)))
            .sub(&a1.mul(a3).mul(a4))
            .add(&a2.mul(a3).mul(a3))
            .sub(&a4.mul(a4));
        debug_assert_eq!(
            b8.scale(&F::from_int(4)),
            b2.mul(&b6).sub(&b4.mul(&b4)),
            "4*b8 = b2*b6 - b4^2 must hold"
        );
        [b2, b4, b6, b8]
    }

    pub fn c_invariants(&self) -> CInvariants<F> {
        let [b2, b4, b6, b8] = self.b_quantities();
        let c4 = b2.mul(&b2).sub(&b4.scale(&F::from_int(24)));
        let c6 = b2
            .mul(&b2)
            .mul(&b2)
            .neg()
            .add(&b2.mul(&b4).scale(&F::from_int(36)))
            .sub(&b6.scale(&F::from_int(216)));
        let disc = b2
            .mul(&b2)
            .mul(&b8)
            .neg()
            .sub(&b4.mul(&b4).mul(&b4).scale(&F::from_int(8)))
            .sub(&b6.mul(&b6).scale(&F::from_int(27)))
            .add(&b2.mul(&b4).mul(&b6).scale(&F::from_int(9)));
        assert_eq!(
            c4.mul(&c4).mul(&c4).sub(&c6.mul(&c6)),
            disc.scale(&F::from_int(1728)),
            "c4^3 - c6^2 = 1728*disc must hold"
        );
        CInvariants { c4, c6, disc }
    }

    /// Smallest `k` with `deg a_i <= i*k`: the twist degree that makes
    /// the model a fibration over P^1 with an honest fiber at infinity.
    pub fn twist_degree(&self) -> u32 {
        let mut k = 0u32;
        for (i, a) in [
            (1u32, &self.a1),
            (2, &self.a2),
            (3, &self.a3),
            (4, &self.a4),
            (6, &self.a6),
        ] {
            if let Some(d) = a.degree() {
                k = k.max((d as u32).div_ceil(i));
            }
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rat};

    fn tpow(k: usize) -> Poly<Rat> {
        Poly::monomial(rat_int(1), k)
    }

    #[test]
    fn short_model_invariants() {
        // y^2 = x^3 - 3 t^4 x + (t^5 + t^7)
        let m = WeierstrassModel::short(
            tpow(4).scale(&rat_int(-3)),
            tpow(5).add(&tpow(7)),
        );
        let inv = m.c_invariants();
        assert_eq!(inv.c4, tpow(4).scale(&rat_int(144)));
        assert_eq!(inv.c6, tpow(5).add(&tpow(7)).scale(&rat_int(-864)));
        // disc = (c4^3 - c6^2)/1728
        let expected = inv
            .c4
            .mul(&inv.c4)
            .mul(&inv.c4)
            .sub(&inv.c6.mul(&inv.c6))
            .scale(&rat_int(1728).recip());
        assert_eq!(inv.disc, expected);
        assert_eq!(m.twist_degree(), 2);
    }

    #[test]
    fn long_model_matches_completed_square() {
        // y^2 + t x y = x^3 + x + 1 equals the completed-square short
        // model up to the standard u = 1 change: disc invariant under
        // completing the square.
        let long = WeierstrassModel::new(
            tpow(1),
            Poly::zero(),
            Poly::zero(),
            Poly::one(),
            Poly::one(),
        );
        // completing the square: y -> y - (a1 x + a3)/2 gives
        // a2' = a2 + a1^2/4, a4' = a4 + a1 a3 / 2, a6' = a6 + a3^2/4
        let half_sq = tpow(2).scale(&rat_frac_(1, 4));
        let short = WeierstrassModel::new(
            Poly::zero(),
            half_sq,
            Poly::zero(),
            Poly::one(),
            Poly::one(),
        );
        assert_eq!(long.c_invariants().disc, short.c_invariants().disc);
        assert_eq!(long.c_invariants().c4, short.c_invariants().c4);
    }

    fn rat_frac_(n: i64, d: i64) -> Rat {
        crate::field::rat_frac(n, d)
    }

    #[test]
    fn twist_degree_of_tall_coefficients() {
        // a6 of degree 11 forces k = 2
        let m = WeierstrassModel::short(Poly::zero(), tpow(11));
        assert_eq!(m.twist_degree(), 2);
        let m5 = WeierstrassModel::short(Poly::zero(), tpow(13));
        assert_eq!(m5.twist_degree(), 3);
        let flat = WeierstrassModel::<Rat>::short(Poly::one(), Poly::one());
        assert_eq!(flat.twist_degree(), 0);
    }
}
