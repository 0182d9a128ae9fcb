//! Gcd-free refinement of a family of polynomials.
//!
//! Given nonzero inputs f_1..f_k, produce pairwise-coprime monic
//! square-free basis polynomials b_1..b_m and an exponent table such
//! that every input is a constant times a product of basis powers.
//! This is what lets us read off exact valuations of c4, c6 and the
//! discriminant at every bad place without factoring anything into
//! irreducibles.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct Refinement<F: Field> {
    /// Monic, square-free, pairwise coprime, each of positive degree.
    pub basis: Vec<Poly<F>>,
    /// `exponents[i][j]` = exponent of `basis[j]` in `inputs[i]`.
    pub exponents: Vec<Vec<u32>>,
}

impl<F: Field> Refinement<F> {
    /// Exponent of `basis[j]` in input `i`.
    pub fn exponent(&self, input: usize, j: usize) -> u32 {
        self.exponents[input][j]
    }
}

pub fn coprime_refinement<F: Field>(inputs: &[Poly<F>]) -> Result<Refinement<F>> {
    if inputs.iter().any(|f| f.is_zero()) {
        return Err(Error::Unsupported(
            "coprime refinement requires nonzero inputs".into(),
        ));
    }

    let mut basis: Vec<Poly<F>> = Vec::new();
    // Seed the worklist with every multiplicity layer of every input, not
    // just the outermost square-free part: two inputs can share the same
    // square-free part while carrying different multiplicities (e.g. t^5*u
    // and t^10*u^2), and only the deeper layers expose the factor that has
    // to be split off.
    let mut work: Vec<Poly<F>> = Vec::new();
    for f in inputs {
        let mut w = f.clone();
        while !w.is_constant() {
            let s = w.squarefree_part();
            w = w.div_exact(&s);
            work.push(s);
        }
    }

    // Invariant: `basis` stays pairwise coprime and square-free. Splitting
    // an element b into (g, b/g) preserves both properties because b is
    // square-free, and a worklist entry shrinks every time a gcd is pulled
    // out of it, so this terminates.
    'outer: while let Some(mut x) = work.pop() {
        let mut i = 0;
        while i < basis.len() {
            if x.is_constant() {
                continue 'outer;
            }
            let g = x.gcd(&basis[i]);
            if g.is_constant() {
                i += 1;
                continue;
            }
            let b = basis.swap_remove(i);
            let b_over_g = b.div_exact(&g).monic();
            x = x.div_exact(&g).monic();
            basis.push(g);
            if !b_over_g.is_constant() {
                basis.push(b_over_g);
            }
            i = 0; // basis changed; rescan
        }
        if !x.is_constant() {
            basis.push(x.monic());
        }
    }

    let mut exponents = Vec::with_capacity(inputs.len());
    for f in inputs {
        let mut row = Vec::with_capacity(basis.len());
        let mut rest = f.clone();
        for b in &basis {
            let e = b.valuation_in(&rest);
            for _ in 0..e {
                rest = rest.div_exact(b);
            }
            row.push(e);
        }
        if !rest.is_constant() {
            return Err(Error::Unsupported(format!(
                "refinement failed to exhaust input: residue {rest}"
            )));
        }
        exponents.push(row);
    }

    Ok(Refinement { basis, exponents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rat};

    fn p(coeffs: &[i64]) -> Poly<Rat> {
        Poly::from_ints(coeffs)
    }

    fn assert_valid<F: Field>(r: &Refinement<F>, inputs: &[Poly<F>]) {
        for b in &r.basis {
            assert!(b.is_monic());
            assert!(!b.is_constant());
            assert_eq!(b.squarefree_part(), *b);
        }
        for i in 0..r.basis.len() {
            for j in i + 1..r.basis.len() {
                assert!(r.basis[i].gcd(&r.basis[j]).is_constant());
            }
        }
        for (f, row) in inputs.iter().zip(&r.exponents) {
            let mut prod = Poly::one();
            for (b, &e) in r.basis.iter().zip(row) {
                prod = prod.mul(&b.pow(e));
            }
            // f = const * prod
            let c = f.leading().unwrap().mul(&prod.leading().unwrap().inv().unwrap());
            assert_eq!(prod.scale(&c), *f);
        }
    }

    #[test]
    fn splits_shared_factor() {
        // {t^3 (t-1), t^2} -> basis {t, t-1}
        let f = Poly::monomial(rat_int(1), 3).mul(&p(&[-1, 1]));
        let g = p(&[0, 0, 1]);
        let inputs = vec![f, g];
        let r = coprime_refinement(&inputs).unwrap();
        assert_valid(&r, &inputs);
        let mut basis: Vec<String> = r.basis.iter().map(|b| b.to_string()).collect();
        basis.sort();
        assert_eq!(basis, vec!["t", "t - 1"]);
        // exponent rows follow basis order; check via reconstruction only
        let total: u32 = r.exponents[0].iter().sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn constants_get_zero_rows() {
        let inputs = vec![p(&[5]), p(&[0, 2])];
        let r = coprime_refinement(&inputs).unwrap();
        assert_valid(&r, &inputs);
        assert_eq!(r.exponents[0], vec![0]);
        assert_eq!(r.exponents[1], vec![1]);
    }

    #[test]
    fn rejects_zero_input() {
        assert!(coprime_refinement(&[Poly::<Rat>::zero()]).is_err());
    }

    #[test]
    fn shared_squarefree_part_different_multiplicities() {
        // Both inputs have square-free part t*(t^2-3); only the layer
        // structure tells t (mult 5 vs 10) apart from t^2-3 (mult 1 vs 2).
        let t = p(&[0, 1]);
        let u = p(&[-3, 0, 1]);
        let inputs = vec![t.pow(5).mul(&u), t.pow(10).mul(&u.pow(2))];
        let r = coprime_refinement(&inputs).unwrap();
        assert_valid(&r, &inputs);
        let mut basis: Vec<String> = r.basis.iter().map(|b| b.to_string()).collect();
        basis.sort();
        assert_eq!(basis, vec!["t", "t^2 - 3"]);
    }

    #[test]
    fn three_way_refinement() {
        // c4-like, c6-like, disc-like data sharing t and t^2+1
        let t = p(&[0, 1]);
        let u = p(&[1, 0, 1]);
        let w = p(&[3, 0, -14, 0, 27]);
        let inputs = vec![
            t.pow(4).scale(&rat_int(16)),
            t.pow(5).mul(&u).scale(&rat_int(-864)),
            t.pow(10).mul(&w),
        ];
        let r = coprime_refinement(&inputs).unwrap();
        assert_valid(&r, &inputs);
        assert_eq!(r.basis.len(), 3);
    }
}
