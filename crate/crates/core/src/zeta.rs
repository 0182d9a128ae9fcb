//! Frobenius characteristic polynomials for covered surfaces, plus the
//! brute-force point counts that pin them down.
//!
//! The middle factor for a covered K3 splits as an algebraic part
//! (1-qT)^rho, rho = 22 - phi(n), and one linear factor per invariant
//! character index with a Jacobi sum as reciprocal root. For the
//! degree-n diagonal surface itself the algebraic multiplicity is 1 and
//! all of the character group contributes. Coefficients are assembled
//! in exact cyclotomic arithmetic and must come out as rational
//! integers; anything else is a hard error, not a rounding concern.

use num::{BigInt, Integer, Zero};

use crate::chars::{char_group, ExponentCover};
use crate::cyclo::{CycInt, CycRing};
use crate::error::{Error, Result};
use crate::field::Rat;
use crate::fq::Fq;
use crate::jacobi::{magnitude_is_q, require_level, DlogClasses};
use crate::kodaira::{Configuration, Place};
use crate::poly::Poly;
use crate::weier::WeierstrassModel;

/// Middle zeta factor P(T) = (1-qT)^rho * prod (1 - j_alpha T) with
/// integer coefficients, ascending.
pub struct ZetaFactor {
    pub n: u64,
    pub q: u64,
    pub rho: u32,
    pub roots: Vec<CycInt>,
    pub coeffs: Vec<BigInt>,
}

impl ZetaFactor {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Trace-formula prediction for the projective point count:
    /// 1 + q^2 + rho*q + sum of the transcendental roots.
    pub fn predicted_count(&self) -> BigInt {
        let ring = CycRing::new(self.n);
        let mut s = ring.zero();
        for r in &self.roots {
            s = ring.add(&s, r);
        }
        let root_sum = ring
            .as_int(&s)
            .expect("root multiset is Galois-stable, hence has rational sum");
        let q = BigInt::from(self.q);
        1 + &q * &q + BigInt::from(self.rho) * &q + root_sum
    }
}

fn assemble(ring: &CycRing, roots: Vec<CycInt>, rho: u32, q: u64) -> Result<ZetaFactor> {
    // multiply out prod (1 - root*T) with cyclotomic coefficients
    let mut poly: Vec<CycInt> = vec![ring.from_int(1)];
    for r in &roots {
        let mut next = Vec::with_capacity(poly.len() + 1);
        next.push(poly[0].clone());
        for i in 1..poly.len() {
            next.push(ring.sub(&poly[i], &ring.mul(r, &poly[i - 1])));
        }
        next.push(ring.neg(&ring.mul(r, poly.last().unwrap())));
        poly = next;
    }
    let mut trans = Vec::with_capacity(poly.len());
    for (i, c) in poly.iter().enumerate() {
        match ring.as_int(c) {
            Some(v) => trans.push(v),
            None => {
                return Err(Error::Unsupported(format!(
                    "zeta coefficient {i} is not a rational integer"
                )))
            }
        }
    }
    // multiply by (1 - qT)^rho
    let mut coeffs = trans;
    let q_big = BigInt::from(q);
    for _ in 0..rho {
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= &q_big * c;
        }
        coeffs = next;
    }
    Ok(ZetaFactor {
        n: ring.n(),
        q,
        rho,
        roots,
        coeffs,
    })
}

/// Middle zeta factor of the degree-n diagonal surface over F_q:
/// algebraic multiplicity 1, all character indices contribute.
pub fn zeta_fermat(n: u64, f: &Fq) -> Result<ZetaFactor> {
    require_level(f, n)?;
    let classes = DlogClasses::build(f, n)?;
    let ring = CycRing::new(n);
    let mut roots = Vec::new();
    for alpha in char_group(n) {
        let j = classes.jacobi(&ring, &alpha);
        if !magnitude_is_q(&ring, &j, f.q()) {
            return Err(Error::Unsupported(format!(
                "Jacobi sum magnitude check failed at alpha = {:?}",
                alpha.a
            )));
        }
        roots.push(j);
    }
    assemble(&ring, roots, 1, f.q())
}

/// Middle zeta factor of a surface dominated by a degree-n diagonal
/// surface, from its covering row: rho = 22 - phi(n) and one root per
/// invariant character index. Degree is always 22.
pub fn zeta_covered(cover: &ExponentCover, f: &Fq) -> Result<ZetaFactor> {
    let n = cover.n;
    require_level(f, n)?;
    let invariant = cover.invariant_chars();
    let rho = 22 - invariant.len() as u32;
    let classes = DlogClasses::build(f, n)?;
    let ring = CycRing::new(n);
    let mut roots = Vec::new();
    for alpha in &invariant {
        let j = classes.jacobi(&ring, alpha);
        if !magnitude_is_q(&ring, &j, f.q()) {
            return Err(Error::Unsupported(format!(
                "Jacobi sum magnitude check failed at alpha = {:?}",
                alpha.a
            )));
        }
        roots.push(j);
    }
    let z = assemble(&ring, roots, rho, f.q())?;
    assert_eq!(z.degree(), 22);
    Ok(z)
}

/// Reduce a rational-coefficient polynomial mod p into field codes
/// (constant term first). Fails if a denominator vanishes mod p.
fn reduce_poly(p: &Poly<Rat>, f: &Fq) -> Result<Vec<u64>> {
    let ch = BigInt::from(f.p());
    let mut out = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        let num = c.numer().mod_floor(&ch);
        let den = c.denom().mod_floor(&ch);
        let num = u64::try_from(&num).expect("mod_floor is nonnegative");
        let den = u64::try_from(&den).expect("mod_floor is nonnegative");
        if den == 0 {
            return Err(Error::BadField(format!(
                "coefficient denominator vanishes mod {}",
                f.p()
            )));
        }
        out.push(f.mul(num, f.inv(den)));
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

fn eval_codes(codes: &[u64], f: &Fq, t: u64) -> u64 {
    let mut acc = 0;
    for c in codes.iter().rev() {
        acc = f.add(f.mul(acc, t), *c);
    }
    acc
}

fn coeff_at(codes: &[u64], i: usize) -> u64 {
    codes.get(i).copied().unwrap_or(0)
}

/// Count points of the smooth projective model over F_q: one pass over
/// the base line counting affine cubic points plus the section, the
/// chart at infinity rescaled by the twist degree, and q extra points
/// for every fiber component contracted in the plane cubic model.
/// Components of reducible fibers sit at rational base points for every
/// shipped surface; a reducible fiber over a thicker residue field has
/// no such correction and is rejected.
pub fn surface_count(
    model: &WeierstrassModel<Rat>,
    config: &Configuration,
    f: &Fq,
    threads: usize,
) -> Result<u64> {
    let q = f.q();
    if f.p() == 2 {
        return Err(Error::BadField(
            "point counting needs odd characteristic".into(),
        ));
    }
    let mut correction: u64 = 0;
    for fiber in &config.fibers {
        let comps = fiber.fiber.components();
        if comps > 1 {
            if let Place::Closed { degree, .. } = &fiber.place {
                return Err(Error::Unsupported(format!(
                    "reducible fiber over a degree-{degree} place has no rational-component count"
                )));
            }
            correction += u64::from(comps - 1) * u64::from(fiber.degree);
        }
    }

    let a1 = reduce_poly(&model.a1, f)?;
    let a2 = reduce_poly(&model.a2, f)?;
    let a3 = reduce_poly(&model.a3, f)?;
    let a4 = reduce_poly(&model.a4, f)?;
    let a6 = reduce_poly(&model.a6, f)?;
    let disc = reduce_poly(&model.c_invariants().disc, f)?;
    if disc.is_empty() {
        return Err(Error::BadField(format!(
            "discriminant vanishes identically mod {}",
            f.p()
        )));
    }

    // nonzero squares table; divisor-free root count for y^2 + Ay = B
    let mut is_square = vec![false; q as usize];
    for x in 1..q {
        is_square[f.mul(x, x) as usize] = true;
    }
    let affine_points = |c1: u64, c2: u64, c3: u64, c4: u64, c6: u64| -> u64 {
        let mut total = 0;
        for x in 0..q {
            let x2 = f.mul(x, x);
            let x3 = f.mul(x2, x);
            let a = f.add(f.mul(c1, x), c3);
            let b = f.add(f.add(x3, f.mul(c2, x2)), f.add(f.mul(c4, x), c6));
            // y^2 + a y - b = 0 has 1 + chi(a^2 + 4b) roots
            let d = f.add(f.mul(a, a), f.mul(4 % q, b));
            total += if d == 0 {
                1
            } else if is_square[d as usize] {
                2
            } else {
                0
            };
        }
        total
    };

    let count_range = |lo: u64, hi: u64| -> u64 {
        let mut sum = 0;
        for t in lo..hi {
            let n = affine_points(
                eval_codes(&a1, f, t),
                eval_codes(&a2, f, t),
                eval_codes(&a3, f, t),
                eval_codes(&a4, f, t),
                eval_codes(&a6, f, t),
            );
            if eval_codes(&disc, f, t) != 0 {
                // good fiber: exact count must sit in the Hasse window
                let diff = n as i64 - q as i64;
                assert!(diff * diff <= 4 * q as i64, "Hasse bound violated at t={t}");
            }
            sum += n + 1;
        }
        sum
    };

    // Exact u64 partial sums, so the total is independent of how the
    // base line is chunked.
    let threads = threads.clamp(1, 64) as u64;
    let mut total: u64 = if threads == 1 {
        count_range(0, q)
    } else {
        let chunk = q.div_ceil(threads);
        let count_range = &count_range;
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for i in 0..threads {
                let (lo, hi) = (i * chunk, ((i + 1) * chunk).min(q));
                if lo < hi {
                    handles.push(scope.spawn(move || count_range(lo, hi)));
                }
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("counting worker panicked"))
                .sum()
        })
    };

    // chart at infinity: substitute t -> 1/t and rescale by the twist
    // degree k, leaving constant coefficients a_i[i * k]
    let k = config.twist_degree as usize;
    total += 1 + affine_points(
        coeff_at(&a1, k),
        coeff_at(&a2, 2 * k),
        coeff_at(&a3, 3 * k),
        coeff_at(&a4, 4 * k),
        coeff_at(&a6, 6 * k),
    );

    Ok(total + correction * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::cover_for;
    use crate::field::rat_int;
    use crate::kodaira::fiber_configuration;

    fn t_pow(k: u32) -> Poly<Rat> {
        Poly::monomial(rat_int(1), k as usize)
    }

    // y^2 = x^3 + t x^2 + t^7
    fn cover_model_m4() -> WeierstrassModel<Rat> {
        WeierstrassModel::new(
            Poly::zero(),
            t_pow(1),
            Poly::zero(),
            Poly::zero(),
            t_pow(7),
        )
    }

    #[test]
    fn fermat_factor_shape() {
        let f = Fq::new(5).unwrap();
        let z = zeta_fermat(4, &f).unwrap();
        assert_eq!(z.degree(), 22);
        assert_eq!(z.rho, 1);
        // linear coefficient = -(q + sum of Jacobi sums) = -(5 - 31)
        assert_eq!(z.coeffs[1], BigInt::from(26));
        assert_eq!(z.predicted_count(), BigInt::zero());
    }

    #[test]
    fn covered_factor_has_degree_22() {
        let f = Fq::new(17).unwrap();
        let z = zeta_covered(cover_for(4, 8).unwrap(), &f).unwrap();
        assert_eq!(z.degree(), 22);
        assert_eq!(z.rho, 18);
        assert_eq!(z.roots.len(), 4);
        assert_eq!(z.coeffs[0], BigInt::from(1));
    }

    #[test]
    fn count_matches_trace_prediction() {
        let model = cover_model_m4();
        let config = fiber_configuration(&model).unwrap();
        let f = Fq::new(17).unwrap();
        let count = surface_count(&model, &config, &f, 1).unwrap();
        assert_eq!(count, surface_count(&model, &config, &f, 3).unwrap());
        let z = zeta_covered(cover_for(4, 8).unwrap(), &f).unwrap();
        assert_eq!(BigInt::from(count), z.predicted_count());
    }

    #[test]
    fn level_mismatch_is_rejected() {
        let f = Fq::new(5).unwrap();
        assert!(zeta_fermat(3, &f).is_err());
        assert!(zeta_covered(cover_for(4, 8).unwrap(), &f).is_err());
    }
}
