//! Exact arithmetic in Z[zeta_n], the ring of integers of the n-th
//! cyclotomic field.
//!
//! Elements are integer coordinate vectors in the power basis
//! `1, zeta, ..., zeta^(phi(n)-1)`; a shared [`CycRing`] holds a table
//! expressing every needed power of `zeta` in that basis, so products
//! reduce by table lookup. Representation in the power basis is unique,
//! which makes equality and rationality tests trivial.

use num::bigint::BigInt;
use num::{One, Zero};

/// Euler's totient by trial-division factoring; n is tiny here.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut pk = 1;
            while n.is_multiple_of(p) {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Coefficients of the n-th cyclotomic polynomial, ascending, via the
/// Moebius product of `x^d - 1` over divisors.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num: Vec<BigInt> = vec![BigInt::one()]; // running numerator
    let mut den: Vec<BigInt> = vec![BigInt::one()];
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        match moebius(n / d) {
            1 => num = poly_mul_z(&num, &x_pow_minus_one(d)),
            -1 => den = poly_mul_z(&den, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    poly_div_exact_z(&num, &den)
}

fn moebius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn x_pow_minus_one(d: u64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d as usize + 1];
    v[0] = -BigInt::one();
    v[d as usize] = BigInt::one();
    v
}

fn poly_mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials (the divisor is monic up to
/// sign in every call here).
fn poly_div_exact_z(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    quot
}

pub struct CycRing {
    n: u64,
    phi: usize,
    /// `power[k]` = coordinates of `zeta^k`; long enough to reduce any
    /// product of two basis monomials.
    power: Vec<Vec<BigInt>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycInt {
    coords: Vec<BigInt>,
}

impl CycRing {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let min_poly = cyclotomic_polynomial(n);
        let phi = min_poly.len() - 1;
        let max_pow = (n as usize).max(2 * phi.max(1) - 1);
        let mut power: Vec<Vec<BigInt>> = Vec::with_capacity(max_pow);
        for k in 0..max_pow {
            if k < phi {
                let mut e = vec![BigInt::zero(); phi];
                e[k] = BigInt::one();
                power.push(e);
            } else {
                // zeta^k = zeta * zeta^(k-1), reduced by the minimal polynomial
                let prev = power[k - 1].clone();
                let mut shifted = vec![BigInt::zero(); phi + 1];
                for (i, c) in prev.iter().enumerate() {
                    shifted[i + 1] = c.clone();
                }
                let top = shifted[phi].clone();
                if !top.is_zero() {
                    for i in 0..phi {
                        let s = &top * &min_poly[i];
                        shifted[i] -= s;
                    }
                }
                shifted.truncate(phi);
                power.push(shifted);
            }
        }
        CycRing { n, phi, power }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(&self) -> CycInt {
        CycInt {
            coords: vec![BigInt::zero(); self.phi],
        }
    }

    pub fn from_int(&self, v: i64) -> CycInt {
        let mut x = self.zero();
        if self.phi > 0 {
            x.coords[0] = BigInt::from(v);
        }
        x
    }

    /// `zeta^k` for any integer exponent, reduced mod n.
    pub fn root_power(&self, k: i64) -> CycInt {
        let k = k.rem_euclid(self.n as i64) as usize;
        CycInt {
            coords: self.power[k].clone(),
        }
    }

    pub fn add(&self, a: &CycInt, b: &CycInt) -> CycInt {
        CycInt {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, a: &CycInt, b: &CycInt) -> CycInt {
        CycInt {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn neg(&self, a: &CycInt) -> CycInt {
        CycInt {
            coords: a.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, a: &CycInt, b: &CycInt) -> CycInt {
        let mut acc = self.zero();
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (t, p) in self.power[i + j].iter().enumerate() {
                    acc.coords[t] += &c * p;
                }
            }
        }
        acc
    }

    /// Galois action `zeta -> zeta^s` for `gcd(s, n) = 1`.
    pub fn sigma(&self, s: i64, a: &CycInt) -> CycInt {
        let s = s.rem_euclid(self.n as i64) as u64;
        assert_eq!(
            crate::field::gcd_i64(s as i64, self.n as i64),
            1,
            "sigma_{s} is not a Galois element for n = {}",
            self.n
        );
        let mut acc = self.zero();
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let k = ((i as u64 * s) % self.n) as usize;
            for (t, p) in self.power[k].iter().enumerate() {
                acc.coords[t] += x * p;
            }
        }
        acc
    }

    pub fn is_rational(&self, a: &CycInt) -> bool {
        a.coords.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_int(&self, a: &CycInt) -> Option<BigInt> {
        self.is_rational(a).then(|| a.coords[0].clone())
    }
}

impl CycInt {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }
}
