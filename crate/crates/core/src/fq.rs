//! Finite fields F_q for prime powers q, with table-driven arithmetic.
//!
//! An element is a `u64` code in `[0, q)`: its base-p digits are the
//! coefficients of a residue polynomial modulo a fixed monic degree-r
//! irreducible (for q = p^r). The irreducible chosen is the first in
//! code order, so fields are reproducible across runs. Construction
//! builds exp/log tables for a fixed generator; after that every
//! multiplication is two lookups.

use crate::error::{Error, Result};

pub struct Fq {
    p: u64,
    r: u32,
    q: u64,
    modulus: Vec<u64>,
    gen: u64,
    exp: Vec<u64>,
    log: Vec<u64>,
}

/// q as p^r with p prime, if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut m = q;
            let mut r = 0;
            while m.is_multiple_of(p) {
                m /= p;
                r += 1;
            }
            return (m == 1).then_some((p, r));
        }
        p += 1;
    }
    Some((q, 1))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut code: u64, p: u64, r: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(r as usize);
    for _ in 0..r {
        v.push(code % p);
        code /= p;
    }
    v
}

fn code_of(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Product of residue polynomials modulo the monic `modulus`, all
/// coefficients mod p.
fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * r - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (r..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for i in 0..r {
            // subtract c * modulus * x^(d-r)
            prod[d - r + i] = (prod[d - r + i] + c * (p - modulus[i] % p) % p) % p;
        }
    }
    prod.truncate(r);
    prod
}

fn poly_is_irreducible(m: &[u64], p: u64) -> bool {
    let r = (m.len() - 1) as u32;
    // x^(p^k) mod m by repeated Frobenius; irreducible iff x^(p^r) = x
    // and x^(p^(r/l)) - x is coprime to m for every prime l | r
    let xp = |k: u32| -> Vec<u64> {
        let mut cur = vec![0u64; r as usize];
        if r == 1 {
            return cur; // unused
        }
        cur[1] = 1; // x
        for _ in 0..k {
            // raise to p-th power: repeated squaring on the exponent p
            let mut acc = vec![0u64; r as usize];
            acc[0] = 1;
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, m, p);
                }
                base = poly_mulmod(&base, &base, m, p);
                e >>= 1;
            }
            cur = acc;
        }
        cur
    };
    let mut x_only = vec![0u64; r as usize];
    x_only[1 % r as usize] = 1;
    if xp(r) != x_only {
        return false;
    }
    for l in prime_factors(r as u64) {
        let mut diff = xp(r / l as u32);
        diff[1] = (diff[1] + p - 1) % p; // subtract x
        if poly_gcd_is_nontrivial(&diff, m, p) {
            return false;
        }
    }
    true
}

fn poly_gcd_is_nontrivial(a: &[u64], m: &[u64], p: u64) -> bool {
    let mut a: Vec<u64> = a.to_vec();
    let mut b: Vec<u64> = m.to_vec();
    let deg = |v: &[u64]| v.iter().rposition(|&c| c != 0);
    loop {
        let da = match deg(&a) {
            None => return deg(&b).is_some_and(|d| d > 0),
            Some(d) => d,
        };
        let db = match deg(&b) {
            None => return da > 0,
            Some(d) => d,
        };
        if da < db {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // kill a's leading term with b's
        let (da, db) = (da, db);
        let lb = b[db];
        let la = a[da];
        let inv = mod_inverse(lb, p);
        let f = la * inv % p;
        for i in 0..=db {
            a[da - db + i] = (a[da - db + i] + (p - f * b[i] % p)) % p;
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u64
}

impl Fq {
    pub fn new(q: u64) -> Result<Fq> {
        Fq::with_generator_index(q, 0)
    }

    /// Like `new` but skips the first `skip` primitive elements, which
    /// gives an independent multiplicative character for cross-checks.
    pub fn with_generator_index(q: u64, mut skip: usize) -> Result<Fq> {
        let (p, r) = prime_power(q).ok_or(Error::NotPrime(q))?;
        if q > 20_000 {
            return Err(Error::TooLarge(q, 20_000));
        }
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|code| {
                    let mut m = digits(code, p, r);
                    m.push(1);
                    m
                })
                .find(|m| poly_is_irreducible(m, p))
                .expect("an irreducible polynomial of each degree exists")
        };

        let factors = prime_factors(q - 1);
        let mut found = None;
        'outer: for g in 2..q {
            for &l in &factors {
                if pow_code(g, (q - 1) / l, &modulus, p) == 1 {
                    continue 'outer;
                }
            }
            if skip == 0 {
                found = Some(g);
                break;
            }
            skip -= 1;
        }
        let gen = found.ok_or_else(|| Error::Unsupported(format!("no generator in F{q}")))?;

        let mut exp = vec![0u64; (q - 1) as usize];
        let mut log = vec![0u64; q as usize];
        let gd = digits(gen, p, r);
        let mut cur = digits(1, p, r);
        for (k, slot) in exp.iter_mut().enumerate() {
            let code = code_of(&cur, p);
            *slot = code;
            log[code as usize] = k as u64;
            cur = poly_mulmod(&cur, &gd, &modulus, p);
        }
        debug_assert_eq!(code_of(&cur, p), 1, "generator order must be q-1");

        Ok(Fq {
            p,
            r,
            q,
            modulus,
            gen,
            exp,
            log,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.r
    }

    pub fn generator(&self) -> u64 {
        self.gen
    }

    /// Coefficients of the chosen irreducible modulus (ascending, monic),
    /// or None over a prime field.
    pub fn modulus(&self) -> Option<&[u64]> {
        (self.r > 1).then_some(self.modulus.as_slice())
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let da = digits(a, self.p, self.r);
        let db = digits(b, self.p, self.r);
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        code_of(&sum, self.p)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.r == 1 {
            return (self.p - a) % self.p;
        }
        let da = digits(a, self.p, self.r);
        let nd: Vec<u64> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        code_of(&nd, self.p)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[s as usize]
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let s = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        self.exp[s as usize]
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let s = (self.log[a as usize] as u128 * e as u128 % (self.q - 1) as u128) as u64;
        self.exp[s as usize]
    }

    /// Discrete log base the chosen generator; `a` nonzero.
    pub fn dlog(&self, a: u64) -> u64 {
        assert!(a != 0, "log of zero");
        self.log[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }
}

/// g^e in the field defined by `modulus` over F_p, by square-and-multiply
/// on digit vectors (used before tables exist).
fn pow_code(g: u64, mut e: u64, modulus: &[u64], p: u64) -> u64 {
    let r = (modulus.len() - 1) as u32;
    let mut acc = digits(1, p, r);
    let mut base = digits(g, p, r);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, modulus, p);
        }
        base = poly_mulmod(&base, &base, modulus, p);
        e >>= 1;
    }
    code_of(&acc, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(17), Some((17, 1)));
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(97), Some((97, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn prime_field_seventeen() {
        let f = Fq::new(17).unwrap();
        assert_eq!(f.generator(), 3);
        assert_eq!(f.mul(5, 7), 35 % 17);
        assert_eq!(f.add(9, 12), 21 % 17);
        assert_eq!(f.mul(4, f.inv(4)), 1);
        assert_eq!(f.pow(2, 16), 1);
        assert_eq!(f.pow(3, 8), 16);
        assert_eq!(f.dlog(1), 0);
    }

    #[test]
    fn f4_and_f25_moduli_are_first_in_code_order() {
        let f4 = Fq::new(4).unwrap();
        assert_eq!(f4.modulus(), Some(&[1, 1, 1][..])); // x^2 + x + 1
        let f25 = Fq::new(25).unwrap();
        assert_eq!(f25.modulus(), Some(&[2, 0, 1][..])); // x^2 + 2
        assert_eq!(f25.generator(), 6); // x + 1
        let f27 = Fq::new(27).unwrap();
        assert_eq!(f27.modulus(), Some(&[1, 2, 0, 1][..])); // x^3 + 2x + 1
    }

    #[test]
    fn extension_field_arithmetic() {
        let f = Fq::new(25).unwrap();
        // codes: 5 = x; x*x = x^2 = -2 = 3
        assert_eq!(f.mul(5, 5), 3);
        // (x+1)^3 = x with modulus x^2+2
        assert_eq!(f.pow(6, 3), 5);
        // additive structure is componentwise mod 5
        assert_eq!(f.add(13, 14), 22); // (3+x*2)+(4+x*2) = 2 + x*4
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn all_nonzero_elements_are_generator_powers() {
        for q in [4u64, 8, 9, 17, 25, 73, 97] {
            let f = Fq::new(q).unwrap();
            let mut seen = vec![false; q as usize];
            for k in 0..q - 1 {
                seen[f.pow(f.generator(), k) as usize] = true;
            }
            assert_eq!(
                seen.iter().filter(|&&s| s).count() as u64,
                q - 1,
                "F{q} generator must hit every nonzero element"
            );
        }
    }

    #[test]
    fn alternate_generator_differs() {
        let a = Fq::new(17).unwrap();
        let b = Fq::with_generator_index(17, 1).unwrap();
        assert_ne!(a.generator(), b.generator());
        assert_eq!(b.generator(), 5); // next primitive root after 3
        assert_eq!(b.mul(5, 7), 35 % 17); // same field, same products
    }

    #[test]
    fn rejects_non_prime_powers_and_huge_fields() {
        assert!(matches!(Fq::new(12), Err(Error::NotPrime(12))));
        assert!(matches!(Fq::new(1 << 20), Err(Error::TooLarge(..))));
    }
}
