//! Character groups of diagonal quartic-type surfaces.
//!
//! The degree-n diagonal surface carries an action of three independent
//! n-th roots of unity; its second cohomology splits into eigenspaces
//! indexed by quadruples (a0,a1,a2,a3) mod n with all entries nonzero
//! and zero sum. Unit multiples of an index give Galois-conjugate
//! eigenspaces, and a quotient by a finite deck group keeps exactly the
//! indices orthogonal to the deck kernel. This module enumerates those
//! index sets; the Jacobi-sum values attached to them live in `jacobi`.

use crate::field::gcd_i64;
use crate::snf;

/// Character index (a0, a1, a2, a3) on the degree-`n` diagonal surface:
/// entries reduced to 1..n, sum divisible by n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharVec {
    pub n: u64,
    pub a: [u64; 4],
}

impl CharVec {
    /// Build from the affine-chart triple (a1, a2, a3); a0 is the unique
    /// completion making the sum vanish mod n. Returns `None` when any
    /// entry (including the completion) is divisible by n.
    pub fn from_triple(n: u64, t: [u64; 3]) -> Option<CharVec> {
        assert!(n >= 3);
        let a1 = t[0] % n;
        let a2 = t[1] % n;
        let a3 = t[2] % n;
        if a1 == 0 || a2 == 0 || a3 == 0 {
            return None;
        }
        let a0 = (n - (a1 + a2 + a3) % n) % n;
        if a0 == 0 {
            return None;
        }
        Some(CharVec { n, a: [a0, a1, a2, a3] })
    }

    pub fn triple(&self) -> [u64; 3] {
        [self.a[1], self.a[2], self.a[3]]
    }

    fn scaled(&self, t: u64) -> CharVec {
        let mut a = self.a;
        for x in &mut a {
            *x = (*x * t) % self.n;
        }
        CharVec { n: self.n, a }
    }

    /// Orbit under coordinatewise multiplication by units mod n, sorted
    /// and deduplicated.
    pub fn orbit(&self) -> Vec<CharVec> {
        let mut out: Vec<CharVec> = units(self.n).map(|t| self.scaled(t)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Transcendence test: true iff some unit multiple has entry sum
    /// (with all entries reduced to 1..n) different from 2n. The whole
    /// orbit is enumerated on purpose; the sum of four reduced nonzero
    /// entries is n, 2n or 3n, and only 2n marks the algebraic part.
    pub fn is_transcendental(&self) -> bool {
        self.orbit()
            .iter()
            .any(|c| c.a.iter().sum::<u64>() != 2 * c.n)
    }
}

pub fn units(n: u64) -> impl Iterator<Item = u64> {
    (1..n).filter(move |t| gcd_i64(*t as i64, n as i64) == 1)
}

/// All character indices for the degree-`n` diagonal surface,
/// enumerated by their affine triples.
pub fn char_group(n: u64) -> Vec<CharVec> {
    let mut out = Vec::new();
    for a1 in 1..n {
        for a2 in 1..n {
            for a3 in 1..n {
                if let Some(c) = CharVec::from_triple(n, [a1, a2, a3]) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// One row of the built-in covering table: a diagonal surface of degree
/// `n` dominates the listed surface, with the surface coordinates given
/// by monomials in the chart coordinates (u, v, w). `rows` holds the
/// (u, v, w) exponent vectors for y, -x, -t in that order; negative
/// entries are denominators.
#[derive(Clone, Copy, Debug)]
pub struct ExponentCover {
    pub m: u32,
    pub lambda: &'static str,
    pub n: u64,
    pub rows: [[i64; 3]; 3],
    /// Expected orbit representative (a1, a2, a3) of the invariant
    /// character set; the computed set is checked against its orbit.
    pub orbit_rep: [u64; 3],
}

pub const COVERS: [ExponentCover; 6] = [
    ExponentCover {
        m: 4,
        lambda: "0",
        n: 8,
        rows: [[4, 14, -21], [0, 12, -14], [0, 4, -6]],
        orbit_rep: [4, 2, 1],
    },
    ExponentCover {
        m: 8,
        lambda: "0",
        n: 16,
        rows: [[8, 7, -21], [0, 10, -14], [0, 2, -6]],
        orbit_rep: [8, 5, 1],
    },
    ExponentCover {
        m: 8,
        lambda: "sqrt(3)",
        n: 24,
        rows: [[12, 0, 9], [0, 8, 6], [0, 0, 6]],
        orbit_rep: [12, 8, 3],
    },
    ExponentCover {
        m: 16,
        lambda: "0",
        n: 32,
        rows: [[16, 11, -33], [0, 18, -22], [0, 2, -6]],
        orbit_rep: [16, 9, 5],
    },
    ExponentCover {
        m: 16,
        lambda: "-2",
        n: 16,
        rows: [[8, 22, -33], [0, 20, -22], [0, 4, -6]],
        orbit_rep: [8, 2, 5],
    },
    ExponentCover {
        m: 16,
        lambda: "sqrt(3)",
        n: 48,
        rows: [[24, 0, 9], [0, 16, 6], [0, 0, 6]],
        orbit_rep: [24, 16, 3],
    },
];

/// The (m, n) pair identifies a covering row uniquely.
pub fn cover_for(m: u32, n: u64) -> Option<&'static ExponentCover> {
    COVERS.iter().find(|c| c.m == m && c.n == n)
}

impl ExponentCover {
    /// Generators of the deck kernel: the subgroup of (Z/n)^3 killed by
    /// all three exponent rows. Computed from the Smith form of the
    /// exponent matrix over Z: with U*E*V = D, a column vector s lies in
    /// the kernel mod n iff s = V y with d_i y_i = 0 mod n, so the
    /// columns of V scaled by n/gcd(d_i, n) generate.
    pub fn kernel_generators(&self) -> Vec<[u64; 3]> {
        let n = self.n as i64;
        let e = snf::mat_from_i64(&self.rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
        let s = snf::smith_normal_form(&e);
        let mut gens = Vec::new();
        for (j, d) in s.diag.iter().enumerate() {
            let d = i64::try_from(d).expect("small exponent matrix");
            let scale = n / gcd_i64(d, n);
            if scale % n == 0 {
                continue; // this column contributes only the identity
            }
            let mut g = [0u64; 3];
            for (i, gi) in g.iter_mut().enumerate() {
                let entry = i64::try_from(&s.right[i][j]).expect("unimodular entry");
                *gi = (entry * scale).rem_euclid(n) as u64;
            }
            gens.push(g);
        }
        gens
    }

    /// Every element of the deck kernel, by direct enumeration of
    /// (Z/n)^3. Quadratic confirmation path for the generator route;
    /// n^3 stays tiny for the shipped table.
    pub fn kernel_elements(&self) -> Vec<[u64; 3]> {
        let n = self.n;
        let mut out = Vec::new();
        for s1 in 0..n {
            for s2 in 0..n {
                for s3 in 0..n {
                    let s = [s1, s2, s3];
                    let killed = self.rows.iter().all(|row| {
                        let mut acc: i64 = 0;
                        for (x, c) in s.iter().zip(row) {
                            acc += (*x as i64) * c;
                        }
                        acc.rem_euclid(n as i64) == 0
                    });
                    if killed {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    /// Transcendental character indices fixed by the deck group: the
    /// triples orthogonal to every kernel generator, filtered by the
    /// transcendence test.
    pub fn invariant_chars(&self) -> Vec<CharVec> {
        let gens = self.kernel_generators();
        let n = self.n;
        let mut out: Vec<CharVec> = char_group(n)
            .into_iter()
            .filter(|c| {
                let t = c.triple();
                gens.iter()
                    .all(|g| t.iter().zip(g).map(|(a, b)| a * b).sum::<u64>() % n == 0)
            })
            .filter(|c| c.is_transcendental())
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::euler_phi;
    use std::collections::BTreeSet;

    #[test]
    fn char_group_sizes() {
        assert_eq!(char_group(4).len(), 21);
        assert_eq!(char_group(8).len(), 301);
    }

    #[test]
    fn quadruple_completion() {
        let c = CharVec::from_triple(4, [1, 1, 1]).unwrap();
        assert_eq!(c.a, [1, 1, 1, 1]);
        assert!(c.is_transcendental());
        // a1+a2+a3 = 0 mod n has no completion
        assert!(CharVec::from_triple(4, [1, 1, 2]).is_none());
        assert!(CharVec::from_triple(4, [0, 1, 1]).is_none());
    }

    #[test]
    fn transcendental_part_of_degree_four() {
        // The degree-4 diagonal surface has exactly two transcendental
        // eigenspaces: (1,1,1,1) and its conjugate (3,3,3,3).
        let t: Vec<CharVec> = char_group(4)
            .into_iter()
            .filter(|c| c.is_transcendental())
            .collect();
        let mut sums: Vec<[u64; 4]> = t.iter().map(|c| c.a).collect();
        sums.sort();
        sums.dedup();
        assert_eq!(sums, vec![[1, 1, 1, 1], [3, 3, 3, 3]]);
    }

    #[test]
    fn orbit_of_printed_representative() {
        let c = CharVec::from_triple(8, [4, 2, 1]).unwrap();
        let orbit = c.orbit();
        assert_eq!(orbit.len(), 4); // phi(8)
        for e in &orbit {
            assert_eq!(e.a.iter().sum::<u64>() % 8, 0);
        }
    }

    #[test]
    fn kernel_generators_span_bruteforce_kernel() {
        for cover in COVERS.iter().filter(|c| c.n <= 16) {
            let gens = cover.kernel_generators();
            let n = cover.n;
            // close the generator set under addition
            let mut span: BTreeSet<[u64; 3]> = BTreeSet::new();
            span.insert([0, 0, 0]);
            loop {
                let mut grew = false;
                let snapshot: Vec<[u64; 3]> = span.iter().copied().collect();
                for s in &snapshot {
                    for g in &gens {
                        let mut t = [0u64; 3];
                        for i in 0..3 {
                            t[i] = (s[i] + g[i]) % n;
                        }
                        grew |= span.insert(t);
                    }
                }
                if !grew {
                    break;
                }
            }
            let brute: BTreeSet<[u64; 3]> = cover.kernel_elements().into_iter().collect();
            assert_eq!(span, brute, "cover n={} m={}", cover.n, cover.m);
        }
    }

    #[test]
    fn invariant_chars_match_printed_orbits() {
        for cover in &COVERS {
            let got = cover.invariant_chars();
            let rep = CharVec::from_triple(cover.n, cover.orbit_rep).unwrap();
            let want = rep.orbit();
            assert_eq!(got, want, "cover n={} m={}", cover.n, cover.m);
            assert_eq!(got.len() as u64, euler_phi(cover.n));
        }
    }

    #[test]
    fn invariant_chars_are_unit_stable() {
        for cover in &COVERS {
            let set: BTreeSet<CharVec> = cover.invariant_chars().into_iter().collect();
            for c in &set {
                for e in c.orbit() {
                    assert!(set.contains(&e));
                }
            }
        }
    }

    #[test]
    fn cover_lookup_is_unique() {
        let mut keys: Vec<(u32, u64)> = COVERS.iter().map(|c| (c.m, c.n)).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), COVERS.len());
        assert!(cover_for(4, 8).is_some());
        assert!(cover_for(4, 16).is_none());
    }
}
