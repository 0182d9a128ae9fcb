//! Discriminant forms of even lattices.
//!
//! For an even nondegenerate lattice `L` the finite group `A = L*/L`
//! carries a quadratic form `q: A -> Q/2Z` and its bilinear form
//! `b: A x A -> Q/Z`. This module computes `A` (as invariant factors
//! plus explicit generators in `L (x) Q`), evaluates `q` and `b`,
//! decides isomorphism of two such forms, and packages the rank /
//! group-length / parity triple used to classify 2-elementary lattices.

use crate::error::{Error, Result};
use crate::field::{mod_into, rat_int, Rat};
use crate::lattice::Lattice;
use crate::snf::{self, Mat};
use num::bigint::BigInt;
use num::Zero;
use std::collections::HashSet;

#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    orders: Vec<u64>,
    gens: Vec<Vec<Rat>>,
    q_gen: Vec<Rat>,
    b_gen: Vec<Vec<Rat>>,
}

impl DiscriminantForm {
    /// Discriminant form of an even nondegenerate Gram matrix.
    pub fn of(gram: &Mat) -> Self {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            assert!(
                (&row[i] % BigInt::from(2)).is_zero(),
                "lattice is not even at diagonal entry {i}"
            );
        }
        assert!(!snf::det(gram).is_zero(), "degenerate lattice");
        let smith = snf::smith_normal_form(gram);
        let mut orders = Vec::new();
        let mut gens: Vec<Vec<Rat>> = Vec::new();
        for (i, d) in smith.diag.iter().enumerate() {
            let d = u64::try_from(d).expect("invariant factor fits u64");
            if d <= 1 {
                continue;
            }
            orders.push(d);
            let den = rat_int(d as i64);
            gens.push(
                (0..n)
                    .map(|r| Rat::from_bigint(smith.right[r][i].clone()) / &den)
                    .collect(),
            );
        }
        let pair = |x: &[Rat], y: &[Rat]| -> Rat {
            let mut acc = Rat::zero();
            for (i, xi) in x.iter().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    acc = acc + xi * &Rat::from_bigint(gram[i][j].clone()) * yj;
                }
            }
            acc
        };
        let two = rat_int(2);
        let one = rat_int(1);
        let q_gen = gens.iter().map(|g| mod_into(&pair(g, g), &two)).collect();
        let b_gen = gens
            .iter()
            .map(|g| gens.iter().map(|h| mod_into(&pair(g, h), &one)).collect())
            .collect();
        DiscriminantForm {
            orders,
            gens,
            q_gen,
            b_gen,
        }
    }

    /// Invariant factors > 1 in divisibility order.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn group_order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Minimal number of generators (the length of the group).
    pub fn min_generators(&self) -> usize {
        self.orders.len()
    }

    /// Generator of the i-th cyclic factor as a vector in `L (x) Q`.
    pub fn generator(&self, i: usize) -> &[Rat] {
        &self.gens[i]
    }

    /// q of the element with the given generator coordinates, in `[0, 2)`.
    pub fn q_of(&self, coords: &[u64]) -> Rat {
        let mut acc = Rat::zero();
        for (i, &ci) in coords.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let c = rat_int(ci as i64);
            acc = acc + &c * &c * &self.q_gen[i];
            for (j, &cj) in coords.iter().enumerate().skip(i + 1) {
                if cj == 0 {
                    continue;
                }
                acc = acc + rat_int(2) * &c * &rat_int(cj as i64) * &self.b_gen[i][j];
            }
        }
        mod_into(&acc, &rat_int(2))
    }

    /// b of two elements given by generator coordinates, in `[0, 1)`.
    pub fn b_of(&self, x: &[u64], y: &[u64]) -> Rat {
        let mut acc = Rat::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                acc = acc + rat_int((xi as i64) * (yj as i64)) * &self.b_gen[i][j];
            }
        }
        mod_into(&acc, &rat_int(1))
    }

    pub fn order_of(&self, coords: &[u64]) -> u64 {
        let mut ord = 1u64;
        for (&c, &d) in coords.iter().zip(&self.orders) {
            let g = crate::field::gcd_i64(c as i64, d as i64) as u64;
            ord = num::integer::lcm(ord, d / g.max(1));
        }
        ord
    }

    /// Every element's generator coordinates, zero included.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let total: u64 = self.orders.iter().product();
        assert!(total <= 1 << 20, "discriminant group too large to walk");
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0u64; self.orders.len()];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.orders.len() {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// True when q only takes integer values — the parity bit of the
    /// 2-elementary classification.
    pub fn q_integral_everywhere(&self) -> bool {
        self.elements()
            .iter()
            .all(|e| self.q_of(e).is_integer())
    }

    fn q_multiset(&self, negate: bool) -> Vec<(u64, Rat)> {
        let mut v: Vec<(u64, Rat)> = self
            .elements()
            .iter()
            .map(|e| {
                let q = self.q_of(e);
                (self.order_of(e), if negate { negate_mod2(&q) } else { q })
            })
            .collect();
        v.sort();
        v
    }
}

fn negate_mod2(q: &Rat) -> Rat {
    mod_into(&-q, &rat_int(2))
}

fn negate_mod1(b: &Rat) -> Rat {
    mod_into(&-b, &rat_int(1))
}

fn add_coords(a: &[u64], b: &[u64], orders: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .zip(orders)
        .map(|((&x, &y), &d)| (x + y) % d)
        .collect()
}

/// Size of the subgroup generated by the given elements.
fn span_size(gens: &[Vec<u64>], orders: &[u64]) -> usize {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(vec![0; orders.len()]);
    for g in gens {
        let snapshot: Vec<Vec<u64>> = seen.iter().cloned().collect();
        for base in snapshot {
            let mut cur = base.clone();
            loop {
                cur = add_coords(&cur, g, orders);
                if !seen.insert(cur.clone()) {
                    break;
                }
            }
        }
    }
    seen.len()
}

/// Decide whether two discriminant forms are isomorphic as quadratic
/// forms, or anti-isomorphic when `negate` is set (q on the right-hand
/// side is negated, as between the two orthogonal pieces of a
/// unimodular lattice).
pub fn form_isomorphic(a: &DiscriminantForm, b: &DiscriminantForm, negate: bool) -> bool {
    if a.orders != b.orders {
        return false;
    }
    if a.orders.is_empty() {
        return true;
    }
    if a.q_multiset(false) != b.q_multiset(negate) {
        return false;
    }
    let elems = b.elements();
    let k = a.orders.len();
    let mut images: Vec<Vec<u64>> = Vec::with_capacity(k);

    fn dfs(
        a: &DiscriminantForm,
        b: &DiscriminantForm,
        negate: bool,
        elems: &[Vec<u64>],
        images: &mut Vec<Vec<u64>>,
    ) -> bool {
        let i = images.len();
        if i == a.orders.len() {
            return span_size(images, &b.orders) as u64 == b.group_order();
        }
        let want_q = if negate {
            negate_mod2(&a.q_gen[i])
        } else {
            a.q_gen[i].clone()
        };
        'cand: for e in elems {
            if b.order_of(e) != a.orders[i] || b.q_of(e) != want_q {
                continue;
            }
            for (j, img) in images.iter().enumerate() {
                let want_b = if negate {
                    negate_mod1(&a.b_gen[i][j])
                } else {
                    a.b_gen[i][j].clone()
                };
                if b.b_of(e, img) != want_b {
                    continue 'cand;
                }
            }
            images.push(e.clone());
            let independent = span_size(images, &b.orders) as u64
                == a.orders[..images.len()].iter().product::<u64>();
            if independent && dfs(a, b, negate, elems, images) {
                return true;
            }
            images.pop();
        }
        false
    }

    dfs(a, b, negate, &elems, &mut images)
}

/// Rank, group length and parity of a 2-elementary lattice: the triple
/// that pins its isomorphism class together with the signature.
pub fn two_elementary_triple(lat: &Lattice) -> Result<(usize, usize, u32)> {
    let form = DiscriminantForm::of(lat.gram());
    if let Some(&d) = form.orders().iter().find(|&&d| d != 2) {
        return Err(Error::Lattice(format!(
            "discriminant group of {lat} has an invariant factor {d}; not 2-elementary"
        )));
    }
    let delta = if form.q_integral_everywhere() { 0 } else { 1 };
    Ok((lat.rank(), form.min_generators(), delta))
}

/// Nonzero elements `x` with `2x = 0` and integral `q(x)` — the glue
/// classes along which an even index-two overlattice can exist.
pub fn isotropic_halving_classes(form: &DiscriminantForm) -> Vec<Vec<u64>> {
    form.elements()
        .into_iter()
        .filter(|e| e.iter().any(|&c| c != 0))
        .filter(|e| form.order_of(e) == 2 && form.q_of(e).is_zero())
        .collect()
}

/// Integer coordinates of `2x` in `L` for an order-two class `x`.
pub fn glue_vector(form: &DiscriminantForm, coords: &[u64]) -> Vec<BigInt> {
    let n = form.gens.first().map_or(0, |g| g.len());
    let mut v = vec![Rat::zero(); n];
    for (i, &c) in coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (r, x) in form.gens[i].iter().enumerate() {
            v[r] = &v[r] + &(rat_int(c as i64) * x);
        }
    }
    v.into_iter()
        .map(|x| {
            let w = &x * &rat_int(2);
            assert!(w.is_integer(), "class does not have order dividing 2");
            w.numer().clone()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusComparison {
    pub rank_match: bool,
    pub signature_match: bool,
    pub form_match: bool,
}

impl GenusComparison {
    pub fn all(&self) -> bool {
        self.rank_match && self.signature_match && self.form_match
    }
}

/// Compare two even lattices in the genus sense: equal rank, equal
/// signature, isomorphic discriminant forms.
pub fn same_genus_invariants(a: &Lattice, b: &Lattice) -> GenusComparison {
    GenusComparison {
        rank_match: a.rank() == b.rank(),
        signature_match: a.signature() == b.signature(),
        form_match: form_isomorphic(
            &DiscriminantForm::of(a.gram()),
            &DiscriminantForm::of(b.gram()),
            false,
        ),
    }
}

/// Mirror comparison: does `t` look like `U (+) ns_mirror` genus-wise?
/// Requires `t` to be written with an explicit hyperbolic summand, which
/// is what makes the splitting visible at all.
pub fn mirror_check(t: &Lattice, ns_mirror: &Lattice) -> Result<GenusComparison> {
    if !t.has_hyperbolic_summand() {
        return Err(Error::Lattice(format!(
            "'{t}' has no explicit U summand to split off"
        )));
    }
    let u = crate::lattice::parse_lattice("U")?;
    Ok(same_genus_invariants(&u.direct_sum(ns_mirror), t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_frac;
    use crate::lattice::parse_lattice;

    fn form_of(expr: &str) -> DiscriminantForm {
        DiscriminantForm::of(parse_lattice(expr).unwrap().gram())
    }

    #[test]
    fn small_root_forms() {
        let a1 = form_of("A1");
        assert_eq!(a1.orders(), &[2]);
        assert_eq!(a1.q_of(&[1]), rat_frac(3, 2));

        let e7 = form_of("E7");
        assert_eq!(e7.orders(), &[2]);
        assert_eq!(e7.q_of(&[1]), rat_frac(1, 2));

        let e8 = form_of("E8");
        assert_eq!(e8.orders(), &[] as &[u64]);

        let d4 = form_of("D4");
        assert_eq!(d4.orders(), &[2, 2]);
        let mut qs: Vec<Rat> = d4
            .elements()
            .iter()
            .filter(|e| e.iter().any(|&c| c != 0))
            .map(|e| d4.q_of(e))
            .collect();
        qs.sort();
        assert_eq!(qs, vec![rat_int(1), rat_int(1), rat_int(1)]);
    }

    #[test]
    fn cyclic_forms_of_longer_d() {
        let d6 = form_of("D6");
        assert_eq!(d6.orders(), &[2, 2]);
        assert!(!d6.q_integral_everywhere());
        let d8 = form_of("D8");
        assert_eq!(d8.orders(), &[2, 2]);
        assert!(d8.q_integral_everywhere());
    }

    #[test]
    fn scaled_hyperbolic_form() {
        let u2 = form_of("U(2)");
        assert_eq!(u2.orders(), &[2, 2]);
        let mut qs: Vec<Rat> = u2
            .elements()
            .iter()
            .filter(|e| e.iter().any(|&c| c != 0))
            .map(|e| u2.q_of(e))
            .collect();
        qs.sort();
        assert_eq!(qs, vec![rat_int(0), rat_int(0), rat_int(1)]);
        assert!(u2.q_integral_everywhere());
    }

    #[test]
    fn two_elementary_triples() {
        for (expr, want) in [
            ("U + E8^2 + A1^2", (20, 2, 1)),
            ("U + D8 + E8", (18, 2, 0)),
            ("U + D4 + E8", (14, 2, 0)),
            ("U + D4", (6, 2, 0)),
            ("U(2) + D4^3", (14, 8, 0)),
            ("U + A1^4 + D8", (14, 6, 1)),
            ("U + E8^2", (18, 0, 0)),
        ] {
            let lat = parse_lattice(expr).unwrap();
            assert_eq!(two_elementary_triple(&lat).unwrap(), want, "{expr}");
        }
        let d6 = parse_lattice("U + D6").unwrap();
        // D6 is 2-elementary with half-integer q somewhere
        assert_eq!(two_elementary_triple(&d6).unwrap(), (8, 2, 1));
        let a2 = parse_lattice("U + A2").unwrap();
        assert!(two_elementary_triple(&a2).is_err());
    }

    #[test]
    fn isomorphism_and_anti_isomorphism() {
        let a1 = form_of("A1");
        let diag2 = form_of("<2>");
        assert!(!form_isomorphic(&a1, &diag2, false));
        assert!(form_isomorphic(&a1, &diag2, true));

        let a12 = form_of("A1^2");
        let u2 = form_of("U(2)");
        assert!(!form_isomorphic(&a12, &u2, false));

        // D4's form is its own negative
        let d4 = form_of("D4");
        assert!(form_isomorphic(&d4, &d4, true));

        // adding a hyperbolic plane changes nothing
        let with_u = form_of("U + D4");
        assert!(form_isomorphic(&d4, &with_u, false));
    }

    #[test]
    fn ns_t_pairs_are_anti_isomorphic() {
        for (ns, t) in [
            ("U + E8^2 + A1^2", "<2>^2"),
            ("U + D8 + E8", "U + U(2)"),
            ("U + D4 + E8", "U^2 + D4"),
            ("U + D4", "U^2 + D4 + E8"),
            ("U + E8^2", "U^2"),
        ] {
            let f_ns = form_of(ns);
            let f_t = form_of(t);
            assert!(form_isomorphic(&f_ns, &f_t, true), "{ns} vs {t}");
            let ns_l = parse_lattice(ns).unwrap();
            let t_l = parse_lattice(t).unwrap();
            assert_eq!(ns_l.rank() + t_l.rank(), 22, "{ns} vs {t}");
        }
    }

    #[test]
    fn glue_census_of_a1a1e7e7() {
        let lat = parse_lattice("U + A1^2 + E7^2").unwrap();
        let form = DiscriminantForm::of(lat.gram());
        let classes = isotropic_halving_classes(&form);
        assert_eq!(classes.len(), 5);
        let mut hits = 0;
        for c in &classes {
            let w = glue_vector(&form, c);
            let g = crate::lattice::extend_by_half_vector(lat.gram(), &w).unwrap();
            let bigger = Lattice::from_gram(g);
            let triple = two_elementary_triple(&bigger).unwrap();
            assert_eq!(triple.0, 18);
            assert_eq!(triple.1, 2);
            if triple == (18, 2, 0) {
                hits += 1;
                let target = parse_lattice("U + D8 + E8").unwrap();
                assert!(same_genus_invariants(&bigger, &target).all());
            }
        }
        assert_eq!(hits, 1, "exactly one glue reaches the (18,2,0) class");
    }

    #[test]
    fn mirror_comparisons() {
        let t_m8 = parse_lattice("U^2 + D4").unwrap();
        let ns_m16 = parse_lattice("U + D4").unwrap();
        assert!(mirror_check(&t_m8, &ns_m16).unwrap().all());

        let no_u = parse_lattice("<2>^2").unwrap();
        assert!(mirror_check(&no_u, &ns_m16).is_err());

        let t_m16 = parse_lattice("U^2 + D4 + E8").unwrap();
        let ns_m8 = parse_lattice("U + D4 + E8").unwrap();
        assert!(mirror_check(&t_m16, &ns_m8).unwrap().all());

        // size mismatch must fail loudly but cleanly
        let cmp = mirror_check(&t_m16, &ns_m16).unwrap();
        assert!(!cmp.rank_match);
        assert!(!cmp.all());
    }
}
