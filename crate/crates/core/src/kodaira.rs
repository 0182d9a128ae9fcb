//! Kodaira fiber types of an elliptic surface from valuation data.
//!
//! The classification is driven entirely by the vanishing orders of
//! `c4`, `c6` and the discriminant at each place of P^1. Places are
//! found by coprime refinement of the three invariants followed by
//! rational-root splitting, so named rational places come out exactly;
//! conjugate irrational places stay bundled in one irreducible factor
//! and are counted with its degree.

use crate::error::{Error, Result};
use crate::field::{Field, Rat};
use crate::lattice::{Atom, Lattice};
use crate::poly::{split_rational_roots, Poly};
use crate::refine::coprime_refinement;
use crate::weier::WeierstrassModel;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum FiberType {
    /// Multiplicative of width n >= 1.
    In(u32),
    II,
    III,
    IV,
    /// I_n^* for n >= 0.
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl FiberType {
    /// Euler number of the fiber.
    pub fn euler(&self) -> u32 {
        match self {
            FiberType::In(n) => *n,
            FiberType::II => 2,
            FiberType::III => 3,
            FiberType::IV => 4,
            FiberType::InStar(n) => 6 + n,
            FiberType::IVStar => 8,
            FiberType::IIIStar => 9,
            FiberType::IIStar => 10,
        }
    }

    /// Number of irreducible components.
    pub fn components(&self) -> u32 {
        match self {
            FiberType::In(n) => *n,
            FiberType::II => 1,
            FiberType::III => 2,
            FiberType::IV => 3,
            FiberType::InStar(n) => 5 + n,
            FiberType::IVStar => 7,
            FiberType::IIIStar => 8,
            FiberType::IIStar => 9,
        }
    }

    /// Root lattice spanned by the non-identity components, if any.
    pub fn root_summand(&self) -> Option<Atom> {
        match self {
            FiberType::In(0) => unreachable!("width zero is not a fiber"),
            FiberType::In(1) | FiberType::II => None,
            FiberType::In(n) => Some(Atom::Root('A', n - 1)),
            FiberType::III => Some(Atom::Root('A', 1)),
            FiberType::IV => Some(Atom::Root('A', 2)),
            FiberType::InStar(n) => Some(Atom::Root('D', n + 4)),
            FiberType::IVStar => Some(Atom::Root('E', 6)),
            FiberType::IIIStar => Some(Atom::Root('E', 7)),
            FiberType::IIStar => Some(Atom::Root('E', 8)),
        }
    }

    pub fn parse(s: &str) -> Result<FiberType> {
        let bad = || Error::Parse(format!("unknown fiber type '{s}'"));
        match s {
            "II" => Ok(FiberType::II),
            "III" => Ok(FiberType::III),
            "IV" => Ok(FiberType::IV),
            "II*" => Ok(FiberType::IIStar),
            "III*" => Ok(FiberType::IIIStar),
            "IV*" => Ok(FiberType::IVStar),
            _ => {
                let rest = s.strip_prefix('I').ok_or_else(bad)?;
                if let Some(n) = rest.strip_suffix('*') {
                    let n: u32 = n.parse().map_err(|_| bad())?;
                    Ok(FiberType::InStar(n))
                } else {
                    let n: u32 = rest.parse().map_err(|_| bad())?;
                    if n == 0 {
                        return Err(bad());
                    }
                    Ok(FiberType::In(n))
                }
            }
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::In(n) => write!(f, "I{n}"),
            FiberType::II => write!(f, "II"),
            FiberType::III => write!(f, "III"),
            FiberType::IV => write!(f, "IV"),
            FiberType::InStar(n) => write!(f, "I{n}*"),
            FiberType::IVStar => write!(f, "IV*"),
            FiberType::IIIStar => write!(f, "III*"),
            FiberType::IIStar => write!(f, "II*"),
        }
    }
}

/// Classify from vanishing orders (`None` = identically zero invariant).
/// `v_disc = 0` means the fiber is smooth; callers skip those places.
pub fn classify(v4: Option<u32>, v6: Option<u32>, v_disc: u32) -> Result<FiberType> {
    let ge4 = |x: u32| v4.is_none_or(|v| v >= x);
    let eq4 = |x: u32| v4 == Some(x);
    let ge6 = |x: u32| v6.is_none_or(|v| v >= x);
    let eq6 = |x: u32| v6 == Some(x);
    let t = match v_disc {
        0 => return Err(Error::UnclassifiedFiber(v4, v6, 0)),
        n if eq4(0) => FiberType::In(n),
        2 if ge4(1) && eq6(1) => FiberType::II,
        3 if eq4(1) && ge6(2) => FiberType::III,
        4 if ge4(2) && eq6(2) => FiberType::IV,
        6 if ge4(2) && ge6(3) => FiberType::InStar(0),
        n if n >= 7 && eq4(2) && eq6(3) => FiberType::InStar(n - 6),
        8 if ge4(3) && eq6(4) => FiberType::IVStar,
        9 if eq4(3) && ge6(5) => FiberType::IIIStar,
        10 if ge4(4) && eq6(5) => FiberType::IIStar,
        n => return Err(Error::UnclassifiedFiber(v4, v6, n)),
    };
    Ok(t)
}

/// Strip fiberwise non-minimality: as long as the orders admit the
/// substitution that divides `(c4, c6, disc)` by `(u^4, u^6, u^12)`,
/// apply it. Returns the reduced orders and how many steps were taken.
pub fn minimalize(
    mut v4: Option<u32>,
    mut v6: Option<u32>,
    mut v_disc: u32,
) -> (Option<u32>, Option<u32>, u32, u32) {
    let mut steps = 0;
    while v4.is_none_or(|v| v >= 4) && v6.is_none_or(|v| v >= 6) && v_disc >= 12 {
        v4 = v4.map(|v| v - 4);
        v6 = v6.map(|v| v - 6);
        v_disc -= 12;
        steps += 1;
    }
    (v4, v6, v_disc, steps)
}

/// Where a singular fiber lives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Place {
    /// A rational point t = r.
    At(Rat),
    /// The point at infinity of the base.
    Infinity,
    /// A closed point of degree > 1, kept as its irreducible polynomial.
    Closed { poly: String, degree: u32 },
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::At(r) => write!(f, "t = {r}"),
            Place::Infinity => write!(f, "t = inf"),
            Place::Closed { poly, degree } => write!(f, "{poly} = 0 (degree {degree})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fiber {
    pub place: Place,
    pub fiber: FiberType,
    /// Degree of the place: number of geometric points it carries.
    pub degree: u32,
    /// True when non-minimal orders were reduced at this place.
    pub reduced: bool,
}

#[derive(Clone, Debug)]
pub struct Configuration {
    pub fibers: Vec<Fiber>,
    pub twist_degree: u32,
}

impl Configuration {
    /// Topological Euler number of the fibered surface.
    pub fn euler(&self) -> u32 {
        self.fibers
            .iter()
            .map(|f| f.fiber.euler() * f.degree)
            .sum()
    }

    pub fn at(&self, place: &Place) -> Option<&Fiber> {
        self.fibers.iter().find(|f| &f.place == place)
    }

    /// The lattice `U (+) sum of fiber root summands`. Fails when a
    /// reducible fiber sits at a place of degree > 1, because its
    /// components then live over an extension field and the summand
    /// bookkeeping here would be wrong.
    pub fn trivial_lattice(&self) -> Result<Lattice> {
        let mut terms: Vec<(Atom, u32)> = vec![(Atom::U, 1)];
        for f in &self.fibers {
            let Some(atom) = f.fiber.root_summand() else {
                continue;
            };
            if f.degree > 1 {
                return Err(Error::Unsupported(format!(
                    "reducible fiber {} at non-rational place {}",
                    f.fiber, f.place
                )));
            }
            match terms.iter_mut().find(|(a, _)| *a == atom) {
                Some((_, c)) => *c += 1,
                None => terms.push((atom, 1)),
            }
        }
        Ok(Lattice::from_terms(terms))
    }
}

/// Compute the singular fiber configuration of a model over the
/// projective line.
pub fn fiber_configuration<F: Field>(model: &WeierstrassModel<F>) -> Result<Configuration> {
    let inv = model.c_invariants();
    if inv.disc.is_zero() {
        return Err(Error::Unsupported(
            "identically singular model (zero discriminant)".into(),
        ));
    }
    let k = model.twist_degree();
    let polys: Vec<&Poly<F>> = [&inv.c4, &inv.c6, &inv.disc]
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    let idx_of = |target: &Poly<F>| polys.iter().position(|p| std::ptr::eq(*p, target));
    let i4 = idx_of(&inv.c4);
    let i6 = idx_of(&inv.c6);
    let id = idx_of(&inv.disc).expect("disc is nonzero");

    let owned: Vec<Poly<F>> = polys.iter().map(|p| (*p).clone()).collect();
    let refinement = coprime_refinement(&owned)?;

    let mut fibers = Vec::new();
    for (j, base) in refinement.basis.iter().enumerate() {
        let v_disc = refinement.exponent(id, j);
        if v_disc == 0 {
            continue;
        }
        let v4 = i4.map(|i| refinement.exponent(i, j));
        let v6 = i6.map(|i| refinement.exponent(i, j));
        let (roots, rest) = split_rational_roots(base);
        let mut spots: Vec<(Place, u32)> = roots
            .iter()
            .map(|(r, _)| (Place::At(r.clone()), 1))
            .collect();
        if let Some(d) = rest.degree().filter(|&d| d > 0) {
            spots.push((
                Place::Closed {
                    poly: rest.to_string(),
                    degree: d as u32,
                },
                d as u32,
            ));
        }
        for (place, degree) in spots {
            let (m4, m6, md, steps) = minimalize(v4, v6, v_disc);
            if md == 0 {
                continue;
            }
            fibers.push(Fiber {
                place,
                fiber: classify(m4, m6, md)?,
                degree,
                reduced: steps > 0,
            });
        }
    }

    // the place at infinity: valuations against the twist bound
    let vd_inf = 12 * k - inv.disc.degree().unwrap() as u32;
    if vd_inf > 0 {
        let v4_inf = inv.c4.degree().map(|d| 4 * k - d as u32);
        let v6_inf = inv.c6.degree().map(|d| 6 * k - d as u32);
        let (m4, m6, md, steps) = minimalize(v4_inf, v6_inf, vd_inf);
        if md > 0 {
            fibers.push(Fiber {
                place: Place::Infinity,
                fiber: classify(m4, m6, md)?,
                degree: 1,
                reduced: steps > 0,
            });
        }
    }

    sort_fibers(&mut fibers);
    Ok(Configuration {
        fibers,
        twist_degree: k,
    })
}

/// Stable presentation order: rational places by value, then infinity,
/// then closed places by rendered polynomial.
fn sort_fibers(fibers: &mut [Fiber]) {
    fibers.sort_by_key(|a| place_key(&a.place));
}

fn place_key(p: &Place) -> (u8, Rat, String) {
    match p {
        Place::At(r) => (0, r.clone(), String::new()),
        Place::Infinity => (1, Rat::zero(), String::new()),
        Place::Closed { poly, .. } => (2, Rat::zero(), poly.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rat};
    use crate::quad::QuadElem;

    fn tpow(k: usize) -> Poly<Rat> {
        Poly::monomial(rat_int(1), k)
    }

    #[test]
    fn type_table_round_trips() {
        for (s, t) in [
            ("I1", FiberType::In(1)),
            ("I12", FiberType::In(12)),
            ("I0*", FiberType::InStar(0)),
            ("I8*", FiberType::InStar(8)),
            ("II", FiberType::II),
            ("III", FiberType::III),
            ("IV", FiberType::IV),
            ("II*", FiberType::IIStar),
            ("III*", FiberType::IIIStar),
            ("IV*", FiberType::IVStar),
        ] {
            assert_eq!(FiberType::parse(s).unwrap(), t);
            assert_eq!(t.to_string(), s);
        }
        assert!(FiberType::parse("I0").is_err());
        assert!(FiberType::parse("V").is_err());
        assert!(FiberType::parse("I*").is_err());
    }

    #[test]
    fn euler_and_components() {
        assert_eq!(FiberType::In(5).euler(), 5);
        assert_eq!(FiberType::InStar(4).euler(), 10);
        assert_eq!(FiberType::IIStar.euler(), 10);
        assert_eq!(FiberType::In(5).components(), 5);
        assert_eq!(FiberType::InStar(0).components(), 5);
        assert_eq!(FiberType::IV.components(), 3);
    }

    #[test]
    fn classification_table() {
        use FiberType::*;
        assert_eq!(classify(Some(0), Some(0), 3).unwrap(), In(3));
        assert_eq!(classify(Some(1), Some(1), 2).unwrap(), II);
        assert_eq!(classify(None, Some(1), 2).unwrap(), II);
        assert_eq!(classify(Some(1), Some(2), 3).unwrap(), III);
        assert_eq!(classify(Some(2), Some(2), 4).unwrap(), IV);
        assert_eq!(classify(Some(2), Some(3), 6).unwrap(), InStar(0));
        assert_eq!(classify(Some(3), Some(3), 6).unwrap(), InStar(0));
        assert_eq!(classify(Some(2), Some(3), 10).unwrap(), InStar(4));
        assert_eq!(classify(Some(3), Some(4), 8).unwrap(), IVStar);
        assert_eq!(classify(Some(3), Some(5), 9).unwrap(), IIIStar);
        assert_eq!(classify(Some(4), Some(5), 10).unwrap(), IIStar);
        assert_eq!(classify(None, Some(5), 10).unwrap(), IIStar);
        assert!(classify(Some(2), Some(3), 5).is_err());
        assert!(classify(Some(4), Some(6), 11).is_err());
    }

    #[test]
    fn minimality_reduction() {
        assert_eq!(minimalize(Some(4), Some(6), 12), (Some(0), Some(0), 0, 1));
        assert_eq!(minimalize(Some(5), Some(6), 13), (Some(1), Some(0), 1, 1));
        assert_eq!(minimalize(None, Some(7), 14), (None, Some(1), 2, 1));
        assert_eq!(minimalize(Some(2), Some(3), 8), (Some(2), Some(3), 8, 0));
    }

    #[test]
    fn rank_twenty_model_configuration() {
        // y^2 = x^3 - 3 t^4 x + t^5 + t^7: II* at 0 and inf, I2 at +-1
        let m = WeierstrassModel::short(
            tpow(4).scale(&rat_int(-3)),
            tpow(5).add(&tpow(7)),
        );
        let cfg = fiber_configuration(&m).unwrap();
        assert_eq!(cfg.twist_degree, 2);
        assert_eq!(cfg.euler(), 24);
        let kinds: Vec<(String, String)> = cfg
            .fibers
            .iter()
            .map(|f| (f.place.to_string(), f.fiber.to_string()))
            .collect();
        assert_eq!(
            kinds,
            vec![
                ("t = -1".into(), "I2".into()),
                ("t = 0".into(), "II*".into()),
                ("t = 1".into(), "I2".into()),
                ("t = inf".into(), "II*".into()),
            ]
        );
        let triv = cfg.trivial_lattice().unwrap();
        assert_eq!(triv.to_string(), "U + A1^2 + E8^2");
        assert_eq!(triv.rank(), 20);
    }

    #[test]
    fn closed_places_stay_bundled() {
        // y^2 = x^3 + t x^2 + t^4 x + t^7 keeps a quartic irreducible
        // discriminant factor: four conjugate I1 fibers
        let m = WeierstrassModel::new(
            Poly::zero(),
            tpow(1),
            Poly::zero(),
            tpow(4),
            tpow(7),
        );
        let cfg = fiber_configuration(&m).unwrap();
        assert_eq!(cfg.euler(), 24);
        let closed: Vec<&Fiber> = cfg
            .fibers
            .iter()
            .filter(|f| matches!(f.place, Place::Closed { .. }))
            .collect();
        assert_eq!(closed.len(), 1);
        assert_eq!(closed[0].degree, 4);
        assert_eq!(closed[0].fiber, FiberType::In(1));
        // reducible fibers all at rational places, so this still works
        let triv = cfg.trivial_lattice().unwrap();
        assert_eq!(triv.to_string(), "U + D8 + E8");
    }

    #[test]
    fn isotrivial_quadratic_field_model() {
        // c4 = 0 identically: every bad fiber is additive; over Q(sqrt 3)
        // with a6 = t^5(3 sqrt3 t^2 - 1)^2 / 27-ish shape the closed
        // points of II fibers come in conjugate pairs
        let s3 = QuadElem::sqrt(3);
        let quad = Poly::new(vec![
            QuadElem::from_int(-1),
            QuadElem::zero(),
            s3.mul(&QuadElem::from_int(3)),
        ]);
        let a6 = Poly::monomial(QuadElem::from_int(1), 5).mul(&quad);
        let m = WeierstrassModel::short(Poly::zero(), a6);
        let cfg = fiber_configuration(&m).unwrap();
        // disc = -432 a6^2 = -432 t^10 quad^2, c6 = -864 a6, c4 = 0
        let at0 = cfg.at(&Place::At(rat_int(0))).unwrap();
        assert_eq!(at0.fiber, FiberType::IIStar); // (inf, 5, 10)
        let closed: Vec<&Fiber> = cfg
            .fibers
            .iter()
            .filter(|f| matches!(f.place, Place::Closed { .. }))
            .collect();
        assert_eq!(closed.len(), 1);
        assert_eq!(closed[0].fiber, FiberType::II); // (inf, 1, 2)
        assert_eq!(closed[0].degree, 2);
        assert_eq!(cfg.euler(), 24);
    }

    #[test]
    fn non_minimal_place_is_reduced_and_flagged() {
        // y^2 = x^3 + t^4 x + t^6: at t = 0 orders (4, 6, 12) -> smooth
        // after reduction; at infinity the model is honestly singular
        let m = WeierstrassModel::short(tpow(4), tpow(6));
        let cfg = fiber_configuration(&m).unwrap();
        assert!(cfg.at(&Place::At(rat_int(0))).is_none());
        assert!(cfg.fibers.iter().all(|f| f.place != Place::At(rat_int(0))));
    }

    #[test]
    fn degenerate_model_is_rejected() {
        // y^2 = x^3: disc = 0
        let m = WeierstrassModel::<Rat>::short(Poly::zero(), Poly::zero());
        assert!(fiber_configuration(&m).is_err());
    }
}
