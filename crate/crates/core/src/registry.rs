//! Surface registry: a line-oriented table of elliptic fibrations.
//!
//! A record starts with `[surface NAME]` and carries `key = value`
//! lines until the next header. Recognized keys:
//!
//! * `m` — order of the distinguished base symmetry (required),
//! * `field` — `Q` or `Q(sqrt D)` with `D` squarefree (default `Q`),
//! * `lambda` — pinned parameter value: a rational, `sqrt:D`, or
//!   `R*sqrt:D`,
//! * `a1` .. `a4`, `a6` — Weierstrass coefficients as polynomial
//!   expressions in `t`, with `+ - * ^`, integer or `p/q` literals,
//!   and the symbols `s` (the square root generating the field) and
//!   `l` (the family parameter),
//! * `fibers` — expected singular fibers, `TYPE:PLACE` with `PLACE`
//!   a rational number, `inf`, or `gen` (roots of the residual
//!   discriminant factor), and an optional ` xK` multiplicity,
//! * `ns`, `t_lat` — lattices in the notation of
//!   [`crate::lattice::parse_lattice`],
//! * `cover` — `n,q`: character level and count-verification field.
//!
//! Records without a pinned `lambda` that mention `l` are families
//! and need a parameter value before they evaluate to a model.

use std::collections::BTreeSet;
use std::fmt;

use crate::chars::cover_for;
use crate::error::{Error, Result};
use crate::field::{parse_rat, Field, Rat};
use crate::kodaira::{Configuration, FiberType, Place};
use crate::lattice::parse_lattice;
use crate::poly::Poly;
use crate::quad::QuadElem;
use crate::report::Check;
use crate::weier::WeierstrassModel;

// ---------------------------------------------------------------
// Coefficient expressions

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Num(Rat),
    T,
    S,
    L,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

impl Expr {
    fn uses_s(&self) -> bool {
        match self {
            Expr::S => true,
            Expr::Num(_) | Expr::T | Expr::L => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.uses_s() || b.uses_s(),
            Expr::Pow(a, _) | Expr::Neg(a) => a.uses_s(),
        }
    }

    fn uses_l(&self) -> bool {
        match self {
            Expr::L => true,
            Expr::Num(_) | Expr::T | Expr::S => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.uses_l() || b.uses_l(),
            Expr::Pow(a, _) | Expr::Neg(a) => a.uses_l(),
        }
    }

    /// Substitute values for `s` and `l` and expand into a polynomial
    /// in `t`.
    fn eval<F: Field>(&self, sqrt: Option<&F>, lambda: Option<&F>) -> Result<Poly<F>> {
        let miss = |sym: &str| Error::Parse(format!("no value available for symbol '{sym}'"));
        Ok(match self {
            Expr::Num(r) => Poly::constant(F::from_rat(r)),
            Expr::T => Poly::x(),
            Expr::S => Poly::constant(sqrt.ok_or_else(|| miss("s"))?.clone()),
            Expr::L => Poly::constant(lambda.ok_or_else(|| miss("l"))?.clone()),
            Expr::Add(a, b) => a.eval(sqrt, lambda)?.add(&b.eval(sqrt, lambda)?),
            Expr::Sub(a, b) => a.eval(sqrt, lambda)?.sub(&b.eval(sqrt, lambda)?),
            Expr::Mul(a, b) => a.eval(sqrt, lambda)?.mul(&b.eval(sqrt, lambda)?),
            Expr::Pow(a, e) => a.eval(sqrt, lambda)?.pow(*e),
            Expr::Neg(a) => a.eval(sqrt, lambda)?.neg(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    T,
    S,
    L,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let bytes: Vec<char> = s.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            't' => {
                toks.push(Tok::T);
                i += 1;
            }
            's' => {
                toks.push(Tok::S);
                i += 1;
            }
            'l' => {
                toks.push(Tok::L);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // p/q literal: slash must be followed by digits
                if i < bytes.len() && bytes[i] == '/' && bytes.get(i + 1).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text: String = bytes[start..i].iter().collect();
                let r = parse_rat(&text)
                    .ok_or_else(|| Error::Parse(format!("bad numeric literal '{text}'")))?;
                toks.push(Tok::Num(r));
            }
            _ => return Err(Error::Parse(format!("unexpected character '{c}'"))),
        }
    }
    Ok(toks)
}

struct ExprParser {
    toks: Vec<Tok>,
    i: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).cloned();
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            match self.bump() {
                Some(Tok::Num(r)) if r.is_integer() && !r.is_negative() => {
                    let e: u32 = r
                        .numer()
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(Error::Parse("exponent must be a nonnegative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Num(r)) => Ok(Expr::Num(r)),
            Some(Tok::T) => Ok(Expr::T),
            Some(Tok::S) => Ok(Expr::S),
            Some(Tok::L) => Ok(Expr::L),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            other => Err(Error::Parse(format!("expected a value, found {other:?}"))),
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = ExprParser { toks, i: 0 };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in expression '{text}'")));
    }
    Ok(e)
}

// ---------------------------------------------------------------
// Record fields

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseField {
    Q,
    /// `Q(sqrt d)` with `d` squarefree, not 0 or 1.
    QSqrt(i64),
}

impl BaseField {
    fn parse(s: &str) -> Result<BaseField> {
        let s = s.trim();
        if s == "Q" {
            return Ok(BaseField::Q);
        }
        let inner = s
            .strip_prefix("Q(sqrt")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad field '{s}'")))?;
        let d: i64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in '{s}'")))?;
        // delegate radicand validation (squarefree, not 0/1)
        let _ = QuadElem::sqrt(d);
        Ok(BaseField::QSqrt(d))
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Q => write!(f, "Q"),
            BaseField::QSqrt(d) => write!(f, "Q(sqrt {d})"),
        }
    }
}

/// A pinned parameter value: rational, or a rational multiple of a
/// square root.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaSpec {
    Rational(Rat),
    Radical { scale: Rat, d: i64 },
}

impl LambdaSpec {
    fn parse(s: &str) -> Result<LambdaSpec> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad parameter value '{s}'"));
        if let Some(rest) = s.strip_prefix("sqrt:") {
            let d: i64 = rest.trim().parse().map_err(|_| bad())?;
            return Ok(LambdaSpec::Radical { scale: Rat::one(), d });
        }
        if let Some((head, tail)) = s.split_once("*sqrt:") {
            let scale = parse_rat(head.trim()).ok_or_else(bad)?;
            let d: i64 = tail.trim().parse().map_err(|_| bad())?;
            return Ok(LambdaSpec::Radical { scale, d });
        }
        Ok(LambdaSpec::Rational(parse_rat(s).ok_or_else(bad)?))
    }
}

impl fmt::Display for LambdaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSpec::Rational(r) => write!(f, "{r}"),
            LambdaSpec::Radical { scale, d } if scale.is_one() => write!(f, "sqrt:{d}"),
            LambdaSpec::Radical { scale, d } => write!(f, "{scale}*sqrt:{d}"),
        }
    }
}

/// Where an expected fiber lives.
#[derive(Clone, Debug, PartialEq)]
pub enum PlacePin {
    Rational(Rat),
    Infinity,
    /// Roots of the residual discriminant factor.
    Generic,
}

/// One expected singular fiber (or a Galois orbit of them).
#[derive(Clone, Debug, PartialEq)]
pub struct FiberPin {
    pub fiber: FiberType,
    pub place: PlacePin,
    /// Number of geometric fibers covered by the pin.
    pub count: u32,
}

impl FiberPin {
    fn parse(item: &str) -> Result<FiberPin> {
        let item = item.trim();
        let mut words = item.split_whitespace();
        let head = words
            .next()
            .ok_or_else(|| Error::Parse("empty fiber entry".into()))?;
        let count = match words.next() {
            None => 1,
            Some(w) => {
                let digits = w
                    .strip_prefix('x')
                    .ok_or_else(|| Error::Parse(format!("bad multiplicity '{w}'")))?;
                digits
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad multiplicity '{w}'")))?
            }
        };
        if words.next().is_some() {
            return Err(Error::Parse(format!("trailing input in fiber entry '{item}'")));
        }
        let (ty, place) = head
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("fiber entry '{item}' needs TYPE:PLACE")))?;
        let fiber = FiberType::parse(ty)?;
        let place = match place {
            "inf" => PlacePin::Infinity,
            "gen" => PlacePin::Generic,
            other => PlacePin::Rational(
                parse_rat(other).ok_or_else(|| Error::Parse(format!("bad place '{other}'")))?,
            ),
        };
        if count != 1 && !matches!(place, PlacePin::Generic) {
            return Err(Error::Parse(format!(
                "multiplicity is only meaningful at gen, not in '{item}'"
            )));
        }
        if count == 0 {
            return Err(Error::Parse("multiplicity x0 is empty".into()));
        }
        Ok(FiberPin { fiber, place, count })
    }
}

impl fmt::Display for FiberPin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.place {
            PlacePin::Rational(r) => write!(f, "{}:{r}", self.fiber)?,
            PlacePin::Infinity => write!(f, "{}:inf", self.fiber)?,
            PlacePin::Generic => write!(f, "{}:gen", self.fiber)?,
        }
        if self.count != 1 {
            write!(f, " x{}", self.count)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------
// Records

const COEFF_KEYS: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];
/// Index of each stored coefficient in the Weierstrass equation.

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceRecord {
    pub name: String,
    pub m: u32,
    pub field: BaseField,
    pub lambda: Option<LambdaSpec>,
    /// Parsed coefficient expressions with their source text, in the
    /// order a1, a2, a3, a4, a6.
    coeffs: [Option<(Expr, String)>; 5],
    pub fibers: Vec<FiberPin>,
    pub ns: Option<String>,
    pub t_lat: Option<String>,
    pub cover: Option<(u64, u64)>,
}

/// A record evaluated at a parameter value.
pub enum SurfaceModel {
    Rational(WeierstrassModel<Rat>),
    Quadratic(WeierstrassModel<QuadElem>),
}

impl SurfaceModel {
    pub fn configuration(&self) -> Result<Configuration> {
        match self {
            SurfaceModel::Rational(m) => crate::kodaira::fiber_configuration(m),
            SurfaceModel::Quadratic(m) => crate::kodaira::fiber_configuration(m),
        }
    }

    /// The model when its coefficients are rational.
    pub fn rational(&self) -> Option<&WeierstrassModel<Rat>> {
        match self {
            SurfaceModel::Rational(m) => Some(m),
            SurfaceModel::Quadratic(_) => None,
        }
    }
}

impl SurfaceRecord {
    fn uses_l(&self) -> bool {
        self.coeffs
            .iter()
            .flatten()
            .any(|(e, _)| e.uses_l())
    }

    fn uses_s(&self) -> bool {
        self.coeffs
            .iter()
            .flatten()
            .any(|(e, _)| e.uses_s())
    }

    /// True when evaluation needs a parameter passed in from outside.
    pub fn is_family(&self) -> bool {
        self.uses_l() && self.lambda.is_none()
    }

    /// Evaluate the record into a concrete model. `lambda` supplies
    /// the parameter for family records; fixed records reject it.
    pub fn model(&self, lambda: Option<&Rat>) -> Result<SurfaceModel> {
        if self.lambda.is_some() && lambda.is_some() {
            return Err(Error::Parse(format!(
                "surface '{}' has a fixed parameter; drop --lambda",
                self.name
            )));
        }
        if self.is_family() && lambda.is_none() {
            return Err(Error::Parse(format!(
                "surface '{}' is a family; pass --lambda",
                self.name
            )));
        }
        match self.field {
            BaseField::Q => {
                let pinned = match &self.lambda {
                    Some(LambdaSpec::Rational(r)) => Some(r.clone()),
                    Some(LambdaSpec::Radical { .. }) => {
                        return Err(Error::Parse(format!(
                            "surface '{}' pins an irrational parameter over Q",
                            self.name
                        )))
                    }
                    None => lambda.cloned(),
                };
                let a = self.eval_coeffs::<Rat>(None, pinned.as_ref())?;
                let [a1, a2, a3, a4, a6] = a;
                Ok(SurfaceModel::Rational(WeierstrassModel::new(a1, a2, a3, a4, a6)))
            }
            BaseField::QSqrt(d) => {
                let sqrt = QuadElem::sqrt(d);
                let pinned = match &self.lambda {
                    Some(LambdaSpec::Rational(r)) => {
                        Some(QuadElem::new(r.clone(), Rat::zero(), d))
                    }
                    Some(LambdaSpec::Radical { scale, d: dd }) => {
                        if *dd != d {
                            return Err(Error::Parse(format!(
                                "surface '{}' mixes sqrt:{dd} with field {}",
                                self.name, self.field
                            )));
                        }
                        Some(QuadElem::new(Rat::zero(), scale.clone(), d))
                    }
                    None => lambda.map(|r| QuadElem::new(r.clone(), Rat::zero(), d)),
                };
                let a = self.eval_coeffs::<QuadElem>(Some(&sqrt), pinned.as_ref())?;
                let [a1, a2, a3, a4, a6] = a;
                Ok(SurfaceModel::Quadratic(WeierstrassModel::new(a1, a2, a3, a4, a6)))
            }
        }
    }

    fn eval_coeffs<F: Field>(
        &self,
        sqrt: Option<&F>,
        lambda: Option<&F>,
    ) -> Result<[Poly<F>; 5]> {
        let mut out: [Poly<F>; 5] =
            [Poly::zero(), Poly::zero(), Poly::zero(), Poly::zero(), Poly::zero()];
        for (slot, c) in out.iter_mut().zip(self.coeffs.iter()) {
            if let Some((expr, _)) = c {
                *slot = expr.eval(sqrt, lambda)?;
            }
        }
        Ok(out)
    }

    fn serialize_into(&self, out: &mut String) {
        use fmt::Write;
        let _ = writeln!(out, "[surface {}]", self.name);
        let _ = writeln!(out, "m = {}", self.m);
        let _ = writeln!(out, "field = {}", self.field);
        if let Some(l) = &self.lambda {
            let _ = writeln!(out, "lambda = {l}");
        }
        for (key, c) in COEFF_KEYS.iter().zip(self.coeffs.iter()) {
            if let Some((_, text)) = c {
                let _ = writeln!(out, "{key} = {text}");
            }
        }
        if !self.fibers.is_empty() {
            let items: Vec<String> = self.fibers.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "fibers = {}", items.join(", "));
        }
        if let Some(ns) = &self.ns {
            let _ = writeln!(out, "ns = {ns}");
        }
        if let Some(t) = &self.t_lat {
            let _ = writeln!(out, "t_lat = {t}");
        }
        if let Some((n, q)) = self.cover {
            let _ = writeln!(out, "cover = {n},{q}");
        }
    }
}

// ---------------------------------------------------------------
// Matching computed configurations against pins

fn place_rank(p: &PlacePin) -> u8 {
    match p {
        PlacePin::Rational(_) => 0,
        PlacePin::Infinity => 1,
        PlacePin::Generic => 2,
    }
}

fn canonical_pins(pins: &[FiberPin]) -> Vec<FiberPin> {
    let mut out: Vec<FiberPin> = Vec::new();
    for p in pins {
        if matches!(p.place, PlacePin::Generic) {
            if let Some(q) = out
                .iter_mut()
                .find(|q| q.fiber == p.fiber && matches!(q.place, PlacePin::Generic))
            {
                q.count += p.count;
                continue;
            }
        }
        out.push(p.clone());
    }
    out.sort_by(|a, b| {
        place_rank(&a.place)
            .cmp(&place_rank(&b.place))
            .then_with(|| match (&a.place, &b.place) {
                (PlacePin::Rational(x), PlacePin::Rational(y)) => x.cmp(y),
                _ => std::cmp::Ordering::Equal,
            })
            .then_with(|| a.fiber.to_string().cmp(&b.fiber.to_string()))
    });
    out
}

fn pins_of(config: &Configuration) -> Vec<FiberPin> {
    config
        .fibers
        .iter()
        .map(|f| match &f.place {
            Place::At(r) => FiberPin {
                fiber: f.fiber,
                place: PlacePin::Rational(r.clone()),
                count: 1,
            },
            Place::Infinity => FiberPin {
                fiber: f.fiber,
                place: PlacePin::Infinity,
                count: 1,
            },
            Place::Closed { degree, .. } => FiberPin {
                fiber: f.fiber,
                place: PlacePin::Generic,
                count: *degree,
            },
        })
        .collect()
}

fn render_pins(pins: &[FiberPin]) -> String {
    if pins.is_empty() {
        return "none".into();
    }
    let items: Vec<String> = pins.iter().map(|p| p.to_string()).collect();
    items.join(", ")
}

/// Compare a computed fiber configuration against the expected pins.
pub fn check_fiber_pins(name: &str, pins: &[FiberPin], config: &Configuration) -> Check {
    let expected = canonical_pins(pins);
    let actual = canonical_pins(&pins_of(config));
    Check::compare(name, render_pins(&expected), render_pins(&actual))
}

// ---------------------------------------------------------------
// File parsing

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Registry {
    pub records: Vec<SurfaceRecord>,
}

struct PartialRecord {
    name: String,
    header_line: usize,
    m: Option<u32>,
    field: Option<BaseField>,
    lambda: Option<LambdaSpec>,
    coeffs: [Option<(Expr, String)>; 5],
    fibers: Option<Vec<FiberPin>>,
    ns: Option<String>,
    t_lat: Option<String>,
    cover: Option<(u64, u64)>,
}

impl PartialRecord {
    fn new(name: String, header_line: usize) -> Self {
        PartialRecord {
            name,
            header_line,
            m: None,
            field: None,
            lambda: None,
            coeffs: Default::default(),
            fibers: None,
            ns: None,
            t_lat: None,
            cover: None,
        }
    }

    fn finish(self) -> Result<SurfaceRecord> {
        let err = |msg: String| Error::Registry { line: self.header_line, msg };
        let m = self
            .m
            .ok_or_else(|| err(format!("surface '{}' is missing m", self.name)))?;
        let record = SurfaceRecord {
            name: self.name,
            m,
            field: self.field.unwrap_or(BaseField::Q),
            lambda: self.lambda,
            coeffs: self.coeffs,
            fibers: self.fibers.unwrap_or_default(),
            ns: self.ns,
            t_lat: self.t_lat,
            cover: self.cover,
        };
        if record.coeffs.iter().all(|c| c.is_none()) {
            return Err(err(format!("surface '{}' has no coefficients", record.name)));
        }
        if record.uses_s() && !matches!(record.field, BaseField::QSqrt(_)) {
            return Err(err(format!(
                "surface '{}' uses 's' but its field is Q",
                record.name
            )));
        }
        if let (Some(LambdaSpec::Radical { d, .. }), BaseField::Q) = (&record.lambda, record.field)
        {
            return Err(err(format!(
                "surface '{}' pins sqrt:{d} but its field is Q",
                record.name
            )));
        }
        if let (Some(LambdaSpec::Radical { d, .. }), BaseField::QSqrt(dd)) =
            (&record.lambda, record.field)
        {
            if *d != dd {
                return Err(err(format!(
                    "surface '{}' pins sqrt:{d} over field sqrt {dd}",
                    record.name
                )));
            }
        }
        let mut total_rank = 0u32;
        for (key, text) in [("ns", &record.ns), ("t_lat", &record.t_lat)] {
            if let Some(text) = text {
                let lat = parse_lattice(text)
                    .map_err(|e| err(format!("bad {key} for '{}': {e}", record.name)))?;
                total_rank += lat.rank() as u32;
            }
        }
        if record.ns.is_some() && record.t_lat.is_some() && total_rank != 22 {
            return Err(err(format!(
                "surface '{}': ns and t_lat ranks sum to {total_rank}, not 22",
                record.name
            )));
        }
        if let Some((n, q)) = record.cover {
            if record.field != BaseField::Q {
                return Err(err(format!(
                    "surface '{}': counting needs rational coefficients",
                    record.name
                )));
            }
            if cover_for(record.m, n).is_none() {
                return Err(err(format!(
                    "surface '{}': no character data at level {n} for m = {}",
                    record.name, record.m
                )));
            }
            if n < 2 || q % n != 1 {
                return Err(err(format!(
                    "surface '{}': field size {q} is not 1 mod {n}",
                    record.name
                )));
            }
        }
        // Evaluation must succeed; probe families at l = 1.
        let probe = Rat::one();
        let arg = if record.is_family() { Some(&probe) } else { None };
        record
            .model(arg)
            .map_err(|e| err(format!("surface '{}' does not evaluate: {e}", record.name)))?;
        Ok(record)
    }
}

impl Registry {
    pub fn parse(text: &str) -> Result<Registry> {
        let mut records: Vec<SurfaceRecord> = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut current: Option<PartialRecord> = None;

        let finish =
            |cur: &mut Option<PartialRecord>, records: &mut Vec<SurfaceRecord>| -> Result<()> {
                if let Some(pr) = cur.take() {
                    records.push(pr.finish()?);
                }
                Ok(())
            };

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let err = |msg: String| Error::Registry { line: lineno, msg };
            let line = match raw.split_once('#') {
                Some((head, _)) => head.trim(),
                None => raw.trim(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(inner) = line.strip_prefix('[') {
                let inner = inner
                    .strip_suffix(']')
                    .ok_or_else(|| err("unterminated header".into()))?;
                let name = inner
                    .strip_prefix("surface")
                    .map(str::trim)
                    .filter(|n| !n.is_empty() && n.split_whitespace().count() == 1)
                    .ok_or_else(|| err(format!("bad header '[{inner}]'")))?;
                if !seen.insert(name.to_string()) {
                    return Err(err(format!("duplicate surface '{name}'")));
                }
                finish(&mut current, &mut records)?;
                current = Some(PartialRecord::new(name.to_string(), lineno));
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected 'key = value', found '{line}'")))?;
            let key = key.trim();
            let value = value.trim();
            let rec = current
                .as_mut()
                .ok_or_else(|| err(format!("'{key}' appears before any [surface] header")))?;
            let wrap = |e: Error| match e {
                Error::Registry { .. } => e,
                other => Error::Registry { line: lineno, msg: other.to_string() },
            };
            match key {
                "m" => {
                    if rec.m.is_some() {
                        return Err(err("duplicate key 'm'".into()));
                    }
                    rec.m = Some(
                        value
                            .parse::<u32>()
                            .ok()
                            .filter(|&m| m >= 1)
                            .ok_or_else(|| err(format!("bad order '{value}'")))?,
                    );
                }
                "field" => {
                    if rec.field.is_some() {
                        return Err(err("duplicate key 'field'".into()));
                    }
                    rec.field = Some(BaseField::parse(value).map_err(wrap)?);
                }
                "lambda" => {
                    if rec.lambda.is_some() {
                        return Err(err("duplicate key 'lambda'".into()));
                    }
                    rec.lambda = Some(LambdaSpec::parse(value).map_err(wrap)?);
                }
                "fibers" => {
                    if rec.fibers.is_some() {
                        return Err(err("duplicate key 'fibers'".into()));
                    }
                    let pins = value
                        .split(',')
                        .map(FiberPin::parse)
                        .collect::<Result<Vec<_>>>()
                        .map_err(wrap)?;
                    rec.fibers = Some(pins);
                }
                "ns" => {
                    if rec.ns.is_some() {
                        return Err(err("duplicate key 'ns'".into()));
                    }
                    rec.ns = Some(value.to_string());
                }
                "t_lat" => {
                    if rec.t_lat.is_some() {
                        return Err(err("duplicate key 't_lat'".into()));
                    }
                    rec.t_lat = Some(value.to_string());
                }
                "cover" => {
                    if rec.cover.is_some() {
                        return Err(err("duplicate key 'cover'".into()));
                    }
                    let (n, q) = value
                        .split_once(',')
                        .ok_or_else(|| err(format!("cover needs 'n,q', found '{value}'")))?;
                    let n: u64 = n.trim().parse().map_err(|_| err("bad cover level".into()))?;
                    let q: u64 = q.trim().parse().map_err(|_| err("bad cover field".into()))?;
                    rec.cover = Some((n, q));
                }
                "a5" => {
                    return Err(err("a5 is not a Weierstrass coefficient".into()));
                }
                k if COEFF_KEYS.contains(&k) => {
                    let slot = COEFF_KEYS.iter().position(|c| *c == k).unwrap();
                    if rec.coeffs[slot].is_some() {
                        return Err(err(format!("duplicate key '{k}'")));
                    }
                    let expr = parse_expr(value).map_err(wrap)?;
                    rec.coeffs[slot] = Some((expr, value.to_string()));
                }
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        finish(&mut current, &mut records)?;
        Ok(Registry { records })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (i, rec) in self.records.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            rec.serialize_into(&mut out);
        }
        out
    }

    /// The table shipped with the crate.
    pub fn builtin() -> Registry {
        Registry::parse(include_str!("../data/surfaces.reg"))
            .expect("built-in surface table is exercised by tests")
    }

    pub fn get(&self, name: &str) -> Result<&SurfaceRecord> {
        self.records
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnknownSurface(name.to_string()))
    }

    /// Records that carry counting instructions.
    pub fn covered(&self) -> Vec<&SurfaceRecord> {
        self.records.iter().filter(|r| r.cover.is_some()).collect()
    }
}

// ---------------------------------------------------------------
