//! Command-line front end: lattice queries, fibration analysis, zeta
//! data, exact point counts, feasibility replays, and the one-shot
//! verification run.
//!
//! Exit codes: 0 success (all checks pass), 1 check failure or internal
//! computation failure, 2 usage error (bad arguments, unknown surface,
//! malformed registry, unsuitable field).

use clap::{Parser, Subcommand};
use num::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};

use k3kit::chars::cover_for;
use k3kit::disc::{mirror_check, two_elementary_triple, DiscriminantForm};
use k3kit::field::parse_rat;
use k3kit::fq::Fq;
use k3kit::jacobi::weil_check;
use k3kit::lattice::parse_lattice;
use k3kit::registry::{check_fiber_pins, Registry};
use k3kit::replay::{hurwitz_feasible, verify_table1, Hurwitz, TABLE1};
use k3kit::report::{all_pass, Check};
use k3kit::zeta::{surface_count, zeta_covered, zeta_fermat, ZetaFactor};
use k3kit::{suite, Error, Result};

#[derive(Parser)]
#[command(name = "k3kit", version, about = "Exact lattice invariants, elliptic fibrations, and point counts for a catalog of K3 surfaces")]
struct Cli {
    /// Surface registry file (default: the built-in records)
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<std::path::PathBuf>,

    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Upper bound on threads used by counting commands
    #[arg(long, global = true, default_value_t = 1, value_name = "K")]
    threads: usize,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice invariants and the two-elementary census
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Analyze surface records from the registry
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Frobenius data over finite fields
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Brute-force point counts against trace predictions
    #[command(subcommand)]
    Count(CountCmd),
    /// Replay feasibility arguments
    #[command(subcommand)]
    Replay(ReplayCmd),
    /// Run verification criteria
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Rank, signature, determinant, and discriminant data of a lattice expression
    Info { expr: String },
    /// The census of even two-elementary hyperbolic lattices realized by the catalog
    Table1,
    /// Genus-level mirror comparison: does T split as U plus the given NS?
    Mirror { t_expr: String, ns_expr: String },
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Fiber configuration, trivial lattice, and Euler number of one record
    Analyze {
        name: String,
        /// Parameter value for family records
        #[arg(long, value_name = "V")]
        lambda: Option<String>,
    },
    /// Analyze a family record at several parameter values
    Scan {
        name: String,
        /// Comma-separated parameter values
        #[arg(long, value_name = "V1,V2,...", value_delimiter = ',', required = true)]
        lambdas: Vec<String>,
    },
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// Middle zeta factor of the degree-n diagonal surface
    Fermat {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    /// Middle zeta factor of a covered surface from the registry
    K3 {
        name: String,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Count points on the degree-n diagonal surface and compare with the trace formula
    Fermat {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    /// Count points on a covered surface's smooth model and compare with the trace formula
    Surface {
        name: String,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand)]
enum ReplayCmd {
    /// Test whether a cyclic branched cover of the given shape can exist
    Hurwitz {
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        ram: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run every verification criterion against the registry
    All,
}

/// Everything a command produces: the machine object and the text lines.
struct Outcome {
    out: Output,
    text: Vec<String>,
}

#[derive(Serialize)]
struct Output {
    command: &'static str,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    checks: Vec<Check>,
}

impl Outcome {
    fn new(command: &'static str) -> Outcome {
        Outcome {
            out: Output {
                command,
                inputs: Map::new(),
                results: Map::new(),
                checks: Vec::new(),
            },
            text: Vec::new(),
        }
    }

    fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.out.inputs.insert(key.into(), value);
        self
    }

    fn result(&mut self, key: &str, value: Value) -> &mut Self {
        self.out.results.insert(key.into(), value);
        self
    }

    fn line(&mut self, line: String) -> &mut Self {
        self.text.push(line);
        self
    }
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(&cli));
}

fn run(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(oc) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&oc.out).expect("output serializes")
                );
            } else {
                for line in &oc.text {
                    println!("{line}");
                }
                summarize_checks(&oc.out.checks);
            }
            if all_pass(&oc.out.checks) {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn summarize_checks(checks: &[Check]) {
    if checks.is_empty() {
        return;
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    if failed.is_empty() {
        println!("checks: {} pass", checks.len());
        return;
    }
    println!("checks: {} of {} FAIL", failed.len(), checks.len());
    for c in failed {
        println!("  {}: expected {}, actual {}", c.name, c.expected, c.actual);
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Registry { .. }
        | Error::UnknownSurface(_)
        | Error::NotPrime(_)
        | Error::TooLarge(..)
        | Error::NotCovered(_)
        | Error::BadField(_) => 2,
        _ => 1,
    }
}

fn load_registry(cli: &Cli) -> Result<(Registry, String)> {
    match &cli.registry {
        None => Ok((Registry::builtin(), "builtin".into())),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            Ok((Registry::parse(&text)?, path.display().to_string()))
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Cmd::Lattice(LatticeCmd::Info { expr }) => lattice_info(expr),
        Cmd::Lattice(LatticeCmd::Table1) => lattice_table1(),
        Cmd::Lattice(LatticeCmd::Mirror { t_expr, ns_expr }) => lattice_mirror(t_expr, ns_expr),
        Cmd::Surface(SurfaceCmd::Analyze { name, lambda }) => {
            let (reg, label) = load_registry(cli)?;
            surface_analyze(&reg, &label, name, lambda.as_deref())
        }
        Cmd::Surface(SurfaceCmd::Scan { name, lambdas }) => {
            let (reg, label) = load_registry(cli)?;
            surface_scan(&reg, &label, name, lambdas)
        }
        Cmd::Zeta(ZetaCmd::Fermat { n, q }) => zeta_fermat_cmd(*n, *q),
        Cmd::Zeta(ZetaCmd::K3 { name, q }) => {
            let (reg, label) = load_registry(cli)?;
            zeta_k3_cmd(&reg, &label, name, *q)
        }
        Cmd::Count(CountCmd::Fermat { n, q }) => count_fermat_cmd(*n, *q),
        Cmd::Count(CountCmd::Surface { name, q }) => {
            let (reg, label) = load_registry(cli)?;
            count_surface_cmd(&reg, &label, name, *q, cli.threads)
        }
        Cmd::Replay(ReplayCmd::Hurwitz { genus, degree, ram }) => {
            replay_hurwitz(*genus, *degree, *ram)
        }
        Cmd::Verify(VerifyCmd::All) => {
            let (reg, label) = load_registry(cli)?;
            verify_all(&reg, &label, cli.threads)
        }
    }
}

// ---------------------------------------------------------------
// lattice

fn render_group(orders: &[u64]) -> String {
    if orders.is_empty() {
        return "trivial".into();
    }
    let parts: Vec<String> = orders.iter().map(|d| format!("Z/{d}")).collect();
    parts.join(" x ")
}

fn lattice_info(expr: &str) -> Result<Outcome> {
    let lat = parse_lattice(expr)?;
    let form = DiscriminantForm::of(lat.gram());
    let (pos, neg) = lat.signature();
    let mut oc = Outcome::new("lattice info");
    oc.input("expr", json!(expr));
    oc.result("rank", json!(lat.rank()))
        .result("signature", json!([pos, neg]))
        .result("determinant", json!(lat.det().to_string()))
        .result("even", json!(lat.is_even()))
        .result("disc_group", json!(form.orders()));
    oc.line(format!("{lat}"))
        .line(format!("  rank         {}", lat.rank()))
        .line(format!("  signature    ({pos}, {neg})"))
        .line(format!("  determinant  {}", lat.det()))
        .line(format!("  even         {}", lat.is_even()))
        .line(format!("  disc group   {}", render_group(form.orders())));
    if let Ok((_, l, delta)) = two_elementary_triple(&lat) {
        oc.result("length", json!(l)).result("delta", json!(delta));
        oc.line(format!("  length       {l}"))
            .line(format!("  delta        {delta}"));
    }
    Ok(oc)
}

fn lattice_table1() -> Result<Outcome> {
    let mut oc = Outcome::new("lattice table1");
    let mut rows = Vec::new();
    oc.line(format!(
        "{:>4} {:>4} {:>6} {:>5}  lattice",
        "m", "r", "l", "delta"
    ));
    for (m, r, l, delta, expr) in TABLE1 {
        rows.push(json!({
            "m": m,
            "rank": r,
            "length": l,
            "delta": delta,
            "lattice": expr,
        }));
        oc.line(format!("{m:>4} {r:>4} {l:>6} {delta:>5}  {expr}"));
    }
    oc.result("rows", Value::Array(rows));
    oc.out.checks = verify_table1()?;
    Ok(oc)
}

fn lattice_mirror(t_expr: &str, ns_expr: &str) -> Result<Outcome> {
    let t = parse_lattice(t_expr)?;
    let ns = parse_lattice(ns_expr)?;
    let cmp = mirror_check(&t, &ns)?;
    let mut oc = Outcome::new("lattice mirror");
    oc.input("t", json!(t_expr)).input("ns", json!(ns_expr));
    oc.result("mirror", json!(cmp.all()));
    oc.line(format!(
        "{t} = U + ({ns}) at genus level: {}",
        if cmp.all() { "yes" } else { "no" }
    ));
    oc.out.checks = vec![
        Check::named_bool("rank", cmp.rank_match),
        Check::named_bool("signature", cmp.signature_match),
        Check::named_bool("discriminant form", cmp.form_match),
    ];
    Ok(oc)
}

// ---------------------------------------------------------------
// surface

fn fiber_rows(config: &k3kit::kodaira::Configuration) -> Vec<Value> {
    config
        .fibers
        .iter()
        .map(|f| {
            json!({
                "type": f.fiber.to_string(),
                "place": f.place.to_string(),
                "degree": f.degree,
            })
        })
        .collect()
}

fn surface_analyze(
    reg: &Registry,
    reg_label: &str,
    name: &str,
    lambda: Option<&str>,
) -> Result<Outcome> {
    let rec = reg.get(name)?;
    let lam = match lambda {
        None => None,
        Some(s) => {
            Some(parse_rat(s).ok_or_else(|| Error::Parse(format!("bad rational '{s}'")))?)
        }
    };
    let model = rec.model(lam.as_ref())?;
    let config = model.configuration()?;
    let trivial = config.trivial_lattice()?;

    let mut oc = Outcome::new("surface analyze");
    oc.input("registry", json!(reg_label))
        .input("name", json!(name));
    if let Some(s) = lambda {
        oc.input("lambda", json!(s));
    }
    oc.result("m", json!(rec.m))
        .result("field", json!(rec.field.to_string()))
        .result("fibers", Value::Array(fiber_rows(&config)))
        .result("euler", json!(config.euler()))
        .result("trivial_lattice", json!(trivial.to_string()));
    if let Some(spec) = &rec.lambda {
        oc.result("lambda", json!(spec.to_string()));
    } else if let Some(v) = &lam {
        oc.result("lambda", json!(v.to_string()));
    }
    if let Some(ns) = &rec.ns {
        oc.result("ns", json!(ns));
    }
    if let Some(t) = &rec.t_lat {
        oc.result("t_lat", json!(t));
    }

    oc.line(format!("{name}: m = {}, field {}", rec.m, rec.field));
    if let Some(Value::String(s)) = oc.out.results.get("lambda").cloned() {
        oc.line(format!("  lambda    {s}"));
    }
    for f in &config.fibers {
        oc.line(format!("  fiber     {} at {}", f.fiber, f.place));
    }
    oc.line(format!("  euler     {}", config.euler()));
    oc.line(format!("  trivial   {trivial}"));
    if let Some(ns) = &rec.ns {
        oc.line(format!("  ns        {ns}"));
    }
    if let Some(t) = &rec.t_lat {
        oc.line(format!("  t_lat     {t}"));
    }

    // Pins describe a record's own fibers, so they are only checkable on
    // records with no free parameter; a family member at an arbitrary
    // parameter may legitimately degenerate away from them.
    if !rec.is_family() {
        oc.out.checks = vec![check_fiber_pins("fiber pins", &rec.fibers, &config)];
    }
    Ok(oc)
}

fn surface_scan(
    reg: &Registry,
    reg_label: &str,
    name: &str,
    lambdas: &[String],
) -> Result<Outcome> {
    let rec = reg.get(name)?;
    let mut oc = Outcome::new("surface scan");
    oc.input("registry", json!(reg_label))
        .input("name", json!(name))
        .input("lambdas", json!(lambdas));
    oc.line(format!("{name}: m = {}, field {}", rec.m, rec.field));
    let mut members = Vec::new();
    for s in lambdas {
        let lam = parse_rat(s).ok_or_else(|| Error::Parse(format!("bad rational '{s}'")))?;
        let model = rec.model(Some(&lam))?;
        let config = model.configuration()?;
        let trivial = config.trivial_lattice()?;
        members.push(json!({
            "lambda": s,
            "fibers": Value::Array(fiber_rows(&config)),
            "euler": config.euler(),
            "trivial_lattice": trivial.to_string(),
        }));
        let types: Vec<String> = config
            .fibers
            .iter()
            .map(|f| format!("{} at {}", f.fiber, f.place))
            .collect();
        oc.line(format!("  lambda = {s}:"));
        for t in types {
            oc.line(format!("    {t}"));
        }
        oc.line(format!("    euler {}, trivial {trivial}", config.euler()));
    }
    oc.result("members", Value::Array(members));
    Ok(oc)
}

// ---------------------------------------------------------------
// zeta

fn zeta_results(oc: &mut Outcome, z: &ZetaFactor) {
    let q = BigInt::from(z.q);
    let root_sum = z.predicted_count() - (BigInt::from(1) + &q * &q + BigInt::from(z.rho) * &q);
    let coeffs: Vec<String> = z.coeffs.iter().map(|c| c.to_string()).collect();
    oc.result("n", json!(z.n))
        .result("q", json!(z.q))
        .result("rho", json!(z.rho))
        .result("degree", json!(z.degree()))
        .result("transcendental_roots", json!(z.roots.len()))
        .result("root_sum", json!(root_sum.to_string()))
        .result("predicted_count", json!(z.predicted_count().to_string()))
        .result("coeffs", json!(coeffs));
    oc.line(format!("  degree           {}", z.degree()))
        .line(format!("  algebraic part   (1 - {}T)^{}", z.q, z.rho))
        .line(format!("  transcendental   {} roots", z.roots.len()))
        .line(format!("  root sum         {root_sum}"))
        .line(format!("  predicted count  {}", z.predicted_count()))
        .line(format!("  coeffs ascending {}", coeffs.join(" ")));
}

fn zeta_fermat_cmd(n: u64, q: u64) -> Result<Outcome> {
    let f = Fq::new(q)?;
    let z = zeta_fermat(n, &f)?;
    let mut oc = Outcome::new("zeta fermat");
    oc.input("n", json!(n)).input("q", json!(q));
    oc.line(format!(
        "middle zeta factor, degree-{n} diagonal surface over F_{q}"
    ));
    zeta_results(&mut oc, &z);
    Ok(oc)
}

fn covered_level(reg: &Registry, name: &str) -> Result<(u64, &'static k3kit::chars::ExponentCover)> {
    let rec = reg.get(name)?;
    let (n, _) = rec.cover.ok_or_else(|| Error::NotCovered(name.into()))?;
    let cover = cover_for(rec.m, n).ok_or_else(|| Error::NotCovered(name.into()))?;
    Ok((n, cover))
}

fn zeta_k3_cmd(reg: &Registry, reg_label: &str, name: &str, q: u64) -> Result<Outcome> {
    let (n, cover) = covered_level(reg, name)?;
    let f = Fq::new(q)?;
    let z = zeta_covered(cover, &f)?;
    let mut oc = Outcome::new("zeta k3");
    oc.input("registry", json!(reg_label))
        .input("name", json!(name))
        .input("q", json!(q));
    oc.line(format!("middle zeta factor, {name} over F_{q} (n = {n})"));
    zeta_results(&mut oc, &z);
    Ok(oc)
}

// ---------------------------------------------------------------
// count

fn count_fermat_cmd(n: u64, q: u64) -> Result<Outcome> {
    let f = Fq::new(q)?;
    let wc = weil_check(n, &f)?;
    let mut oc = Outcome::new("count fermat");
    oc.input("n", json!(n)).input("q", json!(q));
    oc.result("count", json!(wc.count))
        .result("char_sum", json!(wc.char_sum.to_string()))
        .result("predicted", json!(wc.predicted.to_string()));
    oc.line(format!("degree-{n} diagonal surface over F_{q}"))
        .line(format!("  points     {}", wc.count))
        .line(format!("  char sum   {}", wc.char_sum))
        .line(format!("  predicted  {}", wc.predicted));
    oc.out.checks = vec![Check::compare(
        "count matches 1 + q^2 + q + char sum",
        wc.predicted.to_string(),
        wc.count.to_string(),
    )];
    Ok(oc)
}

fn count_surface_cmd(
    reg: &Registry,
    reg_label: &str,
    name: &str,
    q: u64,
    threads: usize,
) -> Result<Outcome> {
    let (n, cover) = covered_level(reg, name)?;
    let rec = reg.get(name)?;
    let f = Fq::new(q)?;
    let model = rec.model(None)?;
    let weier = model
        .rational()
        .ok_or_else(|| Error::BadField("point counting needs rational coefficients".into()))?;
    let config = model.configuration()?;
    let z = zeta_covered(cover, &f)?;
    let count = surface_count(weier, &config, &f, threads)?;
    let predicted = z.predicted_count();
    let mut oc = Outcome::new("count surface");
    oc.input("registry", json!(reg_label))
        .input("name", json!(name))
        .input("q", json!(q));
    let root_sum = &predicted - (BigInt::from(1) + BigInt::from(q) * q + BigInt::from(z.rho) * q);
    oc.result("n", json!(n))
        .result("rho", json!(z.rho))
        .result("count", json!(count))
        .result("char_sum", json!(root_sum.to_string()))
        .result("predicted", json!(predicted.to_string()));
    oc.line(format!("{name} over F_{q} (n = {n}, rho = {})", z.rho))
        .line(format!("  points     {count}"))
        .line(format!("  char sum   {root_sum}"))
        .line(format!("  predicted  {predicted}"));
    oc.out.checks = vec![Check::compare(
        format!("count matches 1 + q^2 + {}q + char sum", z.rho),
        predicted.to_string(),
        count.to_string(),
    )];
    Ok(oc)
}

// ---------------------------------------------------------------
// replay

fn replay_hurwitz(genus: u64, degree: u64, ram: u64) -> Result<Outcome> {
    let h = hurwitz_feasible(genus, degree, ram)?;
    let mut oc = Outcome::new("replay hurwitz");
    oc.input("genus", json!(genus))
        .input("degree", json!(degree))
        .input("ram", json!(ram));
    match h {
        Hurwitz::Feasible { quotient_genus } => {
            oc.result("feasible", json!(true))
                .result("quotient_genus", json!(quotient_genus));
            oc.line(format!("feasible, quotient genus {quotient_genus}"));
        }
        Hurwitz::Infeasible => {
            oc.result("feasible", json!(false));
            oc.line("infeasible".into());
        }
    }
    Ok(oc)
}

// ---------------------------------------------------------------
// verify

fn verify_all(reg: &Registry, reg_label: &str, threads: usize) -> Result<Outcome> {
    let criteria = suite::run_all(reg, threads)?;
    let mut oc = Outcome::new("verify all");
    oc.input("registry", json!(reg_label));
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for c in criteria {
        let ok = c.pass();
        oc.line(format!(
            "criterion {:2} ({}): {}, {} checks",
            c.id,
            c.title,
            if ok { "pass" } else { "FAIL" },
            c.checks.len()
        ));
        rows.push(json!({
            "id": c.id,
            "title": c.title,
            "pass": ok,
            "checks": c.checks.len(),
        }));
        for ch in c.checks {
            checks.push(Check {
                name: format!("criterion {}: {}", c.id, ch.name),
                ..ch
            });
        }
    }
    oc.result("criteria", Value::Array(rows));
    oc.out.checks = checks;
    Ok(oc)
}
