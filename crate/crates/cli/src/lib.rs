//! The `orbicurve` command line: argument parsing, input documents,
//! dispatch to the core library and report rendering.
//!
//! Every report is a JSON value. Exact values are strings (`"3/2"`,
//! `"e^{i*pi*1/2}"`) and key order is fixed, so a report is a deterministic
//! function of the input and the seed.

pub mod input;
pub mod render;

use std::io::Read;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use orbicurve_core::bundles::{SplitBundle, TwistSign};
use orbicurve_core::cohomology::h_chain;
use orbicurve_core::convexity::{convexity_verdict, log_canonical_certificate, profiles};
use orbicurve_core::novikov::{random_table, verify_qsd_operator_identity};
use orbicurve_core::sector::{rank_formula, sign_cycle, SectorAction};
use orbicurve_core::suites::{run_suite, SuiteName, SuiteOptions, SuiteReport, DEFAULT_SEED};
use orbicurve_core::twisted_curve::MarkedPoint;
use orbicurve_core::wps::{
    ambient_pairing_z, compact_type_pairing, gram_matrix, verify_delta_iso_dims, verify_pairing_comparison, WPSModel,
};
use orbicurve_core::{Error, Rational};

pub use input::Document;

#[derive(Debug, Parser)]
#[command(name = "orbicurve", version, about = "Exact cohomology and quantum Serre duality checks on orbifold curves")]
pub struct Cli {
    /// Print the report as JSON instead of an aligned table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized tables and suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Novikov truncation order N.
    #[arg(long, global = true)]
    pub order: Option<Rational>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// h0, h1 and Euler characteristic of a bundle on a chain.
    Cohomology {
        /// Input document; standard input when absent or `-`.
        file: Option<PathBuf>,
    },
    /// Weak semi-positivity, convexity and concavity of a split bundle, with
    /// the log-canonical certificate of its chain.
    Convexity { file: Option<PathBuf> },
    /// The rank formula, from a bundle document or from explicit sector data.
    Rank {
        #[arg(long = "beta-detE", allow_hyphen_values = true)]
        beta_det_e: Option<Rational>,
        /// Comma-separated fiber weights of the sector at x1.
        #[arg(long)]
        g1: Option<SectorAction>,
        /// Comma-separated fiber weights of the sector at x2.
        #[arg(long)]
        g2: Option<SectorAction>,
        file: Option<PathBuf>,
    },
    /// The sign e^{πi(β(det E) - age(g1) + age(g2^{-1}))}.
    Sign {
        #[arg(long = "beta-detE", allow_hyphen_values = true)]
        beta_det_e: Rational,
        #[arg(long, default_value = "")]
        g1: SectorAction,
        #[arg(long, default_value = "")]
        g2: SectorAction,
    },
    /// Sectors, pairings and comparison checks for a weighted projective model.
    Wps {
        action: WpsAction,
        /// Comma-separated weights, instead of a document.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u64>>,
        /// Comma-separated degrees of the split bundle.
        #[arg(long, value_delimiter = ',')]
        bundle: Option<Vec<u64>>,
        file: Option<PathBuf>,
    },
    /// Checks the operator identity on a table of invariants. Without a table
    /// in the document a random one is drawn from the seed.
    SeriesVerify {
        /// Largest ψ power in a generated table.
        #[arg(long, default_value_t = 2)]
        psi_max: u32,
        /// Number of entries in a generated table.
        #[arg(long, default_value_t = 8)]
        entries: usize,
        file: Option<PathBuf>,
    },
    /// Runs a verification suite, or `all` of them.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_a: Option<u64>,
        #[arg(long)]
        max_l: Option<u64>,
        #[arg(long)]
        max_d: Option<i64>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WpsAction {
    Sectors,
    Pairing,
    Verify,
}

#[derive(Debug)]
pub enum CliError {
    /// The input is malformed or violates an invariant. `pointer` locates
    /// the offending value in the input document.
    Input { pointer: Option<String>, message: String },
    /// A library error raised while computing.
    Module { module: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input { pointer, message } => {
                json!({"error": {"kind": "input", "pointer": pointer, "message": message}})
            }
            CliError::Module { module, message } => {
                json!({"error": {"kind": "module", "module": module, "message": message}})
            }
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input { pointer: Some(p), message } => {
                write!(f, "input error at {}: {message}", if p.is_empty() { "/" } else { p })
            }
            CliError::Input { pointer: None, message } => write!(f, "input error: {message}"),
            CliError::Module { module, message } => write!(f, "error in {module}: {message}"),
        }
    }
}

fn module_error(module: &'static str) -> impl Fn(Error) -> CliError {
    move |e| CliError::Module { module, message: e.to_string() }
}

/// A finished command: its report and whether a check inside it failed.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub failed: bool,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        u8::from(self.failed)
    }

    /// The report as printed: JSON, or an aligned table followed by the
    /// wall-clock time. Timing stays out of JSON so reports are reproducible.
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
            s.push('\n');
            s
        } else {
            let mut s = render::table(&self.report);
            s.push_str(&format!("wall-clock  {:.3}s\n", self.elapsed.as_secs_f64()));
            s
        }
    }
}

fn read_document(file: &Option<PathBuf>) -> Result<Document, CliError> {
    let text = match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::Input { pointer: None, message: format!("cannot read {}: {e}", p.display()) })?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input { pointer: None, message: format!("cannot read standard input: {e}") })?;
            s
        }
    };
    Document::parse(&text)
}

/// An empty sector action on the command line stands for the untwisted
/// sector of the other action's rank.
fn align_sectors(g1: SectorAction, g2: SectorAction) -> (SectorAction, SectorAction) {
    match (g1.rank(), g2.rank()) {
        (0, r) if r > 0 => (SectorAction::untwisted(r), g2),
        (r, 0) if r > 0 => (g1, SectorAction::untwisted(r)),
        _ => (g1, g2),
    }
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (report, failed) = match &cli.command {
        Command::Cohomology { file } => (cohomology(&read_document(file)?.split_bundle()?)?, false),
        Command::Convexity { file } => convexity(&read_document(file)?.split_bundle()?)?,
        Command::Rank { beta_det_e, g1, g2, file } => match (beta_det_e, g1, g2) {
            (Some(beta), g1, g2) => {
                let (g1, g2) = align_sectors(g1.clone().unwrap_or_default(), g2.clone().unwrap_or_default());
                let rank = rank_formula(*beta, &g1, &g2).map_err(module_error("sector_calculus"))?;
                (json!({"rank": rank.to_string()}), false)
            }
            (None, None, None) => rank_of_bundle(&read_document(file)?.split_bundle()?)?,
            _ => return Err(CliError::Input { pointer: None, message: "--g1 and --g2 need --beta-detE".into() }),
        },
        Command::Sign { beta_det_e, g1, g2 } => {
            let (g1, g2) = align_sectors(g1.clone(), g2.clone());
            let s = sign_cycle(*beta_det_e, &g1, &g2).map_err(module_error("sector_calculus"))?;
            let mut v = json!({"exponent": s.exponent.to_string(), "sign": s.sign});
            if s.sign.is_none() {
                v["phase"] = json!(s.phase.to_string());
            }
            (v, false)
        }
        Command::Wps { action, weights, bundle, file } => {
            let model = match weights {
                Some(w) => WPSModel::new(w.clone(), bundle.clone().unwrap_or_default())
                    .map_err(|e| CliError::Input { pointer: None, message: e.to_string() })?,
                None => read_document(file)?.wps()?,
            };
            wps(*action, &model)
        }
        Command::SeriesVerify { psi_max, entries, file } => {
            let doc = read_document(file)?;
            series_verify(&doc, cli.order, cli.seed.unwrap_or(DEFAULT_SEED), *psi_max, *entries)?
        }
        Command::Verify { suite, max_a, max_l, max_d, max_len, trials } => {
            let names: Vec<SuiteName> = if suite == "all" {
                SuiteName::ALL.to_vec()
            } else {
                vec![suite.parse().map_err(|e: Error| CliError::Input { pointer: None, message: e.to_string() })?]
            };
            let order = match cli.order {
                Some(o) => Some(o.to_integer().filter(|&n| n > 0).ok_or_else(|| CliError::Input {
                    pointer: None,
                    message: format!("suite truncation order must be a positive integer, got {o}"),
                })? as u32),
                None => None,
            };
            let opts = SuiteOptions {
                max_a: *max_a,
                max_l: *max_l,
                max_d: *max_d,
                max_len: *max_len,
                seed: cli.seed,
                trials: *trials,
                order,
            };
            verify(&names, opts)
        }
    };
    Ok(Outcome { report, failed, elapsed: start.elapsed() })
}

fn cohomology(bundle: &SplitBundle) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    let (mut h0, mut h1, mut euler) = (0, 0, Rational::ZERO);
    for s in bundle.summands() {
        let r = h_chain(s).map_err(module_error("cohomology_engine"))?;
        h0 += r.h0;
        h1 += r.h1;
        euler += r.euler_char;
        rows.push(json!({"h0": r.h0, "h1": r.h1, "euler_char": r.euler_char.to_string()}));
    }
    let mut v = json!({"h0": h0, "h1": h1, "euler_char": euler.to_string()});
    if rows.len() > 1 {
        v["summands"] = Value::Array(rows);
    }
    Ok(v)
}

fn convexity(bundle: &SplitBundle) -> Result<(Value, bool), CliError> {
    let verdict = convexity_verdict(bundle).map_err(module_error("convexity"))?;
    let profiles = profiles(bundle).map_err(module_error("convexity"))?;
    let chain = bundle.summands().first().map(|s| s.chain().clone());
    let certificate = match chain {
        Some(c) => match log_canonical_certificate(&c) {
            Ok(cert) => to_value(cert),
            Err(e) => json!({"error": e.to_string()}),
        },
        None => Value::Null,
    };
    let theorems = verdict.check_theorems();
    let mut v = to_value(&verdict);
    v["profiles"] = to_value(&profiles);
    v["log_canonical"] = certificate.clone();
    v["theorems_hold"] = json!(theorems.is_ok());
    if let Err(e) = &theorems {
        v["violation"] = json!(e.to_string());
    }
    let failed = theorems.is_err() || certificate.get("error").is_some();
    Ok((v, failed))
}

/// The rank formula next to the direct count `Σ h¹ - h⁰` of `L_i^∨(-x1)`.
fn rank_of_bundle(bundle: &SplitBundle) -> Result<(Value, bool), CliError> {
    let beta: Rational = bundle.summands().iter().map(|s| s.degree()).sum();
    let g1 = SectorAction::at_marked_point(bundle, MarkedPoint::X1);
    let g2 = SectorAction::at_marked_point(bundle, MarkedPoint::X2);
    let formula = rank_formula(beta, &g1, &g2).map_err(module_error("sector_calculus"))?;
    let mut direct = 0i64;
    let mut convex = true;
    for s in bundle.summands() {
        let dual = h_chain(&s.dual().twist_marked(MarkedPoint::X1, TwistSign::Minus))
            .map_err(module_error("cohomology_engine"))?;
        direct += dual.h1 as i64 - dual.h0 as i64;
        convex &=
            h_chain(&s.twist_marked(MarkedPoint::X2, TwistSign::Minus)).map_err(module_error("cohomology_engine"))?.h1
                == 0;
    }
    let agrees = formula == Rational::from(direct);
    let v = json!({
        "rank": formula.to_string(),
        "beta_detE": beta.to_string(),
        "g1": to_value(&g1),
        "g2": to_value(&g2),
        "direct": direct,
        "weakly_convex": convex,
        "agrees": agrees,
    });
    Ok((v, !agrees))
}

fn wps(action: WpsAction, m: &WPSModel) -> (Value, bool) {
    match action {
        WpsAction::Sectors => {
            let sectors: Vec<Value> = m
                .enumerate_sectors()
                .iter()
                .map(|s| {
                    json!({
                        "f": s.f.to_string(),
                        "fixed_weights": s.fixed_weights,
                        "fiber_weights": to_value(&s.fiber_weights),
                        "age": s.age().to_string(),
                        "dual_age": s.dual_age().to_string(),
                        "ring_dim": s.ring_dim(),
                        "reduced_dim": s.reduced_dim(),
                    })
                })
                .collect();
            (json!({"model": m.to_string(), "sectors": sectors, "reduced_basis": to_value(m.reduced_basis())}), false)
        }
        WpsAction::Pairing => {
            let strings = |g: Vec<Vec<Rational>>| -> Value {
                to_value(g.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
            };
            (
                json!({
                    "model": m.to_string(),
                    "basis": to_value(m.reduced_basis()),
                    "compact_type": strings(gram_matrix(m, compact_type_pairing)),
                    "ambient": strings(gram_matrix(m, ambient_pairing_z)),
                }),
                false,
            )
        }
        WpsAction::Verify => {
            let mut report = verify_pairing_comparison(m);
            let (dims_report, dims) = verify_delta_iso_dims(m);
            report.merge(dims_report);
            let failed = !report.passed();
            let v = json!({
                "model": report.model,
                "passed": !failed,
                "checks": report.checks,
                "violations": report.violations,
                "sector_dims": to_value(dims),
            });
            (v, failed)
        }
    }
}

fn series_verify(
    doc: &Document,
    order: Option<Rational>,
    seed: u64,
    psi_max: u32,
    entries: usize,
) -> Result<(Value, bool), CliError> {
    let model = doc.wps()?;
    let order = order.unwrap_or(Rational::from(4i64));
    if order <= Rational::ZERO {
        return Err(CliError::Input { pointer: None, message: format!("--order must be positive, got {order}") });
    }
    let (table, source) = match &doc.table {
        Some(t) => (t.clone(), "input"),
        None => {
            let n = order.to_integer().ok_or_else(|| CliError::Input {
                pointer: None,
                message: format!("a generated table needs an integer --order, got {order}"),
            })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (random_table(&model, &mut rng, n as u32, psi_max, entries), "generated")
        }
    };
    let psi = table.entries.iter().map(|e| e.psi_power).max().unwrap_or(0).max(psi_max);
    let report = verify_qsd_operator_identity(&table, &model, order, psi).map_err(module_error("novikov_series"))?;
    let failed = !report.passed();
    let mut v = to_value(&report);
    v["passed"] = json!(!failed);
    v["table"] = json!(source);
    if source == "generated" {
        v["seed"] = json!(seed);
        v["generated_table"] = to_value(&table);
    }
    Ok((v, failed))
}

fn suite_json(r: &SuiteReport) -> Value {
    json!({
        "suite": r.name,
        "passed": r.passed(),
        "cases": r.cases,
        "counterexamples": r.failures,
        "first_counterexample": r.first_counterexample,
    })
}

fn verify(names: &[SuiteName], opts: SuiteOptions) -> (Value, bool) {
    let reports: Vec<SuiteReport> = names.iter().map(|&n| run_suite(n, opts)).collect();
    let failed = reports.iter().any(|r| !r.passed());
    let v = if let [only] = reports.as_slice() {
        suite_json(only)
    } else {
        json!({"passed": !failed, "suites": reports.iter().map(suite_json).collect::<Vec<_>>()})
    };
    (v, failed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("orbicurve").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn sign_example() {
        let out = run(&cli(&["sign", "--beta-detE", "1/2", "--g1", "", "--g2", "1/2"])).unwrap();
        assert_eq!(out.report, json!({"exponent": "1", "sign": -1}));
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn non_integer_sign_reports_the_phase() {
        let out = run(&cli(&["sign", "--beta-detE", "1/2", "--g2", "0"])).unwrap();
        assert_eq!(out.report["sign"], Value::Null);
        assert_eq!(out.report["phase"], json!("e^{i*pi*1/2}"));
    }

    #[test]
    fn rank_from_flags() {
        let out = run(&cli(&["rank", "--beta-detE", "1/2", "--g1", "", "--g2", "1/2"])).unwrap();
        assert_eq!(out.report, json!({"rank": "1"}));
    }

    #[test]
    fn failed_suites_exit_with_one() {
        let mut bad = SuiteReport::new("h1-vanishing");
        bad.record(false, || "counterexample".into());
        let (v, failed) = (suite_json(&bad), true);
        let out = Outcome { report: v, failed, elapsed: Duration::ZERO };
        assert_eq!(out.exit_code(), 1);
        assert_eq!(out.report["counterexamples"], json!(1));
    }

    #[test]
    fn errors_exit_with_two() {
        let e = CliError::Input { pointer: Some("/chain/0".into()), message: "gcd(a,b)=2 ≠ 1".into() };
        assert_eq!(e.exit_code(), 2);
        assert_eq!(e.to_string(), "input error at /chain/0: gcd(a,b)=2 ≠ 1");
        assert_eq!(e.to_json()["error"]["pointer"], json!("/chain/0"));
    }

    #[test]
    fn cohomology_of_o3_on_p12() {
        let doc =
            Document::parse(r#"{"chain":[{"a":1,"b":2,"l1":1,"l2":1}],"bundle":[[{"k1":0,"k2":0,"d":3}]]}"#).unwrap();
        let v = cohomology(&doc.split_bundle().unwrap()).unwrap();
        assert_eq!(v, json!({"h0": 2, "h1": 0, "euler_char": "2"}));
    }

    #[test]
    fn wps_verify_passes_on_p1122() {
        let m = WPSModel::new(vec![1, 1, 2, 2], vec![1]).unwrap();
        let (v, failed) = wps(WpsAction::Verify, &m);
        assert!(!failed, "{v}");
        assert_eq!(v["violations"], json!([]));
    }
}
