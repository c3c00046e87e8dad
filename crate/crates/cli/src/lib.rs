//! Command-line front end for `leibniz-super`.
//!
//! Every subcommand produces a [`Report`]: a JSON document, a short human
//! rendering and an exit status. Exit codes are 0 when all checks pass, 1
//! when a mathematical violation was found and 2 for usage or parse errors.

pub mod pipeline;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use leibniz_super::classification::{canonicalize, enumerate_descriptors, required_conductor};
use leibniz_super::families::{build_model_1, build_model_2, Family, FamilyParams, MIN_N};
use leibniz_super::invariants::{
    central_series, characteristic_sequence, default_cutoff, generator_info, right_annihilator,
    right_mult_superalgebra_closure,
};
use leibniz_super::isomorphism::{
    iso_solvable, materialize_basis_change, verify_isomorphism, BExponent, IsoConditionSystem,
};
use leibniz_super::json::{algebra_from_json, algebra_to_json, same_algebra, AnyAlgebra};
use leibniz_super::{
    with_algebra, Complex64, Cyclotomic, Error, Rational, Scalar, ScalarKind, SuperAlgebra, Tol,
};

#[derive(Parser, Debug)]
#[command(
    name = "leibniz-super",
    version,
    about = "Build, check and classify nilpotent Leibniz superalgebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Scalar backend: rational, complex or cyclotomic:N.
    #[arg(long, global = true, default_value = "rational", value_parser = parse_kind)]
    pub scalar: ScalarKind,
    /// Comparison tolerance for the complex backend.
    #[arg(long, global = true, default_value_t = leibniz_super::scalar::DEFAULT_TOL)]
    pub tol: f64,
    /// Random draws per (family, n) or per invariant search.
    #[arg(long, global = true, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the structure constants of a family member or a model algebra.
    Build {
        /// A, B, model1 or model2.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Odd dimension of model2 (defaults to n).
        #[arg(long)]
        m: Option<usize>,
        /// Parameters as inline JSON or a path to a JSON file.
        #[arg(long)]
        params: Option<String>,
    },
    /// Check grading and the graded Leibniz identity of an algebra file.
    Check {
        /// Algebra JSON file, or - for stdin.
        input: String,
    },
    /// Central series, annihilator, generators and characteristic sequence.
    Invariants { input: String },
    /// Decide whether two members of a family are isomorphic.
    Iso {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Source parameters as inline JSON or a path.
        #[arg(long, visible_alias = "left")]
        source: String,
        /// Target parameters as inline JSON or a path.
        #[arg(long, visible_alias = "right")]
        target: String,
        /// Also write the witness (if any) to this file.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Exponent in the family B relations: 2j-3 or 2j-1.
        #[arg(long, default_value = "2j-3", value_parser = parse_exponent)]
        exponent: BExponent,
    },
    /// Map parameters onto their canonical representative.
    Canon {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        params: String,
    },
    /// List the canonical descriptors of a family.
    Enumerate {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Run the end-to-end classification checks.
    VerifyClassification {
        /// Restrict to one family (default: both).
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
        /// A single n or an inclusive range such as 3..8 (default 3..8).
        #[arg(long, visible_alias = "n-range", value_parser = parse_range)]
        n: Option<(usize, usize)>,
        /// Tamper with every sampled algebra (negative control).
        #[arg(long, hide = true)]
        inject_bug: bool,
    },
}

fn parse_kind(s: &str) -> Result<ScalarKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_exponent(s: &str) -> Result<BExponent, String> {
    match s {
        "2j-3" => Ok(BExponent::TwoJMinusThree),
        "2j-1" => Ok(BExponent::TwoJMinusOne),
        _ => Err(format!("exponent must be 2j-3 or 2j-1, got '{s}'")),
    }
}

/// `a..b`, `a..=b` or `a-b`, all inclusive.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    if let Ok(n) = s.trim().parse::<usize>() {
        return Ok((n, n));
    }
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once('-'))
        .ok_or_else(|| format!("expected a range like 3..8, got '{s}'"))?;
    let lo: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start '{a}'"))?;
    let hi: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end '{b}'"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Output of a subcommand.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub code: u8,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            code: 0,
        }
    }

    /// The JSON document is the artifact; the text form is the same JSON.
    fn artifact(json: Value) -> Self {
        let text = serde_json::to_string_pretty(&json).expect("serializable");
        Report {
            json,
            text,
            code: 0,
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.json).expect("serializable")
        } else {
            self.text.clone()
        }
    }
}

/// Failure before any mathematics was done, or a library error.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: u8,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Verification(_) => 1,
            _ => 2,
        };
        let mut message = e.to_string();
        if matches!(e, Error::NeedsExtension(_)) {
            message += " (try --scalar complex)";
        }
        CliError { message, code }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        message: message.into(),
        code: 2,
    }
}

/// Inline JSON when the argument looks like JSON, otherwise a file path
/// (`-` reads stdin).
fn read_json(arg: &str) -> Result<Value, CliError> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_owned()
    } else if arg == "-" {
        std::io::read_to_string(std::io::stdin())
            .map_err(|e| usage(format!("cannot read stdin: {e}")))?
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("cannot read '{arg}': {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON in '{arg}': {e}")))
}

fn check_n(n: usize) -> Result<(), CliError> {
    if n < MIN_N {
        return Err(usage(format!(
            "n below minimum: n = {n}, need n >= {MIN_N}"
        )));
    }
    Ok(())
}

/// Run `$f::<F>(args…)` with `F` chosen from a [`ScalarKind`].
macro_rules! dispatch {
    ($kind:expr, $f:ident($($arg:expr),*)) => {
        match $kind {
            ScalarKind::Rational => $f::<Rational>($($arg),*),
            ScalarKind::Complex => $f::<Complex64>($($arg),*),
            ScalarKind::Cyclotomic(_) => $f::<Cyclotomic>($($arg),*),
        }
    };
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    let tol = Tol::new(g.tol).map_err(|e| usage(e.to_string()))?;
    match &cli.command {
        Command::Build {
            family,
            n,
            m,
            params,
        } => cmd_build(g.scalar, family, *n, *m, params.as_deref()),
        Command::Check { input } => cmd_check(input, tol),
        Command::Invariants { input } => cmd_invariants(input, g.samples, g.seed, tol),
        Command::Iso {
            family,
            n,
            source,
            target,
            exponent,
            witness,
        } => {
            check_n(*n)?;
            let (s, t) = (read_json(source)?, read_json(target)?);
            let report = dispatch!(
                g.scalar,
                cmd_iso(*family, *n, &s, &t, *exponent, g.scalar, tol)
            )?;
            if let (Some(path), Some(w)) = (witness, report.json.get("witness")) {
                let body = serde_json::to_string_pretty(w).expect("json serializes") + "\n";
                std::fs::write(path, body)
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(report)
        }
        Command::Canon { family, n, params } => {
            check_n(*n)?;
            let p = read_json(params)?;
            dispatch!(g.scalar, cmd_canon(*family, *n, &p, g.scalar, tol))
        }
        Command::Enumerate { family, n } => cmd_enumerate(*family, *n),
        Command::VerifyClassification {
            family,
            n,
            inject_bug,
        } => {
            let (lo, hi) = n.unwrap_or((MIN_N, 8));
            check_n(lo)?;
            let families = family.map_or(vec![Family::A, Family::B], |f| vec![f]);
            let cfg = pipeline::Config {
                families,
                ns: (lo..=hi).collect(),
                samples: g.samples,
                seed: g.seed,
                tol,
                inject_bug: *inject_bug,
            };
            Ok(pipeline::verify_classification(&cfg).into_report())
        }
    }
}

fn cmd_build(
    kind: ScalarKind,
    family: &str,
    n: usize,
    m: Option<usize>,
    params: Option<&str>,
) -> Result<Report, CliError> {
    fn typed<F: Scalar>(
        kind: ScalarKind,
        family: &str,
        n: usize,
        m: Option<usize>,
        params: Option<&Value>,
    ) -> Result<Value, CliError> {
        let a: SuperAlgebra<F> = match family {
            "model1" => build_model_1(n)?,
            "model2" => build_model_2(n, m.unwrap_or(n))?,
            f => {
                let fam: Family = f
                    .parse()
                    .map_err(|_| usage(format!("unknown family '{f}' (A, B, model1, model2)")))?;
                check_n(n)?;
                let p = match params {
                    Some(v) => FamilyParams::<F>::from_json(fam, n, v, kind)?,
                    None => FamilyParams::zero(fam, n)?,
                };
                p.build()
            }
        };
        Ok(algebra_to_json(&a))
    }
    let params = params.map(read_json).transpose()?;
    if params.is_some() && family.starts_with("model") {
        return Err(usage("model algebras take no parameters"));
    }
    let json = dispatch!(kind, typed(kind, family, n, m, params.as_ref()))?;
    Ok(Report::artifact(json))
}

fn load_algebra(input: &str) -> Result<AnyAlgebra, CliError> {
    Ok(algebra_from_json(&read_json(input)?)?)
}

fn cmd_check(input: &str, tol: Tol) -> Result<Report, CliError> {
    let any = load_algebra(input)?;
    Ok(with_algebra!(&any, a => {
        let grading = a.check_grading();
        let leibniz = a.check_graded_leibniz(tol);
        let pass = grading.pass && leibniz.pass;
        let mut text = String::new();
        for (name, r) in [("grading", &grading), ("graded Leibniz identity", &leibniz)] {
            let _ = writeln!(text, "{name}: {}", if r.pass { "pass" } else { "FAIL" });
            for v in r.violations.iter().take(20) {
                let labels: Vec<&str> = v.indices.iter().map(|&i| a.basis().label(i)).collect();
                let residual: Vec<String> = v.residual.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "  ({}) residual [{}]", labels.join(", "), residual.join(", "));
            }
            if r.violations.len() > 20 {
                let _ = writeln!(text, "  … {} more", r.violations.len() - 20);
            }
            if let Some(c) = r.satisfied_convention {
                let _ = writeln!(text, "  the identity holds under the {} sign convention", c.name());
            }
        }
        let json = json!({
            "dim": a.dim(),
            "grading": grading.to_json(a.basis()),
            "leibniz": leibniz.to_json(a.basis()),
            "pass": pass,
        });
        Report { json, text, code: if pass { 0 } else { 1 } }
    }))
}

fn cmd_invariants(input: &str, samples: usize, seed: u64, tol: Tol) -> Result<Report, CliError> {
    fn typed<F: Scalar>(a: &SuperAlgebra<F>, samples: usize, seed: u64, tol: Tol) -> Report {
        let series = central_series(a, default_cutoff(a), tol);
        let ann = right_annihilator(a, tol);
        let gens = generator_info(a, tol);
        let parities: Vec<&str> = gens
            .parities
            .iter()
            .map(|p| if p.bit() == 0 { "even" } else { "odd" })
            .collect();
        let mut json = json!({
            "dims": [a.basis().even_dim(), a.basis().odd_dim()],
            "central_series": series.dims,
            "nilindex": series.nilindex,
            "right_annihilator_dim": ann.dim(),
            "generators": { "count": gens.count, "parities": parities },
        });
        let mut text = format!(
            "dimension ({} | {})\ncentral series dims {:?}\nnilindex {}\nright annihilator dim {}\ngenerators {} {:?}\n",
            a.basis().even_dim(),
            a.basis().odd_dim(),
            series.dims,
            series.nilindex.map_or("none (not nilpotent within cutoff)".to_owned(), |s| s.to_string()),
            ann.dim(),
            gens.count,
            parities,
        );
        match characteristic_sequence(a, samples, seed) {
            Ok(cs) => {
                let (e, o) = cs.independent.profiles();
                let (se, so) = cs.same_element.profiles();
                json["characteristic_sequence"] = json!({
                    "even": e, "odd": o,
                    "same_element": { "even": se, "odd": so },
                    "readings_agree": cs.readings_agree(),
                    "candidates": cs.candidates,
                });
                let _ = writeln!(text, "characteristic sequence ({e:?} | {o:?})");
                if !cs.readings_agree() {
                    let _ = writeln!(text, "  single-element reading gives ({se:?} | {so:?})");
                }
            }
            Err(e) => {
                json["characteristic_sequence"] = json!({ "skipped": e.to_string() });
                let _ = writeln!(text, "characteristic sequence skipped: {e}");
            }
        }
        match right_mult_superalgebra_closure(a) {
            Ok(r) => {
                json["right_multiplication_closure"] = json!(r.pass);
                let _ = writeln!(text, "right multiplications close: {}", r.pass);
            }
            Err(e) => {
                json["right_multiplication_closure"] = json!({ "skipped": e.to_string() });
            }
        }
        Report::ok(json, text)
    }
    let any = load_algebra(input)?;
    Ok(with_algebra!(&any, a => typed(a, samples, seed, tol)))
}

fn cmd_iso<F: Scalar>(
    family: Family,
    n: usize,
    source: &Value,
    target: &Value,
    exponent: BExponent,
    kind: ScalarKind,
    tol: Tol,
) -> Result<Report, CliError> {
    let s = FamilyParams::<F>::from_json(family, n, source, kind)?;
    let t = FamilyParams::<F>::from_json(family, n, target, kind)?;
    let decision = iso_solvable(
        &IsoConditionSystem::new(s.clone(), t.clone())?.with_exponent(exponent),
        tol,
    );
    let mut json = json!({
        "family": family.to_string(),
        "n": n,
        "exponent": exponent.name(),
        "isomorphic": decision.isomorphic,
        "note": decision.note,
    });
    let mut text = format!(
        "isomorphic: {}\n",
        if decision.isomorphic { "yes" } else { "no" }
    );
    if let Some(note) = &decision.note {
        let _ = writeln!(text, "  {note}");
    }
    let mut code = if decision.isomorphic { 0 } else { 1 };
    if let Some(w) = &decision.witness {
        let (sa, ta) = (s.build(), t.build());
        let verified = match materialize_basis_change(&sa, w, tol) {
            Ok((map, image)) => {
                same_algebra(&image, &ta, tol)
                    && verify_isomorphism(&ta, &sa, &map, tol).is_ok_and(|r| r.pass)
            }
            Err(_) => false,
        };
        json["witness"] = w.to_json();
        json["verified"] = json!(verified);
        let _ = writeln!(text, "witness {}\nverified: {verified}", w.to_json());
        if !verified {
            code = 1;
        }
    }
    Ok(Report { json, text, code })
}

fn cmd_canon<F: Scalar>(
    family: Family,
    n: usize,
    params: &Value,
    kind: ScalarKind,
    tol: Tol,
) -> Result<Report, CliError> {
    let p = FamilyParams::<F>::from_json(family, n, params, kind)?;
    let c = canonicalize(&p, tol)?;
    let mut json = c.to_json();
    json["input"] = p.to_json();
    Ok(Report::artifact(json))
}

fn cmd_enumerate(family: Family, n: usize) -> Result<Report, CliError> {
    check_n(n)?;
    let groups = enumerate_descriptors(family, n)?;
    let json = json!({
        "family": family.to_string(),
        "n": n,
        "conductor": required_conductor(family, n)?,
        "groups": groups.iter().map(|g| json!({
            "index": g.index,
            "case": g.case.label(),
            "descriptors": g.descriptors.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    Ok(Report::artifact(json))
}
