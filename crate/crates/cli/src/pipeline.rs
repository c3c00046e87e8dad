//! The `verify-classification` pipeline.
//!
//! For every `(family, n)` it draws seeded random rational parameters and
//! runs, in order: identity checks, invariant checks, the one-generated
//! subalgebra check, canonicalization round trips and the pairwise
//! distinctness check on a small grid. Reports are ordered by family and
//! `n`, so a fixed seed gives byte-identical JSON.

use std::fmt::Write as _;

use log::{debug, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use leibniz_super::classification::{
    canonicalize, descriptors, enumerate_descriptors, pairwise_distinct,
};
use leibniz_super::families::{Family, FamilyParams};
use leibniz_super::invariants::{characteristic_sequence, generator_info, nilindex};
use leibniz_super::isomorphism::{apply, BExponent, IsoWitness};
use leibniz_super::json::algebra_to_json;
use leibniz_super::{Complex64, Parity, Rational, Scalar, SuperAlgebra, Tol};

use crate::Report;

#[derive(Debug, Clone)]
pub struct Config {
    pub families: Vec<Family>,
    pub ns: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Tol,
    /// Tamper with every sampled algebra before checking it.
    pub inject_bug: bool,
}

/// Random combinations tried per characteristic-sequence search.
const CHAR_SEQ_SAMPLES: usize = 4;
/// Failures recorded per stage before the rest are only counted.
const MAX_FAILURES: usize = 5;

#[derive(Debug, Clone)]
pub struct Stage {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<Value>,
    pub detail: Value,
}

impl Stage {
    fn new(name: &'static str) -> Self {
        Stage {
            name,
            checked: 0,
            failed: 0,
            failures: Vec::new(),
            detail: Value::Null,
        }
    }

    fn record(&mut self, ok: bool, certificate: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(certificate());
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.failed == 0
    }

    fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "failed": self.failed,
            "pass": self.pass(),
            "failures": self.failures,
            "detail": self.detail,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Run {
    pub family: Family,
    pub n: usize,
    pub stages: Vec<Stage>,
}

impl Run {
    pub fn pass(&self) -> bool {
        self.stages.iter().all(Stage::pass)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub config: Config,
    pub runs: Vec<Run>,
}

impl PipelineReport {
    pub fn pass(&self) -> bool {
        self.runs.iter().all(Run::pass)
    }

    pub fn to_json(&self) -> Value {
        let runs: Vec<Value> = self
            .runs
            .iter()
            .map(|r| {
                let stages: serde_json::Map<String, Value> = r
                    .stages
                    .iter()
                    .map(|s| (s.name.to_owned(), s.to_json()))
                    .collect();
                json!({
                    "family": r.family.to_string(),
                    "n": r.n,
                    "m": r.family.odd_dim(r.n),
                    "pass": r.pass(),
                    "stages": stages,
                })
            })
            .collect();
        json!({
            "seed": self.config.seed,
            "samples": self.config.samples,
            "tol": self.config.tol.0,
            "exponent": BExponent::default().name(),
            "runs": runs,
            "pass": self.pass(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut t = String::new();
        let _ = writeln!(
            t,
            "{:<4} {:>2} {:>2}  {:<9} {:<9} {:<9} {:<9} {:<9} {:<9} {:<6}",
            "fam",
            "n",
            "m",
            "identity",
            "invariant",
            "subalg",
            "canon",
            "pairwise",
            "groups",
            "result"
        );
        for r in &self.runs {
            let cell = |name: &str| match r.stage(name) {
                Some(s) if s.pass() => format!("{}/{}", s.checked, s.checked),
                Some(s) => format!("{}/{} !", s.checked - s.failed, s.checked),
                None => "-".into(),
            };
            let groups = r
                .stage("groups")
                .map_or("-".to_owned(), |s| s.detail["groups"].to_string());
            let _ = writeln!(
                t,
                "{:<4} {:>2} {:>2}  {:<9} {:<9} {:<9} {:<9} {:<9} {:<9} {:<6}",
                r.family.to_string(),
                r.n,
                r.family.odd_dim(r.n),
                cell("identities"),
                cell("invariants"),
                cell("subalgebra"),
                cell("canonical"),
                cell("pairwise"),
                groups,
                if r.pass() { "PASS" } else { "FAIL" }
            );
        }
        for r in self.runs.iter().filter(|r| !r.pass()) {
            for s in r.stages.iter().filter(|s| !s.pass()) {
                let first = s
                    .failures
                    .first()
                    .map(|f| f.to_string())
                    .unwrap_or_default();
                let _ = writeln!(
                    t,
                    "{}{} {}: {} failure(s); first: {first}",
                    r.family, r.n, s.name, s.failed
                );
            }
        }
        let _ = writeln!(
            t,
            "{}",
            if self.pass() {
                "all checks passed"
            } else {
                "violations found"
            }
        );
        t
    }

    pub fn into_report(self) -> Report {
        Report {
            json: self.to_json(),
            text: self.to_text(),
            code: if self.pass() { 0 } else { 1 },
        }
    }
}

/// Seed of the generator used for one `(family, n)`.
fn run_seed(seed: u64, family: Family, n: usize) -> u64 {
    let f = match family {
        Family::A => 1,
        Family::B => 2,
    };
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((n as u64) << 8 | f)
}

/// Add `[x₁, x₁] = x₂`, which no family member has.
/// Adds `y1` to `[x1, y1]`: parity is respected but the identity breaks.
fn tamper(a: &SuperAlgebra<Rational>) -> SuperAlgebra<Rational> {
    let y1 = a.basis().even_dim();
    let old = a.structure_constant(0, y1, y1).clone();
    a.with_entry(0, y1, y1, old + Rational::from_integer(1.into()))
        .expect("indices are in range")
}

fn expected_groups(family: Family, n: usize) -> usize {
    match family {
        Family::A if n % 2 == 1 => 5,
        Family::A => 3,
        Family::B => 2,
    }
}

fn to_complex(p: &FamilyParams<Rational>) -> FamilyParams<Complex64> {
    p.map_scalars(Rational::to_complex)
}

fn close(a: &[Complex64], b: &[Complex64], eps: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).norm() <= eps * (1.0 + x.norm().max(y.norm())))
}

fn sample_params(
    family: Family,
    n: usize,
    rng: &mut ChaCha8Rng,
    i: usize,
) -> FamilyParams<Rational> {
    let zero_prob = [0.0, 0.3, 0.6][i % 3];
    FamilyParams::random(family, n, rng, zero_prob).expect("n is in range")
}

pub fn run_one(family: Family, n: usize, cfg: &Config) -> Run {
    let m = family.odd_dim(n);
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed(cfg.seed, family, n));
    let params: Vec<FamilyParams<Rational>> = (0..cfg.samples)
        .map(|i| sample_params(family, n, &mut rng, i))
        .collect();
    let algebras: Vec<SuperAlgebra<Rational>> = params
        .iter()
        .map(|p| {
            if cfg.inject_bug {
                tamper(&p.build())
            } else {
                p.build()
            }
        })
        .collect();
    let exact = Tol::default();

    let mut identities = Stage::new("identities");
    for (p, a) in params.iter().zip(&algebras) {
        let g = a.check_grading();
        let l = a.check_graded_leibniz(exact);
        identities.record(g.pass && l.pass, || {
            json!({
                "params": p.to_json(),
                "grading": g.to_json(a.basis()),
                "leibniz": l.to_json(a.basis()),
                "algebra": algebra_to_json(a),
            })
        });
    }
    debug!(
        "{family}{n}: identities {}/{}",
        identities.checked - identities.failed,
        identities.checked
    );

    let mut invariants = Stage::new("invariants");
    for (i, (p, a)) in params.iter().zip(&algebras).enumerate() {
        let nil = nilindex(a, exact).ok();
        let cs = characteristic_sequence(a, CHAR_SEQ_SAMPLES, cfg.seed.wrapping_add(i as u64));
        let (even, odd, agree) = match &cs {
            Ok(r) => (
                r.independent.even_profile.clone(),
                r.independent.odd_profile.clone(),
                r.readings_agree(),
            ),
            Err(_) => (Vec::new(), Vec::new(), false),
        };
        let gens = generator_info(a, exact);
        let ok = nil == Some(n + m)
            && even == vec![n]
            && odd == vec![m - 1, 1]
            && agree
            && gens.count == 2
            && gens.parities == vec![Parity::Odd, Parity::Odd];
        invariants.record(ok, || {
            json!({
                "params": p.to_json(),
                "nilindex": nil,
                "expected_nilindex": n + m,
                "characteristic_sequence": { "even": even, "odd": odd, "readings_agree": agree },
                "generators": gens.count,
            })
        });
    }

    let mut subalgebra = Stage::new("subalgebra");
    for (p, a) in params.iter().zip(&algebras) {
        let y1 = a.unit(n);
        let result = a.subalgebra_generated(&[y1], exact).and_then(|s| {
            let r = a.restrict(&s, exact)?;
            Ok((
                s.dim(),
                generator_info(&r, exact).count,
                nilindex(&r, exact).ok(),
            ))
        });
        let ok = matches!(result, Ok((d, 1, Some(s))) if d == n + m - 1 && s == d + 1);
        subalgebra.record(
            ok,
            || json!({ "params": p.to_json(), "result": format!("{result:?}") }),
        );
    }

    let list = descriptors(family, n).expect("n is in range");
    let mut canonical = Stage::new("canonical");
    for p in &params {
        let pc = to_complex(p);
        let outcome = (|| -> Result<(), String> {
            let c = canonicalize(&pc, cfg.tol).map_err(|e| e.to_string())?;
            let v = c.representative.to_vector();
            let hits = list.iter().filter(|d| d.matches(&v, Tol(1e-7))).count();
            if hits != 1 {
                return Err(format!("representative matches {hits} descriptors"));
            }
            let again = canonicalize(&c.representative, cfg.tol).map_err(|e| e.to_string())?;
            if again.descriptor != c.descriptor
                || !close(&v, &again.representative.to_vector(), 1e-9)
            {
                return Err("canonicalization is not idempotent".into());
            }
            let w = IsoWitness::<Rational>::random_balanced(family, n, &mut rng);
            let wc = IsoWitness {
                family,
                n,
                a1: w.a1.to_complex(),
                a_top: w.a_top.to_complex(),
                b: w.b.to_complex(),
                b_sub: w.b_sub.to_complex(),
                images: None,
            };
            let moved = apply(&wc, &pc, BExponent::default()).map_err(|e| e.to_string())?;
            let other = canonicalize(&moved, cfg.tol).map_err(|e| e.to_string())?;
            if other.descriptor != c.descriptor
                || !close(&v, &other.representative.to_vector(), 1e-9)
            {
                return Err(format!(
                    "orbit gives {} instead of {}",
                    other.descriptor.name(),
                    c.descriptor.name()
                ));
            }
            Ok(())
        })();
        canonical.record(
            outcome.is_ok(),
            || json!({ "params": p.to_json(), "error": outcome.unwrap_err() }),
        );
    }

    let mut pairwise = Stage::new("pairwise");
    let grid = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    match pairwise_distinct(family, n, &grid, cfg.tol) {
        Ok(r) => {
            pairwise.checked = r.pairs;
            pairwise.failed = r.violations.len();
            pairwise.failures = r
                .violations
                .iter()
                .take(MAX_FAILURES)
                .map(|v| json!(v))
                .collect();
            pairwise.detail = r.to_json();
            pairwise
                .detail
                .as_object_mut()
                .expect("object")
                .remove("violations");
        }
        Err(e) => pairwise.record(false, || json!(e.to_string())),
    }

    let mut groups = Stage::new("groups");
    let count = enumerate_descriptors(family, n)
        .map(|g| g.len())
        .unwrap_or(0);
    groups.record(
        count == expected_groups(family, n),
        || json!({ "groups": count }),
    );
    groups.detail = json!({ "groups": count, "descriptors": list.len() });

    info!("{family}{n}: done");
    Run {
        family,
        n,
        stages: vec![
            identities, invariants, subalgebra, canonical, pairwise, groups,
        ],
    }
}

pub fn verify_classification(cfg: &Config) -> PipelineReport {
    let mut runs = Vec::new();
    for &family in &cfg.families {
        for &n in &cfg.ns {
            info!("checking family {family}, n = {n}");
            runs.push(run_one(family, n, cfg));
        }
    }
    PipelineReport {
        config: cfg.clone(),
        runs,
    }
}
