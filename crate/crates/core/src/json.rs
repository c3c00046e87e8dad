//! The algebra interchange format.
//!
//! ```json
//! {"even_dim": 1, "odd_dim": 1, "basis": ["x1", "y1"], "parity": [0, 1],
//!  "scalar": "rational",
//!  "brackets": [{"l": 1, "r": 1, "out": [{"k": 0, "v": "1"}]}]}
//! ```
//!
//! Omitted `(l, r)` pairs are zero products; indices are 0-based. Output is
//! deterministic: brackets are sorted by `(l, r)` and entries by `k`.

use serde_json::{json, Map, Value};

use crate::algebra::{GradedBasis, Parity, SuperAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{Complex64, Cyclotomic, Rational, Scalar, ScalarKind, Tol};

/// An algebra whose scalar backend is only known at run time.
#[derive(Debug, Clone)]
pub enum AnyAlgebra {
    Rational(SuperAlgebra<Rational>),
    Complex(SuperAlgebra<Complex64>),
    Cyclotomic(SuperAlgebra<Cyclotomic>),
}

/// Run `$body` with `$a` bound to the typed algebra inside an [`AnyAlgebra`].
#[macro_export]
macro_rules! with_algebra {
    ($any:expr, $a:ident => $body:expr) => {
        match $any {
            $crate::json::AnyAlgebra::Rational($a) => $body,
            $crate::json::AnyAlgebra::Complex($a) => $body,
            $crate::json::AnyAlgebra::Cyclotomic($a) => $body,
        }
    };
}

impl AnyAlgebra {
    pub fn kind(&self) -> ScalarKind {
        with_algebra!(self, a => a.scalar_kind())
    }

    pub fn to_json(&self) -> Value {
        with_algebra!(self, a => algebra_to_json(a))
    }
}

pub fn algebra_to_json<F: Scalar>(a: &SuperAlgebra<F>) -> Value {
    let d = a.dim();
    let mut brackets = Vec::new();
    for l in 0..d {
        for r in 0..d {
            let prod = a.product(l, r);
            if prod.is_empty() {
                continue;
            }
            let out: Vec<Value> = prod
                .iter()
                .map(|(k, v)| json!({ "k": k, "v": v.to_json() }))
                .collect();
            brackets.push(json!({ "l": l, "r": r, "out": out }));
        }
    }
    let basis = a.basis();
    json!({
        "even_dim": basis.even_dim(),
        "odd_dim": basis.odd_dim(),
        "basis": basis.labels(),
        "parity": basis.parities().iter().map(|p| p.bit()).collect::<Vec<_>>(),
        "scalar": a.scalar_kind().to_string(),
        "brackets": brackets,
    })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field '{key}'")))
}

fn as_index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| {
        Error::Parse(format!(
            "'{what}' must be a non-negative integer, found {v}"
        ))
    })
}

fn parse_basis(obj: &Map<String, Value>) -> Result<GradedBasis> {
    let n = as_index(field(obj, "even_dim")?, "even_dim")?;
    let m = as_index(field(obj, "odd_dim")?, "odd_dim")?;
    let parity: Vec<Parity> = field(obj, "parity")?
        .as_array()
        .ok_or_else(|| Error::Parse("'parity' must be an array".into()))?
        .iter()
        .map(|p| {
            p.as_u64()
                .and_then(|b| u8::try_from(b).ok())
                .and_then(Parity::from_bit)
                .ok_or_else(|| Error::Parse(format!("parity entries must be 0 or 1, found {p}")))
        })
        .collect::<Result<_>>()?;
    let labels: Vec<String> = match obj.get("basis") {
        None => GradedBasis::chain(parity.clone()).labels().to_vec(),
        Some(Value::Array(ls)) => ls
            .iter()
            .map(|l| {
                l.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| Error::Parse("basis labels must be strings".into()))
            })
            .collect::<Result<_>>()?,
        Some(other) => {
            return Err(Error::Parse(format!(
                "'basis' must be an array, found {other}"
            )))
        }
    };
    let basis = GradedBasis::new(labels, parity)?;
    if basis.dim() != n + m || basis.even_dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "header says {n} even + {m} odd, parity vector has {} even + {} odd",
            basis.even_dim(),
            basis.odd_dim()
        )));
    }
    Ok(basis)
}

fn parse_typed<F: Scalar>(
    obj: &Map<String, Value>,
    basis: GradedBasis,
    kind: ScalarKind,
) -> Result<SuperAlgebra<F>> {
    let d = basis.dim();
    let mut entries = Vec::new();
    let brackets = match obj.get("brackets") {
        None => &[][..],
        Some(Value::Array(b)) => &b[..],
        Some(other) => {
            return Err(Error::Parse(format!(
                "'brackets' must be an array, found {other}"
            )))
        }
    };
    for b in brackets {
        let b = b
            .as_object()
            .ok_or_else(|| Error::Parse("bracket entries must be objects".into()))?;
        let l = as_index(field(b, "l")?, "l")?;
        let r = as_index(field(b, "r")?, "r")?;
        let out = field(b, "out")?
            .as_array()
            .ok_or_else(|| Error::Parse("'out' must be an array".into()))?;
        for o in out {
            let o = o
                .as_object()
                .ok_or_else(|| Error::Parse("'out' entries must be objects".into()))?;
            let k = as_index(field(o, "k")?, "k")?;
            let v = F::from_json(field(o, "v")?, kind)?;
            if l >= d || r >= d || k >= d {
                return Err(Error::DimensionMismatch(format!(
                    "bracket index ({l},{r},{k}) outside dimension {d}"
                )));
            }
            entries.push((l, r, k, v));
        }
    }
    SuperAlgebra::from_entries(basis, entries)
}

pub fn algebra_from_json(v: &Value) -> Result<AnyAlgebra> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("algebra must be a JSON object".into()))?;
    let basis = parse_basis(obj)?;
    let kind: ScalarKind = match obj.get("scalar") {
        None => ScalarKind::Rational,
        Some(s) => s
            .as_str()
            .ok_or_else(|| Error::Parse("'scalar' must be a string".into()))?
            .parse()?,
    };
    Ok(match kind {
        ScalarKind::Rational => AnyAlgebra::Rational(parse_typed(obj, basis, kind)?),
        ScalarKind::Complex => AnyAlgebra::Complex(parse_typed(obj, basis, kind)?),
        ScalarKind::Cyclotomic(_) => AnyAlgebra::Cyclotomic(parse_typed(obj, basis, kind)?),
    })
}

pub fn algebra_from_str(s: &str) -> Result<AnyAlgebra> {
    algebra_from_json(&serde_json::from_str(s)?)
}

/// Structural equality of two typed algebras (same basis, same tensor).
pub fn same_algebra<F: Scalar>(a: &SuperAlgebra<F>, b: &SuperAlgebra<F>, tol: Tol) -> bool {
    a.basis() == b.basis()
        && a.tensor()
            .iter()
            .zip(b.tensor())
            .all(|(x, y)| x.approx_eq(y, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn sample() -> SuperAlgebra<Rational> {
        let q = |s: &str| parse_rational(s).unwrap();
        SuperAlgebra::from_entries(
            GradedBasis::standard(2, 2),
            [(2, 2, 0, q("1")), (3, 2, 1, q("-3/7")), (0, 2, 3, q("1/2"))],
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let a = sample();
        let j = algebra_to_json(&a);
        let AnyAlgebra::Rational(b) = algebra_from_json(&j).unwrap() else {
            panic!("wrong backend")
        };
        assert!(same_algebra(&a, &b, Tol::default()));
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            serde_json::to_string(&algebra_to_json(&b)).unwrap()
        );
    }

    #[test]
    fn rational_values_are_strings() {
        let j = algebra_to_json(&sample());
        let first = &j["brackets"][0];
        assert_eq!(first["l"], 0);
        assert_eq!(first["out"][0]["v"], "1/2");
    }

    #[test]
    fn complex_and_cyclotomic_headers() {
        let txt = r#"{"even_dim":1,"odd_dim":1,"basis":["x1","y1"],"parity":[0,1],"scalar":"complex",
            "brackets":[{"l":1,"r":1,"out":[{"k":0,"v":{"re":1.0,"im":-2.0}}]}]}"#;
        let a = algebra_from_str(txt).unwrap();
        assert_eq!(a.kind(), ScalarKind::Complex);
        let txt = r#"{"even_dim":1,"odd_dim":1,"basis":["x1","y1"],"parity":[0,1],"scalar":"cyclotomic:4",
            "brackets":[{"l":1,"r":1,"out":[{"k":0,"v":["0","1"]}]}]}"#;
        let a = algebra_from_str(txt).unwrap();
        assert_eq!(a.kind(), ScalarKind::Cyclotomic(4));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(algebra_from_str("{").is_err());
        assert!(algebra_from_str(r#"{"even_dim":1,"odd_dim":1,"parity":[0,0]}"#).is_err());
        assert!(algebra_from_str(r#"{"even_dim":1,"odd_dim":0,"parity":[0],"brackets":[{"l":0,"r":0,"out":[{"k":3,"v":"1"}]}]}"#).is_err());
        assert!(
            algebra_from_str(r#"{"even_dim":1,"odd_dim":0,"parity":[0],"scalar":"real"}"#).is_err()
        );
    }
}
