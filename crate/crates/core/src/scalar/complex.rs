use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{parse_rational, Rational, Scalar, ScalarKind, Tol};
use crate::error::Error;
use num_traits::ToPrimitive;

/// Principal argument in `(-π, π]`, mapping the negative real axis to `+π`
/// regardless of the sign of a zero imaginary part.
pub(crate) fn principal_arg(z: Complex64) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.arg()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn is_exact() -> bool {
        false
    }

    fn is_zero(&self, tol: Tol) -> bool {
        self.norm() <= tol.0
    }

    fn approx_eq(&self, other: &Self, tol: Tol) -> bool {
        let scale = 1f64.max(self.norm()).max(other.norm());
        (self - other).norm() <= tol.0 * scale
    }

    fn inv(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| self.inv())
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        if self.norm() == 0.0 {
            return Some(Self::zero());
        }
        let r = self.norm().powf(1.0 / k as f64);
        Some(Complex64::from_polar(r, principal_arg(*self) / k as f64))
    }

    fn root_of_unity(m: u64, t: u64) -> Option<Self> {
        if t == 0 {
            return None;
        }
        let m = m % t;
        // quarter turns are exact
        match (4 * m).is_multiple_of(t) {
            true => Some(match 4 * m / t {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            }),
            false => Some(Complex64::from_polar(1.0, 2.0 * PI * m as f64 / t as f64)),
        }
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn kind(&self) -> ScalarKind {
        ScalarKind::Complex
    }

    fn base_kind() -> ScalarKind {
        ScalarKind::Complex
    }

    fn to_json(&self) -> Value {
        json!({ "re": self.re, "im": self.im })
    }

    fn from_json(value: &Value, kind: ScalarKind) -> Result<Self, Error> {
        if kind != ScalarKind::Complex {
            return Err(Error::BackendMismatch(format!(
                "expected complex scalars, header says {kind}"
            )));
        }
        match value {
            Value::Object(map) => {
                let part = |key: &str| -> Result<f64, Error> {
                    match map.get(key) {
                        None => Ok(0.0),
                        Some(v) => v.as_f64().ok_or_else(|| {
                            Error::Parse(format!("complex component '{key}' is not a number"))
                        }),
                    }
                };
                if map.keys().any(|k| k != "re" && k != "im") {
                    return Err(Error::Parse(format!(
                        "unexpected keys in complex scalar {value}"
                    )));
                }
                Ok(Complex64::new(part("re")?, part("im")?))
            }
            Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
            Value::String(s) => match s.trim() {
                "i" => Ok(Complex64::new(0.0, 1.0)),
                "-i" => Ok(Complex64::new(0.0, -1.0)),
                s => Ok(Self::from_rational(&parse_rational(s)?)),
            },
            other => Err(Error::Parse(format!(
                "expected a complex scalar, found {other}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_comes_from_the_caller() {
        let a = Complex64::new(1.0, 0.0);
        let b = Complex64::new(1.0 + 1e-11, 0.0);
        assert!(a.approx_eq(&b, Tol(1e-9)));
        assert!(!a.approx_eq(&b, Tol(1e-13)));
    }

    #[test]
    fn principal_roots() {
        let r = Complex64::new(-1.0, 0.0).nth_root(2).unwrap();
        assert!(r.approx_eq(&Complex64::new(0.0, 1.0), Tol(1e-12)));
        let r = Complex64::new(-1.0, -0.0).nth_root(2).unwrap();
        assert!(r.approx_eq(&Complex64::new(0.0, 1.0), Tol(1e-12)));
        let r = Complex64::new(8.0, 0.0).nth_root(3).unwrap();
        assert!(r.approx_eq(&Complex64::new(2.0, 0.0), Tol(1e-12)));
    }

    #[test]
    fn roots_of_unity_have_the_right_order() {
        for t in 1..12u64 {
            for m in 0..t {
                let s = Complex64::root_of_unity(m, t).unwrap();
                assert!(Scalar::powi(&s, t as i64)
                    .unwrap()
                    .approx_eq(&Complex64::one(), Tol(1e-12)));
            }
        }
        let s = Complex64::root_of_unity(1, 5).unwrap();
        let angle = 2.0 * PI / 5.0;
        assert!(s.approx_eq(&Complex64::new(angle.cos(), angle.sin()), Tol(1e-15)));
    }

    #[test]
    fn json_accepts_objects_and_strings() {
        let k = ScalarKind::Complex;
        let z = Complex64::from_json(&json!({"re": 1.5, "im": -2.0}), k).unwrap();
        assert_eq!(z, Complex64::new(1.5, -2.0));
        assert_eq!(
            Complex64::from_json(&json!("1/2"), k).unwrap(),
            Complex64::new(0.5, 0.0)
        );
        assert_eq!(
            Complex64::from_json(&json!("i"), k).unwrap(),
            Complex64::new(0.0, 1.0)
        );
        assert!(Complex64::from_json(&json!({"re": 1, "x": 2}), k).is_err());
        let back = Complex64::from_json(&z.to_json(), k).unwrap();
        assert_eq!(back, z);
    }
}
