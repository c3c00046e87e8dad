use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use super::{Scalar, ScalarKind, Tol};
use crate::error::Error;
use crate::linalg::{bareiss_rank, Matrix};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Parse `"p"`, `"p/q"` or a decimal literal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if Zero::is_zero(&q) {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

fn exact_root(v: &BigInt, k: u32) -> Option<BigInt> {
    if v.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let r = v.nth_root(k);
    (r.pow(k) == *v).then_some(r)
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn is_exact() -> bool {
        true
    }

    fn is_zero(&self, _tol: Tol) -> bool {
        Zero::is_zero(self)
    }

    fn approx_eq(&self, other: &Self, _tol: Tol) -> bool {
        self == other
    }

    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        match k {
            0 => None,
            1 => Some(self.clone()),
            _ => {
                let p = exact_root(self.numer(), k)?;
                let q = exact_root(self.denom(), k)?;
                Some(Rational::new(p, q))
            }
        }
    }

    fn root_of_unity(m: u64, t: u64) -> Option<Self> {
        if t == 0 {
            return None;
        }
        let m = m % t;
        if m == 0 {
            Some(One::one())
        } else if 2 * m == t {
            Some(-<Rational as One>::one())
        } else {
            None
        }
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn kind(&self) -> ScalarKind {
        ScalarKind::Rational
    }

    fn base_kind() -> ScalarKind {
        ScalarKind::Rational
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(value: &Value, kind: ScalarKind) -> Result<Self, Error> {
        if kind != ScalarKind::Rational {
            return Err(Error::BackendMismatch(format!(
                "expected rational scalars, header says {kind}"
            )));
        }
        match value {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => {
                Ok(Rational::from_integer(n.as_i64().unwrap().into()))
            }
            other => Err(Error::Parse(format!(
                "expected a rational string, found {other}"
            ))),
        }
    }

    fn rank_of(m: &Matrix<Self>, _tol: Tol) -> usize {
        bareiss_rank(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(q("3"), Rational::from_integer(3.into()));
        assert_eq!(q("-6/4"), Rational::new((-3).into(), 2.into()));
        assert_eq!(q("0.25"), Rational::new(1.into(), 4.into()));
        assert_eq!(q("-1.5"), Rational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn exact_roots_only_for_perfect_powers() {
        assert_eq!(q("9/4").nth_root(2), Some(q("3/2")));
        assert_eq!(q("-8/27").nth_root(3), Some(q("-2/3")));
        assert_eq!(q("2").nth_root(2), None);
        assert_eq!(q("-4").nth_root(2), None);
    }

    #[test]
    fn rational_roots_of_unity() {
        assert_eq!(Rational::root_of_unity(0, 5), Some(q("1")));
        assert_eq!(Rational::root_of_unity(3, 6), Some(q("-1")));
        assert_eq!(Rational::root_of_unity(1, 3), None);
    }

    #[test]
    fn json_is_string_exact() {
        let v = q("-7/3");
        let j = v.to_json();
        assert_eq!(j, Value::String("-7/3".into()));
        assert_eq!(Rational::from_json(&j, ScalarKind::Rational).unwrap(), v);
        assert!(Rational::from_json(&j, ScalarKind::Complex).is_err());
    }
}
