//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Elements are stored on the power basis `1, ζ, …, ζ^{φ(N)-1}` reduced
//! modulo the `N`-th cyclotomic polynomial, so the representation is
//! canonical and equality is coefficient-wise. Conductor 1 is the rational
//! field and embeds into every other conductor; two elements with nested
//! conductors `d | N` are combined in `Q(ζ_N)`. Non-nested conductors are a
//! programming error and panic.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::{parse_rational, Rational, Scalar, ScalarKind, Tol};
use crate::error::Error;
use crate::linalg::{solve, Matrix};

/// Element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

fn normalize_conductor(n: u32) -> u32 {
    if n <= 2 {
        1
    } else {
        n
    }
}

/// Integer coefficients (low degree first) of the `n`-th cyclotomic
/// polynomial.
pub(crate) fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_divide(&num, &cyclotomic_polynomial(d));
        }
    }
    let p = Arc::new(num);
    cache.write().unwrap().insert(n, p.clone());
    p
}

fn exact_divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![BigInt::zero(); qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd].clone();
        if Zero::is_zero(&c) {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn totient_degree(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// Reduce a polynomial in `ζ` modulo `Φ_n`.
fn reduce(mut poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for top in (deg..poly.len()).rev() {
        let c = std::mem::replace(&mut poly[top], <Rational as Zero>::zero());
        if Zero::is_zero(&c) {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            poly[top - deg + j] -= &c * Rational::from_integer(pj.clone());
        }
    }
    poly.resize(deg, <Rational as Zero>::zero());
    poly
}

impl Cyclotomic {
    pub fn new(conductor: u32, coeffs: Vec<Rational>) -> Result<Self, Error> {
        if conductor == 0 {
            return Err(Error::InvalidInput(
                "cyclotomic conductor must be positive".into(),
            ));
        }
        let n = normalize_conductor(conductor);
        let deg = totient_degree(n);
        if n != conductor {
            // conductor 2: the single coefficient is already rational
            if coeffs.len() != 1 {
                return Err(Error::InvalidInput(format!(
                    "conductor {conductor} expects 1 coefficient, got {}",
                    coeffs.len()
                )));
            }
        } else if coeffs.len() != deg {
            return Err(Error::InvalidInput(format!(
                "conductor {conductor} expects {deg} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Cyclotomic {
            conductor: n,
            coeffs,
        })
    }

    pub fn rational(q: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// `ζ_n^k`.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        assert!(n > 0, "conductor must be positive");
        let k = k.rem_euclid(n as i64) as usize;
        if n <= 2 {
            let v = if n == 2 && k == 1 {
                -<Rational as One>::one()
            } else {
                <Rational as One>::one()
            };
            return Cyclotomic::rational(v);
        }
        let mut poly = vec![<Rational as Zero>::zero(); k + 1];
        poly[k] = <Rational as One>::one();
        Cyclotomic {
            conductor: n,
            coeffs: reduce(poly, n),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Re-express in `Q(ζ_target)`; requires `conductor | target`.
    pub fn lift(&self, target: u32) -> Result<Self, Error> {
        let target = normalize_conductor(target);
        if !target.is_multiple_of(self.conductor) {
            return Err(Error::BackendMismatch(format!(
                "cannot embed Q(ζ_{}) into Q(ζ_{})",
                self.conductor, target
            )));
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![<Rational as Zero>::zero(); step * (self.coeffs.len() - 1) + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Ok(Cyclotomic {
            conductor: target,
            coeffs: reduce(poly, target),
        })
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let n = if b.conductor.is_multiple_of(a.conductor) {
            b.conductor
        } else if a.conductor.is_multiple_of(b.conductor) {
            a.conductor
        } else {
            panic!(
                "mixed cyclotomic conductors {} and {} are not nested",
                a.conductor, b.conductor
            );
        };
        (a.lift(n).unwrap(), b.lift(n).unwrap())
    }

    fn multiplication_matrix(&self) -> Matrix<Rational> {
        let deg = self.coeffs.len();
        let mut m = Matrix::zeros(deg, deg);
        for k in 0..deg {
            let mut poly = vec![<Rational as Zero>::zero(); k + deg];
            for (i, c) in self.coeffs.iter().enumerate() {
                poly[i + k] = c.clone();
            }
            for (row, v) in reduce(poly, self.conductor).into_iter().enumerate() {
                m[(row, k)] = v;
            }
        }
        m
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyclotomic::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = Cyclotomic::common(&self, &rhs);
        let coeffs = a
            .coeffs
            .into_iter()
            .zip(b.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        Cyclotomic {
            conductor: a.conductor,
            coeffs,
        }
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = Cyclotomic::common(&self, &rhs);
        let mut poly = vec![<Rational as Zero>::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if Zero::is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                poly[i + j] += x * y;
            }
        }
        Cyclotomic {
            conductor: a.conductor,
            coeffs: reduce(poly, a.conductor),
        }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !Zero::is_zero(*c))
            .map(|(k, c)| match k {
                0 => c.to_string(),
                _ => format!("({c})*z{}^{k}", self.conductor),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Scalar for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::rational(<Rational as Zero>::zero())
    }

    fn one() -> Self {
        Cyclotomic::rational(<Rational as One>::one())
    }

    fn from_rational(q: &Rational) -> Self {
        Cyclotomic::rational(q.clone())
    }

    fn is_exact() -> bool {
        true
    }

    fn is_zero(&self, _tol: Tol) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn approx_eq(&self, other: &Self, _tol: Tol) -> bool {
        self == other
    }

    fn inv(&self) -> Option<Self> {
        if self.coeffs.iter().all(Zero::is_zero) {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Cyclotomic {
                conductor: self.conductor,
                coeffs: {
                    let mut c = vec![<Rational as Zero>::zero(); self.coeffs.len()];
                    c[0] = q.recip();
                    c
                },
            });
        }
        let m = self.multiplication_matrix();
        let mut e0 = vec![<Rational as Zero>::zero(); self.coeffs.len()];
        e0[0] = <Rational as One>::one();
        let x = solve(&m, &e0, Tol::default())?;
        Some(Cyclotomic {
            conductor: self.conductor,
            coeffs: x,
        })
    }

    fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        if self.is_zero(Tol::default()) {
            return Some(self.clone());
        }
        let n = self.conductor;
        // write self = r * ζ_n^j with r rational, then take the principal root
        for j in 0..n.max(1) {
            let candidate = self.clone() * Cyclotomic::zeta_pow(n, -(j as i64));
            let Some(r) = candidate.as_rational().cloned() else {
                continue;
            };
            let modulus = r.abs().nth_root(k)?;
            // angle as a fraction of a full turn, normalised into (-1/2, 1/2]
            let mut turn = Rational::new(j.into(), n.max(1).into());
            if r.is_negative() {
                turn += Rational::new(1.into(), 2.into());
            }
            let half = Rational::new(1.into(), 2.into());
            while turn > half {
                turn -= <Rational as One>::one();
            }
            let root_turn =
                turn / Rational::from_integer(k.into()) * Rational::from_integer(n.max(1).into());
            if !root_turn.is_integer() {
                return None;
            }
            let l: i64 = root_turn.to_integer().try_into().ok()?;
            let unit = Cyclotomic::zeta_pow(n.max(1), l);
            return Some(unit * Cyclotomic::rational(modulus));
        }
        None
    }

    fn root_of_unity(m: u64, t: u64) -> Option<Self> {
        if t == 0 || t > u32::MAX as u64 {
            return None;
        }
        let g = m.gcd(&t);
        let (m, t) = (m / g, t / g);
        Some(Cyclotomic::zeta_pow(t as u32, m as i64))
    }

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    fn to_complex(&self) -> Complex64 {
        use num_traits::ToPrimitive;
        let n = self.conductor.max(1) as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), 2.0 * PI * k as f64 / n)
            })
            .sum()
    }

    fn kind(&self) -> ScalarKind {
        ScalarKind::Cyclotomic(self.conductor)
    }

    fn base_kind() -> ScalarKind {
        ScalarKind::Cyclotomic(1)
    }

    fn lift_to(&self, kind: ScalarKind) -> Result<Self, Error> {
        match kind {
            ScalarKind::Cyclotomic(n) => self.lift(n),
            other => Err(Error::BackendMismatch(format!(
                "cannot express a cyclotomic value as {other}"
            ))),
        }
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect(),
        )
    }

    fn from_json(value: &Value, kind: ScalarKind) -> Result<Self, Error> {
        let ScalarKind::Cyclotomic(n) = kind else {
            return Err(Error::BackendMismatch(format!(
                "expected cyclotomic scalars, header says {kind}"
            )));
        };
        let parse_one = |v: &Value| -> Result<Rational, Error> {
            match v {
                Value::String(s) => parse_rational(s),
                Value::Number(x) if x.is_i64() => {
                    Ok(Rational::from_integer(x.as_i64().unwrap().into()))
                }
                other => Err(Error::Parse(format!(
                    "expected a rational coefficient, found {other}"
                ))),
            }
        };
        match value {
            Value::Array(items) => {
                let coeffs = items.iter().map(parse_one).collect::<Result<Vec<_>, _>>()?;
                let nn = normalize_conductor(n);
                if coeffs.len() == 1 && nn != 1 {
                    // a bare rational is accepted in any conductor
                    return Cyclotomic::rational(coeffs[0].clone()).lift(nn);
                }
                Cyclotomic::new(n, coeffs)?.lift(nn)
            }
            other => Cyclotomic::rational(parse_one(other)?).lift(normalize_conductor(n)),
        }
    }
}
