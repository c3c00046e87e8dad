//! The explicit algebras: the two one-generated chain models, families A
//! (`m = n+1`) and B (`m = n+2`), and Leibniz superalgebras built from an
//! associative superalgebra with a suitable linear map `D`.
//!
//! Family bases follow the standard layout: `x_i` is index `i−1` and `y_j`
//! is index `n+j−1`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::{GradedBasis, Parity, SuperAlgebra};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar, ScalarKind, Tol};

/// Smallest `n` accepted by the family constructors.
pub const MIN_N: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
}

impl Family {
    /// Odd dimension `m` for a given `n`.
    pub fn odd_dim(self, n: usize) -> usize {
        match self {
            Family::A => n + 1,
            Family::B => n + 2,
        }
    }

    /// Length of the parameter vector for a given `n`.
    pub fn param_len(self, n: usize) -> usize {
        match self {
            Family::A => n + 3 - t0(n),
            Family::B => n + 2 - s0(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            _ => Err(Error::Parse(format!("unknown family '{s}'"))),
        }
    }
}

/// First β index of family A: `⌊(n+4)/2⌋`.
pub fn t0(n: usize) -> usize {
    (n + 4) / 2
}

/// First β index of family B: `⌊(n+5)/2⌋`.
pub fn s0(n: usize) -> usize {
    (n + 5) / 2
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_N {
        return Err(Error::InvalidInput(format!(
            "n below minimum: n = {n}, need n >= {MIN_N}"
        )));
    }
    Ok(())
}

fn x(i: usize) -> usize {
    i - 1
}

fn y(n: usize, j: usize) -> usize {
    n + j - 1
}

/// Parameters `(γ, β_{t0}, …, β_n, β)` of family A.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyAParams<F> {
    pub n: usize,
    pub gamma: F,
    /// `β_{t0}, …, β_n`.
    pub beta: Vec<F>,
    /// The trailing `β` (coefficient of `x_n` in `[y_1, y_{n+1}]`).
    pub beta_last: F,
}

impl<F: Scalar> FamilyAParams<F> {
    pub fn new(n: usize, gamma: F, beta: Vec<F>, beta_last: F) -> Result<Self> {
        check_n(n)?;
        let want = n + 1 - t0(n);
        if beta.len() != want {
            return Err(Error::InvalidInput(format!(
                "family A with n = {n} takes {want} beta values (beta_{}..beta_{n}), got {}",
                t0(n),
                beta.len()
            )));
        }
        Ok(FamilyAParams {
            n,
            gamma,
            beta,
            beta_last,
        })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Self::new(n, F::zero(), vec![F::zero(); n + 1 - t0(n)], F::zero())
    }

    pub fn m(&self) -> usize {
        self.n + 1
    }

    pub fn t0(&self) -> usize {
        t0(self.n)
    }

    /// `β_k` for `t0 ≤ k ≤ n`, zero outside that range.
    pub fn beta_at(&self, k: usize) -> F {
        if k >= self.t0() && k <= self.n {
            self.beta[k - self.t0()].clone()
        } else {
            F::zero()
        }
    }

    /// `(γ, β_{t0}, …, β_n, β)`.
    pub fn to_vector(&self) -> Vec<F> {
        std::iter::once(self.gamma.clone())
            .chain(self.beta.iter().cloned())
            .chain([self.beta_last.clone()])
            .collect()
    }

    pub fn from_vector(n: usize, v: &[F]) -> Result<Self> {
        check_n(n)?;
        if v.len() != Family::A.param_len(n) {
            return Err(Error::InvalidInput(format!(
                "family A with n = {n} has {} parameters, got {}",
                Family::A.param_len(n),
                v.len()
            )));
        }
        Self::new(
            n,
            v[0].clone(),
            v[1..v.len() - 1].to_vec(),
            v[v.len() - 1].clone(),
        )
    }
}

/// Parameters `(β_{s0}, …, β_{n+1})` of family B.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyBParams<F> {
    pub n: usize,
    /// `β_{s0}, …, β_{n+1}`.
    pub beta: Vec<F>,
}

impl<F: Scalar> FamilyBParams<F> {
    pub fn new(n: usize, beta: Vec<F>) -> Result<Self> {
        check_n(n)?;
        let want = n + 2 - s0(n);
        if beta.len() != want {
            return Err(Error::InvalidInput(format!(
                "family B with n = {n} takes {want} beta values (beta_{}..beta_{}), got {}",
                s0(n),
                n + 1,
                beta.len()
            )));
        }
        Ok(FamilyBParams { n, beta })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Self::new(n, vec![F::zero(); n + 2 - s0(n)])
    }

    pub fn m(&self) -> usize {
        self.n + 2
    }

    pub fn s0(&self) -> usize {
        s0(self.n)
    }

    pub fn beta_at(&self, k: usize) -> F {
        if k >= self.s0() && k <= self.n + 1 {
            self.beta[k - self.s0()].clone()
        } else {
            F::zero()
        }
    }

    pub fn to_vector(&self) -> Vec<F> {
        self.beta.clone()
    }

    pub fn from_vector(n: usize, v: &[F]) -> Result<Self> {
        Self::new(n, v.to_vec())
    }
}

/// Parameters of either family.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyParams<F> {
    A(FamilyAParams<F>),
    B(FamilyBParams<F>),
}

impl<F: Scalar> FamilyParams<F> {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::A(_) => Family::A,
            FamilyParams::B(_) => Family::B,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            FamilyParams::A(p) => p.n,
            FamilyParams::B(p) => p.n,
        }
    }

    pub fn zero(family: Family, n: usize) -> Result<Self> {
        Ok(match family {
            Family::A => FamilyParams::A(FamilyAParams::zero(n)?),
            Family::B => FamilyParams::B(FamilyBParams::zero(n)?),
        })
    }

    pub fn to_vector(&self) -> Vec<F> {
        match self {
            FamilyParams::A(p) => p.to_vector(),
            FamilyParams::B(p) => p.to_vector(),
        }
    }

    pub fn from_vector(family: Family, n: usize, v: &[F]) -> Result<Self> {
        Ok(match family {
            Family::A => FamilyParams::A(FamilyAParams::from_vector(n, v)?),
            Family::B => FamilyParams::B(FamilyBParams::from_vector(n, v)?),
        })
    }

    pub fn build(&self) -> SuperAlgebra<F> {
        match self {
            FamilyParams::A(p) => build_family_a(p),
            FamilyParams::B(p) => build_family_b(p),
        }
    }

    /// Same parameters in another scalar backend.
    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G) -> FamilyParams<G> {
        match self {
            FamilyParams::A(p) => FamilyParams::A(FamilyAParams {
                n: p.n,
                gamma: f(&p.gamma),
                beta: p.beta.iter().map(&f).collect(),
                beta_last: f(&p.beta_last),
            }),
            FamilyParams::B(p) => FamilyParams::B(FamilyBParams {
                n: p.n,
                beta: p.beta.iter().map(&f).collect(),
            }),
        }
    }

    /// Random rational parameters; each entry is zero with probability
    /// `zero_prob`.
    pub fn random<R: Rng>(family: Family, n: usize, rng: &mut R, zero_prob: f64) -> Result<Self> {
        let v: Vec<F> = (0..family.param_len(n))
            .map(|_| {
                if rng.gen_bool(zero_prob) {
                    F::zero()
                } else {
                    F::from_rational(&random_nonzero_rational(rng))
                }
            })
            .collect();
        Self::from_vector(family, n, &v)
    }

    /// `{"gamma", "beta", "beta_last"}` for A, `{"beta"}` for B.
    pub fn to_json(&self) -> Value {
        let arr = |v: &[F]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
        match self {
            FamilyParams::A(p) => json!({
                "gamma": p.gamma.to_json(),
                "beta": arr(&p.beta),
                "beta_last": p.beta_last.to_json(),
            }),
            FamilyParams::B(p) => json!({ "beta": arr(&p.beta) }),
        }
    }

    /// Parse the object form above, or a flat array in vector order.
    /// Missing fields default to zero.
    pub fn from_json(family: Family, n: usize, v: &Value, kind: ScalarKind) -> Result<Self> {
        check_n(n)?;
        if let Value::Array(items) = v {
            let vals: Vec<F> = items
                .iter()
                .map(|x| F::from_json(x, kind))
                .collect::<Result<_>>()?;
            return Self::from_vector(family, n, &vals);
        }
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("parameters must be a JSON object or array".into()))?;
        let allowed: &[&str] = match family {
            Family::A => &["gamma", "beta", "beta_last"],
            Family::B => &["beta"],
        };
        if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!(
                "unexpected parameter '{k}' for family {family}"
            )));
        }
        let scalar = |key: &str| {
            obj.get(key)
                .map_or(Ok(F::zero()), |x| F::from_json(x, kind))
        };
        let len = match family {
            Family::A => n + 1 - t0(n),
            Family::B => n + 2 - s0(n),
        };
        let beta: Vec<F> = match obj.get("beta") {
            None => vec![F::zero(); len],
            Some(Value::Array(items)) => items
                .iter()
                .map(|x| F::from_json(x, kind))
                .collect::<Result<_>>()?,
            Some(other) => {
                return Err(Error::Parse(format!(
                    "'beta' must be an array, found {other}"
                )))
            }
        };
        Ok(match family {
            Family::A => FamilyParams::A(FamilyAParams::new(
                n,
                scalar("gamma")?,
                beta,
                scalar("beta_last")?,
            )?),
            Family::B => FamilyParams::B(FamilyBParams::new(n, beta)?),
        })
    }
}

/// A nonzero rational `p/q` with `|p| ≤ 5`, `1 ≤ q ≤ 4`.
pub fn random_nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut p: i64 = rng.gen_range(-5..=4);
    if p >= 0 {
        p += 1;
    }
    let q: i64 = rng.gen_range(1..=4);
    Rational::new(p.into(), q.into())
}

/// The null-filiform chain `[e_i, e_1] = e_{i+1}`, all basis vectors even.
pub fn build_model_1<F: Scalar>(dim: usize) -> Result<SuperAlgebra<F>> {
    if dim < 1 {
        return Err(Error::InvalidInput(
            "model 1 needs dimension at least 1".into(),
        ));
    }
    let entries = (1..dim).map(|i| (i - 1, 0, i, F::one()));
    SuperAlgebra::from_entries(GradedBasis::chain(vec![Parity::Even; dim]), entries)
}

/// The chain `[e_i, e_1] = e_{i+1}`, `[e_i, e_2] = 2e_{i+2}` on `n` even and
/// `m` odd vectors. Parities alternate along the chain starting with `e_1`
/// odd, so `m ∈ {n, n+1}`.
pub fn build_model_2<F: Scalar>(n: usize, m: usize) -> Result<SuperAlgebra<F>> {
    if !(m == n || m == n + 1) || n + m == 0 {
        return Err(Error::InvalidInput(format!(
            "model 2 needs m = n or m = n+1 (got n = {n}, m = {m})"
        )));
    }
    let d = n + m;
    let parity = (0..d)
        .map(|i| {
            if i % 2 == 0 {
                Parity::Odd
            } else {
                Parity::Even
            }
        })
        .collect();
    let two = F::from_i64(2);
    let first = (1..d).map(|i| (i - 1, 0, i, F::one()));
    let second = (1..d.saturating_sub(1)).map(|i| (i - 1, 1, i + 1, two.clone()));
    SuperAlgebra::from_entries(
        GradedBasis::chain(parity),
        first.chain(second).collect::<Vec<_>>(),
    )
}

/// Family A, `m = n+1`.
pub fn build_family_a<F: Scalar>(p: &FamilyAParams<F>) -> SuperAlgebra<F> {
    let n = p.n;
    let t0 = p.t0();
    let half = F::from_rational(&Rational::new(1.into(), 2.into()));
    let minus_two = F::from_i64(-2);
    let mut e = Vec::new();
    for i in 1..n {
        e.push((x(i), x(1), x(i + 1), F::one()));
        e.push((y(n, i), x(1), y(n, i + 1), F::one()));
        e.push((x(i), y(n, 1), y(n, i + 1), half.clone()));
    }
    for j in 1..=n {
        e.push((y(n, j), y(n, 1), x(j), F::one()));
    }
    e.push((y(n, n + 1), y(n, n + 1), x(n), p.gamma.clone()));
    for i in 1..=(n - 1) / 2 {
        for k in t0..=n + 1 - i {
            e.push((x(i), y(n, n + 1), y(n, k - 1 + i), p.beta_at(k)));
        }
    }
    for k in t0..=n {
        e.push((
            y(n, 1),
            y(n, n + 1),
            x(k - 1),
            minus_two.clone() * p.beta_at(k),
        ));
    }
    e.push((y(n, 1), y(n, n + 1), x(n), p.beta_last.clone()));
    for j in 2..=n.div_ceil(2) {
        for k in t0..=n + 2 - j {
            e.push((
                y(n, j),
                y(n, n + 1),
                x(k - 2 + j),
                minus_two.clone() * p.beta_at(k),
            ));
        }
    }
    SuperAlgebra::from_entries(GradedBasis::standard(n, n + 1), e)
        .expect("family A indices are in range")
}

/// Family B, `m = n+2`.
pub fn build_family_b<F: Scalar>(p: &FamilyBParams<F>) -> SuperAlgebra<F> {
    let n = p.n;
    let s0 = p.s0();
    let half = F::from_rational(&Rational::new(1.into(), 2.into()));
    let minus_two = F::from_i64(-2);
    let mut e = Vec::new();
    for i in 1..n {
        e.push((x(i), x(1), x(i + 1), F::one()));
    }
    for j in 1..=n {
        e.push((y(n, j), x(1), y(n, j + 1), F::one()));
        e.push((x(j), y(n, 1), y(n, j + 1), half.clone()));
        e.push((y(n, j), y(n, 1), x(j), F::one()));
    }
    for i in 1..=n / 2 {
        for k in s0..=n + 2 - i {
            e.push((x(i), y(n, n + 2), y(n, k - 1 + i), p.beta_at(k)));
            e.push((
                y(n, i),
                y(n, n + 2),
                x(k - 2 + i),
                minus_two.clone() * p.beta_at(k),
            ));
        }
    }
    SuperAlgebra::from_entries(GradedBasis::standard(n, n + 2), e)
        .expect("family B indices are in range")
}

/// An associative superalgebra together with a linear map `D` satisfying
/// `D(a·Db) = Da·Db = D((Da)·b)`.
#[derive(Debug, Clone)]
pub struct AssociativeSuperAlgebra<F> {
    /// Multiplication `b_i · b_j`, stored as a structure tensor.
    mult: SuperAlgebra<F>,
    /// `D b_j` is column `j`.
    d: Matrix<F>,
}

impl<F: Scalar> AssociativeSuperAlgebra<F> {
    /// Validates associativity, that `D` preserves parity and the
    /// `D`-condition, all on basis elements.
    pub fn new(mult: SuperAlgebra<F>, d: Matrix<F>, tol: Tol) -> Result<Self> {
        let dim = mult.dim();
        if d.rows() != dim || d.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "D is {}x{}, algebra has dimension {dim}",
                d.rows(),
                d.cols()
            )));
        }
        if !mult.check_grading().pass {
            return Err(Error::InvalidInput(
                "multiplication does not respect the grading".into(),
            ));
        }
        for j in 0..dim {
            let col = d.column(j);
            if col.iter().any(|c| !c.is_zero(tol))
                && mult.homogeneous_parity(&col, tol) != Some(mult.basis().parity(j))
            {
                return Err(Error::ParityMixing(j));
            }
        }
        let s = AssociativeSuperAlgebra { mult, d };
        for a in 0..dim {
            for b in 0..dim {
                let ea = s.mult.unit(a);
                let eb = s.mult.unit(b);
                for c in 0..dim {
                    let ec = s.mult.unit(c);
                    let left = s.mul(&s.mul(&ea, &eb), &ec);
                    let right = s.mul(&ea, &s.mul(&eb, &ec));
                    if !approx_vec(&left, &right, tol) {
                        return Err(Error::InvalidInput(format!(
                            "multiplication is not associative on ({a},{b},{c})"
                        )));
                    }
                }
                let da = s.apply_d(&ea);
                let db = s.apply_d(&eb);
                let middle = s.mul(&da, &db);
                let first = s.apply_d(&s.mul(&ea, &db));
                let last = s.apply_d(&s.mul(&da, &eb));
                if !approx_vec(&first, &middle, tol) || !approx_vec(&last, &middle, tol) {
                    return Err(Error::InvalidInput(format!(
                        "D-condition fails on the pair ({a},{b})"
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn mul(&self, u: &[F], v: &[F]) -> Vec<F> {
        self.mult.bracket_unchecked(u, v)
    }

    pub fn apply_d(&self, v: &[F]) -> Vec<F> {
        self.d.mul_vec(v)
    }

    pub fn basis(&self) -> &GradedBasis {
        self.mult.basis()
    }

    /// The matrix superalgebra `M(p|q)`: `E_{ij}` with parity `|i| + |j|`,
    /// where the first `p` indices are even. Basis order is row-major with
    /// even units first.
    pub fn matrix_algebra(p: usize, q: usize) -> (SuperAlgebra<F>, Vec<(usize, usize)>) {
        let size = p + q;
        let par = |i: usize| if i < p { Parity::Even } else { Parity::Odd };
        let mut units: Vec<(usize, usize)> = (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .collect();
        units.sort_by_key(|&(i, j)| par(i).add(par(j)));
        let labels = units
            .iter()
            .map(|(i, j)| format!("E{}{}", i + 1, j + 1))
            .collect();
        let parity = units.iter().map(|&(i, j)| par(i).add(par(j))).collect();
        let basis = GradedBasis::new(labels, parity).expect("unit labels are distinct");
        let idx = |u: (usize, usize)| units.iter().position(|&w| w == u).expect("unit exists");
        let mut entries = Vec::new();
        for (a, &(i, j)) in units.iter().enumerate() {
            for (b, &(k, l)) in units.iter().enumerate() {
                if j == k {
                    entries.push((a, b, idx((i, l)), F::one()));
                }
            }
        }
        (
            SuperAlgebra::from_entries(basis, entries).expect("indices in range"),
            units,
        )
    }

    /// Upper-triangular `2×2` matrices (all even) with basis `E11, E12, E22`.
    pub fn upper_triangular_2() -> SuperAlgebra<F> {
        let basis = GradedBasis::new(
            vec!["E11".into(), "E12".into(), "E22".into()],
            vec![Parity::Even; 3],
        )
        .expect("labels are distinct");
        let one = F::one;
        SuperAlgebra::from_entries(
            basis,
            [
                (0, 0, 0, one()),
                (0, 1, 1, one()),
                (1, 2, 1, one()),
                (2, 2, 2, one()),
            ],
        )
        .expect("indices in range")
    }
}

fn approx_vec<F: Scalar>(a: &[F], b: &[F], tol: Tol) -> bool {
    a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

/// `⟨a, b⟩_D = a·(Db) − (−1)^{|a||b|} (Db)·a`; the result is checked
/// against the graded Leibniz identity before it is returned.
pub fn construct_from_associative_d<F: Scalar>(
    s: &AssociativeSuperAlgebra<F>,
    tol: Tol,
) -> Result<SuperAlgebra<F>> {
    let dim = s.basis().dim();
    let mut entries = Vec::new();
    for a in 0..dim {
        let ea = s.mult.unit(a);
        for b in 0..dim {
            let db = s.apply_d(&s.mult.unit(b));
            let left = s.mul(&ea, &db);
            let right = s.mul(&db, &ea);
            let sign = Parity::sign(s.basis().parity(a), s.basis().parity(b));
            for k in 0..dim {
                let v = if sign == 1 {
                    left[k].clone() - right[k].clone()
                } else {
                    left[k].clone() + right[k].clone()
                };
                if !v.is_zero(tol) {
                    entries.push((a, b, k, v));
                }
            }
        }
    }
    let out = SuperAlgebra::from_entries(s.basis().clone(), entries)?;
    let report = out.check_graded_leibniz(tol);
    if !report.pass {
        return Err(Error::Verification(format!(
            "D-bracket violates the graded Leibniz identity at {:?}",
            report.violations[0].indices
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{central_series, generator_info, nilindex};
    use crate::scalar::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn a5(gamma: &str, b4: &str, b5: &str, b: &str) -> SuperAlgebra<Rational> {
        build_family_a(&FamilyAParams::new(5, q(gamma), vec![q(b4), q(b5)], q(b)).unwrap())
    }

    #[test]
    fn index_helpers() {
        assert_eq!((t0(5), t0(6)), (4, 5));
        assert_eq!((s0(4), s0(5)), (4, 5));
        assert_eq!(Family::A.param_len(5), 4);
        assert_eq!(Family::B.param_len(4), 2);
        assert!(FamilyAParams::<Rational>::zero(2).is_err());
    }

    #[test]
    fn family_a_table_entries() {
        let a = a5("7", "1/2", "3", "0");
        let n = 5;
        let t = Tol::default();
        let out = a.bracket(&a.unit(y(n, 2)), &a.unit(y(n, 1))).unwrap();
        assert_eq!(out, a.unit(x(2)));
        let out = a.bracket(&a.unit(y(n, 6)), &a.unit(y(n, 6))).unwrap();
        assert_eq!(
            out,
            a.unit(x(5)).iter().map(|v| v * q("7")).collect::<Vec<_>>()
        );
        // [y2, y6] = −2β4 x4 − 2β5 x5
        let out = a.bracket(&a.unit(y(n, 2)), &a.unit(y(n, 6))).unwrap();
        assert_eq!(out[x(4)], q("-1"));
        assert_eq!(out[x(5)], q("-6"));
        assert!(out
            .iter()
            .enumerate()
            .all(|(k, v)| k == x(4) || k == x(5) || v.is_zero(t)));
    }

    #[test]
    fn family_a_zero_parameters_leave_only_chain_rows() {
        let a = a5("0", "0", "0", "0");
        let ylast = y(5, 6);
        for i in 0..a.dim() {
            assert!(a.product(i, ylast).is_empty());
            assert!(a.product(ylast, i).is_empty());
        }
        assert_eq!(nilindex(&a, Tol::default()).unwrap(), 11);
    }

    #[test]
    fn family_b_table_entries() {
        let p = FamilyBParams::new(4, vec![q("1"), q("0")]).unwrap();
        let b = build_family_b(&p);
        let out = b.bracket(&b.unit(x(1)), &b.unit(y(4, 6))).unwrap();
        assert_eq!(out, b.unit(y(4, 4)));
        let z = build_family_b(&FamilyBParams::<Rational>::zero(4).unwrap());
        assert_eq!(central_series(&z, 20, Tol::default()).nilindex, Some(10));
    }

    #[test]
    fn families_satisfy_identity() {
        let t = Tol::default();
        let a = a5("1", "1/2", "0", "0");
        assert!(a.check_grading().pass);
        assert!(a.check_graded_leibniz(t).pass);
        let b = build_family_b(&FamilyBParams::new(5, vec![q("2"), q("-1/3")]).unwrap());
        assert!(b.check_graded_leibniz(t).pass);
    }

    #[test]
    fn tampering_is_detected() {
        let a = a5("1", "1/2", "0", "0");
        let n = 5;
        let bad = a
            .with_entry(y(n, 1), y(n, 1), x(1), q("0"))
            .unwrap()
            .with_entry(y(n, 1), y(n, 1), x(2), q("1"))
            .unwrap();
        let r = bad.check_graded_leibniz(Tol::default());
        assert!(!r.pass);
        assert!(r.has_violation(&[y(n, 1), y(n, 1), x(1)]));
    }

    #[test]
    fn models() {
        let t = Tol::default();
        let m1 = build_model_1::<Rational>(4).unwrap();
        assert_eq!(m1.product(0, 0), &[(1, q("1"))]);
        assert_eq!(m1.product(2, 0), &[(3, q("1"))]);
        assert!(m1.check_graded_leibniz(t).pass);
        assert!(build_model_1::<Rational>(1)
            .unwrap()
            .product(0, 0)
            .is_empty());
        assert!(build_model_1::<Rational>(0).is_err());

        let m2 = build_model_2::<Rational>(2, 3).unwrap();
        assert_eq!(m2.product(2, 1), &[(4, q("2"))]);
        assert!(m2.check_grading().pass);
        assert!(m2.check_graded_leibniz(t).pass);
        let g = generator_info(&m2, t);
        assert_eq!((g.count, g.parities.clone()), (1, vec![Parity::Odd]));
        assert!(
            build_model_2::<Rational>(2, 2)
                .unwrap()
                .check_grading()
                .pass
        );
        assert!(build_model_2::<Rational>(2, 4).is_err());
    }

    #[test]
    fn d_construction_identity_gives_commutator() {
        let t = Tol::default();
        let (m, _) = AssociativeSuperAlgebra::<Rational>::matrix_algebra(1, 1);
        let s = AssociativeSuperAlgebra::new(m, Matrix::identity(4), t).unwrap();
        let l = construct_from_associative_d(&s, t).unwrap();
        assert!(l.check_graded_antisymmetry(t).pass);
        assert!(l.check_graded_jacobi(t).pass);
    }

    #[test]
    fn d_construction_zero_map() {
        let t = Tol::default();
        let (m, _) = AssociativeSuperAlgebra::<Rational>::matrix_algebra(1, 1);
        let s = AssociativeSuperAlgebra::new(m, Matrix::zeros(4, 4), t).unwrap();
        let l = construct_from_associative_d(&s, t).unwrap();
        assert!(l.tensor().iter().all(|v| v.is_zero(t)));
    }

    #[test]
    fn d_construction_upper_triangular_projection() {
        let t = Tol::default();
        let m = AssociativeSuperAlgebra::<Rational>::upper_triangular_2();
        let mut d = Matrix::zeros(3, 3);
        d[(0, 0)] = q("1");
        d[(2, 2)] = q("1");
        let s = AssociativeSuperAlgebra::new(m, d, t).unwrap();
        let l = construct_from_associative_d(&s, t).unwrap();
        assert!(l.check_graded_leibniz(t).pass);
        let anti = l.check_graded_antisymmetry(t);
        assert!(!anti.pass);
        // ⟨E12, E12⟩ = 0 but ⟨E12, E11⟩ = −E12 while ⟨E11, E12⟩ = 0
        assert!(anti.has_violation(&[0, 1]));
    }

    #[test]
    fn d_condition_violation_is_reported() {
        let t = Tol::default();
        let m = AssociativeSuperAlgebra::<Rational>::upper_triangular_2();
        // projection onto E12 is not multiplicative
        let mut d = Matrix::zeros(3, 3);
        d[(1, 1)] = q("1");
        d[(0, 0)] = q("2");
        assert!(AssociativeSuperAlgebra::new(m, d, t).is_err());
    }

    #[test]
    fn params_json() {
        let v: Value =
            serde_json::from_str(r#"{"gamma":"1","beta":["1/2","0"],"beta_last":"0"}"#).unwrap();
        let p =
            FamilyParams::<Rational>::from_json(Family::A, 5, &v, ScalarKind::Rational).unwrap();
        assert_eq!(p.to_vector(), vec![q("1"), q("1/2"), q("0"), q("0")]);
        assert_eq!(
            FamilyParams::<Rational>::from_json(Family::A, 5, &p.to_json(), ScalarKind::Rational)
                .unwrap(),
            p
        );
        let bad: Value = serde_json::from_str(r#"{"beta":["1"]}"#).unwrap();
        assert!(
            FamilyParams::<Rational>::from_json(Family::A, 5, &bad, ScalarKind::Rational).is_err()
        );
    }
}
