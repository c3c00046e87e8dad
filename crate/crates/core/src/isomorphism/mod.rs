//! Isomorphisms between members of families A and B.
//!
//! Two members are isomorphic exactly when a short polynomial system in
//! `(a₁, a_{n+1}, b)` has a solution with `a₁, b ≠ 0`. [`iso_solvable`]
//! decides that system, [`apply`] pushes parameters forward along a
//! witness, and [`materialize_basis_change`] builds the full change of basis
//! so that [`verify_isomorphism`] can check a witness against the structure
//! constants directly.
//!
//! A witness describes the new generators in the old basis:
//! `y′_1 = a₁y_1 + a_top·y_top` and `y′_m = b_sub·y_{m−1} + b·y_m`, where
//! `top` is `n+1` (family A) or `n+2` (family B). The rest of the new basis
//! is produced by bracketing: `x′_1 = [y′_1, y′_1]`, `x′_{t+1} = [x′_t, x′_1]`,
//! `y′_{t} = [y′_{t−1}, x′_1]`.

pub mod binomial;

use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::{IdentityReport, Parity, SuperAlgebra, Violation};
use crate::error::{Error, Result};
use crate::families::{t0, Family, FamilyAParams, FamilyBParams, FamilyParams};
use crate::invariants::{
    central_series, characteristic_sequence, default_cutoff, generator_info, right_annihilator,
    SeriesStatus,
};
use crate::linalg::{equilibrated_inverse, equilibrated_rank, Matrix};
use crate::scalar::{Rational, Scalar, Tol};

use binomial::{Binomial, TorusSolution};

/// Exponent of `a₁` in the family B relations `b·β_j = a₁^{e(j)}·β′_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BExponent {
    /// `e(j) = 2j − 3`; confirmed by direct verification of witnesses.
    #[default]
    TwoJMinusThree,
    /// `e(j) = 2j − 1`; kept for comparison.
    TwoJMinusOne,
}

impl BExponent {
    pub fn exponent(self, j: usize) -> i64 {
        match self {
            BExponent::TwoJMinusThree => 2 * j as i64 - 3,
            BExponent::TwoJMinusOne => 2 * j as i64 - 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BExponent::TwoJMinusThree => "2j-3",
            BExponent::TwoJMinusOne => "2j-1",
        }
    }
}

/// Transformation coefficients of an isomorphism between family members.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoWitness<F> {
    pub family: Family,
    pub n: usize,
    pub a1: F,
    /// `a_{n+1}` (family A) or `a_{n+2}` (family B).
    pub a_top: F,
    /// `b_{n+1}` (family A) or `b_{n+2}` (family B).
    pub b: F,
    /// Family B only: the free coefficient `b_{n+1}`. Family A derives
    /// `b_n = −a_{n+1} b γ / a₁` from the source algebra instead.
    pub b_sub: F,
    /// Explicit images of `y′_1` and `y′_m` (odd coordinates), overriding
    /// the coefficients above when present.
    pub images: Option<(Vec<F>, Vec<F>)>,
}

impl<F: Scalar> IsoWitness<F> {
    pub fn new(family: Family, n: usize, a1: F, a_top: F, b: F) -> Self {
        IsoWitness {
            family,
            n,
            a1,
            a_top,
            b,
            b_sub: F::zero(),
            images: None,
        }
    }

    pub fn identity(family: Family, n: usize) -> Self {
        Self::new(family, n, F::one(), F::zero(), F::one())
    }

    pub fn tag(&self) -> &'static str {
        match (self.family, self.n % 2) {
            (Family::A, 1) => "A-odd",
            (Family::A, _) => "A-even",
            (Family::B, _) => "B",
        }
    }

    /// Random admissible rational witness; `a_top` and `b_sub` are drawn
    /// nonzero with probability one half.
    pub fn random<R: Rng>(family: Family, n: usize, rng: &mut R) -> Self {
        let nz = |rng: &mut R| F::from_rational(&crate::families::random_nonzero_rational(rng));
        let a1 = nz(rng);
        let b = nz(rng);
        let a_top = if rng.gen_bool(0.5) {
            nz(rng)
        } else {
            F::zero()
        };
        let mut w = Self::new(family, n, a1, a_top, b);
        if family == Family::B && rng.gen_bool(0.5) {
            w.b_sub = nz(rng);
        }
        w
    }

    /// Like [`IsoWitness::random`], but `a1` and `b` have modulus between
    /// 1/2 and 2. Powers of `a1` up to `a1^{2n}` then stay within a few
    /// orders of magnitude, which keeps floating zero tests meaningful.
    pub fn random_balanced<R: Rng>(family: Family, n: usize, rng: &mut R) -> Self {
        const UNITS: [(i64, i64); 5] = [(1, 1), (2, 1), (1, 2), (3, 2), (2, 3)];
        let unit = |rng: &mut R| {
            let (p, q) = UNITS[rng.gen_range(0..UNITS.len())];
            let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
            F::from_rational(&Rational::new((sign * p).into(), q.into()))
        };
        let mut w = Self::random(family, n, rng);
        w.a1 = unit(rng);
        w.b = unit(rng);
        w
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "family": self.tag(),
            "n": self.n,
            "a1": self.a1.to_json(),
            "b": self.b.to_json(),
        });
        let (top, sub) = match self.family {
            Family::A => ("a_n_plus_1", None),
            Family::B => ("a_n_plus_2", Some("b_n_plus_1")),
        };
        out[top] = self.a_top.to_json();
        if let Some(sub) = sub {
            out[sub] = self.b_sub.to_json();
        }
        out
    }

    /// Odd-part coordinates of `y′_1` and `y′_m` in the source basis.
    /// `gamma` is the source `γ` (family A only).
    pub fn generator_images(&self, gamma: &F) -> Result<(Vec<F>, Vec<F>)> {
        if let Some(images) = &self.images {
            return Ok(images.clone());
        }
        let n = self.n;
        let m = self.family.odd_dim(n);
        let mut a = vec![F::zero(); m];
        let mut b = vec![F::zero(); m];
        a[0] = self.a1.clone();
        a[m - 1] = self.a_top.clone();
        b[m - 1] = self.b.clone();
        b[m - 2] = match self.family {
            Family::A => {
                let num = -(self.a_top.clone() * self.b.clone() * gamma.clone());
                num.div(&self.a1)
                    .ok_or_else(|| Error::InvalidInput("witness has a1 = 0".into()))?
            }
            Family::B => self.b_sub.clone(),
        };
        Ok((a, b))
    }
}

/// The relations between source and target parameters.
#[derive(Debug, Clone)]
pub struct IsoConditionSystem<F> {
    pub source: FamilyParams<F>,
    pub target: FamilyParams<F>,
    pub b_exponent: BExponent,
}

impl<F: Scalar> IsoConditionSystem<F> {
    pub fn new(source: FamilyParams<F>, target: FamilyParams<F>) -> Result<Self> {
        if source.family() != target.family() || source.n() != target.n() {
            return Err(Error::InvalidInput(format!(
                "cannot compare family {} (n = {}) with family {} (n = {})",
                source.family(),
                source.n(),
                target.family(),
                target.n()
            )));
        }
        Ok(IsoConditionSystem {
            source,
            target,
            b_exponent: BExponent::default(),
        })
    }

    pub fn with_exponent(mut self, e: BExponent) -> Self {
        self.b_exponent = e;
        self
    }
}

#[derive(Debug, Clone)]
pub struct IsoDecision<F> {
    pub isomorphic: bool,
    pub witness: Option<IsoWitness<F>>,
    /// Why the system has no solution, or why no witness could be written
    /// down in this backend.
    pub note: Option<String>,
}

impl<F: Scalar> IsoDecision<F> {
    fn no(reason: String) -> Self {
        IsoDecision {
            isomorphic: false,
            witness: None,
            note: Some(reason),
        }
    }
}

/// Whether the coefficient of `a_{n+1}` in the last family A relation
/// vanishes on the solution set of the other relations. It is either
/// identically zero there or nowhere zero.
fn a_top_coefficient_vanishes<F: Scalar>(
    s: &FamilyAParams<F>,
    t: &FamilyAParams<F>,
    tol: Tol,
) -> bool {
    let n = s.n;
    let bt = s.beta_at(t0(n));
    if n.is_multiple_of(2) {
        return s.gamma.is_zero(tol);
    }
    if s.gamma.is_zero(tol) {
        return bt.is_zero(tol) || t.beta_at(t0(n)).is_zero(tol);
    }
    let four = F::from_i64(4);
    !bt.is_zero(tol) && s.gamma.approx_eq(&(four * bt.clone() * bt), tol)
}

/// Decide whether two members of the same family are isomorphic, and if so
/// return a witness mapping the first onto the second.
pub fn iso_solvable<F: Scalar>(sys: &IsoConditionSystem<F>, tol: Tol) -> IsoDecision<F> {
    let n = sys.source.n();
    let mut eqs = Vec::new();
    let mut a_top_rule = None;
    match (&sys.source, &sys.target) {
        (FamilyParams::A(s), FamilyParams::A(t)) => {
            eqs.push(Binomial {
                p: 2,
                e: 2 * n as i64,
                c: s.gamma.clone(),
                c_target: t.gamma.clone(),
            });
            for j in s.t0()..=n {
                eqs.push(Binomial {
                    p: 1,
                    e: 2 * j as i64 - 3,
                    c: s.beta_at(j),
                    c_target: t.beta_at(j),
                });
            }
            if a_top_coefficient_vanishes(s, t, tol) {
                eqs.push(Binomial {
                    p: 1,
                    e: 2 * n as i64 - 1,
                    c: s.beta_last.clone(),
                    c_target: t.beta_last.clone(),
                });
            } else {
                a_top_rule = Some((s, t));
            }
        }
        (FamilyParams::B(s), FamilyParams::B(t)) => {
            for j in s.s0()..=n + 1 {
                let e = sys.b_exponent.exponent(j);
                eqs.push(Binomial {
                    p: 1,
                    e,
                    c: s.beta_at(j),
                    c_target: t.beta_at(j),
                });
            }
        }
        _ => return IsoDecision::no("parameter records belong to different families".into()),
    }
    let (b, a1) = match binomial::solve(&eqs, tol) {
        TorusSolution::Inconsistent(reason) => return IsoDecision::no(reason),
        TorusSolution::Solvable { point: None } => {
            return IsoDecision {
                isomorphic: true,
                witness: None,
                note: Some(format!(
                    "solution needs roots outside the {} backend",
                    F::base_kind()
                )),
            }
        }
        TorusSolution::Solvable { point: Some(p) } => p,
    };
    let a_top = match a_top_rule {
        None => F::zero(),
        Some((s, t)) => {
            let a1n = a1.powi(n as i64).expect("a1 is nonzero");
            let mut k = b.clone() * s.gamma.clone();
            if n % 2 == 1 {
                let bt = s.beta_at(t0(n));
                k = k - F::from_i64(4) * t.beta_at(t0(n)) * a1n.clone() * bt;
            }
            let rhs = a1n.clone() * a1n * t.beta_last.clone()
                - a1.clone() * b.clone() * s.beta_last.clone();
            rhs.div(&k).expect("coefficient is nonzero on this branch")
        }
    };
    let witness = IsoWitness::new(sys.source.family(), n, a1, a_top, b);
    IsoDecision {
        isomorphic: true,
        witness: Some(witness),
        note: None,
    }
}

/// Target parameters obtained from `p` along the witness `w`.
pub fn apply<F: Scalar>(
    w: &IsoWitness<F>,
    p: &FamilyParams<F>,
    e: BExponent,
) -> Result<FamilyParams<F>> {
    if w.family != p.family() || w.n != p.n() {
        return Err(Error::InvalidInput(
            "witness and parameters disagree on family or n".into(),
        ));
    }
    let n = p.n();
    let tol = Tol::default();
    if w.a1.is_zero(tol) || w.b.is_zero(tol) {
        return Err(Error::InvalidInput(
            "witness must have a1 and b nonzero".into(),
        ));
    }
    let pw = |k: i64| w.a1.powi(k).expect("a1 is nonzero");
    Ok(match p {
        FamilyParams::A(s) => {
            let a2n = pw(2 * n as i64);
            let gamma = crate::scalar::quot(&(w.b.clone() * w.b.clone() * s.gamma.clone()), &a2n);
            let beta: Vec<F> = (s.t0()..=n)
                .map(|j| crate::scalar::quot(&(w.b.clone() * s.beta_at(j)), &pw(2 * j as i64 - 3)))
                .collect();
            let mut num = w.a_top.clone() * w.b.clone() * s.gamma.clone()
                + w.a1.clone() * w.b.clone() * s.beta_last.clone();
            if n % 2 == 1 {
                let bt_new = beta[0].clone();
                num = num
                    - F::from_i64(4) * bt_new * pw(n as i64) * w.a_top.clone() * s.beta_at(s.t0());
            }
            let beta_last = crate::scalar::quot(&num, &a2n);
            FamilyParams::A(FamilyAParams::new(n, gamma, beta, beta_last)?)
        }
        FamilyParams::B(s) => {
            let beta = (s.s0()..=n + 1)
                .map(|j| crate::scalar::quot(&(w.b.clone() * s.beta_at(j)), &pw(e.exponent(j))))
                .collect();
            FamilyParams::B(FamilyBParams::new(n, beta)?)
        }
    })
}

/// Read the family parameters back off a family algebra's structure
/// constants.
pub fn read_params<F: Scalar>(family: Family, a: &SuperAlgebra<F>) -> Result<FamilyParams<F>> {
    let n = a.basis().even_dim();
    if a.basis().odd_dim() != family.odd_dim(n) {
        return Err(Error::DimensionMismatch(format!(
            "not a family {family} algebra"
        )));
    }
    let x = |i: usize| i - 1;
    let y = |j: usize| n + j - 1;
    let c = |i: usize, j: usize, k: usize| a.structure_constant(i, j, k).clone();
    Ok(match family {
        Family::A => {
            let beta = (t0(n)..=n).map(|k| c(x(1), y(n + 1), y(k))).collect();
            FamilyParams::A(FamilyAParams::new(
                n,
                c(y(n + 1), y(n + 1), x(n)),
                beta,
                c(y(1), y(n + 1), x(n)),
            )?)
        }
        Family::B => {
            let beta = (crate::families::s0(n)..=n + 1)
                .map(|k| c(x(1), y(n + 2), y(k)))
                .collect();
            FamilyParams::B(FamilyBParams::new(n, beta)?)
        }
    })
}

/// Which family an algebra's dimensions point to.
fn family_of<F: Scalar>(a: &SuperAlgebra<F>) -> Result<Family> {
    let (n, m) = (a.basis().even_dim(), a.basis().odd_dim());
    match m.checked_sub(n) {
        Some(1) => Ok(Family::A),
        Some(2) => Ok(Family::B),
        _ => Err(Error::InvalidInput(format!(
            "dimensions ({n}|{m}) match neither family"
        ))),
    }
}

/// Columns of the change of basis described by `w` inside `a`: the new
/// basis vectors in old coordinates.
pub fn basis_change_matrix<F: Scalar>(a: &SuperAlgebra<F>, w: &IsoWitness<F>) -> Result<Matrix<F>> {
    let family = family_of(a)?;
    let n = a.basis().even_dim();
    if family != w.family || n != w.n {
        return Err(Error::InvalidInput(
            "witness does not match the algebra's family or n".into(),
        ));
    }
    let m = family.odd_dim(n);
    let gamma = a.structure_constant(n + m - 1, n + m - 1, n - 1).clone();
    let (ya, yb) = w.generator_images(&gamma)?;
    if ya.len() != m || yb.len() != m {
        return Err(Error::DimensionMismatch(
            "generator images must have odd dimension".into(),
        ));
    }
    let embed = |v: &[F]| -> Vec<F> {
        vec![F::zero(); n]
            .into_iter()
            .chain(v.iter().cloned())
            .collect()
    };
    let y1 = embed(&ya);
    let ym = embed(&yb);
    let x1 = a.bracket_unchecked(&y1, &y1);
    let mut cols = vec![x1.clone()];
    for _ in 1..n {
        let next = a.bracket_unchecked(cols.last().unwrap(), &x1);
        cols.push(next);
    }
    let mut ys = vec![y1];
    for _ in 1..m - 1 {
        let next = a.bracket_unchecked(ys.last().unwrap(), &x1);
        ys.push(next);
    }
    ys.push(ym);
    cols.extend(ys);
    Ok(Matrix::from_columns(&cols))
}

/// Build the change of basis described by `w` inside `a`.
///
/// Returns `(P, T)` where `P` is [`basis_change_matrix`] and `T` holds the
/// structure constants in the new basis. `P` is then a homomorphism from
/// `T` onto `a`.
pub fn materialize_basis_change<F: Scalar>(
    a: &SuperAlgebra<F>,
    w: &IsoWitness<F>,
    tol: Tol,
) -> Result<(Matrix<F>, SuperAlgebra<F>)> {
    let p = basis_change_matrix(a, w)?;
    let d = p.cols();
    let (rank, pinv) = equilibrated_inverse(&p, tol);
    let pinv = pinv.ok_or(Error::SingularMap { rank, dim: d })?;
    let cols: Vec<Vec<F>> = (0..d).map(|i| p.column(i)).collect();
    let mut entries = Vec::new();
    for (i, u) in cols.iter().enumerate() {
        for (j, v) in cols.iter().enumerate() {
            let img = pinv.mul_vec(&a.bracket_unchecked(u, v));
            for (k, c) in img.into_iter().enumerate() {
                if !c.is_zero(tol) {
                    entries.push((i, j, k, c));
                }
            }
        }
    }
    let target = SuperAlgebra::from_entries(a.basis().clone(), entries)?;
    Ok((p, target))
}

/// Check `f([u, v]) = [f(u), f(v)]` on all basis pairs, where column `i` of
/// `map` is the image of the `i`-th basis vector of `domain`.
pub fn verify_isomorphism<F: Scalar>(
    domain: &SuperAlgebra<F>,
    codomain: &SuperAlgebra<F>,
    map: &Matrix<F>,
    tol: Tol,
) -> Result<IdentityReport<F>> {
    let d = domain.dim();
    if codomain.dim() != d || map.rows() != d || map.cols() != d {
        return Err(Error::DimensionMismatch(
            "map must be square and match both algebras".into(),
        ));
    }
    let images: Vec<Vec<F>> = (0..d).map(|i| map.column(i)).collect();
    for (i, img) in images.iter().enumerate() {
        if codomain.homogeneous_parity(img, tol) != Some(domain.basis().parity(i)) {
            return Err(Error::ParityMixing(i));
        }
    }
    let rank = equilibrated_rank(map, tol);
    if rank < d {
        return Err(Error::SingularMap { rank, dim: d });
    }
    // (1-norm, max-norm) of every image
    let norms: Vec<(f64, f64)> = images
        .iter()
        .map(|v| {
            let m = v.iter().map(Scalar::magnitude);
            (m.clone().sum(), m.fold(0.0, f64::max))
        })
        .collect();
    let c_max = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .flat_map(|(i, j)| {
            codomain
                .product(i, j)
                .iter()
                .map(|(_, c)| c.magnitude())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    let mut violations = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut lhs = vec![F::zero(); d];
            for (k, c) in domain.product(i, j) {
                for (l, v) in images[*k].iter().enumerate() {
                    lhs[l] = lhs[l].clone() + c.clone() * v.clone();
                }
            }
            let rhs = codomain.bracket_unchecked(&images[i], &images[j]);
            // round-off in either side is bounded by the size of its terms
            let lhs_size: f64 = domain
                .product(i, j)
                .iter()
                .map(|(k, c)| c.magnitude() * norms[*k].1)
                .sum();
            let rhs_size = c_max * norms[i].0 * norms[j].0;
            let scale = if F::is_exact() {
                1.0
            } else {
                lhs_size.max(rhs_size)
            };
            let residual: Vec<F> = lhs.into_iter().zip(rhs).map(|(a, b)| a - b).collect();
            if residual.iter().any(|r| !r.is_zero(Tol(tol.0 * scale))) {
                violations.push(Violation {
                    indices: vec![i, j],
                    residual,
                });
            }
        }
    }
    Ok(IdentityReport {
        pass: violations.is_empty(),
        violations,
        satisfied_convention: None,
    })
}

/// Cheap invariants used to certify non-isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSummary {
    pub dims: (usize, usize),
    pub series_dims: Vec<usize>,
    pub nilindex: Option<usize>,
    pub annihilator_dim: usize,
    pub generators: (usize, Vec<Parity>),
    /// Present only for exact backends.
    pub char_sequence: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn invariant_summary<F: Scalar>(
    a: &SuperAlgebra<F>,
    samples: usize,
    seed: u64,
    tol: Tol,
) -> InvariantSummary {
    let series = central_series(a, default_cutoff(a), tol);
    let g = generator_info(a, tol);
    let char_sequence = if F::is_exact() && series.status == SeriesStatus::Nilpotent {
        characteristic_sequence(a, samples, seed)
            .ok()
            .map(|c| (c.independent.even_profile, c.independent.odd_profile))
    } else {
        None
    };
    InvariantSummary {
        dims: (a.basis().even_dim(), a.basis().odd_dim()),
        series_dims: series.dims,
        nilindex: series.nilindex,
        annihilator_dim: right_annihilator(a, tol).dim(),
        generators: (g.count, g.parities),
        char_sequence,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    /// Names of the invariants that differ.
    Distinguished(Vec<&'static str>),
    Inconclusive,
}

pub fn compare_summaries(a: &InvariantSummary, b: &InvariantSummary) -> Separation {
    let mut diff = Vec::new();
    if a.dims.0 != b.dims.0 {
        diff.push("even dimension");
    }
    if a.dims.1 != b.dims.1 {
        diff.push("odd dimension");
    }
    if a.nilindex != b.nilindex {
        diff.push("nilindex");
    }
    if a.series_dims != b.series_dims {
        diff.push("central series dimensions");
    }
    if a.annihilator_dim != b.annihilator_dim {
        diff.push("right annihilator dimension");
    }
    if a.generators != b.generators {
        diff.push("generators");
    }
    if let (Some(x), Some(y)) = (&a.char_sequence, &b.char_sequence) {
        if x != y {
            diff.push("characteristic sequence");
        }
    }
    if diff.is_empty() {
        Separation::Inconclusive
    } else {
        Separation::Distinguished(diff)
    }
}

/// Compare the coarse invariants of two algebras; any difference certifies
/// that they are not isomorphic.
pub fn invariant_separation<F: Scalar>(
    a: &SuperAlgebra<F>,
    b: &SuperAlgebra<F>,
    tol: Tol,
) -> Separation {
    compare_summaries(
        &invariant_summary(a, 16, 0, tol),
        &invariant_summary(b, 16, 0, tol),
    )
}

/// Outcome of checking one exponent rule for family B.
#[derive(Debug, Clone)]
pub struct ExponentTrial {
    pub exponent: BExponent,
    pub trials: usize,
    pub passes: usize,
}

/// For each exponent rule, push random parameters along random witnesses
/// with that rule and check the predicted target against the materialized
/// change of basis.
pub fn exponent_trials<R: Rng>(n: usize, trials: usize, rng: &mut R) -> Result<Vec<ExponentTrial>> {
    let tol = Tol::default();
    let mut cases = Vec::new();
    for _ in 0..trials {
        // dense parameters and |a1| ≠ 1 so that the rules can differ
        let p = FamilyParams::<Rational>::random(Family::B, n, rng, 0.0)?;
        let mut w = IsoWitness::<Rational>::random(Family::B, n, rng);
        while w.a1.magnitude() == 1.0 {
            w.a1 = crate::families::random_nonzero_rational(rng);
        }
        cases.push((p, w));
    }
    let mut out = Vec::new();
    for e in [BExponent::TwoJMinusThree, BExponent::TwoJMinusOne] {
        let mut passes = 0;
        for (p, w) in &cases {
            let source = p.build();
            let predicted = apply(w, p, e)?.build();
            let (map, _) = materialize_basis_change(&source, w, tol)?;
            if verify_isomorphism(&predicted, &source, &map, tol)?.pass {
                passes += 1;
            }
        }
        out.push(ExponentTrial {
            exponent: e,
            trials: cases.len(),
            passes,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
