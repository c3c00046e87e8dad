//! Graded bases, structure-constant tensors and the identity checkers.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::scalar::{Scalar, ScalarKind, Tol};

/// Element of ℤ₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Option<Parity> {
        match bit {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(−1)^{αβ}`: negative only when both arguments are odd.
    pub fn sign(a: Parity, b: Parity) -> i64 {
        if a == Parity::Odd && b == Parity::Odd {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Ordered basis with a parity per vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    labels: Vec<String>,
    parity: Vec<Parity>,
}

impl GradedBasis {
    pub fn new(labels: Vec<String>, parity: Vec<Parity>) -> Result<Self> {
        if labels.len() != parity.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels but {} parities",
                labels.len(),
                parity.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::InvalidInput(format!(
                "duplicate basis label '{dup}'"
            )));
        }
        Ok(GradedBasis { labels, parity })
    }

    /// `x1..xn` even followed by `y1..ym` odd.
    pub fn standard(n: usize, m: usize) -> Self {
        let labels = (1..=n)
            .map(|i| format!("x{i}"))
            .chain((1..=m).map(|j| format!("y{j}")))
            .collect();
        let parity = std::iter::repeat_n(Parity::Even, n)
            .chain(std::iter::repeat_n(Parity::Odd, m))
            .collect();
        GradedBasis { labels, parity }
    }

    /// Labels `e1..ed` with the given parities.
    pub fn chain(parity: Vec<Parity>) -> Self {
        let labels = (1..=parity.len()).map(|i| format!("e{i}")).collect();
        GradedBasis { labels, parity }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn even_dim(&self) -> usize {
        self.parity.iter().filter(|&&p| p == Parity::Even).count()
    }

    pub fn odd_dim(&self) -> usize {
        self.dim() - self.even_dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn indices(&self, p: Parity) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == p).collect()
    }
}

/// Sign conventions the Leibniz checker knows about. The primary one takes
/// the sign from the parities of the second and third arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    SecondThird,
    FirstThird,
    FirstSecond,
    /// Plain (ungraded) Leibniz identity.
    Unsigned,
}

impl SignConvention {
    pub const ALL: [SignConvention; 4] = [
        SignConvention::SecondThird,
        SignConvention::FirstThird,
        SignConvention::FirstSecond,
        SignConvention::Unsigned,
    ];

    fn sign(self, a: Parity, b: Parity, c: Parity) -> i64 {
        match self {
            SignConvention::SecondThird => Parity::sign(b, c),
            SignConvention::FirstThird => Parity::sign(a, c),
            SignConvention::FirstSecond => Parity::sign(a, b),
            SignConvention::Unsigned => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignConvention::SecondThird => "second-third",
            SignConvention::FirstThird => "first-third",
            SignConvention::FirstSecond => "first-second",
            SignConvention::Unsigned => "unsigned",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Violation<F> {
    /// Basis indices of the offending tuple.
    pub indices: Vec<usize>,
    pub residual: Vec<F>,
}

#[derive(Debug, Clone)]
pub struct IdentityReport<F> {
    pub pass: bool,
    pub violations: Vec<Violation<F>>,
    /// Set by the Leibniz checker when the primary convention fails but
    /// another one holds.
    pub satisfied_convention: Option<SignConvention>,
}

impl<F: Scalar> IdentityReport<F> {
    fn from_violations(violations: Vec<Violation<F>>) -> Self {
        IdentityReport {
            pass: violations.is_empty(),
            violations,
            satisfied_convention: None,
        }
    }

    pub fn has_violation(&self, indices: &[usize]) -> bool {
        self.violations.iter().any(|v| v.indices == indices)
    }

    pub fn to_json(&self, basis: &GradedBasis) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(|v| {
                json!({
                    "indices": v.indices,
                    "labels": v.indices.iter().map(|&i| basis.label(i)).collect::<Vec<_>>(),
                    "residual": v.residual.iter().map(Scalar::to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut out = json!({ "pass": self.pass, "violations": violations });
        if let Some(c) = self.satisfied_convention {
            out["satisfied_convention"] = json!(c.name());
        }
        out
    }
}

type SparseVec<F> = Vec<(usize, F)>;

/// A finite-dimensional superalgebra given by its structure constants
/// `[b_i, b_j] = Σ_k c[i][j][k] b_k`.
#[derive(Debug, Clone)]
pub struct SuperAlgebra<F> {
    basis: GradedBasis,
    tensor: Vec<F>,
    /// Nonzero entries of each product `[b_i, b_j]`, indexed by `i*d + j`.
    products: Vec<SparseVec<F>>,
    kind: ScalarKind,
}

impl<F: Scalar> SuperAlgebra<F> {
    /// Build from a dense tensor laid out as `c[(i*d + j)*d + k]`.
    pub fn from_dense(basis: GradedBasis, tensor: Vec<F>) -> Result<Self> {
        let d = basis.dim();
        if tensor.len() != d * d * d {
            return Err(Error::DimensionMismatch(format!(
                "tensor has {} entries, expected {}",
                tensor.len(),
                d * d * d
            )));
        }
        let mut kind = F::base_kind();
        for v in tensor
            .iter()
            .filter(|v| !v.is_zero(Tol::default()) || !F::is_exact())
        {
            kind = kind.join(v.kind())?;
        }
        let tensor = match kind == F::base_kind() {
            true => tensor,
            false => tensor
                .iter()
                .map(|v| v.lift_to(kind))
                .collect::<Result<_>>()?,
        };
        let products = (0..d * d)
            .map(|ij| {
                (0..d)
                    .filter_map(|k| {
                        let v = &tensor[ij * d + k];
                        (!is_exact_zero(v)).then(|| (k, v.clone()))
                    })
                    .collect()
            })
            .collect();
        Ok(SuperAlgebra {
            basis,
            tensor,
            products,
            kind,
        })
    }

    /// Build from a list of `(i, j, k, value)` entries; repeated entries add.
    pub fn from_entries(
        basis: GradedBasis,
        entries: impl IntoIterator<Item = (usize, usize, usize, F)>,
    ) -> Result<Self> {
        let d = basis.dim();
        let mut tensor = vec![F::zero(); d * d * d];
        for (i, j, k, v) in entries {
            if i >= d || j >= d || k >= d {
                return Err(Error::DimensionMismatch(format!(
                    "index ({i},{j},{k}) outside dimension {d}"
                )));
            }
            let slot = &mut tensor[(i * d + j) * d + k];
            *slot = slot.clone() + v;
        }
        Self::from_dense(basis, tensor)
    }

    pub fn zero(basis: GradedBasis) -> Self {
        Self::from_entries(basis, std::iter::empty()).expect("zero tensor is well formed")
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &F {
        let d = self.dim();
        &self.tensor[(i * d + j) * d + k]
    }

    pub fn tensor(&self) -> &[F] {
        &self.tensor
    }

    /// Nonzero coefficients of `[b_i, b_j]`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, F)] {
        &self.products[i * self.dim() + j]
    }

    /// Copy with one structure constant overwritten.
    pub fn with_entry(&self, i: usize, j: usize, k: usize, value: F) -> Result<Self> {
        let d = self.dim();
        if i >= d || j >= d || k >= d {
            return Err(Error::DimensionMismatch(format!(
                "index ({i},{j},{k}) outside dimension {d}"
            )));
        }
        let mut tensor = self.tensor.clone();
        tensor[(i * d + j) * d + k] = value;
        Self::from_dense(self.basis.clone(), tensor)
    }

    pub fn unit(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    fn check_vector(&self, v: &[F]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in dimension {}",
                v.len(),
                self.dim()
            )));
        }
        for x in v.iter().filter(|x| !is_exact_zero(*x)) {
            let joined = self.kind.join(x.kind())?;
            if joined != self.kind && F::base_kind() != x.kind() {
                return Err(Error::BackendMismatch(format!(
                    "vector entry in {} but algebra is over {}",
                    x.kind(),
                    self.kind
                )));
            }
        }
        Ok(())
    }

    /// Bilinear extension of the structure tensor.
    pub fn bracket(&self, u: &[F], v: &[F]) -> Result<Vec<F>> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &[F], v: &[F]) -> Vec<F> {
        let d = self.dim();
        let mut out = vec![F::zero(); d];
        for (i, ui) in u.iter().enumerate() {
            if is_exact_zero(ui) {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if is_exact_zero(vj) {
                    continue;
                }
                let prod = &self.products[i * d + j];
                if prod.is_empty() {
                    continue;
                }
                let s = ui.clone() * vj.clone();
                for (k, c) in prod {
                    out[*k] = out[*k].clone() + s.clone() * c.clone();
                }
            }
        }
        out
    }

    /// `[b_i, w]` for a sparse `w`.
    fn bracket_basis_left(&self, i: usize, w: &[(usize, F)]) -> SparseVec<F> {
        let d = self.dim();
        let mut dense: Vec<Option<F>> = vec![None; d];
        for (j, wj) in w {
            for (k, c) in &self.products[i * d + j] {
                let term = wj.clone() * c.clone();
                dense[*k] = Some(match dense[*k].take() {
                    Some(acc) => acc + term,
                    None => term,
                });
            }
        }
        collect_sparse(dense)
    }

    /// `[w, b_j]` for a sparse `w`.
    fn bracket_basis_right(&self, w: &[(usize, F)], j: usize) -> SparseVec<F> {
        let d = self.dim();
        let mut dense: Vec<Option<F>> = vec![None; d];
        for (i, wi) in w {
            for (k, c) in &self.products[i * d + j] {
                let term = wi.clone() * c.clone();
                dense[*k] = Some(match dense[*k].take() {
                    Some(acc) => acc + term,
                    None => term,
                });
            }
        }
        collect_sparse(dense)
    }

    /// Parity of `v` if it is homogeneous and nonzero.
    pub fn homogeneous_parity(&self, v: &[F], tol: Tol) -> Option<Parity> {
        // floating vectors are judged relative to their largest entry
        let tol = if F::is_exact() {
            tol
        } else {
            Tol(tol.0 * v.iter().map(Scalar::magnitude).fold(0.0, f64::max))
        };
        let mut found = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero(tol) {
                continue;
            }
            let p = self.basis.parity(i);
            match found {
                None => found = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        found
    }

    /// Every nonzero `c[i][j][k]` must satisfy `|k| = |i| + |j|`.
    pub fn check_grading(&self) -> IdentityReport<F> {
        let d = self.dim();
        let mut violations = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let expected = self.basis.parity(i).add(self.basis.parity(j));
                for (k, v) in self.product(i, j) {
                    if self.basis.parity(*k) != expected {
                        let mut residual = vec![F::zero(); d];
                        residual[*k] = v.clone();
                        violations.push(Violation {
                            indices: vec![i, j, *k],
                            residual,
                        });
                    }
                }
            }
        }
        IdentityReport::from_violations(violations)
    }

    fn leibniz_violations(
        &self,
        convention: SignConvention,
        tol: Tol,
        stop_at_first: bool,
    ) -> Vec<Violation<F>> {
        let d = self.dim();
        let mut violations = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let ab = self.product(a, b);
                for c in 0..d {
                    let bc = self.product(b, c);
                    let lhs = self.bracket_basis_left(a, bc);
                    let r1 = self.bracket_basis_right(ab, c);
                    let ac = self.product(a, c);
                    let r2 = self.bracket_basis_right(ac, b);
                    if lhs.is_empty() && r1.is_empty() && r2.is_empty() {
                        continue;
                    }
                    let p = self.basis.parities();
                    let sign = convention.sign(p[a], p[b], p[c]);
                    // lhs − r1 + sign·r2
                    let mut residual = vec![F::zero(); d];
                    for (k, v) in lhs {
                        residual[k] = residual[k].clone() + v;
                    }
                    for (k, v) in r1 {
                        residual[k] = residual[k].clone() - v;
                    }
                    for (k, v) in r2 {
                        residual[k] = match sign {
                            1 => residual[k].clone() + v,
                            _ => residual[k].clone() - v,
                        };
                    }
                    if residual.iter().any(|r| !r.is_zero(tol)) {
                        violations.push(Violation {
                            indices: vec![a, b, c],
                            residual,
                        });
                        if stop_at_first {
                            return violations;
                        }
                    }
                }
            }
        }
        violations
    }

    /// `[x,[y,z]] = [[x,y],z] − (−1)^{|y||z|}[[x,z],y]` on all basis triples.
    ///
    /// On failure the report also names the first alternative sign
    /// convention (if any) under which the tensor is a Leibniz superalgebra.
    pub fn check_graded_leibniz(&self, tol: Tol) -> IdentityReport<F> {
        let violations = self.leibniz_violations(SignConvention::SecondThird, tol, false);
        let mut report = IdentityReport::from_violations(violations);
        if !report.pass {
            report.satisfied_convention = SignConvention::ALL[1..]
                .iter()
                .copied()
                .find(|&c| self.leibniz_violations(c, tol, true).is_empty());
        }
        report
    }

    /// `[x,y] = −(−1)^{|x||y|}[y,x]` on all basis pairs.
    pub fn check_graded_antisymmetry(&self, tol: Tol) -> IdentityReport<F> {
        let d = self.dim();
        let mut violations = Vec::new();
        for i in 0..d {
            for j in i..d {
                let sign = Parity::sign(self.basis.parity(i), self.basis.parity(j));
                let mut residual = vec![F::zero(); d];
                for (k, v) in self.product(i, j) {
                    residual[*k] = residual[*k].clone() + v.clone();
                }
                for (k, v) in self.product(j, i) {
                    residual[*k] = match sign {
                        1 => residual[*k].clone() + v.clone(),
                        _ => residual[*k].clone() - v.clone(),
                    };
                }
                if residual.iter().any(|r| !r.is_zero(tol)) {
                    violations.push(Violation {
                        indices: vec![i, j],
                        residual,
                    });
                }
            }
        }
        IdentityReport::from_violations(violations)
    }

    /// Graded Jacobi identity in cyclic form:
    /// `(−1)^{|x||z|}[x,[y,z]] + (−1)^{|y||x|}[y,[z,x]] + (−1)^{|z||y|}[z,[x,y]] = 0`.
    pub fn check_graded_jacobi(&self, tol: Tol) -> IdentityReport<F> {
        let d = self.dim();
        let p = self.basis.parities();
        let mut violations = Vec::new();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let mut residual = vec![F::zero(); d];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let sign = Parity::sign(p[x], p[z]);
                        for (k, v) in self.bracket_basis_left(x, self.product(y, z)) {
                            residual[k] = match sign {
                                1 => residual[k].clone() + v,
                                _ => residual[k].clone() - v,
                            };
                        }
                    }
                    if residual.iter().any(|r| !r.is_zero(tol)) {
                        violations.push(Violation {
                            indices: vec![a, b, c],
                            residual,
                        });
                    }
                }
            }
        }
        IdentityReport::from_violations(violations)
    }

    /// Smallest bracket-closed subspace containing `gens`.
    pub fn subalgebra_generated(&self, gens: &[Vec<F>], tol: Tol) -> Result<Subspace<F>> {
        for g in gens {
            self.check_vector(g)?;
        }
        let d = self.dim();
        let mut span = Subspace::span(d, gens.iter().cloned(), tol);
        loop {
            let basis = span.basis().to_vec();
            let mut vectors = basis.clone();
            for u in &basis {
                for v in &basis {
                    vectors.push(self.bracket_unchecked(u, v));
                }
            }
            let next = Subspace::span(d, vectors, tol);
            if next.dim() == span.dim() {
                return Ok(span);
            }
            span = next;
        }
    }

    /// The algebra structure induced on a graded, bracket-closed subspace.
    /// Even basis vectors come first in the result.
    pub fn restrict(&self, sub: &Subspace<F>, tol: Tol) -> Result<SuperAlgebra<F>> {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (idx, v) in sub.basis().iter().enumerate() {
            match self.homogeneous_parity(v, tol) {
                Some(Parity::Even) => even.push(idx),
                Some(Parity::Odd) => odd.push(idx),
                None => return Err(Error::InvalidInput("subspace is not graded".into())),
            }
        }
        let order: Vec<usize> = even.iter().chain(&odd).copied().collect();
        let basis = GradedBasis::standard(even.len(), odd.len());
        let vecs: Vec<&Vec<F>> = order.iter().map(|&i| &sub.basis()[i]).collect();
        let mut entries = Vec::new();
        for (i, u) in vecs.iter().enumerate() {
            for (j, v) in vecs.iter().enumerate() {
                let w = self.bracket_unchecked(u, v);
                let coords = sub.coordinates(&w, tol).ok_or_else(|| {
                    Error::InvalidInput("subspace is not closed under the bracket".into())
                })?;
                for (pos, c) in coords.into_iter().enumerate() {
                    if !c.is_zero(tol) {
                        let k = order
                            .iter()
                            .position(|&o| o == pos)
                            .expect("every pivot row is ordered");
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        SuperAlgebra::from_entries(basis, entries)
    }
}

fn is_exact_zero<F: Scalar>(v: &F) -> bool {
    // skip work only on true zeros; floating near-zeros still propagate
    v.is_zero(Tol(0.0))
}

fn collect_sparse<F: Scalar>(dense: Vec<Option<F>>) -> SparseVec<F> {
    dense
        .into_iter()
        .enumerate()
        .filter_map(|(k, v)| v.filter(|v| !is_exact_zero(v)).map(|v| (k, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    /// The one-dimensional odd algebra with `[y,y] = 0` plus an even `x`
    /// with `[y,y] = x`: a two-dimensional Leibniz superalgebra.
    fn tiny() -> SuperAlgebra<Rational> {
        SuperAlgebra::from_entries(GradedBasis::standard(1, 1), [(1, 1, 0, q("1"))]).unwrap()
    }

    #[test]
    fn parity_arithmetic() {
        assert_eq!(Parity::Odd.add(Parity::Odd), Parity::Even);
        assert_eq!(Parity::Odd.add(Parity::Even), Parity::Odd);
        assert_eq!(Parity::sign(Parity::Odd, Parity::Odd), -1);
        assert_eq!(Parity::sign(Parity::Odd, Parity::Even), 1);
    }

    #[test]
    fn basis_rejects_duplicates() {
        let r = GradedBasis::new(
            vec!["a".into(), "a".into()],
            vec![Parity::Even, Parity::Odd],
        );
        assert!(r.is_err());
        let b = GradedBasis::standard(2, 3);
        assert_eq!((b.even_dim(), b.odd_dim()), (2, 3));
        assert_eq!(b.label(2), "y1");
    }

    #[test]
    fn zero_tensor_passes_everything() {
        let a = SuperAlgebra::<Rational>::zero(GradedBasis::standard(2, 2));
        let t = Tol::default();
        assert!(a.check_grading().pass);
        assert!(a.check_graded_leibniz(t).pass);
        assert!(a.check_graded_antisymmetry(t).pass);
        assert!(a.check_graded_jacobi(t).pass);
        let z = a.bracket(&vec![q("0"); 4], &a.unit(2)).unwrap();
        assert!(z.iter().all(|x| x.is_zero(t)));
    }

    #[test]
    fn grading_violation_is_located() {
        let a =
            SuperAlgebra::from_entries(GradedBasis::standard(1, 1), [(0, 0, 1, q("1"))]).unwrap();
        let r = a.check_grading();
        assert!(!r.pass);
        assert!(r.has_violation(&[0, 0, 1]));
    }

    #[test]
    fn odd_square_is_leibniz_not_lie() {
        let a = tiny();
        assert!(a.check_graded_leibniz(Tol::default()).pass);
        // [y,y] = x is graded-antisymmetric: (−1)^{1·1} flips the sign
        assert!(a.check_graded_antisymmetry(Tol::default()).pass);
        assert!(a.check_graded_jacobi(Tol::default()).pass);
    }

    #[test]
    fn alternative_convention_is_reported() {
        // a odd, b even, c odd with [a,a] = b, [b,a] = c: the triple (a,a,a)
        // balances only without the sign.
        let parity = vec![Parity::Odd, Parity::Even, Parity::Odd];
        let a = SuperAlgebra::from_entries(
            GradedBasis::chain(parity),
            [(0, 0, 1, q("1")), (1, 0, 2, q("1"))],
        )
        .unwrap();
        let r = a.check_graded_leibniz(Tol::default());
        assert!(!r.pass);
        assert!(r.has_violation(&[0, 0, 0]));
        assert_eq!(r.satisfied_convention, Some(SignConvention::Unsigned));
    }

    #[test]
    fn restriction_of_whole_space_is_isomorphic_copy() {
        let a = tiny();
        let s = a
            .subalgebra_generated(&[a.unit(1)], Tol::default())
            .unwrap();
        assert_eq!(s.dim(), 2);
        let r = a.restrict(&s, Tol::default()).unwrap();
        assert_eq!(r.product(1, 1), &[(0, q("1"))]);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let a = tiny();
        assert!(a.bracket(&[q("1")], &a.unit(0)).is_err());
    }

    proptest! {
        #[test]
        fn bracket_is_bilinear(
            s in -5i64..5, t in -5i64..5,
            u in proptest::collection::vec(-3i64..3, 3),
            v in proptest::collection::vec(-3i64..3, 3),
            w in proptest::collection::vec(-3i64..3, 3),
            c in proptest::collection::vec(-2i64..2, 27),
        ) {
            let basis = GradedBasis::standard(3, 0);
            let entries = c.iter().enumerate().map(|(idx, &x)| (idx / 9, (idx / 3) % 3, idx % 3, Rational::from_i64(x)));
            let a = SuperAlgebra::from_entries(basis, entries).unwrap();
            let r = |x: &Vec<i64>| x.iter().map(|&e| Rational::from_i64(e)).collect::<Vec<_>>();
            let (u, v, w) = (r(&u), r(&v), r(&w));
            let (s, t) = (Rational::from_i64(s), Rational::from_i64(t));
            let comb: Vec<Rational> = u.iter().zip(&w).map(|(x, y)| &s * x + &t * y).collect();
            let lhs = a.bracket(&comb, &v).unwrap();
            let bu = a.bracket(&u, &v).unwrap();
            let bw = a.bracket(&w, &v).unwrap();
            let rhs: Vec<Rational> = bu.iter().zip(&bw).map(|(x, y)| &s * x + &t * y).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
