//! Structural invariants: descending central series, right annihilator,
//! right multiplications and their Jordan profiles, characteristic
//! sequence and generator data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Parity, SuperAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, solve, Matrix, Subspace};
use crate::scalar::{Rational, Scalar, Tol};

/// How the central-series computation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStatus {
    /// Reached `L^s = 0`.
    Nilpotent,
    /// `L^{k+1} = L^k ≠ 0`: the algebra is not nilpotent.
    Stabilized { dim: usize },
    /// Ran out of steps before either of the above.
    CutoffReached,
}

#[derive(Debug, Clone)]
pub struct CentralSeries<F> {
    /// `L^1, L^2, …` as far as computed.
    pub terms: Vec<Subspace<F>>,
    pub dims: Vec<usize>,
    pub nilindex: Option<usize>,
    pub status: SeriesStatus,
}

/// `L^1 = L`, `L^{k+1} = [L^k, L]`, computed until it vanishes, stabilizes
/// or `cutoff` terms have been produced.
pub fn central_series<F: Scalar>(a: &SuperAlgebra<F>, cutoff: usize, tol: Tol) -> CentralSeries<F> {
    let d = a.dim();
    let mut terms = vec![Subspace::full(d)];
    let mut status = SeriesStatus::CutoffReached;
    loop {
        let last = terms.last().expect("series starts with L^1");
        if last.dim() == 0 {
            status = SeriesStatus::Nilpotent;
            break;
        }
        if terms.len() >= cutoff.max(1) {
            break;
        }
        let mut vectors = Vec::new();
        for u in last.basis() {
            for j in 0..d {
                vectors.push(a.bracket_unchecked(u, &a.unit(j)));
            }
        }
        let next = Subspace::span(d, vectors, tol);
        if next.dim() == last.dim() {
            status = SeriesStatus::Stabilized { dim: next.dim() };
            terms.push(next);
            break;
        }
        terms.push(next);
    }
    let dims: Vec<usize> = terms.iter().map(Subspace::dim).collect();
    let nilindex = (status == SeriesStatus::Nilpotent).then_some(terms.len());
    CentralSeries {
        terms,
        dims,
        nilindex,
        status,
    }
}

/// Default number of central-series steps: `dim + 2`.
pub fn default_cutoff<F: Scalar>(a: &SuperAlgebra<F>) -> usize {
    a.dim() + 2
}

/// Nilindex, or an error naming how the series failed to reach zero.
pub fn nilindex<F: Scalar>(a: &SuperAlgebra<F>, tol: Tol) -> Result<usize> {
    let s = central_series(a, default_cutoff(a), tol);
    s.nilindex.ok_or_else(|| {
        Error::NotNilpotent(match s.status {
            SeriesStatus::Stabilized { dim } => {
                format!("central series stabilizes at dimension {dim}")
            }
            _ => format!("no zero term within {} steps", s.dims.len()),
        })
    })
}

/// `{z : [L, z] = 0}`.
pub fn right_annihilator<F: Scalar>(a: &SuperAlgebra<F>, tol: Tol) -> Subspace<F> {
    let d = a.dim();
    // row (i,k), column j: c[i][j][k]
    let mut m = Matrix::zeros(d * d, d);
    for i in 0..d {
        for j in 0..d {
            for (k, v) in a.product(i, j) {
                m[(i * d + k, j)] = v.clone();
            }
        }
    }
    Subspace::span(d, nullspace(&m, tol), tol)
}

/// Whether every `[a,b] + (−1)^{|a||b|}[b,a]` over basis pairs lies in `ann`.
pub fn annihilator_contains_symmetrized<F: Scalar>(
    a: &SuperAlgebra<F>,
    ann: &Subspace<F>,
    tol: Tol,
) -> bool {
    let d = a.dim();
    (0..d).all(|i| {
        (i..d).all(|j| {
            let s = Parity::sign(a.basis().parity(i), a.basis().parity(j));
            let mut v = vec![F::zero(); d];
            for (k, c) in a.product(i, j) {
                v[*k] = v[*k].clone() + c.clone();
            }
            for (k, c) in a.product(j, i) {
                v[*k] = if s == 1 {
                    v[*k].clone() + c.clone()
                } else {
                    v[*k].clone() - c.clone()
                };
            }
            ann.contains(&v, tol)
        })
    })
}

/// Graded part on which a right multiplication acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Even,
    Odd,
    Both,
}

impl Part {
    fn indices<F: Scalar>(self, a: &SuperAlgebra<F>) -> Vec<usize> {
        match self {
            Part::Even => a.basis().indices(Parity::Even),
            Part::Odd => a.basis().indices(Parity::Odd),
            Part::Both => (0..a.dim()).collect(),
        }
    }
}

/// Matrix of `v ↦ [v, x]` on the requested part; column `c` holds the
/// image of the `c`-th basis vector of that part.
pub fn right_mult_matrix<F: Scalar>(a: &SuperAlgebra<F>, x: &[F], part: Part) -> Result<Matrix<F>> {
    let idx = part.indices(a);
    if idx.is_empty() {
        return Err(Error::InvalidInput(format!("{part:?} part is empty")));
    }
    let cols: Vec<Vec<F>> = idx
        .iter()
        .map(|&j| {
            let img = a.bracket(&a.unit(j), x)?;
            Ok(idx.iter().map(|&i| img[i].clone()).collect())
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(&cols))
}

/// Descending Jordan block sizes of a nilpotent operator.
pub type JordanProfile = Vec<usize>;

/// Block sizes from the rank sequence `r_k = rank(M^k)`: the number of
/// blocks of size at least `k` is `r_{k−1} − r_k`.
pub fn jordan_profile<F: Scalar>(m: &Matrix<F>) -> Result<JordanProfile> {
    if !F::is_exact() {
        return Err(Error::ExactRequired("Jordan profiles"));
    }
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            m.rows(),
            m.cols()
        )));
    }
    let d = m.rows();
    let tol = Tol::default();
    let mut ranks = vec![d];
    let mut power = Matrix::identity(d);
    while *ranks.last().unwrap() > 0 {
        if ranks.len() > d {
            return Err(Error::NotNilpotent(format!(
                "M^{d} has rank {}",
                ranks.last().unwrap()
            )));
        }
        power = power.mul(m);
        let r = power.rank(tol);
        if r == *ranks.last().unwrap() {
            return Err(Error::NotNilpotent(format!("rank sequence stalls at {r}")));
        }
        ranks.push(r);
    }
    // at_least[k-1] = number of blocks of size ≥ k
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut profile = Vec::new();
    for (k, &count) in at_least.iter().enumerate() {
        let bigger = at_least.get(k + 1).copied().unwrap_or(0);
        profile.extend(std::iter::repeat_n(k + 1, count - bigger));
    }
    profile.sort_unstable_by(|a, b| b.cmp(a));
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSequence<F> {
    pub even_profile: JordanProfile,
    pub odd_profile: JordanProfile,
    pub even_witness: Vec<F>,
    pub odd_witness: Vec<F>,
}

#[derive(Debug, Clone)]
pub struct CharSequenceReport<F> {
    /// Maxima taken independently for the even and odd parts.
    pub independent: CharSequence<F>,
    /// Lexicographic maximum of the pair at a single element.
    pub same_element: CharSequence<F>,
    pub candidates: usize,
}

impl<F: Scalar> CharSequenceReport<F> {
    pub fn readings_agree(&self) -> bool {
        self.independent.even_profile == self.same_element.even_profile
            && self.independent.odd_profile == self.same_element.odd_profile
    }
}

impl<F> CharSequence<F> {
    pub fn profiles(&self) -> (&[usize], &[usize]) {
        (&self.even_profile, &self.odd_profile)
    }
}

fn profile_on<F: Scalar>(a: &SuperAlgebra<F>, x: &[F], part: Part) -> Result<JordanProfile> {
    match right_mult_matrix(a, x, part) {
        Ok(m) => jordan_profile(&m),
        Err(Error::InvalidInput(_)) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// Characteristic sequence by maximization over the even basis vectors
/// outside `[L_0, L_0]` plus `samples` seeded random rational combinations.
pub fn characteristic_sequence<F: Scalar>(
    a: &SuperAlgebra<F>,
    samples: usize,
    seed: u64,
) -> Result<CharSequenceReport<F>> {
    if !F::is_exact() {
        return Err(Error::ExactRequired("characteristic sequences"));
    }
    let tol = Tol::default();
    let d = a.dim();
    let even = a.basis().indices(Parity::Even);
    let derived = Subspace::span(
        d,
        even.iter()
            .flat_map(|&i| even.iter().map(move |&j| (i, j)))
            .map(|(i, j)| {
                let mut v = vec![F::zero(); d];
                for (k, c) in a.product(i, j) {
                    v[*k] = c.clone();
                }
                v
            }),
        tol,
    );
    let mut candidates: Vec<Vec<F>> = even
        .iter()
        .map(|&i| a.unit(i))
        .filter(|v| !derived.contains(v, tol))
        .collect();
    if candidates.is_empty() {
        return Err(Error::InvalidInput(
            "L_0 = [L_0, L_0]: no even element outside the derived part".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    let mut drawn = 0;
    while drawn < samples && attempts < 20 * samples.max(1) {
        attempts += 1;
        let mut v = vec![F::zero(); d];
        for &i in &even {
            let num: i64 = rng.gen_range(-3..=3);
            let den: i64 = rng.gen_range(1..=3);
            v[i] = F::from_rational(&Rational::new(num.into(), den.into()));
        }
        if !derived.contains(&v, tol) {
            candidates.push(v);
            drawn += 1;
        }
    }
    let mut best_even: Option<(JordanProfile, usize)> = None;
    let mut best_odd: Option<(JordanProfile, usize)> = None;
    let mut best_pair: Option<((JordanProfile, JordanProfile), usize)> = None;
    for (idx, x) in candidates.iter().enumerate() {
        let c0 = profile_on(a, x, Part::Even)?;
        let c1 = profile_on(a, x, Part::Odd)?;
        if best_even.as_ref().is_none_or(|(b, _)| c0 > *b) {
            best_even = Some((c0.clone(), idx));
        }
        if best_odd.as_ref().is_none_or(|(b, _)| c1 > *b) {
            best_odd = Some((c1.clone(), idx));
        }
        let pair = (c0, c1);
        if best_pair.as_ref().is_none_or(|(b, _)| pair > *b) {
            best_pair = Some((pair, idx));
        }
    }
    let (even_profile, ei) = best_even.expect("at least one candidate");
    let (odd_profile, oi) = best_odd.expect("at least one candidate");
    let ((pe, po), pi) = best_pair.expect("at least one candidate");
    Ok(CharSequenceReport {
        independent: CharSequence {
            even_profile,
            odd_profile,
            even_witness: candidates[ei].clone(),
            odd_witness: candidates[oi].clone(),
        },
        same_element: CharSequence {
            even_profile: pe,
            odd_profile: po,
            even_witness: candidates[pi].clone(),
            odd_witness: candidates[pi].clone(),
        },
        candidates: candidates.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorInfo<F> {
    /// `dim(L / L²)`.
    pub count: usize,
    /// Parities of a homogeneous complement of `L²`, even first.
    pub parities: Vec<Parity>,
    /// Basis vectors spanning that complement.
    pub complement: Vec<Vec<F>>,
}

/// Minimal generator data read off from `L / L²`.
pub fn generator_info<F: Scalar>(a: &SuperAlgebra<F>, tol: Tol) -> GeneratorInfo<F> {
    let d = a.dim();
    let mut parities = Vec::new();
    let mut complement = Vec::new();
    for p in [Parity::Even, Parity::Odd] {
        // L² is spanned by homogeneous basis products, so its p-part is
        // spanned by the products of total parity p
        let products = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&(i, j)| a.basis().parity(i).add(a.basis().parity(j)) == p)
            .map(|(i, j)| {
                let mut v = vec![F::zero(); d];
                for (k, c) in a.product(i, j) {
                    v[*k] = c.clone();
                }
                v
            });
        let part = Subspace::span(d, products, tol);
        for i in a.basis().indices(p) {
            if !part.pivots().contains(&i) {
                parities.push(p);
                complement.push(a.unit(i));
            }
        }
    }
    GeneratorInfo {
        count: parities.len(),
        parities,
        complement,
    }
}

#[derive(Debug, Clone)]
pub struct ClosurePair<F> {
    pub left: usize,
    pub right: usize,
    pub in_span: bool,
    /// Coordinates of `⟨R_a, R_b⟩` in the family `R_{b_1}, …, R_{b_d}`.
    pub coordinates: Option<Vec<F>>,
    /// Whether `⟨R_a, R_b⟩ = +R_{[a,b]}` and whether it equals `−R_{[a,b]}`
    /// (both hold when the bracket vanishes).
    pub equals_plus: bool,
    pub equals_minus: bool,
}

#[derive(Debug, Clone)]
pub struct ClosureReport<F> {
    pub pass: bool,
    pub pairs: Vec<ClosurePair<F>>,
}

impl<F: Scalar> ClosureReport<F> {
    /// The sign `σ` with `⟨R_a,R_b⟩ = σ R_{[a,b]}` for pairs where it is
    /// determined, together with the pair's parities.
    pub fn observed_signs(&self, a: &SuperAlgebra<F>) -> Vec<(Parity, Parity, i8)> {
        self.pairs
            .iter()
            .filter(|p| p.equals_plus != p.equals_minus)
            .map(|p| {
                (
                    a.basis().parity(p.left),
                    a.basis().parity(p.right),
                    if p.equals_plus { 1 } else { -1 },
                )
            })
            .collect()
    }
}

/// Checks that the graded commutators `R_a R_b − (−1)^{|a||b|} R_b R_a` of
/// right multiplications by basis elements stay in `span{R_x}`.
pub fn right_mult_superalgebra_closure<F: Scalar>(a: &SuperAlgebra<F>) -> Result<ClosureReport<F>> {
    if !F::is_exact() {
        return Err(Error::ExactRequired("right-multiplication closure"));
    }
    let tol = Tol::default();
    let d = a.dim();
    let ops: Vec<Matrix<F>> = (0..d)
        .map(|i| right_mult_matrix(a, &a.unit(i), Part::Both))
        .collect::<Result<_>>()?;
    let flat = |m: &Matrix<F>| m.entries().to_vec();
    let span_matrix = Matrix::from_columns(&ops.iter().map(flat).collect::<Vec<_>>());
    let span = Subspace::span(d * d, ops.iter().map(flat), tol);
    let mut pairs = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let s = Parity::sign(a.basis().parity(i), a.basis().parity(j));
            let ab = ops[i].mul(&ops[j]);
            let ba = ops[j].mul(&ops[i]);
            let comm = if s == 1 { ab.sub(&ba) } else { ab.add(&ba) };
            let bracket = a.bracket_unchecked(&a.unit(i), &a.unit(j));
            let r_bracket = right_mult_matrix(a, &bracket, Part::Both)?;
            let equals_plus = comm.approx_eq(&r_bracket, tol);
            let equals_minus = comm.approx_eq(&r_bracket.scale(&-F::one()), tol);
            let in_span = span.contains(comm.entries(), tol);
            let coordinates = if equals_plus {
                Some(bracket)
            } else if equals_minus {
                Some(bracket.into_iter().map(|c| -c).collect())
            } else if in_span {
                solve(&span_matrix, comm.entries(), tol)
            } else {
                None
            };
            pairs.push(ClosurePair {
                left: i,
                right: j,
                in_span,
                coordinates,
                equals_plus,
                equals_minus,
            });
        }
    }
    Ok(ClosureReport {
        pass: pairs.iter().all(|p| p.in_span),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedBasis;
    use crate::scalar::parse_rational;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn shift(d: usize) -> Matrix<Rational> {
        let mut m = Matrix::zeros(d, d);
        for i in 0..d.saturating_sub(1) {
            m[(i + 1, i)] = q("1");
        }
        m
    }

    fn chain(d: usize) -> SuperAlgebra<Rational> {
        let entries = (0..d.saturating_sub(1)).map(|i| (i, 0, i + 1, q("1")));
        SuperAlgebra::from_entries(GradedBasis::chain(vec![Parity::Even; d]), entries).unwrap()
    }

    #[test]
    fn jordan_profiles_of_simple_operators() {
        assert_eq!(
            jordan_profile(&Matrix::<Rational>::zeros(3, 3)).unwrap(),
            vec![1, 1, 1]
        );
        assert_eq!(jordan_profile(&shift(4)).unwrap(), vec![4]);
        assert!(jordan_profile(&Matrix::<Rational>::identity(2)).is_err());
    }

    #[test]
    fn jordan_profile_of_block_sum() {
        let mut m = Matrix::<Rational>::zeros(6, 6);
        // blocks of sizes 3, 2, 1
        m[(1, 0)] = q("1");
        m[(2, 1)] = q("1");
        m[(4, 3)] = q("1");
        assert_eq!(jordan_profile(&m).unwrap(), vec![3, 2, 1]);
    }

    #[test]
    fn floating_backend_refuses_jordan_profiles() {
        let m = Matrix::<crate::scalar::Complex64>::zeros(2, 2);
        assert!(matches!(jordan_profile(&m), Err(Error::ExactRequired(_))));
    }

    #[test]
    fn chain_series_and_annihilator() {
        let a = chain(4);
        let s = central_series(&a, default_cutoff(&a), Tol::default());
        assert_eq!(s.dims, vec![4, 3, 2, 1, 0]);
        assert_eq!(s.nilindex, Some(5));
        let ann = right_annihilator(&a, Tol::default());
        assert_eq!(ann.dim(), 3);
        assert!(!ann.contains(&a.unit(0), Tol::default()));
        assert!(annihilator_contains_symmetrized(&a, &ann, Tol::default()));
    }

    #[test]
    fn zero_algebra_invariants() {
        let a = SuperAlgebra::<Rational>::zero(GradedBasis::standard(3, 2));
        let s = central_series(&a, 10, Tol::default());
        assert_eq!(s.dims, vec![5, 0]);
        assert_eq!(s.nilindex, Some(2));
        assert_eq!(right_annihilator(&a, Tol::default()).dim(), 5);
        let cs = characteristic_sequence(&a, 8, 0).unwrap();
        assert_eq!(cs.independent.even_profile, vec![1, 1, 1]);
        assert_eq!(cs.independent.odd_profile, vec![1, 1]);
        let g = generator_info(
            &SuperAlgebra::<Rational>::zero(GradedBasis::standard(1, 1)),
            Tol::default(),
        );
        assert_eq!(g.count, 2);
        assert_eq!(g.parities, vec![Parity::Even, Parity::Odd]);
    }

    #[test]
    fn non_nilpotent_series_stabilizes() {
        // [e1,e1] = e1
        let a =
            SuperAlgebra::from_entries(GradedBasis::chain(vec![Parity::Even]), [(0, 0, 0, q("1"))])
                .unwrap();
        let s = central_series(&a, 10, Tol::default());
        assert_eq!(s.status, SeriesStatus::Stabilized { dim: 1 });
        assert!(nilindex(&a, Tol::default()).is_err());
    }

    #[test]
    fn closure_on_chain() {
        let a = chain(3);
        let r = right_mult_superalgebra_closure(&a).unwrap();
        assert!(r.pass);
        let p = &r.pairs[0];
        assert!(p.equals_plus && p.equals_minus);
    }

    #[test]
    fn right_mult_matrix_part_errors() {
        let a = chain(3);
        assert!(right_mult_matrix(&a, &a.unit(0), Part::Odd).is_err());
        let m = right_mult_matrix(&a, &vec![q("0"); 3], Part::Even).unwrap();
        assert!(m.is_zero(Tol::default()));
    }

    proptest! {
        #[test]
        fn jordan_profile_is_similarity_invariant(
            blocks in proptest::collection::vec(1usize..4, 1..4),
            p in proptest::collection::vec(-3i64..=3, 100),
        ) {
            let d: usize = blocks.iter().sum();
            let mut m = Matrix::<Rational>::zeros(d, d);
            let mut start = 0;
            for b in &blocks {
                for i in start..start + b - 1 {
                    m[(i + 1, i)] = q("1");
                }
                start += b;
            }
            // unit lower triangular times upper triangular: always invertible
            let mut l = Matrix::<Rational>::identity(d);
            let mut u = Matrix::<Rational>::identity(d);
            let mut it = p.iter();
            for i in 0..d {
                for j in 0..i {
                    l[(i, j)] = Rational::from_i64(*it.next().unwrap_or(&1));
                    u[(j, i)] = Rational::from_i64(*it.next().unwrap_or(&0));
                }
            }
            let pm = l.mul(&u);
            let pinv = crate::linalg::inverse(&pm, Tol::default()).unwrap();
            let conj = pinv.mul(&m).mul(&pm);
            let mut expected = blocks.clone();
            expected.sort_unstable_by(|a, b| b.cmp(a));
            prop_assert_eq!(jordan_profile(&conj).unwrap(), expected);
        }
    }
}
