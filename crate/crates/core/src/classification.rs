//! Canonical forms for families A and B.
//!
//! A parameter vector is laid out as in [`FamilyParams::to_vector`]:
//! `(γ, β_{t₀}, …, β_n, β)` for family A and `(β_{s₀}, …, β_{n+1})` for
//! family B. The scaling action of an isomorphism multiplies each entry by a
//! monomial in `a₁` and `b` (plus an affine shift of `β` through `a_{n+1}`),
//! so every orbit can be pushed onto a normal form where a few entries are
//! fixed to 0 or 1. What remains is a finite root-of-unity ambiguity, which
//! [`canonicalize`] resolves by a deterministic tie-break.

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::families::{s0, Family, FamilyParams};
use crate::isomorphism::{
    apply, basis_change_matrix, iso_solvable, verify_isomorphism, BExponent, IsoConditionSystem,
    IsoWitness,
};
use crate::scalar::{Rational, Scalar, Tol};

/// `S_{m,t} = exp(2πi m/t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    pub m: u64,
    pub t: u64,
}

impl RootOfUnity {
    pub fn new(m: u64, t: u64) -> Result<Self> {
        if t == 0 || m >= t {
            return Err(Error::InvalidInput(format!(
                "root of unity needs 0 <= m < t, got m={m}, t={t}"
            )));
        }
        Ok(RootOfUnity { m, t })
    }

    pub fn value<F: Scalar>(&self) -> Result<F> {
        root_of_unity(self.m, self.t)
    }

    /// `S_{m,t}^e` without leaving the group.
    pub fn pow(&self, e: u64) -> RootOfUnity {
        RootOfUnity {
            m: (self.m * (e % self.t)) % self.t,
            t: self.t,
        }
    }
}

fn root_of_unity<F: Scalar>(m: u64, t: u64) -> Result<F> {
    F::root_of_unity(m, t).ok_or_else(|| {
        Error::NeedsExtension(format!(
            "S_{{{m},{t}}} is not representable in the {} backend",
            F::base_kind()
        ))
    })
}

fn nth_root<F: Scalar>(x: &F, k: u32) -> Result<F> {
    x.nth_root(k).ok_or_else(|| {
        Error::NeedsExtension(format!(
            "{k}-th root of {x} is not representable in the {} backend",
            F::base_kind()
        ))
    })
}

/// All `k`-th roots of `x`.
fn all_roots<F: Scalar>(x: &F, k: usize) -> Result<Vec<F>> {
    let r = nth_root(x, k as u32)?;
    (0..k as u64)
        .map(|m| Ok(r.clone() * root_of_unity::<F>(m, k as u64)?))
        .collect()
}

fn inv<F: Scalar>(x: &F) -> F {
    x.inv().expect("nonzero by construction")
}

fn pow<F: Scalar>(x: &F, e: i64) -> F {
    x.powi(e).expect("nonzero by construction")
}

/// Which normalization operator a printed representative uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VKind {
    /// `V⁰`: carries the sign `δ` and the roots `(δ^i)^{1/j}`.
    Zero,
    /// `V¹`: entries scaled by `S_{m,j}^i`.
    One,
    /// `V²`: entries scaled by `S_{m,2j+1}^{2i+1}`.
    Two,
}

impl TryFrom<u8> for VKind {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        match k {
            0 => Ok(VKind::Zero),
            1 => Ok(VKind::One),
            2 => Ok(VKind::Two),
            _ => Err(Error::InvalidInput(format!(
                "operator kind must be 0, 1 or 2, got {k}"
            ))),
        }
    }
}

/// The printed operator `V^kind_{j,k}(α₁, …, α_k)` with root index `m` and
/// sign `δ` (used by `V⁰` only). Positions are 1-based as printed.
pub fn v_operator<F: Scalar>(
    kind: VKind,
    j: usize,
    k: usize,
    alpha: &[F],
    m: u64,
    delta: i8,
) -> Result<Vec<F>> {
    if alpha.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "expected {k} entries, got {}",
            alpha.len()
        )));
    }
    if j == 0 || j > k + 1 {
        return Err(Error::InvalidInput(format!(
            "index j={j} outside 1..={}",
            k + 1
        )));
    }
    if delta != 1 && delta != -1 {
        return Err(Error::InvalidInput(format!(
            "delta must be 1 or -1, got {delta}"
        )));
    }
    let mut out = vec![F::zero(); k];
    if j == k + 1 {
        return Ok(out);
    }
    let order = match kind {
        VKind::Two => 2 * j as u64 + 1,
        _ => j as u64,
    };
    let s = RootOfUnity::new(m, order)?;
    out[j - 1] = F::one();
    for i in j + 1..=k {
        let factor = match kind {
            VKind::One => s.pow(i as u64).value::<F>()?,
            VKind::Two => s.pow(2 * i as u64 + 1).value::<F>()?,
            VKind::Zero => {
                let d = F::from_i64(delta as i64);
                let droot = nth_root(&pow(&d, i as i64), j as u32)?;
                d * droot * s.pow(i as u64).value::<F>()?
            }
        };
        out[i - 1] = factor * alpha[i - 1].clone();
    }
    Ok(out)
}

/// The printed operator `W_{s,k}`: keeps the leading 1 at position `j`,
/// puts a second 1 at `s+j`, zeros in between, and rescales the tail.
pub fn w_operator<F: Scalar>(s: usize, k: usize, v: &[F], m: u64, tol: Tol) -> Result<Vec<F>> {
    if v.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "expected {k} entries, got {}",
            v.len()
        )));
    }
    let j = v
        .iter()
        .position(|x| !x.is_zero(tol))
        .ok_or_else(|| Error::InvalidInput("W needs a vector with a leading 1".into()))?
        + 1;
    if !v[j - 1].approx_eq(&F::one(), tol) {
        return Err(Error::InvalidInput(format!(
            "leading entry at position {j} is {}, not 1",
            v[j - 1]
        )));
    }
    if s == k + 1 - j {
        return Ok(v.to_vec());
    }
    if s == 0 || s > k - j {
        return Err(Error::InvalidInput(format!(
            "shift s={s} outside 1..={}",
            k + 1 - j
        )));
    }
    let root = RootOfUnity::new(m, j as u64)?;
    let mut out = vec![F::zero(); k];
    out[j - 1] = F::one();
    out[s + j - 1] = F::one();
    for t in 1..=k - s - j {
        out[s + j + t - 1] = root.pow((j + t) as u64).value::<F>()? * v[s + j + t - 1].clone();
    }
    Ok(out)
}

/// Proof case a representative belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// Odd n: `γ ≠ 0`, `γ ≠ 4β²_{q+1}`.
    OddGeneric,
    /// Odd n: `γ = 4β²_{q+1} ≠ 0`.
    OddCritical,
    /// Odd n: `γ = 0`, `β_{q+1} ≠ 0`.
    OddLead,
    /// Odd n: `γ = β_{q+1} = 0`, something else nonzero.
    OddTail,
    OddZero,
    /// Even n: `γ ≠ 0`.
    EvenGamma,
    /// Even n: `γ = 0`, something nonzero.
    EvenTail,
    EvenZero,
    BTail,
    BZero,
}

impl CaseLabel {
    pub fn label(self) -> &'static str {
        match self {
            CaseLabel::OddGeneric => "1.1",
            CaseLabel::OddCritical => "1.2",
            CaseLabel::OddLead => "2.1",
            CaseLabel::OddTail => "2.2.1",
            CaseLabel::OddZero => "2.2.2",
            CaseLabel::EvenGamma => "1",
            CaseLabel::EvenTail => "2",
            CaseLabel::EvenZero => "zero",
            CaseLabel::BTail => "1",
            CaseLabel::BZero => "zero",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Constraint on one coordinate of a representative.
#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    Fixed(Rational),
    Free,
    /// Free except for the listed values.
    FreeExcept(Vec<Rational>),
}

impl Slot {
    fn zero() -> Self {
        Slot::Fixed(Rational::from_integer(0.into()))
    }

    fn one() -> Self {
        Slot::Fixed(Rational::from_integer(1.into()))
    }

    pub fn admits<F: Scalar>(&self, x: &F, tol: Tol) -> bool {
        match self {
            Slot::Fixed(c) => x.approx_eq(&F::from_rational(c), tol),
            Slot::Free => true,
            Slot::FreeExcept(bad) => bad.iter().all(|c| !x.approx_eq(&F::from_rational(c), tol)),
        }
    }

    pub fn is_free(&self) -> bool {
        !matches!(self, Slot::Fixed(_))
    }

    fn to_json(&self) -> Value {
        match self {
            Slot::Fixed(c) => json!({ "fixed": c.to_string() }),
            Slot::Free => json!("free"),
            Slot::FreeExcept(bad) => {
                json!({ "free_except": bad.iter().map(|c| c.to_string()).collect::<Vec<_>>() })
            }
        }
    }
}

/// The finite group `μ_order` left acting on a representative: a generator
/// `ζ` multiplies slot `i` by `ζ^e` for every `(i, e)` in `weights`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguityGroup {
    pub order: usize,
    pub weights: Vec<(usize, usize)>,
}

impl AmbiguityGroup {
    fn trivial() -> Self {
        AmbiguityGroup {
            order: 1,
            weights: Vec::new(),
        }
    }

    fn new(order: usize, weights: Vec<(usize, usize)>) -> Self {
        let weights: Vec<_> = weights.into_iter().map(|(i, e)| (i, e % order)).collect();
        if order <= 1 {
            AmbiguityGroup::trivial()
        } else {
            AmbiguityGroup { order, weights }
        }
    }

    /// Whether some group element carries `a` to `b`.
    pub fn relates<F: Scalar>(&self, a: &[F], b: &[F], tol: Tol) -> Result<bool> {
        for m in 0..self.order as u64 {
            let mut ok = a.len() == b.len();
            let mut moved = a.to_vec();
            for &(i, e) in &self.weights {
                moved[i] = moved[i].clone()
                    * root_of_unity::<F>((m * e as u64) % self.order as u64, self.order as u64)?;
            }
            ok &= moved.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol));
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// One row of a canonical list: which entries are pinned, which are free,
/// and which finite group still acts on the free ones.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalDescriptor {
    pub family: Family,
    pub n: usize,
    pub case: CaseLabel,
    /// 1-based position of the descriptor's group in the printed list.
    pub group: usize,
    /// Position of the first normalized entry inside the group's tail.
    pub lead: Option<usize>,
    /// Gap to the second normalized entry (two-parameter tails only).
    pub shift: Option<usize>,
    pub slots: Vec<Slot>,
    pub ambiguity: AmbiguityGroup,
}

impl CanonicalDescriptor {
    pub fn name(&self) -> String {
        let mut s = format!("{}{}/{}", self.family, self.n, self.case);
        if let Some(j) = self.lead {
            s += &format!("/j={j}");
        }
        if let Some(t) = self.shift {
            s += &format!("/s={t}");
        }
        s
    }

    pub fn matches<F: Scalar>(&self, v: &[F], tol: Tol) -> bool {
        v.len() == self.slots.len() && self.slots.iter().zip(v).all(|(s, x)| s.admits(x, tol))
    }

    pub fn free_slots(&self) -> Vec<usize> {
        (0..self.slots.len())
            .filter(|&i| self.slots[i].is_free())
            .collect()
    }

    fn same_row(&self, other: &CanonicalDescriptor) -> bool {
        self.family == other.family
            && self.n == other.n
            && self.case == other.case
            && self.lead == other.lead
            && self.shift == other.shift
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name(),
            "family": self.family.to_string(),
            "n": self.n,
            "n_parity": if self.n % 2 == 1 { "odd" } else { "even" },
            "case": self.case.label(),
            "group": self.group,
            "lead": self.lead,
            "shift": self.shift,
            "slots": self.slots.iter().map(Slot::to_json).collect::<Vec<_>>(),
            "ambiguity": { "order": self.ambiguity.order, "weights": self.ambiguity.weights },
        })
    }
}

/// Descriptors of one printed row, e.g. all `(j, s)` of a `W∘V¹` family.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorGroup {
    pub index: usize,
    pub case: CaseLabel,
    pub descriptors: Vec<CanonicalDescriptor>,
}

/// Shape of a family's parameter vector, in slot indices.
struct Layout {
    len: usize,
    /// Odd n: index of `β_{q+1}`.
    lead: usize,
    /// Slots of the one-parameter tail (`β_{q+2..n}` for odd n,
    /// `β_{q+2..2q}` for even n).
    tail: Vec<usize>,
    /// Slot of `β`.
    last: usize,
}

fn layout(family: Family, n: usize) -> Layout {
    let len = family.param_len(n);
    match family {
        Family::A if n % 2 == 1 => Layout {
            len,
            lead: 1,
            tail: (2..len - 1).collect(),
            last: len - 1,
        },
        Family::A => Layout {
            len,
            lead: 0,
            tail: (1..len - 1).collect(),
            last: len - 1,
        },
        Family::B => Layout {
            len,
            lead: 0,
            tail: (0..len).collect(),
            last: len - 1,
        },
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < crate::families::MIN_N {
        return Err(Error::InvalidInput(format!(
            "n must be at least {}, got {n}",
            crate::families::MIN_N
        )));
    }
    Ok(())
}

struct RowBuilder {
    family: Family,
    n: usize,
    len: usize,
}

impl RowBuilder {
    fn row(
        &self,
        case: CaseLabel,
        group: usize,
        lead: Option<usize>,
        shift: Option<usize>,
        slots: Vec<Slot>,
        ambiguity: AmbiguityGroup,
    ) -> CanonicalDescriptor {
        debug_assert_eq!(slots.len(), self.len);
        CanonicalDescriptor {
            family: self.family,
            n: self.n,
            case,
            group,
            lead,
            shift,
            slots,
            ambiguity,
        }
    }

    fn base(&self) -> Vec<Slot> {
        vec![Slot::zero(); self.len]
    }
}

/// Slot pattern of a one-parameter tail normalized at position `j`
/// (1-based), `j = len+1` meaning all zero.
fn one_param_tail(slots: &mut [Slot], tail: &[usize], j: usize) {
    for (p, &i) in tail.iter().enumerate() {
        let p = p + 1;
        slots[i] = match p.cmp(&j) {
            Ordering::Less => Slot::zero(),
            Ordering::Equal => Slot::one(),
            Ordering::Greater => Slot::Free,
        };
    }
}

/// Rows of a two-parameter tail `w_p ↦ λ u^p w_p`.
fn two_param_rows(
    rb: &RowBuilder,
    case: CaseLabel,
    group: usize,
    prefix: &[Slot],
    tail: &[usize],
) -> Vec<CanonicalDescriptor> {
    let k = tail.len();
    let mut rows = Vec::new();
    for j in 1..=k {
        for s in 1..=k + 1 - j {
            let mut slots = prefix.to_vec();
            let mut weights = Vec::new();
            for (p, &i) in tail.iter().enumerate() {
                let p = p + 1;
                slots[i] = if p == j || p == j + s {
                    Slot::one()
                } else if p > j + s {
                    weights.push((i, p - j));
                    Slot::Free
                } else {
                    Slot::zero()
                };
            }
            let ambiguity = if j + s <= k {
                AmbiguityGroup::new(s, weights)
            } else {
                AmbiguityGroup::trivial()
            };
            rows.push(rb.row(case, group, Some(j), Some(s), slots, ambiguity));
        }
    }
    rows
}

/// The full descriptor list for `(family, n)`, grouped as printed.
pub fn enumerate_descriptors(family: Family, n: usize) -> Result<Vec<DescriptorGroup>> {
    check_n(n)?;
    let l = layout(family, n);
    let rb = RowBuilder {
        family,
        n,
        len: l.len,
    };
    let half = Rational::new(1.into(), 2.into());
    let mut groups = Vec::new();
    let mut push = |case: CaseLabel, descriptors: Vec<CanonicalDescriptor>| {
        let index = groups.len() + 1;
        let descriptors = descriptors.into_iter().map(|mut d| {
            d.group = index;
            d
        });
        groups.push(DescriptorGroup {
            index,
            case,
            descriptors: descriptors.collect(),
        });
    };
    match family {
        Family::A if n % 2 == 1 => {
            let k = l.tail.len();
            // 1.1: γ = 1, β_{q+1} free but not ±1/2, β = 0
            let rows = (1..=k + 1)
                .map(|j| {
                    let mut slots = rb.base();
                    slots[0] = Slot::one();
                    slots[l.lead] = Slot::FreeExcept(vec![half.clone(), -half.clone()]);
                    one_param_tail(&mut slots, &l.tail, j);
                    let ambiguity = if j <= k {
                        let mut w = vec![(l.lead, j)];
                        w.extend(
                            l.tail
                                .iter()
                                .enumerate()
                                .filter(|(p, _)| p + 1 > j)
                                .map(|(p, &i)| (i, p + 1 + j)),
                        );
                        AmbiguityGroup::new(2 * j, w)
                    } else {
                        AmbiguityGroup::new(2, vec![(l.lead, 1)])
                    };
                    rb.row(CaseLabel::OddGeneric, 0, Some(j), None, slots, ambiguity)
                })
                .collect();
            push(CaseLabel::OddGeneric, rows);
            // 1.2: γ = 1, β_{q+1} = 1/2, tail now includes β
            let tail: Vec<usize> = l.tail.iter().copied().chain([l.last]).collect();
            let rows = (1..=tail.len() + 1)
                .map(|j| {
                    let mut slots = rb.base();
                    slots[0] = Slot::one();
                    slots[l.lead] = Slot::Fixed(half.clone());
                    one_param_tail(&mut slots, &tail, j);
                    let w = tail
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| p + 1 > j)
                        .map(|(p, &i)| (i, p + 1))
                        .collect();
                    rb.row(
                        CaseLabel::OddCritical,
                        0,
                        Some(j),
                        None,
                        slots,
                        AmbiguityGroup::new(j, w),
                    )
                })
                .collect();
            push(CaseLabel::OddCritical, rows);
            // 2.1: γ = 0, β_{q+1} = 1, β = 0
            let rows = (1..=k + 1)
                .map(|j| {
                    let mut slots = rb.base();
                    slots[l.lead] = Slot::one();
                    one_param_tail(&mut slots, &l.tail, j);
                    let w = l
                        .tail
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| p + 1 > j)
                        .map(|(p, &i)| (i, p + 1))
                        .collect();
                    rb.row(
                        CaseLabel::OddLead,
                        0,
                        Some(j),
                        None,
                        slots,
                        AmbiguityGroup::new(j, w),
                    )
                })
                .collect();
            push(CaseLabel::OddLead, rows);
            push(
                CaseLabel::OddTail,
                two_param_rows(&rb, CaseLabel::OddTail, 0, &rb.base(), &tail),
            );
            push(
                CaseLabel::OddZero,
                vec![rb.row(
                    CaseLabel::OddZero,
                    0,
                    None,
                    None,
                    rb.base(),
                    AmbiguityGroup::trivial(),
                )],
            );
        }
        Family::A => {
            let k = l.tail.len();
            let rows = (1..=k + 1)
                .map(|j| {
                    let mut slots = rb.base();
                    slots[0] = Slot::one();
                    one_param_tail(&mut slots, &l.tail, j);
                    let w = l
                        .tail
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| p + 1 > j)
                        .map(|(p, &i)| (i, 2 * (p + 1) - 1))
                        .collect();
                    let order = if j <= k { 2 * j - 1 } else { 1 };
                    rb.row(
                        CaseLabel::EvenGamma,
                        0,
                        Some(j),
                        None,
                        slots,
                        AmbiguityGroup::new(order, w),
                    )
                })
                .collect();
            push(CaseLabel::EvenGamma, rows);
            let tail: Vec<usize> = l.tail.iter().copied().chain([l.last]).collect();
            push(
                CaseLabel::EvenTail,
                two_param_rows(&rb, CaseLabel::EvenTail, 0, &rb.base(), &tail),
            );
            push(
                CaseLabel::EvenZero,
                vec![rb.row(
                    CaseLabel::EvenZero,
                    0,
                    None,
                    None,
                    rb.base(),
                    AmbiguityGroup::trivial(),
                )],
            );
        }
        Family::B => {
            push(
                CaseLabel::BTail,
                two_param_rows(&rb, CaseLabel::BTail, 0, &rb.base(), &l.tail),
            );
            push(
                CaseLabel::BZero,
                vec![rb.row(
                    CaseLabel::BZero,
                    0,
                    None,
                    None,
                    rb.base(),
                    AmbiguityGroup::trivial(),
                )],
            );
        }
    }
    Ok(groups)
}

/// All descriptors of `(family, n)` in list order.
pub fn descriptors(family: Family, n: usize) -> Result<Vec<CanonicalDescriptor>> {
    Ok(enumerate_descriptors(family, n)?
        .into_iter()
        .flat_map(|g| g.descriptors)
        .collect())
}

/// Least common multiple of every root-of-unity order the descriptors of
/// `(family, n)` can need: a cyclotomic conductor for the whole list.
pub fn required_conductor(family: Family, n: usize) -> Result<u32> {
    let mut l = 1u64;
    for d in descriptors(family, n)? {
        l = num_integer::lcm(l, d.ambiguity.order as u64);
    }
    u32::try_from(l).map_err(|_| Error::InvalidInput("conductor too large".into()))
}

/// Result of [`canonicalize`].
#[derive(Debug, Clone)]
pub struct Canonical<F> {
    pub descriptor: CanonicalDescriptor,
    pub representative: FamilyParams<F>,
    /// Maps the input onto the representative.
    pub witness: IsoWitness<F>,
}

impl<F: Scalar> Canonical<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "descriptor": self.descriptor.to_json(),
            "representative": self.representative.to_json(),
            "witness": self.witness.to_json(),
            "verified": true,
        })
    }
}

/// Ordering used to pick one representative among root-of-unity branches:
/// entries are compared in order by principal argument in `[0, 2π)`, then by
/// modulus.
fn branch_order<F: Scalar>(a: &[F], b: &[F], tol: f64) -> Ordering {
    let key = |x: &F| {
        let z = x.to_complex();
        let r = z.norm();
        if r <= tol {
            return (0.0, 0.0);
        }
        let mut t = z.im.atan2(z.re);
        if t < 0.0 {
            t += TAU;
        }
        if TAU - t <= tol {
            t = 0.0;
        }
        (t, r)
    };
    for (x, y) in a.iter().zip(b) {
        let (ta, ra) = key(x);
        let (tb, rb) = key(y);
        if (ta - tb).abs() > tol {
            return ta.total_cmp(&tb);
        }
        if (ra - rb).abs() > tol * ra.max(rb).max(1.0) {
            return ra.total_cmp(&rb);
        }
    }
    Ordering::Equal
}

/// Branches `(λ, u)` normalizing a two-parameter tail `w_p ↦ λ u^p w_p`.
fn two_param_branches<F: Scalar>(w: &[F], tol: Tol) -> Result<Vec<(F, F)>> {
    let nz: Vec<usize> = (0..w.len()).filter(|&i| !w[i].is_zero(tol)).collect();
    let j = nz[0] + 1;
    let us = match nz.get(1) {
        Some(&i) => {
            let s = i + 1 - j;
            all_roots(&w[j - 1].div(&w[i]).expect("nonzero"), s)?
        }
        None => vec![F::one()],
    };
    Ok(us
        .into_iter()
        .map(|u| (inv(&(pow(&u, j as i64) * w[j - 1].clone())), u))
        .collect())
}

/// `a₁` with `a₁^{-2} = u`.
fn a1_from_u<F: Scalar>(u: &F) -> Result<F> {
    nth_root(&inv(u), 2)
}

fn witness<F: Scalar>(family: Family, n: usize, a1: F, a_top: F, b: F) -> IsoWitness<F> {
    IsoWitness::new(family, n, a1, a_top, b)
}

fn first_nonzero<F: Scalar>(v: &[F], tol: Tol) -> Option<usize> {
    v.iter().position(|x| !x.is_zero(tol))
}

/// Candidate witnesses for `p`, one per residual branch, plus the case.
fn branches<F: Scalar>(p: &FamilyParams<F>, tol: Tol) -> Result<(CaseLabel, Vec<IsoWitness<F>>)> {
    let family = p.family();
    let n = p.n();
    let v = p.to_vector();
    let l = layout(family, n);
    let gather = |idx: &[usize]| idx.iter().map(|&i| v[i].clone()).collect::<Vec<F>>();
    let all_zero = v.iter().all(|x| x.is_zero(tol));
    let mut out = Vec::new();
    let case = match family {
        Family::A if n % 2 == 1 => {
            let (gamma, lead, beta) = (&v[0], &v[l.lead], &v[l.last]);
            if !gamma.is_zero(tol) {
                let g = nth_root(gamma, 2)?;
                let four_b2 = F::from_i64(4) * lead.clone() * lead.clone();
                let critical = gamma.approx_eq(&four_b2, tol);
                let mut tail = gather(&l.tail);
                if critical {
                    tail.push(beta.clone());
                }
                let z: Vec<F> = tail.iter().map(|x| x.div(&g).expect("nonzero")).collect();
                // at the critical value only the sign giving β′_{q+1} = +1/2 can win
                let signs = if critical {
                    vec![F::from_i64(2) * lead.div(&g).expect("nonzero")]
                } else {
                    vec![F::one(), -F::one()]
                };
                for eps in signs {
                    let us = match first_nonzero(&z, tol) {
                        Some(i) => all_roots(&eps.div(&z[i]).expect("nonzero"), i + 1)?,
                        None => vec![F::one()],
                    };
                    for u in us {
                        let a1 = a1_from_u(&u)?;
                        let b = eps.clone() * pow(&a1, n as i64) * inv(&g);
                        let a_top = if critical {
                            F::zero()
                        } else {
                            -(a1.clone() * beta.clone())
                                .div(&(gamma.clone() - four_b2.clone()))
                                .expect("nonzero")
                        };
                        out.push(witness(family, n, a1, a_top, b));
                    }
                }
                if critical {
                    CaseLabel::OddCritical
                } else {
                    CaseLabel::OddGeneric
                }
            } else if !lead.is_zero(tol) {
                let z: Vec<F> = gather(&l.tail)
                    .iter()
                    .map(|x| x.div(lead).expect("nonzero"))
                    .collect();
                let us = match first_nonzero(&z, tol) {
                    Some(i) => all_roots(&inv(&z[i]), i + 1)?,
                    None => vec![F::one()],
                };
                for u in us {
                    let a1 = a1_from_u(&u)?;
                    let b = pow(&a1, n as i64) * inv(lead);
                    let a_top = (b.clone() * beta.clone())
                        .div(&(F::from_i64(4) * lead.clone() * pow(&a1, n as i64 - 1)))
                        .expect("nonzero");
                    out.push(witness(family, n, a1, a_top, b));
                }
                CaseLabel::OddLead
            } else if all_zero {
                out.push(IsoWitness::identity(family, n));
                CaseLabel::OddZero
            } else {
                let tail: Vec<F> = gather(&l.tail).into_iter().chain([beta.clone()]).collect();
                for (lambda, u) in two_param_branches(&tail, tol)? {
                    let a1 = a1_from_u(&u)?;
                    let b = lambda * pow(&a1, n as i64);
                    out.push(witness(family, n, a1, F::zero(), b));
                }
                CaseLabel::OddTail
            }
        }
        Family::A => {
            let (gamma, beta) = (&v[0], &v[l.last]);
            if !gamma.is_zero(tol) {
                let g = nth_root(gamma, 2)?;
                let z: Vec<F> = gather(&l.tail)
                    .iter()
                    .map(|x| x.div(&g).expect("nonzero"))
                    .collect();
                let ws = match first_nonzero(&z, tol) {
                    Some(i) => all_roots(&inv(&z[i]), 2 * i + 1)?,
                    None => vec![F::one()],
                };
                for w in ws {
                    let a1 = inv(&w);
                    let b = pow(&a1, n as i64) * inv(&g);
                    let a_top = -(a1.clone() * beta.clone()).div(gamma).expect("nonzero");
                    out.push(witness(family, n, a1, a_top, b));
                }
                CaseLabel::EvenGamma
            } else if all_zero {
                out.push(IsoWitness::identity(family, n));
                CaseLabel::EvenZero
            } else {
                let tail: Vec<F> = gather(&l.tail).into_iter().chain([beta.clone()]).collect();
                for (lambda, u) in two_param_branches(&tail, tol)? {
                    let a1 = a1_from_u(&u)?;
                    let b = lambda * pow(&a1, n as i64 - 1);
                    out.push(witness(family, n, a1, F::zero(), b));
                }
                CaseLabel::EvenTail
            }
        }
        Family::B => {
            if all_zero {
                out.push(IsoWitness::identity(family, n));
                CaseLabel::BZero
            } else {
                for (lambda, u) in two_param_branches(&v, tol)? {
                    let a1 = a1_from_u(&u)?;
                    let b = lambda * pow(&a1, 2 * s0(n) as i64 - 5);
                    out.push(witness(family, n, a1, F::zero(), b));
                }
                CaseLabel::BTail
            }
        }
    };
    Ok((case, out))
}

/// `(lead, shift)` of a representative inside its case.
fn row_of<F: Scalar>(
    case: CaseLabel,
    family: Family,
    n: usize,
    v: &[F],
    tol: Tol,
) -> (Option<usize>, Option<usize>) {
    let l = layout(family, n);
    let gather = |idx: &[usize]| idx.iter().map(|&i| v[i].clone()).collect::<Vec<F>>();
    let lead_in = |t: &[F]| Some(first_nonzero(t, tol).map_or(t.len() + 1, |i| i + 1));
    let with_last = || {
        gather(&l.tail)
            .into_iter()
            .chain([v[l.last].clone()])
            .collect::<Vec<F>>()
    };
    let two = |t: &[F]| {
        let j = first_nonzero(t, tol).expect("nonzero tail");
        let s = first_nonzero(&t[j + 1..], tol).map_or(t.len() - j, |i| i + 1);
        (Some(j + 1), Some(s))
    };
    match case {
        CaseLabel::OddGeneric | CaseLabel::OddLead | CaseLabel::EvenGamma => {
            (lead_in(&gather(&l.tail)), None)
        }
        CaseLabel::OddCritical => (lead_in(&with_last()), None),
        CaseLabel::OddTail | CaseLabel::EvenTail => two(&with_last()),
        CaseLabel::BTail => two(v),
        CaseLabel::OddZero | CaseLabel::EvenZero | CaseLabel::BZero => (None, None),
    }
}

/// Tolerance used when comparing floating branches and checking witnesses.
fn loose(tol: Tol) -> Tol {
    if tol.0 < 1e-7 {
        Tol(1e-7)
    } else {
        tol
    }
}

/// Map `p` onto its canonical representative.
///
/// The returned witness is checked by building the change of basis and
/// verifying it is an isomorphism onto the representative's algebra; a
/// failed check is returned as [`Error::Verification`].
pub fn canonicalize<F: Scalar>(p: &FamilyParams<F>, tol: Tol) -> Result<Canonical<F>> {
    let family = p.family();
    let n = p.n();
    check_n(n)?;
    let (case, candidates) = branches(p, tol)?;
    let mut best: Option<(FamilyParams<F>, IsoWitness<F>)> = None;
    let cmp_tol = if F::is_exact() { 0.0 } else { loose(tol).0 };
    for w in candidates {
        let rep = apply(&w, p, BExponent::default())?;
        let better = match &best {
            None => true,
            Some((b, _)) => {
                branch_order(&rep.to_vector(), &b.to_vector(), cmp_tol) == Ordering::Less
            }
        };
        if better {
            best = Some((rep, w));
        }
    }
    let (mut representative, witness) = best.expect("at least one branch");
    let check_tol = if F::is_exact() { tol } else { loose(tol) };
    let rv: Vec<F> = representative
        .to_vector()
        .into_iter()
        .map(|x| if x.is_zero(check_tol) { F::zero() } else { x })
        .collect();
    representative = FamilyParams::from_vector(family, n, &rv)?;

    let (lead, shift) = row_of(case, family, n, &rv, check_tol);
    let descriptor = descriptors(family, n)?
        .into_iter()
        .find(|d| d.case == case && d.lead == lead && d.shift == shift)
        .ok_or_else(|| {
            Error::Verification(format!(
                "no descriptor for case {case} with lead {lead:?}, shift {shift:?}"
            ))
        })?;
    if !descriptor.matches(&rv, check_tol) {
        return Err(Error::Verification(format!(
            "representative {rv:?} does not fit {}",
            descriptor.name()
        )));
    }

    let source = p.build();
    let map = basis_change_matrix(&source, &witness)?;
    let rep_alg = representative.build();
    let report = verify_isomorphism(&rep_alg, &source, &map, check_tol)?;
    if !report.pass {
        return Err(Error::Verification(format!(
            "map onto {} fails on {} basis pairs",
            descriptor.name(),
            report.violations.len()
        )));
    }
    Ok(Canonical {
        descriptor,
        representative,
        witness,
    })
}

/// Outcome of [`pairwise_distinct`].
#[derive(Debug, Clone, Default)]
pub struct PairwiseReport {
    /// Instantiated representatives (descriptor name, vector as text).
    pub instances: usize,
    pub pairs: usize,
    /// Pairs found isomorphic and explained by a descriptor's ambiguity
    /// group: the same orbit written twice.
    pub branch_pairs: usize,
    /// Pairs whose isomorphism decision contradicts the canonical list.
    pub violations: Vec<String>,
}

impl PairwiseReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instances": self.instances,
            "pairs": self.pairs,
            "branch_pairs": self.branch_pairs,
            "violations": self.violations,
            "pass": self.pass(),
        })
    }
}

/// Instantiate every descriptor's free slots over `grid`.
pub fn instantiate<F: Scalar>(d: &CanonicalDescriptor, grid: &[F], tol: Tol) -> Vec<Vec<F>> {
    let base: Vec<F> = d
        .slots
        .iter()
        .map(|s| match s {
            Slot::Fixed(c) => F::from_rational(c),
            _ => F::zero(),
        })
        .collect();
    let mut out = vec![base];
    for i in d.free_slots() {
        out = out
            .into_iter()
            .flat_map(|v| {
                grid.iter()
                    .filter(|g| d.slots[i].admits(*g, tol))
                    .map(move |g| {
                        let mut w = v.clone();
                        w[i] = g.clone();
                        w
                    })
            })
            .collect();
    }
    out
}

/// Check the canonical list of `(family, n)` on a grid: two instantiated
/// representatives must be isomorphic exactly when they lie in the same
/// descriptor and are related by its ambiguity group.
pub fn pairwise_distinct<F: Scalar>(
    family: Family,
    n: usize,
    grid: &[F],
    tol: Tol,
) -> Result<PairwiseReport> {
    let mut items: Vec<(CanonicalDescriptor, FamilyParams<F>)> = Vec::new();
    let mut report = PairwiseReport::default();
    for d in descriptors(family, n)? {
        for v in instantiate(&d, grid, tol) {
            items.push((d.clone(), FamilyParams::from_vector(family, n, &v)?));
        }
    }
    report.instances = items.len();
    let show = |d: &CanonicalDescriptor, p: &FamilyParams<F>| {
        format!(
            "{} {:?}",
            d.name(),
            p.to_vector()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )
    };
    for (d, p) in &items {
        match canonicalize(p, tol) {
            Ok(c) if c.descriptor.same_row(d) => {}
            Ok(c) => report.violations.push(format!(
                "{} canonicalizes into {}",
                show(d, p),
                c.descriptor.name()
            )),
            Err(e) => report.violations.push(format!("{}: {e}", show(d, p))),
        }
    }
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            report.pairs += 1;
            let (di, pi) = &items[i];
            let (dj, pj) = &items[j];
            let decided =
                iso_solvable(&IsoConditionSystem::new(pi.clone(), pj.clone())?, tol).isomorphic;
            let expected = di.same_row(dj)
                && di
                    .ambiguity
                    .relates(&pi.to_vector(), &pj.to_vector(), tol)?;
            if decided && expected {
                report.branch_pairs += 1;
            } else if decided != expected {
                let verdict = if decided {
                    "isomorphic"
                } else {
                    "not isomorphic"
                };
                report.violations.push(format!(
                    "{} and {} are {verdict}",
                    show(di, pi),
                    show(dj, pj)
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilyAParams;
    use crate::scalar::{parse_rational, Complex64};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn qa(n: usize, v: &[&str]) -> FamilyParams<Rational> {
        let v: Vec<Rational> = v.iter().map(|s| q(s)).collect();
        FamilyParams::from_vector(Family::A, n, &v).unwrap()
    }

    #[test]
    fn roots_of_unity() {
        let s = RootOfUnity::new(1, 5).unwrap();
        let z: Complex64 = s.value().unwrap();
        assert!((z - Complex64::from_polar(1.0, TAU / 5.0)).norm() < 1e-12);
        assert!((z.powu(5) - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(
            RootOfUnity::new(0, 7).unwrap().value::<Rational>().unwrap(),
            q("1")
        );
        assert!(RootOfUnity::new(3, 3).is_err());
        assert!(matches!(
            RootOfUnity::new(1, 3).unwrap().value::<Rational>(),
            Err(Error::NeedsExtension(_))
        ));
        let e: crate::Cyclotomic = RootOfUnity::new(2, 6).unwrap().value().unwrap();
        assert!(e
            .powi(3)
            .unwrap()
            .approx_eq(&crate::Cyclotomic::one(), Tol::default()));
    }

    #[test]
    fn v_operators() {
        let a = [q("2"), q("3"), q("5")];
        assert_eq!(
            v_operator(VKind::One, 1, 3, &a, 0, 1).unwrap(),
            vec![q("1"), q("3"), q("5")]
        );
        assert_eq!(
            v_operator(VKind::Zero, 4, 3, &a, 0, 1).unwrap(),
            vec![q("0"); 3]
        );
        assert_eq!(
            v_operator(VKind::Two, 3, 2, &a[..2], 0, 1).unwrap(),
            vec![q("0"); 2]
        );
        assert!(v_operator(VKind::One, 5, 3, &a, 0, 1).is_err());
        assert!(v_operator(VKind::One, 2, 3, &a, 2, 1).is_err());

        let z = [c(2.0, 0.0), c(3.0, 0.0)];
        let out = v_operator(VKind::Two, 1, 2, &z, 1, 1).unwrap();
        let s13 = Complex64::from_polar(1.0, TAU / 3.0);
        assert_eq!(out[0], c(1.0, 0.0));
        assert!((out[1] - s13.powu(5) * 3.0).norm() < 1e-12);

        // δ = −1, j = 2: entry 3 carries δ·√(δ³) = −i
        let z = [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        let out = v_operator(VKind::Zero, 2, 3, &z, 0, -1).unwrap();
        assert!((out[2] - c(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn w_operator_cases() {
        let t = Tol::default();
        let v = [q("1"), q("7"), q("5")];
        assert_eq!(
            w_operator(1, 3, &v, 0, t).unwrap(),
            vec![q("1"), q("1"), q("5")]
        );
        let v = [q("0"), q("1"), q("0")];
        assert_eq!(w_operator(2, 3, &v, 0, t).unwrap(), v.to_vec());
        assert!(w_operator(1, 3, &vec![q("0"); 3], 0, t).is_err());
        assert!(w_operator(1, 3, &[q("2"), q("0"), q("0")], 0, t).is_err());
        assert!(w_operator(4, 3, &[q("1"), q("0"), q("0")], 0, t).is_err());
    }

    #[test]
    fn group_counts() {
        assert_eq!(enumerate_descriptors(Family::A, 5).unwrap().len(), 5);
        assert_eq!(enumerate_descriptors(Family::A, 6).unwrap().len(), 3);
        for n in 3..9 {
            assert_eq!(enumerate_descriptors(Family::B, n).unwrap().len(), 2);
        }
        assert!(enumerate_descriptors(Family::A, 2).is_err());
    }

    #[test]
    fn row_counts_follow_the_index_ranges() {
        // n = 2q−1 = 7: q = 4, rows j ≤ q−1, j ≤ q, j ≤ q−1, pairs j+s ≤ q, zero
        let g = enumerate_descriptors(Family::A, 7).unwrap();
        let sizes: Vec<usize> = g.iter().map(|g| g.descriptors.len()).collect();
        assert_eq!(sizes, vec![3, 4, 3, 6, 1]);
        // n = 2q = 8: q = 4, rows j ≤ q, pairs j+s ≤ q+1, zero
        let g = enumerate_descriptors(Family::A, 8).unwrap();
        let sizes: Vec<usize> = g.iter().map(|g| g.descriptors.len()).collect();
        assert_eq!(sizes, vec![4, 10, 1]);
    }

    #[test]
    fn generic_odd_case_is_rational() {
        let c = canonicalize(&qa(5, &["9", "3", "0", "0"]), Tol::default()).unwrap();
        assert_eq!(c.descriptor.case, CaseLabel::OddGeneric);
        assert_eq!(c.descriptor.group, 1);
        assert_eq!(
            c.representative.to_vector(),
            vec![q("1"), q("1"), q("0"), q("0")]
        );
        assert_eq!(c.witness.b, q("1/3"));
    }

    #[test]
    fn critical_odd_case() {
        let p = qa(5, &["1", "1/2", "1/4", "5"]);
        let c = canonicalize(&p, Tol::default()).unwrap();
        assert_eq!(c.descriptor.case, CaseLabel::OddCritical);
        assert_eq!(
            c.representative.to_vector(),
            vec![q("1"), q("1/2"), q("1"), q("80")]
        );
        // the −1/2 row collapses onto +1/2
        let c2 = canonicalize(&qa(5, &["1", "-1/2", "-1/4", "-5"]), Tol::default()).unwrap();
        assert_eq!(c2.representative, c.representative);
        // a1 = √2 here, so only the floating backend gets through
        let p = qa(5, &["1", "1/2", "2", "5"]);
        assert!(matches!(
            canonicalize(&p, Tol::default()),
            Err(Error::NeedsExtension(_))
        ));
        let pc = p.map_scalars(|x| x.to_complex());
        let c = canonicalize(&pc, Tol::default()).unwrap();
        let want = [c64(1.0), c64(0.5), c64(1.0), c64(1.25)];
        assert!(c
            .representative
            .to_vector()
            .iter()
            .zip(want)
            .all(|(x, y)| (x - y).norm() < 1e-9));
    }

    #[test]
    fn zero_vector_is_fixed() {
        for (family, n) in [(Family::A, 5), (Family::A, 6), (Family::B, 4)] {
            let p = FamilyParams::<Rational>::zero(family, n).unwrap();
            let c = canonicalize(&p, Tol::default()).unwrap();
            assert_eq!(c.representative, p);
            assert_eq!(c.witness, IsoWitness::identity(family, n));
            assert_eq!(c.descriptor.slots.iter().filter(|s| s.is_free()).count(), 0);
        }
    }

    #[test]
    fn rational_backend_reports_missing_roots() {
        let err = canonicalize(&qa(5, &["2", "0", "0", "0"]), Tol::default()).unwrap_err();
        assert!(matches!(err, Error::NeedsExtension(_)), "{err}");
    }

    #[test]
    fn complex_canonical_forms_are_idempotent() {
        let t = Tol::default();
        let p = FamilyParams::A(
            FamilyAParams::new(
                6,
                c(2.0, 1.0),
                vec![c(0.0, 0.0), c(3.0, -1.0)],
                c(-4.0, 0.5),
            )
            .unwrap(),
        );
        let first = canonicalize(&p, t).unwrap();
        assert_eq!(first.descriptor.case, CaseLabel::EvenGamma);
        assert_eq!(first.descriptor.lead, Some(2));
        let again = canonicalize(&first.representative, t).unwrap();
        for (x, y) in first
            .representative
            .to_vector()
            .iter()
            .zip(again.representative.to_vector())
        {
            assert!((x - y).norm() < 1e-8);
        }
    }

    #[test]
    fn ambiguity_group_relates_branches() {
        let d = descriptors(Family::A, 5)
            .unwrap()
            .into_iter()
            .find(|d| d.name() == "A5/1.1/j=2")
            .unwrap();
        assert_eq!(d.ambiguity, AmbiguityGroup::new(2, vec![(1, 1)]));
        let a = [c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let b = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(d.ambiguity.relates(&a, &b, Tol::default()).unwrap());
    }

    #[test]
    fn small_grids_are_distinct() {
        let grid = [q("0"), q("1"), q("-1"), q("2")];
        let r = pairwise_distinct(Family::A, 4, &grid, Tol::default()).unwrap();
        assert!(r.pass(), "{:?}", r.violations);
        assert!(r.pairs > 0);
    }
}
