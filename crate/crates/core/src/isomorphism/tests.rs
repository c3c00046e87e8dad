use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::json::same_algebra;
use crate::scalar::{parse_rational, Complex64};

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn a5(v: [&str; 4]) -> FamilyParams<Rational> {
    FamilyParams::from_vector(Family::A, 5, &v.map(q)).unwrap()
}

fn to_complex(p: &FamilyParams<Rational>) -> FamilyParams<Complex64> {
    p.map_scalars(|x| x.to_complex())
}

fn decide<F: Scalar>(p: &FamilyParams<F>, r: &FamilyParams<F>) -> IsoDecision<F> {
    iso_solvable(
        &IsoConditionSystem::new(p.clone(), r.clone()).unwrap(),
        Tol::default(),
    )
}

/// Materialize `w` on `p` and check the result against `apply(w, p)`.
fn certify<F: Scalar>(p: &FamilyParams<F>, w: &IsoWitness<F>, tol: Tol) -> bool {
    let source = p.build();
    let target = apply(w, p, BExponent::default()).unwrap().build();
    let (map, materialized) = materialize_basis_change(&source, w, tol).unwrap();
    verify_isomorphism(&target, &source, &map, tol)
        .unwrap()
        .pass
        && same_algebra(&target, &materialized, Tol(1e-7))
}

#[test]
fn identity_witness_is_trivial() {
    let p = a5(["2", "1", "-1", "3"]);
    let a = p.build();
    let (map, target) =
        materialize_basis_change(&a, &IsoWitness::identity(Family::A, 5), Tol::default()).unwrap();
    assert!(map.approx_eq(&Matrix::identity(11), Tol::default()));
    assert!(same_algebra(&a, &target, Tol::default()));
    let d = decide(&p, &p);
    assert!(d.isomorphic);
    let w = d.witness.unwrap();
    assert_eq!((w.a1, w.b, w.a_top), (q("1"), q("1"), q("0")));
}

#[test]
fn gamma_rescaling() {
    let d = decide(&a5(["4", "0", "0", "0"]), &a5(["1", "0", "0", "0"]));
    assert!(d.isomorphic);
    let w = d.witness.unwrap();
    assert_eq!(&w.b * &w.b * q("4"), w.a1.powi(10).unwrap());
    assert!(certify(&a5(["4", "0", "0", "0"]), &w, Tol::default()));
}

#[test]
fn gamma_cannot_vanish() {
    let d = decide(&a5(["1", "0", "0", "0"]), &a5(["0", "0", "0", "0"]));
    assert!(!d.isomorphic);
    assert!(d.note.is_some());
}

#[test]
fn mismatched_records_are_rejected() {
    let b = FamilyParams::<Rational>::zero(Family::B, 5).unwrap();
    assert!(IsoConditionSystem::new(a5(["0", "0", "0", "0"]), b).is_err());
    let a6 = FamilyParams::<Rational>::zero(Family::A, 6).unwrap();
    assert!(IsoConditionSystem::new(a5(["0", "0", "0", "0"]), a6).is_err());
}

#[test]
fn parity_mixing_maps_are_rejected() {
    let a = a5(["1", "0", "0", "0"]).build();
    let mut map = Matrix::identity(11);
    // y1 ↦ y1 + x1
    map[(0, 5)] = q("1");
    assert!(matches!(
        verify_isomorphism(&a, &a, &map, Tol::default()),
        Err(Error::ParityMixing(5))
    ));
}

#[test]
fn singular_witness_is_reported() {
    let a = a5(["1", "0", "0", "0"]).build();
    let w = IsoWitness::new(Family::A, 5, q("1"), q("0"), q("0"));
    assert!(matches!(
        materialize_basis_change(&a, &w, Tol::default()),
        Err(Error::SingularMap { rank: 10, dim: 11 })
    ));
    let w = IsoWitness::new(Family::A, 5, q("0"), q("0"), q("1"));
    assert!(materialize_basis_change(&a, &w, Tol::default()).is_err());
}

#[test]
fn family_b_free_coefficients() {
    let p = FamilyParams::from_vector(Family::B, 4, &[q("1"), q("2")]).unwrap();
    let mut w = IsoWitness::new(Family::B, 4, q("2"), q("3"), q("-1/2"));
    w.b_sub = q("5");
    assert!(certify(&p, &w, Tol::default()));
}

#[test]
fn round_trip_and_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for family in [Family::A, Family::B] {
        for n in 3..=7 {
            for _ in 0..6 {
                let p = FamilyParams::<Rational>::random(family, n, &mut rng, 0.3).unwrap();
                let w = IsoWitness::random(family, n, &mut rng);
                assert!(
                    certify(&p, &w, Tol::default()),
                    "{family} n={n} {p:?} {w:?}"
                );
                let t = apply(&w, &p, BExponent::default()).unwrap();
                assert!(decide(&p, &t).isomorphic);
                assert!(decide(&t, &p).isomorphic);
                // solver witnesses hold up in the floating backend
                let (pc, tc) = (to_complex(&p), to_complex(&t));
                let d = decide(&pc, &tc);
                let wc = d.witness.expect("complex backend takes all roots");
                let predicted = apply(&wc, &pc, BExponent::default()).unwrap();
                assert!(predicted
                    .to_vector()
                    .iter()
                    .zip(tc.to_vector())
                    .all(|(a, b)| a.approx_eq(&b, Tol(1e-8))));
                assert!(certify(&pc, &wc, Tol(1e-9)));
                // an unrelated draw is usually not isomorphic; symmetry must hold either way
                let r = FamilyParams::<Rational>::random(family, n, &mut rng, 0.3).unwrap();
                assert_eq!(decide(&p, &r).isomorphic, decide(&r, &p).isomorphic);
            }
        }
    }
}

#[test]
fn a_top_branch_when_coefficient_vanishes() {
    // n = 5, γ = 4β₄² = 1: β must rescale on its own
    let p = a5(["1", "1/2", "0", "3"]);
    let w = IsoWitness::new(Family::A, 5, q("2"), q("7"), q("32"));
    let t = apply(&w, &p, BExponent::default()).unwrap();
    assert!(certify(&p, &w, Tol::default()));
    assert!(decide(&p, &t).isomorphic);
    let other = a5(["1", "1/2", "0", "0"]);
    assert!(!decide(&p, &other).isomorphic);
}

#[test]
fn separation_examples() {
    let t = Tol::default();
    let a = a5(["1", "0", "0", "0"]).build();
    let b = FamilyParams::<Rational>::zero(Family::B, 5)
        .unwrap()
        .build();
    match invariant_separation(&a, &b, t) {
        Separation::Distinguished(why) => assert!(why.contains(&"odd dimension")),
        Separation::Inconclusive => panic!("dimensions differ"),
    }
    let c = a5(["0", "1", "0", "0"]).build();
    assert_eq!(invariant_separation(&a, &c, t), Separation::Inconclusive);
    assert!(!decide(&a5(["1", "0", "0", "0"]), &a5(["0", "1", "0", "0"])).isomorphic);
    assert_eq!(invariant_separation(&a, &a, t), Separation::Inconclusive);
}

#[test]
fn read_params_inverts_build() {
    let p = a5(["2", "-1", "1/3", "5"]);
    assert_eq!(read_params(Family::A, &p.build()).unwrap(), p);
    let b = FamilyParams::from_vector(Family::B, 5, &[q("1"), q("-2")]).unwrap();
    assert_eq!(read_params(Family::B, &b.build()).unwrap(), b);
}

#[test]
fn statement_exponent_is_the_right_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let trials = exponent_trials(4, 10, &mut rng).unwrap();
    assert_eq!(trials[0].exponent, BExponent::TwoJMinusThree);
    assert_eq!(trials[0].passes, trials[0].trials);
    assert_eq!(trials[1].passes, 0);
}
