//! Binomial systems `b^p · c = a₁^e · c′` in two nonzero unknowns.
//!
//! Writing each equation as `b^p a₁^{−e} = r`, the exponent matrix is
//! diagonalized over ℤ (`L M R = D` with `L`, `R` unimodular). The system
//! then splits into `s^{d_i} = r′_i` plus consistency conditions `r′_i = 1`
//! for the zero rows of `D`.

use crate::scalar::{Scalar, Tol};

/// `b^p · c = a₁^e · c_target`.
#[derive(Debug, Clone)]
pub struct Binomial<F> {
    pub p: i64,
    pub e: i64,
    pub c: F,
    pub c_target: F,
}

#[derive(Debug, Clone)]
pub enum TorusSolution<F> {
    /// No solution with `b, a₁ ≠ 0`; the string says which relation fails.
    Inconsistent(String),
    /// Solvable. `point` is `(b, a₁)` when the backend can take the roots.
    Solvable { point: Option<(F, F)> },
}

type IntMatrix = Vec<Vec<i64>>;

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Diagonalize an integer matrix: returns `(L, D, R)` with `L·M·R = D`,
/// `L` and `R` unimodular and `D` diagonal with non-negative entries.
pub fn diagonalize(m: &[Vec<i64>]) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d: IntMatrix = m.to_vec();
    let mut l = identity(rows);
    let mut r = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| d[i][j].abs());
            let Some((pi, pj)) = pivot else { break };
            d.swap(t, pi);
            l.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in r.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(d[t][t]);
                if q != 0 {
                    for j in 0..cols {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..rows {
                        l[i][j] -= q * l[t][j];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(d[t][t]);
                if q != 0 {
                    for i in 0..rows {
                        d[i][j] -= q * d[i][t];
                    }
                    for i in 0..cols {
                        r[i][j] -= q * r[i][t];
                    }
                }
                clean &= d[t][j] == 0;
            }
            if clean {
                break;
            }
        }
        if t < rows && t < cols && d[t][t] < 0 {
            for v in d[t].iter_mut() {
                *v = -*v;
            }
            for v in l[t].iter_mut() {
                *v = -*v;
            }
        }
    }
    (l, d, r)
}

fn monomial<F: Scalar>(values: &[F], exps: &[i64]) -> F {
    values.iter().zip(exps).fold(F::one(), |acc, (v, &e)| {
        acc * v.powi(e).expect("ratios are nonzero")
    })
}

/// Decide the system over ℂ and, when the backend allows it, produce a
/// solution with principal roots (free variables set to 1).
pub fn solve<F: Scalar>(eqs: &[Binomial<F>], tol: Tol) -> TorusSolution<F> {
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for eq in eqs {
        match (eq.c.is_zero(tol), eq.c_target.is_zero(tol)) {
            (true, true) => continue,
            (false, false) => {}
            _ => {
                return TorusSolution::Inconsistent(format!(
                    "b^{} · {} = a1^{} · {} forces a zero unknown",
                    eq.p, eq.c, eq.e, eq.c_target
                ))
            }
        }
        rows.push(vec![eq.p, -eq.e]);
        ratios.push(eq.c_target.div(&eq.c).expect("checked nonzero"));
    }
    if rows.is_empty() {
        return TorusSolution::Solvable {
            point: Some((F::one(), F::one())),
        };
    }
    let (l, d, r) = diagonalize(&rows);
    let reduced: Vec<F> = l.iter().map(|li| monomial(&ratios, li)).collect();
    let rank = (0..2.min(d.len())).take_while(|&t| d[t][t] != 0).count();
    for (i, rv) in reduced.iter().enumerate().skip(rank) {
        if !rv.approx_eq(&F::one(), tol) {
            return TorusSolution::Inconsistent(format!("combined relation {i} requires 1 = {rv}"));
        }
    }
    let mut st = [F::one(), F::one()];
    for t in 0..rank {
        match reduced[t].nth_root(d[t][t] as u32) {
            Some(v) => st[t] = v,
            None => return TorusSolution::Solvable { point: None },
        }
    }
    let b = monomial(&st, &r[0]);
    let a1 = monomial(&st, &r[1]);
    TorusSolution::Solvable {
        point: Some((b, a1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Complex64, Rational};
    use proptest::prelude::*;

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
        (0..a.len())
            .map(|i| {
                (0..b[0].len())
                    .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn det2(m: &[Vec<i64>]) -> i64 {
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    proptest! {
        #[test]
        fn diagonalization_is_valid(entries in proptest::collection::vec(-12i64..=12, 2..12)) {
            let m: IntMatrix = entries.chunks(2).filter(|c| c.len() == 2).map(|c| c.to_vec()).collect();
            let (l, d, r) = diagonalize(&m);
            prop_assert_eq!(mat_mul(&mat_mul(&l, &m), &r), d.clone());
            prop_assert_eq!(det2(&r).abs(), 1);
            for (i, row) in d.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if i != j { prop_assert_eq!(*v, 0); } else { prop_assert!(*v >= 0); }
                }
            }
        }
    }

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn rational_square_root_branch() {
        // b² · 4 = a1^10 · 1
        let eqs = [Binomial {
            p: 2,
            e: 10,
            c: q(4),
            c_target: q(1),
        }];
        let TorusSolution::Solvable {
            point: Some((b, a1)),
        } = solve(&eqs, Tol::default())
        else {
            panic!()
        };
        assert_eq!(&b * &b * q(4), a1.powi(10).unwrap());
    }

    #[test]
    fn inconsistent_ratios() {
        // b = a1 · 2 and b = a1 · 3
        let eqs = [
            Binomial {
                p: 1,
                e: 1,
                c: q(1),
                c_target: q(2),
            },
            Binomial {
                p: 1,
                e: 1,
                c: q(1),
                c_target: q(3),
            },
        ];
        assert!(matches!(
            solve(&eqs, Tol::default()),
            TorusSolution::Inconsistent(_)
        ));
        let eqs = [Binomial {
            p: 2,
            e: 10,
            c: q(1),
            c_target: q(0),
        }];
        assert!(matches!(
            solve(&eqs, Tol::default()),
            TorusSolution::Inconsistent(_)
        ));
    }

    #[test]
    fn complex_roots_are_produced() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let eqs = [
            Binomial {
                p: 1,
                e: 1,
                c: c(1.0),
                c_target: c(-2.0),
            },
            Binomial {
                p: 1,
                e: 3,
                c: c(1.0),
                c_target: c(5.0),
            },
        ];
        let TorusSolution::Solvable {
            point: Some((b, a1)),
        } = solve(&eqs, Tol::default())
        else {
            panic!()
        };
        for e in &eqs {
            let lhs = Scalar::powi(&b, e.p).unwrap() * e.c;
            let rhs = Scalar::powi(&a1, e.e).unwrap() * e.c_target;
            assert!(lhs.approx_eq(&rhs, Tol(1e-9)));
        }
    }

    #[test]
    fn irrational_roots_leave_no_point() {
        let eqs = [Binomial {
            p: 2,
            e: 0,
            c: q(1),
            c_target: q(2),
        }];
        assert!(matches!(
            solve(&eqs, Tol::default()),
            TorusSolution::Solvable { point: None }
        ));
    }
}
