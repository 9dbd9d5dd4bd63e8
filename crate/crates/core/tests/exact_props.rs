mod support;

use cofun_core::exact::{kernel_basis, smith_normal_form, solve_linear, Int, IntMatrix, RingSpec};
use cofun_testkit::{invariant_factors, FiniteQuotient};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use support::{ints, raw, ring};

fn matrix(max: usize, bound: i64) -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        (Just(r), Just(c), prop::collection::vec(prop::collection::vec(-bound..=bound, c), r))
    })
}

fn check_smith(r: &RingSpec, a: &IntMatrix) -> Result<(), TestCaseError> {
    let s = smith_normal_form(a);
    prop_assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d.clone());
    prop_assert!(r.is_unit(&s.u.determinant().unwrap()));
    prop_assert!(r.is_unit(&s.v.determinant().unwrap()));
    prop_assert!(s.u.mul(&s.u_inv).unwrap().is_identity());
    prop_assert!(s.v.mul(&s.v_inv).unwrap().is_identity());
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j {
                prop_assert!(s.d.get(i, j).is_zero());
            }
        }
    }
    let diag = s.diagonal();
    for w in diag.windows(2) {
        prop_assert!(r.divides(&w[0], &w[1]), "{} does not divide {}", w[0], w[1]);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_over_integers((_, cols, rows) in matrix(6, 50)) {
        let z = RingSpec::Integers;
        let a = IntMatrix::from_i64(&z, cols, &rows).unwrap();
        check_smith(&z, &a)?;
        let expected: Vec<Int> = invariant_factors(&rows, cols).into_iter().map(Int::from).collect();
        let got: Vec<Int> = smith_normal_form(&a).diagonal().into_iter().filter(|d| !d.is_zero()).map(|d| d.abs()).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn smith_over_residues(n in 2u64..=12, (_, cols, rows) in matrix(4, 12)) {
        let r = ring(n);
        check_smith(&r, &IntMatrix::from_i64(&r, cols, &rows).unwrap())?;
    }

    #[test]
    fn solve_linear_matches_search(n in 2u64..=12, (rs, cols, rows) in matrix(3, 11), b in prop::collection::vec(0i64..12, 3)) {
        let r = ring(n);
        let a = IntMatrix::from_i64(&r, cols, &rows).unwrap();
        let b: Vec<Int> = ints(&b[..rs]).into_iter().map(|x| r.reduce(x)).collect();
        let at = FiniteQuotient::new(n, cols, &[]);
        let eval = |x: &[u64]| -> Vec<Int> {
            let xs: Vec<Int> = x.iter().map(|&v| Int::from(v)).collect();
            a.apply_column(&xs)
        };
        let solutions: Vec<&Vec<u64>> = at.representatives().iter().filter(|x| eval(x) == b).collect();
        let homogeneous: Vec<&Vec<u64>> = at.representatives().iter().filter(|x| eval(x).iter().all(Zero::is_zero)).collect();
        let sol = solve_linear(&a, &b).unwrap();
        prop_assert_eq!(sol.is_some(), !solutions.is_empty());
        if let Some(sol) = sol {
            prop_assert_eq!(a.apply_column(&sol.particular), b.clone());
            for k in 0..sol.kernel.rows() {
                prop_assert!(a.apply_column(sol.kernel.row(k)).iter().all(Zero::is_zero));
            }
            let span = FiniteQuotient::new(n, cols, &raw(&sol.kernel));
            prop_assert_eq!(span.order() * homogeneous.len(), at.order());
        }
    }

    #[test]
    fn kernel_basis_is_complete(n in 2u64..=12, (rs, cols, rows) in matrix(3, 11)) {
        let r = ring(n);
        let a = IntMatrix::from_i64(&r, cols, &rows).unwrap();
        let k = kernel_basis(&a);
        for i in 0..k.rows() {
            prop_assert!(a.apply_row(k.row(i)).iter().all(Zero::is_zero));
        }
        let all = FiniteQuotient::new(n, rs, &[]);
        let brute = all
            .representatives()
            .iter()
            .filter(|x| a.apply_row(&x.iter().map(|&v| Int::from(v)).collect::<Vec<_>>()).iter().all(Zero::is_zero))
            .count();
        let span = FiniteQuotient::new(n, rs, &raw(&k));
        prop_assert_eq!(all.order() / span.order(), brute);
    }

    #[test]
    fn integer_kernel_is_saturated((_, cols, rows) in matrix(4, 9)) {
        let z = RingSpec::Integers;
        let a = IntMatrix::from_i64(&z, cols, &rows).unwrap();
        let k = kernel_basis(&a);
        // A lattice basis of a saturated kernel has rank rows - rank(A) and trivial invariant factors.
        let rank = smith_normal_form(&a).rank();
        prop_assert_eq!(k.rows(), a.rows() - rank);
        prop_assert!(invariant_factors(&raw(&k), a.rows()).iter().all(|&d| d == 1));
    }
}
