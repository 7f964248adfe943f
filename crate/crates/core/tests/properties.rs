use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shiftsym::cdga::{Polynomial, Slice};
use shiftsym::constructions::{rcrit, s1_transgression, symmetric_obstruction};
use shiftsym::derham::DeRhamAlgebra;
use shiftsym::dsl::{form, presentation};
use shiftsym::fixtures::random_mixed_complex;
use shiftsym::kernel::{rank_kernel, rat, ratio, SparseMatrix};
use shiftsym::ncw::{ncw_cohomology, qp_oracle};
use shiftsym::symplectic::ClosedFormRep;

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> SparseMatrix {
    let dense: Vec<Vec<_>> = (0..rows)
        .map(|r| (0..cols).map(|c| rat(entries[(r * cols + c) % entries.len()])).collect())
        .collect();
    SparseMatrix::from_dense(rows, cols, &dense)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kernel_vectors_are_annihilated(rows in 1usize..6, cols in 1usize..6, entries in prop::collection::vec(-3i64..4, 1..36)) {
        let m = matrix(rows, cols, &entries);
        let (r, kernel) = rank_kernel(&m);
        prop_assert_eq!(r + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn ncw_agrees_with_the_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_mixed_complex(&mut rng, 8, 3);
        let t = ncw_cohomology(&e, &[0, 1, 2], -3, 5, true).unwrap();
        for p in 0..=2 {
            let o = qp_oracle(&e, p, -3, 5).unwrap();
            for n in -3..=5 {
                prop_assert_eq!(t.dim(n, p), o.dim(n, p), "n = {}, p = {}", n, p);
            }
        }
    }

    #[test]
    fn obstruction_is_symmetric(a in -3i64..4, b in -3i64..4, c in -3i64..4) {
        prop_assume!(a != 0 || b != 0 || c != 0);
        let p = presentation("gen x: degree 0, weight 1; gen y: degree 0, weight 1;");
        let f = format!("{a}*x^3 + {b}*x^2*y + {c}*y^3");
        let f = shiftsym::dsl::function(&p, &f);
        let crit = rcrit(&p, &f).unwrap();
        let o = symmetric_obstruction(&crit).unwrap();
        prop_assert!(o.symmetric);
    }

    #[test]
    fn transgression_is_linear(num in -5i64..6, den in 1i64..5) {
        let p = presentation("gen x: degree 0, weight 1; gen y: degree 0, weight 1;");
        let dr = DeRhamAlgebra::new(&p);
        let omega = ClosedFormRep { p: 2, n: 0, slice: Slice::Weight(2), components: vec![form(&dr, "d x*d y")] };
        let base = s1_transgression(&p, &omega).unwrap();
        let s = ratio(num, den);
        prop_assume!(num != 0);
        let scaled = s1_transgression(&p, &omega.scale(&s)).unwrap();
        prop_assert_eq!(scaled.form.n, omega.n - 1);
        let expected: Polynomial = base.form.omega0().scale(&s);
        prop_assert_eq!(scaled.form.omega0(), &expected);
    }
}
