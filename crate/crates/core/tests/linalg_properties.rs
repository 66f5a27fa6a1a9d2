use commvar_core::linalg::{nullspace, rank, rref, mat_vec};
use commvar_core::{Field, Mat, PrimeField, Rationals};
use proptest::prelude::*;

fn int_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-4i64..5, r * c)))
}

fn build<F: Field>(f: &F, rows: usize, cols: usize, data: &[i64]) -> Mat<F> {
    Mat::from_vec(f, rows, cols, data.iter().map(|&v| f.from_i64(v)).collect()).unwrap()
}

fn rank_nullity<F: Field>(m: &Mat<F>) {
    let kernel = nullspace(m);
    assert_eq!(rank(m) + kernel.len(), m.cols());
    for v in &kernel {
        assert!(mat_vec(m, v).iter().all(|e| m.field().is_zero(e)));
    }
}

proptest! {
    #[test]
    fn rank_plus_nullity((r, c, data) in int_matrix()) {
        rank_nullity(&build(&Rationals, r, c, &data));
        rank_nullity(&build(&PrimeField::new(7).unwrap(), r, c, &data));
    }

    #[test]
    fn rref_is_idempotent((r, c, data) in int_matrix()) {
        let e = rref(&build(&Rationals, r, c, &data));
        let again = rref(&e.reduced);
        prop_assert_eq!(&again.reduced, &e.reduced);
        prop_assert_eq!(again.pivots, e.pivots);
    }

    #[test]
    fn prime_rank_bounded_by_rational_rank((r, c, data) in int_matrix(), p in prop::sample::select(vec![3u64, 5, 7, 2147483647])) {
        let q = rank(&build(&Rationals, r, c, &data));
        let fp = rank(&build(&PrimeField::new(p).unwrap(), r, c, &data));
        prop_assert!(fp <= q);
    }

    #[test]
    fn rank_invariant_under_permutation_and_transpose(
        (r, c, data) in int_matrix(),
        row_seed in any::<u64>(),
        col_seed in any::<u64>(),
    ) {
        let m = build(&Rationals, r, c, &data);
        let perm = |len: usize, seed: u64| {
            let mut p: Vec<usize> = (0..len).collect();
            let mut s = seed;
            for i in (1..len).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                p.swap(i, (s >> 33) as usize % (i + 1));
            }
            p
        };
        let (pr, pc) = (perm(r, row_seed), perm(c, col_seed));
        let mut shuffled = Vec::with_capacity(r * c);
        for &i in &pr {
            for &j in &pc {
                shuffled.push(data[i * c + j]);
            }
        }
        let base = rank(&m);
        prop_assert_eq!(rank(&build(&Rationals, r, c, &shuffled)), base);
        prop_assert_eq!(rank(&m.transpose()), base);
    }
}

#[test]
fn zero_row_matrix_keeps_shape() {
    let m = Mat::zeros(&Rationals, 0, 3);
    let e = rref(&m);
    assert_eq!(e.reduced.shape(), (0, 3));
    assert_eq!(nullspace(&m).len(), 3);
}
