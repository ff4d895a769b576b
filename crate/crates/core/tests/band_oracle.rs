mod common;

use common::*;
use ddm_core::{factor, flop_model, BandedMatrix, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn band_of(a: &Dense, b: usize) -> BandedMatrix {
    BandedMatrix::from_dense(a, b, b).unwrap()
}

#[test]
fn factors_match_dense_doolittle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, b) in [(1, 0), (5, 1), (8, 3), (17, 4), (40, 9)] {
        let a = random_spd_band(&mut rng, n, b);
        let lu = factor(band_of(&a, b)).unwrap();
        let (l, u) = dense_lu(&a);
        for i in 0..n {
            for j in 0..n {
                let lij = if i > j && i - j <= b { lu.l(i, j) } else if i == j { 1.0 } else { 0.0 };
                let uij = if j >= i && j - i <= b { lu.u(i, j) } else { 0.0 };
                assert!((lij - l[i][j]).abs() < 1e-12, "L[{i}][{j}] for n = {n}");
                assert!((uij - u[i][j]).abs() < 1e-12, "U[{i}][{j}] for n = {n}");
            }
        }
    }
}

#[test]
fn unsymmetric_bandwidths_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 30;
    let (kl, ku) = (2, 5);
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
            a[i][j] = rand::Rng::gen_range(&mut rng, -1.0..1.0);
        }
        a[i][i] = 10.0;
    }
    let lu = factor(BandedMatrix::from_dense(&a, kl, ku).unwrap()).unwrap();
    let x = random_vector(&mut rng, n);
    let b = matvec(&a, &x);
    assert!(rel_diff(&lu.solve(&b).unwrap(), &x) < 1e-12);
}

#[test]
fn indefinite_matrix_hits_zero_pivot() {
    // leading 2x2 minor is singular
    let a = vec![
        vec![1.0, 1.0, 0.0],
        vec![1.0, 1.0, 1.0],
        vec![0.0, 1.0, 1.0],
    ];
    match factor(band_of(&a, 1)) {
        Err(Error::SingularPivot { index, .. }) => assert_eq!(index, 1),
        other => panic!("expected a singular pivot, got {other:?}"),
    }
}

#[test]
fn solve_rejects_wrong_length() {
    let lu = factor(BandedMatrix::identity(4).unwrap()).unwrap();
    assert!(matches!(
        lu.solve(&[1.0; 3]),
        Err(Error::DimensionMismatch { expected: 4, got: 3 })
    ));
}

#[test]
fn flop_count_tracks_model_for_wide_bands() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (n, b) = (400, 20);
    let lu = factor(band_of(&random_spd_band(&mut rng, n, b), b)).unwrap();
    let ratio = lu.flop_count() as f64 / flop_model(n, b);
    assert!(ratio > 0.85 && ratio <= 1.0, "ratio {ratio}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reconstruction_and_solve_match_dense(n in 1usize..=64, b_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let b = ((n - 1) as f64 * b_frac * 0.5) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_spd_band(&mut rng, n, b);
        let lu = factor(band_of(&a, b)).unwrap();

        let mut l = vec![vec![0.0; n]; n];
        let mut u = vec![vec![0.0; n]; n];
        for i in 0..n {
            l[i][i] = 1.0;
            for j in i.saturating_sub(b)..i {
                l[i][j] = lu.l(i, j);
            }
            for j in i..(i + b + 1).min(n) {
                u[i][j] = lu.u(i, j);
            }
        }
        let lu_prod = matmul(&l, &u);
        let diff: Dense = lu_prod
            .iter()
            .zip(&a)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
            .collect();
        prop_assert!(frobenius(&diff) <= 1e-12 * frobenius(&a));

        let rhs = random_vector(&mut rng, n);
        let x = lu.solve(&rhs).unwrap();
        let oracle = dense_solve(&a, &rhs);
        prop_assert!(rel_diff(&x, &oracle) <= 1e-10);
    }
}
