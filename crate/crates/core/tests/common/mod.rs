//! Dense reference computations, independent of the banded and
//! substructured code paths they check.

#![allow(dead_code)]

use rand::Rng;

pub type Dense = Vec<Vec<f64>>;

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(a: &Dense, b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Dense = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap();
        m.swap(k, piv);
        x.swap(k, piv);
        for i in k + 1..n {
            let l = m[i][k] / m[k][k];
            if l == 0.0 {
                continue;
            }
            for j in k..n {
                m[i][j] -= l * m[k][j];
            }
            x[i] -= l * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
        x[k] = (x[k] - s) / m[k][k];
    }
    x
}

/// Doolittle LU without pivoting on the full matrix.
pub fn dense_lu(a: &Dense) -> (Dense, Dense) {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut u = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            u[i][j] = a[i][j] - (0..i).map(|k| l[i][k] * u[k][j]).sum::<f64>();
        }
        l[i][i] = 1.0;
        for j in i + 1..n {
            l[j][i] = (a[j][i] - (0..i).map(|k| l[j][k] * u[k][i]).sum::<f64>()) / u[i][i];
        }
    }
    (l, u)
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut c = vec![vec![0.0; p]; n];
    for i in 0..n {
        for k in 0..m {
            for j in 0..p {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn matvec(a: &Dense, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn frobenius(a: &Dense) -> f64 {
    a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let s = norm(b);
    if s == 0.0 {
        norm(&d)
    } else {
        norm(&d) / s
    }
}

/// 5-point operator assembled from coordinates, with no reference to the
/// banded layout.
pub fn dense_laplacian(nx: usize, ny: usize) -> Dense {
    let n = nx * ny;
    let mut a = vec![vec![0.0; n]; n];
    for p in 0..n {
        let (pi, pj) = ((p % nx) as i64, (p / nx) as i64);
        a[p][p] = 4.0;
        for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
            let (qi, qj) = (pi + di, pj + dj);
            if qi >= 0 && qj >= 0 && (qi as usize) < nx && (qj as usize) < ny {
                a[p][qj as usize * nx + qi as usize] = -1.0;
            }
        }
    }
    a
}

/// Dense Schur complement `A_GG - A_GI A_II^{-1} A_IG` of `a` onto `gamma`,
/// by elimination of every other unknown.
pub fn dense_schur(a: &Dense, gamma: &[usize]) -> Dense {
    let n = a.len();
    let interior: Vec<usize> = (0..n).filter(|k| !gamma.contains(k)).collect();
    let aii: Dense = interior
        .iter()
        .map(|&i| interior.iter().map(|&j| a[i][j]).collect())
        .collect();
    let mut s: Dense = gamma
        .iter()
        .map(|&g| gamma.iter().map(|&h| a[g][h]).collect())
        .collect();
    for (c, &h) in gamma.iter().enumerate() {
        if interior.is_empty() {
            break;
        }
        let col: Vec<f64> = interior.iter().map(|&i| a[i][h]).collect();
        let z = dense_solve(&aii, &col);
        for (r, &g) in gamma.iter().enumerate() {
            let corr: f64 = interior.iter().zip(&z).map(|(&i, zi)| a[g][i] * zi).sum();
            s[r][c] -= corr;
        }
    }
    s
}

/// Random symmetric, strictly diagonally dominant band matrix.
pub fn random_spd_band(rng: &mut impl Rng, n: usize, b: usize) -> Dense {
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i + 1..(i + b + 1).min(n) {
            let v = rng.gen_range(-1.0..1.0);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[i][j].abs()).sum();
        a[i][i] = off + rng.gen_range(0.5..2.0);
    }
    a
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}
