//! Banded matrices and the no-pivot banded LU kernel.
//!
//! Storage follows the LAPACK `gb` layout: column `j` keeps rows
//! `j - ku ..= j + kl` contiguously, so both the elimination update and the
//! triangular solves sweep contiguous memory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pivots at or below this fraction of the largest diagonal entry are rejected,
/// which also rejects the negative pivots of indefinite matrices.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Result<Self> {
        if n == 0 || kl >= n || ku >= n {
            return Err(Error::InvalidBand { n, kl, ku });
        }
        Ok(Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, 0, 0)?;
        m.data.fill(1.0);
        Ok(m)
    }

    /// Copies the band `|i - j| <= kl/ku` out of a dense row-major matrix.
    pub fn from_dense(dense: &[Vec<f64>], kl: usize, ku: usize) -> Result<Self> {
        let n = dense.len();
        let mut m = Self::zeros(n, kl, ku)?;
        for (i, row) in dense.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                m.set(i, j, row[j]);
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn ld(&self) -> usize {
        self.kl + self.ku + 1
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.kl && j <= i + self.ku
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        j * self.ld() + self.ku + i - j
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.offset(i, j)]
        } else {
            0.0
        }
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.offset(i, j);
        self.data[k] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.offset(i, j);
        self.data[k] += value;
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.n];
        let ld = self.ld();
        for (j, &xj) in x.iter().enumerate() {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            let col = &self.data[j * ld + self.ku + lo - j..=j * ld + self.ku + hi - j];
            for (yi, a) in y[lo..=hi].iter_mut().zip(col) {
                *yi += a * xj;
            }
        }
        Ok(y)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn max_diagonal(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[self.offset(i, i)].abs())
            .fold(0.0, f64::max)
    }
}

/// In-place LU factors: unit lower `L` below the diagonal, `U` on and above it.
#[derive(Debug, Clone)]
pub struct BandedLu {
    factors: BandedMatrix,
    flop_count: u64,
}

impl BandedLu {
    pub fn order(&self) -> usize {
        self.factors.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.factors.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.factors.ku
    }

    /// Divisions plus multiply-adds performed by the factorization.
    pub fn flop_count(&self) -> u64 {
        self.flop_count
    }

    /// Entry `(i, j)` of `L` (unit diagonal).
    pub fn l(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Greater => self.factors.get(i, j),
            std::cmp::Ordering::Less => 0.0,
        }
    }

    pub fn u(&self, i: usize, j: usize) -> f64 {
        if i <= j {
            self.factors.get(i, j)
        } else {
            0.0
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let f = &self.factors;
        let n = f.n;
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let (kl, ku, ld) = (f.kl, f.ku, f.ld());

        for k in 0..n {
            let r = kl.min(n - 1 - k);
            if r == 0 {
                continue;
            }
            let xk = x[k];
            let base = k * ld + ku + 1;
            let l = &f.data[base..base + r];
            for (xi, li) in x[k + 1..=k + r].iter_mut().zip(l) {
                *xi -= li * xk;
            }
        }

        for k in (0..n).rev() {
            let base = k * ld + ku;
            x[k] /= f.data[base];
            let c = ku.min(k);
            if c == 0 {
                continue;
            }
            let xk = x[k];
            let u = &f.data[base - c..base];
            for (xi, ui) in x[k - c..k].iter_mut().zip(u) {
                *xi -= ui * xk;
            }
        }
        Ok(())
    }
}

/// Columns updated together by the blocked elimination.
const COLUMN_BLOCK: usize = 16;

/// Factors `m = L U` without pivoting. Consumes the matrix and reuses its storage.
///
/// Columns are processed in blocks of [`COLUMN_BLOCK`]: every finished `L`
/// column is applied to all columns of the current block before moving on, so
/// the block stays cache resident while the `L` columns stream past it once.
/// Each entry receives its updates in increasing pivot order, exactly as in the
/// textbook right-looking loop.
pub fn factor(mut m: BandedMatrix) -> Result<BandedLu> {
    let n = m.n;
    let (kl, ku) = (m.kl, m.ku);
    let ld = m.ld();
    let threshold = PIVOT_TOLERANCE * m.max_diagonal();
    let mut flops = 0u64;

    for j0 in (0..n).step_by(COLUMN_BLOCK) {
        let j1 = (j0 + COLUMN_BLOCK).min(n);
        for k in j0.saturating_sub(ku)..j1 {
            let diag = k * ld + ku;
            let r = kl.min(n - 1 - k);
            if k >= j0 {
                // column k has received all updates from earlier pivots
                let pivot = m.data[diag];
                if !(pivot > threshold) {
                    return Err(Error::SingularPivot { index: k, pivot });
                }
                let inv = 1.0 / pivot;
                for l in &mut m.data[diag + 1..diag + 1 + r] {
                    *l *= inv;
                }
                flops += r as u64;
            }
            if r == 0 {
                continue;
            }
            let first = (k + 1).max(j0);
            let last = j1.min(k + ku + 1);
            if first >= last {
                continue;
            }
            let (head, tail) = m.data.split_at_mut(first * ld);
            let multipliers = &head[diag + 1..diag + 1 + r];
            for j in first..last {
                // column j holds row k at offset ku + k - j, rows below follow it
                let start = (j - first) * ld + ku + k - j;
                let col = &mut tail[start..start + 1 + r];
                let ukj = col[0];
                for (a, l) in col[1..].iter_mut().zip(multipliers) {
                    *a -= l * ukj;
                }
            }
            flops += (r * (last - first)) as u64;
        }
    }

    Ok(BandedLu {
        factors: m,
        flop_count: flops,
    })
}

/// Multiply-add model `n b (b + 2)` for factoring an order-`n` matrix with
/// semi-bandwidth `b`. With row-major ordering of a 2D grid `b ~ sqrt(n)`, so
/// the model grows like `n^2`.
pub fn flop_model(n: usize, b: usize) -> f64 {
    let (n, b) = (n as f64, b as f64);
    n * b * (b + 2.0)
}
