use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Square band matrix with `lower` sub- and `upper` super-diagonals.
///
/// Row `i` stores columns `i − lower ..= i + upper` contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        Self {
            n,
            lower,
            upper,
            data: vec![0.0; n * (lower + upper + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    #[inline]
    fn width(&self) -> usize {
        self.lower + self.upper + 1
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.lower >= i && j <= i + self.upper
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i < self.n && j < self.n && self.in_band(i, j) {
            self.data[i * self.width() + j + self.lower - i]
        } else {
            0.0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            i < self.n && j < self.n && self.in_band(i, j),
            "({i}, {j}) outside the band"
        );
        let w = self.width();
        self.data[i * w + j + self.lower - i] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Columns `(first, entries)` stored for row `i`, clipped to the matrix.
    fn row_span(&self, i: usize) -> (usize, &[f64]) {
        let w = self.width();
        let first = i.saturating_sub(self.lower);
        let last = (i + self.upper).min(self.n - 1);
        let off = first + self.lower - i;
        (
            first,
            &self.data[i * w + off..i * w + off + (last - first + 1)],
        )
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let (first, row) = self.row_span(i);
                row.iter().zip(&x[first..]).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row_span(i).1.iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            let (first, row) = self.row_span(i);
            row.iter()
                .enumerate()
                .all(|(k, a)| *a == self.get(first + k, i))
        })
    }
}

/// LU factorization of a band matrix with partial pivoting.
///
/// Row interchanges widen the upper band to `lower + upper`; multipliers are
/// kept per elimination step and replayed with the interchanges on solve.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    lower: usize,
    /// Row `i` of `U`: columns `i ..= i + lower + upper`.
    u: Vec<f64>,
    /// Multipliers of step `i` for rows `i+1 ..= i+lower`.
    l: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    /// Fails with [`Error::SingularOperator`] when a pivot is below
    /// `1e-14 · max|a_ij|`.
    pub fn factor(a: &BandMatrix) -> Result<Self> {
        let n = a.n;
        let kl = a.lower;
        let ku = a.upper;
        let uw = kl + ku + 1;
        // working rows hold columns r − kl ..= r + kl + ku
        let ww = 2 * kl + ku + 1;
        let mut work = vec![0.0; n * ww];
        for r in 0..n {
            let (first, row) = a.row_span(r);
            for (k, v) in row.iter().enumerate() {
                let j = first + k;
                work[r * ww + j + kl - r] = *v;
            }
        }
        let at = |r: usize, j: usize| r * ww + j + kl - r;

        let threshold = 1e-14 * a.max_abs();
        let mut l = vec![0.0; n * kl.max(1)];
        let mut pivots = vec![0; n];
        let mut u = vec![0.0; n * uw];

        for i in 0..n {
            let last_row = (i + kl).min(n - 1);
            let last_col = (i + kl + ku).min(n - 1);
            let mut p = i;
            let mut best = work[at(i, i)].abs();
            for r in i + 1..=last_row {
                let v = work[at(r, i)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best <= threshold {
                return Err(Error::SingularOperator {
                    row: i,
                    pivot: best,
                });
            }
            pivots[i] = p;
            if p != i {
                for j in i..=last_col {
                    work.swap(at(i, j), at(p, j));
                }
            }
            let piv = work[at(i, i)];
            for r in i + 1..=last_row {
                let m = work[at(r, i)] / piv;
                l[i * kl + (r - i - 1)] = m;
                if m == 0.0 {
                    continue;
                }
                for j in i + 1..=last_col {
                    let v = work[at(i, j)];
                    work[at(r, j)] -= m * v;
                }
            }
            for j in i..=last_col {
                u[i * uw + (j - i)] = work[at(i, j)];
            }
        }
        Ok(Self {
            n,
            lower: kl,
            u,
            l,
            pivots,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let kl = self.lower;
        let uw = self.u.len() / n.max(1);
        for i in 0..n {
            let p = self.pivots[i];
            if p != i {
                b.swap(i, p);
            }
            let bi = b[i];
            if bi != 0.0 {
                let last = (i + kl).min(n - 1);
                for r in i + 1..=last {
                    b[r] -= self.l[i * kl + (r - i - 1)] * bi;
                }
            }
        }
        for i in (0..n).rev() {
            let row = &self.u[i * uw..(i + 1) * uw];
            let last = (i + uw - 1).min(n - 1);
            let mut s = b[i];
            for j in i + 1..=last {
                s -= row[j - i] * b[j];
            }
            b[i] = s / row[0];
        }
    }
}
