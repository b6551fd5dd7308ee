// Dense factorizations for the small systems used here (grids of tens of
// points, regression designs with a handful of columns).

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Lower Cholesky factor of a symmetric `m x m` row-major matrix, or `None`
/// when a pivot is not strictly positive.
pub(crate) fn cholesky(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = a[i * m + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * m + i] = math::sqrt(s);
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    Some(l)
}

/// Householder QR of an `n x p` design matrix (`n >= p`).
#[derive(Clone, Debug)]
pub(crate) struct Qr {
    n: usize,
    p: usize,
    // Column-major; R in the upper triangle, reflector tails below it.
    a: Vec<f64>,
    // Reflector heads and scales.
    v0: Vec<f64>,
    beta: Vec<f64>,
}

impl Qr {
    /// `rows` is row-major `n x p`. Fails when a column is numerically
    /// dependent on the previous ones.
    pub(crate) fn new(rows: &[f64], n: usize, p: usize) -> Option<Qr> {
        if n < p {
            return None;
        }
        let mut a = vec![0.0; n * p];
        for i in 0..n {
            for j in 0..p {
                a[j * n + i] = rows[i * p + j];
            }
        }
        let col_norms: Vec<f64> = (0..p)
            .map(|j| math::sqrt(a[j * n..(j + 1) * n].iter().map(|v| v * v).sum()))
            .collect();
        let mut v0 = vec![0.0; p];
        let mut beta = vec![0.0; p];
        for k in 0..p {
            let col = &a[k * n..(k + 1) * n];
            let norm = math::sqrt(col[k..].iter().map(|v| v * v).sum());
            if !(norm > 1e-12 * col_norms[k]) || col_norms[k] == 0.0 {
                return None;
            }
            let alpha = if col[k] >= 0.0 { -norm } else { norm };
            let head = col[k] - alpha;
            // v = (head, col[k+1..]); beta = 2 / (v'v)
            let vtv = head * head + col[k + 1..].iter().map(|v| v * v).sum::<f64>();
            v0[k] = head;
            beta[k] = if vtv > 0.0 { 2.0 / vtv } else { 0.0 };
            for j in k + 1..p {
                let mut s = head * a[j * n + k];
                for i in k + 1..n {
                    s += a[k * n + i] * a[j * n + i];
                }
                s *= beta[k];
                a[j * n + k] -= s * head;
                for i in k + 1..n {
                    a[j * n + i] -= s * a[k * n + i];
                }
            }
            a[k * n + k] = alpha;
        }
        Some(Qr { n, p, a, v0, beta })
    }

    fn apply_qt(&self, y: &mut [f64]) {
        let n = self.n;
        for k in 0..self.p {
            let tail = &self.a[k * n + k + 1..(k + 1) * n];
            let mut s = self.v0[k] * y[k];
            for (i, v) in tail.iter().enumerate() {
                s += v * y[k + 1 + i];
            }
            s *= self.beta[k];
            y[k] -= s * self.v0[k];
            for (i, v) in tail.iter().enumerate() {
                y[k + 1 + i] -= s * v;
            }
        }
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        self.a[j * self.n + i]
    }

    /// Least-squares coefficients and residual sum of squares for `y`.
    pub(crate) fn solve(&self, y: &[f64]) -> (Vec<f64>, f64) {
        let mut z = y.to_vec();
        self.apply_qt(&mut z);
        let rss = z[self.p..].iter().map(|v| v * v).sum();
        let mut theta = vec![0.0; self.p];
        for i in (0..self.p).rev() {
            let mut s = z[i];
            for (j, t) in theta.iter().enumerate().skip(i + 1) {
                s -= self.r(i, j) * t;
            }
            theta[i] = s / self.r(i, i);
        }
        (theta, rss)
    }

    /// `sqrt(h' (X'X)^{-1} h)`, computed as `|R^{-T} h|`.
    pub(crate) fn leverage_norm(&self, h: &[f64]) -> f64 {
        let mut w = vec![0.0; self.p];
        for i in 0..self.p {
            let mut s = h[i];
            for (k, wk) in w.iter().enumerate().take(i) {
                s -= self.r(k, i) * wk;
            }
            w[i] = s / self.r(i, i);
        }
        math::sqrt(w.iter().map(|v| v * v).sum())
    }
}
