//! Small real matrices and the Householder QR used by the detector front end.

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            let mut acc = 0.0;
            for c in 0..self.cols {
                acc += self.get(r, c) * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// `self^T * v`, without materializing the transpose.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let x = v[r];
            if x == 0.0 {
                continue;
            }
            for c in 0..self.cols {
                out[c] += self.get(r, c) * x;
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Rank with an absolute pivot tolerance, by row echelon elimination.
    pub fn rank(&self, tol: f64) -> usize {
        let mut a = self.data.clone();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            if row == m {
                break;
            }
            let mut pivot = row;
            let mut best = a[row * n + col].abs();
            for r in (row + 1)..m {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best <= tol {
                continue;
            }
            if pivot != row {
                for c in 0..n {
                    a.swap(row * n + c, pivot * n + c);
                }
            }
            let d = a[row * n + col];
            for r in (row + 1)..m {
                let f = a[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                for c in col..n {
                    let v = a[row * n + c];
                    a[r * n + c] -= f * v;
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }
}

/// Thin QR factorization, `A = Q1 * R`, by Householder reflections.
///
/// `Q1` is `m x n` with orthonormal columns and `R` is `n x n` upper
/// triangular. The factorization is sign-fixed so the diagonal of `R` is
/// non-negative, which the tree-search decoders rely on. Requires `m >= n`.
pub fn qr_thin(a: &RMat) -> (RMat, RMat) {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n, "qr_thin needs rows >= cols");
    let mut work = a.clone();
    // Accumulate Q by applying the reflectors to a tall identity.
    let mut q = RMat::zeros(m, m);
    for i in 0..m {
        q.set(i, i, 1.0);
    }
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(n);

    for k in 0..n {
        // Householder vector for column k below the diagonal.
        let mut norm = 0.0;
        for r in k..m {
            norm += work.get(r, k) * work.get(r, k);
        }
        let norm = norm.sqrt();
        let mut v = vec![0.0; m - k];
        if norm > 0.0 {
            let akk = work.get(k, k);
            let alpha = if akk >= 0.0 { -norm } else { norm };
            v[0] = akk - alpha;
            for r in (k + 1)..m {
                v[r - k] = work.get(r, k);
            }
            let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
            if vnorm_sq > 0.0 {
                // Apply I - 2 v v^T / (v^T v) to the trailing block of `work`.
                for c in k..n {
                    let mut dot = 0.0;
                    for r in k..m {
                        dot += v[r - k] * work.get(r, c);
                    }
                    let f = 2.0 * dot / vnorm_sq;
                    for r in k..m {
                        let val = work.get(r, c) - f * v[r - k];
                        work.set(r, c, val);
                    }
                }
            }
        }
        vs.push(v);
    }

    // Q = H_0 H_1 ... H_{n-1} applied to I (columns of Q are built by
    // applying the reflectors in reverse to the identity block).
    for k in (0..n).rev() {
        let v = &vs[k];
        let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        for c in 0..m {
            let mut dot = 0.0;
            for r in k..m {
                dot += v[r - k] * q.get(r, c);
            }
            let f = 2.0 * dot / vnorm_sq;
            for r in k..m {
                let val = q.get(r, c) - f * v[r - k];
                q.set(r, c, val);
            }
        }
    }

    // Thin factors with the non-negative-diagonal sign convention.
    let mut q1 = RMat::zeros(m, n);
    let mut r = RMat::zeros(n, n);
    for j in 0..n {
        let sign = if work.get(j, j) < 0.0 { -1.0 } else { 1.0 };
        for c in j..n {
            r.set(j, c, sign * work.get(j, c));
        }
        for i in 0..m {
            q1.set(i, j, sign * q.get(i, j));
        }
    }
    (q1, r)
}
