//! Dense complex matrices sized for this crate's needs (at most 32x32).
//!
//! Everything downstream - generator representations, weight matrices,
//! codewords - lives in this one type. Values are immutable in practice:
//! construction helpers return new matrices rather than mutating in place.

use num_complex::Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from row-major complex entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Self { rows, cols, data }
    }

    /// Build from row-major `(re, im)` pairs; handy for literal matrices in tests.
    pub fn from_pairs(rows: usize, cols: usize, entries: &[(f64, f64)]) -> Self {
        let data = entries.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        Self::from_rows(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
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

    /// Matrix-vector product with a complex vector.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length must match cols");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..self.cols {
                acc += self.get(r, c) * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Entry-wise difference.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                for i in 0..other.rows {
                    for j in 0..other.cols {
                        out.set(r * other.rows + i, c * other.cols + j, a * other.get(i, j));
                    }
                }
            }
        }
        out
    }

    /// Keep the first `cols` columns (used to shorten codes to fewer antennas).
    pub fn take_columns(&self, cols: usize) -> Self {
        assert!(cols <= self.cols);
        let mut out = Self::zeros(self.rows, cols);
        for r in 0..self.rows {
            for c in 0..cols {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }

    /// Largest entry-wise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entry-wise equality within an absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Deviation from unitarity, `max |M^H M - I|`.
    pub fn unitarity_violation(&self) -> f64 {
        let n = self.cols;
        self.adjoint().mul(self).max_abs_diff(&Self::identity(n))
    }

    /// Determinant by LU with partial pivoting (square matrices only).
    pub fn det(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 4 {
            return det4(self);
        }
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let mut pivot = k;
            let mut best = a[k * n + k].norm_sqr();
            for r in (k + 1)..n {
                let v = a[r * n + k].norm_sqr();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != k {
                for c in 0..n {
                    a.swap(k * n + c, pivot * n + c);
                }
                det = -det;
            }
            let d = a[k * n + k];
            det *= d;
            for r in (k + 1)..n {
                let f = a[r * n + k] / d;
                for c in (k + 1)..n {
                    let v = a[k * n + c];
                    a[r * n + c] -= f * v;
                }
            }
        }
        det
    }

    /// `[Re(vec(M)); Im(vec(M))]` with column-major vec, as used by the real
    /// equivalent channel and the rank computation.
    pub fn realified_vec(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self.get(r, c).re);
            }
        }
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self.get(r, c).im);
            }
        }
        out
    }
}

/// 4x4 determinant by Laplace expansion over 2x2 minors. Exact-ish for the
/// small-integer-entry matrices that dominate the coding gain scans, and much
/// faster than LU inside the 3^16 difference enumeration.
pub fn det4(m: &CMat) -> Complex64 {
    debug_assert_eq!((m.rows(), m.cols()), (4, 4));
    det4_slice(&m.data)
}

/// [`det4`] on a row-major slice of 16 entries, for allocation-free scans.
pub fn det4_slice(e: &[Complex64]) -> Complex64 {
    debug_assert_eq!(e.len(), 16);
    let a = |r: usize, c: usize| e[r * 4 + c];
    let m01 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    let m02 = a(0, 0) * a(1, 2) - a(0, 2) * a(1, 0);
    let m03 = a(0, 0) * a(1, 3) - a(0, 3) * a(1, 0);
    let m12 = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    let m13 = a(0, 1) * a(1, 3) - a(0, 3) * a(1, 1);
    let m23 = a(0, 2) * a(1, 3) - a(0, 3) * a(1, 2);

    let n01 = a(2, 0) * a(3, 1) - a(2, 1) * a(3, 0);
    let n02 = a(2, 0) * a(3, 2) - a(2, 2) * a(3, 0);
    let n03 = a(2, 0) * a(3, 3) - a(2, 3) * a(3, 0);
    let n12 = a(2, 1) * a(3, 2) - a(2, 2) * a(3, 1);
    let n13 = a(2, 1) * a(3, 3) - a(2, 3) * a(3, 1);
    let n23 = a(2, 2) * a(3, 3) - a(2, 3) * a(3, 2);

    m01 * n23 - m02 * n13 + m03 * n12 + m12 * n03 - m13 * n02 + m23 * n01
}
