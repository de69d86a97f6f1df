//! Quasi-static Rayleigh channel simulation and the linearized real model.
//!
//! One codeword sees one channel draw. The complex model `Y = X H + W` is
//! rewritten over the reals by stacking `A_k h_i` columns and splitting real
//! and imaginary parts, then reduced by a thin QR so the detector works on
//! `min || y' - R s ||^2` with `R` upper triangular.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::cmatrix::CMat;
use crate::linalg::{qr_thin, RMat};
use crate::{Error, Result};

/// One channel draw plus the active noise level.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// `Nt x Nr`, entries i.i.d. circularly-symmetric complex Gaussian with
    /// unit variance.
    pub h: CMat,
    /// Noise spectral level; complex noise entries have variance `n0`.
    pub n0: f64,
}

/// The real equivalent channel and its QR factors.
#[derive(Debug, Clone)]
pub struct RealEquivalentChannel {
    /// `2*Nr*T x 2K` real matrix.
    pub h_tilde: RMat,
    /// Thin orthonormal factor, `2*Nr*T x 2K`.
    pub q1: RMat,
    /// `2K x 2K` upper triangular with non-negative diagonal.
    pub r: RMat,
}

/// Draw a `4 x nr` channel matrix with `CN(0,1)` entries.
pub fn draw_channel<R: Rng>(rng: &mut R, nr: usize) -> CMat {
    draw_channel_nt(rng, 4, nr)
}

/// Draw an `nt x nr` channel matrix with `CN(0,1)` entries.
pub fn draw_channel_nt<R: Rng>(rng: &mut R, nt: usize, nr: usize) -> CMat {
    let scale = 0.5f64.sqrt();
    let mut h = CMat::zeros(nt, nr);
    for r in 0..nt {
        for c in 0..nr {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            h.set(r, c, Complex64::new(re * scale, im * scale));
        }
    }
    h
}

/// Map "SNR per receive antenna" in dB to the noise level `N0`, for codes
/// normalized to unit average transmit power per antenna: the received
/// signal power per receive antenna per channel use is `Nt`.
pub fn snr_to_n0(snr_db: f64, nt: usize) -> f64 {
    nt as f64 / 10f64.powf(snr_db / 10.0)
}

/// Build the real equivalent channel for a set of effective weights
/// (stretching and normalization already folded in) and a channel draw.
pub fn build_equivalent_channel(weights: &[CMat], h: &CMat) -> Result<RealEquivalentChannel> {
    let t = weights[0].rows();
    let nr = h.cols();
    let two_k = weights.len();
    if 2 * nr * t < two_k {
        return Err(Error::DimensionShortfall { nr_t: nr * t, k: two_k / 2 });
    }

    // Column k of the complex model stacks A_k h_i over receive antennas.
    let mut h_tilde = RMat::zeros(2 * nr * t, two_k);
    for (k, w) in weights.iter().enumerate() {
        for i in 0..nr {
            let hi: Vec<Complex64> = (0..h.rows()).map(|r| h.get(r, i)).collect();
            let col = w.mul_vec(&hi);
            for (row, v) in col.iter().enumerate() {
                h_tilde.set(i * t + row, k, v.re);
                h_tilde.set(nr * t + i * t + row, k, v.im);
            }
        }
    }

    let (q1, r) = qr_thin(&h_tilde);
    Ok(RealEquivalentChannel { h_tilde, q1, r })
}

impl RealEquivalentChannel {
    /// Rotate a received matrix `Y` (`T x Nr`) into the reduced observation
    /// `y' = Q1^T y_tilde`.
    pub fn observe(&self, y: &CMat) -> Vec<f64> {
        let (t, nr) = (y.rows(), y.cols());
        let mut y_tilde = vec![0.0; 2 * nr * t];
        for i in 0..nr {
            for row in 0..t {
                y_tilde[i * t + row] = y.get(row, i).re;
                y_tilde[nr * t + i * t + row] = y.get(row, i).im;
            }
        }
        self.q1.tr_mul_vec(&y_tilde)
    }
}

/// Transmit a codeword: `Y = X H + W` with `W` entries `CN(0, n0)`.
pub fn transmit<R: Rng>(x: &CMat, h: &CMat, n0: f64, rng: &mut R) -> CMat {
    let mut y = x.mul(h);
    let scale = (n0 / 2.0).sqrt();
    for r in 0..y.rows() {
        for c in 0..y.cols() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let v = y.get(r, c) + Complex64::new(re * scale, im * scale);
            y.set(r, c, v);
        }
    }
    y
}
