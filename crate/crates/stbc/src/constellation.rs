//! Square M-QAM described per real dimension: a PAM alphabet
//! `{+-1, +-3, ..., +-(sqrt(M)-1)}` with Gray bit labels, an optional
//! stretching factor for the imaginary axis, and an energy flag.
//!
//! Raw odd-integer PAM values are the working convention throughout the
//! crate (the detector slices to them directly); energy normalization is
//! folded into the code weights, never into the symbol values.

use num_complex::Complex64;

use crate::{Error, Result};

/// Square QAM constellation (M in {4, 16, 64}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constellation {
    m: usize,
    stretch: f64,
    energy_normalized: bool,
}

impl Constellation {
    /// Plain square M-QAM, raw PAM values, no stretching.
    pub fn square(m: usize) -> Result<Self> {
        if !matches!(m, 4 | 16 | 64) {
            return Err(Error::InvalidQamSize(m));
        }
        Ok(Self { m, stretch: 1.0, energy_normalized: false })
    }

    /// Same constellation with the imaginary axis stretched by `k`.
    pub fn with_stretch(self, k: f64) -> Self {
        assert!(k > 0.0, "stretch factor must be positive");
        Self { stretch: k, ..self }
    }

    /// Flag the PAM values as energy-normalized for display purposes.
    pub fn with_unit_energy(self) -> Self {
        Self { energy_normalized: true, ..self }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sqrt_m(&self) -> usize {
        (self.m as f64).sqrt().round() as usize
    }

    pub fn stretch(&self) -> f64 {
        self.stretch
    }

    pub fn is_energy_normalized(&self) -> bool {
        self.energy_normalized
    }

    /// Bits carried by one PAM value (one real dimension).
    pub fn bits_per_pam(&self) -> usize {
        self.sqrt_m().trailing_zeros() as usize
    }

    /// Raw PAM alphabet, ascending: `-(sqrt(M)-1), ..., -1, 1, ..., sqrt(M)-1`.
    pub fn pam_alphabet(&self) -> Vec<f64> {
        let q = self.sqrt_m() as i64;
        (0..q).map(|i| (2 * i - (q - 1)) as f64).collect()
    }

    /// Mean square of the raw PAM alphabet, `(M-1)/3`.
    pub fn pam_mean_square(&self) -> f64 {
        (self.m as f64 - 1.0) / 3.0
    }

    /// Scale applied to raw PAM values when energy normalization is on;
    /// chosen so a complex symbol (two PAM values) has unit average energy.
    pub fn pam_scale(&self) -> f64 {
        if self.energy_normalized {
            (3.0 / (2.0 * (self.m as f64 - 1.0))).sqrt()
        } else {
            1.0
        }
    }

    /// The complex constellation points `scale * (p + i*k*q)` over the PAM
    /// alphabet; with `k = 1` this is the regular square QAM grid.
    pub fn points(&self) -> Vec<Complex64> {
        let pam = self.pam_alphabet();
        let s = self.pam_scale();
        let mut out = Vec::with_capacity(self.m);
        for &re in &pam {
            for &im in &pam {
                out.push(Complex64::new(s * re, s * self.stretch * im));
            }
        }
        out
    }

    /// Gray-encode `bits_per_pam` bits (MSB first) to a raw PAM value.
    pub fn gray_to_pam(&self, bits: &[bool]) -> Result<f64> {
        let q = self.bits_per_pam();
        if bits.len() != q {
            return Err(Error::BitCountMismatch { expected: q, got: bits.len() });
        }
        let gray = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        // Inverse Gray code: index of the level.
        let mut idx = gray;
        let mut shift = 1;
        while shift < q {
            idx ^= idx >> shift;
            shift <<= 1;
        }
        Ok((2 * idx) as f64 - (self.sqrt_m() as f64 - 1.0))
    }

    /// Gray bits (MSB first) of a raw PAM value; the value must be in the
    /// alphabet.
    pub fn pam_to_gray(&self, value: f64) -> Vec<bool> {
        let q = self.bits_per_pam();
        let idx = ((value + self.sqrt_m() as f64 - 1.0) / 2.0).round() as usize;
        assert!(idx < self.sqrt_m(), "{value} is not a PAM point of {}-QAM", self.m);
        let gray = idx ^ (idx >> 1);
        (0..q).rev().map(|b| (gray >> b) & 1 == 1).collect()
    }

    /// Nearest raw PAM value to `z` (exhaustive; used as a test oracle).
    pub fn nearest_pam(&self, z: f64) -> f64 {
        let mut best = f64::MAX;
        let mut arg = 0.0;
        for p in self.pam_alphabet() {
            let d = (z - p) * (z - p);
            if d < best {
                best = d;
                arg = p;
            }
        }
        arg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_is_symmetric_with_spacing_two() {
        for m in [4usize, 16, 64] {
            let c = Constellation::square(m).unwrap();
            let pam = c.pam_alphabet();
            assert_eq!(pam.len(), c.sqrt_m());
            for w in pam.windows(2) {
                assert_eq!(w[1] - w[0], 2.0);
            }
            let sum: f64 = pam.iter().sum();
            assert_eq!(sum, 0.0);
        }
    }

    #[test]
    fn rejects_non_square_sizes() {
        assert!(Constellation::square(8).is_err());
        assert!(Constellation::square(32).is_err());
    }

    #[test]
    fn gray_round_trip_and_adjacency() {
        for m in [4usize, 16, 64] {
            let c = Constellation::square(m).unwrap();
            let pam = c.pam_alphabet();
            for &p in &pam {
                let bits = c.pam_to_gray(p);
                assert_eq!(c.gray_to_pam(&bits).unwrap(), p);
            }
            // Adjacent levels differ in exactly one bit.
            for w in pam.windows(2) {
                let a = c.pam_to_gray(w[0]);
                let b = c.pam_to_gray(w[1]);
                let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count();
                assert_eq!(diff, 1, "levels {w:?}");
            }
        }
    }

    #[test]
    fn unit_energy_scale_gives_unit_complex_energy() {
        for m in [4usize, 16, 64] {
            let c = Constellation::square(m).unwrap().with_unit_energy();
            let pts = c.points();
            let e: f64 = pts.iter().map(|p| p.norm_sqr()).sum::<f64>() / pts.len() as f64;
            assert!((e - 1.0).abs() < 1e-12, "m={m} energy {e}");
        }
    }

    #[test]
    fn nearest_pam_clips_to_alphabet() {
        let c = Constellation::square(16).unwrap();
        assert_eq!(c.nearest_pam(10.0), 3.0);
        assert_eq!(c.nearest_pam(-0.2), -1.0);
    }
}
