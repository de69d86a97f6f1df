//! The three four-antenna codes: the rate-1 two-group code with
//! constellation stretching, the rate-2 code that multiplexes two rate-1
//! layers through a unitary matrix, and the rate-3/2 code obtained by
//! puncturing the second layer.
//!
//! Symbol conventions, fixed once here and relied on everywhere else:
//!
//! * Real symbols are raw odd PAM values. Constellation energy scaling and
//!   transmit-power normalization live in the weight matrices.
//! * Layer 1 carries `x1..x8` (group 1 then group 2), layer 2 carries
//!   `x9..x16` in the same internal order; the rate-3/2 code keeps only
//!   `x9..x12` of the second layer.
//! * Complex information symbol `c_m` maps its real part to `x_m` and its
//!   imaginary part to `x_{m+4}` within a layer.
//! * The stretching factor `k` multiplies the imaginary-axis weights
//!   (`x4..x7` of each layer), so every code-matrix entry takes values on a
//!   stretched QAM grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{clifford_generators, Sign};
use crate::cmatrix::CMat;
use crate::constellation::Constellation;
use crate::weights::WeightSet;
use crate::{Error, Result};

/// Default stretching factor, `sqrt(3/5)`; makes the coding gain
/// non-vanishing with minimum determinant 1.
pub fn optimal_stretch() -> f64 {
    (3.0f64 / 5.0).sqrt()
}

/// Default multiplexing phase, `atan(1/2)`.
pub fn optimal_phi() -> f64 {
    0.5f64.atan()
}

/// Which of the three codes is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeKind {
    Rate1,
    Rate32,
    Rate2,
}

impl CodeKind {
    /// Number of real symbols per codeword (`2K`).
    pub fn symbol_count(self) -> usize {
        match self {
            CodeKind::Rate1 => 8,
            CodeKind::Rate32 => 12,
            CodeKind::Rate2 => 16,
        }
    }

    /// Complex symbols per channel use.
    pub fn rate(self) -> f64 {
        self.symbol_count() as f64 / 8.0
    }

    pub fn name(self) -> &'static str {
        match self {
            CodeKind::Rate1 => "rate1",
            CodeKind::Rate32 => "rate32",
            CodeKind::Rate2 => "rate2",
        }
    }
}

impl std::str::FromStr for CodeKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rate1" | "rate-1" => Ok(CodeKind::Rate1),
            "rate32" | "rate-3/2" | "rate3/2" => Ok(CodeKind::Rate32),
            "rate2" | "rate-2" => Ok(CodeKind::Rate2),
            other => Err(format!("unknown code kind '{other}'")),
        }
    }
}

/// Selection of the multiplexing matrix `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UMatrix {
    /// `j * R_1 = diag(-1, 1, 1, -1)`, the coding-gain-optimal choice.
    JR1,
    Identity,
}

impl UMatrix {
    pub fn matrix(self) -> CMat {
        match self {
            UMatrix::JR1 => {
                let g = clifford_generators(2, Sign::Plus).expect("a=2");
                g.r(1).scale(Complex64::new(0.0, 1.0))
            }
            UMatrix::Identity => CMat::identity(4),
        }
    }
}

/// Full parameterization of one code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub kind: CodeKind,
    /// Stretching factor `k`.
    pub stretch: f64,
    /// Layer-2 phase.
    pub phi: f64,
    /// Layer-2 unitary.
    pub u: UMatrix,
    /// Combined-layer amplitude normalization; chosen so unit-energy complex
    /// symbols give unit average transmit power per antenna per time slot.
    pub normalization: f64,
}

/// One encoded codeword together with its source symbols.
#[derive(Debug, Clone)]
pub struct Codeword {
    pub matrix: CMat,
    pub source_symbols: Vec<f64>,
}

impl CodeSpec {
    /// A code with the published optimal parameters.
    pub fn new(kind: CodeKind) -> Self {
        Self::with_params(kind, optimal_stretch(), optimal_phi(), UMatrix::JR1)
    }

    pub fn rate1() -> Self {
        Self::new(CodeKind::Rate1)
    }

    pub fn rate32() -> Self {
        Self::new(CodeKind::Rate32)
    }

    pub fn rate2() -> Self {
        Self::new(CodeKind::Rate2)
    }

    /// A code with explicit parameters; the normalization is derived from
    /// the resulting weights.
    pub fn with_params(kind: CodeKind, stretch: f64, phi: f64, u: UMatrix) -> Self {
        assert!(stretch > 0.0, "stretch must be positive");
        let mut spec = Self { kind, stretch, phi, u, normalization: 1.0 };
        spec.normalization = 1.0 / spec.mean_antenna_power_raw().sqrt();
        spec
    }

    /// Serialize to the text config format.
    pub fn to_config(&self) -> String {
        serde_json::to_string_pretty(self).expect("codespec json")
    }

    /// Parse the text config format; missing fields take the defaults.
    pub fn from_config(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Repr {
            kind: CodeKind,
            stretch: Option<f64>,
            phi: Option<f64>,
            u: Option<UMatrix>,
            normalization: Option<f64>,
        }
        let r: Repr = serde_json::from_str(text)?;
        let mut spec = Self::with_params(
            r.kind,
            r.stretch.unwrap_or_else(optimal_stretch),
            r.phi.unwrap_or_else(optimal_phi),
            r.u.unwrap_or(UMatrix::JR1),
        );
        if let Some(n) = r.normalization {
            assert!(n > 0.0, "normalization must be positive");
            spec.normalization = n;
        }
        Ok(spec)
    }

    /// Number of real symbols per codeword.
    pub fn symbol_count(&self) -> usize {
        self.kind.symbol_count()
    }

    /// Bits per codeword for a given constellation.
    pub fn bits_per_codeword(&self, cons: &Constellation) -> usize {
        self.symbol_count() * cons.bits_per_pam()
    }

    /// The first-layer weights with the per-layer power factor
    /// `sqrt(2/(1+k^2))` and the stretching folded in.
    fn layer_one_weights(&self) -> Vec<CMat> {
        let g = clifford_generators(2, Sign::Plus).expect("a=2");
        let k = self.stretch;
        let c = (2.0 / (1.0 + k * k)).sqrt();
        let re = Complex64::new(c, 0.0);
        let im = Complex64::new(c * k, 0.0);
        let r135 = g.r(1).mul(g.r(3)).mul(g.r(5));
        let r24 = g.r(2).mul(g.r(4));
        vec![
            CMat::identity(4).scale(re),
            g.r(2).scale(re),
            g.r(4).scale(re),
            r135.scale(-im),
            g.r(1).scale(im),
            g.r(3).scale(im),
            g.r(5).scale(im),
            r24.scale(re),
        ]
    }

    /// All `2K` weights prior to power normalization and constellation
    /// scaling: the convention under which the minimum determinants are
    /// constellation-independent.
    pub fn raw_weights(&self) -> Vec<CMat> {
        let layer1 = self.layer_one_weights();
        match self.kind {
            CodeKind::Rate1 => layer1,
            CodeKind::Rate32 | CodeKind::Rate2 => {
                let u = self.u.matrix();
                let phase = Complex64::from_polar(1.0, self.phi);
                let layer2_len = if self.kind == CodeKind::Rate2 { 8 } else { 4 };
                let mut out = layer1.clone();
                out.extend(layer1.iter().take(layer2_len).map(|w| w.mul(&u).scale(phase)));
                out
            }
        }
    }

    /// Mean per-antenna per-slot power of the raw weights for unit-energy
    /// complex symbols (`E[x^2] = 1/2` per real symbol).
    fn mean_antenna_power_raw(&self) -> f64 {
        let ws = self.raw_weights();
        let (t, nt) = (ws[0].rows(), ws[0].cols());
        let mut total = 0.0;
        for w in &ws {
            for e in w.entries() {
                total += 0.5 * e.norm_sqr();
            }
        }
        total / (t * nt) as f64
    }

    /// Weights actually transmitted and used to build the real equivalent
    /// channel: raw weights scaled by the power normalization and by the
    /// constellation's unit-energy factor, so raw PAM symbols produce unit
    /// average power per antenna.
    pub fn detection_weights(&self, cons: &Constellation) -> Vec<CMat> {
        let eta = (3.0 / (2.0 * (cons.m() as f64 - 1.0))).sqrt();
        let s = Complex64::new(self.normalization * eta, 0.0);
        self.raw_weights().into_iter().map(|w| w.scale(s)).collect()
    }

    /// Encode a real symbol vector: `normalization * sum_k W_k x_k` over the
    /// raw weights.
    pub fn encode(&self, s: &[f64]) -> Result<Codeword> {
        let expected = self.symbol_count();
        if s.len() != expected {
            return Err(Error::LengthMismatch { expected, got: s.len() });
        }
        let mut out = CMat::zeros(4, 4);
        for (w, &x) in self.raw_weights().iter().zip(s) {
            if x != 0.0 {
                out = out.add(&w.scale(Complex64::new(x, 0.0)));
            }
        }
        Ok(Codeword {
            matrix: out.scale(Complex64::new(self.normalization, 0.0)),
            source_symbols: s.to_vec(),
        })
    }

    /// Symbol index order in which bit chunks are consumed: within each
    /// layer, complex symbol `c_m` fills `x_m` then `x_{m+4}`.
    fn bit_fill_order(&self) -> Vec<usize> {
        match self.kind {
            CodeKind::Rate1 => vec![0, 4, 1, 5, 2, 6, 3, 7],
            CodeKind::Rate2 => vec![0, 4, 1, 5, 2, 6, 3, 7, 8, 12, 9, 13, 10, 14, 11, 15],
            CodeKind::Rate32 => vec![0, 4, 1, 5, 2, 6, 3, 7, 8, 9, 10, 11],
        }
    }

    /// Gray-map a bit slice to the raw PAM symbol vector.
    pub fn map_bits_to_symbols(&self, bits: &[bool], cons: &Constellation) -> Result<Vec<f64>> {
        let q = cons.bits_per_pam();
        let expected = self.bits_per_codeword(cons);
        if bits.len() != expected {
            return Err(Error::BitCountMismatch { expected, got: bits.len() });
        }
        let mut s = vec![0.0; self.symbol_count()];
        for (chunk, &idx) in bits.chunks(q).zip(self.bit_fill_order().iter()) {
            s[idx] = cons.gray_to_pam(chunk)?;
        }
        Ok(s)
    }

    /// Inverse of [`CodeSpec::map_bits_to_symbols`]; symbols are first
    /// clipped to the nearest PAM value.
    pub fn symbols_to_bits(&self, s: &[f64], cons: &Constellation) -> Vec<bool> {
        assert_eq!(s.len(), self.symbol_count());
        let mut bits = Vec::with_capacity(self.bits_per_codeword(cons));
        for &idx in &self.bit_fill_order() {
            bits.extend(cons.pam_to_gray(cons.nearest_pam(s[idx])));
        }
        bits
    }

    /// The rate-1 weight set with its two-group / inner-singleton
    /// annotations, for structure verification.
    pub fn annotated_rate1_weight_set(&self) -> WeightSet {
        assert_eq!(self.kind, CodeKind::Rate1, "annotation applies to the rate-1 code");
        WeightSet {
            nt: 4,
            t: 4,
            matrices: self.raw_weights(),
            groups: vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]],
            inner_groups: vec![
                vec![vec![0], vec![1], vec![2]],
                vec![vec![4], vec![5], vec![6]],
            ],
        }
    }

    /// Peak-to-average power ratio over all codebook entries and matrix
    /// positions, in dB. Exact: every matrix position depends on at most
    /// four real symbols, so the per-position level sets are enumerated.
    pub fn papr_db(&self, cons: &Constellation) -> f64 {
        let ws = self.raw_weights();
        let pam = cons.pam_alphabet();
        let (t, nt) = (ws[0].rows(), ws[0].cols());
        let mut peak: f64 = 0.0;
        let mut mean_sum = 0.0;
        for r in 0..t {
            for c in 0..nt {
                let coefs: Vec<Complex64> = ws
                    .iter()
                    .map(|w| w.get(r, c))
                    .filter(|z| z.norm_sqr() > 1e-24)
                    .collect();
                let combos = pam.len().pow(coefs.len() as u32);
                let mut sum = 0.0;
                for combo in 0..combos {
                    let mut idx = combo;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for z in &coefs {
                        acc += z * pam[idx % pam.len()];
                        idx /= pam.len();
                    }
                    let p = acc.norm_sqr();
                    peak = peak.max(p);
                    sum += p;
                }
                mean_sum += sum / combos as f64;
            }
        }
        let mean = mean_sum / (t * nt) as f64;
        10.0 * (peak / mean).log10()
    }
}
