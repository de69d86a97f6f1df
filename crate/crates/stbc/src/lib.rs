//! Low-complexity space-time block codes for four (and more generally `2^a`)
//! transmit antennas.
//!
//! The crate builds rate-1 fast-group-decodable codes from unitary matrix
//! representations of Clifford algebra generators, multiplexes them into
//! rate-3/2 and rate-2 codes, and decodes all of them with structure-aware
//! sphere decoders. Offline analysis (coding gain, PAPR, worst-case decoding
//! complexity) and a seeded Monte Carlo simulator round out the toolkit.
//!
//! Modules, bottom up:
//!
//! * [`cmatrix`] / [`linalg`] - dense complex matrices and real QR.
//! * [`clifford`] - the `2a+1` generator representations and their identities.
//! * [`weights`] - weight-matrix families and group-decodability checks.
//! * [`constellation`] / [`codes`] - square QAM, bit mapping, the three codes.
//! * [`channel`] - Rayleigh channel, real equivalent model, QR reduction.
//! * [`detector`] - sphere decoding, conditional detection with hard slicers.
//! * [`analysis`] - coding gain scans, Diophantine minima, PAPR tables.
//! * [`sim`] - BER / complexity curves with reproducible seeding.
//!
//! One codeword end to end:
//!
//! ```
//! use num_complex::Complex64;
//! use rand::SeedableRng;
//! use stbc::channel::{build_equivalent_channel, draw_channel, snr_to_n0, transmit};
//! use stbc::cmatrix::CMat;
//! use stbc::codes::CodeSpec;
//! use stbc::constellation::Constellation;
//! use stbc::detector::{conditional_decode_rate1, exhaustive_ml};
//!
//! let spec = CodeSpec::rate1();
//! let cons = Constellation::square(4)?;
//! let weights = spec.detection_weights(&cons);
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//!
//! // Encode four QPSK symbols (eight real PAM values).
//! let s = vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0];
//! let mut x = CMat::zeros(4, 4);
//! for (w, &v) in weights.iter().zip(&s) {
//!     x = x.add(&w.scale(Complex64::new(v, 0.0)));
//! }
//!
//! // One quasi-static channel draw, reduce, transmit at 12 dB, detect.
//! let h = draw_channel(&mut rng, 2);
//! let reduced = build_equivalent_channel(&weights, &h)?;
//! let y = transmit(&x, &h, snr_to_n0(12.0, 4), &mut rng);
//! let y_prime = reduced.observe(&y);
//!
//! let fast = conditional_decode_rate1(&reduced.r, &y_prime, 4)?;
//! let oracle = exhaustive_ml(&reduced.r, &y_prime, 4)?;
//! assert_eq!(fast.s_hat, oracle.s_hat);
//! assert!(fast.leaf_evaluations <= 4); // 2 sqrt(M)
//! # Ok::<(), stbc::Error>(())
//! ```

pub mod analysis;
pub mod channel;
pub mod clifford;
pub mod cmatrix;
pub mod codes;
pub mod constellation;
pub mod detector;
pub mod linalg;
pub mod sim;
pub mod weights;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
