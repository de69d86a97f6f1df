//! Monte Carlo BER and complexity curves with reproducible seeding.
//!
//! Work is split into fixed-size chunks; each chunk derives its own RNG
//! stream from the master seed and its index, chunks are processed in waves
//! of a fixed size, and the stopping rule is evaluated at wave boundaries.
//! Results are therefore byte-identical across runs and thread counts.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{build_equivalent_channel, draw_channel, snr_to_n0, transmit};
use crate::cmatrix::CMat;
use crate::codes::{CodeKind, CodeSpec};
use crate::constellation::Constellation;
use crate::detector::{self, DetectorConfig, Structure};
use crate::{Error, Result};

/// How codewords are detected during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderMode {
    /// Plain sphere decoder (exact ML).
    Exact,
    /// Structure-aware conditional decoder (also exact ML).
    Conditional,
    /// Budgeted sphere decoder returning the incumbent at the node limit.
    Timeout { budget: u64 },
}

/// Everything needed to reproduce one simulation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimPlan {
    pub code: CodeKind,
    /// Square QAM size.
    pub m: usize,
    /// Receive antennas.
    pub nr: usize,
    /// SNR grid in dB, strictly increasing.
    pub snr_db: Vec<f64>,
    /// Hard cap on codewords per SNR point.
    pub max_codewords: u64,
    /// Stop a point early once this many bit errors have accumulated.
    pub target_errors: u64,
    pub seed: u64,
    pub decoder: DecoderMode,
}

impl SimPlan {
    /// A plan with the defaults used throughout: two receive antennas,
    /// 100 error events or one million codewords per point.
    pub fn new(code: CodeKind, m: usize, snr_db: Vec<f64>, seed: u64) -> Self {
        Self {
            code,
            m,
            nr: 2,
            snr_db,
            max_codewords: 1_000_000,
            target_errors: 100,
            seed,
            decoder: DecoderMode::Conditional,
        }
    }

    /// Parse a JSON plan (the file alternative to CLI flags).
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan json")
    }
}

/// Accumulated statistics for one SNR point.
#[derive(Debug, Clone, Serialize)]
pub struct SimRecord {
    pub snr_db: f64,
    pub codewords: u64,
    pub bits_sent: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub avg_visited_nodes: f64,
    pub max_leaf_evals: u64,
    pub seconds: f64,
}

#[derive(Default, Clone, Copy)]
struct ChunkStats {
    codewords: u64,
    bits: u64,
    errors: u64,
    visited: u64,
    max_leaves: u64,
}

impl ChunkStats {
    fn merge(self, other: Self) -> Self {
        ChunkStats {
            codewords: self.codewords + other.codewords,
            bits: self.bits + other.bits,
            errors: self.errors + other.errors,
            visited: self.visited + other.visited,
            max_leaves: self.max_leaves.max(other.max_leaves),
        }
    }
}

const CHUNK_CODEWORDS: u64 = 256;
const CHUNKS_PER_WAVE: u64 = 32;

fn code_structure(code: CodeKind) -> Structure {
    match code {
        CodeKind::Rate1 => Structure::Rate1Fgd,
        CodeKind::Rate32 => Structure::Rate32Fd,
        CodeKind::Rate2 => Structure::Rate2Fd,
    }
}

fn detector_config(plan: &SimPlan) -> DetectorConfig {
    match plan.decoder {
        DecoderMode::Exact => DetectorConfig::exact(Structure::None),
        DecoderMode::Conditional => DetectorConfig::exact(code_structure(plan.code)),
        // The node budget applies to the code's own structure-aware search,
        // the decoder the complexity figures are drawn from.
        DecoderMode::Timeout { budget } => DetectorConfig {
            structure: code_structure(plan.code),
            node_budget: Some(budget),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn run_chunk(
    plan: &SimPlan,
    spec: &CodeSpec,
    cons: &Constellation,
    weights: &[CMat],
    config: &DetectorConfig,
    n0: f64,
    point_idx: usize,
    chunk_idx: u64,
    codewords: u64,
) -> ChunkStats {
    // Independent stream per (point, chunk).
    let stream = plan
        .seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(1_000_003u64.wrapping_mul(point_idx as u64))
        .wrapping_add(chunk_idx);
    let mut rng = ChaCha8Rng::seed_from_u64(stream);

    let bits_per_cw = spec.bits_per_codeword(cons);
    let mut stats = ChunkStats::default();
    let mut bits = vec![false; bits_per_cw];
    for _ in 0..codewords {
        for b in bits.iter_mut() {
            *b = rng.gen();
        }
        let s = spec.map_bits_to_symbols(&bits, cons).expect("bit count");
        let mut x = CMat::zeros(4, 4);
        for (w, &v) in weights.iter().zip(&s) {
            if v != 0.0 {
                x = x.add(&w.scale(num_complex::Complex64::new(v, 0.0)));
            }
        }
        let h = draw_channel(&mut rng, plan.nr);
        let req = build_equivalent_channel(weights, &h).expect("dimensions checked in run_point");
        let y = transmit(&x, &h, n0, &mut rng);
        let y_prime = req.observe(&y);
        let res = detector::decode(config, &req.r, &y_prime, plan.m).expect("valid R");
        let got = spec.symbols_to_bits(&res.s_hat, cons);
        stats.errors += bits.iter().zip(&got).filter(|(a, b)| a != b).count() as u64;
        stats.bits += bits_per_cw as u64;
        stats.codewords += 1;
        stats.visited += res.visited_nodes;
        stats.max_leaves = stats.max_leaves.max(res.leaf_evaluations);
    }
    stats
}

/// Simulate one SNR point: fresh channel per codeword, random bits, decode,
/// accumulate until the error target or the codeword cap is reached.
/// For a point on the plan's grid this reproduces the matching
/// [`run_curve`] record exactly.
pub fn run_point(plan: &SimPlan, snr_db: f64) -> Result<SimRecord> {
    let point_idx = plan
        .snr_db
        .iter()
        .position(|&s| s == snr_db)
        .unwrap_or(usize::MAX);
    run_point_indexed(plan, snr_db, point_idx)
}

fn run_point_indexed(plan: &SimPlan, snr_db: f64, point_idx: usize) -> Result<SimRecord> {
    let spec = CodeSpec::new(plan.code);
    let cons = Constellation::square(plan.m)?;
    let weights = spec.detection_weights(&cons);
    // Surface dimension problems before spawning workers.
    let probe = draw_channel(&mut ChaCha8Rng::seed_from_u64(0), plan.nr);
    build_equivalent_channel(&weights, &probe)?;
    if let DecoderMode::Timeout { budget } = plan.decoder {
        if budget < spec.symbol_count() as u64 {
            return Err(Error::BudgetTooSmall {
                budget,
                min: spec.symbol_count() as u64,
            });
        }
    }

    let config = detector_config(plan);
    let n0 = snr_to_n0(snr_db, 4);
    let start = Instant::now();

    let mut total = ChunkStats::default();
    let mut next_chunk = 0u64;
    loop {
        let remaining = plan.max_codewords.saturating_sub(total.codewords);
        if remaining == 0 || (total.errors >= plan.target_errors && total.codewords > 0) {
            break;
        }
        // One wave of fixed-index chunks; the last wave may be short.
        let mut wave = Vec::new();
        let mut left = remaining;
        for c in 0..CHUNKS_PER_WAVE {
            if left == 0 {
                break;
            }
            let take = left.min(CHUNK_CODEWORDS);
            wave.push((next_chunk + c, take));
            left -= take;
        }
        next_chunk += CHUNKS_PER_WAVE;

        let wave_total: ChunkStats = wave
            .par_iter()
            .map(|&(chunk_idx, n)| {
                run_chunk(plan, &spec, &cons, &weights, &config, n0, point_idx, chunk_idx, n)
            })
            .reduce(ChunkStats::default, ChunkStats::merge);
        total = total.merge(wave_total);
    }

    Ok(SimRecord {
        snr_db,
        codewords: total.codewords,
        bits_sent: total.bits,
        bit_errors: total.errors,
        ber: if total.bits > 0 {
            total.errors as f64 / total.bits as f64
        } else {
            0.0
        },
        avg_visited_nodes: if total.codewords > 0 {
            total.visited as f64 / total.codewords as f64
        } else {
            0.0
        },
        max_leaf_evals: total.max_leaves,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Simulate every point of the plan's SNR grid.
pub fn run_curve(plan: &SimPlan) -> Result<Vec<SimRecord>> {
    if plan.snr_db.windows(2).any(|w| w[0] >= w[1]) || plan.snr_db.is_empty() {
        return Err(Error::BadSnrGrid);
    }
    plan.snr_db
        .iter()
        .enumerate()
        .map(|(i, &snr)| run_point_indexed(plan, snr, i))
        .collect()
}

/// Write records as CSV with a header row. Columns: `snr_db, bits, errors,
/// ber, avg_nodes, max_leaves, seconds`. All but `seconds` are
/// deterministic for a fixed plan and seed.
pub fn write_csv<W: Write>(records: &[SimRecord], mut out: W) -> Result<()> {
    writeln!(out, "snr_db,bits,errors,ber,avg_nodes,max_leaves,seconds")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{:e},{},{},{:.3}",
            r.snr_db, r.bits_sent, r.bit_errors, r.ber, r.avg_visited_nodes, r.max_leaf_evals,
            r.seconds
        )?;
    }
    Ok(())
}

/// The deterministic part of the CSV (everything except the timing column),
/// used for byte-identity checks between runs.
pub fn csv_deterministic_part(csv: &str) -> String {
    csv.lines()
        .map(|line| match line.rfind(',') {
            Some(idx) => &line[..idx],
            None => line,
        })
        .collect::<Vec<_>>()
        .join("\n")
}
