//! Tree-search detection on the reduced model `min || y' - R s ||^2`.
//!
//! Four decoders share the counters and the result type:
//!
//! * [`sphere_decode`] - depth-first search with infinite initial radius and
//!   Schnorr-Euchner child ordering, optionally budgeted (time-out decoder).
//! * [`conditional_decode_rate1`] - two independent groups; within each, the
//!   last symbol is enumerated and the first three are hard-sliced.
//! * [`conditional_decode_fd`] - tree search over the second-layer symbols,
//!   with the rate-1 conditional step at the boundary (serves both the
//!   rate-2 and the punctured rate-3/2 code).
//! * [`exhaustive_ml`] - full enumeration, the correctness oracle.
//!
//! Counter conventions: a visited node is a partial symbol assignment the
//! search enters, meaning its partial metric is computed and falls inside
//! the current radius (root excluded, leaves included). Sibling probes
//! rejected by the radius are not visited; this matches the published
//! average-complexity curves at the point level. A leaf evaluation is a
//! completed candidate whose total metric is compared against the
//! incumbent.

use crate::linalg::RMat;
use crate::{Error, Result};

/// Exploited structure of the `R` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    /// Plain sphere decoding, no structure assumed.
    None,
    /// Rate-1 two-group pattern with diagonal 3x3 inner blocks.
    Rate1Fgd,
    /// Rate-2 conditional pattern (8 outer levels).
    Rate2Fd,
    /// Rate-3/2 conditional pattern (4 outer levels).
    Rate32Fd,
}

/// Detector setup: always infinite initial radius and Schnorr-Euchner
/// enumeration; the node budget (when present) turns the sphere decoder
/// into the time-out variant.
#[derive(Debug, Clone, Copy)]
pub struct DetectorConfig {
    pub structure: Structure,
    pub node_budget: Option<u64>,
}

impl DetectorConfig {
    pub fn exact(structure: Structure) -> Self {
        Self { structure, node_budget: None }
    }

    pub fn timeout(budget: u64) -> Self {
        Self { structure: Structure::None, node_budget: Some(budget) }
    }
}

/// Outcome of one detection.
#[derive(Debug, Clone)]
pub struct DetectionResult {
    pub s_hat: Vec<f64>,
    pub visited_nodes: u64,
    pub leaf_evaluations: u64,
    pub terminated_early: bool,
    /// `|| y' - R s_hat ||^2`.
    pub metric: f64,
    /// Set when a structured decoder found the expected zero pattern
    /// violated and fell back to plain sphere decoding.
    pub used_fallback: bool,
}

/// Hard PAM slicer: nearest odd value clipped to the alphabet,
/// `sign(z) * min(|2 round((|z|-1)/2) + 1|, sqrt(M)-1)`, with `sign(0) = +1`
/// and round-half-away-from-zero.
pub fn hard_slice(z: f64, m: usize) -> f64 {
    let sqrt_m = (m as f64).sqrt().round();
    let sign = if z >= 0.0 { 1.0 } else { -1.0 };
    let mag = (2.0 * ((z.abs() - 1.0) / 2.0).round() + 1.0).abs();
    sign * mag.min(sqrt_m - 1.0)
}

fn pam_alphabet(m: usize) -> Vec<f64> {
    let q = (m as f64).sqrt().round() as i64;
    (0..q).map(|i| (2 * i - (q - 1)) as f64).collect()
}

fn check_upper_triangular(r: &RMat) -> Result<()> {
    let n = r.cols();
    if r.rows() != n {
        return Err(Error::NotUpperTriangular);
    }
    for i in 0..n {
        if r.get(i, i) <= 0.0 {
            return Err(Error::NotUpperTriangular);
        }
        for j in 0..i {
            if r.get(i, j) != 0.0 {
                return Err(Error::NotUpperTriangular);
            }
        }
    }
    Ok(())
}

/// Candidate values at one level, in the visiting order.
fn order_candidates(pam: &[f64], z: f64, out: &mut [f64], se: bool) {
    out[..pam.len()].copy_from_slice(pam);
    if se {
        out[..pam.len()]
            .sort_unstable_by(|a, b| ((a - z).abs()).partial_cmp(&(b - z).abs()).unwrap());
    }
}

fn sphere_decode_impl(
    r: &RMat,
    y: &[f64],
    m: usize,
    budget: Option<u64>,
    se_order: bool,
    mut trace: Option<&mut Vec<TraceEvent>>,
) -> Result<DetectionResult> {
    check_upper_triangular(r)?;
    let n = r.cols();
    assert_eq!(y.len(), n, "observation length must match R");
    if let Some(b) = budget {
        if b < n as u64 {
            return Err(Error::BudgetTooSmall { budget: b, min: n as u64 });
        }
    }
    let pam = pam_alphabet(m);
    let q = pam.len();

    let mut cands = vec![[0.0f64; 8]; n];
    let mut pos = vec![0usize; n];
    let mut above = vec![0.0f64; n]; // metric accumulated at levels > i
    let mut tail = vec![0.0f64; n]; // sum_{k>i} r[i,k] s[k]
    let mut s = vec![0.0f64; n];

    let mut best_metric = f64::INFINITY;
    let mut best_s: Option<Vec<f64>> = None;
    let mut visited = 0u64;
    let mut leaves = 0u64;
    let mut early = false;

    // Enter the top level.
    let mut level = n - 1;
    let enter = |lvl: usize,
                 s: &[f64],
                 tail: &mut [f64],
                 cands: &mut [[f64; 8]],
                 pos: &mut [usize]| {
        let mut t = 0.0;
        for k in (lvl + 1)..n {
            t += r.get(lvl, k) * s[k];
        }
        tail[lvl] = t;
        let z = (y[lvl] - t) / r.get(lvl, lvl);
        order_candidates(&pam, z, &mut cands[lvl], se_order);
        pos[lvl] = 0;
    };
    enter(level, &s, &mut tail, &mut cands, &mut pos);

    'search: loop {
        if pos[level] >= q {
            // Level exhausted: move up.
            if level == n - 1 {
                break 'search;
            }
            level += 1;
            continue;
        }
        let p = cands[level][pos[level]];
        pos[level] += 1;

        let e = y[level] - tail[level] - r.get(level, level) * p;
        let cum = above[level] + e * e;

        if cum >= best_metric {
            if se_order {
                // Children are visited in increasing metric order, so every
                // remaining sibling is at least as bad: prune the level.
                pos[level] = q;
            }
            continue;
        }

        // The node is entered (it survived the radius), so it counts as
        // visited; rejected sibling probes do not.
        visited += 1;
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceEvent { level, value: p, partial_metric: cum });
        }
        s[level] = p;
        if level == 0 {
            leaves += 1;
            best_metric = cum;
            best_s = Some(s.clone());
        } else {
            above[level - 1] = cum;
            level -= 1;
            enter(level, &s, &mut tail, &mut cands, &mut pos);
        }

        if let Some(b) = budget {
            if visited >= b && best_s.is_some() {
                early = true;
                break 'search;
            }
        }
    }

    let s_hat = best_s.expect("infinite initial radius always yields a leaf");
    Ok(DetectionResult {
        metric: residual_metric(r, y, &s_hat),
        s_hat,
        visited_nodes: visited,
        leaf_evaluations: leaves,
        terminated_early: early,
        used_fallback: false,
    })
}

/// One step of a traced search: the level, the symbol value tried, and the
/// partial metric after applying it.
#[derive(Debug, Clone, Copy)]
pub struct TraceEvent {
    pub level: usize,
    pub value: f64,
    pub partial_metric: f64,
}

/// `|| y - R s ||^2`.
pub fn residual_metric(r: &RMat, y: &[f64], s: &[f64]) -> f64 {
    let n = r.cols();
    let mut acc = 0.0;
    for i in 0..n {
        let mut e = y[i];
        for k in i..n {
            e -= r.get(i, k) * s[k];
        }
        acc += e * e;
    }
    acc
}

/// Depth-first sphere decoder with infinite initial radius and
/// Schnorr-Euchner enumeration. Exact ML when `budget` is `None`;
/// otherwise identical until `budget` nodes have been visited, then returns
/// the incumbent with `terminated_early` set. The budget must allow one
/// full descent (`budget >= 2K`).
pub fn sphere_decode(r: &RMat, y: &[f64], m: usize, budget: Option<u64>) -> Result<DetectionResult> {
    sphere_decode_impl(r, y, m, budget, true, None)
}

/// [`sphere_decode`] with a per-node trace appended to `trace`.
pub fn sphere_decode_traced(
    r: &RMat,
    y: &[f64],
    m: usize,
    budget: Option<u64>,
    trace: &mut Vec<TraceEvent>,
) -> Result<DetectionResult> {
    sphere_decode_impl(r, y, m, budget, true, Some(trace))
}

/// Sphere decoder with natural (alphabet) child ordering instead of
/// Schnorr-Euchner; kept for enumeration-order comparisons.
pub fn sphere_decode_natural_order(r: &RMat, y: &[f64], m: usize) -> Result<DetectionResult> {
    sphere_decode_impl(r, y, m, None, false, None)
}

/// Exhaustive ML over the full candidate grid, lexicographic tie-breaking.
/// Guarded to `sqrt(M)^(2K) <= 2^24` candidates.
pub fn exhaustive_ml(r: &RMat, y: &[f64], m: usize) -> Result<DetectionResult> {
    check_upper_triangular(r)?;
    let n = r.cols();
    let pam = pam_alphabet(m);
    let q = pam.len() as u128;
    let size = q.checked_pow(n as u32).unwrap_or(u128::MAX);
    const GUARD: u128 = 1 << 24;
    if size > GUARD {
        return Err(Error::SearchSpaceExceeded { size, guard: GUARD });
    }

    let mut best_metric = f64::INFINITY;
    let mut best_s = vec![pam[0]; n];
    let mut s = vec![pam[0]; n];
    let mut idx = vec![0usize; n];
    let total = size as u64;
    for _ in 0..total {
        let metric = residual_metric(r, y, &s);
        if metric < best_metric {
            best_metric = metric;
            best_s.copy_from_slice(&s);
        }
        // Lexicographic advance: s[0] is the most significant digit, so the
        // first minimizer found is the lexicographically smallest.
        for d in (0..n).rev() {
            idx[d] += 1;
            if idx[d] < pam.len() {
                s[d] = pam[idx[d]];
                break;
            }
            idx[d] = 0;
            s[d] = pam[0];
        }
    }

    Ok(DetectionResult {
        s_hat: best_s,
        visited_nodes: total,
        leaf_evaluations: total,
        terminated_early: false,
        metric: best_metric,
        used_fallback: false,
    })
}

const PATTERN_TOL: f64 = 1e-9;

/// Check the two-group pattern with diagonal 3x3 inner blocks on the top
/// 8x8 of `R` (cross-group block zero, inner off-diagonals zero); `n` is the
/// full dimension, so entries right of column 8 are unconstrained.
fn rate1_block_pattern_ok(r: &RMat) -> bool {
    for i in 0..8 {
        for j in (i + 1)..8 {
            let free = (i < 3 && j == 3) || ((4..7).contains(&i) && j == 7);
            if !free && r.get(i, j).abs() > PATTERN_TOL {
                return false;
            }
        }
    }
    true
}

/// Conditional detection for the rate-1 code: per group, enumerate the last
/// symbol over the PAM alphabet and hard-slice the three conditioned ones.
/// Falls back to plain sphere decoding (with `used_fallback` set) if the
/// expected zero pattern does not hold.
pub fn conditional_decode_rate1(r: &RMat, y: &[f64], m: usize) -> Result<DetectionResult> {
    check_upper_triangular(r)?;
    assert_eq!(r.cols(), 8, "rate-1 detection works on 8 real symbols");
    if !rate1_block_pattern_ok(r) {
        let mut res = sphere_decode(r, y, m, None)?;
        res.used_fallback = true;
        return Ok(res);
    }

    let pam = pam_alphabet(m);
    let mut s_hat = vec![0.0; 8];
    let mut metric = 0.0;
    let mut leaves = 0u64;
    for (base, cond) in [(0usize, 3usize), (4, 7)] {
        let mut best = f64::INFINITY;
        let mut best_grp = [0.0; 4];
        for &p in &pam {
            let e_cond = y[cond] - r.get(cond, cond) * p;
            let mut acc = e_cond * e_cond;
            let mut grp = [0.0; 4];
            grp[3] = p;
            for i in base..cond {
                let z = (y[i] - r.get(i, cond) * p) / r.get(i, i);
                let x = hard_slice(z, m);
                let e = y[i] - r.get(i, i) * x - r.get(i, cond) * p;
                acc += e * e;
                grp[i - base] = x;
            }
            leaves += 1;
            if acc < best {
                best = acc;
                best_grp = grp;
            }
        }
        metric += best;
        s_hat[base..base + 4].copy_from_slice(&best_grp);
    }

    Ok(DetectionResult {
        s_hat,
        visited_nodes: leaves,
        leaf_evaluations: leaves,
        terminated_early: false,
        metric,
        used_fallback: false,
    })
}

/// Conditional detection for the multiplexed codes: Schnorr-Euchner tree
/// search over the second-layer symbols (levels 9..2K), and for each
/// surviving assignment the rate-1 conditional step on the first eight
/// levels. Exact ML when `budget` is `None`. Works for `2K` of 16 (rate 2)
/// and 12 (rate 3/2).
pub fn conditional_decode_fd(
    r: &RMat,
    y: &[f64],
    m: usize,
    budget: Option<u64>,
) -> Result<DetectionResult> {
    check_upper_triangular(r)?;
    let n = r.cols();
    assert!(
        n > 8 && y.len() == n,
        "conditional FD detection needs more than 8 levels"
    );
    if !rate1_block_pattern_ok(r) {
        let mut res = sphere_decode(r, y, m, budget)?;
        res.used_fallback = true;
        return Ok(res);
    }
    if let Some(b) = budget {
        if b < n as u64 {
            return Err(Error::BudgetTooSmall { budget: b, min: n as u64 });
        }
    }

    let pam = pam_alphabet(m);
    let q = pam.len();
    let outer_lo = 8; // levels 8..n-1 form the outer tree

    let mut cands = vec![[0.0f64; 8]; n];
    let mut pos = vec![0usize; n];
    let mut above = vec![0.0f64; n];
    let mut tail = vec![0.0f64; n];
    let mut s = vec![0.0f64; n];

    let mut best_metric = f64::INFINITY;
    let mut best_s: Option<Vec<f64>> = None;
    let mut visited = 0u64;
    let mut leaves = 0u64;
    let mut early = false;

    let enter = |lvl: usize,
                 s: &[f64],
                 tail: &mut [f64],
                 cands: &mut [[f64; 8]],
                 pos: &mut [usize]| {
        let mut t = 0.0;
        for k in (lvl + 1)..n {
            t += r.get(lvl, k) * s[k];
        }
        tail[lvl] = t;
        let z = (y[lvl] - t) / r.get(lvl, lvl);
        order_candidates(&pam, z, &mut cands[lvl], true);
        pos[lvl] = 0;
    };

    let mut level = n - 1;
    enter(level, &s, &mut tail, &mut cands, &mut pos);

    'outer: loop {
        if pos[level] >= q {
            if level == n - 1 {
                break 'outer;
            }
            level += 1;
            continue;
        }
        let p = cands[level][pos[level]];
        pos[level] += 1;

        let e = y[level] - tail[level] - r.get(level, level) * p;
        let cum = above[level] + e * e;

        if cum >= best_metric {
            pos[level] = q;
            continue;
        }
        visited += 1;
        s[level] = p;

        if level > outer_lo {
            above[level - 1] = cum;
            level -= 1;
            enter(level, &s, &mut tail, &mut cands, &mut pos);
        } else {
            // Boundary: all second-layer symbols fixed; run the two-group
            // conditional step with their interference folded in.
            let mut total = cum;
            let mut grp_best = [[0.0f64; 4]; 2];
            for (g, (base, cond)) in [(0usize, 3usize), (4, 7)].into_iter().enumerate() {
                let mut tail_i = [0.0f64; 4];
                for i in base..base + 4 {
                    let mut t = 0.0;
                    for k in outer_lo..n {
                        t += r.get(i, k) * s[k];
                    }
                    tail_i[i - base] = t;
                }
                let mut best_g = f64::INFINITY;
                for &pc in &pam {
                    let e_cond = y[cond] - tail_i[3] - r.get(cond, cond) * pc;
                    let mut acc = e_cond * e_cond;
                    let mut grp = [0.0; 4];
                    grp[3] = pc;
                    for i in base..cond {
                        let z = (y[i] - tail_i[i - base] - r.get(i, cond) * pc) / r.get(i, i);
                        let x = hard_slice(z, m);
                        let e = y[i] - r.get(i, i) * x - r.get(i, cond) * pc - tail_i[i - base];
                        acc += e * e;
                        grp[i - base] = x;
                    }
                    leaves += 1;
                    visited += 1;
                    if acc < best_g {
                        best_g = acc;
                        grp_best[g] = grp;
                    }
                }
                total += best_g;
            }
            if total < best_metric {
                best_metric = total;
                let mut full = s.clone();
                full[0..4].copy_from_slice(&grp_best[0]);
                full[4..8].copy_from_slice(&grp_best[1]);
                best_s = Some(full);
            }
        }

        if let Some(b) = budget {
            if visited >= b && best_s.is_some() {
                early = true;
                break 'outer;
            }
        }
    }

    let s_hat = best_s.expect("search always reaches a boundary");
    Ok(DetectionResult {
        metric: residual_metric(r, y, &s_hat),
        s_hat,
        visited_nodes: visited,
        leaf_evaluations: leaves,
        terminated_early: early,
        used_fallback: false,
    })
}

/// Dispatch on the configured structure.
pub fn decode(config: &DetectorConfig, r: &RMat, y: &[f64], m: usize) -> Result<DetectionResult> {
    match config.structure {
        Structure::None => sphere_decode(r, y, m, config.node_budget),
        Structure::Rate1Fgd => conditional_decode_rate1(r, y, m),
        Structure::Rate2Fd | Structure::Rate32Fd => {
            conditional_decode_fd(r, y, m, config.node_budget)
        }
    }
}
