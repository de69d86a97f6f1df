//! Acceptance suite: one test per release criterion, each printing a
//! summary line. Tolerances and thresholds are pinned in the constants
//! below. Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stbc::analysis::{diophantine_min, group_split_cgd, min_cgd, min_cgd_for, worst_case_leaves, SearchMode};
use stbc::channel::{build_equivalent_channel, draw_channel, snr_to_n0, transmit};
use stbc::clifford::{check_generator_properties, clifford_generators, Sign};
use stbc::cmatrix::CMat;
use stbc::codes::{optimal_phi, CodeKind, CodeSpec, UMatrix};
use stbc::constellation::Constellation;
use stbc::detector::{conditional_decode_fd, conditional_decode_rate1, exhaustive_ml};
use stbc::sim::{run_curve, DecoderMode, SimPlan};
use stbc::weights::{build_fgd_groups, check_fgd_structure, check_mutual_condition, linear_independence_rank, rate};

/// Frozen per-curve-family SNR calibration in dB (bounded to +-1.5 by the
/// criterion). With transmit power normalized to one per antenna and
/// `N0 = Nt / snr`, the measured curves land on the published points with no
/// shift, so every family uses zero.
const CALIBRATION_DB: [(CodeKind, f64); 3] = [
    (CodeKind::Rate1, 0.0),
    (CodeKind::Rate32, 0.0),
    (CodeKind::Rate2, 0.0),
];

fn calibration_db(kind: CodeKind) -> f64 {
    let (_, db) = CALIBRATION_DB.iter().find(|(k, _)| *k == kind).unwrap();
    assert!(db.abs() <= 1.5, "calibration offset out of the allowed band");
    *db
}

fn pass(criterion: usize, name: &str, detail: &str) {
    println!("[ACCEPTANCE] criterion {criterion} ({name}): PASS - {detail}");
}

#[test]
fn criterion_1_algebraic_property_suite() {
    let start = Instant::now();
    for a in 2..=4usize {
        for sign in [Sign::Plus, Sign::Minus] {
            let gens = clifford_generators(a, sign).unwrap();
            let rep = check_generator_properties(gens.all(), 0.0);
            assert!(rep.all_passed(), "a={a} sign={sign:?}: {rep:?}");
        }
        let gens = clifford_generators(a, Sign::Plus).unwrap();
        let ws = build_fgd_groups(&gens);
        assert_eq!(check_mutual_condition(&ws, 0, 1), 0.0, "cross-group a={a}");
        let expected_set = (1usize << a) - (a + 1);
        assert_eq!(ws.groups[0].len(), a + 1 + expected_set);
        assert_eq!(ws.groups[1].len(), a + 1 + expected_set);
        assert_eq!(rate(&ws), 1.0, "rate a={a}");
        assert_eq!(linear_independence_rank(&ws), ws.symbol_count());
    }

    // The concrete four-antenna code: g=2, n1=n2=4, g1=g2=3, kappa=3,
    // singleton inner groups, all conditions exact.
    let ws = CodeSpec::rate1().annotated_rate1_weight_set();
    let report = check_fgd_structure(&ws);
    assert_eq!(report.g, 2);
    assert_eq!(report.group_sizes, vec![4, 4]);
    assert_eq!(report.inner_counts, vec![3, 3]);
    assert_eq!(report.kappas, vec![3, 3]);
    assert!(report.inner_sizes.iter().flatten().all(|&n| n == 1));
    assert_eq!(report.max_cross_violation, 0.0);
    assert_eq!(report.max_inner_violation, 0.0);

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 10.0, "criterion 1 exceeded its runtime budget: {secs:.1}s");
    pass(1, "algebraic properties", &format!("a in 2..4, both signs, {secs:.2}s"));
}

#[test]
fn criterion_2_r_matrix_structure() {
    let start = Instant::now();
    let cons = Constellation::square(4).unwrap();
    let rate1 = CodeSpec::rate1().detection_weights(&cons);
    let rate2 = CodeSpec::rate2().detection_weights(&cons);
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut worst_rate1: f64 = 0.0;
    let mut worst_rate2: f64 = 0.0;
    for _ in 0..1000 {
        let h = draw_channel(&mut rng, 2);

        // Rate-1: two-block diagonal R with diagonal 3x3 inner blocks.
        let req = build_equivalent_channel(&rate1, &h).unwrap();
        for i in 0..8 {
            for j in (i + 1)..8 {
                let free = (i < 3 && j == 3) || ((4..7).contains(&i) && j == 7);
                if !free {
                    worst_rate1 = worst_rate1.max(req.r.get(i, j).abs());
                }
            }
        }

        // Rate-2: the conditional 8x8 block shows the same mask; the
        // cross-layer block and the trailing triangle are unconstrained.
        let req = build_equivalent_channel(&rate2, &h).unwrap();
        for i in 0..8 {
            for j in (i + 1)..8 {
                let free = (i < 3 && j == 3) || ((4..7).contains(&i) && j == 7);
                if !free {
                    worst_rate2 = worst_rate2.max(req.r.get(i, j).abs());
                }
            }
        }
        // QR invariants on the larger factorization.
        let qtq_err = req
            .q1
            .transpose()
            .mul(&req.q1)
            .max_abs_diff(&stbc::linalg::RMat::identity(16));
        assert!(qtq_err < 1e-10);
        let rec = req.q1.mul(&req.r).max_abs_diff(&req.h_tilde) / req.h_tilde.fro_norm();
        assert!(rec < 1e-10);
    }
    assert!(worst_rate1 < 1e-9, "rate-1 pattern violated: {worst_rate1:.2e}");
    assert!(worst_rate2 < 1e-9, "rate-2 pattern violated: {worst_rate2:.2e}");

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 30.0, "criterion 2 exceeded its runtime budget: {secs:.1}s");
    pass(
        2,
        "R-matrix structure",
        &format!("1000 channels, off-pattern max {worst_rate1:.1e} / {worst_rate2:.1e}, {secs:.2}s"),
    );
}

#[test]
fn criterion_3_coding_gain() {
    let start = Instant::now();

    // Rate-1, optimal stretching: full scan at 4-QAM, per-group at 16-QAM.
    let full = min_cgd(CodeKind::Rate1, 4, SearchMode::Exhaustive).unwrap();
    assert!((full.min_abs_det - 1.0).abs() < 1e-9, "{}", full.min_abs_det);
    let (g1_16, g2_16) = group_split_cgd(16).unwrap();
    assert!((g1_16.min_abs_det.min(g2_16.min_abs_det) - 1.0).abs() < 1e-9);

    // Sub-code coding gains per the stretching derivation: (16, 1).
    let (g1, g2) = group_split_cgd(4).unwrap();
    assert!((g1.min_cgd - 16.0).abs() < 1e-8, "{}", g1.min_cgd);
    assert!((g2.min_cgd - 1.0).abs() < 1e-9, "{}", g2.min_cgd);

    // No stretching: the determinant vanishes.
    let unstretched = CodeSpec::with_params(CodeKind::Rate1, 1.0, optimal_phi(), UMatrix::JR1);
    let rep = min_cgd_for(&unstretched, 4, SearchMode::Exhaustive).unwrap();
    assert!(rep.min_abs_det < 1e-9, "{}", rep.min_abs_det);

    // The punctured multiplexed code at 4-QAM.
    let r32 = min_cgd(CodeKind::Rate32, 4, SearchMode::Exhaustive).unwrap();
    assert!((r32.min_abs_det - 1.0).abs() < 1e-6, "{}", r32.min_abs_det);

    pass(
        3,
        "coding gain",
        &format!(
            "rate-1 min|det| {:.3}, groups ({:.0}, {:.0}), rate-3/2 {:.6} (total {:.1}s)",
            full.min_abs_det,
            g1.min_cgd,
            g2.min_cgd,
            r32.min_abs_det,
            start.elapsed().as_secs_f64()
        ),
    );
}

/// The full rate-2 difference scan, against the documented target of 1.
///
/// This check is expected to stay red: the exhaustive enumeration of all
/// 3^16 - 1 nonzero 4-QAM differences finds min |det| = 0.348748 at
/// cross-layer differences such as
/// `(-2,0,0,0,-2,0,0,0 | -2,0,0,0,0,-2,0,0)`, independently confirmed with
/// a second implementation, and no sign/side/phase variant of the
/// multiplexing reaches 1. Differences confined to a single layer do attain
/// exactly 1, which is how the documented figure can be reproduced; the
/// full minimum is smaller. The assertion is kept as stated rather than
/// weakened to the measured value.
#[test]
fn criterion_3_rate2_full_scan_min_det_as_documented() {
    let scan_start = Instant::now();
    let r2 = min_cgd(CodeKind::Rate2, 4, SearchMode::Exhaustive).unwrap();
    let scan_secs = scan_start.elapsed().as_secs_f64();
    assert_eq!(r2.evaluated, 3u64.pow(16) - 1);
    let budget = if rayon::current_num_threads() > 1 { 180.0 } else { 900.0 };
    assert!(scan_secs < budget, "rate-2 scan took {scan_secs:.0}s (budget {budget:.0}s)");
    assert!(
        (r2.min_abs_det - 1.0).abs() < 1e-6,
        "rate-2 exhaustive 4-QAM scan: min |det| = {:.6} at {:?} (documented target 1; \
         single-layer differences alone do attain 1.0)",
        r2.min_abs_det,
        r2.argmin
    );
    pass(3, "rate-2 full-scan min det", &format!("{:.6}", r2.min_abs_det));
}

#[test]
fn criterion_4_diophantine_oracles() {
    let start = Instant::now();
    let first = diophantine_min([5, 5, 5, -3], 6);
    assert_eq!(first.min_abs, 2);
    assert!(!first.zero_attained);
    let second = diophantine_min([3, 3, 3, -5], 6);
    assert_eq!(second.min_abs, 1);
    assert!(!second.zero_attained);
    // Zero stays unattained out to the larger box as well.
    assert!(!diophantine_min([5, 5, 5, -3], 8).zero_attained);
    assert!(!diophantine_min([3, 3, 3, -5], 8).zero_attained);

    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 5.0, "criterion 4 exceeded its runtime budget: {secs:.1}s");
    pass(4, "quadratic form minima", &format!("minima (2, 1), zero unattained, {secs:.2}s"));
}

#[test]
fn criterion_5_papr_table() {
    // Published values at their printed precision; computed values are
    // rounded to two decimals before comparison, matching the precision the
    // targets are stated at (the exact rate-1 16-QAM value 10*log10(1.8) =
    // 2.5527 dB prints as 2.55).
    let cases: [(CodeKind, usize, f64, f64); 9] = [
        (CodeKind::Rate1, 4, 0.0, 0.05),
        (CodeKind::Rate1, 16, 2.5, 0.05),
        (CodeKind::Rate1, 64, 3.7, 0.05),
        (CodeKind::Rate32, 4, 3.0, 0.1),
        (CodeKind::Rate32, 16, 5.6, 0.1),
        (CodeKind::Rate32, 64, 6.7, 0.1),
        (CodeKind::Rate2, 4, 2.8, 0.1),
        (CodeKind::Rate2, 16, 5.3, 0.1),
        (CodeKind::Rate2, 64, 6.5, 0.1),
    ];
    let mut summary = Vec::new();
    for (kind, m, target, tol) in cases {
        let cons = Constellation::square(m).unwrap();
        let papr = CodeSpec::new(kind).papr_db(&cons);
        let rounded = (papr * 100.0).round() / 100.0;
        assert!(
            (rounded - target).abs() <= tol + 1e-9,
            "{kind:?} {m}-QAM: {papr:.4} (rounded {rounded}) vs {target} +- {tol}"
        );
        summary.push(format!("{:.2}", papr));
    }
    pass(5, "PAPR table", &summary.join(" "));
}

#[test]
fn criterion_6_decoder_correctness() {
    let cases: [(CodeKind, usize); 4] = [
        (CodeKind::Rate1, 4),
        (CodeKind::Rate1, 16),
        (CodeKind::Rate32, 4),
        (CodeKind::Rate2, 4),
    ];
    for (kind, m) in cases {
        let spec = CodeSpec::new(kind);
        let cons = Constellation::square(m).unwrap();
        let weights = spec.detection_weights(&cons);
        let pam = cons.pam_alphabet();
        let bound = worst_case_leaves(kind, m);
        let mut rng = ChaCha8Rng::seed_from_u64(600 + m as u64 + kind.symbol_count() as u64);
        for trial in 0..200 {
            let h = draw_channel(&mut rng, 2);
            let req = build_equivalent_channel(&weights, &h).unwrap();
            let s: Vec<f64> = (0..spec.symbol_count())
                .map(|_| pam[rng.gen_range(0..pam.len())])
                .collect();
            let mut x = CMat::zeros(4, 4);
            for (w, &v) in weights.iter().zip(&s) {
                x = x.add(&w.scale(Complex64::new(v, 0.0)));
            }
            let snr_db = 4.0 + (trial % 3) as f64 * 5.0;
            let y = transmit(&x, &h, snr_to_n0(snr_db, 4), &mut rng);
            let y_prime = req.observe(&y);

            let cond = match kind {
                CodeKind::Rate1 => conditional_decode_rate1(&req.r, &y_prime, m).unwrap(),
                _ => conditional_decode_fd(&req.r, &y_prime, m, None).unwrap(),
            };
            assert!(!cond.used_fallback, "{kind:?} trial {trial} fell back");
            assert!(
                cond.leaf_evaluations <= bound,
                "{kind:?} {m}-QAM trial {trial}: {} leaves > {bound}",
                cond.leaf_evaluations
            );

            let ml = exhaustive_ml(&req.r, &y_prime, m).unwrap();
            let tol = 1e-9 * (1.0 + ml.metric);
            assert!(
                (cond.metric - ml.metric).abs() <= tol,
                "{kind:?} {m}-QAM trial {trial}: metric {} vs {}",
                cond.metric,
                ml.metric
            );
            if cond.s_hat != ml.s_hat {
                assert!((cond.metric - ml.metric).abs() <= 1e-12, "estimates differ off a tie");
            }
        }
    }
    pass(6, "decoder correctness", "200 oracle agreements per code, leaf bounds held");
}

#[test]
fn criterion_7_ber_reproduction() {
    // Published curve points: (kind, M, snr_db, target BER, allowed ratio).
    let anchors: [(CodeKind, usize, f64, f64, f64); 4] = [
        (CodeKind::Rate1, 4, 9.0, 1.23e-3, 1.5),
        (CodeKind::Rate1, 4, 12.0, 7.5e-5, 1.5),
        (CodeKind::Rate32, 4, 12.0, 6.4e-4, 1.5),
        (CodeKind::Rate2, 4, 15.0, 2.2e-4, 2.0),
    ];
    let start = Instant::now();
    let mut details = Vec::new();
    for (kind, m, snr_db, target, ratio) in anchors {
        let plan = SimPlan {
            code: kind,
            m,
            nr: 2,
            snr_db: vec![snr_db + calibration_db(kind)],
            max_codewords: 4_000_000,
            target_errors: 350,
            seed: 0xACCE,
            decoder: DecoderMode::Conditional,
        };
        let rec = &run_curve(&plan).unwrap()[0];
        assert!(rec.bit_errors >= 300, "{kind:?} at {snr_db} dB: only {} errors", rec.bit_errors);
        assert!(
            rec.ber <= target * ratio && rec.ber >= target / ratio,
            "{kind:?} at {snr_db} dB: BER {:.3e} outside x{ratio} of {target:.3e}",
            rec.ber
        );
        assert!(rec.max_leaf_evals <= worst_case_leaves(kind, m));
        details.push(format!("{}@{snr_db}dB {:.2e}", kind.name(), rec.ber));
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 1800.0, "criterion 7 exceeded its runtime budget: {secs:.0}s");
    pass(7, "BER anchors", &format!("{} ({secs:.0}s)", details.join(", ")));
}

#[test]
fn criterion_8_timeout_behavior() {
    // Shared seed across budgets: larger budgets explore supersets of the
    // search, so with common randomness the error counts must not increase.
    let budgets = [50u64, 500, 1000];
    let snrs = [6.0, 12.0, 18.0];
    let codewords = 100_000u64;
    let mut ber = vec![vec![0.0f64; snrs.len()]; budgets.len()];
    for (bi, &budget) in budgets.iter().enumerate() {
        let plan = SimPlan {
            code: CodeKind::Rate2,
            m: 4,
            nr: 2,
            snr_db: snrs.to_vec(),
            max_codewords: codewords,
            target_errors: u64::MAX,
            seed: 0x71AE,
            decoder: DecoderMode::Timeout { budget },
        };
        for (si, rec) in run_curve(&plan).unwrap().iter().enumerate() {
            assert_eq!(rec.codewords, codewords);
            ber[bi][si] = rec.ber;
        }
    }
    for si in 0..snrs.len() {
        for bi in 1..budgets.len() {
            assert!(
                ber[bi][si] <= ber[bi - 1][si],
                "BER rose with budget at {} dB: {:?}",
                snrs[si],
                ber.iter().map(|row| row[si]).collect::<Vec<_>>()
            );
        }
    }
    // The budget-1000 curve at 18 dB sits at the published floor.
    let ber_18 = ber[2][2];
    assert!(ber_18 <= 1e-4, "rate-2 budget-1000 BER(18 dB) = {ber_18:.3e}");
    assert!((4.98e-5 / 3.0..=4.98e-5 * 3.0).contains(&ber_18), "{ber_18:.3e}");
    pass(
        8,
        "time-out decoder",
        &format!(
            "BER monotone in budget at {:?} dB; budget-1000 BER(18) = {:.2e}",
            snrs, ber_18
        ),
    );
}

#[test]
fn criterion_9_average_node_trend() {
    let snrs = [0.0, 4.0, 8.0, 12.0, 16.0];
    let mut details = Vec::new();
    for kind in [CodeKind::Rate1, CodeKind::Rate32, CodeKind::Rate2] {
        let plan = SimPlan {
            code: kind,
            m: 4,
            nr: 2,
            snr_db: snrs.to_vec(),
            max_codewords: 20_000,
            target_errors: u64::MAX,
            seed: 0x90DE,
            decoder: DecoderMode::Exact,
        };
        let records = run_curve(&plan).unwrap();
        let nodes: Vec<f64> = records.iter().map(|r| r.avg_visited_nodes).collect();
        for w in nodes.windows(2) {
            assert!(w[1] < w[0], "{kind:?}: visited nodes not decreasing: {nodes:?}");
        }
        details.push(format!("{} {:.0}->{:.0}", kind.name(), nodes[0], nodes[nodes.len() - 1]));
    }
    pass(9, "average visited nodes", &details.join(", "));
}
