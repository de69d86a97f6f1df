//! Statistical invariants of the Monte Carlo driver that go beyond single
//! modules: the full-diversity slope of the rate-1 curve and the error
//! floor a tightly budgeted decoder develops at high SNR.

use stbc::codes::CodeKind;
use stbc::sim::{run_curve, DecoderMode, SimPlan};

#[test]
fn rate1_qpsk_drops_two_decades_over_six_db() {
    // Full diversity shows as at least 2.0 decades of BER drop from 9 to
    // 15 dB for the rate-1 code with QPSK and two receive antennas.
    let plan = SimPlan {
        code: CodeKind::Rate1,
        m: 4,
        nr: 2,
        snr_db: vec![9.0, 15.0],
        max_codewords: 6_000_000,
        target_errors: 60,
        seed: 0x510,
        decoder: DecoderMode::Conditional,
    };
    let recs = run_curve(&plan).unwrap();
    assert!(recs[0].bit_errors >= 60);
    assert!(recs[1].bit_errors >= 30, "too few errors at 15 dB: {}", recs[1].bit_errors);
    let decades = (recs[0].ber / recs[1].ber).log10();
    assert!(decades >= 2.0, "only {decades:.2} decades over 6 dB");
}

#[test]
fn low_snr_points_track_the_reference_curves() {
    // Reference BER points for the three codes with QPSK and two receive
    // antennas, where the statistics are cheap and tight.
    let cases: [(CodeKind, &[(f64, f64)]); 3] = [
        (CodeKind::Rate1, &[(0.0, 0.1049), (3.0, 0.0425), (6.0, 0.0102)]),
        (CodeKind::Rate32, &[(0.0, 0.1742), (4.0, 0.0752), (8.0, 0.0130)]),
        (CodeKind::Rate2, &[(0.0, 0.2233), (6.0, 0.0796), (9.0, 0.0234)]),
    ];
    for (code, points) in cases {
        let plan = SimPlan {
            code,
            m: 4,
            nr: 2,
            snr_db: points.iter().map(|&(snr, _)| snr).collect(),
            max_codewords: 400_000,
            target_errors: 2_000,
            seed: 0x10,
            decoder: DecoderMode::Conditional,
        };
        let records = run_curve(&plan).unwrap();
        for (rec, &(snr, target)) in records.iter().zip(points) {
            let ratio = rec.ber / target;
            assert!(
                (1.0 / 1.3..=1.3).contains(&ratio),
                "{code:?} at {snr} dB: BER {:.4e} vs reference {target:.4e}",
                rec.ber
            );
        }
    }
}

#[test]
fn budget_50_develops_an_error_floor_at_high_snr() {
    // Rate-3/2 with QPSK (3 bpcu): a 50-node budget tracks the exact curve
    // at moderate SNR but sits well above it at 15 dB.
    let base = SimPlan {
        code: CodeKind::Rate32,
        m: 4,
        nr: 2,
        snr_db: vec![9.0, 15.0],
        max_codewords: 600_000,
        target_errors: 150,
        seed: 0xF100,
        decoder: DecoderMode::Conditional,
    };
    let exact = run_curve(&base).unwrap();
    let timeout = run_curve(&SimPlan {
        decoder: DecoderMode::Timeout { budget: 50 },
        ..base.clone()
    })
    .unwrap();

    let ratio_9 = timeout[0].ber / exact[0].ber;
    let ratio_15 = timeout[1].ber / exact[1].ber;
    assert!(ratio_9 >= 0.9, "budget 50 beat exact decoding at 9 dB: {ratio_9:.2}");
    assert!(
        ratio_15 >= 2.0,
        "no visible floor: timeout/exact BER at 15 dB is {ratio_15:.2}"
    );
    assert!(ratio_15 > ratio_9, "degradation shrinks with SNR: {ratio_9:.2} vs {ratio_15:.2}");
}
