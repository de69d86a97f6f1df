//! Command-line front end: construct weight sets, verify their algebraic
//! structure, run the offline analyses, and drive Monte Carlo simulations.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stbc::analysis::{self, SearchMode};
use stbc::channel::{build_equivalent_channel, draw_channel, snr_to_n0, transmit};
use stbc::clifford::{check_generator_properties, clifford_generators, Sign};
use stbc::cmatrix::CMat;
use stbc::codes::{CodeKind, CodeSpec};
use stbc::constellation::Constellation;
use stbc::detector::{self, DetectorConfig, Structure};
use stbc::sim::{run_curve, write_csv, DecoderMode, SimPlan};
use stbc::weights::{
    build_fgd_groups, check_fgd_structure, check_mutual_condition, linear_independence_rank, rate,
};

#[derive(Parser)]
#[command(
    name = "stbc",
    about = "Low-complexity space-time block codes: construction, decoding, analysis, simulation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the two-group weight set for 2^a antennas and print it.
    Construct(ConstructArgs),
    /// Run the algebraic property suites and report pass/fail.
    Verify(VerifyArgs),
    /// Offline analyses: minimum determinants, PAPR, quadratic form minima,
    /// worst-case complexity.
    Analyze(AnalyzeArgs),
    /// Monte Carlo BER / complexity curves with CSV output.
    Simulate(SimulateArgs),
    /// Decode one random instance and print the search details.
    Decode(DecodeArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Antenna exponent (Nt = 2^a).
    #[arg(long, default_value_t = 2)]
    a: usize,
    /// Sign of the j factor in the first generator.
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    /// Use the odd/even interleaved generator labeling (the published
    /// per-antenna examples) instead of the generic one.
    #[arg(long)]
    interleaved: bool,
    /// Keep only the first N antennas (column removal).
    #[arg(long)]
    antennas: Option<usize>,
    /// Write the weight set as JSON to this path instead of pretty-printing.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(v: SignArg) -> Sign {
        match v {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest antenna exponent to check.
    #[arg(long, default_value_t = 4)]
    max_a: usize,
    /// Tolerance for the exact identities.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Random channels for the R-pattern checks.
    #[arg(long, default_value_t = 200)]
    channels: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Exhaustive minimum |det| for one code.
    #[arg(long, value_name = "CODE")]
    min_det: Option<String>,
    /// Per-group minimum CGD split for the rate-1 code.
    #[arg(long)]
    group_split: bool,
    /// PAPR table for all three codes.
    #[arg(long)]
    papr: bool,
    /// Quadratic-form minima behind the stretching proof.
    #[arg(long)]
    diophantine: bool,
    /// Worst-case decoding complexity table.
    #[arg(long)]
    worst_case: bool,
    /// Everything above.
    #[arg(long)]
    all: bool,
    /// Square QAM size for determinant scans.
    #[arg(long, default_value_t = 4)]
    qam: usize,
    /// Use sampled (upper bound) mode for determinant scans.
    #[arg(long)]
    sampled: bool,
    /// Emit machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Code kind: rate1, rate32 or rate2.
    #[arg(long, default_value = "rate1")]
    code: String,
    /// Square QAM size.
    #[arg(long, default_value_t = 4)]
    qam: usize,
    /// Receive antennas.
    #[arg(long, default_value_t = 2)]
    nr: usize,
    /// SNR grid "start:step:stop" (dB) or comma-separated list.
    #[arg(long, default_value = "0:3:15")]
    snr: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Decoder: exact, conditional or timeout:<budget>.
    #[arg(long, default_value = "conditional")]
    decoder: String,
    #[arg(long, default_value_t = 1_000_000)]
    max_codewords: u64,
    #[arg(long, default_value_t = 100)]
    target_errors: u64,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON plan file; flags above are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long, default_value = "rate1")]
    code: String,
    #[arg(long, default_value_t = 4)]
    qam: usize,
    #[arg(long, default_value_t = 2)]
    nr: usize,
    #[arg(long, default_value_t = 10.0)]
    snr: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Print at most this many search-tree events.
    #[arg(long, default_value_t = 32)]
    trace: usize,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("STBC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(args) => construct(args),
        Command::Verify(args) => verify(args),
        Command::Analyze(args) => analyze(args),
        Command::Simulate(args) => simulate(args),
        Command::Decode(args) => decode_once(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn format_complex(z: num_complex::Complex64) -> String {
    if z.im == 0.0 {
        format!("{:+.3}", z.re)
    } else if z.re == 0.0 {
        format!("{:+.3}j", z.im)
    } else {
        format!("{:+.3}{:+.3}j", z.re, z.im)
    }
}

fn print_matrix(m: &CMat) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| format_complex(m.get(r, c))).collect();
        println!("    [{}]", row.join(", "));
    }
}

fn construct(args: ConstructArgs) -> CmdResult {
    let gens = clifford_generators(args.a, args.sign.into())?;
    let gens = if args.interleaved { gens.interleaved() } else { gens };
    let mut ws = build_fgd_groups(&gens);
    if let Some(nt) = args.antennas {
        if nt == 0 || nt > ws.nt {
            return Err(format!("--antennas must be in 1..={}", ws.nt).into());
        }
        ws = ws.take_antennas(nt);
    }

    if let Some(path) = args.json {
        fs::write(&path, ws.to_json())?;
        println!("wrote {} weight matrices to {}", ws.symbol_count(), path.display());
    } else {
        println!(
            "{} weight matrices for {} antennas (T = {}):",
            ws.symbol_count(),
            ws.nt,
            ws.t
        );
        for (i, m) in ws.matrices.iter().enumerate() {
            let group = if ws.groups[0].contains(&i) { 1 } else { 2 };
            println!("  A{} (group {group}):", i + 1);
            print_matrix(m);
        }
    }
    let report = check_fgd_structure(&ws);
    println!("rate = {}", rate(&ws));
    println!(
        "groups: g = {}, sizes = {:?}, inner groups = {:?}, kappa = {:?}",
        report.g, report.group_sizes, report.inner_counts, report.kappas
    );
    println!(
        "cross-group violation = {:.3e}, inner violation = {:.3e}, rank = {}",
        report.max_cross_violation,
        report.max_inner_violation,
        linear_independence_rank(&ws)
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> CmdResult {
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        all_ok &= ok;
    };

    for a in 1..=args.max_a {
        for sign in [Sign::Plus, Sign::Minus] {
            let gens = clifford_generators(a, sign)?;
            let rep = check_generator_properties(gens.all(), args.tol);
            check(
                &format!("generator properties a={a} sign={sign:?}"),
                rep.all_passed(),
                format!(
                    "max violations: herm {:.1e}, square {:.1e}, anticommute {:.1e}, unitary {:.1e}",
                    rep.anti_hermitian.max_violation,
                    rep.squares_to_minus_identity.max_violation,
                    rep.anti_commutation.max_violation,
                    rep.unitarity.max_violation
                ),
            );
        }
    }

    for a in 2..=args.max_a {
        let ws = build_fgd_groups(&clifford_generators(a, Sign::Plus)?);
        let cross = check_mutual_condition(&ws, 0, 1);
        check(&format!("cross-group condition a={a}"), cross <= args.tol, format!("{cross:.3e}"));
        let expected = (1usize << a) - (a + 1);
        let sizes_ok = ws.groups[0].len() == (1 << a) && ws.groups[1].len() == (1 << a);
        check(
            &format!("set sizes a={a}"),
            sizes_ok,
            format!(
                "|A| = |B| = {expected}, groups {:?}",
                ws.groups.iter().map(Vec::len).collect::<Vec<_>>()
            ),
        );
        check(&format!("rate a={a}"), rate(&ws) == 1.0, format!("{}", rate(&ws)));
        let rank = linear_independence_rank(&ws);
        check(
            &format!("linear independence a={a}"),
            rank == ws.symbol_count(),
            format!("rank {rank}"),
        );
    }

    // R-matrix zero patterns over random channels.
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let cons = Constellation::square(4)?;
    for (kind, label) in [
        (CodeKind::Rate1, "rate-1 two-block + diagonal inner"),
        (CodeKind::Rate2, "rate-2 conditional block"),
    ] {
        let spec = CodeSpec::new(kind);
        let weights = spec.detection_weights(&cons);
        let mut worst: f64 = 0.0;
        for _ in 0..args.channels {
            let h = draw_channel(&mut rng, 2);
            let req = build_equivalent_channel(&weights, &h)?;
            for i in 0..8 {
                for j in (i + 1)..8 {
                    let free = (i < 3 && j == 3) || ((4..7).contains(&i) && j == 7);
                    if !free {
                        worst = worst.max(req.r.get(i, j).abs());
                    }
                }
            }
        }
        check(&format!("R pattern {label}"), worst < 1e-9, format!("max off-pattern {worst:.3e}"));
    }

    println!("{}", if all_ok { "all checks passed" } else { "some checks FAILED" });
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn analyze(args: AnalyzeArgs) -> CmdResult {
    let mut emitted = false;
    let mut json_out = serde_json::Map::new();

    if let Some(code) = &args.min_det {
        let kind = CodeKind::from_str(code)?;
        let mode = if args.sampled { SearchMode::Sampled } else { SearchMode::Exhaustive };
        let rep = analysis::min_cgd(kind, args.qam, mode)?;
        if args.json {
            json_out.insert("min_det".into(), serde_json::to_value(&rep)?);
        } else {
            println!(
                "min |det| = {:.6} (CGD {:.6}, {:?}, {}-QAM, {} candidates, argmin {:?})",
                rep.min_abs_det, rep.min_cgd, rep.search_mode, rep.m, rep.evaluated, rep.argmin
            );
        }
        emitted = true;
    }

    if args.group_split || args.all {
        let (g1, g2) = analysis::group_split_cgd(args.qam)?;
        if args.json {
            json_out.insert("group_split".into(), serde_json::to_value([&g1, &g2])?);
        } else {
            println!("group I:  min |det| = {:.6}, delta = {:.6}", g1.min_abs_det, g1.min_cgd);
            println!("group II: min |det| = {:.6}, delta = {:.6}", g2.min_abs_det, g2.min_cgd);
        }
        emitted = true;
    }

    if args.papr || args.all {
        let rows = analysis::papr_table();
        if args.json {
            json_out.insert("papr".into(), serde_json::to_value(&rows)?);
        } else {
            println!("PAPR (dB):          QPSK   16QAM  64QAM");
            for kind in [CodeKind::Rate1, CodeKind::Rate32, CodeKind::Rate2] {
                let vals: Vec<String> = rows
                    .iter()
                    .filter(|r| r.kind == kind)
                    .map(|r| format!("{:>6.2}", r.papr_db))
                    .collect();
                println!("  {:<16} {}", kind.name(), vals.join(" "));
            }
        }
        emitted = true;
    }

    if args.diophantine || args.all {
        let a = analysis::diophantine_min([5, 5, 5, -3], 6);
        let b = analysis::diophantine_min([3, 3, 3, -5], 6);
        if args.json {
            json_out.insert("diophantine".into(), serde_json::to_value([&a, &b])?);
        } else {
            for rep in [&a, &b] {
                println!(
                    "form {:?}: min |f| = {} at {:?} (|X| <= {}), zero attained: {}",
                    rep.coeffs, rep.min_abs, rep.argmin, rep.bound, rep.zero_attained
                );
            }
        }
        emitted = true;
    }

    if args.worst_case || args.all {
        if args.json {
            let rows: Vec<_> = [CodeKind::Rate1, CodeKind::Rate32, CodeKind::Rate2]
                .iter()
                .flat_map(|&kind| {
                    [4usize, 16, 64].iter().map(move |&m| {
                        serde_json::json!({
                            "kind": kind.name(),
                            "m": m,
                            "leaves": analysis::worst_case_leaves(kind, m),
                        })
                    })
                })
                .collect();
            json_out.insert("worst_case".into(), serde_json::to_value(rows)?);
        } else {
            println!("worst-case leaf evaluations: QPSK   16QAM    64QAM");
            for kind in [CodeKind::Rate1, CodeKind::Rate32, CodeKind::Rate2] {
                let vals: Vec<String> = [4usize, 16, 64]
                    .iter()
                    .map(|&m| format!("{:>8}", analysis::worst_case_leaves(kind, m)))
                    .collect();
                println!("  {:<16} {}", kind.name(), vals.join(" "));
            }
        }
        emitted = true;
    }

    if !emitted {
        return Err(
            "nothing to analyze; pass --min-det, --papr, --diophantine, --worst-case or --all"
                .into(),
        );
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&json_out)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_snr_grid(text: &str) -> Result<Vec<f64>, Box<dyn std::error::Error>> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err("snr grid must be start:step:stop".into());
        }
        let (start, step, stop): (f64, f64, f64) =
            (parts[0].parse()?, parts[1].parse()?, parts[2].parse()?);
        if step <= 0.0 {
            return Err("snr step must be positive".into());
        }
        let mut out = Vec::new();
        let mut v = start;
        while v <= stop + 1e-9 {
            out.push(v);
            v += step;
        }
        Ok(out)
    } else {
        Ok(text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()?)
    }
}

fn parse_decoder(text: &str) -> Result<DecoderMode, Box<dyn std::error::Error>> {
    match text {
        "exact" => Ok(DecoderMode::Exact),
        "conditional" => Ok(DecoderMode::Conditional),
        other => {
            if let Some(budget) = other.strip_prefix("timeout:") {
                Ok(DecoderMode::Timeout { budget: budget.parse()? })
            } else {
                Err(format!("unknown decoder '{other}'").into())
            }
        }
    }
}

fn simulate(args: SimulateArgs) -> CmdResult {
    let plan = if let Some(path) = &args.config {
        SimPlan::from_json(&fs::read_to_string(path)?)?
    } else {
        SimPlan {
            code: CodeKind::from_str(&args.code)?,
            m: args.qam,
            nr: args.nr,
            snr_db: parse_snr_grid(&args.snr)?,
            max_codewords: args.max_codewords,
            target_errors: args.target_errors,
            seed: args.seed,
            decoder: parse_decoder(&args.decoder)?,
        }
    };

    let records = run_curve(&plan)?;
    println!("snr_db     ber        errors  bits        avg_nodes  max_leaves  seconds");
    for r in &records {
        println!(
            "{:<10} {:<10.3e} {:<7} {:<11} {:<10.2} {:<11} {:.2}",
            r.snr_db, r.ber, r.bit_errors, r.bits_sent, r.avg_visited_nodes, r.max_leaf_evals,
            r.seconds
        );
    }
    if let Some(path) = &args.out {
        let mut file = fs::File::create(path)?;
        write_csv(&records, &mut file)?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn decode_once(args: DecodeArgs) -> CmdResult {
    use rand::{Rng, SeedableRng};
    let kind = CodeKind::from_str(&args.code)?;
    let spec = CodeSpec::new(kind);
    let cons = Constellation::square(args.qam)?;
    let weights = spec.detection_weights(&cons);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);

    let bits: Vec<bool> = (0..spec.bits_per_codeword(&cons)).map(|_| rng.gen()).collect();
    let s = spec.map_bits_to_symbols(&bits, &cons)?;
    let mut x = CMat::zeros(4, 4);
    for (w, &v) in weights.iter().zip(&s) {
        x = x.add(&w.scale(num_complex::Complex64::new(v, 0.0)));
    }
    let h = draw_channel(&mut rng, args.nr);
    let req = build_equivalent_channel(&weights, &h)?;
    let n0 = snr_to_n0(args.snr, 4);
    let y = transmit(&x, &h, n0, &mut rng);
    let y_prime = req.observe(&y);

    let mut trace = Vec::new();
    let res = detector::sphere_decode_traced(&req.r, &y_prime, args.qam, None, &mut trace)?;
    let conditional = detector::decode(
        &DetectorConfig::exact(match kind {
            CodeKind::Rate1 => Structure::Rate1Fgd,
            CodeKind::Rate32 => Structure::Rate32Fd,
            CodeKind::Rate2 => Structure::Rate2Fd,
        }),
        &req.r,
        &y_prime,
        args.qam,
    )?;

    println!("sent s      : {s:?}");
    println!("sphere s^   : {:?}", res.s_hat);
    println!(
        "sphere      : metric {:.6}, visited {}, leaves {}",
        res.metric, res.visited_nodes, res.leaf_evaluations
    );
    println!(
        "conditional : metric {:.6}, visited {}, leaves {}",
        conditional.metric, conditional.visited_nodes, conditional.leaf_evaluations
    );
    println!("correct     : {}", res.s_hat == s);
    println!("trace (first {} of {} events):", args.trace.min(trace.len()), trace.len());
    for ev in trace.iter().take(args.trace) {
        println!(
            "  level {:>2}  value {:+.0}  partial metric {:.6}",
            ev.level, ev.value, ev.partial_metric
        );
    }
    Ok(ExitCode::SUCCESS)
}
