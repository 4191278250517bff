//! Command-line front end: emits plot-ready CSV/JSON plus a manifest that
//! reproduces every output exactly.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qwalk::analytic::{self, CoinSeries};
use qwalk::ensemble::{self, InitialState};
use qwalk::fock::StateVector;
use qwalk::lon::{apply_lon, haar_random_unitary, ModeUnitary};
use qwalk::schmidt;
use qwalk::walk::{CoinInitialState, Walk, WalkConfig, WalkPartition};
use qwalk::wstate::{self, Partition, WState};
use qwalk::Error;

const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
const THREADS_ENV: &str = "QWALK_THREADS";

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Quantum-walk and photonic-network entanglement toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-step entanglement series of a coined walk
    Walk(WalkArgs),
    /// Entanglement over a grid of localized initial conditions
    SweepIc(SweepArgs),
    /// Closed-form coin-block series for the walk on the line
    Analytic(AnalyticArgs),
    /// Geometric entanglement of a single-photon (W-like) state
    Wstate(WstateArgs),
    /// Genuine multipartite entanglement of networked Fock states
    Gme(GmeArgs),
    /// Ensemble statistics over random networks
    Ensemble(EnsembleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TopologyArg {
    Circle,
    Line,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PartitionArg {
    Full,
    Coin,
    Position,
}

impl From<PartitionArg> for WalkPartition {
    fn from(p: PartitionArg) -> Self {
        match p {
            PartitionArg::Full => WalkPartition::Full,
            PartitionArg::Coin => WalkPartition::Coin,
            PartitionArg::Position => WalkPartition::Position,
        }
    }
}

#[derive(Args, Serialize)]
struct WalkArgs {
    /// Number of positions (ignored for --topology line, where it is
    /// derived from --steps)
    #[arg(long)]
    positions: Option<usize>,
    #[arg(long)]
    steps: usize,
    /// Initial coin angle θ
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Initial coin phase φ
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    #[arg(long, value_enum, default_value = "circle")]
    topology: TopologyArg,
    #[arg(long, value_enum, default_value = "full")]
    partition: PartitionArg,
    /// Add a walk-on-the-line series and its deviation from the circle
    #[arg(long)]
    compare_line: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long)]
    positions: usize,
    /// Step at which the grid is evaluated ((θ, φ) mode)
    #[arg(long)]
    step: Option<usize>,
    /// Sweep (θ, n ≤ n-max) at fixed φ instead of (θ, φ) at fixed step
    #[arg(long)]
    n_max: Option<usize>,
    /// Fixed φ for the (θ, n) sweep
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    #[arg(long, default_value_t = 25)]
    theta_points: usize,
    #[arg(long, default_value_t = 25)]
    phi_points: usize,
    #[arg(long, value_enum, default_value = "coin")]
    partition: PartitionArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Quantity {
    Phi1,
    Eg,
    Entropy,
    Asymptotic,
}

#[derive(Args, Serialize)]
struct AnalyticArgs {
    #[arg(long, value_enum)]
    quantity: Quantity,
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct WstateArgs {
    /// Symmetric state with M equal coefficients
    #[arg(long, conflicts_with_all = ["coeffs", "input"])]
    uniform: Option<usize>,
    /// Comma-separated coefficients
    #[arg(long, value_delimiter = ',', conflicts_with = "input")]
    coeffs: Option<Vec<f64>>,
    /// JSON file holding an array of coefficients
    #[arg(long)]
    input: Option<PathBuf>,
    /// Coarse-graining blocks, e.g. "0,1;2,3" (default: every mode separate)
    #[arg(long)]
    blocks: Option<String>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum InitialArg {
    N0,
    Ones,
}

impl From<InitialArg> for InitialState {
    fn from(i: InitialArg) -> Self {
        match i {
            InitialArg::N0 => InitialState::N0,
            InitialArg::Ones => InitialState::Ones,
        }
    }
}

#[derive(Args, Serialize)]
struct GmeArgs {
    #[arg(long)]
    modes: usize,
    #[arg(long, default_value_t = 1)]
    photons: u32,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "n0")]
    initial: InitialArg,
    /// Apply this fixed network (JSON) instead of sampling Haar unitaries
    #[arg(long)]
    unitary: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum EnsembleMode {
    Wstate,
    Gme,
}

#[derive(Args, Serialize)]
struct EnsembleArgs {
    #[arg(long, value_enum)]
    mode: EnsembleMode,
    /// Mode counts, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    modes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    photons: u32,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "n0")]
    initial: InitialArg,
    /// Also dump per-trial values to <out>.raw.csv
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct RunManifest {
    artifact_version: String,
    subcommand: String,
    parameters: serde_json::Value,
    csv_schema: String,
    outputs: Vec<String>,
    wall_time_s: f64,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var(THREADS_ENV) {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let started = Instant::now();
    let result = match cli.command {
        Command::Walk(args) => cmd_walk(args, started),
        Command::SweepIc(args) => cmd_sweep_ic(args, started),
        Command::Analytic(args) => cmd_analytic(args, started),
        Command::Wstate(args) => cmd_wstate(args, started),
        Command::Gme(args) => cmd_gme(args, started),
        Command::Ensemble(args) => cmd_ensemble(args, started),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 2 for argument/usage problems, 3 for numerical failures.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_)
        | Error::InvalidPartition { .. }
        | Error::ShapeMismatch { .. }
        | Error::IndexOutOfRange { .. }
        | Error::DimensionOverflow { .. }
        | Error::PermanentCap { .. }
        | Error::GmeCap { .. }
        | Error::Serialization(_)
        | Error::Io(_) => 2,
        Error::ZeroNorm
        | Error::NotNormalized { .. }
        | Error::NotUnitary { .. }
        | Error::RootNotConverged { .. } => 3,
    }
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> qwalk::Result<()> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "{header}")?;
    for row in rows {
        writeln!(file, "{row}")?;
    }
    Ok(())
}

fn write_manifest<A: Serialize>(
    subcommand: &str,
    args: &A,
    schema: &str,
    outputs: &[&Path],
    started: Instant,
) -> qwalk::Result<()> {
    let manifest = RunManifest {
        artifact_version: ARTIFACT_VERSION.to_string(),
        subcommand: subcommand.to_string(),
        parameters: serde_json::to_value(args)?,
        csv_schema: schema.to_string(),
        outputs: outputs
            .iter()
            .map(|p| p.display().to_string())
            .collect(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    let mut path = outputs[0].as_os_str().to_owned();
    path.push(".manifest.json");
    fs::write(path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

fn walk_eg_series(
    config: WalkConfig,
    initial: CoinInitialState,
    steps: usize,
    partition: WalkPartition,
) -> qwalk::Result<(Vec<f64>, Vec<f64>)> {
    let mut eg = Vec::with_capacity(steps + 1);
    let mut phi1 = Vec::with_capacity(steps + 1);
    let mut walk = Walk::new(config, initial);
    for n in 0..=steps {
        if n > 0 {
            walk.step();
        }
        eg.push(qwalk::walk::walk_entanglement(&walk, partition)?.e_g);
        phi1.push(walk.coin_partition_weights().1);
    }
    Ok((eg, phi1))
}

fn cmd_walk(args: WalkArgs, started: Instant) -> qwalk::Result<()> {
    let initial = CoinInitialState::new(args.theta, args.phi);
    let partition: WalkPartition = args.partition.into();
    let config = match args.topology {
        TopologyArg::Circle => WalkConfig::circle(args.positions.ok_or_else(|| {
            Error::InvalidArgument("--positions is required for the circle topology".into())
        })?)?,
        TopologyArg::Line => WalkConfig::line(args.steps),
    };
    let (eg, phi1) = walk_eg_series(config, initial, args.steps, partition)?;

    let (header, schema, rows): (String, &str, Vec<String>) = if args.compare_line {
        if args.topology == TopologyArg::Line {
            return Err(Error::InvalidArgument(
                "--compare-line needs the circle topology as baseline".into(),
            ));
        }
        let (line_eg, _) =
            walk_eg_series(WalkConfig::line(args.steps), initial, args.steps, partition)?;
        let rows = eg
            .iter()
            .zip(&line_eg)
            .enumerate()
            .map(|(n, (c, l))| format!("{n},{c},{l},{}", c - l))
            .collect();
        (
            "step,e_g_circle,e_g_line,delta".into(),
            "walk-compare-v1",
            rows,
        )
    } else if partition == WalkPartition::Coin {
        let rows = eg
            .iter()
            .zip(&phi1)
            .enumerate()
            .map(|(n, (e, p))| format!("{n},{e},{p}"))
            .collect();
        ("step,e_g,phi1".into(), "walk-coin-v1", rows)
    } else {
        let rows = eg
            .iter()
            .enumerate()
            .map(|(n, e)| format!("{n},{e}"))
            .collect();
        ("step,e_g".into(), "walk-v1", rows)
    };
    write_csv(&args.out, &header, &rows)?;
    write_manifest("walk", &args, schema, &[&args.out], started)
}

fn cmd_sweep_ic(args: SweepArgs, started: Instant) -> qwalk::Result<()> {
    let partition: WalkPartition = args.partition.into();
    let config = WalkConfig::circle(args.positions)?;
    let mut rows = Vec::new();
    let (header, schema) = if let Some(n_max) = args.n_max {
        // (θ, n) sweep at fixed φ
        for i in 0..args.theta_points {
            let theta =
                std::f64::consts::PI * i as f64 / (args.theta_points - 1).max(1) as f64;
            let series = qwalk::walk::eg_series(
                config.clone(),
                CoinInitialState::new(theta, args.phi),
                n_max,
                partition,
            )?;
            for (n, e) in series.iter().enumerate() {
                rows.push(format!("{theta},{n},{e}"));
            }
        }
        ("theta,step,e_g", "sweep-theta-n-v1")
    } else {
        let step = args.step.ok_or_else(|| {
            Error::InvalidArgument("pass either --step or --n-max".into())
        })?;
        let thetas: Vec<f64> = (0..args.theta_points)
            .map(|i| std::f64::consts::PI * i as f64 / (args.theta_points - 1).max(1) as f64)
            .collect();
        let phis: Vec<f64> = (0..args.phi_points)
            .map(|i| {
                2.0 * std::f64::consts::PI * i as f64 / (args.phi_points - 1).max(1) as f64
            })
            .collect();
        for (theta, phi, e) in
            qwalk::walk::sweep_theta_phi(&config, step, partition, &thetas, &phis)?
        {
            rows.push(format!("{theta},{phi},{e}"));
        }
        ("theta,phi,e_g", "sweep-theta-phi-v1")
    };
    write_csv(&args.out, header, &rows)?;
    write_manifest("sweep-ic", &args, schema, &[&args.out], started)
}

fn cmd_analytic(args: AnalyticArgs, started: Instant) -> qwalk::Result<()> {
    let series = CoinSeries::new(args.n_max + 1);
    let (header, schema, rows): (&str, &str, Vec<String>) = match args.quantity {
        Quantity::Phi1 => (
            "step,phi1",
            "analytic-phi1-v1",
            (1..=args.n_max)
                .map(|n| Ok(format!("{n},{}", series.phi1(n, args.theta, args.phi)?)))
                .collect::<qwalk::Result<_>>()?,
        ),
        Quantity::Eg => (
            "step,e_g",
            "analytic-eg-v1",
            (1..=args.n_max)
                .map(|n| Ok(format!("{n},{}", series.e_g(n, args.theta, args.phi)?)))
                .collect::<qwalk::Result<_>>()?,
        ),
        Quantity::Entropy => (
            "step,entropy",
            "analytic-entropy-v1",
            (0..=args.n_max)
                .map(|n| Ok(format!("{n},{}", series.entropy(n)?)))
                .collect::<qwalk::Result<_>>()?,
        ),
        Quantity::Asymptotic => (
            "theta,phi,phi1_limit,contour_residual",
            "analytic-asymptotic-v1",
            vec![format!(
                "{},{},{},{}",
                args.theta,
                args.phi,
                analytic::asymptotic_phi1(args.theta, args.phi),
                analytic::contour_residual(args.theta, args.phi)
            )],
        ),
    };
    write_csv(&args.out, header, &rows)?;
    write_manifest("analytic", &args, schema, &[&args.out], started)
}

#[derive(Serialize)]
struct WstateReport {
    modes: usize,
    coefficients: Vec<f64>,
    blocks: Option<Vec<Vec<usize>>>,
    g_max: f64,
    e_g: f64,
    branch: String,
    xi0: Option<f64>,
}

fn parse_blocks(spec: &str, modes: usize) -> qwalk::Result<Partition> {
    let blocks = spec
        .split(';')
        .map(|block| {
            block
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<usize>().map_err(|_| {
                        Error::InvalidArgument(format!("bad mode index {tok:?} in --blocks"))
                    })
                })
                .collect::<qwalk::Result<Vec<usize>>>()
        })
        .collect::<qwalk::Result<Vec<_>>>()?;
    Partition::new(blocks, modes)
}

fn cmd_wstate(args: WstateArgs, started: Instant) -> qwalk::Result<()> {
    let coeffs: Vec<f64> = if let Some(m) = args.uniform {
        WState::symmetric(m).coefficients().to_vec()
    } else if let Some(c) = &args.coeffs {
        c.clone()
    } else if let Some(path) = &args.input {
        serde_json::from_str(&fs::read_to_string(path)?)?
    } else {
        return Err(Error::InvalidArgument(
            "pass one of --uniform, --coeffs, --input".into(),
        ));
    };
    let modes = coeffs.len();
    let norm: f64 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let normalized: Vec<f64> = coeffs.iter().map(|c| (c / norm).abs()).collect();

    let report = if let Some(blocks) = &args.blocks {
        let partition = parse_blocks(blocks, modes)?;
        let amps: Vec<num_complex::Complex64> = normalized
            .iter()
            .map(|&c| num_complex::Complex64::new(c, 0.0))
            .collect();
        let rep = wstate::e_g(&amps, &partition)?;
        WstateReport {
            modes,
            coefficients: normalized,
            blocks: Some(partition.blocks().to_vec()),
            g_max: rep.g_max,
            e_g: rep.e_g,
            branch: format!("{:?}", rep.branch),
            xi0: rep.xi0,
        }
    } else {
        let rep = wstate::g_max_full(&WState::new(normalized.clone())?)?;
        WstateReport {
            modes,
            coefficients: normalized,
            blocks: None,
            g_max: rep.g_max,
            e_g: rep.e_g,
            branch: format!("{:?}", rep.branch),
            xi0: rep.xi0,
        }
    };

    let json = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(path) => {
            fs::write(path, &json)?;
            write_manifest("wstate", &args, "wstate-report-v1", &[path], started)?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_gme(args: GmeArgs, started: Instant) -> qwalk::Result<()> {
    let input = StateVector::basis_state(
        &InitialState::from(args.initial).fock(args.modes, args.photons)?,
    )?;
    let mut rows = Vec::new();
    if let Some(path) = &args.unitary {
        let unitary: ModeUnitary = serde_json::from_str(&fs::read_to_string(path)?)?;
        let report = schmidt::gme(&apply_lon(&unitary, &input)?)?;
        rows.push(format!(
            "0,{},{},{}",
            report.e_g,
            report.g_max,
            report.argmin.mask()
        ));
    } else {
        use rand::SeedableRng;
        for sample in 0..args.samples {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream(sample as u64);
            let u = haar_random_unitary(args.modes, &mut rng);
            let report = schmidt::gme(&apply_lon(&u, &input)?)?;
            rows.push(format!(
                "{sample},{},{},{}",
                report.e_g,
                report.g_max,
                report.argmin.mask()
            ));
        }
    }
    write_csv(&args.out, "sample,gme,g_max,argmin_mask", &rows)?;
    write_manifest("gme", &args, "gme-v1", &[&args.out], started)
}

fn cmd_ensemble(args: EnsembleArgs, started: Instant) -> qwalk::Result<()> {
    let mut rows = Vec::new();
    let mut raw_rows = Vec::new();
    for &m in &args.modes {
        let summary = match args.mode {
            EnsembleMode::Wstate => {
                ensemble::sample_w_ensemble(m, args.samples, args.seed, args.raw)?
            }
            EnsembleMode::Gme => ensemble::sample_gme_ensemble(
                m,
                args.photons,
                args.samples,
                args.seed,
                args.initial.into(),
                args.raw,
            )?,
        };
        rows.push(format!(
            "{},{},{},{},{},{}",
            summary.modes, summary.photons, summary.samples, summary.mean, summary.p16,
            summary.p84
        ));
        if let Some(values) = &summary.values {
            for (i, v) in values.iter().enumerate() {
                raw_rows.push(format!("{},{},{i},{v}", summary.modes, summary.photons));
            }
        }
    }
    write_csv(&args.out, "modes,photons,samples,mean,p16,p84", &rows)?;
    if args.raw {
        let mut raw_path = args.out.as_os_str().to_owned();
        raw_path.push(".raw.csv");
        let raw_path = PathBuf::from(raw_path);
        write_csv(&raw_path, "modes,photons,index,value", &raw_rows)?;
        write_manifest(
            "ensemble",
            &args,
            "ensemble-v1",
            &[&args.out, &raw_path],
            started,
        )
    } else {
        write_manifest("ensemble", &args, "ensemble-v1", &[&args.out], started)
    }
}
