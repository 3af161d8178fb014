use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qem::formats::{self, DecisionReport, MetricsFile, PredicateRecord};
use qem::pipeline::{self, DemoConfig, Experiment, Outcome};
use qem_core::circuit::demo_spectrum;
use qem_core::decision::ThresholdPolicy;
use qem_core::mitigation::MitigationMode;
use qem_core::Bitstring;

/// Error-mitigated sampling experiments on small noisy circuits.
#[derive(Parser)]
#[command(name = "qem", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Noisy phase estimation with PEC: distributions, metrics and smallest-string reports.
    QpeDemo(QpeDemoArgs),
    /// Mitigate a circuit read from JSON under a noise model read from JSON.
    Mitigate(MitigateArgs),
    /// Decide the smallest string of a stored histogram.
    MinString(MinStringArgs),
}

#[derive(Args)]
struct Sampling {
    /// Number of sampled circuit runs.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    #[arg(long)]
    seed: u64,
    /// Sampling worker threads; results do not depend on this.
    #[arg(long, env = "QEM_SAMPLER_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    threads: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QpeDemoArgs {
    #[arg(long, default_value_t = 4)]
    counting_qubits: usize,
    /// Circuit fault rate `Mp`, shared evenly by the inverse-QFT controlled phases.
    #[arg(long, default_value_t = 0.6)]
    fault_rate: f64,
    /// Per-qubit readout flip probability.
    #[arg(long, default_value_t = 0.0)]
    readout_flip: f64,
    /// Eigenphases and weights, e.g. `8/16:0.1,11/16:0.85,14/16:0.05`.
    #[arg(long, value_parser = parse_spectrum)]
    spectrum: Option<Spectrum>,
    /// `bayesian:P_B`, `frequentist:ALPHA` or `fixed:P_TH`; defaults to bayesian with the ground weight.
    #[arg(long, value_parser = parse_policy)]
    policy: Option<ThresholdPolicy>,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Mode {
    None,
    Pec,
    PecWithPostselect,
    PostselectOnly,
}

#[derive(Args)]
struct MitigateArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    noise: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Pec)]
    mode: Mode,
    /// Keep strings whose bits at these positions (0 = leftmost) have even parity.
    #[arg(long, value_delimiter = ',', conflicts_with = "accept")]
    parity: Option<Vec<usize>>,
    /// With --parity, keep odd parity instead.
    #[arg(long, requires = "parity")]
    odd: bool,
    /// Keep only these strings.
    #[arg(long, value_delimiter = ',')]
    accept: Option<Vec<String>>,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Args)]
struct MinStringArgs {
    #[arg(long)]
    histogram: PathBuf,
    #[arg(long, value_parser = parse_policy)]
    policy: ThresholdPolicy,
    /// Known smallest string for the valid-threshold intervals.
    #[arg(long)]
    true_z_min: Option<String>,
    /// Output directory; reports go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone)]
struct Spectrum(Vec<(f64, f64)>);

fn parse_number(s: &str) -> Result<f64, String> {
    let parsed = match s.split_once('/') {
        Some((n, d)) => n.trim().parse::<f64>().and_then(|n| d.trim().parse::<f64>().map(|d| n / d)),
        None => s.trim().parse(),
    };
    parsed.map_err(|_| format!("`{s}` is not a number"))
}

fn parse_spectrum(s: &str) -> Result<Spectrum, String> {
    s.split(',')
        .map(|part| {
            let (phase, weight) = part.split_once(':').ok_or_else(|| format!("`{part}` is not PHASE:WEIGHT"))?;
            Ok((parse_number(phase)?, parse_number(weight)?))
        })
        .collect::<Result<_, _>>()
        .map(Spectrum)
}

fn parse_policy(s: &str) -> Result<ThresholdPolicy, String> {
    s.parse::<ThresholdPolicy>().map_err(|e| e.to_string())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn print_metrics(m: &MetricsFile) {
    println!("A: {}", m.a);
    println!("n_cir: {}", m.n_cir);
    println!("tse_noisy_vs_ideal: {}", m.vs_ideal.noisy.tse);
    println!("tse_direct_vs_ideal: {}", m.vs_ideal.direct.tse);
    println!("tse_direct_vs_exact: {}", m.vs_exact.direct.tse);
    if let Some(s) = &m.vs_exact.sampling {
        println!("tse_sampling_vs_exact: {}", s.tse);
    }
    if let Some(c) = &m.vs_exact.clipped {
        println!("tse_clipped_vs_exact: {}", c.tse);
    }
}

fn print_report(r: &DecisionReport) {
    let z = r.z_min.as_deref().unwrap_or("none");
    let interval = match r.valid_interval {
        Some((lo, Some(hi))) => format!("[{lo}, {hi})"),
        Some((lo, None)) => format!("[{lo}, inf)"),
        None => "none".to_string(),
    };
    println!("z_min_{}: {z} (valid interval {interval})", r.method);
}

fn finish(outcome: &Outcome, dir: &Path) -> anyhow::Result<()> {
    outcome.write_artifacts(dir)?;
    print_metrics(&outcome.metrics()?);
    Ok(())
}

fn qpe_demo(args: QpeDemoArgs) -> anyhow::Result<()> {
    let cfg = DemoConfig {
        counting_qubits: args.counting_qubits,
        fault_rate: args.fault_rate,
        readout_flip: args.readout_flip,
        spectrum: args.spectrum.map_or_else(demo_spectrum, |s| s.0),
        shots: args.sampling.shots,
        seed: args.sampling.seed,
        policy: args.policy,
        threads: args.sampling.threads as usize,
    };
    let demo = pipeline::run_demo(&cfg)?;
    let dir = &args.sampling.out;
    pipeline::write(dir, "circuit.json", &formats::write_circuit(&demo.qpe.circuit)?)?;
    finish(&demo.outcome, dir)?;
    pipeline::write_reports(dir, &demo.reports)?;
    print_report(&demo.reports.0);
    print_report(&demo.reports.1);
    Ok(())
}

fn mitigate(args: MitigateArgs) -> anyhow::Result<()> {
    let circuit = formats::read_circuit(&read(&args.circuit)?).with_context(|| args.circuit.display().to_string())?;
    let noise = formats::read_noise(&read(&args.noise)?).with_context(|| args.noise.display().to_string())?;
    let predicate = match (args.parity, args.accept) {
        (Some(positions), _) => Some(PredicateRecord::Parity { positions, odd: args.odd }),
        (None, Some(accept)) => Some(PredicateRecord::Strings { accept }),
        (None, None) => None,
    }
    .map(|p| p.to_predicate())
    .transpose()?;
    let mode = match (args.mode, predicate) {
        (Mode::None, None) => MitigationMode::None,
        (Mode::Pec, None) => MitigationMode::Pec,
        (Mode::PecWithPostselect, Some(p)) => MitigationMode::PecWithPostselect(p),
        (Mode::PostselectOnly, Some(p)) => MitigationMode::PostselectOnly(p),
        (Mode::None | Mode::Pec, Some(_)) => bail!("--parity and --accept need a post-selection mode"),
        (Mode::PecWithPostselect | Mode::PostselectOnly, None) => {
            bail!("post-selection modes need --parity or --accept")
        }
    };
    let exp = Experiment { circuit, noise, mode };
    let s = &args.sampling;
    let outcome = pipeline::run_experiment(&exp, s.shots, s.seed, s.threads as usize)?;
    finish(&outcome, &s.out)
}

fn min_string(args: MinStringArgs) -> anyhow::Result<()> {
    let (hist, a) =
        formats::read_histogram(&read(&args.histogram)?).with_context(|| args.histogram.display().to_string())?;
    let truth = args.true_z_min.map(|s| s.parse::<Bitstring>()).transpose()?;
    let reports = pipeline::decide(&hist, a, &args.policy, truth)?;
    if let Some(e) = &reports.0.error {
        bail!("{e}");
    }
    match &args.out {
        Some(dir) => {
            pipeline::write_reports(dir, &reports)?;
            print_report(&reports.0);
            print_report(&reports.1);
        }
        None => {
            print!("{}", formats::write_decision(&reports.0)?);
            print!("{}", formats::write_decision(&reports.1)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::QpeDemo(args) => qpe_demo(args),
        Command::Mitigate(args) => mitigate(args),
        Command::MinString(args) => min_string(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
