//! Command-line front end: runs BER experiments, prints closed-form theory
//! tables, and exercises the built-in self checks.
//!
//! Exit codes: 0 on success, 1 on configuration or usage errors, 2 on
//! runtime failures.

mod selftest;
mod theory;

use chaotic_modem::analysis::{bpsk_bound, csk_coherent_bound, fsk_pe, fsk_pe_note, TheoryCurve};
use chaotic_modem::channel::NoiseConvention;
use chaotic_modem::error::Error;
use chaotic_modem::harness::{
    apply_config_file, emit_plot, parse_ebno_grid, run_experiment_with, write_csv,
    ExperimentConfig, Scheme,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "chaotic-modem",
    about = "Chaotic communications BER simulator: chaos-switched bits over \
             M-ary FSK with predictive and correlation receivers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a Monte Carlo BER experiment and write CSV + SVG outputs.
    Run(RunArgs),
    /// Print closed-form reference curves as a CSV table.
    Theory(TheoryArgs),
    /// Run the built-in property checks.
    Selftest,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Comma-separated schemes: sync-csk, unsync-csk, predictive-fsk,
    /// predictive-direct, predictive-direct-bias.
    #[arg(long)]
    schemes: Option<String>,

    /// Bits per (scheme, M, Eb/No) cell.
    #[arg(long, value_name = "K")]
    bits: Option<u64>,

    /// Chaotic samples per bit.
    #[arg(long, value_name = "N")]
    frame: Option<usize>,

    /// Comma-separated FSK modulation orders.
    #[arg(long, value_name = "M,...")]
    mods: Option<String>,

    /// Eb/No grid: a single value or start:stop:step (stop inclusive), dB.
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    ebno: Option<String>,

    /// Replica initial-condition perturbation for unsync-csk.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,

    /// Master seed for all stream-derived randomness.
    #[arg(long)]
    seed: Option<u64>,

    /// Noise variance convention: "literal" (sigma^2 = No) or "halved"
    /// (sigma^2 = No/2).
    #[arg(long, value_name = "CONV")]
    noise_convention: Option<String>,

    /// Output directory for ber.csv and ber.svg.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Config file with `key = value` lines; flags override file values.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TheoryArgs {
    /// Comma-separated FSK modulation orders.
    #[arg(long, value_name = "M,...", default_value = "4,8,16")]
    mods: String,

    /// Eb/No grid: a single value or start:stop:step (stop inclusive), dB.
    #[arg(long, value_name = "SPEC", default_value = "0:14:2", allow_hyphen_values = true)]
    ebno: String,

    /// Noise variance convention: "literal" or "halved".
    #[arg(long, value_name = "CONV", default_value = "literal")]
    noise_convention: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Theory(args) => theory::cmd_theory(args),
        Command::Selftest => return selftest::run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidArgument(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn parse_mod_list(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad modulation order {part:?}")))
        })
        .collect()
}

fn parse_scheme_list(s: &str) -> Result<Vec<Scheme>, Error> {
    s.split(',').map(|part| Scheme::parse(part.trim())).collect()
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut config = ExperimentConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        apply_config_file(&text, &mut config)?;
    }
    if let Some(s) = &args.schemes {
        config.schemes = parse_scheme_list(s)?;
    }
    if let Some(bits) = args.bits {
        config.bits = bits;
    }
    if let Some(frame) = args.frame {
        config.frame_len = frame;
    }
    if let Some(mods) = &args.mods {
        config.mod_orders = parse_mod_list(mods)?;
    }
    if let Some(ebno) = &args.ebno {
        config.ebno_grid_db = parse_ebno_grid(ebno)?;
    }
    if let Some(epsilon) = args.epsilon {
        config.epsilon = epsilon;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(conv) = &args.noise_convention {
        config.noise_convention = NoiseConvention::parse(conv)?;
    }
    config.validate()?;
    Ok(config)
}

/// Theory overlays for the plot: the matched-filter lower bound, the
/// coherent CSK closed form under the active convention, and the FSK
/// symbol-error approximation per modulation order.
fn theory_overlays(config: &ExperimentConfig) -> Result<Vec<TheoryCurve>, Error> {
    let finite_grid: Vec<f64> = config
        .ebno_grid_db
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .collect();
    if finite_grid.is_empty() {
        return Ok(Vec::new());
    }
    let conv = config.noise_convention;
    let mut curves = vec![
        TheoryCurve::from_fn("bpsk-bound", &finite_grid, bpsk_bound)?,
        TheoryCurve::from_fn(format!("csk-coherent ({})", conv.label()), &finite_grid, |g| {
            csk_coherent_bound(g, conv)
        })?,
    ];
    if config.schemes.iter().any(Scheme::uses_fsk) {
        for &m in &config.mod_orders {
            curves.push(TheoryCurve::from_fn(
                format!("fsk-pe M={m}"),
                &finite_grid,
                |g| fsk_pe(g, m, conv),
            )?);
        }
    }
    Ok(curves)
}

fn cmd_run(args: RunArgs) -> Result<(), Error> {
    let config = build_config(&args)?;
    std::fs::create_dir_all(&args.out).map_err(|source| Error::Io {
        path: args.out.clone(),
        source,
    })?;

    eprintln!(
        "running {} bits/cell over {} Eb/No points, N = {}, convention = {}, seed = {}",
        config.bits,
        config.ebno_grid_db.len(),
        config.frame_len,
        config.noise_convention.label(),
        config.master_seed,
    );
    let curves = run_experiment_with(&config, |label, point| {
        eprintln!(
            "  {label:24} {:>5} dB  ber {:.3e}  ({} / {})",
            point.ebno_db, point.ber, point.errors, point.trials
        );
    })?;

    let csv_path = args.out.join("ber.csv");
    write_csv(&curves, &csv_path)?;
    let plot_path = args.out.join("ber.svg");
    emit_plot(&curves, &theory_overlays(&config)?, &plot_path)?;
    eprintln!("# {}", fsk_pe_note(config.noise_convention));
    println!("{}", csv_path.display());
    println!("{}", plot_path.display());
    Ok(())
}
