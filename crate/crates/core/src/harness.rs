//! Monte Carlo experiment runner, persistence and plotting.
//!
//! Every bit trial is a pure function of `(config, trial_index)`: the
//! initial condition comes from a dedicated stream lane and the channel
//! noise from stream `trial_index`, so results are identical for any worker
//! count and any scheduling order. Aggregation is a commutative error-count
//! reduction.

mod csv;
mod plot;

pub use csv::{csv_string, parse_csv, read_csv, write_csv, CSV_HEADER};
pub use plot::{emit_plot, plot_string};

use crate::analysis::binomial_ci;
use crate::channel::{self, add_awgn, ChannelConfig, NoiseConvention};
use crate::chaos::{generate_frame, MapPair, MapParams};
use crate::detectors::{csk_demod, csk_waveform, make_replicas, predictive_demod};
use crate::detectors::predictive_direct_demod;
use crate::error::{Error, Result};
use crate::modem::{FskConfig, FskModem, SUPPORTED_ORDERS};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Confidence multiplier used for the CSV interval columns.
pub const CI_Z: f64 = 3.0;

/// Environment variable overriding the worker count (0 = auto).
pub const THREADS_ENV: &str = "CHAOTIC_MODEM_THREADS";

/// The communication schemes the harness can simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Correlation receiver with perfectly synchronized replicas.
    SyncCsk,
    /// Correlation receiver with replicas regenerated from `x0 + epsilon`.
    UnsyncCsk,
    /// Quantize + M-ary FSK transport, predictive demodulation.
    PredictiveFsk,
    /// Raw chaotic samples on the channel, predictive demodulation.
    PredictiveDirect,
    /// Direct transmission with the bias-corrected predictors.
    PredictiveDirectBias,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::SyncCsk,
        Scheme::UnsyncCsk,
        Scheme::PredictiveFsk,
        Scheme::PredictiveDirect,
        Scheme::PredictiveDirectBias,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::SyncCsk => "sync-csk",
            Scheme::UnsyncCsk => "unsync-csk",
            Scheme::PredictiveFsk => "predictive-fsk",
            Scheme::PredictiveDirect => "predictive-direct",
            Scheme::PredictiveDirectBias => "predictive-direct-bias",
        }
    }

    pub fn parse(s: &str) -> Result<Scheme> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown scheme {s:?} (expected one of {})",
                    Scheme::ALL.map(|s| s.name()).join(", ")
                ))
            })
    }

    /// Whether the scheme runs over the FSK layer (and so sweeps M).
    pub fn uses_fsk(&self) -> bool {
        matches!(self, Scheme::PredictiveFsk)
    }
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub schemes: Vec<Scheme>,
    /// Number of bits per (scheme, M, Eb/No) cell.
    pub bits: u64,
    /// Chaotic samples per bit (N).
    pub frame_len: usize,
    /// FSK modulation orders to sweep.
    pub mod_orders: Vec<usize>,
    /// Eb/No grid in dB, strictly increasing. `+inf` disables noise.
    pub ebno_grid_db: Vec<f64>,
    /// Replica initial-condition perturbation for unsynchronized CSK.
    pub epsilon: f64,
    pub master_seed: u64,
    pub noise_convention: NoiseConvention,
    /// Quadratic map coefficient.
    pub quad_a: f64,
    /// Trigonometric map amplitude.
    pub trig_amplitude: f64,
    /// Trigonometric map phase (radians).
    pub trig_phase: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schemes: vec![Scheme::SyncCsk, Scheme::UnsyncCsk, Scheme::PredictiveFsk],
            bits: 100_000,
            frame_len: 128,
            mod_orders: vec![4, 8, 16],
            ebno_grid_db: (0..=7).map(|i| 2.0 * i as f64).collect(),
            epsilon: 1e-8,
            master_seed: 7,
            noise_convention: NoiseConvention::VarianceEqualsN0,
            quad_a: 1.6,
            trig_amplitude: 2.2,
            trig_phase: 47.0 * PI / 64.0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("no schemes selected".into()));
        }
        for (i, s) in self.schemes.iter().enumerate() {
            if self.schemes[..i].contains(s) {
                return Err(Error::Config(format!("duplicate scheme {}", s.name())));
            }
        }
        if self.bits == 0 {
            return Err(Error::Config("bit count must be at least 1".into()));
        }
        if self.frame_len < 2 {
            return Err(Error::Config(format!(
                "frame length must be at least 2, got {}",
                self.frame_len
            )));
        }
        let needs_fsk = self.schemes.iter().any(Scheme::uses_fsk);
        if needs_fsk && self.mod_orders.is_empty() {
            return Err(Error::Config(
                "an FSK scheme is selected but no modulation orders given".into(),
            ));
        }
        for (i, &m) in self.mod_orders.iter().enumerate() {
            if !SUPPORTED_ORDERS.contains(&m) {
                return Err(Error::Config(format!(
                    "modulation order must be one of {SUPPORTED_ORDERS:?}, got {m}"
                )));
            }
            if self.mod_orders[..i].contains(&m) {
                return Err(Error::Config(format!("duplicate modulation order {m}")));
            }
        }
        if self.ebno_grid_db.is_empty() {
            return Err(Error::Config("Eb/No grid is empty".into()));
        }
        for &g in &self.ebno_grid_db {
            if g.is_nan() || g == f64::NEG_INFINITY {
                return Err(Error::Config(format!("bad Eb/No grid value {g}")));
            }
        }
        for w in self.ebno_grid_db.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config(format!(
                    "Eb/No grid must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if !self.epsilon.is_finite() {
            return Err(Error::Config(format!(
                "replica perturbation must be finite, got {}",
                self.epsilon
            )));
        }
        for (name, v) in [
            ("a", self.quad_a),
            ("A", self.trig_amplitude),
            ("phi", self.trig_phase),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("map parameter {name} must be finite")));
            }
        }
        Ok(())
    }

    /// Builds and calibrates the bit-to-map assignment.
    pub fn map_pair(&self) -> Result<MapPair> {
        MapPair::new(
            MapParams::quadratic(self.quad_a),
            MapParams::trigonometric(self.trig_amplitude, self.trig_phase),
        )?
        .calibrated()
    }
}

/// One simulated point of a BER curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub ebno_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Simulated BER over the Eb/No grid for one (scheme, M) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub scheme: Scheme,
    pub m: Option<usize>,
    pub frame_len: usize,
    pub points: Vec<BerPoint>,
}

impl BerCurve {
    pub fn label(&self) -> String {
        match self.m {
            Some(m) => format!("{} M={m}", self.scheme.name()),
            None => self.scheme.name().to_string(),
        }
    }
}

/// Everything one bit trial needs, precomputed once per grid cell.
#[derive(Debug, Clone)]
pub struct TrialCell {
    scheme: Scheme,
    maps: MapPair,
    modem: Option<FskModem>,
    channel: ChannelConfig,
    epsilon: f64,
    frame_len: usize,
    /// The unsynchronized receiver's fixed replica reference: it cannot
    /// track the transmitter's per-bit initial condition, so its replica
    /// pair is regenerated once per run from a stream-derived reference
    /// (perturbed by epsilon), independent of every transmitted frame.
    unsync_reference_x0: f64,
}

impl TrialCell {
    /// `maps` must be the calibrated pair for `config`; it is passed in so
    /// calibration runs once per experiment, not once per cell.
    pub fn new(
        config: &ExperimentConfig,
        maps: &MapPair,
        scheme: Scheme,
        m: Option<usize>,
        ebno_db: f64,
    ) -> Result<Self> {
        let channel = ChannelConfig::new(ebno_db, config.noise_convention, config.master_seed)?;
        let modem = match (scheme.uses_fsk(), m) {
            (true, Some(m)) => {
                // Each FSK symbol carries Eb/M of the per-bit energy.
                let symbol_energy = channel.eb / m as f64;
                Some(FskModem::new(FskConfig::new(m, symbol_energy)?)?)
            }
            (true, None) => {
                return Err(Error::Config(format!(
                    "scheme {} needs a modulation order",
                    scheme.name()
                )))
            }
            (false, _) => None,
        };
        Ok(TrialCell {
            scheme,
            maps: *maps,
            modem,
            channel,
            epsilon: config.epsilon,
            frame_len: config.frame_len,
            unsync_reference_x0: channel::draw_replica_reference(config.master_seed),
        })
    }
}

/// Runs the full pipeline for one bit and returns 1 on a bit error.
///
/// Deterministic given `(cell, bit, trial_index)`: the initial condition is
/// drawn from a dedicated stream lane and channel noise from stream
/// `trial_index`.
pub fn run_bit_trial(cell: &TrialCell, bit: u8, trial_index: u64) -> Result<u8> {
    let x0 = channel::draw_initial_condition(cell.channel.master_seed, trial_index);
    let frame = generate_frame(&cell.maps, bit, x0, cell.frame_len)?;
    let decided = match cell.scheme {
        Scheme::PredictiveFsk => {
            let modem = cell.modem.as_ref().expect("fsk cell carries a modem");
            let tx = modem.frame_signal(&frame)?;
            let rx = add_awgn(&tx, &cell.channel, trial_index);
            let x_tilde = modem.demodulate_frame(&rx)?;
            predictive_demod(&x_tilde, &cell.maps)?.0
        }
        Scheme::PredictiveDirect | Scheme::PredictiveDirectBias => {
            let rx = add_awgn(&frame.raw, &cell.channel, trial_index);
            let bias = cell.scheme == Scheme::PredictiveDirectBias;
            predictive_direct_demod(&rx, &cell.maps, cell.channel.noise_sigma2(), bias)?.0
        }
        Scheme::SyncCsk | Scheme::UnsyncCsk => {
            let tx = csk_waveform(&frame, cell.channel.eb)?;
            let rx = add_awgn(&tx, &cell.channel, trial_index);
            let replicas = if cell.scheme == Scheme::UnsyncCsk {
                make_replicas(
                    &cell.maps,
                    cell.unsync_reference_x0,
                    cell.frame_len,
                    cell.epsilon,
                )?
            } else {
                make_replicas(&cell.maps, x0, cell.frame_len, 0.0)?
            };
            csk_demod(&rx, &replicas)?
        }
    };
    Ok(u8::from(decided != bit))
}

/// Worker count from [`THREADS_ENV`]; 0 or unset means automatic.
pub fn worker_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            Error::Config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))
        }),
        Err(_) => Ok(0),
    }
}

/// Runs the configured experiment: for every (scheme, M, Eb/No) cell,
/// aggregates `config.bits` independent trials with the alternating bit
/// pattern `b_k = k mod 2`. Output is independent of worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<BerCurve>> {
    run_experiment_with(config, |_, _| {})
}

/// [`run_experiment`] with an explicit worker count (0 = automatic),
/// bypassing the environment override; exists so scheduling independence
/// can be exercised directly.
pub fn run_experiment_threads(
    config: &ExperimentConfig,
    num_threads: usize,
) -> Result<Vec<BerCurve>> {
    run_experiment_inner(config, num_threads, |_, _| {})
}

/// [`run_experiment`] with a per-point progress callback.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    on_point: impl FnMut(&str, &BerPoint),
) -> Result<Vec<BerCurve>> {
    let threads = worker_threads()?;
    run_experiment_inner(config, threads, on_point)
}

fn run_experiment_inner(
    config: &ExperimentConfig,
    threads: usize,
    mut on_point: impl FnMut(&str, &BerPoint),
) -> Result<Vec<BerCurve>> {
    config.validate()?;
    let maps = config.map_pair()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;

    let mut curves = Vec::new();
    for &scheme in &config.schemes {
        let m_slots: Vec<Option<usize>> = if scheme.uses_fsk() {
            config.mod_orders.iter().map(|&m| Some(m)).collect()
        } else {
            vec![None]
        };
        for m in m_slots {
            let mut curve = BerCurve {
                scheme,
                m,
                frame_len: config.frame_len,
                points: Vec::with_capacity(config.ebno_grid_db.len()),
            };
            for &ebno_db in &config.ebno_grid_db {
                let cell = TrialCell::new(config, &maps, scheme, m, ebno_db)?;
                let errors: u64 = pool.install(|| {
                    (0..config.bits)
                        .into_par_iter()
                        .map(|k| run_bit_trial(&cell, (k % 2) as u8, k).map(u64::from))
                        .try_reduce(|| 0, |a, b| Ok(a + b))
                })?;
                let ber = errors as f64 / config.bits as f64;
                let (ci_low, ci_high) = binomial_ci(errors, config.bits, CI_Z)?;
                let point = BerPoint {
                    ebno_db,
                    trials: config.bits,
                    errors,
                    ber,
                    ci_low,
                    ci_high,
                };
                on_point(&curve.label(), &point);
                curve.points.push(point);
            }
            curves.push(curve);
        }
    }
    Ok(curves)
}

/// Parses an Eb/No grid spec: either a single value or `start:stop:step`
/// with an inclusive stop.
pub fn parse_ebno_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad Eb/No value {s:?} in {spec:?}")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
            if step.is_nan() || step <= 0.0 {
                return Err(Error::Config(format!("grid step must be positive in {spec:?}")));
            }
            if stop < start {
                return Err(Error::Config(format!("grid stop below start in {spec:?}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(Error::Config(format!(
            "Eb/No spec must be a value or start:stop:step, got {spec:?}"
        ))),
    }
}

/// Applies `key = value` lines from a config file on top of `config`.
/// `#` starts a comment; unknown keys are rejected.
pub fn apply_config_file(text: &str, config: &mut ExperimentConfig) -> Result<()> {
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| Error::Config(format!("line {}: bad {what} {value:?}", lineno + 1));
        match key {
            "schemes" => {
                config.schemes = value
                    .split(',')
                    .map(|s| Scheme::parse(s.trim()))
                    .collect::<Result<_>>()?;
            }
            "bits" => config.bits = value.parse().map_err(|_| bad("bit count"))?,
            "frame" => config.frame_len = value.parse().map_err(|_| bad("frame length"))?,
            "mods" => {
                config.mod_orders = value
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| bad("modulation order")))
                    .collect::<Result<_>>()?;
            }
            "ebno" => config.ebno_grid_db = parse_ebno_grid(value)?,
            "epsilon" => config.epsilon = value.parse().map_err(|_| bad("epsilon"))?,
            "seed" => config.master_seed = value.parse().map_err(|_| bad("seed"))?,
            "noise-convention" => config.noise_convention = NoiseConvention::parse(value)?,
            "a" => config.quad_a = value.parse().map_err(|_| bad("map parameter a"))?,
            "A" => config.trig_amplitude = value.parse().map_err(|_| bad("map parameter A"))?,
            "phi" => config.trig_phase = value.parse().map_err(|_| bad("map parameter phi"))?,
            other => {
                return Err(Error::Config(format!(
                    "line {}: unknown key {other:?}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(())
}
