//! M-level uniform quantizer, M-ary FSK modulation of quantized chaotic
//! samples, and coherent filter-bank demodulation.
//!
//! Each quantized sample is carried by M real samples of a cosine tone,
//! `cos(pi (2 level + 1) m / (2M))`. The printed amplitude of that waveform
//! does not give constant per-symbol energy, so every template is
//! normalized numerically to unit energy and scaled to the configured
//! symbol energy; transmitted power is then constant and independent of the
//! chaotic signal. The tones are near-orthogonal (pairwise correlation
//! 1/(M+1)), which is why the closed-form error expression is treated as an
//! approximation.

use crate::chaos::ChaoticFrame;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Supported modulation orders.
pub const SUPPORTED_ORDERS: [usize; 5] = [2, 4, 8, 16, 32];

/// Quantizes `x` in (-1, 1) to a level in `[0, M-1]` over uniform cells.
pub fn quantize(x: f64, m: usize) -> Result<usize> {
    if !(x.is_finite() && x.abs() < 1.0) {
        return Err(Error::OutOfRange { value: x });
    }
    let level = ((x + 1.0) / 2.0 * m as f64).floor() as usize;
    Ok(level.min(m - 1))
}

/// Midpoint of the quantizer cell for `level`: `-1 + (2 level + 1)/M`.
pub fn dequantize(level: usize, m: usize) -> Result<f64> {
    if level >= m {
        return Err(Error::InvalidArgument(format!(
            "level {level} out of range for M = {m}"
        )));
    }
    Ok(-1.0 + (2 * level + 1) as f64 / m as f64)
}

/// FSK layer configuration: modulation order and per-symbol energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FskConfig {
    pub m: usize,
    pub symbol_energy: f64,
}

impl FskConfig {
    pub fn new(m: usize, symbol_energy: f64) -> Result<Self> {
        if !SUPPORTED_ORDERS.contains(&m) {
            return Err(Error::InvalidArgument(format!(
                "modulation order must be one of {SUPPORTED_ORDERS:?}, got {m}"
            )));
        }
        if !(symbol_energy.is_finite() && symbol_energy > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "symbol energy must be positive, got {symbol_energy}"
            )));
        }
        Ok(FskConfig { m, symbol_energy })
    }
}

/// M real samples carrying one quantized chaotic sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FskSymbol {
    pub samples: Vec<f64>,
    pub level: usize,
}

/// Precomputed tone bank for one `(M, Es)` configuration.
///
/// Templates are shared read-only; the struct is cheap to clone and safe to
/// use from any number of threads.
#[derive(Debug, Clone)]
pub struct FskModem {
    config: FskConfig,
    /// Unit-energy templates, one per level; used by the correlator bank.
    unit_templates: Vec<Vec<f64>>,
    /// Unit templates scaled to `sqrt(symbol_energy)`; used by the modulator.
    scaled_templates: Vec<Vec<f64>>,
}

impl FskModem {
    pub fn new(config: FskConfig) -> Result<Self> {
        // FskConfig fields are public; re-check them here.
        let config = FskConfig::new(config.m, config.symbol_energy)?;
        let m = config.m;
        let mut unit_templates = Vec::with_capacity(m);
        let mut scaled_templates = Vec::with_capacity(m);
        let amplitude = config.symbol_energy.sqrt();
        for level in 0..m {
            let tone: Vec<f64> = (0..m)
                .map(|i| (PI * (2 * level + 1) as f64 * i as f64 / (2.0 * m as f64)).cos())
                .collect();
            let energy: f64 = tone.iter().map(|v| v * v).sum();
            let norm = energy.sqrt();
            let unit: Vec<f64> = tone.iter().map(|v| v / norm).collect();
            scaled_templates.push(unit.iter().map(|v| v * amplitude).collect());
            unit_templates.push(unit);
        }
        Ok(FskModem {
            config,
            unit_templates,
            scaled_templates,
        })
    }

    pub fn config(&self) -> FskConfig {
        self.config
    }

    /// The waveform for one quantizer level, at exactly the configured
    /// symbol energy.
    pub fn modulate(&self, level: usize) -> Result<FskSymbol> {
        if level >= self.config.m {
            return Err(Error::InvalidArgument(format!(
                "level {level} out of range for M = {}",
                self.config.m
            )));
        }
        Ok(FskSymbol {
            samples: self.scaled_templates[level].clone(),
            level,
        })
    }

    /// Correlates `received` against all M unit-energy templates and
    /// returns the argmax level; ties break toward the lowest level.
    pub fn demodulate(&self, received: &[f64]) -> Result<usize> {
        let m = self.config.m;
        if received.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                actual: received.len(),
            });
        }
        let mut best_level = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (level, template) in self.unit_templates.iter().enumerate() {
            let score: f64 = received.iter().zip(template).map(|(r, t)| r * t).sum();
            if score > best_score {
                best_score = score;
                best_level = level;
            }
        }
        Ok(best_level)
    }

    /// Quantize-then-modulate every normalized sample of a frame.
    pub fn modulate_frame(&self, frame: &ChaoticFrame) -> Result<Vec<FskSymbol>> {
        frame
            .normalized
            .iter()
            .map(|&x| self.modulate(quantize(x, self.config.m)?))
            .collect()
    }

    /// The concatenated N*M-sample transmit signal for a frame.
    pub fn frame_signal(&self, frame: &ChaoticFrame) -> Result<Vec<f64>> {
        let symbols = self.modulate_frame(frame)?;
        let mut signal = Vec::with_capacity(symbols.len() * self.config.m);
        for s in &symbols {
            signal.extend_from_slice(&s.samples);
        }
        Ok(signal)
    }

    /// Demodulates a received N*M-sample signal back to the sequence of
    /// dequantized (cell-midpoint) chaotic sample estimates.
    pub fn demodulate_frame(&self, received: &[f64]) -> Result<Vec<f64>> {
        let m = self.config.m;
        if received.is_empty() || !received.len().is_multiple_of(m) {
            return Err(Error::LengthMismatch {
                expected: m * (received.len() / m).max(1),
                actual: received.len(),
            });
        }
        received
            .chunks_exact(m)
            .map(|chunk| dequantize(self.demodulate(chunk)?, m))
            .collect()
    }
}

/// One-off modulation without building a bank; see [`FskModem::modulate`].
pub fn fsk_modulate(level: usize, cfg: FskConfig) -> Result<FskSymbol> {
    FskModem::new(cfg)?.modulate(level)
}

/// One-off demodulation without building a bank; see [`FskModem::demodulate`].
pub fn fsk_demodulate(received: &[f64], cfg: FskConfig) -> Result<usize> {
    FskModem::new(cfg)?.demodulate(received)
}
