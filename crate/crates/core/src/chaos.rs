//! Chaotic map definitions, orbit generation, per-map normalization, and
//! one-step prediction (plain and bias-corrected).
//!
//! Two one-dimensional maps are supported: a quadratic map `x -> a - x^2`
//! and a trigonometric map `x -> A cos(x + phi)`. Each map carries a fixed
//! affine normalization `x -> (x - mu) / s` calibrated from a long orbit so
//! that normalized samples are zero-mean and strictly inside (-1, 1). The
//! receiver predicts in the normalized domain through the conjugated map
//! `norm . f . denorm`, so a matched noiseless frame reproduces itself.

use crate::error::{Error, Result};

/// Orbit samples beyond this magnitude are treated as divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Headroom factor applied to the calibrated scale so that on-attractor
/// samples land strictly inside (-1, 1), which the quantizer requires.
pub const SCALE_HEADROOM: f64 = 1e-6;

/// Normalized samples are clamped to this magnitude. Off-attractor initial
/// conditions can map slightly outside the calibrated range for the first
/// few steps; clamping keeps the frame length exactly N.
pub const CLAMP_LIMIT: f64 = 1.0 - 1e-9;

/// Default number of samples discarded before collecting calibration stats.
pub const DEFAULT_BURN_IN: usize = 1_000;
/// Default calibration orbit length; invariant-measure statistics for these
/// maps stabilize well below this.
pub const DEFAULT_ORBIT_LEN: usize = 1_000_000;
/// Default calibration initial condition, inside both maps' basins.
pub const DEFAULT_CALIBRATION_X0: f64 = 0.1;

/// Which family a chaotic map belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Quadratic,
    Trigonometric,
}

/// Parameters of one chaotic map plus its normalization transform.
///
/// For `Quadratic` only `a` is meaningful; for `Trigonometric` only
/// `amplitude` and `phase`. Unused fields are ignored, not required zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    pub kind: MapKind,
    /// Quadratic coefficient in `a - x^2`.
    pub a: f64,
    /// Amplitude `A` in `A cos(x + phi)`.
    pub amplitude: f64,
    /// Phase `phi` in radians.
    pub phase: f64,
    /// Attractor mean `mu` subtracted by the normalization.
    pub norm_offset: f64,
    /// Positive scale `s` dividing the centered sample.
    pub norm_scale: f64,
}

impl MapParams {
    /// Quadratic map `x -> a - x^2` with identity normalization.
    pub fn quadratic(a: f64) -> Self {
        MapParams {
            kind: MapKind::Quadratic,
            a,
            amplitude: 0.0,
            phase: 0.0,
            norm_offset: 0.0,
            norm_scale: 1.0,
        }
    }

    /// Trigonometric map `x -> A cos(x + phi)` with identity normalization.
    pub fn trigonometric(amplitude: f64, phase: f64) -> Self {
        MapParams {
            kind: MapKind::Trigonometric,
            a: 0.0,
            amplitude,
            phase,
            norm_offset: 0.0,
            norm_scale: 1.0,
        }
    }

    /// Short human-readable label used in error messages.
    pub fn label(&self) -> String {
        match self.kind {
            MapKind::Quadratic => format!("quadratic(a={})", self.a),
            MapKind::Trigonometric => {
                format!("trigonometric(A={}, phi={})", self.amplitude, self.phase)
            }
        }
    }

    /// One application of the raw map.
    pub fn iterate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "map input must be finite, got {x}"
            )));
        }
        Ok(self.iterate_unchecked(x))
    }

    #[inline]
    fn iterate_unchecked(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Quadratic => self.a - x * x,
            MapKind::Trigonometric => self.amplitude * (x + self.phase).cos(),
        }
    }

    /// Normalized-domain coordinate of a raw sample, clamped to stay
    /// strictly inside (-1, 1).
    #[inline]
    pub fn normalize(&self, raw: f64) -> f64 {
        let v = (raw - self.norm_offset) / self.norm_scale;
        v.clamp(-CLAMP_LIMIT, CLAMP_LIMIT)
    }

    /// Inverse of the affine normalization (no clamping).
    #[inline]
    pub fn denormalize(&self, normalized: f64) -> f64 {
        normalized * self.norm_scale + self.norm_offset
    }

    /// One-step prediction in the normalized domain: the conjugated map
    /// `(f(s*x + mu) - mu) / s`. On a noiseless matched frame this
    /// reproduces the next normalized sample (up to rounding).
    pub fn predict_next(&self, x_normalized: f64) -> Result<f64> {
        if !x_normalized.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "prediction input must be finite, got {x_normalized}"
            )));
        }
        let raw = self.denormalize(x_normalized);
        Ok((self.iterate_unchecked(raw) - self.norm_offset) / self.norm_scale)
    }

    /// The expected image of a point under one noisy iteration: the mean of
    /// `f(x + w)` over `w ~ N(0, sigma2)`, which is `a - x^2 - sigma2` for
    /// the quadratic map and `A cos(x + phi) exp(-sigma2/2)` for the
    /// trigonometric one.
    pub fn predict_next_bias_corrected(&self, x_raw: f64, sigma2: f64) -> Result<f64> {
        self.check_noisy_input(x_raw, sigma2)?;
        Ok(match self.kind {
            MapKind::Quadratic => self.a - x_raw * x_raw - sigma2,
            MapKind::Trigonometric => {
                self.amplitude * (x_raw + self.phase).cos() * (-sigma2 / 2.0).exp()
            }
        })
    }

    /// Unbiased one-step prediction from a noisy observation: inverts the
    /// average distortion described by [`MapParams::predict_next_bias_corrected`],
    /// so the residual against the next received sample is zero-mean. For
    /// the quadratic map `f(r)` undershoots by `sigma2` on average, hence
    /// `a - r^2 + sigma2`; for the trigonometric map the image shrinks by
    /// `exp(-sigma2/2)`, hence `A cos(r + phi) exp(+sigma2/2)`.
    pub fn predict_next_unbiased(&self, received: f64, sigma2: f64) -> Result<f64> {
        self.check_noisy_input(received, sigma2)?;
        Ok(match self.kind {
            MapKind::Quadratic => self.a - received * received + sigma2,
            MapKind::Trigonometric => {
                self.amplitude * (received + self.phase).cos() * (sigma2 / 2.0).exp()
            }
        })
    }

    fn check_noisy_input(&self, x: f64, sigma2: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "prediction input must be finite, got {x}"
            )));
        }
        if !sigma2.is_finite() || sigma2 < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "noise variance must be non-negative, got {sigma2}"
            )));
        }
        Ok(())
    }

    /// Calibrates the normalization transform from a long off-line orbit.
    ///
    /// Runs `burn_in` discarded steps from `x0`, then `orbit_len` recorded
    /// steps; sets `norm_offset` to the orbit mean and `norm_scale` to
    /// `(1 + SCALE_HEADROOM) * max|x - mean|`. Deterministic for fixed
    /// inputs.
    pub fn calibrate_normalization(
        mut self,
        burn_in: usize,
        orbit_len: usize,
        x0: f64,
    ) -> Result<MapParams> {
        if orbit_len < 10_000 {
            return Err(Error::InvalidArgument(format!(
                "calibration orbit must have at least 10^4 samples, got {orbit_len}"
            )));
        }
        let mut x = x0;
        for step in 0..burn_in {
            x = self.iterate(x)?;
            self.check_divergence(x, step)?;
        }
        let mut orbit = Vec::with_capacity(orbit_len);
        let mut sum = 0.0;
        for step in 0..orbit_len {
            orbit.push(x);
            sum += x;
            x = self.iterate_unchecked(x);
            self.check_divergence(x, burn_in + step)?;
        }
        let mean = sum / orbit_len as f64;
        let max_dev = orbit
            .iter()
            .map(|v| (v - mean).abs())
            .fold(0.0_f64, f64::max);
        if max_dev < 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "{} orbit collapsed to a point; cannot calibrate a scale",
                self.label()
            )));
        }
        self.norm_offset = mean;
        self.norm_scale = (1.0 + SCALE_HEADROOM) * max_dev;
        Ok(self)
    }

    /// Calibration with the default burn-in, orbit length and x0.
    pub fn calibrated(self) -> Result<MapParams> {
        self.calibrate_normalization(DEFAULT_BURN_IN, DEFAULT_ORBIT_LEN, DEFAULT_CALIBRATION_X0)
    }

    #[inline]
    fn check_divergence(&self, x: f64, step: usize) -> Result<()> {
        if !x.is_finite() || x.abs() > DIVERGENCE_LIMIT {
            return Err(Error::Divergence {
                map: self.label(),
                step,
                value: x,
                limit: DIVERGENCE_LIMIT,
            });
        }
        Ok(())
    }

    /// True when the two maps define the same dynamics (normalization
    /// fields excluded).
    fn same_dynamics(&self, other: &MapParams) -> bool {
        if self.kind != other.kind {
            return false;
        }
        match self.kind {
            MapKind::Quadratic => self.a == other.a,
            MapKind::Trigonometric => {
                self.amplitude == other.amplitude && self.phase == other.phase
            }
        }
    }
}

/// The two maps assigned to bit values 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPair {
    pub f0: MapParams,
    pub f1: MapParams,
}

impl MapPair {
    pub fn new(f0: MapParams, f1: MapParams) -> Result<Self> {
        if f0.same_dynamics(&f1) {
            return Err(Error::InvalidArgument(
                "bit maps must be distinct (differ in kind or parameters)".into(),
            ));
        }
        for map in [&f0, &f1] {
            if !(map.norm_scale > 0.0 && map.norm_scale.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{}: norm_scale must be positive, got {}",
                    map.label(),
                    map.norm_scale
                )));
            }
        }
        Ok(MapPair { f0, f1 })
    }

    /// The map selected by a bit value.
    #[inline]
    pub fn select(&self, bit: u8) -> &MapParams {
        if bit == 0 {
            &self.f0
        } else {
            &self.f1
        }
    }

    /// Calibrates both maps' normalizations with the default settings.
    pub fn calibrated(self) -> Result<Self> {
        Ok(MapPair {
            f0: self.f0.calibrated()?,
            f1: self.f1.calibrated()?,
        })
    }
}

/// The N-sample chaotic sequence for one bit, in raw and normalized form.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaoticFrame {
    /// Exact orbit of the selected map: `raw[n+1] = f_b(raw[n])`.
    pub raw: Vec<f64>,
    /// Per-sample `(raw - mu) / s` under the selected map's transform,
    /// clamped to (-1, 1).
    pub normalized: Vec<f64>,
    /// Initial condition, equal to `raw[0]`.
    pub x0: f64,
}

impl ChaoticFrame {
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }
}

/// Generates the chaotic frame for one bit: the exact orbit of the selected
/// map from `x0`, together with its normalized form.
pub fn generate_frame(map_pair: &MapPair, bit: u8, x0: f64, n: usize) -> Result<ChaoticFrame> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "frame length must be at least 2, got {n}"
        )));
    }
    if !x0.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "initial condition must be finite, got {x0}"
        )));
    }
    let map = map_pair.select(bit);
    let mut raw = Vec::with_capacity(n);
    let mut x = x0;
    for step in 0..n {
        map.check_divergence(x, step)?;
        raw.push(x);
        if step + 1 < n {
            x = map.iterate_unchecked(x);
        }
    }
    let normalized = raw.iter().map(|&v| map.normalize(v)).collect();
    Ok(ChaoticFrame {
        raw,
        normalized,
        x0,
    })
}
