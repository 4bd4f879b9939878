//! The receivers under test: the predictive demodulator (one-step map
//! prediction, MSE distance, nearest-hypothesis decision), its
//! direct-transmission variant with optional bias correction, and the
//! correlation (CSK) receiver with synchronized or perturbed replicas.

use crate::chaos::{generate_frame, ChaoticFrame, MapPair};
use crate::error::{Error, Result};

/// Mean squared prediction error against each bit hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distances {
    pub d0: f64,
    pub d1: f64,
}

/// Receiver-side copies of both candidate chaotic waveforms, regenerated
/// from `x0 + epsilon` (`epsilon = 0` is the synchronized case).
#[derive(Debug, Clone, PartialEq)]
pub struct CskReplicas {
    pub r0: Vec<f64>,
    pub r1: Vec<f64>,
    pub epsilon: f64,
}

/// The hypothesis-distance decision rule: bit 0 when `d0 < d1`, bit 1
/// otherwise (ties included).
#[inline]
fn decide(d0: f64, d1: f64) -> u8 {
    if d0 < d1 {
        0
    } else {
        1
    }
}

fn hypothesis_distances<F>(samples: &[f64], mut predict: F) -> Result<Distances>
where
    F: FnMut(u8, f64) -> Result<f64>,
{
    let n = samples.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "predictive demodulation needs at least 2 samples, got {n}"
        )));
    }
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 1..n {
        let prev = samples[i - 1];
        let e0 = samples[i] - predict(0, prev)?;
        let e1 = samples[i] - predict(1, prev)?;
        d0 += e0 * e0;
        d1 += e1 * e1;
    }
    let scale = (n - 1) as f64;
    Ok(Distances {
        d0: d0 / scale,
        d1: d1 / scale,
    })
}

/// Predictive demodulation of a normalized-domain sample sequence (from
/// FSK dequantization or direct reception): one-step predictions under both
/// conjugated maps, MSE distances over transitions 1..N-1, nearest wins.
pub fn predictive_demod(x_tilde: &[f64], maps: &MapPair) -> Result<(u8, Distances)> {
    let d = hypothesis_distances(x_tilde, |bit, x| maps.select(bit).predict_next(x))?;
    Ok((decide(d.d0, d.d1), d))
}

/// Predictive demodulation in the raw domain for direct transmission
/// (`y = x`): predictions apply the raw maps to the received samples. With
/// `bias_correct` set, each prediction is re-centered for the average
/// distortion the input noise of variance `sigma2` causes (the unbiased
/// estimator: `+sigma2` for the quadratic map, `exp(+sigma2/2)` scaling for
/// the trigonometric one).
pub fn predictive_direct_demod(
    received: &[f64],
    maps: &MapPair,
    sigma2: f64,
    bias_correct: bool,
) -> Result<(u8, Distances)> {
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "noise variance must be non-negative, got {sigma2}"
        )));
    }
    let d = hypothesis_distances(received, |bit, x| {
        let map = maps.select(bit);
        if bias_correct {
            map.predict_next_unbiased(x, sigma2)
        } else {
            map.iterate(x)
        }
    })?;
    Ok((decide(d.d0, d.d1), d))
}

/// Regenerates both candidate normalized waveforms from `x0 + epsilon`.
pub fn make_replicas(maps: &MapPair, x0: f64, n: usize, epsilon: f64) -> Result<CskReplicas> {
    let start = x0 + epsilon;
    Ok(CskReplicas {
        r0: generate_frame(maps, 0, start, n)?.normalized,
        r1: generate_frame(maps, 1, start, n)?.normalized,
        epsilon,
    })
}

/// Correlation receiver: inner products of the received sequence with the
/// two replicas, argmax wins, ties to bit 1. Replicas are mean-centered and
/// scaled to equal energy before correlating; centering removes the small
/// systematic cross-correlation two orbits started from the same x0 carry,
/// which would otherwise bias the synchronized error rate away from the
/// coherent closed form.
pub fn csk_demod(received: &[f64], replicas: &CskReplicas) -> Result<u8> {
    if received.len() != replicas.r0.len() || received.len() != replicas.r1.len() {
        return Err(Error::LengthMismatch {
            expected: replicas.r0.len(),
            actual: received.len(),
        });
    }
    let c0 = normalized_correlation(received, &replicas.r0)?;
    let c1 = normalized_correlation(received, &replicas.r1)?;
    Ok(if c0 > c1 { 0 } else { 1 })
}

/// Scales the CSK transmit waveform: the normalized chaotic frame at total
/// energy `eb` over its N samples.
pub fn csk_waveform(frame: &ChaoticFrame, eb: f64) -> Result<Vec<f64>> {
    let energy: f64 = frame.normalized.iter().map(|v| v * v).sum();
    if energy <= 0.0 {
        return Err(Error::InvalidArgument(
            "frame has no energy to scale".into(),
        ));
    }
    let scale = (eb / energy).sqrt();
    Ok(frame.normalized.iter().map(|v| v * scale).collect())
}

fn normalized_correlation(received: &[f64], replica: &[f64]) -> Result<f64> {
    let mean = replica.iter().sum::<f64>() / replica.len() as f64;
    let energy: f64 = replica.iter().map(|v| (v - mean) * (v - mean)).sum();
    if energy <= 0.0 {
        return Err(Error::InvalidArgument(
            "replica is constant; cannot correlate".into(),
        ));
    }
    let dot: f64 = received
        .iter()
        .zip(replica)
        .map(|(r, s)| r * (s - mean))
        .sum();
    Ok(dot / energy.sqrt())
}
