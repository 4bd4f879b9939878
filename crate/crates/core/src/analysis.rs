//! Closed-form reference curves and statistical utilities.
//!
//! These are the oracles the test suites and the plot emitter compare
//! simulated bit-error rates against.

use crate::channel::NoiseConvention;
use crate::error::{Error, Result};
use std::f64::consts::SQRT_2;

/// Gaussian tail probability `Q(x) = P(Z > x)`, computed through the
/// complementary error function.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10.0_f64.powf(db / 10.0)
}

/// The matched-filter bound `Q(sqrt(Eb/No))` quoted for synchronized CSK,
/// taken as printed: the argument is the linear Eb/No ratio.
pub fn bpsk_bound(ebno_db: f64) -> f64 {
    q_function(db_to_linear(ebno_db).sqrt())
}

/// Closed-form bit error rate of a coherent correlator choosing between two
/// known equal-energy, (near-)uncorrelated frame waveforms of total energy
/// `Eb`: `Q(sqrt(Eb / (2 sigma^2)))` with `sigma^2` set by the active noise
/// convention.
///
/// Under [`NoiseConvention::VarianceEqualsN0Over2`] this equals
/// [`bpsk_bound`], the bound quoted for synchronized CSK.
pub fn csk_coherent_bound(ebno_db: f64, convention: NoiseConvention) -> f64 {
    let n0 = 1.0 / db_to_linear(ebno_db);
    let sigma2 = match convention {
        NoiseConvention::VarianceEqualsN0 => n0,
        NoiseConvention::VarianceEqualsN0Over2 => n0 / 2.0,
    };
    q_function((1.0 / (2.0 * sigma2)).sqrt())
}

/// Approximate M-ary FSK symbol error probability
/// `min(1, (M-1) Q(sqrt(Eb/(M No))))`, clipped because the union bound
/// exceeds one at low SNR.
///
/// The expression is used as printed for both noise conventions; it is the
/// exact pairwise union bound when the per-sample noise variance is `No/2`
/// and a nominal reference (3 dB optimistic) when the variance is `No`.
/// [`fsk_pe_note`] documents this for output metadata.
pub fn fsk_pe(ebno_db: f64, m: usize, _convention: NoiseConvention) -> f64 {
    let arg = db_to_linear(ebno_db) / m as f64;
    ((m as f64 - 1.0) * q_function(arg.sqrt())).min(1.0)
}

/// Metadata note attached to emitted `fsk_pe` curves, recording how the
/// printed expression relates to the active noise convention.
pub fn fsk_pe_note(convention: NoiseConvention) -> &'static str {
    match convention {
        NoiseConvention::VarianceEqualsN0 => {
            "fsk_pe: (M-1)Q(sqrt(Eb/(M*No))); nominal under variance=No (3 dB optimistic)"
        }
        NoiseConvention::VarianceEqualsN0Over2 => {
            "fsk_pe: (M-1)Q(sqrt(Eb/(M*No))); exact union bound under variance=No/2"
        }
    }
}

/// Binomial proportion confidence interval at `z` standard errors, clamped
/// to [0, 1]. Uses the normal approximation, switching to the Wilson score
/// interval when fewer than 10 errors were observed (the normal
/// approximation is unreliable in deep-waterfall points).
pub fn binomial_ci(errors: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if errors > trials {
        return Err(Error::InvalidArgument(format!(
            "errors ({errors}) exceed trials ({trials})"
        )));
    }
    if !z.is_finite() || z < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "z must be a non-negative real, got {z}"
        )));
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let (mut low, mut high) = if errors < 10 {
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        (center - half, center + half)
    } else {
        let half = z * (p * (1.0 - p) / n).sqrt();
        (p - half, p + half)
    };
    // The interval endpoints are exact at the boundary counts.
    if errors == 0 {
        low = 0.0;
    }
    if errors == trials {
        high = 1.0;
    }
    Ok((low.max(0.0), high.min(1.0)))
}

/// A labelled closed-form reference curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryCurve {
    pub label: String,
    /// `(ebno_db, value)` pairs; values are non-increasing in Eb/No.
    pub points: Vec<(f64, f64)>,
}

impl TheoryCurve {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].1 > w[0].1 + 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "theory curve values must be non-increasing in Eb/No \
                     ({} -> {} at {} dB)",
                    w[0].1, w[1].1, w[1].0
                )));
            }
        }
        Ok(TheoryCurve {
            label: label.into(),
            points,
        })
    }

    /// Evaluates `f` over `grid` and wraps the result.
    pub fn from_fn(
        label: impl Into<String>,
        grid: &[f64],
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        Self::new(label, grid.iter().map(|&g| (g, f(g))).collect())
    }
}

/// Sample Pearson correlation of two equal-length sequences.
///
/// Panics if the lengths differ or either sequence is constant; this is a
/// test-oracle utility, not a hardened statistics routine.
pub fn pearson_correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "pearson: length mismatch");
    assert!(a.len() > 1, "pearson: need at least two samples");
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    assert!(va > 0.0 && vb > 0.0, "pearson: constant sequence");
    cov / (va.sqrt() * vb.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// High-precision erfc oracle, independent of libm: Maclaurin series
    /// for small arguments and the classical continued fraction for large
    /// ones.
    mod erfc_oracle {
        use std::f64::consts::PI;

        fn erf_series(x: f64) -> f64 {
            // erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
            let mut term = x;
            let mut sum = x;
            let x2 = x * x;
            for n in 1..200 {
                term *= -x2 / n as f64;
                let contrib = term / (2.0 * n as f64 + 1.0);
                sum += contrib;
                if contrib.abs() < 1e-20 * sum.abs() {
                    break;
                }
            }
            2.0 / PI.sqrt() * sum
        }

        fn erfc_continued_fraction(x: f64) -> f64 {
            // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
            // evaluated with the modified Lentz algorithm.
            let tiny = 1e-300;
            let mut f = x.max(tiny);
            let mut c = f;
            let mut d = 0.0;
            for n in 1..400 {
                let a = n as f64 / 2.0;
                let b = x;
                d = b + a * d;
                if d.abs() < tiny {
                    d = tiny;
                }
                c = b + a / c;
                if c.abs() < tiny {
                    c = tiny;
                }
                d = 1.0 / d;
                let delta = c * d;
                f *= delta;
                if (delta - 1.0).abs() < 1e-17 {
                    break;
                }
            }
            (-x * x).exp() / PI.sqrt() / f
        }

        pub fn erfc(x: f64) -> f64 {
            if x < 0.0 {
                2.0 - erfc(-x)
            } else if x < 2.0 {
                1.0 - erf_series(x)
            } else {
                erfc_continued_fraction(x)
            }
        }

        #[test]
        fn series_and_fraction_agree_in_the_overlap() {
            // Above x ~ 2.3 the alternating series loses digits to
            // cancellation, so the cross-check stops there.
            for i in 0..=20 {
                let x = 1.8 + i as f64 * 0.025;
                let a = erfc_continued_fraction(x);
                let b = 1.0 - erf_series(x);
                assert!(
                    (a - b).abs() <= 3e-11 * a.abs(),
                    "x={x}: {a} vs {b}"
                );
            }
        }
    }

    fn oracle_q(x: f64) -> f64 {
        0.5 * erfc_oracle::erfc(x / SQRT_2)
    }

    #[test]
    fn q_function_matches_high_precision_oracle() {
        // 12 significant digits over the range BER work cares about.
        let mut x = -4.0;
        while x <= 6.0 {
            let got = q_function(x);
            let want = oracle_q(x);
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "x={x}: {got} vs {want}"
            );
            x += 0.125;
        }
    }

    #[test]
    fn q_function_reference_points() {
        assert_eq!(q_function(0.0), 0.5);
        // Frozen from the erfc oracle above.
        let q3 = oracle_q(3.0);
        assert!((q3 - 1.3498980316301e-3).abs() < 1e-16);
        assert!((q_function(3.0) - q3).abs() < 1e-15);
    }

    #[test]
    fn q_function_reflection_identity() {
        for x in [0.5, 1.0, 2.0] {
            assert!((q_function(-x) - (1.0 - q_function(x))).abs() < 1e-12);
        }
    }

    #[test]
    fn q_function_is_strictly_decreasing() {
        let mut prev = q_function(-8.0);
        let mut x = -7.75;
        while x <= 8.0 {
            let v = q_function(x);
            assert!(v < prev, "not decreasing at {x}");
            prev = v;
            x += 0.25;
        }
    }

    #[test]
    fn bpsk_bound_limits_and_monotonicity() {
        assert!((bpsk_bound(-200.0) - 0.5).abs() < 1e-9);
        let q1 = bpsk_bound(0.0);
        assert!((q1 - oracle_q(1.0)).abs() < 1e-14);
        assert!((q1 - 0.1587).abs() < 5e-5);
        let mut prev = f64::INFINITY;
        let mut db = -10.0;
        while db <= 20.0 {
            let v = bpsk_bound(db);
            assert!(v < prev);
            prev = v;
            db += 1.0;
        }
    }

    #[test]
    fn csk_coherent_bound_conventions() {
        // Halved variance reproduces the printed matched-filter bound;
        // the literal convention sits 3 dB lower.
        for db in [0.0, 4.0, 8.0] {
            let halved = csk_coherent_bound(db, NoiseConvention::VarianceEqualsN0Over2);
            assert!((halved - bpsk_bound(db)).abs() < 1e-15);
            let literal = csk_coherent_bound(db, NoiseConvention::VarianceEqualsN0);
            let shifted = bpsk_bound(db - 10.0 * 2.0_f64.log10());
            assert!((literal - shifted).abs() < 1e-12);
        }
    }

    #[test]
    fn fsk_pe_clips_at_one_for_low_snr() {
        assert_eq!(fsk_pe(-10.0, 32, NoiseConvention::VarianceEqualsN0), 1.0);
    }

    #[test]
    fn fsk_pe_is_ordered_in_m_and_snr() {
        for db in [0.0, 6.0, 12.0] {
            let m2 = fsk_pe(db, 2, NoiseConvention::VarianceEqualsN0);
            let m4 = fsk_pe(db, 4, NoiseConvention::VarianceEqualsN0);
            let m8 = fsk_pe(db, 8, NoiseConvention::VarianceEqualsN0);
            assert!(m2 <= m4 && m4 <= m8);
        }
        let mut prev = f64::INFINITY;
        let mut db = 0.0;
        while db <= 20.0 {
            let v = fsk_pe(db, 4, NoiseConvention::VarianceEqualsN0);
            assert!(v <= prev);
            prev = v;
            db += 2.0;
        }
    }

    #[test]
    fn fsk_pe_printed_expression_value() {
        // (M-1) Q(sqrt(10^1.2 / 4)) at M = 4, 12 dB.
        let want = 3.0 * oracle_q((db_to_linear(12.0) / 4.0).sqrt());
        let got = fsk_pe(12.0, 4, NoiseConvention::VarianceEqualsN0);
        assert!((got - want).abs() < 1e-14);
        assert!((got - 0.0699).abs() < 5e-4, "{got}");
        // Same printed value under the halved convention, by design.
        assert_eq!(got, fsk_pe(12.0, 4, NoiseConvention::VarianceEqualsN0Over2));
    }

    #[test]
    fn binomial_ci_clamps_and_widths() {
        let (low, _) = binomial_ci(0, 1_000, 3.0).unwrap();
        assert_eq!(low, 0.0);
        let (_, high) = binomial_ci(1_000, 1_000, 3.0).unwrap();
        assert_eq!(high, 1.0);
        let (low, high) = binomial_ci(50, 10_000, 3.0).unwrap();
        let half = (high - low) / 2.0;
        let expected = 3.0 * (0.005_f64 * 0.995 / 10_000.0).sqrt();
        assert!((half - expected).abs() < 1e-12, "{half} vs {expected}");
    }

    #[test]
    fn binomial_ci_rejects_bad_counts() {
        assert!(binomial_ci(5, 0, 3.0).is_err());
        assert!(binomial_ci(11, 10, 3.0).is_err());
        assert!(binomial_ci(1, 10, f64::NAN).is_err());
    }

    #[test]
    fn theory_curve_rejects_increasing_values() {
        assert!(TheoryCurve::new("bad", vec![(0.0, 0.1), (2.0, 0.2)]).is_err());
        assert!(TheoryCurve::from_fn("ok", &[0.0, 2.0, 4.0], bpsk_bound).is_ok());
    }

    #[test]
    fn pearson_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [2.0, 4.0, 6.0, 8.0];
        assert!((pearson_correlation(&a, &a) - 1.0).abs() < 1e-12);
        assert!((pearson_correlation(&a, &b) - 1.0).abs() < 1e-12);
        let c = [4.0, 3.0, 2.0, 1.0];
        assert!((pearson_correlation(&a, &c) + 1.0).abs() < 1e-12);
    }
}
