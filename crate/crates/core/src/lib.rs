//! Simulation library for chaotic baseband communications.
//!
//! Bits select one of two chaotic maps; the resulting orbit is either
//! transmitted directly, correlation-decoded against replicas (chaos shift
//! keying), or quantized and carried over M-ary FSK and decoded by one-step
//! prediction with the known map dynamics. The [`harness`] module runs
//! seeded Monte Carlo bit-error-rate experiments over an AWGN channel and
//! writes CSV tables and SVG waterfall plots.
//!
//! ```
//! use chaotic_modem::{ExperimentConfig, Scheme, run_experiment};
//!
//! let config = ExperimentConfig {
//!     schemes: vec![Scheme::PredictiveFsk],
//!     bits: 50,
//!     mod_orders: vec![4],
//!     ebno_grid_db: vec![f64::INFINITY], // noise disabled
//!     ..ExperimentConfig::default()
//! };
//! let curves = run_experiment(&config)?;
//! assert_eq!(curves[0].points[0].errors, 0);
//! # Ok::<(), chaotic_modem::Error>(())
//! ```

pub mod analysis;
pub mod channel;
pub mod chaos;
pub mod detectors;
pub mod error;
pub mod harness;
pub mod modem;

pub use channel::{add_awgn, ChannelConfig, NoiseConvention};
pub use chaos::{generate_frame, ChaoticFrame, MapKind, MapPair, MapParams};
pub use detectors::{csk_demod, make_replicas, predictive_demod, predictive_direct_demod};
pub use detectors::{CskReplicas, Distances};
pub use error::{Error, Result};
pub use harness::{run_experiment, BerCurve, BerPoint, ExperimentConfig, Scheme};
pub use modem::{dequantize, quantize, FskConfig, FskModem, FskSymbol};
