//! The `selftest` subcommand: a compact battery of the library's property
//! checks, one pass/fail line each. Exits 2 if any check fails.

use chaotic_modem::analysis::{pearson_correlation, q_function};
use chaotic_modem::channel::{add_awgn, ChannelConfig, NoiseConvention};
use chaotic_modem::chaos::{generate_frame, MapPair, MapParams};
use chaotic_modem::harness::{csv_string, run_experiment, ExperimentConfig, Scheme};
use chaotic_modem::modem::{dequantize, quantize, FskConfig, FskModem, SUPPORTED_ORDERS};
use std::f64::consts::PI;
use std::process::ExitCode;

struct Battery {
    failures: u32,
}

impl Battery {
    fn check(&mut self, name: &str, result: Result<(), String>) {
        match result {
            Ok(()) => println!("ok   {name}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                self.failures += 1;
            }
        }
    }
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn reference_pair() -> MapPair {
    MapPair::new(
        MapParams::quadratic(1.6).calibrated().unwrap(),
        MapParams::trigonometric(2.2, 47.0 * PI / 64.0)
            .calibrated()
            .unwrap(),
    )
    .unwrap()
}

pub fn run() -> ExitCode {
    let mut b = Battery { failures: 0 };

    b.check("q-function identities", {
        let mut r = ensure(q_function(0.0) == 0.5, || "Q(0) != 1/2".into());
        for x in [0.5, 1.0, 2.0] {
            r = r.and(ensure(
                (q_function(-x) + q_function(x) - 1.0).abs() < 1e-12,
                || format!("reflection identity fails at {x}"),
            ));
        }
        r.and(ensure(q_function(1.0) < q_function(0.5), || {
            "Q not decreasing".into()
        }))
    });

    b.check("quantizer round trip", {
        let mut r = Ok(());
        for m in SUPPORTED_ORDERS {
            for level in 0..m {
                let mid = dequantize(level, m).unwrap();
                if quantize(mid, m).unwrap() != level {
                    r = Err(format!("level {level} lost at M={m}"));
                }
            }
        }
        r
    });

    b.check("fsk clean round trip and energy", {
        let mut r = Ok(());
        for m in SUPPORTED_ORDERS {
            let modem = FskModem::new(FskConfig::new(m, 1.0).unwrap()).unwrap();
            for level in 0..m {
                let s = modem.modulate(level).unwrap();
                let energy: f64 = s.samples.iter().map(|v| v * v).sum();
                if (energy - 1.0).abs() > 1e-10 {
                    r = Err(format!("energy {energy} at M={m}"));
                }
                if modem.demodulate(&s.samples).unwrap() != level {
                    r = Err(format!("level {level} lost at M={m}"));
                }
            }
        }
        r
    });

    let maps = reference_pair();

    b.check("conjugate prediction on matched frames", {
        let mut r = Ok(());
        for bit in [0u8, 1u8] {
            let mut x0 = 0.1;
            for _ in 0..100 {
                x0 = maps.select(bit).iterate(x0).unwrap();
            }
            let frame = generate_frame(&maps, bit, x0, 128).unwrap();
            for n in 1..frame.len() {
                let pred = maps
                    .select(bit)
                    .predict_next(frame.normalized[n - 1])
                    .unwrap();
                if (pred - frame.normalized[n]).abs() > 1e-12 {
                    r = Err(format!("bit {bit}, step {n}"));
                }
            }
        }
        r
    });

    b.check("noise variance and stream independence", {
        let cfg = ChannelConfig::new(4.0, NoiseConvention::VarianceEqualsN0, 11).unwrap();
        let zeros = vec![0.0; 100_000];
        let a = add_awgn(&zeros, &cfg, 1);
        let b2 = add_awgn(&zeros, &cfg, 1);
        let c = add_awgn(&zeros, &cfg, 2);
        let var = a.iter().map(|v| v * v).sum::<f64>() / a.len() as f64;
        let sigma2 = cfg.noise_sigma2();
        ensure(a == b2, || "noise not reproducible".into())
            .and(ensure(
                (var - sigma2).abs() < 0.02 * sigma2,
                || format!("variance {var} vs {sigma2}"),
            ))
            .and(ensure(
                pearson_correlation(&a, &c).abs() < 0.02,
                || "streams correlated".into(),
            ))
    });

    b.check("noiseless coherent schemes are error free", {
        let config = ExperimentConfig {
            schemes: vec![
                Scheme::SyncCsk,
                Scheme::PredictiveFsk,
                Scheme::PredictiveDirect,
            ],
            bits: 500,
            mod_orders: vec![4, 16],
            ebno_grid_db: vec![f64::INFINITY],
            ..ExperimentConfig::default()
        };
        match run_experiment(&config) {
            Ok(curves) => {
                let mut r = Ok(());
                for c in &curves {
                    if c.points[0].errors != 0 {
                        r = Err(format!("{} made {} errors", c.label(), c.points[0].errors));
                    }
                }
                r
            }
            Err(e) => Err(e.to_string()),
        }
    });

    b.check("unsynchronized correlation collapses", {
        let config = ExperimentConfig {
            schemes: vec![Scheme::UnsyncCsk],
            bits: 2_000,
            ebno_grid_db: vec![f64::INFINITY],
            ..ExperimentConfig::default()
        };
        match run_experiment(&config) {
            Ok(curves) => {
                let ber = curves[0].points[0].ber;
                ensure((0.1..0.6).contains(&ber), || format!("BER {ber}"))
            }
            Err(e) => Err(e.to_string()),
        }
    });

    b.check("experiment output is deterministic", {
        let config = ExperimentConfig {
            schemes: vec![Scheme::SyncCsk, Scheme::PredictiveFsk],
            bits: 400,
            mod_orders: vec![4],
            ebno_grid_db: vec![0.0, 6.0],
            ..ExperimentConfig::default()
        };
        let a = run_experiment(&config).map(|c| csv_string(&c));
        let b2 = run_experiment(&config).map(|c| csv_string(&c));
        match (a, b2) {
            (Ok(a), Ok(b2)) => ensure(a == b2, || "CSV outputs differ".into()),
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        }
    });

    if b.failures == 0 {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("{} check(s) failed", b.failures);
        ExitCode::from(2)
    }
}
