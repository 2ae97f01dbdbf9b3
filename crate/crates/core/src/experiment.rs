//! Monte Carlo SNR experiment.
//!
//! Each trial draws a random reference, cuts a random window out of it and
//! measures the SNR of the window's own row in the shift stack. All schemes
//! see the same draws. Trial `t` seeds its generator with `seed + t`, so the
//! result does not depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bar::{
    build_query_pattern, build_shift_stack, overlap, row_intensity, snr_from_intensities,
};
use crate::codec::CodingScheme;
use crate::error::{Error, Result};
use crate::sequence::DnaSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnrExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub reference_len: usize,
    pub window_len: usize,
}

impl Default for SnrExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 1000,
            reference_len: 48,
            window_len: 24,
        }
    }
}

impl SnrExperimentConfig {
    pub fn shifts(&self) -> usize {
        self.reference_len - self.window_len + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrSummary {
    pub scheme: CodingScheme,
    pub mean_db: f64,
    /// Sample standard deviation (n - 1).
    pub std_db: f64,
    /// Trials with a finite SNR; the statistics cover only these.
    pub n_trials: usize,
    /// Trials where every non-match row was dark.
    pub n_infinite: usize,
}

/// SNR of every scheme for one trial, `None` where it is infinite.
pub fn snr_trial(config: &SnrExperimentConfig, trial: usize) -> Result<Vec<Option<f64>>> {
    if config.window_len == 0 || config.window_len > config.reference_len {
        return Err(Error::WindowTooLarge {
            window: config.window_len,
            shifts: 0,
            reference: config.reference_len,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(trial as u64));
    let reference = DnaSequence::random(&mut rng, config.reference_len)?;
    let shifts = config.shifts();
    let offset = rng.random_range(1..=shifts);
    let query = reference
        .slice(offset, offset + config.window_len - 1)
        .ok_or(Error::WindowTooLarge {
            window: config.window_len,
            shifts,
            reference: config.reference_len,
        })?;
    CodingScheme::ALL
        .iter()
        .map(|&scheme| {
            let stack = build_shift_stack(&reference, config.window_len, scheme, shifts)?;
            let q = build_query_pattern(&query, scheme, shifts)?;
            let rows = row_intensity(&overlap(&stack, &q)?);
            Ok(snr_from_intensities(&rows, offset).ok())
        })
        .collect()
}

pub fn run_snr_experiment(config: &SnrExperimentConfig) -> Result<Vec<SnrSummary>> {
    let draws: Vec<Vec<Option<f64>>> = (0..config.trials)
        .into_par_iter()
        .map(|t| snr_trial(config, t))
        .collect::<Result<_>>()?;
    Ok(CodingScheme::ALL
        .iter()
        .enumerate()
        .map(|(k, &scheme)| {
            let finite: Vec<f64> = draws.iter().filter_map(|d| d[k]).collect();
            let (mean_db, std_db) = mean_std(&finite);
            SnrSummary {
                scheme,
                mean_db,
                std_db,
                n_trials: finite.len(),
                n_infinite: draws.len() - finite.len(),
            }
        })
        .collect())
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}
