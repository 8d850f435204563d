use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::eigensolve::DEFAULT_TOL;
use crate::error::{Error, Result};

/// Grid of `(n, N)` cells for a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_min: f64,
    pub n_max: f64,
    pub n_step: f64,
    pub ladder_base: usize,
    pub ladder_doublings: u32,
    pub tol: f64,
    pub output_dir: PathBuf,
    /// Worker threads; `0` uses every available core.
    pub workers: usize,
    /// Keep finished cells already present in `sweep.csv`.
    #[serde(default)]
    pub resume: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_min: 0.0,
            n_max: 6.0,
            n_step: 0.1,
            ladder_base: 250,
            ladder_doublings: 7,
            tol: DEFAULT_TOL,
            output_dir: PathBuf::from("run"),
            workers: 0,
            resume: false,
        }
    }
}

/// Rounds to ten decimal places so `n_min + i * n_step` lands on exact decimals.
pub fn round_grid(v: f64) -> f64 {
    (v * 1e10).round() / 1e10
}

impl SweepConfig {
    /// Default grid with the ladder capped at `250 * 2^5 = 8000`.
    pub fn desk() -> Self {
        Self {
            ladder_doublings: 5,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.n_min, self.n_max, self.n_step, self.tol]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Config("grid parameters must be finite".into()));
        }
        if self.n_min < 0.0 {
            return Err(Error::Config(format!(
                "n_min must be >= 0, got {}",
                self.n_min
            )));
        }
        if self.n_min > self.n_max {
            return Err(Error::Config(format!(
                "n_min {} exceeds n_max {}",
                self.n_min, self.n_max
            )));
        }
        if self.n_step <= 0.0 {
            return Err(Error::Config(format!(
                "n_step must be > 0, got {}",
                self.n_step
            )));
        }
        if self.ladder_base < 2 || self.ladder_base % 2 != 0 {
            return Err(Error::Config(format!(
                "ladder base must be even and >= 2, got {}",
                self.ladder_base
            )));
        }
        if self.ladder_doublings > 20 {
            return Err(Error::Config(format!(
                "at most 20 doublings, got {}",
                self.ladder_doublings
            )));
        }
        if !(self.tol > 0.0 && self.tol < 1e-3) {
            return Err(Error::Config(format!(
                "tol must lie in (0, 1e-3), got {}",
                self.tol
            )));
        }
        Ok(())
    }

    /// Inclusive n grid.
    pub fn n_grid(&self) -> Vec<f64> {
        let count = ((self.n_max - self.n_min) / self.n_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| round_grid(self.n_min + i as f64 * self.n_step))
            .collect()
    }

    /// `ladder_base * 2^k` for `k = 0..=ladder_doublings`.
    pub fn ladder(&self) -> Vec<usize> {
        (0..=self.ladder_doublings)
            .map(|k| self.ladder_base << k)
            .collect()
    }

    pub fn cells(&self) -> Vec<(f64, usize)> {
        let ladder = self.ladder();
        self.n_grid()
            .into_iter()
            .flat_map(|n| ladder.iter().map(move |&size| (n, size)))
            .collect()
    }
}
