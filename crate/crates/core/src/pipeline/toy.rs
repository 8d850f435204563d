use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eigensolve::{full_spectrum_small, gershgorin_bound, Eigenpair};
use crate::error::{Error, Result};
use crate::hamiltonian::build_hierarchical_chain;

pub const TOY_MAX_SIZE: usize = 64;
pub const CENTRAL_WEIGHT_MIN: f64 = 0.99;
pub const ZERO_WEIGHT_MIN: f64 = 0.98;
pub const ZERO_TOL: f64 = 1e-9;

/// Checks for one `(size, ratio)` hierarchical chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyCase {
    pub size: usize,
    pub ratio: f64,
    pub eigenvalues: Vec<f64>,
    /// Largest relative gap between a positive eigenvalue and its coupling level.
    pub pairing_error: f64,
    pub pairing_limit: f64,
    pub pairing_pass: bool,
    /// Squared weight on index 0 (odd N) or indices 0 and 1 (even N), minimised over the central states.
    pub localization: f64,
    pub localization_pass: bool,
    /// `|λ| / G` of the middle eigenvalue; odd sizes only.
    pub zero_eigenvalue: Option<f64>,
    pub zero_pass: Option<bool>,
    pub error: Option<String>,
}

impl ToyCase {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.pairing_pass
            && self.localization_pass
            && self.zero_pass.unwrap_or(true)
    }

    fn failed(size: usize, ratio: f64, error: Error) -> Self {
        Self {
            size,
            ratio,
            eigenvalues: Vec::new(),
            pairing_error: f64::NAN,
            pairing_limit: 2.0 / (ratio * ratio),
            pairing_pass: false,
            localization: f64::NAN,
            localization_pass: false,
            zero_eigenvalue: None,
            zero_pass: None,
            error: Some(error.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyReport {
    pub cases: Vec<ToyCase>,
}

impl ToyReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(ToyCase::passed)
    }

    pub fn case(&self, size: usize, ratio: f64) -> Option<&ToyCase> {
        self.cases
            .iter()
            .find(|c| c.size == size && c.ratio == ratio)
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

impl fmt::Display for ToyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>4} {:>8} {:>12} {:>8} {:>12} {:>8} {:>12} {:>8}",
            "N", "ratio", "pair_err", "pairing", "weight", "local", "|zero|/G", "zero"
        )?;
        for c in &self.cases {
            if let Some(e) = &c.error {
                writeln!(f, "{:>4} {:>8} FAIL {e}", c.size, c.ratio)?;
                continue;
            }
            let (zero, zero_mark) = match (c.zero_eigenvalue, c.zero_pass) {
                (Some(z), Some(p)) => (format!("{z:.3e}"), mark(p)),
                _ => ("-".into(), "-"),
            };
            writeln!(
                f,
                "{:>4} {:>8} {:>12.3e} {:>8} {:>12.6} {:>8} {:>12} {:>8}",
                c.size,
                c.ratio,
                c.pairing_error,
                mark(c.pairing_pass),
                c.localization,
                mark(c.localization_pass),
                zero,
                zero_mark
            )?;
        }
        write!(f, "overall: {}", mark(self.passed()))
    }
}

fn check_case(size: usize, ratio: f64) -> Result<ToyCase> {
    let chain = build_hierarchical_chain(size, ratio, 1.0)?;
    let spectrum = full_spectrum_small(&chain)?;
    let g = gershgorin_bound(&chain);
    // levels h_N, h_{N-2}, ... are couplings N-2, N-4, ... (zero based)
    let h = chain.couplings();
    let levels: Vec<f64> = (0..size / 2).map(|i| h[size - 2 - 2 * i]).collect();
    let positive: Vec<f64> = spectrum
        .iter()
        .rev()
        .take(size / 2)
        .map(|p| p.value)
        .collect();
    let pairing_error = levels
        .iter()
        .zip(&positive)
        .zip(spectrum.iter().take(size / 2))
        .map(|((&level, &up), down)| {
            let a = (up - level).abs() / level;
            let b = (down.value + level).abs() / level;
            a.max(b)
        })
        .fold(0.0, f64::max);
    let pairing_limit = 2.0 / (ratio * ratio);

    let weight = |p: &Eigenpair, upto: usize| p.vector[..upto].iter().map(|x| x * x).sum::<f64>();
    let (localization, localization_min, zero_eigenvalue) = if size % 2 == 0 {
        let mid = size / 2;
        let w = weight(&spectrum[mid - 1], 2).min(weight(&spectrum[mid], 2));
        (w, CENTRAL_WEIGHT_MIN, None)
    } else {
        let zero = &spectrum[size / 2];
        (weight(zero, 1), ZERO_WEIGHT_MIN, Some(zero.value.abs() / g))
    };
    Ok(ToyCase {
        size,
        ratio,
        eigenvalues: spectrum.iter().map(|p| p.value).collect(),
        pairing_error,
        pairing_limit,
        pairing_pass: pairing_error <= pairing_limit,
        localization,
        localization_pass: localization >= localization_min,
        zero_eigenvalue,
        zero_pass: zero_eigenvalue.map(|z| z <= ZERO_TOL),
        error: None,
    })
}

/// Spectral checks of the hierarchical chain for every size `2..=max_size` and ratio.
///
/// Solver problems for individual cases are reported as failed rows.
pub fn toy_verify(max_size: usize, ratios: &[f64]) -> Result<ToyReport> {
    if !(2..=TOY_MAX_SIZE).contains(&max_size) {
        return Err(Error::Config(format!(
            "toy sizes must lie in 2..={TOY_MAX_SIZE}, got {max_size}"
        )));
    }
    if ratios.is_empty() || ratios.iter().any(|r| !(r.is_finite() && *r > 1.0)) {
        return Err(Error::Config(format!(
            "toy ratios must be finite and > 1, got {ratios:?}"
        )));
    }
    let mut cases = Vec::new();
    for &ratio in ratios {
        for size in 2..=max_size {
            cases.push(check_case(size, ratio).unwrap_or_else(|e| ToyCase::failed(size, ratio, e)));
        }
    }
    Ok(ToyReport { cases })
}
