//! Number-operator expectations on eigenvectors.

use serde::{Deserialize, Serialize};

use crate::eigensolve::Eigenpair;
use crate::error::{Error, Result};
use crate::hamiltonian::SqueezeOrder;

/// `<m>` together with the photon number `n <m>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumberExpectation {
    pub m_expect: f64,
    pub photon_number: f64,
}

impl NumberExpectation {
    pub fn new(n: SqueezeOrder, m_expect: f64) -> Self {
        Self {
            m_expect,
            photon_number: photon_number(n, m_expect),
        }
    }
}

/// `<m> = Σ_j j |x_j|²` for a unit vector, summed from the top index down.
pub fn renormalized_number(vector: &[f64]) -> Result<f64> {
    let norm_sq: f64 = vector.iter().map(|v| v * v).sum();
    if (norm_sq.sqrt() - 1.0).abs() > 1e-9 {
        return Err(Error::Norm(norm_sq.sqrt()));
    }
    Ok(vector
        .iter()
        .enumerate()
        .rev()
        .map(|(j, v)| j as f64 * v * v)
        .sum())
}

/// Photon number `<a†a> = n <m>`.
pub fn photon_number(n: SqueezeOrder, m_expect: f64) -> f64 {
    n.value() * m_expect
}

/// Combined vacuum weight `|<v_+|0>|² + |<v_-|0>|²` of the central `±E_min` pair.
pub fn central_pair_overlap(spectrum: &[Eigenpair]) -> Result<f64> {
    let n = spectrum.len();
    if n == 0 || n % 2 != 0 {
        return Err(Error::Parity(format!(
            "central pair needs an even spectrum, got N={n}"
        )));
    }
    let lower = spectrum[n / 2 - 1].vector[0];
    let upper = spectrum[n / 2].vector[0];
    Ok((lower * lower + upper * upper).min(1.0))
}
