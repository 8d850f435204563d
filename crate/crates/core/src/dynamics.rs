//! Vacuum evolution under a truncated chain by spectral decomposition.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::eigensolve::{full_spectrum_small, Eigenpair, FULL_SPECTRUM_MAX};
use crate::error::{Error, Result};
use crate::hamiltonian::{ChainOrigin, SqueezeOrder, TridiagonalChain};
use crate::observables::photon_number;

pub const DEFAULT_SAMPLES: usize = 2048;

/// Sampled `<m>(r)` and norm of `exp(-i r H)|0>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n: Option<SqueezeOrder>,
    pub size: usize,
    pub r_samples: Vec<f64>,
    pub m_of_r: Vec<f64>,
    pub norm_of_r: Vec<f64>,
    pub amplitude: f64,
}

impl Trajectory {
    /// Writes `r,m_expect,photon_number,norm` rows; the photon number is zero for
    /// chains that are not squeeze chains.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "r,m_expect,photon_number,norm")?;
        for ((r, m), norm) in self.r_samples.iter().zip(&self.m_of_r).zip(&self.norm_of_r) {
            let photons = self.n.map(|o| photon_number(o, *m)).unwrap_or(0.0);
            writeln!(out, "{r:.16e},{m:.16e},{photons:.16e},{norm:.16e}")?;
        }
        Ok(())
    }
}

/// Uniform grid `[0, r_max]` with `samples` points.
pub fn uniform_window(r_max: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..samples)
            .map(|i| r_max * i as f64 / (samples - 1) as f64)
            .collect(),
    }
}

/// Default window `[0, 3π / E_min]`, covering more than one slow oscillation.
pub fn default_window(e_min: f64, samples: usize) -> Vec<f64> {
    uniform_window(3.0 * std::f64::consts::PI / e_min, samples)
}

/// Evolution restricted to the given eigenpairs.
pub fn evolve_in_subspace(
    pairs: &[Eigenpair],
    size: usize,
    r_samples: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let weights: Vec<f64> = pairs.iter().map(|p| p.vector[0]).collect();
    let mut m_of_r = Vec::with_capacity(r_samples.len());
    let mut norm_of_r = Vec::with_capacity(r_samples.len());
    let mut re = vec![0.0; size];
    let mut im = vec![0.0; size];
    for &r in r_samples {
        re.iter_mut().for_each(|v| *v = 0.0);
        im.iter_mut().for_each(|v| *v = 0.0);
        for (p, w) in pairs.iter().zip(&weights) {
            let (s, c) = (p.value * r).sin_cos();
            // e^{-iEr} = cos(Er) - i sin(Er)
            let (a, b) = (w * c, -w * s);
            for ((vr, vi), x) in re.iter_mut().zip(im.iter_mut()).zip(&p.vector) {
                *vr += a * x;
                *vi += b * x;
            }
        }
        let mut norm = 0.0;
        let mut m = 0.0;
        for j in (0..size).rev() {
            let prob = re[j] * re[j] + im[j] * im[j];
            norm += prob;
            m += j as f64 * prob;
        }
        m_of_r.push(m);
        norm_of_r.push(norm);
    }
    (m_of_r, norm_of_r)
}

/// Evolves the vacuum `|0>` and samples `<m>` and the norm at each `r`.
pub fn evolve_vacuum(chain: &TridiagonalChain, r_samples: &[f64]) -> Result<Trajectory> {
    if chain.size() > FULL_SPECTRUM_MAX {
        return Err(Error::Size(format!(
            "dynamics needs the full spectrum, capped at N={FULL_SPECTRUM_MAX}"
        )));
    }
    let pairs = full_spectrum_small(chain)?;
    Ok(trajectory_from_pairs(chain, &pairs, r_samples))
}

pub fn trajectory_from_pairs(
    chain: &TridiagonalChain,
    pairs: &[Eigenpair],
    r_samples: &[f64],
) -> Trajectory {
    let (m_of_r, norm_of_r) = evolve_in_subspace(pairs, chain.size(), r_samples);
    let n = match chain.origin() {
        ChainOrigin::Squeeze { n } => Some(n),
        _ => None,
    };
    let mut t = Trajectory {
        n,
        size: chain.size(),
        r_samples: r_samples.to_vec(),
        m_of_r,
        norm_of_r,
        amplitude: 0.0,
    };
    t.amplitude = oscillation_amplitude(&t);
    t
}

/// `max - min` of `<m>(r)` over the sampled window.
pub fn oscillation_amplitude(trajectory: &Trajectory) -> f64 {
    let m = &trajectory.m_of_r;
    if m.len() < 2 {
        return 0.0;
    }
    let max = m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = m.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}
