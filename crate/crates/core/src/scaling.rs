//! Finite-size scaling fits over truncation ladders.
//!
//! The power-law model `y = offset + prefactor * N^(-alpha)` is fitted by variable
//! projection: for a fixed exponent the two linear parameters have a closed-form
//! least-squares solution, which leaves a one-dimensional search over `alpha`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ALPHA_MIN: f64 = -3.0;
pub const ALPHA_MAX: f64 = 3.0;
pub const ALPHA_GRID_POINTS: usize = 121;
pub const GOLDEN_WIDTH: f64 = 1e-6;
/// A power law whose `N^(-alpha)` column changes by less than this fraction across the
/// ladder is collinear with the offset and is treated as its logarithmic limit.
pub const DEGENERATE_SPAN: f64 = 0.05;
/// Slopes below this magnitude leave the zero crossing undefined.
pub const FLAT_SLOPE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingModel {
    PowerOffset,
    Logarithmic,
}

impl ScalingModel {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalingModel::PowerOffset => "power_offset",
            ScalingModel::Logarithmic => "logarithmic",
        }
    }

    fn parameter_count(self) -> usize {
        match self {
            ScalingModel::PowerOffset => 3,
            ScalingModel::Logarithmic => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    Uniform,
    /// Residuals divided by `|y|`.
    Relative,
}

/// Fitted scaling law.
///
/// For [`ScalingModel::Logarithmic`] the law is `offset + prefactor * ln N` and
/// `exponent` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub model: ScalingModel,
    pub offset: f64,
    pub prefactor: f64,
    pub exponent: Option<f64>,
    pub sse: f64,
    pub n_points: usize,
    pub converged: bool,
}

impl ScalingFit {
    pub fn predict(&self, size: f64) -> f64 {
        match self.model {
            ScalingModel::PowerOffset => {
                self.offset + self.prefactor * size.powf(-self.exponent.unwrap_or(0.0))
            }
            ScalingModel::Logarithmic => self.offset + self.prefactor * size.ln(),
        }
    }

    /// Unweighted sum of squared residuals of this law on `points`.
    pub fn sse_on(&self, points: &[(f64, f64)]) -> f64 {
        points
            .iter()
            .map(|&(x, y)| (y - self.predict(x)).powi(2))
            .sum()
    }
}

fn validate(points: &[(f64, f64)], min_points: usize) -> Result<()> {
    if points.len() < min_points {
        return Err(Error::Size(format!(
            "need at least {min_points} points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points
        .iter()
        .find(|(x, y)| !(x.is_finite() && *x > 0.0 && y.is_finite()))
    {
        return Err(Error::Domain(format!("invalid point ({x}, {y})")));
    }
    let first = points[0].0;
    if points.iter().all(|p| p.0 == first) {
        return Err(Error::Rank("all truncation sizes are equal".into()));
    }
    Ok(())
}

fn sorted(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts
}

/// Ladder rescaled to `x = N / N_min` with per-point weights.
struct Ladder {
    ln_x: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
    ln_ref: f64,
}

#[derive(Clone, Copy, Debug)]
struct Projection {
    offset: f64,
    /// Prefactor in the rescaled variable.
    scaled_prefactor: f64,
    sse: f64,
}

impl Ladder {
    fn new(points: &[(f64, f64)], weighting: Weighting) -> Self {
        let n_ref = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let y_scale = points.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        Self {
            ln_x: points.iter().map(|p| (p.0 / n_ref).ln()).collect(),
            y: points.iter().map(|p| p.1).collect(),
            w: points
                .iter()
                .map(|p| match weighting {
                    Weighting::Uniform => 1.0,
                    Weighting::Relative => 1.0 / p.1.abs().max(1e-300 + 1e-12 * y_scale).powi(2),
                })
                .collect(),
            ln_ref: n_ref.ln(),
        }
    }

    fn basis(&self, alpha: f64) -> Vec<f64> {
        self.ln_x.iter().map(|l| (-alpha * l).exp()).collect()
    }

    fn weighted_sse(&self, offset: f64, prefactor: f64, f: &[f64]) -> f64 {
        self.y
            .iter()
            .zip(f)
            .zip(&self.w)
            .map(|((y, fi), w)| w * (y - offset - prefactor * fi).powi(2))
            .sum()
    }

    fn project(&self, alpha: f64) -> Projection {
        let f = self.basis(alpha);
        let wsum: f64 = self.w.iter().sum();
        let f_bar = f.iter().zip(&self.w).map(|(a, w)| w * a).sum::<f64>() / wsum;
        let y_bar = self.y.iter().zip(&self.w).map(|(a, w)| w * a).sum::<f64>() / wsum;
        let mut sff = 0.0;
        let mut sfy = 0.0;
        let mut sf2 = 0.0;
        for ((fi, yi), w) in f.iter().zip(&self.y).zip(&self.w) {
            sff += w * (fi - f_bar).powi(2);
            sfy += w * (fi - f_bar) * (yi - y_bar);
            sf2 += w * fi * fi;
        }
        let scaled_prefactor = if sff > 1e-28 * sf2 { sfy / sff } else { 0.0 };
        let offset = y_bar - scaled_prefactor * f_bar;
        Projection {
            offset,
            scaled_prefactor,
            sse: self.weighted_sse(offset, scaled_prefactor, &f),
        }
    }

    /// Gauss-Newton on all three parameters, starting from the projected optimum.
    fn polish(&self, mut alpha: f64) -> f64 {
        let mut p = self.project(alpha);
        for _ in 0..30 {
            let f = self.basis(alpha);
            let mut jtj = [[0.0f64; 3]; 3];
            let mut jtr = [0.0f64; 3];
            for i in 0..f.len() {
                let sw = self.w[i].sqrt();
                let r = sw * (self.y[i] - p.offset - p.scaled_prefactor * f[i]);
                // derivatives of the model, not of the residual
                let jac = [
                    sw,
                    sw * f[i],
                    -sw * p.scaled_prefactor * f[i] * self.ln_x[i],
                ];
                for a in 0..3 {
                    jtr[a] += jac[a] * r;
                    for b in 0..3 {
                        jtj[a][b] += jac[a] * jac[b];
                    }
                }
            }
            let Some(step) = solve3(jtj, jtr) else { break };
            let next_alpha = alpha + step[2];
            if !(ALPHA_MIN..=ALPHA_MAX).contains(&next_alpha) {
                break;
            }
            let q = self.project(next_alpha);
            if !(q.sse < p.sse) {
                break;
            }
            let done = (next_alpha - alpha).abs() <= 1e-15 * alpha.abs().max(1.0);
            alpha = next_alpha;
            p = q;
            if done {
                break;
            }
        }
        alpha
    }
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let m = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut v = b[row];
        for k in row + 1..3 {
            v -= a[row][k] * x[k];
        }
        x[row] = v / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn golden_section(ladder: &Ladder, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = ladder.project(c).sse;
    let mut fd = ladder.project(d).sse;
    while hi - lo > GOLDEN_WIDTH {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = ladder.project(c).sse;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = ladder.project(d).sse;
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares fit of `y = offset + prefactor * N^(-alpha)` with uniform weights.
pub fn fit_power_offset(points: &[(f64, f64)]) -> Result<ScalingFit> {
    fit_power_offset_weighted(points, Weighting::Uniform)
}

pub fn fit_power_offset_weighted(
    points: &[(f64, f64)],
    weighting: Weighting,
) -> Result<ScalingFit> {
    validate(points, 4)?;
    let pts = sorted(points);
    let ladder = Ladder::new(&pts, weighting);

    let step = (ALPHA_MAX - ALPHA_MIN) / (ALPHA_GRID_POINTS - 1) as f64;
    let grid = |i: usize| ALPHA_MIN + i as f64 * step;
    let best = (0..ALPHA_GRID_POINTS)
        .map(|i| (i, ladder.project(grid(i)).sse))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let lo = grid(best.saturating_sub(1));
    let hi = grid((best + 1).min(ALPHA_GRID_POINTS - 1));
    let alpha = ladder.polish(golden_section(&ladder, lo, hi));

    let on_edge = alpha - ALPHA_MIN <= GOLDEN_WIDTH || ALPHA_MAX - alpha <= GOLDEN_WIDTH;
    let p = ladder.project(alpha);
    let prefactor = p.scaled_prefactor * (alpha * ladder.ln_ref).exp();
    let fit = ScalingFit {
        model: ScalingModel::PowerOffset,
        offset: p.offset,
        prefactor,
        exponent: Some(alpha),
        sse: 0.0,
        n_points: pts.len(),
        converged: !on_edge && p.sse.is_finite(),
    };
    Ok(ScalingFit {
        sse: fit.sse_on(&pts),
        ..fit
    })
}

/// Least-squares fit of `y = a + b ln N`.
pub fn fit_log(points: &[(f64, f64)]) -> Result<ScalingFit> {
    validate(points, 2)?;
    let pts = sorted(points);
    let line = ols(pts.iter().map(|&(x, y)| (x.ln(), y)));
    let fit = ScalingFit {
        model: ScalingModel::Logarithmic,
        offset: line.1,
        prefactor: line.0,
        exponent: None,
        sse: 0.0,
        n_points: pts.len(),
        converged: true,
    };
    Ok(ScalingFit {
        sse: fit.sse_on(&pts),
        ..fit
    })
}

/// `(slope, intercept)` of the ordinary least-squares line.
fn ols(points: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64) {
    let m = points.clone().count() as f64;
    let x_bar = points.clone().map(|p| p.0).sum::<f64>() / m;
    let y_bar = points.clone().map(|p| p.1).sum::<f64>() / m;
    let (sxx, sxy) = points.fold((0.0, 0.0), |(sxx, sxy), (x, y)| {
        (sxx + (x - x_bar).powi(2), sxy + (x - x_bar) * (y - y_bar))
    });
    let slope = sxy / sxx;
    (slope, y_bar - slope * x_bar)
}

/// Small-sample corrected information score; lower is better.
pub fn information_score(sse: f64, n_points: usize, params: usize) -> f64 {
    let m = n_points as f64;
    let k = params as f64;
    if n_points <= params + 1 {
        return f64::INFINITY;
    }
    m * (sse / m).ln() + 2.0 * k + 2.0 * k * (k + 1.0) / (m - k - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSelection {
    pub power: ScalingFit,
    pub log: ScalingFit,
    pub power_score: f64,
    pub log_score: f64,
    /// `power_score - log_score`; positive favours the logarithmic law.
    pub score_gap: f64,
    /// The power fit is degenerate per [`power_is_degenerate`].
    pub power_degenerate: bool,
}

/// `|alpha| ln(N_max / N_min) < DEGENERATE_SPAN`.
///
/// Near `alpha = 0` the law `B + A N^(-alpha)` expands to `(A + B) - A alpha ln N`, so
/// `A` and `B` diverge with opposite signs while only their logarithmic combination
/// is determined by the data.
pub fn power_is_degenerate(fit: &ScalingFit, points: &[(f64, f64)]) -> bool {
    let Some(alpha) = fit.exponent else {
        return false;
    };
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    alpha.abs() * (hi / lo).ln() < DEGENERATE_SPAN
}

/// Fits both laws and keeps the one with the lower information score; a degenerate
/// power fit always yields to the logarithm.
///
/// Residual sums below the floating-point resolution of the data are treated as
/// equal, so exact data of either kind does not tip the comparison through
/// rounding noise.
pub fn select_model(points: &[(f64, f64)]) -> Result<(ScalingFit, ModelSelection)> {
    validate(points, 4)?;
    let power = fit_power_offset(points)?;
    let log = fit_log(points)?;
    let m = points.len();
    let y_scale = points.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let floor = m as f64 * (64.0 * f64::EPSILON * y_scale.max(f64::MIN_POSITIVE)).powi(2);
    let power_score = information_score(
        power.sse.max(floor),
        m,
        ScalingModel::PowerOffset.parameter_count(),
    );
    let log_score = information_score(
        log.sse.max(floor),
        m,
        ScalingModel::Logarithmic.parameter_count(),
    );
    let power_degenerate = power_is_degenerate(&power, points);
    let chosen = if power_score < log_score && !power_degenerate {
        power
    } else {
        log
    };
    Ok((
        chosen,
        ModelSelection {
            power,
            log,
            power_score,
            log_score,
            score_gap: power_score - log_score,
            power_degenerate,
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Zero crossing `-intercept / slope`, `None` when the line is flat.
    pub root: Option<f64>,
    pub sse: f64,
}

pub fn fit_line_with_root(points: &[(f64, f64)]) -> Result<LineFit> {
    if points.len() < 2 {
        return Err(Error::Size(format!(
            "line fit needs 2 points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points
        .iter()
        .find(|(x, y)| !(x.is_finite() && y.is_finite()))
    {
        return Err(Error::Domain(format!("invalid point ({x}, {y})")));
    }
    if points.iter().all(|p| p.0 == points[0].0) {
        return Err(Error::Rank("all x values are equal".into()));
    }
    let pts = sorted(points);
    let (slope, intercept) = ols(pts.iter().copied());
    let sse = pts
        .iter()
        .map(|&(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        root: (slope.abs() >= FLAT_SLOPE).then(|| -intercept / slope),
        sse,
    })
}
