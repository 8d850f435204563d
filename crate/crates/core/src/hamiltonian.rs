//! Truncated squeezing Hamiltonians as real symmetric tridiagonal chains.
//!
//! In the basis `|0>, |n>, |2n>, ...` the squeezing Hamiltonian has purely imaginary
//! nearest-neighbour entries `∓i β_j`. The diagonal phase change `|j> -> i^j |j>` maps
//! it onto a real symmetric matrix with off-diagonal entries `β_j` and zero diagonal,
//! leaving the spectrum and every amplitude magnitude unchanged. Basis index `j`
//! always stands for the state `|j n>`.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{log_gamma, log_gamma_unchecked};

/// Largest natural log that still exponentiates to a finite `f64`.
const LN_MAX: f64 = 709.782_712_893_384;

/// Squeezing order `n >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SqueezeOrder(f64);

impl SqueezeOrder {
    pub fn new(n: f64) -> Result<Self> {
        if n.is_finite() && n >= 0.0 {
            Ok(Self(n))
        } else {
            Err(Error::Domain(format!(
                "squeeze order must be finite and >= 0, got {n}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for SqueezeOrder {
    type Error = Error;
    fn try_from(n: f64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<SqueezeOrder> for f64 {
    fn from(n: SqueezeOrder) -> f64 {
        n.0
    }
}

impl fmt::Display for SqueezeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Where a chain's couplings came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainOrigin {
    Squeeze { n: SqueezeOrder },
    Hierarchical { ratio: f64, h2: f64 },
    Custom,
}

/// Real symmetric tridiagonal matrix with zero diagonal.
///
/// `couplings[j]` is the matrix element between basis indices `j` and `j + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalChain {
    size: usize,
    couplings: Vec<f64>,
    log_couplings: Vec<f64>,
    origin: ChainOrigin,
}

impl TridiagonalChain {
    /// Chain with arbitrary positive couplings.
    pub fn from_couplings(couplings: Vec<f64>) -> Result<Self> {
        if couplings.is_empty() {
            return Err(Error::Size(
                "a chain needs at least one coupling (N >= 2)".into(),
            ));
        }
        if let Some((j, &b)) = couplings
            .iter()
            .enumerate()
            .find(|(_, b)| !(b.is_finite() && **b > 0.0))
        {
            return Err(Error::Domain(format!(
                "coupling {j} must be positive and finite, got {b}"
            )));
        }
        let log_couplings = couplings.iter().map(|b| b.ln()).collect();
        Ok(Self {
            size: couplings.len() + 1,
            couplings,
            log_couplings,
            origin: ChainOrigin::Custom,
        })
    }

    fn from_logs(log_couplings: Vec<f64>, origin: ChainOrigin) -> Result<Self> {
        let couplings = log_couplings
            .iter()
            .enumerate()
            .map(|(index, &lv)| {
                let b = lv.exp();
                if lv > LN_MAX || !b.is_finite() {
                    Err(Error::Overflow {
                        index,
                        log_value: lv,
                    })
                } else {
                    Ok(b)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            size: couplings.len() + 1,
            couplings,
            log_couplings,
            origin,
        })
    }

    /// Basis dimension `N`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn log_couplings(&self) -> &[f64] {
        &self.log_couplings
    }

    pub fn origin(&self) -> ChainOrigin {
        self.origin
    }

    /// `β_{j-1} + β_j` for row `j`, missing neighbours counted as zero.
    pub fn row_sum(&self, j: usize) -> f64 {
        let left = if j > 0 { self.couplings[j - 1] } else { 0.0 };
        let right = self.couplings.get(j).copied().unwrap_or(0.0);
        left + right
    }

    /// `y = T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.size);
        let b = &self.couplings;
        (0..self.size)
            .map(|j| {
                let mut acc = 0.0;
                if j > 0 {
                    acc += b[j - 1] * x[j - 1];
                }
                if j + 1 < self.size {
                    acc += b[j] * x[j + 1];
                }
                acc
            })
            .collect()
    }

    /// Plain-text debug dump: a `N n origin` header, then one coupling per line.
    pub fn to_debug_text(&self) -> String {
        let (n, origin) = match self.origin {
            ChainOrigin::Squeeze { n } => (format!("{:.16e}", n.value()), "squeeze".to_string()),
            ChainOrigin::Hierarchical { ratio, h2 } => (
                "-".to_string(),
                format!("hierarchical:{ratio:.16e}:{h2:.16e}"),
            ),
            ChainOrigin::Custom => ("-".to_string(), "custom".to_string()),
        };
        let mut out = format!("{} {} {}\n", self.size, n, origin);
        for b in &self.couplings {
            let _ = writeln!(out, "{b:.16e}");
        }
        out
    }

    /// Inverse of [`to_debug_text`](Self::to_debug_text).
    pub fn from_debug_text(text: &str) -> Result<Self> {
        let parse_err = |message: String| Error::Parse {
            file: "chain".into(),
            message,
        };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| parse_err("empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("bad header {header:?}")));
        }
        let size: usize = fields[0]
            .parse()
            .map_err(|e| parse_err(format!("bad size: {e}")))?;
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| parse_err(format!("bad number {s:?}: {e}")))
        };
        let origin = match fields[2] {
            "squeeze" => ChainOrigin::Squeeze {
                n: SqueezeOrder::new(num(fields[1])?)?,
            },
            "custom" => ChainOrigin::Custom,
            other => {
                let parts: Vec<&str> = other.split(':').collect();
                match parts.as_slice() {
                    ["hierarchical", ratio, h2] => ChainOrigin::Hierarchical {
                        ratio: num(ratio)?,
                        h2: num(h2)?,
                    },
                    _ => return Err(parse_err(format!("unknown origin {other:?}"))),
                }
            }
        };
        let couplings = lines.map(|l| num(l.trim())).collect::<Result<Vec<_>>>()?;
        if couplings.len() + 1 != size {
            return Err(parse_err(format!(
                "header says N={size} but found {} couplings",
                couplings.len()
            )));
        }
        let mut chain = Self::from_couplings(couplings)?;
        chain.origin = origin;
        Ok(chain)
    }
}

/// `ln β_j = ½ (ln Γ((j+1) n + 1) - ln Γ(j n + 1))`.
fn log_coupling(n: f64, j: usize) -> f64 {
    let j = j as f64;
    0.5 * (log_gamma_unchecked((j + 1.0) * n + 1.0) - log_gamma_unchecked(j * n + 1.0))
}

/// Coupling `β_j = sqrt(Γ((j+1) n + 1) / Γ(j n + 1))` between `|j n>` and `|(j+1) n>`.
pub fn coupling(n: SqueezeOrder, j: usize) -> Result<f64> {
    // arguments are >= 1, so only the overflow path can fail
    log_gamma((j as f64 + 1.0) * n.value() + 1.0)?;
    let lv = log_coupling(n.value(), j);
    let b = lv.exp();
    if lv > LN_MAX || !b.is_finite() {
        return Err(Error::Overflow {
            index: j,
            log_value: lv,
        });
    }
    Ok(b)
}

/// Truncated `N x N` squeezing chain of order `n`.
pub fn build_squeeze_chain(n: SqueezeOrder, size: usize) -> Result<TridiagonalChain> {
    if size < 2 {
        return Err(Error::Size(format!(
            "squeeze chain needs N >= 2, got {size}"
        )));
    }
    let logs = (0..size - 1).map(|j| log_coupling(n.value(), j)).collect();
    TridiagonalChain::from_logs(logs, ChainOrigin::Squeeze { n })
}

/// Toy chain with couplings `h_2, h_3, ..., h_N`, where `h_j = h2 * ratio^(j - 2)`.
pub fn build_hierarchical_chain(size: usize, ratio: f64, h2: f64) -> Result<TridiagonalChain> {
    if size < 2 {
        return Err(Error::Size(format!(
            "hierarchical chain needs N >= 2, got {size}"
        )));
    }
    if !(ratio.is_finite() && ratio > 1.0) {
        return Err(Error::Domain(format!("ratio must be > 1, got {ratio}")));
    }
    if !(h2.is_finite() && h2 > 0.0) {
        return Err(Error::Domain(format!("h2 must be positive, got {h2}")));
    }
    let (ln_h2, ln_ratio) = (h2.ln(), ratio.ln());
    let logs = (0..size - 1)
        .map(|k| ln_h2 + k as f64 * ln_ratio)
        .collect::<Vec<_>>();
    let mut chain = TridiagonalChain::from_logs(logs, ChainOrigin::Hierarchical { ratio, h2 })?;
    // exact products for modest sizes so integer ratios give integer couplings
    let mut h = h2;
    for (k, b) in chain.couplings.iter_mut().enumerate() {
        if k > 0 {
            h *= ratio;
        }
        if h.is_finite() {
            *b = h;
        }
    }
    Ok(chain)
}
