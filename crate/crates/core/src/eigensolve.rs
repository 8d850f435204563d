//! Eigenvalues and eigenvectors of zero-diagonal tridiagonal chains.
//!
//! Eigenvalues come from bisection on the Sturm count of `T - λI`. For a zero
//! diagonal this count is computed to high relative accuracy, so the central
//! eigenvalue stays accurate even when it is sixteen orders of magnitude below
//! the spectral radius. Eigenvectors come from inverse iteration with a
//! partially pivoted tridiagonal factorization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{ChainOrigin, SqueezeOrder, TridiagonalChain};
use crate::observables::renormalized_number;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_BISECTION_STEPS: usize = 200;
pub const MAX_INVERSE_ITERATIONS: usize = 5;
/// Solves performed after the residual test first passes.
pub const EXTRA_ITERATIONS: usize = 2;
/// Componentwise-scaled residual an eigenvector must reach.
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const FULL_SPECTRUM_MAX: usize = 4096;
/// Seed of the starting vector for inverse iteration.
pub const INVERSE_ITERATION_SEED: u64 = 0x00F5_A5E0_17E2_2C0D;

const EPS: f64 = f64::EPSILON;
/// Consecutive eigenvalues closer than this fraction of the Gershgorin bound are
/// reorthogonalized against each other in [`full_spectrum_small`].
const CLUSTER_GAP: f64 = 1e-4;

/// Radius `G` of the Gershgorin interval `[-G, G]`.
pub fn gershgorin_bound(chain: &TridiagonalChain) -> f64 {
    (0..chain.size())
        .map(|j| chain.row_sum(j))
        .fold(0.0, f64::max)
}

/// Pivots smaller than `MIN_POSITIVE * max(1, β²)` are replaced by its negative, which
/// keeps `β² / d` finite without disturbing small but genuine pivots.
#[inline]
fn guard_pivot(d: f64, coupling_sq: f64) -> f64 {
    let floor = f64::MIN_POSITIVE * coupling_sq.max(1.0);
    if d.abs() < floor {
        -floor
    } else {
        d
    }
}

/// Number of eigenvalues strictly below `lambda`.
pub fn sturm_count(chain: &TridiagonalChain, lambda: f64) -> usize {
    let b = chain.couplings();
    let n = chain.size();
    let mut d = guard_pivot(-lambda, b.first().map_or(1.0, |x| x * x));
    let mut count = usize::from(d < 0.0);
    for j in 1..n {
        let left_sq = b[j - 1] * b[j - 1];
        let right_sq = b.get(j).map_or(0.0, |x| x * x);
        d = -lambda - left_sq / d;
        d = guard_pivot(d, left_sq.max(right_sq));
        count += usize::from(d < 0.0);
    }
    count
}

/// Outcome of a bisection run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bisection {
    pub value: f64,
    pub steps: usize,
}

/// Bisection for the `k`-th eigenvalue (ascending, zero based).
///
/// Stops once the bracket is narrower than `tol` relative to its endpoints, or
/// narrower than `tol * eps * G` in absolute terms so an exact zero eigenvalue
/// terminates too.
pub fn bisect_eigenvalue(chain: &TridiagonalChain, k: usize, tol: f64) -> Result<Bisection> {
    let n = chain.size();
    if k >= n {
        return Err(Error::Size(format!(
            "eigenvalue index {k} out of range for N={n}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let g = gershgorin_bound(chain);
    let pad = 4.0 * EPS * g + f64::MIN_POSITIVE;
    let (mut lo, mut hi) = (-g - pad, g + pad);
    let floor = tol * EPS * g;
    let mut steps = 0;
    loop {
        let width = hi - lo;
        let target = (tol * lo.abs().max(hi.abs())).max(floor);
        if width <= target {
            break;
        }
        if steps == MAX_BISECTION_STEPS {
            if width > 1e3 * target {
                return Err(Error::Bisection {
                    index: k,
                    lo,
                    hi,
                    steps,
                });
            }
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if sturm_count(chain, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    Ok(Bisection {
        value: lo + 0.5 * (hi - lo),
        steps,
    })
}

pub fn eigenvalue_by_index(chain: &TridiagonalChain, k: usize, tol: f64) -> Result<f64> {
    bisect_eigenvalue(chain, k, tol).map(|b| b.value)
}

/// Index of the smallest strictly positive eigenvalue.
///
/// A zero-diagonal chain has a spectrum symmetric about zero, so for even `N`
/// exactly `N/2` eigenvalues are negative. Odd sizes carry an exact zero
/// eigenvalue and are only accepted when `allow_odd` is set.
pub fn central_index(size: usize, allow_odd: bool) -> Result<usize> {
    if size % 2 == 0 {
        Ok(size / 2)
    } else if allow_odd {
        Ok(size.div_ceil(2))
    } else {
        Err(Error::Parity(format!(
            "squeeze runs use even N; got N={size} (set allow_odd to override)"
        )))
    }
}

pub fn smallest_positive_eigenvalue(
    chain: &TridiagonalChain,
    tol: f64,
    allow_odd: bool,
) -> Result<f64> {
    let k = central_index(chain.size(), allow_odd)?;
    eigenvalue_by_index(chain, k, tol)
}

/// Componentwise-scaled residual `max_j |(Tx - λx)_j| / (|λ| + β_{j-1} + β_j)`.
pub fn scaled_residual(chain: &TridiagonalChain, lambda: f64, x: &[f64]) -> f64 {
    let tx = chain.apply(x);
    tx.iter()
        .zip(x)
        .enumerate()
        .map(|(j, (t, xj))| (t - lambda * xj).abs() / (lambda.abs() + chain.row_sum(j)))
        .fold(0.0, f64::max)
}

/// Partially pivoted LU factorization of `T - λI`.
struct ShiftedLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    dl: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(chain: &TridiagonalChain, lambda: f64) -> Self {
        let n = chain.size();
        let b = chain.couplings();
        let mut d = vec![-lambda; n];
        let mut du = b.to_vec();
        let mut dl = b.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                let fact = if d[i] != 0.0 { dl[i] / d[i] } else { 0.0 };
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        let abs_l = lambda.abs();
        for (i, di) in d.iter_mut().enumerate() {
            let floor = EPS * (abs_l + chain.row_sum(i));
            if di.abs() < floor {
                *di = if *di < 0.0 { -floor } else { floor };
            }
        }
        Self {
            d,
            du,
            du2,
            dl,
            swapped,
        }
    }

    /// Solves `(T - λI) x = rhs` in place, rescaling to stay finite.
    fn solve(&self, x: &mut [f64]) {
        const BIG: f64 = 1e150;
        let n = x.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = temp - self.dl[i] * x[i];
            } else {
                x[i + 1] -= self.dl[i] * x[i];
            }
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            if i + 1 < n {
                v -= self.du[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= self.du2[i] * x[i + 2];
            }
            v /= self.d[i];
            if v.abs() > BIG {
                let s = 1.0 / v.abs();
                x.iter_mut().for_each(|e| *e *= s);
                v *= s;
            }
            x[i] = v;
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn seeded_start(size: usize) -> Vec<f64> {
    let mut state = INVERSE_ITERATION_SEED;
    (0..size)
        .map(|_| (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0)
        .collect()
}

fn normalize(x: &mut [f64]) -> f64 {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let norm = x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt() * scale;
    x.iter_mut().for_each(|v| *v /= norm);
    norm
}

/// Largest-magnitude component made positive.
fn fix_sign(x: &mut [f64]) {
    let pivot = x.iter().copied().fold(
        0.0f64,
        |best, v| if v.abs() > best.abs() { v } else { best },
    );
    if pivot < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Unit eigenvector for an eigenvalue estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseIteration {
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn inverse_iterate(
    chain: &TridiagonalChain,
    lambda: f64,
    against: &[&[f64]],
) -> Result<InverseIteration> {
    let lu = ShiftedLu::new(chain, lambda);
    let mut x = seeded_start(chain.size());
    normalize(&mut x);
    let mut residual = f64::INFINITY;
    let mut converged_at = None;
    for it in 1..=MAX_INVERSE_ITERATIONS {
        lu.solve(&mut x);
        normalize(&mut x);
        for v in against {
            let dot: f64 = x.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            x.iter_mut().zip(v.iter()).for_each(|(a, b)| *a -= dot * b);
        }
        if !against.is_empty() {
            normalize(&mut x);
        }
        residual = scaled_residual(chain, lambda, &x);
        if residual <= RESIDUAL_TOL {
            let first = *converged_at.get_or_insert(it);
            // the residual test alone admits O(1e-8 G / gap) contamination from
            // neighbouring eigenvectors; extra solves remove it
            if it == first + EXTRA_ITERATIONS || it == MAX_INVERSE_ITERATIONS {
                fix_sign(&mut x);
                return Ok(InverseIteration {
                    vector: x,
                    residual,
                    iterations: it,
                });
            }
        }
    }
    Err(Error::InverseIteration {
        residual,
        iterations: MAX_INVERSE_ITERATIONS,
    })
}

/// Eigenvector of a simple eigenvalue `lambda` by inverse iteration.
pub fn eigenvector_inverse_iteration(
    chain: &TridiagonalChain,
    lambda: f64,
) -> Result<InverseIteration> {
    let g = gershgorin_bound(chain);
    if !(lambda.is_finite() && lambda.abs() <= g * (1.0 + 4.0 * EPS)) {
        return Err(Error::Domain(format!(
            "lambda {lambda} outside the Gershgorin interval [-{g}, {g}]"
        )));
    }
    let w = 1e-10 * lambda.abs().max(EPS * g);
    let count = sturm_count(chain, lambda + w) - sturm_count(chain, lambda - w);
    if count > 1 {
        return Err(Error::Degenerate { lambda, count });
    }
    inverse_iterate(chain, lambda, &[])
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Every eigenpair in ascending order, for `N <= 4096`.
pub fn full_spectrum_small(chain: &TridiagonalChain) -> Result<Vec<Eigenpair>> {
    let n = chain.size();
    if n > FULL_SPECTRUM_MAX {
        return Err(Error::Size(format!(
            "full spectrum is capped at N={FULL_SPECTRUM_MAX}, got {n}"
        )));
    }
    let g = gershgorin_bound(chain);
    let values = (0..n)
        .map(|k| eigenvalue_by_index(chain, k, DEFAULT_TOL))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs: Vec<Eigenpair> = Vec::with_capacity(n);
    let mut cluster_start = 0;
    for (k, &value) in values.iter().enumerate() {
        if k > 0 && value - values[k - 1] > CLUSTER_GAP * g {
            cluster_start = k;
        }
        let against: Vec<&[f64]> = pairs[cluster_start..k]
            .iter()
            .map(|p| p.vector.as_slice())
            .collect();
        let vector = inverse_iterate(chain, value, &against)?.vector;
        pairs.push(Eigenpair { value, vector });
    }
    Ok(pairs)
}

/// Central eigenpair of one `(n, N)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralEigenpair {
    pub n: Option<SqueezeOrder>,
    pub size: usize,
    pub e_min: f64,
    pub vector: Vec<f64>,
    pub m_expect: f64,
    pub residual: f64,
    pub bisection_steps: usize,
    pub inverse_iterations: usize,
}

/// Smallest positive eigenvalue of an even chain, its eigenvector and `<m>`.
pub fn central_eigenpair(chain: &TridiagonalChain, tol: f64) -> Result<CentralEigenpair> {
    let k = central_index(chain.size(), false)?;
    let bis = bisect_eigenvalue(chain, k, tol)?;
    let inv = eigenvector_inverse_iteration(chain, bis.value)?;
    let m_expect = renormalized_number(&inv.vector)?;
    let n = match chain.origin() {
        ChainOrigin::Squeeze { n } => Some(n),
        _ => None,
    };
    Ok(CentralEigenpair {
        n,
        size: chain.size(),
        e_min: bis.value,
        vector: inv.vector,
        m_expect,
        residual: inv.residual,
        bisection_steps: bis.steps,
        inverse_iterations: inv.iterations,
    })
}

/// Smallest singular value of the bidiagonal factor of an even chain.
///
/// Reordering the basis as (even sites, odd sites) turns `T` into
/// `[[0, B], [B^T, 0]]` with `B` lower bidiagonal, diagonal `β_0, β_2, ...` and
/// subdiagonal `β_1, β_3, ...`; the eigenvalues of `T` are `±σ(B)`. `σ_min` is found by
/// inverse power iteration on `B^T B` using only bidiagonal substitutions, which are
/// componentwise backward stable. Intended as an independent check on
/// [`smallest_positive_eigenvalue`] when the lowest singular value is well separated.
pub fn smallest_singular_value_bidiagonal(chain: &TridiagonalChain) -> Result<f64> {
    const MAX_ITER: usize = 500;
    let n = chain.size();
    if n % 2 != 0 {
        return Err(Error::Parity(format!(
            "bidiagonal form needs even N, got {n}"
        )));
    }
    let b = chain.couplings();
    let m = n / 2;
    let diag: Vec<f64> = (0..m).map(|a| b[2 * a]).collect();
    let sub: Vec<f64> = (0..m - 1).map(|a| b[2 * a + 1]).collect();
    let mut y = seeded_start(m);
    normalize(&mut y);
    let mut z = vec![0.0; m];
    let mut sigma = f64::NAN;
    for _ in 0..MAX_ITER {
        // B^T z = y, upper bidiagonal
        z[m - 1] = y[m - 1] / diag[m - 1];
        for a in (0..m - 1).rev() {
            z[a] = (y[a] - sub[a] * z[a + 1]) / diag[a];
        }
        let z_norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        let next = 1.0 / z_norm;
        // B w = z, lower bidiagonal
        y[0] = z[0] / diag[0];
        for a in 1..m {
            y[a] = (z[a] - sub[a - 1] * y[a - 1]) / diag[a];
        }
        normalize(&mut y);
        if ((next - sigma) / next).abs() < 4.0 * EPS {
            return Ok(next);
        }
        sigma = next;
    }
    Err(Error::Bisection {
        index: m,
        lo: sigma,
        hi: sigma,
        steps: MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_hierarchical_chain, build_squeeze_chain};
    use std::f64::consts::PI;

    fn chain(b: &[f64]) -> TridiagonalChain {
        TridiagonalChain::from_couplings(b.to_vec()).unwrap()
    }

    fn squeeze(n: f64, size: usize) -> TridiagonalChain {
        build_squeeze_chain(SqueezeOrder::new(n).unwrap(), size).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // λ⁴ − 10101 λ² + 10000 = 0 for couplings [1, 10, 100]
    fn quartic_roots() -> (f64, f64) {
        let disc = (10101f64.powi(2) - 40000.0).sqrt();
        (
            ((10101.0 - disc) / 2.0).sqrt(),
            ((10101.0 + disc) / 2.0).sqrt(),
        )
    }

    #[test]
    fn gershgorin_examples() {
        assert_eq!(gershgorin_bound(&chain(&[1.0, 1.0, 1.0])), 2.0);
        assert_eq!(gershgorin_bound(&chain(&[1.0, 10.0, 100.0])), 110.0);
        assert!((gershgorin_bound(&squeeze(2.0, 3)) - 4.878_315_178).abs() < 1e-9);
    }

    #[test]
    fn sturm_count_examples() {
        let c = chain(&[1.0, 1.0, 1.0]);
        assert_eq!(sturm_count(&c, 0.0), 2);
        let g = gershgorin_bound(&c);
        assert_eq!(sturm_count(&c, -g - 1.0), 0);
        assert_eq!(sturm_count(&c, g + 1.0), 4);
        // between 2cos(2π/5) and 2cos(π/5)
        assert_eq!(sturm_count(&c, 1.0), 3);
    }

    #[test]
    fn eigenvalue_by_index_examples() {
        let c = chain(&[1.0, 1.0, 1.0]);
        let v = eigenvalue_by_index(&c, 2, DEFAULT_TOL).unwrap();
        assert!(rel(v, 2.0 * (2.0 * PI / 5.0).cos()) < 1e-11);
        assert!((v - 0.618_033_988_7).abs() < 1e-10);

        let c = chain(&[3.7]);
        assert!(rel(eigenvalue_by_index(&c, 1, DEFAULT_TOL).unwrap(), 3.7) < 1e-12);
        assert!(rel(eigenvalue_by_index(&c, 0, DEFAULT_TOL).unwrap(), -3.7) < 1e-12);

        let (small, _) = quartic_roots();
        let v = eigenvalue_by_index(&chain(&[1.0, 10.0, 100.0]), 2, DEFAULT_TOL).unwrap();
        assert!(rel(v, small) < 1e-11);
        assert!((v - 0.995_037).abs() < 1e-6);
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            eigenvalue_by_index(&chain(&[1.0]), 2, DEFAULT_TOL),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn smallest_positive_examples() {
        let v = smallest_positive_eigenvalue(&squeeze(0.0, 4), DEFAULT_TOL, false).unwrap();
        assert!(rel(v, 2.0 * (PI / 10.0).sin()) < 1e-11);
        let v = smallest_positive_eigenvalue(&squeeze(6.0, 2), DEFAULT_TOL, false).unwrap();
        assert!((v - 26.832_815_73).abs() < 1e-7);
        let h = build_hierarchical_chain(4, 10.0, 1.0).unwrap();
        let v = smallest_positive_eigenvalue(&h, DEFAULT_TOL, false).unwrap();
        assert!(rel(v, quartic_roots().0) < 1e-11);
    }

    #[test]
    fn odd_size_needs_flag() {
        let c = chain(&[1.0, 1.0]);
        assert!(matches!(
            smallest_positive_eigenvalue(&c, DEFAULT_TOL, false),
            Err(Error::Parity(_))
        ));
        let v = smallest_positive_eigenvalue(&c, DEFAULT_TOL, true).unwrap();
        assert!(rel(v, 2f64.sqrt()) < 1e-12);
    }

    #[test]
    fn odd_chain_has_exact_zero() {
        let c = build_hierarchical_chain(7, 100.0, 1.0).unwrap();
        let g = gershgorin_bound(&c);
        let v = eigenvalue_by_index(&c, 3, DEFAULT_TOL).unwrap();
        assert!(v.abs() <= 1e-9 * g, "{v}");
    }

    #[test]
    fn inverse_iteration_two_by_two() {
        let c = chain(&[2.5]);
        let inv = eigenvector_inverse_iteration(&c, 2.5).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((inv.vector[0] - s).abs() < 1e-12 && (inv.vector[1] - s).abs() < 1e-12);
        assert!(inv.residual <= RESIDUAL_TOL);
    }

    #[test]
    fn inverse_iteration_uniform_chain() {
        let c = chain(&[1.0, 1.0, 1.0]);
        let inv = eigenvector_inverse_iteration(&c, 0.618_033_988_7).unwrap();
        let exact: Vec<f64> = (1..=4).map(|j| (2.0 * j as f64 * PI / 5.0).sin()).collect();
        let norm = exact.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dot: f64 = exact
            .iter()
            .zip(&inv.vector)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / norm;
        assert!((dot.abs() - 1.0).abs() < 1e-12, "{dot}");
    }

    #[test]
    fn inverse_iteration_rejects_clusters_and_outsiders() {
        // two decoupled dimers give a doubly degenerate eigenvalue up to 1e-30
        let c = chain(&[1.0, 1e-30, 1.0]);
        assert!(matches!(
            eigenvector_inverse_iteration(&c, 1.0),
            Err(Error::Degenerate { .. })
        ));
        assert!(matches!(
            eigenvector_inverse_iteration(&c, 5.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn inverse_iteration_flags_non_eigenvalue() {
        let c = chain(&[1.0, 1.0, 1.0]);
        assert!(matches!(
            eigenvector_inverse_iteration(&c, 0.3),
            Err(Error::InverseIteration { .. })
        ));
    }

    #[test]
    fn full_spectrum_uniform_and_cap() {
        let c = chain(&[1.0, 1.0, 1.0]);
        let pairs = full_spectrum_small(&c).unwrap();
        for (i, p) in pairs.iter().enumerate() {
            let k = 4 - i;
            let exact = 2.0 * (k as f64 * PI / 5.0).cos();
            assert!((p.value - exact).abs() < 1e-12);
            assert!(scaled_residual(&c, p.value, &p.vector) <= RESIDUAL_TOL);
        }
        let big = squeeze(0.0, FULL_SPECTRUM_MAX + 2);
        assert!(matches!(full_spectrum_small(&big), Err(Error::Size(_))));
    }

    #[test]
    fn full_spectrum_is_orthonormal() {
        for c in [squeeze(0.0, 300), squeeze(2.5, 120), squeeze(5.0, 250)] {
            let pairs = full_spectrum_small(&c).unwrap();
            let mut worst = 0.0f64;
            for a in 0..pairs.len() {
                for b in a..pairs.len() {
                    let dot: f64 = pairs[a]
                        .vector
                        .iter()
                        .zip(&pairs[b].vector)
                        .map(|(x, y)| x * y)
                        .sum();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((dot - expect).abs());
                }
            }
            assert!(worst < 1e-10, "orthogonality loss {worst}");
        }
    }

    #[test]
    fn bidiagonal_cross_check_agrees() {
        for (n, size) in [(5.0, 2000), (6.0, 8000), (4.5, 500)] {
            let c = squeeze(n, size);
            let sturm = smallest_positive_eigenvalue(&c, DEFAULT_TOL, false).unwrap();
            let svd = smallest_singular_value_bidiagonal(&c).unwrap();
            assert!(rel(sturm, svd) < 1e-10, "n={n}: {sturm} vs {svd}");
        }
        assert!(smallest_singular_value_bidiagonal(&chain(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn central_pair_of_two_by_two() {
        let c = squeeze(3.7, 2);
        let cp = central_eigenpair(&c, DEFAULT_TOL).unwrap();
        assert!((cp.m_expect - 0.5).abs() < 1e-11);
        assert_eq!(cp.n.unwrap().value(), 3.7);
    }
}
