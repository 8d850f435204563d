//! Comparisons against independent references: exact integer factorials, closed
//! forms, high-precision tabulated values and dense complex Hermitian solves.

use approx::assert_relative_eq;
use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigUint;
use num_complex::Complex64;

use fracsq::eigensolve::{smallest_singular_value_bidiagonal, DEFAULT_TOL};
use fracsq::{
    build_squeeze_chain, central_eigenpair, central_pair_overlap, coupling, full_spectrum_small,
    log_gamma, SqueezeOrder, TridiagonalChain,
};

fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * i)
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_string().parse().unwrap()
}

/// `ln(p / q)` for big integers, keeping 17 leading digits of each.
fn ln_ratio(p: &BigUint, q: &BigUint) -> f64 {
    let ln_big = |x: &BigUint| {
        let s = x.to_string();
        let keep = s.len().min(17);
        let mantissa: f64 = s[..keep].parse().unwrap();
        mantissa.ln() + (s.len() - keep) as f64 * std::f64::consts::LN_10
    };
    ln_big(p) - ln_big(q)
}

fn order(n: f64) -> SqueezeOrder {
    SqueezeOrder::new(n).unwrap()
}

#[test]
fn integer_order_couplings_match_factorial_ratios() {
    for n in 1..=6u32 {
        for j in 0.. {
            if (j + 1) * n > 20 {
                break;
            }
            let exact = big_to_f64(&factorial((j + 1) * n)) / big_to_f64(&factorial(j * n));
            let beta = coupling(order(n as f64), j as usize).unwrap();
            assert_relative_eq!(beta * beta, exact, max_relative = 1e-10);
        }
    }
}

#[test]
fn log_gamma_matches_exact_factorials() {
    for k in 1..=170u32 {
        let exact = ln_ratio(&factorial(k - 1), &BigUint::from(1u32));
        let v = log_gamma(k as f64).unwrap();
        if k <= 2 {
            assert_eq!(v, 0.0);
        } else {
            assert_relative_eq!(v, exact, max_relative = 1e-13);
        }
    }
    // large arguments via exact recurrence steps from a large factorial
    let big = factorial(3000);
    let lg = log_gamma(3001.0).unwrap();
    assert_relative_eq!(
        lg,
        ln_ratio(&big, &BigUint::from(1u32)),
        max_relative = 1e-13
    );
}

#[test]
fn log_gamma_half_integers() {
    // Γ(k + 1/2) = (2k)! √π / (4^k k!)
    for k in 0..=60u32 {
        let num = factorial(2 * k);
        let den = BigUint::from(4u32).pow(k) * factorial(k);
        let exact = ln_ratio(&num, &den) + 0.5 * std::f64::consts::PI.ln();
        let v = log_gamma(k as f64 + 0.5).unwrap();
        assert_relative_eq!(v, exact, max_relative = 1e-13, epsilon = 1e-15);
    }
}

#[test]
fn log_gamma_high_precision_table() {
    // 50-digit reference values, rounded to double precision
    let table = [
        (1.000_000_1, -5.772_155_826_548_335e-8),
        (0.9999, 5.772_979_156_120_022e-5),
        (2.0001, 4.228_165_811_283_071e-5),
        (0.5, 0.572_364_942_924_700_1),
        (0.001, 6.907_178_885_383_854),
        (1e-10, 23.025_850_929_882_735),
        (0.3, 1.095_797_994_818_075_5),
        (1.25, -0.098_271_836_421_813_16),
        (1.5, -0.120_782_237_635_245_22),
        (1.7, -0.095_807_697_407_065_86),
        (3.5, 1.200_973_602_347_074),
        (10.5, 13.940_625_219_403_764),
        (1234.5, 7_550.550_901_077_895),
        (54_321.125, 537_919.559_540_686_7),
        (123_456.789, 1_323_902.018_795_063_1),
        (200_000.0, 2_241_209.345_008_661_9),
    ];
    for (x, expected) in table {
        let v = log_gamma(x).unwrap();
        assert_relative_eq!(v, expected, max_relative = 1e-13);
    }
}

/// Dense complex Hermitian form: `H[j][j+1] = -i β_j`, `H[j+1][j] = i β_j`.
fn complex_form(chain: &TridiagonalChain) -> DMatrix<Complex64> {
    let n = chain.size();
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for (j, &b) in chain.couplings().iter().enumerate() {
        h[(j, j + 1)] = Complex64::new(0.0, -b);
        h[(j + 1, j)] = Complex64::new(0.0, b);
    }
    h
}

#[test]
fn gauge_reduction_preserves_spectrum_and_moduli() {
    for n in [0.5, 1.0, 2.7, 4.0] {
        for size in [2, 3, 5, 8, 12] {
            let chain = build_squeeze_chain(order(n), size).unwrap();
            let dense = SymmetricEigen::new(complex_form(&chain));
            let mut dense_pairs: Vec<(f64, Vec<f64>)> = (0..size)
                .map(|k| {
                    let moduli = dense
                        .eigenvectors
                        .column(k)
                        .iter()
                        .map(|z| z.norm())
                        .collect();
                    (dense.eigenvalues[k], moduli)
                })
                .collect();
            dense_pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let ours = full_spectrum_small(&chain).unwrap();
            let scale = chain.couplings().iter().fold(0.0f64, |a, &b| a.max(b));
            for (p, (value, moduli)) in ours.iter().zip(&dense_pairs) {
                assert!(
                    (p.value - value).abs() <= 1e-12 * scale,
                    "n={n} N={size}: {} vs {value}",
                    p.value
                );
                for (x, m) in p.vector.iter().zip(moduli) {
                    assert!((x.abs() - m).abs() < 1e-9, "n={n} N={size}");
                }
            }
            if size % 2 == 0 {
                let central = &dense_pairs[size / 2];
                let m_dense: f64 = central
                    .1
                    .iter()
                    .enumerate()
                    .map(|(j, a)| j as f64 * a * a)
                    .sum();
                let cp = central_eigenpair(&chain, DEFAULT_TOL).unwrap();
                assert_relative_eq!(cp.m_expect, m_dense, max_relative = 1e-9);
            }
        }
    }
}

fn dense_real(chain: &TridiagonalChain) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let n = chain.size();
    let mut h = DMatrix::<f64>::zeros(n, n);
    for (j, &b) in chain.couplings().iter().enumerate() {
        h[(j, j + 1)] = b;
        h[(j + 1, j)] = b;
    }
    SymmetricEigen::new(h)
}

/// Vacuum weight of the two central states from a dense solve.
fn dense_central_overlap(chain: &TridiagonalChain) -> f64 {
    let eig = dense_real(chain);
    let mut order: Vec<usize> = (0..chain.size()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mid = chain.size() / 2;
    [order[mid - 1], order[mid]]
        .iter()
        .map(|&k| eig.eigenvectors[(0, k)].powi(2))
        .sum()
}

#[test]
fn central_pair_carries_the_vacuum_at_large_order_only() {
    let large = build_squeeze_chain(order(5.0), 250).unwrap();
    let ours = central_pair_overlap(&full_spectrum_small(&large).unwrap()).unwrap();
    assert!(ours > 0.9, "{ours}");
    assert_relative_eq!(ours, dense_central_overlap(&large), max_relative = 1e-8);

    let flat = build_squeeze_chain(order(0.0), 250).unwrap();
    let ours = central_pair_overlap(&full_spectrum_small(&flat).unwrap()).unwrap();
    assert!(ours < 0.1, "{ours}");
    assert_relative_eq!(ours, dense_central_overlap(&flat), max_relative = 1e-8);
}

#[test]
fn bidiagonal_singular_value_agrees_with_bisection() {
    for (n, size) in [(0.0, 500), (1.0, 400), (3.0, 300), (5.0, 250), (6.0, 1000)] {
        let chain = build_squeeze_chain(order(n), size).unwrap();
        let sigma = smallest_singular_value_bidiagonal(&chain).unwrap();
        let cp = central_eigenpair(&chain, DEFAULT_TOL).unwrap();
        assert_relative_eq!(sigma, cp.e_min, max_relative = 1e-9);
    }
}

#[test]
fn two_by_two_closed_form() {
    for n in [0.5, 1.0, 2.0, 3.7, 6.0] {
        let chain = build_squeeze_chain(order(n), 2).unwrap();
        let cp = central_eigenpair(&chain, DEFAULT_TOL).unwrap();
        let exact = (0.5 * log_gamma(n + 1.0).unwrap()).exp();
        assert_relative_eq!(cp.e_min, exact, max_relative = 1e-12);
        assert_relative_eq!(cp.m_expect, 0.5, max_relative = 1e-11);
    }
}
