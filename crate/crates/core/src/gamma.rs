//! Natural logarithm of the gamma function for positive real arguments.
//!
//! Three regimes:
//! - `|x - 1| <= 0.3` and `|x - 2| <= 0.3`: Taylor series in terms of `zeta(k) - 1`,
//!   which keeps full relative accuracy next to the roots of `ln Γ`.
//! - `x >= 10`: Stirling asymptotic series with eight Bernoulli corrections.
//! - everything else: upward recurrence into the Stirling regime.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_MIN: f64 = 10.0;
const ROOT_WINDOW: f64 = 0.3;

/// `zeta(k) - 1` for `k = 2..=40`.
const ZETA_MINUS_ONE: [f64; 39] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_943e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_763e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
    2.328_311_833_676_505e-10,
    1.164_155_017_270_052e-10,
    5.820_772_087_902_701e-11,
    2.910_385_044_497_1e-11,
    1.455_192_189_104_198e-11,
    7.275_959_835_057_482e-12,
    3.637_979_547_378_651e-12,
    1.818_989_650_307_066e-12,
    9.094_947_840_263_888e-13,
];

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=8`.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(x)` for finite `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!(
            "log_gamma requires finite x > 0, got {x}"
        )));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if (x - 1.0).abs() <= ROOT_WINDOW {
        return series_near_one(x - 1.0);
    }
    if (x - 2.0).abs() <= ROOT_WINDOW {
        return series_near_two(x - 2.0);
    }
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    // Γ(x) = Γ(x + m) / (x (x+1) ... (x+m-1))
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_MIN {
        product *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - product.ln()
}

/// ln Γ(1 + z) = -γ z + Σ_{k≥2} (-1)^k ζ(k) z^k / k
fn series_near_one(z: f64) -> f64 {
    let mut power = -z;
    let mut tail = 0.0;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        power *= -z;
        tail += (1.0 + zm1) * power / k;
    }
    -EULER_GAMMA * z + tail
}

/// ln Γ(2 + z) = (1 - γ) z + Σ_{k≥2} (-1)^k (ζ(k) - 1) z^k / k
fn series_near_two(z: f64) -> f64 {
    let mut power = -z;
    let mut tail = 0.0;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        power *= -z;
        tail += zm1 * power / k;
    }
    (1.0 - EULER_GAMMA) * z + tail
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv_sq = inv * inv;
    let mut correction = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        correction = correction * inv_sq + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + correction * inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn unit_argument_is_zero() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
    }

    #[test]
    fn seven_matches_ln_720() {
        let v = log_gamma(7.0).unwrap();
        assert!(rel(v, 720f64.ln()) < 1e-14, "{v}");
        assert!((v - 6.579_251_212).abs() < 1e-9);
    }

    #[test]
    fn three_and_a_half_matches_closed_form() {
        let closed = (15.0 / 8.0 * std::f64::consts::PI.sqrt()).ln();
        let v = log_gamma(3.5).unwrap();
        assert!(rel(v, closed) < 1e-14);
        assert!((v - 1.200_973_602).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_domain() {
        for x in [0.0, -1.0, f64::NAN, f64::INFINITY, -0.5] {
            assert!(matches!(log_gamma(x), Err(Error::Domain(_))), "{x}");
        }
    }

    #[test]
    fn regimes_agree_at_boundaries() {
        for x in [0.7, 1.3, 1.7, 2.3, 9.999_999, 10.0] {
            let a = log_gamma_unchecked(x);
            let b = stirling(x + 20.0) - (0..20).map(|i| (x + i as f64).ln()).sum::<f64>();
            assert!(rel(a, b) < 1e-13, "x={x} a={a} b={b}");
        }
    }
}
