//! Special-function substrate: log-Gamma, sphere surface areas, and the
//! closed-form multiplier of the fractional Laplacian acting on power laws.
//!
//! The central object is `power_law_multiplier`, the constant
//! `lambda(n, s, beta)` in `(-Delta)^s |x|^{-beta} = lambda |x|^{-beta-2s}`:
//!
//! ```text
//! lambda(n, s, beta) = 2^{2s} G((beta+2s)/2) G((n-beta)/2)
//!                      / ( G(beta/2) G((n-beta-2s)/2) )
//! ```
//!
//! Specializations of this one formula give the singular-solution amplitude
//! (`beta = 2s/(p-1)`), the optimal Hardy constant (`beta = (n-2s)/2`), and
//! the polynomial product formulas at `s = 1` and `s = 2`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

// Lanczos approximation, g = 7, 9 coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn log_gamma_lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Natural logarithm of the Gamma function for positive arguments.
///
/// Uses the Lanczos series for `x >= 0.5` and the reflection formula
/// `Gamma(x) Gamma(1-x) = pi / sin(pi x)` for `x` in `(0, 0.5)`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!(
            "log_gamma requires a positive finite argument, got {x}"
        )));
    }
    if x >= 0.5 {
        Ok(log_gamma_lanczos(x))
    } else {
        // reflection; sin(pi x) > 0 on (0, 0.5)
        Ok(PI.ln() - (PI * x).sin().ln() - log_gamma_lanczos(1.0 - x))
    }
}

/// Surface measure of the unit sphere `S^{n-1}`: `2 pi^{n/2} / Gamma(n/2)`.
///
/// Real `n > 0` is accepted; the formula is analytic in the dimension.
pub fn sphere_area(n: f64) -> Result<f64> {
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::domain(format!(
            "sphere_area requires n > 0, got {n}"
        )));
    }
    Ok((std::f64::consts::LN_2 + 0.5 * n * PI.ln() - log_gamma(0.5 * n)?).exp())
}

/// The multiplier `lambda(n, s, beta)` of `(-Delta)^s` on `|x|^{-beta}`.
///
/// Requires `0 < beta < n - 2s`; on that open interval the value is finite
/// and positive. Evaluated as `exp` of a sum of log-Gammas so that large
/// dimensions do not overflow.
pub fn power_law_multiplier(n: f64, s: f64, beta: f64) -> Result<f64> {
    validate_order(s)?;
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::domain(format!("dimension must satisfy n > 0, got {n}")));
    }
    if !(beta > 0.0) {
        return Err(Error::domain(format!(
            "beta must satisfy beta > 0, got beta = {beta}"
        )));
    }
    if !(beta < n - 2.0 * s) {
        return Err(Error::domain(format!(
            "beta must satisfy beta < n - 2s = {}, got beta = {beta}",
            n - 2.0 * s
        )));
    }
    let log = 2.0 * s * std::f64::consts::LN_2
        + log_gamma(0.5 * (beta + 2.0 * s))?
        + log_gamma(0.5 * (n - beta))?
        - log_gamma(0.5 * beta)?
        - log_gamma(0.5 * (n - beta - 2.0 * s))?;
    Ok(log.exp())
}

/// Optimal constant in the fractional Hardy inequality,
/// `Lambda_{n,s} = 2^{2s} Gamma((n+2s)/4)^2 / Gamma((n-2s)/4)^2`.
///
/// Equals the maximum of `beta -> power_law_multiplier(n, s, beta)`,
/// attained at `beta = (n-2s)/2`. At `s = 2` this is the Hardy-Rellich
/// constant `n^2 (n-4)^2 / 16`.
pub fn hardy_constant(n: f64, s: f64) -> Result<f64> {
    validate_order(s)?;
    if !n.is_finite() || n <= 2.0 * s {
        return Err(Error::domain(format!(
            "hardy_constant requires n > 2s, got n = {n}, s = {s}"
        )));
    }
    let log = 2.0 * s * std::f64::consts::LN_2
        + 2.0 * log_gamma(0.25 * (n + 2.0 * s))?
        - 2.0 * log_gamma(0.25 * (n - 2.0 * s))?;
    Ok(log.exp())
}

/// Normalization constant of the Caffarelli-Silvestre extension,
/// `kappa_s = Gamma(1-s) / (2^{2s-1} Gamma(s))` for `0 < s < 1`.
pub fn kappa_s(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!(
            "kappa_s requires 0 < s < 1, got {s}"
        )));
    }
    let log = log_gamma(1.0 - s)? - (2.0 * s - 1.0) * std::f64::consts::LN_2 - log_gamma(s)?;
    Ok(log.exp())
}

/// Weight exponent `b = 3 - 2s` of the higher-order extension problem.
pub fn extension_weight_exponent(s: f64) -> Result<f64> {
    if !(s > 1.0 && s < 2.0) {
        return Err(Error::domain(format!(
            "extension weight exponent is defined for 1 < s < 2, got {s}"
        )));
    }
    Ok(3.0 - 2.0 * s)
}

fn validate_order(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 2.0) {
        return Err(Error::domain(format!(
            "order must satisfy 0 < s <= 2, got {s}"
        )));
    }
    Ok(())
}
