//! Nonlocal machinery: the sphere kernel `K_alpha`, the constant
//! `A_{n,s}` as a principal-value double integral, and the Hardy-type
//! integral, all cross-validated against the Gamma closed forms.
//!
//! The `A` and Hardy integrals fold `t -> 1/t` onto `(0, 1]`; the folded
//! numerator factors exactly as
//! `expm1(a ln t) * expm1((n-2s-a) ln t) * t^{2s-1}`,
//! which vanishes to second order on the diagonal and avoids catastrophic
//! cancellation. The result carries the singular-integral normalization
//! `C_{n,s} = 4^s s Gamma(n/2 + s) / (pi^{n/2} Gamma(1 - s))`.

use crate::error::{Error, Result};
use crate::exponents::sobolev_exponent;
use crate::gamma::{log_gamma, sphere_area};
use crate::quad::integrate;
use std::f64::consts::PI;

/// Tolerances and budget for the adaptive quadratures of this module.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Fold `t -> 1/t` onto `(0, 1]`; disabling is only meaningful for the
    /// kernel, whose parametrization is already folded.
    pub folding: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-8, max_subdivisions: 2000, folding: true }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::domain("rel_tol must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Parameters of one kernel evaluation `K_alpha(c)`.
#[derive(Debug, Clone, Copy)]
pub struct KernelQuery {
    pub n: f64,
    pub s: f64,
    pub alpha: f64,
    /// Inner product of the two sphere points; `c = 1` (the diagonal) is
    /// rejected.
    pub c: f64,
    pub quad: QuadratureSpec,
}

fn check_fractional_order(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 2.0 && s != 1.0) {
        return Err(Error::domain(format!(
            "fractional order must lie in (0,1) or (1,2), got {s}"
        )));
    }
    Ok(())
}

/// The sphere kernel
/// `K_alpha(c) = int_0^1 (t^{n-1-alpha} + t^{2s-1+alpha})
///               / (t^2 + 1 - 2 t c)^{(n+2s)/2} dt`,
/// symmetric under `alpha -> n - 2s - alpha` and decreasing in `alpha` on
/// `[0, (n-2s)/2]`. Evaluated after the substitution `t = v^2`, which
/// absorbs the endpoint power at `t = 0`.
#[allow(non_snake_case)]
pub fn kernel_K(q: &KernelQuery) -> Result<f64> {
    q.quad.validate()?;
    check_fractional_order(q.s)?;
    if !(q.n > 2.0 * q.s) {
        return Err(Error::domain("kernel requires n > 2s"));
    }
    if !(q.alpha >= 0.0 && q.alpha <= q.n - 2.0 * q.s) {
        return Err(Error::domain(format!(
            "alpha must lie in [0, n - 2s] = [0, {}], got {}",
            q.n - 2.0 * q.s,
            q.alpha
        )));
    }
    if !(q.c >= -1.0 && q.c < 1.0) {
        return Err(Error::domain(
            "inner product c must lie in [-1, 1); the diagonal c = 1 is non-integrable",
        ));
    }
    let (n, s, alpha, c) = (q.n, q.s, q.alpha, q.c);
    let nu = (n + 2.0 * s) / 2.0;
    let (e1, e2) = (n - 1.0 - alpha, 2.0 * s - 1.0 + alpha);
    integrate(
        |v| {
            if v == 0.0 {
                return 0.0;
            }
            let t = v * v;
            let num = (2.0 * e1 + 1.0) * v.ln();
            let num2 = (2.0 * e2 + 1.0) * v.ln();
            2.0 * (num.exp() + num2.exp()) / (t * t + 1.0 - 2.0 * t * c).powf(nu)
        },
        0.0,
        1.0,
        q.quad.rel_tol,
        0.0,
        q.quad.max_subdivisions,
    )
}

/// `K_{(n-2s)/2}(c) - K_{2s/(p-1)}(c)`: strictly negative for supercritical
/// `p`, since the kernel decreases toward the midpoint `(n-2s)/2`.
pub fn kernel_monotonicity_gap(
    n: f64,
    s: f64,
    p: f64,
    c: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let p_s = sobolev_exponent(n, s);
    if !(p >= p_s) {
        return Err(Error::domain(format!(
            "gap requires p >= p_S = {p_s} so 2s/(p-1) <= (n-2s)/2"
        )));
    }
    let mid = kernel_K(&KernelQuery { n, s, alpha: (n - 2.0 * s) / 2.0, c, quad: *quad })?;
    let at_beta = kernel_K(&KernelQuery { n, s, alpha: 2.0 * s / (p - 1.0), c, quad: *quad })?;
    Ok(mid - at_beta)
}

/// Normalization constant of the singular-integral fractional Laplacian,
/// `C_{n,s} = 4^s Gamma(n/2 + s) / (pi^{n/2} |Gamma(-s)|)`, for `s` in
/// `(0, 1)` using `|Gamma(-s)| = Gamma(1-s)/s`.
fn singular_integral_constant(n: f64, s: f64) -> Result<f64> {
    let log = s * 4.0_f64.ln() + log_gamma(n / 2.0 + s)? - (n / 2.0) * PI.ln()
        - log_gamma(1.0 - s)?
        + s.ln();
    Ok(log.exp())
}

/// The folded principal-value double integral with power exponent `a`,
/// times the singular-integral constant:
/// `C_{n,s} * omega_{n-2} int_0^pi sin^{n-2}(phi)
///   int_0^1 expm1(a ln t) expm1((n-2s-a) ln t) t^{2s-1}
///           / (t^2 + 1 - 2 t cos phi)^{(n+2s)/2} dt dphi`.
/// The outer substitution `phi = u^2` grades the mesh toward the diagonal.
fn folded_pv_integral(n: f64, s: f64, a: f64, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    if !quad.folding {
        return Err(Error::unsupported(
            "the unfolded principal-value form is not absolutely convergent; \
             only the folded evaluation is implemented",
        ));
    }
    let nu = (n + 2.0 * s) / 2.0;
    let b = n - 2.0 * s - a;
    let omega = sphere_area(n - 1.0)?;
    let inner_tol = quad.rel_tol / 10.0;
    let outer = integrate(
        |u| {
            if u == 0.0 {
                return 0.0;
            }
            let phi = u * u;
            let c = phi.cos();
            let sigma = phi.sin();
            // the denominator is ((t-c)^2 + sigma^2)^nu, sharply peaked at
            // t = c with width sigma near the diagonal; the substitution
            // t = c + sigma tan(theta) turns it into sigma^{1-2nu}
            // cos^{2nu-2}(theta), uniformly smooth in phi
            let theta_lo = (-c / sigma).atan();
            let theta_hi = ((1.0 - c) / sigma).atan();
            let inner = integrate(
                |theta| {
                    let t = c + sigma * theta.tan();
                    if t <= 0.0 {
                        return 0.0;
                    }
                    let lt = t.ln();
                    let num = (a * lt).exp_m1() * (b * lt).exp_m1() * ((2.0 * s - 1.0) * lt).exp();
                    num * theta.cos().powf(2.0 * nu - 2.0)
                },
                theta_lo,
                theta_hi,
                inner_tol,
                0.0,
                quad.max_subdivisions,
            )
            .unwrap_or(f64::NAN);
            2.0 * u * sigma.powf(n - 2.0) * sigma.powf(1.0 - 2.0 * nu) * inner
        },
        0.0,
        PI.sqrt(),
        quad.rel_tol,
        0.0,
        quad.max_subdivisions,
    )?;
    if !outer.is_finite() {
        return Err(Error::domain("inner quadrature failed to converge"));
    }
    Ok(singular_integral_constant(n, s)? * omega * outer)
}

/// `A_{n,s}` for the constant angular profile: the principal-value double
/// integral at exponent `a = 2s/(p-1)`. Reproduces
/// `power_law_multiplier(n, s, 2s/(p-1))` and hence the singular amplitude
/// `|A|^{p-1}`. Restricted to `s` in `(0, 1)`: after folding, the diagonal
/// scales like `rho^{1-2s}` locally, integrable only there.
#[allow(non_snake_case)]
pub fn A_constant_quadrature(n: f64, s: f64, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(s < 1.0) {
        return Err(Error::unsupported(
            "the principal-value quadrature requires s in (0, 1); \
             use the Gamma closed form for higher orders",
        ));
    }
    check_fractional_order(s)?;
    if !(n >= 2.0 && n.fract() == 0.0) {
        return Err(Error::domain("the sphere reduction requires integer n >= 2"));
    }
    let p_s = sobolev_exponent(n, s);
    if !(p > p_s) {
        return Err(Error::domain(format!(
            "the constant angular branch requires p > p_S = {p_s}"
        )));
    }
    folded_pv_integral(n, s, 2.0 * s / (p - 1.0), quad)
}

/// The Hardy-type integral: the same principal-value integral at the
/// midpoint exponent `a = (n-2s)/2`; reproduces `hardy_constant(n, s)`.
pub fn hardy_integral_quadrature(n: f64, s: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(s < 1.0) {
        return Err(Error::unsupported(
            "the principal-value quadrature requires s in (0, 1)",
        ));
    }
    check_fractional_order(s)?;
    if !(n >= 2.0 && n.fract() == 0.0 && n > 2.0 * s) {
        return Err(Error::domain("requires integer n >= 2 with n > 2s"));
    }
    folded_pv_integral(n, s, (n - 2.0 * s) / 2.0, quad)
}
