//! Spherical analysis of homogeneous solutions for the fourth-order system:
//! angular equation coefficients, the constant-solution branch, the
//! stability coefficient signs, and a cutoff Rayleigh-quotient probe that
//! certifies instability of the singular solution below the critical curve.

use crate::error::{Error, Result};
use crate::exponents::{sobolev_exponent, ProblemParams};
use crate::gamma::{power_law_multiplier, sphere_area};
use crate::quad::integrate;
use crate::singular::make_singular;

/// Coefficients of the angular equation
/// `Delta_th^2 psi_i - alpha Delta_th psi_i + beta psi_i = |psi|^{p-1} psi_i`
/// satisfied by `psi = r^q u` on the unit sphere, `q = 4/(p-1)`.
#[derive(Debug, Clone, Copy)]
pub struct AngularCoefficients {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Log-linear cutoff used by the instability probe: `eta = 1` on
/// `[eps, 1/eps]`, linear in `ln r` on the ramps `[eps/2, eps]` and
/// `[1/eps, 2/eps]`, zero outside.
#[derive(Debug, Clone, Copy)]
pub struct CutoffSpec {
    pub epsilon: f64,
}

impl CutoffSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain("cutoff epsilon must lie in (0, 1)"));
        }
        Ok(CutoffSpec { epsilon })
    }
}

/// Outcome of the Rayleigh-quotient probe. `q_value` is the quadratic form
/// `Q(phi) = seminorm(phi)^2 - p int |u_sing|^{p-1} |phi|^2`; the two
/// integrals allow quotient normalizations.
#[derive(Debug, Clone, Copy)]
pub struct ProbeResult {
    pub q_value: f64,
    /// `p int |u_sing|^{p-1} |phi|^2`.
    pub potential: f64,
    /// `int |phi|^2 / r^{2s}` (Hardy weight without constants).
    pub hardy_weighted: f64,
}

/// Angular equation coefficients for dimension `n >= 5`.
pub fn angular_coefficients(n: f64, p: f64) -> Result<AngularCoefficients> {
    if !(n >= 5.0 && n.fract() == 0.0) {
        return Err(Error::domain("angular reduction requires integer n >= 5"));
    }
    if !(p > 1.0) {
        return Err(Error::domain("exponent p must exceed 1"));
    }
    let q = 4.0 / (p - 1.0);
    Ok(AngularCoefficients {
        q,
        alpha: (q + 2.0) * (n - 4.0 - q) + q * (n - 2.0 - q),
        beta: q * (q + 2.0) * (n - 4.0 - q) * (n - 2.0 - q),
    })
}

/// Amplitude of the constant angular solution, `beta^{1/(p-1)}`; the
/// constant branch of the angular equation recovers exactly the singular
/// solution amplitude for `s = 2`.
pub fn constant_solution_check(n: f64, p: f64) -> Result<f64> {
    let p_s = sobolev_exponent(n, 2.0);
    if !(p > p_s) {
        return Err(Error::domain(format!(
            "constant angular solution requires p > p_S(n, 2) = {p_s}"
        )));
    }
    let coeffs = angular_coefficients(n, p)?;
    Ok(coeffs.beta.powf(1.0 / (p - 1.0)))
}

/// The sign triple `(p - 1, p alpha - n(n-4)/2, p beta - n^2 (n-4)^2 / 16)`.
/// All three positive forces triviality of stable homogeneous solutions.
pub fn stability_triple(n: f64, p: f64) -> Result<(f64, f64, f64)> {
    let c = angular_coefficients(n, p)?;
    Ok((
        p - 1.0,
        p * c.alpha - n * (n - 4.0) / 2.0,
        p * c.beta - n * n * (n - 4.0) * (n - 4.0) / 16.0,
    ))
}

/// Second-order specialization: the pair
/// `(p - 1, p beta_1 - (n-2)^2/4)` with `beta_1` the power-law multiplier
/// at `2/(p-1)` for `s = 1`.
pub fn stability_pair_s1(n: f64, p: f64) -> Result<(f64, f64)> {
    if !(p > 1.0) {
        return Err(Error::domain("exponent p must exceed 1"));
    }
    let beta1 = power_law_multiplier(n, 1.0, 2.0 / (p - 1.0))?;
    Ok((p - 1.0, p * beta1 - (n - 2.0) * (n - 2.0) / 4.0))
}

/// Rayleigh quotient of the test perturbation
/// `phi = r^{-(n-2s)/2} eta_eps(r)` against the singular solution, reduced
/// to one dimension in `x = ln r`. With `eta` log-linear the integrands are
/// piecewise polynomial; corner contributions of `eta''` are dropped (the
/// ramps are integrated in closed form piece by piece).
///
/// `s = 1`: `Q / omega = int (gamma eta - eta')^2 dx - p lam int eta^2 dx`
/// with `gamma = (n-2)/2`.
/// `s = 2`: `Q / omega = int (-(n(n-4)/4) eta + 2 eta')^2 dx - p lam int eta^2 dx`.
pub fn singular_instability_probe(
    n: f64,
    s: f64,
    p: f64,
    cutoff: &CutoffSpec,
) -> Result<ProbeResult> {
    if s != 1.0 && s != 2.0 {
        return Err(Error::unsupported("the probe covers s = 1, 2 only"));
    }
    let params = ProblemParams::new(n, s, p)?;
    // validates p > p_S and beta_p in range
    let sing = make_singular(&params, &[1.0])?;
    let lam = sing.amplitude.powf(p - 1.0);
    let omega = sphere_area(n)?;

    let eps = cutoff.epsilon;
    if !(eps < 0.5) {
        return Err(Error::domain("cutoff epsilon must be below 0.5 so the ramps are disjoint"));
    }
    let ln2 = std::f64::consts::LN_2;
    // pieces in x = ln r: rising ramp, plateau, falling ramp
    let x0 = (eps / 2.0).ln();
    let x1 = eps.ln();
    let x2 = -eps.ln();
    let x3 = x2 + ln2;
    let eta = |x: f64| -> (f64, f64) {
        if x < x1 {
            ((x - x0) / ln2, 1.0 / ln2)
        } else if x <= x2 {
            (1.0, 0.0)
        } else {
            ((x3 - x) / ln2, -1.0 / ln2)
        }
    };
    let seminorm_density: Box<dyn Fn(f64) -> f64> = if s == 1.0 {
        let gamma = (n - 2.0) / 2.0;
        Box::new(move |x| {
            let (e, de) = eta(x);
            let t = gamma * e - de;
            t * t
        })
    } else {
        let cte = n * (n - 4.0) / 4.0;
        Box::new(move |x| {
            let (e, de) = eta(x);
            let t = -cte * e + 2.0 * de;
            t * t
        })
    };
    let eta_sq = |x: f64| {
        let (e, _) = eta(x);
        e * e
    };
    let pieces = [(x0, x1), (x1, x2), (x2, x3)];
    let mut seminorm = 0.0;
    let mut weight = 0.0;
    for &(a, b) in &pieces {
        seminorm += integrate(&*seminorm_density, a, b, 1e-12, 1e-14, 200)?;
        weight += integrate(eta_sq, a, b, 1e-12, 1e-14, 200)?;
    }
    let potential = p * lam * omega * weight;
    Ok(ProbeResult {
        q_value: omega * seminorm - potential,
        potential,
        hardy_weighted: omega * weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::jl_exponent_root;
    use crate::gamma::hardy_constant;
    use crate::singular::{is_singular_stable, unit_direction};

    #[test]
    fn coefficient_examples() {
        let c = angular_coefficients(13.0, 2.0).unwrap();
        assert_eq!(c.q, 4.0);
        assert_eq!(c.alpha, 58.0);
        assert_eq!(c.beta, 840.0);
        let c = angular_coefficients(13.0, 3.0).unwrap();
        assert_eq!(c.q, 2.0);
        assert_eq!(c.alpha, 46.0);
        assert_eq!(c.beta, 504.0);
    }

    #[test]
    fn beta_matches_the_multiplier() {
        for &(n, p) in &[(13.0, 2.0), (13.0, 3.5), (20.0, 2.2), (40.0, 1.5), (9.0, 10.0)] {
            let c = angular_coefficients(n, p).unwrap();
            let lam = power_law_multiplier(n, 2.0, c.q).unwrap();
            assert!((c.beta - lam).abs() <= 1e-12 * lam.abs().max(1.0), "({n},{p})");
        }
    }

    #[test]
    fn constant_branch_matches_singular_amplitude() {
        for &(n, p) in &[(13.0, 2.0), (20.0, 3.0), (15.0, 2.5)] {
            let amp = constant_solution_check(n, p).unwrap();
            let params = ProblemParams::new(n, 2.0, p).unwrap();
            let sing = make_singular(&params, &unit_direction(1)).unwrap();
            assert!((amp - sing.amplitude).abs() <= 1e-12 * amp, "({n},{p})");
            assert!((amp.powf(p - 1.0) - angular_coefficients(n, p).unwrap().beta).abs() < 1e-9);
        }
        assert!((constant_solution_check(13.0, 2.0).unwrap() - 840.0).abs() < 1e-9);
        let expect = 1792.0_f64.sqrt();
        assert!((constant_solution_check(20.0, 3.0).unwrap() - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn constant_branch_rejects_subcritical() {
        assert!(constant_solution_check(13.0, 1.5).is_err());
    }

    #[test]
    fn triple_examples() {
        let (c1, c2, c3) = stability_triple(13.0, 2.0).unwrap();
        assert_eq!(c1, 1.0);
        assert!((c2 - 57.5).abs() < 1e-12);
        assert!((c3 - 824.4375).abs() < 1e-10);
        assert!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0);
        // beyond the critical curve the third coefficient turns negative
        let (_, _, c3) = stability_triple(13.0, 29.0).unwrap();
        assert!(c3 < 0.0);
    }

    #[test]
    fn c3_flips_at_the_critical_exponent() {
        // below the critical exponent the singular solution is unstable,
        // so p * beta exceeds the Hardy constant and c3 is positive; the
        // sign flips to negative as p crosses the root
        let root = jl_exponent_root(13.0, 2.0).unwrap();
        let (_, _, lo) = stability_triple(13.0, root * (1.0 - 1e-6)).unwrap();
        let (_, _, hi) = stability_triple(13.0, root * (1.0 + 1e-6)).unwrap();
        assert!(lo > 0.0 && hi < 0.0, "lo {lo}, hi {hi}");
        // tight localization: sign change within 1e-9 of the root
        let (_, _, a) = stability_triple(13.0, root * (1.0 - 1e-10)).unwrap();
        let (_, _, b) = stability_triple(13.0, root * (1.0 + 1e-10)).unwrap();
        assert!(a >= 0.0 || b <= 0.0);
    }

    #[test]
    fn second_coefficient_sign_survey() {
        // finding: on the tested range the second coefficient stays positive
        // across (p_S, critical curve), sampled at several interior exponents
        for &n in &[13.0, 20.0, 30.0, 40.0, 50.0, 60.0] {
            let p_s = crate::exponents::sobolev_exponent(n, 2.0);
            let root = jl_exponent_root(n, 2.0).unwrap();
            for frac in [0.01, 0.25, 0.5, 0.75, 0.999] {
                let p = p_s + frac * (root - p_s);
                let (_, c2, _) = stability_triple(n, p).unwrap();
                assert!(c2 > 0.0, "c2 = {c2} at (n = {n}, p = {p})");
            }
        }
        // outside the theorem's range the sign is lost at large n
        let (_, c2, _) = stability_triple(60.0, 3.0).unwrap();
        assert!(c2 < 0.0);
    }

    #[test]
    fn s1_pair_flips_at_the_critical_exponent() {
        let root = jl_exponent_root(11.0, 1.0).unwrap();
        let (_, lo) = stability_pair_s1(11.0, root * (1.0 - 1e-6)).unwrap();
        let (_, hi) = stability_pair_s1(11.0, root * (1.0 + 1e-6)).unwrap();
        assert!(lo > 0.0 && hi < 0.0, "lo {lo}, hi {hi}");
    }

    #[test]
    fn probe_sign_straddles_the_critical_curve() {
        let cutoff = CutoffSpec::new(1e-3).unwrap();
        let below = singular_instability_probe(11.0, 1.0, 6.0, &cutoff).unwrap();
        assert!(below.q_value < 0.0, "Q = {}", below.q_value);
        let above = singular_instability_probe(11.0, 1.0, 7.0, &cutoff).unwrap();
        assert!(above.q_value > 0.0, "Q = {}", above.q_value);
    }

    #[test]
    fn probe_matches_stability_verdict_on_a_grid() {
        let cutoff = CutoffSpec::new(1e-3).unwrap();
        let cases = [
            (11.0, 1.0, 6.0),
            (11.0, 1.0, 7.5),
            (12.0, 1.0, 3.5),
            (12.0, 1.0, 5.0),
            (13.0, 2.0, 5.0),
            (13.0, 2.0, 29.0),
            (15.0, 2.0, 3.0),
            (15.0, 2.0, 12.0),
        ];
        for &(n, s, p) in &cases {
            let params = ProblemParams::new(n, s, p).unwrap();
            let (stable, _) = is_singular_stable(&params).unwrap();
            let probe = singular_instability_probe(n, s, p, &cutoff).unwrap();
            assert_eq!(
                probe.q_value > 0.0,
                stable,
                "probe {} vs verdict {stable} at ({n},{s},{p})",
                probe.q_value
            );
        }
    }

    #[test]
    fn probe_quotient_approaches_the_hardy_margin() {
        // the ramps add an O(1 / ln(1/eps)) excess to the quotient, so the
        // limit 1 - p lam / Lambda is reached only as eps shrinks
        let (n, s, p) = (11.0, 1.0, 9.0);
        let lam = power_law_multiplier(n, s, 2.0 * s / (p - 1.0)).unwrap();
        let hardy = hardy_constant(n, s).unwrap();
        let expect = 1.0 - p * lam / hardy;
        let quotient = |eps: f64| {
            let cutoff = CutoffSpec::new(eps).unwrap();
            let probe = singular_instability_probe(n, s, p, &cutoff).unwrap();
            probe.q_value / (hardy * probe.hardy_weighted)
        };
        let coarse = (quotient(1e-6) - expect).abs();
        let fine = (quotient(1e-30) - expect).abs();
        assert!(fine < coarse, "no improvement: {fine} vs {coarse}");
        assert!(fine < 0.05 * expect.abs(), "quotient error {fine} vs {expect}");
    }

    #[test]
    fn probe_rejects_bad_inputs() {
        let cutoff = CutoffSpec::new(1e-3).unwrap();
        assert!(singular_instability_probe(11.0, 1.5, 7.0, &cutoff).is_err());
        // subcritical exponent: no singular solution to probe
        assert!(singular_instability_probe(11.0, 1.0, 1.2, &cutoff).is_err());
        assert!(CutoffSpec::new(1.5).is_err());
    }
}
