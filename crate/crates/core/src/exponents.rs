//! Critical exponents and the classification of parameter triples `(n, s, p)`.
//!
//! Two thresholds organize the theory: the Sobolev exponent
//! `p_S(n, s) = (n+2s)/(n-2s)` and the Joseph-Lundgren-type exponent above
//! which the explicit singular solution becomes stable. The latter is
//! available in closed form for `s = 1, 2` and, for every order, as the root
//! of `p * lambda(n, s, 2s/(p-1)) = Lambda_{n,s}`.

use crate::error::{Error, Result};
use crate::gamma::{hardy_constant, power_law_multiplier};
use serde::Serialize;

/// Relative tolerance for detecting the critical equality `p = p_S`.
pub const CRITICAL_EQ_TOL: f64 = 1e-12;

/// Configuration record consumed by every module: dimension `n`, operator
/// order `s`, nonlinearity exponent `p`, component count `m`, and optional
/// per-component coupling coefficients `(alpha_i, beta_i)` of the generalized
/// right-hand side `|u|^{p-1} (alpha_i u_i^+ + beta_i u_i^-)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemParams {
    pub n: f64,
    pub s: f64,
    pub p: f64,
    pub m: usize,
    pub coupling: Option<Vec<(f64, f64)>>,
}

impl ProblemParams {
    pub fn new(n: f64, s: f64, p: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 2.0) {
            return Err(Error::domain(format!(
                "order must lie in (0, 2], got s = {s}"
            )));
        }
        if !(p > 1.0) {
            return Err(Error::domain(format!("exponent must satisfy p > 1, got {p}")));
        }
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::domain(format!("dimension must be positive, got {n}")));
        }
        Ok(ProblemParams { n, s, p, m: 1, coupling: None })
    }

    pub fn with_components(mut self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("component count m must be >= 1"));
        }
        self.m = m;
        Ok(self)
    }

    pub fn with_coupling(mut self, coupling: Vec<(f64, f64)>) -> Result<Self> {
        if coupling.len() != self.m {
            return Err(Error::domain(format!(
                "coupling list length {} does not match m = {}",
                coupling.len(),
                self.m
            )));
        }
        if coupling.iter().any(|&(a, b)| !(a > 0.0 && b > 0.0)) {
            return Err(Error::domain("coupling coefficients must be positive"));
        }
        self.coupling = Some(coupling);
        Ok(self)
    }

    /// Coupling pair for component `i` (defaults to `(1, 1)`).
    pub fn coupling_pair(&self, i: usize) -> (f64, f64) {
        self.coupling.as_ref().map_or((1.0, 1.0), |c| c[i])
    }

    /// Homogeneity exponent of the singular solution, `beta_p = 2s/(p-1)`.
    pub fn beta_p(&self) -> f64 {
        2.0 * self.s / (self.p - 1.0)
    }

    pub fn sobolev_exponent(&self) -> f64 {
        sobolev_exponent(self.n, self.s)
    }
}

/// Classification verdict for a parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeTag {
    SubcriticalTrivial,
    CriticalFiniteEnergy,
    SupercriticalTrivial,
    Unclassified,
}

impl RegimeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::SubcriticalTrivial => "subcritical-trivial",
            RegimeTag::CriticalFiniteEnergy => "critical-finite-energy",
            RegimeTag::SupercriticalTrivial => "supercritical-trivial",
            RegimeTag::Unclassified => "unclassified",
        }
    }
}

/// Regime tag together with the signed margin
/// `p * lambda(n, s, beta_p) - Lambda_{n,s}` (zero below criticality).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regime {
    pub tag: RegimeTag,
    pub margin: f64,
}

/// Sobolev critical exponent `(n+2s)/(n-2s)`, or `+inf` when `n <= 2s`.
pub fn sobolev_exponent(n: f64, s: f64) -> f64 {
    if n > 2.0 * s {
        (n + 2.0 * s) / (n - 2.0 * s)
    } else {
        f64::INFINITY
    }
}

/// Joseph-Lundgren exponent in closed form, `s = 1` or `s = 2` only.
///
/// `s = 1`: finite for `n >= 11`; `s = 2`: finite for `n >= 13`.
pub fn jl_exponent_closed_form(n: f64, s: f64) -> Result<f64> {
    if s == 1.0 {
        if n <= 10.0 {
            return Ok(f64::INFINITY);
        }
        let num = (n - 2.0).powi(2) - 4.0 * n + 8.0 * (n - 1.0).sqrt();
        Ok(num / ((n - 2.0) * (n - 10.0)))
    } else if s == 2.0 {
        if n <= 12.0 {
            return Ok(f64::INFINITY);
        }
        let inner = (n * n + 4.0 - n * (n * n - 8.0 * n + 32.0).sqrt()).sqrt();
        Ok((n + 2.0 - inner) / (n - 6.0 - inner))
    } else {
        Err(Error::unsupported(format!(
            "closed-form Joseph-Lundgren exponent exists only for s = 1, 2 \
             (got s = {s}); use jl_exponent_root"
        )))
    }
}

/// Stability threshold of the singular solution for any order `s`:
/// the unique root `p*` of
/// `g(p) = p * lambda(n, s, 2s/(p-1)) - Lambda_{n,s}` on `(p_S, inf)`,
/// or `+inf` when `g > 0` up to the search ceiling `1e6`.
pub fn jl_exponent_root(n: f64, s: f64) -> Result<f64> {
    if !(n > 2.0 * s) {
        return Err(Error::domain(format!(
            "jl_exponent_root requires n > 2s, got n = {n}, s = {s}"
        )));
    }
    let hardy = hardy_constant(n, s)?;
    let p_s = sobolev_exponent(n, s);
    let g = |p: f64| -> f64 {
        let beta = 2.0 * s / (p - 1.0);
        // beta in (0, (n-2s)/2) subset of the multiplier domain for p > p_S
        p * power_law_multiplier(n, s, beta).unwrap() - hardy
    };

    const CEILING: f64 = 1e6;
    let p_lo = p_s * (1.0 + 1e-9);
    if p_lo >= CEILING {
        return Ok(f64::INFINITY);
    }
    // log-spaced scan for a sign change, then bisection
    let steps = 2000usize;
    let log_lo = p_lo.ln();
    let log_hi = CEILING.ln();
    let mut prev_p = p_lo;
    let mut prev_g = g(p_lo);
    if prev_g <= 0.0 {
        // g > 0 near p_S by construction; a nonpositive value this close to
        // the bracket end means the root is at the boundary resolution
        return Ok(p_lo);
    }
    let mut bracket = None;
    for k in 1..=steps {
        let p = (log_lo + (log_hi - log_lo) * k as f64 / steps as f64).exp();
        let gv = g(p);
        if gv <= 0.0 {
            bracket = Some((prev_p, p));
            break;
        }
        prev_p = p;
        prev_g = gv;
    }
    let _ = prev_g;
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(f64::INFINITY);
    };
    // bisection to 1e-11 relative
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-11 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The Gamma-ratio instability condition of the classification theorem:
/// returns whether `p * lambda(n, s, beta_p) > Lambda_{n,s}` together with
/// the signed margin. True means stable-outside-a-compact solutions are
/// trivial at this supercritical exponent.
pub fn fractional_condition(params: &ProblemParams) -> Result<(bool, f64)> {
    let (n, s, p) = (params.n, params.s, params.p);
    if !(n > 2.0 * s) {
        return Err(Error::domain(format!(
            "fractional condition requires n > 2s, got n = {n}, s = {s}"
        )));
    }
    let beta = params.beta_p();
    // power_law_multiplier rejects beta outside (0, n-2s), naming the bound
    let lam = power_law_multiplier(n, s, beta)?;
    let hardy = hardy_constant(n, s)?;
    let margin = p * lam - hardy;
    Ok((margin > 0.0, margin))
}

/// Classify a parameter triple into the theorem's regimes.
pub fn classify(params: &ProblemParams) -> Result<Regime> {
    let (n, s, p) = (params.n, params.s, params.p);
    if !(n > 2.0 * s) {
        return Err(Error::domain(format!(
            "classification requires n > 2s, got n = {n}, s = {s}"
        )));
    }
    let p_s = sobolev_exponent(n, s);
    if p_s.is_finite() && (p - p_s).abs() <= CRITICAL_EQ_TOL * p_s.max(p) {
        return Ok(Regime { tag: RegimeTag::CriticalFiniteEnergy, margin: 0.0 });
    }
    if p < p_s {
        return Ok(Regime { tag: RegimeTag::SubcriticalTrivial, margin: 0.0 });
    }
    let (holds, margin) = fractional_condition(params)?;
    if holds {
        Ok(Regime { tag: RegimeTag::SupercriticalTrivial, margin })
    } else {
        Ok(Regime { tag: RegimeTag::Unclassified, margin })
    }
}

/// Row-major grid of regime tags over an `(n, p)` window at fixed `s`.
/// Rows iterate `n`, columns iterate `p`; cell centers are the sample points.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagram {
    pub s: f64,
    pub n_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub tags: Vec<RegimeTag>,
}

impl PhaseDiagram {
    pub fn tag_at(&self, i_n: usize, j_p: usize) -> RegimeTag {
        self.tags[i_n * self.p_values.len() + j_p]
    }
}

pub fn phase_diagram(
    n_range: (f64, f64),
    p_range: (f64, f64),
    s: f64,
    resolution: (usize, usize),
) -> Result<PhaseDiagram> {
    let (n_res, p_res) = resolution;
    if n_res < 2 || p_res < 2 {
        return Err(Error::domain("phase diagram resolution must be >= 2 per axis"));
    }
    if !(n_range.0 < n_range.1 && p_range.0 < p_range.1) {
        return Err(Error::domain("phase diagram ranges must be nonempty"));
    }
    let n_values: Vec<f64> = grid(n_range, n_res);
    let p_values: Vec<f64> = grid(p_range, p_res);
    let mut tags = Vec::with_capacity(n_res * p_res);
    for &n in &n_values {
        for &p in &p_values {
            let params = ProblemParams::new(n, s, p)?;
            tags.push(classify(&params)?.tag);
        }
    }
    Ok(PhaseDiagram { s, n_values, p_values, tags })
}

fn grid((lo, hi): (f64, f64), count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sobolev_values() {
        assert_eq!(sobolev_exponent(3.0, 1.0), 5.0);
        assert_eq!(sobolev_exponent(2.0, 1.0), f64::INFINITY);
        assert_eq!(sobolev_exponent(5.0, 2.0), 9.0);
    }

    #[test]
    fn jl_closed_form_values() {
        assert_eq!(jl_exponent_closed_form(10.0, 1.0).unwrap(), f64::INFINITY);
        let p11 = jl_exponent_closed_form(11.0, 1.0).unwrap();
        let exact = (37.0 + 8.0 * 10.0_f64.sqrt()) / 9.0;
        assert!((p11 - exact).abs() < 1e-13);
        assert_eq!(jl_exponent_closed_form(12.0, 2.0).unwrap(), f64::INFINITY);
        let p13 = jl_exponent_closed_form(13.0, 2.0).unwrap();
        assert!((p13 - 28.172).abs() < 5e-3, "got {p13}");
        assert!(jl_exponent_closed_form(13.0, 0.5).is_err());
    }

    #[test]
    fn jl_root_matches_closed_form() {
        for n in [11, 14, 20, 40] {
            let root = jl_exponent_root(n as f64, 1.0).unwrap();
            let closed = jl_exponent_closed_form(n as f64, 1.0).unwrap();
            assert!(
                (root - closed).abs() / closed < 1e-9,
                "s=1 n={n}: root {root} vs closed {closed}"
            );
        }
        for n in [13, 17, 25, 40] {
            let root = jl_exponent_root(n as f64, 2.0).unwrap();
            let closed = jl_exponent_closed_form(n as f64, 2.0).unwrap();
            assert!(
                (root - closed).abs() / closed < 1e-9,
                "s=2 n={n}: root {root} vs closed {closed}"
            );
        }
    }

    #[test]
    fn jl_root_infinite_when_condition_never_flips() {
        // limit of p*lambda as p -> inf is pi/2 > Lambda_{3,1/2} = 2/pi
        assert_eq!(jl_exponent_root(3.0, 0.5).unwrap(), f64::INFINITY);
        assert_eq!(jl_exponent_root(10.0, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(jl_exponent_root(12.0, 2.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn jl_root_residual_at_root() {
        let root = jl_exponent_root(13.0, 2.0).unwrap();
        let q = 4.0 / (root - 1.0);
        let lhs = root * q * (q + 2.0) * (11.0 - q) * (9.0 - q);
        assert!((lhs - 855.5625).abs() < 1e-6, "residual {lhs}");
    }

    #[test]
    fn jl_monotone_nonincreasing_in_n() {
        let mut prev = jl_exponent_closed_form(11.0, 1.0).unwrap();
        for n in 12..=60 {
            let v = jl_exponent_closed_form(n as f64, 1.0).unwrap();
            assert!(v <= prev * (1.0 + 1e-12), "s=1 increases at n={n}");
            prev = v;
        }
        let mut prev = jl_exponent_closed_form(13.0, 2.0).unwrap();
        for n in 14..=60 {
            let v = jl_exponent_closed_form(n as f64, 2.0).unwrap();
            assert!(v <= prev * (1.0 + 1e-12), "s=2 increases at n={n}");
            prev = v;
        }
    }

    #[test]
    fn fractional_condition_straddles_jl() {
        let below = ProblemParams::new(11.0, 1.0, 6.9).unwrap();
        let above = ProblemParams::new(11.0, 1.0, 7.0).unwrap();
        assert!(fractional_condition(&below).unwrap().0);
        assert!(!fractional_condition(&above).unwrap().0);
        let frac = ProblemParams::new(3.0, 0.5, 7.0).unwrap();
        assert!(fractional_condition(&frac).unwrap().0);
    }

    #[test]
    fn fractional_condition_single_sign_change() {
        // margin flips exactly once in p on (p_S, inf) when the root is finite
        let root = jl_exponent_root(11.0, 1.0).unwrap();
        let mut flips = 0;
        let mut prev = None;
        let p_s = sobolev_exponent(11.0, 1.0);
        for k in 0..400 {
            let p = p_s * 1.0001 * (1e3_f64 / (p_s * 1.0001)).powf(k as f64 / 399.0);
            let params = ProblemParams::new(11.0, 1.0, p).unwrap();
            let sign = fractional_condition(&params).unwrap().1 > 0.0;
            if let Some(prev_sign) = prev {
                if prev_sign != sign {
                    flips += 1;
                    assert!(prev.unwrap() && !sign, "must flip from true to false");
                }
            }
            prev = Some(sign);
            if sign != (p < root) {
                panic!("sign inconsistent with root at p = {p}");
            }
        }
        assert_eq!(flips, 1);
    }

    #[test]
    fn classify_examples() {
        let sub = ProblemParams::new(3.0, 1.0, 2.0).unwrap();
        assert_eq!(classify(&sub).unwrap().tag, RegimeTag::SubcriticalTrivial);

        let sup = ProblemParams::new(11.0, 1.0, 3.0).unwrap().with_components(2).unwrap();
        assert_eq!(classify(&sup).unwrap().tag, RegimeTag::SupercriticalTrivial);

        let un = ProblemParams::new(13.0, 1.0, 3.0).unwrap();
        assert_eq!(classify(&un).unwrap().tag, RegimeTag::Unclassified);

        let crit = ProblemParams::new(4.0, 1.0, 3.0).unwrap();
        assert_eq!(classify(&crit).unwrap().tag, RegimeTag::CriticalFiniteEnergy);
    }

    #[test]
    fn classify_consistent_with_condition() {
        for &(n, s, p) in &[
            (11.0, 1.0, 2.0),
            (11.0, 1.0, 6.5),
            (11.0, 1.0, 8.0),
            (13.0, 2.0, 5.0),
            (13.0, 2.0, 30.0),
            (5.0, 0.75, 4.0),
        ] {
            let params = ProblemParams::new(n, s, p).unwrap();
            let regime = classify(&params).unwrap();
            let p_s = sobolev_exponent(n, s);
            if regime.tag == RegimeTag::SupercriticalTrivial {
                assert!(p > p_s);
                assert!(regime.margin > 0.0);
                assert!(fractional_condition(&params).unwrap().0);
            }
            if regime.tag == RegimeTag::Unclassified {
                assert!(regime.margin <= 0.0);
            }
        }
    }

    #[test]
    fn phase_diagram_boundary_matches_closed_forms() {
        let pd = phase_diagram((3.0, 15.0), (1.1, 10.0), 1.0, (13, 90)).unwrap();
        // at each n with finite p_c, the supercritical->unclassified transition
        // must bracket the closed-form value to one cell width
        let cell = pd.p_values[1] - pd.p_values[0];
        for (i, &n) in pd.n_values.iter().enumerate() {
            let pc = jl_exponent_closed_form(n, 1.0).unwrap();
            if !pc.is_finite() || pc > 10.0 {
                continue;
            }
            for j in 0..pd.p_values.len() - 1 {
                let here = pd.tag_at(i, j);
                let next = pd.tag_at(i, j + 1);
                if here == RegimeTag::SupercriticalTrivial && next == RegimeTag::Unclassified {
                    let edge = pd.p_values[j];
                    assert!(
                        (edge - pc).abs() <= 1.5 * cell,
                        "n={n}: transition at {edge}, closed form {pc}"
                    );
                }
            }
        }
    }

    #[test]
    fn phase_diagram_single_cell() {
        let pd = phase_diagram((3.9, 4.1), (2.9, 3.1), 1.0, (3, 3)).unwrap();
        assert_eq!(pd.tag_at(1, 1), RegimeTag::CriticalFiniteEnergy);
    }

    proptest::proptest! {
        #[test]
        fn supercritical_tag_follows_the_condition(
            n in 3.0_f64..40.0,
            s in 0.1_f64..2.0,
            step in 0.05_f64..10.0,
        ) {
            proptest::prop_assume!(n > 2.0 * s + 0.2);
            let p = sobolev_exponent(n, s) + step;
            let params = ProblemParams::new(n, s, p).unwrap();
            let (holds, margin) = fractional_condition(&params).unwrap();
            let regime = classify(&params).unwrap();
            let expect = if holds {
                RegimeTag::SupercriticalTrivial
            } else {
                RegimeTag::Unclassified
            };
            proptest::prop_assert_eq!(regime.tag, expect);
            proptest::prop_assert!(holds == (margin > 0.0));
        }

        #[test]
        fn sobolev_exponent_decreases_in_n(
            n in 2.1_f64..60.0,
            s in 0.1_f64..2.0,
            bump in 0.1_f64..5.0,
        ) {
            proptest::prop_assume!(n > 2.0 * s + 0.1);
            let lo = sobolev_exponent(n, s);
            let hi = sobolev_exponent(n + bump, s);
            proptest::prop_assert!(hi < lo);
        }
    }
}
