//! Monotonicity energies along radial solutions centered at the origin.
//!
//! `E_1` (second order) and `E_2` (fourth order) are rescaled ball energies
//! plus boundary correctors; both are nondecreasing in the radius along
//! solutions and constant exactly on the homogeneous ones. The sphere
//! integrals reduce to point evaluations through the surface area
//! `omega = sphere_area(n)`, and the `d/dlambda` bracket terms of `E_2`
//! expand analytically via
//! `d/dl [l^a int_{bd B_l} g] = omega l^{a+n-2} ((a+n-1) g(l) + l g'(l))`.

use crate::error::{Error, Result};
use crate::gamma::sphere_area;
use crate::quad::integrate;
use crate::radial::{RadialSolution, SamplePoint};
use crate::singular::GrowthKind;
use serde::Serialize;
use std::io::Write;

const QUAD_REL: f64 = 1e-10;
const QUAD_ABS: f64 = 1e-13;
const QUAD_MAX: usize = 2000;

/// Sampled energy curve with derivative diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyCurve {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub fd_derivative: Vec<f64>,
    /// Boundary-integral right-hand side of the derivative identity
    /// (`s = 1`) or the lower-bound integrand (`s = 2`).
    pub identity_rhs: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Grid indices where the one-sided monotonicity bound fails.
    pub violations: Vec<usize>,
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn check_s(sol: &RadialSolution, s: f64, what: &str) -> Result<()> {
    if sol.params.s != s {
        return Err(Error::domain(format!(
            "{what} requires s = {s}, got s = {}",
            sol.params.s
        )));
    }
    Ok(())
}

fn check_lambda(sol: &RadialSolution, lam: f64) -> Result<()> {
    if sol.power_law.is_some() {
        if lam > 0.0 {
            return Ok(());
        }
        return Err(Error::domain("lambda must be positive"));
    }
    if !(lam > 0.0 && lam <= sol.r_max()) {
        return Err(Error::domain(format!(
            "lambda {lam} outside covered range (0, {}]",
            sol.r_max()
        )));
    }
    Ok(())
}

/// `int_0^lam density(sample(r)) r^{n-1} dr`, by adaptive quadrature for
/// computed trajectories and in closed form for power-law profiles (where
/// the density is a pure power `coeff * r^{-e}` supplied by the caller).
fn interior_integral(
    sol: &RadialSolution,
    lam: f64,
    density: &dyn Fn(&SamplePoint) -> f64,
    power_coeff_exp: Option<(f64, f64)>,
) -> Result<f64> {
    if sol.power_law.is_some() {
        let (coeff, e) = power_coeff_exp.expect("closed form required for power-law profiles");
        let sigma = sol.params.n - e;
        if sigma <= 0.0 {
            return Err(Error::domain(format!(
                "interior integral diverges at the origin: exponent {sigma} <= 0"
            )));
        }
        return Ok(coeff * lam.powf(sigma) / sigma);
    }
    let n = sol.params.n;
    integrate(
        |r| {
            if r == 0.0 {
                return 0.0;
            }
            let s = sol.sample(r).expect("quadrature node within range");
            density(&s) * r.powf(n - 1.0)
        },
        0.0,
        lam,
        QUAD_REL,
        QUAD_ABS,
        QUAD_MAX,
    )
}

/// The second-order energy
/// `E_1 = l^{2(p+1)/(p-1)-n} int_{B_l} (1/2 sum |grad u_i|^2 - |u|^{p+1}/(p+1))
///  + (p-1)^{-1} l^{2(p+1)/(p-1)-n-1} int_{bd B_l} |u|^2`.
#[allow(non_snake_case)]
pub fn energy_E1(sol: &RadialSolution, lam: f64) -> Result<f64> {
    check_s(sol, 1.0, "energy_E1")?;
    check_lambda(sol, lam)?;
    let (n, p) = (sol.params.n, sol.params.p);
    let a = 2.0 * (p + 1.0) / (p - 1.0);
    let omega = sphere_area(n)?;

    let closed = sol.power_law.as_ref().map(|pl| {
        let amp2 = norm_sq(&pl.amplitudes);
        let coeff = 0.5 * pl.beta * pl.beta * amp2
            - amp2.sqrt().powf(p + 1.0) / (p + 1.0);
        (coeff, 2.0 * pl.beta + 2.0)
    });
    let interior = interior_integral(
        sol,
        lam,
        &|s| 0.5 * norm_sq(&s.du) - norm_sq(&s.u).sqrt().powf(p + 1.0) / (p + 1.0),
        closed,
    )?;

    let boundary = norm_sq(&sol.sample(lam)?.u);
    Ok(omega * (lam.powf(a - n) * interior + lam.powf(a - 2.0) * boundary / (p - 1.0)))
}

/// The derivative identity for `E_1`:
/// `dE_1/dl = l^{a-n+1} int_{bd B_l} sum (d_r u_i + 2 u_i / ((p-1) r))^2`
/// with `a = 2(p+1)/(p-1)`. Returns `(fd, rhs, |fd - rhs|)` where `fd` is a
/// Richardson-extrapolated central difference of `energy_E1` with step `h`.
#[allow(non_snake_case)]
pub fn energy_E1_derivative_identity(
    sol: &RadialSolution,
    lam: f64,
    h: f64,
) -> Result<(f64, f64, f64)> {
    check_s(sol, 1.0, "energy_E1_derivative_identity")?;
    check_lambda(sol, lam)?;
    if !(h > 0.0 && lam - h > 0.0 && (sol.power_law.is_some() || lam + h <= sol.r_max())) {
        return Err(Error::domain("step h must keep lambda +/- h in range"));
    }
    let (n, p) = (sol.params.n, sol.params.p);
    let a = 2.0 * (p + 1.0) / (p - 1.0);
    let omega = sphere_area(n)?;

    let fd = richardson_derivative(&|l| energy_E1(sol, l), lam, h)?;
    let s = sol.sample(lam)?;
    let flux: f64 = s
        .u
        .iter()
        .zip(&s.du)
        .map(|(&u, &du)| {
            let t = du + 2.0 * u / ((p - 1.0) * lam);
            t * t
        })
        .sum();
    let rhs = omega * lam.powf(a - 1.0) * flux;
    Ok((fd, rhs, (fd - rhs).abs()))
}

fn richardson_derivative(f: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let d = |hh: f64| -> Result<f64> { Ok((f(x + hh)? - f(x - hh)?) / (2.0 * hh)) };
    let d1 = d(h)?;
    let d2 = d(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

fn check_e2_hypotheses(sol: &RadialSolution) -> Result<()> {
    check_s(sol, 2.0, "energy_E2")?;
    let (n, p) = (sol.params.n, sol.params.p);
    if n < 5.0 {
        return Err(Error::domain("the fourth-order energy requires n >= 5"));
    }
    if !(p > (n + 4.0) / (n - 4.0)) {
        return Err(Error::domain(format!(
            "the fourth-order energy requires p > (n+4)/(n-4) = {}",
            (n + 4.0) / (n - 4.0)
        )));
    }
    Ok(())
}

/// `G(l) = sum (4 u_i / ((p-1) l) + du_i)^2` and its derivative in `l`,
/// using `u'' = w - (n-1) u'/r` on the boundary sphere.
fn flux_g(sol: &RadialSolution, lam: f64) -> Result<(f64, f64)> {
    let (n, p) = (sol.params.n, sol.params.p);
    let c = 4.0 / (p - 1.0);
    let s = sol.sample(lam)?;
    let w = s.w.as_ref().expect("s = 2 sample carries w");
    let mut g = 0.0;
    let mut gp = 0.0;
    for i in 0..s.u.len() {
        let t = c * s.u[i] / lam + s.du[i];
        let ddu = w[i] - (n - 1.0) * s.du[i] / lam;
        let tp = c * s.du[i] / lam - c * s.u[i] / (lam * lam) + ddu;
        g += t * t;
        gp += 2.0 * t * tp;
    }
    Ok((g, gp))
}

/// The fourth-order energy of the system, all boundary `d/dlambda` brackets
/// expanded analytically. For radial data the two tangential-gradient groups
/// vanish identically and are never added. A positive `h` triggers a
/// finite-difference cross-check of the bracket expansion; disagreement
/// beyond 1e-6 relative is reported as an error.
#[allow(non_snake_case)]
pub fn energy_E2(sol: &RadialSolution, lam: f64, h: f64) -> Result<f64> {
    check_e2_hypotheses(sol)?;
    check_lambda(sol, lam)?;
    let (n, p) = (sol.params.n, sol.params.p);
    let a2 = 4.0 * (p + 1.0) / (p - 1.0);
    let q8 = 8.0 / (p - 1.0);
    let omega = sphere_area(n)?;
    let c = -(4.0 / (p - 1.0)) * ((p + 3.0) / (p - 1.0) - n);

    let closed = sol.power_law.as_ref().map(|pl| {
        let amp2 = norm_sq(&pl.amplitudes);
        let wc = pl.beta * (pl.beta + 2.0 - n);
        let coeff = 0.5 * wc * wc * amp2 - amp2.sqrt().powf(p + 1.0) / (p + 1.0);
        (coeff, 2.0 * pl.beta + 4.0)
    });
    let interior = interior_integral(
        sol,
        lam,
        &|s| {
            let w = s.w.as_ref().expect("s = 2 sample carries w");
            0.5 * norm_sq(w) - norm_sq(&s.u).sqrt().powf(p + 1.0) / (p + 1.0)
        },
        closed,
    )?;
    let t1 = lam.powf(a2 - n) * omega * interior;

    let s = sol.sample(lam)?;
    let u2 = norm_sq(&s.u);
    let u_du: f64 = s.u.iter().zip(&s.du).map(|(&u, &du)| u * du).sum();
    let t2 = c * omega * lam.powf(q8) * u2;
    let t3 = c * omega * lam.powf(q8) * ((q8 + 1.0) * u2 + 2.0 * lam * u_du);

    let (g, gp) = flux_g(sol, lam)?;
    let t4 = 0.5 * omega * lam.powf(q8 + 2.0) * (q8 * g + lam * gp);

    if h > 0.0 {
        let bracket = |l: f64| -> Result<f64> {
            let sp = sol.sample(l)?;
            let (gl, _) = flux_g(sol, l)?;
            Ok(c * omega * l.powf(q8 + 1.0) * norm_sq(&sp.u)
                + 0.5 * lam.powf(3.0) * omega * l.powf(q8 + 1.0 + 2.0 - 3.0) * gl)
        };
        // d/dl at l = lam of the two bracket groups, fd vs analytic
        let fd = richardson_derivative(&bracket, lam, h)?;
        let analytic = t3 + t4;
        let denom = analytic.abs().max(t1.abs()).max(1.0);
        if (fd - analytic).abs() > 1e-6 * denom {
            return Err(Error::domain(format!(
                "bracket cross-check failed: analytic {analytic}, finite difference {fd}"
            )));
        }
    }
    Ok(t1 + t2 + t3 + t4)
}

/// Finite-difference derivative of `E_2` and the lower-bound integrand
/// `omega l^{8/(p-1)+1} G(l)` of the monotonicity theorem.
#[allow(non_snake_case)]
pub fn energy_E2_derivative_bound(
    sol: &RadialSolution,
    lam: f64,
    h: f64,
) -> Result<(f64, f64)> {
    check_e2_hypotheses(sol)?;
    check_lambda(sol, lam)?;
    if !(h > 0.0 && lam - h > 0.0 && (sol.power_law.is_some() || lam + h <= sol.r_max())) {
        return Err(Error::domain("step h must keep lambda +/- h in range"));
    }
    let q8 = 8.0 / (sol.params.p - 1.0);
    let omega = sphere_area(sol.params.n)?;
    let fd = richardson_derivative(&|l| energy_E2(sol, l, 0.0), lam, h)?;
    let (g, _) = flux_g(sol, lam)?;
    Ok((fd, omega * lam.powf(q8 + 1.0) * g))
}

/// Evaluate the energy of the appropriate order on a grid, with
/// finite-difference derivatives, identity right-hand sides, residuals,
/// and flagged monotonicity violations.
pub fn energy_scan(sol: &RadialSolution, lambdas: &[f64]) -> Result<EnergyCurve> {
    if lambdas.len() < 2 {
        return Err(Error::domain("energy scan needs at least 2 grid points"));
    }
    for w in lambdas.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::domain("lambda grid must be strictly increasing"));
        }
    }
    let s_order = sol.params.s;
    let eval = |l: f64| -> Result<f64> {
        if s_order == 1.0 {
            energy_E1(sol, l)
        } else {
            energy_E2(sol, l, 0.0)
        }
    };
    let mut curve = EnergyCurve {
        lambdas: lambdas.to_vec(),
        values: Vec::new(),
        fd_derivative: Vec::new(),
        identity_rhs: Vec::new(),
        residuals: Vec::new(),
        violations: Vec::new(),
    };
    for &l in lambdas {
        check_lambda(sol, l)?;
        curve.values.push(eval(l)?);
        let h = 1e-4 * l;
        let in_range = sol.power_law.is_some() || (l + h <= sol.r_max() && l - h > 0.0);
        let (fd, rhs) = if in_range {
            if s_order == 1.0 {
                let (fd, rhs, _) = energy_E1_derivative_identity(sol, l, h)?;
                (fd, rhs)
            } else {
                energy_E2_derivative_bound(sol, l, h)?
            }
        } else {
            // one-sided difference at the grid edge
            let l2 = if l + h > sol.r_max() { l - h } else { l + h };
            let fd = (eval(l2)? - eval(l)?) / (l2 - l);
            (fd, f64::NAN)
        };
        curve.fd_derivative.push(fd);
        curve.identity_rhs.push(rhs);
        curve.residuals.push(if s_order == 1.0 { (fd - rhs).abs() } else { fd - rhs });
    }
    for k in 0..lambdas.len() - 1 {
        if curve.values[k + 1] < curve.values[k] - 1e-8 * (1.0 + curve.values[k].abs()) {
            curve.violations.push(k);
        }
    }
    Ok(curve)
}

/// Scaling identity `E(u, r * lam) = E(blow_down(u, lam), r)`; returns the
/// normalized residual.
pub fn scale_invariance_check(sol: &RadialSolution, lam: f64, r: f64) -> Result<f64> {
    let eval = |s: &RadialSolution, l: f64| -> Result<f64> {
        if s.params.s == 1.0 {
            energy_E1(s, l)
        } else {
            energy_E2(s, l, 0.0)
        }
    };
    let lhs = eval(sol, r * lam)?;
    let scaled = sol.blow_down(lam)?;
    let rhs = eval(&scaled, r)?;
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}

/// Least-squares slope of `log int_{B_R} density` against `log R`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthSlope {
    pub slope: f64,
    /// Set when the integrals vanish (zero solution) and no slope exists.
    pub degenerate: bool,
}

/// Fitted growth rate of the `L^{p+1}` or `L^2` ball integral.
pub fn growth_slope(sol: &RadialSolution, r_grid: &[f64], which: GrowthKind) -> Result<GrowthSlope> {
    if r_grid.len() < 4 {
        return Err(Error::domain("growth fit needs at least 4 radii"));
    }
    let (n, p) = (sol.params.n, sol.params.p);
    let omega = sphere_area(n)?;
    let density: Box<dyn Fn(&SamplePoint) -> f64> = match which {
        GrowthKind::Lp1 => Box::new(move |s: &SamplePoint| norm_sq(&s.u).sqrt().powf(p + 1.0)),
        GrowthKind::L2 => Box::new(|s: &SamplePoint| norm_sq(&s.u)),
        GrowthKind::GradSq => Box::new(|s: &SamplePoint| norm_sq(&s.du)),
    };
    let closed = sol.power_law.as_ref().map(|pl| {
        let amp = norm_sq(&pl.amplitudes).sqrt();
        match which {
            GrowthKind::Lp1 => (amp.powf(p + 1.0), (p + 1.0) * pl.beta),
            GrowthKind::L2 => (amp * amp, 2.0 * pl.beta),
            GrowthKind::GradSq => (pl.beta * pl.beta * amp * amp, 2.0 * pl.beta + 2.0),
        }
    });
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &r in r_grid {
        check_lambda(sol, r)?;
        let v = omega * interior_integral(sol, r, density.as_ref(), closed)?;
        if v > 0.0 {
            xs.push(r.ln());
            ys.push(v.ln());
        }
    }
    if xs.len() < 4 {
        return Ok(GrowthSlope { slope: 0.0, degenerate: true });
    }
    let nn = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / nn;
    let my = ys.iter().sum::<f64>() / nn;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(GrowthSlope { slope: num / den, degenerate: false })
}

impl EnergyCurve {
    /// CSV export, columns `lambda,E,dE_fd,identity_rhs,residual`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "lambda,E,dE_fd,identity_rhs,residual")?;
        for k in 0..self.lambdas.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.lambdas[k],
                self.values[k],
                self.fd_derivative[k],
                self.identity_rhs[k],
                self.residuals[k]
            )?;
        }
        Ok(())
    }
}
