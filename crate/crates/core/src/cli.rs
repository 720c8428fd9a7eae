//! Batch command-line front end: parameter parsing, experiment
//! orchestration, and CSV/JSON emission for every module.
//!
//! Exit codes: 0 success, 2 domain/convergence errors, 64 usage errors,
//! 74 I/O errors. Identical invocations produce byte-identical output.

use crate::angular::{
    angular_coefficients, constant_solution_check, singular_instability_probe, stability_pair_s1,
    stability_triple, CutoffSpec,
};
use crate::energy::{energy_scan, growth_slope, scale_invariance_check};
use crate::error::Error;
use crate::exponents::{
    classify, fractional_condition, jl_exponent_root, phase_diagram, sobolev_exponent,
    ProblemParams,
};
use crate::fractional::{
    hardy_integral_quadrature, kernel_monotonicity_gap, kernel_K, A_constant_quadrature,
    KernelQuery, QuadratureSpec,
};
use crate::gamma::{hardy_constant, power_law_multiplier};
use crate::quad::integrate;
use crate::radial::{solve_radial, RadialSolution, ShootingConfig};
use crate::singular::{is_singular_stable, make_singular, unit_direction, GrowthKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::PathBuf;

/// Environment variable naming the default directory for relative
/// `--output` paths.
pub const OUTPUT_DIR_ENV: &str = "LANE_EMDEN_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "lane-emden",
    about = "Numerical laboratory for coupled Lane-Emden systems",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output file; stdout when omitted. Relative paths resolve against
    /// $LANE_EMDEN_OUTPUT_DIR when set.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Critical exponents, Hardy constant, and optional classification.
    Exponents {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Regime tags over an (n, p) window at fixed s.
    PhaseDiagram {
        #[arg(long)]
        s: f64,
        /// n window as start:stop:count.
        #[arg(long = "n-range")]
        n_range: String,
        /// p window as start:stop:count.
        #[arg(long = "p-range")]
        p_range: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The explicit singular solution: amplitude, stability, growth laws.
    Singular {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value = "1")]
        m: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Radial shooting; emits the dense trajectory as CSV.
    Shoot {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        /// Component values at the origin, comma separated.
        #[arg(long, value_delimiter = ',')]
        a: Vec<f64>,
        /// Laplacian values at the origin (s = 2), comma separated.
        #[arg(long, value_delimiter = ',')]
        b: Option<Vec<f64>>,
        #[arg(long = "r-max", default_value = "10.0")]
        r_max: f64,
        #[arg(long = "rel-tol", default_value = "1e-10")]
        rel_tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Energy curve of the appropriate order along a solution.
    EnergyScan {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        /// Component values at the origin, comma separated; omit together
        /// with --homogeneous to scan the singular solution.
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        b: Option<Vec<f64>>,
        /// Scan the exact singular profile instead of shooting.
        #[arg(long, default_value = "false")]
        homogeneous: bool,
        /// Lambda grid as start:stop:count.
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Angular coefficients, stability signs, and the instability probe.
    Angular {
        #[arg(long)]
        n: f64,
        #[arg(long, default_value = "2.0")]
        s: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value = "1e-3")]
        epsilon: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sphere kernel values and the principal-value integrals.
    Kernel {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value = "0.0")]
        alpha: f64,
        #[arg(long, default_value = "0.0")]
        c: f64,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "rel-tol", default_value = "1e-8")]
        rel_tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the cross-module invariant suite and print a pass/fail table.
    Verify,
}

/// Which library operation each subcommand exercises; the test suite audits
/// that every public operation appears here.
pub fn operation_coverage() -> &'static [(&'static str, &'static str)] {
    &[
        ("sobolev_exponent", "exponents"),
        ("jl_exponent_closed_form", "exponents"),
        ("jl_exponent_root", "exponents"),
        ("fractional_condition", "exponents"),
        ("classify", "exponents"),
        ("hardy_constant", "exponents"),
        ("power_law_multiplier", "exponents"),
        ("phase_diagram", "phase-diagram"),
        ("make_singular", "singular"),
        ("is_singular_stable", "singular"),
        ("residual_local", "singular"),
        ("growth_integral", "singular"),
        ("solve_radial", "shoot"),
        ("RadialSolution::sample", "shoot"),
        ("RadialSolution::write_csv", "shoot"),
        ("RadialSolution::blow_down", "energy-scan"),
        ("RadialSolution::from_singular", "energy-scan"),
        ("energy_E1", "energy-scan"),
        ("energy_E1_derivative_identity", "energy-scan"),
        ("energy_E2", "energy-scan"),
        ("energy_E2_derivative_bound", "energy-scan"),
        ("energy_scan", "energy-scan"),
        ("scale_invariance_check", "verify"),
        ("growth_slope", "singular"),
        ("angular_coefficients", "angular"),
        ("constant_solution_check", "angular"),
        ("stability_triple", "angular"),
        ("stability_pair_s1", "angular"),
        ("singular_instability_probe", "angular"),
        ("kernel_K", "kernel"),
        ("kernel_monotonicity_gap", "kernel"),
        ("A_constant_quadrature", "kernel"),
        ("hardy_integral_quadrature", "kernel"),
        ("sphere_area", "exponents"),
        ("log_gamma", "exponents"),
        ("kappa_s", "exponents"),
        ("extension_weight_exponent", "exponents"),
        ("integrate", "kernel"),
    ]
}

/// JSON value for a float, spelling non-finite values as strings.
fn fnum(v: f64) -> Value {
    if v.is_nan() {
        Value::String("nan".into())
    } else if v == f64::INFINITY {
        Value::String("inf".into())
    } else if v == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else {
        json!(v)
    }
}

fn fmt_csv(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

fn parse_range(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::domain(format!(
            "range must be start:stop:count, got '{spec}'"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::domain(format!("bad range start '{}'", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| Error::domain(format!("bad range stop '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::domain(format!("bad range count '{}'", parts[2])))?;
    if count < 2 || !(start < stop) {
        return Err(Error::domain(
            "range needs start < stop and count >= 2 (endpoints inclusive)",
        ));
    }
    Ok((0..count)
        .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
        .collect())
}

fn resolve_output(path: &PathBuf) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.clone()
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), Error> {
    match &out.output {
        None => {
            let mut stdout = std::io::stdout();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            std::fs::write(resolve_output(path), text)?;
            Ok(())
        }
    }
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

/// Caveat line for the second-order remark dimension: the formulas place
/// n = 12 on the supercritical-trivial side of p = 3 even though some
/// statements of the remark stop at n < 12.
fn n12_note() -> &'static str {
    "at s = 1, p = 3 the threshold is p_c(12) = 3.9266 > 3, so n = 12 \
     classifies as supercritical-trivial; the first unclassified integer \
     dimension for p = 3 is n = 13"
}

fn cmd_exponents(n: f64, s: f64, p: Option<f64>, out: &OutputArgs) -> Result<(), Error> {
    let p_s = sobolev_exponent(n, s);
    let p_c = jl_exponent_root(n, s)?;
    let hardy = hardy_constant(n, s)?;
    let mut doc = Map::new();
    doc.insert("n".into(), fnum(n));
    doc.insert("s".into(), fnum(s));
    doc.insert("p_S".into(), fnum(p_s));
    doc.insert("p_c".into(), fnum(p_c));
    doc.insert("hardy".into(), fnum(hardy));
    let mut notes: Vec<Value> = Vec::new();
    if let Some(p) = p {
        let params = ProblemParams::new(n, s, p)?;
        let regime = classify(&params)?;
        let (holds, margin) = fractional_condition(&params)?;
        doc.insert("p".into(), fnum(p));
        doc.insert("beta_p".into(), fnum(params.beta_p()));
        doc.insert(
            "multiplier".into(),
            fnum(power_law_multiplier(n, s, params.beta_p()).unwrap_or(f64::NAN)),
        );
        doc.insert("regime".into(), Value::String(regime.tag.as_str().into()));
        doc.insert("margin".into(), fnum(regime.margin));
        doc.insert("condition_holds".into(), Value::Bool(holds));
        doc.insert("condition_margin".into(), fnum(margin));
        if s == 1.0 && n == 12.0 && p == 3.0 {
            notes.push(Value::String(n12_note().into()));
        }
    }
    doc.insert("notes".into(), Value::Array(notes));
    emit(out, &json_text(&Value::Object(doc)))
}

fn cmd_phase_diagram(
    s: f64,
    n_range: &str,
    p_range: &str,
    out: &OutputArgs,
) -> Result<(), Error> {
    let ns = parse_range(n_range)?;
    let ps = parse_range(p_range)?;
    let diagram = phase_diagram(
        (ns[0], *ns.last().unwrap()),
        (ps[0], *ps.last().unwrap()),
        s,
        (ns.len(), ps.len()),
    )?;
    let covers_remark =
        s == 1.0 && ns[0] <= 12.0 && *ns.last().unwrap() >= 12.0 && ps[0] <= 3.0
            && *ps.last().unwrap() >= 3.0;
    match out.format {
        Format::Csv => {
            let mut text = String::from("n,p,tag\n");
            for (i, &n) in diagram.n_values.iter().enumerate() {
                for (j, &p) in diagram.p_values.iter().enumerate() {
                    text.push_str(&format!(
                        "{},{},{}\n",
                        fmt_csv(n),
                        fmt_csv(p),
                        diagram.tag_at(i, j).as_str()
                    ));
                }
            }
            if covers_remark {
                text.push_str(&format!("# note: {}\n", n12_note()));
            }
            emit(out, &text)
        }
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("s".into(), fnum(s));
            doc.insert("n_values".into(), Value::Array(diagram.n_values.iter().map(|&v| fnum(v)).collect()));
            doc.insert("p_values".into(), Value::Array(diagram.p_values.iter().map(|&v| fnum(v)).collect()));
            doc.insert(
                "tags".into(),
                Value::Array(
                    diagram
                        .tags
                        .iter()
                        .map(|t| Value::String(t.as_str().into()))
                        .collect(),
                ),
            );
            let notes = if covers_remark {
                vec![Value::String(n12_note().into())]
            } else {
                Vec::new()
            };
            doc.insert("notes".into(), Value::Array(notes));
            emit(out, &json_text(&Value::Object(doc)))
        }
    }
}

fn cmd_singular(n: f64, s: f64, p: f64, m: usize, out: &OutputArgs) -> Result<(), Error> {
    let params = ProblemParams::new(n, s, p)?.with_components(m)?;
    let sing = make_singular(&params, &unit_direction(m))?;
    let (stable, margin) = is_singular_stable(&params)?;
    let residual = if s == 1.0 || s == 2.0 {
        let r = sing.residual_local(1.0)?;
        fnum(r.iter().map(|v| v.abs()).fold(0.0, f64::max))
    } else {
        Value::String("closed-form identity (nonlocal order)".into())
    };
    let mut growth = Map::new();
    for (name, kind) in [
        ("lp1", GrowthKind::Lp1),
        ("l2", GrowthKind::L2),
        ("grad_sq", GrowthKind::GradSq),
    ] {
        growth.insert(name.into(), fnum(sing.growth_exponent(kind)));
    }
    let doc = json!({
        "n": fnum(n), "s": fnum(s), "p": fnum(p), "m": m,
        "beta": fnum(sing.beta),
        "amplitude": fnum(sing.amplitude),
        "stable": stable,
        "margin": fnum(margin),
        "residual_at_r1": residual,
        "growth_exponents": Value::Object(growth),
    });
    emit(out, &json_text(&doc))
}

fn build_solution(
    n: f64,
    s: f64,
    p: f64,
    a: Option<&[f64]>,
    b: Option<&[f64]>,
    homogeneous: bool,
    r_max: f64,
    rel_tol: f64,
) -> Result<RadialSolution, Error> {
    if homogeneous {
        let params = ProblemParams::new(n, s, p)?;
        let sing = make_singular(&params, &unit_direction(1))?;
        return RadialSolution::from_singular(&sing, 1e-4 * r_max, r_max, 600);
    }
    let a = a.ok_or_else(|| Error::domain("--a is required unless --homogeneous is set"))?;
    let params = ProblemParams::new(n, s, p)?.with_components(a.len())?;
    let mut cfg = ShootingConfig::new(a.to_vec(), r_max);
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = (rel_tol * 1e-2).max(1e-14);
    if let Some(b) = b {
        cfg = cfg.with_init_w(b.to_vec());
    }
    solve_radial(&params, &cfg)
}

fn cmd_shoot(
    n: f64,
    s: f64,
    p: f64,
    a: &[f64],
    b: Option<&[f64]>,
    r_max: f64,
    rel_tol: f64,
    out: &OutputArgs,
) -> Result<(), Error> {
    let sol = build_solution(n, s, p, Some(a), b, false, r_max, rel_tol)?;
    let mut buf = Vec::new();
    sol.write_csv(&mut buf)?;
    if let Some(r) = sol.blow_up {
        buf.extend_from_slice(format!("# blow-up at r = {}\n", fmt_csv(r)).as_bytes());
    }
    emit(out, &String::from_utf8(buf).expect("csv is utf-8"))
}

fn cmd_energy_scan(
    n: f64,
    s: f64,
    p: f64,
    a: Option<&[f64]>,
    b: Option<&[f64]>,
    homogeneous: bool,
    lambda: &str,
    out: &OutputArgs,
) -> Result<(), Error> {
    let grid = parse_range(lambda)?;
    let r_hi = grid.last().unwrap() * 1.05;
    let sol = build_solution(n, s, p, a, b, homogeneous, r_hi, 1e-10)?;
    let curve = energy_scan(&sol, &grid)?;
    match out.format {
        Format::Csv => {
            let mut buf = Vec::new();
            curve.write_csv(&mut buf)?;
            emit(out, &String::from_utf8(buf).expect("csv is utf-8"))
        }
        Format::Json => {
            let doc = json!({
                "lambdas": curve.lambdas.iter().map(|&v| fnum(v)).collect::<Vec<_>>(),
                "values": curve.values.iter().map(|&v| fnum(v)).collect::<Vec<_>>(),
                "fd_derivative": curve.fd_derivative.iter().map(|&v| fnum(v)).collect::<Vec<_>>(),
                "identity_rhs": curve.identity_rhs.iter().map(|&v| fnum(v)).collect::<Vec<_>>(),
                "residuals": curve.residuals.iter().map(|&v| fnum(v)).collect::<Vec<_>>(),
                "violations": curve.violations,
            });
            emit(out, &json_text(&doc))
        }
    }
}

fn cmd_angular(n: f64, s: f64, p: f64, epsilon: f64, out: &OutputArgs) -> Result<(), Error> {
    let mut doc = Map::new();
    doc.insert("n".into(), fnum(n));
    doc.insert("s".into(), fnum(s));
    doc.insert("p".into(), fnum(p));
    if s == 2.0 {
        let c = angular_coefficients(n, p)?;
        doc.insert("q".into(), fnum(c.q));
        doc.insert("alpha".into(), fnum(c.alpha));
        doc.insert("beta".into(), fnum(c.beta));
        let (c1, c2, c3) = stability_triple(n, p)?;
        doc.insert(
            "stability_triple".into(),
            Value::Array(vec![fnum(c1), fnum(c2), fnum(c3)]),
        );
        if p > sobolev_exponent(n, 2.0) {
            doc.insert(
                "constant_amplitude".into(),
                fnum(constant_solution_check(n, p)?),
            );
        }
    } else if s == 1.0 {
        let (c1, c2) = stability_pair_s1(n, p)?;
        doc.insert(
            "stability_pair".into(),
            Value::Array(vec![fnum(c1), fnum(c2)]),
        );
    } else {
        return Err(Error::unsupported("angular analysis covers s = 1, 2"));
    }
    if p > sobolev_exponent(n, s) {
        let probe = singular_instability_probe(n, s, p, &CutoffSpec::new(epsilon)?)?;
        doc.insert(
            "probe".into(),
            json!({
                "epsilon": fnum(epsilon),
                "q_value": fnum(probe.q_value),
                "potential": fnum(probe.potential),
                "hardy_weighted": fnum(probe.hardy_weighted),
            }),
        );
    }
    emit(out, &json_text(&Value::Object(doc)))
}

fn cmd_kernel(
    n: f64,
    s: f64,
    alpha: f64,
    c: f64,
    p: Option<f64>,
    rel_tol: f64,
    out: &OutputArgs,
) -> Result<(), Error> {
    let quad = QuadratureSpec { rel_tol, ..QuadratureSpec::default() };
    let mut doc = Map::new();
    doc.insert("n".into(), fnum(n));
    doc.insert("s".into(), fnum(s));
    doc.insert("alpha".into(), fnum(alpha));
    doc.insert("c".into(), fnum(c));
    doc.insert(
        "kernel".into(),
        fnum(kernel_K(&KernelQuery { n, s, alpha, c, quad })?),
    );
    if let Some(p) = p {
        doc.insert("p".into(), fnum(p));
        doc.insert(
            "monotonicity_gap".into(),
            fnum(kernel_monotonicity_gap(n, s, p, c, &quad)?),
        );
        if s < 1.0 {
            let a_val = A_constant_quadrature(n, s, p, &quad)?;
            doc.insert("A_quadrature".into(), fnum(a_val));
            doc.insert(
                "A_closed_form".into(),
                fnum(power_law_multiplier(n, s, 2.0 * s / (p - 1.0))?),
            );
        }
    }
    if s < 1.0 {
        doc.insert(
            "hardy_quadrature".into(),
            fnum(hardy_integral_quadrature(n, s, &quad)?),
        );
        doc.insert("hardy_closed_form".into(), fnum(hardy_constant(n, s)?));
    }
    emit(out, &json_text(&Value::Object(doc)))
}

/// One named check of the verification suite.
struct Check {
    name: &'static str,
    pass: bool,
}

fn run_checks() -> Result<Vec<Check>, Error> {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, pass: bool| checks.push(Check { name, pass });

    // closed-form exponent thresholds
    let root = jl_exponent_root(11.0, 1.0)?;
    // p_c(11) = (37 + 8 sqrt(10)) / 9
    push("jl-root-matches-closed-form-s1", (root - 6.922024_586_816).abs() < 1e-5);
    push("jl-root-infinite-low-dimension", jl_exponent_root(10.0, 1.0)?.is_infinite());

    // multiplier product form and Hardy peak
    let lam = power_law_multiplier(9.0, 1.0, 3.0)?;
    push("multiplier-product-form", (lam - 3.0 * 4.0).abs() < 1e-12);
    let hardy = hardy_constant(9.0, 1.0)?;
    let peak = power_law_multiplier(9.0, 1.0, 3.5)?;
    push("hardy-is-the-multiplier-peak", (hardy - peak).abs() < 1e-10);

    // singular solution residual and stability flip
    let params = ProblemParams::new(5.0, 1.0, 3.0)?;
    let sing = make_singular(&params, &unit_direction(1))?;
    let res = sing.residual_local(2.0)?[0].abs();
    push("singular-residual-vanishes", res < 1e-10);
    push("singular-amplitude-sqrt2", (sing.amplitude - 2.0_f64.sqrt()).abs() < 1e-12);

    // bubble shooting against the closed form
    let bp = ProblemParams::new(3.0, 1.0, 5.0)?;
    let cfg = ShootingConfig::new(vec![3.0_f64.powf(0.25)], 10.0);
    let sol = solve_radial(&bp, &cfg)?;
    let mut worst: f64 = 0.0;
    for k in 0..=200 {
        let r = 10.0 * k as f64 / 200.0;
        let exact = 3.0_f64.powf(0.25) / (1.0 + r * r).sqrt();
        worst = worst.max((sol.sample(r)?.u[0] - exact).abs());
    }
    push("bubble-matches-closed-form", worst < 1e-6);

    // energy monotonicity and scale invariance on the bubble
    let grid: Vec<f64> = (0..20).map(|k| 0.5 + 7.0 * k as f64 / 19.0).collect();
    let curve = energy_scan(&sol, &grid)?;
    push("e1-monotone-on-bubble", curve.violations.is_empty());
    push(
        "e1-scale-invariance",
        scale_invariance_check(&sol, 2.0, 1.0)? < 1e-8,
    );

    // constant fourth-order energy on the singular solution
    let params2 = ProblemParams::new(13.0, 2.0, 2.0)?;
    let sing2 = make_singular(&params2, &unit_direction(1))?;
    let hom = RadialSolution::from_singular(&sing2, 1e-3, 50.0, 300)?;
    let e_a = crate::energy::energy_E2(&hom, 1.0, 0.0)?;
    let e_b = crate::energy::energy_E2(&hom, 10.0, 0.0)?;
    push("e2-constant-on-singular", (e_a - e_b).abs() < 1e-6 * e_a.abs());

    // growth slopes against the closed-form exponents
    let hom1 = RadialSolution::from_singular(&sing, 1e-3, 100.0, 300)?;
    let radii: Vec<f64> = (0..6).map(|k| 2.0_f64.powi(k)).collect();
    let slope = growth_slope(&hom1, &radii, GrowthKind::Lp1)?;
    push("growth-slope-lp1", (slope.slope - 1.0).abs() < 1e-6);

    // angular coefficient identity and probe sign
    let coeffs = angular_coefficients(13.0, 2.0)?;
    push("angular-beta-is-multiplier", (coeffs.beta - 840.0).abs() < 1e-10);
    let cutoff = CutoffSpec::new(1e-3)?;
    let below = singular_instability_probe(11.0, 1.0, 6.0, &cutoff)?;
    let above = singular_instability_probe(11.0, 1.0, 7.0, &cutoff)?;
    push("probe-straddles-critical-curve", below.q_value < 0.0 && above.q_value > 0.0);

    // kernel spot value and PV consistency
    let quad = QuadratureSpec::default();
    let k0 = kernel_K(&KernelQuery { n: 3.0, s: 0.5, alpha: 0.0, c: 0.0, quad })?;
    push("kernel-arctan-value", (k0 - std::f64::consts::PI / 4.0).abs() < 1e-10);
    let a_val = A_constant_quadrature(3.0, 0.5, 3.0, &quad)?;
    push("pv-matches-closed-form", (a_val - 0.5).abs() < 1e-3 * 0.5);
    let arc = integrate(|t| 1.0 / (1.0 + t * t), 0.0, 1.0, 1e-12, 1e-14, 200)?;
    push("quadrature-arctan", (arc - std::f64::consts::PI / 4.0).abs() < 1e-12);

    // classification of the remark family, caveat dimension included
    let tags: Vec<&str> = (4..=13)
        .map(|n| {
            let params = ProblemParams::new(n as f64, 1.0, 3.0)
                .and_then(|q| q.with_components(2))
                .unwrap();
            classify(&params).unwrap().tag.as_str()
        })
        .collect();
    push(
        "classification-remark-family",
        tags[0] == "critical-finite-energy"
            && tags[1..9].iter().all(|t| *t == "supercritical-trivial")
            && tags[9] == "unclassified",
    );
    Ok(checks)
}

fn cmd_verify() -> Result<i32, Error> {
    let checks = run_checks()?;
    let mut stdout = std::io::stdout();
    let mut failures = 0usize;
    for c in &checks {
        writeln!(stdout, "{:<40} {}", c.name, if c.pass { "pass" } else { "FAIL" })?;
        if !c.pass {
            failures += 1;
        }
    }
    writeln!(stdout, "{} checks, {} failures", checks.len(), failures)?;
    Ok(if failures == 0 { 0 } else { 2 })
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Exponents { n, s, p, out } => cmd_exponents(n, s, p, &out).map(|_| 0),
        Command::PhaseDiagram { s, n_range, p_range, out } => {
            cmd_phase_diagram(s, &n_range, &p_range, &out).map(|_| 0)
        }
        Command::Singular { n, s, p, m, out } => cmd_singular(n, s, p, m, &out).map(|_| 0),
        Command::Shoot { n, s, p, a, b, r_max, rel_tol, out } => {
            cmd_shoot(n, s, p, &a, b.as_deref(), r_max, rel_tol, &out).map(|_| 0)
        }
        Command::EnergyScan { n, s, p, a, b, homogeneous, lambda, out } => {
            cmd_energy_scan(n, s, p, a.as_deref(), b.as_deref(), homogeneous, &lambda, &out)
                .map(|_| 0)
        }
        Command::Angular { n, s, p, epsilon, out } => {
            cmd_angular(n, s, p, epsilon, &out).map(|_| 0)
        }
        Command::Kernel { n, s, alpha, c, p, rel_tol, out } => {
            cmd_kernel(n, s, alpha, c, p, rel_tol, &out).map(|_| 0)
        }
        Command::Verify => cmd_verify(),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // help/version requests are successful exits
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let _ = e.print();
            return 64;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(Error::Io(e)) => {
            eprintln!("error: io: {e}");
            74
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let g = parse_range("1:3:5").unwrap();
        assert_eq!(g, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert!(parse_range("3:1:5").is_err());
        assert!(parse_range("1:3:1").is_err());
        assert!(parse_range("1:3").is_err());
        assert!(parse_range("a:3:5").is_err());
    }

    #[test]
    fn float_rendering() {
        assert_eq!(fnum(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(fnum(f64::NEG_INFINITY), Value::String("-inf".into()));
        assert_eq!(fnum(f64::NAN), Value::String("nan".into()));
        assert_eq!(fmt_csv(f64::INFINITY), "inf");
        assert!(fmt_csv(1.0).contains('e'));
    }

    #[test]
    fn coverage_table_names_every_operation() {
        let table = operation_coverage();
        let commands = [
            "exponents",
            "phase-diagram",
            "singular",
            "shoot",
            "energy-scan",
            "angular",
            "kernel",
            "verify",
        ];
        for (op, cmd) in table {
            assert!(commands.contains(cmd), "unknown command {cmd} for {op}");
        }
        for op in [
            "jl_exponent_root",
            "classify",
            "solve_radial",
            "energy_E1",
            "energy_E2",
            "singular_instability_probe",
            "kernel_K",
            "A_constant_quadrature",
            "make_singular",
            "growth_slope",
        ] {
            assert!(table.iter().any(|(o, _)| *o == op), "missing {op}");
        }
    }

    #[test]
    fn verify_suite_passes() {
        let checks = run_checks().unwrap();
        for c in &checks {
            assert!(c.pass, "check {} failed", c.name);
        }
        assert!(checks.len() >= 15);
    }
}
