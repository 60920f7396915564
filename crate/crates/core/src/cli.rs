//! The `sia` command line.
//!
//! Every subcommand prints a human-readable report, or with `--json` a single JSON
//! object whose numbers re-parse to the same `f64`. Exit codes: 0 success, 1
//! non-convergence or a verification gap above tolerance, 2 parse or usage error,
//! 3 domain error.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::calculus::{
    constrained_stationary, derivative, find_stationary, gradient, hessian, integrate, nth_derivative,
    verify_constrained, QuadratureConfig,
};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::forms::{
    default_coords, ftc_case, verify_classical, verify_generalized_stokes, ClassicalTheorem, CoordForm, FiniteCube,
    FormQuadrature, StokesReport, VectorField,
};
use crate::geometry::{
    arclength, catenary_residual, polar_arclength, surface_of_revolution, volume_of_revolution, CurveSpec,
};
use crate::json::{parse_cube, parse_form};
use crate::selftest::{self, DEFAULT_SEED};

/// Environment variable holding the default verification tolerance.
pub const TOL_ENV: &str = "SIA_TOL";

#[derive(Debug, Parser)]
#[command(name = "sia", version, about = "Exact calculus with nilpotent infinitesimals")]
pub struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Tolerance for verifiers and solvers.
    #[arg(long, global = true, env = TOL_ENV, default_value_t = 1e-9)]
    tol: f64,

    /// Nodes per axis for tensor quadrature of forms; 0 selects adaptive quadrature.
    #[arg(long, global = true, default_value_t = 12)]
    quad_order: usize,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// k-th derivative of a one-variable expression.
    Diff {
        /// Expression, e.g. "x^2*sin(x)".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// Point of evaluation.
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        /// Variable of the expression.
        #[arg(long, default_value = "x")]
        var: String,
        /// Order of the derivative.
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Gradient, and optionally Hessian, at a point.
    Grad {
        /// Expression, e.g. "x^2*sin(x)".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// Variable names, comma separated.
        #[arg(long)]
        vars: String,
        /// Point, comma separated, one value per variable.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Also print the Hessian.
        #[arg(long)]
        hessian: bool,
    },
    /// Definite integral by adaptive quadrature.
    Integrate {
        /// Expression, e.g. "x^2*sin(x)".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        interval: Interval,
    },
    /// Stationary point by Newton's method on the gradient.
    Stationary {
        /// Objective expression.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Variable names, comma separated.
        #[arg(long)]
        vars: String,
        /// Starting point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        guess: String,
    },
    /// Stationary point of f subject to g = k.
    Constrained {
        /// Objective expression.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Constraint expression.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Constraint level.
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        /// Variable names, comma separated.
        #[arg(long)]
        vars: String,
        /// Starting point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        guess: String,
    },
    /// Arclength of the graph y = f(x).
    Arclength {
        /// Expression, e.g. "x^2*sin(x)".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        interval: Interval,
    },
    /// Area of the surface of revolution of y = f(x) about the x-axis.
    Surface {
        /// Expression, e.g. "x^2*sin(x)".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        interval: Interval,
    },
    /// Volume of the solid of revolution of y = f(x) about the x-axis.
    Volume {
        /// Expression, e.g. "x^2*sin(x)".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        interval: Interval,
    },
    /// Arclength of the polar curve r = f(theta).
    Polar {
        /// Radius as a function of the angle.
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// Variable of the expression.
        #[arg(long, default_value = "theta")]
        var: String,
        /// Lower end of the interval.
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        /// Upper end of the interval.
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
    },
    /// Residual of the catenary equation on a grid over [-2a, 2a].
    Catenary {
        /// Catenary parameter, positive.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Candidate curve u(x); may mention the parameter a.
        #[arg(long, default_value = "a*cosh(x/a)")]
        expr: String,
        /// Number of grid points.
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
    /// Classical Stokes: flux of curl F against circulation around the boundary.
    Stokes {
        /// Vector field "M, N, P" in x, y, z.
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        #[command(flatten)]
        cube: CubeArg,
    },
    /// Divergence theorem: outward flux against the volume integral of div F.
    Divergence {
        /// Vector field "M, N, P" in x, y, z.
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        #[command(flatten)]
        cube: CubeArg,
    },
    /// Generalized Stokes for a coordinate form over a finite cube.
    Gstokes {
        /// Form text such as "-y*dx + x*dy", or a JSON object.
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// Coordinate names, comma separated; defaults follow the ambient dimension.
        #[arg(long)]
        coords: Option<String>,
        #[command(flatten)]
        cube: CubeArg,
    },
    /// Fundamental theorem of calculus as 1-dimensional Stokes.
    Ftc {
        /// Expression, e.g. "x^2*sin(x)".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// Variable of the expression.
        #[arg(long, default_value = "x")]
        var: String,
        /// Number of random germs for the pointwise check.
        #[arg(long, default_value_t = 10)]
        germs: usize,
    },
    /// Runs the full property suite.
    Selftest,
}

#[derive(Debug, Args)]
struct Interval {
    /// Variable of the expression.
    #[arg(long, default_value = "x")]
    var: String,
    /// Lower end of the interval.
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    /// Upper end of the interval.
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
}

#[derive(Debug, Args)]
struct CubeArg {
    /// identity1, identity2, identity3, square3 (unit square in z = 0), or a JSON cube.
    #[arg(long)]
    cube: Option<String>,
    /// Cube components, comma separated, e.g. "u, v, u*v".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "cube")]
    map: Option<String>,
    /// Parameter names for --map, comma separated.
    #[arg(long, requires = "map")]
    params: Option<String>,
}

/// Runs the command line on `argv` (program name first) and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if !(cli.tol > 0.0) {
        let _ = writeln!(err, "error: tolerance must be positive");
        return 2;
    }
    match execute(&cli) {
        Ok(outcome) => {
            let written =
                if cli.json { writeln!(out, "{}", outcome.json) } else { out.write_all(outcome.text.as_bytes()) };
            if written.is_err() {
                return 1;
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_parse_error() {
        2
    } else if e.is_domain_error() {
        3
    } else {
        1
    }
}

struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

impl Outcome {
    fn value(text: String, json: Value) -> Self {
        Self { text, json, ok: true }
    }
}

fn reals(src: &str) -> Result<Vec<f64>> {
    src.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("`{}` is not a real number", s.trim())))
        })
        .collect()
}

fn names(src: &str) -> Vec<String> {
    src.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// Shortest round-trip text, switching to exponent form for very small or large
/// magnitudes.
fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().copied().map(num).collect();
    parts.join(", ")
}

fn cube_from(arg: &CubeArg, default: &str) -> Result<FiniteCube> {
    if let Some(map) = &arg.map {
        let map = map.split(',').map(parse).collect::<Result<Vec<Expr>>>()?;
        let params = match &arg.params {
            Some(p) => names(p),
            None => {
                let used: std::collections::BTreeSet<String> = map.iter().flat_map(|e| e.parameters()).collect();
                ["t", "u", "v", "w"].iter().map(|s| s.to_string()).filter(|s| used.contains(s)).collect()
            }
        };
        for e in &map {
            if let Some(v) = e.parameters().into_iter().find(|v| !params.contains(v)) {
                return Err(Error::UnboundVariable(v));
            }
        }
        return FiniteCube::new(params, map);
    }
    let name = arg.cube.as_deref().unwrap_or(default);
    if name.trim_start().starts_with('{') {
        return parse_cube(name);
    }
    match name {
        "identity1" => Ok(FiniteCube::identity(1)),
        "identity2" => Ok(FiniteCube::identity(2)),
        "identity3" => Ok(FiniteCube::identity(3)),
        "square3" => Ok(FiniteCube::unit_square_3d()),
        other => Err(Error::InvalidArgument(format!(
            "unknown cube `{other}` (expected identity1, identity2, identity3, square3 or JSON)"
        ))),
    }
}

fn stokes_outcome(report: StokesReport, tol: f64, extra: Value) -> Outcome {
    let ok = report.gap <= tol;
    let text = format!(
        "lhs = {}\nrhs = {}\ngap = {:e}\n{}\n",
        num(report.lhs),
        num(report.rhs),
        report.gap,
        if ok { "ok" } else { "FAILED: gap exceeds tolerance" }
    );
    let mut json = json!({"lhs": report.lhs, "rhs": report.rhs, "gap": report.gap, "tol": tol, "ok": ok});
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Outcome { text, json, ok }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let quad = if cli.quad_order == 0 { FormQuadrature::Adaptive(cfg) } else { FormQuadrature::Tensor(cli.quad_order) };
    // Solvers drive the residual well below the verification tolerance.
    let solver_tol = (cli.tol * 1e-3).max(1e-14);
    match &cli.command {
        Command::Diff { expr, at, var, order } => {
            let f = parse(expr)?;
            let v = if *order == 1 { derivative(&f, var, *at)? } else { nth_derivative(&f, var, *at, *order)? };
            Ok(Outcome::value(format!("{}\n", num(v)), json!({"value": v, "order": order, "at": at})))
        }
        Command::Grad { expr, vars, at, hessian: want_hessian } => {
            let f = parse(expr)?;
            let vars = names(vars);
            let p = reals(at)?;
            let g = gradient(&f, &vars, &p)?;
            let mut text = format!("gradient = [{}]\n", fmt_vec(&g));
            let mut out = json!({"gradient": g});
            if *want_hessian {
                let h = hessian(&f, &vars, &p)?;
                for row in &h {
                    text.push_str(&format!("hessian row = [{}]\n", fmt_vec(row)));
                }
                out["hessian"] = json!(h);
            }
            Ok(Outcome::value(text, out))
        }
        Command::Integrate { expr, interval } => {
            let v = integrate(&parse(expr)?, &interval.var, interval.from, interval.to, &cfg)?;
            Ok(Outcome::value(format!("{}\n", num(v)), json!({"value": v})))
        }
        Command::Stationary { f, vars, guess } => {
            let f = parse(f)?;
            let vars = names(vars);
            let p = find_stationary(&f, &vars, &reals(guess)?, solver_tol)?;
            let value = f.eval_real(&vars.iter().map(String::as_str).zip(p.iter().copied()).collect::<Vec<_>>())?;
            Ok(Outcome::value(
                format!("point = [{}]\nvalue = {}\n", fmt_vec(&p), num(value)),
                json!({"point": p, "value": value}),
            ))
        }
        Command::Constrained { f, g, k, vars, guess } => {
            let (f, g) = (parse(f)?, parse(g)?);
            let vars = names(vars);
            let sol = constrained_stationary(&f, &g, *k, &vars, &reals(guess)?, solver_tol)?;
            let verified = verify_constrained(&f, &g, &vars, &sol.point, cli.tol)?;
            Ok(Outcome {
                text: format!(
                    "point = [{}]\nmultiplier = {}\niterations = {}\nverified = {verified}\n",
                    fmt_vec(&sol.point),
                    num(sol.multiplier),
                    sol.iterations
                ),
                json: json!({
                    "point": sol.point,
                    "multiplier": sol.multiplier,
                    "iterations": sol.iterations,
                    "verified": verified,
                }),
                ok: verified,
            })
        }
        Command::Arclength { expr, interval } | Command::Volume { expr, interval } => {
            let c = CurveSpec::new(parse(expr)?, interval.var.clone(), interval.from, interval.to)?;
            let v = if matches!(cli.command, Command::Arclength { .. }) {
                arclength(&c, &cfg)?
            } else {
                volume_of_revolution(&c, &cfg)?
            };
            Ok(Outcome::value(format!("{}\n", num(v)), json!({"value": v})))
        }
        Command::Surface { expr, interval } => {
            let c = CurveSpec::new(parse(expr)?, interval.var.clone(), interval.from, interval.to)?;
            let s = surface_of_revolution(&c, &cfg)?;
            let mut text = format!("{}\n", num(s.area));
            if s.negative_radius {
                text.push_str("warning: the curve dips below the axis; the area is signed\n");
            }
            Ok(Outcome::value(text, json!({"value": s.area, "negative_radius": s.negative_radius})))
        }
        Command::Polar { expr, var, from, to } => {
            let c = CurveSpec::new(parse(expr)?, var.clone(), *from, *to)?;
            let v = polar_arclength(&c, &cfg)?;
            Ok(Outcome::value(format!("{}\n", num(v)), json!({"value": v})))
        }
        Command::Catenary { a, expr, points } => {
            if *points < 2 {
                return Err(Error::InvalidArgument("need at least 2 grid points".into()));
            }
            let u = parse(expr)?;
            let xs: Vec<f64> = (0..*points).map(|i| -2.0 * a + 4.0 * a * i as f64 / (*points - 1) as f64).collect();
            let r = catenary_residual(&u, "x", *a, &xs)?;
            let worst = r.max_residual();
            let ok = worst <= cli.tol;
            Ok(Outcome {
                text: format!(
                    "max residual = {worst:e}\nu(0) - a = {}\nu'(0) = {}\n{}\n",
                    num(r.initial_offset),
                    num(r.initial_slope),
                    if ok { "ok" } else { "FAILED: residual exceeds tolerance" }
                ),
                json: json!({
                    "max_residual": worst,
                    "initial_offset": r.initial_offset,
                    "initial_slope": r.initial_slope,
                    "ok": ok,
                }),
                ok,
            })
        }
        Command::Stokes { field, cube } | Command::Divergence { field, cube } => {
            let f = VectorField::parse(field)?;
            let (theorem, default) = match cli.command {
                Command::Stokes { .. } => (ClassicalTheorem::Stokes, "square3"),
                _ => (ClassicalTheorem::Divergence, "identity3"),
            };
            let region = cube_from(cube, default)?;
            let report = verify_classical(theorem, &f, &region, &quad)?;
            Ok(stokes_outcome(report, cli.tol, json!({})))
        }
        Command::Gstokes { form, coords, cube } => {
            let region = cube_from(cube, "identity2")?;
            let omega = if form.trim_start().starts_with('{') {
                parse_form(form)?
            } else {
                let coords = coords.as_deref().map(names).unwrap_or_else(|| default_coords(region.ambient()));
                CoordForm::parse(form, coords)?
            };
            let report = verify_generalized_stokes(&omega, &region, &quad)?;
            Ok(stokes_outcome(report, cli.tol, json!({"degree": omega.degree()})))
        }
        Command::Ftc { expr, var, germs } => {
            use rand::{Rng, SeedableRng};
            let f = parse(expr)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            let pairs: Vec<(f64, f64)> =
                (0..*germs).map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(-2.0..2.0))).collect();
            let r = ftc_case(&f, var, &pairs, &quad)?;
            let ok = r.gap <= cli.tol && r.germ_gap <= cli.tol;
            Ok(Outcome {
                text: format!(
                    "integral of dF (boundary definition) = {}\nintegral of dF (coordinates) = {}\nF(1) - F(0) = {}\ngap = {:e}\ngerm checks = {}, worst gap {:e}\n{}\n",
                    num(r.integral_sia),
                    num(r.integral_coord),
                    num(r.endpoint_difference),
                    r.gap,
                    r.germs.len(),
                    r.germ_gap,
                    if ok { "ok" } else { "FAILED: gap exceeds tolerance" }
                ),
                json: json!({"report": r, "ok": ok}),
                ok,
            })
        }
        Command::Selftest => {
            let report = selftest::run(cli.seed);
            let mut text = String::new();
            for c in &report.checks {
                text.push_str(&format!(
                    "{} {} ({} cases, worst {:e}){}\n",
                    if c.passed() { "PASS" } else { "FAIL" },
                    c.name,
                    c.cases,
                    c.worst,
                    c.detail.as_ref().filter(|_| !c.passed()).map(|d| format!(": {d}")).unwrap_or_default()
                ));
            }
            let ok = report.passed();
            Ok(Outcome { text, json: json!({"report": report, "ok": ok}), ok })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("sia").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn diff_square() {
        assert_eq!(call(&["diff", "--expr", "x^2", "--at", "3"]), (0, "6\n".into(), String::new()));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["diff", "--expr", "x^", "--at", "3"]).0, 2);
        assert_eq!(call(&["diff", "--expr", "log(x)", "--at", "-1"]).0, 3);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
        let (code, _, err) = call(&["integrate", "--expr", "1 + * x", "--from", "0", "--to", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("offset 4"), "{err}");
    }

    #[test]
    fn green_via_gstokes() {
        let (code, out, _) = call(&["--json", "gstokes", "--form", "-y*dx + x*dy", "--cube", "identity2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!((v["lhs"].as_f64().unwrap() - 2.0).abs() < 1e-12);
        assert!(v["gap"].as_f64().unwrap() <= 1e-9);
    }

    #[test]
    fn gap_above_tolerance_exits_one() {
        // one Gauss node cannot integrate a degree-7 integrand exactly
        let (code, _, _) =
            call(&["--quad-order", "1", "--tol", "1e-12", "gstokes", "--form", "x^8*dy", "--cube", "identity2"]);
        assert_eq!(code, 1);
    }
}
