use kahler_lab::einstein::{solve_ke_with, Gauge, KeOptions, TwistSpec};
use kahler_lab::models::cone_solution;
use kahler_lab::LabError;
use serde_json::json;

use super::s_grid;
use crate::builtins::potential;
use crate::config::{Config, Schema};
use crate::failure::Failure;
use crate::output::Output;

pub const SCHEMA: Schema = Schema {
    name: "ke",
    about: "Solve the Kähler–Einstein equation u'' = a e^{s - u - w}",
    keys: &[
        ("s-min", "-20", "Left end of the s window"),
        ("s-max", "20", "Right end of the s window"),
        ("grid-points", "16385", "Points of the s grid"),
        ("twist", "none", "none, cone:<b0>[,<binf>] or smooth:<k>"),
        (
            "init",
            "default",
            "Initial guess: default or a potential spec",
        ),
        ("max-iterations", "80", "Newton iteration cap"),
        ("tol", "1e-9", "Newton stopping tolerance"),
        (
            "center",
            "0",
            "Where the slope is pinned for translation-invariant problems",
        ),
        (
            "defect-tol",
            "1e-7",
            "Largest accepted upper boundary defect",
        ),
        (
            "gauge",
            "lower-asymptote",
            "lower-asymptote or value-at-zero",
        ),
        ("residual-tol", "1e-8", "Largest accepted interior residual"),
    ],
};

pub fn run(cfg: &Config, out: &Output) -> Result<(), Failure> {
    let grid = s_grid(cfg)?;
    let spec = TwistSpec::parse(cfg.str("twist"))?;
    let (w, lo, hi) = spec.build(grid)?;
    let init = match cfg.str("init") {
        "default" => None,
        s => Some(potential(s, grid, lo, hi)?),
    };
    let opts = KeOptions {
        max_iterations: cfg.usize("max-iterations")?,
        tol: cfg.f64("tol")?,
        center: cfg.f64("center")?,
        defect_tol: cfg.f64("defect-tol")?,
    };
    let gauge = match Gauge::parse(cfg.str("gauge"))? {
        g @ (Gauge::LowerAsymptote | Gauge::ValueAtZero) => g,
        g => {
            return Err(Failure::Input(format!(
                "gauge {} cannot be requested",
                g.as_str()
            )))
        }
    };
    let solved = solve_ke_with(w.as_ref(), grid, lo, hi, init.as_ref(), &opts)?;

    let closed_form_beta = match spec {
        TwistSpec::None => Some(0.0),
        TwistSpec::Cone { beta0, beta_inf } if beta0 == beta_inf && opts.center == 0.0 => {
            Some(beta0)
        }
        _ => None,
    };
    let closed_form = match closed_form_beta {
        Some(beta) => {
            let exact = cone_solution(grid, beta)?;
            let a_exact = 2.0 * (1.0 - beta) * (1.0 - beta);
            let la = solved.regauged(Gauge::LowerAsymptote);
            json!({
                "beta": beta,
                "a_exact": a_exact,
                "a_error": (la.a - a_exact).abs(),
                "sup_error": la.u.sup_distance(&exact),
            })
        }
        None => serde_json::Value::Null,
    };

    let sol = solved.regauged(gauge);
    out.text("solution.txt", &sol.to_text())?;
    out.json(
        "report.json",
        json!({
            "a": sol.a,
            "residual_sup": sol.residual_sup,
            "boundary_defect": sol.boundary_defect,
            "iterations": sol.iterations,
            "residual_history": sol.residual_history,
            "mass_identity_defect": sol.mass_identity_defect()?,
            "gauge": sol.gauge.as_str(),
            "slopes": [lo, hi],
            "closed_form": closed_form,
        }),
    )?;

    let tol = cfg.f64("residual-tol")?;
    if !(sol.residual_sup <= tol) {
        return Err(LabError::Invariant {
            what: "KE residual",
            index: 0,
            value: sol.residual_sup,
            tol,
        }
        .into());
    }
    Ok(())
}
