use kahler_lab::convex_core::{default_p_grid_size, ConvexityKind};
use kahler_lab::einstein::TwistSpec;
use kahler_lab::functionals::{e_trace_along, f_trace, g_trace, traces_to_csv};
use kahler_lab::geodesic::{
    barrier, default_epsilon_floor, lipschitz_certificate, ma_residual, solve_geodesic_hull,
    solve_geodesic_legendre,
};
use kahler_lab::LabError;
use serde_json::json;

use super::{lsq_slope, s_grid};
use crate::builtins::potential;
use crate::config::{Config, Schema};
use crate::failure::Failure;
use crate::output::Output;

pub const SCHEMA: Schema = Schema {
    name: "geodesic",
    about: "Geodesic between two potentials with its invariants and F/E/G traces",
    keys: &[
        (
            "u0",
            "fs",
            "Start potential: fs, fs-shift:<h>, random:<seed>, perturbed:<amp> or a file",
        ),
        ("u1", "fs-shift:1", "End potential"),
        ("s-min", "-14", "Left end of the s window"),
        ("s-max", "14", "Right end of the s window"),
        ("grid-points", "1025", "Points of the s grid"),
        ("t-points", "65", "Points of the t grid"),
        ("method", "hull", "hull, legendre or barrier"),
        (
            "p-grid-size",
            "0",
            "Slope grid size for the legendre method (0 = automatic)",
        ),
        ("twist", "none", "none, cone:<b0>[,<binf>] or smooth:<k>"),
        ("tol-verdict", "1e-3", "Tolerance of the convexity verdicts"),
        (
            "tol-boundary",
            "auto",
            "Largest accepted mismatch of the end rows (auto: 1e-9, or 1e-3 for legendre)",
        ),
        (
            "tol-joint",
            "1e-10",
            "Relative tolerance of the joint convexity test",
        ),
    ],
};

pub fn run(cfg: &Config, out: &Output) -> Result<(), Failure> {
    let grid = s_grid(cfg)?;
    let (w, lo, hi) = TwistSpec::parse(cfg.str("twist"))?.build(grid)?;
    let u0 = potential(cfg.str("u0"), grid, lo, hi)?;
    let u1 = potential(cfg.str("u1"), grid, lo, hi)?;
    let n_t = cfg.usize("t-points")?;
    let sheet = match cfg.str("method") {
        "hull" => solve_geodesic_hull(&u0, &u1, n_t)?,
        "legendre" => {
            let p = match cfg.usize("p-grid-size")? {
                0 => default_p_grid_size(grid.len()),
                p => p,
            };
            solve_geodesic_legendre(&u0, &u1, n_t, p)?
        }
        "barrier" => barrier(&u0, &u1, u0.sup_distance(&u1), n_t)?,
        m => return Err(Failure::Input(format!("unknown method {m:?}"))),
    };
    out.text("sheet.txt", &sheet.to_text())?;

    let tol = cfg.f64("tol-verdict")?;
    let f = f_trace(&sheet, w.as_ref())?;
    let e = e_trace_along(&sheet, &u0)?;
    let g = g_trace(&sheet, &u0, w.as_ref())?;
    out.text("traces.csv", &traces_to_csv(&[&f, &e, &g]))?;

    let boundary_defect = sheet.boundary_defect(&u0, &u1);
    let (joint_worst, joint_row, joint_col) = sheet.joint_convexity_defect();
    let ma = ma_residual(&sheet, default_epsilon_floor(&sheet));
    let mut traces = serde_json::Map::new();
    let mut f_verdict = None;
    for tr in [&f, &e, &g] {
        let v = tr.verdict(tol)?;
        traces.insert(
            tr.label.as_str().to_string(),
            json!({
                "verdict": v,
                "least_squares_slope": lsq_slope(&tr.t_samples, &tr.values),
            }),
        );
        if tr.label.as_str() == "F" {
            f_verdict = Some(v);
        }
    }
    out.json(
        "report.json",
        json!({
            "method": cfg.str("method"),
            "f_verdict_gates_exit": cfg.str("method") != "legendre",
            "boundary_defect": boundary_defect,
            "lipschitz": lipschitz_certificate(&sheet),
            "ma_residual": ma,
            "joint_convexity": {
                "worst_second_difference": joint_worst,
                "row": joint_row,
                "col": joint_col,
            },
            "traces": traces,
        }),
    )?;

    let tol_boundary = match (cfg.str("tol-boundary"), cfg.str("method")) {
        ("auto", "legendre") => 1e-3,
        ("auto", _) => 1e-9,
        _ => cfg.f64("tol-boundary")?,
    };
    sheet.check_boundary(&u0, &u1, tol_boundary)?;
    sheet.check_joint_convexity(cfg.f64("tol-joint")?)?;
    let f_verdict = f_verdict.expect("F trace present");
    // The Legendre oracle's interior rows are only accurate to O(1e-5), which
    // 1/h_t^2 turns into visible second differences; its verdict is advisory.
    if cfg.str("method") != "legendre" && f_verdict.kind == ConvexityKind::NonConvex {
        return Err(LabError::FTraceNonConvex {
            worst: f_verdict.worst_second_difference,
            index: f_verdict.witness_index,
        }
        .into());
    }
    Ok(())
}
