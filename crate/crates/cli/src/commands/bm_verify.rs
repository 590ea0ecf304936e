use kahler_lab::einstein::{bando_mabuchi_verify_with, BandoOptions, TwistSpec};
use kahler_lab::functionals::traces_to_csv;
use serde_json::json;

use super::s_grid;
use crate::builtins::solution;
use crate::config::{Config, Schema};
use crate::failure::Failure;
use crate::output::Output;

pub const SCHEMA: Schema = Schema {
    name: "bm-verify",
    about: "Recover the flow relating two KE solutions and certify the equality case",
    keys: &[
        (
            "sol0",
            "fs",
            "First solution: built-in potential spec or a solution file",
        ),
        ("sol1", "fs-shift:1", "Second solution"),
        ("s-min", "-14", "Left end of the s window"),
        ("s-max", "14", "Right end of the s window"),
        ("grid-points", "1025", "Points of the s grid"),
        ("twist", "none", "none or cone:<b0>[,<binf>]"),
        ("t-points", "65", "Points of the t grid"),
        ("tol-affine", "1e-3", "Verdict tolerance for the F-trace"),
        (
            "tol-conjugation",
            "1e-2",
            "Largest accepted conjugation residual",
        ),
        ("bracket", "0.25", "Half-width of the search bracket for h"),
    ],
};

pub fn run(cfg: &Config, out: &Output) -> Result<(), Failure> {
    let grid = s_grid(cfg)?;
    let (w, lo, hi) = TwistSpec::parse(cfg.str("twist"))?.build(grid)?;
    let sol0 = solution(cfg.str("sol0"), grid, lo, hi, w.as_ref())?;
    let sol1 = solution(cfg.str("sol1"), grid, lo, hi, w.as_ref())?;
    let opts = BandoOptions {
        n_t: cfg.usize("t-points")?,
        affine_tol: cfg.f64("tol-affine")?,
        conjugation_tol: cfg.f64("tol-conjugation")?,
        bracket: cfg.f64("bracket")?,
    };
    let est = bando_mabuchi_verify_with(&sol0, &sol1, &opts)?;
    out.text("traces.csv", &traces_to_csv(&[&est.f_trace]))?;
    out.json(
        "flow.json",
        json!({
            "flow": est,
            "endpoints": [
                { "a": sol0.a, "residual_sup": sol0.residual_sup },
                { "a": sol1.a, "residual_sup": sol1.residual_sup },
            ],
        }),
    )?;
    Ok(())
}
