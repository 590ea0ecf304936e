use std::fmt::Write as _;

use kahler_lab::prekopa_bm::families::{
    separable_quadratic, stretched_gaussian, translated_gaussian,
};
use kahler_lab::prekopa_bm::{prekopa_check, WeightFamily};
use serde_json::json;

use crate::config::{Config, Schema};
use crate::failure::Failure;
use crate::output::Output;

pub const SCHEMA: Schema = Schema {
    name: "prekopa",
    about: "Convexity of -log ∫ e^{-phi_t} for weight families",
    keys: &[
        (
            "families",
            "all",
            "Comma list of translated-gaussian, separable-quadratic, stretched-gaussian, or all",
        ),
        ("t-points", "21", "Number of t samples"),
        (
            "tol",
            "1e-8",
            "Verdict tolerance (also bounds the boundary mass fraction)",
        ),
    ],
};

const ALL: [&str; 3] = [
    "translated-gaussian",
    "separable-quadratic",
    "stretched-gaussian",
];

fn family(name: &str, n_t: usize) -> Result<WeightFamily, Failure> {
    Ok(match name {
        "translated-gaussian" => translated_gaussian(n_t)?,
        "separable-quadratic" => separable_quadratic(n_t)?,
        "stretched-gaussian" => stretched_gaussian(n_t)?,
        _ => return Err(Failure::Input(format!("unknown weight family {name:?}"))),
    })
}

pub fn run(cfg: &Config, out: &Output) -> Result<(), Failure> {
    let mut names = cfg.list("families");
    if names.iter().any(|n| n == "all") {
        names = ALL.iter().map(|s| s.to_string()).collect();
    }
    let (n_t, tol) = (cfg.usize("t-points")?, cfg.f64("tol")?);
    let mut csv = String::from("family,jointly_convex,worst_eigenvalue,verdict,slope,worst_second_difference,tail_fraction,consistent\n");
    let mut rows = Vec::new();
    let mut broken = Vec::new();
    for name in &names {
        let fam = family(name, n_t)?;
        let r = prekopa_check(&fam, tol)?;
        let consistent = !(r.jointly_convex && r.verdict.is_nonconvex());
        if !consistent {
            broken.push(name.clone());
        }
        writeln!(
            csv,
            "{name},{},{:.14e},{},{},{:.14e},{:.14e},{consistent}",
            r.jointly_convex,
            fam.worst_eigenvalue,
            r.verdict.kind.as_str(),
            r.verdict
                .slope
                .map_or(String::new(), |s| format!("{s:.14e}")),
            r.verdict.worst_second_difference,
            r.tail_fraction,
        )
        .unwrap();
        rows.push(json!({
            "family": name,
            "worst_eigenvalue": fam.worst_eigenvalue,
            "consistent": consistent,
            "report": r,
        }));
    }
    out.text("prekopa.csv", &csv)?;
    out.json("prekopa.json", json!({ "families": rows }))?;
    if !broken.is_empty() {
        return Err(Failure::Expectation(format!(
            "jointly convex weights with a non-convex trace: {}",
            broken.join(", ")
        )));
    }
    Ok(())
}
