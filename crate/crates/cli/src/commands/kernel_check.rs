use std::fmt::Write as _;

use kahler_lab::einstein::{default_zeta_samples, kernel_bound_check};
use serde_json::json;

use crate::config::{Config, Schema};
use crate::failure::Failure;
use crate::output::Output;

pub const SCHEMA: Schema = Schema {
    name: "kernel-check",
    about: "Sweep of the kernel constant c_delta over shrinking discs",
    keys: &[
        ("alphas", "0.5", "Comma list of exponents in [0, 1)"),
        (
            "deltas",
            "0.2,0.1,0.05,0.02,0.01",
            "Comma list of disc radii",
        ),
        ("eps-ratio", "0.01", "eps as a multiple of delta^2"),
        ("quad-n", "64", "Gauss–Legendre order per panel"),
    ],
};

pub fn run(cfg: &Config, out: &Output) -> Result<(), Failure> {
    let alphas = cfg.f64_list("alphas")?;
    let mut deltas = cfg.f64_list("deltas")?;
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();
    let (ratio, quad_n) = (cfg.f64("eps-ratio")?, cfg.usize("quad-n")?);
    let mut csv = String::from("alpha,delta,eps,c_delta,c_over_delta\n");
    let mut sweeps = Vec::new();
    let mut broken = Vec::new();
    for &alpha in &alphas {
        let mut cs = Vec::with_capacity(deltas.len());
        for &delta in &deltas {
            let eps = ratio * delta * delta;
            let c = kernel_bound_check(alpha, eps, delta, &default_zeta_samples(delta), quad_n)?;
            writeln!(csv, "{alpha},{delta},{eps:.6e},{c:.14e},{:.14e}", c / delta).unwrap();
            cs.push(c);
        }
        let monotone = cs.windows(2).all(|w| w[1] < w[0]);
        if !monotone {
            broken.push(alpha);
        }
        sweeps.push(json!({
            "alpha": alpha,
            "deltas": deltas,
            "c_delta": cs,
            "strictly_decreasing": monotone,
        }));
    }
    out.text("kernel.csv", &csv)?;
    out.json("kernel.json", json!({ "sweeps": sweeps }))?;
    if !broken.is_empty() {
        return Err(Failure::Expectation(format!(
            "c_delta is not strictly decreasing for alpha in {broken:?}"
        )));
    }
    Ok(())
}
