mod bm_slices;
mod bm_verify;
mod geodesic;
mod ke;
mod kernel_check;
mod prekopa;

use kahler_lab::convex_core::SGrid;

use crate::config::{Config, Schema};
use crate::failure::Failure;
use crate::output::Output;

pub const SCHEMAS: &[&Schema] = &[
    &geodesic::SCHEMA,
    &ke::SCHEMA,
    &bm_verify::SCHEMA,
    &prekopa::SCHEMA,
    &bm_slices::SCHEMA,
    &kernel_check::SCHEMA,
];

pub fn run(name: &str, cfg: &Config, out: &Output) -> Result<(), Failure> {
    match name {
        "geodesic" => geodesic::run(cfg, out),
        "ke" => ke::run(cfg, out),
        "bm-verify" => bm_verify::run(cfg, out),
        "prekopa" => prekopa::run(cfg, out),
        "bm-slices" => bm_slices::run(cfg, out),
        "kernel-check" => kernel_check::run(cfg, out),
        _ => unreachable!("clap only dispatches known subcommands"),
    }
}

fn s_grid(cfg: &Config) -> Result<SGrid, Failure> {
    Ok(SGrid::new(
        cfg.f64("s-min")?,
        cfg.f64("s-max")?,
        cfg.usize("grid-points")?,
    )?)
}

/// Least-squares slope of equally spaced samples.
fn lsq_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let (mt, my) = (t.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in t.iter().zip(y) {
        num += (a - mt) * (b - my);
        den += (a - mt) * (a - mt);
    }
    num / den
}
