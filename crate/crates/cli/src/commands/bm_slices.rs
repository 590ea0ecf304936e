use std::fmt::Write as _;

use kahler_lab::convex_core::ConvexityKind;
use kahler_lab::prekopa_bm::families::{
    dented_squares, rotating_square, sheared_cube, shrinking_square,
};
use kahler_lab::prekopa_bm::{
    bm_check, midpoint_check, neg_log_volumes, random_polytope, slice_polytope, translation_detect,
    ConvexBodyFamily,
};
use serde_json::{json, Value};

use crate::config::{Config, Schema};
use crate::failure::Failure;
use crate::output::Output;

pub const SCHEMA: Schema = Schema {
    name: "bm-slices",
    about: "Multiplicative Brunn–Minkowski check on slice families of convex bodies",
    keys: &[
        (
            "families",
            "all",
            "Comma list of shrinking-square, sheared-cube, rotating-square, dented-squares, \
             random-polytope, file:<path>, or all",
        ),
        (
            "t-points",
            "11",
            "Number of t samples for the built-in families",
        ),
        ("tol", "1e-9", "Verdict tolerance"),
        (
            "shear",
            "0.3,-0.2,0.5",
            "Translation vector of the sheared cube",
        ),
        (
            "angle",
            "0.5",
            "Total rotation (radians) of the rotating square",
        ),
        (
            "polytope-points",
            "40",
            "Points sampled for the random polytope",
        ),
        ("seed", "7", "Seed of the random polytope"),
        ("match-tol", "1e-8", "Tolerance against closed forms"),
        (
            "translate-tol",
            "1e-10",
            "Largest residual accepted as a translate",
        ),
        (
            "reject-tol",
            "1e-3",
            "Smallest residual accepted as a non-translate",
        ),
    ],
};

const ALL: [&str; 5] = [
    "shrinking-square",
    "sheared-cube",
    "rotating-square",
    "dented-squares",
    "random-polytope",
];

/// What a family is expected to show.
enum Expect {
    ClosedForm(fn(f64) -> f64),
    Translate(Vec<f64>),
    NotTranslate,
    NonConvex,
    LogConcave,
}

fn build(name: &str, cfg: &Config) -> Result<(ConvexBodyFamily, Expect), Failure> {
    let n_t = cfg.usize("t-points")?;
    Ok(match name {
        "shrinking-square" => (
            shrinking_square(n_t)?,
            Expect::ClosedForm(|t| -2.0 * (1.0 - t).ln()),
        ),
        "sheared-cube" => {
            let v = cfg.f64_list("shear")?;
            if v.len() != 3 {
                return Err(Failure::Input("--shear needs three components".into()));
            }
            (sheared_cube(n_t, [v[0], v[1], v[2]])?, Expect::Translate(v))
        }
        "rotating-square" => (
            rotating_square(n_t, cfg.f64("angle")?)?,
            Expect::NotTranslate,
        ),
        "dented-squares" => (dented_squares()?, Expect::NonConvex),
        "random-polytope" => {
            let p = random_polytope(cfg.usize("polytope-points")?, cfg.u64("seed")?)?;
            let (zl, zh) = p
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                    (l.min(v[2]), h.max(v[2]))
                });
            let t = (1..=n_t)
                .map(|i| zl + (zh - zl) * i as f64 / (n_t + 1) as f64)
                .collect();
            (slice_polytope(&p, t)?, Expect::LogConcave)
        }
        _ => match name.strip_prefix("file:") {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))?;
                (ConvexBodyFamily::from_text(&text)?, Expect::LogConcave)
            }
            None => return Err(Failure::Input(format!("unknown body family {name:?}"))),
        },
    })
}

fn judge(fam: &ConvexBodyFamily, expect: &Expect, cfg: &Config) -> Result<(Value, bool), Failure> {
    let tol = cfg.f64("tol")?;
    let verdict = bm_check(fam, tol)?;
    let mut report = json!({ "verdict": verdict });
    if fam.len() >= 3 {
        report["midpoint"] = json!(midpoint_check(fam)?);
    }
    let translation = if verdict.kind == ConvexityKind::Affine {
        let fit = translation_detect(fam, tol)?;
        report["translation"] = json!(fit);
        Some(fit)
    } else {
        None
    };
    let passed = match expect {
        Expect::ClosedForm(f) => {
            let got = neg_log_volumes(fam)?;
            let err = fam
                .t_samples()
                .iter()
                .zip(&got)
                .fold(0.0f64, |m, (&t, g)| m.max((g - f(t)).abs()));
            report["closed_form_error"] = json!(err);
            !verdict.is_nonconvex() && err <= cfg.f64("match-tol")?
        }
        Expect::Translate(v) => {
            let tol = cfg.f64("translate-tol")?;
            translation.as_ref().is_some_and(|fit| {
                let dv = fit
                    .v
                    .iter()
                    .zip(v)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                dv <= tol && fit.residual <= tol
            })
        }
        Expect::NotTranslate => match &translation {
            Some(fit) => fit.residual >= cfg.f64("reject-tol")?,
            None => true,
        },
        Expect::NonConvex => verdict.is_nonconvex(),
        Expect::LogConcave => !verdict.is_nonconvex(),
    };
    let label = match expect {
        Expect::ClosedForm(_) => "convex, matches closed form",
        Expect::Translate(_) => "affine, translate recovered",
        Expect::NotTranslate => "not a translate",
        Expect::NonConvex => "non-convex (no convex body has these slices)",
        Expect::LogConcave => "not non-convex",
    };
    report["expectation"] = json!(label);
    report["passed"] = json!(passed);
    Ok((report, passed))
}

pub fn run(cfg: &Config, out: &Output) -> Result<(), Failure> {
    let mut names = cfg.list("families");
    if names.iter().any(|n| n == "all") {
        names = ALL.iter().map(|s| s.to_string()).collect();
    }
    let mut csv = String::from("family,t,volume,neg_log_volume\n");
    let mut reports = serde_json::Map::new();
    let mut failed = Vec::new();
    for name in &names {
        let (fam, expect) = build(name, cfg)?;
        for (t, v) in fam.t_samples().iter().zip(fam.volumes()?) {
            writeln!(csv, "{name},{t:.14e},{v:.14e},{:.14e}", -v.ln()).unwrap();
        }
        let (report, passed) = judge(&fam, &expect, cfg)?;
        if !passed {
            failed.push(name.clone());
        }
        reports.insert(name.clone(), report);
    }
    out.text("bm_slices.csv", &csv)?;
    out.json("bm_slices.json", json!({ "families": reports }))?;
    if !failed.is_empty() {
        return Err(Failure::Expectation(format!(
            "families missed their expectation: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}
