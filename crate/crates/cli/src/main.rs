//! `kahler-lab`: batch runner for the geodesic, KE, Bando–Mabuchi, Prekopa,
//! Brunn–Minkowski and kernel experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod builtins;
mod commands;
mod config;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Command;

use config::Config;
use failure::Failure;
use output::{stamp, Output};

fn cli() -> Command {
    let mut cmd = Command::new("kahler-lab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Numerical experiments on convexity, geodesics and Kähler–Einstein potentials")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for s in commands::SCHEMAS {
        cmd = cmd.subcommand(s.command());
    }
    cmd
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let schema = commands::SCHEMAS
        .iter()
        .find(|s| s.name == name)
        .expect("registered subcommand");
    let out_dir = PathBuf::from(sub.get_one::<String>("out").expect("has a default"));

    let mut cfg = Config::defaults(schema);
    let result = Config::resolve(schema, sub).and_then(|resolved| {
        cfg = resolved;
        let out = Output::new(&out_dir, &cfg)?;
        commands::run(name, &cfg, &out)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => ExitCode::from(report(&f, &cfg, &out_dir) as u8),
    }
}

/// JSON diagnostic on stderr and, when possible, in `diagnostic.json`.
fn report(f: &Failure, cfg: &Config, out_dir: &std::path::Path) -> i32 {
    let mut d = f.diagnostic();
    stamp(&mut d, cfg);
    let text = serde_json::to_string_pretty(&d).expect("json values serialize");
    eprintln!("{text}");
    if std::fs::create_dir_all(out_dir).is_ok() {
        let _ = std::fs::write(out_dir.join("diagnostic.json"), format!("{text}\n"));
    }
    f.exit_code()
}
