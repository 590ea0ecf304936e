use std::collections::BTreeMap;
use std::path::Path;

use clap::{Arg, ArgMatches, Command};

use crate::failure::Failure;

/// Keys accepted by one subcommand: `(key, default, help)`.
pub struct Schema {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [(&'static str, &'static str, &'static str)],
}

impl Schema {
    pub fn command(&self) -> Command {
        let mut cmd = Command::new(self.name)
            .about(self.about)
            .arg(
                Arg::new("config")
                    .long("config")
                    .value_name("FILE")
                    .help("key = value file; flags given on the command line win"),
            )
            .arg(
                Arg::new("out")
                    .long("out")
                    .value_name("DIR")
                    .default_value("out")
                    .help("Directory for the artifacts"),
            );
        for &(key, default, help) in self.keys {
            cmd = cmd.arg(
                Arg::new(key)
                    .long(key)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .help(format!("{help} [default: {default}]")),
            );
        }
        cmd
    }
}

/// Fully resolved parameters: defaults, then the config file, then flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, Failure> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Failure::Input(format!("config line {}: expected `key = value`", i + 1))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl Config {
    pub fn defaults(schema: &Schema) -> Self {
        Self {
            values: schema
                .keys
                .iter()
                .map(|&(k, d, _)| (k.to_string(), d.to_string()))
                .collect(),
        }
    }

    pub fn resolve(schema: &Schema, matches: &ArgMatches) -> Result<Self, Failure> {
        let mut cfg = Self::defaults(schema);
        if let Some(path) = matches.get_one::<String>("config") {
            let text = std::fs::read_to_string(Path::new(path))
                .map_err(|e| Failure::Input(format!("cannot read config {path}: {e}")))?;
            for (k, v) in parse_config_text(&text)? {
                cfg.set(&k, &v)?;
            }
        }
        for &(key, _, _) in schema.keys {
            if let Some(v) = matches.get_one::<String>(key) {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Failure> {
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = value.to_string();
                Ok(())
            }
            None => Err(Failure::Input(format!("unknown config key {key:?}"))),
        }
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn str(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| panic!("key {key} missing from schema"))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T, Failure>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.str(key);
        v.parse::<T>()
            .map_err(|e| Failure::Input(format!("--{key}: cannot parse {v:?}: {e}")))
    }

    pub fn f64(&self, key: &str) -> Result<f64, Failure> {
        self.parsed(key)
    }

    pub fn usize(&self, key: &str) -> Result<usize, Failure> {
        self.parsed(key)
    }

    pub fn u64(&self, key: &str) -> Result<u64, Failure> {
        self.parsed(key)
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, Failure> {
        self.str(key)
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Failure::Input(format!("--{key}: bad number {s:?}: {e}")))
            })
            .collect()
    }

    pub fn list(&self, key: &str) -> Vec<String> {
        self.str(key)
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: Schema = Schema {
        name: "t",
        about: "",
        keys: &[("a", "1", ""), ("b", "x", "")],
    };

    #[test]
    fn file_then_flags() {
        let m = S
            .command()
            .try_get_matches_from(["t", "--b", "-3"])
            .unwrap();
        let cfg = Config::resolve(&S, &m).unwrap();
        assert_eq!(cfg.str("a"), "1");
        assert_eq!(cfg.f64("b").unwrap(), -3.0);
    }

    #[test]
    fn file_syntax() {
        let kv = parse_config_text("# c\n\na = 2\n b=y \n").unwrap();
        assert_eq!(kv, vec![("a".into(), "2".into()), ("b".into(), "y".into())]);
        assert!(parse_config_text("nonsense").is_err());
        assert!(Config::defaults(&S).set("zzz", "1").is_err());
    }
}
