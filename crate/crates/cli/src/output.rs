use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::Config;
use crate::failure::Failure;

pub fn version() -> String {
    format!("kahler-lab {}", env!("CARGO_PKG_VERSION"))
}

/// Artifact sink. Every file carries the version and the resolved config.
pub struct Output {
    dir: PathBuf,
    config: Config,
}

impl Output {
    pub fn new(dir: &Path, config: &Config) -> Result<Self, Failure> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            config: config.clone(),
        })
    }

    fn header(&self) -> String {
        let mut h = format!("# {}\n", version());
        for (k, v) in self.config.entries() {
            writeln!(h, "# {k} = {v}").unwrap();
        }
        h
    }

    fn write(&self, name: &str, body: &str) -> Result<(), Failure> {
        let path = self.dir.join(name);
        std::fs::write(&path, body)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
    }

    /// CSV or one of the library text formats, behind `#` header lines.
    pub fn text(&self, name: &str, body: &str) -> Result<(), Failure> {
        self.write(name, &format!("{}{body}", self.header()))
    }

    pub fn json(&self, name: &str, mut value: Value) -> Result<(), Failure> {
        stamp(&mut value, &self.config);
        let mut body = serde_json::to_string_pretty(&value).expect("json values serialize");
        body.push('\n');
        self.write(name, &body)
    }
}

pub fn stamp(value: &mut Value, config: &Config) {
    if let Value::Object(map) = value {
        map.insert("version".into(), Value::String(version()));
        map.insert(
            "config".into(),
            serde_json::to_value(config.entries()).expect("string map"),
        );
    }
}
