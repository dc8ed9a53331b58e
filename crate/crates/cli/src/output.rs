//! Curve CSV and run log.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::CliResult;

pub const HEADER: &str = "sweep,value,observable,obs_value,direction,T,M,engine";

/// One line of a curve file.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub sweep: &'static str,
    pub value: f64,
    pub observable: String,
    pub obs_value: f64,
    pub direction: String,
    pub total_time: Option<f64>,
    pub steps: Option<usize>,
    pub engine: String,
}

impl Row {
    pub fn new(sweep: &'static str, value: f64, observable: impl Into<String>, obs_value: f64) -> Self {
        Self {
            sweep,
            value,
            observable: observable.into(),
            obs_value,
            direction: String::new(),
            total_time: None,
            steps: None,
            engine: String::new(),
        }
    }

    pub fn direction(mut self, d: impl Into<String>) -> Self {
        self.direction = d.into();
        self
    }

    pub fn run(mut self, total_time: f64, steps: usize) -> Self {
        self.total_time = Some(total_time);
        self.steps = Some(steps);
        self
    }

    pub fn engine(mut self, e: impl Into<String>) -> Self {
        self.engine = e.into();
        self
    }
}

/// 17 significant digits, so values round-trip exactly.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_csv(hash: &str, rows: &[Row]) -> String {
    let mut out = format!("# config sha256:{hash}\n{HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.sweep,
            num(r.value),
            r.observable,
            num(r.obs_value),
            r.direction,
            r.total_time.map(num).unwrap_or_default(),
            r.steps.map(|m| m.to_string()).unwrap_or_default(),
            r.engine
        );
    }
    out
}

/// Writes to stderr and, once opened, to `run.log`.
#[derive(Debug, Default)]
pub struct Log {
    file: Option<File>,
    quiet: bool,
}

impl Log {
    pub fn open(path: &Path, quiet: bool) -> CliResult<Self> {
        Ok(Self {
            file: Some(File::create(path)?),
            quiet,
        })
    }

    pub fn line(&mut self, msg: impl AsRef<str>) {
        let msg = msg.as_ref();
        if !self.quiet {
            eprintln!("{msg}");
        }
        if let Some(f) = &mut self.file {
            let _ = writeln!(f, "{msg}");
        }
    }
}
