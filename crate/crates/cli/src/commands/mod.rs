mod gadgets;
mod noise;
mod scaling;
mod sweep;

use z2sim::LoopSpec;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Log, Row};
use crate::svg::Plot;

pub use gadgets::{prep_magnetic, wilson};
pub use noise::{noise_scan, schedule_check};
pub use scaling::{budget, trotter_scan};
pub use sweep::{adiabatic, exact_gs};

/// What a subcommand produces: curve rows, an optional chart and any extra
/// files (name, contents) for the output directory.
#[derive(Debug, Default)]
pub struct Output {
    pub rows: Vec<Row>,
    pub plot: Option<Plot>,
    pub extra: Vec<(String, String)>,
}

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub log: &'a mut Log,
}

pub type CommandFn = fn(&mut Ctx<'_>) -> CliResult<Output>;

pub fn loop_name(c: &LoopSpec) -> String {
    format!("W_{}_{}_{}x{}", c.x, c.y, c.width, c.height)
}

/// Points of one observable in row order.
pub fn series(rows: &[Row], pick: impl Fn(&Row) -> bool) -> Vec<(f64, f64)> {
    rows.iter().filter(|r| pick(r)).map(|r| (r.value, r.obs_value)).collect()
}
