//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment; a line `[section]` sets a
//! prefix so that `lx = 4` below `[lattice]` is the key `lattice.lx`.
//! Numbers accept `sqrt(x)`. Lists are comma separated; numeric lists also
//! accept `linspace(a, b, n)` and `logspace(a, b, n)` (exponents of 10).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use z2sim::gauge_dual::TrotterOrder;
use z2sim::photonics::{
    BudgetModel, GradientSpec, InteractionKind, InteractionModel, ResidualMode, DEFAULT_CUTOFF,
    DEFAULT_SCAN_LIMIT,
};
use z2sim::protocol::{Direction, EngineKind, SampleTime, SignConvention};
use z2sim::{LatticeGeometry, LoopSpec};

use crate::error::{CliError, CliResult};

/// Every accepted key with its default (empty means "unset").
const KEYS: &[(&str, &str)] = &[
    ("lattice.lx", "2"),
    ("lattice.ly", "2"),
    ("engine", "auto"),
    ("seed", "0"),
    ("schedule.total_time", "1"),
    ("schedule.steps", "80"),
    ("schedule.order", "1"),
    ("schedule.sample", "midpoint"),
    ("schedule.sign", "standard"),
    ("schedule.directions", "electric, magnetic"),
    ("schedule.durations", ""),
    ("schedule.record", "final"),
    ("sweep.ratios", "linspace(0.5, 10, 20)"),
    ("observables.loops", "center"),
    ("observables.energy", "false"),
    ("observables.gauge", "false"),
    ("observables.exact", "true"),
    ("photonics.p", "1"),
    ("photonics.q", "sqrt(2)"),
    ("photonics.g", "1"),
    ("photonics.resolution", "1e-6"),
    ("photonics.interaction", "cavity"),
    ("photonics.range", "1"),
    ("photonics.j", "1"),
    ("photonics.cooperativity", "100"),
    ("photonics.mode", "suppressed"),
    ("photonics.cutoff", ""),
    ("photonics.scan_limit", ""),
    ("noise.kinds", "control-link"),
    ("noise.strengths", "0.01, 0.02, 0.04, 0.08, 0.16"),
    ("noise.gradient_scales", "1, 2, 5, 10, 20"),
    ("budget.cooperativities", "logspace(1, 4, 13)"),
    ("budget.total_time", "1"),
    ("budget.order", "2"),
    ("budget.trotter_coeff", "1"),
    ("budget.gate_coeff", "1e-3"),
    ("budget.gate_exponent", "1"),
    ("budget.error_cap", "0.1"),
    ("budget.max_steps", "1000000000"),
    ("trotter.lambda_e", "1"),
    ("trotter.lambda_b", "1"),
    ("trotter.total_time", "1"),
    ("trotter.steps", "10, 20, 40, 80, 160, 320"),
    ("trotter.orders", "1, 2"),
    ("wilson.state", "random"),
    ("wilson.samples", "20"),
];

/// Parsed key-value pairs, before interpretation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected `key = value`, got `{line}`", i + 1))
            })?;
            let k = k.trim();
            let key = if section.is_empty() || k.contains('.') {
                k.to_string()
            } else {
                format!("{section}.{k}")
            };
            if !KEYS.iter().any(|(name, _)| *name == key) {
                return Err(CliError::Config(format!("line {}: unknown key `{key}`", i + 1)));
            }
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key `{key}`", i + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        if !KEYS.iter().any(|(name, _)| *name == key) {
            return Err(CliError::Config(format!("unknown key `{key}`")));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    fn get(&self, key: &str) -> &str {
        self.entries.get(key).map(String::as_str).unwrap_or_else(|| {
            KEYS.iter()
                .find(|(k, _)| *k == key)
                .map(|(_, d)| *d)
                .expect("key is registered")
        })
    }

    /// sha256 over the explicitly set keys in sorted order.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.entries {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn bad(key: &str, value: &str, what: &str) -> CliError {
    CliError::Config(format!("`{key} = {value}`: {what}"))
}

pub fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        return parse_number(inner).filter(|v| *v >= 0.0).map(f64::sqrt);
    }
    match s {
        "inf" => Some(f64::INFINITY),
        _ => s.parse().ok(),
    }
}

fn parse_grid(s: &str) -> Option<Vec<f64>> {
    let s = s.trim();
    for (name, log) in [("linspace(", false), ("logspace(", true)] {
        if let Some(inner) = s.strip_prefix(name).and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return None;
            }
            let a = parse_number(parts[0])?;
            let b = parse_number(parts[1])?;
            let n: usize = parts[2].trim().parse().ok()?;
            if n == 0 {
                return None;
            }
            let pts = (0..n).map(|k| {
                let t = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                let v = a + (b - a) * t;
                if log {
                    10f64.powf(v)
                } else {
                    v
                }
            });
            return Some(pts.collect());
        }
    }
    s.split(',').map(parse_number).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineChoice {
    Auto,
    Fixed(EngineKind),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordMode {
    /// One full ramp per sweep point; record the final state.
    Final,
    /// One ramp to the largest ratio; record along it.
    Ramp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseKind {
    LinkLink,
    ControlControl,
    ControlLink,
    Gradient,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::LinkLink => "link-link",
            NoiseKind::ControlControl => "control-control",
            NoiseKind::ControlLink => "control-link",
            NoiseKind::Gradient => "gradient",
        }
    }
}

impl FromStr for NoiseKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "link-link" => Ok(Self::LinkLink),
            "control-control" => Ok(Self::ControlControl),
            "control-link" => Ok(Self::ControlLink),
            "gradient" => Ok(Self::Gradient),
            _ => Err(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WilsonState {
    Random,
    Electric,
    Magnetic,
}

#[derive(Clone, Debug)]
pub struct ScheduleConfig {
    pub directions: Vec<Direction>,
    /// (T, M) pairs; a single pair unless `schedule.durations` is set.
    pub durations: Vec<(f64, usize)>,
    pub order: TrotterOrder,
    pub sample: SampleTime,
    pub sign: SignConvention,
    pub record: RecordMode,
}

#[derive(Clone, Debug)]
pub struct PhotonicsConfig {
    pub gradient: GradientSpec,
    /// Frequency resolution, absolute (the file gives it in units of g).
    pub resolution: f64,
    pub model: InteractionModel,
    pub mode: ResidualMode,
    pub cutoff: f64,
    pub scan_limit: usize,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub lattice: LatticeGeometry,
    pub engine: EngineChoice,
    pub seed: u64,
    pub schedule: ScheduleConfig,
    pub ratios: Vec<f64>,
    pub loops: Vec<LoopSpec>,
    pub energy: bool,
    pub gauge: bool,
    pub exact: bool,
    pub photonics: PhotonicsConfig,
    pub noise_kinds: Vec<NoiseKind>,
    pub noise_strengths: Vec<f64>,
    pub gradient_scales: Vec<f64>,
    pub budget: BudgetModel,
    pub cooperativities: Vec<f64>,
    pub budget_time: f64,
    pub trotter_couplings: (f64, f64),
    pub trotter_time: f64,
    pub trotter_steps: Vec<usize>,
    pub trotter_orders: Vec<TrotterOrder>,
    pub wilson_state: WilsonState,
    pub wilson_samples: usize,
    pub hash: String,
}

struct Reader<'a>(&'a RawConfig);

impl Reader<'_> {
    fn raw(&self, key: &str) -> &str {
        self.0.get(key)
    }

    fn f64(&self, key: &str) -> CliResult<f64> {
        let v = self.raw(key);
        parse_number(v).ok_or_else(|| bad(key, v, "not a number"))
    }

    fn positive(&self, key: &str) -> CliResult<f64> {
        let x = self.f64(key)?;
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(bad(key, self.raw(key), "must be positive"))
        }
    }

    fn usize(&self, key: &str) -> CliResult<usize> {
        let v = self.raw(key);
        v.parse().map_err(|_| bad(key, v, "not a non-negative integer"))
    }

    fn bool(&self, key: &str) -> CliResult<bool> {
        let v = self.raw(key);
        match v {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(bad(key, v, "expected true or false")),
        }
    }

    fn grid(&self, key: &str) -> CliResult<Vec<f64>> {
        let v = self.raw(key);
        let g = parse_grid(v).ok_or_else(|| bad(key, v, "not a number list"))?;
        if g.is_empty() {
            return Err(bad(key, v, "empty list"));
        }
        Ok(g)
    }

    fn list<T>(&self, key: &str, f: impl Fn(&str) -> Option<T>) -> CliResult<Vec<T>> {
        let v = self.raw(key);
        let out: Option<Vec<T>> = v.split(',').map(|s| f(s.trim())).collect();
        match out {
            Some(o) if !o.is_empty() => Ok(o),
            _ => Err(bad(key, v, "unrecognized list entry")),
        }
    }

    fn parsed<T: FromStr>(&self, key: &str) -> CliResult<T> {
        let v = self.raw(key);
        v.parse().map_err(|_| bad(key, v, "unrecognized value"))
    }
}

fn parse_loops(spec: &str, geom: &LatticeGeometry) -> CliResult<Vec<LoopSpec>> {
    let mut out = Vec::new();
    for item in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "center" => {
                let (x, y) = geom.plaquette_coords(geom.central_plaquette());
                out.push(LoopSpec::unit(x, y));
            }
            "all" => out.extend(geom.all_loops()),
            _ => {
                let n: Vec<usize> = item
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad("observables.loops", item, "expected `x y width height`"))?;
                if n.len() != 4 {
                    return Err(bad("observables.loops", item, "expected `x y width height`"));
                }
                out.push(LoopSpec::new(n[0], n[1], n[2], n[3]));
            }
        }
    }
    if out.is_empty() {
        return Err(bad("observables.loops", spec, "no loops given"));
    }
    for c in &out {
        geom.check_loop(c)
            .map_err(|e| CliError::Config(format!("observables.loops: {e}")))?;
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> CliResult<Self> {
        let r = Reader(raw);
        let lattice = LatticeGeometry::new(r.usize("lattice.lx")?, r.usize("lattice.ly")?)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let engine = match r.raw("engine") {
            "auto" => EngineChoice::Auto,
            s => EngineChoice::Fixed(
                s.parse()
                    .map_err(|_| bad("engine", s, "expected auto, full, links or dual"))?,
            ),
        };
        if let EngineChoice::Fixed(kind) = engine {
            check_engine_capacity(kind, &lattice)?;
        }
        let seed = r.raw("seed");
        let seed = seed.parse().map_err(|_| bad("seed", seed, "not an integer"))?;

        let order = |s: &str| s.parse::<u32>().ok().and_then(|k| TrotterOrder::from_int(k).ok());
        let durations = if r.raw("schedule.durations").is_empty() {
            let t = r.f64("schedule.total_time")?;
            if !(t >= 0.0 && t.is_finite()) {
                return Err(bad("schedule.total_time", r.raw("schedule.total_time"), "must be >= 0"));
            }
            vec![(t, r.usize("schedule.steps")?)]
        } else {
            r.list("schedule.durations", |s| {
                let (t, m) = s.split_once(':')?;
                Some((parse_number(t)?, m.trim().parse().ok()?))
            })?
        };
        if durations.iter().any(|&(t, m)| m == 0 || !(t >= 0.0)) {
            return Err(bad("schedule.durations", r.raw("schedule.durations"), "need T >= 0 and M >= 1"));
        }
        let schedule = ScheduleConfig {
            directions: r.list("schedule.directions", |s| s.parse().ok())?,
            durations,
            order: order(r.raw("schedule.order"))
                .ok_or_else(|| bad("schedule.order", r.raw("schedule.order"), "expected 1 or 2"))?,
            sample: r.parsed("schedule.sample")?,
            sign: r.parsed("schedule.sign")?,
            record: match r.raw("schedule.record") {
                "final" => RecordMode::Final,
                "ramp" => RecordMode::Ramp,
                s => return Err(bad("schedule.record", s, "expected final or ramp")),
            },
        };

        let ratios = r.grid("sweep.ratios")?;
        if ratios.iter().any(|x| !(*x >= 0.0)) {
            return Err(bad("sweep.ratios", r.raw("sweep.ratios"), "ratios must be >= 0"));
        }
        let loops = parse_loops(r.raw("observables.loops"), &lattice)?;

        let cfg_err = |e: z2sim::Error| CliError::Config(e.to_string());
        let g = r.positive("photonics.g")?;
        let gradient =
            GradientSpec::new(r.f64("photonics.p")?, r.f64("photonics.q")?, g).map_err(cfg_err)?;
        let j = r.positive("photonics.j")?;
        let coop = r.positive("photonics.cooperativity")?;
        let model = match r.parsed::<InteractionKind>("photonics.interaction")? {
            InteractionKind::Cavity => InteractionModel::cavity(j, coop),
            InteractionKind::PhotonicCrystal => {
                InteractionModel::crystal(j, r.positive("photonics.range")?, coop)
            }
        }
        .map_err(cfg_err)?;
        let resolution = r.f64("photonics.resolution")?;
        if !(resolution >= 0.0) {
            return Err(bad("photonics.resolution", r.raw("photonics.resolution"), "must be >= 0"));
        }
        let photonics = PhotonicsConfig {
            gradient,
            resolution: resolution * g,
            model,
            mode: r.parsed("photonics.mode")?,
            cutoff: if r.raw("photonics.cutoff").is_empty() {
                DEFAULT_CUTOFF
            } else {
                r.positive("photonics.cutoff")?
            },
            scan_limit: if r.raw("photonics.scan_limit").is_empty() {
                DEFAULT_SCAN_LIMIT
            } else {
                r.usize("photonics.scan_limit")?
            },
        };

        let budget = BudgetModel {
            order: r.usize("budget.order")? as u32,
            trotter_coeff: r.f64("budget.trotter_coeff")?,
            gate_coeff: r.f64("budget.gate_coeff")?,
            gate_exponent: r.f64("budget.gate_exponent")?,
            error_cap: r.f64("budget.error_cap")?,
            max_steps: r
                .raw("budget.max_steps")
                .parse()
                .map_err(|_| bad("budget.max_steps", r.raw("budget.max_steps"), "not an integer"))?,
        };
        budget.validate().map_err(cfg_err)?;

        let wilson_state = match r.raw("wilson.state") {
            "random" => WilsonState::Random,
            "electric" => WilsonState::Electric,
            "magnetic" => WilsonState::Magnetic,
            s => return Err(bad("wilson.state", s, "expected random, electric or magnetic")),
        };

        Ok(Self {
            lattice,
            engine,
            seed,
            schedule,
            ratios,
            loops,
            energy: r.bool("observables.energy")?,
            gauge: r.bool("observables.gauge")?,
            exact: r.bool("observables.exact")?,
            photonics,
            noise_kinds: r.list("noise.kinds", |s| s.parse().ok())?,
            noise_strengths: r.grid("noise.strengths")?,
            gradient_scales: r.grid("noise.gradient_scales")?,
            budget,
            cooperativities: r.grid("budget.cooperativities")?,
            budget_time: r.positive("budget.total_time")?,
            trotter_couplings: (r.f64("trotter.lambda_e")?, r.f64("trotter.lambda_b")?),
            trotter_time: r.positive("trotter.total_time")?,
            trotter_steps: r.list("trotter.steps", |s| s.parse().ok().filter(|m| *m > 0))?,
            trotter_orders: r.list("trotter.orders", order)?,
            wilson_state,
            wilson_samples: r.usize("wilson.samples")?,
            hash: raw.hash(),
        })
    }

    /// The configured engine, or the first of full, links, dual that fits.
    pub fn engine_kind(&self) -> CliResult<(EngineKind, bool)> {
        match self.engine {
            EngineChoice::Fixed(k) => Ok((k, false)),
            EngineChoice::Auto => Ok((EngineKind::select(&self.lattice)?, true)),
        }
    }
}

fn check_engine_capacity(kind: EngineKind, geom: &LatticeGeometry) -> CliResult<()> {
    use z2sim::statevec::check_engine_capacity as check;
    match kind {
        EngineKind::Full => check(geom.num_links() + geom.num_controls(), "full")?,
        EngineKind::Links => check(geom.num_links(), "links")?,
        EngineKind::Dual => {
            z2sim::gauge_dual::DualStructure::new(geom)?;
        }
    }
    Ok(())
}
