//! Ground-state curves and adiabatic ramps over the coupling ratio.

use std::sync::Arc;

use rayon::prelude::*;
use z2sim::analysis::find_crossing;
use z2sim::gauge_dual::DualStructure;
use z2sim::protocol::{adiabatic_sweep, exact_point, Direction, Observables, Schedule};

use super::{loop_name, series, Ctx, Output};
use crate::config::{RecordMode, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::Row;
use crate::svg::Plot;

/// (lambda_E, lambda_B) with lambda_B / lambda_E = r; infinite r means the
/// pure magnetic point.
fn couplings_for_ratio(r: f64) -> (f64, f64) {
    if r.is_infinite() {
        (0.0, 1.0)
    } else {
        (1.0, r)
    }
}

fn exact_rows(cfg: &RunConfig) -> CliResult<Vec<Row>> {
    let s = Arc::new(DualStructure::new(&cfg.lattice)?);
    let points = cfg
        .ratios
        .par_iter()
        .map(|&r| {
            let (le, lb) = couplings_for_ratio(r);
            exact_point(&s, le, lb, &cfg.loops)
        })
        .collect::<z2sim::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (&r, p) in cfg.ratios.iter().zip(&points) {
        for (c, w) in cfg.loops.iter().zip(&p.wilson) {
            rows.push(Row::new("ratio", r, loop_name(c), *w).direction("exact").engine("dual"));
        }
        if cfg.energy {
            rows.push(Row::new("ratio", r, "energy", p.energy).direction("exact").engine("dual"));
        }
    }
    Ok(rows)
}

pub fn exact_gs(ctx: &mut Ctx<'_>) -> CliResult<Output> {
    let cfg = ctx.cfg;
    ctx.log.line(format!(
        "exact ground states on {}x{} (dual engine), {} ratios",
        cfg.lattice.lx(),
        cfg.lattice.ly(),
        cfg.ratios.len()
    ));
    let rows = exact_rows(cfg)?;
    let mut plot = Plot::new("Ground-state Wilson loops", "lambda_B / lambda_E", "<W>");
    for c in &cfg.loops {
        let name = loop_name(c);
        plot.push(name.clone(), series(&rows, |r| r.observable == name));
    }
    Ok(Output {
        rows,
        plot: Some(plot),
        extra: Vec::new(),
    })
}

pub(super) fn schedule_for(cfg: &RunConfig, dir: Direction, t: f64, m: usize, value: f64) -> CliResult<Schedule> {
    let final_ratio = match dir {
        Direction::ElectricStart => value,
        Direction::MagneticStart => 1.0 / value,
    };
    if !final_ratio.is_finite() {
        return Err(CliError::Config(format!(
            "ratio {value} cannot be reached by a finite {} ramp",
            dir.name()
        )));
    }
    Ok(Schedule::new(dir, t, m, final_ratio)?
        .with_order(cfg.schedule.order)
        .with_sample(cfg.schedule.sample)
        .with_sign(cfg.schedule.sign))
}

fn ratio_of(le: f64, lb: f64) -> f64 {
    if le == 0.0 {
        f64::INFINITY
    } else {
        lb / le
    }
}

pub fn adiabatic(ctx: &mut Ctx<'_>) -> CliResult<Output> {
    let cfg = ctx.cfg;
    let (kind, auto) = cfg.engine_kind()?;
    ctx.log.line(format!(
        "engine: {kind}{} for {}x{}",
        if auto { " (auto-selected)" } else { "" },
        cfg.lattice.lx(),
        cfg.lattice.ly()
    ));
    let obs = Observables {
        loops: cfg.loops.clone(),
        energy: cfg.energy,
        gauge: cfg.gauge,
        every: if cfg.schedule.record == RecordMode::Ramp { 1 } else { 0 },
    };

    let mut jobs = Vec::new();
    for &dir in &cfg.schedule.directions {
        for &(t, m) in &cfg.schedule.durations {
            match cfg.schedule.record {
                RecordMode::Final => {
                    for &r in &cfg.ratios {
                        jobs.push((dir, Some(r), schedule_for(cfg, dir, t, m, r)?));
                    }
                }
                RecordMode::Ramp => {
                    let target = match dir {
                        Direction::ElectricStart => cfg.ratios.iter().copied().fold(0.0, f64::max),
                        Direction::MagneticStart => {
                            cfg.ratios.iter().copied().fold(f64::INFINITY, f64::min)
                        }
                    };
                    jobs.push((dir, None, schedule_for(cfg, dir, t, m, target)?));
                }
            }
        }
    }
    let schedules: Vec<Schedule> = jobs.iter().map(|j| j.2).collect();
    ctx.log.line(format!("running {} ramps", schedules.len()));
    let runs = adiabatic_sweep(&cfg.lattice, kind, &schedules, &obs);

    let mut rows = Vec::new();
    for ((dir, value, sch), run) in jobs.iter().zip(runs) {
        let traj = run?;
        let records: Vec<_> = match cfg.schedule.record {
            RecordMode::Final => vec![traj.last().clone()],
            RecordMode::Ramp => traj.records.clone(),
        };
        for rec in &records {
            let x = value.unwrap_or_else(|| ratio_of(rec.lambda_e, rec.lambda_b));
            let row = |name: String, v: f64| {
                Row::new("ratio", x, name, v)
                    .direction(dir.name())
                    .run(sch.total_time, sch.steps)
                    .engine(kind.name())
            };
            for (c, w) in cfg.loops.iter().zip(&rec.wilson) {
                rows.push(row(loop_name(c), *w));
            }
            if let Some(e) = rec.energy {
                rows.push(row("energy".into(), e));
            }
            if let Some(g) = rec.gauge_violation {
                rows.push(row("gauge_violation".into(), g));
            }
        }
    }

    if cfg.exact {
        rows.extend(exact_rows(cfg)?);
    }

    let first = loop_name(&cfg.loops[0]);
    let mut plot = Plot::new("Adiabatic preparation", "lambda_B / lambda_E", &format!("<{first}>"));
    for &(t, m) in &cfg.schedule.durations {
        let mut curves = Vec::new();
        for &dir in &cfg.schedule.directions {
            let pts = series(&rows, |r| {
                r.observable == first
                    && r.direction == dir.name()
                    && r.total_time == Some(t)
                    && r.steps == Some(m)
            });
            plot.push(format!("{} T={t} M={m}", dir.name()), pts.clone());
            curves.push(pts);
        }
        if cfg.schedule.record == RecordMode::Final && curves.len() == 2 {
            let crossing = find_crossing(&curves[0], &curves[1])?;
            ctx.log.line(format!(
                "T={t} M={m}: electric/magnetic crossing of {first} at ratio {}",
                crossing.map_or("none".to_string(), |x| format!("{x:.4}"))
            ));
        }
    }
    if cfg.exact {
        plot.push("exact", series(&rows, |r| r.observable == first && r.direction == "exact"));
    }
    Ok(Output {
        rows,
        plot: Some(plot),
        extra: Vec::new(),
    })
}

