//! Residual-coupling scans and sideband-schedule checks.

use std::fmt::Write as _;

use rayon::prelude::*;
use z2sim::photonics::{
    canonical_nn_schedule, collision_report_with_limit, effective_interaction, gauge_violation_run,
    is_undesired_control_link, resonant_pairs, CouplingMatrix,
};
use z2sim::protocol::{Direction, Schedule};
use z2sim::{LatticeGeometry, QubitRegister};

use super::sweep::schedule_for;
use super::{series, Ctx, Output};
use crate::config::{NoiseKind, RunConfig};
use crate::error::CliResult;
use crate::output::Row;
use crate::svg::Plot;

fn noise_schedule(cfg: &RunConfig) -> CliResult<Schedule> {
    let dir = cfg.schedule.directions[0];
    let (t, m) = cfg.schedule.durations[0];
    let value = match dir {
        Direction::ElectricStart => cfg.ratios.iter().copied().fold(0.0, f64::max),
        Direction::MagneticStart => cfg.ratios.iter().copied().fold(f64::INFINITY, f64::min),
    };
    schedule_for(cfg, dir, t, m, value)
}

fn pairs_for(kind: NoiseKind, g: &LatticeGeometry) -> Vec<(usize, usize)> {
    let nl = g.num_links();
    let n = nl + g.num_controls();
    let all = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    match kind {
        NoiseKind::LinkLink => all.filter(|&(_, b)| b < nl).collect(),
        NoiseKind::ControlControl => all.filter(|&(a, _)| a >= nl).collect(),
        NoiseKind::ControlLink => {
            let dist = |&(a, b): &(usize, usize)| g.link_position(a).distance(g.control_position(b - nl));
            let undesired: Vec<_> = all.filter(|&(a, b)| is_undesired_control_link(g, a, b)).collect();
            let d_min = undesired.iter().map(dist).fold(f64::INFINITY, f64::min);
            undesired.into_iter().filter(|p| dist(p) <= d_min + 1e-9).collect()
        }
        NoiseKind::Gradient => Vec::new(),
    }
}

fn run_metrics(
    g: &LatticeGeometry,
    m: &CouplingMatrix,
    sch: &Schedule,
    ideal: &QubitRegister,
) -> CliResult<(f64, f64)> {
    let run = gauge_violation_run(g, m, sch)?;
    Ok((run.max(), run.final_state.distance(ideal)?))
}

pub fn noise_scan(ctx: &mut Ctx<'_>) -> CliResult<Output> {
    let cfg = ctx.cfg;
    let g = &cfg.lattice;
    let sch = noise_schedule(cfg)?;
    let j = cfg.photonics.model.j;
    let ideal_matrix = CouplingMatrix::ideal(g, j);
    let ideal = gauge_violation_run(g, &ideal_matrix, &sch)?;
    ctx.log.line(format!(
        "{} ramp to ratio {} with T={} M={} on the full engine; ideal gauge error {:.3e}",
        sch.direction.name(),
        sch.final_ratio,
        sch.total_time,
        sch.steps,
        ideal.max()
    ));
    let mut rows = Vec::new();
    let mut plot = Plot::new("Gauge error from residual couplings", "strength / J", "max 1 - <A>").log_log();
    for &kind in &cfg.noise_kinds {
        let (sweep, values) = match kind {
            NoiseKind::Gradient => ("gradient", &cfg.gradient_scales),
            _ => ("strength", &cfg.noise_strengths),
        };
        let pairs = pairs_for(kind, g);
        let results = values
            .par_iter()
            .map(|&v| {
                let m = match kind {
                    NoiseKind::Gradient => {
                        let p = &cfg.photonics;
                        let grad = p.gradient.scaled(v);
                        let sb = canonical_nn_schedule(&grad, p.resolution)?;
                        effective_interaction(&p.model, g, &grad, &sb, p.resolution, p.mode, p.cutoff)?
                    }
                    _ => {
                        let mut m = ideal_matrix.clone();
                        for &(a, b) in &pairs {
                            m.set_residual(a, b, v * j)?;
                        }
                        m
                    }
                };
                let residuals = m.residuals().count();
                let (gauge, dev) = run_metrics(g, &m, &sch, &ideal.final_state)?;
                Ok((v, residuals, gauge, dev))
            })
            .collect::<CliResult<Vec<_>>>()?;
        for (v, residuals, gauge, dev) in results {
            let x = if kind == NoiseKind::Gradient { v * cfg.photonics.gradient.g } else { v };
            let name = kind.name();
            let row = |obs: &str, y: f64| {
                Row::new(sweep, x, format!("{name}.{obs}"), y)
                    .direction(sch.direction.name())
                    .run(sch.total_time, sch.steps)
                    .engine("full")
            };
            rows.push(row("max_gauge_violation", gauge));
            rows.push(row("deviation", dev));
            ctx.log.line(format!(
                "{name}, {sweep} {x:.4e}: {residuals} residual pairs, gauge error {gauge:.3e}, deviation {dev:.3e}"
            ));
        }
        if kind != NoiseKind::Gradient {
            let key = format!("{}.max_gauge_violation", kind.name());
            plot.push(kind.name(), series(&rows, |r| r.observable == key));
        }
    }
    Ok(Output {
        rows,
        plot: Some(plot),
        extra: Vec::new(),
    })
}

pub fn schedule_check(ctx: &mut Ctx<'_>) -> CliResult<Output> {
    let cfg = ctx.cfg;
    let g = &cfg.lattice;
    let p = &cfg.photonics;
    let grad = p.gradient;
    let sb = canonical_nn_schedule(&grad, p.resolution)?;
    let pairs = resonant_pairs(g, &grad, &sb, p.resolution);
    let resonant = pairs.iter().filter(|r| r.resonant).count();
    let nn = pairs.iter().filter(|r| r.nn).count();
    let spurious: Vec<_> = pairs.iter().filter(|r| r.resonant && !r.nn).collect();
    let report = collision_report_with_limit(g, &grad, p.resolution, p.scan_limit)?;

    let mut text = String::new();
    let _ = writeln!(text, "lattice {}x{}, gradient p = {}, q = {}, g = {}", g.lx(), g.ly(), grad.p, grad.q, grad.g);
    let _ = writeln!(text, "resolution {:e}", p.resolution);
    for s in &sb.sidebands {
        let _ = writeln!(text, "sideband detuning {:.12e}", s.detuning);
    }
    let _ = writeln!(text, "resonant pairs {resonant}, nearest-neighbour pairs {nn}, spurious {}", spurious.len());
    for s in spurious.iter().take(20) {
        let _ = writeln!(
            text,
            "  spurious ({}, {}) at distance {:.4}, mismatch {:.3e}",
            s.a, s.b, s.distance, s.mismatch
        );
    }
    let _ = writeln!(text, "closest non-NN splitting to a target: {:.6e}", report.min_gap);
    if report.nn_only() {
        let _ = writeln!(text, "verdict: NN-only");
    } else {
        let _ = writeln!(text, "verdict: {} collisions", report.collisions.len());
        for c in report.collisions.iter().take(20) {
            let _ = writeln!(
                text,
                "  ({}, {}) distance {:.4}, splitting {:.12e} vs target {:.12e}",
                c.a, c.b, c.distance, c.splitting, c.target
            );
        }
    }
    match report.max_safe_size {
        Some(l) => {
            let _ = writeln!(text, "largest collision-free square lattice: {l}x{l}");
        }
        None => {
            let _ = writeln!(text, "no collisions on square lattices up to {0}x{0}", report.scan_limit);
        }
    }
    for line in text.lines() {
        ctx.log.line(line);
    }

    let lsize = g.lx().max(g.ly()) as f64;
    let rows = [
        ("resonant_pairs", resonant as f64),
        ("nn_pairs", nn as f64),
        ("spurious_pairs", spurious.len() as f64),
        ("collisions", report.collisions.len() as f64),
        ("min_gap", report.min_gap),
        ("max_safe_size", report.max_safe_size.map_or(f64::INFINITY, |l| l as f64)),
    ]
    .into_iter()
    .map(|(name, v)| Row::new("lattice", lsize, name, v))
    .collect();
    Ok(Output {
        rows,
        plot: None,
        extra: vec![
            ("schedule-check.txt".into(), text),
            ("collisions.csv".into(), report.to_csv(g)),
        ],
    })
}
