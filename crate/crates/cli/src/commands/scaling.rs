//! Error budget and Trotter convergence.

use std::sync::Arc;

use z2sim::analysis::fit_slope;
use z2sim::gauge_dual::{DualStructure, TrotterOrder};
use z2sim::photonics::error_budget;
use z2sim::protocol::trotter_error_scan;

use super::{series, Ctx, Output};
use crate::error::CliResult;
use crate::output::Row;
use crate::svg::Plot;

pub fn budget(ctx: &mut Ctx<'_>) -> CliResult<Output> {
    let cfg = ctx.cfg;
    let model = &cfg.budget;
    let mut rows = Vec::new();
    for &c in &cfg.cooperativities {
        let r = error_budget(c, cfg.budget_time, model)?;
        for (name, v) in [
            ("optimal_steps", r.optimal_steps as f64),
            ("min_error", r.min_error),
            ("trotter_error", r.trotter_error),
            ("gate_error", r.gate_error),
            ("t_max", r.t_max),
        ] {
            rows.push(Row::new("cooperativity", c, name, v));
        }
    }
    let pts = series(&rows, |r| r.observable == "t_max");
    let k = model.order as f64;
    let expected = model.gate_exponent * k / (k + 1.0);
    if pts.len() >= 3 {
        let fit = fit_slope(&pts)?;
        ctx.log.line(format!(
            "T_max ~ C^{:.4} (+- {:.1e}); model exponent {expected:.4}",
            fit.slope, fit.stderr
        ));
        rows.push(Row::new("fit", expected, "t_max_exponent", fit.slope));
    } else {
        ctx.log.line("fewer than 3 cooperativities; no exponent fit");
    }
    let mut plot = Plot::new("Longest run under the error cap", "cooperativity", "T_max").log_log();
    plot.push("T_max", pts);
    Ok(Output {
        rows,
        plot: Some(plot),
        extra: Vec::new(),
    })
}

fn order_label(o: TrotterOrder) -> &'static str {
    match o {
        TrotterOrder::First => "order1",
        TrotterOrder::Second => "order2",
    }
}

pub fn trotter_scan(ctx: &mut Ctx<'_>) -> CliResult<Output> {
    let cfg = ctx.cfg;
    let s = Arc::new(DualStructure::new(&cfg.lattice)?);
    let (le, lb) = cfg.trotter_couplings;
    let t = cfg.trotter_time;
    let mut rows = Vec::new();
    let mut plot = Plot::new("Trotter error", "steps M", "error").log_log();
    for &order in &cfg.trotter_orders {
        let label = order_label(order);
        let pts = trotter_error_scan(&s, le, lb, t, &cfg.trotter_steps, order)?;
        for p in &pts {
            rows.push(
                Row::new("steps", p.steps as f64, format!("error.{label}"), p.error)
                    .run(t, p.steps)
                    .engine("dual"),
            );
        }
        let xy: Vec<(f64, f64)> = pts.iter().map(|p| (p.steps as f64, p.error)).collect();
        if xy.len() >= 3 && xy.iter().all(|p| p.1 > 0.0) {
            let fit = fit_slope(&xy)?;
            ctx.log.line(format!("{label}: error ~ M^{:.4}", fit.slope));
            rows.push(Row::new("fit", t, format!("slope.{label}"), fit.slope).engine("dual"));
        }
        plot.push(label, xy);
    }
    Ok(Output {
        rows,
        plot: Some(plot),
        extra: Vec::new(),
    })
}
