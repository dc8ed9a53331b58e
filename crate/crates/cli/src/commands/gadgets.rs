//! Stator Wilson-loop readout and the post-selected magnetic preparation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z2sim::protocol::{magnetic_gs_links, measure_wilson_stator, prepare_magnetic_gs, FullLayout, WilsonPlan};
use z2sim::QubitRegister;

use super::{loop_name, Ctx, Output};
use crate::config::WilsonState;
use crate::error::CliResult;
use crate::output::Row;

pub fn wilson(ctx: &mut Ctx<'_>) -> CliResult<Output> {
    let cfg = ctx.cfg;
    let g = &cfg.lattice;
    let layout = FullLayout::new(g)?;
    let plans = cfg
        .loops
        .iter()
        .map(|c| WilsonPlan::auto(g, c))
        .collect::<z2sim::Result<Vec<_>>>()?;
    let states: Vec<QubitRegister> = match cfg.wilson_state {
        WilsonState::Electric => vec![QubitRegister::zero(g.num_links())?],
        WilsonState::Magnetic => vec![magnetic_gs_links(g)?],
        WilsonState::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.wilson_samples)
                .map(|_| QubitRegister::random(g.num_links(), &mut rng))
                .collect::<z2sim::Result<_>>()?
        }
    };
    ctx.log.line(format!(
        "stator readout of {} loop(s) on {} state(s), full register of {} qubits",
        cfg.loops.len(),
        states.len(),
        layout.num_qubits()
    ));
    let mut rows = Vec::new();
    let (mut worst, mut restore) = (0.0f64, 0.0f64);
    for (i, links) in states.iter().enumerate() {
        let full = layout.embed(links)?;
        for (c, plan) in cfg.loops.iter().zip(&plans) {
            let mut st = full.clone();
            let got = measure_wilson_stator(&mut st, &layout, plan)?;
            let direct = links.expectation_pauli(&g.loop_operator(c)?)?;
            restore = restore.max(st.distance(&full)?);
            worst = worst.max((got - direct).abs());
            let name = loop_name(c);
            for (what, v) in [("stator", got), ("direct", direct), ("difference", got - direct)] {
                rows.push(Row::new("sample", i as f64, format!("{name}.{what}"), v).engine("full"));
            }
        }
    }
    ctx.log.line(format!(
        "max |stator - direct| = {worst:.3e}; state restored to {restore:.3e}"
    ));
    Ok(Output {
        rows,
        ..Default::default()
    })
}

pub fn prep_magnetic(ctx: &mut Ctx<'_>) -> CliResult<Output> {
    let g = &ctx.cfg.lattice;
    let prep = prepare_magnetic_gs(g)?;
    let reference = magnetic_gs_links(g)?;
    let fidelity = prep.links.fidelity(&reference)?;
    let mut residual = 0.0f64;
    for p in 0..g.num_plaquettes() {
        residual = residual.max(1.0 - prep.links.expectation_pauli(&g.plaquette_operator(p)?)?);
    }
    let expected = 0.5f64.powi(g.num_plaquettes() as i32);
    ctx.log.line(format!(
        "success probability {:.12} (2^-{} = {expected:.12}), 1 - F = {:.3e}, max 1 - <B> = {residual:.3e}",
        prep.success_probability,
        g.num_plaquettes(),
        1.0 - fidelity
    ));
    let plaquettes = g.num_plaquettes() as f64;
    let rows = [
        ("success_probability", prep.success_probability),
        ("fidelity", fidelity),
        ("b_residual", residual),
    ]
    .into_iter()
    .map(|(name, v)| Row::new("plaquettes", plaquettes, name, v).engine("full"))
    .collect();
    Ok(Output {
        rows,
        ..Default::default()
    })
}
