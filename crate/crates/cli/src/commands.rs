//! Builders that turn library results into output tables, one per subcommand.

use multiplier_core::sim::HaltReason;
use multiplier_core::{
    classic_asymptote, classic_curve, classic_limit, din_ratio_skipped, kraken_eval,
    kraken_eval_ln, run_simulation, sweep, Axis, MultiplierParams, Result, SimConfig, SimResult,
    SkipSpec,
};

use crate::fixtures::REFERENCE_TABLES;
use crate::table::OutputTable;

fn describe(p: &MultiplierParams) -> String {
    format!(
        "R = {}, I = {}, O = {}, T = {}, n = {}, k = {}",
        p.reserve(),
        p.insurance(),
        p.origination(),
        p.tranche(),
        p.iterations(),
        p.depth()
    )
}

/// Classic partial sums for n = 1..=iterations, then the limit rows.
pub fn classic_table(
    reserve: f64,
    iterations: u32,
    include_initial_deposit: bool,
) -> Result<OutputTable> {
    let mut curve = classic_curve(reserve, iterations)?;
    if include_initial_deposit {
        curve = curve.shifted(1.0);
    }
    let mut t = OutputTable::new(
        "classic",
        format!(
            "Classic multiplier, R = {reserve}{}",
            if include_initial_deposit {
                ", initial deposit counted"
            } else {
                ""
            }
        ),
        &["n", "m"],
    );
    for p in curve.points() {
        t.push_values("series", &[f64::from(p.level), p.multiplier]);
    }
    t.push(
        "asymptote",
        vec![
            None,
            Some(classic_asymptote(reserve, include_initial_deposit)?),
        ],
    );
    t.push("limit", vec![None, Some(classic_limit(reserve)?)]);
    Ok(t)
}

pub fn kraken_table(params: &MultiplierParams, name: &str, caption: String) -> Result<OutputTable> {
    let curve = kraken_eval(params)?;
    let mut t = OutputTable::new(name, caption, &["k", "m"]);
    for p in curve.points() {
        t.push_values("level", &[f64::from(p.level), p.multiplier]);
    }
    Ok(t)
}

pub fn kraken_command_table(params: &MultiplierParams) -> Result<OutputTable> {
    kraken_table(
        params,
        "kraken",
        format!("Nested multiplier, {}", describe(params)),
    )
}

/// Log-space variant for depths where m leaves the f64 range.
pub fn kraken_log_table(params: &MultiplierParams) -> OutputTable {
    let mut t = OutputTable::new(
        "kraken",
        format!("Nested multiplier (log space), {}", describe(params)),
        &["k", "log10_m"],
    );
    for (k, ln_m) in (1u32..).zip(kraken_eval_ln(params)) {
        t.push_values("level", &[f64::from(k), ln_m / std::f64::consts::LN_10]);
    }
    t
}

/// The four reference tables, each computed from its preset.
pub fn reference_tables() -> Vec<OutputTable> {
    REFERENCE_TABLES
        .iter()
        .map(|f| {
            kraken_table(&f.params(), &format!("table{}", f.table), f.caption())
                .expect("fixture presets stay finite")
        })
        .collect()
}

pub fn sweep_table(base: &MultiplierParams, axis: Axis, values: &[f64]) -> Result<OutputTable> {
    let mut t = OutputTable::new(
        "sweep",
        format!("Sweep over {axis}, base {}", describe(base)),
        &["value", "k", "m"],
    );
    for (v, curve) in sweep(base, axis, values)? {
        for p in curve.points() {
            t.push_values(
                format!("{axis}={v}"),
                &[v, f64::from(p.level), p.multiplier],
            );
        }
    }
    Ok(t)
}

/// Plot-ready `(k, m, log10 m)` series, one per swept value.
pub fn curve_table(base: &MultiplierParams, axis: Axis, values: &[f64]) -> Result<OutputTable> {
    let mut t = OutputTable::new(
        "curve",
        format!("Semi-log curve over {axis}, base {}", describe(base)),
        &["value", "k", "m", "log10_m"],
    );
    for (v, curve) in sweep(base, axis, values)? {
        for p in curve.points() {
            t.push_values(
                format!("{axis}={v}"),
                &[v, f64::from(p.level), p.multiplier, p.multiplier.log10()],
            );
        }
    }
    Ok(t)
}

fn halt_label(h: HaltReason) -> (&'static str, Option<f64>) {
    match h {
        HaltReason::DepthReached => ("halt_depth_reached", None),
        HaltReason::LoansBelowMinimum { level } => ("halt_loans_below_minimum", Some(level.into())),
        HaltReason::NoSyntheticCapital { level } => {
            ("halt_no_synthetic_capital", Some(level.into()))
        }
        HaltReason::CapReached { level, .. } => ("halt_cap_reached", Some(level.into())),
    }
}

pub fn simulate_table(config: &SimConfig) -> Result<(OutputTable, SimResult)> {
    let result = run_simulation(config)?;
    let p = &config.params;
    let mut t = OutputTable::new(
        "simulate",
        format!(
            "Ledger simulation, {}, seed = {}, leak = {}, skip every = {}",
            describe(p),
            config.seed_capital,
            config.leak,
            config
                .skip_insurance_every
                .map_or("none".to_string(), |j| j.to_string())
        ),
        &["level", "value"],
    );
    let scalar = |t: &mut OutputTable, label: &str, v: f64| t.push(label, vec![None, Some(v)]);

    scalar(&mut t, "empirical_multiplier", result.empirical_multiplier);
    // analytic comparison only applies to frictionless runs
    let frictionless = config.leak == 0.0
        && config.skip_insurance_every.is_none()
        && config.min_loan == 0.0
        && config.synthetic_capital_cap.is_none();
    if let Ok(curve) = kraken_eval(p) {
        let analytic = curve.last().unwrap();
        scalar(&mut t, "analytic_multiplier", analytic);
        scalar(
            &mut t,
            "relative_delta",
            (result.empirical_multiplier - analytic).abs() / analytic,
        );
    }
    scalar(&mut t, "frictionless", f64::from(u8::from(frictionless)));
    for (level, m) in (1u32..).zip(&result.level_multipliers) {
        t.push_values("level_multiplier", &[f64::from(level), *m]);
    }
    let (label, level) = halt_label(result.halt);
    t.push(label, vec![level, None]);
    let s = &result.final_state;
    for (label, v) in [
        ("reserves", s.reserves),
        ("deposits", s.deposits),
        ("loans_outstanding", s.loans_outstanding),
        ("synthetic_capital", s.synthetic_capital),
        ("insured_notional", s.insured_notional),
        ("premiums_paid", s.premiums_paid),
        ("fees_collected", s.fees_collected),
    ] {
        scalar(&mut t, label, v);
    }
    scalar(&mut t, "events", result.events.len() as f64);
    if s.loans_outstanding > 0.0 {
        scalar(&mut t, "synthetic_to_loans", result.synthetic_to_loans());
    }
    if let Some(every) = config.skip_insurance_every {
        // one uninsured loan per group of `every`, sitting at iteration `every`
        let skip = SkipSpec::new(every, every)?;
        if let Ok(r) = din_ratio_skipped(p.origination(), p.insurance(), p.reserve(), skip) {
            scalar(&mut t, "din_ratio_skipped", r);
        }
    }
    Ok((t, result))
}
