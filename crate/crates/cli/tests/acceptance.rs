//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the target fails if any line fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use multiplier_cli::fixtures::{semilog_presets, Fixtures, REFERENCE_TABLES};
use multiplier_cli::verify::{
    random_frictionless_config, random_small_params, random_uncoupled_params, table_checks,
    VERIFY_SEED,
};
use multiplier_core::semilog::fit_semilog;
use multiplier_core::{
    classic_asymptote, classic_curve, classic_series, din_ratio, din_ratio_skipped, kraken_eval,
    kraken_nested_oracle, run_simulation, MultiplierParams, SkipSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let checks = table_checks(&REFERENCE_TABLES);
    let elapsed = start.elapsed();
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let worst = checks
        .iter()
        .filter(|c| c.expected > 1000.0)
        .map(|c| rel(c.computed, c.expected))
        .fold(0.0, f64::max);
    ensure(
        checks.len() == 40 && failed.is_empty() && elapsed < Duration::from_secs(1),
        format!(
            "{} entries, failed {failed:?}, worst rel err above 1000 = {worst:.2e}, {elapsed:?}",
            checks.len()
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let mut worst: f64 = 0.0;
    let cases = 200;
    for _ in 0..cases {
        let p = random_small_params(&mut rng);
        assert!(p.iterations() <= 5 && p.depth() <= 4);
        let oracle = kraken_nested_oracle(&p).map_err(|e| e.to_string())?;
        let fast = kraken_eval(&p).map_err(|e| e.to_string())?;
        worst = worst.max(rel(fast.last().unwrap(), oracle));
    }
    // R = 0.5, n = 2: A = 0.75; c = 0.95; m1 = 1.4625, m2 = 0.75 * (1 + 0.95 * 1.4625)
    let hand = MultiplierParams::new(0.5, 0.05, 1.0, 1.0, 2, 2).unwrap();
    let expanded = 1.79203125;
    let hand_oracle = rel(kraken_nested_oracle(&hand).unwrap(), expanded);
    let hand_fast = rel(kraken_eval(&hand).unwrap().last().unwrap(), expanded);
    let worst_hand = hand_oracle.max(hand_fast);
    ensure(
        worst <= 1e-12 && worst_hand <= 1e-12,
        format!("{cases} random sets worst rel err {worst:.2e}; hand case {worst_hand:.2e}"),
    )
}

fn classic_series_shape() -> Outcome {
    let m100 = classic_series(0.05, 100).map_err(|e| e.to_string())?;
    let curve = classic_curve(0.05, 500).map_err(|e| e.to_string())?;
    let v: Vec<f64> = curve.values().collect();
    let monotone = v.windows(2).all(|w| w[1] > w[0]);
    let bounded = v.iter().all(|&m| m <= 19.0);
    let steps: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    let saturating = steps.windows(2).all(|s| s[1] < s[0]);
    let gap = 19.0 - v[v.len() - 1];
    let with_initial = classic_asymptote(0.05, true).map_err(|e| e.to_string())?;
    let shifted_gap = 20.0 - (v[v.len() - 1] + 1.0);
    ensure(
        (m100 - 18.8875).abs() <= 1e-3
            && monotone
            && bounded
            && saturating
            && gap <= 1e-9
            && (with_initial - 20.0).abs() <= 1e-12
            && shifted_gap <= 1e-9,
        format!(
            "m(100) = {m100:.6}; monotone {monotone}, saturating {saturating}, bounded {bounded}; \
             gap to 19 at n=500 {gap:.1e}, gap to 20 with initial deposit {shifted_gap:.1e}"
        ),
    )
}

fn semilog_linearity() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for f in semilog_presets() {
        let p = f.params();
        let curve = kraken_eval(&p).map_err(|e| e.to_string())?;
        let fit = fit_semilog(&curve, 3).ok_or("fit failed")?;
        let ratio = curve.at(10).unwrap() / curve.at(9).unwrap();
        let factors = p.factors();
        let ac = factors.geometric_sum * factors.coupling;
        let ratio_err = rel(ratio, ac);
        ok &= fit.r_squared >= 0.9999 && ratio_err <= 1e-3;
        lines.push(format!(
            "R={}: R^2 = {:.8}, m10/m9 = {ratio:.5} vs A*c = {ac:.5} (rel {ratio_err:.1e})",
            f.reserve, fit.r_squared
        ));
    }
    ensure(ok, lines.join("; "))
}

fn fully_insured_ratio() -> Outcome {
    let r = din_ratio(1.0, 0.05, 1.0).map_err(|e| e.to_string())?;
    let expected = Fixtures::default().fully_insured_ratio;
    ensure(
        (r - expected).abs() <= 1e-3,
        format!("din_ratio = {r:.6} vs {expected} (tolerance 0.001)"),
    )
}

fn skipped_ratio() -> Outcome {
    let r = din_ratio_skipped(1.0, 0.05, 0.05, SkipSpec::new(2, 2).unwrap())
        .map_err(|e| e.to_string())?;
    let expected = Fixtures::default().skipped_ratio;
    ensure(
        (r - expected).abs() <= 1e-2,
        format!("din_ratio_skipped = {r:.6} vs {expected} (tolerance 0.01)"),
    )
}

fn simulator_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 0x51);
    let cases = 60;
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let config = random_frictionless_config(&mut rng);
        assert!(config.params.iterations() <= 50 && config.params.depth() <= 5);
        let result = run_simulation(&config).map_err(|e| e.to_string())?;
        let analytic = kraken_eval(&config.params)
            .map_err(|e| e.to_string())?
            .last()
            .unwrap();
        worst = worst.max(rel(result.empirical_multiplier, analytic));
    }
    let elapsed = start.elapsed();
    ensure(
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        format!("{cases} configs, worst rel err {worst:.2e}, {elapsed:?}"),
    )
}

fn collapse_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 0xc0);
    let cases = 1000;
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let p = random_uncoupled_params(&mut rng);
        assert_eq!(p.coupling(), 0.0);
        let classic = classic_series(p.reserve(), p.iterations()).map_err(|e| e.to_string())?;
        for m in kraken_eval(&p).map_err(|e| e.to_string())?.values() {
            worst = worst.max(rel(m, classic));
        }
    }
    ensure(
        worst <= 1e-12,
        format!("{cases} sets with (O-I)T = 0, worst rel err {worst:.2e}"),
    )
}

fn verify_exit_status() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_multiplier");
    let status = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .map(|o| o.status.code())
            .map_err(|e| e.to_string())
    };
    let clean = status(&["verify"])?;
    let mut targets: Vec<String> = (1..=4)
        .flat_map(|t| (1..=10).map(move |k| format!("{t}:{k}")))
        .collect();
    targets.push("din".into());
    targets.push("din-skipped".into());
    let mut unflipped = Vec::new();
    for t in &targets {
        if status(&["verify", "--corrupt-fixture", t])? != Some(1) {
            unflipped.push(t.clone());
        }
    }
    ensure(
        clean == Some(0) && unflipped.is_empty(),
        format!(
            "clean exit {clean:?}; {} corrupted fixtures, not flipped: {unflipped:?}",
            targets.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("table reproduction", table_reproduction),
        ("oracle equivalence", oracle_equivalence),
        ("classic series", classic_series_shape),
        ("semi-log linearity", semilog_linearity),
        ("fully insured DIN ratio", fully_insured_ratio),
        ("skipped-insurance DIN ratio", skipped_ratio),
        ("simulator equivalence", simulator_equivalence),
        ("collapse property", collapse_property),
        ("verify exit status", verify_exit_status),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} criteria, {failures} failed", criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
