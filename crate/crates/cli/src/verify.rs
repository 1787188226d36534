//! Hermetic verification of the computed multipliers against the embedded
//! reference values and the library's own cross-checks.

use multiplier_core::semilog::fit_semilog;
use multiplier_core::{
    classic_curve, classic_series, din_ratio, din_ratio_skipped, growth_factor, kraken_eval,
    kraken_nested_oracle, run_simulation, MultiplierParams, SimConfig, SkipSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fixtures::{table_entry_matches, Fixtures, ReferenceTable};
use crate::table::OutputTable;

/// Seed for the randomized parameter sets, fixed so reports are reproducible.
pub const VERIFY_SEED: u64 = 0x5eed_2012;
pub const ORACLE_CASES: usize = 128;
pub const SIMULATOR_CASES: usize = 64;
pub const COLLAPSE_CASES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Relative(f64),
    Absolute(f64),
    /// Reference-table rule: relative 1e-3, or one unit for entries <= 1000.
    Table,
    AtLeast(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: Tolerance,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: f64, computed: f64, tolerance: Tolerance) -> Self {
        let passed = match tolerance {
            Tolerance::Relative(t) => (computed - expected).abs() <= t * expected.abs(),
            Tolerance::Absolute(t) => (computed - expected).abs() <= t,
            Tolerance::Table => table_entry_matches(computed, expected),
            Tolerance::AtLeast(floor) => computed >= floor,
        };
        Check {
            name: name.into(),
            expected,
            computed,
            tolerance,
            passed,
        }
    }

    /// Check on a worst-case error that must stay within `limit`.
    fn max_error(name: impl Into<String>, worst: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            expected: 0.0,
            computed: worst,
            tolerance: Tolerance::Absolute(limit),
            passed: worst <= limit,
        }
    }

    fn tolerance_value(&self) -> f64 {
        match self.tolerance {
            Tolerance::Relative(t) | Tolerance::Absolute(t) | Tolerance::AtLeast(t) => t,
            Tolerance::Table => 1e-3,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn table_checks(fixtures: &[ReferenceTable]) -> Vec<Check> {
    fixtures
        .iter()
        .flat_map(|f| {
            let curve = kraken_eval(&f.params()).expect("fixture presets stay finite");
            f.expected
                .iter()
                .zip(curve.values().collect::<Vec<_>>())
                .enumerate()
                .map(|(i, (&reference, computed))| {
                    Check::new(
                        format!("table{}_k{}", f.table, i + 1),
                        reference as f64,
                        computed,
                        Tolerance::Table,
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn random_small_params(rng: &mut impl Rng) -> MultiplierParams {
    MultiplierParams::new(
        rng.gen_range(0.01..0.99),
        rng.gen_range(0.0..0.2),
        rng.gen_range(1.0..1.2),
        rng.gen_range(0.0..=1.0),
        rng.gen_range(1..=5),
        rng.gen_range(1..=4),
    )
    .expect("sampled inside the valid domain")
}

pub fn oracle_checks(rng: &mut impl Rng) -> Vec<Check> {
    let worst = (0..ORACLE_CASES)
        .map(|_| {
            let p = random_small_params(rng);
            let oracle = kraken_nested_oracle(&p).expect("n^k within budget");
            rel(oracle, kraken_eval(&p).unwrap().last().unwrap())
        })
        .fold(0.0, f64::max);
    let hand = MultiplierParams::new(0.5, 0.05, 1.0, 1.0, 2, 2).unwrap();
    vec![
        Check::max_error("oracle_vs_recurrence_random", worst, 1e-12),
        // 0.75 + 0.75 * 0.95 * (0.75 * 1.95)
        Check::new(
            "oracle_hand_expansion_n2_k2",
            1.792_031_25,
            kraken_nested_oracle(&hand).unwrap(),
            Tolerance::Relative(1e-12),
        ),
        Check::new(
            "recurrence_hand_expansion_n2_k2",
            1.792_031_25,
            kraken_eval(&hand).unwrap().last().unwrap(),
            Tolerance::Relative(1e-12),
        ),
    ]
}

pub fn classic_checks() -> Vec<Check> {
    let reserve = 0.05;
    let curve = classic_curve(reserve, 2000).expect("valid reserve");
    let v: Vec<f64> = curve.values().collect();
    let bound = (1.0 - reserve) / reserve;
    let increasing = v
        .windows(2)
        .take_while(|w| w[0] < bound * (1.0 - 1e-13))
        .all(|w| w[1] > w[0]);
    let decelerating = v.windows(3).take(200).all(|w| w[2] - w[1] < w[1] - w[0]);
    let max = v.iter().copied().fold(f64::MIN, f64::max);
    let bounded = max <= bound * (1.0 + 1e-14);
    vec![
        Check::new(
            "classic_series_R0.05_n100",
            18.8875,
            classic_series(reserve, 100).unwrap(),
            Tolerance::Absolute(1e-3),
        ),
        Check::new(
            "classic_converges_to_(1-R)/R",
            bound,
            *v.last().unwrap(),
            Tolerance::Absolute(1e-9),
        ),
        Check::new(
            "classic_with_initial_deposit_converges_to_1/R",
            1.0 / reserve,
            *v.last().unwrap() + 1.0,
            Tolerance::Absolute(1e-9),
        ),
        Check::new(
            "classic_monotone_saturating_bounded",
            1.0,
            f64::from(u8::from(increasing && decelerating && bounded)),
            Tolerance::Absolute(0.0),
        ),
    ]
}

pub fn semilog_checks(presets: &[ReferenceTable]) -> Vec<Check> {
    presets
        .iter()
        .flat_map(|f| {
            let p = f.params();
            let curve = kraken_eval(&p).unwrap();
            let fit = fit_semilog(&curve, 3).expect("eight points");
            let ratio = curve.at(10).unwrap() / curve.at(9).unwrap();
            [
                Check::new(
                    format!("semilog_r_squared_R{}", f.reserve),
                    1.0,
                    fit.r_squared,
                    Tolerance::AtLeast(0.9999),
                ),
                Check::new(
                    format!("growth_ratio_m10/m9_R{}", f.reserve),
                    growth_factor(&p).unwrap(),
                    ratio,
                    Tolerance::Relative(1e-3),
                ),
            ]
        })
        .collect()
}

pub fn din_checks(fully_insured: f64, skipped: f64) -> Vec<Check> {
    vec![
        Check::new(
            "din_ratio_O1_I0.05_T1",
            fully_insured,
            din_ratio(1.0, 0.05, 1.0).unwrap(),
            Tolerance::Absolute(1e-3),
        ),
        Check::new(
            "din_ratio_skipped_R0.05_s2_n2",
            skipped,
            din_ratio_skipped(1.0, 0.05, 0.05, SkipSpec::new(2, 2).unwrap()).unwrap(),
            Tolerance::Absolute(1e-2),
        ),
    ]
}

pub fn random_frictionless_config(rng: &mut impl Rng) -> SimConfig {
    let params = MultiplierParams::new(
        rng.gen_range(0.01..0.6),
        rng.gen_range(0.0..0.1),
        rng.gen_range(1.0..1.1),
        rng.gen_range(0.0..=1.0),
        rng.gen_range(1..=50),
        rng.gen_range(1..=5),
    )
    .expect("sampled inside the valid domain");
    SimConfig {
        seed_capital: rng.gen_range(0.5..100.0),
        ..SimConfig::new(params)
    }
}

pub fn simulator_checks(rng: &mut impl Rng) -> Vec<Check> {
    let worst = (0..SIMULATOR_CASES)
        .map(|_| {
            let cfg = random_frictionless_config(rng);
            let run = run_simulation(&cfg).expect("frictionless run within budget");
            let analytic = kraken_eval(&cfg.params).unwrap().last().unwrap();
            rel(run.empirical_multiplier, analytic)
        })
        .fold(0.0, f64::max);
    vec![Check::max_error(
        "simulator_vs_recurrence_random",
        worst,
        1e-9,
    )]
}

pub fn random_uncoupled_params(rng: &mut impl Rng) -> MultiplierParams {
    let reserve = rng.gen_range(0.01..0.99);
    let origination = rng.gen_range(1.0..1.5);
    let (insurance, tranche) = if rng.gen_bool(0.5) {
        (rng.gen_range(0.0..=origination), 0.0)
    } else {
        (origination, rng.gen_range(0.0..=1.0))
    };
    MultiplierParams::new(
        reserve,
        insurance,
        origination,
        tranche,
        rng.gen_range(1..=200),
        rng.gen_range(1..=12),
    )
    .expect("sampled inside the valid domain")
}

pub fn collapse_checks(rng: &mut impl Rng) -> Vec<Check> {
    let worst = (0..COLLAPSE_CASES)
        .map(|_| {
            let p = random_uncoupled_params(rng);
            let classic = classic_series(p.reserve(), p.iterations()).unwrap();
            kraken_eval(&p)
                .unwrap()
                .values()
                .map(|v| rel(v, classic))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    vec![Check::max_error("collapse_to_classic_random", worst, 1e-12)]
}

/// Every check, in report order.
pub fn run_checks(fixtures: &Fixtures) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let semilog: Vec<ReferenceTable> = fixtures
        .tables
        .iter()
        .filter(|f| f.origination > 1.0)
        .copied()
        .collect();
    let mut checks = table_checks(&fixtures.tables);
    checks.extend(oracle_checks(&mut rng));
    checks.extend(classic_checks());
    checks.extend(semilog_checks(&semilog));
    checks.extend(din_checks(
        fixtures.fully_insured_ratio,
        fixtures.skipped_ratio,
    ));
    checks.extend(simulator_checks(&mut rng));
    checks.extend(collapse_checks(&mut rng));
    checks
}

pub fn report(checks: &[Check]) -> OutputTable {
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut t = OutputTable::new(
        "verify",
        format!("Verification: {} checks, {} failed", checks.len(), failed),
        &["expected", "computed", "tolerance", "passed"],
    );
    for c in checks {
        t.push_values(
            c.name.clone(),
            &[
                c.expected,
                c.computed,
                c.tolerance_value(),
                f64::from(u8::from(c.passed)),
            ],
        );
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::REFERENCE_TABLES;

    #[test]
    fn all_checks_pass_on_embedded_fixtures() {
        let checks = run_checks(&Fixtures::default());
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert_eq!(
            checks
                .iter()
                .filter(|c| c.name.starts_with("table"))
                .count(),
            40
        );
    }

    #[test]
    fn corrupted_fixture_fails() {
        let mut fixtures = REFERENCE_TABLES;
        fixtures[2].expected[6] += 5_000;
        let checks = table_checks(&fixtures);
        let failed: Vec<_> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| &c.name)
            .collect();
        assert_eq!(failed, vec!["table3_k7"]);
    }

    #[test]
    fn check_tolerances() {
        assert!(Check::new("a", 1.052, 1.0526, Tolerance::Absolute(1e-3)).passed);
        assert!(!Check::new("a", 1.052, 1.054, Tolerance::Absolute(1e-3)).passed);
        assert!(Check::new("a", 100.0, 100.05, Tolerance::Relative(1e-3)).passed);
        assert!(!Check::new("a", 1.0, 0.9998, Tolerance::AtLeast(0.9999)).passed);
        assert!(!Check::max_error("a", 2e-12, 1e-12).passed);
    }

    #[test]
    fn report_flags_failures() {
        let checks = vec![
            Check::new("good", 1.0, 1.0, Tolerance::Absolute(0.0)),
            Check::new("bad", 1.0, 2.0, Tolerance::Absolute(0.0)),
        ];
        let t = report(&checks);
        assert!(t.caption.contains("1 failed"));
        assert_eq!(t.rows()[1].values[3], Some(0.0));
    }
}
