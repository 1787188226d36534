//! Reference values, embedded so verification is hermetic.

use multiplier_core::MultiplierParams;

/// One reference table: multipliers for nesting depths 1 through 10 with
/// I = 5%, T = 30%, n = 100.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceTable {
    pub table: u8,
    pub reserve: f64,
    pub origination: f64,
    pub expected: [u64; 10],
}

pub const INSURANCE: f64 = 0.05;
pub const TRANCHE: f64 = 0.30;
pub const ITERATIONS: u32 = 100;
pub const DEPTH: u32 = 10;

pub const REFERENCE_TABLES: [ReferenceTable; 4] = [
    ReferenceTable {
        table: 1,
        reserve: 0.05,
        origination: 1.0,
        expected: [
            24,
            150,
            824,
            4_453,
            23_992,
            129_164,
            695_302,
            3_742_788,
            20_147_225,
            108_451_327,
        ],
    },
    ReferenceTable {
        table: 2,
        reserve: 0.025,
        origination: 1.0,
        expected: [
            46,
            508,
            5_232,
            53_565,
            548_064,
            5_607_368,
            57_369_941,
            586_961_390,
            6_005_299_050,
            61_441_207_420,
        ],
    },
    ReferenceTable {
        table: 3,
        reserve: 0.05,
        origination: 1.05,
        expected: [
            24,
            158,
            914,
            5_199,
            29_479,
            167_054,
            946_589,
            5_363_637,
            30_391_743,
            172_207_323,
        ],
    },
    ReferenceTable {
        table: 4,
        reserve: 0.025,
        origination: 1.05,
        expected: [
            46,
            538,
            5_835,
            62_880,
            677_240,
            7_293_674,
            78_550_336,
            845_959_488,
            9_110_685_705,
            98_118_875_480,
        ],
    },
];

/// Reference ratio, to three decimals, for a fully insured chain with O = 1, I = 5%, T = 1.
pub const FULLY_INSURED_RATIO: f64 = 1.052;
/// Reference ratio, to two decimals, when one loan in two goes uninsured at R = 5%.
pub const SKIPPED_RATIO: f64 = 0.54;

/// Everything `verify` compares against. Defaults to the embedded values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixtures {
    pub tables: [ReferenceTable; 4],
    pub fully_insured_ratio: f64,
    pub skipped_ratio: f64,
}

impl Default for Fixtures {
    fn default() -> Self {
        Fixtures {
            tables: REFERENCE_TABLES,
            fully_insured_ratio: FULLY_INSURED_RATIO,
            skipped_ratio: SKIPPED_RATIO,
        }
    }
}

impl ReferenceTable {
    pub fn params(&self) -> MultiplierParams {
        MultiplierParams::new(
            self.reserve,
            INSURANCE,
            self.origination,
            TRANCHE,
            ITERATIONS,
            DEPTH,
        )
        .expect("fixture presets are valid")
    }

    pub fn caption(&self) -> String {
        format!(
            "Table {}: m for k = 1..10 with R = {}, O = {}, I = {}, T = {}, n = {}",
            self.table, self.reserve, self.origination, INSURANCE, TRANCHE, ITERATIONS
        )
    }
}

/// Integer-table tolerance: relative error within 1e-3, or within one
/// unit for entries up to 1000 (the tables mix rounding and truncation).
pub fn table_entry_matches(computed: f64, reference: f64) -> bool {
    let rel = (computed - reference).abs() / reference.abs();
    rel <= 1e-3 || (reference <= 1000.0 && (computed - reference).abs() <= 1.0)
}

/// The origination-fee presets, R = 5% and R = 2.5%, used for the semi-log checks.
pub fn semilog_presets() -> [ReferenceTable; 2] {
    [REFERENCE_TABLES[2], REFERENCE_TABLES[3]]
}
