//! The two-user, four-group worked example.

use std::io::Write;

use crate::allocator::{allocate_best_gain, allocate_variance, oracle_exhaustive, FairnessWeights};
use crate::link::{sample_variance, ReportSet};

use super::CliError;

/// Per-group transmissible rates of the two users (one subcarrier per group).
pub fn worked_example_table() -> Vec<Vec<f64>> {
    vec![vec![90.0, 60.0, 20.0, 10.0], vec![100.0, 90.0, 70.0, 70.0]]
}

pub const EXPECTED_R_VAR: f64 = 290.0;
pub const EXPECTED_R_BEST: f64 = 220.0;
pub const EXPECTED_V1: f64 = 1366.67;
pub const EXPECTED_V2: f64 = 225.0;

#[derive(Debug, Clone, PartialEq)]
pub struct WorkedOutcome {
    pub v1: f64,
    pub v2: f64,
    pub r_var: f64,
    pub r_best: f64,
    pub r_oracle: f64,
    pub variance_groups: Vec<Vec<usize>>,
    pub best_gain_groups: Vec<Vec<usize>>,
}

impl WorkedOutcome {
    /// Differences against the expected figures; empty when everything matches.
    pub fn mismatches(&self) -> Vec<String> {
        let mut diff = Vec::new();
        if self.r_var != EXPECTED_R_VAR {
            diff.push(format!("R_var: expected {EXPECTED_R_VAR}, got {}", self.r_var));
        }
        if self.r_best != EXPECTED_R_BEST {
            diff.push(format!("R_best: expected {EXPECTED_R_BEST}, got {}", self.r_best));
        }
        if (self.v1 - EXPECTED_V1).abs() > 0.5 {
            diff.push(format!("V1: expected {EXPECTED_V1} +/- 0.5, got {:.2}", self.v1));
        }
        if self.v2 != EXPECTED_V2 {
            diff.push(format!("V2: expected {EXPECTED_V2}, got {:.2}", self.v2));
        }
        diff
    }
}

/// Runs the table through the variance allocator, the capped best-gain
/// allocator (two groups each) and the oracle.
pub fn evaluate_worked_example(table: &[Vec<f64>]) -> crate::Result<WorkedOutcome> {
    let reports = ReportSet::report_all(table, 1)?;
    let weights = FairnessWeights::uniform(table.len())?;
    let var = allocate_variance(&reports, &weights, None, None)?;
    let caps = vec![2; table.len()];
    let best = allocate_best_gain(&reports, Some(&caps))?;
    let oracle = oracle_exhaustive(&reports, &caps)?;
    Ok(WorkedOutcome {
        v1: sample_variance(&table[0])?,
        v2: sample_variance(&table[1])?,
        r_var: var.sum_rate(),
        r_best: best.sum_rate(),
        r_oracle: oracle.sum_rate,
        variance_groups: (0..table.len()).map(|k| var.groups_of(k)).collect(),
        best_gain_groups: (0..table.len()).map(|k| best.groups_of(k)).collect(),
    })
}

fn labels(groups: &[usize]) -> String {
    groups.iter().map(|g| format!("G{}", g + 1)).collect::<Vec<_>>().join(" ")
}

/// Prints the report; exit code 0 when all figures match, 1 otherwise.
pub fn cmd_example(corrupt: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut table = worked_example_table();
    if corrupt {
        table[1][3] = 75.0;
    }
    let o = evaluate_worked_example(&table).map_err(|e| CliError::Failed(e.to_string()))?;
    for (k, row) in table.iter().enumerate() {
        let rates = row.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
        let v = if k == 0 { o.v1 } else { o.v2 };
        writeln!(out, "user {} rates: {rates}  variance {v:.2}", k + 1)?;
    }
    writeln!(
        out,
        "variance allocation: user 1 -> {}, user 2 -> {}",
        labels(&o.variance_groups[0]),
        labels(&o.variance_groups[1])
    )?;
    writeln!(
        out,
        "best-gain allocation (2 per user): user 1 -> {}, user 2 -> {}",
        labels(&o.best_gain_groups[0]),
        labels(&o.best_gain_groups[1])
    )?;
    writeln!(out, "exhaustive optimum (2 per user): {}", o.r_oracle)?;
    writeln!(out, "V1 rounds to {}", o.v1.round())?;
    writeln!(out, "V1={:.2} V2={:.2} R_var={} R_best={}", o.v1, o.v2, o.r_var, o.r_best)?;
    let diff = o.mismatches();
    if diff.is_empty() {
        return Ok(0);
    }
    for d in diff {
        writeln!(out, "MISMATCH {d}")?;
    }
    Ok(1)
}
