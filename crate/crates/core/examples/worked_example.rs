//! The two-user, four-group example: variance ordering versus capped best gain.

use ofdma_varalloc::allocator::{
    allocate_best_gain, preassign_unconflicted, quotas, step1_variance, step2_fairness, Allocation,
    FairnessWeights,
};
use ofdma_varalloc::cli::example::{evaluate_worked_example, worked_example_table};
use ofdma_varalloc::link::{sample_variance, ReportSet};

fn main() -> ofdma_varalloc::Result<()> {
    let table = worked_example_table();
    for (k, row) in table.iter().enumerate() {
        println!("user {}: {:?} variance {:.2}", k + 1, row, sample_variance(row)?);
    }

    let reports = ReportSet::report_all(&table, 1)?;
    let weights = FairnessWeights::uniform(2)?;
    let mut remaining = quotas(&weights, reports.groups());
    let mut alloc = Allocation::for_reports(&reports);
    preassign_unconflicted(&reports, &mut remaining, &mut alloc);
    let trace = step1_variance(&reports, &mut remaining, &mut alloc, reports.groups());
    println!("variance pass: {} iterations, retired {:?}", trace.iterations, trace.retired);
    step2_fairness(&reports, &weights, &mut alloc, 2, &[0.0, 0.0])?;
    for g in 0..reports.groups() {
        println!("G{} -> user {} ({:?})", g + 1, alloc.owner(g).map_or(0, |k| k + 1), alloc.phase(g));
    }
    println!("R_var = {}", alloc.sum_rate());

    let best = allocate_best_gain(&reports, Some(&[2, 2]))?;
    println!("R_best = {}", best.sum_rate());

    let outcome = evaluate_worked_example(&table)?;
    println!("oracle optimum = {}", outcome.r_oracle);
    assert!(outcome.mismatches().is_empty());
    Ok(())
}
