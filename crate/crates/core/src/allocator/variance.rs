//! The variance-ordered two-step allocator.

use super::{check_users, default_l, quotas, Allocation, FairnessWeights, Phase, Quotas};
use crate::error::{Error, Result};
use crate::link::{variance_unchecked, ReportSet};

/// Hands every group that exactly one user reported to that user, quota permitting.
pub fn preassign_unconflicted(reports: &ReportSet, remaining: &mut Quotas, alloc: &mut Allocation) {
    for group in 0..reports.groups() {
        if alloc.owner(group).is_some() {
            continue;
        }
        if let [user] = reports.reporters(group)[..] {
            if remaining.take(user) {
                alloc.put(reports, group, user, Phase::Preassign);
            }
        }
    }
}

/// What the variance pass did.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Step1Trace {
    /// Loop iterations consumed, assignments and retirements alike.
    pub iterations: usize,
    /// Users taken out of competition because their budget ran out, in order.
    pub retired: Vec<usize>,
}

/// Variance-ordered pass.
///
/// Each iteration picks the competing user whose remaining reported groups
/// have the largest rate variance and gives them their best remaining group
/// if budget is left, otherwise retires them. An assigned group disappears
/// from every user's remaining set. Users with fewer than two remaining
/// groups have variance 0; users with none are skipped. The pass ends after
/// `max_it` iterations, or once no competing user has two or more groups
/// left, in which case the remainder falls to the fairness pass.
pub fn step1_variance(
    reports: &ReportSet,
    remaining: &mut Quotas,
    alloc: &mut Allocation,
    max_it: usize,
) -> Step1Trace {
    let users = reports.users();
    let mut open: Vec<Vec<usize>> = (0..users)
        .map(|k| {
            reports
                .reported_groups(k)
                .into_iter()
                .filter(|&g| alloc.owner(g).is_none())
                .collect()
        })
        .collect();
    let variance_of = |groups: &[usize], k: usize| {
        let rates: Vec<f64> = groups.iter().map(|&g| reports.rate(k, g)).collect();
        variance_unchecked(&rates)
    };
    let mut variance: Vec<f64> = (0..users).map(|k| variance_of(&open[k], k)).collect();
    let mut competing = vec![true; users];
    let mut trace = Step1Trace::default();

    while trace.iterations < max_it {
        if (0..users).all(|k| !competing[k] || open[k].len() < 2) {
            break;
        }
        // strict > keeps the lowest index on ties
        let mut pick: Option<usize> = None;
        for k in (0..users).filter(|&k| competing[k] && !open[k].is_empty()) {
            if pick.is_none_or(|p| variance[k] > variance[p]) {
                pick = Some(k);
            }
        }
        let Some(user) = pick else { break };
        trace.iterations += 1;

        if !remaining.take(user) {
            competing[user] = false;
            trace.retired.push(user);
            continue;
        }
        let mut best = open[user][0];
        for &g in &open[user][1..] {
            if reports.rate(user, g) > reports.rate(user, best) {
                best = g;
            }
        }
        alloc.put(reports, best, user, Phase::Variance);
        for k in 0..users {
            if let Some(pos) = open[k].iter().position(|&g| g == best) {
                open[k].remove(pos);
                variance[k] = variance_of(&open[k], k);
            }
        }
    }
    trace
}

/// Fairness pass: each free group, in ascending order, goes to the user with
/// the smallest `R_k / alpha_k` among its `l` highest-rate reporters.
///
/// `R_k` is `history[k]` (rate already delivered to `k` before this
/// allocation, empty for none) plus what `k` holds in `alloc`, updated after
/// every assignment. Groups nobody reported stay free.
pub fn step2_fairness(
    reports: &ReportSet,
    weights: &FairnessWeights,
    alloc: &mut Allocation,
    l: usize,
    history: &[f64],
) -> Result<()> {
    check_users(reports, weights)?;
    if !history.is_empty() && history.len() != reports.users() {
        return Err(Error::Dimension {
            expected: format!("{} history entries", reports.users()),
            got: history.len().to_string(),
        });
    }
    let prior = |k: usize| history.get(k).copied().unwrap_or(0.0);
    if l == 0 || l > reports.users() {
        return Err(Error::Config(format!(
            "L must lie in 1..={}, got {l}",
            reports.users()
        )));
    }
    let free: Vec<usize> = alloc.unassigned_groups().collect();
    for group in free {
        let mut candidates = reports.reporters(group);
        if candidates.is_empty() {
            continue;
        }
        // stable sort: equal rates keep ascending user order
        candidates.sort_by(|&a, &b| reports.rate(b, group).total_cmp(&reports.rate(a, group)));
        candidates.truncate(l);
        candidates.sort_unstable();
        let mut pick = candidates[0];
        for &k in &candidates[1..] {
            let load = |u: usize| (prior(u) + alloc.user_rate(u)) / weights.alpha(u);
            if load(k) < load(pick) {
                pick = k;
            }
        }
        alloc.put(reports, group, pick, Phase::Fairness);
    }
    Ok(())
}

/// Quotas, pre-assignment, variance pass and fairness pass in sequence.
///
/// `l` defaults to [`default_l`] and `max_it` to the group count. The
/// fairness pass only sees this allocation's rates; see
/// [`allocate_variance_with_history`] for carrying totals across slots.
pub fn allocate_variance(
    reports: &ReportSet,
    weights: &FairnessWeights,
    l: Option<usize>,
    max_it: Option<usize>,
) -> Result<Allocation> {
    allocate_variance_with_history(reports, weights, l, max_it, &[])
}

/// [`allocate_variance`] whose fairness pass ranks users by `history[k]`
/// (rate delivered in earlier slots) plus the current allocation.
pub fn allocate_variance_with_history(
    reports: &ReportSet,
    weights: &FairnessWeights,
    l: Option<usize>,
    max_it: Option<usize>,
    history: &[f64],
) -> Result<Allocation> {
    check_users(reports, weights)?;
    let mut remaining = quotas(weights, reports.groups());
    let mut alloc = Allocation::for_reports(reports);
    preassign_unconflicted(reports, &mut remaining, &mut alloc);
    step1_variance(
        reports,
        &mut remaining,
        &mut alloc,
        max_it.unwrap_or(reports.groups()),
    );
    step2_fairness(
        reports,
        weights,
        &mut alloc,
        l.unwrap_or_else(|| default_l(reports.users())),
        history,
    )?;
    Ok(alloc)
}
