//! Reference allocators used for comparison: per-group best user, a
//! round-based decentralized claim scheme, and claim-then-swap.

use super::{check_users, quotas, Allocation, FairnessWeights, Phase};
use crate::error::{Error, Result};
use crate::link::ReportSet;

/// Each group, in ascending order, goes to its highest-rate reporter that
/// still has room under `caps` (no limit when `caps` is `None`).
pub fn allocate_best_gain(reports: &ReportSet, caps: Option<&[usize]>) -> Result<Allocation> {
    if let Some(c) = caps {
        if c.len() != reports.users() {
            return Err(Error::Dimension {
                expected: format!("{} caps", reports.users()),
                got: c.len().to_string(),
            });
        }
    }
    let mut alloc = Allocation::for_reports(reports);
    for group in 0..reports.groups() {
        let mut best: Option<usize> = None;
        for user in reports.reporters(group) {
            if caps.is_some_and(|c| alloc.group_count(user) >= c[user]) {
                continue;
            }
            if best.is_none_or(|b| reports.rate(user, group) > reports.rate(b, group)) {
                best = Some(user);
            }
        }
        if let Some(user) = best {
            alloc.put(reports, group, user, Phase::Baseline);
        }
    }
    Ok(alloc)
}

/// Round-based claiming: every user with budget left claims their best free
/// reported group; a contested group goes to the claimant with the higher
/// rate and the others try again next round.
pub fn allocate_decentralized(reports: &ReportSet, weights: &FairnessWeights) -> Result<Allocation> {
    check_users(reports, weights)?;
    let mut remaining = quotas(weights, reports.groups());
    let mut alloc = Allocation::for_reports(reports);
    loop {
        // winner per group for this round
        let mut winner: Vec<Option<usize>> = vec![None; reports.groups()];
        let mut any = false;
        for user in (0..reports.users()).filter(|&u| remaining.get(u) > 0) {
            let claim = reports
                .reported_groups(user)
                .into_iter()
                .filter(|&g| alloc.owner(g).is_none())
                .fold(None, |best: Option<usize>, g| match best {
                    Some(b) if reports.rate(user, b) >= reports.rate(user, g) => Some(b),
                    _ => Some(g),
                });
            let Some(group) = claim else { continue };
            any = true;
            let slot = &mut winner[group];
            if slot.is_none_or(|w| reports.rate(user, group) > reports.rate(w, group)) {
                *slot = Some(user);
            }
        }
        if !any {
            break;
        }
        for (group, user) in winner.into_iter().enumerate() {
            if let Some(user) = user {
                remaining.take(user);
                alloc.put(reports, group, user, Phase::Baseline);
            }
        }
    }
    Ok(alloc)
}

/// Improving pairwise swaps between groups owned by different users.
///
/// A swap is taken when both users reported the group they receive and the
/// sum rate strictly increases; group counts never change. Stops after a
/// scan with no improvement or after `max_scans` scans. Returns the sum rate
/// before any swap followed by the sum after each accepted swap.
pub fn improve_by_swaps(reports: &ReportSet, alloc: &mut Allocation, max_scans: usize) -> Vec<f64> {
    let mut history = vec![alloc.sum_rate()];
    let groups = alloc.groups();
    for _ in 0..max_scans {
        let mut improved = false;
        for a in 0..groups {
            for b in a + 1..groups {
                let (Some(ua), Some(ub)) = (alloc.owner(a), alloc.owner(b)) else {
                    continue;
                };
                if ua == ub || !reports.is_reported(ua, b) || !reports.is_reported(ub, a) {
                    continue;
                }
                let after = reports.group_rate(ua, b) + reports.group_rate(ub, a);
                let before = reports.group_rate(ua, a) + reports.group_rate(ub, b);
                if after - before > 0.0 {
                    alloc.swap(reports, a, b);
                    history.push(alloc.sum_rate());
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    history
}

/// Decentralized claiming followed by swap improvement (at most `M_g^2` scans).
pub fn allocate_superiority(reports: &ReportSet, weights: &FairnessWeights) -> Result<Allocation> {
    allocate_superiority_traced(reports, weights).map(|(alloc, _)| alloc)
}

/// [`allocate_superiority`] plus the sum-rate history of the swap loop.
pub fn allocate_superiority_traced(
    reports: &ReportSet,
    weights: &FairnessWeights,
) -> Result<(Allocation, Vec<f64>)> {
    let mut alloc = allocate_decentralized(reports, weights)?;
    let scans = reports.groups() * reports.groups();
    let history = improve_by_swaps(reports, &mut alloc, scans);
    Ok((alloc, history))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> ReportSet {
        ReportSet::report_all(
            &[vec![90.0, 60.0, 20.0, 10.0], vec![100.0, 90.0, 70.0, 70.0]],
            1,
        )
        .unwrap()
    }

    #[test]
    fn best_gain_capped_worked_example() {
        let alloc = allocate_best_gain(&worked(), Some(&[2, 2])).unwrap();
        assert_eq!(alloc.groups_of(1), vec![0, 1]);
        assert_eq!(alloc.groups_of(0), vec![2, 3]);
        assert_eq!(alloc.sum_rate(), 220.0);
        let uncapped = allocate_best_gain(&worked(), None).unwrap();
        assert_eq!(uncapped.groups_of(1), vec![0, 1, 2, 3]);
        assert!(allocate_best_gain(&worked(), Some(&[2])).is_err());
    }

    #[test]
    fn best_gain_single_user_and_ties() {
        let one = ReportSet::report_all(&[vec![1.0, 0.0, 2.0]], 1).unwrap();
        assert_eq!(allocate_best_gain(&one, None).unwrap().assigned(), 3);
        let flat = ReportSet::report_all(&[vec![1.0; 3], vec![1.0; 3], vec![1.0; 3]], 1).unwrap();
        let alloc = allocate_best_gain(&flat, None).unwrap();
        assert!(alloc.owners().iter().all(|&o| o == Some(0)));
    }

    #[test]
    fn decentralized_disjoint_bests() {
        let reports = ReportSet::report_all(&[vec![9.0, 1.0], vec![1.0, 9.0]], 1).unwrap();
        let alloc = allocate_decentralized(&reports, &FairnessWeights::uniform(2).unwrap()).unwrap();
        assert_eq!(alloc.owners(), &[Some(0), Some(1)]);
    }

    #[test]
    fn decentralized_conflict_goes_to_higher_rate() {
        let reports = ReportSet::report_all(&[vec![3.0], vec![4.0]], 1).unwrap();
        let w = FairnessWeights::new(vec![1.0, 1.0]).unwrap();
        // quotas floor(0.5 * 1) = 0 leave nothing to claim
        assert_eq!(allocate_decentralized(&reports, &w).unwrap().assigned(), 0);
        let two = ReportSet::report_all(&[vec![3.0, 0.0], vec![4.0, 0.0]], 1).unwrap();
        let alloc = allocate_decentralized(&two, &w).unwrap();
        assert_eq!(alloc.owner(0), Some(1));
        assert_eq!(alloc.owner(1), Some(0));
    }

    #[test]
    fn decentralized_worked_example() {
        let alloc = allocate_decentralized(&worked(), &FairnessWeights::uniform(2).unwrap()).unwrap();
        assert_eq!(alloc.sum_rate(), 220.0);
    }

    #[test]
    fn swap_fixes_crossed_assignment() {
        let reports = ReportSet::report_all(&[vec![10.0, 1.0], vec![9.0, 8.0]], 1).unwrap();
        let mut alloc = Allocation::for_reports(&reports);
        alloc.assign(&reports, 1, 0, Phase::Baseline).unwrap();
        alloc.assign(&reports, 0, 1, Phase::Baseline).unwrap();
        assert_eq!(alloc.sum_rate(), 10.0);
        let history = improve_by_swaps(&reports, &mut alloc, 4);
        assert_eq!(alloc.owners(), &[Some(0), Some(1)]);
        assert_eq!(history, vec![10.0, 18.0]);
    }

    #[test]
    fn swap_fixed_point_is_unchanged() {
        let reports = ReportSet::report_all(&[vec![10.0, 1.0], vec![9.0, 8.0]], 1).unwrap();
        let mut alloc = Allocation::for_reports(&reports);
        alloc.assign(&reports, 0, 0, Phase::Baseline).unwrap();
        alloc.assign(&reports, 1, 1, Phase::Baseline).unwrap();
        let before = alloc.clone();
        assert_eq!(improve_by_swaps(&reports, &mut alloc, 4), vec![18.0]);
        assert_eq!(alloc, before);
    }

    #[test]
    fn superiority_worked_example() {
        let (alloc, history) =
            allocate_superiority_traced(&worked(), &FairnessWeights::uniform(2).unwrap()).unwrap();
        assert!(alloc.sum_rate() >= 220.0);
        assert_eq!(alloc.sum_rate(), 290.0);
        assert!(history.windows(2).all(|w| w[1] > w[0]));
    }
}
