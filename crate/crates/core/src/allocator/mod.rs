//! Group allocation: the variance-ordered two-step allocator, proportional
//! quotas, equal power split, baseline allocators and an exhaustive oracle.
//!
//! Every allocator consumes a [`ReportSet`](crate::link::ReportSet) and never
//! hands a user a group that user did not report. Ties are broken by the
//! lowest user index, then the lowest group index.

mod baseline;
mod oracle;
mod power;
mod variance;

pub use baseline::{
    allocate_best_gain, allocate_decentralized, allocate_superiority, allocate_superiority_traced,
    improve_by_swaps,
};
pub use oracle::{oracle_exhaustive, OracleSolution, ORACLE_MAX_GROUPS, ORACLE_MAX_USERS};
pub use power::{power_allocate, PowerMap};
pub use variance::{
    allocate_variance, allocate_variance_with_history, preassign_unconflicted, step1_variance, step2_fairness, Step1Trace,
};

use crate::error::{Error, Result};
use crate::link::ReportSet;

/// Proportional-fairness weights `alpha_k`, kept as given and normalized on read.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessWeights {
    raw: Vec<f64>,
    total: f64,
}

impl FairnessWeights {
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Config("at least one fairness weight is required".into()));
        }
        if let Some(w) = raw.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::Config(format!("fairness weights must be positive, got {w}")));
        }
        let total = raw.iter().sum();
        Ok(Self { raw, total })
    }

    pub fn uniform(users: usize) -> Result<Self> {
        Self::new(vec![1.0; users])
    }

    pub fn users(&self) -> usize {
        self.raw.len()
    }

    /// Normalized weight of `user`.
    pub fn alpha(&self, user: usize) -> f64 {
        self.raw[user] / self.total
    }

    pub fn normalized(&self) -> Vec<f64> {
        (0..self.users()).map(|k| self.alpha(k)).collect()
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }
}

/// Per-user group budget `floor(alpha_k * M_g)`, decremented as groups are handed out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotas(Vec<usize>);

impl Quotas {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        Self(counts)
    }

    pub fn get(&self, user: usize) -> usize {
        self.0[user]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Uses one unit of `user`'s budget; false when none is left.
    pub fn take(&mut self, user: usize) -> bool {
        match self.0[user] {
            0 => false,
            ref mut q => {
                *q -= 1;
                true
            }
        }
    }
}

pub fn quotas(weights: &FairnessWeights, groups: usize) -> Quotas {
    // raw * M_g / total keeps integer weights exact: e.g. 4 * 19 / 19 == 4.0
    Quotas(
        weights
            .raw
            .iter()
            .map(|w| (w * groups as f64 / weights.total).floor() as usize)
            .collect(),
    )
}

/// `max(1, round(K / 4))` with halves rounded up.
pub fn default_l(users: usize) -> usize {
    ((users + 2) / 4).max(1)
}

/// Which allocation pass produced an assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Group reported by exactly one user.
    Preassign,
    /// Variance-ordered pass.
    Variance,
    /// Fairness pass over the leftovers.
    Fairness,
    /// Produced by a baseline allocator.
    Baseline,
}

/// Group ownership plus running per-user totals.
///
/// `user_rate(k)` is the sum of group rates (`mean per-subcarrier rate * N_g`)
/// over the groups `k` owns.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    owner: Vec<Option<usize>>,
    phase: Vec<Option<Phase>>,
    rates: Vec<f64>,
    counts: Vec<usize>,
}

impl Allocation {
    pub fn empty(users: usize, groups: usize) -> Self {
        Self {
            owner: vec![None; groups],
            phase: vec![None; groups],
            rates: vec![0.0; users],
            counts: vec![0; users],
        }
    }

    pub fn for_reports(reports: &ReportSet) -> Self {
        Self::empty(reports.users(), reports.groups())
    }

    pub fn users(&self) -> usize {
        self.rates.len()
    }

    pub fn groups(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, group: usize) -> Option<usize> {
        self.owner[group]
    }

    pub fn owners(&self) -> &[Option<usize>] {
        &self.owner
    }

    pub fn phase(&self, group: usize) -> Option<Phase> {
        self.phase[group]
    }

    pub fn user_rate(&self, user: usize) -> f64 {
        self.rates[user]
    }

    pub fn user_rates(&self) -> &[f64] {
        &self.rates
    }

    /// `M_{g,k}`
    pub fn group_count(&self, user: usize) -> usize {
        self.counts[user]
    }

    pub fn group_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn groups_of(&self, user: usize) -> Vec<usize> {
        (0..self.groups()).filter(|&g| self.owner[g] == Some(user)).collect()
    }

    pub fn assigned(&self) -> usize {
        self.owner.iter().filter(|o| o.is_some()).count()
    }

    pub fn unassigned_groups(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.groups()).filter(|&g| self.owner[g].is_none())
    }

    pub fn sum_rate(&self) -> f64 {
        self.rates.iter().sum()
    }

    /// Assigns `group` to `user`; the group must be free and reported by the user.
    pub fn assign(&mut self, reports: &ReportSet, group: usize, user: usize, phase: Phase) -> Result<()> {
        if user >= self.users() || group >= self.groups() {
            return Err(Error::Dimension {
                expected: format!("user < {} and group < {}", self.users(), self.groups()),
                got: format!("user {user}, group {group}"),
            });
        }
        if let Some(prev) = self.owner[group] {
            return Err(Error::Config(format!("group {group} already owned by user {prev}")));
        }
        if !reports.is_reported(user, group) {
            return Err(Error::Config(format!("user {user} did not report group {group}")));
        }
        self.put(reports, group, user, phase);
        Ok(())
    }

    pub(crate) fn put(&mut self, reports: &ReportSet, group: usize, user: usize, phase: Phase) {
        debug_assert!(self.owner[group].is_none());
        self.owner[group] = Some(user);
        self.phase[group] = Some(phase);
        self.rates[user] += reports.group_rate(user, group);
        self.counts[user] += 1;
    }

    /// Exchanges the owners of two groups held by different users, then
    /// recomputes both users' totals in ascending group order.
    pub(crate) fn swap(&mut self, reports: &ReportSet, a: usize, b: usize) {
        let (ua, ub) = (self.owner[a].unwrap(), self.owner[b].unwrap());
        self.owner[a] = Some(ub);
        self.owner[b] = Some(ua);
        for u in [ua, ub] {
            self.rates[u] = self
                .groups_of(u)
                .into_iter()
                .map(|g| reports.group_rate(u, g))
                .sum();
        }
    }
}

pub(crate) fn check_users(reports: &ReportSet, weights: &FairnessWeights) -> Result<()> {
    if reports.users() != weights.users() {
        return Err(Error::Dimension {
            expected: format!("{} fairness weights", reports.users()),
            got: weights.users().to_string(),
        });
    }
    Ok(())
}
