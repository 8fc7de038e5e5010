//! Monte-Carlo driver: per slot, draw SNRs, build reports, allocate, split
//! power and score the realized rates; then aggregate over the window.
//!
//! Slot `t` draws its channel from `derive_seed(seed, t)`, independent of
//! the SNR point, group size or algorithm, so sweeps compare configurations
//! on the same fading realizations. Channel draws and reports run on the
//! current rayon pool. With [`FairnessMemory::Window`] the variance
//! allocator then walks the slots in order, feeding each slot the rates
//! delivered so far; otherwise allocation is parallel too. Results are
//! reduced in slot order, so they do not depend on the thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::allocator::{
    allocate_best_gain, allocate_decentralized, allocate_superiority,
    allocate_variance_with_history, default_l, power_allocate, quotas, Allocation,
    FairnessWeights,
};
use crate::channel::{derive_seed, gen_iid_exp_snr, make_group_map, GroupMap, SnrMatrix};
use crate::error::{Error, Result};
use crate::link::{group_stats, report_set, LinkParams, ReportSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Variance,
    BestGain,
    Decentralized,
    Superiority,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Variance,
        Algorithm::BestGain,
        Algorithm::Decentralized,
        Algorithm::Superiority,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Variance => "variance",
            Algorithm::BestGain => "best_gain",
            Algorithm::Decentralized => "decentralized",
            Algorithm::Superiority => "superiority",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{s}'")))
    }
}

/// What `R_k` the fairness pass of the variance allocator compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FairnessMemory {
    /// Only the rate assigned in the current slot.
    Slot,
    /// Rate delivered over the window so far, plus the current slot.
    Window,
}

impl FairnessMemory {
    pub fn name(self) -> &'static str {
        match self {
            FairnessMemory::Slot => "slot",
            FairnessMemory::Window => "window",
        }
    }
}

impl FromStr for FairnessMemory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slot" => Ok(FairnessMemory::Slot),
            "window" => Ok(FairnessMemory::Window),
            _ => Err(Error::Config(format!("unknown fairness memory '{s}' (slot|window)"))),
        }
    }
}

/// Experiment parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub users: usize,
    pub subcarriers: usize,
    pub group_size: usize,
    /// Reporting threshold; `f64::INFINITY` reports every group.
    pub epsilon: f64,
    pub link: LinkParams,
    /// Candidate-list length of the fairness pass.
    pub l: usize,
    pub weights: FairnessWeights,
    pub slots: usize,
    /// Mean per-subcarrier SNR points, in dB.
    pub snr_db: Vec<f64>,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub power_budget: f64,
    /// Variance-pass iteration budget; `None` means one per group.
    pub max_it: Option<usize>,
    pub fairness_memory: FairnessMemory,
}

impl SimConfig {
    /// 8 users, 128 subcarriers in groups of 4, threshold 0.5, unit gap,
    /// weights 2:1:3:1:2:2:4:4, 200 slots at 10 dB.
    pub fn reference() -> Self {
        Self {
            users: 8,
            subcarriers: 128,
            group_size: 4,
            epsilon: 0.5,
            link: LinkParams::with_gap(1.0).expect("unit gap"),
            l: default_l(8),
            weights: FairnessWeights::new(vec![2.0, 1.0, 3.0, 1.0, 2.0, 2.0, 4.0, 4.0])
                .expect("positive weights"),
            slots: 200,
            snr_db: vec![10.0],
            algorithm: Algorithm::Variance,
            seed: 7,
            power_budget: 1.0,
            max_it: None,
            fairness_memory: FairnessMemory::Window,
        }
    }

    pub fn validate(&self) -> Result<GroupMap> {
        if self.users == 0 {
            return Err(Error::Config("users must be at least 1".into()));
        }
        let map = make_group_map(self.subcarriers, self.group_size)?;
        if self.slots == 0 {
            return Err(Error::Config("slots must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("at least one SNR point is required".into()));
        }
        if let Some(s) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("SNR point {s} dB is not finite")));
        }
        if self.weights.users() != self.users {
            return Err(Error::Config(format!(
                "{} fairness weights given for {} users",
                self.weights.users(),
                self.users
            )));
        }
        if self.l == 0 || self.l > self.users {
            return Err(Error::Config(format!("L must lie in 1..={}, got {}", self.users, self.l)));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::Config(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if !(self.power_budget > 0.0) || !self.power_budget.is_finite() {
            return Err(Error::Config(format!(
                "power budget must be positive, got {}",
                self.power_budget
            )));
        }
        Ok(map)
    }
}

/// Outcome of one scheduling slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotMetrics {
    /// Realized rate per user, bits/s/Hz summed over owned subcarriers.
    pub user_rates: Vec<f64>,
    pub group_counts: Vec<usize>,
    pub assigned_fraction: f64,
    pub sum_rate: f64,
    pub reports: usize,
}

/// Window-level results for one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateMetrics {
    pub algorithm: Algorithm,
    pub snr_db: f64,
    pub slots: usize,
    /// Time-averaged sum rate divided by the subcarrier count.
    pub throughput_per_subcarrier: f64,
    /// `R_k` accumulated over the window.
    pub user_totals: Vec<f64>,
    /// `R_k / sum R`; all zero when nothing was delivered.
    pub shares: Vec<f64>,
    /// Weighted Jain index of the accumulated rates; `None` when nothing was delivered.
    pub jain: Option<f64>,
    pub assigned_fraction: f64,
    /// Sum of per-slot sum rates, in slot order.
    pub total_rate: f64,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Allocates one slot's reports with the configured algorithm.
///
/// `history` holds the rate each user received in earlier slots; only the
/// variance allocator reads it, and only under [`FairnessMemory::Window`].
pub fn allocate(config: &SimConfig, reports: &ReportSet, history: &[f64]) -> Result<Allocation> {
    match config.algorithm {
        Algorithm::Variance => {
            let history = match config.fairness_memory {
                FairnessMemory::Slot => &[][..],
                FairnessMemory::Window => history,
            };
            allocate_variance_with_history(reports, &config.weights, Some(config.l), config.max_it, history)
        }
        Algorithm::BestGain => allocate_best_gain(reports, None),
        Algorithm::Decentralized => allocate_decentralized(reports, &config.weights),
        Algorithm::Superiority => allocate_superiority(reports, &config.weights),
    }
}

/// Runs slot `slot` at mean SNR `snr_db` with no earlier delivered rate.
pub fn run_slot(config: &SimConfig, snr_db: f64, slot: u64) -> Result<SlotMetrics> {
    run_slot_with_history(config, snr_db, slot, &[])
}

/// Runs slot `slot` given the per-user rate delivered in earlier slots.
pub fn run_slot_with_history(config: &SimConfig, snr_db: f64, slot: u64, history: &[f64]) -> Result<SlotMetrics> {
    let map = config.validate()?;
    let channel = draw_slot(config, &map, snr_db, slot)?;
    score_slot(config, &map, &channel, history)
}

struct SlotChannel {
    snr: SnrMatrix,
    reports: ReportSet,
}

fn draw_slot(config: &SimConfig, map: &GroupMap, snr_db: f64, slot: u64) -> Result<SlotChannel> {
    let snr = gen_iid_exp_snr(
        config.users,
        config.subcarriers,
        db_to_linear(snr_db),
        derive_seed(config.seed, slot),
    )?;
    let stats = group_stats(&snr, map, &config.link)?;
    let reports = report_set(&stats, config.epsilon)?;
    Ok(SlotChannel { snr, reports })
}

fn score_slot(config: &SimConfig, map: &GroupMap, channel: &SlotChannel, history: &[f64]) -> Result<SlotMetrics> {
    let alloc = allocate(config, &channel.reports, history)?;
    let power = power_allocate(&alloc, config.power_budget, map)?;

    // every powered subcarrier sits at P_t / M, the level the SNR draw is normalized to
    let mut user_rates = vec![0.0; config.users];
    for group in 0..map.groups() {
        let Some(user) = alloc.owner(group) else { continue };
        let row = channel.snr.row(user);
        for s in map.members(group) {
            debug_assert!(power.subcarrier_power(s) > 0.0);
            user_rates[user] += config.link.rate(row[s]);
        }
    }
    let sum_rate = user_rates.iter().sum();
    Ok(SlotMetrics {
        user_rates,
        group_counts: alloc.group_counts().to_vec(),
        assigned_fraction: alloc.assigned() as f64 / map.groups() as f64,
        sum_rate,
        reports: channel.reports.report_count(),
    })
}

/// Per-slot metrics of the whole window at one SNR point, in slot order.
pub fn run_window(config: &SimConfig, snr_db: f64) -> Result<Vec<SlotMetrics>> {
    let map = config.validate()?;
    let channels = (0..config.slots as u64)
        .into_par_iter()
        .map(|t| draw_slot(config, &map, snr_db, t))
        .collect::<Result<Vec<_>>>()?;
    let sequential =
        config.algorithm == Algorithm::Variance && config.fairness_memory == FairnessMemory::Window;
    if !sequential {
        return channels
            .par_iter()
            .map(|c| score_slot(config, &map, c, &[]))
            .collect();
    }
    let mut delivered = vec![0.0; config.users];
    let mut out = Vec::with_capacity(channels.len());
    for c in &channels {
        let m = score_slot(config, &map, c, &delivered)?;
        for (acc, r) in delivered.iter_mut().zip(&m.user_rates) {
            *acc += r;
        }
        out.push(m);
    }
    Ok(out)
}

/// Runs every slot of the window at every SNR point.
pub fn run_experiment(config: &SimConfig) -> Result<Vec<AggregateMetrics>> {
    config.validate()?;
    config
        .snr_db
        .iter()
        .map(|&snr_db| Ok(aggregate(config, snr_db, &run_window(config, snr_db)?)))
        .collect()
}

/// Fixed-order reduction of slot results.
pub fn aggregate(config: &SimConfig, snr_db: f64, slots: &[SlotMetrics]) -> AggregateMetrics {
    let mut user_totals = vec![0.0; config.users];
    let mut total_rate = 0.0;
    let mut assigned = 0.0;
    for s in slots {
        for (acc, r) in user_totals.iter_mut().zip(&s.user_rates) {
            *acc += r;
        }
        total_rate += s.sum_rate;
        assigned += s.assigned_fraction;
    }
    let n = slots.len().max(1) as f64;
    let delivered: f64 = user_totals.iter().sum();
    let shares = if delivered > 0.0 {
        user_totals.iter().map(|r| r / delivered).collect()
    } else {
        vec![0.0; config.users]
    };
    AggregateMetrics {
        algorithm: config.algorithm,
        snr_db,
        slots: slots.len(),
        throughput_per_subcarrier: total_rate / (n * config.subcarriers as f64),
        jain: jain_index(&user_totals, &config.weights.normalized()),
        user_totals,
        shares,
        assigned_fraction: assigned / n,
        total_rate,
    }
}

/// Weighted Jain index `(sum x_k)^2 / (K sum x_k^2)` with `x_k = R_k / alpha_k`.
///
/// `None` when every rate is zero.
pub fn jain_index(rates: &[f64], alpha: &[f64]) -> Option<f64> {
    assert_eq!(rates.len(), alpha.len(), "one weight per user");
    let k = rates.len() as f64;
    let (sum, sq) = rates
        .iter()
        .zip(alpha)
        .map(|(r, a)| r / a)
        .fold((0.0, 0.0), |(s, q), x| (s + x, q + x * x));
    if !(sq > 0.0) {
        return None;
    }
    Some((sum * sum / (k * sq)).clamp(1.0 / k, 1.0))
}

/// One result row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: SimConfig,
    pub metrics: AggregateMetrics,
}

/// Runs each configuration; rows come out in input order, then SNR order.
pub fn sweep(configs: &[SimConfig]) -> Result<Vec<SweepRow>> {
    if configs.is_empty() {
        return Err(Error::Config("sweep needs at least one configuration".into()));
    }
    let mut rows = Vec::new();
    for config in configs {
        for metrics in run_experiment(config)? {
            rows.push(SweepRow {
                config: config.clone(),
                metrics,
            });
        }
    }
    Ok(rows)
}

/// Step-1 quotas of a configuration, for reporting.
pub fn config_quotas(config: &SimConfig) -> Result<Vec<usize>> {
    let map = config.validate()?;
    Ok(quotas(&config.weights, map.groups()).as_slice().to_vec())
}
