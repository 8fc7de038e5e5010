//! Self-check suite behind `ofdma-sim validate`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::allocator::{
    allocate_best_gain, allocate_decentralized, allocate_superiority_traced, allocate_variance,
    oracle_exhaustive, power_allocate, preassign_unconflicted, quotas, step1_variance, Allocation,
    FairnessWeights,
};
use crate::channel::make_group_map;
use crate::link::{sample_variance, ReportSet};
use crate::sim::{jain_index, SimConfig};

use super::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    /// Mean of `variance sum rate / oracle optimum` over instances with a positive optimum.
    pub oracle_mean_ratio: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "check={} cases={} failures={} status={}\n",
                c.name,
                c.cases,
                c.failures.len(),
                if c.passed() { "pass" } else { "fail" }
            ));
            for f in c.failures.iter().take(5) {
                s.push_str(&format!("  failure {}: {f}\n", c.name));
            }
        }
        s.push_str(&format!("metric=oracle_mean_ratio value={:.6}\n", self.oracle_mean_ratio));
        let failed: usize = self.checks.iter().filter(|c| !c.passed()).count();
        s.push_str(&format!(
            "summary status={} failed_checks={failed}\n",
            if self.passed() { "pass" } else { "fail" }
        ));
        s
    }
}

/// Random instance: rates ~ Exp(1), each (user, group) reported with probability `report_prob`.
pub fn random_instance(
    rng: &mut impl Rng,
    max_users: usize,
    max_groups: usize,
    report_prob: f64,
) -> (ReportSet, FairnessWeights) {
    let users = rng.random_range(1..=max_users);
    let groups = rng.random_range(1..=max_groups);
    let group_size = rng.random_range(1..=4);
    let rows: Vec<Vec<f64>> = (0..users)
        .map(|_| (0..groups).map(|_| Exp1.sample(rng)).collect())
        .collect();
    let mask: Vec<Vec<bool>> = (0..users)
        .map(|_| (0..groups).map(|_| rng.random_bool(report_prob)).collect())
        .collect();
    let weights = FairnessWeights::new((0..users).map(|_| rng.random_range(1..=4) as f64).collect())
        .expect("positive weights");
    (ReportSet::new(&rows, &mask, group_size).expect("valid instance"), weights)
}

fn all_allocations(reports: &ReportSet, weights: &FairnessWeights) -> Vec<(&'static str, Allocation)> {
    vec![
        ("variance", allocate_variance(reports, weights, None, None).expect("variance")),
        ("best_gain", allocate_best_gain(reports, None).expect("best_gain")),
        ("decentralized", allocate_decentralized(reports, weights).expect("decentralized")),
        ("superiority", allocate_superiority_traced(reports, weights).expect("superiority").0),
    ]
}

/// Every allocator against the exhaustive optimum under its own per-user group counts.
pub fn check_oracle(seed: u64, instances: usize) -> (CheckResult, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let (mut ratio_sum, mut ratio_n) = (0.0, 0usize);
    for i in 0..instances {
        let (reports, weights) = random_instance(&mut rng, 3, 6, 1.0);
        for (name, alloc) in all_allocations(&reports, &weights) {
            let opt = oracle_exhaustive(&reports, alloc.group_counts()).expect("small instance");
            if alloc.sum_rate() > opt.sum_rate + 1e-9 * opt.sum_rate.max(1.0) {
                failures.push(format!("instance {i}: {name} {} > oracle {}", alloc.sum_rate(), opt.sum_rate));
            }
            if name == "variance" && opt.sum_rate > 0.0 {
                ratio_sum += alloc.sum_rate() / opt.sum_rate;
                ratio_n += 1;
            }
        }
    }
    let check = CheckResult {
        name: "oracle_dominance",
        cases: instances,
        failures,
    };
    (check, ratio_sum / ratio_n.max(1) as f64)
}

pub fn check_quota_safety(seed: u64, cases: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let (reports, weights) = random_instance(&mut rng, 6, 12, 0.6);
        let caps = quotas(&weights, reports.groups());
        let mut remaining = caps.clone();
        let mut alloc = Allocation::for_reports(&reports);
        preassign_unconflicted(&reports, &mut remaining, &mut alloc);
        step1_variance(&reports, &mut remaining, &mut alloc, reports.groups());
        for k in 0..reports.users() {
            if alloc.group_count(k) > caps.get(k) {
                failures.push(format!("case {i}: user {k} holds {} > quota {}", alloc.group_count(k), caps.get(k)));
            }
        }
    }
    CheckResult {
        name: "quota_safety",
        cases,
        failures,
    }
}

pub fn check_exclusivity(seed: u64, cases: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let (reports, weights) = random_instance(&mut rng, 6, 12, 0.6);
        for (name, alloc) in all_allocations(&reports, &weights) {
            let mut counts = vec![0usize; reports.users()];
            let mut rates = vec![0.0; reports.users()];
            for g in 0..reports.groups() {
                if let Some(k) = alloc.owner(g) {
                    counts[k] += 1;
                    rates[k] += reports.group_rate(k, g);
                    if !reports.is_reported(k, g) {
                        failures.push(format!("case {i}: {name} gave unreported group {g} to {k}"));
                    }
                }
            }
            if counts != alloc.group_counts() {
                failures.push(format!("case {i}: {name} counts {:?} != owners {counts:?}", alloc.group_counts()));
            }
            for k in 0..reports.users() {
                if (rates[k] - alloc.user_rate(k)).abs() > 1e-9 * rates[k].max(1.0) {
                    failures.push(format!("case {i}: {name} user {k} rate drift"));
                }
            }
        }
    }
    CheckResult {
        name: "exclusivity",
        cases,
        failures,
    }
}

pub fn check_power(seed: u64, cases: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let (reports, weights) = random_instance(&mut rng, 6, 12, 0.6);
        let map = make_group_map(reports.groups() * reports.group_size(), reports.group_size()).unwrap();
        let budget: f64 = rng.random_range(0.1..10.0);
        let alloc = allocate_variance(&reports, &weights, None, None).unwrap();
        let power = power_allocate(&alloc, budget, &map).unwrap();
        let per = budget / map.subcarriers() as f64;
        for s in 0..map.subcarriers() {
            let expect = if alloc.owner(map.group_of(s)).is_some() { per } else { 0.0 };
            if power.subcarrier_power(s) != expect {
                failures.push(format!("case {i}: subcarrier {s} carries {}", power.subcarrier_power(s)));
            }
        }
        let expected_total = budget * alloc.assigned() as f64 / map.groups() as f64;
        if (power.allocated() - expected_total).abs() > 1e-12 * budget || power.allocated() > budget * (1.0 + 1e-12) {
            failures.push(format!("case {i}: total power {} (expected {expected_total})", power.allocated()));
        }
    }
    CheckResult {
        name: "power_per_subcarrier",
        cases,
        failures,
    }
}

pub fn check_jain(seed: u64, cases: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let k = rng.random_range(1..=24);
        let rates: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..100.0)).collect();
        let alpha: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
        let Some(j) = jain_index(&rates, &alpha) else { continue };
        if !(j >= 1.0 / k as f64 && j <= 1.0) {
            failures.push(format!("case {i}: index {j} outside [1/{k}, 1]"));
        }
        let c: f64 = rng.random_range(1e-3..1e3);
        let scaled: Vec<f64> = rates.iter().map(|r| r * c).collect();
        let js = jain_index(&scaled, &alpha).unwrap();
        if (js - j).abs() > 1e-12 {
            failures.push(format!("case {i}: scaling by {c} moved index {j} -> {js}"));
        }
    }
    CheckResult {
        name: "jain_laws",
        cases,
        failures,
    }
}

pub fn check_variance_laws(seed: u64, cases: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = rng.random_range(2..=16);
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-100.0..100.0)).collect();
        let shift: f64 = rng.random_range(-100.0..100.0);
        let scale: f64 = rng.random_range(0.1..10.0);
        let v = sample_variance(&xs).unwrap();
        let vs = sample_variance(&xs.iter().map(|x| x + shift).collect::<Vec<_>>()).unwrap();
        let va = sample_variance(&xs.iter().map(|x| x * scale).collect::<Vec<_>>()).unwrap();
        if (vs - v).abs() > 1e-9 * v.max(1.0) {
            failures.push(format!("case {i}: shift changed variance {v} -> {vs}"));
        }
        if (va - scale * scale * v).abs() > 1e-9 * (scale * scale * v).max(1e-300) {
            failures.push(format!("case {i}: scaling gave {va}, expected {}", scale * scale * v));
        }
    }
    CheckResult {
        name: "variance_laws",
        cases,
        failures,
    }
}

pub fn check_swap_monotonicity(seed: u64, cases: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let (reports, weights) = random_instance(&mut rng, 6, 12, 0.8);
        let (alloc, history) = allocate_superiority_traced(&reports, &weights).unwrap();
        if history.windows(2).any(|w| w[1] < w[0]) {
            failures.push(format!("case {i}: sum rate decreased during swaps"));
        }
        if (alloc.sum_rate() - history.last().unwrap()).abs() > 1e-9 * alloc.sum_rate().max(1.0)
            || alloc.sum_rate() + 1e-9 < history[0]
        {
            failures.push(format!("case {i}: final {} below start {}", alloc.sum_rate(), history[0]));
        }
    }
    CheckResult {
        name: "swap_monotonicity",
        cases,
        failures,
    }
}

/// Renders the same small experiment serially and on several threads, twice each.
pub fn check_determinism(seed: u64) -> CheckResult {
    let config = SimConfig {
        slots: 40,
        snr_db: vec![0.0, 10.0],
        seed,
        ..SimConfig::reference()
    };
    let mut outputs = Vec::new();
    for threads in [1, 4, 1, 4] {
        let csv = super::render_run(&config, &[config.algorithm], Some(threads), "validate", None)
            .map(|(text, _)| text)
            .unwrap_or_else(|e| format!("error: {e}"));
        outputs.push(csv);
    }
    let failures = if outputs.windows(2).all(|w| w[0] == w[1]) {
        Vec::new()
    } else {
        vec!["CSV output differs across repeats or thread counts".to_string()]
    };
    CheckResult {
        name: "determinism",
        cases: outputs.len(),
        failures,
    }
}

pub fn run_validation(seed: u64, instances: usize, cases: usize) -> ValidationReport {
    let (oracle, ratio) = check_oracle(seed, instances);
    ValidationReport {
        checks: vec![
            oracle,
            check_quota_safety(seed ^ 1, cases),
            check_exclusivity(seed ^ 2, cases),
            check_power(seed ^ 3, cases),
            check_jain(seed ^ 4, cases),
            check_variance_laws(seed ^ 5, cases),
            check_swap_monotonicity(seed ^ 6, cases),
            check_determinism(seed),
        ],
        oracle_mean_ratio: ratio,
    }
}

pub fn cmd_validate(seed: u64, instances: usize, cases: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = run_validation(seed, instances, cases);
    out.write_all(report.render().as_bytes())?;
    Ok(if report.passed() { 0 } else { 1 })
}
