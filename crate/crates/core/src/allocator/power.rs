use super::Allocation;
use crate::channel::GroupMap;
use crate::error::{Error, Result};

/// Equal-power split of the budget over assigned groups and their subcarriers.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMap {
    total: f64,
    user_power: Vec<f64>,
    subcarrier_power: Vec<f64>,
}

impl PowerMap {
    /// `P_t`
    pub fn budget(&self) -> f64 {
        self.total
    }

    /// `P_k`
    pub fn user_power(&self, user: usize) -> f64 {
        self.user_power[user]
    }

    pub fn user_powers(&self) -> &[f64] {
        &self.user_power
    }

    /// Power on one subcarrier; zero when its group is unassigned.
    pub fn subcarrier_power(&self, subcarrier: usize) -> f64 {
        self.subcarrier_power[subcarrier]
    }

    pub fn subcarrier_powers(&self) -> &[f64] {
        &self.subcarrier_power
    }

    pub fn allocated(&self) -> f64 {
        self.user_power.iter().sum()
    }
}

/// `P_k = P_t * M_gk / M_g`, shared equally over the `M_gk * N_g` subcarriers of user `k`.
///
/// Each assigned subcarrier therefore carries `P_t / M`; that value is
/// stored directly so it is identical across users.
pub fn power_allocate(alloc: &Allocation, budget: f64, map: &GroupMap) -> Result<PowerMap> {
    if !(budget > 0.0) || !budget.is_finite() {
        return Err(Error::Domain(format!("power budget must be positive, got {budget}")));
    }
    if alloc.groups() != map.groups() {
        return Err(Error::Dimension {
            expected: format!("{} groups", map.groups()),
            got: alloc.groups().to_string(),
        });
    }
    let user_power = alloc
        .group_counts()
        .iter()
        .map(|&n| match n {
            0 => 0.0,
            n => budget * n as f64 / map.groups() as f64,
        })
        .collect();
    let per_subcarrier = budget / map.subcarriers() as f64;
    let mut subcarrier_power = vec![0.0; map.subcarriers()];
    for group in (0..map.groups()).filter(|&g| alloc.owner(g).is_some()) {
        for s in map.members(group) {
            subcarrier_power[s] = per_subcarrier;
        }
    }
    Ok(PowerMap {
        total: budget,
        user_power,
        subcarrier_power,
    })
}
