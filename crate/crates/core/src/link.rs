//! Link adaptation: SNR gap, continuous-rate transmissible rate, per-group
//! statistics and the CSI reporting rule.

use crate::channel::{GroupMap, SnrMatrix};
use crate::error::{Error, Result};

/// SNR gap for square QAM at a target bit error rate: `-ln(5 * ber) / 1.6`.
///
/// Accepts `0 < ber <= 0.2`; the gap reaches 0 at `ber = 0.2`.
pub fn snr_gap_from_ber(ber: f64) -> Result<f64> {
    if !(ber > 0.0 && ber <= 0.2) {
        return Err(Error::Domain(format!("BER must lie in (0, 0.2], got {ber}")));
    }
    Ok(-(5.0 * ber).ln() / 1.6)
}

/// `log2(1 + snr / gap)` in bits/s/Hz.
#[inline]
pub fn rate(snr: f64, gap: f64) -> f64 {
    debug_assert!(snr >= 0.0 && gap > 0.0);
    (snr / gap).ln_1p() / std::f64::consts::LN_2
}

/// Unbiased sample variance (denominator `n - 1`).
pub fn sample_variance(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::Domain(format!(
            "sample variance needs at least 2 values, got {}",
            values.len()
        )));
    }
    Ok(variance_unchecked(values))
}

// Two-pass; constant input short-circuits to an exact zero.
pub(crate) fn variance_unchecked(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 || values.iter().all(|&v| v == values[0]) {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
}

/// SNR gap used by the rate computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    gap: f64,
    ber: Option<f64>,
}

impl LinkParams {
    pub fn with_gap(gap: f64) -> Result<Self> {
        if !(gap > 0.0) || !gap.is_finite() {
            return Err(Error::Domain(format!("SNR gap must be positive, got {gap}")));
        }
        Ok(Self { gap, ber: None })
    }

    pub fn from_ber(ber: f64) -> Result<Self> {
        let gap = snr_gap_from_ber(ber)?;
        if gap <= 0.0 {
            return Err(Error::Domain(format!("BER {ber} yields a non-positive SNR gap")));
        }
        Ok(Self { gap, ber: Some(ber) })
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn ber(&self) -> Option<f64> {
        self.ber
    }

    pub fn rate(&self, snr: f64) -> f64 {
        rate(snr, self.gap)
    }
}

/// Per (user, group) mean gain, gain variance and mean per-subcarrier rate.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupStats {
    users: usize,
    groups: usize,
    group_size: usize,
    mean_gain: Vec<f64>,
    variance: Vec<f64>,
    mean_rate: Vec<f64>,
}

impl GroupStats {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn mean_gain(&self, user: usize, group: usize) -> f64 {
        self.mean_gain[user * self.groups + group]
    }

    pub fn variance(&self, user: usize, group: usize) -> f64 {
        self.variance[user * self.groups + group]
    }

    pub fn mean_rate(&self, user: usize, group: usize) -> f64 {
        self.mean_rate[user * self.groups + group]
    }
}

pub fn group_stats(snr: &SnrMatrix, map: &GroupMap, link: &LinkParams) -> Result<GroupStats> {
    if snr.subcarriers() != map.subcarriers() {
        return Err(Error::Dimension {
            expected: format!("{} subcarriers", map.subcarriers()),
            got: snr.subcarriers().to_string(),
        });
    }
    let (users, groups, ng) = (snr.users(), map.groups(), map.group_size());
    let mut mean_gain = Vec::with_capacity(users * groups);
    let mut variance = Vec::with_capacity(users * groups);
    let mut mean_rate = Vec::with_capacity(users * groups);
    let mut buf = Vec::with_capacity(ng);
    for user in 0..users {
        let row = snr.row(user);
        for group in 0..groups {
            buf.clear();
            buf.extend(map.members(group).map(|s| row[s]));
            mean_gain.push(buf.iter().sum::<f64>() / ng as f64);
            variance.push(variance_unchecked(&buf));
            mean_rate.push(buf.iter().map(|&g| link.rate(g)).sum::<f64>() / ng as f64);
        }
    }
    Ok(GroupStats {
        users,
        groups,
        group_size: ng,
        mean_gain,
        variance,
        mean_rate,
    })
}

/// The CSI the base station sees: which groups each user reported, and the
/// mean per-subcarrier rate on them.
///
/// Rates of unreported groups are kept for bookkeeping but allocators never
/// read them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSet {
    users: usize,
    groups: usize,
    group_size: usize,
    rates: Vec<f64>,
    reported: Vec<bool>,
}

impl ReportSet {
    /// Every user reports every group. `rows[k][m]` is the mean per-subcarrier rate.
    pub fn report_all(rows: &[Vec<f64>], group_size: usize) -> Result<Self> {
        let mask: Vec<Vec<bool>> = rows.iter().map(|r| vec![true; r.len()]).collect();
        Self::new(rows, &mask, group_size)
    }

    pub fn new(rows: &[Vec<f64>], mask: &[Vec<bool>], group_size: usize) -> Result<Self> {
        let users = rows.len();
        let groups = rows.first().map_or(0, Vec::len);
        if users == 0 || groups == 0 || group_size == 0 {
            return Err(Error::Config("report set needs users, groups and a positive group size".into()));
        }
        if mask.len() != users
            || rows.iter().any(|r| r.len() != groups)
            || mask.iter().any(|r| r.len() != groups)
        {
            return Err(Error::Dimension {
                expected: format!("{users} x {groups} rates and mask"),
                got: "ragged input".into(),
            });
        }
        let rates: Vec<f64> = rows.iter().flatten().copied().collect();
        if rates.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(Error::Domain("rates must be finite and non-negative".into()));
        }
        Ok(Self {
            users,
            groups,
            group_size,
            rates,
            reported: mask.iter().flatten().copied().collect(),
        })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn is_reported(&self, user: usize, group: usize) -> bool {
        self.reported[user * self.groups + group]
    }

    /// Mean per-subcarrier rate of `user` on `group`.
    pub fn rate(&self, user: usize, group: usize) -> f64 {
        self.rates[user * self.groups + group]
    }

    /// Rate of the whole group (`mean * N_g`).
    pub fn group_rate(&self, user: usize, group: usize) -> f64 {
        self.rate(user, group) * self.group_size as f64
    }

    /// `S_k`, ascending.
    pub fn reported_groups(&self, user: usize) -> Vec<usize> {
        (0..self.groups).filter(|&g| self.is_reported(user, g)).collect()
    }

    /// Users that reported `group`, ascending.
    pub fn reporters(&self, group: usize) -> Vec<usize> {
        (0..self.users).filter(|&u| self.is_reported(u, group)).collect()
    }

    pub fn report_count(&self) -> usize {
        self.reported.iter().filter(|&&r| r).count()
    }
}

/// Reports group `m` for user `k` iff `V_km <= epsilon * mean_gain_km^2`.
///
/// `epsilon = +inf` reports everything.
pub fn report_set(stats: &GroupStats, epsilon: f64) -> Result<ReportSet> {
    if !(epsilon >= 0.0) {
        return Err(Error::Domain(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let reported = stats
        .variance
        .iter()
        .zip(&stats.mean_gain)
        .map(|(&v, &g)| epsilon.is_infinite() || v <= epsilon * g * g)
        .collect();
    Ok(ReportSet {
        users: stats.users,
        groups: stats.groups,
        group_size: stats.group_size,
        rates: stats.mean_rate.clone(),
        reported,
    })
}
