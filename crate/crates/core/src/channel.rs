//! Channel models and the subcarrier-to-group mapping.
//!
//! Two channel paths are provided. [`freq_response`] and [`snr_from_response`]
//! evaluate a tapped-delay-line channel on the subcarrier grid; the simulator
//! instead draws per-subcarrier SNRs directly from an exponential law
//! ([`gen_iid_exp_snr`]), which is what a Rayleigh channel under ideal power
//! control looks like after normalization.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};

/// Partition of `M` subcarriers into `M_g` interleaved groups of `N_g`.
///
/// Group `m` holds subcarriers `m, m + M_g, ..., m + (N_g - 1) * M_g`, so the
/// members of one group are spread evenly over the whole band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMap {
    subcarriers: usize,
    group_size: usize,
    groups: usize,
}

impl GroupMap {
    pub fn new(subcarriers: usize, group_size: usize) -> Result<Self> {
        if subcarriers == 0 || group_size == 0 {
            return Err(Error::Config(format!(
                "subcarriers ({subcarriers}) and group size ({group_size}) must be positive"
            )));
        }
        if !subcarriers.is_multiple_of(group_size) {
            return Err(Error::NotDivisible {
                subcarriers,
                group_size,
            });
        }
        Ok(Self {
            subcarriers,
            group_size,
            groups: subcarriers / group_size,
        })
    }

    /// `M`
    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    /// `N_g`
    pub fn group_size(&self) -> usize {
        self.group_size
    }

    /// `M_g`
    pub fn groups(&self) -> usize {
        self.groups
    }

    /// Subcarrier indices of group `group`, in ascending order.
    pub fn members(&self, group: usize) -> impl Iterator<Item = usize> + '_ {
        assert!(group < self.groups, "group {group} out of range");
        (0..self.group_size).map(move |i| group + i * self.groups)
    }

    /// Group that owns subcarrier `subcarrier`.
    pub fn group_of(&self, subcarrier: usize) -> usize {
        assert!(subcarrier < self.subcarriers);
        subcarrier % self.groups
    }
}

/// Builds the interleaved map; fails when `group_size` does not divide `subcarriers`.
pub fn make_group_map(subcarriers: usize, group_size: usize) -> Result<GroupMap> {
    GroupMap::new(subcarriers, group_size)
}

/// One resolvable path of a multipath channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub amplitude: Complex64,
    /// Path delay in seconds.
    pub delay: f64,
}

/// Tapped delay line sampled at one OFDM symbol instant.
#[derive(Debug, Clone, PartialEq)]
pub struct TapSet {
    taps: Vec<Tap>,
    spacing_hz: f64,
    symbol_period: f64,
}

impl TapSet {
    pub fn new(taps: Vec<Tap>, spacing_hz: f64, symbol_period: f64) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::Config("a tap set needs at least one path".into()));
        }
        if let Some(t) = taps.iter().find(|t| !(t.delay >= 0.0) || !t.delay.is_finite()) {
            return Err(Error::Config(format!("tap delay must be non-negative, got {}", t.delay)));
        }
        if !(spacing_hz > 0.0) || !(symbol_period > 0.0) {
            return Err(Error::Config(
                "subcarrier spacing and symbol period must be positive".into(),
            ));
        }
        Ok(Self {
            taps,
            spacing_hz,
            symbol_period,
        })
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn spacing_hz(&self) -> f64 {
        self.spacing_hz
    }

    pub fn symbol_period(&self) -> f64 {
        self.symbol_period
    }
}

/// Samples `H(f) = sum_l h_l exp(-j 2 pi f tau_l)` at `f = m * spacing` for `m in 0..subcarriers`.
pub fn freq_response(taps: &TapSet, subcarriers: usize) -> Vec<Complex64> {
    (0..subcarriers)
        .map(|m| {
            let f = m as f64 * taps.spacing_hz;
            taps.taps
                .iter()
                .map(|tap| tap.amplitude * Complex64::from_polar(1.0, -2.0 * PI * f * tap.delay))
                .sum()
        })
        .collect()
}

/// Per-subcarrier SNR `rho * |H_m|^2`.
pub fn snr_from_response(gains: &[Complex64], rho: f64) -> Result<Vec<f64>> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("power-to-noise ratio must be >= 0, got {rho}")));
    }
    Ok(gains.iter().map(|h| rho * h.norm_sqr()).collect())
}

/// K x M matrix of instantaneous per-subcarrier SNRs (linear scale), row-major by user.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrMatrix {
    users: usize,
    subcarriers: usize,
    values: Vec<f64>,
    mean_snr: f64,
}

impl SnrMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>, mean_snr: f64) -> Result<Self> {
        let users = rows.len();
        let subcarriers = rows.first().map_or(0, Vec::len);
        if users == 0 || subcarriers == 0 {
            return Err(Error::Config("SNR matrix must be non-empty".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != subcarriers) {
            return Err(Error::Dimension {
                expected: format!("{subcarriers} subcarriers per row"),
                got: r.len().to_string(),
            });
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Domain("SNR values must be non-negative".into()));
        }
        Ok(Self {
            users,
            subcarriers,
            values,
            mean_snr,
        })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    pub fn get(&self, user: usize, subcarrier: usize) -> f64 {
        self.values[user * self.subcarriers + subcarrier]
    }

    pub fn row(&self, user: usize) -> &[f64] {
        &self.values[user * self.subcarriers..(user + 1) * self.subcarriers]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Draws a K x M matrix of i.i.d. exponential SNRs with the given mean.
///
/// User `k` reads from ChaCha stream `k` of `seed`, so each row is
/// reproducible on its own and rows can be generated in any order.
pub fn gen_iid_exp_snr(users: usize, subcarriers: usize, mean_snr: f64, seed: u64) -> Result<SnrMatrix> {
    if !(mean_snr > 0.0) || !mean_snr.is_finite() {
        return Err(Error::Domain(format!("mean SNR must be positive, got {mean_snr}")));
    }
    if users == 0 || subcarriers == 0 {
        return Err(Error::Config("user and subcarrier counts must be positive".into()));
    }
    let mut values = Vec::with_capacity(users * subcarriers);
    for user in 0..users {
        let mut rng = user_stream(seed, user);
        values.extend((0..subcarriers).map(|_| {
            let x: f64 = Exp1.sample(&mut rng);
            mean_snr * x
        }));
    }
    Ok(SnrMatrix {
        users,
        subcarriers,
        values,
        mean_snr,
    })
}

fn user_stream(seed: u64, user: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(user as u64);
    rng
}

/// Derives an independent 64-bit seed for work unit `index` of `master` (splitmix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
