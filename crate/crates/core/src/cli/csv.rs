//! Aggregate CSV output.
//!
//! Every file starts with `#` manifest lines, then a header, then one row
//! per (algorithm, SNR point[, sweep value]). Floats use Rust's shortest
//! round-trip formatting, which is locale-independent.

use std::fmt::Write as _;

use crate::sim::{AggregateMetrics, SimConfig};

pub const BASE_HEADER: &str = "algo,snr_db,users,subcarriers,group_size,epsilon,gap,l_param,slots,seed,throughput_per_subcarrier,jain_index,assigned_fraction";

/// Provenance written ahead of the CSV header.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: SimConfig,
    pub algorithms: Vec<String>,
    /// Unix seconds; only rendered when set, so default output is reproducible.
    pub timestamp: Option<u64>,
    pub outputs: Vec<String>,
    pub sweep: Option<(String, Vec<String>)>,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "# tool=ofdma-sim version={}", self.version);
        let _ = writeln!(s, "# command={} seed={}", self.command, self.seed);
        let _ = writeln!(
            s,
            "# config users={} subcarriers={} group_size={} epsilon={} gap={} l_param={} slots={} snr_db={} alpha={} algo={} power={} max_it={} fairness_memory={}",
            c.users,
            c.subcarriers,
            c.group_size,
            c.epsilon,
            c.link.gap(),
            c.l,
            c.slots,
            join(&c.snr_db),
            join(c.weights.raw()),
            self.algorithms.join(","),
            c.power_budget,
            c.max_it.map_or("groups".to_string(), |m| m.to_string()),
            c.fairness_memory.name(),
        );
        if let Some(ber) = c.link.ber() {
            let _ = writeln!(s, "# ber={ber}");
        }
        if let Some((axis, values)) = &self.sweep {
            let _ = writeln!(s, "# sweep axis={axis} values={}", values.join(","));
        }
        if let Some(t) = self.timestamp {
            let _ = writeln!(s, "# timestamp={t}");
        }
        s
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// One output row.
#[derive(Debug, Clone)]
pub struct CsvRow<'a> {
    pub config: &'a SimConfig,
    pub metrics: &'a AggregateMetrics,
    pub sweep_value: Option<String>,
}

/// Which metric columns a sweep keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricColumns {
    All,
    Throughput,
    Jain,
    Assigned,
}

pub fn render(manifest: &RunManifest, rows: &[CsvRow<'_>], sweep_axis: Option<&str>, metric: MetricColumns) -> String {
    let mut out = manifest.render();
    let max_users = rows.iter().map(|r| r.config.users).max().unwrap_or(0);
    let prefix = sweep_axis.map(|_| "sweep_axis,sweep_value,").unwrap_or("");
    match metric {
        MetricColumns::All => {
            out.push_str(prefix);
            out.push_str(BASE_HEADER);
            for k in 0..max_users {
                let _ = write!(out, ",share_user_{k}");
            }
        }
        MetricColumns::Throughput => out.push_str(&format!("{prefix}algo,snr_db,users,throughput_per_subcarrier")),
        MetricColumns::Jain => out.push_str(&format!("{prefix}algo,snr_db,users,jain_index")),
        MetricColumns::Assigned => out.push_str(&format!("{prefix}algo,snr_db,users,assigned_fraction")),
    }
    out.push('\n');

    for row in rows {
        let (c, m) = (row.config, row.metrics);
        if let Some(axis) = sweep_axis {
            let _ = write!(out, "{axis},{},", row.sweep_value.as_deref().unwrap_or(""));
        }
        let jain = m.jain.map_or("NA".to_string(), |j| j.to_string());
        match metric {
            MetricColumns::All => {
                let _ = write!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    m.algorithm,
                    m.snr_db,
                    c.users,
                    c.subcarriers,
                    c.group_size,
                    c.epsilon,
                    c.link.gap(),
                    c.l,
                    c.slots,
                    c.seed,
                    m.throughput_per_subcarrier,
                    jain,
                    m.assigned_fraction
                );
                for k in 0..max_users {
                    match m.shares.get(k) {
                        Some(s) => {
                            let _ = write!(out, ",{s}");
                        }
                        None => out.push(','),
                    }
                }
            }
            MetricColumns::Throughput => {
                let _ = write!(out, "{},{},{},{}", m.algorithm, m.snr_db, c.users, m.throughput_per_subcarrier);
            }
            MetricColumns::Jain => {
                let _ = write!(out, "{},{},{},{}", m.algorithm, m.snr_db, c.users, jain);
            }
            MetricColumns::Assigned => {
                let _ = write!(out, "{},{},{},{}", m.algorithm, m.snr_db, c.users, m.assigned_fraction);
            }
        }
        out.push('\n');
    }
    out
}
