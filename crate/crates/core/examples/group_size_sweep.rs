//! Throughput per subcarrier against the group size `N_g`.

use ofdma_varalloc::sim::{sweep, SimConfig};

fn main() -> ofdma_varalloc::Result<()> {
    let base = SimConfig { snr_db: vec![0.0, 10.0, 20.0], ..SimConfig::reference() };
    let configs: Vec<SimConfig> = [1, 2, 4, 8]
        .iter()
        .map(|&group_size| SimConfig { group_size, ..base.clone() })
        .collect();
    for row in sweep(&configs)? {
        println!(
            "N_g={} {:>4} dB: {:.4}",
            row.config.group_size, row.metrics.snr_db, row.metrics.throughput_per_subcarrier
        );
    }
    Ok(())
}
