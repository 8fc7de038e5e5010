//! Reference Monte-Carlo run for every algorithm at 0, 10 and 20 dB.

use ofdma_varalloc::sim::{run_experiment, Algorithm, SimConfig};

fn main() -> ofdma_varalloc::Result<()> {
    let base = SimConfig { snr_db: vec![0.0, 10.0, 20.0], ..SimConfig::reference() };
    println!("{:>13} {:>6} {:>10} {:>8} {:>8}", "algo", "snr", "tput/sc", "jain", "assigned");
    for algorithm in Algorithm::ALL {
        for m in run_experiment(&SimConfig { algorithm, ..base.clone() })? {
            println!(
                "{:>13} {:>6} {:>10.4} {:>8.4} {:>8.3}",
                algorithm.name(),
                m.snr_db,
                m.throughput_per_subcarrier,
                m.jain.unwrap_or(f64::NAN),
                m.assigned_fraction
            );
        }
    }
    Ok(())
}
