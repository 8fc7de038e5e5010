//! Candidate-list length `L` trades throughput for fairness; with `L = K`
//! user shares follow the weights.

use ofdma_varalloc::sim::{run_experiment, SimConfig};

fn main() -> ofdma_varalloc::Result<()> {
    let base = SimConfig::reference();
    for l in [1, 2, 4, 8] {
        let m = run_experiment(&SimConfig { l, ..base.clone() })?.remove(0);
        println!(
            "L={l}: throughput {:.4}  jain {:.4}",
            m.throughput_per_subcarrier,
            m.jain.unwrap_or(f64::NAN)
        );
    }

    let m = run_experiment(&SimConfig { l: base.users, slots: 2000, ..base.clone() })?.remove(0);
    println!("user  alpha   share");
    for (k, (a, s)) in base.weights.normalized().iter().zip(&m.shares).enumerate() {
        println!("{k:>4}  {a:.4}  {s:.4}");
    }
    Ok(())
}
