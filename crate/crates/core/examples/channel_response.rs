//! Frequency response of a two-tap channel and i.i.d. Rayleigh SNR draws.

use num_complex::Complex64;
use ofdma_varalloc::channel::{derive_seed, freq_response, gen_iid_exp_snr, snr_from_response, Tap, TapSet};

fn main() -> ofdma_varalloc::Result<()> {
    let taps = TapSet::new(
        vec![
            Tap { amplitude: Complex64::new(0.8, 0.0), delay: 0.0 },
            Tap { amplitude: Complex64::new(0.0, 0.6), delay: 3.0e-6 },
        ],
        15_000.0,
        1.0 / 15_000.0,
    )?;
    let h = freq_response(&taps, 16);
    let snr = snr_from_response(&h, 10.0)?;
    for (s, (h, g)) in h.iter().zip(&snr).enumerate() {
        println!("subcarrier {s:2}: |H|={:.3} snr={:.3}", h.norm(), g);
    }

    let draw = gen_iid_exp_snr(4, 1024, 10.0, derive_seed(7, 0))?;
    for k in 0..draw.users() {
        let mean = draw.row(k).iter().sum::<f64>() / draw.subcarriers() as f64;
        println!("user {k}: sample mean SNR {mean:.3} (target {})", draw.mean_snr());
    }
    Ok(())
}
