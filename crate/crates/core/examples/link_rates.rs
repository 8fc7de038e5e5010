//! SNR gap, achievable rate and group statistics with the reporting threshold.

use ofdma_varalloc::channel::{gen_iid_exp_snr, GroupMap};
use ofdma_varalloc::link::{group_stats, report_set, snr_gap_from_ber, LinkParams};

fn main() -> ofdma_varalloc::Result<()> {
    for ber in [1e-2, 1e-3, 1e-6] {
        println!("BER {ber:e}: gap {:.4}", snr_gap_from_ber(ber)?);
    }
    let link = LinkParams::from_ber(1e-3)?;
    for snr in [0.0, 1.0, 10.0, 100.0] {
        println!("snr {snr:>5}: {:.4} bit/s/Hz", link.rate(snr));
    }

    let map = GroupMap::new(32, 4)?;
    let snr = gen_iid_exp_snr(3, map.subcarriers(), 10.0, 1)?;
    let stats = group_stats(&snr, &map, &LinkParams::with_gap(1.0)?)?;
    for epsilon in [0.0, 0.25, 0.5, 1.0, f64::INFINITY] {
        let reports = report_set(&stats, epsilon)?;
        println!("epsilon {epsilon}: {} of {} (user, group) pairs reported", reports.report_count(), 3 * map.groups());
    }
    let reports = report_set(&stats, 0.5)?;
    for k in 0..reports.users() {
        println!("user {k} reports groups {:?}", reports.reported_groups(k));
    }
    Ok(())
}
