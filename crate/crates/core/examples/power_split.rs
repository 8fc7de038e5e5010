//! Equal power split: every assigned subcarrier gets `P_t / M`.

use ofdma_varalloc::allocator::{allocate_variance, power_allocate, FairnessWeights};
use ofdma_varalloc::channel::{gen_iid_exp_snr, GroupMap};
use ofdma_varalloc::link::{group_stats, report_set, LinkParams};

fn main() -> ofdma_varalloc::Result<()> {
    let map = GroupMap::new(16, 2)?;
    let snr = gen_iid_exp_snr(3, map.subcarriers(), 10.0, 5)?;
    let stats = group_stats(&snr, &map, &LinkParams::with_gap(1.0)?)?;
    let reports = report_set(&stats, 0.3)?;
    let alloc = allocate_variance(&reports, &FairnessWeights::uniform(3)?, None, None)?;
    let power = power_allocate(&alloc, 1.0, &map)?;

    println!("owners per group: {:?}", alloc.owners());
    println!("per-subcarrier power: {:?}", power.subcarrier_powers());
    println!("per-user power: {:?}", power.user_powers());
    println!("allocated {} of budget {}", power.allocated(), power.budget());
    Ok(())
}
