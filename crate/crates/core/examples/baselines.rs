//! All four allocators on one random instance, against the exhaustive optimum.

use ofdma_varalloc::allocator::{
    allocate_best_gain, allocate_decentralized, allocate_superiority_traced, allocate_variance,
    oracle_exhaustive, FairnessWeights,
};
use ofdma_varalloc::link::ReportSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

fn main() -> ofdma_varalloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..6).map(|_| {
            let x: f64 = Exp1.sample(&mut rng);
            10.0 * x
        }).collect::<Vec<f64>>())
        .collect();
    let reports = ReportSet::report_all(&rows, 1)?;
    let weights = FairnessWeights::new(vec![1.0, 1.0, 1.0])?;

    let (superiority, history) = allocate_superiority_traced(&reports, &weights)?;
    let results = [
        ("variance", allocate_variance(&reports, &weights, None, None)?),
        ("best_gain", allocate_best_gain(&reports, None)?),
        ("decentralized", allocate_decentralized(&reports, &weights)?),
        ("superiority", superiority),
    ];
    for (name, alloc) in &results {
        let opt = oracle_exhaustive(&reports, alloc.group_counts())?;
        println!(
            "{name:>13}: sum {:7.3}  counts {:?}  oracle {:7.3}  owners {:?}",
            alloc.sum_rate(),
            alloc.group_counts(),
            opt.sum_rate,
            alloc.owners()
        );
    }
    println!("swap history: {history:.3?}");
    Ok(())
}
