//! Interleaved subcarrier grouping: group `m` holds subcarriers `m, m + M_g, ...`.

use ofdma_varalloc::channel::GroupMap;

fn main() -> ofdma_varalloc::Result<()> {
    let map = GroupMap::new(16, 4)?;
    println!("M={} N_g={} M_g={}", map.subcarriers(), map.group_size(), map.groups());
    for g in 0..map.groups() {
        let members: Vec<String> = map.members(g).map(|s| s.to_string()).collect();
        println!("group {g}: {}", members.join(" "));
    }
    println!("subcarrier 13 belongs to group {}", map.group_of(13));

    match GroupMap::new(128, 5) {
        Ok(_) => unreachable!(),
        Err(e) => println!("M=128, N_g=5: {e}"),
    }
    Ok(())
}
