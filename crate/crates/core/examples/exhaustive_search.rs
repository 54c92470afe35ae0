//! Exhaustive search over all 2-partitions of the (2, 3) frame, with and
//! without relabeling symmetry.

use paving::partition::{exhaustive_search_with, SearchOptions};
use paving::{build_stack, FrameParams};

fn main() -> paving::Result<()> {
    let frame = build_stack(FrameParams::new(2, 3)?)?;
    for canonical in [false, true] {
        let result = exhaustive_search_with(&frame, &SearchOptions { canonical, ..Default::default() })?;
        println!(
            "canonical={canonical}: {} partitions, best {:.12} at [{}], reduction ×{}",
            result.partitions_evaluated, result.best_value, result.best_partition, result.reduction_factor
        );
        println!("  worst pigeonhole block per k: {:?}", result.per_k_violations);
    }
    println!("δ_1 = {}", frame.deltas_exact()[0]);
    Ok(())
}
