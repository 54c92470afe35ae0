//! Hill climbing and random sampling on frames too large to enumerate.
//! Neither can push the best Riesz bound above δ_1.

use paving::{build_stack, local_search, random_search, FrameParams};

fn main() -> paving::Result<()> {
    for (r, n) in [(2, 5), (3, 2), (3, 3)] {
        let frame = build_stack(FrameParams::new(r, n)?)?;
        let local = local_search(&frame, 10, 500, 42)?;
        let random = random_search(&frame, 2000, 42)?;
        println!(
            "(r={r}, n={n}) local {:.6}, random {:.6}, δ_1 = {:.6}, bounds respected: {}",
            local.best_value,
            random.best_value,
            frame.delta(1),
            local.respects_bounds(&frame) && random.respects_bounds(&frame)
        );
    }
    Ok(())
}
