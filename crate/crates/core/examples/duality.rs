//! Riesz bounds of G[S,S] and paving norms of (I − G)[S,S] sum to one.

use paving::{build_stack, duality_check, FrameParams, IndexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> paving::Result<()> {
    let frame = build_stack(FrameParams::new(3, 2)?)?;
    let m = frame.params().vectors();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..8 {
        let rows: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.3)).collect();
        if rows.is_empty() {
            continue;
        }
        let report = duality_check(&frame, &IndexSet::from_zero_based(rows))?;
        println!(
            "|S| = {:>2}  λ_min = {:.6}  ‖(I−G)[S,S]‖ = {:.6}  residual {:.1e}",
            report.subset.len(),
            report.riesz_lower,
            report.paving_norm_complement,
            report.duality_residual
        );
    }
    Ok(())
}
