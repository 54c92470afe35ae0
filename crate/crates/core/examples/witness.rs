//! For a random partition, exhibit unit coefficients on one block whose
//! combination has squared norm at most δ_k, then check it independently.

use paving::{build_stack, find_witness, verify_witness, FrameParams, Partition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> paving::Result<()> {
    let (r, n) = (3, 4);
    let frame = build_stack(FrameParams::new(r, n)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = Partition::random(&mut rng, frame.params().vectors(), r);
    for k in 1..r {
        let w = find_witness(&frame, &p, k)?;
        let check = verify_witness(&frame, &w);
        println!(
            "k={k}: block A_{} meets D_{k} in {} rows; ‖Σ a_i f_i‖² = {:.3e} ≤ δ_{k} = {} ; valid = {}",
            w.j,
            w.support.len(),
            w.achieved,
            w.bound_exact,
            check.valid
        );
    }
    Ok(())
}
