//! Riesz lower bounds of a few row subsets, straight from the Gram matrix.

use paving::{build_stack, gram, riesz_lower_bound, FrameParams, IndexSet};

fn main() -> paving::Result<()> {
    let frame = build_stack(FrameParams::new(2, 2)?)?;
    let subsets = [vec![1], vec![1, 2], vec![1, 3], vec![1, 2, 3, 4], vec![5, 6, 7, 8], vec![1, 2, 3, 4, 5]];
    for s in subsets {
        let set = IndexSet::new(s.clone(), frame.params().vectors())?;
        let g = gram(&frame, &set)?;
        println!(
            "S = {:?}: Gram {}x{}, λ_min = {:.6}",
            s,
            g.rows(),
            g.cols(),
            riesz_lower_bound(&frame, &set)?
        );
    }
    // Any five vectors in C^4 are dependent.
    println!("δ_1 = {:.6}, δ_2 = {:.6}", frame.delta(1), frame.delta(2));
    Ok(())
}
