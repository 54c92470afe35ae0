//! Build the stacked matrix B for (r, n) and check it is an r-tight frame
//! whose Gram projection has constant diagonal 1/r.
//!
//!     cargo run --example build_frame -- 3 2

use paving::linalg::max_eigenvalue_hermitian;
use paving::{build_stack, FrameParams};

fn main() -> paving::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (r, n) = (args.first().copied().unwrap_or(3), args.get(1).copied().unwrap_or(2));
    let frame = build_stack(FrameParams::new(r, n)?)?;
    let b = frame.matrix();
    println!("B is {}x{} ({} blocks of {}x{})", b.rows(), b.cols(), r, r * n, r * n);

    for k in 1..=r {
        println!("B_{k} column factors: {:?}", frame.scaling(k).factors());
    }

    let row_err = (0..b.rows())
        .map(|i| (b.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let frame_op = b.adjoint().matmul(b)?;
    println!("max |‖f_i‖² − 1| = {row_err:.2e}");
    println!("‖B*B − rI‖ = {:.2e}", frame_op.sub(&paving::ComplexMatrix::identity(b.cols()).scale(r as f64))?.frobenius_norm());

    let g = frame.projection();
    let diag = (0..g.rows()).map(|i| g[(i, i)].re).fold(f64::NAN, f64::max);
    println!("G = BB*/r: diagonal max {diag:.12}, λ_max {:.12}", max_eigenvalue_hermitian(&g)?);
    Ok(())
}
