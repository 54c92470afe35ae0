//! Explicit constant-diagonal projections that fail to be pavable.
//!
//! The construction stacks `r` column-scaled `rn x rn` DFT matrices into an
//! `r²n x rn` matrix `B` whose rows are unit vectors and whose columns are
//! orthogonal with square-sum `r`. Then `G = B B* / r` is a rank-`rn`
//! projection with constant diagonal `1/r`. For every partition of the rows
//! into `r` sets and every row block `D_k` (`k < r`), some part of the partition
//! restricted to `D_k` has a Riesz lower bound of at most `δ_k`, and `δ_k → 0`
//! as `n` grows.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Hermitian eigenvalues, nullspaces.
//! - [`dft`]: DFT matrices and column scalings.
//! - [`counterexample`]: the scaling constants `δ_k` and the stacked frame.
//! - [`frame`]: Gram matrices, Riesz lower bounds, paving norms, duality.
//! - [`partition`]: exhaustive, random and local search over partitions.
//! - [`witness`]: explicit coefficient vectors certifying `‖Σ aᵢfᵢ‖² ≤ δ_k`.
//! - [`io`] and [`cli`]: text file formats and the `paving` command line.

pub mod cli;
pub mod counterexample;
pub mod dft;
mod error;
pub mod frame;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod witness;

pub use counterexample::{
    build_block, build_projection, build_stack, delta, delta_exact, delta_partial_sum,
    delta_partial_sum_exact, CounterexampleFrame, FrameParams, Rational,
};
pub use dft::{dft, scale_columns, ColumnScaling};
pub use error::{Error, Result};
pub use frame::{duality_check, gram, paving_norm, riesz_lower_bound, BoundReport, IndexSet};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use num_complex::Complex64;
pub use partition::{
    enumerate_partitions, evaluate_partition, exhaustive_search, local_search, pigeonhole_block,
    random_search, Partition, SearchMethod, SearchOptions, SearchResult,
};
pub use witness::{find_witness, verify_witness, CoordinateProjection, RieszWitness, WitnessCheck};

/// Absolute tolerance on `achieved ≤ δ_k` and on the per-block dominance bound.
pub const BOUND_TOL: f64 = 1e-8;
