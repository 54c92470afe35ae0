//! Explicit certificates that a block of a partition is badly conditioned.
//!
//! Given a partition `{A_j}` and a row block `D_k` with `k < r`, some `A_j`
//! holds at least `n` rows of `D_k`. Rows of `D_k` vanish on the first
//! `(k-1)(n-1)` coordinates, so choosing coefficients that also annihilate the
//! next `n-1` coordinates (a nullspace vector of an `(n-1) x |A_j ∩ D_k|`
//! system) leaves a combination supported where every column of `B_k` carries
//! `√δ_k`. Its squared norm is then `δ_k` times a compressed norm of a
//! combination of orthonormal DFT rows, hence at most `δ_k`.

use num_complex::Complex64;

use crate::counterexample::{CounterexampleFrame, Rational};
use crate::frame::IndexSet;
use crate::linalg::{nullspace_vector, ComplexMatrix, ComplexVector};
use crate::partition::{pigeonhole_block, Partition};
use crate::{Error, Result, BOUND_TOL};

/// Tolerance on the coefficient norm.
pub const UNIT_TOL: f64 = 1e-12;
/// Allowed gap between a stored and a recomputed `achieved` value.
pub const RECOMPUTE_TOL: f64 = 1e-9;
/// Coordinates that must vanish are checked against this modulus.
pub const ZERO_TOL: f64 = 1e-12;

/// Orthogonal projection of `C^ambient` onto its first `width` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordinateProjection {
    width: usize,
    ambient: usize,
}

impl CoordinateProjection {
    pub fn new(width: usize, ambient: usize) -> Result<Self> {
        if width > ambient {
            return Err(Error::InvalidParam(format!(
                "projection width {width} exceeds ambient dimension {ambient}"
            )));
        }
        Ok(Self { width, ambient })
    }

    /// `P_k`: the first `k(n-1)` of `rn` coordinates.
    pub fn for_level(frame: &CounterexampleFrame, k: usize) -> Result<Self> {
        let params = frame.params();
        Self::new(k * (params.n() - 1), params.dim())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn apply(&self, v: &[Complex64]) -> ComplexVector {
        assert_eq!(v.len(), self.ambient);
        ComplexVector(
            v.iter()
                .enumerate()
                .map(|(c, z)| if c < self.width { *z } else { Complex64::new(0.0, 0.0) })
                .collect(),
        )
    }

    /// `(I - P) v`.
    pub fn complement(&self, v: &[Complex64]) -> ComplexVector {
        assert_eq!(v.len(), self.ambient);
        ComplexVector(
            v.iter()
                .enumerate()
                .map(|(c, z)| if c < self.width { Complex64::new(0.0, 0.0) } else { *z })
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RieszWitness {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    /// Block label chosen by [`pigeonhole_block`].
    pub j: usize,
    /// `A_j ∩ D_k`, 1-based.
    pub support: IndexSet,
    /// Unit-norm coefficients aligned with `support`.
    pub coefficients: ComplexVector,
    /// `‖Σ a_i f_i‖²`.
    pub achieved: f64,
    /// `δ_k`.
    pub bound: f64,
    pub bound_exact: Rational,
    /// `‖(I - P_k) Σ a_i g_i‖²` over the unscaled DFT rows.
    pub dft_tail_norm_sq: f64,
    /// `‖Σ a_i g_i‖²`, which is 1 for orthonormal `g_i`.
    pub dft_norm_sq: f64,
    /// `‖P_k Σ a_i f_i‖`.
    pub constraint_residual: f64,
}

/// Outcome of [`verify_witness`].
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessCheck {
    pub valid: bool,
    pub recomputed: f64,
    pub coefficient_norm: f64,
    pub failures: Vec<String>,
}

fn combine<'a>(
    rows: impl Iterator<Item = &'a [Complex64]>,
    coefficients: &ComplexVector,
    dim: usize,
) -> ComplexVector {
    let mut out = ComplexVector::zeros(dim);
    for (row, a) in rows.zip(coefficients.iter()) {
        for (o, v) in out.0.iter_mut().zip(row) {
            *o += a * v;
        }
    }
    out
}

/// Builds the certificate for row block `D_k` of partition `p`.
pub fn find_witness(frame: &CounterexampleFrame, p: &Partition, k: usize) -> Result<RieszWitness> {
    let params = frame.params();
    let (r, n) = (params.r(), params.n());
    if k == 0 || k >= r {
        return Err(Error::InvalidParam(format!(
            "witnesses exist for 1 <= k <= r - 1 = {}; got k = {k}",
            r - 1
        )));
    }
    if p.arity() != r || p.len() != params.vectors() {
        return Err(Error::InvalidParam(format!(
            "partition of {} indices into {} blocks does not fit r = {r}, n = {n}",
            p.len(),
            p.arity()
        )));
    }

    let block_rows = params.row_block(k);
    let zeroed = (k - 1) * (n - 1);
    let tail = params.tail_start(k);
    for i in block_rows.clone() {
        if let Some(c) = frame.vector(i)[..zeroed].iter().position(|z| z.norm() > ZERO_TOL) {
            return Err(Error::Inconsistent(format!(
                "row {} has a nonzero entry in zeroed column {}",
                i + 1,
                c + 1
            )));
        }
    }
    let tail_factor = frame.delta(k).sqrt();
    if frame.scaling(k).factors()[tail..].iter().any(|&f| f != tail_factor) {
        return Err(Error::Inconsistent(format!(
            "columns past {tail} of block {k} do not all carry √δ_{k}"
        )));
    }

    let j = pigeonhole_block(p, frame, k);
    let rows: Vec<usize> = block_rows.clone().filter(|&i| p.label(i) == j).collect();
    if rows.len() < n {
        return Err(Error::Inconsistent(format!(
            "block {j} meets D_{k} in {} < n = {n} rows",
            rows.len()
        )));
    }

    let coefficients = if n == 1 {
        ComplexVector::unit(rows.len(), 0)
    } else {
        let system = ComplexMatrix::from_fn(n - 1, rows.len(), |c, q| {
            frame.vector(rows[q])[zeroed + c]
        });
        nullspace_vector(&system).ok_or_else(|| {
            Error::Inconsistent(format!(
                "no nullspace for the {}x{} constraint system",
                n - 1,
                rows.len()
            ))
        })?
    };

    let dim = params.dim();
    let projection = CoordinateProjection::for_level(frame, k)?;
    let combo = combine(rows.iter().map(|&i| frame.vector(i)), &coefficients, dim);
    let achieved = combo.norm_sqr();
    let constraint_residual = projection.apply(combo.as_slice()).norm();

    let offset = block_rows.start;
    let base = frame.base_dft();
    let dft_combo = combine(rows.iter().map(|&i| base.row(i - offset)), &coefficients, dim);
    let dft_tail_norm_sq = projection.complement(dft_combo.as_slice()).norm_sqr();

    let bound = frame.delta(k);
    if achieved > bound + BOUND_TOL {
        return Err(Error::Inconsistent(format!(
            "certificate achieves {achieved} above δ_{k} = {bound}"
        )));
    }
    Ok(RieszWitness {
        r,
        n,
        k,
        j,
        support: IndexSet::from_zero_based(rows),
        coefficients,
        achieved,
        bound,
        bound_exact: frame.deltas_exact()[k - 1],
        dft_tail_norm_sq,
        dft_norm_sq: dft_combo.norm_sqr(),
        constraint_residual,
    })
}

/// Recomputes `‖Σ a_i f_i‖²` by direct summation and checks the stored
/// claims.
pub fn verify_witness(frame: &CounterexampleFrame, w: &RieszWitness) -> WitnessCheck {
    let params = frame.params();
    let mut failures = Vec::new();
    if (w.r, w.n) != (params.r(), params.n()) {
        failures.push(format!(
            "certificate is for r = {}, n = {} but the frame has r = {}, n = {}",
            w.r,
            w.n,
            params.r(),
            params.n()
        ));
    }
    let coefficient_norm = w.coefficients.norm();
    if (coefficient_norm - 1.0).abs() > UNIT_TOL {
        failures.push(format!("coefficient norm {coefficient_norm} is not 1"));
    }
    if w.support.len() != w.coefficients.len() {
        failures.push(format!(
            "{} support indices but {} coefficients",
            w.support.len(),
            w.coefficients.len()
        ));
    }
    let in_block = w.k >= 1
        && w.k <= params.r()
        && w.support
            .one_based()
            .iter()
            .all(|&i| params.row_block_one_based(w.k).contains(&i));
    if !in_block {
        failures.push(format!("support is not contained in D_{}", w.k));
    }
    if w.k >= 1 && w.k <= params.r() && (w.bound - frame.delta(w.k)).abs() > 1e-12 {
        failures.push(format!("bound {} differs from δ_{} = {}", w.bound, w.k, frame.delta(w.k)));
    }

    let mut recomputed = f64::NAN;
    if in_block && w.support.len() == w.coefficients.len() {
        let dim = params.dim();
        let mut sum = vec![Complex64::new(0.0, 0.0); dim];
        for (&i, a) in w.support.one_based().iter().zip(w.coefficients.iter()) {
            let row = frame.vector(i - 1);
            for c in 0..dim {
                sum[c] += a * row[c];
            }
        }
        recomputed = sum.iter().map(|z| z.re * z.re + z.im * z.im).sum();
        if (recomputed - w.achieved).abs() > RECOMPUTE_TOL {
            failures.push(format!(
                "recomputed {recomputed} differs from stored {}",
                w.achieved
            ));
        }
        if recomputed > w.bound + BOUND_TOL {
            failures.push(format!("recomputed {recomputed} exceeds bound {}", w.bound));
        }
    }
    WitnessCheck {
        valid: failures.is_empty(),
        recomputed,
        coefficient_norm,
        failures,
    }
}
