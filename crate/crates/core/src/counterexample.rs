//! The stacked, column-scaled DFT construction.
//!
//! For parameters `(r, n)` the block `B_k` (`k = 1..=r`) is the `rn x rn` DFT
//! with its columns scaled as follows:
//!
//! | columns                          | factor                         |
//! |----------------------------------|--------------------------------|
//! | `0 .. (k-1)(n-1)`                | `0`                            |
//! | `(k-1)(n-1) .. k(n-1)` (`k < r`) | `√(r - δ_1 - … - δ_{k-1})`     |
//! | the rest                         | `√δ_k`                         |
//!
//! with `δ_k = r²n / ([(r-k+1)n + k-1]·[(r-k)n + k])`. Stacking `B_1 … B_r`
//! gives `B`, whose rows have square-sum 1 and whose columns are orthogonal
//! with square-sum `r`.

use std::ops::{Range, RangeInclusive};

use num_rational::Ratio;

use crate::dft::{dft, scale_columns, ColumnScaling};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::{Error, Result};

/// Exact rational used for the scaling constants.
pub type Rational = Ratio<i128>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrameParams {
    r: usize,
    n: usize,
}

impl FrameParams {
    pub fn new(r: usize, n: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParam(format!("r = {r}, need r >= 2")));
        }
        if n < 1 {
            return Err(Error::InvalidParam(format!("n = {n}, need n >= 1")));
        }
        Ok(Self { r, n })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of frame vectors, `r²n`.
    pub fn vectors(&self) -> usize {
        self.r * self.r * self.n
    }

    /// Ambient dimension, `rn`.
    pub fn dim(&self) -> usize {
        self.r * self.n
    }

    /// 0-based rows of `D_k`.
    pub fn row_block(&self, k: usize) -> Range<usize> {
        assert!((1..=self.r).contains(&k), "row block {k} out of 1..={}", self.r);
        (k - 1) * self.dim()..k * self.dim()
    }

    /// 1-based rows of `D_k`, as printed in reports.
    pub fn row_block_one_based(&self, k: usize) -> RangeInclusive<usize> {
        let rows = self.row_block(k);
        rows.start + 1..=rows.end
    }

    /// Which `D_k` a 0-based row belongs to.
    pub fn block_of_row(&self, row: usize) -> usize {
        row / self.dim() + 1
    }

    /// The `r - 1` width-`(n-1)` column groups followed by the final group of
    /// width `rn - (r-1)(n-1)`.
    pub fn column_groups(&self) -> Vec<Range<usize>> {
        let w = self.n - 1;
        let mut groups: Vec<_> = (0..self.r - 1).map(|g| g * w..(g + 1) * w).collect();
        groups.push((self.r - 1) * w..self.dim());
        groups
    }

    /// First column of block `k` that carries `√δ_k`.
    pub fn tail_start(&self, k: usize) -> usize {
        k.min(self.r - 1) * (self.n - 1)
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if !(1..=self.r).contains(&k) {
            return Err(Error::InvalidParam(format!(
                "k = {k} outside 1..={}",
                self.r
            )));
        }
        Ok(())
    }
}

fn int(v: usize) -> i128 {
    v as i128
}

/// `δ_k` as an exact reduced fraction.
pub fn delta_exact(r: usize, n: usize, k: usize) -> Result<Rational> {
    let params = FrameParams::new(r, n)?;
    params.check_k(k)?;
    let (r, n, k) = (int(r), int(n), int(k));
    let num = r * r * n;
    let den = ((r - k + 1) * n + k - 1) * ((r - k) * n + k);
    Ok(Rational::new(num, den))
}

/// `δ_k = r²n / ([(r-k+1)n + k-1]·[(r-k)n + k])`.
pub fn delta(r: usize, n: usize, k: usize) -> Result<f64> {
    delta_exact(r, n, k).map(to_f64)
}

/// `δ_1 + … + δ_k = rk / ((r-k)n + k)`, exactly.
pub fn delta_partial_sum_exact(r: usize, n: usize, k: usize) -> Result<Rational> {
    FrameParams::new(r, n)?;
    if k > r {
        return Err(Error::InvalidParam(format!("k = {k} outside 0..={r}")));
    }
    let (r, n, k) = (int(r), int(n), int(k));
    Ok(Rational::new(r * k, (r - k) * n + k))
}

pub fn delta_partial_sum(r: usize, n: usize, k: usize) -> Result<f64> {
    delta_partial_sum_exact(r, n, k).map(to_f64)
}

pub fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Column factors of `B_k`.
pub fn block_scaling(params: FrameParams, k: usize) -> Result<ColumnScaling> {
    params.check_k(k)?;
    let (r, n) = (params.r, params.n);
    let zeroed = (k - 1) * (n - 1);
    let tail = params.tail_start(k);
    let middle = if k < r {
        let remaining = Rational::from_integer(int(r)) - delta_partial_sum_exact(r, n, k - 1)?;
        to_f64(remaining).sqrt()
    } else {
        0.0
    };
    let tail_factor = delta(r, n, k)?.sqrt();
    let factors = (0..params.dim())
        .map(|j| {
            if j < zeroed {
                0.0
            } else if j < tail {
                middle
            } else {
                tail_factor
            }
        })
        .collect();
    ColumnScaling::new(factors)
}

/// `B_k`, the column-scaled `rn x rn` DFT.
pub fn build_block(params: FrameParams, k: usize) -> Result<ComplexMatrix> {
    let scaling = block_scaling(params, k)?;
    scale_columns(&dft(params.dim())?, &scaling)
}

/// The stacked matrix `B` together with everything derived from it.
#[derive(Clone, Debug)]
pub struct CounterexampleFrame {
    params: FrameParams,
    stack: ComplexMatrix,
    base: ComplexMatrix,
    deltas: Vec<f64>,
    deltas_exact: Vec<Rational>,
    scalings: Vec<ColumnScaling>,
}

impl CounterexampleFrame {
    pub fn params(&self) -> FrameParams {
        self.params
    }

    /// `B`, `r²n x rn`.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.stack
    }

    /// The unscaled `rn x rn` DFT; its rows are the `g_i`.
    pub fn base_dft(&self) -> &ComplexMatrix {
        &self.base
    }

    /// `δ_1 … δ_r`.
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn deltas_exact(&self) -> &[Rational] {
        &self.deltas_exact
    }

    /// `δ_k`, 1-based.
    pub fn delta(&self, k: usize) -> f64 {
        self.deltas[k - 1]
    }

    /// Column factors used for `B_k`, 1-based.
    pub fn scaling(&self, k: usize) -> &ColumnScaling {
        &self.scalings[k - 1]
    }

    pub fn row_blocks(&self) -> Vec<Range<usize>> {
        (1..=self.params.r).map(|k| self.params.row_block(k)).collect()
    }

    pub fn column_groups(&self) -> Vec<Range<usize>> {
        self.params.column_groups()
    }

    /// Row `f_i` of `B` (0-based).
    pub fn vector(&self, i: usize) -> &[num_complex::Complex64] {
        self.stack.row(i)
    }

    /// All rows of `B` as owned vectors.
    pub fn frame_vectors(&self) -> Vec<ComplexVector> {
        (0..self.stack.rows()).map(|i| self.stack.row_vector(i)).collect()
    }

    /// `G = B B* / r`.
    pub fn projection(&self) -> ComplexMatrix {
        self.stack.mul_adjoint_self().scale(1.0 / self.params.r as f64)
    }
}

/// Builds `B` by stacking `B_1 … B_r`.
pub fn build_stack(params: FrameParams) -> Result<CounterexampleFrame> {
    let (r, n) = (params.r, params.n);
    let base = dft(params.dim())?;
    let scalings = (1..=r)
        .map(|k| block_scaling(params, k))
        .collect::<Result<Vec<_>>>()?;
    let mut data = Vec::with_capacity(params.vectors() * params.dim());
    for s in &scalings {
        data.extend_from_slice(scale_columns(&base, s)?.entries());
    }
    let stack = ComplexMatrix::new(params.vectors(), params.dim(), data)?;
    let deltas_exact = (1..=r)
        .map(|k| delta_exact(r, n, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(CounterexampleFrame {
        params,
        stack,
        base,
        deltas: deltas_exact.iter().copied().map(to_f64).collect(),
        deltas_exact,
        scalings,
    })
}

/// `G = B B* / r`, the rank-`rn` projection with constant diagonal `1/r`.
pub fn build_projection(params: FrameParams) -> Result<ComplexMatrix> {
    Ok(build_stack(params)?.projection())
}
