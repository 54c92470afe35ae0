//! DFT matrices and per-column scalings.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

/// Non-negative real factors, one per column.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnScaling {
    factors: Vec<f64>,
}

impl ColumnScaling {
    pub fn new(factors: Vec<f64>) -> Result<Self> {
        if let Some((j, f)) = factors
            .iter()
            .enumerate()
            .find(|(_, f)| !f.is_finite() || **f < 0.0)
        {
            return Err(Error::InvalidParam(format!(
                "column factor {j} is {f}; factors must be finite and non-negative"
            )));
        }
        Ok(Self { factors })
    }

    pub fn uniform(len: usize, factor: f64) -> Result<Self> {
        Self::new(vec![factor; len])
    }

    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// The unitary `m x m` DFT with entries `ω^{ij} / √m`, `ω = exp(2πi/m)`,
/// `i, j = 0..m`.
pub fn dft(m: usize) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::InvalidParam("DFT size must be at least 1".into()));
    }
    let norm = 1.0 / (m as f64).sqrt();
    // Reduce the exponent mod m first so large products keep full accuracy.
    Ok(ComplexMatrix::from_fn(m, m, |i, j| {
        let e = (i * j) % m;
        Complex64::from_polar(norm, 2.0 * PI * e as f64 / m as f64)
    }))
}

pub fn scale_columns(a: &ComplexMatrix, s: &ColumnScaling) -> Result<ComplexMatrix> {
    if s.len() != a.cols() {
        return Err(Error::InvalidParam(format!(
            "{} column factors for a matrix with {} columns",
            s.len(),
            a.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        a[(i, j)] * s.factors[j]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{adjoint, matmul, operator_norm};

    #[test]
    fn small_dfts() {
        let one = dft(1).unwrap();
        assert_eq!(one[(0, 0)], Complex64::new(1.0, 0.0));

        let two = dft(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [s, s, s, -s];
        for (z, e) in two.entries().iter().zip(expected) {
            assert!((z - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
        assert!(dft(0).is_err());
    }

    #[test]
    fn dft6_unitary() {
        let f = dft(6).unwrap();
        let prod = matmul(&adjoint(&f), &f).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-10);
    }

    #[test]
    fn dft8_norm_is_one() {
        assert!((operator_norm(&dft(8).unwrap()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn entry_moduli_and_orthogonality() {
        for m in 1..=12 {
            let f = dft(m).unwrap();
            let modulus = 1.0 / (m as f64).sqrt();
            assert!(f.entries().iter().all(|z| (z.norm() - modulus).abs() < 1e-12));
            for a in 0..m {
                for b in a + 1..m {
                    assert!(f.column(a).inner(&f.column(b)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn identity_and_zero_scaling() {
        let f = dft(5).unwrap();
        let same = scale_columns(&f, &ColumnScaling::uniform(5, 1.0).unwrap()).unwrap();
        assert_eq!(same, f);

        let mut factors = vec![1.0; 5];
        factors[2] = 0.0;
        let zeroed = scale_columns(&f, &ColumnScaling::new(factors).unwrap()).unwrap();
        assert!(zeroed.column(2).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn scaling_rejects_mismatch_and_negative() {
        let f = dft(3).unwrap();
        assert!(scale_columns(&f, &ColumnScaling::uniform(2, 1.0).unwrap()).is_err());
        assert!(ColumnScaling::new(vec![1.0, -0.5]).is_err());
        assert!(ColumnScaling::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn scaled_dft4_row_sums() {
        // a = 1/4, Σ C_j² = 16.
        let b = scale_columns(&dft(4).unwrap(), &ColumnScaling::uniform(4, 2.0).unwrap()).unwrap();
        for i in 0..4 {
            let sum: f64 = b.row(i).iter().map(|z| z.norm_sqr()).sum();
            assert!((sum - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scaled_dft_square_sums_and_orthogonality() {
        let factors = [0.0, 0.3, 1.7, 2.0, 0.9, 1.1, 0.0];
        let m = factors.len();
        let s = ColumnScaling::new(factors.to_vec()).unwrap();
        let b = scale_columns(&dft(m).unwrap(), &s).unwrap();
        let expected_row = factors.iter().map(|c| c * c).sum::<f64>() / m as f64;
        for i in 0..m {
            let sum: f64 = b.row(i).iter().map(|z| z.norm_sqr()).sum();
            assert!((sum - expected_row).abs() < 1e-10);
        }
        for (j, f) in factors.iter().enumerate() {
            assert!((b.column(j).norm_sqr() - f * f).abs() < 1e-10);
            for l in j + 1..m {
                assert!(b.column(j).inner(&b.column(l)).norm() <= 1e-10 * (m as f64).sqrt());
            }
        }
    }
}
