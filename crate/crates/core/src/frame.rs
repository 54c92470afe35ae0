//! Riesz lower bounds, paving norms and the Riesz/paving duality for
//! projections.
//!
//! Two normalisations appear here. Riesz bounds of row subsets are computed
//! on the rows `f_i` of `B` (unit vectors). The duality check works with the
//! projection `G = B B* / r`, whose columns `G e_i` have norm² `1/r`.

use crate::counterexample::CounterexampleFrame;
use crate::linalg::{
    max_eigenvalue_hermitian, min_eigenvalue_hermitian, operator_norm, ComplexMatrix,
};
use crate::{Error, Result};

/// λ_min values in `[-CLAMP_TOL, 0)` are reported as 0.
pub const CLAMP_TOL: f64 = 1e-8;

/// A sorted set of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Validates 1-based indices against `1..=max`.
    pub fn new(mut indices: Vec<usize>, max: usize) -> Result<Self> {
        indices.sort_unstable();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > max) {
            return Err(Error::IndexOutOfRange { index: bad, max });
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParam("duplicate index in set".into()));
        }
        Ok(Self { indices })
    }

    /// From 0-based indices, which must already be distinct.
    pub fn from_zero_based(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut indices: Vec<usize> = indices.into_iter().map(|i| i + 1).collect();
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn one_based(&self) -> &[usize] {
        &self.indices
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i - 1).collect()
    }

    pub fn contains(&self, one_based: usize) -> bool {
        self.indices.binary_search(&one_based).is_ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    fn max(&self) -> usize {
        self.indices.last().copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub subset: IndexSet,
    /// λ_min of `G[S,S]`, clamped at 0.
    pub riesz_lower: f64,
    pub riesz_lower_raw: f64,
    /// `‖(I - G)[S,S]‖`.
    pub paving_norm_complement: f64,
    pub duality_residual: f64,
}

fn check_rows(frame: &CounterexampleFrame, s: &IndexSet) -> Result<()> {
    let rows = frame.matrix().rows();
    if s.max() > rows {
        return Err(Error::IndexOutOfRange {
            index: s.max(),
            max: rows,
        });
    }
    Ok(())
}

/// Gram matrix of the rows in `S`: entry `(p, q) = ⟨f_{i_q}, f_{i_p}⟩`, so
/// that `a* Gram a = ‖Σ a_i f_i‖²`.
pub fn gram(frame: &CounterexampleFrame, s: &IndexSet) -> Result<ComplexMatrix> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    check_rows(frame, s)?;
    let rows = s.zero_based();
    let vectors: Vec<_> = rows.iter().map(|&i| frame.vector(i)).collect();
    // Rows of V·V* hold ⟨f_p, f_q⟩; transpose to put f_q first.
    let stacked = ComplexMatrix::new(
        vectors.len(),
        frame.matrix().cols(),
        vectors.iter().flat_map(|v| v.iter().copied()).collect(),
    )?;
    Ok(stacked.mul_adjoint_self().transpose())
}

fn clamp(raw: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&raw) {
        0.0
    } else {
        raw
    }
}

/// Largest `δ` with `‖Σ_{i∈S} a_i f_i‖² ≥ δ Σ |a_i|²`, i.e. λ_min of the
/// Gram matrix. Empty sets impose no constraint and give `+∞`.
pub fn riesz_lower_bound(frame: &CounterexampleFrame, s: &IndexSet) -> Result<f64> {
    if s.is_empty() {
        return Ok(f64::INFINITY);
    }
    Ok(clamp(min_eigenvalue_hermitian(&gram(frame, s)?)?))
}

/// Operator norm of the principal submatrix `M[S,S]`; 0 for empty `S`.
pub fn paving_norm(m: &ComplexMatrix, s: &IndexSet) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if s.max() > m.rows() {
        return Err(Error::IndexOutOfRange {
            index: s.max(),
            max: m.rows(),
        });
    }
    if s.is_empty() {
        return Ok(0.0);
    }
    Ok(operator_norm(&m.principal_submatrix(&s.zero_based())))
}

/// Checks `λ_min(G[S,S]) + ‖(I - G)[S,S]‖ = 1` for the frame's projection.
pub fn duality_check(frame: &CounterexampleFrame, s: &IndexSet) -> Result<BoundReport> {
    duality_check_with(&frame.projection(), s)
}

/// Same as [`duality_check`] with a precomputed projection `G`.
pub fn duality_check_with(g: &ComplexMatrix, s: &IndexSet) -> Result<BoundReport> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.max() > g.rows() {
        return Err(Error::IndexOutOfRange {
            index: s.max(),
            max: g.rows(),
        });
    }
    let idx = s.zero_based();
    let block = g.principal_submatrix(&idx);
    let raw = min_eigenvalue_hermitian(&block)?;
    let complement = ComplexMatrix::identity(idx.len()).sub(&block)?;
    // I - G is a projection, so its compression is PSD and the norm is λ_max.
    let paving_norm_complement = max_eigenvalue_hermitian(&complement)?;
    Ok(BoundReport {
        subset: s.clone(),
        riesz_lower: clamp(raw),
        riesz_lower_raw: raw,
        paving_norm_complement,
        duality_residual: (raw + paving_norm_complement - 1.0).abs(),
    })
}

/// Gram matrix of all rows of `B`, from which subset Gram matrices are
/// principal submatrices. Used by the partition search.
#[derive(Clone, Debug)]
pub struct FullGram {
    matrix: ComplexMatrix,
}

impl FullGram {
    pub fn new(frame: &CounterexampleFrame) -> Self {
        Self {
            matrix: frame.matrix().mul_adjoint_self().transpose(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Clamped λ_min over 0-based `rows`; `+∞` when empty.
    pub fn lower_bound(&self, rows: &[usize]) -> f64 {
        if rows.is_empty() {
            return f64::INFINITY;
        }
        let sub = self.matrix.principal_submatrix(rows);
        clamp(min_eigenvalue_hermitian(&sub).expect("principal submatrix of a Gram matrix is Hermitian"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::{build_stack, FrameParams};
    use crate::linalg::{eigenvalues_hermitian, ComplexVector};
    use num_complex::Complex64;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frame(r: usize, n: usize) -> CounterexampleFrame {
        build_stack(FrameParams::new(r, n).unwrap()).unwrap()
    }

    fn random_subset(rng: &mut ChaCha8Rng, size: usize) -> IndexSet {
        let len = rng.gen_range(1..=size);
        let mut all: Vec<usize> = (1..=size).collect();
        all.shuffle(rng);
        IndexSet::new(all[..len].to_vec(), size).unwrap()
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(vec![0], 4).is_err());
        assert!(IndexSet::new(vec![5], 4).is_err());
        assert!(IndexSet::new(vec![2, 2], 4).is_err());
        let s = IndexSet::new(vec![3, 1], 4).unwrap();
        assert_eq!(s.one_based(), &[1, 3]);
        assert_eq!(s.zero_based(), vec![0, 2]);
    }

    #[test]
    fn gram_examples() {
        let f = frame(2, 3);
        let g = gram(&f, &IndexSet::new(vec![5], 12).unwrap()).unwrap();
        assert!((g[(0, 0)].re - 1.0).abs() < 1e-9);
        assert!(matches!(gram(&f, &IndexSet::default()), Err(Error::EmptySet)));

        let f = frame(2, 1);
        let g = gram(&f, &IndexSet::new(vec![1, 2], 4).unwrap()).unwrap();
        assert!(g.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
    }

    #[test]
    fn full_gram_spectrum() {
        for (r, n) in [(2, 1), (2, 3), (3, 2)] {
            let f = frame(r, n);
            let all = IndexSet::new((1..=r * r * n).collect(), r * r * n).unwrap();
            let eig = eigenvalues_hermitian(&gram(&f, &all).unwrap()).unwrap();
            let zeros = r * r * n - r * n;
            for (i, lambda) in eig.iter().enumerate() {
                let expected = if i < zeros { 0.0 } else { r as f64 };
                assert!((lambda - expected).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn quadratic_form_agreement() {
        let f = frame(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let s = random_subset(&mut rng, 18);
            let g = gram(&f, &s).unwrap();
            let a = ComplexVector(
                (0..s.len())
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
            .normalized()
            .unwrap();
            let ga = g.apply(&a).unwrap();
            let form = a.iter().zip(ga.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>();
            let mut combo = ComplexVector::zeros(6);
            for (coef, row) in a.iter().zip(s.zero_based()) {
                for (c, v) in combo.0.iter_mut().zip(f.vector(row)) {
                    *c += coef * v;
                }
            }
            assert!((form.re - combo.norm_sqr()).abs() <= 1e-9);
            assert!(form.im.abs() <= 1e-9);
        }
    }

    #[test]
    fn riesz_bound_examples() {
        let f = frame(2, 2);
        assert_eq!(riesz_lower_bound(&f, &IndexSet::default()).unwrap(), f64::INFINITY);
        let single = riesz_lower_bound(&f, &IndexSet::new(vec![3], 8).unwrap()).unwrap();
        assert!((single - 1.0).abs() < 1e-9);
    }

    #[test]
    fn psd_and_monotone_under_inclusion() {
        let f = frame(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let big = random_subset(&mut rng, 12);
            let mut idx = big.one_based().to_vec();
            idx.shuffle(&mut rng);
            let keep = rng.gen_range(1..=idx.len());
            let small = IndexSet::new(idx[..keep].to_vec(), 12).unwrap();
            assert!(small.is_subset(&big));
            let lo_big = riesz_lower_bound(&f, &big).unwrap();
            let lo_small = riesz_lower_bound(&f, &small).unwrap();
            assert!(lo_big >= -1e-8);
            assert!(lo_big <= lo_small + 1e-12);
        }
    }

    #[test]
    fn paving_norm_examples() {
        let id = ComplexMatrix::identity(5);
        let s = IndexSet::new(vec![1, 4], 5).unwrap();
        assert!((paving_norm(&id, &s).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(paving_norm(&id, &IndexSet::default()).unwrap(), 0.0);

        let g = frame(2, 2).projection();
        let single = paving_norm(&g, &IndexSet::new(vec![2], 8).unwrap()).unwrap();
        assert!((single - g[(1, 1)].norm()).abs() < 1e-12);

        assert!(paving_norm(&id, &IndexSet::new(vec![6], 6).unwrap()).is_err());
        assert!(paving_norm(&ComplexMatrix::zeros(2, 3), &s).is_err());
    }

    #[test]
    fn duality_examples() {
        let f = frame(3, 2);
        let rep = duality_check(&f, &IndexSet::new(vec![4], 18).unwrap()).unwrap();
        assert!((rep.riesz_lower - 1.0 / 3.0).abs() < 1e-9);
        assert!((rep.paving_norm_complement - 2.0 / 3.0).abs() < 1e-9);
        assert!(rep.duality_residual < 1e-7);

        let all = IndexSet::new((1..=18).collect(), 18).unwrap();
        let rep = duality_check(&f, &all).unwrap();
        assert!(rep.riesz_lower.abs() < 1e-7);
        assert!((rep.paving_norm_complement - 1.0).abs() < 1e-7);

        assert!(matches!(duality_check(&f, &IndexSet::default()), Err(Error::EmptySet)));
    }

    #[test]
    fn duality_on_random_subsets() {
        let f = frame(2, 2);
        let g = f.projection();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let mut all: Vec<usize> = (1..=8).collect();
            all.shuffle(&mut rng);
            let s = IndexSet::new(all[..4].to_vec(), 8).unwrap();
            let rep = duality_check_with(&g, &s).unwrap();
            assert!(rep.duality_residual <= 1e-7);
            assert!((-1e-8..=1.0 + 1e-8).contains(&rep.paving_norm_complement));
        }
    }

    #[test]
    fn full_gram_agrees_with_subset_gram() {
        let f = frame(2, 3);
        let full = FullGram::new(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let s = random_subset(&mut rng, 12);
            let direct = riesz_lower_bound(&f, &s).unwrap();
            let cached = full.lower_bound(&s.zero_based());
            assert!((direct - cached).abs() < 1e-12);
        }
    }
}
