//! Independent oracles shared by the integration tests. Nothing here calls
//! the crate's eigen solvers; the Gram matrices are formed entry by entry.

#![allow(dead_code)]

use paving::{Complex64, CounterexampleFrame};
use rand::Rng;
use rand_distr::StandardNormal;

pub type Dense = Vec<Vec<Complex64>>;

/// `H[p][q] = Σ_c f_{rows[q]}[c] · conj(f_{rows[p]}[c])`.
pub fn gram_oracle(frame: &CounterexampleFrame, rows: &[usize]) -> Dense {
    rows.iter()
        .map(|&p| {
            rows.iter()
                .map(|&q| {
                    frame
                        .vector(q)
                        .iter()
                        .zip(frame.vector(p))
                        .map(|(a, b)| a * b.conj())
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Cholesky of `H - λI`; succeeds exactly when the shifted matrix is
/// positive definite (up to rounding).
fn positive_definite(h: &Dense, lambda: f64) -> bool {
    let m = h.len();
    let mut l = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = h[i][j];
            if i == j {
                s -= lambda;
            }
            let (li, lj) = (&l[i], &l[j]);
            s -= li[..j].iter().zip(&lj[..j]).map(|(a, b)| a * b.conj()).sum::<Complex64>();
            if i == j {
                if s.re <= 0.0 || !s.re.is_finite() {
                    return false;
                }
                l[i][i] = Complex64::new(s.re.sqrt(), 0.0);
            } else {
                l[i][j] = s / l[j][j].re;
            }
        }
    }
    true
}

/// λ_min of a Hermitian matrix by bisection on the inertia of `H - λI`.
pub fn lambda_min_bisection(h: &Dense) -> f64 {
    let bound = h
        .iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if positive_definite(h, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimum Rayleigh quotient over `samples` complex Gaussian directions.
pub fn rayleigh_min<R: Rng>(h: &Dense, samples: usize, rng: &mut R) -> f64 {
    let m = h.len();
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        for z in x.iter_mut() {
            *z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let mut num = 0.0;
        for p in 0..m {
            let mut hx = Complex64::new(0.0, 0.0);
            for q in 0..m {
                hx += h[p][q] * x[q];
            }
            num += (x[p].conj() * hx).re;
        }
        let den: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        best = best.min(num / den);
    }
    best
}

/// Riesz bound of a block by bisection, clamped at zero like the library.
pub fn riesz_oracle(frame: &CounterexampleFrame, rows: &[usize]) -> f64 {
    if rows.is_empty() {
        return f64::INFINITY;
    }
    let v = lambda_min_bisection(&gram_oracle(frame, rows));
    if (-1e-8..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `δ_k` straight from the closed form, in `i128` arithmetic.
pub fn delta_closed_form(r: i128, n: i128, k: i128) -> num_rational::Ratio<i128> {
    num_rational::Ratio::new(r * r * n, ((r - k + 1) * n + k - 1) * ((r - k) * n + k))
}
