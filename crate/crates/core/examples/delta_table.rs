//! Exact δ_k values. For k < r they shrink like 1/n; δ_r tends to r.
//!
//!     cargo run --example delta_table -- 4 8

use paving::counterexample::{delta_exact, delta_partial_sum_exact, to_f64, Rational};

fn main() -> paving::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (r, n_max) = (args.first().copied().unwrap_or(3), args.get(1).copied().unwrap_or(6));
    for n in 1..=n_max {
        let row: Vec<Rational> = (1..=r).map(|k| delta_exact(r, n, k)).collect::<paving::Result<_>>()?;
        let cells: Vec<String> = row.iter().map(|d| format!("{:>10} ({:.4})", d.to_string(), to_f64(*d))).collect();
        let sum: Rational = row.iter().sum();
        println!("n={n:<3} {}  Σ={sum}", cells.join(" "));
    }
    // The partial sums telescope to rk/((r-k)n + k).
    let n = n_max;
    for k in 1..=r {
        println!("Σ_{{j≤{k}}} δ_j at n={n}: {}", delta_partial_sum_exact(r, n, k)?);
    }
    Ok(())
}
