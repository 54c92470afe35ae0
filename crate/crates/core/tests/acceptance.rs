//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the default test harness so the lines are always printed.
//! Exits nonzero when any criterion fails. A single criterion can be run
//! with `cargo test --test acceptance -- 4`.

mod common;

use std::time::{Duration, Instant};

use common::{delta_closed_form, gram_oracle, lambda_min_bisection, rayleigh_min, riesz_oracle};
use num_rational::Ratio;
use paving::cli::{cmd_verify, stack_checks, EXIT_CHECK_FAILED, EXIT_OK};
use paving::counterexample::{delta_exact, delta_partial_sum_exact, Rational};
use paving::frame::duality_check_with;
use paving::io::{CertificateFile, Construction, Encoding, MatrixFile};
use paving::linalg::{max_eigenvalue_hermitian, min_eigenvalue_hermitian};
use paving::partition::{enumerate_partitions, pigeonhole_block, SearchOptions};
use paving::{
    build_block, build_stack, evaluate_partition, exhaustive_search, find_witness, local_search,
    verify_witness, ComplexMatrix, FrameParams, IndexSet, Partition, BOUND_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

/// Outcome of one criterion: pass flag plus a one-line summary.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn frame(r: usize, n: usize) -> paving::CounterexampleFrame {
    build_stack(FrameParams::new(r, n).unwrap()).unwrap()
}

fn within_time(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

/// 1. Construction identities over r ∈ 2..=6, n ∈ 1..=6, under 60 s.
fn construction_identities() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst_row: f64 = 0.0;
    for r in 2..=6 {
        for n in 1..=6 {
            let f = frame(r, n);
            for c in stack_checks(f.matrix(), f.params()).unwrap() {
                if c.name.starts_with("row") {
                    worst_row = worst_row.max(c.residual);
                }
                if !c.pass {
                    failures.push(format!("(r={r},n={n}) {} residual {:e}", c.name, c.residual));
                }
            }
            // Independent recount of the exact sum from the closed form.
            let sum: Rational = (1..=r as i128).map(|k| delta_closed_form(r as i128, n as i128, k)).sum();
            if sum != Rational::from_integer(r as i128) {
                failures.push(format!("(r={r},n={n}) Σδ = {sum}"));
            }
        }
    }
    let t = start.elapsed();
    let pass = failures.is_empty() && within_time(t, 60);
    Outcome::new(
        pass,
        format!(
            "30 grids, worst row residual {worst_row:.1e}, {} failures, {:.2?} (limit 60 s){}",
            failures.len(),
            t,
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// 2. Exact δ table and partial sums, under 5 s.
fn delta_table() -> Outcome {
    let start = Instant::now();
    let mut bad = 0usize;
    for n in 1..=1000usize {
        let ni = n as i128;
        bad += usize::from(delta_exact(2, n, 1).unwrap() != Ratio::new(2, ni + 1));
        bad += usize::from(delta_exact(2, n, 2).unwrap() != Ratio::new(2 * ni, ni + 1));
    }
    for r in 2..=10usize {
        for n in 1..=100usize {
            let mut running = Rational::from_integer(0);
            for k in 1..=r {
                let (ri, ni, ki) = (r as i128, n as i128, k as i128);
                let expected = Ratio::new(ri * ki, (ri - ki) * ni + ki);
                running += delta_closed_form(ri, ni, ki);
                bad += usize::from(running != expected);
                bad += usize::from(delta_partial_sum_exact(r, n, k).unwrap() != expected);
                bad += usize::from(delta_exact(r, n, k).unwrap() != delta_closed_form(ri, ni, ki));
            }
        }
    }
    let t = start.elapsed();
    Outcome::new(
        bad == 0 && within_time(t, 5),
        format!("{bad} mismatches, {t:.2?} (limit 5 s)"),
    )
}

/// 3. Exhaustive optimum plus dominance on every enumerated partition.
fn exhaustive_optimality() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    for (r, n) in [(2, 1), (2, 2), (2, 3), (3, 1)] {
        let f = frame(r, n);
        let result = exhaustive_search(&f).unwrap();
        let mut oracle_best = f64::NEG_INFINITY;
        let mut dominance_failures = 0u64;
        let options = SearchOptions::default();
        for p in enumerate_partitions(f.params().vectors(), r, &options).unwrap() {
            let value = (1..=r)
                .map(|j| riesz_oracle(&f, &p.block_rows(j)))
                .fold(f64::INFINITY, f64::min);
            oracle_best = oracle_best.max(value);
            for k in 1..r {
                let rows = f.params().row_block(k);
                let counts: Vec<Vec<usize>> = (1..=r)
                    .map(|j| rows.clone().filter(|&i| p.label(i) == j).collect())
                    .collect();
                let largest = counts.iter().map(Vec::len).max().unwrap();
                debug_assert!(largest >= n);
                let eligible = counts
                    .iter()
                    .filter(|c| c.len() == largest)
                    .map(|c| riesz_oracle(&f, c))
                    .fold(f64::INFINITY, f64::min);
                if eligible > f.delta(k) + BOUND_TOL {
                    dominance_failures += 1;
                }
            }
        }
        let agrees = (result.best_value - oracle_best).abs() <= 1e-9;
        let ok = agrees && dominance_failures == 0 && result.dominance_failures == 0;
        pass &= ok;
        notes.push(format!(
            "δ*({r},{n}) = {:.12} (oracle {:.12}, {} partitions)",
            result.best_value, oracle_best, result.partitions_evaluated
        ));
        if (r, n) == (2, 2) {
            pass &= result.best_value <= 2.0 / 3.0 + BOUND_TOL;
        }
        if (r, n) == (2, 3) {
            pass &= result.best_value <= 0.5 + BOUND_TOL;
        }
    }
    let t = start.elapsed();
    pass &= within_time(t, 120);
    Outcome::new(pass, format!("{}; {t:.2?} (limit 120 s)", notes.join("; ")))
}

/// 4. Witness soundness over 1000 random partitions per grid point.
fn witness_soundness() -> Outcome {
    let start = Instant::now();
    let mut count = 0usize;
    let mut failures = Vec::new();
    for r in 2..=4usize {
        for n in 1..=4usize {
            let f = frame(r, n);
            let mut rng = ChaCha8Rng::seed_from_u64((r * 100 + n) as u64);
            for trial in 0..1000 {
                let p = Partition::random(&mut rng, f.params().vectors(), r);
                for k in 1..r {
                    count += 1;
                    let outcome = find_witness(&f, &p, k).map(|w| {
                        let unit = w.coefficients.iter().map(|a| a.norm_sqr()).sum::<f64>();
                        let check = verify_witness(&f, &w);
                        ((unit - 1.0).abs() <= 1e-12 && w.achieved <= f.delta(k) + BOUND_TOL, check)
                    });
                    match outcome {
                        Ok((true, check)) if check.valid => {}
                        Ok((_, check)) => failures.push(format!(
                            "(r={r},n={n},trial={trial},k={k}): {:?}",
                            check.failures
                        )),
                        Err(e) => failures.push(format!("(r={r},n={n},trial={trial},k={k}): {e}")),
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    Outcome::new(
        failures.is_empty() && within_time(t, 600),
        format!(
            "{count} certificates, {} failures, {t:.2?} (limit 600 s){}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

/// 5. λ_min(G[S,S]) + ‖(I−G)[S,S]‖ = 1 on random subsets.
fn duality_identity() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut subsets = 0usize;
    for r in 2..=3usize {
        for n in 1..=4usize {
            let f = frame(r, n);
            let g = f.projection();
            let m = f.params().vectors();
            let mut rng = ChaCha8Rng::seed_from_u64((10 * r + n) as u64);
            for _ in 0..500 {
                let mut rows: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
                if rows.is_empty() {
                    rows.push(rng.gen_range(0..m));
                }
                let s = IndexSet::from_zero_based(rows.iter().copied());
                let report = duality_check_with(&g, &s).unwrap();
                // Recompute both sides separately from the reported pair.
                let block = g.principal_submatrix(&rows);
                let lam = min_eigenvalue_hermitian(&block).unwrap();
                let comp = ComplexMatrix::identity(rows.len()).sub(&block).unwrap();
                let norm = max_eigenvalue_hermitian(&comp).unwrap();
                worst = worst
                    .max((lam + norm - 1.0).abs())
                    .max(report.duality_residual);
                subsets += 1;
            }
        }
    }
    let t = start.elapsed();
    Outcome::new(
        worst <= 1e-7 && within_time(t, 120),
        format!("{subsets} subsets, worst |sum − 1| = {worst:.2e} (tol 1e-7), {t:.2?} (limit 120 s)"),
    )
}

/// 6. δ_k(n) strictly decreasing over n = 1..1000 and δ_k(1000) < r²/900.
fn decay_evidence() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for r in 2..=4usize {
        for k in 1..r {
            let column: Vec<Rational> = (1..=1000).map(|n| delta_exact(r, n, k).unwrap()).collect();
            let rises: Vec<usize> = column
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[1] >= w[0])
                .map(|(i, _)| i + 1)
                .collect();
            let tail_ok = column[999] < Ratio::new((r * r) as i128, 900);
            if !rises.is_empty() || !tail_ok {
                pass = false;
                notes.push(format!(
                    "r={r} k={k}: δ rises at n={:?} ({} → {}), δ(1000) = {} < r²/900: {tail_ok}",
                    rises,
                    column[rises.first().copied().unwrap_or(1) - 1],
                    column[rises.first().copied().unwrap_or(1)],
                    column[999]
                ));
            }
        }
    }
    let t = start.elapsed();
    pass &= within_time(t, 5);
    Outcome::new(
        pass,
        if notes.is_empty() {
            format!("all 6 columns strictly decreasing, {t:.2?}")
        } else {
            format!("{}; {t:.2?}", notes.join("; "))
        },
    )
}

/// 7. Local search never beats δ₁.
fn adversarial_search() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut notes = Vec::new();
    for (r, n) in [(2, 4), (2, 5), (2, 6), (3, 2)] {
        let f = frame(r, n);
        let result = local_search(&f, 50, 2000, 7).unwrap();
        let ok = result.best_value <= f.delta(1) + BOUND_TOL && result.respects_bounds(&f);
        // The reported value must be what the partition actually attains.
        let recheck = evaluate_partition(&f, &result.best_partition).unwrap();
        pass &= ok && (recheck - result.best_value).abs() <= 1e-9;
        notes.push(format!("({r},{n}) {:.6} ≤ δ₁ = {:.6}", result.best_value, f.delta(1)));
    }
    let t = start.elapsed();
    pass &= within_time(t, 600);
    Outcome::new(pass, format!("{}; {t:.2?} (limit 600 s)", notes.join(", ")))
}

/// 8. evaluate_partition against the Rayleigh and bisection oracles.
fn oracle_equivalence() -> Outcome {
    const SAMPLES: usize = 1_000_000;
    let start = Instant::now();
    let f = frame(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_bisect: f64 = 0.0;
    let mut worst_rayleigh_gap = f64::INFINITY;
    let mut bisected_blocks = 0usize;
    let mut pass = true;
    for _ in 0..100 {
        let p = Partition::random(&mut rng, f.params().vectors(), 2);
        let reported = evaluate_partition(&f, &p).unwrap();
        let blocks: Vec<Vec<usize>> = (1..=2).map(|j| p.block_rows(j)).filter(|b| !b.is_empty()).collect();
        let per_block = SAMPLES / blocks.len();
        let mut rayleigh = f64::INFINITY;
        let mut bisect = f64::INFINITY;
        for b in &blocks {
            let h = gram_oracle(&f, b);
            rayleigh = rayleigh.min(rayleigh_min(&h, per_block, &mut rng));
            if b.len() <= 6 {
                bisected_blocks += 1;
            }
            bisect = bisect.min(lambda_min_bisection(&h).max(0.0));
        }
        worst_bisect = worst_bisect.max((bisect - reported).abs());
        worst_rayleigh_gap = worst_rayleigh_gap.min(rayleigh - reported);
        pass &= rayleigh >= reported - 1e-3;
    }
    pass &= worst_bisect <= 1e-9;
    Outcome::new(
        pass,
        format!(
            "100 partitions at (2,2): max |bisection − reported| = {worst_bisect:.2e} (tol 1e-9, {bisected_blocks} blocks of size ≤ 6), \
             min(Rayleigh − reported) = {worst_rayleigh_gap:.2e} (must be ≥ −1e-3), {:.2?}",
            start.elapsed()
        ),
    )
}

/// 9. Serialize→parse→serialize fixed points and a perturbed entry.
fn io_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    for i in 0..50 {
        let r = rng.gen_range(2..=4usize);
        let n = rng.gen_range(1..=3usize);
        let f = frame(r, n);
        let encoding = if i % 2 == 0 { Encoding::Hex } else { Encoding::Decimal };
        let (construction, matrix) = match i % 3 {
            0 => (Construction::Stack, f.matrix().clone()),
            1 => (Construction::Projection, f.projection()),
            _ => {
                let k = rng.gen_range(1..=r);
                (Construction::Block(k), build_block(f.params(), k).unwrap())
            }
        };
        let text = MatrixFile::for_frame(&f, construction, matrix.clone(), encoding).to_text();
        let parsed = MatrixFile::parse(&text).unwrap();
        if parsed.to_text() != text {
            failures.push(format!("matrix {i} not a fixed point"));
        }
        if encoding == Encoding::Hex && parsed.matrix != matrix {
            failures.push(format!("hex matrix {i} not bit-exact"));
        }

        let p = Partition::random(&mut rng, f.params().vectors(), r);
        let k = rng.gen_range(1..r);
        let w = find_witness(&f, &p, k).unwrap();
        let verdict = verify_witness(&f, &w).valid;
        let cert = CertificateFile::new(&w, &p, format!("seed:{i}"), verdict, encoding);
        let text = cert.to_text();
        let reparsed = CertificateFile::parse(&text).unwrap();
        if reparsed.to_text() != text {
            failures.push(format!("certificate {i} not a fixed point"));
        }
        if pigeonhole_block(&reparsed.partition, &f, k) != reparsed.j {
            failures.push(format!("certificate {i} lost its partition"));
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let f = frame(3, 2);
    let mut file = MatrixFile::for_frame(&f, Construction::Stack, f.matrix().clone(), Encoding::Hex);
    let clean = dir.path().join("clean.txt");
    std::fs::write(&clean, file.to_text()).unwrap();
    file.matrix[(5, 2)] += paving::Complex64::new(1e-3, 0.0);
    let dirty = dir.path().join("perturbed.txt");
    std::fs::write(&dirty, file.to_text()).unwrap();
    let mut sink = Vec::new();
    let clean_code = cmd_verify(Some(&clean), None, None, &mut sink).unwrap();
    let dirty_code = cmd_verify(Some(&dirty), None, None, &mut sink).unwrap();
    if clean_code != EXIT_OK {
        failures.push(format!("clean file exit {clean_code}"));
    }
    if dirty_code != EXIT_CHECK_FAILED {
        failures.push(format!("perturbed file exit {dirty_code}"));
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "50 matrix + 50 certificate files, verify exit clean={clean_code} perturbed={dirty_code}, {} failures{}, {:.2?}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default(),
            start.elapsed()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("construction identities", construction_identities),
        ("δ formula table", delta_table),
        ("exhaustive optimality and dominance", exhaustive_optimality),
        ("witness soundness", witness_soundness),
        ("duality identity", duality_identity),
        ("decay of δ_k", decay_evidence),
        ("adversarial local search", adversarial_search),
        ("oracle equivalence", oracle_equivalence),
        ("I/O round trip", io_round_trip),
    ];
    let filter: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let outcome = check();
        println!(
            "[{}] criterion {id}: {name}: {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
        failed += usize::from(!outcome.pass);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
