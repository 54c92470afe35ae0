//! Partitions of the frame vectors into `r` blocks and searches for the
//! partition with the largest uniform Riesz bound.
//!
//! The objective of a partition is the minimum, over its nonempty blocks, of
//! the block's Riesz lower bound. Every search also tracks, for each row block
//! `D_k` with `k < r`, the worst case of the quantity the non-pavability
//! argument bounds: the smallest Riesz bound among blocks `A_j` with
//! `|A_j ∩ D_k| ≥ n`, restricted to `A_j ∩ D_k`. That value must never exceed
//! `δ_k`.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counterexample::CounterexampleFrame;
use crate::frame::{riesz_lower_bound, FullGram, IndexSet};
use crate::{Error, Result, BOUND_TOL};

/// Default cap on the number of labelings an exhaustive search may visit.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Name of the generator behind every seeded search, printed in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), stream = restart";

/// Block labels in `1..=r`, one per frame vector. Blocks may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    arity: usize,
    assignment: Vec<usize>,
}

impl Partition {
    pub fn new(arity: usize, assignment: Vec<usize>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParam("partition arity must be positive".into()));
        }
        if let Some(&bad) = assignment.iter().find(|&&l| l == 0 || l > arity) {
            return Err(Error::InvalidParam(format!(
                "block label {bad} outside 1..={arity}"
            )));
        }
        Ok(Self { arity, assignment })
    }

    /// The `index`-th labeling in lexicographic order (position 0 is the
    /// most significant digit).
    pub fn from_index(mut index: u128, size: usize, arity: usize) -> Self {
        let mut assignment = vec![1; size];
        for slot in assignment.iter_mut().rev() {
            *slot = (index % arity as u128) as usize + 1;
            index /= arity as u128;
        }
        Self { arity, assignment }
    }

    /// Uniform labeling drawn from `rng`.
    pub fn random<R: Rng>(rng: &mut R, size: usize, arity: usize) -> Self {
        let assignment = (0..size).map(|_| rng.gen_range(1..=arity)).collect();
        Self { arity, assignment }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Label of the 0-based index.
    pub fn label(&self, index: usize) -> usize {
        self.assignment[index]
    }

    /// 0-based members of block `j`.
    pub fn block_rows(&self, j: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == j)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn block(&self, j: usize) -> IndexSet {
        IndexSet::from_zero_based(self.block_rows(j))
    }

    pub fn blocks(&self) -> Vec<IndexSet> {
        (1..=self.arity).map(|j| self.block(j)).collect()
    }

    /// True when labels first appear in the order 1, 2, 3, … (one
    /// representative per relabeling class).
    pub fn is_canonical(&self) -> bool {
        let mut next = 1;
        for &l in &self.assignment {
            if l > next {
                return false;
            }
            if l == next {
                next += 1;
            }
        }
        true
    }

    fn check_for(&self, frame: &CounterexampleFrame) -> Result<()> {
        let params = frame.params();
        if self.arity != params.r() || self.len() != params.vectors() {
            return Err(Error::InvalidParam(format!(
                "partition of {} indices into {} blocks does not fit r = {}, n = {}",
                self.len(),
                self.arity,
                params.r(),
                params.n()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.assignment.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Exhaustive,
    Random,
    LocalSearch,
}

impl SearchMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exhaustive => "exhaustive",
            Self::Random => "random",
            Self::LocalSearch => "local_search",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u128,
    /// Enumerate one labeling per relabeling class only.
    pub canonical: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            canonical: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best_partition: Partition,
    pub best_value: f64,
    pub partitions_evaluated: u128,
    pub method: SearchMethod,
    /// Index `k - 1` holds, over all partitions tried, the largest value of
    /// `min_j λ_min(Gram(A_j ∩ D_k))` over blocks with `|A_j ∩ D_k| ≥ n`.
    pub per_k_violations: Vec<f64>,
    /// Partitions for which some `k < r` exceeded `δ_k + BOUND_TOL`.
    pub dominance_failures: u128,
    pub canonical: bool,
    /// `r^(r²n)` divided by the number of labelings visited, for canonical
    /// exhaustive runs; 1 otherwise.
    pub reduction_factor: f64,
}

impl SearchResult {
    /// True when every tried partition respected `δ_k` for all `k < r`.
    pub fn respects_bounds(&self, frame: &CounterexampleFrame) -> bool {
        self.dominance_failures == 0
            && self
                .per_k_violations
                .iter()
                .enumerate()
                .all(|(i, v)| *v <= frame.delta(i + 1) + BOUND_TOL)
    }
}

/// Iterator over every labeling of `size` indices with `arity` labels.
#[derive(Clone, Debug)]
pub struct PartitionIter {
    size: usize,
    arity: usize,
    next: u128,
    total: u128,
    canonical: bool,
}

impl PartitionIter {
    /// Number of labelings before canonical filtering, `arity^size`.
    pub fn total_labelings(&self) -> u128 {
        self.total
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        while self.next < self.total {
            let p = Partition::from_index(self.next, self.size, self.arity);
            self.next += 1;
            if !self.canonical || p.is_canonical() {
                return Some(p);
            }
        }
        None
    }
}

fn labeling_count(size: usize, arity: usize) -> Option<u128> {
    (arity as u128).checked_pow(u32::try_from(size).ok()?)
}

/// Every labeling of `0..size` with labels `1..=arity`, in lexicographic
/// order, optionally keeping only canonical representatives.
pub fn enumerate_partitions(
    size: usize,
    arity: usize,
    options: &SearchOptions,
) -> Result<PartitionIter> {
    if arity == 0 {
        return Err(Error::InvalidParam("partition arity must be positive".into()));
    }
    let total = labeling_count(size, arity).unwrap_or(u128::MAX);
    if total > options.budget {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget: options.budget,
        });
    }
    Ok(PartitionIter {
        size,
        arity,
        next: 0,
        total,
        canonical: options.canonical,
    })
}

/// Smallest label `j` maximising `|A_j ∩ D_k|`.
pub fn pigeonhole_block(p: &Partition, frame: &CounterexampleFrame, k: usize) -> usize {
    let rows = frame.params().row_block(k);
    let mut counts = vec![0usize; p.arity()];
    for i in rows {
        counts[p.label(i) - 1] += 1;
    }
    let mut best = 0;
    for j in 1..counts.len() {
        if counts[j] > counts[best] {
            best = j;
        }
    }
    best + 1
}

/// Minimum Riesz lower bound over the nonempty blocks of `p`.
pub fn evaluate_partition(frame: &CounterexampleFrame, p: &Partition) -> Result<f64> {
    p.check_for(frame)?;
    let mut value = f64::INFINITY;
    for block in p.blocks() {
        value = value.min(riesz_lower_bound(frame, &block)?);
    }
    Ok(value)
}

/// Shared evaluation state: the full Gram matrix of the frame.
struct Evaluator<'a> {
    frame: &'a CounterexampleFrame,
    gram: FullGram,
}

impl<'a> Evaluator<'a> {
    fn new(frame: &'a CounterexampleFrame) -> Self {
        Self {
            frame,
            gram: FullGram::new(frame),
        }
    }

    fn block_bounds(&self, p: &Partition) -> Vec<f64> {
        (1..=p.arity())
            .map(|j| self.gram.lower_bound(&p.block_rows(j)))
            .collect()
    }

    fn per_k(&self, p: &Partition) -> Vec<f64> {
        let params = self.frame.params();
        (1..params.r())
            .map(|k| {
                let rows = params.row_block(k);
                (1..=p.arity())
                    .filter_map(|j| {
                        let part: Vec<usize> = rows.clone().filter(|&i| p.label(i) == j).collect();
                        (part.len() >= params.n()).then(|| self.gram.lower_bound(&part))
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    fn violates(&self, per_k: &[f64]) -> bool {
        per_k
            .iter()
            .enumerate()
            .any(|(i, v)| *v > self.frame.delta(i + 1) + BOUND_TOL)
    }
}

fn min_value(bounds: &[f64]) -> f64 {
    bounds.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Running best plus per-k statistics; merges deterministically.
#[derive(Clone, Debug)]
struct Tally {
    best: Option<(f64, Partition)>,
    evaluated: u128,
    per_k: Vec<f64>,
    failures: u128,
}

impl Tally {
    fn new(r: usize) -> Self {
        Self {
            best: None,
            evaluated: 0,
            per_k: vec![f64::NEG_INFINITY; r - 1],
            failures: 0,
        }
    }

    fn offer(&mut self, value: f64, p: &Partition) {
        let better = match &self.best {
            None => true,
            Some((v, q)) => match value.total_cmp(v) {
                Ordering::Greater => true,
                Ordering::Equal => p < q,
                Ordering::Less => false,
            },
        };
        if better {
            self.best = Some((value, p.clone()));
        }
    }

    fn record(&mut self, eval: &Evaluator<'_>, p: &Partition, value: f64) {
        self.evaluated += 1;
        let per_k = eval.per_k(p);
        if eval.violates(&per_k) {
            self.failures += 1;
        }
        for (acc, v) in self.per_k.iter_mut().zip(per_k) {
            *acc = acc.max(v);
        }
        self.offer(value, p);
    }

    fn merge(mut self, other: Self) -> Self {
        self.evaluated += other.evaluated;
        self.failures += other.failures;
        for (a, b) in self.per_k.iter_mut().zip(other.per_k) {
            *a = a.max(b);
        }
        if let Some((v, p)) = other.best {
            self.offer(v, &p);
        }
        self
    }

    fn finish(self, method: SearchMethod, canonical: bool, reduction_factor: f64) -> SearchResult {
        let (best_value, best_partition) = self.best.expect("at least one partition evaluated");
        SearchResult {
            best_partition,
            best_value,
            partitions_evaluated: self.evaluated,
            method,
            per_k_violations: self.per_k,
            dominance_failures: self.failures,
            canonical,
            reduction_factor,
        }
    }
}

const CHUNK: u128 = 512;

/// Maximises the partition objective over every labeling.
pub fn exhaustive_search(frame: &CounterexampleFrame) -> Result<SearchResult> {
    exhaustive_search_with(frame, &SearchOptions::default())
}

pub fn exhaustive_search_with(
    frame: &CounterexampleFrame,
    options: &SearchOptions,
) -> Result<SearchResult> {
    let params = frame.params();
    let (size, r) = (params.vectors(), params.r());
    let total = enumerate_partitions(size, r, options)?.total_labelings();
    let eval = Evaluator::new(frame);
    let chunks = total.div_ceil(CHUNK);
    let tally = (0..chunks as u64)
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::new(r);
            let start = c as u128 * CHUNK;
            for index in start..(start + CHUNK).min(total) {
                let p = Partition::from_index(index, size, r);
                if options.canonical && !p.is_canonical() {
                    continue;
                }
                let value = min_value(&eval.block_bounds(&p));
                tally.record(&eval, &p, value);
            }
            tally
        })
        .reduce(|| Tally::new(r), Tally::merge);
    let reduction = total as f64 / tally.evaluated as f64;
    Ok(tally.finish(SearchMethod::Exhaustive, options.canonical, reduction))
}

/// Evaluates `samples` uniformly drawn labelings.
pub fn random_search(frame: &CounterexampleFrame, samples: usize, seed: u64) -> Result<SearchResult> {
    if samples == 0 {
        return Err(Error::InvalidParam("samples must be at least 1".into()));
    }
    let params = frame.params();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Partition> = (0..samples)
        .map(|_| Partition::random(&mut rng, params.vectors(), params.r()))
        .collect();
    let eval = Evaluator::new(frame);
    let tally = draws
        .par_chunks(CHUNK as usize)
        .map(|chunk| {
            let mut tally = Tally::new(params.r());
            for p in chunk {
                let value = min_value(&eval.block_bounds(p));
                tally.record(&eval, p, value);
            }
            tally
        })
        .reduce(|| Tally::new(params.r()), Tally::merge);
    Ok(tally.finish(SearchMethod::Random, false, 1.0))
}

/// Hill climbing over single-index relabelings, accepting strict
/// improvements only. Restart `ρ` draws from stream `ρ` of the seeded
/// generator, so adding restarts never changes earlier ones.
pub fn local_search(
    frame: &CounterexampleFrame,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<SearchResult> {
    if restarts == 0 {
        return Err(Error::InvalidParam("restarts must be at least 1".into()));
    }
    let params = frame.params();
    let eval = Evaluator::new(frame);
    let tally = (0..restarts as u64)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart);
            let start = Partition::random(&mut rng, params.vectors(), params.r());
            climb(&eval, start, iters, &mut rng)
        })
        .reduce(|| Tally::new(params.r()), Tally::merge);
    Ok(tally.finish(SearchMethod::LocalSearch, false, 1.0))
}

fn climb(eval: &Evaluator<'_>, start: Partition, iters: usize, rng: &mut ChaCha8Rng) -> Tally {
    let r = start.arity();
    let mut tally = Tally::new(r);
    let mut current = start;
    let mut bounds = eval.block_bounds(&current);
    let mut value = min_value(&bounds);
    tally.record(eval, &current, value);
    if r < 2 {
        return tally;
    }
    for _ in 0..iters {
        let index = rng.gen_range(0..current.len());
        let old = current.assignment[index];
        let mut new = rng.gen_range(1..r);
        if new >= old {
            new += 1;
        }
        let mut candidate = current.clone();
        candidate.assignment[index] = new;
        let mut cand_bounds = bounds.clone();
        cand_bounds[old - 1] = eval.gram.lower_bound(&candidate.block_rows(old));
        cand_bounds[new - 1] = eval.gram.lower_bound(&candidate.block_rows(new));
        let cand_value = min_value(&cand_bounds);
        tally.record(eval, &candidate, cand_value);
        if cand_value > value {
            current = candidate;
            bounds = cand_bounds;
            value = cand_value;
        }
    }
    tally
}
