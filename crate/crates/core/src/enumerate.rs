//! Exhaustive enumeration of all `2^n` configurations.
//!
//! The encoding space is split into disjoint ranges, each range is scanned
//! independently and the partial spectra are folded together with
//! [`merge_spectra`]. Inside a range, configurations are visited along a
//! Gray-code walk over aligned power-of-two blocks so that each step flips a
//! single bit and costs `O(n)`.
//!
//! Incremental energies only decide which configurations *may* enter the
//! result. Every configuration that is recorded is re-evaluated with
//! [`qubo_cost`](crate::model::qubo_cost), so results do not depend on the
//! partition, the number of workers or scheduling order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{qubo_cost_unchecked, Configuration, QuboProblem, ENERGY_TOLERANCE};

/// Default number of lowest states kept by a solve.
pub const DEFAULT_K: usize = 6037;

/// Default largest `n` accepted without an explicit override.
pub const DEFAULT_MAX_N: usize = 40;

/// Largest `n` the enumerator can handle at all (the range end must fit in 64 bits).
pub const HARD_MAX_N: usize = 63;

/// Visits between resynchronisations, cancellation checks and progress reports.
const CHECK_INTERVAL: u64 = 1 << 16;

/// Half-open interval of configuration encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumRange {
    pub start: u64,
    pub end: u64,
}

impl EnumRange {
    pub fn new(start: u64, end: u64) -> Result<Self> {
        if start >= end {
            return Err(Error::Param(format!("empty range [{start}, {end})")));
        }
        Ok(Self { start, end })
    }

    pub fn len(&self) -> u64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }
}

/// Splits `[0, 2^n)` into `workers` disjoint ranges whose sizes differ by at most one.
/// Requests for more ranges than configurations are reduced to `2^n` ranges.
pub fn partition_range(n: usize, workers: usize) -> Result<Vec<EnumRange>> {
    if workers == 0 {
        return Err(Error::Param("workers must be >= 1".into()));
    }
    if n > HARD_MAX_N {
        return Err(Error::Size {
            n,
            reason: format!("enumeration supports n <= {HARD_MAX_N}"),
        });
    }
    let total = 1u64 << n;
    let parts = (workers as u64).min(total);
    let base = total / parts;
    let extra = total % parts;
    let mut ranges = Vec::with_capacity(parts as usize);
    let mut start = 0;
    for i in 0..parts {
        let len = base + u64::from(i < extra);
        ranges.push(EnumRange {
            start,
            end: start + len,
        });
        start += len;
    }
    Ok(ranges)
}

/// One enumerated configuration and its exactly evaluated cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumState {
    pub energy: f64,
    pub configuration: Configuration,
}

impl SpectrumState {
    /// Normative order: energy, then integer encoding.
    pub fn order(&self, other: &Self) -> Ordering {
        self.energy.total_cmp(&other.energy).then(
            self.configuration
                .encoding()
                .cmp(&other.configuration.encoding()),
        )
    }
}

/// Heap entry ordered by (energy, encoding).
#[derive(Clone, Copy, Debug)]
struct Key(f64, u64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// The `k` lowest states of (part of) the configuration space plus global extremes.
#[derive(Clone, Debug, PartialEq)]
pub struct LowEnergySpectrum {
    pub n: usize,
    pub k_requested: usize,
    /// Sorted by (energy, encoding), at most `k_requested` long.
    pub states: Vec<SpectrumState>,
    pub min: Option<SpectrumState>,
    /// Lowest energy more than `tolerance` above the minimum.
    pub next_lowest_cost: Option<f64>,
    pub max: Option<SpectrumState>,
    /// Configurations within `tolerance` of the minimum.
    pub ground_degeneracy: u64,
    pub total_enumerated: u64,
    pub tolerance: f64,
}

impl LowEnergySpectrum {
    /// Identity element of [`merge_spectra`].
    pub fn empty(n: usize, k_requested: usize) -> Self {
        Self {
            n,
            k_requested,
            states: Vec::new(),
            min: None,
            next_lowest_cost: None,
            max: None,
            ground_degeneracy: 0,
            total_enumerated: 0,
            tolerance: ENERGY_TOLERANCE,
        }
    }

    pub fn min_cost(&self) -> Option<f64> {
        self.min.map(|s| s.energy)
    }

    pub fn min_config(&self) -> Option<Configuration> {
        self.min.map(|s| s.configuration)
    }

    pub fn max_cost(&self) -> Option<f64> {
        self.max.map(|s| s.energy)
    }

    pub fn max_config(&self) -> Option<Configuration> {
        self.max.map(|s| s.configuration)
    }

    pub fn is_complete(&self) -> bool {
        self.n <= HARD_MAX_N && self.total_enumerated == 1u64 << self.n
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }
}

/// Hooks checked every 2^16 visits of a scan.
#[derive(Default, Clone, Copy)]
pub struct ScanControl<'a> {
    pub cancel: Option<&'a AtomicBool>,
    /// Called with the number of configurations visited since the last call
    /// and the current minimum of the calling scan.
    pub progress: Option<&'a (dyn Fn(u64, Option<f64>) + Sync)>,
}

struct Scanner<'a> {
    p: &'a QuboProblem,
    k: usize,
    tolerance: f64,
    margin: f64,
    heap: BinaryHeap<Key>,
    min: Option<Key>,
    next_lowest: Option<f64>,
    max: Option<Key>,
    degeneracy: u64,
}

impl<'a> Scanner<'a> {
    fn new(p: &'a QuboProblem, k: usize, tolerance: f64) -> Self {
        Self {
            p,
            k,
            tolerance,
            // Bounds the drift of incremental energies between resyncs.
            margin: 1e-8 * (1.0 + p.abs_sum()),
            heap: BinaryHeap::with_capacity(k.min(1 << 20) + 1),
            min: None,
            next_lowest: None,
            max: None,
            degeneracy: 0,
        }
    }

    fn needs_exact(&self, approx: f64) -> bool {
        let m = self.margin;
        if self.k > 0 {
            match self.heap.peek() {
                Some(top) if self.heap.len() >= self.k => {
                    if approx <= top.0 + m {
                        return true;
                    }
                }
                _ => return true,
            }
        }
        let Some(min) = self.min else { return true };
        let Some(max) = self.max else { return true };
        if approx <= min.0 + self.tolerance + m || approx >= max.0 - m {
            return true;
        }
        match self.next_lowest {
            Some(next) => approx <= next + m,
            None => true,
        }
    }

    #[inline]
    fn visit(&mut self, approx: f64, bits: u64) {
        if self.needs_exact(approx) {
            let exact = qubo_cost_unchecked(self.p, bits);
            self.record(Key(exact, bits));
        }
    }

    fn record(&mut self, key: Key) {
        if self.k > 0 {
            if self.heap.len() < self.k {
                self.heap.push(key);
            } else if key < *self.heap.peek().expect("heap is full") {
                self.heap.pop();
                self.heap.push(key);
            }
        }

        let e = key.0;
        match self.min {
            None => {
                self.min = Some(key);
                self.degeneracy = 1;
            }
            Some(min) if e < min.0 - self.tolerance => {
                self.next_lowest = Some(min.0);
                self.min = Some(key);
                self.degeneracy = 1;
            }
            Some(min) if e <= min.0 + self.tolerance => {
                self.degeneracy += 1;
                if key < min {
                    self.min = Some(key);
                }
            }
            Some(_) => {
                if self.next_lowest.is_none_or(|next| e < next) {
                    self.next_lowest = Some(e);
                }
            }
        }

        match self.max {
            Some(max) if !(e > max.0 || (e == max.0 && key.1 < max.1)) => {}
            _ => self.max = Some(key),
        }
    }

    fn finish(self, n: usize, visited: u64) -> LowEnergySpectrum {
        let mut keys = self.heap.into_vec();
        keys.sort();
        let state = |k: Key| SpectrumState {
            energy: k.0,
            configuration: Configuration::from_encoding(n, k.1),
        };
        LowEnergySpectrum {
            n,
            k_requested: self.k,
            states: keys.into_iter().map(state).collect(),
            min: self.min.map(state),
            next_lowest_cost: self.next_lowest,
            max: self.max.map(state),
            ground_degeneracy: self.degeneracy,
            total_enumerated: visited,
            tolerance: self.tolerance,
        }
    }
}

/// Incremental evaluation state: current bits, energy and row sums
/// `g_j = sum_l Q_jl x_l` (diagonal included).
pub(crate) struct GrayWalker<'a> {
    p: &'a QuboProblem,
    bits: u64,
    energy: f64,
    g: Vec<f64>,
}

impl<'a> GrayWalker<'a> {
    pub(crate) fn new(p: &'a QuboProblem, bits: u64) -> Self {
        let mut w = Self {
            p,
            bits,
            energy: 0.0,
            g: vec![0.0; p.n()],
        };
        w.resync();
        w
    }

    pub(crate) fn resync(&mut self) {
        let n = self.p.n();
        self.energy = qubo_cost_unchecked(self.p, self.bits);
        for (j, g) in self.g.iter_mut().enumerate() {
            let row = self.p.row(j);
            *g = (0..n)
                .filter(|&l| self.bits >> l & 1 == 1)
                .map(|l| row[l])
                .sum();
        }
    }

    pub(crate) fn bits(&self) -> u64 {
        self.bits
    }

    pub(crate) fn energy(&self) -> f64 {
        self.energy
    }

    #[inline]
    pub(crate) fn flip(&mut self, i: usize) {
        let row = self.p.row(i);
        let set = self.bits >> i & 1 == 0;
        if set {
            self.energy += row[i] + self.g[i];
            for (g, &q) in self.g.iter_mut().zip(row) {
                *g += q;
            }
        } else {
            self.energy -= self.g[i];
            for (g, &q) in self.g.iter_mut().zip(row) {
                *g -= q;
            }
        }
        self.bits ^= 1 << i;
    }
}

/// Aligned power-of-two blocks covering `[start, end)`, as (base, log2 size).
fn aligned_blocks(range: EnumRange) -> Vec<(u64, u32)> {
    let mut blocks = Vec::new();
    let mut start = range.start;
    while start < range.end {
        let align = if start == 0 {
            63
        } else {
            start.trailing_zeros()
        };
        let room = 63 - (range.end - start).leading_zeros();
        let b = align.min(room);
        blocks.push((start, b));
        start += 1 << b;
    }
    blocks
}

/// Scans every encoding in `range` once and keeps the `k` lowest states.
/// `k = 0` tracks only the extremes.
pub fn scan_range(p: &QuboProblem, range: EnumRange, k: usize) -> Result<LowEnergySpectrum> {
    scan_range_with(p, range, k, ENERGY_TOLERANCE, ScanControl::default())
}

pub fn scan_range_with(
    p: &QuboProblem,
    range: EnumRange,
    k: usize,
    tolerance: f64,
    control: ScanControl<'_>,
) -> Result<LowEnergySpectrum> {
    let n = p.n();
    if n > HARD_MAX_N {
        return Err(Error::Size {
            n,
            reason: format!("enumeration supports n <= {HARD_MAX_N}"),
        });
    }
    if range.is_empty() || range.end > 1u64 << n {
        return Err(Error::Param(format!(
            "range [{}, {}) is not a valid subrange of [0, 2^{n})",
            range.start, range.end
        )));
    }
    let mut scanner = Scanner::new(p, k, tolerance);
    let mut visited = 0u64;
    let mut since_check = 0u64;
    for (base, log_size) in aligned_blocks(range) {
        let mut walker = GrayWalker::new(p, base);
        scanner.visit(walker.energy(), walker.bits());
        visited += 1;
        since_check += 1;
        let steps = 1u64 << log_size;
        for t in 1..steps {
            walker.flip(t.trailing_zeros() as usize);
            if since_check >= CHECK_INTERVAL {
                walker.resync();
                if let Some(progress) = control.progress {
                    progress(since_check, scanner.min.map(|m| m.0));
                }
                since_check = 0;
                if control
                    .cancel
                    .is_some_and(|c| c.load(AtomicOrdering::Relaxed))
                {
                    return Err(Error::Cancelled { visited });
                }
            }
            scanner.visit(walker.energy(), walker.bits());
            visited += 1;
            since_check += 1;
        }
    }
    if let Some(progress) = control.progress {
        progress(since_check, scanner.min.map(|m| m.0));
    }
    Ok(scanner.finish(n, visited))
}

/// Combines two partial spectra of the same problem. Associative and
/// commutative; the empty spectrum is the identity.
pub fn merge_spectra(a: &LowEnergySpectrum, b: &LowEnergySpectrum) -> Result<LowEnergySpectrum> {
    if a.k_requested != b.k_requested {
        return Err(Error::Merge(format!(
            "capacity mismatch: {} vs {}",
            a.k_requested, b.k_requested
        )));
    }
    if a.n != b.n {
        return Err(Error::Merge(format!(
            "size mismatch: n = {} vs {}",
            a.n, b.n
        )));
    }
    let tolerance = a.tolerance.max(b.tolerance);

    let mut states = Vec::with_capacity((a.states.len() + b.states.len()).min(a.k_requested));
    let (mut i, mut j) = (0, 0);
    while states.len() < a.k_requested && (i < a.states.len() || j < b.states.len()) {
        let take_a = match (a.states.get(i), b.states.get(j)) {
            (Some(x), Some(y)) => x.order(y) != Ordering::Greater,
            (Some(_), None) => true,
            _ => false,
        };
        if take_a {
            states.push(a.states[i]);
            i += 1;
        } else {
            states.push(b.states[j]);
            j += 1;
        }
    }

    let lower = |x: SpectrumState, y: SpectrumState| {
        if x.order(&y) == Ordering::Greater {
            y
        } else {
            x
        }
    };
    let (min, next_lowest_cost, ground_degeneracy) = match (a.min, b.min) {
        (None, None) => (None, None, 0),
        (Some(_), None) => (a.min, a.next_lowest_cost, a.ground_degeneracy),
        (None, Some(_)) => (b.min, b.next_lowest_cost, b.ground_degeneracy),
        (Some(x), Some(y)) => {
            if (x.energy - y.energy).abs() <= tolerance {
                let next = min_opt(a.next_lowest_cost, b.next_lowest_cost);
                (
                    Some(lower(x, y)),
                    next,
                    a.ground_degeneracy + b.ground_degeneracy,
                )
            } else if x.energy < y.energy {
                (
                    Some(x),
                    min_opt(a.next_lowest_cost, Some(y.energy)),
                    a.ground_degeneracy,
                )
            } else {
                (
                    Some(y),
                    min_opt(b.next_lowest_cost, Some(x.energy)),
                    b.ground_degeneracy,
                )
            }
        }
    };

    let max = match (a.max, b.max) {
        (Some(x), Some(y)) => Some(match x.energy.total_cmp(&y.energy) {
            Ordering::Greater => x,
            Ordering::Less => y,
            Ordering::Equal => lower(x, y),
        }),
        (x, y) => x.or(y),
    };

    Ok(LowEnergySpectrum {
        n: a.n,
        k_requested: a.k_requested,
        states,
        min,
        next_lowest_cost,
        max,
        ground_degeneracy,
        total_enumerated: a.total_enumerated + b.total_enumerated,
        tolerance,
    })
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// `n (n - 1) 2^n`, the reference operation count of a full enumeration.
pub fn predicted_ops(n: usize) -> u128 {
    if n >= 120 {
        return u128::MAX;
    }
    let n128 = n as u128;
    (n128 * n128.saturating_sub(1)).saturating_mul(1u128 << n)
}

/// Elapsed-time prediction from a reference run, scaling by operation count
/// and by the ratio of processing units. Returns `(seconds, s_ref)`.
pub fn predict_elapsed(
    n: usize,
    units: usize,
    ref_time_s: f64,
    ref_n: usize,
    ref_units: usize,
) -> Result<(f64, f64)> {
    if n == 0 || units == 0 || ref_n < 2 || ref_units == 0 {
        return Err(Error::Param(
            "all counts must be >= 1 and ref_n >= 2".into(),
        ));
    }
    let ops_ratio = predicted_ops(n) as f64 / predicted_ops(ref_n) as f64;
    let s_ref = ops_ratio * (ref_units as f64 / units as f64);
    Ok((ref_time_s * s_ref, s_ref))
}

/// Options for [`ExactSolver`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub k: usize,
    pub workers: usize,
    /// Largest `n` solved without `force`.
    pub max_n: usize,
    pub force: bool,
    pub tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            workers: std::thread::available_parallelism().map_or(1, |p| p.get()),
            max_n: DEFAULT_MAX_N,
            force: false,
            tolerance: ENERGY_TOLERANCE,
        }
    }
}

/// Parallel exact solver: partition, concurrent scans, sequential merge.
#[derive(Default)]
pub struct ExactSolver<'a> {
    pub options: SolveOptions,
    pub cancel: Option<&'a AtomicBool>,
    /// Receives (total visited so far, current minimum of the reporting worker).
    pub progress: Option<&'a (dyn Fn(u64, Option<f64>) + Sync)>,
}

impl<'a> ExactSolver<'a> {
    pub fn new(options: SolveOptions) -> Self {
        Self {
            options,
            cancel: None,
            progress: None,
        }
    }

    pub fn solve(&self, p: &QuboProblem) -> Result<LowEnergySpectrum> {
        let n = p.n();
        let opts = &self.options;
        if n > HARD_MAX_N || (n > opts.max_n && !opts.force) {
            return Err(Error::ResourceGuard {
                n,
                limit: opts.max_n.min(HARD_MAX_N),
                predicted_ops: predicted_ops(n),
            });
        }
        let ranges = partition_range(n, opts.workers)?;
        let visited = AtomicU64::new(0);
        let report = |delta: u64, current: Option<f64>| {
            let total = visited.fetch_add(delta, AtomicOrdering::Relaxed) + delta;
            if let Some(progress) = self.progress {
                progress(total, current);
            }
        };
        let control = ScanControl {
            cancel: self.cancel,
            progress: Some(&report),
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers.max(1))
            .build()
            .map_err(|e| Error::Param(format!("thread pool: {e}")))?;
        let partials: Vec<Result<LowEnergySpectrum>> = pool.install(|| {
            use rayon::prelude::*;
            ranges
                .par_iter()
                .map(|&r| scan_range_with(p, r, opts.k, opts.tolerance, control))
                .collect()
        });
        let mut acc = LowEnergySpectrum::empty(n, opts.k);
        acc.tolerance = opts.tolerance;
        for part in partials {
            acc = merge_spectra(&acc, &part?)?;
        }
        Ok(acc)
    }
}

/// Exact solve with the default guard and tolerance.
pub fn solve_exact(p: &QuboProblem, k: usize, workers: usize) -> Result<LowEnergySpectrum> {
    ExactSolver::new(SolveOptions {
        k,
        workers,
        ..SolveOptions::default()
    })
    .solve(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::qubo_cost;

    fn random_problem(n: usize, seed: u64) -> QuboProblem {
        let mut rng = crate::rng::GeneratorSeed::new(seed, 0).rng();
        let mut p = QuboProblem::new(n).unwrap();
        for i in 0..n {
            for j in i..n {
                p.set(i, j, rng.next_signed_unit()).unwrap();
            }
        }
        p
    }

    #[test]
    fn partition_examples() {
        assert_eq!(
            partition_range(3, 2).unwrap(),
            vec![
                EnumRange { start: 0, end: 4 },
                EnumRange { start: 4, end: 8 }
            ]
        );
        let parts = partition_range(3, 3).unwrap();
        assert_eq!(
            parts.iter().map(EnumRange::len).collect::<Vec<_>>(),
            vec![3, 3, 2]
        );
        assert_eq!(parts.last().unwrap().end, 8);
        assert_eq!(partition_range(2, 10).unwrap().len(), 4);
        assert!(partition_range(3, 0).is_err());
    }

    #[test]
    fn aligned_blocks_cover_range() {
        for (s, e) in [(0u64, 8u64), (3, 17), (5, 6), (1, 1 << 12), (4, 12)] {
            let blocks = aligned_blocks(EnumRange { start: s, end: e });
            let mut cursor = s;
            for (base, b) in blocks {
                assert_eq!(base, cursor);
                assert_eq!(base % (1 << b), 0);
                cursor += 1 << b;
            }
            assert_eq!(cursor, e);
        }
    }

    #[test]
    fn diagonal_example_order() {
        let p = QuboProblem::from_upper(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let s = scan_range(&p, EnumRange { start: 0, end: 4 }, 4).unwrap();
        let got: Vec<(f64, u64)> = s
            .states
            .iter()
            .map(|st| (st.energy, st.configuration.encoding()))
            .collect();
        // x=(0,1) -> enc 2; x=(0,0) -> 0; x=(1,1) -> 3; x=(1,0) -> 1.
        assert_eq!(got, vec![(-1.0, 2), (0.0, 0), (0.0, 3), (1.0, 1)]);
        assert_eq!(s.min_cost(), Some(-1.0));
        assert_eq!(s.next_lowest_cost, Some(0.0));
        assert_eq!(s.max_cost(), Some(1.0));
        assert_eq!(s.ground_degeneracy, 1);
        assert_eq!(s.total_enumerated, 4);
    }

    #[test]
    fn extremes_only_mode() {
        let p = random_problem(6, 1);
        let s = scan_range(&p, EnumRange { start: 0, end: 64 }, 0).unwrap();
        assert!(s.states.is_empty());
        let full = scan_range(&p, EnumRange { start: 0, end: 64 }, 64).unwrap();
        assert_eq!(s.min, full.min);
        assert_eq!(s.max, full.max);
        assert_eq!(s.next_lowest_cost, full.next_lowest_cost);
    }

    #[test]
    fn incremental_walk_matches_direct() {
        let n = 12;
        let p = random_problem(n, 7);
        let mut w = GrayWalker::new(&p, 0);
        for t in 1..1u64 << n {
            w.flip(t.trailing_zeros() as usize);
            let direct = qubo_cost_unchecked(&p, w.bits());
            assert!((w.energy() - direct).abs() <= 1e-8, "step {t}");
        }
    }

    #[test]
    fn split_scan_equals_whole_scan() {
        for seed in 0..20 {
            let n = 3 + (seed as usize % 10);
            let p = random_problem(n, seed);
            let total = 1u64 << n;
            let whole = scan_range(
                &p,
                EnumRange {
                    start: 0,
                    end: total,
                },
                17,
            )
            .unwrap();
            let cut = 1 + (seed * 7919) % (total - 1);
            let a = scan_range(&p, EnumRange { start: 0, end: cut }, 17).unwrap();
            let b = scan_range(
                &p,
                EnumRange {
                    start: cut,
                    end: total,
                },
                17,
            )
            .unwrap();
            assert_eq!(merge_spectra(&a, &b).unwrap(), whole);
            assert_eq!(merge_spectra(&b, &a).unwrap(), whole);
        }
    }

    #[test]
    fn merge_identity_and_capacity_mismatch() {
        let p = random_problem(5, 3);
        let s = scan_range(&p, EnumRange { start: 0, end: 32 }, 5).unwrap();
        assert_eq!(
            merge_spectra(&s, &LowEnergySpectrum::empty(5, 5)).unwrap(),
            s
        );
        assert!(matches!(
            merge_spectra(&s, &LowEnergySpectrum::empty(5, 4)),
            Err(Error::Merge(_))
        ));
    }

    #[test]
    fn solve_matches_naive_and_is_worker_independent() {
        let p = random_problem(10, 11);
        let reference = solve_exact(&p, 1 << 10, 1).unwrap();
        let mut naive: Vec<(f64, u64)> = (0..1u64 << 10)
            .map(|b| {
                (
                    qubo_cost(&p, &Configuration::from_encoding(10, b)).unwrap(),
                    b,
                )
            })
            .collect();
        naive.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for (st, (e, b)) in reference.states.iter().zip(&naive) {
            assert_eq!(st.energy, *e);
            assert_eq!(st.configuration.encoding(), *b);
        }
        for workers in [2, 3, 4, 8] {
            assert_eq!(solve_exact(&p, 1 << 10, workers).unwrap(), reference);
        }
    }

    #[test]
    fn degenerate_ground_state() {
        // Q = 0: every configuration has cost 0.
        let p = QuboProblem::new(4).unwrap();
        let s = solve_exact(&p, 3, 2).unwrap();
        assert_eq!(s.ground_degeneracy, 16);
        assert_eq!(s.min_config().unwrap().encoding(), 0);
        assert_eq!(s.next_lowest_cost, None);
        assert_eq!(s.states.len(), 3);
    }

    #[test]
    fn guard_refuses_large_problems() {
        let p = QuboProblem::new(41).unwrap();
        match solve_exact(&p, 1, 1) {
            Err(Error::ResourceGuard {
                n: 41,
                limit: 40,
                predicted_ops,
            }) => {
                assert_eq!(predicted_ops, 41 * 40 * (1u128 << 41));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cancellation_stops_the_scan() {
        let p = random_problem(20, 5);
        let stop = AtomicBool::new(true);
        let solver = ExactSolver {
            options: SolveOptions {
                k: 4,
                workers: 2,
                ..SolveOptions::default()
            },
            cancel: Some(&stop),
            progress: None,
        };
        assert!(matches!(solver.solve(&p), Err(Error::Cancelled { .. })));
    }

    #[test]
    fn progress_reports_every_visit() {
        let p = random_problem(18, 5);
        let last = AtomicU64::new(0);
        let hook = |total: u64, _: Option<f64>| {
            last.fetch_max(total, AtomicOrdering::Relaxed);
        };
        let solver = ExactSolver {
            options: SolveOptions {
                k: 1,
                workers: 3,
                ..SolveOptions::default()
            },
            cancel: None,
            progress: Some(&hook),
        };
        solver.solve(&p).unwrap();
        assert_eq!(last.load(AtomicOrdering::Relaxed), 1 << 18);
    }

    #[test]
    fn predicted_ops_examples() {
        assert_eq!(predicted_ops(2), 8);
        assert_eq!(predicted_ops(44), 44 * 43 * (1u128 << 44));
        let ratio = predicted_ops(50) as f64 / predicted_ops(44) as f64;
        assert!((ratio - 50.0 * 49.0 / (44.0 * 43.0) * 64.0).abs() < 1e-9);
        assert!((ratio - 82.87).abs() < 0.01);
    }

    #[test]
    fn predict_reference_point() {
        let (secs, s) = predict_elapsed(44, 4, 1562.0, 44, 4).unwrap();
        assert_eq!(s, 1.0);
        assert_eq!(secs, 1562.0);
    }
}
