//! 2SAT instances, their Ising penalty form and a generator for instances
//! with a unique satisfying assignment and a degenerate first excited level.
//!
//! A clause is violated when both of its literals are false. Each violated
//! clause costs 4 in the Ising form, so `energy + offset = 4 * violations`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Configuration, IsingModel};
use crate::rng::{GeneratorSeed, SplitMix64};

/// Largest `n` the exhaustive filters accept.
pub const MAX_EXHAUSTIVE_N: usize = 24;

/// Largest `|J_ij|` and `|h_i|` a generated instance may have.
pub const MAX_COEFFICIENT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn new(var: usize, negated: bool) -> Self {
        Self { var, negated }
    }

    pub fn is_true(&self, c: &Configuration) -> bool {
        (c.bit(self.var) == 1) != self.negated
    }

    /// `+1` for a positive literal, `-1` for a negated one.
    fn sign(&self) -> i32 {
        if self.negated {
            -1
        } else {
            1
        }
    }
}

pub type Clause = (Literal, Literal);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSatInstance {
    n: usize,
    clauses: Vec<Clause>,
}

impl TwoSatInstance {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::Size {
                n,
                reason: "2SAT instances need 1..=64 variables".into(),
            });
        }
        if clauses.is_empty() {
            return Err(Error::Param(
                "a 2SAT instance needs at least one clause".into(),
            ));
        }
        for (idx, (a, b)) in clauses.iter().enumerate() {
            if a.var >= n || b.var >= n {
                return Err(Error::Clause {
                    clause: idx,
                    reason: format!("variable index out of range for n = {n}"),
                });
            }
            if a.var == b.var {
                return Err(Error::Clause {
                    clause: idx,
                    reason: "both literals use the same variable".into(),
                });
            }
        }
        Ok(Self { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }
}

/// Number of clauses whose two literals are both false under `c`.
pub fn twosat_cost(t: &TwoSatInstance, c: &Configuration) -> Result<usize> {
    if c.len() != t.n {
        return Err(Error::Dimension {
            expected: t.n,
            got: c.len(),
        });
    }
    Ok(t.clauses
        .iter()
        .filter(|(a, b)| !a.is_true(c) && !b.is_true(c))
        .count())
}

/// Integer Ising coefficients accumulated from the clause penalties.
struct IntegerModel {
    couplings: std::collections::BTreeMap<(usize, usize), i32>,
    fields: Vec<i32>,
}

fn integer_model(n: usize, clauses: &[Clause]) -> IntegerModel {
    let mut couplings = std::collections::BTreeMap::new();
    let mut fields = vec![0i32; n];
    for (a, b) in clauses {
        // Penalty (1 + sa S_a)(1 + sb S_b) is 4 iff both literals are false.
        let (sa, sb) = (a.sign(), b.sign());
        let key = if a.var < b.var {
            (a.var, b.var)
        } else {
            (b.var, a.var)
        };
        *couplings.entry(key).or_insert(0) += sa * sb;
        fields[a.var] += sa;
        fields[b.var] += sb;
    }
    IntegerModel { couplings, fields }
}

/// Ising form with `ising_energy + offset = 4 * twosat_cost`; offset is `M`.
/// Couplings that cancel to zero are not stored.
pub fn twosat_to_ising(t: &TwoSatInstance) -> IsingModel {
    let im = integer_model(t.n, &t.clauses);
    let mut m = IsingModel::new(t.n).expect("validated size");
    for (&(a, b), &v) in &im.couplings {
        if v != 0 {
            m.set_coupling(a, b, v as f64).expect("validated indices");
        } else {
            m.remove_coupling(a, b);
        }
    }
    for (i, &h) in im.fields.iter().enumerate() {
        m.set_field(i, h as f64).expect("validated indices");
    }
    m.offset = t.m() as f64;
    m
}

fn coefficients_in_range(n: usize, clauses: &[Clause]) -> bool {
    let im = integer_model(n, clauses);
    im.couplings.values().all(|v| v.abs() <= MAX_COEFFICIENT)
        && im.fields.iter().all(|v| v.abs() <= MAX_COEFFICIENT)
}

/// Counts of assignments by number of violated clauses, truncated at one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowLevelCounts {
    /// Satisfying assignments.
    pub satisfying: u64,
    /// Assignments violating exactly one clause.
    pub one_violation: u64,
    /// Encoding of the smallest satisfying assignment, if any.
    pub first_solution: Option<u64>,
}

/// Per-variable bit pattern of 64 consecutive assignments for the low six variables.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Exhaustively counts satisfying and one-violation assignments, 64 at a time.
pub fn count_low_levels(t: &TwoSatInstance) -> Result<LowLevelCounts> {
    if t.n > MAX_EXHAUSTIVE_N {
        return Err(Error::Size {
            n: t.n,
            reason: format!("exhaustive evaluation is limited to n <= {MAX_EXHAUSTIVE_N}"),
        });
    }
    Ok(count_low_levels_unchecked(t.n, &t.clauses))
}

fn count_low_levels_unchecked(n: usize, clauses: &[Clause]) -> LowLevelCounts {
    let total = 1u64 << n;
    let lanes = total.min(64);
    let lane_mask = if lanes == 64 {
        u64::MAX
    } else {
        (1u64 << lanes) - 1
    };
    let words = total.div_ceil(64);
    let mut satisfying = 0;
    let mut one_violation = 0;
    let mut first_solution = None;
    for w in 0..words {
        let base = w * 64;
        let var_mask = |v: usize| -> u64 {
            if v < 6 {
                LANE_PATTERNS[v]
            } else if base >> v & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        };
        let mut any = 0u64;
        let mut two = 0u64;
        for (a, b) in clauses {
            let fa = if a.negated {
                var_mask(a.var)
            } else {
                !var_mask(a.var)
            };
            let fb = if b.negated {
                var_mask(b.var)
            } else {
                !var_mask(b.var)
            };
            let violated = fa & fb;
            two |= any & violated;
            any |= violated;
        }
        let zero = !any & lane_mask;
        let one = any & !two & lane_mask;
        if first_solution.is_none() && zero != 0 {
            first_solution = Some(base + zero.trailing_zeros() as u64);
        }
        satisfying += zero.count_ones() as u64;
        one_violation += one.count_ones() as u64;
    }
    LowLevelCounts {
        satisfying,
        one_violation,
        first_solution,
    }
}

/// How candidate clause sets are proposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStrategy {
    /// Independent uniformly random clause sets.
    Rejection,
    /// Clause sets consistent with a hidden random assignment, refined by
    /// single-clause replacements that never increase the number of
    /// satisfying assignments. Every evaluated candidate counts as an attempt.
    PlantedDescent,
}

/// Generation parameters for [`gen_2sat`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSatGenerator {
    pub n: usize,
    pub m: usize,
    pub min_degeneracy: u64,
    pub max_attempts: u64,
    pub strategy: SearchStrategy,
}

impl TwoSatGenerator {
    /// `m = n + 1`, planted descent.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            m: n + 1,
            min_degeneracy: 1,
            max_attempts: 1_000_000,
            strategy: SearchStrategy::PlantedDescent,
        }
    }

    pub fn generate(&self, seed: GeneratorSeed) -> Result<TwoSatInstance> {
        let n = self.n;
        if n < 3 {
            return Err(Error::Size {
                n,
                reason: "2SAT generation needs n >= 3".into(),
            });
        }
        if n > MAX_EXHAUSTIVE_N {
            return Err(Error::Size {
                n,
                reason: format!("exhaustive filtering is limited to n <= {MAX_EXHAUSTIVE_N}"),
            });
        }
        if self.m == 0 {
            return Err(Error::Param("clause count must be >= 1".into()));
        }
        let mut rng = seed.rng();
        match self.strategy {
            SearchStrategy::Rejection => self.rejection(&mut rng),
            SearchStrategy::PlantedDescent => self.planted_descent(&mut rng),
        }
    }

    fn accepts(&self, clauses: &[Clause]) -> Option<LowLevelCounts> {
        if !coefficients_in_range(self.n, clauses) {
            return None;
        }
        let counts = count_low_levels_unchecked(self.n, clauses);
        (counts.satisfying == 1 && counts.one_violation >= self.min_degeneracy).then_some(counts)
    }

    fn rejection(&self, rng: &mut SplitMix64) -> Result<TwoSatInstance> {
        for _ in 0..self.max_attempts {
            let clauses: Vec<Clause> = (0..self.m).map(|_| random_clause(self.n, rng)).collect();
            if self.accepts(&clauses).is_some() {
                return TwoSatInstance::new(self.n, clauses);
            }
        }
        Err(Error::GenerationFailed {
            attempts: self.max_attempts,
        })
    }

    fn planted_descent(&self, rng: &mut SplitMix64) -> Result<TwoSatInstance> {
        let n = self.n;
        // Restart from a fresh hidden assignment after this many stalled proposals.
        let patience = 50 * (self.m as u64 + n as u64);
        let mut attempts = 0u64;
        while attempts < self.max_attempts {
            let hidden = rng.next_u64() & crate::model::mask(n);
            let mut clauses: Vec<Clause> = Vec::with_capacity(self.m);
            while clauses.len() < self.m {
                let c = planted_clause(n, hidden, rng);
                clauses.push(c);
            }
            if !coefficients_in_range(n, &clauses) {
                repair_coefficients(n, hidden, &mut clauses, rng);
            }
            attempts += 1;
            let mut counts = count_low_levels_unchecked(n, &clauses);
            let mut stalled = 0u64;
            loop {
                if counts.satisfying == 1
                    && counts.one_violation >= self.min_degeneracy
                    && coefficients_in_range(n, &clauses)
                {
                    return TwoSatInstance::new(n, clauses);
                }
                if attempts >= self.max_attempts || stalled >= patience {
                    break;
                }
                let slot = rng.below(self.m as u64) as usize;
                let proposal = planted_clause(n, hidden, rng);
                let previous = std::mem::replace(&mut clauses[slot], proposal);
                if !coefficients_in_range(n, &clauses) {
                    clauses[slot] = previous;
                    stalled += 1;
                    continue;
                }
                attempts += 1;
                let next = count_low_levels_unchecked(n, &clauses);
                if better_or_equal(&next, &counts) {
                    if improves(&next, &counts) {
                        stalled = 0;
                    } else {
                        stalled += 1;
                    }
                    counts = next;
                } else {
                    clauses[slot] = previous;
                    stalled += 1;
                }
            }
        }
        Err(Error::GenerationFailed { attempts })
    }
}

/// Fewer satisfying assignments first, then more one-violation assignments.
fn better_or_equal(next: &LowLevelCounts, current: &LowLevelCounts) -> bool {
    (next.satisfying, std::cmp::Reverse(next.one_violation))
        <= (current.satisfying, std::cmp::Reverse(current.one_violation))
}

fn improves(next: &LowLevelCounts, current: &LowLevelCounts) -> bool {
    (next.satisfying, std::cmp::Reverse(next.one_violation))
        < (current.satisfying, std::cmp::Reverse(current.one_violation))
}

/// Unordered variable pair uniform over all pairs, negations by fair coin.
fn random_clause(n: usize, rng: &mut SplitMix64) -> Clause {
    let a = rng.below(n as u64) as usize;
    let mut b = rng.below(n as u64 - 1) as usize;
    if b >= a {
        b += 1;
    }
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    (
        Literal::new(a, rng.next_bool()),
        Literal::new(b, rng.next_bool()),
    )
}

/// Random clause conditioned on being satisfied by `hidden`.
fn planted_clause(n: usize, hidden: u64, rng: &mut SplitMix64) -> Clause {
    loop {
        let (a, b) = random_clause(n, rng);
        let truth = |l: &Literal| (hidden >> l.var & 1 == 1) != l.negated;
        if truth(&a) || truth(&b) {
            return (a, b);
        }
    }
}

fn repair_coefficients(n: usize, hidden: u64, clauses: &mut [Clause], rng: &mut SplitMix64) {
    for slot in 0..clauses.len() {
        let mut tries = 0;
        while !coefficients_in_range(n, clauses) && tries < 64 {
            clauses[slot] = planted_clause(n, hidden, rng);
            tries += 1;
        }
    }
}

/// Generates an instance with `m` clauses over `n` variables that has exactly
/// one satisfying assignment, at least `min_degeneracy` assignments violating
/// exactly one clause, and integer Ising coefficients in `[-2, 2]`.
pub fn gen_2sat(
    n: usize,
    m: usize,
    seed: GeneratorSeed,
    min_degeneracy: u64,
    max_attempts: u64,
) -> Result<TwoSatInstance> {
    TwoSatGenerator {
        n,
        m,
        min_degeneracy,
        max_attempts,
        strategy: SearchStrategy::PlantedDescent,
    }
    .generate(seed)
}
