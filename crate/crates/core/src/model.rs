//! QUBO problems, Ising models, configurations and the exact correspondence
//! between the two energy functions.
//!
//! Indices are 0-based throughout the library. A [`Configuration`] packs the
//! binary variables into a `u64`: bit `i` holds `x_i`. The spin view is
//! `S_i = 1 - 2 x_i`, so `x_i = 0` is spin up.
//!
//! For every problem `p`, `qubo_to_ising(p)` returns a model `m` with
//! `qubo_cost(p, c) == ising_energy(m, spins(c)) + m.offset` up to rounding.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of variables.
pub const MAX_VARIABLES: usize = 64;

/// Absolute tolerance used for energy equality comparisons.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

/// A binary assignment of `n` variables packed into a 64-bit word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    n: usize,
    bits: u64,
}

impl Configuration {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_size(n)?;
        if n < 64 && bits >> n != 0 {
            return Err(Error::Param(format!(
                "encoding {bits:#x} has bits set above n = {n}"
            )));
        }
        Ok(Self { n, bits })
    }

    /// Builds a configuration without range checks. `bits` is masked to `n` bits.
    pub fn from_encoding(n: usize, bits: u64) -> Self {
        debug_assert!(n <= MAX_VARIABLES);
        Self {
            n,
            bits: bits & mask(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_encoding(n, 0)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_size(bits.len())?;
        let mut word = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => word |= 1 << i,
                other => {
                    return Err(Error::Param(format!(
                        "bit value {other} at position {i} is not 0 or 1"
                    )))
                }
            }
        }
        Ok(Self {
            n: bits.len(),
            bits: word,
        })
    }

    /// Configuration with `x_0..x_{k-1} = 1` and the rest zero.
    pub fn prefix(n: usize, k: usize) -> Self {
        debug_assert!(k <= n);
        Self::from_encoding(n, mask(k))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn encoding(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, i: usize) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.bit(i)).collect()
    }

    pub fn flipped(&self, i: usize) -> Self {
        Self {
            n: self.n,
            bits: self.bits ^ (1 << i),
        }
    }

    /// Flips every position whose bit is set in `flips`.
    pub fn xor(&self, flips: u64) -> Self {
        Self::from_encoding(self.n, self.bits ^ flips)
    }

    /// Fixed-width string, index 0 leftmost.
    pub fn to_bit_string(&self) -> String {
        (0..self.n)
            .map(|i| if self.bit(i) == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn parse_bit_string(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::Param(format!(
                    "invalid character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }

    pub fn spins(&self) -> Vec<i8> {
        bits_to_spins(self)
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({})", self.to_bit_string())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_VARIABLES {
        return Err(Error::Size {
            n,
            reason: format!("at most {MAX_VARIABLES} variables are supported"),
        });
    }
    Ok(())
}

pub fn bits_to_spins(c: &Configuration) -> Vec<i8> {
    (0..c.n).map(|i| 1 - 2 * c.bit(i) as i8).collect()
}

pub fn spins_to_bits(spins: &[i8]) -> Result<Configuration> {
    check_size(spins.len())?;
    let mut word = 0u64;
    for (i, &s) in spins.iter().enumerate() {
        match s {
            1 => {}
            -1 => word |= 1 << i,
            other => {
                return Err(Error::InvalidSpin {
                    index: i,
                    value: other as i64,
                })
            }
        }
    }
    Ok(Configuration {
        n: spins.len(),
        bits: word,
    })
}

/// Symmetric coefficient matrix of a QUBO over `n` binary variables.
///
/// The cost is `sum_{i<=j} Q_ij x_i x_j`: each off-diagonal pair contributes
/// once. Stored densely and kept symmetric.
#[derive(Clone, PartialEq)]
pub struct QuboProblem {
    n: usize,
    q: Vec<f64>,
}

impl QuboProblem {
    pub fn new(n: usize) -> Result<Self> {
        check_size(n)?;
        if n == 0 {
            return Err(Error::Size {
                n,
                reason: "a problem needs at least one variable".into(),
            });
        }
        Ok(Self {
            n,
            q: vec![0.0; n * n],
        })
    }

    /// Builds a problem from a dense matrix; only the upper triangle (`i <= j`) is read.
    pub fn from_upper(rows: &[Vec<f64>]) -> Result<Self> {
        let mut p = Self::new(rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p.n {
                return Err(Error::Dimension {
                    expected: p.n,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate().skip(i) {
                p.set(i, j, v)?;
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sets `Q_ij` (and `Q_ji`). Order of `i`, `j` does not matter.
    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let n = self.n;
        if i >= n || j >= n {
            return Err(Error::Index { index: i.max(j), n });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite { i, j });
        }
        self.q[i * n + j] = value;
        self.q[j * n + i] = value;
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.n + j]
    }

    /// Row `i` of the symmetric matrix.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.q[i * self.n..(i + 1) * self.n]
    }

    /// Non-zero upper-triangle entries in `(i, j)` lexicographic order.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i..self.n).filter_map(move |j| {
                let v = self.get(i, j);
                (v != 0.0).then_some((i, j, v))
            })
        })
    }

    /// Sum of absolute values of the upper triangle; bounds `|cost|`.
    pub fn abs_sum(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| (i..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).abs())
            .sum()
    }

    /// `C_0 = 1/2 sum_i Q_ii + 1/4 sum_{i<j} Q_ij`.
    pub fn ising_constant(&self) -> f64 {
        let mut diag = 0.0;
        let mut off = 0.0;
        for i in 0..self.n {
            diag += self.get(i, i);
            for j in i + 1..self.n {
                off += self.get(i, j);
            }
        }
        0.5 * diag + 0.25 * off
    }
}

impl fmt::Debug for QuboProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuboProblem")
            .field("n", &self.n)
            .field("entries", &self.upper_entries().collect::<Vec<_>>())
            .finish()
    }
}

/// `sum_{i<=j} Q_ij x_i x_j`, summed in ascending `(i, j)` order.
pub fn qubo_cost(p: &QuboProblem, c: &Configuration) -> Result<f64> {
    if c.len() != p.n {
        return Err(Error::Dimension {
            expected: p.n,
            got: c.len(),
        });
    }
    Ok(qubo_cost_unchecked(p, c.encoding()))
}

pub(crate) fn qubo_cost_unchecked(p: &QuboProblem, bits: u64) -> f64 {
    let n = p.n;
    let mut cost = 0.0;
    for i in 0..n {
        if bits >> i & 1 == 0 {
            continue;
        }
        let row = p.row(i);
        for (j, &q) in row.iter().enumerate().skip(i) {
            if bits >> j & 1 == 1 {
                cost += q;
            }
        }
    }
    cost
}

/// Ising Hamiltonian `sum_{i<j} J_ij S_i S_j + sum_i h_i S_i + offset`.
///
/// `ising_energy` excludes the offset; the offset ties the energy to the cost
/// of the originating QUBO (or 2SAT instance).
#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel {
    n: usize,
    j: BTreeMap<(usize, usize), f64>,
    h: Vec<f64>,
    pub offset: f64,
}

impl IsingModel {
    pub fn new(n: usize) -> Result<Self> {
        check_size(n)?;
        if n == 0 {
            return Err(Error::Size {
                n,
                reason: "a model needs at least one spin".into(),
            });
        }
        Ok(Self {
            n,
            j: BTreeMap::new(),
            h: vec![0.0; n],
            offset: 0.0,
        })
    }

    pub fn from_parts(
        n: usize,
        couplings: impl IntoIterator<Item = (usize, usize, f64)>,
        h: Vec<f64>,
        offset: f64,
    ) -> Result<Self> {
        let mut m = Self::new(n)?;
        if h.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: h.len(),
            });
        }
        for (i, &v) in h.iter().enumerate() {
            m.set_field(i, v)?;
        }
        for (a, b, v) in couplings {
            if a >= b {
                return Err(Error::Param(format!(
                    "coupling ({a}, {b}) must satisfy i < j"
                )));
            }
            m.set_coupling(a, b, v)?;
        }
        if !offset.is_finite() {
            return Err(Error::NonFinite { i: n, j: n });
        }
        m.offset = offset;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn field(&self, i: usize) -> f64 {
        self.h[i]
    }

    pub fn set_field(&mut self, i: usize, value: f64) -> Result<()> {
        if i >= self.n {
            return Err(Error::Index {
                index: i,
                n: self.n,
            });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite { i, j: i });
        }
        self.h[i] = value;
        Ok(())
    }

    /// Stored couplings keyed by `(i, j)` with `i < j`.
    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.j
    }

    /// Coupling between `a` and `b` in either order; absent pairs are zero.
    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        let key = if a < b { (a, b) } else { (b, a) };
        self.j.get(&key).copied().unwrap_or(0.0)
    }

    /// Stores `J_ab`, including explicit zeros. Self-couplings are rejected.
    pub fn set_coupling(&mut self, a: usize, b: usize, value: f64) -> Result<()> {
        if a >= self.n || b >= self.n {
            return Err(Error::Index {
                index: a.max(b),
                n: self.n,
            });
        }
        if a == b {
            return Err(Error::Param(format!(
                "self-coupling ({a}, {a}) is not allowed"
            )));
        }
        if !value.is_finite() {
            return Err(Error::NonFinite { i: a, j: b });
        }
        let key = if a < b { (a, b) } else { (b, a) };
        self.j.insert(key, value);
        Ok(())
    }

    pub(crate) fn remove_coupling(&mut self, a: usize, b: usize) {
        let key = if a < b { (a, b) } else { (b, a) };
        self.j.remove(&key);
    }

    /// Dense symmetric coupling matrix (zero diagonal).
    pub fn dense_couplings(&self) -> Vec<f64> {
        let n = self.n;
        let mut dense = vec![0.0; n * n];
        for (&(a, b), &v) in &self.j {
            dense[a * n + b] = v;
            dense[b * n + a] = v;
        }
        dense
    }

    /// The QUBO constant in coupling/field form:
    /// `sum_{i<j} J_ij - sum_i (h_i + sum_{j != i} J_ij)`.
    pub fn qubo_constant(&self) -> f64 {
        let pair_sum: f64 = self.j.values().sum();
        let mut row_sums = vec![0.0; self.n];
        for (&(a, b), &v) in &self.j {
            row_sums[a] += v;
            row_sums[b] += v;
        }
        let mut total = pair_sum;
        for (h, r) in self.h.iter().zip(&row_sums) {
            total -= h + r;
        }
        total
    }
}

/// `sum_{i<j} J_ij S_i S_j + sum_i h_i S_i`, excluding the offset.
pub fn ising_energy(m: &IsingModel, spins: &[i8]) -> Result<f64> {
    if spins.len() != m.n {
        return Err(Error::Dimension {
            expected: m.n,
            got: spins.len(),
        });
    }
    if let Some((index, &value)) = spins.iter().enumerate().find(|(_, &s)| s != 1 && s != -1) {
        return Err(Error::InvalidSpin {
            index,
            value: value as i64,
        });
    }
    let mut energy = 0.0;
    for (&(a, b), &v) in &m.j {
        energy += v * f64::from(spins[a] * spins[b]);
    }
    for (h, &s) in m.h.iter().zip(spins) {
        energy += h * f64::from(s);
    }
    Ok(energy)
}

/// `ising_energy(m, spins(c)) + m.offset`.
pub fn model_energy(m: &IsingModel, c: &Configuration) -> Result<f64> {
    Ok(ising_energy(m, &c.spins())? + m.offset)
}

pub fn qubo_to_ising(p: &QuboProblem) -> IsingModel {
    let n = p.n;
    let mut m = IsingModel::new(n).expect("valid problem size");
    for i in 0..n {
        let mut off_sum = 0.0;
        for j in 0..n {
            if j != i {
                off_sum += p.get(i, j);
            }
        }
        m.h[i] = -0.5 * (p.get(i, i) + 0.5 * off_sum);
        for j in i + 1..n {
            let q = p.get(i, j);
            if q != 0.0 {
                m.j.insert((i, j), 0.25 * q);
            }
        }
    }
    m.offset = p.ising_constant();
    m
}

/// Inverse of [`qubo_to_ising`]. The model's offset is not carried over:
/// the result satisfies `cost = ising_energy + result.ising_constant()`.
pub fn ising_to_qubo(m: &IsingModel) -> QuboProblem {
    let n = m.n;
    let mut p = QuboProblem::new(n).expect("valid model size");
    let mut row_sums = vec![0.0; n];
    for (&(a, b), &v) in &m.j {
        row_sums[a] += v;
        row_sums[b] += v;
        p.q[a * n + b] = 4.0 * v;
        p.q[b * n + a] = 4.0 * v;
    }
    for (i, (h, sum)) in m.h.iter().zip(&row_sums).enumerate() {
        p.q[i * n + i] = -2.0 * (h + sum);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_configs(n: usize) -> impl Iterator<Item = Configuration> {
        (0..1u64 << n).map(move |b| Configuration::from_encoding(n, b))
    }

    #[test]
    fn spin_substitution() {
        let c = Configuration::from_bits(&[0, 1]).unwrap();
        assert_eq!(bits_to_spins(&c), vec![1, -1]);
        let c = Configuration::from_bits(&[0, 0, 0]).unwrap();
        assert_eq!(bits_to_spins(&c), vec![1, 1, 1]);
        assert_eq!(spins_to_bits(&[1, -1]).unwrap().bits(), vec![0, 1]);
        assert_eq!(spins_to_bits(&[-1, -1]).unwrap().bits(), vec![1, 1]);
    }

    #[test]
    fn spin_round_trip() {
        for n in 1..=10 {
            for c in all_configs(n) {
                assert_eq!(spins_to_bits(&bits_to_spins(&c)).unwrap(), c);
            }
        }
    }

    #[test]
    fn invalid_spin_rejected() {
        assert_eq!(
            spins_to_bits(&[1, 0]),
            Err(Error::InvalidSpin { index: 1, value: 0 })
        );
    }

    #[test]
    fn cost_examples() {
        let mut p = QuboProblem::new(1).unwrap();
        p.set(0, 0, 5.0).unwrap();
        assert_eq!(
            qubo_cost(&p, &Configuration::from_bits(&[1]).unwrap()).unwrap(),
            5.0
        );

        let p = QuboProblem::from_upper(&[vec![1.0, 2.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(
            qubo_cost(&p, &Configuration::from_bits(&[1, 1]).unwrap()).unwrap(),
            6.0
        );
        assert_eq!(qubo_cost(&p, &Configuration::zeros(2)).unwrap(), 0.0);
        assert!(matches!(
            qubo_cost(&p, &Configuration::zeros(3)),
            Err(Error::Dimension {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        let mut p = QuboProblem::new(2).unwrap();
        assert!(p.set(0, 1, f64::NAN).is_err());
        assert!(p.set(0, 2, 1.0).is_err());
        let mut m = IsingModel::new(2).unwrap();
        assert!(m.set_coupling(0, 0, 1.0).is_err());
        assert!(m.set_field(0, f64::INFINITY).is_err());
    }

    #[test]
    fn ising_energy_examples() {
        let m = IsingModel::from_parts(2, [(0, 1, 1.0)], vec![0.0, 0.0], 0.0).unwrap();
        assert_eq!(ising_energy(&m, &[1, 1]).unwrap(), 1.0);
        assert_eq!(ising_energy(&m, &[1, -1]).unwrap(), -1.0);
        let m = IsingModel::from_parts(1, [], vec![2.0], 0.0).unwrap();
        assert_eq!(ising_energy(&m, &[-1]).unwrap(), -2.0);
        assert!(matches!(
            ising_energy(&m, &[2]),
            Err(Error::InvalidSpin { .. })
        ));
        assert!(matches!(
            ising_energy(&m, &[1, 1]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn single_variable_conversion() {
        for q in [-3.5, 0.0, 2.0] {
            let mut p = QuboProblem::new(1).unwrap();
            p.set(0, 0, q).unwrap();
            let m = qubo_to_ising(&p);
            assert_eq!(m.field(0), -q / 2.0);
            assert_eq!(m.offset, q / 2.0);
            for c in all_configs(1) {
                let lhs = qubo_cost(&p, &c).unwrap();
                let rhs = model_energy(&m, &c).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn two_variable_conversion() {
        let mut p = QuboProblem::new(2).unwrap();
        p.set(0, 1, 4.0).unwrap();
        let m = qubo_to_ising(&p);
        assert_eq!(m.coupling(0, 1), 1.0);
        assert_eq!(m.fields(), &[-1.0, -1.0]);
        assert_eq!(m.offset, 1.0);
        for c in all_configs(2) {
            assert_eq!(qubo_cost(&p, &c).unwrap(), model_energy(&m, &c).unwrap());
        }
        let back = ising_to_qubo(&m);
        assert_eq!(back, p);
    }

    #[test]
    fn zero_problem_converts_to_zero_model() {
        let p = QuboProblem::new(3).unwrap();
        let m = qubo_to_ising(&p);
        assert!(m.couplings().is_empty());
        assert!(m.fields().iter().all(|&h| h == 0.0));
        assert_eq!(m.offset, 0.0);
        let zero = IsingModel::new(3).unwrap();
        assert_eq!(ising_to_qubo(&zero), p);
    }

    #[test]
    fn constant_forms_agree() {
        let p = QuboProblem::from_upper(&[
            vec![1.5, -2.0, 0.25],
            vec![0.0, -0.75, 3.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        let m = qubo_to_ising(&p);
        assert!((m.qubo_constant() - p.ising_constant()).abs() < 1e-12);
    }

    #[test]
    fn bit_string_round_trip() {
        let c = Configuration::from_bits(&[1, 0, 1, 1]).unwrap();
        assert_eq!(c.to_bit_string(), "1011");
        assert_eq!(Configuration::parse_bit_string("1011").unwrap(), c);
        assert!(Configuration::parse_bit_string("10a").is_err());
    }
}
