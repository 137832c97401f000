//! REG and RAN spin-glass instances and gauge transformations.

use crate::error::{Error, Result};
use crate::model::{ising_to_qubo, qubo_cost, Configuration, IsingModel};
use crate::rng::GeneratorSeed;

fn check_min_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Size {
            n,
            reason: "at least two spins are required".into(),
        });
    }
    Ok(())
}

/// Fully-connected regular model with coefficients linear in the spin indices.
///
/// With 1-based indices, `J_ij = 1 - (i + j - 2)/(n - 1)` and
/// `h_i = 1 - 2(i - 1)/(n - 1)`. Pairs with `i + j = n + 1` have zero coupling
/// and are not stored.
pub fn gen_reg(n: usize) -> Result<IsingModel> {
    check_min_size(n)?;
    let mut m = IsingModel::new(n)?;
    let denom = (n - 1) as f64;
    // 0-based a, b: numerator (n - 1) - (a + b) over (n - 1).
    for a in 0..n {
        let h_num = (n - 1) as i64 - 2 * a as i64;
        m.set_field(a, h_num as f64 / denom)?;
        for b in a + 1..n {
            let num = (n - 1) as i64 - (a + b) as i64;
            if num != 0 {
                m.set_coupling(a, b, num as f64 / denom)?;
            }
        }
    }
    Ok(m)
}

/// Best prefix configuration of a REG instance.
#[derive(Clone, Debug, PartialEq)]
pub struct RegSolution {
    /// Number of leading ones.
    pub k: usize,
    pub configuration: Configuration,
    /// QUBO cost of `configuration` for `ising_to_qubo(gen_reg(n))`.
    pub cost: f64,
    /// `k (n - k) (n - 2k + 2) / (n - 1)` evaluated at the chosen `k`.
    pub closed_form: f64,
}

pub fn reg_closed_form(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    k * (n - k) * (n - 2.0 * k + 2.0) / (n - 1.0)
}

/// Evaluates all `n + 1` prefix configurations of the REG instance and returns
/// the cheapest; ties go to the smallest `k`.
pub fn reg_conjectured_solution(n: usize) -> Result<RegSolution> {
    let p = ising_to_qubo(&gen_reg(n)?);
    let mut best: Option<(usize, f64)> = None;
    for k in 0..=n {
        let cost = qubo_cost(&p, &Configuration::prefix(n, k))?;
        if best.is_none_or(|(_, c)| cost < c) {
            best = Some((k, cost));
        }
    }
    let (k, cost) = best.expect("n + 1 >= 1 candidates");
    Ok(RegSolution {
        k,
        configuration: Configuration::prefix(n, k),
        cost,
        closed_form: reg_closed_form(n, k),
    })
}

/// Fully-connected model with every coupling and field uniform in `[-1, 1]`.
///
/// Draw order: couplings in `(i, j)` lexicographic order, then fields.
pub fn gen_ran(n: usize, seed: GeneratorSeed) -> Result<IsingModel> {
    check_min_size(n)?;
    let mut rng = seed.rng();
    let mut m = IsingModel::new(n)?;
    for a in 0..n {
        for b in a + 1..n {
            m.set_coupling(a, b, rng.next_signed_unit())?;
        }
    }
    for a in 0..n {
        m.set_field(a, rng.next_signed_unit())?;
    }
    Ok(m)
}

/// Set of flipped spins as a bit mask over spin indices.
pub fn flip_mask(n: usize, flips: &[usize]) -> Result<u64> {
    let mut mask = 0u64;
    for &i in flips {
        if i >= n {
            return Err(Error::Index { index: i, n });
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Reverses the spins in `flips`: `h_i -> -h_i` for flipped spins and
/// `J_ij -> -J_ij` when exactly one endpoint is flipped. Energies are
/// preserved under the matching spin flip; the offset is unchanged.
pub fn gauge_transform(m: &IsingModel, flips: &[usize]) -> Result<IsingModel> {
    let mask = flip_mask(m.n(), flips)?;
    Ok(gauge_transform_mask(m, mask))
}

pub fn gauge_transform_mask(m: &IsingModel, mask: u64) -> IsingModel {
    let flipped = |i: usize| mask >> i & 1 == 1;
    let mut out = m.clone();
    for i in 0..m.n() {
        if flipped(i) {
            out.set_field(i, -m.field(i)).expect("index in range");
        }
    }
    for (&(a, b), &v) in m.couplings() {
        if flipped(a) != flipped(b) {
            out.set_coupling(a, b, -v).expect("index in range");
        }
    }
    out
}

/// `count` gauge-equivalent copies of `m`, each flipping every spin with
/// probability 1/2. Member `i` draws from `seed.derive(i)`.
pub fn random_gauge_family(
    m: &IsingModel,
    count: usize,
    seed: GeneratorSeed,
) -> Result<Vec<(IsingModel, Vec<usize>)>> {
    if count == 0 {
        return Err(Error::Param("gauge family needs count >= 1".into()));
    }
    Ok((0..count as u64)
        .map(|member| {
            let mut rng = seed.derive(member).rng();
            let flips: Vec<usize> = (0..m.n()).filter(|_| rng.next_bool()).collect();
            let mask = flip_mask(m.n(), &flips).expect("indices drawn in range");
            (gauge_transform_mask(m, mask), flips)
        })
        .collect())
}
