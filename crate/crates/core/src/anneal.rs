//! Single-spin-flip simulated annealing and success-probability estimation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{solve_exact, DEFAULT_MAX_N};
use crate::error::{Error, Result};
use crate::model::{ising_to_qubo, model_energy, Configuration, IsingModel, ENERGY_TOLERANCE};
use crate::rng::{GeneratorSeed, SplitMix64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// `beta` moves linearly from `beta_start` to `beta_end` across sweeps.
    LinearInBeta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub restarts: usize,
    pub schedule: Schedule,
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self {
            sweeps: 1000,
            beta_start: 0.1,
            beta_end: 10.0,
            restarts: 1000,
            schedule: Schedule::LinearInBeta,
        }
    }
}

impl AnnealParams {
    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(Error::Param("sweeps must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Param("restarts must be >= 1".into()));
        }
        if !(self.beta_start > 0.0 && self.beta_start <= self.beta_end && self.beta_end.is_finite())
        {
            return Err(Error::Param(format!(
                "need 0 < beta_start <= beta_end, got {} and {}",
                self.beta_start, self.beta_end
            )));
        }
        Ok(())
    }

    pub fn beta(&self, sweep: usize) -> f64 {
        match self.schedule {
            Schedule::LinearInBeta => {
                if self.sweeps == 1 {
                    self.beta_start
                } else {
                    let t = sweep as f64 / (self.sweeps - 1) as f64;
                    self.beta_start + (self.beta_end - self.beta_start) * t
                }
            }
        }
    }
}

/// Best state found by one anneal. `energy` includes the model offset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealResult {
    pub configuration: Configuration,
    pub energy: f64,
}

/// Annealer bound to one model; reusable across restarts.
pub struct Annealer<'m> {
    model: &'m IsingModel,
    couplings: Vec<f64>,
    params: AnnealParams,
}

impl<'m> Annealer<'m> {
    pub fn new(model: &'m IsingModel, params: AnnealParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            couplings: model.dense_couplings(),
            model,
            params,
        })
    }

    pub fn params(&self) -> &AnnealParams {
        &self.params
    }

    /// Anneal from a uniformly random spin state drawn from `seed`.
    pub fn run(&self, seed: GeneratorSeed) -> AnnealResult {
        let mut rng = seed.rng();
        let n = self.model.n();
        let mut bits = 0u64;
        for i in 0..n {
            if rng.next_bool() {
                bits |= 1 << i;
            }
        }
        self.run_from(
            Configuration::from_encoding(n, bits),
            &mut rng,
            |_, _, _| {},
        )
    }

    /// Anneal from `initial`. `observer` sees (sweep, state, running energy
    /// without offset) after every sweep.
    pub fn run_from(
        &self,
        initial: Configuration,
        rng: &mut SplitMix64,
        mut observer: impl FnMut(usize, &Configuration, f64),
    ) -> AnnealResult {
        let n = self.model.n();
        let h = self.model.fields();
        let mut spins: Vec<f64> = initial.spins().iter().map(|&s| f64::from(s)).collect();
        let mut local: Vec<f64> = (0..n)
            .map(|i| {
                let row = &self.couplings[i * n..(i + 1) * n];
                let mut acc = h[i];
                for (j, (&jij, &s)) in row.iter().zip(&spins).enumerate() {
                    if j != i {
                        acc += jij * s;
                    }
                }
                acc
            })
            .collect();
        let mut bits = initial.encoding();
        let mut energy = crate::model::ising_energy(self.model, &initial.spins())
            .expect("initial state matches model size");
        let mut best_bits = bits;
        let mut best_energy = energy;

        for sweep in 0..self.params.sweeps {
            let beta = self.params.beta(sweep);
            for i in 0..n {
                let delta = -2.0 * spins[i] * local[i];
                let accept = delta <= 0.0 || rng.next_f64() < (-beta * delta).exp();
                if !accept {
                    continue;
                }
                spins[i] = -spins[i];
                bits ^= 1 << i;
                energy += delta;
                let change = 2.0 * spins[i];
                let row = &self.couplings[i * n..(i + 1) * n];
                for (j, (loc, &jij)) in local.iter_mut().zip(row).enumerate() {
                    if j != i {
                        *loc += jij * change;
                    }
                }
                if energy < best_energy {
                    best_energy = energy;
                    best_bits = bits;
                }
            }
            observer(sweep, &Configuration::from_encoding(n, bits), energy);
        }

        let configuration = Configuration::from_encoding(n, best_bits);
        AnnealResult {
            configuration,
            energy: model_energy(self.model, &configuration).expect("size checked"),
        }
    }
}

/// One anneal of `m` seeded by `seed`. The returned energy includes `m.offset`.
pub fn anneal_once(
    m: &IsingModel,
    params: &AnnealParams,
    seed: GeneratorSeed,
) -> Result<(Configuration, f64)> {
    let r = Annealer::new(m, params.clone())?.run(seed);
    Ok((r.configuration, r.energy))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProblemClass {
    #[serde(rename = "REG")]
    Reg,
    #[serde(rename = "RAN")]
    Ran,
    #[serde(rename = "TWOSAT")]
    TwoSat,
    #[serde(rename = "OTHER")]
    Other,
}

impl fmt::Display for ProblemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemClass::Reg => "REG",
            ProblemClass::Ran => "RAN",
            ProblemClass::TwoSat => "TWOSAT",
            ProblemClass::Other => "OTHER",
        })
    }
}

impl FromStr for ProblemClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "REG" => Ok(ProblemClass::Reg),
            "RAN" => Ok(ProblemClass::Ran),
            "TWOSAT" | "2SAT" => Ok(ProblemClass::TwoSat),
            "OTHER" => Ok(ProblemClass::Other),
            other => Err(Error::Param(format!("unknown problem class {other:?}"))),
        }
    }
}

/// Fraction of independent runs that reached a known ground energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessRecord {
    #[serde(rename = "class")]
    pub class_label: ProblemClass,
    pub n: usize,
    pub instance_id: String,
    pub samples: u64,
    pub successes: u64,
}

impl SuccessRecord {
    pub fn success_probability(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.successes as f64 / self.samples as f64
        }
    }

    pub fn labelled(mut self, class: ProblemClass, instance_id: impl Into<String>) -> Self {
        self.class_label = class;
        self.instance_id = instance_id.into();
        self
    }
}

/// Runs `params.restarts` anneals (restart `r` uses `seed.derive(r)`) and
/// counts runs whose best energy is within tolerance of `target_energy`.
/// Energies include the model offset.
pub fn estimate_success(
    m: &IsingModel,
    target_energy: f64,
    params: &AnnealParams,
    seed: GeneratorSeed,
) -> Result<SuccessRecord> {
    let annealer = Annealer::new(m, params.clone())?;
    let successes = (0..params.restarts as u64)
        .into_par_iter()
        .filter(|&r| annealer.run(seed.derive(r)).energy <= target_energy + ENERGY_TOLERANCE)
        .count() as u64;
    Ok(SuccessRecord {
        class_label: ProblemClass::Other,
        n: m.n(),
        instance_id: String::new(),
        samples: params.restarts as u64,
        successes,
    })
}

/// Exact ground energy of `m` (offset included), evaluated on the minimizer
/// found by enumeration so it is directly comparable to annealing output.
pub fn exact_ground_energy(m: &IsingModel) -> Result<(Configuration, f64)> {
    if m.n() > DEFAULT_MAX_N {
        return Err(Error::Size {
            n: m.n(),
            reason: format!("exact ground energy requires n <= {DEFAULT_MAX_N}"),
        });
    }
    let spectrum = solve_exact(
        &ising_to_qubo(m),
        1,
        std::thread::available_parallelism().map_or(1, |p| p.get()),
    )?;
    let ground = spectrum
        .min_config()
        .expect("complete enumeration has a minimum");
    Ok((ground, model_energy(m, &ground)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gauge_transform_mask, gen_ran};

    fn quick() -> AnnealParams {
        AnnealParams {
            sweeps: 200,
            restarts: 20,
            ..AnnealParams::default()
        }
    }

    #[test]
    fn single_spin_finds_down_state() {
        let m = IsingModel::from_parts(1, [], vec![1.0], 0.0).unwrap();
        for s in 0..5 {
            let (c, e) = anneal_once(&m, &quick(), GeneratorSeed::new(s, 0)).unwrap();
            assert_eq!(c.spins(), vec![-1]);
            assert_eq!(e, -1.0);
        }
        let rec = estimate_success(&m, -1.0, &quick(), GeneratorSeed::new(1, 0)).unwrap();
        assert_eq!(rec.success_probability(), 1.0);
        let rec = estimate_success(&m, -1.5, &quick(), GeneratorSeed::new(1, 0)).unwrap();
        assert_eq!(rec.success_probability(), 0.0);
    }

    #[test]
    fn zero_model_gives_zero_energy() {
        let m = IsingModel::new(5).unwrap();
        let (_, e) = anneal_once(&m, &quick(), GeneratorSeed::new(3, 0)).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn invalid_params() {
        let m = IsingModel::new(2).unwrap();
        for p in [
            AnnealParams {
                sweeps: 0,
                ..quick()
            },
            AnnealParams {
                restarts: 0,
                ..quick()
            },
            AnnealParams {
                beta_start: 0.0,
                ..quick()
            },
            AnnealParams {
                beta_start: 2.0,
                beta_end: 1.0,
                ..quick()
            },
        ] {
            assert!(anneal_once(&m, &p, GeneratorSeed::new(0, 0)).is_err());
        }
    }

    #[test]
    fn schedule_endpoints() {
        let p = AnnealParams {
            sweeps: 11,
            beta_start: 1.0,
            beta_end: 2.0,
            ..quick()
        };
        assert_eq!(p.beta(0), 1.0);
        assert_eq!(p.beta(10), 2.0);
        assert!((p.beta(5) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn deterministic_records() {
        let m = gen_ran(10, GeneratorSeed::new(4, 0)).unwrap();
        let (_, ground) = exact_ground_energy(&m).unwrap();
        let a = estimate_success(&m, ground, &quick(), GeneratorSeed::new(9, 1)).unwrap();
        let b = estimate_success(&m, ground, &quick(), GeneratorSeed::new(9, 1)).unwrap();
        assert_eq!(a, b);
        assert!(a.successes <= a.samples);
    }

    #[test]
    fn gauge_equivariant_trajectories() {
        let n = 10;
        let m = gen_ran(n, GeneratorSeed::new(21, 0)).unwrap();
        let mask = 0b10_1100_1010u64;
        let g = gauge_transform_mask(&m, mask);
        let params = AnnealParams {
            sweeps: 50,
            ..quick()
        };
        let start = Configuration::from_encoding(n, 0b01_1010_0110);

        let mut trace_m = Vec::new();
        let mut rng = GeneratorSeed::new(77, 0).rng();
        let rm = Annealer::new(&m, params.clone())
            .unwrap()
            .run_from(start, &mut rng, |_, c, e| trace_m.push((c.xor(mask), e)));

        let mut trace_g = Vec::new();
        let mut rng = GeneratorSeed::new(77, 0).rng();
        let rg =
            Annealer::new(&g, params)
                .unwrap()
                .run_from(start.xor(mask), &mut rng, |_, c, e| trace_g.push((*c, e)));

        assert_eq!(trace_m, trace_g);
        assert_eq!(rm.energy, rg.energy);
        assert_eq!(rm.configuration.xor(mask), rg.configuration);
    }

    #[test]
    fn class_labels_round_trip() {
        for c in [
            ProblemClass::Reg,
            ProblemClass::Ran,
            ProblemClass::TwoSat,
            ProblemClass::Other,
        ] {
            assert_eq!(c.to_string().parse::<ProblemClass>().unwrap(), c);
        }
        assert!("XYZ".parse::<ProblemClass>().is_err());
    }
}
