//! Hamming-distance and level-spacing distributions of low-energy spectra,
//! and aggregation of success records.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::anneal::{ProblemClass, SuccessRecord};
use crate::enumerate::LowEnergySpectrum;
use crate::error::{Error, Result};
use crate::model::{Configuration, ENERGY_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramEntry {
    pub value: f64,
    pub count: u64,
}

/// Counts per value, values strictly increasing, every count at least one.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub entries: Vec<HistogramEntry>,
    pub source: Option<String>,
    pub k: Option<usize>,
}

impl Histogram {
    /// Groups `values` whose difference to the first member of a group is at
    /// most `tolerance`; the group is labelled by that first (smallest) value.
    pub fn from_values(mut values: Vec<f64>, tolerance: f64) -> Self {
        values.sort_by(f64::total_cmp);
        let mut entries: Vec<HistogramEntry> = Vec::new();
        for v in values {
            match entries.last_mut() {
                Some(last) if v - last.value <= tolerance => last.count += 1,
                _ => entries.push(HistogramEntry { value: v, count: 1 }),
            }
        }
        Self {
            entries,
            source: None,
            k: None,
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    /// Most frequent value; ties go to the smallest value.
    pub fn mode(&self) -> Option<f64> {
        let mut best: Option<HistogramEntry> = None;
        for e in &self.entries {
            if best.is_none_or(|b| e.count > b.count) {
                best = Some(*e);
            }
        }
        best.map(|e| e.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }
}

pub fn hamming_distance(a: &Configuration, b: &Configuration) -> Result<u32> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok((a.encoding() ^ b.encoding()).count_ones())
}

fn require_states(s: &LowEnergySpectrum) -> Result<()> {
    if s.states.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 states, spectrum has {}",
            s.states.len()
        )));
    }
    Ok(())
}

/// Distances from the ground state `states[0]` to every other listed state.
pub fn hamming_histogram(s: &LowEnergySpectrum) -> Result<Histogram> {
    require_states(s)?;
    let ground = s.states[0].configuration;
    let values = s.states[1..]
        .iter()
        .map(|st| f64::from((ground.encoding() ^ st.configuration.encoding()).count_ones()))
        .collect();
    Ok(Histogram {
        k: Some(s.k_requested),
        ..Histogram::from_values(values, 0.0)
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingMode {
    /// Differences between successive distinct energy levels.
    #[default]
    Distinct,
    /// Differences between successive listed states, zeros included.
    Consecutive,
}

impl std::str::FromStr for SpacingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distinct" => Ok(SpacingMode::Distinct),
            "consecutive" => Ok(SpacingMode::Consecutive),
            other => Err(Error::Param(format!("unknown spacing mode {other:?}"))),
        }
    }
}

/// Energies collapsed into levels: an energy joins the current level when it is
/// within `tolerance` of the level's lowest member.
pub fn distinct_levels(energies: &[f64], tolerance: f64) -> Vec<f64> {
    let mut levels: Vec<f64> = Vec::new();
    for &e in energies {
        match levels.last() {
            Some(&level) if e - level <= tolerance => {}
            _ => levels.push(e),
        }
    }
    levels
}

pub fn level_spacings(s: &LowEnergySpectrum, mode: SpacingMode) -> Result<Histogram> {
    require_states(s)?;
    let energies = s.energies();
    let tolerance = if s.tolerance > 0.0 {
        s.tolerance
    } else {
        ENERGY_TOLERANCE
    };
    let gaps: Vec<f64> = match mode {
        SpacingMode::Distinct => distinct_levels(&energies, tolerance)
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect(),
        SpacingMode::Consecutive => energies.windows(2).map(|w| w[1] - w[0]).collect(),
    };
    Ok(Histogram {
        k: Some(s.k_requested),
        ..Histogram::from_values(gaps, tolerance)
    })
}

/// Energy range covered by the listed states.
pub fn spectrum_spread(s: &LowEnergySpectrum) -> Result<f64> {
    require_states(s)?;
    Ok(s.states[s.states.len() - 1].energy - s.states[0].energy)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessSummary {
    #[serde(rename = "class")]
    pub class_label: ProblemClass,
    pub n: usize,
    pub mean: f64,
    /// Population variance of per-instance probabilities.
    pub variance: f64,
    pub instances: usize,
}

/// Mean and population variance of success probability per (class, n).
/// Records with zero successes take part in the mean.
pub fn mean_success_by_n(records: &[SuccessRecord]) -> Result<Vec<SuccessSummary>> {
    if records.is_empty() {
        return Err(Error::InsufficientData("no success records".into()));
    }
    let mut groups: BTreeMap<(ProblemClass, usize), Vec<f64>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.class_label, r.n))
            .or_default()
            .push(r.success_probability());
    }
    Ok(groups
        .into_iter()
        .map(|((class_label, n), ps)| {
            let count = ps.len() as f64;
            let mean = ps.iter().sum::<f64>() / count;
            let variance = ps.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / count;
            SuccessSummary {
                class_label,
                n,
                mean,
                variance,
                instances: ps.len(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::SpectrumState;

    fn spectrum(states: &[(f64, &[u8])]) -> LowEnergySpectrum {
        let n = states[0].1.len();
        let mut s = LowEnergySpectrum::empty(n, states.len());
        s.states = states
            .iter()
            .map(|(e, bits)| SpectrumState {
                energy: *e,
                configuration: Configuration::from_bits(bits).unwrap(),
            })
            .collect();
        s
    }

    fn record(class: ProblemClass, n: usize, successes: u64, samples: u64) -> SuccessRecord {
        SuccessRecord {
            class_label: class,
            n,
            instance_id: String::new(),
            samples,
            successes,
        }
    }

    #[test]
    fn hamming_examples() {
        let a = Configuration::from_bits(&[0, 0, 0]).unwrap();
        assert_eq!(hamming_distance(&a, &a).unwrap(), 0);
        let b = Configuration::from_bits(&[0, 1, 0]).unwrap();
        let c = Configuration::from_bits(&[1, 1, 1]).unwrap();
        assert_eq!(hamming_distance(&b, &c).unwrap(), 2);
        assert_eq!(hamming_distance(&c, &b).unwrap(), 2);
        assert!(hamming_distance(&a, &Configuration::zeros(4)).is_err());
    }

    #[test]
    fn hamming_histogram_two_states() {
        let s = spectrum(&[(0.0, &[0, 0, 0, 0]), (1.0, &[1, 1, 0, 1])]);
        let h = hamming_histogram(&s).unwrap();
        assert_eq!(
            h.entries,
            vec![HistogramEntry {
                value: 3.0,
                count: 1
            }]
        );
        let one = spectrum(&[(0.0, &[0, 0])]);
        assert!(matches!(
            hamming_histogram(&one),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn distinct_and_consecutive_spacings() {
        let s = spectrum(&[
            (0.0, &[0, 0]),
            (4.0, &[1, 0]),
            (4.0, &[0, 1]),
            (4.0, &[1, 1]),
        ]);
        let d = level_spacings(&s, SpacingMode::Distinct).unwrap();
        assert_eq!(
            d.entries,
            vec![HistogramEntry {
                value: 4.0,
                count: 1
            }]
        );
        let c = level_spacings(&s, SpacingMode::Consecutive).unwrap();
        assert_eq!(
            c.entries,
            vec![
                HistogramEntry {
                    value: 0.0,
                    count: 2
                },
                HistogramEntry {
                    value: 4.0,
                    count: 1
                }
            ]
        );
        assert_eq!(spectrum_spread(&s).unwrap(), 4.0);
    }

    #[test]
    fn degenerate_spread_is_zero() {
        let s = spectrum(&[(1.5, &[0]), (1.5, &[1])]);
        assert_eq!(spectrum_spread(&s).unwrap(), 0.0);
    }

    #[test]
    fn near_equal_energies_collapse() {
        let levels = distinct_levels(&[0.0, 1e-12, 0.5, 0.5 + 3e-10, 1.0], 1e-9);
        assert_eq!(levels, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn mode_prefers_smallest_on_ties() {
        let h = Histogram::from_values(vec![3.0, 1.0, 3.0, 1.0, 2.0], 0.0);
        assert_eq!(h.mode(), Some(1.0));
        assert_eq!(h.total(), 5);
    }

    #[test]
    fn success_aggregation() {
        let one = mean_success_by_n(&[record(ProblemClass::Reg, 20, 1, 2)]).unwrap();
        assert_eq!(one[0].mean, 0.5);
        assert_eq!(one[0].variance, 0.0);

        let two = mean_success_by_n(&[
            record(ProblemClass::Reg, 20, 0, 10),
            record(ProblemClass::Reg, 20, 10, 10),
        ])
        .unwrap();
        assert_eq!(two[0].mean, 0.5);
        assert_eq!(two[0].variance, 0.25);
        assert_eq!(two[0].instances, 2);

        let mixed = mean_success_by_n(&[
            record(ProblemClass::Reg, 20, 10, 10),
            record(ProblemClass::Ran, 20, 0, 10),
        ])
        .unwrap();
        assert_eq!(mixed.len(), 2);
        assert!(mean_success_by_n(&[]).is_err());
    }
}
