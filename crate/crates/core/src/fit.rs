//! Piecewise exponential fits `ln p(n) = a + b n` of success probability
//! against problem size.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum points per segment when the crossover is chosen automatically.
pub const AUTO_MIN_SEGMENT_POINTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Crossover {
    /// A single segment.
    None,
    /// Split into `n < n*` and `n >= n*`.
    Fixed(f64),
    /// Split minimizing the total squared error.
    Auto,
}

impl std::str::FromStr for Crossover {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Crossover::None),
            "auto" => Ok(Crossover::Auto),
            other => other.parse::<f64>().map(Crossover::Fixed).map_err(|_| {
                Error::Param(format!(
                    "crossover must be none, auto or a size, got {other:?}"
                ))
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub n_min: f64,
    pub n_max: f64,
    /// `a` in `ln p = a + b n`.
    pub intercept: f64,
    /// `b` in `ln p = a + b n`.
    pub exponent: f64,
    /// Sum of squared residuals in log space.
    pub sse: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub segments: Vec<Segment>,
    /// First size of the second segment.
    pub crossover_n: Option<f64>,
}

impl ScalingFit {
    pub fn total_sse(&self) -> f64 {
        self.segments.iter().map(|s| s.sse).sum()
    }
}

/// Ordinary least squares of `y` on `x`; needs two distinct `x`.
fn least_squares(pts: &[(f64, f64)]) -> Option<Segment> {
    if pts.len() < 2 {
        return None;
    }
    let count = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let sse = pts
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum();
    Some(Segment {
        n_min: pts[0].0,
        n_max: pts[pts.len() - 1].0,
        intercept,
        exponent,
        sse,
        points: pts.len(),
    })
}

/// Fits `ln p` against `n`. Points with `p <= 0` (no success observed) are
/// dropped before fitting.
pub fn fit_scaling(points: &[(f64, f64)], crossover: Crossover) -> Result<ScalingFit> {
    let mut usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(n, p)| n.is_finite() && p > 0.0 && p.is_finite())
        .collect();
    usable.sort_by(|a, b| a.0.total_cmp(&b.0));
    let logs: Vec<(f64, f64)> = usable.iter().map(|&(n, p)| (n, p.ln())).collect();
    let fail = |reason: String| Error::Fit {
        reason,
        usable: usable.clone(),
    };

    match crossover {
        Crossover::None => {
            let seg = least_squares(&logs)
                .ok_or_else(|| fail("need at least 2 points with distinct n and p > 0".into()))?;
            Ok(ScalingFit {
                segments: vec![seg],
                crossover_n: None,
            })
        }
        Crossover::Fixed(split) => {
            let cut = logs.partition_point(|p| p.0 < split);
            let left = least_squares(&logs[..cut]);
            let right = least_squares(&logs[cut..]);
            match (left, right) {
                (Some(l), Some(r)) => Ok(ScalingFit {
                    crossover_n: Some(r.n_min),
                    segments: vec![l, r],
                }),
                _ => Err(fail(format!(
                    "each side of n* = {split} needs at least 2 points with distinct n"
                ))),
            }
        }
        Crossover::Auto => {
            let mut best: Option<ScalingFit> = None;
            for cut in AUTO_MIN_SEGMENT_POINTS..=logs.len().saturating_sub(AUTO_MIN_SEGMENT_POINTS)
            {
                if logs[cut - 1].0 == logs[cut].0 {
                    continue;
                }
                let (Some(l), Some(r)) = (least_squares(&logs[..cut]), least_squares(&logs[cut..]))
                else {
                    continue;
                };
                let candidate = ScalingFit {
                    crossover_n: Some(r.n_min),
                    segments: vec![l, r],
                };
                if best
                    .as_ref()
                    .is_none_or(|b| candidate.total_sse() < b.total_sse())
                {
                    best = Some(candidate);
                }
            }
            best.ok_or_else(|| {
                fail(format!(
                    "automatic crossover needs at least {} points per segment",
                    AUTO_MIN_SEGMENT_POINTS
                ))
            })
        }
    }
}
