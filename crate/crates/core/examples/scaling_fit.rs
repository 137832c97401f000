//! Piecewise exponential fit of success probability against size, with an
//! automatically located crossover.
//!
//! `cargo run --release --example scaling_fit`

use qubo_landscape::fit::{fit_scaling, Crossover};
use qubo_landscape::rng::SplitMix64;

fn main() -> qubo_landscape::error::Result<()> {
    let mut rng = SplitMix64::new(3);
    let points: Vec<(f64, f64)> = (20..=160)
        .step_by(10)
        .map(|n| {
            let n = n as f64;
            let ln_p = if n < 80.0 {
                -0.039 * n
            } else {
                -0.039 * 80.0 - 0.090 * (n - 80.0)
            };
            (n, (ln_p + 0.03 * rng.next_signed_unit()).exp())
        })
        .collect();

    for crossover in [Crossover::None, Crossover::Fixed(80.0), Crossover::Auto] {
        let fit = fit_scaling(&points, crossover)?;
        println!(
            "{crossover:?}: total SSE {:.5}, crossover {:?}",
            fit.total_sse(),
            fit.crossover_n
        );
        for s in &fit.segments {
            println!(
                "  n in [{}, {}]: ln p = {:.4} {:+.5} n ({} points)",
                s.n_min, s.n_max, s.intercept, s.exponent, s.points
            );
        }
    }
    Ok(())
}
