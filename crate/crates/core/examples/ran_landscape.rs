//! Low-energy landscape of a RAN instance: Hamming distances from the ground
//! state and level spacings.
//!
//! `cargo run --release --example ran_landscape -- <n> <seed> <k>`

use qubo_landscape::enumerate::solve_exact;
use qubo_landscape::generate::gen_ran;
use qubo_landscape::landscape::{hamming_histogram, level_spacings, spectrum_spread, SpacingMode};
use qubo_landscape::model::ising_to_qubo;
use qubo_landscape::rng::GeneratorSeed;

fn main() -> qubo_landscape::error::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(16) as usize;
    let seed = args.next().unwrap_or(0);
    let k = args.next().unwrap_or(4000) as usize;

    let model = gen_ran(n, GeneratorSeed::new(seed, 0))?;
    let spectrum = solve_exact(&ising_to_qubo(&model), k, 4)?;
    println!(
        "RAN n={n} seed={seed}: {} states, ground cost {:.6}",
        spectrum.states.len(),
        spectrum.min_cost().unwrap()
    );
    println!(
        "spread of the kept states: {:.4}",
        spectrum_spread(&spectrum)?
    );

    let hamming = hamming_histogram(&spectrum)?;
    println!(
        "Hamming distance from the ground state (mode {:?}):",
        hamming.mode()
    );
    for e in &hamming.entries {
        println!(
            "  {:>2} {:>6} {}",
            e.value,
            e.count,
            "#".repeat((e.count as usize * 60 / k).max(1))
        );
    }
    let spacings = level_spacings(&spectrum, SpacingMode::Distinct)?;
    println!(
        "{} distinct level spacings, largest {:.5}",
        spacings.entries.len(),
        spacings.values().last().copied().unwrap_or(0.0)
    );
    Ok(())
}
