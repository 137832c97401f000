//! A 2SAT instance with a unique satisfying assignment and a highly degenerate
//! first excited level, and the landscape structure that follows.
//!
//! `cargo run --release --example twosat_hard_instance -- <n> <min_degeneracy> <seed>`

use qubo_landscape::enumerate::solve_exact;
use qubo_landscape::landscape::{hamming_histogram, level_spacings, SpacingMode};
use qubo_landscape::model::ising_to_qubo;
use qubo_landscape::rng::GeneratorSeed;
use qubo_landscape::twosat::{count_low_levels, twosat_to_ising, TwoSatGenerator};

fn main() -> qubo_landscape::error::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(16) as usize;
    let min_degeneracy = args.next().unwrap_or(1500);
    let seed = args.next().unwrap_or(0);

    let generator = TwoSatGenerator {
        min_degeneracy,
        max_attempts: 10_000_000,
        ..TwoSatGenerator::new(n)
    };
    let instance = generator.generate(GeneratorSeed::new(seed, 0))?;
    let counts = count_low_levels(&instance)?;
    println!(
        "n={n} M={}: {} satisfying assignment(s), {} one-violation assignments",
        instance.m(),
        counts.satisfying,
        counts.one_violation
    );

    let model = twosat_to_ising(&instance);
    let k = counts.one_violation as usize + 1;
    let spectrum = solve_exact(&ising_to_qubo(&model), k, 4)?;
    println!("ground degeneracy {}", spectrum.ground_degeneracy);
    println!(
        "distinct spacings: {:?}",
        level_spacings(&spectrum, SpacingMode::Distinct)?.values()
    );
    let hamming = hamming_histogram(&spectrum)?;
    println!("Hamming mode {:?}", hamming.mode());
    for e in &hamming.entries {
        println!("  {:>2} {:>6}", e.value, e.count);
    }
    Ok(())
}
