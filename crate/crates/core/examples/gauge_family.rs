//! Random gauge transformations leave the spectrum unchanged and move the
//! ground state by the flip set.
//!
//! `cargo run --release --example gauge_family`

use qubo_landscape::anneal::exact_ground_energy;
use qubo_landscape::generate::{flip_mask, gen_ran, random_gauge_family};
use qubo_landscape::rng::GeneratorSeed;

fn main() -> qubo_landscape::error::Result<()> {
    let model = gen_ran(12, GeneratorSeed::new(7, 0))?;
    let (ground, energy) = exact_ground_energy(&model)?;
    println!(
        "original   ground {} energy {energy:.9}",
        ground.to_bit_string()
    );
    for (i, (member, flips)) in random_gauge_family(&model, 5, GeneratorSeed::new(7, 1))?
        .iter()
        .enumerate()
    {
        let (g, e) = exact_ground_energy(member)?;
        let mapped = g.xor(flip_mask(model.n(), flips)?) == ground;
        println!(
            "member {i}   ground {} energy {e:.9} flips {flips:?} maps back: {mapped}",
            g.to_bit_string()
        );
    }
    Ok(())
}
