//! Annealing success probability on one instance of each class.
//!
//! `cargo run --release --example simulated_annealing -- <n> <restarts>`

use qubo_landscape::anneal::{estimate_success, exact_ground_energy, AnnealParams, ProblemClass};
use qubo_landscape::generate::{gen_ran, gen_reg};
use qubo_landscape::model::IsingModel;
use qubo_landscape::rng::GeneratorSeed;
use qubo_landscape::twosat::{gen_2sat, twosat_to_ising};

fn main() -> qubo_landscape::error::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(16);
    let restarts = args.next().unwrap_or(500);
    let params = AnnealParams {
        restarts,
        ..AnnealParams::default()
    };

    let instances: Vec<(ProblemClass, IsingModel)> = vec![
        (ProblemClass::Reg, gen_reg(n)?),
        (ProblemClass::Ran, gen_ran(n, GeneratorSeed::new(0, 0))?),
        (
            ProblemClass::TwoSat,
            twosat_to_ising(&gen_2sat(
                n,
                n + 1,
                GeneratorSeed::new(0, 0),
                (1 << n) / 200,
                10_000_000,
            )?),
        ),
    ];
    for (class, model) in instances {
        let (_, target) = exact_ground_energy(&model)?;
        let record = estimate_success(&model, target, &params, GeneratorSeed::new(42, 0))?
            .labelled(class, "example");
        println!(
            "{class:<6} n={n} ground {target:>10.5}: {}/{} successes, p = {:.3}",
            record.successes,
            record.samples,
            record.success_probability()
        );
    }
    Ok(())
}
