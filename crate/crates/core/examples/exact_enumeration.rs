//! Parallel exact enumeration with progress reporting and cancellation.
//!
//! `cargo run --release --example exact_enumeration -- <n> <workers>`

use std::sync::atomic::AtomicBool;
use std::time::Instant;

use qubo_landscape::enumerate::{predicted_ops, ExactSolver, SolveOptions};
use qubo_landscape::generate::gen_ran;
use qubo_landscape::model::ising_to_qubo;
use qubo_landscape::rng::GeneratorSeed;

fn main() -> qubo_landscape::error::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(24);
    let workers = args.next().unwrap_or(4);
    let p = ising_to_qubo(&gen_ran(n, GeneratorSeed::new(1, 0))?);
    println!("n={n}: 2^{n} states, about {} operations", predicted_ops(n));

    let step = (1u64 << n) / 4;
    let progress = |visited: u64, _min: Option<f64>| {
        if visited % step < 1 << 16 {
            eprintln!("  visited {visited}");
        }
    };
    let solver = ExactSolver {
        options: SolveOptions {
            k: 10,
            workers,
            ..SolveOptions::default()
        },
        cancel: None,
        progress: Some(&progress),
    };
    let start = Instant::now();
    let spectrum = solver.solve(&p)?;
    println!("solved in {:.2?} with {workers} workers", start.elapsed());
    for s in &spectrum.states {
        println!("  {:>14.6} {}", s.energy, s.configuration.to_bit_string());
    }
    println!("max {:.6}", spectrum.max_cost().unwrap());

    let cancel = AtomicBool::new(true);
    let cancelled = ExactSolver {
        options: SolveOptions {
            k: 10,
            workers,
            ..SolveOptions::default()
        },
        cancel: Some(&cancel),
        progress: None,
    }
    .solve(&p);
    println!("with cancel set: {:?}", cancelled.err());
    Ok(())
}
