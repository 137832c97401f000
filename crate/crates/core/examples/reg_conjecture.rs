//! Exact ground states of the REG class against the prefix conjecture.
//!
//! `cargo run --release --example reg_conjecture -- 20`

use qubo_landscape::enumerate::solve_exact;
use qubo_landscape::generate::{gen_reg, reg_conjectured_solution};
use qubo_landscape::model::ising_to_qubo;

fn main() -> qubo_landscape::error::Result<()> {
    let max_n: usize = std::env::args()
        .nth(1)
        .map_or(18, |a| a.parse().expect("n"));
    println!(
        "{:>3} {:>4} {:>14} {:>14}  ground state",
        "n", "k", "exact", "closed form"
    );
    for n in 2..=max_n {
        let p = ising_to_qubo(&gen_reg(n)?);
        let spectrum = solve_exact(&p, 1, 4)?;
        let conj = reg_conjectured_solution(n)?;
        let ground = spectrum.min_config().expect("non-empty space");
        let mark = if ground == conj.configuration {
            ""
        } else {
            "  MISMATCH"
        };
        println!(
            "{n:>3} {:>4} {:>14.6} {:>14.6}  {}{mark}",
            conj.k,
            spectrum.min_cost().expect("non-empty space"),
            -conj.closed_form,
            ground.to_bit_string()
        );
    }
    Ok(())
}
