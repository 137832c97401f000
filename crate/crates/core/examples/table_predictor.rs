//! Elapsed-time prediction for large enumerations from a reference run.
//!
//! `cargo run --release --example table_predictor`

use qubo_landscape::enumerate::predict_elapsed;

fn main() -> qubo_landscape::error::Result<()> {
    let (ref_n, ref_units, ref_time) = (44, 4, 1562.0);
    println!("reference: n={ref_n} on {ref_units} units in {ref_time} s");
    println!(
        "{:>3} {:>6} {:>10} {:>12}",
        "n", "units", "ratio", "predicted s"
    );
    for (n, units) in [
        (44, 4),
        (50, 256),
        (50, 512),
        (50, 1024),
        (54, 1024),
        (56, 512),
    ] {
        let (seconds, ratio) = predict_elapsed(n, units, ref_time, ref_n, ref_units)?;
        println!("{n:>3} {units:>6} {ratio:>10.4} {seconds:>12.1}");
    }
    Ok(())
}
