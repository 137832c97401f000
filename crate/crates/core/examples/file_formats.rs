//! `.qubo` text, model JSON and spectrum JSON round trips.
//!
//! `cargo run --release --example file_formats`

use serde_json::json;

use qubo_landscape::enumerate::solve_exact;
use qubo_landscape::format::{
    parse_qubo_text, read_model_json, read_spectrum_json, write_model_json, write_qubo_text,
    write_spectrum_json, ModelMeta,
};
use qubo_landscape::generate::gen_reg;
use qubo_landscape::model::ising_to_qubo;

fn main() -> qubo_landscape::error::Result<()> {
    let model = gen_reg(4)?;
    let meta = ModelMeta {
        class: Some("REG".into()),
        seed: None,
        params: json!({}),
    };
    let text = write_model_json(&model, &meta);
    println!("model JSON:\n{text}");
    assert_eq!(read_model_json(&text)?.model, model);

    let qubo = ising_to_qubo(&model);
    let qubo_text = write_qubo_text(&qubo);
    println!(".qubo:\n{qubo_text}");
    assert_eq!(parse_qubo_text(&qubo_text)?, qubo);

    let spectrum = solve_exact(&qubo, 4, 1)?;
    let spectrum_text = write_spectrum_json(&spectrum, json!({"source": "gen_reg(4)"}));
    println!("spectrum JSON:\n{spectrum_text}");
    assert_eq!(read_spectrum_json(&spectrum_text)?.0, spectrum);
    Ok(())
}
