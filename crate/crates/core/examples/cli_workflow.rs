//! The command-line workflow driven in-process: generate, solve, analyze.
//!
//! `cargo run --release --example cli_workflow -- <output dir>`

use qubo_landscape::cli::run_cli;

fn main() {
    let dir = std::path::PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "cli_workflow_out".into()),
    );
    std::fs::create_dir_all(&dir).expect("output directory");
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let steps: Vec<Vec<String>> = vec![
        vec![
            "gen".into(),
            "--class".into(),
            "reg".into(),
            "--n".into(),
            "16".into(),
            "-o".into(),
            path("reg16.json"),
        ],
        vec![
            "solve".into(),
            "--exact".into(),
            "--k".into(),
            "1000".into(),
            path("reg16.json"),
            "-o".into(),
            path("reg16_spectrum.json"),
        ],
        vec!["analyze".into(), path("reg16_spectrum.json")],
        vec![
            "solve".into(),
            "--sa".into(),
            "--restarts".into(),
            "200".into(),
            "--seed".into(),
            "1".into(),
            path("reg16.json"),
            "-o".into(),
            path("success.csv"),
        ],
        vec![
            "predict".into(),
            "--n".into(),
            "50".into(),
            "--units".into(),
            "256".into(),
        ],
    ];
    for args in steps {
        println!("$ qubo-landscape {}", args.join(" "));
        let code = run_cli(std::iter::once("qubo-landscape".to_string()).chain(args));
        assert_eq!(code, 0, "step failed");
    }
}
