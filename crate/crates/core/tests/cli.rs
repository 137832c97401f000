use std::fs;
use std::path::{Path, PathBuf};

use qubo_landscape::cli::run_cli;
use qubo_landscape::format::{read_model_json, read_spectrum_json, ExperimentManifest};
use qubo_landscape::generate::reg_conjectured_solution;

fn run(args: &[&str]) -> i32 {
    run_cli(std::iter::once("qubo-landscape").chain(args.iter().copied()))
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reg_pipeline_gen_solve_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "reg20.json");
    let spectrum = path(dir.path(), "reg20_spectrum.json");
    assert_eq!(
        run(&["gen", "--class", "reg", "--n", "20", "-o", s(&model)]),
        0
    );
    assert_eq!(
        run(&[
            "solve",
            "--exact",
            "--k",
            "4000",
            s(&model),
            "-o",
            s(&spectrum)
        ]),
        0
    );
    let (sp, meta) = read_spectrum_json(&fs::read_to_string(&spectrum).unwrap()).unwrap();
    assert_eq!(sp.states.len(), 4000);
    assert_eq!(
        sp.min_config().unwrap(),
        reg_conjectured_solution(20).unwrap().configuration
    );
    assert_eq!(meta["class"], "REG");

    assert_eq!(run(&["analyze", "--hamming", "--spacing", s(&spectrum)]), 0);
    let total = |name: &str| -> u64 {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("value,count"));
        lines
            .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
            .sum()
    };
    assert_eq!(total("reg20_spectrum.hamming.csv"), 3999);
    let spacing = fs::read_to_string(dir.path().join("reg20_spectrum.spacing.csv")).unwrap();
    assert_eq!(spacing.lines().count(), 1 + 5);
}

#[test]
fn qubo_and_json_convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "ran.json");
    let text = path(dir.path(), "ran.qubo");
    let back = path(dir.path(), "back.json");
    assert_eq!(
        run(&[
            "gen",
            "--class",
            "ran",
            "--n",
            "8",
            "--seed",
            "5",
            "-o",
            s(&model)
        ]),
        0
    );
    assert_eq!(
        run(&["convert", "--to", "qubo", s(&model), "-o", s(&text)]),
        0
    );
    assert!(fs::read_to_string(&text)
        .unwrap()
        .starts_with("p qubo 0 8 "));
    assert_eq!(
        run(&["convert", "--to", "ising", s(&text), "-o", s(&back)]),
        0
    );

    let a = read_model_json(&fs::read_to_string(&model).unwrap())
        .unwrap()
        .model;
    let b = read_model_json(&fs::read_to_string(&back).unwrap())
        .unwrap()
        .model;
    for (&key, &v) in a.couplings() {
        assert!((v - b.coupling(key.0, key.1)).abs() < 1e-12);
    }
    for i in 0..8 {
        assert!((a.field(i) - b.field(i)).abs() < 1e-12);
    }
    // The .qubo form fixes the constant so cost = energy + offset.
    assert!(b.offset.abs() > 0.0);
}

#[test]
fn exact_solve_of_qubo_file_matches_json() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "m.json");
    let text = path(dir.path(), "m.qubo");
    let a = path(dir.path(), "a.json");
    let b = path(dir.path(), "b.json");
    assert_eq!(
        run(&[
            "gen",
            "--class",
            "ran",
            "--n",
            "10",
            "--seed",
            "1",
            "-o",
            s(&model)
        ]),
        0
    );
    assert_eq!(
        run(&["convert", "--to", "qubo", s(&model), "-o", s(&text)]),
        0
    );
    assert_eq!(
        run(&["solve", "--exact", "--k", "30", s(&model), "-o", s(&a)]),
        0
    );
    assert_eq!(
        run(&[
            "solve",
            "--exact",
            "--k",
            "30",
            "--workers",
            "3",
            s(&text),
            "-o",
            s(&b)
        ]),
        0
    );
    let sa = read_spectrum_json(&fs::read_to_string(&a).unwrap())
        .unwrap()
        .0;
    let sb = read_spectrum_json(&fs::read_to_string(&b).unwrap())
        .unwrap()
        .0;
    assert_eq!(sa.states, sb.states);
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "sat.json");
    let manifest = path(dir.path(), "sat.manifest.json");
    assert_eq!(
        run(&[
            "gen",
            "--class",
            "2sat",
            "--n",
            "10",
            "--count",
            "3",
            "--min-degeneracy",
            "20",
            "--gauge-family",
            "2",
            "-o",
            s(&out),
            "--manifest",
            s(&manifest),
        ]),
        0
    );
    let m = ExperimentManifest::read(&manifest).unwrap();
    assert!(m.seed.is_some(), "auto-generated seed must be recorded");
    assert_eq!(m.outputs.len(), 3 * 3);
    let before: Vec<Vec<u8>> = m.outputs.iter().map(|p| fs::read(p).unwrap()).collect();
    for p in &m.outputs {
        fs::remove_file(p).unwrap();
    }
    assert_eq!(run(&["replay", s(&manifest)]), 0);
    let after: Vec<Vec<u8>> = m.outputs.iter().map(|p| fs::read(p).unwrap()).collect();
    assert_eq!(before, after);
}

#[test]
fn sa_solve_writes_success_records_and_fit_reads_them() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "reg.json");
    let csv = path(dir.path(), "success.csv");
    assert_eq!(
        run(&["gen", "--class", "reg", "--n", "8", "-o", s(&model)]),
        0
    );
    let sa = |seed: &str| {
        run(&[
            "solve",
            "--sa",
            s(&model),
            "--sweeps",
            "100",
            "--restarts",
            "40",
            "--seed",
            seed,
            "--append",
            "-o",
            s(&csv),
        ])
    };
    assert_eq!(sa("1"), 0);
    let first = fs::read_to_string(&csv).unwrap();
    assert_eq!(sa("1"), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "class,n,instance_id,samples,successes");
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], lines[2], "same seed, same record");
    assert!(first.contains("REG,8,reg,40,"));
}

#[test]
fn fit_recovers_two_regime_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "success.csv");
    let fit = path(dir.path(), "fit.json");
    let mut text = String::from("class,n,instance_id,samples,successes\n");
    let samples: u64 = 1 << 40;
    for n in (20..=150).step_by(10) {
        let ln_p = if n < 80 {
            -0.039 * n as f64
        } else {
            -0.039 * 80.0 - 0.090 * (n - 80) as f64
        };
        let successes = (ln_p.exp() * samples as f64).round() as u64;
        text.push_str(&format!("REG,{n},i0,{samples},{successes}\n"));
    }
    fs::write(&csv, text).unwrap();
    assert_eq!(
        run(&[
            "fit",
            "--input",
            s(&csv),
            "--crossover",
            "auto",
            "-o",
            s(&fit)
        ]),
        0
    );
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&fit).unwrap()).unwrap();
    let segs = &v[0]["fit"]["segments"];
    let b1 = segs[0]["exponent"].as_f64().unwrap();
    let b2 = segs[1]["exponent"].as_f64().unwrap();
    assert_eq!(v[0]["class"], "REG");
    assert!((b1 + 0.039).abs() < 0.05 * 0.039, "{b1}");
    assert!((b2 + 0.090).abs() < 0.05 * 0.090, "{b2}");
    assert!((v[0]["fit"]["crossover_n"].as_f64().unwrap() - 80.0).abs() <= 10.0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(dir.path(), "m.json");
    assert_eq!(
        run(&[
            "gen",
            "--class",
            "reg",
            "--n",
            "4",
            "--bogus",
            "-o",
            s(&model)
        ]),
        1
    );
    assert_eq!(
        run(&["gen", "--class", "cubic", "--n", "4", "-o", s(&model)]),
        1
    );
    assert_eq!(
        run(&["solve", "--exact", s(&path(dir.path(), "missing.json"))]),
        1
    );
    assert_eq!(
        run(&["fit", "--input", s(&model), "--crossover", "sideways"]),
        1
    );
    assert_eq!(
        run(&["gen", "--class", "reg", "--n", "1", "-o", s(&model)]),
        2
    );
    assert_eq!(
        run(&[
            "gen",
            "--class",
            "2sat",
            "--n",
            "6",
            "--seed",
            "1",
            "--min-degeneracy",
            "1000",
            "--max-attempts",
            "10",
            "-o",
            s(&model),
        ]),
        2
    );
    assert_eq!(
        run(&["gen", "--class", "reg", "--n", "45", "-o", s(&model)]),
        0
    );
    assert_eq!(run(&["solve", "--exact", s(&model)]), 2);
    assert_eq!(run(&["--help"]), 0);
}
