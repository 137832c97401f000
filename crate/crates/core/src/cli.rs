//! Command-line surface. [`run_cli`] returns the process exit code:
//! 0 on success, 1 on usage or input errors, 2 on solver or generation failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::anneal::{estimate_success, exact_ground_energy, AnnealParams, ProblemClass};
use crate::enumerate::{predict_elapsed, ExactSolver, SolveOptions, DEFAULT_K, DEFAULT_MAX_N};
use crate::error::{Error, Result};
use crate::fit::{fit_scaling, Crossover};
use crate::format::{
    parse_qubo_text, read_model_json, read_probability_points, read_spectrum_json,
    read_success_csv, write_histogram_csv, write_model_json, write_qubo_text, write_spectrum_json,
    write_success_csv, ExperimentManifest, ModelMeta,
};
use crate::generate::{gen_ran, gen_reg, random_gauge_family};
use crate::landscape::{
    hamming_histogram, level_spacings, mean_success_by_n, spectrum_spread, SpacingMode,
};
use crate::model::{ising_to_qubo, qubo_to_ising, IsingModel, QuboProblem};
use crate::rng::GeneratorSeed;
use crate::twosat::{twosat_to_ising, TwoSatGenerator};

/// Environment variable that raises the enumeration guard.
pub const MAX_N_ENV: &str = "QUBO_MAX_N";

#[derive(Parser, Debug)]
#[command(
    name = "qubo-landscape",
    version,
    about = "Generate, solve and analyze REG, RAN and 2SAT QUBO instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate problem instances.
    Gen(GenArgs),
    /// Convert between the .qubo text format and Ising JSON.
    Convert(ConvertArgs),
    /// Solve by exact enumeration or estimate annealing success.
    Solve(SolveArgs),
    /// Hamming-distance and level-spacing histograms of a spectrum.
    Analyze(AnalyzeArgs),
    /// Exponential scaling fits of success probability.
    Fit(FitArgs),
    /// Predict elapsed time of a full enumeration from a reference run.
    Predict(PredictArgs),
    /// Rerun the command recorded in a manifest.
    Replay { manifest: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Reg,
    Ran,
    #[value(name = "2sat")]
    TwoSat,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long)]
    n: usize,
    /// Clause count for 2SAT (default n + 1).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    min_degeneracy: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_attempts: u64,
    /// Also write K gauge-transformed copies of every instance.
    #[arg(long, value_name = "K")]
    gauge_family: Option<usize>,
    /// Output path; `.qubo` writes the text format, anything else JSON.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConvertTarget {
    Ising,
    Qubo,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    to: ConvertTarget,
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("method").required(true).args(["exact", "sa"])))]
struct SolveArgs {
    input: PathBuf,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    sa: bool,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    #[arg(long)]
    workers: Option<usize>,
    /// Enumerate beyond the size guard.
    #[arg(long)]
    force: bool,
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    #[arg(long, default_value_t = 0.1)]
    beta0: f64,
    #[arg(long, default_value_t = 10.0)]
    beta1: f64,
    #[arg(long, default_value_t = 1000)]
    restarts: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Ground energy (offset included); computed exactly when omitted.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<f64>,
    #[arg(long)]
    class: Option<String>,
    #[arg(long)]
    instance_id: Option<String>,
    /// Append the success record to an existing CSV instead of overwriting it.
    #[arg(long)]
    append: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    spectrum: PathBuf,
    #[arg(long)]
    hamming: bool,
    #[arg(long)]
    spacing: bool,
    #[arg(long, default_value = "distinct")]
    mode: String,
    #[arg(long)]
    spread: bool,
    /// Directory for the CSV outputs (default: next to the spectrum).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Success records (`class,n,instance_id,samples,successes`) or `n,probability` rows.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "none")]
    crossover: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    units: usize,
    #[arg(long, default_value_t = 44)]
    ref_n: usize,
    #[arg(long, default_value_t = 4)]
    ref_units: usize,
    #[arg(long, default_value_t = 1562.0)]
    ref_time: f64,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let args: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match dispatch(cli.command, args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Param(_) | Error::Parse { .. } | Error::Schema { .. } | Error::Io(_) => 1,
        _ => 2,
    }
}

fn dispatch(command: Command, args: Vec<String>) -> Result<()> {
    match command {
        Command::Gen(a) => cmd_gen(a, args),
        Command::Convert(a) => cmd_convert(a),
        Command::Solve(a) => cmd_solve(a, args),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Replay { manifest } => {
            let m = ExperimentManifest::read(&manifest)?;
            let argv = std::iter::once("qubo-landscape".to_string()).chain(m.args);
            match run_cli(argv) {
                0 => Ok(()),
                code => Err(Error::Param(format!("replayed command exited with {code}"))),
            }
        }
    }
}

fn auto_seed() -> u64 {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos() as u64);
    crate::rng::mix64(nanos ^ u64::from(std::process::id()))
}

/// Arguments with `--manifest <path>` removed and `--seed` appended when generated.
fn resolved_args(args: &[String], generated_seed: Option<u64>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len() + 2);
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--manifest" {
            skip = true;
            continue;
        }
        if a.starts_with("--manifest=") {
            continue;
        }
        out.push(a.clone());
    }
    if let Some(seed) = generated_seed {
        out.push("--seed".into());
        out.push(seed.to_string());
    }
    out
}

fn manifest_path(
    explicit: Option<&PathBuf>,
    output: Option<&Path>,
    needed: bool,
) -> Option<PathBuf> {
    explicit.cloned().or_else(|| {
        let output = output?;
        needed.then(|| {
            let mut name = output.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        })
    })
}

fn indexed_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    base.with_file_name(name)
}

fn is_qubo_path(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "qubo")
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, text)?,
        _ => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_model_file(path: &Path, m: &IsingModel, meta: &ModelMeta) -> Result<()> {
    if is_qubo_path(path) {
        if m.offset != 0.0 {
            log::warn!(
                "{}: the .qubo format does not carry the model offset",
                path.display()
            );
        }
        write_text(Some(path), &write_qubo_text(&ising_to_qubo(m)))
    } else {
        write_text(Some(path), &write_model_json(m, meta))
    }
}

/// A model read from either file format, plus its recorded metadata.
struct LoadedModel {
    model: IsingModel,
    meta: ModelMeta,
    /// The QUBO as given, when the input was a `.qubo` file.
    qubo: Option<QuboProblem>,
}

fn load_model(path: &Path) -> Result<LoadedModel> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if is_qubo_path(path) {
        let p = parse_qubo_text(&text)?;
        Ok(LoadedModel {
            model: qubo_to_ising(&p),
            meta: ModelMeta::default(),
            qubo: Some(p),
        })
    } else {
        let doc = read_model_json(&text)?;
        Ok(LoadedModel {
            model: doc.model,
            meta: doc.meta,
            qubo: None,
        })
    }
}

fn cmd_gen(a: GenArgs, args: Vec<String>) -> Result<()> {
    if a.count == 0 {
        return Err(Error::Param("--count must be >= 1".into()));
    }
    let randomized = a.class != ClassArg::Reg || a.gauge_family.is_some();
    let generated_seed = (randomized && a.seed.is_none()).then(auto_seed);
    let seed = a.seed.or(generated_seed).unwrap_or(0);

    let class_name = match a.class {
        ClassArg::Reg => "REG",
        ClassArg::Ran => "RAN",
        ClassArg::TwoSat => "TWOSAT",
    };
    let mut outputs = Vec::new();
    for idx in 0..a.count {
        let instance_seed = GeneratorSeed::new(seed, idx as u64);
        let (model, params) = match a.class {
            ClassArg::Reg => (gen_reg(a.n)?, json!({})),
            ClassArg::Ran => (gen_ran(a.n, instance_seed)?, json!({"stream_id": idx})),
            ClassArg::TwoSat => {
                let m = a.m.unwrap_or(a.n + 1);
                let generator = TwoSatGenerator {
                    min_degeneracy: a.min_degeneracy,
                    max_attempts: a.max_attempts,
                    m,
                    ..TwoSatGenerator::new(a.n)
                };
                let t = generator.generate(instance_seed)?;
                let clauses: Vec<Value> = t
                    .clauses()
                    .iter()
                    .map(|(x, y)| {
                        let lit = |l: &crate::twosat::Literal| {
                            let v = l.var as i64 + 1;
                            if l.negated {
                                -v
                            } else {
                                v
                            }
                        };
                        json!([lit(x), lit(y)])
                    })
                    .collect();
                (
                    twosat_to_ising(&t),
                    json!({"stream_id": idx, "m": m, "min_degeneracy": a.min_degeneracy, "clauses": clauses}),
                )
            }
        };
        let meta = ModelMeta {
            class: Some(class_name.into()),
            seed: randomized.then_some(seed),
            params,
        };
        let path = if a.count == 1 {
            a.output.clone()
        } else {
            indexed_path(&a.output, &idx.to_string())
        };
        write_model_file(&path, &model, &meta)?;
        outputs.push(path.display().to_string());

        if let Some(k) = a.gauge_family {
            let family = random_gauge_family(&model, k, instance_seed.derive(u64::MAX))?;
            for (member, (g, flips)) in family.into_iter().enumerate() {
                let mut params = meta.params.clone();
                params["gauge_member"] = json!(member);
                params["flips"] = json!(flips.iter().map(|f| f + 1).collect::<Vec<_>>());
                let gmeta = ModelMeta {
                    params,
                    ..meta.clone()
                };
                let gpath = indexed_path(&path, &format!("g{member}"));
                write_model_file(&gpath, &g, &gmeta)?;
                outputs.push(gpath.display().to_string());
            }
        }
    }

    if let Some(path) = manifest_path(
        a.manifest.as_ref(),
        Some(&a.output),
        generated_seed.is_some(),
    ) {
        let mut manifest = ExperimentManifest::new(resolved_args(&args, generated_seed));
        manifest.class = Some(class_name.into());
        manifest.n = Some(a.n);
        manifest.instances = Some(a.count);
        manifest.seed = randomized.then_some(seed);
        manifest.params = json!({
            "m": a.m,
            "min_degeneracy": a.min_degeneracy,
            "max_attempts": a.max_attempts,
            "gauge_family": a.gauge_family,
        });
        manifest.outputs = outputs;
        manifest.write(&path)?;
    }
    Ok(())
}

fn cmd_convert(a: ConvertArgs) -> Result<()> {
    let loaded = load_model(&a.input)?;
    let text = match a.to {
        ConvertTarget::Qubo => {
            let p = loaded.qubo.unwrap_or_else(|| ising_to_qubo(&loaded.model));
            write_qubo_text(&p)
        }
        ConvertTarget::Ising => write_model_json(&loaded.model, &loaded.meta),
    };
    write_text(a.output.as_deref(), &text)
}

fn guard_limit() -> Result<usize> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::Param(format!("{MAX_N_ENV}={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn cmd_solve(a: SolveArgs, args: Vec<String>) -> Result<()> {
    let loaded = load_model(&a.input)?;
    let source = a.input.display().to_string();
    if a.exact {
        let p = loaded
            .qubo
            .clone()
            .unwrap_or_else(|| ising_to_qubo(&loaded.model));
        let options = SolveOptions {
            k: a.k,
            workers: a.workers.unwrap_or(SolveOptions::default().workers),
            max_n: guard_limit()?,
            force: a.force,
            ..SolveOptions::default()
        };
        let spectrum = ExactSolver::new(options).solve(&p)?;
        // Energies are QUBO costs; adding the shift gives ising_energy + offset.
        let shift = loaded.model.offset - p.ising_constant();
        let meta = json!({
            "source": source,
            "class": loaded.meta.class,
            "energy_frame": "qubo_cost",
            "model_energy_shift": if loaded.qubo.is_some() { 0.0 } else { shift },
        });
        return write_text(a.output.as_deref(), &write_spectrum_json(&spectrum, meta));
    }

    let generated_seed = a.seed.is_none().then(auto_seed);
    let seed = a.seed.or(generated_seed).expect("seed resolved");
    let params = AnnealParams {
        sweeps: a.sweeps,
        beta_start: a.beta0,
        beta_end: a.beta1,
        restarts: a.restarts,
        ..AnnealParams::default()
    };
    let target = match a.target {
        Some(t) => t,
        None => exact_ground_energy(&loaded.model)?.1,
    };
    let class = match a.class.as_deref().or(loaded.meta.class.as_deref()) {
        Some(c) => c.parse()?,
        None => ProblemClass::Other,
    };
    let instance_id = a.instance_id.clone().unwrap_or_else(|| {
        a.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    let record = estimate_success(&loaded.model, target, &params, GeneratorSeed::new(seed, 0))?
        .labelled(class, instance_id);

    let mut buf = Vec::new();
    write_success_csv(&mut buf, std::slice::from_ref(&record))?;
    let mut text = String::from_utf8(buf).expect("csv is utf-8");
    match a.output.as_deref() {
        Some(path) if a.append && path.exists() => {
            // Skip the header when appending.
            text = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
            let mut f = std::fs::OpenOptions::new().append(true).open(path)?;
            f.write_all(text.as_bytes())?;
        }
        other => write_text(other, &text)?,
    }

    if let Some(path) = manifest_path(
        a.manifest.as_ref(),
        a.output.as_deref(),
        generated_seed.is_some(),
    ) {
        let mut manifest = ExperimentManifest::new(resolved_args(&args, generated_seed));
        manifest.n = Some(loaded.model.n());
        manifest.instances = Some(1);
        manifest.seed = Some(seed);
        manifest.class = Some(class.to_string());
        manifest.params = serde_json::to_value(&params).expect("params serialize");
        manifest.outputs = a.output.iter().map(|p| p.display().to_string()).collect();
        manifest.write(&path)?;
    }
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.spectrum)
        .map_err(|e| Error::Io(format!("{}: {e}", a.spectrum.display())))?;
    let (spectrum, _) = read_spectrum_json(&text)?;
    let mode: SpacingMode = a.mode.parse()?;
    let all = !(a.hamming || a.spacing || a.spread);
    let dir = a
        .out_dir
        .clone()
        .or_else(|| a.spectrum.parent().map(Path::to_path_buf))
        .unwrap_or_default();
    let stem = a
        .spectrum
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "spectrum".into());
    let source = a.spectrum.display().to_string();

    if a.hamming || all {
        let h = hamming_histogram(&spectrum)?.with_source(source.clone());
        let path = dir.join(format!("{stem}.hamming.csv"));
        write_histogram_csv(std::fs::File::create(&path)?, &h)?;
        println!("hamming: {} ({} states)", path.display(), h.total());
    }
    if a.spacing || all {
        let h = level_spacings(&spectrum, mode)?.with_source(source);
        let path = dir.join(format!("{stem}.spacing.csv"));
        write_histogram_csv(std::fs::File::create(&path)?, &h)?;
        println!("spacing: {} ({} values)", path.display(), h.entries.len());
    }
    if a.spread || all {
        println!("spread: {}", spectrum_spread(&spectrum)?);
    }
    Ok(())
}

fn cmd_fit(a: FitArgs) -> Result<()> {
    let crossover: Crossover = a.crossover.parse()?;
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Error::Io(format!("{}: {e}", a.input.display())))?;
    let header = text.lines().next().unwrap_or_default();
    let mut results = Vec::new();
    if header.split(',').any(|c| c.trim() == "successes") {
        let records = read_success_csv(text.as_bytes())?;
        let summaries = mean_success_by_n(&records)?;
        let mut classes: Vec<ProblemClass> = summaries.iter().map(|s| s.class_label).collect();
        classes.dedup();
        for class in classes {
            let points: Vec<(f64, f64)> = summaries
                .iter()
                .filter(|s| s.class_label == class)
                .map(|s| (s.n as f64, s.mean))
                .collect();
            let fit = fit_scaling(&points, crossover).map_err(|e| Error::Fit {
                reason: format!("{class}: {e}"),
                usable: Vec::new(),
            })?;
            results.push(json!({"class": class, "fit": fit}));
        }
    } else {
        let points = read_probability_points(text.as_bytes())?;
        results.push(json!({"class": null, "fit": fit_scaling(&points, crossover)?}));
    }
    let out = serde_json::to_string_pretty(&results).expect("fits serialize") + "\n";
    write_text(a.output.as_deref(), &out)
}

fn cmd_predict(a: PredictArgs) -> Result<()> {
    let (seconds, s_ref) = predict_elapsed(a.n, a.units, a.ref_time, a.ref_n, a.ref_units)?;
    println!(
        "n={} units={} predicted_seconds={seconds:.1} s_ref={s_ref:.4}",
        a.n, a.units
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolved_args_drop_manifest_and_add_seed() {
        let args: Vec<String> = ["gen", "--n", "5", "--manifest", "m.json", "-o", "x.json"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            resolved_args(&args, Some(9)),
            vec!["gen", "--n", "5", "-o", "x.json", "--seed", "9"]
        );
    }

    #[test]
    fn indexed_paths() {
        assert_eq!(
            indexed_path(Path::new("d/reg.json"), "3"),
            PathBuf::from("d/reg_3.json")
        );
        assert_eq!(
            indexed_path(Path::new("reg"), "g0"),
            PathBuf::from("reg_g0")
        );
    }

    #[test]
    fn usage_errors_exit_with_one() {
        assert_eq!(run_cli(["qubo-landscape", "frobnicate"]), 1);
        assert_eq!(run_cli(["qubo-landscape", "predict", "--n", "50"]), 1);
        assert_eq!(run_cli(["qubo-landscape", "solve", "x.json"]), 1);
        assert_eq!(
            run_cli(["qubo-landscape", "predict", "--n", "50", "--units", "256"]),
            0
        );
    }
}
