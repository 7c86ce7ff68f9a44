//! Command line front end: solve world views, inspect the ASP
//! compilation, generate benchmarks, run the differential checker,
//! and serve as a plain ASP solver for other processes.

mod output;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use elp_core::{
    check_program, eligible, extract_ep, full_mask, parse_asp, parse_elp, random_elp,
    random_elp_with_classical_negation, solve, translate, Algorithm, Engine, Guess, Program, Route,
    SearchConfig, SemanticsMode, SolverAdapterConfig, DEFAULT_BRUTE_FORCE_CAP,
};

#[derive(Parser)]
#[command(name = "elp", version, about = "Ground epistemic logic program solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the world views of a program
    Solve(SolveArgs),
    /// Print the ASP compilation of a program
    Translate(TranslateArgs),
    /// Print the scholarship benchmark over N students
    GenEligible(GenArgs),
    /// Cross-check all search configurations on a corpus
    Diff(DiffArgs),
    /// Enumerate the answer sets of a plain ASP program
    SolveAsp(SolveAspArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Naive,
    Level,
    Group,
    Parallel,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Algorithm {
        match a {
            AlgorithmArg::Naive => Algorithm::Naive,
            AlgorithmArg::Level => Algorithm::Level,
            AlgorithmArg::Group => Algorithm::Group,
            AlgorithmArg::Parallel => Algorithm::Parallel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Translate,
    Direct,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Translate => Route::Translate,
            RouteArg::Direct => Route::Direct,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Se16,
    Kwbgz15,
}

impl From<SemanticsArg> for SemanticsMode {
    fn from(s: SemanticsArg) -> SemanticsMode {
        match s {
            SemanticsArg::Se16 => SemanticsMode::Se16,
            SemanticsArg::Kwbgz15 => SemanticsMode::Kwbgz15,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Internal,
    External,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn parse_fix(s: &str) -> Result<(usize, bool), String> {
    let (item, value) = s.split_once('=').ok_or("expected ITEM=0 or ITEM=1")?;
    let index: usize = item
        .trim()
        .parse()
        .map_err(|_| format!("bad item index {item:?}"))?;
    let value = match value.trim() {
        "0" | "false" => false,
        "1" | "true" => true,
        other => return Err(format!("bad value {other:?}, expected 0 or 1")),
    };
    Ok((index, value))
}

#[derive(Args)]
struct SolveArgs {
    /// Input file; standard input when absent
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Level)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value_t = RouteArg::Translate)]
    route: RouteArg,
    /// Guesses compiled into one solver call
    #[arg(long, default_value_t = 1, value_name = "N")]
    guesses_per_call: usize,
    /// Worker threads per round
    #[arg(long, default_value_t = 1, value_name = "N")]
    jobs: usize,
    /// Stop after this many world views
    #[arg(long, value_name = "N")]
    max_world_views: Option<usize>,
    #[arg(long, value_enum, default_value_t = SemanticsArg::Se16)]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Internal)]
    engine: EngineArg,
    /// External solver command template; falls back to the
    /// ELP_EXTERNAL_SOLVER environment variable
    #[arg(long, value_name = "TEMPLATE")]
    external_cmd: Option<String>,
    /// Head atom cap of the internal engine
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP, value_name = "N")]
    cap: usize,
    /// Seconds before an external solver call is killed
    #[arg(long, default_value_t = 10.0, value_name = "SECS")]
    solver_timeout: f64,
    /// Exit status the external solver uses for satisfiable
    #[arg(long, default_value_t = 10, value_name = "CODE")]
    sat_exit: i32,
    /// Exit status the external solver uses for unsatisfiable
    #[arg(long, default_value_t = 20, value_name = "CODE")]
    unsat_exit: i32,
    /// Descend from this level instead of the top
    #[arg(long, value_name = "K")]
    level_start: Option<u32>,
    /// Fix one epistemic negation by position, repeatable
    #[arg(long = "fix", value_parser = parse_fix, value_name = "ITEM=0|1")]
    fix: Vec<(usize, bool)>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Include search counters in the output
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct TranslateArgs {
    /// Input file; standard input when absent
    file: Option<PathBuf>,
    /// Append the encoding of this guess, repeatable
    #[arg(long = "with-guess", value_name = "X")]
    with_guess: Vec<u64>,
}

#[derive(Args)]
struct GenArgs {
    /// Number of students
    #[arg(value_parser = clap::value_parser!(u64).range(1..=100_000))]
    n: u64,
}

#[derive(Args)]
struct DiffArgs {
    /// Directory of .elp files to check
    corpus: Option<PathBuf>,
    /// Check this many randomly generated programs
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    /// First seed for --random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Head atom cap of the internal engine
    #[arg(long, default_value_t = 128, value_name = "N")]
    cap: usize,
    /// Allow classically negated literals in generated programs
    #[arg(long)]
    classical_negation: bool,
    /// Also cross-check this external solver against the internal
    /// engine
    #[arg(long, value_name = "TEMPLATE")]
    external_cmd: Option<String>,
}

#[derive(Args)]
struct SolveAspArgs {
    /// Input file; standard input when absent
    file: Option<PathBuf>,
    /// Head atom cap
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP, value_name = "N")]
    cap: usize,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Translate(args) => cmd_translate(args),
        Cmd::GenEligible(args) => {
            print!("{}", eligible(args.n as usize));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Diff(args) => cmd_diff(args),
        Cmd::SolveAsp(args) => cmd_solve_asp(args),
    }
}

fn read_input(file: Option<&Path>) -> Result<String> {
    match file {
        Some(path) => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
        }
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .context("reading standard input")?;
            Ok(text)
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode> {
    let text = read_input(args.file.as_deref())?;
    let program = parse_elp(&text)?;
    let engine = match args.engine {
        EngineArg::Internal => Engine::Internal { cap: args.cap },
        EngineArg::External => {
            let command = args
                .external_cmd
                .or_else(|| std::env::var("ELP_EXTERNAL_SOLVER").ok())
                .context("--engine external needs --external-cmd or ELP_EXTERNAL_SOLVER")?;
            let mut adapter = SolverAdapterConfig::new(command);
            adapter.timeout = Duration::from_secs_f64(args.solver_timeout);
            adapter.sat_exit = args.sat_exit;
            adapter.unsat_exit = args.unsat_exit;
            Engine::External(adapter)
        }
    };
    let cfg = SearchConfig {
        algorithm: args.algorithm.into(),
        route: args.route.into(),
        guesses_per_call: args.guesses_per_call,
        workers: args.jobs,
        max_world_views: args.max_world_views,
        mode: args.semantics.into(),
        level_start: args.level_start,
        fixed_bits: args.fix,
    };
    let outcome = solve(&program, &engine, &cfg)?;
    match args.format {
        FormatArg::Text => print!("{}", output::text_document(&outcome, args.stats)),
        FormatArg::Json => {
            let digest = output::program_digest(&text);
            let doc = output::json_document(&outcome, cfg.mode, &digest, args.stats);
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(if outcome.world_views.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_translate(args: TranslateArgs) -> Result<ExitCode> {
    let text = read_input(args.file.as_deref())?;
    let program = parse_elp(&text)?;
    let ep = extract_ep(&program);
    if ep.is_empty() {
        bail!("the program has no subjective atoms, so there is nothing to compile");
    }
    let mask = full_mask(ep.len());
    let mut guesses = Vec::new();
    for x in args.with_guess {
        if x > mask {
            bail!(
                "guess {x} is out of range; the program has {} epistemic negations",
                ep.len()
            );
        }
        let g = Guess::new(x);
        if guesses.contains(&g) {
            bail!("guess {x} was given twice");
        }
        guesses.push(g);
    }
    print!("{}", translate(&program, &ep, &guesses).program);
    Ok(ExitCode::SUCCESS)
}

fn cmd_diff(args: DiffArgs) -> Result<ExitCode> {
    let mut entries: Vec<(String, Program)> = Vec::new();
    if let Some(dir) = &args.corpus {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .with_context(|| format!("reading {}", dir.display()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "elp"))
            .collect();
        paths.sort();
        for path in paths {
            let text = fs::read_to_string(&path)?;
            let program =
                parse_elp(&text).with_context(|| format!("parsing {}", path.display()))?;
            let label = path
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            entries.push((label, program));
        }
    }
    let count = args.random.unwrap_or(usize::from(entries.is_empty()) * 50);
    let generate = if args.classical_negation {
        random_elp_with_classical_negation
    } else {
        random_elp
    };
    for i in 0..count {
        let seed = args.seed + i as u64;
        entries.push((format!("seed-{seed}"), generate(seed)));
    }
    if entries.is_empty() {
        bail!("nothing to check: the corpus directory holds no .elp files");
    }

    let engine = Engine::Internal { cap: args.cap };
    let mut failures = 0usize;
    for (label, program) in &entries {
        let mut problems: Vec<String> = check_program(program, &engine)?
            .iter()
            .map(|d| d.to_string())
            .collect();
        if let Some(cmd) = &args.external_cmd {
            let external = Engine::External(SolverAdapterConfig::new(cmd.clone()));
            for mode in [SemanticsMode::Se16, SemanticsMode::Kwbgz15] {
                let cfg = SearchConfig {
                    mode,
                    ..SearchConfig::default()
                };
                let ours = solve(program, &engine, &cfg)?;
                let theirs = solve(program, &external, &cfg)?;
                if ours.world_views != theirs.world_views {
                    problems.push(format!(
                        "external solver disagreement under {mode}: {} vs {} world views",
                        ours.world_views.len(),
                        theirs.world_views.len()
                    ));
                }
            }
        }
        if !problems.is_empty() {
            failures += 1;
            let bundle = PathBuf::from(format!("diff-failure-{label}.elp"));
            fs::write(&bundle, program.to_string())
                .with_context(|| format!("writing {}", bundle.display()))?;
            eprintln!(
                "{label}: {} problem(s), program saved to {}",
                problems.len(),
                bundle.display()
            );
            for problem in &problems {
                eprintln!("  {problem}");
            }
        }
    }
    println!(
        "checked {} program(s), {failures} failure(s)",
        entries.len()
    );
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_solve_asp(args: SolveAspArgs) -> Result<ExitCode> {
    let text = read_input(args.file.as_deref())?;
    let program = parse_asp(&text)?;
    let result = Engine::Internal { cap: args.cap }.answer_sets(&program)?;
    for (i, s) in result.sets.iter().enumerate() {
        println!("Answer: {}", i + 1);
        let line: Vec<String> = s.iter().map(|l| l.to_string()).collect();
        println!("{}", line.join(" "));
    }
    if result.sets.is_empty() {
        println!("UNSATISFIABLE");
        Ok(ExitCode::from(20))
    } else {
        println!("SATISFIABLE");
        Ok(ExitCode::from(10))
    }
}
