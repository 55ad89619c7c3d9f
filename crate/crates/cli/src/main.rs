//! `opedit`: command-line front end for opacity-enforcing edit synthesis.
//!
//! Exit codes: 0 success, 1 property violated, 2 input error, 3 opacity
//! unenforceable or no constrained edit function.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opedit::automaton::sync_product;
use opedit::constraint::constraint_for_plant;
use opedit::io::{
    automaton_to_dot, parse_automaton, parse_document, serialize_automaton, structure_to_dot, tpo_to_dot, Document,
};
use opedit::oracle::{run_suite, SUITES};
use opedit::runtime::open_session;
use opedit::transform::{augment_missing_insertions, compose_components, transform_modular, transform_monolithic};
use opedit::{
    abstract_component, build_largest_tpo, check_current_state_opacity, desired_observer, determinize, prune_to_aes,
    synthesize_modular_edit_structure, Automaton, Error, ModularEditStructure, Policy, SynthesisOptions,
};

#[derive(Parser)]
#[command(name = "opedit", version, about = "Synthesize and run opacity-enforcing edit functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report current-state opacity of each system, and of their composition
    /// when several are given.
    VerifyOpacity {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Abstract a component and write its abstraction bundle.
    Abstract {
        file: PathBuf,
        /// Directory for the bundle files (default: next to the input).
        #[arg(short, long)]
        out_dir: Option<PathBuf>,
    },
    /// Build the largest three-player observer of a system.
    Tpo {
        file: PathBuf,
        /// Build from the abstraction bundle instead of plain observers.
        #[arg(long)]
        abstracted: bool,
        /// Prune to the all edit structure for this erasure bound.
        #[arg(long, value_name = "K")]
        prune: Option<usize>,
        /// Emit DOT instead of JSON.
        #[arg(long)]
        dot: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn the largest TPO of the composed systems into an automaton, or,
    /// with --modular, compose the per-component transforms.
    Transform {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        modular: bool,
        /// Add back insertions the modular product cannot express.
        #[arg(long, requires = "modular")]
        augment_remark2: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the consecutive-erasure constraint automaton for a plant.
    SpecK {
        #[arg(long, value_name = "K")]
        max_erasures: usize,
        #[arg(long, required = true, num_args = 1..)]
        plant: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Synthesize the modular edit structure.
    Synthesize {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_name = "K")]
        max_erasures: usize,
        #[arg(long)]
        augment_remark2: bool,
        /// Print the synthesis passes and sizes to stderr.
        #[arg(short, long)]
        verbose: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Step a saved structure interactively: `event <name>` or
    /// `event <name> ! <decision,decision,...>` per line.
    Step {
        structure: PathBuf,
        /// pass-through, first or random.
        #[arg(long, default_value = "pass-through")]
        policy: String,
        /// Seed for the random policy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run an oracle suite.
    Check {
        #[arg(long, default_value = "fixture")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the machine-readable report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an automaton or a saved structure as DOT.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Unenforceable { .. } | Error::EmptySupervisor => 3,
            _ => 2,
        };
        Failure { code, message: err.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Automaton, Failure> {
    parse_automaton(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<Automaton>, Failure> {
    paths.iter().map(|p| load(p)).collect()
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory values serialize");
    s.push('\n');
    s
}

fn composed(systems: &[Automaton]) -> Result<Automaton, Failure> {
    if systems.len() == 1 {
        return Ok(systems[0].clone());
    }
    let parts: Vec<&Automaton> = systems.iter().collect();
    let name = systems.iter().map(|a| a.name()).collect::<Vec<_>>().join("||");
    Ok(sync_product(&parts, &name)?.automaton)
}

fn verify_opacity(files: &[PathBuf]) -> Outcome {
    let mut systems = load_all(files)?;
    if systems.len() > 1 {
        systems.push(composed(&systems)?);
    }
    let mut code = 0;
    for a in &systems {
        let report = check_current_state_opacity(a);
        match report.witnesses.first() {
            None => println!("{}: opaque", a.name()),
            Some(w) => {
                code = 1;
                let word = if w.word.is_empty() { "ε".to_string() } else { w.word.join(" ") };
                println!("{}: not opaque, witness `{word}` reaches {{{}}}", a.name(), w.estimate.join(","));
            }
        }
    }
    Ok(code)
}

fn abstract_cmd(file: &Path, out_dir: Option<&Path>) -> Outcome {
    let g = load(file)?;
    let b = abstract_component(&g)?;
    let dir = out_dir.map(Path::to_path_buf).unwrap_or_else(|| file.parent().unwrap_or(Path::new(".")).to_path_buf());
    let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or("component");
    let parts = [
        ("abstracted", &b.g_abstracted),
        ("h_ob", &b.h_ob.automaton),
        ("h_b", &b.h_b.automaton),
        ("h_obd", &b.h_obd.automaton),
    ];
    for (suffix, a) in parts {
        let path = dir.join(format!("{stem}.{suffix}.json"));
        emit(Some(&path), &serialize_automaton(a))?;
        println!("{suffix}: {} states -> {}", a.num_states(), path.display());
    }
    if !b.is_enforceable() {
        eprintln!("{}", Error::Unenforceable { index: 0, name: g.name().to_string() });
        return Ok(3);
    }
    Ok(0)
}

fn tpo_cmd(file: &Path, abstracted: bool, prune: Option<usize>, dot: bool, output: Option<&Path>) -> Outcome {
    let g = load(file)?;
    let mut t = if abstracted {
        let b = abstract_component(&g)?;
        build_largest_tpo(&b.h_obd, &b.h_b)
    } else {
        let det = determinize(&g);
        build_largest_tpo(&desired_observer(&det), &det)
    };
    if let Some(k) = prune {
        t = prune_to_aes(&t, k);
    }
    let name = format!("T({})", g.name());
    emit(output, &if dot { tpo_to_dot(&t, &name) } else { to_json(&t) })?;
    Ok(if t.is_empty() { 3 } else { 0 })
}

fn transform_cmd(files: &[PathBuf], modular: bool, augment: bool, output: Option<&Path>) -> Outcome {
    let systems = load_all(files)?;
    let a = if modular {
        let bundles = systems.iter().map(abstract_component).collect::<Result<Vec<_>, _>>()?;
        let tpos: Vec<_> = bundles.iter().map(|b| build_largest_tpo(&b.h_obd, &b.h_b)).collect();
        let alphabets: Vec<_> = tpos.iter().map(|t| t.alphabet.iter().cloned().collect()).collect();
        let components = transform_modular(&tpos, &alphabets)?;
        let product =
            if augment { augment_missing_insertions(&components, &bundles)? } else { compose_components(&components)? };
        product.automaton
    } else {
        let g = composed(&systems)?;
        let det = determinize(&g);
        transform_monolithic(&build_largest_tpo(&desired_observer(&det), &det)).automaton
    };
    emit(output, &serialize_automaton(&a))?;
    Ok(0)
}

fn spec_k(k: usize, plant: &[PathBuf], output: Option<&Path>) -> Outcome {
    let parts = load_all(plant)?;
    let names = parts.iter().flat_map(|a| a.events().iter().map(|e| e.name.as_str()));
    let spec = constraint_for_plant(k, names)?;
    emit(output, &serialize_automaton(&spec))?;
    Ok(0)
}

fn synthesize(files: &[PathBuf], k: usize, augment: bool, verbose: bool, output: Option<&Path>) -> Outcome {
    let systems = load_all(files)?;
    let m = synthesize_modular_edit_structure(&systems, k, &SynthesisOptions { augment })?;
    if verbose {
        for pass in &m.log {
            eprintln!("{pass}");
        }
        eprintln!(
            "plant states: {}, supervisor states: {}, removed: {}",
            m.plant_states,
            m.supervisor.num_states(),
            m.removed_states()
        );
    }
    emit(output, &to_json(&m))?;
    if m.is_empty() {
        eprintln!("{}", Error::EmptySupervisor);
        return Ok(3);
    }
    Ok(0)
}

fn load_structure(path: &Path) -> Result<ModularEditStructure, Failure> {
    match parse_document(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))? {
        Document::Structure(m) => Ok(*m),
        Document::Automaton(_) => Err(Failure::input(format!("{}: expected a synthesized structure", path.display()))),
    }
}

fn step(structure: &Path, policy: &str, seed: u64) -> Outcome {
    let m = load_structure(structure)?;
    let policy = match policy.parse::<Policy>().map_err(Failure::input)? {
        Policy::SeededRandom(_) => Policy::SeededRandom(seed),
        p => p,
    };
    let mut session = open_session(&m, policy)?;
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    let mut code = 0;
    println!("state {}", session.state_name());
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| Failure::input(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "quit" || line == "exit" {
            break;
        }
        let Some(rest) = line.strip_prefix("event ") else {
            writeln!(out, "error expected `event <name>` or `event <name> ! <decisions>`").ok();
            code = 2;
            continue;
        };
        let (event, decisions) = match rest.split_once('!') {
            Some((e, d)) => (
                e.trim(),
                Some(d.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect::<Vec<_>>()),
            ),
            None => (rest.trim(), None),
        };
        match session.step(event, decisions.as_deref()) {
            Ok(word) => {
                let shown = if word.is_empty() { "ε".to_string() } else { word.concat() };
                writeln!(out, "emit {shown}").ok();
                writeln!(out, "state {}", session.state_name()).ok();
            }
            Err(err) => {
                writeln!(out, "error {err}").ok();
                code = 2;
            }
        }
    }
    Ok(code)
}

fn check(suite: &str, seed: u64, out: Option<&Path>) -> Outcome {
    if !SUITES.contains(&suite) {
        return Err(Failure::input(format!("unknown suite `{suite}` (expected one of {})", SUITES.join(", "))));
    }
    let report = run_suite(suite, seed)?;
    for outcome in &report.outcomes {
        println!("{outcome}");
    }
    if let Some(path) = out {
        emit(Some(path), &to_json(&report))?;
    }
    Ok(if report.ok() { 0 } else { 1 })
}

fn export_dot(file: &Path, output: Option<&Path>) -> Outcome {
    let text = match parse_document(&read(file)?).map_err(|e| Failure::input(format!("{}: {e}", file.display())))? {
        Document::Automaton(a) => automaton_to_dot(&a),
        Document::Structure(m) => structure_to_dot(&m),
    };
    emit(output, &text)?;
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::VerifyOpacity { files } => verify_opacity(&files),
        Command::Abstract { file, out_dir } => abstract_cmd(&file, out_dir.as_deref()),
        Command::Tpo { file, abstracted, prune, dot, output } => {
            tpo_cmd(&file, abstracted, prune, dot, output.as_deref())
        }
        Command::Transform { files, modular, augment_remark2, output } => {
            transform_cmd(&files, modular, augment_remark2, output.as_deref())
        }
        Command::SpecK { max_erasures, plant, output } => spec_k(max_erasures, &plant, output.as_deref()),
        Command::Synthesize { files, max_erasures, augment_remark2, verbose, output } => {
            synthesize(&files, max_erasures, augment_remark2, verbose, output.as_deref())
        }
        Command::Step { structure, policy, seed } => step(&structure, &policy, seed),
        Command::Check { suite, seed, out } => check(&suite, seed, out.as_deref()),
        Command::ExportDot { file, output } => export_dot(&file, output.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
