//! `delp`: parse a defeasible logic program, answer queries through the
//! dialectical warrant procedure, and export the trees behind the answers.
//!
//! Exit codes: 0 success (any answer), 1 usage error, 2 parse or validation
//! error, 3 resource ceiling hit.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use delp_core::comparison::{Criterion, CriterionConfig};
use delp_core::dialectics::{
    explore, AnswerValue, DialecticalTree, DialecticsConfig, DialecticsError, Exploration,
    Strategy, TreeNode,
};
use delp_core::model::{ground_program, in_language, validate, GroundProgram, Literal, Mode};
use delp_core::oracle::{differential_run, DifferentialOutcome, GeneratorParams, OracleConfig};
use delp_core::parser::{parse_program_named, parse_query};

use delp_cli::export;

#[derive(Parser)]
#[command(name = "delp", version, about = "A defeasible logic programming interpreter")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Answer one ground query against a program.
    Query {
        file: PathBuf,
        /// A ground literal, e.g. `flies(tina)` or `~flies(tina)`.
        query: String,
        #[command(flatten)]
        opts: EngineOpts,
        /// Export the dialectical tree(s) behind the answer.
        #[arg(long, value_enum, default_value_t = TreeFormat::None)]
        tree: TreeFormat,
        /// Write the export here instead of stdout.
        #[arg(long)]
        tree_out: Option<PathBuf>,
        /// Print each argumentation line as it is extended or rejected.
        #[arg(long)]
        trace: bool,
    },
    /// Interactive query loop.
    Repl {
        file: PathBuf,
        #[command(flatten)]
        opts: EngineOpts,
    },
    /// Parse and validate only.
    Check {
        file: PathBuf,
        #[arg(long = "mode", value_enum)]
        modes: Vec<ModeArg>,
    },
    /// Print every warranted literal of the program.
    Warranted {
        file: PathBuf,
        #[command(flatten)]
        opts: EngineOpts,
    },
    /// Differential run of the engine against the brute-force oracle.
    Oracle {
        /// Program to compare on; omit when fuzzing.
        file: Option<PathBuf>,
        /// Also run this many random programs.
        #[arg(long)]
        fuzz: Option<u64>,
        /// Seed for the random-program generator.
        #[arg(long, default_value_t = 0xde1f)]
        seed: u64,
        /// Write machine-readable disagreement records here.
        #[arg(long)]
        jsonl_out: Option<PathBuf>,
        #[command(flatten)]
        opts: EngineOpts,
    },
}

#[derive(Args)]
struct EngineOpts {
    /// Argument comparison criterion.
    #[arg(long, value_enum, default_value_t = CriterionArg::Specificity)]
    criterion: CriterionArg,
    /// Language extensions the program may use (repeatable).
    #[arg(long = "mode", value_enum)]
    modes: Vec<ModeArg>,
    /// Dialectical-tree expansion ceiling.
    #[arg(long, default_value_t = 10_000)]
    max_nodes: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Specificity,
    Priorities,
    Combined,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Criterion {
        match c {
            CriterionArg::Specificity => Criterion::Specificity,
            CriterionArg::Priorities => Criterion::Priorities,
            CriterionArg::Combined => Criterion::Combined,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Core,
    DefaultNegation,
    Presumptions,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeFormat {
    None,
    Dot,
    Json,
}

fn mode_of(modes: &[ModeArg]) -> Mode {
    let mut m = Mode::core();
    for arg in modes {
        match arg {
            ModeArg::Core => {}
            ModeArg::DefaultNegation => m.default_negation = true,
            ModeArg::Presumptions => m.presumptions = true,
        }
    }
    m
}

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<DialecticsError> for Failure {
    fn from(e: DialecticsError) -> Failure {
        let code = match e {
            DialecticsError::ResourceLimit(_) => EXIT_RESOURCE,
            DialecticsError::NoPriorities => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn load(file: &Path, mode: Mode) -> Result<GroundProgram, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
    let name = file.display().to_string();
    let program = parse_program_named(&text, mode, Some(&name)).map_err(|diags| {
        let msg: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        Failure::input(msg.join("\n"))
    })?;
    validate(&program).map_err(|report| Failure::input(format!("{}: {report}", file.display())))?;
    ground_program(&program).map_err(|e| Failure::input(e.to_string()))
}

fn dialectics_config(criterion: Criterion, max_nodes: usize, g: &GroundProgram) -> DialecticsConfig {
    DialecticsConfig {
        criterion: CriterionConfig { criterion, presumption_penalty: false }.for_program(g),
        max_nodes,
    }
}

/// The four-way answer plus everything examined along the way, for traces
/// and exports.
struct QueryRun {
    value: AnswerValue,
    explorations: Vec<Exploration>,
}

fn run_query_on(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    query: &Literal,
) -> Result<QueryRun, Failure> {
    if !in_language(g, query) {
        return Ok(QueryRun { value: AnswerValue::Unknown, explorations: Vec::new() });
    }
    let for_query = explore(g, cfg, query, Strategy::Pruned)?;
    if for_query.warrant.is_some() {
        return Ok(QueryRun { value: AnswerValue::Yes, explorations: vec![for_query] });
    }
    let for_complement = explore(g, cfg, &query.complemented(), Strategy::Pruned)?;
    let value =
        if for_complement.warrant.is_some() { AnswerValue::No } else { AnswerValue::Undecided };
    Ok(QueryRun { value, explorations: vec![for_query, for_complement] })
}

/// For YES/NO export the witness tree; for UNDECIDED every examined
/// (defeated) root's tree.
fn trees_to_export(run: &QueryRun) -> Vec<&DialecticalTree> {
    match run.value {
        AnswerValue::Unknown => Vec::new(),
        AnswerValue::Yes | AnswerValue::No => {
            let e = run.explorations.last().expect("witness exploration");
            vec![&e.trees[e.warrant.expect("witness index")]]
        }
        AnswerValue::Undecided => run.explorations.iter().flat_map(|e| e.trees.iter()).collect(),
    }
}

fn print_trace(out: &mut impl Write, run: &QueryRun) -> std::io::Result<()> {
    fn walk(out: &mut impl Write, node: &TreeNode, path: &mut Vec<String>) -> std::io::Result<()> {
        let line = path.join(" > ");
        for (d, violation) in &node.rejected {
            writeln!(
                out,
                "# line [{line}] + {} ({}) -> rejected: {violation}",
                d.attack.attacker, d.kind
            )?;
        }
        for d in &node.pruned {
            writeln!(
                out,
                "# line [{line}] + {} ({}) -> pruned (an earlier defeater already settled this node)",
                d.attack.attacker, d.kind
            )?;
        }
        for child in &node.children {
            let (kind, point) = child.incoming.as_ref().expect("child has an incoming defeater");
            writeln!(out, "# line [{line}] + {} ({kind} at {point}) -> accepted", child.argument)?;
            path.push(child.argument.conclusion.to_string());
            walk(out, child, path)?;
            path.pop();
        }
        Ok(())
    }
    for e in &run.explorations {
        for (i, tree) in e.trees.iter().enumerate() {
            writeln!(
                out,
                "# tree for {} [{i}]: root {} marked {} (expanded {}, pruned {})",
                e.query,
                tree.root.argument,
                tree.root.mark.map(|m| m.to_string()).unwrap_or_else(|| "?".into()),
                tree.stats.expanded,
                tree.stats.pruned
            )?;
            let mut path = vec![tree.root.argument.conclusion.to_string()];
            walk(out, &tree.root, &mut path)?;
        }
    }
    Ok(())
}

fn write_tree_export(
    run: &QueryRun,
    format: TreeFormat,
    tree_out: Option<&Path>,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let trees = trees_to_export(run);
    let rendered = match format {
        TreeFormat::None => return Ok(()),
        TreeFormat::Dot => export::to_dot(&trees),
        TreeFormat::Json => export::to_jsonl(&export::to_records(&trees)),
    };
    match tree_out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            out.write_all(rendered.as_bytes()).expect("stdout");
            Ok(())
        }
    }
}

fn cmd_query(
    file: &Path,
    query: &str,
    opts: &EngineOpts,
    tree: TreeFormat,
    tree_out: Option<&Path>,
    trace: bool,
) -> Result<(), Failure> {
    let g = load(file, mode_of(&opts.modes))?;
    let cfg = dialectics_config(opts.criterion.into(), opts.max_nodes, &g);
    let literal = parse_query(query).map_err(|d| Failure::input(d.to_string()))?;
    let run = run_query_on(&g, &cfg, &literal)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if trace {
        print_trace(&mut out, &run).expect("stdout");
    }
    writeln!(out, "{}", run.value).expect("stdout");
    write_tree_export(&run, tree, tree_out, &mut out)
}

fn cmd_check(file: &Path, modes: &[ModeArg]) -> Result<(), Failure> {
    load(file, mode_of(modes))?;
    println!("ok");
    Ok(())
}

fn cmd_warranted(file: &Path, opts: &EngineOpts) -> Result<(), Failure> {
    let g = load(file, mode_of(&opts.modes))?;
    let cfg = dialectics_config(opts.criterion.into(), opts.max_nodes, &g);
    let warranted = delp_core::dialectics::warranted_literals(&g, &cfg)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for l in warranted {
        writeln!(out, "{l}").expect("stdout");
    }
    Ok(())
}

fn cmd_repl(file: &Path, opts: &EngineOpts) -> Result<(), Failure> {
    let mut g = load(file, mode_of(&opts.modes))?;
    let mut criterion: Criterion = opts.criterion.into();
    let mut tree_target: Option<(TreeFormat, PathBuf)> = None;
    println!("loaded {}", file.display());
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        print!("delp> ");
        std::io::stdout().flush().expect("stdout");
        let Some(Ok(line)) = lines.next() else { break };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(':') {
            let mut words = rest.split_whitespace();
            match words.next() {
                Some("quit") => break,
                Some("load") => match words.next() {
                    Some(path) => match load(Path::new(path), mode_of(&opts.modes)) {
                        Ok(new_g) => {
                            g = new_g;
                            println!("loaded {path}");
                        }
                        Err(f) => println!("error: {}", f.message),
                    },
                    None => println!("error: usage: :load <file>"),
                },
                Some("criterion") => match words.next() {
                    Some("specificity") => {
                        criterion = Criterion::Specificity;
                        println!("criterion set to specificity");
                    }
                    Some("priorities") => {
                        criterion = Criterion::Priorities;
                        println!("criterion set to priorities");
                    }
                    Some("combined") => {
                        criterion = Criterion::Combined;
                        println!("criterion set to combined");
                    }
                    _ => println!("error: usage: :criterion <specificity|priorities|combined>"),
                },
                Some("tree") => match (words.next(), words.next()) {
                    (Some("dot"), Some(path)) => {
                        tree_target = Some((TreeFormat::Dot, PathBuf::from(path)));
                        println!("tree export set: dot -> {path}");
                    }
                    (Some("json"), Some(path)) => {
                        tree_target = Some((TreeFormat::Json, PathBuf::from(path)));
                        println!("tree export set: json -> {path}");
                    }
                    (Some("none"), _) => {
                        tree_target = None;
                        println!("tree export disabled");
                    }
                    _ => println!("error: usage: :tree <dot|json|none> <file>"),
                },
                Some("warranted") => {
                    let cfg = dialectics_config(criterion, opts.max_nodes, &g);
                    match delp_core::dialectics::warranted_literals(&g, &cfg) {
                        Ok(ws) => {
                            for l in ws {
                                println!("{l}");
                            }
                        }
                        Err(e) => println!("error: {e}"),
                    }
                }
                other => println!("error: unknown command `:{}`", other.unwrap_or("")),
            }
            continue;
        }
        let literal = match parse_query(line) {
            Ok(l) => l,
            Err(d) => {
                println!("error: {d}");
                continue;
            }
        };
        let cfg = dialectics_config(criterion, opts.max_nodes, &g);
        match run_query_on(&g, &cfg, &literal) {
            Ok(run) => {
                println!("{}", run.value);
                if let Some((format, path)) = &tree_target {
                    let mut sink = Vec::new();
                    if let Err(f) = write_tree_export(&run, *format, Some(path), &mut sink) {
                        println!("error: {}", f.message);
                    }
                }
            }
            Err(f) => println!("error: {}", f.message),
        }
    }
    Ok(())
}

fn cmd_oracle(
    file: Option<&Path>,
    fuzz: Option<u64>,
    seed: u64,
    jsonl_out: Option<&Path>,
    opts: &EngineOpts,
) -> Result<(), Failure> {
    let mut jsonl = String::new();
    let mut programs = 0usize;
    let mut comparisons = 0usize;
    let mut disagreements = 0usize;
    let mut skipped = 0usize;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();

    let run_one = |name: &str,
                       g: &GroundProgram,
                       out: &mut std::io::StdoutLock<'_>,
                       jsonl: &mut String,
                       programs: &mut usize,
                       comparisons: &mut usize,
                       disagreements: &mut usize,
                       skipped: &mut usize|
     -> DifferentialOutcome {
        let cfg = dialectics_config(opts.criterion.into(), opts.max_nodes, g);
        let outcome = differential_run(g, &cfg, &OracleConfig::for_corpus());
        *programs += 1;
        *comparisons += outcome.reports.len();
        *disagreements += outcome.disagreements;
        if let Some(reason) = &outcome.skipped {
            *skipped += 1;
            writeln!(out, "{name}: skipped ({reason})").expect("stdout");
        }
        for diff in outcome.differences() {
            writeln!(out, "{name}: {diff}").expect("stdout");
            jsonl.push_str(&format!(
                "{}\n",
                serde_json::json!({
                    "program": name,
                    "subject": diff.subject,
                    "engine": diff.engine,
                    "oracle": diff.oracle,
                })
            ));
        }
        outcome
    };

    if let Some(file) = file {
        let g = load(file, mode_of(&opts.modes))?;
        run_one(
            &file.display().to_string(),
            &g,
            &mut out,
            &mut jsonl,
            &mut programs,
            &mut comparisons,
            &mut disagreements,
            &mut skipped,
        );
    }
    if let Some(n) = fuzz {
        let params =
            GeneratorParams { seed, mode: mode_of(&opts.modes), ..GeneratorParams::default() };
        for i in 0..n {
            let g = delp_core::oracle::random_program(&params, i);
            run_one(
                &format!("fuzz[{i}]"),
                &g,
                &mut out,
                &mut jsonl,
                &mut programs,
                &mut comparisons,
                &mut disagreements,
                &mut skipped,
            );
        }
    }
    if file.is_none() && fuzz.is_none() {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "oracle needs a program file, --fuzz <n>, or both".into(),
        });
    }

    writeln!(
        out,
        "programs: {programs}, comparisons: {comparisons}, disagreements: {disagreements}, skipped: {skipped}"
    )
    .expect("stdout");
    if let Some(path) = jsonl_out {
        jsonl.push_str(&format!(
            "{}\n",
            serde_json::json!({
                "summary": {
                    "programs": programs,
                    "comparisons": comparisons,
                    "disagreements": disagreements,
                    "skipped": skipped,
                }
            })
        ));
        std::fs::write(path, jsonl)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Query { file, query, opts, tree, tree_out, trace } => {
            cmd_query(file, query, opts, *tree, tree_out.as_deref(), *trace)
        }
        Command::Repl { file, opts } => cmd_repl(file, opts),
        Command::Check { file, modes } => cmd_check(file, modes),
        Command::Warranted { file, opts } => cmd_warranted(file, opts),
        Command::Oracle { file, fuzz, seed, jsonl_out, opts } => {
            cmd_oracle(file.as_deref(), *fuzz, *seed, jsonl_out.as_deref(), opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.kind() == clap::error::ErrorKind::DisplayHelp
                || e.kind() == clap::error::ErrorKind::DisplayVersion
            {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
