//! The `hypolog` command line: argument parsing, report building and
//! rendering. [`run`] does all the work and returns what `main` should
//! print and the exit status.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypolog::engine::default_max_iters;
use hypolog::reference::{self, DatalogProgram, ReferenceError};
use hypolog::{
    ground, h_founded_semantics, immediate_consequence, parse_hypothesis, parse_program, support, Bilattice,
    EngineError, GroundAtom, GroundProgram, Interpretation, TruthValue,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "hypolog",
    version,
    about = "Evaluate logic programs over bilattices under hypotheses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One application of the consequence operator to the facts.
    Eval(Common),
    /// The maximal sound part of a hypothesis.
    Support(WithHypothesis),
    /// The hypothesis-founded semantics.
    Sem(WithHypothesis),
    /// The well-founded model (Datalog with negation only).
    Wfs(Common),
    /// The Kripke-Kleene model (Datalog with negation only).
    Kk(Common),
    /// Compare `sem` under H_F and H_U with `wfs` and `kk`.
    Check(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Program file.
    #[arg(short, long)]
    pub program: PathBuf,
    /// four, product:unit, interval:bool, ...
    #[arg(long, default_value = "four")]
    pub bilattice: String,
    /// Print the intermediate stages.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Cap on semantics iterations (default 10*|HB|+10).
    #[arg(long)]
    pub max_iters: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WithHypothesis {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub hypothesis: HypothesisArgs,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct HypothesisArgs {
    /// Hypothesis file (facts only).
    #[arg(short = 'H', long)]
    pub hypothesis: Option<PathBuf>,
    /// Use a preset hypothesis over the whole Herbrand base.
    #[arg(long, value_enum)]
    pub assume: Option<Preset>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Everywhere false (FOUR only).
    #[value(name = "H_F")]
    HF,
    /// Everywhere unknown.
    #[value(name = "H_U")]
    HU,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypothesisSource {
    File(PathBuf),
    Preset(Preset),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Eval,
    Support,
    Sem,
    Wfs,
    Kk,
    Check,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Eval => "eval",
            CommandKind::Support => "support",
            CommandKind::Sem => "sem",
            CommandKind::Wfs => "wfs",
            CommandKind::Kk => "kk",
            CommandKind::Check => "check",
        }
    }

    fn stage_label(self) -> &'static str {
        match self {
            CommandKind::Support => "PF",
            CommandKind::Wfs => "W",
            CommandKind::Kk => "K",
            _ => "F",
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub program: PathBuf,
    pub hypothesis: Option<HypothesisSource>,
    pub bilattice: Bilattice,
    pub trace: bool,
    pub format: Format,
    pub max_iters: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (command, common, hyp) = match cli.command {
            Command::Eval(c) => (CommandKind::Eval, c, None),
            Command::Support(w) => (CommandKind::Support, w.common, Some(w.hypothesis)),
            Command::Sem(w) => (CommandKind::Sem, w.common, Some(w.hypothesis)),
            Command::Wfs(c) => (CommandKind::Wfs, c, None),
            Command::Kk(c) => (CommandKind::Kk, c, None),
            Command::Check(c) => (CommandKind::Check, c, None),
        };
        let bilattice = Bilattice::from_selector(&common.bilattice).map_err(|e| CliError::Config(e.to_string()))?;
        let hypothesis = hyp.map(|h| match (h.hypothesis, h.assume) {
            (Some(path), _) => HypothesisSource::File(path),
            (None, Some(p)) => HypothesisSource::Preset(p),
            (None, None) => unreachable!("clap requires one of the group"),
        });
        if hypothesis == Some(HypothesisSource::Preset(Preset::HF)) && bilattice != Bilattice::Four {
            return Err(CliError::Config(format!(
                "H_F is only available for four, not {bilattice}"
            )));
        }
        Ok(RunConfig {
            command,
            program: common.program,
            hypothesis,
            bilattice,
            trace: common.trace,
            format: common.format,
            max_iters: common.max_iters,
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Parse {
        path: PathBuf,
        source: Box<hypolog::ParseError>,
    },
    #[error("{}: {source}", path.display())]
    Ground {
        path: PathBuf,
        source: Box<hypolog::GroundError>,
    },
    #[error("{}: hypothesis: {source}", path.display())]
    Hypothesis {
        path: PathBuf,
        source: Box<hypolog::InterpretationError>,
    },
    #[error("{0}")]
    Fragment(Box<ReferenceError>),
    #[error("no fixpoint after {0} iterations; raise --max-iters")]
    IterationCap(usize),
    #[error(transparent)]
    Engine(Box<EngineError>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_)
            | CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Ground { .. }
            | CliError::Hypothesis { .. } => 2,
            CliError::Fragment(_) => 3,
            CliError::IterationCap(_) => 4,
            CliError::Engine(_) => 1,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::IterationCap { iterations, .. } => CliError::IterationCap(iterations),
            other => CliError::Engine(Box::new(other)),
        }
    }
}

impl From<hypolog::InterpretationError> for CliError {
    fn from(e: hypolog::InterpretationError) -> Self {
        CliError::Engine(Box::new(e.into()))
    }
}

/// What a finished invocation prints, and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and executes them.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match RunConfig::from_cli(cli).and_then(|cfg| execute(&cfg)) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Runs a validated configuration, returning the exit status and the report.
pub fn execute(cfg: &RunConfig) -> Result<(i32, String), CliError> {
    let g = load_program(&cfg.program, cfg.bilattice)?;
    if cfg.command == CommandKind::Check {
        let report = check(&g, cfg.max_iters)?;
        let code = if report.wfs.matches && report.kk.matches { 0 } else { 1 };
        let text = match cfg.format {
            Format::Table => report.to_table(),
            Format::Json => to_json(&report),
        };
        return Ok((code, text));
    }
    let report = build_report(cfg, &g)?;
    let text = match cfg.format {
        Format::Table => report.to_table(cfg.command, cfg.trace),
        Format::Json => to_json(&report),
    };
    Ok((0, text))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_program(path: &Path, bilattice: Bilattice) -> Result<GroundProgram, CliError> {
    let text = read(path)?;
    let p = parse_program(&text, bilattice).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        source: Box::new(e),
    })?;
    ground(&p).map_err(|e| CliError::Ground {
        path: path.to_owned(),
        source: Box::new(e),
    })
}

fn load_hypothesis(g: &GroundProgram, source: &HypothesisSource) -> Result<Interpretation, CliError> {
    let everywhere = |v| Ok(Interpretation::constant(g.base.clone(), g.bilattice, v)?);
    match source {
        HypothesisSource::Preset(Preset::HF) => everywhere(TruthValue::FALSE),
        HypothesisSource::Preset(Preset::HU) => everywhere(g.bilattice.bottom_k()),
        HypothesisSource::File(path) => {
            let text = read(path)?;
            let a = parse_hypothesis(&text, g.bilattice).map_err(|e| CliError::Parse {
                path: path.clone(),
                source: Box::new(e),
            })?;
            Interpretation::from_assignment(g.base.clone(), g.bilattice, &a).map_err(|e| CliError::Hypothesis {
                path: path.clone(),
                source: Box::new(e),
            })
        }
    }
}

fn datalog(g: &GroundProgram) -> Result<DatalogProgram, CliError> {
    DatalogProgram::from_ground(g).map_err(|e| CliError::Fragment(Box::new(e)))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// One `PF_i` or one stage's changes: the listed atoms with their values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub atoms: Vec<String>,
    pub values: Vec<String>,
}

/// The structured result of `eval`, `support`, `sem`, `wfs` and `kk`.
/// `atoms` lists the whole Herbrand base in lexicographic order and
/// `values` the value of each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub bilattice: String,
    pub atoms: Vec<String>,
    pub values: Vec<String>,
    pub iterations: usize,
    pub trace: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incompatible: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pf: Option<Vec<String>>,
}

fn sorted_values(i: &Interpretation) -> BTreeMap<String, String> {
    i.base()
        .atoms()
        .map(|a| (a.to_string(), i.get(a).to_string()))
        .collect()
}

fn names<'a>(atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Vec<String> {
    let mut v: Vec<String> = atoms.into_iter().map(|a| a.to_string()).collect();
    v.sort();
    v
}

/// Atoms whose value differs between consecutive stages.
fn deltas(stages: &[Interpretation]) -> Vec<TraceStep> {
    let mut out = Vec::new();
    let mut previous: Option<BTreeMap<String, String>> = None;
    for (step, stage) in stages.iter().enumerate() {
        let now = sorted_values(stage);
        let changed: Vec<(String, String)> = now
            .iter()
            .filter(|(a, v)| match &previous {
                Some(p) => p.get(*a) != Some(*v),
                None => v.as_str() != "U",
            })
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect();
        let (atoms, values) = changed.into_iter().unzip();
        out.push(TraceStep { step, atoms, values });
        previous = Some(now);
    }
    out
}

fn build_report(cfg: &RunConfig, g: &GroundProgram) -> Result<Report, CliError> {
    let (result, iterations, trace, incompatible, pf) = match cfg.command {
        CommandKind::Eval => (
            immediate_consequence(g, &g.fact_interpretation())?,
            1,
            Vec::new(),
            None,
            None,
        ),
        CommandKind::Support => {
            let h = load_hypothesis(g, cfg.hypothesis.as_ref().expect("support takes a hypothesis"))?;
            let s = support(g, &h)?;
            let trace = s
                .pf_trace
                .iter()
                .enumerate()
                .map(|(step, set)| {
                    let atoms = names(set);
                    let values = set
                        .iter()
                        .map(|a| (a.to_string(), h.get(a).to_string()))
                        .collect::<BTreeMap<_, _>>();
                    TraceStep {
                        step,
                        values: atoms.iter().map(|a| values[a].clone()).collect(),
                        atoms,
                    }
                })
                .collect();
            (
                s.support.clone(),
                s.iterations,
                trace,
                Some(names(&s.incompatible)),
                Some(names(s.pf())),
            )
        }
        CommandKind::Sem => {
            let h = load_hypothesis(g, cfg.hypothesis.as_ref().expect("sem takes a hypothesis"))?;
            let s = h_founded_semantics(g, &h, cfg.max_iters)?;
            (s.model, s.iterations, deltas(&s.stage_trace), None, None)
        }
        CommandKind::Wfs => {
            let d = datalog(g)?;
            let stages = reference::well_founded_trace(&d)
                .iter()
                .map(|pi| reference::to_three_valued(pi, &g.base).map_err(|e| CliError::Fragment(Box::new(e))))
                .collect::<Result<Vec<_>, _>>()?;
            let model = stages.last().expect("trace is non-empty").clone();
            (model, stages.len() - 1, deltas(&stages), None, None)
        }
        CommandKind::Kk => {
            let d = datalog(g)?;
            let stages = kripke_kleene_stages(&d);
            let model = stages.last().expect("trace is non-empty").clone();
            (model, stages.len() - 1, deltas(&stages), None, None)
        }
        CommandKind::Check => unreachable!("handled by execute"),
    };
    let values = sorted_values(&result);
    Ok(Report {
        command: cfg.command.name(),
        bilattice: cfg.bilattice.selector(),
        atoms: values.keys().cloned().collect(),
        values: values.into_values().collect(),
        iterations,
        trace: if cfg.trace { trace } else { Vec::new() },
        incompatible,
        pf,
    })
}

/// `Φ` iterated from the everywhere-unknown valuation, up to its fixpoint.
fn kripke_kleene_stages(d: &DatalogProgram) -> Vec<Interpretation> {
    let mut v = reference::Valuation::new();
    let mut stages = vec![reference::valuation_to_interpretation(&v, &d.base)];
    loop {
        let next = reference::phi(d, &v);
        if next == v {
            return stages;
        }
        stages.push(reference::valuation_to_interpretation(&next, &d.base));
        v = next;
    }
}

fn join(v: &[String]) -> String {
    if v.is_empty() {
        "none".to_string()
    } else {
        v.join(", ")
    }
}

impl Report {
    pub fn to_table(&self, command: CommandKind, trace: bool) -> String {
        let mut out = String::new();
        writeln!(out, "% command: {}", self.command).unwrap();
        writeln!(out, "% bilattice: {}", self.bilattice).unwrap();
        writeln!(out, "% iterations: {}", self.iterations).unwrap();
        if let Some(inc) = &self.incompatible {
            writeln!(out, "% incompatible: {}", join(inc)).unwrap();
        }
        if let Some(pf) = &self.pf {
            writeln!(out, "% pf: {}", join(pf)).unwrap();
        }
        if trace {
            for step in &self.trace {
                let items: Vec<String> = if command == CommandKind::Support {
                    step.atoms.clone()
                } else {
                    step.atoms
                        .iter()
                        .zip(&step.values)
                        .map(|(a, v)| format!("{a} = {v}"))
                        .collect()
                };
                writeln!(out, "% {}_{}: {}", command.stage_label(), step.step, join(&items)).unwrap();
            }
        }
        for (a, v) in self.atoms.iter().zip(&self.values) {
            writeln!(out, "{a} = {v}").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Difference {
    pub atom: String,
    pub semantics: String,
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    #[serde(rename = "match")]
    pub matches: bool,
    pub differences: Vec<Difference>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub command: &'static str,
    pub bilattice: String,
    pub wfs: Comparison,
    pub kk: Comparison,
}

fn compare(sem: &Interpretation, oracle: &Interpretation) -> Comparison {
    let (s, o) = (sorted_values(sem), sorted_values(oracle));
    let differences: Vec<Difference> = s
        .iter()
        .filter(|(a, v)| o[*a] != **v)
        .map(|(a, v)| Difference {
            atom: a.clone(),
            semantics: v.clone(),
            reference: o[a].clone(),
        })
        .collect();
    Comparison {
        matches: differences.is_empty(),
        differences,
    }
}

pub fn check(g: &GroundProgram, max_iters: Option<usize>) -> Result<CheckReport, CliError> {
    let d = datalog(g)?;
    let max_iters = max_iters.or(Some(default_max_iters(g)));
    let everywhere = |v| Interpretation::constant(g.base.clone(), g.bilattice, v);
    let sem_f = h_founded_semantics(g, &everywhere(TruthValue::FALSE)?, max_iters)?.model;
    let sem_u = h_founded_semantics(g, &everywhere(TruthValue::UNDER)?, max_iters)?.model;
    let wfs = reference::to_three_valued(&reference::well_founded(&d), &g.base)
        .map_err(|e| CliError::Fragment(Box::new(e)))?;
    let kk = reference::kripke_kleene(&d);
    Ok(CheckReport {
        command: "check",
        bilattice: g.bilattice.selector(),
        wfs: compare(&sem_f, &wfs),
        kk: compare(&sem_u, &kk),
    })
}

impl CheckReport {
    pub fn to_table(&self) -> String {
        let verdict = |c: &Comparison| if c.matches { "MATCH" } else { "MISMATCH" };
        let mut out = format!("wfs: {}, kk: {}\n", verdict(&self.wfs), verdict(&self.kk));
        for (name, hyp, c) in [("wfs", "H_F", &self.wfs), ("kk", "H_U", &self.kk)] {
            for d in &c.differences {
                writeln!(
                    out,
                    "{name} differs at {}: sem under {hyp} = {}, {name} = {}",
                    d.atom, d.semantics, d.reference
                )
                .unwrap();
            }
        }
        out
    }
}
