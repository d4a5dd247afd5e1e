use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grothendieck::checker::{self, Budget, CheckReport, ConjectureId, Sampling, SweepConfig};
use grothendieck::kohnert::{closure_with_budget, Closure, Seed};
use grothendieck::pipedreams::{self, GridMode, PipeDream};
use grothendieck::tableaux::{self, BijectionTrace, SetValuedTableau};
use grothendieck::{poly, Diagram, Error, IntPolynomial, LabeledDiagram, Permutation, Ruleset, WeakComposition};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Grothendieck, Schubert and Lascoux polynomials and their combinatorial
/// models.
#[derive(Parser)]
#[command(name = "groth", version)]
struct Cli {
    /// Output format; `json` writes one JSON value per line.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Resource limit: `states=N`, `seconds=S`, both comma-separated, or a
    /// bare state count.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<Budget>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a polynomial, or one of its coefficients.
    Compute(ComputeArgs),
    /// List pipe dreams or closure diagrams.
    #[command(subcommand)]
    Enumerate(EnumerateCommand),
    /// Reproduce the counterexample or sweep a statement over a range.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Trace the tableau-to-diagram bijection stage by stage.
    Bijection(BijectionArgs),
    /// Convert an artifact between the text and JSON forms.
    Render(RenderArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Schubert,
    Grothendieck,
    Lascoux,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Recursion,
    Pipes,
    Plain,
    Ry,
    Ghost,
    Relaxed,
    Fsvt,
    Svkt,
}

impl Method {
    fn ruleset(self) -> Option<Ruleset> {
        match self {
            Method::Plain => Some(Ruleset::Plain),
            Method::Ry => Some(Ruleset::RossYong),
            Method::Ghost => Some(Ruleset::Ghost),
            Method::Relaxed => Some(Ruleset::Relaxed),
            _ => None,
        }
    }

    fn supports(self, family: Family) -> bool {
        use Method::*;
        match family {
            Family::Schubert => matches!(self, Recursion | Pipes | Plain),
            Family::Grothendieck => matches!(self, Recursion | Pipes | Ry | Ghost | Relaxed | Fsvt),
            Family::Lascoux => matches!(self, Recursion | Ry | Ghost | Relaxed | Fsvt | Svkt),
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    family: Family,
    /// A permutation (`12365847` or `1,2,3,...`), or a weak composition
    /// for `lascoux`.
    index: String,
    #[arg(long, value_enum, default_value_t = Method::Recursion)]
    method: Method,
    /// Print only the coefficient of this monomial exponent.
    #[arg(long)]
    coeff: Option<String>,
}

#[derive(Subcommand)]
enum EnumerateCommand {
    /// Pipe dreams of a permutation.
    Pipes {
        perm: String,
        #[arg(long)]
        weight: Option<String>,
        /// Tiles allowed to carry crossings.
        #[arg(long, value_enum, default_value_t = Grid::Staircase)]
        grid: Grid,
    },
    /// Diagrams reachable from `D(w)` or `D(α)` under a move set.
    Closure {
        #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
        perm: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum)]
        rules: Rules,
        #[arg(long)]
        weight: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Grid {
    Staircase,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rules {
    Plain,
    Ry,
    Ghost,
    Relaxed,
}

impl From<Rules> for Ruleset {
    fn from(r: Rules) -> Self {
        match r {
            Rules::Plain => Ruleset::Plain,
            Rules::Ry => Ruleset::RossYong,
            Rules::Ghost => Ruleset::Ghost,
            Rules::Relaxed => Ruleset::Relaxed,
        }
    }
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Recount `w = 12365847` at `γ = (3,3,3,2)` and render its diagrams.
    Counterexample,
    /// Compare a rule against the recursion over a whole range.
    Sweep {
        #[arg(long, value_parser = parse_conjecture)]
        conjecture: ConjectureId,
        #[arg(long)]
        n: usize,
        /// `exhaustive` or `random:K`.
        #[arg(long, default_value = "exhaustive", value_parser = parse_sampling)]
        sample: Sampling,
        /// Seed for `random:K`.
        #[arg(long)]
        seed: Option<u64>,
        /// Largest part when sweeping weak compositions.
        #[arg(long, default_value_t = 3)]
        max_part: u32,
        /// Keep only violating cases in the report.
        #[arg(long)]
        violations_only: bool,
    },
}

#[derive(Args)]
struct BijectionArgs {
    /// A 321-avoiding permutation.
    #[arg(long)]
    perm: String,
    /// A flagged set-valued tableau of shape `D(w)` in text or JSON form
    /// (`-` for stdin). Without it every tableau is traced.
    #[arg(long)]
    tableau: Option<String>,
}

#[derive(Args)]
struct RenderArgs {
    kind: Kind,
    /// Input file, `-` for stdin. Text or JSON is detected from content.
    #[arg(default_value = "-")]
    input: String,
    /// Number of variables when a text polynomial mentions fewer.
    #[arg(long)]
    vars: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Polynomial,
    Diagram,
    Labeled,
    PipeDream,
    Tableau,
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// What a command produced: lines for stdout and the exit status.
struct Output {
    lines: Vec<String>,
    code: u8,
}

impl Output {
    fn ok(lines: Vec<String>) -> Self {
        Self { lines, code: 0 }
    }
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    let mut budget = Budget::default();
    for part in s.split(',').map(str::trim) {
        let (key, value) = part.split_once('=').unwrap_or(("states", part));
        match key.trim() {
            "states" => {
                budget.max_states = Some(value.trim().parse().map_err(|_| format!("bad state count {value:?}"))?)
            }
            "seconds" => {
                let secs: f64 = value.trim().parse().map_err(|_| format!("bad seconds {value:?}"))?;
                if !(secs.is_finite() && secs > 0.0) {
                    return Err(format!("seconds must be positive, got {value:?}"));
                }
                budget.max_seconds = Some(secs);
            }
            other => return Err(format!("unknown budget key {other:?}")),
        }
    }
    Ok(budget)
}

fn parse_conjecture(s: &str) -> Result<ConjectureId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sampling(s: &str) -> Result<Sampling, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_perm(s: &str) -> Result<Permutation, Failure> {
    Ok(s.parse()?)
}

fn parse_comp(s: &str) -> Result<WeakComposition, Failure> {
    Ok(s.parse()?)
}

fn parse_weight(s: &str, n: usize) -> Result<WeakComposition, Failure> {
    parse_comp(s)?
        .padded(n)
        .map_err(|_| Failure::Usage(format!("weight {s} has more than {n} parts")))
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string(value)?)
}

fn partial_marker(format: Format, reason: &str) -> String {
    match format {
        Format::Text => format!("# partial: {reason}"),
        Format::Json => serde_json::json!({ "partial": true, "reason": reason }).to_string(),
    }
}

/// Restricts to the first `n` variables when the rest never occur.
fn with_vars(p: IntPolynomial, n: usize) -> IntPolynomial {
    if p.num_vars() <= n || p.terms().any(|(e, _)| e[n..].iter().any(|&x| x > 0)) {
        return p;
    }
    let terms = p.terms().map(|(e, c)| (e[..n].to_vec(), c.clone())).collect::<Vec<_>>();
    IntPolynomial::from_terms(n, terms).expect("truncated exponents have length n")
}

fn budgeted_closure(seed: &Seed, rules: Ruleset, budget: &Budget) -> Result<Closure, Failure> {
    Ok(closure_with_budget(&seed.diagram()?, rules, budget.max_states)?)
}

fn compute(args: &ComputeArgs, format: Format, budget: &Budget) -> Result<Output, Failure> {
    if !args.method.supports(args.family) {
        return Err(Failure::Usage(format!(
            "method {} does not compute {} polynomials",
            args.method.to_possible_value().unwrap().get_name(),
            args.family.to_possible_value().unwrap().get_name()
        )));
    }
    let seed = match args.family {
        Family::Lascoux => Seed::Composition(parse_comp(&args.index)?),
        _ => Seed::Permutation(parse_perm(&args.index)?),
    };
    let n = match &seed {
        Seed::Permutation(w) => w.n(),
        Seed::Composition(a) => a.len(),
    };
    let gamma = args.coeff.as_deref().map(|s| parse_weight(s, n)).transpose()?;
    let p = match (&seed, args.method.ruleset()) {
        (_, Some(rules)) => budgeted_closure(&seed, rules, budget)?.generating_function(seed.base_degree()),
        (Seed::Permutation(w), None) => match (args.family, args.method) {
            (Family::Schubert, Method::Recursion) => poly::schubert(w),
            (Family::Schubert, Method::Pipes) => pipedreams::schubert_via_pipes(w)?,
            (_, Method::Recursion) => poly::grothendieck(w),
            (_, Method::Pipes) => pipedreams::grothendieck_via_pipes(w, usize::MAX)?,
            _ => tableaux::grothendieck_via_fsvt(w)?,
        },
        (Seed::Composition(a), None) => match args.method {
            Method::Recursion => poly::lascoux(a),
            Method::Fsvt => tableaux::lascoux_via_fsvt(a)?,
            _ => tableaux::lascoux_via_svkt(a)?,
        },
    };
    let p = with_vars(p, n);
    let line = match (gamma, format) {
        (None, Format::Text) => p.to_text(),
        (None, Format::Json) => json(&p)?,
        (Some(g), Format::Text) => {
            let c = p.coefficient(&g).to_string();
            if c.starts_with('-') {
                c
            } else {
                format!("+{c}")
            }
        }
        (Some(g), Format::Json) => {
            let c = p.coefficient(&g);
            serde_json::json!({
                "gamma": g,
                "coefficient": c.to_string(),
                "magnitude": c.magnitude().to_string(),
                "sign": if c.to_string().starts_with('-') { "-" } else { "+" },
            })
            .to_string()
        }
    };
    Ok(Output::ok(vec![line]))
}

/// Applies `--budget states=N` as a cap on the number of listed items.
fn emit_capped<T>(
    items: Vec<T>,
    format: Format,
    budget: &Budget,
    render: impl Fn(&T) -> Result<String, Failure>,
) -> Result<Output, Failure> {
    let cap = budget.max_states.unwrap_or(usize::MAX);
    let over = items.len() > cap;
    let mut lines = Vec::new();
    for item in items.iter().take(cap) {
        lines.push(render(item)?);
    }
    if over {
        lines.push(partial_marker(format, &format!("state budget of {cap} exceeded")));
        return Ok(Output {
            lines,
            code: EXIT_BUDGET,
        });
    }
    Ok(Output::ok(lines))
}

fn text_block(s: String) -> String {
    s.trim_end().to_string() + "\n"
}

fn enumerate(cmd: &EnumerateCommand, format: Format, budget: &Budget) -> Result<Output, Failure> {
    match cmd {
        EnumerateCommand::Pipes { perm, weight, grid } => {
            let w = parse_perm(perm)?;
            let gamma = weight.as_deref().map(|s| parse_weight(s, w.n())).transpose()?;
            let mode = match grid {
                Grid::Staircase => GridMode::Staircase,
                Grid::Full => GridMode::Full,
            };
            let mut pipes = match &gamma {
                Some(g) => pipedreams::enumerate_pipes_with_weight(&w, g, mode)?,
                None => pipedreams::enumerate_pipes(&w, usize::MAX, mode)?,
            };
            pipes.sort_by_cached_key(|p| (p.weight(), p.to_text()));
            emit_capped(pipes, format, budget, |p| match format {
                Format::Text => Ok(text_block(p.to_text())),
                Format::Json => json(p),
            })
        }
        EnumerateCommand::Closure {
            perm,
            alpha,
            rules,
            weight,
        } => {
            let seed = match (perm, alpha) {
                (Some(w), _) => Seed::Permutation(parse_perm(w)?),
                (None, Some(a)) => Seed::Composition(parse_comp(a)?),
                (None, None) => return Err(Failure::Usage("one of --perm or --alpha is required".into())),
            };
            let n = seed.diagram()?.grid_size();
            let gamma = weight.as_deref().map(|s| parse_weight(s, n)).transpose()?;
            let states = match budgeted_closure(&seed, (*rules).into(), budget) {
                Ok(c) => c,
                Err(Failure::Budget(reason)) => {
                    return Ok(Output {
                        lines: vec![partial_marker(format, &reason)],
                        code: EXIT_BUDGET,
                    })
                }
                Err(e) => return Err(e),
            };
            let mut diagrams: Vec<LabeledDiagram> = match &gamma {
                Some(g) => states.with_weight(g),
                None => states.states().to_vec(),
            };
            diagrams.sort_by_cached_key(|d| (d.weight(), d.canonical_key()));
            let mut lines = Vec::with_capacity(diagrams.len());
            for d in &diagrams {
                lines.push(match format {
                    Format::Text => text_block(d.to_text()),
                    Format::Json => json(d)?,
                });
            }
            Ok(Output::ok(lines))
        }
    }
}

fn report_lines(report: &CheckReport, format: Format) -> Result<Vec<String>, Failure> {
    if format == Format::Json {
        return Ok(vec![json(report)?]);
    }
    let unexpected = report.unexpected_violations().len();
    let mut lines = vec![
        format!("conjecture: {}", report.conjecture_id),
        format!("scope: {}", report.scope),
        format!("seed: {}", report.seed.map_or("none".to_string(), |s| s.to_string())),
        format!("cases: {}", report.cases),
        format!("violations: {} ({unexpected} unexpected)", report.violations.len()),
    ];
    for v in &report.violations {
        let tag = if checker::is_known_violation(report.conjecture_id, v) {
            " (known)"
        } else {
            ""
        };
        lines.push(format!("  {v}{tag}"));
    }
    lines.push(format!("complete: {}", if report.complete { "yes" } else { "no" }));
    Ok(lines)
}

fn report_status(report: &CheckReport, format: Format, mut lines: Vec<String>) -> Output {
    let code = if !report.unexpected_violations().is_empty() {
        EXIT_VIOLATION
    } else if !report.complete {
        lines.push(partial_marker(format, "budget exhausted before the range was covered"));
        EXIT_BUDGET
    } else {
        0
    };
    Output { lines, code }
}

fn check(cmd: &CheckCommand, format: Format, budget: &Budget) -> Result<Output, Failure> {
    match cmd {
        CheckCommand::Counterexample => {
            let cx = checker::reproduce_counterexample()?;
            let lines = match format {
                Format::Json => vec![json(&cx)?],
                Format::Text => {
                    let mut lines = vec![
                        format!("w = {}, γ = {}", cx.permutation, cx.gamma),
                        format!("g = {} (pipe dreams: {})", cx.g, cx.g_pipes),
                        format!("K-Kohnert diagrams: {}", cx.ry_count),
                        format!("ghost K-Kohnert diagrams: {}", cx.ghost_count),
                        format!("matches fixtures: {}", if cx.matches_fixtures { "yes" } else { "no" }),
                        String::new(),
                    ];
                    let mut ry = cx.ry_diagrams.clone();
                    let mut ghost = cx.ghost_diagrams.clone();
                    ry.sort_by_key(|d| d.canonical_key());
                    ghost.sort_by_key(|d| d.canonical_key());
                    for (title, ds) in [("K-Kohnert", &ry), ("ghost K-Kohnert", &ghost)] {
                        for (i, d) in ds.iter().enumerate() {
                            lines.push(format!("{title} {}:", i + 1));
                            lines.push(text_block(d.to_text()));
                        }
                    }
                    lines
                }
            };
            let ok = cx.matches_fixtures && cx.report.unexpected_violations().is_empty();
            Ok(Output {
                lines,
                code: if ok { 0 } else { EXIT_VIOLATION },
            })
        }
        CheckCommand::Sweep {
            conjecture,
            n,
            sample,
            seed,
            max_part,
            violations_only,
        } => {
            let sampling = match (sample, seed) {
                (Sampling::Random { k, .. }, s) => Sampling::Random {
                    k: *k,
                    seed: s.unwrap_or(0),
                },
                (Sampling::Exhaustive, Some(_)) => {
                    return Err(Failure::Usage("--seed only applies to random:K sampling".into()))
                }
                (Sampling::Exhaustive, None) => Sampling::Exhaustive,
            };
            let mut config = SweepConfig::new(*conjecture, *n, sampling);
            config.max_part = *max_part;
            config.budget = Budget {
                violations_only: *violations_only,
                ..*budget
            };
            let conj = *conjecture;
            let report = checker::sweep_with(&config, &|case| {
                if !checker::is_known_violation(conj, case) {
                    eprintln!("violation: {case}");
                }
            })?;
            let lines = report_lines(&report, format)?;
            Ok(report_status(&report, format, lines))
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn looks_like_json(s: &str) -> bool {
    matches!(s.trim_start().chars().next(), Some('{' | '['))
}

fn parse_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_tableau(s: &str) -> Result<SetValuedTableau, Failure> {
    if looks_like_json(s) {
        parse_json(s)
    } else {
        Ok(SetValuedTableau::parse_text(s)?)
    }
}

fn trace_lines(trace: &BijectionTrace, format: Format) -> Result<Vec<String>, Failure> {
    if format == Format::Json {
        return Ok(vec![json(trace)?]);
    }
    let kept: Vec<String> = trace.columns.kept.iter().map(|c| c.to_string()).collect();
    Ok(vec![
        "T:".into(),
        text_block(trace.input.to_text()),
        format!("α = {}, β = {}", trace.alpha, trace.beta),
        "φ(T):".into(),
        text_block(trace.phi.to_text()),
        format!("ρ(φ(T)), columns kept {}:", kept.join(",")),
        text_block(trace.rho.to_text()),
        "O:".into(),
        text_block(trace.encoding.o.to_text()),
        "G:".into(),
        text_block(trace.encoding.g.to_text()),
        "Φ_α:".into(),
        text_block(trace.phi_alpha.to_text()),
        "f(T):".into(),
        text_block(trace.result.to_text()),
    ])
}

fn bijection(args: &BijectionArgs, format: Format) -> Result<Output, Failure> {
    let w = parse_perm(&args.perm)?;
    if !w.is_321_avoiding() {
        return Err(Error::Not321Avoiding(w.to_string()).into());
    }
    let inputs = match &args.tableau {
        Some(path) => vec![parse_tableau(&read_input(path)?)?],
        None => {
            let mut all = tableaux::enumerate_fsvt(&Diagram::rothe(&w)?);
            all.sort_by_cached_key(|t| (t.weight(), t.to_text()));
            all
        }
    };
    let mut lines = Vec::new();
    for (i, t) in inputs.iter().enumerate() {
        if i > 0 && format == Format::Text {
            lines.push("---".into());
        }
        lines.extend(trace_lines(&tableaux::bijection_f_traced(&w, t)?, format)?);
    }
    Ok(Output::ok(lines))
}

fn mentioned_vars(s: &str) -> usize {
    let bytes = s.as_bytes();
    let mut n = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'x' {
            let digits: String = s[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            n = n.max(digits.parse().unwrap_or(0));
        }
    }
    n
}

fn render(args: &RenderArgs, format: Format) -> Result<Output, Failure> {
    let s = read_input(&args.input)?;
    let is_json = looks_like_json(&s);
    let line = match args.kind {
        Kind::Polynomial => {
            let p = if is_json {
                IntPolynomial::from_json(&s, args.vars)?
            } else {
                let n = args.vars.unwrap_or(0).max(mentioned_vars(&s));
                IntPolynomial::parse_text(s.trim(), n)?
            };
            match format {
                Format::Text => p.to_text(),
                Format::Json => json(&p)?,
            }
        }
        Kind::Diagram => {
            let d: Diagram = if is_json {
                parse_json(&s)?
            } else {
                Diagram::parse_text(&s)?
            };
            match format {
                Format::Text => text_block(d.to_text()),
                Format::Json => json(&d)?,
            }
        }
        Kind::Labeled => {
            let d: LabeledDiagram = if is_json {
                parse_json(&s)?
            } else {
                LabeledDiagram::parse_text(&s)?
            };
            match format {
                Format::Text => text_block(d.to_text()),
                Format::Json => json(&d)?,
            }
        }
        Kind::PipeDream => {
            let p: PipeDream = if is_json {
                parse_json(&s)?
            } else {
                PipeDream::parse_text(&s)?
            };
            match format {
                Format::Text => text_block(p.to_text()),
                Format::Json => json(&p)?,
            }
        }
        Kind::Tableau => {
            let t = parse_tableau(&s)?;
            match format {
                Format::Text => text_block(t.to_text()),
                Format::Json => json(&t)?,
            }
        }
    };
    Ok(Output::ok(vec![line]))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let budget = cli.budget.unwrap_or_default();
    match &cli.command {
        Command::Compute(args) => compute(args, cli.format, &budget),
        Command::Enumerate(cmd) => enumerate(cmd, cli.format, &budget),
        Command::Check(cmd) => check(cmd, cli.format, &budget),
        Command::Bijection(args) => bijection(args, cli.format),
        Command::Render(args) => render(args, cli.format),
    }
}

fn write_lines(lines: &[String]) -> io::Result<()> {
    let mut out = io::stdout().lock();
    for line in lines {
        writeln!(out, "{line}")?;
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("global pool is configured once");
    }
    let format = cli.format;
    // Sweeps stop at their own deadline; everything else is cut off here.
    let deadline = match (&cli.command, cli.budget.and_then(|b| b.max_seconds)) {
        (Command::Check(CheckCommand::Sweep { .. }), _) | (_, None) => None,
        (_, Some(s)) => Some(Duration::from_secs_f64(s)),
    };
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(dispatch(&cli));
    });
    let result = match deadline {
        Some(d) => match rx.recv_timeout(d) {
            Ok(r) => r,
            Err(_) => Err(Failure::Budget(format!("time budget of {}s exceeded", d.as_secs_f64()))),
        },
        None => rx.recv().expect("worker sends a result"),
    };
    match result {
        Ok(out) => {
            if let Err(e) = write_lines(&out.lines) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Budget(reason)) => {
            let _ = write_lines(&[partial_marker(format, &reason)]);
            eprintln!("error: {reason}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
