//! Command-line front end: scenario and state ingestion, analysis
//! commands, and report emission in text and JSON form.
//!
//! Exit codes: 0 success, 1 analysis refusal (truncation, closure limits,
//! solver breakdown), 2 input error.

use std::io::IsTerminal;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::assign::{enumerate_01, ks_assignment_search};
use crate::catalog::{self, CatalogEntry};
use crate::classify::{self, Bound, InequalitySpec};
use crate::io::{self, format_sig9, StateInput};
use crate::scenario::{ClosureLimits, Scenario, Validity};
use crate::states::{self, GraphState};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ctxlab",
    version,
    about = "Analyze exclusivity scenarios: deterministic assignments, \
             contextual fractions, and inequality bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A scenario argument: positional or via --scenario, builtin name or
/// JSON file path.
#[derive(Args)]
struct ScenarioRef {
    /// Builtin name (see `list`) or scenario JSON path
    #[arg(value_name = "SCENARIO")]
    positional: Option<String>,
    /// Alternative to the positional scenario argument
    #[arg(long = "scenario", value_name = "NAME|PATH", conflicts_with = "positional")]
    flag: Option<String>,
}

impl ScenarioRef {
    fn get(&self) -> Result<&str> {
        self.positional
            .as_deref()
            .or(self.flag.as_deref())
            .ok_or_else(|| Error::BadInput("missing scenario argument".into()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// List builtin scenarios, their states, and inequalities
    List {
        /// Emit JSON
        #[arg(long)]
        json: bool,
    },
    /// Print a scenario's structure; with --json, its file format
    Show {
        #[command(flatten)]
        scenario: ScenarioRef,
        /// Emit the scenario in its JSON file format
        #[arg(long)]
        json: bool,
        /// Cap long listings in text output
        #[arg(long, value_name = "N", default_value_t = 20)]
        limit: usize,
    },
    /// Close a realized scenario under complement and coarsening
    Saturate {
        #[command(flatten)]
        scenario: ScenarioRef,
        /// Emit the saturated scenario in its JSON file format
        #[arg(long)]
        json: bool,
        /// Element cap for the closure
        #[arg(long, value_name = "N")]
        limit: Option<usize>,
    },
    /// Decide whether deterministic assignments exist at all
    Ks {
        #[command(flatten)]
        scenario: ScenarioRef,
        #[arg(long)]
        json: bool,
    },
    /// Find a deterministic assignment and count them
    KsAssignment {
        #[command(flatten)]
        scenario: ScenarioRef,
        #[arg(long)]
        json: bool,
        /// Cap on assignments enumerated before refusing
        #[arg(long, value_name = "N")]
        limit: Option<usize>,
    },
    /// Enumerate all deterministic assignments
    Enumerate {
        #[command(flatten)]
        scenario: ScenarioRef,
        #[arg(long)]
        json: bool,
        /// Cap on assignments enumerated before refusing
        #[arg(long, value_name = "N")]
        limit: Option<usize>,
    },
    /// Full contextuality classification of a state
    Classify {
        #[command(flatten)]
        scenario: ScenarioRef,
        /// State: builtin state name or state JSON path
        #[arg(long, value_name = "NAME|PATH")]
        state: String,
        #[arg(long)]
        json: bool,
    },
    /// Noncontextual weight, decomposition, and dual certificate
    Fraction {
        #[command(flatten)]
        scenario: ScenarioRef,
        /// State: builtin state name or state JSON path
        #[arg(long, value_name = "NAME|PATH")]
        state: String,
        #[arg(long)]
        json: bool,
        /// Verdict tolerance on the noncontextual boundary
        #[arg(long, value_name = "EPS", default_value_t = 1e-7)]
        tolerance: f64,
    },
    /// Evaluate an inequality and its classical and algebraic bounds
    Ineq {
        #[command(flatten)]
        scenario: ScenarioRef,
        /// Inequality: builtin inequality name or JSON path
        #[arg(long, value_name = "NAME|PATH")]
        ineq: String,
        /// Optional state to evaluate the inequality on
        #[arg(long, value_name = "NAME|PATH")]
        state: Option<String>,
        #[arg(long)]
        json: bool,
        /// Verdict tolerance when comparing against the classical bound
        #[arg(long, value_name = "EPS", default_value_t = 1e-7)]
        tolerance: f64,
    },
    /// Render the contexts-by-outcomes probability grid of a state
    Table {
        #[command(flatten)]
        scenario: ScenarioRef,
        /// State: builtin state name or state JSON path
        #[arg(long, value_name = "NAME|PATH")]
        state: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the full acceptance suite
    Selfcheck {
        #[arg(long)]
        json: bool,
    },
}

/// Text styling, disabled for JSON output, non-terminals, and
/// CTXLAB_COLOR=0.
struct Style {
    bold: &'static str,
    green: &'static str,
    red: &'static str,
    reset: &'static str,
}

impl Style {
    fn detect() -> Style {
        let noncolor = std::env::var("CTXLAB_COLOR").is_ok_and(|v| v == "0")
            || !std::io::stdout().is_terminal();
        if noncolor {
            Style {
                bold: "",
                green: "",
                red: "",
                reset: "",
            }
        } else {
            Style {
                bold: "\x1b[1m",
                green: "\x1b[32m",
                red: "\x1b[31m",
                reset: "\x1b[0m",
            }
        }
    }
}

/// A scenario plus its catalog entry when it came from the catalog.
struct Loaded {
    scenario: Scenario,
    entry: Option<CatalogEntry>,
    reference: String,
}

fn load_scenario(arg: &str) -> Result<Loaded> {
    match catalog::builtin(arg) {
        Ok(entry) => Ok(Loaded {
            scenario: entry.scenario.clone(),
            entry: Some(entry),
            reference: arg.to_string(),
        }),
        Err(Error::UnknownBuiltin(_)) => {
            let path = Path::new(arg);
            if path.exists() {
                Ok(Loaded {
                    scenario: io::read_scenario(path)?,
                    entry: None,
                    reference: arg.to_string(),
                })
            } else {
                Err(Error::BadInput(format!(
                    "'{arg}' is neither a builtin scenario nor an existing file; \
                     run `ctxlab list` for builtins"
                )))
            }
        }
        Err(e) => Err(e),
    }
}

fn resolve_state(loaded: &Loaded, arg: &str) -> Result<GraphState> {
    let path = Path::new(arg);
    if path.exists() {
        let file = io::read_state(path)?;
        if let Some(declared) = &file.scenario {
            if declared != &loaded.reference {
                return Err(Error::BadInput(format!(
                    "state file names scenario '{declared}' but '{}' was given",
                    loaded.reference
                )));
            }
        }
        return match file.input {
            StateInput::Probs(map) => {
                let mut probs = vec![0.0; loaded.scenario.n_atoms()];
                for (label, value) in &map {
                    probs[loaded.scenario.index_of(label)?] = *value;
                }
                states::validate_state(&loaded.scenario, &probs)
            }
            StateInput::Density(rho) => states::induce(&loaded.scenario, &rho),
        };
    }
    match &loaded.entry {
        Some(entry) => entry.graph_state(arg),
        None => Err(Error::BadInput(format!(
            "'{arg}' is not a file, and a file-based scenario has no named states"
        ))),
    }
}

fn resolve_inequality(loaded: &Loaded, arg: &str) -> Result<InequalitySpec> {
    let path = Path::new(arg);
    if path.exists() {
        return io::read_inequality(path);
    }
    match &loaded.entry {
        Some(entry) => entry.inequality(arg).cloned(),
        None => Err(Error::BadInput(format!(
            "'{arg}' is not a file, and a file-based scenario has no named inequalities"
        ))),
    }
}

fn labels_of(s: &Scenario, atoms: &[usize]) -> Vec<String> {
    atoms.iter().map(|&v| s.label(v).to_string()).collect()
}

fn support_braces(s: &Scenario, atoms: &[usize]) -> String {
    format!("{{{}}}", labels_of(s, atoms).join(", "))
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json"));
}

/// Parses argv and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::List { json } => cmd_list(json),
        Command::Show {
            scenario,
            json,
            limit,
        } => cmd_show(scenario.get()?, json, limit),
        Command::Saturate {
            scenario,
            json,
            limit,
        } => cmd_saturate(scenario.get()?, json, limit),
        Command::Ks { scenario, json } => cmd_ks(scenario.get()?, json),
        Command::KsAssignment {
            scenario,
            json,
            limit,
        } => cmd_ks_assignment(scenario.get()?, json, limit),
        Command::Enumerate {
            scenario,
            json,
            limit,
        } => cmd_enumerate(scenario.get()?, json, limit),
        Command::Classify {
            scenario,
            state,
            json,
        } => cmd_classify(scenario.get()?, &state, json),
        Command::Fraction {
            scenario,
            state,
            json,
            tolerance,
        } => cmd_fraction(scenario.get()?, &state, json, tolerance),
        Command::Ineq {
            scenario,
            ineq,
            state,
            json,
            tolerance,
        } => cmd_ineq(scenario.get()?, &ineq, state.as_deref(), json, tolerance),
        Command::Table {
            scenario,
            state,
            json,
        } => cmd_table(scenario.get()?, &state, json),
        Command::Selfcheck { json } => cmd_selfcheck(json),
    }
}

fn cmd_list(json: bool) -> Result<i32> {
    let mut entries = Vec::new();
    for name in catalog::BUILTIN_NAMES {
        entries.push(catalog::builtin(name)?);
    }
    if json {
        let rows: Vec<serde_json::Value> = entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "atoms": e.scenario.n_atoms(),
                    "contexts": e.scenario.contexts().len(),
                    "realized": e.scenario.realization().is_some(),
                    "states": e.states.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                    "inequalities": e.inequalities.iter().map(|i| i.name().to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "builtins": rows,
            "parametric": ["cycle(n) for 3 <= n <= 1000"],
        }));
        return Ok(0);
    }
    let style = Style::detect();
    println!(
        "{}{:<17} {:>5} {:>8}  {:<28} inequalities{}",
        style.bold, "name", "atoms", "contexts", "states", style.reset
    );
    for e in &entries {
        let states: Vec<&str> = e.states.iter().map(|(n, _)| n.as_str()).collect();
        let ineqs: Vec<&str> = e.inequalities.iter().map(|i| i.name()).collect();
        println!(
            "{:<17} {:>5} {:>8}  {:<28} {}",
            e.name,
            e.scenario.n_atoms(),
            e.scenario.contexts().len(),
            states.join(", "),
            ineqs.join(", ")
        );
    }
    println!("{:<17} parametric edge-cover cycle, n in 3..=1000", "cycle(n)");
    Ok(0)
}

fn cmd_show(arg: &str, json: bool, limit: usize) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let s = &loaded.scenario;
    if json {
        print!("{}", io::scenario_to_json(s));
        return Ok(0);
    }
    let style = Style::detect();
    println!(
        "{}{}{}",
        style.bold,
        s.name().unwrap_or(arg),
        style.reset
    );
    match s.realization() {
        Some(real) => println!("realized in dimension {}", real.dim),
        None => println!("abstract (no realization)"),
    }
    println!(
        "{} atoms, {} edges, {} contexts, validity: {}",
        s.n_atoms(),
        s.graph().edges().len(),
        s.contexts().len(),
        match s.validity() {
            Validity::Valid => "valid".to_string(),
            Validity::Incomplete { uncovered } => format!(
                "incomplete ({} uncovered: {})",
                uncovered.len(),
                labels_of(s, uncovered).join(", ")
            ),
            Validity::Unchecked => "unchecked (abstract)".to_string(),
        }
    );
    let deficient = s.deficient_cliques();
    if !deficient.is_empty() {
        println!("{} exclusive cliques are not contexts", deficient.len());
    }
    println!("atoms: {}", s.labels().join(", "));
    println!("contexts:");
    for (i, ctx) in s.contexts().iter().enumerate() {
        if i == limit {
            println!("  ... {} more (raise --limit)", s.contexts().len() - limit);
            break;
        }
        println!("  {}", support_braces(s, ctx));
    }
    if let Some(entry) = &loaded.entry {
        if !entry.notes.is_empty() {
            println!("notes: {}", entry.notes);
        }
    }
    Ok(0)
}

fn cmd_saturate(arg: &str, json: bool, limit: Option<usize>) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let real = loaded.scenario.realization().ok_or_else(|| {
        Error::NoRealization("saturation closes a set of projectors".into())
    })?;
    let mut limits = ClosureLimits::default();
    if let Some(n) = limit {
        limits.max_elements = n;
    }
    let labels = loaded.scenario.labels().to_vec();
    let sat = crate::scenario::saturate(&real.projectors, Some(&labels), &limits)?;
    if json {
        print!("{}", io::scenario_to_json(&sat.scenario));
        return Ok(0);
    }
    println!(
        "closure: {} elements in {} rounds",
        sat.n_elements, sat.rounds
    );
    println!(
        "atoms: {} -> {}",
        loaded.scenario.n_atoms(),
        sat.scenario.n_atoms()
    );
    println!(
        "contexts: {} -> {}, validity: {}",
        loaded.scenario.contexts().len(),
        sat.scenario.contexts().len(),
        match sat.scenario.validity() {
            Validity::Valid => "valid",
            Validity::Incomplete { .. } => "incomplete",
            Validity::Unchecked => "unchecked",
        }
    );
    Ok(0)
}

fn cmd_ks(arg: &str, json: bool) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let search = ks_assignment_search(&loaded.scenario, Some(1))?;
    let ks = search.assignments.is_empty() && !search.truncated;
    if json {
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "ks_contextual": ks,
            "exhaustive": !search.truncated,
            "assignments_found": search.assignments.len(),
        }));
        return Ok(0);
    }
    if ks {
        println!("KS-contextual: yes (exhaustive, 0 assignments)");
    } else {
        println!("KS-contextual: no (assignment exists)");
    }
    Ok(0)
}

fn cmd_ks_assignment(arg: &str, json: bool, limit: Option<usize>) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let s = &loaded.scenario;
    let search = ks_assignment_search(s, limit)?;
    if json {
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "found": !search.assignments.is_empty(),
            "assignment": search.assignments.first().map(|z| labels_of(s, z.support())),
            "count": search.assignments.len(),
            "truncated": search.truncated,
        }));
        return Ok(i32::from(search.truncated));
    }
    match search.assignments.first() {
        Some(z) => {
            println!("assignment: {}", support_braces(s, z.support()));
            if search.truncated {
                println!(
                    "at least {} assignments (truncated at --limit)",
                    search.assignments.len()
                );
            } else {
                println!("{} assignments in total (exhaustive)", search.assignments.len());
            }
        }
        None => println!("no assignment exists (exhaustive)"),
    }
    Ok(i32::from(search.truncated))
}

fn cmd_enumerate(arg: &str, json: bool, limit: Option<usize>) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let s = &loaded.scenario;
    let found = enumerate_01(s, limit);
    if json {
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "count": found.states.len(),
            "truncated": found.truncated,
            "states": found
                .states
                .iter()
                .map(|z| labels_of(s, z.support()))
                .collect::<Vec<_>>(),
        }));
        return Ok(i32::from(found.truncated));
    }
    for z in &found.states {
        println!("{}", support_braces(s, z.support()));
    }
    if found.truncated {
        println!(
            "{} deterministic states (truncated at --limit)",
            found.states.len()
        );
    } else {
        println!("{} deterministic states (exhaustive)", found.states.len());
    }
    Ok(i32::from(found.truncated))
}

fn cmd_classify(arg: &str, state_arg: &str, json: bool) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let s = &loaded.scenario;
    let p = resolve_state(&loaded, state_arg)?;
    let r = classify::classify(s, &p)?;
    if json {
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "scenario": loaded.reference,
            "state": state_arg,
            "noncontextual": r.noncontextual,
            "contextual": r.contextual,
            "logically_contextual": r.logically_contextual,
            "strongly_contextual": r.strongly_contextual,
            "maximally_contextual": r.maximally_contextual,
            "w_nc": r.w_nc,
            "contextual_fraction": r.contextual_fraction,
            "logical_witness": r.logical_witness.map(|v| s.label(v).to_string()),
            "margins": {
                "noncontextual": r.margins.noncontextual,
                "maximal": r.margins.maximal,
            },
        }));
        return Ok(0);
    }
    let style = Style::detect();
    let flag = |b: bool| if b { "yes" } else { "no" };
    println!(
        "{}{} / {}{}",
        style.bold, loaded.reference, state_arg, style.reset
    );
    println!("noncontextual:          {}", flag(r.noncontextual));
    println!("contextual:             {}", flag(r.contextual));
    println!("logically contextual:   {}", flag(r.logically_contextual));
    println!("strongly contextual:    {}", flag(r.strongly_contextual));
    println!("maximally contextual:   {}", flag(r.maximally_contextual));
    println!("w_nc = {}", format_sig9(r.w_nc));
    println!("contextual fraction = {}", format_sig9(r.contextual_fraction));
    if let Some(v) = r.logical_witness {
        println!("logical witness atom: {}", s.label(v));
    }
    if let Some(z) = &r.strong_counterexample {
        println!(
            "deterministic state inside support: {}",
            support_braces(s, z.support())
        );
    }
    println!(
        "margins: noncontextual {}, maximal {}",
        format_sig9(r.margins.noncontextual),
        format_sig9(r.margins.maximal)
    );
    Ok(0)
}

fn cmd_fraction(arg: &str, state_arg: &str, json: bool, tolerance: f64) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let s = &loaded.scenario;
    let p = resolve_state(&loaded, state_arg)?;
    let f = classify::noncontextual_fraction(s, &p)?;
    let noncontextual = f.w_nc >= 1.0 - tolerance;
    if json {
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "scenario": loaded.reference,
            "state": state_arg,
            "w_nc": f.w_nc,
            "contextual_fraction": f.contextual_fraction,
            "noncontextual": noncontextual,
            "decomposition": f
                .decomposition
                .iter()
                .map(|(z, w)| json!({"weight": w, "support": labels_of(s, z.support())}))
                .collect::<Vec<_>>(),
            "residual": f.residual.as_ref().map(|r| r.probs().to_vec()),
            "dual_atoms": s
                .labels()
                .iter()
                .zip(&f.dual_certificate)
                .filter(|(_, &y)| y.abs() > 1e-12)
                .map(|(l, &y)| json!({"atom": l, "price": y}))
                .collect::<Vec<_>>(),
            "dual_cliques": f
                .dual_exclusivity
                .iter()
                .filter(|(_, y)| y.abs() > 1e-12)
                .map(|(k, y)| json!({"atoms": labels_of(s, k), "price": y}))
                .collect::<Vec<_>>(),
        }));
        return Ok(0);
    }
    println!("w_nc = {}", format_sig9(f.w_nc));
    println!("contextual fraction = {}", format_sig9(f.contextual_fraction));
    println!(
        "noncontextual within tolerance: {}",
        if noncontextual { "yes" } else { "no" }
    );
    if f.decomposition.is_empty() {
        println!("decomposition: empty (no deterministic state fits under the state)");
    } else {
        println!("decomposition:");
        for (z, w) in &f.decomposition {
            println!("  {} * {}", format_sig9(*w), support_braces(s, z.support()));
        }
    }
    match &f.residual {
        Some(_) => println!("residual: present (weight {})", format_sig9(f.contextual_fraction)),
        None => println!("residual: none (state is noncontextual)"),
    }
    let dual: Vec<String> = s
        .labels()
        .iter()
        .zip(&f.dual_certificate)
        .filter(|(_, &y)| y.abs() > 1e-12)
        .map(|(l, &y)| format!("{l}: {}", format_sig9(y)))
        .collect();
    if !dual.is_empty() {
        println!("dual certificate (atom prices): {}", dual.join(", "));
    }
    Ok(0)
}

fn bound_to_json(b: &Bound) -> serde_json::Value {
    match b {
        Bound::Value(v) => json!(v),
        Bound::MinusInfinity => serde_json::Value::Null,
    }
}

fn cmd_ineq(
    arg: &str,
    ineq_arg: &str,
    state_arg: Option<&str>,
    json: bool,
    tolerance: f64,
) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let s = &loaded.scenario;
    let ineq = resolve_inequality(&loaded, ineq_arg)?;
    let ncb = classify::nc_bound(s, &ineq)?;
    let alg = classify::algebraic_bound(s, &ineq)?;
    let value = match state_arg {
        Some(sa) => Some(classify::eval_inequality(
            s,
            &ineq,
            &resolve_state(&loaded, sa)?,
        )?),
        None => None,
    };
    let violates = match (value, &ncb) {
        (Some(v), Bound::Value(b)) => Some(v > b + tolerance),
        _ => None,
    };
    if json {
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "scenario": loaded.reference,
            "inequality": ineq.name(),
            "state": state_arg,
            "value": value,
            "nc_bound": bound_to_json(&ncb),
            "algebraic_bound": bound_to_json(&alg),
            "violates_nc_bound": violates,
        }));
        return Ok(0);
    }
    if let Some(v) = value {
        println!("S = {}", format_sig9(v));
    }
    match ncb {
        Bound::Value(b) => println!("NC bound = {}", format_sig9(b)),
        Bound::MinusInfinity => {
            println!("NC bound = none (no deterministic states)")
        }
    }
    match alg {
        Bound::Value(b) => println!("algebraic bound = {}", format_sig9(b)),
        Bound::MinusInfinity => println!("algebraic bound = none (infeasible)"),
    }
    if let Some(v) = violates {
        println!("violates NC bound: {}", if v { "yes" } else { "no" });
    }
    Ok(0)
}

/// Rows of the probability grid: measurement label, outcome headers, and
/// the probabilities in context order.
fn table_rows(s: &Scenario, p: &GraphState) -> Vec<(String, Vec<String>, Vec<f64>)> {
    if let Some(hint) = s.measurement_hint() {
        // Product measurements: split labels into outcome signs and
        // measurement word.
        return hint
            .iter()
            .map(|&ci| {
                let ctx = &s.contexts()[ci];
                let mut word = String::new();
                let outcomes: Vec<String> = ctx
                    .iter()
                    .map(|&v| {
                        let label = s.label(v);
                        match label.split_once('|') {
                            Some((signs, w)) => {
                                word = w.to_string();
                                signs.to_string()
                            }
                            None => label.to_string(),
                        }
                    })
                    .collect();
                let probs = ctx.iter().map(|&v| p.prob(v)).collect();
                (word, outcomes, probs)
            })
            .collect();
    }
    s.contexts()
        .iter()
        .enumerate()
        .map(|(i, ctx)| {
            (
                format!("C{i}"),
                labels_of(s, ctx),
                ctx.iter().map(|&v| p.prob(v)).collect(),
            )
        })
        .collect()
}

fn cmd_table(arg: &str, state_arg: &str, json: bool) -> Result<i32> {
    let loaded = load_scenario(arg)?;
    let s = &loaded.scenario;
    let p = resolve_state(&loaded, state_arg)?;
    let rows = table_rows(s, &p);
    if json {
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "scenario": loaded.reference,
            "state": state_arg,
            "rows": rows
                .iter()
                .map(|(m, outcomes, probs)| json!({
                    "measurement": m,
                    "outcomes": outcomes,
                    "probs": probs,
                }))
                .collect::<Vec<_>>(),
        }));
        return Ok(0);
    }
    let style = Style::detect();
    let uniform_header = s.measurement_hint().is_some()
        && rows.windows(2).all(|w| w[0].1 == w[1].1);
    let name_width = rows
        .iter()
        .map(|(m, _, _)| m.len())
        .max()
        .unwrap_or(1)
        .max(4);
    if uniform_header {
        let headers = &rows[0].1;
        let widths: Vec<usize> = headers
            .iter()
            .enumerate()
            .map(|(j, h)| {
                rows.iter()
                    .map(|(_, _, probs)| format_sig9(probs[j]).len())
                    .max()
                    .unwrap_or(0)
                    .max(h.len())
            })
            .collect();
        print!("{}{:<name_width$}", style.bold, "");
        for (h, w) in headers.iter().zip(&widths) {
            print!("  {h:>w$}");
        }
        println!("{}", style.reset);
        for (m, _, probs) in &rows {
            print!("{m:<name_width$}");
            for (v, w) in probs.iter().zip(&widths) {
                print!("  {:>w$}", format_sig9(*v));
            }
            println!();
        }
    } else {
        for (m, outcomes, probs) in &rows {
            let cells: Vec<String> = outcomes
                .iter()
                .zip(probs)
                .map(|(o, v)| format!("{o}={}", format_sig9(*v)))
                .collect();
            println!("{m:<name_width$}  {}", cells.join("  "));
        }
    }
    Ok(0)
}

fn cmd_selfcheck(json: bool) -> Result<i32> {
    if json {
        let results = crate::selfcheck::run_all(|_| {});
        let failed = results.iter().filter(|r| !r.pass).count();
        print_json(&json!({
            "format_version": io::FORMAT_VERSION,
            "passed": results.len() - failed,
            "failed": failed,
            "checks": results
                .iter()
                .map(|r| json!({
                    "criterion": r.criterion,
                    "name": r.name,
                    "pass": r.pass,
                    "detail": r.detail,
                }))
                .collect::<Vec<_>>(),
        }));
        return Ok(i32::from(failed > 0));
    }
    let style = Style::detect();
    let results = crate::selfcheck::run_all(|r| {
        let (color, tag) = if r.pass {
            (style.green, "PASS")
        } else {
            (style.red, "FAIL")
        };
        println!(
            "[{color}{tag}{}] C{} {} ({})",
            style.reset, r.criterion, r.name, r.detail
        );
    });
    let failed = results.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        println!("{}all {} checks passed{}", style.green, results.len(), style.reset);
        Ok(0)
    } else {
        println!(
            "{}{failed} of {} checks failed{}",
            style.red,
            results.len(),
            style.reset
        );
        Ok(1)
    }
}
