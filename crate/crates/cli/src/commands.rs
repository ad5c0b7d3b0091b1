//! Subcommands. Each returns the process exit status and writes its report
//! to the given streams.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ftl_core::rewrite::{expansion_size, first_match, lower_to_adequate, rule_by_name, try_rewrite_once, LowerError, RuleEnv};
use ftl_core::{evaluate, format, parse, AvoidingFunction, EvalContext, FinitePolicy, Formula, Interpretation, SyntaxError, Trace};

use crate::eta_spec::parse_eta;
use crate::suites::Suite;
use crate::{demo, trace_file, DEFAULT_BUDGET};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_REWRITE: i32 = 4;
pub const EXIT_CHECK: i32 = 5;

pub const DEFAULT_ETA: &str = "gauss:20";

#[derive(Debug, Parser)]
#[command(name = "ftl", version, about = "Fuzzy-time temporal logic: evaluate, rewrite, check")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truth degree of a formula on a trace.
    Eval(EvalArgs),
    /// Apply one rule, or lower into the adequate set of an interpretation.
    Rewrite(RewriteArgs),
    /// Run the randomized property suites.
    Check(CheckArgs),
    /// Write a synthetic smart-grid trace.
    GenDemo(GenDemoArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    #[default]
    Strict,
    PadZero,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub formula: String,
    /// JSON or CSV trace file.
    #[arg(long)]
    pub trace: PathBuf,
    /// zadeh, godel, lukasiewicz or product.
    #[arg(long, default_value = "zadeh")]
    pub interp: Interpretation,
    /// `table:v0,v1,...`, `gauss:K` or `crisp`.
    #[arg(long, default_value = DEFAULT_ETA)]
    pub eta: String,
    #[arg(long, default_value_t = 0)]
    pub at: usize,
    #[arg(long, value_enum, default_value_t)]
    pub finite_policy: PolicyArg,
    #[arg(long, value_enum, default_value_t)]
    pub output: OutputArg,
}

#[derive(Debug, Args)]
pub struct RewriteArgs {
    #[arg(long)]
    pub formula: String,
    #[arg(long, default_value = "zadeh")]
    pub interp: Interpretation,
    /// `adequate` or `rule:<name>`.
    #[arg(long, default_value = "adequate")]
    pub target: String,
    /// Largest formula size, in nodes, that may be built.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, default_value = DEFAULT_ETA)]
    pub eta: String,
    /// Trace on which both forms are evaluated.
    #[arg(long)]
    pub verify: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub at: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub cases: u64,
    /// algebra, chains, oracle, crisp, rewrites or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

#[derive(Debug, Args)]
pub struct GenDemoArgs {
    #[arg(long, default_value_t = 1440)]
    pub minutes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; `.csv` selects CSV, anything else JSON.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let res = match &cli.command {
        Command::Eval(a) => eval(a, out, err),
        Command::Rewrite(a) => rewrite(a, out, err),
        Command::Check(a) => check(a, out, err),
        Command::GenDemo(a) => gen_demo(a, out, err),
    };
    res.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_INPUT
    })
}

/// Message with a caret line under the offending span.
pub fn render_syntax_error(input: &str, e: &SyntaxError) -> String {
    let start = input[..e.span.start.min(input.len())].chars().count();
    let width = input
        .get(e.span.start..e.span.end)
        .map_or(1, |s| s.chars().count().max(1));
    format!("{e}\n  {input}\n  {}{}", " ".repeat(start), "^".repeat(width))
}

fn parse_formula(text: &str, err: &mut dyn Write) -> std::io::Result<Result<Formula, i32>> {
    Ok(match parse(text) {
        Ok(f) => Ok(f),
        Err(e) => {
            writeln!(err, "{}", render_syntax_error(text, &e))?;
            Err(EXIT_PARSE)
        }
    })
}

fn load_eta(spec: &str, err: &mut dyn Write) -> std::io::Result<Result<AvoidingFunction, i32>> {
    Ok(match parse_eta(spec) {
        Ok(eta) => Ok(eta),
        Err(e) => {
            writeln!(err, "invalid eta `{spec}`: {e}")?;
            Err(EXIT_INPUT)
        }
    })
}

fn load_trace(path: &std::path::Path, err: &mut dyn Write) -> std::io::Result<Result<Trace, i32>> {
    Ok(match trace_file::read(path) {
        Ok(t) => Ok(t),
        Err(e) => {
            writeln!(err, "{e}")?;
            Err(EXIT_INPUT)
        }
    })
}

macro_rules! tri {
    ($e:expr) => {
        match $e? {
            Ok(v) => v,
            Err(code) => return Ok(code),
        }
    };
}

fn eval(a: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let f = tri!(parse_formula(&a.formula, err));
    let trace = tri!(load_trace(&a.trace, err));
    let eta = tri!(load_eta(&a.eta, err));
    let policy = match a.finite_policy {
        PolicyArg::Strict => FinitePolicy::Strict,
        PolicyArg::PadZero => FinitePolicy::PadZero,
    };
    let ctx = EvalContext::new(&trace, a.interp, &eta).with_policy(policy);
    let r = match evaluate(&ctx, &f, a.at) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "evaluation failed: {e}")?;
            return Ok(EXIT_EVAL);
        }
    };
    let value = r.value.value();
    match a.output {
        OutputArg::Text => writeln!(out, "{value} ({})", r.exactness.name())?,
        OutputArg::Json => {
            let v = serde_json::json!({
                "exactness": r.exactness.name(),
                "formula": format(&f),
                "position": a.at,
            });
            let num = format!("{value:.16e}");
            let mut s = v.to_string();
            s.insert_str(1, &format!("\"value\":{num},"));
            writeln!(out, "{s}")?;
        }
    }
    Ok(0)
}

fn rewrite(a: &RewriteArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let f = tri!(parse_formula(&a.formula, err));
    let eta = tri!(load_eta(&a.eta, err));
    let env = RuleEnv { n_eta: eta.n_eta() };

    let g = if a.target == "adequate" {
        match lower_to_adequate(&f, a.interp, env.n_eta, a.budget) {
            Ok(g) => g,
            Err(e) => {
                writeln!(err, "{e}")?;
                if let LowerError::BudgetExceeded { .. } = e {
                    writeln!(err, "no adequate form within the budget")?;
                }
                writeln!(out, "{}", format(e.partial()))?;
                return Ok(EXIT_REWRITE);
            }
        }
    } else if let Some(name) = a.target.strip_prefix("rule:") {
        let Some(rule) = rule_by_name(name) else {
            writeln!(err, "unknown rule `{name}`")?;
            return Ok(EXIT_INPUT);
        };
        if !rule.applies_to(a.interp) {
            writeln!(err, "rule `{name}` is not an equivalence under {}", a.interp)?;
            writeln!(out, "{}", format(&f))?;
            return Ok(EXIT_REWRITE);
        }
        let Some(site) = first_match(&f, rule, &env) else {
            writeln!(err, "rule `{name}` matches nowhere")?;
            writeln!(out, "{}", format(&f))?;
            return Ok(0);
        };
        let planned = expansion_size(site, &env)
            .map(|n| (f.size() - site.size()) as u128 + n)
            .unwrap_or(0);
        if planned > a.budget as u128 {
            writeln!(err, "size budget of {} nodes exceeded", a.budget)?;
            writeln!(out, "{}", format(&f))?;
            return Ok(EXIT_REWRITE);
        }
        let g = try_rewrite_once(&f, rule, &env).expect("first_match found a site");
        if g.size() > a.budget {
            writeln!(err, "size budget of {} nodes exceeded", a.budget)?;
            writeln!(out, "{}", format(&f))?;
            return Ok(EXIT_REWRITE);
        }
        g
    } else {
        writeln!(err, "target must be `adequate` or `rule:<name>`, got `{}`", a.target)?;
        return Ok(EXIT_INPUT);
    };
    writeln!(out, "{}", format(&g))?;

    if let Some(path) = &a.verify {
        let trace = tri!(load_trace(path, err));
        let ctx = EvalContext::new(&trace, a.interp, &eta);
        let (before, after) = match (evaluate(&ctx, &f, a.at), evaluate(&ctx, &g, a.at)) {
            (Ok(x), Ok(y)) => (x.value.value(), y.value.value()),
            (Err(e), _) | (_, Err(e)) => {
                writeln!(err, "evaluation failed: {e}")?;
                return Ok(EXIT_EVAL);
            }
        };
        writeln!(out, "before: {before}")?;
        writeln!(out, "after: {after}")?;
        writeln!(out, "difference: {}", (before - after).abs())?;
    }
    Ok(0)
}

fn check(a: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let Some(suites) = Suite::from_name(&a.suite) else {
        writeln!(err, "unknown suite `{}`", a.suite)?;
        return Ok(EXIT_INPUT);
    };
    let mut failed = false;
    for s in suites {
        let report = s.run(a.seed, a.cases);
        write!(out, "{report}")?;
        failed |= !report.passed();
    }
    Ok(if failed { EXIT_CHECK } else { 0 })
}

fn gen_demo(a: &GenDemoArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let trace = demo::generate(a.minutes, a.seed);
    if let Err(e) = trace_file::write(&a.out, &trace) {
        writeln!(err, "cannot write {}: {e}", a.out.display())?;
        return Ok(EXIT_INPUT);
    }
    writeln!(out, "wrote {} states to {}", trace.len(), a.out.display())?;
    Ok(0)
}
