//! The `fairsplit` command line.
//!
//! Exit codes: 0 success, 2 parse or argument error, 3 rule/kind or
//! closed-form mismatch, 4 Fair Share violation, 5 solver or numerical
//! failure.

mod problem_file;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use problem_file::ProblemFile;
pub use render::{fmt_g, fmt_sig, OutputFormat, Report, Table};

use crate::asymptotics::{
    expected_extreme, lemma2_bounds, monte_carlo_pi, pi_bh_limit_bad, pi_pro_limit_bad,
    pi_pro_limit_good, pi_th_limit_good, pi_two_agent_exact, Distribution1D, Extreme, Population,
};
use crate::error::Error;
use crate::fairness::verify_fair_share;
use crate::model::{ObjectKind, ValueProfile};
use crate::opt::{optimal_fair_rule, unconstrained_optimum};
use crate::rules::{allocate, RuleId, Theta};
use crate::worstcase::{cr_closed_form, cr_search, hard_instance_bad, hard_instance_good, RatioReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_UNFAIR: u8 = 4;
pub const EXIT_SOLVER: u8 = 5;

/// Relative gap above which `worstcase --mode both` reports a mismatch.
pub const AGREEMENT_TOL: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "fairsplit", version, about = "Fair division of a single random good or bad")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    Es,
    Ut,
    Pro,
    Th,
    Bh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Good,
    Bad,
}

impl From<KindArg> for ObjectKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Good => ObjectKind::Good,
            KindArg::Bad => ObjectKind::Bad,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RuleArgs {
    #[arg(long, value_enum)]
    pub rule: RuleName,
    /// Top-Heavy parameter in (0,1] (default 1); for `bh`, selects the
    /// Bottom-Heavy family member in [0,1].
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
}

impl RuleArgs {
    pub fn resolve(&self) -> Result<RuleId, Error> {
        match (self.rule, self.theta) {
            (RuleName::Th, t) => Ok(RuleId::TopHeavy(Theta::new(t.unwrap_or(1.0))?)),
            (RuleName::Bh, None) => Ok(RuleId::BottomHeavy),
            (RuleName::Bh, Some(t)) if (0.0..=1.0).contains(&t) => Ok(RuleId::BottomHeavyTheta(t)),
            (RuleName::Bh, Some(t)) => Err(Error::InvalidTheta {
                value: t,
                range: "[0,1]",
            }),
            (_, Some(_)) => Err(Error::InvalidArgument("--theta only applies to th and bh".into())),
            (RuleName::Es, None) => Ok(RuleId::EqualSplit),
            (RuleName::Ut, None) => Ok(RuleId::Utilitarian),
            (RuleName::Pro, None) => Ok(RuleId::Proportional),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Search,
    ClosedForm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HardKind {
    Good,
    Bad,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Divide one realized profile.
    Allocate {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Comma-separated nonnegative values.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        values: Vec<f64>,
    },
    /// Expected values and Fair Share verdicts of a rule on a problem file.
    Evaluate {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// The optimal fair prior-dependent rule of a problem file.
    Optimal {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Worst-case efficiency ratio over all priors.
    Worstcase {
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        restarts: usize,
    },
    /// Monte Carlo efficiency ratio under an i.i.d. prior.
    Simulate {
        /// `uniform:a,b`, `exp`, `poly32`, `power:alpha` or `atom:mass,loc,...`.
        #[arg(long)]
        dist: String,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Leading-order efficiency formulas under an i.i.d. prior.
    Limits {
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        theta: f64,
        /// Number of agents; omitted means the n → ∞ limit.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Print a problem file: a built-in hard instance or a re-emitted file.
    Instance {
        #[arg(long, value_enum, conflicts_with = "file", required_unless_present = "file")]
        hard: Option<HardKind>,
        #[arg(long, requires = "hard")]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// A failed command: exit code and message.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RuleKindMismatch { .. } => EXIT_MISMATCH,
            Error::Infeasible
            | Error::Unbounded
            | Error::IterationLimit(_)
            | Error::MalformedProgram(_)
            | Error::DegenerateDenominator
            | Error::QuadratureNonConvergence { .. }
            | Error::NoFiniteT
            | Error::HarmonicMomentInfinite
            | Error::ZeroDeviation => EXIT_SOLVER,
            _ => EXIT_PARSE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok((report, code, note)) => Outcome {
            code,
            stdout: report.render(cli.format),
            stderr: note.map(|n| format!("{n}\n")).unwrap_or_default(),
        },
        Err(e) => Outcome {
            code: e.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message),
        },
    }
}

pub fn main() -> ExitCode {
    let out = run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}

type Executed = (Report, u8, Option<String>);

fn execute(cmd: &Command) -> Result<Executed, CliError> {
    match cmd {
        Command::Allocate { rule, kind, values } => cmd_allocate(rule, (*kind).into(), values),
        Command::Evaluate { file, rule, tol } => cmd_evaluate(file, rule, *tol),
        Command::Optimal { file, tol } => cmd_optimal(file, *tol),
        Command::Worstcase {
            rule,
            n,
            kind,
            mode,
            seed,
            restarts,
        } => cmd_worstcase(rule, *n, (*kind).into(), *mode, *seed, *restarts),
        Command::Simulate {
            dist,
            rule,
            kind,
            n,
            samples,
            seed,
        } => cmd_simulate(dist, rule, (*kind).into(), *n, *samples, *seed),
        Command::Limits { dist, theta, n } => cmd_limits(dist, *theta, *n),
        Command::Instance { hard, n, m, file } => cmd_instance(*hard, *n, *m, file.as_deref()),
    }
}

fn read_problem(path: &std::path::Path) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(ProblemFile::parse(&text)?)
}

fn g(x: f64) -> String {
    fmt_g(x)
}

fn kv(title: Option<&str>, pairs: Vec<(&str, String)>) -> Table {
    let mut t = Table::new(title, &["key", "value"]);
    for (k, v) in pairs {
        t.row(vec![k.to_string(), v]);
    }
    t
}

fn cmd_allocate(rule: &RuleArgs, kind: ObjectKind, values: &[f64]) -> Result<Executed, CliError> {
    let rule = rule.resolve()?;
    let x = ValueProfile::new(values.to_vec())?;
    let a = allocate(rule, &x, kind)?;
    let shares: Vec<String> = a.shares().iter().map(|&s| g(s)).collect();
    let mut t = Table::new(None, &["agent", "value", "share"]);
    for (i, (v, s)) in values.iter().zip(&shares).enumerate() {
        t.row(vec![(i + 1).to_string(), g(*v), s.clone()]);
    }
    let report = Report {
        tables: vec![t],
        json: json!({
            "rule": rule.to_string(),
            "kind": kind,
            "values": values,
            "shares": a.shares(),
        }),
        plain: Some(shares.join(" ")),
    };
    Ok((report, EXIT_OK, None))
}

fn cmd_evaluate(path: &std::path::Path, rule: &RuleArgs, tol: f64) -> Result<Executed, CliError> {
    let rule = rule.resolve()?;
    let file = read_problem(path)?;
    let p = file.to_problem()?;
    let report = verify_fair_share(&p, rule, tol)?;
    let scale = p.common_mean();
    let n = p.n();
    let mut header = vec!["agent", "normalized", "margin", "fs"];
    if scale.is_some() {
        header.insert(2, "absolute");
    }
    let mut t = Table::new(Some(&format!("rule {rule}, {}", p.kind())), &header);
    for i in 0..n {
        let mut row = vec![file.label(i), g(report.per_agent[i])];
        if let Some(m) = scale {
            row.push(g(report.per_agent[i] * m));
        }
        row.push(g(report.fs_margin[i]));
        row.push(if report.fs_ok[i] { "ok" } else { "violated" }.into());
        t.row(row);
    }
    let violators: Vec<String> = report.violations().into_iter().map(|i| file.label(i)).collect();
    let verdict = if violators.is_empty() {
        "OK".to_string()
    } else {
        format!("VIOLATED (agent {})", violators.join(", "))
    };
    let mut summary = vec![("social value (normalized)", g(report.social_value))];
    if let Some(m) = scale {
        summary.push(("social value (absolute)", g(report.social_value * m)));
    }
    summary.push(("fair share", verdict.clone()));
    let json = json!({
        "rule": rule.to_string(),
        "kind": p.kind(),
        "agents": (0..n).map(|i| file.label(i)).collect::<Vec<_>>(),
        "normalized": report.per_agent,
        "absolute": scale.map(|m| report.per_agent.iter().map(|v| v * m).collect::<Vec<_>>()),
        "social_value": report.social_value,
        "social_value_absolute": scale.map(|m| report.social_value * m),
        "fs_margin": report.fs_margin,
        "fs_ok": report.fs_ok,
        "fair": report.fair(),
    });
    let code = if report.fair() { EXIT_OK } else { EXIT_UNFAIR };
    let note = (!report.fair()).then(|| format!("fair share {verdict}"));
    Ok((
        Report {
            tables: vec![t, kv(None, summary)],
            json,
            plain: None,
        },
        code,
        note,
    ))
}

fn cmd_optimal(path: &std::path::Path, tol: f64) -> Result<Executed, CliError> {
    let file = read_problem(path)?;
    let p = file.to_problem()?;
    let (rule, value) = optimal_fair_rule(&p)?;
    let n = p.n();
    let labels: Vec<String> = (0..n).map(|i| file.label(i)).collect();
    let mut header: Vec<String> = vec!["state".into(), "prob".into()];
    header.extend(labels.iter().map(|l| format!("value {l}")));
    header.extend(labels.iter().map(|l| format!("share {l}")));
    let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut shares = Table::new(Some("statewise shares"), &hdr);
    for (k, (s, a)) in p.states().iter().zip(&rule.allocations).enumerate() {
        let mut row = vec![(k + 1).to_string(), g(s.prob)];
        row.extend(s.values.iter().map(|&v| g(v)));
        row.extend(a.shares().iter().map(|&v| g(v)));
        shares.row(row);
    }
    let wr = rule.welfare_report(&p, tol);
    let scale = p.common_mean();
    let mut agents = Table::new(Some("agents"), &["agent", "normalized", "absolute", "margin", "fs"]);
    for i in 0..n {
        agents.row(vec![
            labels[i].clone(),
            g(wr.per_agent[i]),
            scale.map_or("-".into(), |m| g(wr.per_agent[i] * m)),
            g(wr.fs_margin[i]),
            if wr.fs_ok[i] { "ok" } else { "violated" }.into(),
        ]);
    }
    let unconstrained = unconstrained_optimum(&p);
    let mut summary = vec![("objective (normalized)", g(value))];
    if let Some(m) = scale {
        summary.push(("objective (absolute)", g(value * m)));
    }
    summary.push(("unconstrained optimum", g(unconstrained)));
    let json = json!({
        "kind": p.kind(),
        "agents": labels,
        "shares": rule.allocations.iter().map(|a| a.shares().to_vec()).collect::<Vec<_>>(),
        "objective": value,
        "objective_absolute": scale.map(|m| value * m),
        "unconstrained_optimum": unconstrained,
        "normalized": wr.per_agent,
        "fs_margin": wr.fs_margin,
    });
    Ok((
        Report {
            tables: vec![shares, agents, kv(None, summary)],
            json,
            plain: None,
        },
        EXIT_OK,
        None,
    ))
}

fn ratio_row(label: &str, r: &RatioReport) -> Vec<String> {
    let witness = r
        .witness_profile()
        .map(|x| x.values().iter().map(|&v| fmt_sig(v, 6)).collect::<Vec<_>>().join(" "))
        .unwrap_or_else(|| "-".into());
    let bounds = r.bounds.map_or("-".into(), |(lo, hi)| format!("[{}, {}]", g(lo), g(hi)));
    vec![label.into(), g(r.value), witness, bounds]
}

fn cmd_worstcase(
    rule: &RuleArgs,
    n: usize,
    kind: ObjectKind,
    mode: Mode,
    seed: u64,
    restarts: usize,
) -> Result<Executed, CliError> {
    let rule = rule.resolve()?;
    if n < 2 {
        return Err(Error::TooFewAgents(n).into());
    }
    let closed = match mode {
        Mode::Search => None,
        _ => cr_closed_form(rule, n, kind)?,
    };
    if mode == Mode::ClosedForm && closed.is_none() {
        return Err(CliError {
            code: EXIT_MISMATCH,
            message: format!("no closed form for {rule} with a {kind}"),
        });
    }
    let search = match mode {
        Mode::ClosedForm => None,
        _ => Some(cr_search(rule, n, kind, restarts, seed)?),
    };
    let mut t = Table::new(Some(&format!("rule {rule}, {kind}, n = {n}")), &["method", "value", "witness", "bounds"]);
    if let Some(c) = &closed {
        t.row(ratio_row("closed-form", c));
    }
    if let Some(s) = &search {
        t.row(ratio_row("search", s));
    }
    let mut code = EXIT_OK;
    let mut note = None;
    let mut delta = None;
    if let (Some(c), Some(s)) = (&closed, &search) {
        let d = (s.value - c.value).abs() / c.value.abs().max(1.0);
        delta = Some(d);
        let agree = match c.bounds {
            Some((lo, hi)) => s.value >= lo - 1e-6 && s.value <= hi + 1e-6,
            None => d <= AGREEMENT_TOL,
        };
        t.row(vec!["delta".into(), g(d), "-".into(), "-".into()]);
        if !agree {
            code = EXIT_MISMATCH;
            note = Some(format!("search {} disagrees with closed form {}", g(s.value), g(c.value)));
        }
    }
    let json = json!({
        "rule": rule.to_string(),
        "kind": kind,
        "n": n,
        "closed_form": closed,
        "search": search,
        "delta": delta,
        "seed": seed,
        "restarts": restarts,
    });
    Ok((
        Report {
            tables: vec![t],
            json,
            plain: None,
        },
        code,
        note,
    ))
}

/// The matching leading-order formula at `n`, when there is one.
fn matching_limit(d: &Distribution1D, rule: RuleId, kind: ObjectKind, n: usize) -> Option<(String, f64)> {
    let v = match (rule, kind) {
        (RuleId::TopHeavy(t), ObjectKind::Good) => pi_th_limit_good(d, t, n),
        (RuleId::Proportional, ObjectKind::Good) => pi_pro_limit_good(d, n),
        (RuleId::BottomHeavy, ObjectKind::Bad) => pi_bh_limit_bad(d, n),
        (RuleId::Proportional, ObjectKind::Bad) => pi_pro_limit_bad(d, n),
        (RuleId::EqualSplit, ObjectKind::Good) => expected_extreme(d, n, Extreme::Max),
        (RuleId::EqualSplit, ObjectKind::Bad) => expected_extreme(d, n, Extreme::Min).map(|m| 1.0 / m),
        _ => return None,
    };
    v.ok().map(|v| (format!("{rule} {kind}"), v))
}

fn cmd_simulate(
    dist: &str,
    rule: &RuleArgs,
    kind: ObjectKind,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<Executed, CliError> {
    let rule = rule.resolve()?;
    let d: Distribution1D = dist.parse()?;
    let est = monte_carlo_pi(&d, rule, kind, n, samples, seed)?;
    let limit = matching_limit(&d, rule, kind, n).map(|(_, v)| v);
    let z = limit.map(|l| {
        if est.std_error > 0.0 {
            (est.mean - l) / est.std_error
        } else if est.mean == l {
            0.0
        } else {
            f64::INFINITY.copysign(est.mean - l)
        }
    });
    let mut pairs = vec![
        ("distribution", d.to_string()),
        ("rule", rule.to_string()),
        ("kind", kind.to_string()),
        ("n", n.to_string()),
        ("samples", samples.to_string()),
        ("seed", seed.to_string()),
        ("estimate", g(est.mean)),
        ("std error", g(est.std_error)),
    ];
    if let (Some(l), Some(z)) = (limit, z) {
        pairs.push(("limit formula", g(l)));
        pairs.push(("z", g(z)));
    }
    let json = json!({
        "distribution": d.to_string(),
        "rule": rule.to_string(),
        "kind": kind,
        "n": n,
        "estimate": est,
        "limit": limit,
        "z": z,
    });
    Ok((
        Report {
            tables: vec![kv(None, pairs)],
            json,
            plain: None,
        },
        EXIT_OK,
        None,
    ))
}

fn cmd_limits(dist: &str, theta: f64, n: Option<usize>) -> Result<Executed, CliError> {
    let d: Distribution1D = dist.parse()?;
    let theta = Theta::new(theta)?;
    let pop = n.map_or(Population::Infinite, Population::Finite);
    let show = |r: Result<f64, Error>| match r {
        Ok(v) => (g(v), Some(v)),
        Err(e) => (format!("n/a ({e})"), None),
    };
    let th = show(pi_th_limit_good(&d, theta, pop));
    let pro_good = show(pi_pro_limit_good(&d, pop));
    let bh_bad = show(pi_bh_limit_bad(&d, pop));
    let pro_bad = show(pi_pro_limit_bad(&d, pop));
    let two = show(pi_two_agent_exact(&d, RuleId::TopHeavy(theta), ObjectKind::Good));
    let l2 = lemma2_bounds(&d).ok();
    let mut pairs = vec![
        ("distribution", d.to_string()),
        ("n", pop.to_string()),
        ("th good", th.0),
        ("pro good", pro_good.0),
        ("bh bad", bh_bad.0),
        ("pro bad", pro_bad.0),
        ("th good, two agents exact", two.0),
    ];
    if let Some(b) = &l2 {
        pairs.push(("deviation D", g(b.deviation)));
        pairs.push(("lower 1/D", format!("{}{}", g(b.lower), if b.lower_applies { "" } else { " (unbounded support only)" })));
        pairs.push(("upper 2/D + 4/D^2", g(b.upper)));
    }
    let json = json!({
        "distribution": d.to_string(),
        "n": n,
        "theta": theta.value(),
        "th_good": th.1,
        "pro_good": pro_good.1,
        "bh_bad": bh_bad.1,
        "pro_bad": pro_bad.1,
        "th_good_two_agents": two.1,
        "lemma2": l2,
    });
    Ok((
        Report {
            tables: vec![kv(Some(&format!("theta = {}", g(theta.value()))), pairs)],
            json,
            plain: None,
        },
        EXIT_OK,
        None,
    ))
}

fn cmd_instance(
    hard: Option<HardKind>,
    n: Option<usize>,
    m: Option<usize>,
    file: Option<&std::path::Path>,
) -> Result<Executed, CliError> {
    let pf = match (hard, file) {
        (_, Some(path)) => {
            let f = read_problem(path)?;
            f.to_problem()?;
            f
        }
        (Some(kind), None) => {
            let n = n.ok_or_else(|| Error::InvalidArgument("--n is required".into()))?;
            let p = match kind {
                HardKind::Bad => hard_instance_bad(n)?,
                HardKind::Good => {
                    let m = m.ok_or_else(|| Error::InvalidArgument("--m is required for good".into()))?;
                    hard_instance_good(n, m)?
                }
            };
            ProblemFile::from_problem(&p, None)
        }
        (None, None) => return Err(Error::InvalidArgument("--hard or --file is required".into()).into()),
    };
    let text = pf.to_json();
    let json = serde_json::to_value(&pf).expect("serializable");
    Ok((
        Report {
            tables: Vec::new(),
            json,
            plain: Some(text),
        },
        EXIT_OK,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(r: RuleName, theta: Option<f64>) -> Result<RuleId, Error> {
        RuleArgs { rule: r, theta }.resolve()
    }

    #[test]
    fn rule_resolution() {
        assert_eq!(rule(RuleName::Th, None).unwrap(), RuleId::TopHeavy(Theta::ONE));
        assert_eq!(rule(RuleName::Bh, Some(0.5)).unwrap(), RuleId::BottomHeavyTheta(0.5));
        assert!(rule(RuleName::Th, Some(0.0)).is_err());
        assert!(rule(RuleName::Pro, Some(0.5)).is_err());
        assert_eq!(
            CliError::from(rule(RuleName::Th, Some(0.0)).unwrap_err()).message,
            "theta must be in (0,1], got 0"
        );
    }

    #[test]
    fn allocate_plain_output() {
        let out = run(["fairsplit", "allocate", "--rule", "th", "--theta", "1", "--kind", "good", "--values", "1,3"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "0 1\n"));
    }

    #[test]
    fn error_codes() {
        let code = |args: &[&str]| run(std::iter::once("fairsplit").chain(args.iter().copied())).code;
        assert_eq!(code(&["allocate", "--rule", "th", "--theta", "0", "--kind", "good", "--values", "1,2"]), 2);
        assert_eq!(code(&["allocate", "--rule", "bh", "--kind", "good", "--values", "1,2"]), 3);
        assert_eq!(code(&["allocate", "--rule", "es", "--kind", "good", "--values", "1,-2"]), 2);
        assert_eq!(code(&["allocate", "--rule", "es", "--kind", "good", "--values", "1,x"]), 2);
        assert_eq!(code(&["frobnicate"]), 2);
        assert_eq!(code(&["--help"]), 0);
        assert_eq!(code(&["simulate", "--dist", "gauss", "--rule", "es", "--kind", "good", "--n", "3"]), 2);
    }
}
