//! `sigmafix`: decide, certify and verify rationality of L0 from the shell.
//!
//! Exit codes: 0 rational / all checks pass, 1 not rational / a check
//! failed, 2 invalid input or internal error.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use sigmafix::arith::{is_square, Rational};
use sigmafix::decider::{
    scan_with, Certificate, DRule, Decider, Decision, ScanEntry, ScanOutcome,
    ScanRequest, SurfaceSpec, Verdict,
};
use sigmafix::hilbert::global_hilbert;
use sigmafix::quadfield::{ext_hilbert, squarefree_core};
use sigmafix::sigma::{
    verify_composition_identity, verify_involution_and_invariance, verify_proof_chain_nonsquare,
    verify_proof_chain_square, Report,
};
use sigmafix::solver::{SolverConfig, DEFAULT_DESCENT_HEIGHT, DEFAULT_FALLBACK_HEIGHT, DEFAULT_QUADRIC_HEIGHT};

#[derive(Parser)]
#[command(name = "sigmafix", version, about = "Rationality of fixed fields L0 over Q")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CliConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Candidates tried for a quadratic nonresidue during descent.
    #[arg(long, global = true, env = "SIGMAFIX_DESCENT_HEIGHT", default_value_t = DEFAULT_DESCENT_HEIGHT,
          value_parser = clap::value_parser!(u64).range(1..))]
    descent_height: u64,
    /// Height bound of the exhaustive fallback for norm equations, and of the
    /// common-value search for quaternary quadrics.
    #[arg(long, global = true, env = "SIGMAFIX_FALLBACK_HEIGHT", default_value_t = DEFAULT_FALLBACK_HEIGHT,
          value_parser = clap::value_parser!(u64).range(1..))]
    fallback_height: u64,
    /// Height bound of the direct search for points on quadrics.
    #[arg(long, global = true, env = "SIGMAFIX_QUADRIC_HEIGHT", default_value_t = DEFAULT_QUADRIC_HEIGHT,
          value_parser = clap::value_parser!(u64).range(1..))]
    quadric_height: u64,
}

impl CliConfig {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            descent_height: self.descent_height,
            fallback_height: self.fallback_height,
            quadric_height: self.quadric_height,
            ..SolverConfig::default()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Verdict with a certificate (a point when one is found).
    Decide(SpecArgs),
    /// Like `decide`, and always attach an explicit parametrization.
    Certify(SpecArgs),
    /// A rational point (alpha, beta, gamma, delta) of both norm equations.
    Point(SpecArgs),
    /// Hilbert symbol (a, b) over Q, or over Q(sqrt m) with `--ext m`.
    Hilbert {
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        a: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        b: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        ext: Option<Rational>,
    },
    /// Verdicts over a range of c.
    Scan(ScanArgs),
    /// Symbolic checks of the involution, its invariants and the changes of
    /// variables for a spec.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        alpha: Option<Rational>,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        beta: Option<Rational>,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    a: Rational,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    b: Rational,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    c: Rational,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    d: Rational,
}

impl SpecArgs {
    fn spec(&self) -> Result<SurfaceSpec, String> {
        SurfaceSpec::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone())
            .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Ex22,
    Ex23,
    Custom,
}

#[derive(Args)]
struct ScanArgs {
    /// `ex22`: (2, 1, c, c) for 1 <= c <= 100. `ex23`: (2, 2, c, c) for
    /// -100 <= c <= 100. `custom`: built from the options below.
    #[arg(long, value_enum)]
    family: Family,
    /// Fixed `a` of a custom family
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    a: Option<Rational>,
    /// Fixed `b` of a custom family
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    b: Option<Rational>,
    /// Inclusive integer range `lo:hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = c_range)]
    c: Option<(i64, i64)>,
    /// `c`, a constant `q`, or `q*c`.
    #[arg(long, allow_hyphen_values = true, value_parser = d_rule)]
    d: Option<DRule>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: sigmafix::Error| e.to_string())
}

fn c_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn d_rule(s: &str) -> Result<DRule, String> {
    let s = s.trim();
    if s == "c" {
        return Ok(DRule::EqualsC);
    }
    match s.strip_suffix("*c") {
        Some(q) => Ok(DRule::TimesC(rational(q)?)),
        None => Ok(DRule::Constant(rational(s)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| e.to_string())
}

fn verdict_code(v: Verdict) -> u8 {
    if v.is_rational() {
        0
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<(String, u8), String> {
    let cfg = &cli.config;
    let text = cfg.format == Format::Text;
    let decider = Decider {
        solver: cfg.solver(),
        always_parametrize: false,
    };
    match &cli.command {
        Command::Decide(args) | Command::Certify(args) => {
            let spec = args.spec()?;
            let decider = Decider {
                always_parametrize: matches!(cli.command, Command::Certify(_)),
                ..decider.clone()
            };
            let decision = decider.decide(&spec).map_err(|e| e.to_string())?;
            let out = if text { decision_text(&decision) } else { json(&decision)? };
            Ok((out, verdict_code(decision.verdict)))
        }
        Command::Point(args) => {
            let spec = args.spec()?;
            let point = decider.point_on_x(&spec).map_err(|e| e.to_string())?;
            let code = if point.is_some() { 0 } else { 1 };
            let out = if text {
                match &point {
                    Some(p) => format!("{}\n", join(p)),
                    None => "no point found\n".to_string(),
                }
            } else {
                json(&json!({ "spec": spec, "point": point }))?
            };
            Ok((out, code))
        }
        Command::Hilbert { a, b, ext } => {
            let out = match ext {
                None => {
                    let set = global_hilbert(a, b).map_err(|e| e.to_string())?;
                    let value = if set.is_empty() { "zero" } else { "nonzero" };
                    if text {
                        let places: Vec<String> = set.iter().map(|p| p.to_string()).collect();
                        format!("({a}, {b})_Q = {value}; ramified at {{{}}}\n", places.join(", "))
                    } else {
                        json(&json!({ "a": a, "b": b, "value": value, "ramified": set }))?
                    }
                }
                Some(m) => {
                    let field = squarefree_core(m).map_err(|e| e.to_string())?;
                    let sym = ext_hilbert(a, b, &field).map_err(|e| e.to_string())?;
                    if text {
                        let value = if sym.is_zero() { "zero" } else { "nonzero" };
                        let mut s = format!("({a}, {b}) over {field} = {value}");
                        if let Some(w) = &sym.witness_place {
                            let _ = write!(s, "; witness {w}");
                        }
                        if sym.degenerate_discriminant {
                            s.push_str("; degenerate discriminant, evaluated over Q");
                        }
                        s + "\n"
                    } else {
                        json(&json!({ "a": a, "b": b, "field_radicand": m, "symbol": sym }))?
                    }
                }
            };
            Ok((out, 0))
        }
        Command::Scan(args) => scan_cmd(args, &decider, text),
        Command::Verify { spec, alpha, beta } => {
            let spec = spec.spec()?;
            let report = verify_cmd(&spec, alpha.as_ref(), beta.as_ref(), &decider.solver)?;
            let code = if report.all_passed() { 0 } else { 1 };
            let out = if text { report.to_string() } else { json(&report)? };
            Ok((out, code))
        }
    }
}

fn scan_cmd(args: &ScanArgs, decider: &Decider, text: bool) -> Result<(String, u8), String> {
    let req = match args.family {
        Family::Ex22 | Family::Ex23 => {
            if args.a.is_some() || args.b.is_some() || args.c.is_some() || args.d.is_some() {
                return Err("--a/--b/--c/--d apply only to --family custom".into());
            }
            if args.family == Family::Ex22 {
                ScanRequest::ex22()
            } else {
                ScanRequest::ex23()
            }
        }
        Family::Custom => {
            let missing = |n: &str| format!("--family custom requires --{n}");
            let (lo, hi) = args.c.ok_or_else(|| missing("c"))?;
            ScanRequest {
                a: args.a.clone().ok_or_else(|| missing("a"))?,
                b: args.b.clone().ok_or_else(|| missing("b"))?,
                c_range: lo..=hi,
                d_rule: args.d.clone().ok_or_else(|| missing("d"))?,
            }
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| e.to_string())?;
    let entries = pool.install(|| scan_with(&req, decider));
    let pick = |v: Verdict| -> Vec<i64> {
        entries
            .iter()
            .filter(|e| e.verdict() == Some(v))
            .map(|e| e.c)
            .collect()
    };
    let rational = pick(Verdict::Rational);
    let not_rational = pick(Verdict::NotRational);
    let out = if text {
        scan_text(&entries, &rational, &not_rational)
    } else {
        json(&json!({
            "request": req,
            "entries": entries,
            "summary": { "rational": rational, "not_rational": not_rational },
        }))?
    };
    Ok((out, 0))
}

fn verify_cmd(
    spec: &SurfaceSpec,
    alpha: Option<&Rational>,
    beta: Option<&Rational>,
    solver: &SolverConfig,
) -> Result<Report, String> {
    let mut report = verify_involution_and_invariance(spec);
    report.extend(verify_composition_identity());
    let chain = match is_square(spec.b()) {
        Some(root) => {
            if alpha.is_some() {
                return Err("b is a square: pass only --beta (a square root of b)".into());
            }
            verify_proof_chain_square(spec, beta.unwrap_or(&root))
        }
        None => {
            let (alpha, beta) = match (alpha, beta) {
                (Some(x), Some(y)) => (x.clone(), y.clone()),
                (None, None) => match solver.solve_norm_equation(spec.a(), spec.b()) {
                    Ok(Some(s)) => (s.alpha, s.beta),
                    // no solution: the change of variables does not apply
                    Ok(None) => return Ok(report),
                    Err(e) => return Err(e.to_string()),
                },
                _ => return Err("--alpha and --beta go together".into()),
            };
            verify_proof_chain_nonsquare(spec, &alpha, &beta)
        }
    };
    report.extend(chain.map_err(|e| e.to_string())?);
    Ok(report)
}

fn join(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn decision_text(d: &Decision) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "spec      {}", d.spec);
    let _ = writeln!(s, "verdict   {}", d.verdict);
    match &d.certificate {
        Certificate::Rational {
            point,
            parametrization,
            construction_route,
            norm_solution,
        } => {
            let _ = writeln!(s, "route     {}", kebab(construction_route));
            let _ = writeln!(s, "norm      ({}, {})", norm_solution.alpha, norm_solution.beta);
            if let Some(p) = point {
                let _ = writeln!(s, "point     {}", join(p));
            }
            if let Some(m) = parametrization {
                for (i, f) in m.maps.iter().enumerate() {
                    let _ = writeln!(s, "t{}        {}", i + 1, f);
                }
            }
        }
        Certificate::NotRational {
            failed_condition,
            obstruction,
            symbol,
        } => {
            let _ = writeln!(s, "failed    {}", kebab(failed_condition));
            let over = symbol
                .field_radicand
                .as_ref()
                .map_or("Q".to_string(), |m| format!("Q(sqrt({m}))"));
            let _ = writeln!(s, "symbol    ({}, {}) over {over}", symbol.a, symbol.b);
            let _ = writeln!(
                s,
                "witness   {}",
                serde_json::to_string(obstruction).unwrap_or_default()
            );
        }
    }
    for n in &d.notes {
        let _ = writeln!(s, "note      {n}");
    }
    let _ = writeln!(s, "          {}", d.equivalence);
    s
}

fn kebab<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn scan_text(entries: &[ScanEntry], rational: &[i64], not_rational: &[i64]) -> String {
    let mut s = String::new();
    for e in entries {
        let status = match &e.outcome {
            ScanOutcome::Decided { verdict } => verdict.to_string(),
            ScanOutcome::Skipped { reason } => format!("skipped ({reason})"),
            ScanOutcome::Error { message } => format!("error ({message})"),
        };
        let _ = writeln!(s, "{:>6}  {status}", e.c);
    }
    let list = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(", ");
    let _ = writeln!(s, "rational ({}): {{{}}}", rational.len(), list(rational));
    let _ = writeln!(s, "not_rational ({}): {{{}}}", not_rational.len(), list(not_rational));
    s
}
