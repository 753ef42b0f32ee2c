//! The `gabor-zak` command line.
//!
//! Exit codes: 0 success, 1 failed check or runtime error, 2 invalid
//! arguments, 3 no admissible `H` although one was requested.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{GaborError, Result};
use crate::fiber_analysis::{gabor_fiber_bounds, Reading};
use crate::gabor::{classify, frame_bounds, sufficient_condition, Convention, GaborSystem};
use crate::group::{quotient_invariant_factors, FiniteAbelianGroup, Subgroup};
use crate::io::{parse_group, parse_subgroup, read_window, subgroup_spec, window_to_json};
use crate::report::{to_csv, to_json, to_value, SCHEMA_VERSION};
use crate::rng::random_window;
use crate::suites::{run_all, Fault, SuiteConfig};
use crate::transforms::Window;
use crate::zak_analysis::{admissible_h, containment_witness, eigenvalue_function, zak_frame_bounds, AdmissibleH};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_ADMISSIBLE_H: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gabor-zak", version, about = "Gabor frames on finite abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frame bounds and classification of a Gabor system by every route.
    Analyze(AnalyzeArgs),
    /// List the admissible intermediate subgroups H.
    SearchH(SearchArgs),
    /// Run the cross-check suites against the brute-force references.
    OracleCheck(OracleArgs),
    /// Window files.
    Window {
        #[command(subcommand)]
        command: WindowCommand,
    },
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    /// Group, e.g. Z12 or Z4xZ2.
    #[arg(long)]
    pub group: String,
    /// Translation subgroup Λ: full, trivial, gen:... or elems:...
    #[arg(long)]
    pub lambda: String,
    /// Modulation subgroup Γ of the dual group.
    #[arg(long)]
    pub gamma: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    ZakChain,
    Plancherel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Window: a JSON file, delta, uniform or random:<seed>.
    #[arg(long)]
    pub window: String,
    /// Intermediate subgroup H, or auto for every admissible one.
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long, value_enum, default_value = "zak-chain")]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Emit JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    ConjZak,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 48)]
    pub max_order: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write the full JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Subcommand, Debug)]
pub enum WindowCommand {
    /// Write a window file.
    Gen {
        #[arg(long)]
        group: String,
        /// delta, uniform or random:<seed>.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(flag: &str, e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: format!("invalid value for --{flag}: {e}"),
        }
    }
}

impl From<GaborError> for CliError {
    fn from(e: GaborError) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Parsed {
    g: FiniteAbelianGroup,
    lambda: Subgroup,
    gamma: Subgroup,
}

fn parse_system(a: &SystemArgs) -> CliResult<Parsed> {
    let g = parse_group(&a.group).map_err(|e| CliError::usage("group", e))?;
    let lambda = parse_subgroup(&g, &a.lambda).map_err(|e| CliError::usage("lambda", e))?;
    let gamma = parse_subgroup(&g.dual(), &a.gamma).map_err(|e| CliError::usage("gamma", e))?;
    Ok(Parsed { g, lambda, gamma })
}

/// `delta`, `uniform` (constant with unit norm), `random:<seed>`.
fn generated_window(g: &FiniteAbelianGroup, kind: &str) -> Option<std::result::Result<Window, String>> {
    let k = kind.trim();
    if k.eq_ignore_ascii_case("delta") {
        return Some(Ok(Window::delta(g, 0)));
    }
    if k.eq_ignore_ascii_case("uniform") {
        let c = 1.0 / (g.order() as f64).sqrt();
        return Some(Ok(Window::constant(g, num_complex::Complex64::new(c, 0.0))));
    }
    let seed = k.strip_prefix("random:")?;
    Some(seed.parse::<u64>().map(|s| random_window(g, s)).map_err(|e| format!("bad seed {seed:?}: {e}")))
}

fn load_window(g: &FiniteAbelianGroup, spec: &str) -> CliResult<Window> {
    match generated_window(g, spec) {
        Some(r) => r.map_err(|e| CliError::usage("window", e)),
        None => {
            let w = read_window(std::path::Path::new(spec)).map_err(|e| CliError::usage("window", e))?;
            if w.group() != g {
                return Err(CliError::usage("window", format!("window is on {}, --group is {g}", w.group())));
            }
            Ok(w)
        }
    }
}

fn no_admissible(p: &Parsed) -> CliError {
    let witness = containment_witness(&p.g, &p.lambda, &p.gamma).ok().flatten();
    let message = match witness {
        Some(x) => format!(
            "no admissible H: Γ^⊥ is not contained in Λ, witness {} ∈ Γ^⊥ \\ Λ",
            p.g.element(x)
        ),
        None => "no admissible H".to_string(),
    };
    CliError {
        code: EXIT_NO_ADMISSIBLE_H,
        message,
    }
}

fn bounds_json(lower: f64, upper: f64) -> Value {
    json!({"lower": lower, "upper": upper})
}

fn analyze_h(sys_base: &GaborSystem, adm: &AdmissibleH, convention: ConventionArg, tol: f64) -> Result<Value> {
    let zsys = sys_base.with_convention(Convention::ZakChain(adm.h.clone()))?;
    let factor = sys_base.gamma().order() as f64 / adm.hperp.order() as f64;
    // Bounds are reported in the requested convention; the multiplier is
    // always the zak-chain one.
    let (sys, scale) = match convention {
        ConventionArg::ZakChain => (zsys.clone(), 1.0),
        ConventionArg::Plancherel => (sys_base.with_convention(Convention::Plancherel)?, 1.0 / factor),
    };
    let m = eigenvalue_function(&zsys, adm)?;
    let zr = zak_frame_bounds(&zsys, adm, tol)?;
    let direct = frame_bounds(&sys)?;
    let class = classify(&sys, tol)?;
    let modulated = gabor_fiber_bounds(&sys, adm, Reading::Modulated)?;
    let printed = gabor_fiber_bounds(&sys, adm, Reading::Printed)?;
    let zak_lower = zr.lower_bound * scale;
    let zak_upper = zr.upper_bound * scale;
    let dev = |a: f64, b: f64, c: f64, d: f64| (a - c).abs().max((b - d).abs());
    Ok(json!({
        "h": subgroup_spec(&adm.h),
        "h_order": adm.h.order(),
        "h_perp": subgroup_spec(&adm.hperp),
        "conversion_factor": factor,
        "eigenvalue_function": {"min": m.min, "max": m.max, "rows": m.n_rows, "cols": m.n_cols},
        "zak": {
            "bounds": bounds_json(zak_lower, zak_upper),
            "is_parseval_zak_chain": zr.is_parseval,
            "is_onb_zak_chain": zr.is_onb,
        },
        "direct": bounds_json(direct.lower, direct.upper),
        "fiber": {
            "modulated": bounds_json(modulated.global.lower, modulated.global.upper),
            "printed": bounds_json(printed.global.lower, printed.global.upper),
        },
        "classification": class,
        "agreement": {
            "zak_vs_direct": dev(zak_lower, zak_upper, direct.lower, direct.upper),
            "modulated_vs_direct": dev(modulated.global.lower, modulated.global.upper, direct.lower, direct.upper),
            "printed_vs_direct": dev(printed.global.lower, printed.global.upper, direct.lower, direct.upper),
        },
    }))
}

pub fn analyze(a: &AnalyzeArgs) -> CliResult<String> {
    let p = parse_system(&a.system)?;
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(CliError::usage("tol", "must be positive"));
    }
    let window = load_window(&p.g, &a.window)?;
    let adm_all = admissible_h(&p.g, &p.lambda, &p.gamma)?;
    let selected: Vec<AdmissibleH> = match a.h.as_deref().map(str::trim) {
        None => Vec::new(),
        Some(s) if s.eq_ignore_ascii_case("auto") => {
            if adm_all.is_empty() {
                return Err(no_admissible(&p));
            }
            adm_all.clone()
        }
        Some(s) => {
            let h = parse_subgroup(&p.g, s).map_err(|e| CliError::usage("h", e))?;
            match adm_all.iter().find(|x| x.h == h) {
                Some(x) => vec![x.clone()],
                None if adm_all.is_empty() => return Err(no_admissible(&p)),
                None => {
                    return Err(CliError {
                        code: EXIT_NO_ADMISSIBLE_H,
                        message: format!("H = {} is not admissible: need H ≤ Λ and H^⊥ ≤ Γ", subgroup_spec(&h)),
                    })
                }
            }
        }
    };

    let plancherel = GaborSystem::new(window.clone(), p.lambda.clone(), p.gamma.clone(), Convention::Plancherel)?;
    let pb = frame_bounds(&plancherel)?;
    let sc = sufficient_condition(&plancherel, a.tol)?;
    let analyses = selected
        .iter()
        .map(|adm| analyze_h(&plancherel, adm, a.convention, a.tol))
        .collect::<Result<Vec<_>>>()?;
    let report = json!({
        "schema": SCHEMA_VERSION,
        "input": {
            "group": p.g.to_string(),
            "lambda": subgroup_spec(&p.lambda),
            "gamma": subgroup_spec(&p.gamma),
            "window": a.window,
            "convention": match a.convention { ConventionArg::ZakChain => "zak-chain", ConventionArg::Plancherel => "plancherel" },
            "tol": a.tol,
        },
        "window_norm": window.norm(),
        "plancherel": {
            "bounds": bounds_json(pb.lower, pb.upper),
            "classification": classify(&plancherel, a.tol)?,
            "disjoint_support_condition": sc,
        },
        "admissible_h": adm_all.iter().map(|x| subgroup_spec(&x.h)).collect::<Vec<_>>(),
        "analyses": analyses,
    });
    Ok(match a.format {
        Format::Json => to_json(&report)?,
        Format::Csv => to_csv(&to_value(&report)?)?,
    })
}

fn factors_text(f: &[usize]) -> String {
    if f.is_empty() {
        "1".into()
    } else {
        f.iter().map(|l| format!("Z{l}")).collect::<Vec<_>>().join("x")
    }
}

pub fn search_h(a: &SearchArgs) -> CliResult<(String, Option<String>)> {
    let p = parse_system(&a.system)?;
    let adm = admissible_h(&p.g, &p.lambda, &p.gamma)?;
    let warning = if adm.is_empty() { Some(no_admissible(&p).message) } else { None };
    let mut rows = Vec::new();
    for x in &adm {
        let lam_q = quotient_invariant_factors(&p.g, &x.h, &p.lambda)?;
        let gam_q = quotient_invariant_factors(&p.g.dual(), &x.hperp, &p.gamma)?;
        let certificate = p.g.is_cyclic_presentation().then(|| {
            let l = p.g.order();
            json!({"L": l, "N": l / p.lambda.order(), "M": l / p.gamma.order(), "R": l / x.h.order()})
        });
        rows.push(json!({
            "h": subgroup_spec(&x.h),
            "order": x.h.order(),
            "lambda_mod_h": lam_q,
            "gamma_mod_h_perp": gam_q,
            "divisor_certificate": certificate,
        }));
    }
    let out = if a.json {
        to_json(&json!({"schema": SCHEMA_VERSION, "group": p.g.to_string(),
                        "lambda": subgroup_spec(&p.lambda), "gamma": subgroup_spec(&p.gamma), "rows": rows}))?
    } else {
        let mut s = format!("{:<20} {:>5} {:<16} {:<16} {}\n", "H", "|H|", "Λ/H", "Γ/H^⊥", "L N M R");
        for r in &rows {
            let cert = match &r["divisor_certificate"] {
                Value::Null => "-".to_string(),
                c => format!("{} {} {} {}", c["L"], c["N"], c["M"], c["R"]),
            };
            let f = |k: &str| {
                let v: Vec<usize> = serde_json::from_value(r[k].clone()).unwrap_or_default();
                factors_text(&v)
            };
            s += &format!(
                "{:<20} {:>5} {:<16} {:<16} {}\n",
                r["h"].as_str().unwrap_or_default(),
                r["order"],
                f("lambda_mod_h"),
                f("gamma_mod_h_perp"),
                cert
            );
        }
        s
    };
    Ok((out, warning))
}

/// Runs the suites; returns the console text, the JSON report and whether
/// every suite passed.
pub fn oracle_check(a: &OracleArgs) -> CliResult<(String, String, bool)> {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(CliError::usage("tol", "must be positive"));
    }
    if a.max_order < 2 {
        return Err(CliError::usage("max-order", "must be at least 2"));
    }
    let cfg = SuiteConfig {
        seed: a.seed,
        max_order: a.max_order,
        tol: a.tol,
        fault: a.inject_fault.map(|FaultArg::ConjZak| Fault::ConjZak),
    };
    let outcomes = run_all(&cfg);
    let mut text = String::new();
    for o in &outcomes {
        text += &o.line();
        text.push('\n');
        for n in &o.notes {
            text += &format!("  {n}\n");
        }
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let first = outcomes.iter().find_map(|o| o.counterexample.clone()).map(|mut c| {
        c["seed"] = json!(a.seed);
        c["max_order"] = json!(a.max_order);
        c
    });
    if passed {
        text += "all suites passed\n";
    } else if let Some(c) = &first {
        text += "first counterexample:\n";
        text += &to_json(c)?;
    }
    let report = to_json(&json!({
        "schema": SCHEMA_VERSION,
        "config": {"seed": a.seed, "max_order": a.max_order, "tol": a.tol,
                   "fault": a.inject_fault.map(|_| "conj-zak")},
        "passed": passed,
        "suites": outcomes,
        "first_counterexample": first,
    }))?;
    Ok((text, report, passed))
}

pub fn window_gen(group: &str, kind: &str) -> CliResult<String> {
    let g = parse_group(group).map_err(|e| CliError::usage("group", e))?;
    let w = match generated_window(&g, kind) {
        Some(r) => r.map_err(|e| CliError::usage("kind", e))?,
        None => return Err(CliError::usage("kind", format!("{kind:?} is not delta, uniform or random:<seed>"))),
    };
    Ok(window_to_json(&w) + "\n")
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::from(GaborError::from(e))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| CliError::from(GaborError::from(e)))
        }
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a).and_then(|s| emit(&s, a.out.as_ref())).map(|_| 0),
        Command::SearchH(a) => search_h(a).and_then(|(s, warning)| {
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            emit(&s, None).map(|_| 0)
        }),
        Command::OracleCheck(a) => oracle_check(a).and_then(|(text, report, passed)| {
            if let Some(p) = &a.report {
                emit(&report, Some(p))?;
            }
            emit(&text, None)?;
            Ok(if passed { 0 } else { EXIT_FAILURE })
        }),
        Command::Window { command: WindowCommand::Gen { group, kind, out } } => {
            window_gen(group, kind).and_then(|s| emit(&s, out.as_ref())).map(|_| 0)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
