use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use twobridge::exactalg::{rational_to_string, BigInt};
use twobridge::harness::{
    oracle_check, run_enumeration, verify_paper, Dedup, EnumerationSpec, GridConfig, OracleConfig, RunConfig, RunReport,
};
use twobridge::obstruction::{report_from_invariants, signature_density_with, Verdict};
use twobridge::registry::{Selection, Strategies};
use twobridge::{jones, parse, seifert, ConwayForm, Error};

#[derive(Parser)]
#[command(
    name = "twobridge",
    version,
    about = "Invariants and cosmetic surgery obstructions for positive 2-bridge knots"
)]
struct Cli {
    /// TOML file with [strategies], [grid] and [oracle] tables.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    strategies: StrategyFlags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StrategyFlags {
    /// Determinant route: recurrence, seifert, alexander, jones.
    #[arg(long, global = true)]
    det: Option<String>,
    /// a2 route: gauss, conway, expansion.
    #[arg(long, global = true)]
    a2: Option<String>,
    /// 4v3 route: gauss, jones.
    #[arg(long = "four-v3", global = true)]
    four_v3: Option<String>,
    /// Signature method: certified, eigen-f64.
    #[arg(long, global = true)]
    signature: Option<String>,
    /// Bracket method: transfer, state-sum.
    #[arg(long, global = true)]
    bracket: Option<String>,
    /// Obstruction chain, tried in order.
    #[arg(long, global = true, value_delimiter = ',')]
    obstructions: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariants of one form.
    Invariants {
        /// Bracket entries, outermost first, e.g. "4,-2,2,-4".
        #[arg(long, allow_hyphen_values = true)]
        conway: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the obstruction report of one form as JSON.
    Obstruct {
        #[arg(long, allow_hyphen_values = true)]
        conway: String,
        /// Attach the signature density window over 11 <= p <= P.
        #[arg(long, value_name = "P")]
        density_p_max: Option<u32>,
    },
    /// Run the obstructions over every form up to a complexity bound.
    Enumerate {
        #[arg(long)]
        max_complexity: i64,
        #[arg(long, default_value = "none")]
        dedup: Dedup,
        #[arg(long)]
        genus_min: Option<usize>,
        #[arg(long)]
        genus_max: Option<usize>,
        /// Output file, .json or .csv.
        #[arg(long)]
        out: PathBuf,
        /// Single-threaded run.
        #[arg(long)]
        serial: bool,
    },
    /// Replay the named case analysis.
    VerifyPaper {
        /// Grid preset: default or large. Overrides the [grid] table.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check independent computations of each invariant.
    OracleCheck {
        #[arg(long)]
        max_complexity: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Validation(_)
            | Error::UnknownStrategy { .. }
            | Error::Arity { .. }
            | Error::Precondition(_)
            | Error::IndexOutOfRange { .. } => Failure::Usage(e.to_string()),
            Error::Precision { .. } | Error::Internal(_) | Error::Io(_) => Failure::Check(e.to_string()),
        }
    }
}

fn selection(base: Selection, flags: StrategyFlags) -> Selection {
    Selection {
        det: flags.det.unwrap_or(base.det),
        a2: flags.a2.unwrap_or(base.a2),
        four_v3: flags.four_v3.unwrap_or(base.four_v3),
        signature: flags.signature.unwrap_or(base.signature),
        bracket: flags.bracket.unwrap_or(base.bracket),
        obstructions: flags.obstructions.unwrap_or(base.obstructions),
    }
}

fn number(v: &BigInt) -> Value {
    let s = v.to_string();
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

fn invariants_json(k: &ConwayForm, s: &Strategies, sel: &Selection) -> Result<Value, Error> {
    let inv = s.invariants(sel, k)?;
    let sig = s.signature.get(&sel.signature)?;
    let bracket = s.bracket.get(&sel.bracket)?.bracket(k)?;
    let jones = jones::jones_from_bracket(&bracket, jones::writhe(k))?;
    let fractions: Vec<Value> = k
        .fractions()
        .iter()
        .map(|f| json!([f.d.to_string(), f.p.to_string()]))
        .collect();
    Ok(json!({
        "form": k.to_string(),
        "key": k.key(),
        "genus": k.genus(),
        "complexity": k.complexity(),
        "det": number(&inv.det),
        "a2": number(&inv.a2),
        "a4": number(&inv.a4),
        "four_v3": number(&inv.four_v3),
        "v3": rational_to_string(&jones::v3_from_polynomial(&jones)),
        "signature": sig.lt_signature(k, &twobridge::Rational::new(1.into(), 2.into()))?,
        "fractions": fractions,
        "conway_polynomial": seifert::conway_polynomial(k).display_in("z"),
        "jones_polynomial": jones.display_in("t"),
        "torus": k.is_torus_2k(),
    }))
}

fn print_suites(report: &RunReport) {
    for s in &report.suites {
        let status = if s.passed { "PASS" } else { "FAIL" };
        println!("{status} {} ({} checked)", s.name, s.checked);
        if let Some(f) = &s.failure {
            println!("     {f}");
        }
    }
}

fn print_counts(report: &RunReport) {
    for v in [
        Verdict::ExcludedTorus2k,
        Verdict::NoCcsMain,
        Verdict::NoCcsEquality,
        Verdict::Inconclusive,
    ] {
        println!("{v}: {}", report.count(v));
    }
}

fn finish(report: &RunReport, out: Option<&PathBuf>) -> Result<(), Failure> {
    if let Some(path) = out {
        report.save(path)?;
        println!("wrote {}", path.display());
    }
    eprintln!("{} done in {:.2?}", report.run, report.wall_time);
    report.check().map_err(|e| Failure::Check(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let sel = selection(config.strategies.clone(), cli.strategies);
    let strategies = Strategies::builtin();
    strategies.validate(&sel)?;

    match cli.command {
        Command::Invariants { conway, json } => {
            let k = parse(&conway)?;
            let v = invariants_json(&k, &strategies, &sel)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&v).expect("json value"));
            } else if let Value::Object(map) = v {
                for (key, value) in map {
                    match value {
                        Value::String(s) => println!("{key}: {s}"),
                        other => println!("{key}: {other}"),
                    }
                }
            }
        }
        Command::Obstruct { conway, density_p_max } => {
            let k = parse(&conway)?;
            let inv = strategies.invariants(&sel, &k)?;
            let mut report = report_from_invariants(&k, &inv, &strategies.obstruction_chain(&sel)?)?;
            if let Some(p_max) = density_p_max {
                let method = strategies.signature.get(&sel.signature)?;
                report.attach_density(&signature_density_with(method, &k, 11, p_max)?);
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Enumerate {
            max_complexity,
            dedup,
            genus_min,
            genus_max,
            out,
            serial,
        } => {
            let mut spec = EnumerationSpec::new(max_complexity).with_dedup(dedup);
            if genus_min.is_some() || genus_max.is_some() {
                spec = spec.with_genus_range(genus_min.unwrap_or(1), genus_max.unwrap_or(usize::MAX));
            }
            let report = run_enumeration(&spec, &strategies, &sel, !serial)?;
            println!("forms: {}", report.reports.len());
            print_counts(&report);
            finish(&report, Some(&out))?;
        }
        Command::VerifyPaper { grid, out } => {
            let grid = match grid {
                Some(name) => GridConfig::preset(&name)?,
                None => config.grid,
            };
            let report = verify_paper(&grid, &strategies, &sel)?;
            print_suites(&report);
            print_counts(&report);
            finish(&report, out.as_ref())?;
        }
        Command::OracleCheck { max_complexity, out } => {
            let cfg = match max_complexity {
                Some(n) => OracleConfig::with_max_complexity(n),
                None => config.oracle,
            };
            let report = oracle_check(&cfg, &strategies, &sel)?;
            print_suites(&report);
            finish(&report, out.as_ref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
