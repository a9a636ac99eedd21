use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use abelkit::classify::{classify, classify_torsion_family, predict_vs_bruteforce, Kind};
use abelkit::harness::{
    explain, render_table, run_all, run_suite, summarize, suite_info, HarnessConfig,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};
use abelkit::options::{BUDGET_ENV, DEFAULT_HOM_BUDGET};
use abelkit::rickart::{check_morphism, decide, Property};
use abelkit::ring::{end_ring, is_strongly_self_rickart_ring, verify_t1_end};
use abelkit::{Error, FgAbGroup, Morphism, Options};

const EXIT_FAILS: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_SUITE: u8 = 3;

#[derive(Parser)]
#[command(name = "abelkit", version, about = "Rickart-type properties of finitely generated abelian groups")]
struct Cli {
    /// Maximum number of morphisms a single scan may visit.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = DEFAULT_HOM_BUDGET)]
    budget: u64,
    /// Cross-check deciders that have two independent paths.
    #[arg(long, global = true)]
    paranoid: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of M, or of the pair (M, N).
    Decide {
        property: String,
        m: String,
        n: Option<String>,
        /// Check only this morphism (JSON, as printed in witnesses).
        #[arg(long)]
        morphism: Option<String>,
    },
    /// Closed-form verdict for a group, or for a torsion family such as `2:simple,3:pruefer`.
    Classify {
        expr: Option<String>,
        #[arg(long, conflicts_with = "expr")]
        family: Option<String>,
    },
    /// Compare the classification with exhaustive deciders up to an order bound.
    Audit {
        #[arg(long, default_value_t = 32)]
        max_order: u64,
    },
    /// Endomorphism ring checks for a finite group.
    RingAudit { expr: String },
    /// Run verification suites.
    Verify {
        /// Suite id; repeat for several. All suites when omitted.
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// One-page dossier for a group.
    Explain {
        expr: String,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
}

fn print_json(v: &impl Serialize) {
    emit(&serde_json::to_string_pretty(v).expect("report types serialize"));
}

fn verdict_code(holds: bool) -> u8 {
    if holds {
        0
    } else {
        EXIT_FAILS
    }
}

fn parse_family(s: &str) -> Result<Vec<(u64, Kind)>, Error> {
    s.split(',')
        .map(|item| {
            let (p, k) = item.trim().split_once(':').unwrap_or((item.trim(), "simple"));
            let p = p.trim().parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad prime `{p}` in family"),
            })?;
            Ok((p, k.trim().parse()?))
        })
        .collect()
}

fn run(cli: Cli) -> Result<u8, Error> {
    let opts = Options::with_budget(cli.budget).paranoid(cli.paranoid);
    match cli.command {
        Command::Decide { property, m, n, morphism } => {
            let p: Property = property.parse()?;
            let m: FgAbGroup = m.parse()?;
            let n: Option<FgAbGroup> = n.map(|s| s.parse()).transpose()?;
            if let Some(json) = morphism {
                let f: Morphism = serde_json::from_str(&json).map_err(|e| Error::Parse {
                    pos: e.column(),
                    msg: e.to_string(),
                })?;
                if f.source() != &m || f.target() != n.as_ref().unwrap_or(&m) {
                    return Err(Error::InvalidMorphism(format!(
                        "morphism is {} -> {}, not between the given groups",
                        f.source(),
                        f.target()
                    )));
                }
                let c = check_morphism(p, &f, &opts)?;
                print_json(&c);
                return Ok(verdict_code(c.passes));
            }
            let r = decide(p, &m, n.as_ref(), &opts)?;
            print_json(&r);
            Ok(verdict_code(r.holds))
        }
        Command::Classify { expr, family } => {
            let v = match (expr, family) {
                (_, Some(f)) => classify_torsion_family(&parse_family(&f)?)?,
                (Some(e), None) => classify(&e.parse()?),
                (None, None) => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "give a group expression or --family".into(),
                    })
                }
            };
            print_json(&v);
            Ok(0)
        }
        Command::Audit { max_order } => {
            let d = predict_vs_bruteforce(max_order, &opts)?;
            print_json(&d);
            Ok(if d.is_empty() { 0 } else { EXIT_SUITE })
        }
        Command::RingAudit { expr } => {
            let m: FgAbGroup = expr.parse()?;
            let ring = end_ring(&m, opts.budget)?;
            let axioms = ring.check_axioms();
            let strongly = is_strongly_self_rickart_ring(&ring);
            let eq = verify_t1_end(&m, opts.budget)?;
            let ok = axioms.is_ok() && eq.agree && eq.dual_agree;
            print_json(&serde_json::json!({
                "group": m,
                "ring_size": ring.size(),
                "idempotents": ring.idempotents().len(),
                "axioms": axioms.err().map_or_else(|| "ok".to_string(), |e| e.to_string()),
                "strongly_self_rickart_ring": strongly,
                "equivalence": eq,
            }));
            Ok(if ok { 0 } else { EXIT_SUITE })
        }
        Command::Verify { suite, max_order, seed, samples, format } => {
            let cfg = HarnessConfig {
                max_order,
                hom_budget: opts.budget,
                random_seed: seed,
                sample_count: samples,
                paranoid: opts.paranoid,
            };
            for id in &suite {
                suite_info(id)?;
            }
            let results = if suite.is_empty() {
                run_all(&cfg)?
            } else {
                suite.iter().map(|id| run_suite(id, &cfg)).collect::<Result<Vec<_>, _>>()?
            };
            let summary = summarize(&results);
            match format {
                Format::Json => {
                    for r in &results {
                        emit(&serde_json::to_string(r).expect("report types serialize"));
                    }
                    emit(&serde_json::to_string(&summary).expect("report types serialize"));
                }
                Format::Table => emit(render_table(&results).trim_end()),
            }
            Ok(if summary.failed.is_empty() { 0 } else { EXIT_SUITE })
        }
        Command::Explain { expr, json } => {
            let d = explain(&expr.parse()?, &opts)?;
            if json {
                print_json(&d);
            } else {
                emit(&d.to_string());
            }
            Ok(0)
        }
    }
}
