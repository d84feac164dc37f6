//! Command-line surface: tables, fits, mixed multiplicities, closed forms,
//! diagonals and the catalog verification suite.
//!
//! Exit codes: 0 success, 1 stabilization-budget failure (or a failed
//! verification), 2 input error, 3 cell-budget skips present.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::BigInt;

use bihilbert::catalog::{run_catalog, CatalogReport, RunConfig};
use bihilbert::closed::{
    ci_pair_hilbert, dsequence_mixed_multiplicities, embedded_degree,
    maximal_minors_mixed_multiplicities, polyring_top_coefficients,
    regular_sequence_mixed_multiplicities, shifted_sum_top_coefficients,
    teissier_mixed_multiplicities, ColonData, DsequenceEvaluator,
};
use bihilbert::diagonal::{check_embedded_degree, diagonal_fit, DiagonalSpec};
use bihilbert::fit::{extract_report, fit_bivariate, MixedMultReport};
use bihilbert::io::{
    bigint_value, emit_fit, emit_mixed_report, emit_table, emit_top_coefficients,
    emit_univariate_fit, parse_presentation_document, resolve_document, ReportFormat,
};
use bihilbert::linalg::{RankEngine, RankMode, DEFAULT_SEED};
use bihilbert::oracle::{
    hilbert, hilbert_table, AlgebraPresentation, CellMethod, HilbertTable, OracleConfig,
};
use bihilbert::Error;

#[derive(Parser)]
#[command(
    name = "bihilbert",
    version,
    about = "Exact Hilbert functions, Hilbert polynomials and mixed multiplicities \
             of bigraded quotients and Rees algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a Hilbert function table over `[0,umax] x [0,vmax]`.
    Table(TableArgs),
    /// Fit the Hilbert polynomial and report region, coefficients and
    /// mixed multiplicities.
    Fit(FitArgs),
    /// Fit and report only the mixed multiplicities.
    Mixedmult(FitArgs),
    /// Evaluate a closed formula directly.
    #[command(subcommand)]
    Closedform(ClosedForm),
    /// Fit the Hilbert polynomial of a diagonal subalgebra and compare its
    /// multiplicity with the embedded-degree prediction.
    Diagonal(DiagonalArgs),
    /// Recompute every catalog example and compare against the expected
    /// values.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonOpts {
    /// Output format: text, json or csv.
    #[arg(long, default_value = "text")]
    format: String,
    /// Force full rational elimination instead of the two-prime fast path.
    #[arg(long)]
    exact_rank: bool,
    /// Seed for random primes and random validation points.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Per-cell cap on stored spanning-matrix entries.
    #[arg(long, default_value_t = OracleConfig::default().cell_entry_cap)]
    cell_budget: usize,
}

impl CommonOpts {
    fn format(&self) -> Result<ReportFormat, Error> {
        ReportFormat::parse(&self.format)
    }

    fn engine(&self) -> RankEngine {
        let mode = if self.exact_rank {
            RankMode::ExactOnly
        } else {
            RankMode::Auto
        };
        RankEngine::new(mode, self.seed)
    }

    fn oracle(&self) -> OracleConfig {
        OracleConfig {
            cell_entry_cap: self.cell_budget,
        }
    }
}

#[derive(Args)]
struct TableArgs {
    /// Presentation document (JSON).
    #[arg(long)]
    input: String,
    #[arg(long)]
    umax: i64,
    #[arg(long)]
    vmax: i64,
    /// Cell source: "oracle" or "decomposition" (needs a colon block).
    #[arg(long, default_value = "oracle")]
    source: String,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct FitArgs {
    /// Presentation document (JSON).
    #[arg(long)]
    input: String,
    /// Total-degree bound; defaults to n-1 (Rees) or n+r-2 (quotient).
    #[arg(long)]
    degree_bound: Option<usize>,
    /// Offset retries for the stabilization search.
    #[arg(long, default_value_t = 40)]
    budget: usize,
    /// Cell source: "oracle" or "decomposition" (needs a colon block).
    #[arg(long, default_value = "oracle")]
    source: String,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct DiagonalArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    c: i64,
    #[arg(long)]
    e: i64,
    #[arg(long)]
    degree_bound: Option<usize>,
    #[arg(long, default_value_t = 40)]
    budget: usize,
    #[arg(long, default_value = "oracle")]
    source: String,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Subcommand)]
enum ClosedForm {
    /// Top coefficients for a free bigraded polynomial ring.
    Polyring {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<i64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Top coefficients of a composition-shifted sum of a degree-m
    /// polynomial with the given leading value.
    ShiftedSum {
        #[arg(long)]
        lead: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<i64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Mixed multiplicities from d-sequence colon data (document with a
    /// colon block).
    Dseq {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Mixed multiplicities of a homogeneous regular sequence.
    Regseq {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        mult: i64,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<i64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Mixed multiplicities of the maximal minors of a generic (r-1) x r
    /// matrix, per the printed closed form.
    Minors {
        #[arg(long)]
        r: i64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Hilbert function of a two-form complete intersection in three
    /// variables at u = uprime + d2*v.
    CiPair {
        #[arg(long)]
        d1: i64,
        #[arg(long)]
        d2: i64,
        #[arg(long)]
        uprime: i64,
        #[arg(long)]
        v: i64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Teissier mixed multiplicities of a d-sequence ideal.
    Teissier {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Degree of the blow-up embedded by (I^e)_c, from colon data.
    EmbeddedDegree {
        #[arg(long)]
        input: String,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        e: i64,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Stabilization(_) => 1,
        Error::CellBudget { .. } | Error::RankBudget(_) => 3,
        _ => 2,
    }
}

fn load_document(path: &str) -> Result<(AlgebraPresentation, Option<ColonData>), Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        position: 0,
        message: format!("{path}: {e}"),
    })?;
    let doc = parse_presentation_document(&text)?;
    resolve_document(&doc)
}

fn require_colon(colon: Option<ColonData>) -> Result<ColonData, Error> {
    colon.ok_or_else(|| {
        Error::InvalidColonData("this command needs a document with a colon block".into())
    })
}

/// A cell source over either the oracle or the colon decomposition.
enum Source<'a> {
    Oracle {
        pres: &'a AlgebraPresentation,
        engine: RankEngine,
        config: OracleConfig,
    },
    Decomposition(DsequenceEvaluator<'a>),
}

impl Source<'_> {
    fn get(&mut self, u: i64, v: i64) -> Result<u64, Error> {
        match self {
            Source::Oracle {
                pres,
                engine,
                config,
            } => hilbert(pres, u, v, engine, config),
            Source::Decomposition(ev) => ev.hilbert(u, v),
        }
    }
}

fn make_source<'a>(
    kind: &str,
    pres: &'a AlgebraPresentation,
    colon: &'a Option<ColonData>,
    common: &CommonOpts,
) -> Result<Source<'a>, Error> {
    match kind {
        "oracle" => Ok(Source::Oracle {
            pres,
            engine: common.engine(),
            config: common.oracle(),
        }),
        "decomposition" => {
            let cd = colon.as_ref().ok_or_else(|| {
                Error::InvalidColonData(
                    "the decomposition source needs a colon block in the document".into(),
                )
            })?;
            Ok(Source::Decomposition(DsequenceEvaluator::new(cd)))
        }
        other => Err(Error::InvalidPresentation(format!(
            "unknown source {other:?}"
        ))),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Table(args) => {
            let format = args.common.format()?;
            let (pres, colon) = load_document(&args.input)?;
            let table = match args.source.as_str() {
                "oracle" => {
                    let mut engine = args.common.engine();
                    hilbert_table(
                        &pres,
                        args.umax,
                        args.vmax,
                        &mut engine,
                        &args.common.oracle(),
                    )?
                }
                _ => {
                    let mut source = make_source(&args.source, &pres, &colon, &args.common)?;
                    HilbertTable::from_source(
                        pres.label(),
                        args.umax,
                        args.vmax,
                        CellMethod::Decomposition,
                        |u, v| source.get(u, v),
                    )?
                }
            };
            print!("{}", emit_table(&table, format));
            if table.skipped.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
        Command::Fit(args) => {
            let format = args.common.format()?;
            let (poly, region, report) = run_fit(&args)?;
            print!("{}", emit_fit(&poly, &region, &report, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Mixedmult(args) => {
            let format = args.common.format()?;
            let (_, _, report) = run_fit(&args)?;
            print!("{}", emit_mixed_report(&report, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Closedform(which) => run_closedform(which),
        Command::Diagonal(args) => {
            let format = args.common.format()?;
            let (pres, colon) = load_document(&args.input)?;
            let spec = DiagonalSpec::new(args.c, args.e)?;
            if !spec.admissible_for(pres.d_max()) {
                return Err(Error::Hypothesis(format!(
                    "diagonal (c,e) = ({},{}) needs c > d_max*e = {}",
                    args.c,
                    args.e,
                    pres.d_max() * args.e
                )));
            }
            // Bivariate fit first: its report feeds the comparison.
            let fit_args = FitArgs {
                input: args.input.clone(),
                degree_bound: args.degree_bound,
                budget: args.budget,
                source: args.source.clone(),
                common: CommonOpts {
                    format: args.common.format.clone(),
                    exact_rank: args.common.exact_rank,
                    seed: args.common.seed,
                    cell_budget: args.common.cell_budget,
                },
            };
            let (_, _, report) = run_fit(&fit_args)?;
            let mut source = make_source(&args.source, &pres, &colon, &args.common)?;
            let bound = args
                .degree_bound
                .unwrap_or_else(|| report.s.max(0) as usize);
            let diag = diagonal_fit(|u, v| source.get(u, v), spec, bound, args.budget)?;
            let cmp = check_embedded_degree(&diag, &report, spec)?;
            print!("{}", emit_univariate_fit(&diag, Some(&cmp), format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let format = args.common.format()?;
            let run_cfg = RunConfig {
                seed: args.common.seed,
                exact_rank: args.common.exact_rank,
                cell_entry_cap: args.common.cell_budget,
                fit_budget: 40,
            };
            let report = run_catalog(&run_cfg)?;
            print!("{}", emit_catalog(&report, format));
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn run_fit(
    args: &FitArgs,
) -> Result<
    (
        bihilbert::fit::BinomialBasisPolynomial,
        bihilbert::fit::FitRegion,
        MixedMultReport,
    ),
    Error,
> {
    let (pres, colon) = load_document(&args.input)?;
    let bound = args.degree_bound.unwrap_or_else(|| match args.source.as_str() {
        "decomposition" => colon
            .as_ref()
            .map(|cd| cd.s().max(0) as usize)
            .unwrap_or_else(|| pres.default_degree_bound()),
        _ => pres.default_degree_bound(),
    });
    let mut source = make_source(&args.source, &pres, &colon, &args.common)?;
    let d_max = pres.d_max();
    let (poly, region) = fit_bivariate(|u, v| source.get(u, v), d_max, bound, args.budget)?;
    let report = extract_report(&poly)?;
    Ok((poly, region, report))
}

fn run_closedform(which: ClosedForm) -> Result<ExitCode, Error> {
    match which {
        ClosedForm::Polyring { n, degrees, common } => {
            let top = polyring_top_coefficients(n, &degrees);
            print!("{}", emit_top_coefficients(&top, common.format()?));
        }
        ClosedForm::ShiftedSum {
            lead,
            m,
            degrees,
            common,
        } => {
            let top = shifted_sum_top_coefficients(&BigInt::from(lead), m, &degrees);
            print!("{}", emit_top_coefficients(&top, common.format()?));
        }
        ClosedForm::Dseq { input, common } => {
            let (_, colon) = load_document(&input)?;
            let report = dsequence_mixed_multiplicities(&require_colon(colon)?);
            print!("{}", emit_mixed_report(&report, common.format()?));
        }
        ClosedForm::Regseq {
            n,
            mult,
            degrees,
            common,
        } => {
            let report = regular_sequence_mixed_multiplicities(n, &BigInt::from(mult), &degrees);
            print!("{}", emit_mixed_report(&report, common.format()?));
        }
        ClosedForm::Minors { r, common } => {
            let report = maximal_minors_mixed_multiplicities(r)?;
            print!("{}", emit_mixed_report(&report, common.format()?));
        }
        ClosedForm::CiPair {
            d1,
            d2,
            uprime,
            v,
            common,
        } => {
            let value = ci_pair_hilbert(d1, d2, uprime, v)?;
            match common.format()? {
                ReportFormat::Json => println!(
                    "{}",
                    serde_json::json!({"d1": d1, "d2": d2, "uprime": uprime, "v": v, "dim": value})
                ),
                ReportFormat::Csv => print!("d1,d2,uprime,v,dim\n{d1},{d2},{uprime},{v},{value}\n"),
                ReportFormat::Text => println!("dim (I^{v})_{{u'+d2*v}} = {value}"),
            }
        }
        ClosedForm::Teissier { input, common } => {
            let (_, colon) = load_document(&input)?;
            let e = teissier_mixed_multiplicities(&require_colon(colon)?);
            match common.format()? {
                ReportFormat::Json => println!(
                    "{}",
                    serde_json::json!({
                        "e": e.iter().map(bigint_value).collect::<Vec<_>>()
                    })
                ),
                ReportFormat::Csv => {
                    println!("i,e_i");
                    for (i, x) in e.iter().enumerate() {
                        println!("{i},{x}");
                    }
                }
                ReportFormat::Text => {
                    let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                    println!("e(m|I) = ({})", parts.join(", "));
                }
            }
        }
        ClosedForm::EmbeddedDegree { input, c, e, common } => {
            let (_, colon) = load_document(&input)?;
            let report = dsequence_mixed_multiplicities(&require_colon(colon)?);
            let degree = embedded_degree(&report, c, e)?;
            match common.format()? {
                ReportFormat::Json => println!(
                    "{}",
                    serde_json::json!({"c": c, "e": e, "degree": bigint_value(&degree)})
                ),
                ReportFormat::Csv => print!("c,e,degree\n{c},{e},{degree}\n"),
                ReportFormat::Text => println!("deg V_(c,e) = {degree}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_catalog(report: &CatalogReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let value = serde_json::json!({
                "all_passed": report.all_passed(),
                "records": report
                    .outcomes
                    .iter()
                    .map(|o| {
                        serde_json::json!({
                            "name": o.name,
                            "passed": o.passed(),
                            "checks": o
                                .checks
                                .iter()
                                .map(|c| {
                                    serde_json::json!({
                                        "label": c.label,
                                        "passed": c.passed,
                                        "detail": c.detail,
                                    })
                                })
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&value).expect("json")
        }
        ReportFormat::Csv => {
            let mut out = String::from("record,check,passed\n");
            for o in &report.outcomes {
                for c in &o.checks {
                    out.push_str(&format!("{},{},{}\n", o.name, c.label, c.passed));
                }
            }
            out
        }
        ReportFormat::Text => {
            let mut out = String::new();
            let mut checks = 0;
            for o in &report.outcomes {
                for c in &o.checks {
                    checks += 1;
                    if !c.passed {
                        out.push_str(&format!("FAIL {}/{}: {}\n", o.name, c.label, c.detail));
                    }
                }
                out.push_str(&format!(
                    "{} {}\n",
                    if o.passed() { "pass" } else { "FAIL" },
                    o.name
                ));
            }
            out.push_str(&format!(
                "{}: {} records, {} checks\n",
                if report.all_passed() {
                    "all passed"
                } else {
                    "FAILURES PRESENT"
                },
                report.outcomes.len(),
                checks
            ));
            out
        }
    }
}
