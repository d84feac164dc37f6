//! Registry of worked examples with frozen expected values, and the
//! verification driver that recomputes every one of them: table, fit,
//! extraction, closed-form comparison, decomposition identities and
//! diagonal multiplicities.

use std::collections::HashSet;

use num::{BigInt, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::closed::{
    build_initial_ideal, dsequence_mixed_multiplicities, maximal_minors_mixed_multiplicities,
    polyring_top_coefficients, ColonData, ColonEntry, DsequenceEvaluator,
};
use crate::diagonal::{check_embedded_degree, diagonal_fit, DiagonalSpec};
use crate::fit::{extract_report, extract_top_coefficients, fit_bivariate, MixedMultReport};
use crate::io::{parse_polynomial, resolve_document, ColonEntryDoc, PresentationDocument};
use crate::linalg::{RankEngine, RankMode, DEFAULT_SEED};
use crate::oracle::{
    graded_quotient_hilbert, hilbert, hilbert_poly_ring, ideal_power_products,
    quotient_bigraded_hilbert, rees_hilbert, AlgebraPresentation, OracleConfig,
};
use crate::{Error, Result};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    /// Cells from the brute-force oracle on the presentation.
    Oracle,
    /// Cells from the colon-ideal decomposition.
    Decomposition,
}

#[derive(Debug, Clone, Deserialize)]
struct CatalogFile {
    entries: Vec<CatalogEntryDoc>,
}

#[derive(Debug, Clone, Deserialize)]
struct CatalogEntryDoc {
    name: String,
    #[serde(default)]
    note: String,
    source: SourceKind,
    #[serde(default)]
    presentation: Option<PresentationDocument>,
    #[serde(default)]
    colon_only: Option<ColonOnlyDoc>,
    expected: ExpectedDoc,
    #[serde(default)]
    checks: ChecksDoc,
    #[serde(default)]
    degree_bound: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
struct ColonOnlyDoc {
    x_vars: Vec<String>,
    degrees: Vec<i64>,
    entries: Vec<ColonEntryDoc>,
}

#[derive(Debug, Clone, Deserialize)]
struct ExpectedDoc {
    s: i64,
    deg_u: i64,
    #[serde(default)]
    rho: Option<i64>,
    #[serde(default)]
    e: Option<Vec<i64>>,
    #[serde(default)]
    rdim: Option<i64>,
    #[serde(default)]
    x_dim: Option<i64>,
    #[serde(default)]
    same_e_as: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
struct ChecksDoc {
    #[serde(default)]
    table_rule: Option<String>,
    #[serde(default)]
    table_max: Option<i64>,
    #[serde(default)]
    polyring: bool,
    #[serde(default)]
    diagonal: bool,
    #[serde(default)]
    quotient_power: Option<RangeDoc>,
    #[serde(default)]
    decomposition_equal: Option<RangeDoc>,
    #[serde(default)]
    minors_formula: Option<i64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
struct RangeDoc {
    u_max: i64,
    v_max: i64,
}

/// A fully resolved catalog record.
pub struct ExampleRecord {
    pub name: String,
    pub note: String,
    pub source: SourceKind,
    pub presentation: Option<AlgebraPresentation>,
    pub colon: Option<ColonData>,
    expected: ExpectedDoc,
    checks: ChecksDoc,
    degree_bound: Option<usize>,
}

impl ExampleRecord {
    pub fn d_max(&self) -> i64 {
        match (&self.presentation, &self.colon) {
            (Some(p), _) => p.d_max(),
            (None, Some(cd)) => cd.d_max(),
            (None, None) => 0,
        }
    }

    fn default_degree_bound(&self) -> usize {
        if let Some(b) = self.degree_bound {
            return b;
        }
        match (self.source, &self.presentation, &self.colon) {
            (SourceKind::Decomposition, _, Some(cd)) => cd.s().max(0) as usize,
            (_, Some(p), _) => p.default_degree_bound(),
            _ => 2,
        }
    }
}

/// Loads and resolves the embedded catalog.
pub fn load_catalog() -> Result<Vec<ExampleRecord>> {
    let file: CatalogFile = serde_json::from_str(CATALOG_JSON).map_err(|e| Error::Parse {
        position: e.column(),
        message: format!("catalog line {}: {e}", e.line()),
    })?;
    file.entries
        .into_iter()
        .map(|doc| {
            let (presentation, colon) = match (&doc.presentation, &doc.colon_only) {
                (Some(p), None) => {
                    let (pres, colon) = resolve_document(p)?;
                    (Some(pres), colon)
                }
                (None, Some(c)) => {
                    let entries = c
                        .entries
                        .iter()
                        .map(|e| {
                            let generators = e
                                .generators
                                .iter()
                                .map(|s| parse_polynomial(s, &c.x_vars))
                                .collect::<Result<Vec<_>>>()?;
                            Ok(ColonEntry {
                                generators,
                                dim: e.dim,
                                mult: BigInt::from(e.mult),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    (
                        None,
                        Some(ColonData::new(c.x_vars.len(), c.degrees.clone(), entries)?),
                    )
                }
                _ => {
                    return Err(Error::InvalidPresentation(format!(
                        "catalog entry {:?} needs exactly one of presentation/colon_only",
                        doc.name
                    )))
                }
            };
            if doc.source == SourceKind::Decomposition && colon.is_none() {
                return Err(Error::InvalidColonData(format!(
                    "catalog entry {:?} uses the decomposition source without colon data",
                    doc.name
                )));
            }
            Ok(ExampleRecord {
                name: doc.name,
                note: doc.note,
                source: doc.source,
                presentation,
                colon,
                expected: doc.expected,
                checks: doc.checks,
                degree_bound: doc.degree_bound,
            })
        })
        .collect()
}

/// Knobs for a verification run.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub seed: u64,
    pub exact_rank: bool,
    pub cell_entry_cap: usize,
    pub fit_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            exact_rank: false,
            cell_entry_cap: OracleConfig::default().cell_entry_cap,
            fit_budget: 40,
        }
    }
}

impl RunConfig {
    fn rank_mode(&self) -> RankMode {
        if self.exact_rank {
            RankMode::ExactOnly
        } else {
            RankMode::Auto
        }
    }

    fn oracle(&self) -> OracleConfig {
        OracleConfig {
            cell_entry_cap: self.cell_entry_cap,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct RecordOutcome {
    pub name: String,
    pub checks: Vec<CheckResult>,
    pub report: Option<MixedMultReport>,
}

impl RecordOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct CatalogReport {
    pub outcomes: Vec<RecordOutcome>,
}

impl CatalogReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed())
    }

    pub fn failures(&self) -> Vec<(&str, &CheckResult)> {
        self.outcomes
            .iter()
            .flat_map(|o| {
                o.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(move |c| (o.name.as_str(), c))
            })
            .collect()
    }
}

struct CellSource<'a> {
    kind: SourceKind,
    presentation: Option<&'a AlgebraPresentation>,
    engine: RankEngine,
    oracle_cfg: OracleConfig,
    evaluator: Option<DsequenceEvaluator<'a>>,
}

impl<'a> CellSource<'a> {
    fn new(record: &'a ExampleRecord, cfg: &RunConfig) -> Result<Self> {
        let evaluator = match record.source {
            SourceKind::Decomposition => {
                let cd = record.colon.as_ref().ok_or_else(|| {
                    Error::InvalidColonData("decomposition source without colon data".into())
                })?;
                Some(DsequenceEvaluator::new(cd))
            }
            SourceKind::Oracle => None,
        };
        Ok(CellSource {
            kind: record.source,
            presentation: record.presentation.as_ref(),
            engine: RankEngine::new(cfg.rank_mode(), cfg.seed),
            oracle_cfg: cfg.oracle(),
            evaluator,
        })
    }

    fn get(&mut self, u: i64, v: i64) -> Result<u64> {
        match self.kind {
            SourceKind::Oracle => {
                let pres = self
                    .presentation
                    .ok_or_else(|| Error::Internal("oracle source without presentation".into()))?;
                hilbert(pres, u, v, &mut self.engine, &self.oracle_cfg)
            }
            SourceKind::Decomposition => self
                .evaluator
                .as_mut()
                .expect("validated in new")
                .hilbert(u, v),
        }
    }
}

fn check(list: &mut Vec<CheckResult>, label: &str, passed: bool, detail: String) {
    list.push(CheckResult {
        label: label.to_string(),
        passed,
        detail,
    });
}

fn big_vec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Runs every check of a single record.
pub fn run_record(record: &ExampleRecord, cfg: &RunConfig) -> Result<RecordOutcome> {
    let mut checks = Vec::new();
    let d_max = record.d_max();
    let bound = record.default_degree_bound();

    let mut source = CellSource::new(record, cfg)?;
    let fitted = fit_bivariate(|u, v| source.get(u, v), d_max, bound, cfg.fit_budget);
    let (poly, region) = match fitted {
        Ok(ok) => ok,
        Err(e) => {
            check(&mut checks, "fit", false, format!("{e}"));
            return Ok(RecordOutcome {
                name: record.name.clone(),
                checks,
                report: None,
            });
        }
    };
    check(
        &mut checks,
        "fit",
        true,
        format!("validated on u >= {}v+{}, v >= {}", d_max, region.u0, region.v0),
    );
    let report = extract_report(&poly)?;

    let exp = &record.expected;
    check(
        &mut checks,
        "total-degree",
        report.s == exp.s,
        format!("s = {} (expected {})", report.s, exp.s),
    );
    check(
        &mut checks,
        "u-degree",
        report.deg_u == exp.deg_u,
        format!("deg_u = {} (expected {})", report.deg_u, exp.deg_u),
    );
    if let Some(rho) = exp.rho {
        check(
            &mut checks,
            "rho",
            report.rho == rho,
            format!("rho = {} (expected {})", report.rho, rho),
        );
    }
    if let Some(e) = &exp.e {
        let expected = big_vec(e);
        check(
            &mut checks,
            "e-sequence",
            report.e == expected,
            format!("e = {:?} (expected {:?})", report.e, expected),
        );
    }
    // Integrality is enforced during extraction; the last nonzero mixed
    // multiplicity of such an algebra is always positive.
    let positive = report.rho < 0 || report.e[report.rho as usize].is_positive();
    check(
        &mut checks,
        "top-positivity",
        positive,
        format!("rho = {}, e_rho = {:?}", report.rho, report.e.get(report.rho.max(0) as usize)),
    );
    if let Some(rdim) = exp.rdim {
        check(
            &mut checks,
            "rdim-consequence",
            report.s == rdim - 2,
            format!("s = {} vs rdim - 2 = {}", report.s, rdim - 2),
        );
    }
    if let Some(x_dim) = exp.x_dim {
        check(
            &mut checks,
            "xdim-consequence",
            report.deg_u == x_dim - 1,
            format!("deg_u = {} vs x_dim - 1 = {}", report.deg_u, x_dim - 1),
        );
    }

    if let Some(cd) = &record.colon {
        let closed = dsequence_mixed_multiplicities(cd);
        check(
            &mut checks,
            "colon-closed-form",
            report == closed,
            format!("fit {:?} vs decomposition formula {:?}", report.e, closed.e),
        );
        let top_ok = report.e.last() == Some(&cd.entries[0].mult);
        check(
            &mut checks,
            "top-multiplicity",
            top_ok,
            format!(
                "e_s = {:?} vs e(A/I_1) = {}",
                report.e.last(),
                cd.entries[0].mult
            ),
        );
    }

    // Exact agreement on 25 random region points outside both the
    // collocation grid and the validation margin.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
        let dd = bound as i64;
        let mut points = HashSet::new();
        let mut attempts = 0;
        while points.len() < 25 && attempts < 10_000 {
            attempts += 1;
            let w = region.u0 + rng.gen_range(0..=3 * dd + 12);
            let v = region.v0 + rng.gen_range(0..=dd + 6);
            let in_grid = w <= region.u0 + dd && v <= region.v0 + dd;
            let in_margin = (region.u0 + dd + 1..=region.u0 + 2 * dd + 2).contains(&w)
                && (region.v0 + dd + 1..=region.v0 + 2 * dd + 2).contains(&v);
            if in_grid || in_margin {
                continue;
            }
            points.insert((w, v));
        }
        let mut bad = Vec::new();
        for &(w, v) in &points {
            let u = w + d_max * v;
            let h = source.get(u, v)?;
            if poly.eval(u, v) != num::BigRational::from_integer(BigInt::from(h)) {
                bad.push((u, v));
            }
        }
        check(
            &mut checks,
            "random-points",
            bad.is_empty(),
            format!("{} sampled points, mismatches at {:?}", points.len(), bad),
        );
    }

    // Refit with the bound raised by one: the report must not change.
    {
        let refit = fit_bivariate(|u, v| source.get(u, v), d_max, bound + 1, cfg.fit_budget)
            .and_then(|(p, _)| extract_report(&p));
        match refit {
            Ok(r2) => check(
                &mut checks,
                "bound-invariance",
                r2 == report,
                format!("bound {} vs {}: e {:?} vs {:?}", bound, bound + 1, report.e, r2.e),
            ),
            Err(e) => check(&mut checks, "bound-invariance", false, format!("{e}")),
        }
    }

    if let Some(rule) = &record.checks.table_rule {
        let max = record.checks.table_max.unwrap_or(12);
        let mut bad = Vec::new();
        for u in 0..=max {
            for v in 0..=max {
                let h = source.get(u, v)?;
                let want = match rule.as_str() {
                    "min_plus_one" => (u.min(v) + 1) as u64,
                    other => {
                        return Err(Error::InvalidPresentation(format!(
                            "unknown table rule {other:?}"
                        )))
                    }
                };
                if h != want {
                    bad.push((u, v, h, want));
                }
            }
        }
        check(
            &mut checks,
            "table-rule",
            bad.is_empty(),
            format!("rule {rule} on [0,{max}]^2, mismatches: {bad:?}"),
        );
    }

    if record.checks.polyring {
        run_polyring_check(record, &mut source, &poly, &region, &mut checks)?;
    }

    if let Some(range) = record.checks.decomposition_equal {
        run_decomposition_check(record, cfg, range, &mut checks)?;
    }

    if let Some(range) = record.checks.quotient_power {
        run_quotient_power_check(record, cfg, range, &mut checks)?;
    }

    if record.checks.diagonal {
        for (c, e) in [(d_max + 1, 1), (2 * d_max + 1, 2)] {
            let spec = DiagonalSpec::new(c, e)?;
            let diag = diagonal_fit(
                |u, v| source.get(u, v),
                spec,
                report.s.max(0) as usize,
                cfg.fit_budget,
            )?;
            let cmp = check_embedded_degree(&diag, &report, spec)?;
            check(
                &mut checks,
                &format!("diagonal-{c}-{e}"),
                cmp.multiplicities_equal && cmp.degrees_equal,
                format!(
                    "degree {} (expected {}), multiplicity {} (predicted {})",
                    cmp.diagonal_degree,
                    cmp.expected_degree,
                    cmp.diagonal_multiplicity,
                    cmp.predicted_degree
                ),
            );
            // Beyond both stabilization offsets the diagonal values, the
            // univariate fit and the bivariate fit must all agree.
            let mut bad = Vec::new();
            let mut checked = 0;
            let mut v = diag.v0.max(region.v0);
            while checked < 4 {
                if region.contains(c * v, e * v) {
                    checked += 1;
                    let h = BigInt::from(source.get(c * v, e * v)?);
                    let from_diag = diag.eval(v);
                    let from_poly = poly.eval(c * v, e * v);
                    if from_diag != h || from_poly != num::BigRational::from_integer(h.clone()) {
                        bad.push((v, h, from_diag, from_poly));
                    }
                }
                v += 1;
            }
            check(
                &mut checks,
                &format!("diagonal-values-{c}-{e}"),
                bad.is_empty(),
                format!("univariate vs bivariate on the diagonal, mismatches: {bad:?}"),
            );
        }
    }

    if let Some(r) = record.checks.minors_formula {
        let formula = maximal_minors_mixed_multiplicities(r)?;
        check(
            &mut checks,
            "minors-formula",
            report == formula,
            format!("fit {:?} vs closed form {:?}", report.e, formula.e),
        );
    }

    Ok(RecordOutcome {
        name: record.name.clone(),
        checks,
        report: Some(report),
    })
}

fn run_polyring_check(
    record: &ExampleRecord,
    source: &mut CellSource,
    poly: &crate::fit::BinomialBasisPolynomial,
    region: &crate::fit::FitRegion,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let Some(AlgebraPresentation::Quotient(q)) = &record.presentation else {
        return Err(Error::InvalidPresentation(
            "polyring check needs a free quotient presentation".into(),
        ));
    };
    check(
        checks,
        "polyring-region",
        region.u0 == 0 && region.v0 == 0,
        format!("validated offsets ({}, {})", region.u0, region.v0),
    );
    let d = q.ring.d_max();
    let mut bad = Vec::new();
    for v in 0..=6i64 {
        for u in d * v..=d * v + 10 {
            let h = source.get(u, v)?;
            if poly.eval(u, v) != num::BigRational::from_integer(BigInt::from(h)) {
                bad.push((u, v));
            }
        }
    }
    check(
        checks,
        "polyring-region-agreement",
        bad.is_empty(),
        format!("oracle vs polynomial on u >= {d}v, mismatches: {bad:?}"),
    );
    let closed = polyring_top_coefficients(q.ring.n, &q.ring.degrees);
    let extracted = extract_top_coefficients(poly)?;
    check(
        checks,
        "polyring-top-coefficients",
        closed == extracted,
        format!("closed {:?} vs extracted {:?}", closed.entries, extracted.entries),
    );
    Ok(())
}

/// Rees oracle = colon decomposition = initial-ideal quotient, cell by cell.
fn run_decomposition_check(
    record: &ExampleRecord,
    cfg: &RunConfig,
    range: RangeDoc,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let Some(AlgebraPresentation::Rees(rees)) = &record.presentation else {
        return Err(Error::InvalidPresentation(
            "decomposition check needs a Rees presentation".into(),
        ));
    };
    let Some(cd) = &record.colon else {
        return Err(Error::InvalidColonData(
            "decomposition check needs colon data".into(),
        ));
    };
    let initial = build_initial_ideal(cd, format!("{}-initial", record.name))?;
    let mut engine = RankEngine::new(cfg.rank_mode(), cfg.seed);
    let mut evaluator = DsequenceEvaluator::new(cd);
    let oracle_cfg = cfg.oracle();
    let mut bad = Vec::new();
    for v in 0..=range.v_max {
        for u in 0..=range.u_max {
            let direct = rees_hilbert(rees, u, v, &mut engine, &oracle_cfg)?;
            let decomposed = evaluator.hilbert(u, v)?;
            let ini = quotient_bigraded_hilbert(&initial, u, v, &mut engine, &oracle_cfg)?;
            if direct != decomposed || direct != ini {
                bad.push((u, v, direct, decomposed, ini));
            }
        }
    }
    check(
        checks,
        "decomposition-equal",
        bad.is_empty(),
        format!(
            "oracle/decomposition/initial-ideal on [0,{}]x[0,{}], mismatches: {bad:?}",
            range.u_max, range.v_max
        ),
    );
    Ok(())
}

/// dim (A/I^v)_u = C(u+n-1, n-1) - dim (I^v)_u on every computed cell.
fn run_quotient_power_check(
    record: &ExampleRecord,
    cfg: &RunConfig,
    range: RangeDoc,
    checks: &mut Vec<CheckResult>,
) -> Result<()> {
    let Some(AlgebraPresentation::Rees(rees)) = &record.presentation else {
        return Err(Error::InvalidPresentation(
            "quotient-power check needs a Rees presentation".into(),
        ));
    };
    let mut engine = RankEngine::new(cfg.rank_mode(), cfg.seed);
    let oracle_cfg = cfg.oracle();
    let mut bad = Vec::new();
    for v in 1..=range.v_max {
        let power_gens = ideal_power_products(&rees.generators, v)?;
        for u in 0..=range.u_max {
            let quotient =
                graded_quotient_hilbert(rees.n, &power_gens, u, &mut engine, &oracle_cfg)?;
            let complement =
                hilbert_poly_ring(rees.n, u) - rees_hilbert(rees, u, v, &mut engine, &oracle_cfg)?;
            if quotient != complement {
                bad.push((u, v, quotient, complement));
            }
        }
    }
    check(
        checks,
        "quotient-power",
        bad.is_empty(),
        format!(
            "A/I^v vs complement on [0,{}]x[1,{}], mismatches: {bad:?}",
            range.u_max, range.v_max
        ),
    );
    Ok(())
}

/// Runs the whole catalog, including the cross-record e-sequence checks.
pub fn run_catalog(cfg: &RunConfig) -> Result<CatalogReport> {
    let records = load_catalog()?;
    let mut outcomes = Vec::new();
    for record in &records {
        outcomes.push(run_record(record, cfg)?);
    }
    // Cross-record: fitted e-sequences that must coincide.
    for (idx, record) in records.iter().enumerate() {
        if let Some(other) = &record.expected.same_e_as {
            let own = outcomes[idx].report.clone();
            let their = records
                .iter()
                .position(|r| &r.name == other)
                .and_then(|j| outcomes[j].report.clone());
            let (passed, detail) = match (&own, &their) {
                (Some(a), Some(b)) => (
                    a.e == b.e && a.s == b.s,
                    format!("{:?} vs {other}: {:?}", a.e, b.e),
                ),
                _ => (false, format!("missing report for {other}")),
            };
            check(&mut outcomes[idx].checks, "same-e-sequence", passed, detail);
        }
    }
    Ok(CatalogReport { outcomes })
}
