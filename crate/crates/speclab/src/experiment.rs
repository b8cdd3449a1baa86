//! Runs a parsed [`ExperimentConfig`] and assembles the JSON and CSV reports.
//!
//! CSV columns by kind:
//!
//! | kind           | columns                                                                   |
//! |----------------|---------------------------------------------------------------------------|
//! | `distribution` | `n, function, mean_re, mean_im, symbol_re, symbol_im, gap`                |
//! | `cluster`      | `n, eps, count, ratio`                                                    |
//! | `attract`      | `point_re, point_im, n, j, distance`                                      |
//! | `inequalities` | `source, index, order, check, eps, value, bound, holds`                   |
//! | `norms`        | `source, index, order, c_struct, trace_norm, entrywise, tolerance, lower_ok, upper_ok, loose_ok` |
//! | `blockcheck`   | `m, eps, max_abs_diff, identical, block_identical, outliers, outlier_limit` |
//!
//! Rungs whose solver fails are listed under `status.solver_failures` and
//! left out of the ladder reports; any such failure or failed hard check
//! gives exit code 2.

use rayon::prelude::*;
use serde::Serialize;
use speclab_core::analysis::{
    attraction_profile_from_spectra, cluster_count, cluster_report_from_spectra, distribution_report_from_spectra,
    kyfan_mirsky_check_with, nonreal_outlier_bounds_with, recurrence_residual_of, AttractionReport, ClusterReport,
    DistributionReport, Family, KyFanReport, OutlierReport, RecurrenceReport,
};
use speclab_core::normlab::{norm_equivalence_check, NormEquivalenceReport};
use speclab_core::numkernel::eig_hermitian;
use speclab_core::random::InstanceGenerator;
use speclab_core::sequences::{
    block_toeplitz, periodic_jacobi, perturbation_diagnostics, truncated_block_toeplitz, CoefficientSequence,
    DiagnosticThresholds, PeriodicBackground, PerturbationDiagnostics,
};
use speclab_core::symbols::{periodic_symbol, IntervalUnion, MatrixSymbol};
use speclab_core::{Complex64, DenseMatrix, Spectrum, SquareMatrix, TridiagonalMatrix};

use crate::config::{ExperimentConfig, Kind, Structure};
use crate::output::Table;

/// Largest order for which the recurrence residual is evaluated.
pub const RECURRENCE_MAX_ORDER: usize = 256;

/// Labels for fields that are read off a finite ladder rather than proved.
pub const HEURISTICS: &[&str] = &[
    "diagnostics.verdict_hint is a finite-prefix heuristic",
    "trends classify counts by least squares against 1, sqrt(n) and n",
    "estimated_order counts nearest distances that halved between the first and last rung",
    "converged compares the last gap with the first one and with abs_threshold",
];

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub kind: Kind,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub notes: &'static [&'static str],
    pub status: Status,
    pub result: KindResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct Status {
    pub exit_code: i32,
    pub failed_checks: Vec<String>,
    pub solver_failures: Vec<SolverFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverFailure {
    pub source: &'static str,
    pub index: usize,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum KindResult {
    Distribution(DistributionResult),
    Cluster(ClusterResult),
    Attract(AttractResult),
    Inequalities(InequalitiesResult),
    Norms(NormsResult),
    Blockcheck(BlockcheckResult),
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRecord {
    pub j: i64,
    pub matrix: Vec<Vec<Complex64>>,
}

/// Nonzero Fourier coefficients of a symbol.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolRecord {
    pub k: usize,
    pub coefficients: Vec<CoefficientRecord>,
}

impl From<&MatrixSymbol> for SymbolRecord {
    fn from(sym: &MatrixSymbol) -> Self {
        let coefficients = sym
            .coefficients()
            .iter()
            .map(|(&j, m)| CoefficientRecord { j, matrix: (0..m.rows()).map(|r| m.row(r).to_vec()).collect() })
            .collect();
        SymbolRecord { k: sym.block_size(), coefficients }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionResult {
    pub family: String,
    pub symbol: SymbolRecord,
    pub diagnostics: Option<PerturbationDiagnostics>,
    /// `sup_{j<n} (|a_j| + |b_j| + |c_j|)` per rung.
    pub entry_sup: Option<Vec<f64>>,
    pub report: Option<DistributionReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterResult {
    pub family: String,
    pub set: IntervalUnion,
    /// `2k`, checked only for unperturbed families.
    pub outlier_limit: Option<usize>,
    /// `counts / n`, same layout as the counts.
    pub ratios: Vec<Vec<f64>>,
    pub report: Option<ClusterReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AttractResult {
    pub family: String,
    pub reports: Vec<AttractionReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixChecks {
    pub source: &'static str,
    pub index: usize,
    pub order: usize,
    pub kyfan: KyFanReport,
    pub outliers: Vec<OutlierReport>,
    pub recurrence: Option<RecurrenceReport>,
}

impl MatrixChecks {
    fn failures(&self) -> Vec<String> {
        let tag = format!("{} {}", self.source, self.index);
        let mut out = Vec::new();
        if !self.kyfan.holds {
            out.push(format!("{tag}: kyfan"));
        }
        for o in &self.outliers {
            if !o.holds {
                out.push(format!("{tag}: outlier_count eps={}", o.epsilon));
            }
            if !o.neighborhood_holds {
                out.push(format!("{tag}: neighborhood eps={}", o.epsilon));
            }
            if !o.confinement_holds {
                out.push(format!("{tag}: confinement eps={}", o.epsilon));
            }
        }
        if matches!(&self.recurrence, Some(r) if !r.holds) {
            out.push(format!("{tag}: recurrence"));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalitiesResult {
    pub family: String,
    pub sections: Vec<MatrixChecks>,
    pub instances: Vec<MatrixChecks>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormRow {
    pub source: &'static str,
    pub index: usize,
    pub report: NormEquivalenceReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormsResult {
    pub family: String,
    pub sections: Vec<NormRow>,
    pub instances: Vec<NormRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockRow {
    pub m: usize,
    pub eps: f64,
    /// Largest entry difference between the truncation and `J_m`.
    pub max_abs_diff: f64,
    pub identical: bool,
    /// `T_{m/k}` against `J_m` when `k` divides `m`.
    pub block_identical: Option<bool>,
    pub outliers: usize,
    pub outlier_limit: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockcheckResult {
    pub background: PeriodicBackground,
    pub symbol: SymbolRecord,
    pub range: IntervalUnion,
    pub components: usize,
    pub rows: Vec<BlockRow>,
}

/// A finished run: the JSON report and the CSV table.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub table: Table,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.status.exit_code
    }

    pub fn json(&self) -> Vec<u8> {
        let mut v = serde_json::to_vec_pretty(&self.report).expect("reports serialize");
        v.push(b'\n');
        v
    }

    pub fn csv(&self) -> Vec<u8> {
        self.table.to_bytes()
    }
}

#[derive(Default)]
struct Ctx {
    failed: Vec<String>,
    solver: Vec<SolverFailure>,
}

impl Ctx {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failed.push(what());
        }
    }

    fn solver(&mut self, source: &'static str, index: usize, error: impl ToString) {
        self.solver.push(SolverFailure { source, index, error: error.to_string() });
    }
}

/// Runs the experiment. Setup errors (an invalid family) come back as `Err`.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, String> {
    let mut ctx = Ctx::default();
    let (result, table) = match cfg.kind {
        Kind::Distribution => distribution(cfg, &mut ctx)?,
        Kind::Cluster => cluster(cfg, &mut ctx)?,
        Kind::Attract => attract(cfg, &mut ctx)?,
        Kind::Inequalities => inequalities(cfg, &mut ctx)?,
        Kind::Norms => norms(cfg, &mut ctx)?,
        Kind::Blockcheck => blockcheck(cfg, &mut ctx)?,
    };
    let exit_code = if ctx.failed.is_empty() && ctx.solver.is_empty() { 0 } else { 2 };
    let report = Report {
        tool: "speclab",
        version: env!("CARGO_PKG_VERSION"),
        kind: cfg.kind,
        seed: cfg.seed,
        config: cfg.clone(),
        notes: HEURISTICS,
        status: Status { exit_code, failed_checks: ctx.failed, solver_failures: ctx.solver },
        result,
    };
    Ok(Outcome { report, table })
}

fn describe(family: &Family) -> String {
    match family {
        Family::Jacobi(seq) => format!("jacobi sections; {}", seq.description()),
        Family::TruncatedToeplitz(sym) => {
            format!("truncated block Toeplitz of the k={} background symbol", sym.block_size())
        }
    }
}

/// Spectra of every rung in ladder order; failed rungs are dropped and recorded.
fn ladder_spectra(family: &Family, ladder: &[usize], ctx: &mut Ctx) -> (Vec<usize>, Vec<Spectrum>) {
    let results: Vec<_> = ladder.par_iter().map(|&n| family.spectrum(n)).collect();
    let mut ns = Vec::new();
    let mut spectra = Vec::new();
    for (&n, r) in ladder.iter().zip(results) {
        match r {
            Ok(s) => {
                ns.push(n);
                spectra.push(s);
            }
            Err(e) => ctx.solver("section", n, e),
        }
    }
    (ns, spectra)
}

fn background_symbol(cfg: &ExperimentConfig) -> Result<MatrixSymbol, String> {
    Ok(periodic_symbol(&cfg.background()?))
}

fn distribution(cfg: &ExperimentConfig, ctx: &mut Ctx) -> Result<(KindResult, Table), String> {
    let family = cfg.family()?;
    let sym = background_symbol(cfg)?;
    let (diagnostics, entry_sup) = match &family {
        Family::Jacobi(seq) => {
            let d = perturbation_diagnostics(seq, &cfg.ladder, DiagnosticThresholds::default())
                .map_err(|e| e.to_string())?;
            (Some(d), Some(cfg.ladder.iter().map(|&n| seq.prefix_sup(n)).collect()))
        }
        Family::TruncatedToeplitz(_) => (None, None),
    };
    let (ns, spectra) = ladder_spectra(&family, &cfg.ladder, ctx);
    let mut table = Table::new(&["n", "function", "mean_re", "mean_im", "symbol_re", "symbol_im", "gap"]);
    let report = if ns.is_empty() {
        None
    } else {
        let r =
            distribution_report_from_spectra(&ns, &spectra, &sym, &cfg.tests, cfg.quadrature_nodes, cfg.abs_threshold)
                .map_err(|e| e.to_string())?;
        for f in &r.functions {
            for (i, &n) in r.n_ladder.iter().enumerate() {
                table.push(vec![
                    n.into(),
                    f.label.as_str().into(),
                    f.means[i].re.into(),
                    f.means[i].im.into(),
                    f.symbol_value.re.into(),
                    f.symbol_value.im.into(),
                    f.gaps[i].into(),
                ]);
            }
        }
        if cfg.require_convergence {
            for f in &r.functions {
                ctx.check(f.converged, || format!("distribution: {} did not converge", f.label));
            }
        }
        Some(r)
    };
    let result = DistributionResult {
        family: describe(&family),
        symbol: SymbolRecord::from(&sym),
        diagnostics,
        entry_sup,
        report,
    };
    Ok((KindResult::Distribution(result), table))
}

fn cluster(cfg: &ExperimentConfig, ctx: &mut Ctx) -> Result<(KindResult, Table), String> {
    let family = cfg.family()?;
    let sym = background_symbol(cfg)?;
    let set = sym.essential_range(cfg.range_grid, cfg.gap_tol).map_err(|e| e.to_string())?;
    let (ns, spectra) = ladder_spectra(&family, &cfg.ladder, ctx);
    let outlier_limit = cfg.is_unperturbed().then_some(2 * sym.block_size());
    let mut table = Table::new(&["n", "eps", "count", "ratio"]);
    let mut ratios = Vec::new();
    let report = if ns.is_empty() {
        None
    } else {
        let r = cluster_report_from_spectra(&ns, &spectra, &set, &cfg.eps).map_err(|e| e.to_string())?;
        for (row, &n) in r.counts.iter().zip(&r.n_ladder) {
            let rr: Vec<f64> = row.iter().map(|&q| q as f64 / n as f64).collect();
            for ((&q, &e), &ratio) in row.iter().zip(&r.eps_grid).zip(&rr) {
                table.push(vec![n.into(), e.into(), q.into(), ratio.into()]);
            }
            ratios.push(rr);
        }
        ctx.check(r.monotone_in_eps(), || "cluster: counts not monotone in eps".into());
        if let Some(limit) = outlier_limit {
            for (i, &m) in r.max_per_eps.iter().enumerate() {
                ctx.check(m <= limit, || format!("cluster: {m} outliers at eps={} exceed {limit}", r.eps_grid[i]));
            }
        }
        Some(r)
    };
    let result = ClusterResult { family: describe(&family), set, outlier_limit, ratios, report };
    Ok((KindResult::Cluster(result), table))
}

fn attract(cfg: &ExperimentConfig, ctx: &mut Ctx) -> Result<(KindResult, Table), String> {
    let family = cfg.family()?;
    let (ns, spectra) = ladder_spectra(&family, &cfg.ladder, ctx);
    let mut table = Table::new(&["point_re", "point_im", "n", "j", "distance"]);
    let mut reports = Vec::new();
    if !ns.is_empty() {
        for &s in &cfg.points {
            let r = attraction_profile_from_spectra(&ns, &spectra, s, cfg.j_max).map_err(|e| e.to_string())?;
            for (d, &n) in r.distances.iter().zip(&r.n_ladder) {
                for (j, &dist) in d.iter().enumerate() {
                    table.push(vec![s.re.into(), s.im.into(), n.into(), j.into(), dist.into()]);
                }
            }
            reports.push(r);
        }
    }
    Ok((KindResult::Attract(AttractResult { family: describe(&family), reports }), table))
}

enum Instance {
    Tri(TridiagonalMatrix),
    Dense(DenseMatrix),
}

impl Instance {
    fn matrix(&self) -> &dyn SquareMatrix {
        match self {
            Instance::Tri(t) => t,
            Instance::Dense(d) => d,
        }
    }
}

fn instances(cfg: &ExperimentConfig) -> Vec<Instance> {
    let spec = &cfg.instances;
    let mut gen = InstanceGenerator::new(cfg.seed);
    (0..spec.count)
        .map(|_| {
            let n = gen.order(spec.min_order, spec.max_order);
            match spec.structure {
                Structure::Tridiagonal => Instance::Tri(gen.tridiagonal(n)),
                Structure::Dense => Instance::Dense(gen.dense(n)),
                Structure::Banded { bandwidth } => Instance::Dense(gen.banded(n, bandwidth)),
            }
        })
        .collect()
}

/// `A_n` for every rung, built on demand.
fn section(family: &Family, n: usize) -> speclab_core::Result<Instance> {
    Ok(match family {
        Family::Jacobi(seq) => Instance::Tri(seq.section(n)?),
        Family::TruncatedToeplitz(sym) => Instance::Dense(truncated_block_toeplitz(sym, n)),
    })
}

fn matrix_checks(source: &'static str, index: usize, m: &Instance, eps: &[f64]) -> speclab_core::Result<MatrixChecks> {
    let a = m.matrix();
    let spec = a.spectrum()?;
    let kyfan = kyfan_mirsky_check_with(a, &spec)?;
    let outliers = nonreal_outlier_bounds_with(a, &spec, eps)?;
    let recurrence = match m {
        Instance::Tri(t) if t.order() <= RECURRENCE_MAX_ORDER => Some(recurrence_residual_of(t, &spec)),
        _ => None,
    };
    Ok(MatrixChecks { source, index, order: a.order(), kyfan, outliers, recurrence })
}

fn inequality_rows(table: &mut Table, mc: &MatrixChecks) {
    let mut row = |check: &str, eps: Option<f64>, value: f64, bound: f64, holds: bool| {
        table.push(vec![
            mc.source.into(),
            mc.index.into(),
            mc.order.into(),
            check.into(),
            eps.into(),
            value.into(),
            bound.into(),
            holds.into(),
        ]);
    };
    let k = &mc.kyfan;
    row("kyfan_im", None, k.im_max_violation, k.tolerance, k.im_max_violation <= k.tolerance);
    row("kyfan_re", None, k.re_max_violation, k.tolerance, k.re_max_violation <= k.tolerance);
    row("kyfan_im_equality", None, k.im_equality_gap, k.tolerance, k.im_equality_gap <= k.tolerance);
    row("kyfan_re_equality", None, k.re_equality_gap, k.tolerance, k.re_equality_gap <= k.tolerance);
    for o in &mc.outliers {
        row("outlier_count", Some(o.epsilon), o.count as f64, o.bound, o.holds);
        row("neighborhood", Some(o.epsilon), o.outside_neighborhood as f64, o.bound, o.neighborhood_holds);
        row("confinement", Some(o.epsilon), o.real_part_excess, o.confinement_tolerance, o.confinement_holds);
    }
    if let Some(r) = &mc.recurrence {
        row("recurrence", None, r.max_residual, r.bound, r.holds);
    }
}

fn run_checks(
    jobs: Vec<(&'static str, usize, speclab_core::Result<Instance>)>,
    eps: &[f64],
    ctx: &mut Ctx,
) -> Vec<MatrixChecks> {
    let results: Vec<_> = jobs
        .into_par_iter()
        .map(|(source, index, m)| (source, index, m.and_then(|m| matrix_checks(source, index, &m, eps))))
        .collect();
    let mut out = Vec::new();
    for (source, index, r) in results {
        match r {
            Ok(mc) => {
                ctx.failed.extend(mc.failures());
                out.push(mc);
            }
            Err(e) => ctx.solver(source, index, e),
        }
    }
    out
}

fn inequalities(cfg: &ExperimentConfig, ctx: &mut Ctx) -> Result<(KindResult, Table), String> {
    let family = cfg.family()?;
    let jobs = cfg.ladder.iter().map(|&n| ("section", n, section(&family, n))).collect();
    let sections = run_checks(jobs, &cfg.eps, ctx);
    let jobs = instances(cfg).into_iter().enumerate().map(|(i, m)| ("instance", i, Ok(m))).collect();
    let inst = run_checks(jobs, &cfg.eps, ctx);
    let mut table = Table::new(&["source", "index", "order", "check", "eps", "value", "bound", "holds"]);
    for mc in sections.iter().chain(&inst) {
        inequality_rows(&mut table, mc);
    }
    let result = InequalitiesResult { family: describe(&family), sections, instances: inst };
    Ok((KindResult::Inequalities(result), table))
}

fn norm_rows(jobs: Vec<(&'static str, usize, speclab_core::Result<Instance>)>, ctx: &mut Ctx) -> Vec<NormRow> {
    let results: Vec<_> = jobs
        .into_par_iter()
        .map(|(source, index, m)| (source, index, m.and_then(|m| norm_equivalence_check(m.matrix()))))
        .collect();
    let mut out = Vec::new();
    for (source, index, r) in results {
        match r {
            Ok(report) => {
                ctx.check(report.holds(), || format!("{source} {index}: norm sandwich"));
                out.push(NormRow { source, index, report });
            }
            Err(e) => ctx.solver(source, index, e),
        }
    }
    out
}

fn perturbation(seq: &CoefficientSequence, n: usize) -> speclab_core::Result<Instance> {
    seq.perturbation_section(n).map(Instance::Tri)
}

fn norms(cfg: &ExperimentConfig, ctx: &mut Ctx) -> Result<(KindResult, Table), String> {
    let family = cfg.family()?;
    let mut jobs: Vec<_> = cfg.ladder.iter().map(|&n| ("section", n, section(&family, n))).collect();
    if let (Family::Jacobi(seq), false) = (&family, cfg.is_unperturbed()) {
        jobs.extend(cfg.ladder.iter().map(|&n| ("perturbation", n, perturbation(seq, n))));
    }
    let sections = norm_rows(jobs, ctx);
    let jobs = instances(cfg).into_iter().enumerate().map(|(i, m)| ("instance", i, Ok(m))).collect();
    let inst = norm_rows(jobs, ctx);
    let mut table = Table::new(&[
        "source",
        "index",
        "order",
        "c_struct",
        "trace_norm",
        "entrywise",
        "tolerance",
        "lower_ok",
        "upper_ok",
        "loose_ok",
    ]);
    for r in sections.iter().chain(&inst) {
        let p = &r.report;
        table.push(vec![
            r.source.into(),
            r.index.into(),
            p.order.into(),
            p.c_struct.into(),
            p.trace_norm.into(),
            p.entrywise.into(),
            p.tolerance.into(),
            p.lower_ok.into(),
            p.upper_ok.into(),
            p.loose_ok.into(),
        ]);
    }
    let result = NormsResult { family: describe(&family), sections, instances: inst };
    Ok((KindResult::Norms(result), table))
}

fn blockcheck(cfg: &ExperimentConfig, ctx: &mut Ctx) -> Result<(KindResult, Table), String> {
    let bg = cfg.background()?;
    let sym = periodic_symbol(&bg);
    let k = sym.block_size();
    let range = sym.essential_range(cfg.range_grid, cfg.gap_tol).map_err(|e| e.to_string())?;
    let components = range.components();
    ctx.check(components <= k, || format!("blockcheck: {components} range components exceed k={k}"));
    let outlier_limit = 2 * k;
    let per_m: Vec<_> = cfg
        .ladder
        .par_iter()
        .map(|&m| {
            let j = periodic_jacobi(&bg, m);
            let jd = j.to_dense();
            let diff = truncated_block_toeplitz(&sym, m).max_abs_diff(&jd);
            let block = (m % k == 0).then(|| block_toeplitz(&sym, m / k) == jd);
            (m, diff, block, eig_hermitian(&j))
        })
        .collect();
    let mut rows = Vec::new();
    let mut table =
        Table::new(&["m", "eps", "max_abs_diff", "identical", "block_identical", "outliers", "outlier_limit"]);
    for (m, diff, block, spec) in per_m {
        let spec = match spec {
            Ok(s) => s,
            Err(e) => {
                ctx.solver("section", m, e);
                continue;
            }
        };
        let identical = diff == 0.0;
        ctx.check(identical, || format!("blockcheck m={m}: truncation differs from J_m by {diff:e}"));
        ctx.check(block != Some(false), || format!("blockcheck m={m}: T_(m/k) differs from J_m"));
        for &eps in &cfg.eps {
            let outliers = cluster_count(&spec, &range, eps);
            ctx.check(outliers <= outlier_limit, || {
                format!("blockcheck m={m}: {outliers} outliers at eps={eps} exceed {outlier_limit}")
            });
            table.push(vec![
                m.into(),
                eps.into(),
                diff.into(),
                identical.into(),
                block.into(),
                outliers.into(),
                outlier_limit.into(),
            ]);
            rows.push(BlockRow {
                m,
                eps,
                max_abs_diff: diff,
                identical,
                block_identical: block,
                outliers,
                outlier_limit,
            });
        }
    }
    let result = BlockcheckResult { background: bg, symbol: SymbolRecord::from(&sym), range, components, rows };
    Ok((KindResult::Blockcheck(result), table))
}
