//! Command implementations: each assembles core objects from the config,
//! runs the computation (grid points in parallel under the worker pool),
//! and writes deterministic result files plus a runtime sidecar.

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

use hmu_core::carleson::{
    carleson_constant, fit_exponent, threshold_exponent, CarlesonQuery, Threshold, ThresholdQuery,
};
use hmu_core::operator::{well_definedness_gate, GateVerdict};
use hmu_core::probes::{
    compactness_probe, duality_identity_bergman, duality_identity_dirichlet, lower_bound_scan,
    ratio_sup, summarize_rows, DualityCheck, ProbeConfig, ProbeResult, TestFamily,
};
use hmu_core::spaces::{QuadratureGrid, SpaceParams};
use hmu_core::taylor::TaylorPoly;
use hmu_core::Complex64;

use crate::config::{ExperimentConfig, FamilySpec, ProbeKind, ProbeSection};
use crate::output::{config_hash, fmt_float, write_json, write_sidecar, CsvWriter, RunInfo};

pub struct RunContext {
    pub config: ExperimentConfig,
    pub hash: String,
    pub out_dir: PathBuf,
    pub jobs: usize,
}

impl RunContext {
    pub fn new(mut config: ExperimentConfig, overrides: &Overrides) -> Result<Self> {
        if let Some(seed) = overrides.seed {
            config.seed = seed;
        }
        if let Some(tol) = overrides.tol {
            if !(tol > 0.0) {
                bail!("--tol must be positive");
            }
            config.tolerances.integrate = tol;
        }
        let hash = config_hash(&config);
        let out_dir = overrides
            .out
            .clone()
            .or_else(|| config.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok(RunContext {
            config,
            hash,
            out_dir,
            jobs: overrides.jobs.unwrap_or(0),
        })
    }

    fn tol(&self) -> f64 {
        self.config.tolerances.integrate
    }

    /// Runs `body` inside a worker pool sized by `--jobs` (0 = default).
    pub fn with_pool<T: Send>(&self, body: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .context("building worker pool")?;
        pool.install(body)
    }

    fn finish(&self, command: &str, started: Instant) -> Result<()> {
        write_sidecar(
            &self.out_dir,
            &RunInfo {
                command: command.to_string(),
                wall_ms: started.elapsed().as_millis(),
                jobs: self.jobs,
                version: env!("CARGO_PKG_VERSION"),
            },
        )
    }
}

#[derive(Default, Clone)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub tol: Option<f64>,
}

pub fn cmd_moments(ctx: &RunContext) -> Result<()> {
    let started = Instant::now();
    let section = ctx.config.moments.clone().unwrap_or_default();
    let mu = ctx.config.build_measure()?;
    let moments = mu.moments(section.max_index);
    let mut csv = CsvWriter::new(&ctx.hash, &["n", "moment"]);
    for (n, m) in moments.iter().enumerate() {
        csv.row_mixed(&n.to_string(), &[*m]);
    }
    csv.write(&ctx.out_dir.join("moments.csv"))?;

    let t_grid = section.tail_grid.build()?;
    let mut csv = CsvWriter::new(&ctx.hash, &["t", "tail"]);
    for &t in &t_grid {
        csv.row(&[t, mu.tail(t)]);
    }
    csv.write(&ctx.out_dir.join("tails.csv"))?;

    println!(
        "moments: wrote {} moments (mass {}) and {} tail rows to {}",
        moments.len(),
        fmt_float(mu.total_mass()),
        t_grid.len(),
        ctx.out_dir.display()
    );
    ctx.finish("moments", started)
}

#[derive(Serialize)]
struct ClassifyOutput {
    fitted_exponent: Option<f64>,
    fitted_log_order: Option<f64>,
    degenerate_tail_at: Option<f64>,
    queried_exponent: Option<f64>,
    queried_log_order: f64,
    threshold: Option<Threshold>,
    constant_sup: Option<f64>,
    vanishing_verdict: Option<hmu_core::carleson::VanishingVerdict>,
    growth_detected: Option<bool>,
    /// Full report including the per-t ratio table.
    report: Option<hmu_core::carleson::CarlesonReport>,
}

pub fn cmd_classify(ctx: &RunContext) -> Result<()> {
    let started = Instant::now();
    let section = ctx
        .config
        .classify
        .clone()
        .ok_or_else(|| anyhow!("classify needs a \"classify\" config section"))?;
    let mu = ctx.config.build_measure()?;
    let grid = section.grid.build()?;

    let (fitted, degenerate_at) = match fit_exponent(&mu, &grid) {
        Ok(pair) => (Some(pair), None),
        Err(hmu_core::Error::DegenerateTail { at }) => (None, Some(at)),
        Err(e) => return Err(anyhow!("exponent fit failed: {e}")),
    };

    let threshold = match (&section.theorem_case, &ctx.config.spaces) {
        (Some(case), Some(sp)) => {
            let beta = ctx.config.operator.as_ref().map(|o| o.beta).unwrap_or(2.0);
            Some(
                threshold_exponent(&ThresholdQuery {
                    p: sp.p,
                    q: sp.q.unwrap_or(sp.p),
                    alpha: sp.alpha,
                    beta,
                    case: (*case).into(),
                })
                .map_err(|e| anyhow!("threshold case: {e}"))?,
            )
        }
        (Some(_), None) => bail!("classify.theorem_case needs a \"spaces\" section"),
        _ => None,
    };

    // explicit exponent wins, then the theorem threshold, then the fit
    let queried = section
        .exponent
        .or(threshold.as_ref().map(|t| t.exponent()))
        .or(fitted.map(|(s, _)| s));
    let log_order = threshold
        .as_ref()
        .map(|t| match t {
            Threshold::Logarithmic(spec) => spec.log_order,
            Threshold::Pure(_) => section.log_order,
        })
        .unwrap_or(section.log_order);

    let report = match queried {
        Some(s) if s > 0.0 => {
            let query = CarlesonQuery::new(s, log_order, grid.clone())
                .map_err(|e| anyhow!("classify query: {e}"))?;
            Some(carleson_constant(&mu, &query))
        }
        _ => None,
    };

    if let Some(r) = &report {
        let mut csv = CsvWriter::new(&ctx.hash, &["t", "tail", "ratio"]);
        for row in &r.ratio_table {
            csv.row(&[row.t, row.tail, row.ratio]);
        }
        csv.write(&ctx.out_dir.join("classify_ratios.csv"))?;
    }

    let output = ClassifyOutput {
        fitted_exponent: fitted.map(|(s, _)| s),
        fitted_log_order: fitted.map(|(_, b)| b),
        degenerate_tail_at: degenerate_at,
        queried_exponent: queried,
        queried_log_order: log_order,
        threshold,
        constant_sup: report.as_ref().map(|r| r.constant_sup),
        vanishing_verdict: report.as_ref().map(|r| r.vanishing_verdict),
        growth_detected: report.as_ref().map(|r| r.growth_detected),
        report,
    };
    write_json(&ctx.out_dir.join("classify.json"), &ctx.hash, &output)?;

    match (&output.fitted_exponent, &output.degenerate_tail_at) {
        (Some(s), _) => println!(
            "classify: fitted exponent {} log order {} sup {}",
            fmt_float(*s),
            fmt_float(output.fitted_log_order.unwrap_or(f64::NAN)),
            output
                .constant_sup
                .map(fmt_float)
                .unwrap_or_else(|| "n/a".into()),
        ),
        (None, Some(at)) => println!(
            "classify: tail degenerates at t = {} (atomic measure); constant report only",
            fmt_float(*at)
        ),
        _ => {}
    }
    ctx.finish("classify", started)
}

#[derive(Serialize)]
struct ApplyOutput {
    gate: GateVerdict,
    result: TaylorPoly,
}

pub fn cmd_apply(ctx: &RunContext) -> Result<()> {
    let started = Instant::now();
    let section = ctx
        .config
        .apply
        .clone()
        .ok_or_else(|| anyhow!("apply needs an \"apply\" config section"))?;
    let op = ctx.config.build_operator()?;
    let (p, alpha) = ctx
        .config
        .spaces
        .as_ref()
        .map(|s| (s.p, s.alpha))
        .unwrap_or((2.0, 0.0));
    let f = section.function.build(p, alpha)?;
    if f.degree() > op.truncation() {
        bail!(
            "input degree {} exceeds operator truncation {}",
            f.degree(),
            op.truncation()
        );
    }
    let gate = well_definedness_gate(op.measure(), p, alpha).map_err(core_err)?;
    let hf = op.apply_matrix(&f).map_err(core_err)?;

    write_json(
        &ctx.out_dir.join("apply.json"),
        &ctx.hash,
        &ApplyOutput {
            gate: gate.clone(),
            result: hf.clone(),
        },
    )?;

    let radius = section.eval_radius;
    let mut csv = CsvWriter::new(&ctx.hash, &["re_z", "im_z", "re_hf", "im_hf"]);
    for &r in &[0.0, 0.5 * radius, radius] {
        for j in 0..8 {
            if r == 0.0 && j > 0 {
                break;
            }
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 8.0;
            let z = Complex64::new(r * theta.cos(), r * theta.sin());
            let v = hf.evaluate(z);
            csv.row(&[z.re, z.im, v.re, v.im]);
        }
    }
    csv.write(&ctx.out_dir.join("apply_eval.csv"))?;

    if let Some(order) = section.dump_matrix {
        let order = order.min(op.truncation());
        let mut csv = CsvWriter::new(&ctx.hash, &["n", "k", "entry"]);
        for n in 0..=order {
            for k in 0..=order {
                csv.row_mixed(&format!("{n},{k}"), &[op.matrix_entry(n, k)]);
            }
        }
        csv.write(&ctx.out_dir.join("matrix.csv"))?;
    }

    println!(
        "apply: output degree {}, gate {} (exponent {})",
        hf.degree(),
        if gate.passed() { "pass" } else { "FAIL" },
        fmt_float(gate.exponent()),
    );
    ctx.finish("apply", started)
}

#[derive(Serialize)]
struct IdentitySummary {
    max_residual: f64,
    gate: GateVerdict,
    cases: usize,
}

pub fn cmd_verify_identity(ctx: &RunContext) -> Result<()> {
    let started = Instant::now();
    let section = ctx
        .config
        .verify_identity
        .clone()
        .ok_or_else(|| anyhow!("verify-identity needs a \"verify_identity\" config section"))?;
    let mu = ctx.config.build_measure()?;
    let (p, alpha) = ctx
        .config
        .spaces
        .as_ref()
        .map(|s| (s.p, s.alpha))
        .unwrap_or((2.0, 0.0));
    let truncation = ctx
        .config
        .operator
        .as_ref()
        .map(|o| o.truncation)
        .unwrap_or(320);
    let gate = well_definedness_gate(&mu, p, alpha).map_err(core_err)?;
    let tol = ctx.tol();

    let functions: Vec<TaylorPoly> = section
        .functions
        .iter()
        .map(|spec| spec.build(p, alpha))
        .collect::<Result<_>>()?;
    let z_grid = disk_grid(section.radius);

    let rows: Vec<(f64, usize, Complex64, f64)> = ctx.with_pool(|| {
        section
            .betas
            .par_iter()
            .map(|&beta| {
                let op = hmu_core::OperatorSpec::new(beta, mu.clone(), truncation)
                    .map_err(core_err)?;
                let mut rows = Vec::new();
                for (fn_index, f) in functions.iter().enumerate() {
                    let hf = op.apply_matrix(f).map_err(core_err)?;
                    for &z in &z_grid {
                        let series = hf.evaluate(z);
                        let integral = op.apply_integral(f, z, tol).map_err(core_err)?;
                        let residual =
                            (series - integral).norm() / (1.0 + integral.norm());
                        rows.push((beta, fn_index, z, residual));
                    }
                }
                Ok(rows)
            })
            .collect::<Result<Vec<_>>>()
            .map(|nested| nested.into_iter().flatten().collect())
    })?;

    let mut csv = CsvWriter::new(&ctx.hash, &["beta", "fn", "re_z", "im_z", "residual"]);
    if !gate.passed() {
        csv.comment(&format!(
            "warning: measure fails the well-definedness gate at exponent {}",
            fmt_float(gate.exponent())
        ));
    }
    let mut max_residual = 0.0_f64;
    for (beta, fn_index, z, residual) in &rows {
        csv.row_mixed(
            &format!("{},{}", fmt_float(*beta), fn_index),
            &[z.re, z.im, *residual],
        );
        max_residual = max_residual.max(*residual);
    }
    csv.write(&ctx.out_dir.join("identity_residuals.csv"))?;

    write_json(
        &ctx.out_dir.join("identity_summary.json"),
        &ctx.hash,
        &IdentitySummary {
            max_residual,
            gate: gate.clone(),
            cases: rows.len(),
        },
    )?;

    println!(
        "verify-identity: {} cases, max residual {}, rtol {}, gate {}",
        rows.len(),
        fmt_float(max_residual),
        fmt_float(section.rtol),
        if gate.passed() {
            "pass".to_string()
        } else {
            format!("FAIL (exponent {})", fmt_float(gate.exponent()))
        }
    );
    if max_residual > section.rtol {
        return Err(anyhow::Error::new(NumericalFailure(format!(
            "identity residual {} exceeds tolerance {}",
            fmt_float(max_residual),
            fmt_float(section.rtol)
        ))));
    }
    ctx.finish("verify-identity", started)
}

/// A computation completed but violated its numerical contract; maps to
/// exit code 3.
#[derive(Debug)]
pub struct NumericalFailure(pub String);

impl std::fmt::Display for NumericalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for NumericalFailure {}

fn disk_grid(radius: f64) -> Vec<Complex64> {
    let mut grid = vec![Complex64::new(0.0, 0.0)];
    for &r in &[0.5 * radius, radius] {
        for j in 0..8 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 8.0;
            grid.push(Complex64::new(r * theta.cos(), r * theta.sin()));
        }
    }
    grid
}

pub fn cmd_probe(ctx: &RunContext) -> Result<()> {
    let started = Instant::now();
    let section = ctx
        .config
        .probe
        .clone()
        .ok_or_else(|| anyhow!("probe needs a \"probe\" config section"))?;
    match section.kind {
        ProbeKind::LowerBoundScan => probe_lower_bound(ctx, &section)?,
        ProbeKind::RatioSup => probe_ratio_sup(ctx, &section)?,
        ProbeKind::Duality => probe_duality(ctx, &section)?,
        ProbeKind::Compactness => probe_compactness(ctx, &section)?,
    }
    ctx.finish("probe", started)
}

fn write_probe_result(ctx: &RunContext, name: &str, result: &ProbeResult) -> Result<()> {
    let mut csv = CsvWriter::new(&ctx.hash, &["parameter", "value", "aux", "ratio"]);
    for row in &result.rows {
        csv.row(&[row.parameter, row.value, row.aux, row.ratio]);
    }
    csv.write(&ctx.out_dir.join(format!("{name}.csv")))?;
    // the JSON result carries the effective run description (seed, grids,
    // tolerances) next to the rows so a file is reproducible on its own
    #[derive(Serialize)]
    struct ProbeRecord<'a> {
        seed: u64,
        tolerances: &'a crate::config::ToleranceSection,
        probe: &'a crate::config::ProbeSection,
        result: &'a ProbeResult,
    }
    let record = ProbeRecord {
        seed: ctx.config.seed,
        tolerances: &ctx.config.tolerances,
        probe: ctx
            .config
            .probe
            .as_ref()
            .expect("probe commands carry a probe section"),
        result,
    };
    write_json(&ctx.out_dir.join(format!("{name}.json")), &ctx.hash, &record)?;
    println!(
        "{name}: sup {} slope {} verdict {:?}{}",
        fmt_float(result.sup),
        result
            .slope
            .map(fmt_float)
            .unwrap_or_else(|| "n/a".into()),
        result.verdict,
        result
            .vanishing
            .map(|v| format!(" vanishing {v:?}"))
            .unwrap_or_default()
    );
    Ok(())
}

fn probe_lower_bound(ctx: &RunContext, section: &ProbeSection) -> Result<()> {
    let op = ctx.config.build_operator()?;
    let (params, q) = ctx.config.space_params()?;
    let a_grid = section
        .a_grid
        .as_ref()
        .ok_or_else(|| anyhow!("lower-bound-scan needs probe.a_grid"))?
        .build()?;
    let tol = ctx.tol();
    let results: Vec<ProbeResult> = ctx.with_pool(|| {
        a_grid
            .par_iter()
            .map(|&a| {
                lower_bound_scan(&op, params.p, q, params.alpha, &[a], tol).map_err(core_err)
            })
            .collect()
    })?;
    let rows: Vec<_> = results.into_iter().flat_map(|r| r.rows).collect();
    let headline: Vec<f64> = rows.iter().map(|r| r.value).collect();
    let dists: Vec<f64> = rows.iter().map(|r| 1.0 - r.parameter).collect();
    let merged = summarize_rows(rows, &headline, &dists);
    write_probe_result(ctx, "lower_bound_scan", &merged)
}

fn probe_ratio_sup(ctx: &RunContext, section: &ProbeSection) -> Result<()> {
    let op = ctx.config.build_operator()?;
    let (bergman_source, q) = ctx.config.space_params()?;
    let family: TestFamily = section
        .family
        .unwrap_or(FamilySpec::BergmanF)
        .into();
    let beta = op.beta();
    // the family picks the space pairing: Bergman-to-Bergman by default,
    // Dirichlet-to-Dirichlet for the Dirichlet witnesses, and the Bloch
    // side for the q = 1 log route
    let (source, target) = match family {
        TestFamily::DirichletF => {
            if !(beta - 1.0 > -1.0) {
                bail!("dirichlet ratio-sup needs beta > 0, got {beta}");
            }
            (
                SpaceParams::dirichlet(bergman_source.p, bergman_source.alpha),
                SpaceParams::dirichlet(q, beta - 1.0),
            )
        }
        TestFamily::LogG => {
            if !(beta - 2.0 > -1.0) {
                bail!("ratio-sup target weight beta - 2 = {} must exceed -1", beta - 2.0);
            }
            (SpaceParams::bloch(), SpaceParams::bergman(q, beta - 2.0))
        }
        _ => {
            if !(beta - 2.0 > -1.0) {
                bail!("ratio-sup target weight beta - 2 = {} must exceed -1", beta - 2.0);
            }
            (bergman_source, SpaceParams::bergman(q, beta - 2.0))
        }
    };
    let tol = ctx.tol();
    let base = ProbeConfig {
        source,
        target,
        family,
        a_grid: vec![],
        seed: ctx.config.seed,
        tol,
    };
    let merged = if family == TestFamily::RandomPoly {
        // member substreams derive from (seed, index) inside the core, so
        // one sequential call is already deterministic
        ctx.with_pool(|| ratio_sup(&op, &base, section.random_count).map_err(core_err))?
    } else {
        let a_grid = section
            .a_grid
            .as_ref()
            .ok_or_else(|| anyhow!("ratio-sup with a kernel family needs probe.a_grid"))?
            .build()?;
        let results: Vec<ProbeResult> = ctx.with_pool(|| {
            a_grid
                .par_iter()
                .map(|&a| {
                    let config = ProbeConfig {
                        a_grid: vec![a],
                        ..base.clone()
                    };
                    ratio_sup(&op, &config, 0).map_err(core_err)
                })
                .collect()
        })?;
        let rows: Vec<_> = results.into_iter().flat_map(|r| r.rows).collect();
        let headline: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        let dists: Vec<f64> = rows.iter().map(|r| 1.0 - r.parameter).collect();
        summarize_rows(rows, &headline, &dists)
    };
    write_probe_result(ctx, "ratio_sup", &merged)
}

fn probe_duality(ctx: &RunContext, section: &ProbeSection) -> Result<()> {
    let op = ctx.config.build_operator()?;
    if !(op.beta() > 1.0) {
        bail!("duality probes need beta > 1");
    }
    let (p, alpha) = ctx
        .config
        .spaces
        .as_ref()
        .map(|s| (s.p, s.alpha))
        .unwrap_or((2.0, 0.0));
    let specs = section.duality_functions.clone().unwrap_or_default();
    let functions: Vec<TaylorPoly> = if specs.is_empty() {
        vec![
            TaylorPoly::from_real(&[1.0, 0.5, 0.0, -0.25]),
            TaylorPoly::from_real(&[0.5, -1.0, 0.75]),
            TaylorPoly::from_real(&[0.0, 1.0, 0.0, 0.0, 0.5]),
        ]
    } else {
        specs
            .iter()
            .map(|s| s.build(p, alpha))
            .collect::<Result<_>>()?
    };
    let beta = op.beta();
    let grid_b = QuadratureGrid::auto_for(op.truncation().min(128) + 16, beta - 2.0)
        .map_err(core_err)?;
    let grid_d = QuadratureGrid::auto_for(op.truncation().min(128) + 16, beta - 1.0)
        .map_err(core_err)?;
    let tol = ctx.tol();

    let mut pairs = Vec::new();
    for i in 0..functions.len() {
        for j in 0..functions.len() {
            pairs.push((i, j));
        }
    }
    let checks: Vec<(usize, usize, DualityCheck, DualityCheck)> = ctx.with_pool(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let b = duality_identity_bergman(&op, &functions[i], &functions[j], &grid_b, tol)
                    .map_err(core_err)?;
                let d = duality_identity_dirichlet(&op, &functions[i], &functions[j], &grid_d, tol)
                    .map_err(core_err)?;
                Ok((i, j, b, d))
            })
            .collect()
    })?;

    let mut csv = CsvWriter::new(
        &ctx.hash,
        &[
            "f", "g", "kind", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual",
        ],
    );
    let mut max_residual = 0.0_f64;
    for (i, j, b, d) in &checks {
        csv.row_mixed(
            &format!("{i},{j},bergman"),
            &[b.lhs_re, b.lhs_im, b.rhs_re, b.rhs_im, b.residual],
        );
        csv.row_mixed(
            &format!("{i},{j},dirichlet"),
            &[d.lhs_re, d.lhs_im, d.rhs_re, d.rhs_im, d.residual],
        );
        max_residual = max_residual.max(b.residual).max(d.residual);
    }
    csv.write(&ctx.out_dir.join("duality.csv"))?;
    println!(
        "duality: {} pairs, max residual {}",
        checks.len(),
        fmt_float(max_residual)
    );
    Ok(())
}

fn probe_compactness(ctx: &RunContext, section: &ProbeSection) -> Result<()> {
    let op = ctx.config.build_operator()?;
    let (source, _) = ctx.config.space_params()?;
    let s = section
        .s
        .ok_or_else(|| anyhow!("compactness probes need probe.s"))?;
    let family: TestFamily = section
        .family
        .unwrap_or(FamilySpec::BergmanF)
        .into();
    let r_grid = section
        .r_grid
        .as_ref()
        .ok_or_else(|| anyhow!("compactness probes need probe.r_grid"))?
        .build()?;
    let tol = ctx.tol();
    // the rows share one normalization and the verdict spans the whole
    // table, so the probe runs as one pool task
    let result = ctx.with_pool(|| {
        compactness_probe(&op, &source, s, &r_grid, family, tol).map_err(core_err)
    })?;
    write_probe_result(ctx, "compactness", &result)
}

/// Re-hashes the config and checks every result file in the output
/// directory against it.
pub fn cmd_verify_outputs(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let bad = crate::output::verify_hashes(&ctx.out_dir, &ctx.hash)?;
    if bad.is_empty() {
        println!(
            "verify-outputs: all result files in {} match config hash {}",
            ctx.out_dir.display(),
            &ctx.hash[..16]
        );
    } else {
        for path in &bad {
            eprintln!("hash mismatch: {}", path.display());
        }
    }
    Ok(bad)
}

/// Maps a core error to the CLI exit code contract:
/// truncation failures are 4, other numerical failures 3, parameter
/// problems 2.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    if let Some(core) = err.downcast_ref::<hmu_core::Error>() {
        return match core {
            hmu_core::Error::TruncationInsufficient { .. } => 4,
            hmu_core::Error::NonConvergent { .. }
            | hmu_core::Error::GridTooCoarse { .. }
            | hmu_core::Error::DegenerateTail { .. } => 3,
            hmu_core::Error::InvalidCase(_) | hmu_core::Error::InvalidParameter(_) => 2,
        };
    }
    if err.downcast_ref::<NumericalFailure>().is_some() {
        return 3;
    }
    2
}

fn core_err(e: hmu_core::Error) -> anyhow::Error {
    anyhow::Error::new(e)
}
