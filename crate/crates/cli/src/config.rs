//! JSON experiment configuration: schema, validation, and assembly of the
//! core objects it describes.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use hmu_core::carleson::{geometric_grid, TheoremCase};
use hmu_core::measure::{Atom, DensityTerm, MeasureSpec};
use hmu_core::operator::OperatorSpec;
use hmu_core::probes::TestFamily;
use hmu_core::spaces::{SpaceKind, SpaceParams};
use hmu_core::taylor::TaylorPoly;

/// One component of the measure mixture.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasureComponent {
    /// Point mass at `location` with `weight`.
    Atom { location: f64, weight: f64 },
    /// Density `scale (1-t)^power (log 2/(1-t))^log_power dt`.
    Density {
        scale: f64,
        power: f64,
        #[serde(default)]
        log_power: f64,
    },
    /// The pure power family `s (1-t)^(s-1) dt` with tail `(1-t)^s`.
    PowerTail { s: f64 },
}

/// A grid: either explicit points or geometric in the distance to 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Explicit(Vec<f64>),
    Geometric {
        min_dist: f64,
        max_dist: f64,
        points: usize,
    },
}

impl GridSpec {
    pub fn build(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::Explicit(points) => {
                if points.is_empty() {
                    bail!("grid must contain at least one point");
                }
                let mut prev = -1.0;
                for &t in points {
                    if !(0.0..1.0).contains(&t) || t <= prev {
                        bail!("explicit grid must be strictly increasing within [0, 1)");
                    }
                    prev = t;
                }
                Ok(points.clone())
            }
            GridSpec::Geometric {
                min_dist,
                max_dist,
                points,
            } => {
                if *points < 2 || !(*min_dist > 0.0) || !(max_dist > min_dist) || *max_dist > 1.0 {
                    bail!(
                        "geometric grid needs points >= 2 and 0 < min_dist < max_dist <= 1, got \
                         min_dist={min_dist}, max_dist={max_dist}, points={points}"
                    );
                }
                Ok(geometric_grid(*min_dist, *max_dist, *points))
            }
        }
    }
}

fn default_tail_grid() -> GridSpec {
    GridSpec::Geometric {
        min_dist: 1e-6,
        max_dist: 0.1,
        points: 40,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSection {
    pub beta: f64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
}

fn default_truncation() -> usize {
    256
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacesSection {
    pub p: f64,
    #[serde(default)]
    pub q: Option<f64>,
    pub alpha: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsSection {
    #[serde(default = "default_moment_count")]
    pub max_index: usize,
    #[serde(default = "default_tail_grid")]
    pub tail_grid: GridSpec,
}

impl Default for MomentsSection {
    fn default() -> Self {
        MomentsSection {
            max_index: default_moment_count(),
            tail_grid: default_tail_grid(),
        }
    }
}

fn default_moment_count() -> usize {
    32
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySection {
    /// Carleson exponent to test against; when absent only the fit runs.
    #[serde(default)]
    pub exponent: Option<f64>,
    #[serde(default)]
    pub log_order: f64,
    #[serde(default = "default_tail_grid")]
    pub grid: GridSpec,
    /// Optional theorem case whose threshold exponent should be used.
    #[serde(default)]
    pub theorem_case: Option<TheoremCaseSpec>,
}

/// Mirrors [`TheoremCase`] in config syntax.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremCaseSpec {
    T31I,
    T31Ii,
    T31Iii,
    T41Necessary,
    T41Sufficient,
    T41Q1,
    T43Necessary,
    T43Sufficient,
    T401,
    T403,
}

impl From<TheoremCaseSpec> for TheoremCase {
    fn from(spec: TheoremCaseSpec) -> Self {
        match spec {
            TheoremCaseSpec::T31I => TheoremCase::T31I,
            TheoremCaseSpec::T31Ii => TheoremCase::T31Ii,
            TheoremCaseSpec::T31Iii => TheoremCase::T31Iii,
            TheoremCaseSpec::T41Necessary => TheoremCase::T41Necessary,
            TheoremCaseSpec::T41Sufficient => TheoremCase::T41Sufficient,
            TheoremCaseSpec::T41Q1 => TheoremCase::T41Q1,
            TheoremCaseSpec::T43Necessary => TheoremCase::T43Necessary,
            TheoremCaseSpec::T43Sufficient => TheoremCase::T43Sufficient,
            TheoremCaseSpec::T401 => TheoremCase::T401,
            TheoremCaseSpec::T403 => TheoremCase::T403,
        }
    }
}

/// How `apply` obtains its input function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// Explicit coefficients as `[re, im]` pairs.
    Coeffs { values: Vec<[f64; 2]> },
    /// Coefficients from a JSON file in the same `[[re, im], ...]` layout
    /// the toolkit writes.
    File { path: PathBuf },
    /// Geometric coefficients `ratio^k`, `k <= degree`.
    Geometric { ratio: f64, degree: usize },
    /// The monomial `z^k`.
    Monomial { k: usize },
    /// Bergman extremal family member.
    BergmanF { a: f64, n_terms: usize },
    /// Dirichlet extremal family member.
    DirichletF { a: f64, n_terms: usize },
    /// Logarithmic family member.
    LogG { a: f64, n_terms: usize },
}

impl FunctionSpec {
    pub fn build(&self, p: f64, alpha: f64) -> Result<TaylorPoly> {
        use hmu_core::spaces::{test_f_bergman, test_f_dirichlet, test_g_log};
        let poly = match self {
            FunctionSpec::Coeffs { values } => TaylorPoly::new(
                values
                    .iter()
                    .map(|p| hmu_core::Complex64::new(p[0], p[1]))
                    .collect(),
            ),
            FunctionSpec::File { path } => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading coefficients from {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing coefficients in {}", path.display()))?
            }
            FunctionSpec::Geometric { ratio, degree } => {
                if ratio.abs() >= 1.0 {
                    bail!("geometric coefficient ratio must satisfy |ratio| < 1");
                }
                let coeffs: Vec<f64> = (0..=*degree).map(|k| ratio.powi(k as i32)).collect();
                TaylorPoly::from_real(&coeffs)
            }
            FunctionSpec::Monomial { k } => TaylorPoly::monomial(*k),
            FunctionSpec::BergmanF { a, n_terms } => test_f_bergman(*a, p, alpha, *n_terms)?,
            FunctionSpec::DirichletF { a, n_terms } => test_f_dirichlet(*a, p, alpha, *n_terms)?,
            FunctionSpec::LogG { a, n_terms } => test_g_log(*a, *n_terms)?,
        };
        Ok(poly)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApplySection {
    pub function: FunctionSpec,
    #[serde(default = "default_eval_radius")]
    pub eval_radius: f64,
    /// When set, also dump the truncated matrix entries (n, k, entry) up to
    /// this order.
    #[serde(default)]
    pub dump_matrix: Option<usize>,
}

fn default_eval_radius() -> f64 {
    0.7
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyIdentitySection {
    pub functions: Vec<FunctionSpec>,
    pub betas: Vec<f64>,
    #[serde(default = "default_eval_radius")]
    pub radius: f64,
    #[serde(default = "default_identity_rtol")]
    pub rtol: f64,
}

fn default_identity_rtol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    LowerBoundScan,
    RatioSup,
    Duality,
    Compactness,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilySpec {
    BergmanF,
    DirichletF,
    LogG,
    RandomPoly,
}

impl From<FamilySpec> for TestFamily {
    fn from(f: FamilySpec) -> Self {
        match f {
            FamilySpec::BergmanF => TestFamily::BergmanF,
            FamilySpec::DirichletF => TestFamily::DirichletF,
            FamilySpec::LogG => TestFamily::LogG,
            FamilySpec::RandomPoly => TestFamily::RandomPoly,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub kind: ProbeKind,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub a_grid: Option<GridSpec>,
    #[serde(default)]
    pub r_grid: Option<GridSpec>,
    /// Carleson exponent for compactness probes.
    #[serde(default)]
    pub s: Option<f64>,
    /// Number of random family members for ratio-sup runs.
    #[serde(default = "default_random_count")]
    pub random_count: usize,
    /// Degree bound for duality-check polynomials.
    #[serde(default)]
    pub duality_functions: Option<Vec<FunctionSpec>>,
}

fn default_random_count() -> usize {
    8
}

/// Where result files go when `--out` is not given.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    #[serde(default = "default_integrate_tol")]
    pub integrate: f64,
}

fn default_integrate_tol() -> f64 {
    1e-10
}

impl Default for ToleranceSection {
    fn default() -> Self {
        ToleranceSection {
            integrate: default_integrate_tol(),
        }
    }
}

/// Top-level experiment configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub measure: Vec<MeasureComponent>,
    #[serde(default)]
    pub operator: Option<OperatorSection>,
    #[serde(default)]
    pub spaces: Option<SpacesSection>,
    #[serde(default)]
    pub moments: Option<MomentsSection>,
    #[serde(default)]
    pub classify: Option<ClassifySection>,
    #[serde(default)]
    pub apply: Option<ApplySection>,
    #[serde(default)]
    pub verify_identity: Option<VerifyIdentitySection>,
    #[serde(default)]
    pub probe: Option<ProbeSection>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerances: ToleranceSection,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    0
}

impl ExperimentConfig {
    /// Parses and validates a config file; errors carry line/column
    /// positions from the JSON parser.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.build_measure()?;
        if let Some(op) = &self.operator {
            if !(op.beta > 0.0) || !op.beta.is_finite() {
                bail!("operator.beta must be positive, got {}", op.beta);
            }
            if op.truncation == 0 || op.truncation > (1 << 17) {
                bail!("operator.truncation must lie in 1..=131072");
            }
        }
        if let Some(sp) = &self.spaces {
            SpaceParams::bergman(sp.p, sp.alpha)
                .validate()
                .map_err(|e| anyhow!("spaces section: {e}"))?;
            if let Some(q) = sp.q {
                if !(q > 0.0) {
                    bail!("spaces.q must be positive, got {q}");
                }
            }
        }
        if let Some(c) = &self.classify {
            c.grid.build()?;
            if let Some(s) = c.exponent {
                if !(s > 0.0) {
                    bail!("classify.exponent must be positive, got {s}");
                }
            }
            if !(c.log_order >= 0.0) {
                bail!("classify.log_order must be nonnegative");
            }
        }
        if let Some(p) = &self.probe {
            if let Some(g) = &p.a_grid {
                g.build()?;
            }
            if let Some(g) = &p.r_grid {
                g.build()?;
            }
            if p.kind == ProbeKind::Compactness && p.s.is_none() {
                bail!("compactness probes need probe.s");
            }
        }
        if !(self.tolerances.integrate > 0.0) {
            bail!("tolerances.integrate must be positive");
        }
        Ok(())
    }

    pub fn build_measure(&self) -> Result<MeasureSpec> {
        let mut atoms = Vec::new();
        let mut densities = Vec::new();
        for component in &self.measure {
            match component {
                MeasureComponent::Atom { location, weight } => atoms.push(Atom {
                    location: *location,
                    weight: *weight,
                }),
                MeasureComponent::Density {
                    scale,
                    power,
                    log_power,
                } => densities.push(DensityTerm {
                    scale: *scale,
                    power: *power,
                    log_power: *log_power,
                    cutoff: 0.0,
                }),
                MeasureComponent::PowerTail { s } => {
                    if !(*s > 0.0) {
                        bail!("power-tail exponent must be positive, got {s}");
                    }
                    densities.push(DensityTerm {
                        scale: *s,
                        power: *s - 1.0,
                        log_power: 0.0,
                        cutoff: 0.0,
                    });
                }
            }
        }
        MeasureSpec::from_parts(atoms, densities).map_err(|e| anyhow!("measure section: {e}"))
    }

    pub fn build_operator(&self) -> Result<OperatorSpec> {
        let section = self
            .operator
            .as_ref()
            .ok_or_else(|| anyhow!("this command needs an \"operator\" config section"))?;
        OperatorSpec::new(section.beta, self.build_measure()?, section.truncation)
            .map_err(|e| anyhow!("operator section: {e}"))
    }

    pub fn space_params(&self) -> Result<(SpaceParams, f64)> {
        let section = self
            .spaces
            .as_ref()
            .ok_or_else(|| anyhow!("this command needs a \"spaces\" config section"))?;
        let params = SpaceParams {
            kind: SpaceKind::Bergman,
            p: section.p,
            alpha: section.alpha,
        };
        Ok((params, section.q.unwrap_or(section.p)))
    }
}
