//! Carleson-measure classification on `[0, 1)` and the theorem threshold
//! exponents.
//!
//! All conditions are taken in radial tail form: a measure is `s`-Carleson
//! when `tail(t) <= C (1-t)^s`, logarithmic variants strengthen the bound
//! by a power of `log(2/(1-t))`, and vanishing variants ask the ratio to
//! tend to zero. Grid suprema stand in for true suprema; the grids are
//! geometric in `1-t` so the ratios of the representable density family are
//! monotone between refinements.

use alloc::vec::Vec;
// float math in no_std builds; shadowed by the inherent methods
// whenever a std-enabled dependency is linked in
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::measure::MeasureSpec;
use crate::{Result, spaces::SpaceParams};

const LN2: f64 = core::f64::consts::LN_2;

/// Geometric grid in `1 - t`: `count` points with `1 - t` ranging from
/// `max_dist` down to `min_dist`, increasing in `t`.
pub fn geometric_grid(min_dist: f64, max_dist: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && min_dist > 0.0 && max_dist > min_dist && max_dist <= 1.0);
    let ratio = (min_dist / max_dist).powf(1.0 / (count as f64 - 1.0));
    let mut dist = max_dist;
    let mut grid = Vec::with_capacity(count);
    for _ in 0..count {
        grid.push(1.0 - dist);
        dist *= ratio;
    }
    grid
}

/// Default classification grid: 40 points geometric from `1-t = 0.1` down
/// to `1-t = 1e-6`.
pub fn default_t_grid() -> Vec<f64> {
    geometric_grid(1e-6, 0.1, 40)
}

/// A grid query against the `log_order`-logarithmic `exponent`-Carleson
/// condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarlesonQuery {
    pub exponent: f64,
    pub log_order: f64,
    pub t_grid: Vec<f64>,
}

impl CarlesonQuery {
    pub fn new(exponent: f64, log_order: f64, t_grid: Vec<f64>) -> Result<Self> {
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Carleson exponent must be positive, got {exponent}"
            )));
        }
        if !(log_order >= 0.0) || !log_order.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Carleson log order must be nonnegative, got {log_order}"
            )));
        }
        if t_grid.is_empty() {
            return Err(Error::InvalidParameter("t grid must be nonempty".into()));
        }
        let mut prev = -1.0;
        for &t in &t_grid {
            if !(0.0..1.0).contains(&t) || t <= prev {
                return Err(Error::InvalidParameter(
                    "t grid must be strictly increasing within [0, 1)".into(),
                ));
            }
            prev = t;
        }
        Ok(CarlesonQuery {
            exponent,
            log_order,
            t_grid,
        })
    }

    /// Plain (non-logarithmic) query on the default grid.
    pub fn plain(exponent: f64) -> Result<Self> {
        Self::new(exponent, 0.0, default_t_grid())
    }
}

/// One row of a ratio table: `ratio = tail * log(2/(1-t))^a / (1-t)^s`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RatioRow {
    pub t: f64,
    pub tail: f64,
    pub ratio: f64,
}

/// Verdict of a vanishing probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VanishingVerdict {
    Vanishing,
    NonVanishing,
    Inconclusive,
}

/// Result of a grid classification. `constant_sup` is the grid supremum of
/// the ratio table: a certified lower bound on the true Carleson constant
/// and the probe's working value.
#[derive(Debug, Clone, Serialize)]
pub struct CarlesonReport {
    pub constant_sup: f64,
    pub ratio_table: Vec<RatioRow>,
    pub vanishing_verdict: VanishingVerdict,
    /// Fitted tail model `C (1-t)^s (log 2/(1-t))^b`; this is `s`.
    pub fitted_exponent: f64,
    /// Exponent `b` of the log factor in the fitted tail model. A measure
    /// that is `a`-logarithmic s-Carleson in the numerator convention has
    /// `b = -a` here.
    pub fitted_log_order: f64,
    /// Set when the ratios still grow toward `t = 1`, i.e. the queried
    /// exponent overshoots the actual tail decay.
    pub growth_detected: bool,
}

/// Log-log slope of `values` against `1 - t`: for `ratio ~ (1-t)^m` this
/// recovers `m`, so negative slopes mean growth toward the boundary.
/// Zero rows are skipped; returns `None` if fewer than two usable rows.
fn log_log_slope(dists: &[f64], values: &[f64]) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&d, &v) in dists.iter().zip(values.iter()) {
        if v > 0.0 && d > 0.0 {
            xs.push(d.ln());
            ys.push(v.ln());
        }
    }
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

fn decay_verdict(values: &[f64]) -> VanishingVerdict {
    let first = values.first().copied().unwrap_or(0.0);
    let last = values.last().copied().unwrap_or(0.0);
    if first == 0.0 {
        return VanishingVerdict::Vanishing;
    }
    let frac = last / first;
    if frac <= 0.1 {
        VanishingVerdict::Vanishing
    } else if frac >= 0.9 {
        VanishingVerdict::NonVanishing
    } else {
        VanishingVerdict::Inconclusive
    }
}

/// Evaluates the ratio table of a measure against a query and summarizes
/// it: grid supremum, vanishing verdict, fitted exponents, and a growth
/// flag for ratios that diverge toward the boundary.
pub fn carleson_constant(mu: &MeasureSpec, query: &CarlesonQuery) -> CarlesonReport {
    let mut table = Vec::with_capacity(query.t_grid.len());
    let mut dists = Vec::with_capacity(query.t_grid.len());
    for &t in &query.t_grid {
        let dist = 1.0 - t;
        let tail = mu.tail(t);
        let ratio = tail * (LN2 - dist.ln()).powf(query.log_order) / dist.powf(query.exponent);
        table.push(RatioRow { t, tail, ratio });
        dists.push(dist);
    }
    let constant_sup = table.iter().map(|r| r.ratio).fold(0.0, f64::max);

    // look at the last decade of 1-t for the trend toward the boundary
    let min_dist = dists.last().copied().unwrap_or(1e-6);
    let decade: Vec<usize> = (0..table.len())
        .filter(|&i| dists[i] <= 10.0 * min_dist)
        .collect();
    let decade_dists: Vec<f64> = decade.iter().map(|&i| dists[i]).collect();
    let decade_ratios: Vec<f64> = decade.iter().map(|&i| table[i].ratio).collect();
    let slope = log_log_slope(&decade_dists, &decade_ratios);
    let growth_detected = matches!(slope, Some(m) if m <= -0.2);

    let vanishing_verdict = match decay_verdict(&table.iter().map(|r| r.ratio).collect::<Vec<_>>())
    {
        // a grid can only certify decay if it is not still rising elsewhere
        VanishingVerdict::Vanishing if growth_detected => VanishingVerdict::Inconclusive,
        v => v,
    };

    let (fitted_exponent, fitted_log_order) =
        fit_exponent(mu, &query.t_grid).unwrap_or((f64::NAN, f64::NAN));

    CarlesonReport {
        constant_sup,
        ratio_table: table,
        vanishing_verdict,
        fitted_exponent,
        fitted_log_order,
        growth_detected,
    }
}

/// Least-squares fit of `log tail(t)` against `log(1-t)` and
/// `log log(2/(1-t))`: returns `(s_hat, b_hat)` for the tail model
/// `C (1-t)^s_hat (log 2/(1-t))^b_hat`.
///
/// Fails with [`Error::DegenerateTail`] as soon as the tail vanishes at a
/// grid point (purely atomic measures beyond their last atom).
pub fn fit_exponent(mu: &MeasureSpec, t_grid: &[f64]) -> Result<(f64, f64)> {
    if t_grid.len() < 3 {
        return Err(Error::InvalidParameter(
            "exponent fit needs at least three grid points".into(),
        ));
    }
    // 3-parameter linear least squares via normal equations
    let mut ata = [[0.0_f64; 3]; 3];
    let mut atb = [0.0_f64; 3];
    for &t in t_grid {
        let tail = mu.tail(t);
        if !(tail > 0.0) {
            return Err(Error::DegenerateTail { at: t });
        }
        let dist = 1.0 - t;
        let row = [1.0, dist.ln(), (LN2 - dist.ln()).ln()];
        let y = tail.ln();
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * y;
        }
    }
    let coeffs = solve3(ata, atb).ok_or_else(|| {
        Error::InvalidParameter("exponent fit normal equations are singular".into())
    })?;
    Ok((coeffs[1], coeffs[2]))
}

/// Gaussian elimination with partial pivoting for a 3x3 system.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let m = a[row][col] / a[col][col];
            #[allow(clippy::needless_range_loop)]
            for k in col..3 {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; 3];
    for col in (0..3).rev() {
        let mut acc = b[col];
        for k in col + 1..3 {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

/// Rows of a vanishing probe: for each `r`, the supremum of
/// `tail(t) / (1-t)^s` over grid points `t >= r`. This is the computable
/// surrogate for the decay of the tail-restricted embedding norm.
#[derive(Debug, Clone, Serialize)]
pub struct VanishingProbe {
    pub rows: Vec<(f64, f64)>,
    pub verdict: VanishingVerdict,
}

pub fn vanishing_probe(mu: &MeasureSpec, s: f64, r_grid: &[f64]) -> VanishingProbe {
    let rows: Vec<(f64, f64)> = r_grid
        .iter()
        .map(|&r| {
            let inner_min = ((1.0 - r) * 1e-4).max(1e-10);
            let mut sup = mu.tail(r) / (1.0 - r).powf(s);
            for t in geometric_grid(inner_min, 1.0 - r, 24) {
                let t = t.max(r);
                sup = sup.max(mu.tail(t) / (1.0 - t).powf(s));
            }
            (r, sup)
        })
        .collect();
    let verdict = decay_verdict(&rows.iter().map(|&(_, v)| v).collect::<Vec<_>>());
    VanishingProbe { rows, verdict }
}

/// The theorem case a [`ThresholdQuery`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremCase {
    /// Well-definedness, `0 < p <= 1`.
    T31I,
    /// Well-definedness, `1 <= p <= 2`.
    T31Ii,
    /// Well-definedness, `2 <= p`.
    T31Iii,
    /// Bergman-to-Bergman necessity, `q > 1`.
    T41Necessary,
    /// Bergman-to-Bergman sufficiency, `q > 1`.
    T41Sufficient,
    /// Bergman target `q = 1`: logarithmic condition.
    T41Q1,
    /// Dirichlet-to-Dirichlet necessity, `q > 1`.
    T43Necessary,
    /// Dirichlet-to-Dirichlet sufficiency, `q > 1`.
    T43Sufficient,
    /// Bergman-to-Bergman with the operator exponent tied to the weight
    /// (`beta = alpha + 2`), where the condition is two-sided.
    T401,
    /// Dirichlet-to-Dirichlet with the tied exponent, two-sided.
    T403,
}

/// Parameters of a threshold-exponent query.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThresholdQuery {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub case: TheoremCase,
}

/// A logarithmic Carleson condition: `log_order`-logarithmic
/// `exponent`-Carleson.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogCarlesonSpec {
    pub exponent: f64,
    pub log_order: f64,
}

/// Threshold produced by [`threshold_exponent`]: either a pure power
/// exponent or a logarithmic condition (the `q = 1` routes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Threshold {
    Pure(f64),
    Logarithmic(LogCarlesonSpec),
}

impl Threshold {
    /// The power exponent regardless of variant.
    pub fn exponent(&self) -> f64 {
        match self {
            Threshold::Pure(s) => *s,
            Threshold::Logarithmic(spec) => spec.exponent,
        }
    }
}

/// The exact Carleson exponent demanded by the selected theorem case; pure
/// arithmetic in `(p, q, alpha, beta)`.
pub fn threshold_exponent(query: &ThresholdQuery) -> Result<Threshold> {
    let ThresholdQuery {
        p,
        q,
        alpha,
        beta,
        case,
    } = *query;
    if !(p > 0.0) || !(q > 0.0) || !(alpha > -1.0) {
        return Err(Error::InvalidCase(format!(
            "need p > 0, q > 0, alpha > -1; got p={p}, q={q}, alpha={alpha}"
        )));
    }
    let q_conj = q / (q - 1.0);
    let need = |cond: bool, msg: &str| -> Result<()> {
        if cond {
            Ok(())
        } else {
            Err(Error::InvalidCase(format!("{msg} (p={p}, q={q}, alpha={alpha}, beta={beta})")))
        }
    };
    match case {
        TheoremCase::T31I => {
            need(p <= 1.0, "case requires 0 < p <= 1")?;
            Ok(Threshold::Pure((alpha + 2.0) / p))
        }
        TheoremCase::T31Ii => {
            need((1.0..=2.0).contains(&p), "case requires 1 <= p <= 2")?;
            Ok(Threshold::Pure((alpha + 2.0 - (p - 1.0) * (p - 1.0)) / p))
        }
        TheoremCase::T31Iii => {
            need(p >= 2.0, "case requires p >= 2")?;
            Ok(Threshold::Pure((alpha + 1.0) / p))
        }
        TheoremCase::T41Necessary => {
            need(q > 1.0 && q >= p && beta > 1.0, "case requires q >= p, q > 1, beta > 1")?;
            Ok(Threshold::Pure((alpha + 2.0) / p + beta / q_conj))
        }
        TheoremCase::T41Sufficient => {
            need(q > 1.0 && q >= p && beta > 1.0, "case requires q >= p, q > 1, beta > 1")?;
            Ok(Threshold::Pure(
                (alpha + 2.0).max(beta) * (1.0 / p + 1.0 / q_conj),
            ))
        }
        TheoremCase::T41Q1 => {
            need(q == 1.0 && p <= 1.0 && beta > 1.0, "case requires q = 1 >= p, beta > 1")?;
            Ok(Threshold::Logarithmic(LogCarlesonSpec {
                exponent: (alpha + 2.0) / p,
                log_order: 1.0,
            }))
        }
        TheoremCase::T43Necessary => {
            need(
                q > 1.0 && q >= p && alpha > p - 1.0 && beta > q,
                "case requires q >= p, q > 1, alpha > p - 1, beta > q",
            )?;
            Ok(Threshold::Pure(
                (alpha + 2.0) / p + (beta + 1.0) / q_conj - 1.0,
            ))
        }
        TheoremCase::T43Sufficient => {
            need(
                q > 1.0 && q >= p && alpha > p - 1.0 && beta > q,
                "case requires q >= p, q > 1, alpha > p - 1, beta > q",
            )?;
            Ok(Threshold::Pure(
                (alpha + 2.0 - p).max(beta + 1.0) * (1.0 / p + 1.0 / q_conj),
            ))
        }
        TheoremCase::T401 => {
            need(q >= p, "case requires q >= p")?;
            if q == 1.0 {
                need(p <= 1.0, "q = 1 requires p <= 1")?;
                Ok(Threshold::Logarithmic(LogCarlesonSpec {
                    exponent: (alpha + 2.0) / p,
                    log_order: 1.0,
                }))
            } else {
                need(q > 1.0, "case requires q >= 1")?;
                Ok(Threshold::Pure((alpha + 2.0) * (1.0 / p + 1.0 / q_conj)))
            }
        }
        TheoremCase::T403 => {
            need(
                q > 1.0 && q >= p && alpha > p - 1.0,
                "case requires q >= p, q > 1, alpha > p - 1",
            )?;
            Ok(Threshold::Pure(
                (alpha + 2.0 - p) * (1.0 / p + 1.0 / q_conj),
            ))
        }
    }
}

/// Well-definedness exponent for the source space `A^p_alpha`: piecewise in
/// `p`, with the overlapping boundary cases agreeing by construction.
pub fn well_definedness_exponent(params: &SpaceParams) -> Result<f64> {
    params.validate()?;
    let (p, alpha) = (params.p, params.alpha);
    let case = if p <= 1.0 {
        TheoremCase::T31I
    } else if p <= 2.0 {
        TheoremCase::T31Ii
    } else {
        TheoremCase::T31Iii
    };
    threshold_exponent(&ThresholdQuery {
        p,
        q: p,
        alpha,
        beta: 2.0,
        case,
    })
    .map(|t| t.exponent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn power_family_ratio_is_one_at_matching_exponent() {
        let mu = MeasureSpec::power_tail(2.0).unwrap();
        let report = carleson_constant(&mu, &CarlesonQuery::plain(2.0).unwrap());
        assert_relative_eq!(report.constant_sup, 1.0, max_relative = 1e-9);
        for row in &report.ratio_table {
            assert_relative_eq!(row.ratio, 1.0, max_relative = 1e-9);
        }
        assert!(!report.growth_detected);
    }

    #[test]
    fn lebesgue_exponent_one() {
        let report = carleson_constant(
            &MeasureSpec::lebesgue(),
            &CarlesonQuery::plain(1.0).unwrap(),
        );
        assert_relative_eq!(report.constant_sup, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn lebesgue_at_exponent_two_flags_growth() {
        let report = carleson_constant(
            &MeasureSpec::lebesgue(),
            &CarlesonQuery::plain(2.0).unwrap(),
        );
        // ratios are (1-t)^{-1}: the grid max sits at the largest t
        let max_row = report
            .ratio_table
            .iter()
            .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
            .unwrap();
        assert_relative_eq!(max_row.t, 1.0 - 1e-6, max_relative = 1e-9);
        assert!(report.growth_detected);
        assert_eq!(report.vanishing_verdict, VanishingVerdict::NonVanishing);
    }

    #[test]
    fn ratio_table_is_monotone_around_the_matching_exponent() {
        // the table of the pure power family is (1-t)^(s - q): querying
        // below the true decay makes it fall toward the boundary, querying
        // above makes it grow (the spec's own Lebesgue-at-2 example)
        let mu = MeasureSpec::power_tail(2.0).unwrap();
        let eps = 0.25;
        let under = carleson_constant(&mu, &CarlesonQuery::plain(2.0 - eps).unwrap());
        let over = carleson_constant(&mu, &CarlesonQuery::plain(2.0 + eps).unwrap());
        for pair in under.ratio_table.windows(2) {
            assert!(pair[1].ratio <= pair[0].ratio);
        }
        for pair in over.ratio_table.windows(2) {
            assert!(pair[1].ratio >= pair[0].ratio);
        }
        assert!(!under.growth_detected);
        assert!(over.growth_detected);
    }

    #[test]
    fn fit_recovers_power_exponents() {
        let grid = default_t_grid();
        for &s in &[0.5, 1.0, 2.0, 3.0] {
            let mu = MeasureSpec::power_tail(s).unwrap();
            let (s_hat, b_hat) = fit_exponent(&mu, &grid).unwrap();
            assert_abs_diff_eq!(s_hat, s, epsilon = 0.05);
            assert_abs_diff_eq!(b_hat, 0.0, epsilon = 0.1);
        }
    }

    #[test]
    fn fit_degenerates_on_atoms() {
        let mu = MeasureSpec::atom(0.9, 1.0).unwrap();
        let r = fit_exponent(&mu, &default_t_grid());
        assert!(matches!(r, Err(Error::DegenerateTail { at }) if at > 0.9));
    }

    #[test]
    fn vanishing_probe_classifies_families() {
        let r_grid = geometric_grid(1e-4, 0.5, 12);
        // decay exponent 2.5 tested at s = 2: values fall like (1-r)^{1/2}
        let fast = MeasureSpec::power_tail(2.5).unwrap();
        let probe = vanishing_probe(&fast, 2.0, &r_grid);
        assert_eq!(probe.verdict, VanishingVerdict::Vanishing);

        let critical = MeasureSpec::power_tail(2.0).unwrap();
        let probe = vanishing_probe(&critical, 2.0, &r_grid);
        assert_eq!(probe.verdict, VanishingVerdict::NonVanishing);
        for &(_, v) in &probe.rows {
            assert_relative_eq!(v, 1.0, max_relative = 1e-9);
        }

        let zero = MeasureSpec::zero();
        let probe = vanishing_probe(&zero, 2.0, &r_grid);
        assert_eq!(probe.verdict, VanishingVerdict::Vanishing);
    }

    #[test]
    fn threshold_examples() {
        let q = ThresholdQuery {
            p: 2.0,
            q: 2.0,
            alpha: 0.0,
            beta: 2.0,
            case: TheoremCase::T41Necessary,
        };
        assert_eq!(threshold_exponent(&q).unwrap(), Threshold::Pure(2.0));

        let q = ThresholdQuery {
            p: 1.5,
            q: 1.5,
            alpha: 0.0,
            beta: 2.0,
            case: TheoremCase::T31Ii,
        };
        assert_relative_eq!(
            threshold_exponent(&q).unwrap().exponent(),
            7.0 / 6.0,
            max_relative = 1e-14
        );

        let q = ThresholdQuery {
            p: 1.0,
            q: 1.0,
            alpha: 0.0,
            beta: 2.0,
            case: TheoremCase::T41Q1,
        };
        assert_eq!(
            threshold_exponent(&q).unwrap(),
            Threshold::Logarithmic(LogCarlesonSpec {
                exponent: 2.0,
                log_order: 1.0
            })
        );
    }

    #[test]
    fn threshold_rejects_bad_hypotheses() {
        let q = ThresholdQuery {
            p: 2.0,
            q: 1.0,
            alpha: 0.0,
            beta: 2.0,
            case: TheoremCase::T41Necessary,
        };
        assert!(matches!(threshold_exponent(&q), Err(Error::InvalidCase(_))));
        let q = ThresholdQuery {
            p: 3.0,
            q: 3.0,
            alpha: 0.0,
            beta: 2.0,
            case: TheoremCase::T31I,
        };
        assert!(threshold_exponent(&q).is_err());
    }

    #[test]
    fn well_definedness_boundaries_agree() {
        // at p = 1 cases (i) and (ii) coincide; at p = 2 cases (ii) and (iii)
        let alpha = 0.7;
        let i = threshold_exponent(&ThresholdQuery {
            p: 1.0,
            q: 1.0,
            alpha,
            beta: 2.0,
            case: TheoremCase::T31I,
        })
        .unwrap()
        .exponent();
        let ii = threshold_exponent(&ThresholdQuery {
            p: 1.0,
            q: 1.0,
            alpha,
            beta: 2.0,
            case: TheoremCase::T31Ii,
        })
        .unwrap()
        .exponent();
        assert_relative_eq!(i, ii, max_relative = 1e-14);

        let ii = threshold_exponent(&ThresholdQuery {
            p: 2.0,
            q: 2.0,
            alpha,
            beta: 2.0,
            case: TheoremCase::T31Ii,
        })
        .unwrap()
        .exponent();
        let iii = threshold_exponent(&ThresholdQuery {
            p: 2.0,
            q: 2.0,
            alpha,
            beta: 2.0,
            case: TheoremCase::T31Iii,
        })
        .unwrap()
        .exponent();
        assert_relative_eq!(ii, iii, max_relative = 1e-14);
    }

    #[test]
    fn log_family_fit_recovers_log_order() {
        // density (1-t) log(2/(1-t)): tail ~ (1-t)^2 log(2/(1-t)) / 2
        let mu = MeasureSpec::log_density(2.0, 1.0, 1.0).unwrap();
        let (s_hat, b_hat) = fit_exponent(&mu, &default_t_grid()).unwrap();
        assert_abs_diff_eq!(s_hat, 2.0, epsilon = 0.05);
        assert_abs_diff_eq!(b_hat, 1.0, epsilon = 0.15);
    }
}
