//! Weighted Bergman, Dirichlet-type, and Bloch norms by disk quadrature,
//! plus the extremal test-function families.
//!
//! Norm integrals are evaluated in polar form. With `x = r^2` the radial
//! integral carries the Jacobi weight `(1 - x)^alpha`, handled by a
//! Gauss-Jacobi rule so that exponents close to -1 stay accurate; the
//! angular mean is a uniform circle average computed by FFT, which is exact
//! for the trigonometric polynomials arising at `p = 2`.

use alloc::vec::Vec;
// float math in no_std builds; shadowed by the inherent methods
// whenever a std-enabled dependency is linked in
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::quad::{gauss_jacobi_01, polyval_circle};
use crate::taylor::TaylorPoly;
use crate::{Complex64, Result};

/// Which norm a [`SpaceParams`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Bergman,
    Dirichlet,
    Bloch,
}

/// Identifies one of the spaces `A^p_alpha`, `D^p_alpha`, or the Bloch
/// space (for which `p` and `alpha` are ignored).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub kind: SpaceKind,
    pub p: f64,
    pub alpha: f64,
}

impl SpaceParams {
    pub fn bergman(p: f64, alpha: f64) -> Self {
        SpaceParams {
            kind: SpaceKind::Bergman,
            p,
            alpha,
        }
    }

    pub fn dirichlet(p: f64, alpha: f64) -> Self {
        SpaceParams {
            kind: SpaceKind::Dirichlet,
            p,
            alpha,
        }
    }

    pub fn bloch() -> Self {
        SpaceParams {
            kind: SpaceKind::Bloch,
            p: f64::NAN,
            alpha: f64::NAN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let SpaceKind::Bloch = self.kind {
            return Ok(());
        }
        if !(self.p > 0.0) || !self.p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "space exponent p must be positive, got {}",
                self.p
            )));
        }
        if !(self.alpha > -1.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "space weight alpha must be > -1, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Radial Gauss-Jacobi nodes (in the `x = r^2` variable) together with a
/// power-of-two angular node count.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    radial_x: Vec<f64>,
    radial_w: Vec<f64>,
    weight_alpha: f64,
    angular: usize,
}

impl QuadratureGrid {
    /// Builds a grid with `radial` Gauss-Jacobi nodes for the weight
    /// `(1 - x)^alpha` and `angular` uniform circle nodes (rounded up to a
    /// power of two).
    pub fn new(radial: usize, angular: usize, alpha: f64) -> Result<Self> {
        let (radial_x, radial_w) = gauss_jacobi_01(radial, alpha)?;
        let angular = angular.max(4).next_power_of_two();
        Ok(QuadratureGrid {
            radial_x,
            radial_w,
            weight_alpha: alpha,
            angular,
        })
    }

    /// Grid sized for polynomials up to `degree`: exact at `p = 2` and
    /// spectrally accurate otherwise.
    pub fn auto_for(degree: usize, alpha: f64) -> Result<Self> {
        let radial = (degree / 2 + 16).max(48);
        let angular = (2 * (degree + 2)).max(128);
        Self::new(radial, angular, alpha)
    }

    /// Weight exponent the radial rule was built for.
    pub fn weight_alpha(&self) -> f64 {
        self.weight_alpha
    }

    pub fn radial_len(&self) -> usize {
        self.radial_x.len()
    }

    pub fn angular_len(&self) -> usize {
        self.angular
    }

    /// Radial nodes as `x = r^2` values with their weights.
    pub fn radial(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radial_x
            .iter()
            .copied()
            .zip(self.radial_w.iter().copied())
    }

    fn refined(&self) -> Result<QuadratureGrid> {
        QuadratureGrid::new(
            self.radial_x.len() + self.radial_x.len() / 2 + 8,
            self.angular * 2,
            self.weight_alpha,
        )
    }

    fn check_alpha(&self, alpha: f64) -> Result<()> {
        if (self.weight_alpha - alpha).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "grid was built for weight exponent {} but the norm needs {}",
                self.weight_alpha, alpha
            )));
        }
        Ok(())
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if self.angular <= degree {
            return Err(Error::GridTooCoarse {
                discrepancy: (degree + 1 - self.angular) as f64,
                tolerance: 0.0,
            });
        }
        Ok(())
    }
}

/// Mean of `|f|^p` over the circle of radius `r` (`x = r^2`), by FFT
/// sampling at `m` uniform angles. Small integer and half-integer `p` avoid
/// the `powf` in the hot loop.
fn circle_mean_abs_p(f: &TaylorPoly, x: f64, p: f64, m: usize) -> Result<f64> {
    let values = polyval_circle(f.coeffs(), x.sqrt(), m)?;
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v.norm_sqr()).sum()
    } else if p == 1.0 {
        values.iter().map(|v| v.norm()).sum()
    } else if p == 4.0 {
        values
            .iter()
            .map(|v| {
                let s = v.norm_sqr();
                s * s
            })
            .sum()
    } else if p == 3.0 {
        values.iter().map(|v| v.norm_sqr() * v.norm()).sum()
    } else {
        values.iter().map(|v| v.norm_sqr().powf(0.5 * p)).sum()
    };
    Ok(sum / m as f64)
}

fn bergman_norm_on_grid(f: &TaylorPoly, p: f64, alpha: f64, grid: &QuadratureGrid) -> Result<f64> {
    let mut integral = 0.0;
    for (x, w) in grid.radial() {
        integral += w * circle_mean_abs_p(f, x, p, grid.angular)?;
    }
    Ok(((alpha + 1.0) * integral).powf(1.0 / p))
}

/// Weighted Bergman norm of a truncated series, with an internal refinement
/// check: the value is recomputed on a finer grid and the two must agree to
/// within a relative `5e-7` or the grid is rejected as too coarse.
pub fn bergman_norm(f: &TaylorPoly, p: f64, alpha: f64, grid: &QuadratureGrid) -> Result<f64> {
    SpaceParams::bergman(p, alpha).validate()?;
    grid.check_alpha(alpha)?;
    grid.check_degree(f.degree())?;
    if f.is_empty() {
        return Ok(0.0);
    }
    let coarse = bergman_norm_on_grid(f, p, alpha, grid)?;
    let fine_grid = grid.refined()?;
    let fine = bergman_norm_on_grid(f, p, alpha, &fine_grid)?;
    let tol = 5e-7;
    let discrepancy = (coarse - fine).abs() / (1.0 + fine.abs());
    if discrepancy > tol {
        return Err(Error::GridTooCoarse {
            discrepancy,
            tolerance: tol,
        });
    }
    Ok(fine)
}

/// Dirichlet-type norm `|f(0)| + || f' ||_{A^p_alpha}`.
pub fn dirichlet_norm(f: &TaylorPoly, p: f64, alpha: f64, grid: &QuadratureGrid) -> Result<f64> {
    Ok(f.coeff(0).norm() + bergman_norm(&f.derivative(), p, alpha, grid)?)
}

/// Bloch norm `|f(0)| + sup (1-|z|^2) |f'(z)|`, as a supremum over the
/// grid's circles plus a geometric sequence of radii approaching 1; a lower
/// bound on the true supremum.
pub fn bloch_norm(f: &TaylorPoly, grid: &QuadratureGrid) -> Result<f64> {
    let df = f.derivative();
    if df.is_empty() {
        return Ok(f.coeff(0).norm());
    }
    grid.check_degree(df.degree())?;
    let mut radii: Vec<f64> = grid.radial().map(|(x, _)| x.sqrt()).collect();
    radii.push(0.0);
    let mut gap = 1.0 - radii.iter().copied().fold(0.0, f64::max);
    for _ in 0..16 {
        gap *= 0.5;
        if gap < 1e-7 {
            break;
        }
        radii.push(1.0 - gap);
    }
    let mut sup = 0.0_f64;
    for &r in &radii {
        let weight = 1.0 - r * r;
        let values = polyval_circle(df.coeffs(), r, grid.angular)?;
        for v in values {
            sup = sup.max(weight * v.norm());
        }
    }
    Ok(f.coeff(0).norm() + sup)
}

/// Norm of `f` in the space described by `params`.
pub fn space_norm(f: &TaylorPoly, params: &SpaceParams, grid: &QuadratureGrid) -> Result<f64> {
    params.validate()?;
    match params.kind {
        SpaceKind::Bergman => bergman_norm(f, params.p, params.alpha, grid),
        SpaceKind::Dirichlet => dirichlet_norm(f, params.p, params.alpha, grid),
        SpaceKind::Bloch => bloch_norm(f, grid),
    }
}

/// Truncated binomial series of `scale * (1 - a z)^{-exponent}` with the
/// dropped-tail guarantee shared by all kernel-power families: construction
/// fails unless the l1 mass left out is below `1e-8` of the kept mass.
pub fn kernel_power_series(
    a: f64,
    exponent: f64,
    scale: f64,
    n_terms: usize,
) -> Result<TaylorPoly> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!(
            "family parameter must lie in [0,1), got {a}"
        )));
    }
    if !(exponent > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kernel power exponent must be positive, got {exponent}"
        )));
    }
    if n_terms == 0 {
        return Err(Error::InvalidParameter("series needs at least one term".into()));
    }
    let mut coeffs = Vec::with_capacity(n_terms);
    let mut ratio = 1.0; // gamma_ratio(k, exponent) running value
    let mut a_pow = 1.0;
    let mut l1 = 0.0;
    for k in 0..n_terms {
        if k > 0 {
            ratio *= (k as f64 - 1.0 + exponent) / k as f64;
            a_pow *= a;
        }
        let c = scale * ratio * a_pow;
        l1 += c.abs();
        coeffs.push(Complex64::new(c, 0.0));
    }
    // magnitude of the first dropped coefficient
    let next = scale.abs() * ratio * (n_terms as f64 - 1.0 + exponent) / n_terms as f64 * a_pow * a;
    let rho = if exponent >= 1.0 {
        a * (n_terms as f64 + exponent) / (n_terms as f64 + 1.0)
    } else {
        a
    };
    if rho >= 1.0 {
        return Err(Error::TruncationInsufficient {
            order: n_terms - 1,
            tail_bound: f64::INFINITY,
        });
    }
    let tail = next / (1.0 - rho);
    if tail > 1e-8 * l1 {
        return Err(Error::TruncationInsufficient {
            order: n_terms - 1,
            tail_bound: tail / l1,
        });
    }
    Ok(TaylorPoly::new(coeffs))
}

/// Smallest power-of-two term count for which [`kernel_power_series`]
/// accepts the parameters, capped at `2^max_log2`.
pub fn kernel_power_terms(a: f64, exponent: f64, max_log2: u32) -> usize {
    let mut n = 64usize;
    while n < (1usize << max_log2) {
        // cheap feasibility probe of the same tail bound
        if kernel_tail_ok(a, exponent, n) {
            return n;
        }
        n *= 2;
    }
    1usize << max_log2
}

fn kernel_tail_ok(a: f64, exponent: f64, n_terms: usize) -> bool {
    let rho = if exponent >= 1.0 {
        a * (n_terms as f64 + exponent) / (n_terms as f64 + 1.0)
    } else {
        a
    };
    if rho >= 1.0 {
        return false;
    }
    // same running quantities as the constructor, without materializing
    // the coefficients
    let mut ratio = 1.0;
    let mut a_pow = 1.0;
    let mut l1 = 1.0;
    for k in 1..n_terms {
        ratio *= (k as f64 - 1.0 + exponent) / k as f64;
        a_pow *= a;
        l1 += ratio * a_pow;
    }
    let next = ratio * (n_terms as f64 - 1.0 + exponent) / n_terms as f64 * a_pow * a;
    next / (1.0 - rho) <= 1e-8 * l1
}

/// The Bergman-space extremal family
/// `f_a(z) = ((1-a^2) / (1-a z)^2)^{(alpha+2)/p}`.
pub fn test_f_bergman(a: f64, p: f64, alpha: f64, n_terms: usize) -> Result<TaylorPoly> {
    SpaceParams::bergman(p, alpha).validate()?;
    let c = (alpha + 2.0) / p;
    kernel_power_series(a, 2.0 * c, (1.0 - a * a).powf(c), n_terms)
}

/// The dual-side family `g_a(z) = ((1-a^2) / (1-a z)^2)^{beta/q'}`.
pub fn test_g_bergman(a: f64, beta: f64, q_conj: f64, n_terms: usize) -> Result<TaylorPoly> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "operator exponent beta must be positive, got {beta}"
        )));
    }
    if !(q_conj > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "conjugate index must exceed 1, got {q_conj}"
        )));
    }
    let c = beta / q_conj;
    kernel_power_series(a, 2.0 * c, (1.0 - a * a).powf(c), n_terms)
}

/// The logarithmic family `g_a(z) = log(2 / (1 - a z))`, used on the
/// `q = 1` Bloch-duality route.
pub fn test_g_log(a: f64, n_terms: usize) -> Result<TaylorPoly> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!(
            "family parameter must lie in [0,1), got {a}"
        )));
    }
    if n_terms == 0 {
        return Err(Error::InvalidParameter("series needs at least one term".into()));
    }
    let mut coeffs = Vec::with_capacity(n_terms);
    coeffs.push(Complex64::new(core::f64::consts::LN_2, 0.0));
    let mut a_pow = 1.0;
    let mut l1 = core::f64::consts::LN_2;
    for k in 1..n_terms {
        a_pow *= a;
        let c = a_pow / k as f64;
        l1 += c;
        coeffs.push(Complex64::new(c, 0.0));
    }
    let n = n_terms as f64;
    let tail = a_pow * a / (n * (1.0 - a));
    if tail > 1e-8 * l1 {
        return Err(Error::TruncationInsufficient {
            order: n_terms - 1,
            tail_bound: tail / l1,
        });
    }
    Ok(TaylorPoly::new(coeffs))
}

/// The Dirichlet-space extremal family
/// `f_a(z) = (1/a) (1-a^2)^{(alpha+2)/p} / (1-a z)^{2(alpha+2)/p - 1}`.
pub fn test_f_dirichlet(a: f64, p: f64, alpha: f64, n_terms: usize) -> Result<TaylorPoly> {
    SpaceParams::bergman(p, alpha).validate()?;
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(
            "dirichlet family needs a > 0 for its 1/a normalization".into(),
        ));
    }
    let c = (alpha + 2.0) / p;
    let exponent = 2.0 * c - 1.0;
    if !(exponent > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dirichlet family requires 2(alpha+2)/p - 1 > 0, got {exponent}"
        )));
    }
    kernel_power_series(a, exponent, (1.0 - a * a).powf(c) / a, n_terms)
}

/// Closed-form `A^p_alpha` norm of `scale * (1 - a z)^{-s}` through the
/// Parseval series of the angular mean:
/// `|f|^p` averaged over the circle `|z| = r` equals
/// `scale^p * sum_k gamma_ratio(k, s p / 2)^2 (a r)^{2k}`,
/// and the radial Jacobi integrals are Beta values. Exact up to series
/// truncation at machine precision; no grids involved.
pub fn kernel_power_bergman_norm(a: f64, s: f64, scale: f64, p: f64, alpha: f64) -> Result<f64> {
    SpaceParams::bergman(p, alpha).validate()?;
    if !(0.0..1.0).contains(&a) || !(s > 0.0) {
        return Err(Error::InvalidParameter(
            "kernel norm needs a in [0,1) and a positive exponent".into(),
        ));
    }
    let half = 0.5 * s * p;
    let a2 = a * a;
    let mut gamma_k = 1.0; // gamma_ratio(k, half)
    let mut beta_k = 1.0 / (alpha + 1.0); // B(k+1, alpha+1)
    let mut a_pow = 1.0; // a^(2k)
    let mut sum = gamma_k * gamma_k * beta_k;
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        gamma_k *= (kf - 1.0 + half) / kf;
        beta_k *= kf / (kf + alpha + 1.0);
        a_pow *= a2;
        let term = gamma_k * gamma_k * beta_k * a_pow;
        sum += term;
        if (term < 1e-17 * sum && k > 32) || k > 5_000_000 {
            break;
        }
        k += 1;
    }
    Ok((scale.abs().powf(p) * (alpha + 1.0) * sum).powf(1.0 / p))
}

/// Coefficient-decay diagnostics against the growth permitted in
/// `A^p_alpha`: the normalized ratios `|a_n| / n^e` (with `e` the
/// integrability exponent for the relevant `p` range) and the partial sums
/// of `sum n^{p-alpha-3} |a_n|^p`. Finite data can only show trends, so the
/// report carries a growth flag rather than a membership verdict.
#[derive(Debug, Clone, Serialize)]
pub struct CoeffDecayReport {
    pub ratios: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub growth_flagged: bool,
}

pub fn coeff_decay_report(f: &TaylorPoly, p: f64, alpha: f64) -> Result<CoeffDecayReport> {
    SpaceParams::bergman(p, alpha).validate()?;
    let decay_exponent = if p <= 1.0 {
        (alpha + 2.0) / p - 1.0
    } else {
        (alpha + 1.0) / p
    };
    let mut ratios = Vec::new();
    let mut partial_sums = Vec::new();
    let mut acc = 0.0;
    for n in 1..f.len() {
        let mag = f.coeff(n).norm();
        let nf = n as f64;
        ratios.push(mag / nf.powf(decay_exponent));
        acc += nf.powf(p - alpha - 3.0) * mag.powf(p);
        partial_sums.push(acc);
    }
    let growth_flagged = if ratios.len() >= 8 {
        let quarter = ratios.len() / 4;
        let head: f64 = ratios[..quarter].iter().copied().fold(0.0, f64::max);
        let tail: f64 = ratios[ratios.len() - quarter..]
            .iter()
            .copied()
            .fold(0.0, f64::max);
        tail > head
    } else {
        false
    };
    Ok(CoeffDecayReport {
        ratios,
        partial_sums,
        growth_flagged,
    })
}
