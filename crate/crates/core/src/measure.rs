//! Positive Borel measures on `[0, 1)`.
//!
//! A [`MeasureSpec`] is a finite mixture of point masses and density terms
//! of the form `c (1-t)^gamma (log 2/(1-t))^delta dt`, optionally restricted
//! to `(r, 1)`. The family is closed under tail truncation and spans the
//! pure-power, logarithmic, and vanishing Carleson examples while keeping
//! moments and tails computable.

use alloc::vec::Vec;
// float math in no_std builds; shadowed by the inherent methods
// whenever a std-enabled dependency is linked in
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::quad::{adaptive, adaptive_real};
use crate::special::beta_fn;
use crate::{Complex64, Result};

/// Default absolute tolerance for integration against a measure.
pub const DEFAULT_TOL: f64 = 1e-10;

const LN2: f64 = core::f64::consts::LN_2;

/// A point mass `weight * delta_{location}` with `location` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Absolutely continuous component `scale * (1-t)^power * (log 2/(1-t))^log_power dt`
/// restricted to `(cutoff, 1)`.
///
/// `power > -1` guarantees a finite total mass for any real `log_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityTerm {
    pub scale: f64,
    pub power: f64,
    pub log_power: f64,
    pub cutoff: f64,
}

impl DensityTerm {
    /// Plain power-log density on all of `[0, 1)`.
    pub fn new(scale: f64, power: f64, log_power: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "density scale must be positive and finite, got {scale}"
            )));
        }
        if !(power > -1.0) || !power.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "density power must be > -1 for integrability, got {power}"
            )));
        }
        if !log_power.is_finite() {
            return Err(Error::InvalidParameter("density log power must be finite".into()));
        }
        Ok(DensityTerm {
            scale,
            power,
            log_power,
            cutoff: 0.0,
        })
    }

    fn with_cutoff(mut self, r: f64) -> Self {
        self.cutoff = self.cutoff.max(r);
        self
    }

    /// Mass of `(max(t, cutoff), 1)` under this term.
    fn tail(&self, t: f64) -> f64 {
        let lower = t.max(self.cutoff);
        let eps = 1.0 - lower;
        if eps <= 0.0 {
            return 0.0;
        }
        let a = self.power + 1.0;
        if self.log_power == 0.0 {
            self.scale * eps.powf(a) / a
        } else {
            self.scale * eps.powf(a) * exp_log_moment(a, LN2 - eps.ln(), self.log_power)
        }
    }

    fn moment(&self, n: usize) -> f64 {
        if self.cutoff == 0.0 && self.log_power == 0.0 {
            return self.scale * beta_fn(n as f64 + 1.0, self.power + 1.0);
        }
        // After u = -log(1-t) the integrand is smooth and exponentially
        // decaying: t^n (1-t)^power dt = (1-e^-u)^n e^-(power+1)u du.
        let a = self.power + 1.0;
        let delta = self.log_power;
        let u0 = -(-self.cutoff).ln_1p();
        let scale_hint =
            beta_fn(n as f64 + 1.0, a) * (LN2 + (n as f64 + 2.0).ln()).powf(delta);
        let hump = (n as f64 + 1.0).ln().max(u0);
        let mut upper = hump + 45.0 / a.min(1.0);
        while (-a * upper).exp() * (LN2 + upper).powf(delta.max(0.0))
            > 1e-18 * a * scale_hint.max(1e-290)
        {
            upper *= 1.5;
        }
        let n_f = n as f64;
        let value = adaptive_real(
            &|u: f64| {
                let power_factor = if n == 0 {
                    1.0
                } else {
                    // t^n = exp(n log(1 - e^-u)), stable across the range
                    (n_f * (-(-u).exp()).ln_1p()).exp()
                };
                power_factor * (-a * u).exp() * (LN2 + u).powf(delta)
            },
            u0,
            upper,
            1e-13 * scale_hint.max(1e-290),
            4096,
        )
        .expect("moment integrand is smooth after substitution");
        self.scale * value
    }

    fn integrate(&self, phi: &dyn Fn(f64) -> Complex64, tol: f64) -> Result<Complex64> {
        let a = self.power + 1.0;
        let delta = self.log_power;
        let u0 = -(-self.cutoff).ln_1p();
        let window = (6.0 / a).max(2.0);
        let mut total = Complex64::new(0.0, 0.0);
        let mut prev_mag = f64::INFINITY;
        let mut growing = 0usize;
        let mut small = 0usize;
        for j in 0..64 {
            let lo = u0 + j as f64 * window;
            let hi = lo + window;
            let piece = adaptive(
                &|u: f64| {
                    let t = -(-u).exp_m1(); // 1 - e^-u, accurate near u = 0
                    phi(t) * (-a * u).exp() * (LN2 + u).powf(delta)
                },
                lo,
                hi,
                tol * 0.05,
                1024,
            )?;
            total += piece;
            let mag = piece.norm();
            if mag <= tol * 0.01 && mag <= prev_mag {
                small += 1;
                if small >= 2 {
                    return Ok(total * self.scale);
                }
            } else {
                small = 0;
            }
            if mag > prev_mag {
                // windows may grow while climbing toward an interior hump
                // (integrands peaked near t = 1), but sustained growth means
                // the integral diverges
                growing += 1;
                if growing >= 8 {
                    return Err(Error::NonConvergent {
                        partial: (total * self.scale).norm(),
                        estimate: mag * self.scale,
                    });
                }
            } else {
                growing = 0;
            }
            prev_mag = mag;
        }
        Err(Error::NonConvergent {
            partial: (total * self.scale).norm(),
            estimate: prev_mag * self.scale,
        })
    }
}

/// `integral over y >= 0 of exp(-a y) (L + y)^delta dy`, the exact shape of a
/// log-power tail after factoring out `(1-t)^(power+1)`.
fn exp_log_moment(a: f64, big_l: f64, delta: f64) -> f64 {
    let scale_hint = big_l.powf(delta) / a;
    let mut upper = 45.0 / a.min(1.0);
    while (-a * upper).exp() * (big_l + upper).powf(delta.max(0.0)) > 1e-18 * a * scale_hint {
        upper *= 1.5;
    }
    adaptive_real(
        &|y: f64| (-a * y).exp() * (big_l + y).powf(delta),
        0.0,
        upper,
        1e-14 * scale_hint,
        2048,
    )
    .expect("tail integrand is smooth and exponentially decaying")
}

/// A positive Borel measure on `[0, 1)`: atoms plus density terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasureSpec {
    atoms: Vec<Atom>,
    densities: Vec<DensityTerm>,
}

impl MeasureSpec {
    /// Builds a measure from explicit parts, validating every invariant.
    pub fn from_parts(atoms: Vec<Atom>, densities: Vec<DensityTerm>) -> Result<Self> {
        for a in &atoms {
            if !(0.0..1.0).contains(&a.location) {
                return Err(Error::InvalidParameter(format!(
                    "atom location must lie in [0,1), got {}",
                    a.location
                )));
            }
            if !(a.weight > 0.0) || !a.weight.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "atom weight must be positive and finite, got {}",
                    a.weight
                )));
            }
        }
        for d in &densities {
            // re-run the constructor checks in case the term was built by hand
            DensityTerm::new(d.scale, d.power, d.log_power)?;
            if !(0.0..1.0).contains(&d.cutoff) {
                return Err(Error::InvalidParameter(format!(
                    "density cutoff must lie in [0,1), got {}",
                    d.cutoff
                )));
            }
        }
        Ok(MeasureSpec { atoms, densities })
    }

    /// The zero measure.
    pub fn zero() -> Self {
        MeasureSpec::default()
    }

    /// Lebesgue measure `dt` on `[0, 1)`.
    pub fn lebesgue() -> Self {
        MeasureSpec {
            atoms: Vec::new(),
            densities: vec![DensityTerm::new(1.0, 0.0, 0.0).expect("valid")],
        }
    }

    /// A single point mass.
    pub fn atom(location: f64, weight: f64) -> Result<Self> {
        Self::from_parts(vec![Atom { location, weight }], Vec::new())
    }

    /// The pure power family `s (1-t)^(s-1) dt`, whose tail is exactly
    /// `(1-t)^s`.
    pub fn power_tail(s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power-tail exponent must be positive, got {s}"
            )));
        }
        Ok(MeasureSpec {
            atoms: Vec::new(),
            densities: vec![DensityTerm::new(s, s - 1.0, 0.0)?],
        })
    }

    /// A single density `scale (1-t)^power (log 2/(1-t))^log_power dt`.
    pub fn log_density(scale: f64, power: f64, log_power: f64) -> Result<Self> {
        Ok(MeasureSpec {
            atoms: Vec::new(),
            densities: vec![DensityTerm::new(scale, power, log_power)?],
        })
    }

    /// Mixture (sum) of two measures.
    pub fn merge(&self, other: &MeasureSpec) -> MeasureSpec {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let mut densities = self.densities.clone();
        densities.extend_from_slice(&other.densities);
        MeasureSpec { atoms, densities }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn densities(&self) -> &[DensityTerm] {
        &self.densities
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.densities.is_empty()
    }

    /// Total mass `mu([0,1))`.
    pub fn total_mass(&self) -> f64 {
        self.tail(0.0)
    }

    /// `n`-th moment `integral of t^n d mu(t)`.
    pub fn moment(&self, n: usize) -> f64 {
        let atom_part: f64 = self
            .atoms
            .iter()
            .map(|a| a.weight * a.location.powi(n as i32))
            .sum();
        let density_part: f64 = self.densities.iter().map(|d| d.moment(n)).sum();
        atom_part + density_part
    }

    /// Moments `0..=n_max` in one pass.
    pub fn moments(&self, n_max: usize) -> Vec<f64> {
        (0..=n_max).map(|n| self.moment(n)).collect()
    }

    /// Tail mass `mu([t, 1))`.
    pub fn tail(&self, t: f64) -> f64 {
        let atom_part: f64 = self
            .atoms
            .iter()
            .filter(|a| a.location >= t)
            .map(|a| a.weight)
            .sum();
        let density_part: f64 = self.densities.iter().map(|d| d.tail(t)).sum();
        atom_part + density_part
    }

    /// Integrates a complex-valued function against the measure. Atom
    /// contributions are exact; density terms are integrated adaptively to
    /// absolute tolerance `tol`.
    pub fn integrate_complex(
        &self,
        phi: &dyn Fn(f64) -> Complex64,
        tol: f64,
    ) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            total += phi(a.location) * a.weight;
        }
        if !self.densities.is_empty() {
            let per_term = tol / self.densities.len() as f64;
            for d in &self.densities {
                total += d.integrate(phi, per_term)?;
            }
        }
        Ok(total)
    }

    /// Real-valued convenience wrapper around [`MeasureSpec::integrate_complex`].
    pub fn integrate(&self, phi: &dyn Fn(f64) -> f64, tol: f64) -> Result<f64> {
        self.integrate_complex(&|t| Complex64::new(phi(t), 0.0), tol)
            .map(|v| v.re)
    }

    /// Restriction `mu_r` of the measure to `(r, 1)`: atoms at or below `r`
    /// are dropped and every density term gets a lower cutoff.
    pub fn truncate_tail(&self, r: f64) -> MeasureSpec {
        MeasureSpec {
            atoms: self
                .atoms
                .iter()
                .copied()
                .filter(|a| a.location > r)
                .collect(),
            densities: self
                .densities
                .iter()
                .map(|d| d.with_cutoff(r))
                .collect(),
        }
    }
}
