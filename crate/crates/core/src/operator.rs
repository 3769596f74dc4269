//! The Hilbert-type operator induced by a measure on `[0, 1)`, in its three
//! computable realizations:
//!
//! * moment-matrix action on Taylor coefficients (the Hankel route):
//!   `b_n = ratio_n(beta) * sum_k mu_{n+k} a_k`;
//! * coefficient integrals `b_n = ratio_n(beta) * integral of t^n f(t) dmu`;
//! * the direct integral `z -> integral of f(t) / (1 - t z)^beta dmu(t)`.
//!
//! The matrix entries factor through the moment of index `n + k` only, so
//! an operator of truncation `N` caches `2N + 1` moments instead of
//! `(N + 1)^2` entries.

use alloc::vec::Vec;
// float math in no_std builds; shadowed by the inherent methods
// whenever a std-enabled dependency is linked in
#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::carleson::{self, CarlesonQuery, VanishingVerdict};
use crate::error::Error;
use crate::measure::MeasureSpec;
use crate::spaces::SpaceParams;
use crate::special::gamma_ratio_seq;
use crate::taylor::TaylorPoly;
use crate::{Complex64, Result};

/// An operator `H` with exponent `beta`, induced by a measure, truncated at
/// output degree `N`. Immutable after construction; the moment cache covers
/// every index the matrix action can touch, so applications are pure and
/// safe to run concurrently.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    beta: f64,
    measure: MeasureSpec,
    truncation: usize,
    moments: Vec<f64>,
    row_factors: Vec<f64>,
}

impl OperatorSpec {
    pub fn new(beta: f64, measure: MeasureSpec, truncation: usize) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "operator exponent beta must be positive, got {beta}"
            )));
        }
        let moments = measure.moments(2 * truncation);
        let row_factors = gamma_ratio_seq(truncation, beta);
        Ok(OperatorSpec {
            beta,
            measure,
            truncation,
            moments,
            row_factors,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn measure(&self) -> &MeasureSpec {
        &self.measure
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Cached moment `mu_m`, `m <= 2N`.
    pub fn moment(&self, m: usize) -> f64 {
        self.moments[m]
    }

    /// Row factor `Gamma(n + beta) / (n! Gamma(beta))`.
    pub fn row_factor(&self, n: usize) -> f64 {
        self.row_factors[n]
    }

    /// Matrix entry `ratio_n(beta) * mu_{n+k}`.
    pub fn matrix_entry(&self, n: usize, k: usize) -> f64 {
        assert!(
            n <= self.truncation && k <= self.truncation,
            "matrix index ({n},{k}) outside truncation {}",
            self.truncation
        );
        self.row_factors[n] * self.moments[n + k]
    }

    /// Matrix action on a Taylor polynomial of degree at most `N`.
    pub fn apply_matrix(&self, f: &TaylorPoly) -> Result<TaylorPoly> {
        if f.len() > self.truncation + 1 {
            return Err(Error::InvalidParameter(format!(
                "input degree {} exceeds operator truncation {}",
                f.degree(),
                self.truncation
            )));
        }
        let coeffs = f.coeffs();
        let out = (0..=self.truncation)
            .map(|n| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &a) in coeffs.iter().enumerate() {
                    acc += a * self.moments[n + k];
                }
                acc * self.row_factors[n]
            })
            .collect();
        Ok(TaylorPoly::new(out))
    }

    /// Coefficient-integral action: `b_n = ratio_n * integral t^n f(t) dmu`.
    /// Agrees with the matrix action on polynomials, where both reduce to
    /// the same finite sums.
    pub fn apply_coefficient(&self, f: &TaylorPoly, tol: f64) -> Result<TaylorPoly> {
        if f.len() > self.truncation + 1 {
            return Err(Error::InvalidParameter(format!(
                "input degree {} exceeds operator truncation {}",
                f.degree(),
                self.truncation
            )));
        }
        let mut out = Vec::with_capacity(self.truncation + 1);
        for n in 0..=self.truncation {
            let moment_n = self.measure.integrate_complex(
                &|t| f.evaluate_real(t) * t.powi(n as i32),
                tol,
            )?;
            out.push(moment_n * self.row_factors[n]);
        }
        Ok(TaylorPoly::new(out))
    }

    /// Direct integral `integral of f(t) / (1 - t z)^beta dmu(t)` at a point
    /// of the disk, with the principal branch of the complex power (the base
    /// has positive real part for `|z| < 1`).
    pub fn apply_integral(&self, f: &TaylorPoly, z: Complex64, tol: f64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "evaluation point must lie in the open disk, got |z| = {}",
                z.norm()
            )));
        }
        let beta = self.beta;
        self.measure.integrate_complex(
            &|t| {
                let kernel = (Complex64::new(1.0, 0.0) - z * t).powf(-beta);
                f.evaluate_real(t) * kernel
            },
            tol,
        )
    }
}

/// Outcome of the well-definedness gate. The gate is advisory: the theorem
/// gives sufficient conditions, so measures outside them may still yield
/// convergent finite truncations.
#[derive(Debug, Clone, Serialize)]
pub enum GateVerdict {
    Pass {
        exponent: f64,
        constant_sup: f64,
    },
    Fail {
        exponent: f64,
        constant_sup: f64,
        /// Fitted log-log growth rate of the offending ratio table.
        slope_hint: f64,
    },
}

impl GateVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, GateVerdict::Pass { .. })
    }

    pub fn exponent(&self) -> f64 {
        match self {
            GateVerdict::Pass { exponent, .. } | GateVerdict::Fail { exponent, .. } => *exponent,
        }
    }
}

/// Checks the sufficient Carleson condition under which the series and
/// integral realizations agree on all of `A^p_alpha`: the exponent is
/// selected by the range of `p` and the measure's ratio table at that
/// exponent must look bounded (no growth toward the boundary).
pub fn well_definedness_gate(mu: &MeasureSpec, p: f64, alpha: f64) -> Result<GateVerdict> {
    let exponent = carleson::well_definedness_exponent(&SpaceParams::bergman(p, alpha))?;
    let query = CarlesonQuery::plain(exponent)?;
    let report = carleson::carleson_constant(mu, &query);
    if report.growth_detected {
        // ratio ~ (1-t)^m with m < 0 near the boundary
        let slope = report.fitted_exponent - exponent;
        Ok(GateVerdict::Fail {
            exponent,
            constant_sup: report.constant_sup,
            slope_hint: slope,
        })
    } else {
        Ok(GateVerdict::Pass {
            exponent,
            constant_sup: report.constant_sup,
        })
    }
}

/// Matrix application together with the gate verdict for the stated source
/// space; the computation proceeds either way and the flag is recorded.
pub fn apply_matrix_gated(
    op: &OperatorSpec,
    f: &TaylorPoly,
    p: f64,
    alpha: f64,
) -> Result<(TaylorPoly, GateVerdict)> {
    let gate = well_definedness_gate(op.measure(), p, alpha)?;
    let out = op.apply_matrix(f)?;
    Ok((out, gate))
}

/// Vanishing surrogate for compactness probes, re-exported at the operator
/// level: decay of the tail-measure Carleson constants.
pub fn tail_constant_decay(
    mu: &MeasureSpec,
    s: f64,
    r_grid: &[f64],
) -> (Vec<(f64, f64)>, VanishingVerdict) {
    let probe = carleson::vanishing_probe(mu, s, r_grid);
    (probe.rows, probe.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn classical_hilbert_matrix() {
        let op = OperatorSpec::new(1.0, MeasureSpec::lebesgue(), 64).unwrap();
        for (n, k) in [(0, 0), (1, 2), (10, 5), (64, 64)] {
            assert_abs_diff_eq!(
                op.matrix_entry(n, k),
                1.0 / ((n + k) as f64 + 1.0),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn derivative_hilbert_row_factor() {
        let op = OperatorSpec::new(2.0, MeasureSpec::lebesgue(), 16).unwrap();
        // beta = 2: ratio_n = n+1, mu_1 = 1/2 -> entry(1,0) = 1
        assert_relative_eq!(op.matrix_entry(1, 0), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn atom_at_origin_has_single_entry() {
        let op = OperatorSpec::new(1.5, MeasureSpec::atom(0.0, 1.0).unwrap(), 8).unwrap();
        assert_abs_diff_eq!(op.matrix_entry(0, 0), 1.0);
        for (n, k) in [(0, 1), (1, 0), (3, 4)] {
            assert_abs_diff_eq!(op.matrix_entry(n, k), 0.0);
        }
    }

    #[test]
    fn hankel_structure_is_exact() {
        let mu = MeasureSpec::power_tail(1.5)
            .unwrap()
            .merge(&MeasureSpec::atom(0.4, 0.3).unwrap());
        let op = OperatorSpec::new(2.5, mu, 24).unwrap();
        for n in 0..=24usize {
            for k in 0..=24usize {
                // the entry factors through the moment of index n + k only,
                // bitwise by construction
                assert_eq!(op.matrix_entry(n, k), op.row_factor(n) * op.moment(n + k));
                assert_relative_eq!(
                    op.matrix_entry(n, k) * op.row_factor(k),
                    op.matrix_entry(k, n) * op.row_factor(n),
                    max_relative = 1e-14
                );
            }
        }
    }

    #[test]
    fn apply_matrix_on_atom_measure() {
        // H f = w f(c) / (1 - c z)^beta: coefficients w f(c) ratio_n c^n
        let (c, w, beta) = (0.6, 1.3, 2.0);
        let op = OperatorSpec::new(beta, MeasureSpec::atom(c, w).unwrap(), 32).unwrap();
        let f = TaylorPoly::from_real(&[1.0, -0.5, 2.0]);
        let out = op.apply_matrix(&f).unwrap();
        let fc = f.evaluate_real(c).re;
        for n in 0..=32usize {
            let expected = w * fc * op.row_factor(n) * c.powi(n as i32);
            assert_relative_eq!(out.coeff(n).re, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn constant_maps_to_szego_kernel_for_beta_two() {
        // f = 1, Lebesgue, beta = 2: b_n = (n+1) / (n+1) = 1
        let op = OperatorSpec::new(2.0, MeasureSpec::lebesgue(), 48).unwrap();
        let out = op.apply_matrix(&TaylorPoly::from_real(&[1.0])).unwrap();
        for n in 0..=48usize {
            assert_abs_diff_eq!(out.coeff(n).re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_measure_maps_to_zero() {
        let op = OperatorSpec::new(1.0, MeasureSpec::zero(), 8).unwrap();
        let out = op
            .apply_matrix(&TaylorPoly::from_real(&[1.0, 2.0, 3.0]))
            .unwrap();
        assert!(out.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn coefficient_route_agrees_with_matrix_route() {
        let mu = MeasureSpec::power_tail(2.0)
            .unwrap()
            .merge(&MeasureSpec::atom(0.5, 0.25).unwrap());
        let op = OperatorSpec::new(1.5, mu, 12).unwrap();
        let f = TaylorPoly::from_real(&[0.3, 0.0, -1.0, 0.7]);
        let a = op.apply_matrix(&f).unwrap();
        let b = op.apply_coefficient(&f, 1e-12).unwrap();
        for n in 0..=12usize {
            assert_abs_diff_eq!((a.coeff(n) - b.coeff(n)).norm(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn integral_route_matches_closed_form() {
        // f = 1, Lebesgue, beta = 2, z real: 1 / (1 - z)
        let op = OperatorSpec::new(2.0, MeasureSpec::lebesgue(), 4).unwrap();
        let one = TaylorPoly::from_real(&[1.0]);
        for &z in &[0.0, 0.3, -0.5, 0.7] {
            let v = op
                .apply_integral(&one, Complex64::new(z, 0.0), 1e-12)
                .unwrap();
            assert_relative_eq!(v.re, 1.0 / (1.0 - z), max_relative = 1e-10);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn integral_route_atom_is_point_evaluation() {
        let (c, w, beta) = (0.35, 0.8, 1.7);
        let op = OperatorSpec::new(beta, MeasureSpec::atom(c, w).unwrap(), 4).unwrap();
        let f = TaylorPoly::from_real(&[2.0, 1.0]);
        let z = Complex64::new(0.2, 0.4);
        let v = op.apply_integral(&f, z, 1e-12).unwrap();
        let expected = (Complex64::new(1.0, 0.0) - z * c).powf(-beta) * (w * f.evaluate_real(c).re);
        assert_abs_diff_eq!((v - expected).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn kernel_at_origin_is_plain_integral() {
        let mu = MeasureSpec::power_tail(1.0).unwrap();
        let op = OperatorSpec::new(3.3, mu.clone(), 4).unwrap();
        let f = TaylorPoly::from_real(&[0.0, 0.0, 1.0]);
        let v = op
            .apply_integral(&f, Complex64::new(0.0, 0.0), 1e-12)
            .unwrap();
        assert_relative_eq!(v.re, mu.moment(2), max_relative = 1e-10);
    }

    #[test]
    fn gate_examples() {
        // Lebesgue at p=2, alpha=0: exponent 1/2, tail (1-t) decays faster
        let g = well_definedness_gate(&MeasureSpec::lebesgue(), 2.0, 0.0).unwrap();
        assert!(g.passed());
        assert_relative_eq!(g.exponent(), 0.5, max_relative = 1e-14);

        // tail (1-t)^{0.1} against required exponent 2 diverges
        let slow = MeasureSpec::power_tail(0.1).unwrap();
        let g = well_definedness_gate(&slow, 1.0, 0.0).unwrap();
        assert!(!g.passed());
        assert_relative_eq!(g.exponent(), 2.0, max_relative = 1e-14);

        let g = well_definedness_gate(&MeasureSpec::zero(), 1.0, 0.0).unwrap();
        assert!(g.passed());
    }

    #[test]
    fn linearity_of_matrix_action() {
        let op = OperatorSpec::new(2.0, MeasureSpec::power_tail(1.5).unwrap(), 16).unwrap();
        let f = TaylorPoly::from_real(&[1.0, 0.5, -0.25]);
        let g = TaylorPoly::from_real(&[0.0, 1.0, 1.0, 1.0]);
        let combo = &(&f * 2.0) + &(&g * -3.0);
        let lhs = op.apply_matrix(&combo).unwrap();
        let rhs = &(&op.apply_matrix(&f).unwrap() * 2.0) + &(&op.apply_matrix(&g).unwrap() * -3.0);
        for n in 0..=16usize {
            assert_abs_diff_eq!((lhs.coeff(n) - rhs.coeff(n)).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
