//! Truncated Taylor series of analytic functions on the unit disk.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Complex64;

/// Coefficient vector `a_0..a_N` of a truncated Taylor series. The empty
/// vector is the zero polynomial.
///
/// Serializes as a JSON array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TaylorPoly {
    coeffs: Vec<Complex64>,
}

impl TaylorPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        TaylorPoly { coeffs }
    }

    /// Polynomial with the given real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        TaylorPoly {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn zero() -> Self {
        TaylorPoly::default()
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        TaylorPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Number of stored coefficients (degree + 1 for a nonzero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the stored truncation; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation at a point of the disk.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Evaluation at a real point.
    pub fn evaluate_real(&self, t: f64) -> Complex64 {
        self.evaluate(Complex64::new(t, 0.0))
    }

    /// Termwise derivative; drops the constant term.
    pub fn derivative(&self) -> TaylorPoly {
        if self.coeffs.len() <= 1 {
            return TaylorPoly::zero();
        }
        TaylorPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    /// Termwise antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> TaylorPoly {
        if self.coeffs.is_empty() {
            return TaylorPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k as f64 + 1.0)),
        );
        TaylorPoly { coeffs }
    }

    /// Sum of coefficient magnitudes; the scale proxy used by truncation
    /// checks.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Truncates to at most `n + 1` coefficients.
    pub fn truncated(&self, n: usize) -> TaylorPoly {
        let keep = self.coeffs.len().min(n + 1);
        TaylorPoly {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> TaylorPoly {
        TaylorPoly {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }
}

impl Add for &TaylorPoly {
    type Output = TaylorPoly;
    fn add(self, rhs: &TaylorPoly) -> TaylorPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        TaylorPoly {
            coeffs: (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        }
    }
}

impl Sub for &TaylorPoly {
    type Output = TaylorPoly;
    fn sub(self, rhs: &TaylorPoly) -> TaylorPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        TaylorPoly {
            coeffs: (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        }
    }
}

impl Mul<f64> for &TaylorPoly {
    type Output = TaylorPoly;
    fn mul(self, rhs: f64) -> TaylorPoly {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Serialize for TaylorPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TaylorPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(deserializer)?;
        for p in &pairs {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(D::Error::custom("non-finite Taylor coefficient"));
            }
        }
        Ok(TaylorPoly {
            coeffs: pairs
                .into_iter()
                .map(|p| Complex64::new(p[0], p[1]))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_evaluates_everywhere() {
        let f = TaylorPoly::from_real(&[1.0]);
        for &z in &[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, -0.3),
            Complex64::new(-0.9, 0.0),
        ] {
            assert_eq!(f.evaluate(z), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn geometric_series_partial_sum() {
        // a_k = 0.5^k, z = 0.5: sum (0.25)^k -> 4/3
        let coeffs: Vec<f64> = (0..=200).map(|k| 0.5_f64.powi(k)).collect();
        let f = TaylorPoly::from_real(&coeffs);
        let v = f.evaluate(Complex64::new(0.5, 0.0));
        assert_abs_diff_eq!(v.re, 4.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_map() {
        let f = TaylorPoly::from_real(&[0.0, 1.0]);
        let z = Complex64::new(0.0, 0.5);
        assert_eq!(f.evaluate(z), z);
    }

    #[test]
    fn derivative_shifts_and_scales() {
        let f = TaylorPoly::from_real(&[0.0, 1.0, 1.0]);
        assert_eq!(f.derivative(), TaylorPoly::from_real(&[1.0, 2.0]));
        let c = TaylorPoly::from_real(&[3.5]);
        assert_eq!(c.derivative(), TaylorPoly::zero());
        assert_eq!(TaylorPoly::zero().derivative(), TaylorPoly::zero());
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let f = TaylorPoly::from_real(&[2.0, -1.0, 4.0]);
        assert_eq!(f.antiderivative().derivative(), f);
    }

    #[test]
    fn json_round_trip_as_pairs() {
        let f = TaylorPoly::new(vec![Complex64::new(1.0, -2.0), Complex64::new(0.0, 3.0)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[1.0,-2.0],[0.0,3.0]]");
        let back: TaylorPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
