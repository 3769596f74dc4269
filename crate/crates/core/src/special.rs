//! Gamma-function ratios and Beta integrals.

// float math in no_std builds; shadowed by the inherent methods
// whenever a std-enabled dependency is linked in
#[allow(unused_imports)]
use num_traits::Float;


/// `Gamma(n + beta) / (n! * Gamma(beta))` by the stable recurrence
/// `c_0 = 1`, `c_n = c_{n-1} * (n - 1 + beta) / n`.
///
/// This is the row weight of the moment matrix and, equivalently, the n-th
/// binomial-series coefficient of `(1 - w)^{-beta}`. The recurrence avoids
/// the overflow of forming the Gamma values themselves.
pub fn gamma_ratio(n: usize, beta: f64) -> f64 {
    debug_assert!(beta > 0.0);
    let mut c = 1.0;
    for k in 1..=n {
        c *= (k as f64 - 1.0 + beta) / k as f64;
    }
    c
}

/// All ratios `gamma_ratio(0..=n_max, beta)` in one pass.
pub fn gamma_ratio_seq(n_max: usize, beta: f64) -> alloc::vec::Vec<f64> {
    debug_assert!(beta > 0.0);
    let mut out = alloc::vec::Vec::with_capacity(n_max + 1);
    let mut c = 1.0;
    out.push(c);
    for k in 1..=n_max {
        c *= (k as f64 - 1.0 + beta) / k as f64;
        out.push(c);
    }
    out
}

/// Natural log of the Gamma function.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `gamma_ratio` evaluated through log-Gamma differences. Used as the
/// independent cross-check of the recurrence.
pub fn gamma_ratio_via_ln_gamma(n: usize, beta: f64) -> f64 {
    let n = n as f64;
    (ln_gamma(n + beta) - ln_gamma(n + 1.0) - ln_gamma(beta)).exp()
}

/// Euler Beta function `B(a, b)` for positive arguments.
pub fn beta_fn(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ratio_is_one_for_beta_one() {
        for n in [0, 1, 5, 100, 500] {
            assert_eq!(gamma_ratio(n, 1.0), 1.0);
        }
    }

    #[test]
    fn ratio_is_n_plus_one_for_beta_two() {
        for n in [0, 3, 17, 200] {
            assert_relative_eq!(gamma_ratio(n, 2.0), (n + 1) as f64, max_relative = 1e-14);
        }
    }

    #[test]
    fn ratio_half_beta() {
        // 1 * (0.5/1) * (1.5/2) = 0.375
        assert_relative_eq!(gamma_ratio(2, 0.5), 0.375, max_relative = 1e-15);
        assert_relative_eq!(
            gamma_ratio(2, 0.5),
            gamma_ratio_via_ln_gamma(2, 0.5),
            max_relative = 1e-12
        );
    }

    #[test]
    fn recurrence_matches_ln_gamma_route() {
        for &beta in &[0.5, 1.0, 2.0, 3.7] {
            for n in (0..=500).step_by(25) {
                let rec = gamma_ratio(n, beta);
                let lg = gamma_ratio_via_ln_gamma(n, beta);
                assert_relative_eq!(rec, lg, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn seq_agrees_with_pointwise() {
        let seq = gamma_ratio_seq(64, 2.75);
        for (n, &v) in seq.iter().enumerate() {
            assert_eq!(v, gamma_ratio(n, 2.75));
        }
    }

    #[test]
    fn beta_fn_closed_forms() {
        // B(2,2) = 1/6, B(n+1,1) = 1/(n+1)
        assert_relative_eq!(beta_fn(2.0, 2.0), 1.0 / 6.0, max_relative = 1e-13);
        assert_relative_eq!(beta_fn(4.0, 1.0), 0.25, max_relative = 1e-13);
    }
}
