//! Norm-layer properties: quadrature versus closed monomial integrals,
//! family norms staying bounded as the parameter approaches 1, and the
//! Dirichlet/Bergman shift identity.

use hmu_core::spaces::{
    bergman_norm, bloch_norm, dirichlet_norm, kernel_power_terms, test_f_bergman, test_g_log,
    QuadratureGrid,
};
use hmu_core::special::beta_fn;
use hmu_core::taylor::TaylorPoly;
use hmu_core::Complex64;
use proptest::prelude::*;

#[test]
fn monomial_norm_oracle_to_degree_64() {
    // closed monomial integral: ||z^k||_{A^2_0} = (k+1)^{-1/2}
    let grid = QuadratureGrid::auto_for(64, 0.0).unwrap();
    for k in 0..=64usize {
        let norm = bergman_norm(&TaylorPoly::monomial(k), 2.0, 0.0, &grid).unwrap();
        let exact = 1.0 / (k as f64 + 1.0).sqrt();
        assert!(
            (norm - exact).abs() <= 1e-8 * exact,
            "k={k}: {norm} vs {exact}"
        );
    }
}

#[test]
fn bergman_family_norms_stay_bounded() {
    // sup over the family parameter is finite; probe at three parameters and
    // require the spread to stay within a factor 4
    for &(p, alpha) in &[(2.0, 0.0), (1.0, 0.5), (3.0, 1.0)] {
        let c = (alpha + 2.0) / p;
        let mut norms = Vec::new();
        for &a in &[0.5, 0.9, 0.99] {
            let n = kernel_power_terms(a, 2.0 * c, 15);
            let f = test_f_bergman(a, p, alpha, n).unwrap();
            let grid = QuadratureGrid::auto_for(f.degree(), alpha).unwrap();
            norms.push(bergman_norm(&f, p, alpha, &grid).unwrap());
        }
        let max = norms.iter().copied().fold(f64::MIN, f64::max);
        let min = norms.iter().copied().fold(f64::MAX, f64::min);
        assert!(
            max / min <= 4.0,
            "family norms spread too wide at (p={p}, alpha={alpha}): {norms:?}"
        );
    }
}

#[test]
fn family_evaluation_matches_direct_formula() {
    for &(a, p, alpha) in &[(0.5, 2.0, 0.0), (0.8, 1.0, 1.0), (0.9, 2.5, -0.5)] {
        let c = (alpha + 2.0) / p;
        let n = kernel_power_terms(a, 2.0 * c, 15);
        let f = test_f_bergman(a, p, alpha, n).unwrap();
        for i in 0..=8 {
            let t = a * i as f64 / 8.0;
            let direct = ((1.0 - a * a) / ((1.0 - a * t) * (1.0 - a * t))).powf(c);
            let series = f.evaluate_real(t).re;
            assert!(
                (series - direct).abs() <= 1e-8 * (1.0 + direct),
                "a={a} t={t}: series {series} vs direct {direct}"
            );
        }
    }
}

#[test]
fn log_family_bloch_norms_stay_bounded() {
    let mut norms = Vec::new();
    for &a in &[0.3, 0.6, 0.9, 0.99] {
        let mut n = 64usize;
        while test_g_log(a, n).is_err() {
            n *= 2;
        }
        let g = test_g_log(a, n).unwrap();
        let grid = QuadratureGrid::new(96, 2 * (g.degree() + 2), 0.0).unwrap();
        norms.push(bloch_norm(&g, &grid).unwrap());
    }
    let max = norms.iter().copied().fold(f64::MIN, f64::max);
    let min = norms.iter().copied().fold(f64::MAX, f64::min);
    assert!(max / min < 4.0, "Bloch norms of the log family: {norms:?}");
    // the family limit: |g(0)| = log 2 and sup (1-r^2) a/(1-a r) increases
    // to 2 as a -> 1, so log 2 + 2 bounds every member
    assert!(max <= core::f64::consts::LN_2 + 2.0, "sup {max}");
}

#[test]
fn dirichlet_shift_identity_on_corpus() {
    // D^p_{alpha+p} norm of an antiderivative F is |F(0)| + ||f||_{A^p_{alpha+p}}
    // by construction; numerically the two calls must agree to roundoff, and
    // the equivalence A^p_alpha = D^p_{alpha+p} shows as a bounded ratio, not
    // an identity.
    let corpus: Vec<TaylorPoly> = vec![
        TaylorPoly::from_real(&[1.0]),
        TaylorPoly::from_real(&[0.0, 1.0]),
        TaylorPoly::from_real(&[1.0, -2.0, 0.5, 0.25]),
        TaylorPoly::monomial(8),
        test_f_bergman(0.6, 2.0, 0.0, 256).unwrap(),
    ];
    let mut ratios = Vec::new();
    for &(p, alpha) in &[(2.0, 0.0), (1.5, 0.5)] {
        let shifted = alpha + p;
        for f in &corpus {
            let big_f = f.antiderivative();
            let grid_hi = QuadratureGrid::auto_for(big_f.degree(), shifted).unwrap();
            let lhs = dirichlet_norm(&big_f, p, shifted, &grid_hi).unwrap();
            let rhs = big_f.coeff(0).norm() + bergman_norm(f, p, shifted, &grid_hi).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-12 * (1.0 + rhs),
                "construction identity violated: {lhs} vs {rhs}"
            );
            let grid_lo = QuadratureGrid::auto_for(f.degree(), alpha).unwrap();
            let bergman = bergman_norm(f, p, alpha, &grid_lo).unwrap();
            ratios.push(lhs / bergman.max(1e-300));
        }
    }
    for r in &ratios {
        assert!(
            (0.02..=50.0).contains(r),
            "norm equivalence ratio out of band: {ratios:?}"
        );
    }
}

#[test]
fn weighted_monomial_norms_against_beta_integrals() {
    // ||z^k||_{A^p_alpha}^p = (alpha+1) B(kp/2+1, alpha+1) for even integrand
    // powers; checked at p = 4 where |z^k|^4 is again a monomial in x
    let alpha = 0.5;
    let grid = QuadratureGrid::auto_for(40, alpha).unwrap();
    for k in [0usize, 1, 3, 9] {
        let norm = bergman_norm(&TaylorPoly::monomial(k), 4.0, alpha, &grid).unwrap();
        let exact = ((alpha + 1.0) * beta_fn(2.0 * k as f64 + 1.0, alpha + 1.0)).powf(0.25);
        assert!(
            (norm - exact).abs() <= 1e-8 * exact,
            "k={k}: {norm} vs {exact}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_homogeneity(
        coeffs in proptest::collection::vec(-2.0..2.0f64, 1..12),
        scale_re in -3.0..3.0f64,
        scale_im in -3.0..3.0f64,
    ) {
        let f = TaylorPoly::from_real(&coeffs);
        let lambda = Complex64::new(scale_re, scale_im);
        let grid = QuadratureGrid::auto_for(coeffs.len(), 0.0).unwrap();
        let base = bergman_norm(&f, 2.0, 0.0, &grid).unwrap();
        let scaled = bergman_norm(&f.scale(lambda), 2.0, 0.0, &grid).unwrap();
        prop_assert!((scaled - lambda.norm() * base).abs() <= 1e-10 * (1.0 + base));
    }

    #[test]
    fn alpha_refinement_is_continuous(alpha in -0.5..2.0f64) {
        // norm varies continuously in alpha: compare alpha with alpha + h
        let f = TaylorPoly::from_real(&[1.0, 0.5, -0.25]);
        let h = 1e-4;
        let g1 = QuadratureGrid::auto_for(4, alpha).unwrap();
        let g2 = QuadratureGrid::auto_for(4, alpha + h).unwrap();
        let n1 = bergman_norm(&f, 2.0, alpha, &g1).unwrap();
        let n2 = bergman_norm(&f, 2.0, alpha + h, &g2).unwrap();
        prop_assert!((n1 - n2).abs() < 50.0 * h * (1.0 + n1));
    }
}
