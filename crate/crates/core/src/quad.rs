//! Quadrature kernels: adaptive Gauss–Kronrod integration, Gauss–Jacobi
//! rules for endpoint-weighted radial integrals, and FFT evaluation of
//! polynomials on circles.

use alloc::vec::Vec;
// float math in no_std builds; shadowed by the inherent methods
// whenever a std-enabled dependency is linked in
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::{Complex64, Result};

// 21-point Kronrod abscissae; the embedded 10-point Gauss nodes sit at the
// odd indices.
#[allow(clippy::excessive_precision)]
const XGK21: [f64; 10] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
];

#[allow(clippy::excessive_precision)]
const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One Gauss–Kronrod 21-point pass over `[a, b]` for a complex integrand.
/// Returns the Kronrod value, a QUADPACK-style error estimate, and the
/// integral of `|f|` (the roundoff scale).
pub fn kronrod21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut resk = fc * WGK21[10];
    let mut resg = Complex64::new(0.0, 0.0);
    let mut resabs = fc.norm() * WGK21[10];

    let mut samples = [Complex64::new(0.0, 0.0); 20];
    for (j, &x) in XGK21.iter().enumerate() {
        let f1 = f(center - half * x);
        let f2 = f(center + half * x);
        samples[2 * j] = f1;
        samples[2 * j + 1] = f2;
        resk += (f1 + f2) * WGK21[j];
        resabs += (f1.norm() + f2.norm()) * WGK21[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG10[j / 2];
        }
    }

    let mean = resk * 0.5;
    let mut resasc = (fc - mean).norm() * WGK21[10];
    for (j, _) in XGK21.iter().enumerate() {
        resasc += ((samples[2 * j] - mean).norm() + (samples[2 * j + 1] - mean).norm()) * WGK21[j];
    }

    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();

    let mut err = ((resk - resg) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let tiny = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if resabs > tiny {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err, resabs)
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    resabs: f64,
}

/// Globally adaptive integration of a complex integrand over `[a, b]` to
/// absolute tolerance `tol`. Subdivides the segment with the largest error
/// estimate until the total estimate meets `tol`; refuses after
/// `max_segments` bisections, which signals a non-integrable integrand.
pub fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_segments: usize,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (value, err, resabs) = kronrod21(f, a, b);
    let mut segments = vec![Segment {
        a,
        b,
        value,
        err,
        resabs,
    }];

    loop {
        let mut total = Complex64::new(0.0, 0.0);
        let mut total_err = 0.0;
        let mut total_resabs = 0.0;
        let mut worst = 0;
        let mut worst_err = -1.0;
        for (i, s) in segments.iter().enumerate() {
            total += s.value;
            total_err += s.err;
            total_resabs += s.resabs;
            if s.err > worst_err {
                worst_err = s.err;
                worst = i;
            }
        }
        // requested tolerance, floored at the attainable roundoff level
        let target = tol.max(100.0 * f64::EPSILON * total_resabs);
        if total_err <= target {
            return Ok(total);
        }
        if segments.len() >= max_segments {
            return Err(Error::NonConvergent {
                partial: total.norm(),
                estimate: total_err,
            });
        }
        let Segment { a, b, .. } = segments[worst];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // interval exhausted at machine precision
            return Err(Error::NonConvergent {
                partial: total.norm(),
                estimate: total_err,
            });
        }
        let (v1, e1, r1) = kronrod21(f, a, mid);
        let (v2, e2, r2) = kronrod21(f, mid, b);
        segments[worst] = Segment {
            a,
            b: mid,
            value: v1,
            err: e1,
            resabs: r1,
        };
        segments.push(Segment {
            a: mid,
            b,
            value: v2,
            err: e2,
            resabs: r2,
        });
    }
}

/// Real-valued convenience wrapper around [`adaptive`].
pub fn adaptive_real<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_segments: usize,
) -> Result<f64> {
    adaptive(&|t| Complex64::new(f(t), 0.0), a, b, tol, max_segments).map(|v| v.re)
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix, by the implicit-shift QL algorithm. `diag` has length n,
/// `off[i]` couples rows i and i+1 (length n-1). Used for Golub–Welsch.
fn tridiag_eigen_first_components(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(off);
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    if n == 1 {
        return Ok((d, z));
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NonConvergent {
                    partial: d[l],
                    estimate: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

/// Gauss–Jacobi rule on `[0, 1]` for the weight `(1 - t)^alpha`:
/// `sum w_i g(t_i)` approximates the integral of `g(t) (1-t)^alpha` over
/// `[0, 1]`, exactly for polynomials of degree <= 2n - 1. Requires
/// `alpha > -1`. Nodes are returned in ascending order.
pub fn gauss_jacobi_01(n: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "Gauss-Jacobi rule needs at least one node".into(),
        ));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Gauss-Jacobi weight exponent must be > -1, got {alpha}"
        )));
    }
    // Symmetric Golub-Welsch matrix for the Jacobi weight (1-x)^alpha on
    // [-1, 1] (the second Jacobi exponent is 0).
    let a = alpha;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    diag.push(-a / (2.0 + a));
    for j in 1..n {
        let j = j as f64;
        let denom = 2.0 * j + a;
        diag.push((-a * a) / (denom * (denom + 2.0)));
        let off_j = (4.0 * j * (j + a) * j * (j + a)
            / (denom * denom * (denom + 1.0) * (denom - 1.0)))
            .sqrt();
        off.push(off_j);
    }
    // diag entries: d_0 = (b-a)/(a+b+2) with b=0; d_j = (b^2-a^2)/((2j+a+b)(2j+a+b+2)).
    // off entries between j-1 and j: sqrt(4 j (j+a)(j+b)(j+a+b) / ((2j+a+b)^2 ((2j+a+b)^2 - 1))).
    let (nodes, first) = tridiag_eigen_first_components(&diag, &off)?;

    let mu0 = 2.0.powf(a + 1.0) / (a + 1.0);
    let scale = 2.0.powf(-a - 1.0);
    let mut pairs: Vec<(f64, f64)> = nodes
        .iter()
        .zip(first.iter())
        .map(|(&x, &z)| (0.5 * (1.0 + x), scale * mu0 * z * z))
        .collect();
    pairs.sort_unstable_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pairs.into_iter().unzip())
}

/// In-place radix-2 DFT with sign `+1` in the exponent:
/// `out[j] = sum_n in[n] * exp(+2 pi i n j / m)`. Length must be a power of
/// two.
fn dft_pos_in_place(buf: &mut [Complex64]) {
    let m = buf.len();
    debug_assert!(m.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 0..m {
        if i < j {
            buf.swap(i, j);
        }
        let mut mask = m >> 1;
        while mask > 0 && j & mask != 0 {
            j &= !mask;
            mask >>= 1;
        }
        j |= mask;
    }
    let mut len = 2;
    while len <= m {
        let ang = 2.0 * core::f64::consts::PI / len as f64;
        let wlen = Complex64::new(ang.cos(), ang.sin());
        let mut i = 0;
        while i < m {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[i + k];
                let v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wlen;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Evaluates a polynomial with the given coefficients at the `m` points
/// `r * exp(2 pi i j / m)`, `j = 0..m`. `m` must be a power of two strictly
/// greater than the polynomial degree, otherwise the circle samples would
/// alias.
pub fn polyval_circle(coeffs: &[Complex64], radius: f64, m: usize) -> Result<Vec<Complex64>> {
    if !m.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "angular node count must be a power of two, got {m}"
        )));
    }
    if coeffs.len() > m {
        return Err(Error::GridTooCoarse {
            discrepancy: (coeffs.len() - m) as f64,
            tolerance: 0.0,
        });
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut rp = 1.0;
    for (n, &c) in coeffs.iter().enumerate() {
        buf[n] = c * rp;
        rp *= radius;
        if n + 1 < coeffs.len() && rp == 0.0 {
            break;
        }
    }
    dft_pos_in_place(&mut buf);
    Ok(buf)
}
