//! Bessel kernels for the radial reductions and their closed-form
//! cross-checks.
//!
//! `j0`/`j1` delegate to the libm ports of the classic double-precision
//! routines. `k1` is assembled here from the convergent ascending series at
//! small argument and the asymptotic expansion at large argument; it only
//! backs closed-form oracles, never a quadrature path.

/// Bessel function of the first kind, order zero.
pub fn j0(x: f64) -> f64 {
    libm::j0(x)
}

/// Bessel function of the first kind, order one.
pub fn j1(x: f64) -> f64 {
    libm::j1(x)
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Modified Bessel function of the second kind, order one.
///
/// Worst-case relative error is about 2e-8 near the series/asymptotic
/// crossover at x = 9 (series cancellation on one side, asymptotic
/// truncation on the other); elsewhere the accuracy is much better.
/// Returns NaN for x <= 0.
pub fn k1(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NAN;
    }
    if x <= 9.0 {
        k1_series(x)
    } else {
        k1_asymptotic(x)
    }
}

/// Ascending series,
/// K1(x) = ln(x/2) I1(x) + 1/x - (x/4) sum_k [psi(k+1)+psi(k+2)] t_k
/// with t_k = (x^2/4)^k / (k! (k+1)!); I1 shares the same t_k.
fn k1_series(x: f64) -> f64 {
    let z = 0.25 * x * x;
    let mut t = 1.0;
    let mut psi1 = -EULER_GAMMA;
    let mut psi2 = 1.0 - EULER_GAMMA;
    let mut s_plain = t;
    let mut s_psi = (psi1 + psi2) * t;
    for k in 1..200 {
        let kf = k as f64;
        t *= z / (kf * (kf + 1.0));
        psi1 += 1.0 / kf;
        psi2 += 1.0 / (kf + 1.0);
        s_plain += t;
        s_psi += (psi1 + psi2) * t;
        if (psi1 + psi2) * t < 1e-18 * s_psi.abs() {
            break;
        }
    }
    let i1 = 0.5 * x * s_plain;
    (0.5 * x).ln() * i1 + 1.0 / x - 0.25 * x * s_psi
}

/// K1(x) ~ sqrt(pi/(2x)) e^{-x} [1 + sum_k prod_{j<=k} (4-(2j-1)^2)/(8jx)],
/// truncated at the smallest term.
fn k1_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        term *= (4.0 - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf * x);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        sum += term;
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}

/// s-th positive zero of J0 (s >= 1), by Newton refinement of the McMahon
/// seed. Uses J0' = -J1; the seed lands well within the basin for all s.
pub(crate) fn j0_zero(s: usize) -> f64 {
    debug_assert!(s >= 1);
    let mut x = (s as f64 - 0.25) * std::f64::consts::PI;
    for _ in 0..12 {
        let step = j0(x) / j1(x);
        x += step;
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values computed with mpmath at 30 digits
    const K1_TABLE: [(f64, f64); 12] = [
        (0.01, 99.973894118296247643),
        (0.1, 9.8538447808706061348),
        (0.5, 1.6564411200033008937),
        (1.0, 0.60190723019723457474),
        (2.0, 0.13986588181652242728),
        (3.0, 0.040156431128194184377),
        (5.0, 0.0040446134454521642084),
        (8.0, 0.00015536921180500113392),
        (9.0, 5.3637016379451945249e-5),
        (10.0, 1.8648773453825584597e-5),
        (15.0, 1.014172936976209181e-7),
        (20.0, 5.8830579695570381777e-10),
    ];

    #[test]
    fn k1_matches_reference_table() {
        for &(x, expected) in &K1_TABLE {
            let got = k1(x);
            let rel = ((got - expected) / expected).abs();
            assert!(rel < 5e-8, "k1({x}) = {got}, expected {expected}, rel {rel:e}");
        }
    }

    #[test]
    fn k1_rejects_nonpositive() {
        assert!(k1(0.0).is_nan());
        assert!(k1(-1.0).is_nan());
    }

    #[test]
    fn j_spot_values() {
        // mpmath references
        assert!((j0(1.0) - 0.76519768655796655145).abs() < 1e-15);
        assert!((j1(1.0) - 0.44005058574493351596).abs() < 1e-15);
        assert!((j0(10.0) - (-0.2459357644513483352)).abs() < 1e-15);
        assert!((j1(50.0) - (-0.097511828125175137661)).abs() < 1e-14);
    }

    #[test]
    fn j0_zeros_are_zeros() {
        let known = [2.404825557695773, 5.520078110286311, 8.653727912911012];
        for (i, &z) in known.iter().enumerate() {
            let got = j0_zero(i + 1);
            assert!((got - z).abs() < 1e-12, "zero {} = {got}", i + 1);
        }
        for s in [10usize, 100, 10_000, 3_000_000] {
            let z = j0_zero(s);
            assert!(j0(z).abs() < 1e-10, "j0(zero {s}) = {}", j0(z));
        }
    }
}
