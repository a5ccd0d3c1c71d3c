//! Cutoff-regularized one-loop integrals.
//!
//! The regulator is a hard radial cutoff `|k| <= Lambda` applied after exact
//! 4D angular reduction (`int d^4k f(k^2) = 2 pi^2 int_0^Lambda k^3 f(k^2)
//! dk`); one-loop flow coefficients are scheme independent, and this scheme
//! admits closed forms for every divergent integral.
//!
//! For the oscillatory tadpole the angular average of `e^{i k.v}` is
//! `2 J1(k|v|)/(k|v|)`, and one exact integration by parts trades the
//! growing-amplitude `J1` kernel for a decaying `J0` kernel:
//!
//! ```text
//! S1(p; Lambda) = (8 pi^2 m^2 / q^2) int_0^Lambda k J0(k q)/(k^2+m^2)^2 dk
//!                 - 4 pi^2 J0(Lambda q) Lambda^2 / (q^2 (Lambda^2 + m^2)),
//! q = |Theta p|.
//! ```
//!
//! The remaining integral is evaluated between consecutive kernel zeros with
//! the alternating tail accelerated, which keeps the cost bounded uniformly
//! in `Lambda q`; dropping the explicit boundary oscillation gives the
//! `Lambda -> inf` value.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Momentum4, ThetaMatrix};
use crate::numeric::bessel;
use crate::numeric::oscillatory::{self, Upper};
use crate::numeric::quad;

const REL_TOL: f64 = 1e-11;

/// Hard radial momentum cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    lambda: f64,
}

impl Cutoff {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cutoff must be positive and finite, got {lambda}"
            )));
        }
        Ok(Cutoff { lambda })
    }

    pub fn value(&self) -> f64 {
        self.lambda
    }
}

/// Which integral an [`AmplitudeResult`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrandId {
    S1Zero,
    S1P,
    S2,
    NcTadpole,
    NcBubble1,
    NcBubble2,
}

impl IntegrandId {
    pub fn name(&self) -> &'static str {
        match self {
            IntegrandId::S1Zero => "s1_zero",
            IntegrandId::S1P => "s1_p",
            IntegrandId::S2 => "s2",
            IntegrandId::NcTadpole => "nc_tadpole",
            IntegrandId::NcBubble1 => "nc_bubble_1",
            IntegrandId::NcBubble2 => "nc_bubble_2",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "s1_zero" => Some(IntegrandId::S1Zero),
            "s1_p" => Some(IntegrandId::S1P),
            "s2" => Some(IntegrandId::S2),
            "nc_tadpole" => Some(IntegrandId::NcTadpole),
            "nc_bubble_1" => Some(IntegrandId::NcBubble1),
            "nc_bubble_2" => Some(IntegrandId::NcBubble2),
            _ => None,
        }
    }
}

impl std::fmt::Display for IntegrandId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Value of a regularized integral at a given cutoff.
///
/// `abs_error` is a one-sigma-style estimate: machine-epsilon scaled for
/// closed forms, the adaptive estimate for quadratures.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AmplitudeResult {
    pub integrand: IntegrandId,
    pub lambda: f64,
    pub value: f64,
    pub abs_error: f64,
}

impl AmplitudeResult {
    /// CSV row `integrand_id,Lambda,value,abs_error` with 17 significant
    /// digits.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e}",
            self.integrand, self.lambda, self.value, self.abs_error
        )
    }
}

/// `S1(0) = int_{|k|<=Lambda} d^4k / (k^2+m^2)
///        = pi^2 [Lambda^2 - m^2 ln(1 + Lambda^2/m^2)]`, quadratically
/// divergent.
pub fn s1_zero(params: &ModelParams, cutoff: Cutoff) -> AmplitudeResult {
    let l2 = cutoff.value() * cutoff.value();
    let m2 = params.m2;
    let log_term = m2 * (l2 / m2).ln_1p();
    let value = PI * PI * (l2 - log_term);
    AmplitudeResult {
        integrand: IntegrandId::S1Zero,
        lambda: cutoff.value(),
        value,
        abs_error: 8.0 * f64::EPSILON * PI * PI * (l2 + log_term.abs()),
    }
}

/// `S2 = int_{|k|<=Lambda} d^4k / (k^2+m^2)^2
///     = pi^2 [ln(1 + Lambda^2/m^2) - Lambda^2/(Lambda^2+m^2)]`,
/// logarithmically divergent.
pub fn s2(params: &ModelParams, cutoff: Cutoff) -> AmplitudeResult {
    let l2 = cutoff.value() * cutoff.value();
    let m2 = params.m2;
    let value = PI * PI * ((l2 / m2).ln_1p() - l2 / (l2 + m2));
    AmplitudeResult {
        integrand: IntegrandId::S2,
        lambda: cutoff.value(),
        value,
        abs_error: 8.0 * f64::EPSILON * PI * PI * ((l2 / m2).ln_1p() + 1.0),
    }
}

/// Oscillation scale `q = |Theta p|`; must be positive.
fn oscillation_scale(theta: &ThetaMatrix, p: &Momentum4) -> Result<f64> {
    let q = theta.apply(p).norm();
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!(
            "oscillation scale theta|p| must be positive, got {q} (p = 0?)"
        )));
    }
    Ok(q)
}

fn s1_p_assemble(m2: f64, q: f64, upper: Upper) -> Result<(f64, f64)> {
    let h = move |k: f64| k / (k * k + m2) / (k * k + m2);
    // |int h J0| <= 1/(2 m2); this scales the absolute target
    let abs_tol = 1e-13 / (2.0 * m2);
    let core = oscillatory::j0_weighted(h, q, upper, abs_tol)?;
    let prefactor = 8.0 * PI * PI * m2 / (q * q);
    let boundary = match upper {
        Upper::Finite(lambda) => {
            let l2 = lambda * lambda;
            4.0 * PI * PI * bessel::j0(lambda * q) * l2 / (q * q * (l2 + m2))
        }
        Upper::Infinite => 0.0,
    };
    let value = prefactor * core.value - boundary;
    let abs_error = prefactor * core.abs_error
        + 8.0 * f64::EPSILON * (prefactor * core.value.abs() + boundary.abs());
    Ok((value, abs_error))
}

/// The oscillatory tadpole
/// `S1(p) = int_{|k|<=Lambda} d^4k e^{i k.Theta p}/(k^2+m^2)`.
///
/// Real by symmetry (the angular average of the phase is `2J1(kq)/(kq)`);
/// the hard-cutoff boundary contributes an explicit `J0(Lambda q)`
/// oscillation which is part of the exact value.
pub fn s1_p(
    params: &ModelParams,
    theta: &ThetaMatrix,
    p: &Momentum4,
    cutoff: Cutoff,
) -> Result<AmplitudeResult> {
    let q = oscillation_scale(theta, p)?;
    let (value, abs_error) = s1_p_assemble(params.m2, q, Upper::Finite(cutoff.value()))?;
    Ok(AmplitudeResult {
        integrand: IntegrandId::S1P,
        lambda: cutoff.value(),
        value,
        abs_error,
    })
}

/// `S1(p)` with the cutoff removed: `4 pi^2 m K1(m theta|p|)/(theta|p|)`
/// as a quadrature value (the Bessel-K closed form is kept for
/// cross-checks, not used here).
pub fn s1_p_limit(
    params: &ModelParams,
    theta: &ThetaMatrix,
    p: &Momentum4,
) -> Result<AmplitudeResult> {
    let q = oscillation_scale(theta, p)?;
    let (value, abs_error) = s1_p_assemble(params.m2, q, Upper::Infinite)?;
    Ok(AmplitudeResult {
        integrand: IntegrandId::S1P,
        lambda: f64::INFINITY,
        value,
        abs_error,
    })
}

/// The cutoff nearest to `nominal` at which the boundary oscillation
/// `J0(Lambda q)` vanishes, i.e. `Lambda q` a zero of J0.
pub fn phase_commensurate_cutoff(
    theta: &ThetaMatrix,
    p: &Momentum4,
    nominal: Cutoff,
) -> Result<Cutoff> {
    let q = oscillation_scale(theta, p)?;
    let x = nominal.value() * q;
    let s = ((x / PI + 0.25).round() as isize).max(1) as usize;
    Cutoff::new(bessel::j0_zero(s) / q)
}

/// `S1(p)` at the phase-commensurate cutoff nearest to `nominal`.
///
/// At such cutoffs the hard-cutoff surface term vanishes identically, so
/// grid samples of this evaluation expose the smooth flow of the
/// planar-irregular sector instead of the regulator's boundary oscillation.
/// The snapped cutoff is reported in the result's `lambda`.
pub fn s1_p_averaged(
    params: &ModelParams,
    theta: &ThetaMatrix,
    p: &Momentum4,
    nominal: Cutoff,
) -> Result<AmplitudeResult> {
    let snapped = phase_commensurate_cutoff(theta, p, nominal)?;
    s1_p(params, theta, p, snapped)
}

/// A finite correction integral together with its cutoff-removed value.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NcCorrection {
    pub at_cutoff: AmplitudeResult,
    /// `Lambda -> inf` value (partial-fraction closed form where the three
    /// poles are simple, quadrature otherwise).
    pub limit: f64,
}

fn zero_correction(id: IntegrandId, cutoff: Cutoff) -> NcCorrection {
    NcCorrection {
        at_cutoff: AmplitudeResult {
            integrand: id,
            lambda: cutoff.value(),
            value: 0.0,
            abs_error: 0.0,
        },
        limit: 0.0,
    }
}

/// Correction to the regular tadpoles:
/// `(a/theta^2) int_{|p|<=Lambda} d^4p / ((p^2+m^2)(p^2+m1^2)(p^2+m2^2))`.
///
/// Convergent; the limit comes from the partial-fraction closed form over
/// the three simple poles.
pub fn nc_tadpole_correction(params: &ModelParams, cutoff: Cutoff) -> Result<NcCorrection> {
    if params.a == 0.0 {
        return Ok(zero_correction(IntegrandId::NcTadpole, cutoff));
    }
    let roots = params.roots()?;
    let (x0, x1, x2) = (params.m2, roots.m1_sq, roots.m2_sq);
    let prefactor = params.ir_coefficient() * 2.0 * PI * PI;
    let f = move |k: f64| {
        let u = k * k;
        k * u / ((u + x0) * (u + x1) * (u + x2))
    };
    let q = quad::integrate(f, 0.0, cutoff.value(), 1e-300, REL_TOL)?;
    let limit = if roots.is_degenerate() {
        let g = move |u: f64| 0.5 * u / ((u + x0) * (u + x1) * (u + x2));
        prefactor * quad::integrate_to_inf(g, 0.0, 1e-300, REL_TOL)?.value
    } else {
        // int_0^inf u du / prod_j (u + X_j) = -sum_j R_j ln X_j with
        // R_j = -X_j / prod_{l != j} (X_l - X_j)  (the R_j sum to zero)
        let poles = [x0, x1, x2];
        let mut acc = 0.0;
        for j in 0..3 {
            let mut denom = 1.0;
            for l in 0..3 {
                if l != j {
                    denom *= poles[l] - poles[j];
                }
            }
            acc -= (-poles[j] / denom) * poles[j].ln();
        }
        0.5 * prefactor * acc
    };
    Ok(NcCorrection {
        at_cutoff: AmplitudeResult {
            integrand: IntegrandId::NcTadpole,
            lambda: cutoff.value(),
            value: prefactor * q.value,
            abs_error: prefactor * q.abs_error,
        },
        limit,
    })
}

/// The two correction integrals of the bubble:
/// `2(a/theta^2) int d^4p / ((p^2+m^2)^2 (p^2+m1^2)(p^2+m2^2))` and
/// `(a/theta^2)^2 int d^4p / [(p^2+m^2)(p^2+m1^2)(p^2+m2^2)]^2`.
pub fn nc_bubble_corrections(
    params: &ModelParams,
    cutoff: Cutoff,
) -> Result<(NcCorrection, NcCorrection)> {
    if params.a == 0.0 {
        return Ok((
            zero_correction(IntegrandId::NcBubble1, cutoff),
            zero_correction(IntegrandId::NcBubble2, cutoff),
        ));
    }
    let roots = params.roots()?;
    let (x0, x1, x2) = (params.m2, roots.m1_sq, roots.m2_sq);
    let b = params.ir_coefficient();

    let pref1 = 2.0 * b * 2.0 * PI * PI;
    let f1 = move |k: f64| {
        let u = k * k;
        k * u / ((u + x0) * (u + x0) * (u + x1) * (u + x2))
    };
    let g1 = move |u: f64| 0.5 * u / ((u + x0) * (u + x0) * (u + x1) * (u + x2));

    let pref2 = b * b * 2.0 * PI * PI;
    let f2 = move |k: f64| {
        let u = k * k;
        let d = (u + x0) * (u + x1) * (u + x2);
        k * u / (d * d)
    };
    let g2 = move |u: f64| {
        let d = (u + x0) * (u + x1) * (u + x2);
        0.5 * u / (d * d)
    };

    let q1 = quad::integrate(f1, 0.0, cutoff.value(), 1e-300, REL_TOL)?;
    let q2 = quad::integrate(f2, 0.0, cutoff.value(), 1e-300, REL_TOL)?;
    let lim1 = pref1 * quad::integrate_to_inf(g1, 0.0, 1e-300, REL_TOL)?.value;
    let lim2 = pref2 * quad::integrate_to_inf(g2, 0.0, 1e-300, REL_TOL)?.value;

    Ok((
        NcCorrection {
            at_cutoff: AmplitudeResult {
                integrand: IntegrandId::NcBubble1,
                lambda: cutoff.value(),
                value: pref1 * q1.value,
                abs_error: pref1 * q1.abs_error,
            },
            limit: lim1,
        },
        NcCorrection {
            at_cutoff: AmplitudeResult {
                integrand: IntegrandId::NcBubble2,
                lambda: cutoff.value(),
                value: pref2 * q2.value,
                abs_error: pref2 * q2.abs_error,
            },
            limit: lim2,
        },
    ))
}

/// One-loop self-energy split into planar regular and planar irregular
/// parts: `Sigma = -lambda (2 S1(0) + S1(p))`, `plr = -2 lambda S1(0)`,
/// `pli = -lambda S1(p)`; `sigma = plr + pli` by construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SelfEnergy {
    pub sigma: f64,
    pub plr: f64,
    pub pli: f64,
    pub abs_error: f64,
}

pub fn self_energy(
    params: &ModelParams,
    theta: &ThetaMatrix,
    p: &Momentum4,
    cutoff: Cutoff,
) -> Result<SelfEnergy> {
    let s0 = s1_zero(params, cutoff);
    let sp = s1_p(params, theta, p, cutoff)?;
    let plr = -2.0 * params.lambda * s0.value;
    let pli = -params.lambda * sp.value;
    Ok(SelfEnergy {
        sigma: plr + pli,
        plr,
        pli,
        abs_error: params.lambda.abs() * (2.0 * s0.abs_error + sp.abs_error),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::bessel::k1;

    fn params(a: f64) -> ModelParams {
        ModelParams::new(0.1, 1.0, a, 1.0).unwrap()
    }

    fn cutoff(l: f64) -> Cutoff {
        Cutoff::new(l).unwrap()
    }

    #[test]
    fn s1_zero_against_quadrature_and_frozen_value() {
        let r = s1_zero(&params(0.1), cutoff(10.0));
        // mpmath: pi^2 (100 - ln 101)
        assert!(
            (r.value - 941.41102634436157219).abs() < 1e-10,
            "value {}",
            r.value
        );
        let oracle = 2.0 * PI * PI
            * quad::integrate(|k| k * k * k / (k * k + 1.0), 0.0, 10.0, 1e-14, 1e-13)
                .unwrap()
                .value;
        assert!((r.value - oracle).abs() < 1e-10);
    }

    #[test]
    fn s1_zero_small_cutoff_taylor() {
        // pi^2 Lambda^4 / (2 m^2) + O(Lambda^6)
        let l = 1e-3;
        let r = s1_zero(&params(0.0), cutoff(l));
        let taylor = PI * PI * l.powi(4) / 2.0;
        assert!(((r.value - taylor) / taylor).abs() < 1e-5, "value {}", r.value);
    }

    #[test]
    fn s1_zero_quadratic_divergence() {
        let l = 1e6;
        let r = s1_zero(&params(0.1), cutoff(l));
        assert!(((r.value / (l * l)) - PI * PI).abs() < 1e-9);
    }

    #[test]
    fn s2_against_quadrature_and_log_growth() {
        let r = s2(&params(0.1), cutoff(50.0));
        assert!(
            (r.value - 67.358527857641247547).abs() < 1e-11,
            "value {}",
            r.value
        );
        let oracle = 2.0 * PI * PI
            * quad::integrate(
                |k| k * k * k / (k * k + 1.0) / (k * k + 1.0),
                0.0,
                50.0,
                1e-14,
                1e-13,
            )
            .unwrap()
            .value;
        assert!((r.value - oracle).abs() < 1e-10);

        // d s2 / d ln Lambda -> 2 pi^2
        let (l1, l2) = (1e5, 1e6);
        let slope = (s2(&params(0.1), cutoff(l2)).value - s2(&params(0.1), cutoff(l1)).value)
            / (l2 / l1).ln();
        assert!((slope - 2.0 * PI * PI).abs() < 1e-6, "slope {slope}");
    }

    #[test]
    fn s2_small_cutoff_taylor() {
        let l = 1e-3;
        let r = s2(&params(0.0), cutoff(l));
        let taylor = PI * PI * l.powi(4) / 2.0;
        assert!(((r.value - taylor) / taylor).abs() < 2e-5);
    }

    #[test]
    fn monotone_in_cutoff() {
        let pr = params(0.1);
        let mut prev_s1 = 0.0;
        let mut prev_s2 = 0.0;
        for i in 1..=20 {
            let c = cutoff(i as f64);
            let v1 = s1_zero(&pr, c).value;
            let v2 = s2(&pr, c).value;
            assert!(v1 > prev_s1 && v2 > prev_s2);
            prev_s1 = v1;
            prev_s2 = v2;
        }
    }

    #[test]
    fn s1_p_matches_frozen_2d_oracle() {
        // mpmath nested angular x radial quadrature at Lambda=5, q=1, m2=1
        let pr = params(0.1);
        let th = ThetaMatrix::canonical(1.0).unwrap();
        let p = Momentum4::radial(1.0);
        let r = s1_p(&pr, &th, &p, cutoff(5.0)).unwrap();
        let expected = 30.419276238336863728;
        assert!(
            ((r.value - expected) / expected).abs() < 1e-9,
            "value {} vs {expected}",
            r.value
        );
    }

    #[test]
    fn s1_p_limit_matches_bessel_k_closed_form() {
        let pr = params(0.1);
        let th = ThetaMatrix::canonical(1.0).unwrap();
        for &q in &[0.01, 0.1, 1.0, 4.0, 10.0] {
            let p = Momentum4::radial(q * q); // theta = 1 -> |p| = q
            let r = s1_p_limit(&pr, &th, &p).unwrap();
            let closed = 4.0 * PI * PI * k1(q) / q;
            let rel = ((r.value - closed) / closed).abs();
            assert!(rel < 1e-7, "q={q}: {} vs {closed}, rel {rel:e}", r.value);
        }
    }

    #[test]
    fn s1_p_decays_at_large_momentum() {
        let pr = params(0.1);
        let th = ThetaMatrix::canonical(1.0).unwrap();
        let p = Momentum4::radial(200.0 * 200.0);
        let r = s1_p(&pr, &th, &p, cutoff(10.0)).unwrap();
        assert!(r.value.abs() < 0.01, "value {}", r.value);
    }

    #[test]
    fn s1_p_rejects_zero_momentum() {
        let pr = params(0.1);
        let th = ThetaMatrix::canonical(1.0).unwrap();
        assert!(s1_p(&pr, &th, &Momentum4::radial(0.0), cutoff(10.0)).is_err());
    }

    #[test]
    fn averaged_cutoff_kills_boundary_term() {
        let pr = params(0.1);
        let th = ThetaMatrix::canonical(1.0).unwrap();
        let p = Momentum4::radial(1.0);
        let nominal = cutoff(200.0);
        let snapped = phase_commensurate_cutoff(&th, &p, nominal).unwrap();
        assert!((snapped.value() - 200.0).abs() < 2.0);
        assert!(bessel::j0(snapped.value()).abs() < 1e-12);
        let averaged = s1_p_averaged(&pr, &th, &p, nominal).unwrap();
        assert_eq!(averaged.lambda, snapped.value());
        // near the removed-cutoff value, without the boundary wiggle
        let lim = s1_p_limit(&pr, &th, &p).unwrap().value;
        assert!(
            ((averaged.value - lim) / lim).abs() < 1e-4,
            "averaged {} vs limit {lim}",
            averaged.value
        );
    }

    #[test]
    fn nc_tadpole_zero_coupling() {
        let r = nc_tadpole_correction(&params(0.0), cutoff(100.0)).unwrap();
        assert_eq!(r.at_cutoff.value, 0.0);
        assert_eq!(r.limit, 0.0);
    }

    #[test]
    fn nc_tadpole_partial_fraction_oracle() {
        // mpmath, a = 0.21 (roots 0.3/0.7) and a = 0.1
        let r = nc_tadpole_correction(&params(0.21), cutoff(1e6)).unwrap();
        assert!(
            ((r.limit - 1.6386792907760064554) / r.limit).abs() < 1e-12,
            "limit {}",
            r.limit
        );
        assert!(((r.at_cutoff.value - r.limit) / r.limit).abs() < 1e-8);

        let r = nc_tadpole_correction(&params(0.1), cutoff(1e6)).unwrap();
        assert!(((r.limit - 0.8462023726029214353) / r.limit).abs() < 1e-12);
    }

    #[test]
    fn nc_tadpole_cutoff_stability() {
        let r3 = nc_tadpole_correction(&params(0.1), cutoff(1e3)).unwrap();
        let r4 = nc_tadpole_correction(&params(0.1), cutoff(1e4)).unwrap();
        let drift = ((r3.at_cutoff.value - r4.at_cutoff.value) / r4.at_cutoff.value).abs();
        assert!(drift < 1e-3, "drift {drift:e}");
        assert!(((r3.at_cutoff.value - r3.limit) / r3.limit).abs() < 1e-3);
    }

    #[test]
    fn nc_bubbles_match_frozen_limits() {
        // mpmath values at a = 0.1, m2 = 1, theta = 1
        let (b1, b2) = nc_bubble_corrections(&params(0.1), cutoff(1e4)).unwrap();
        assert!(
            ((b1.limit - 0.75073371029660372338) / b1.limit).abs() < 1e-9,
            "b1 {}",
            b1.limit
        );
        assert!(
            ((b2.limit - 0.059834551077317327633) / b2.limit).abs() < 1e-9,
            "b2 {}",
            b2.limit
        );
        assert!(((b1.at_cutoff.value - b1.limit) / b1.limit).abs() < 1e-3);
        assert!(((b2.at_cutoff.value - b2.limit) / b2.limit).abs() < 1e-3);
    }

    #[test]
    fn nc_bubbles_degenerate_boundary_falls_back_to_quadrature() {
        let pr = params(0.25); // double root m1^2 = m2^2 = 1/2
        let (b1, b2) = nc_bubble_corrections(&pr, cutoff(1e4)).unwrap();
        assert!(b1.limit > 0.0 && b2.limit > 0.0);
        let t = nc_tadpole_correction(&pr, cutoff(1e4)).unwrap();
        assert!(((t.at_cutoff.value - t.limit) / t.limit).abs() < 1e-3);
    }

    #[test]
    fn self_energy_splits_exactly() {
        let pr = params(0.1);
        let th = ThetaMatrix::canonical(1.0).unwrap();
        let c = cutoff(100.0);
        let se = self_energy(&pr, &th, &Momentum4::radial(1.0), c).unwrap();
        assert_eq!(se.sigma, se.plr + se.pli);
        // plr carries no p dependence
        let se2 = self_energy(&pr, &th, &Momentum4::radial(7.0), c).unwrap();
        assert_eq!(se.plr, se2.plr);
    }

    #[test]
    fn pli_small_momentum_isolates_ir_pole() {
        // p^2 * pli -> -lambda 4 pi^2 / theta^2 as theta|p| -> 0 at
        // Lambda = inf (from x K1(x) -> 1)
        let pr = params(0.1);
        let th = ThetaMatrix::canonical(1.0).unwrap();
        let p_sq = 1e-6;
        let p = Momentum4::radial(p_sq);
        let sp = s1_p_limit(&pr, &th, &p).unwrap();
        let pli = -pr.lambda * sp.value;
        let expected = -pr.lambda * 4.0 * PI * PI;
        let got = p_sq * pli;
        assert!(
            ((got - expected) / expected).abs() < 1e-4,
            "got {got}, expected {expected}"
        );
    }

    #[test]
    fn csv_row_format() {
        let r = AmplitudeResult {
            integrand: IntegrandId::S2,
            lambda: 100.0,
            value: 1.5,
            abs_error: 1e-12,
        };
        let row = r.csv_row();
        assert!(row.starts_with("s2,1.0000000000000000e2,1.5000000000000000e0,"));
    }
}
