//! Renormalization-group data assembled from the one-loop amplitudes:
//! divergence-structure fits over a cutoff grid and the gamma, beta_m,
//! beta_a, beta_lambda report.
//!
//! Conventions: `Gamma^4 = -lambda + 2 lambda^2 S2(Lambda)` (the bubble's
//! combinatorial weight `(1/(2! 4^2)) 4^3 = 2` applied literally), so
//! `lambda_r = -Gamma^4 = lambda (1 - 2 lambda S2)`. The flow coefficient is
//! read off as the `ln Lambda` coefficient of the fitted `Gamma^4`, i.e. the
//! rate at which the bare coupling must run to hold the renormalized one
//! fixed; with `S2 ~ 2 pi^2 ln Lambda` this gives `beta_lambda = 4 pi^2
//! lambda^2` at one loop, positive as in the commutative theory. The mass
//! flow is fitted from the one-loop mass shift `m_r^2 - m_b^2 =
//! -Sigma_plr`.

use rayon::prelude::*;
use serde::Serialize;

use crate::amplitudes::{
    self, s1_p_averaged, s1_zero, s2, Cutoff,
};
use crate::error::{Error, Result};
use crate::model::{ModelParams, Momentum4, ThetaMatrix};
use crate::numeric::fit::least_squares_3;

/// A fit is accepted when its residual rms stays below this fraction of the
/// dominant fitted term.
pub const FIT_RESIDUAL_ACCEPT: f64 = 1e-3;

/// Log-spaced cutoff grid for divergence fits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutoffGrid {
    values: Vec<f64>,
}

impl CutoffGrid {
    pub fn log_spaced(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min > 0.0) || !min.is_finite() || !(max > min) || !max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cutoff grid needs 0 < min < max, got [{min}, {max}]"
            )));
        }
        if count < 6 {
            return Err(Error::InvalidParameter(format!(
                "cutoff grid needs at least 6 points, got {count}"
            )));
        }
        let ratio = max / min;
        let values = (0..count)
            .map(|i| min * ratio.powf(i as f64 / (count - 1) as f64))
            .collect();
        Ok(CutoffGrid { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Fit validity: the window must sit well above the mass scale.
    pub fn validate_for(&self, params: &ModelParams) -> Result<()> {
        let floor = 10.0 * params.m2.sqrt();
        if self.min() < floor {
            return Err(Error::InvalidParameter(format!(
                "grid minimum {} below fit validity floor 10 sqrt(m2) = {floor}",
                self.min()
            )));
        }
        Ok(())
    }

    /// Same grid with every cutoff multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid scale factor must be positive, got {factor}"
            )));
        }
        Ok(CutoffGrid {
            values: self.values.iter().map(|v| v * factor).collect(),
        })
    }
}

/// Coefficients of the divergence basis {Lambda^2, ln Lambda, 1}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DivergenceFit {
    pub c_quad: f64,
    pub c_log: f64,
    pub c_const: f64,
    pub residual_rms: f64,
    /// Largest fitted-term magnitude over the sample window.
    pub dominant: f64,
    /// `residual_rms < FIT_RESIDUAL_ACCEPT * dominant`; a rejection signals
    /// divergence structure outside the basis.
    pub accepted: bool,
}

/// Least-squares fit of `(Lambda, value)` samples on {Lambda^2, ln Lambda,
/// 1}. Requires at least 6 approximately log-spaced samples spanning two
/// decades.
pub fn fit_divergence(samples: &[(f64, f64)]) -> Result<DivergenceFit> {
    if samples.len() < 6 {
        return Err(Error::InvalidParameter(format!(
            "divergence fit needs at least 6 samples, got {}",
            samples.len()
        )));
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::InvalidParameter(
            "divergence fit samples must be strictly increasing in Lambda".into(),
        ));
    }
    let (min, max) = (samples[0].0, samples[samples.len() - 1].0);
    if max / min < 100.0 {
        return Err(Error::InvalidParameter(format!(
            "divergence fit window must span Lambda_max/Lambda_min >= 100, got {}",
            max / min
        )));
    }
    let ratios: Vec<f64> = samples.windows(2).map(|w| w[1].0 / w[0].0).collect();
    let (rmin, rmax) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    if rmax / rmin > 1.5 {
        return Err(Error::InvalidParameter(
            "divergence fit samples must be approximately log-spaced".into(),
        ));
    }

    let quad_col: Vec<f64> = samples.iter().map(|s| s.0 * s.0).collect();
    let log_col: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let const_col: Vec<f64> = vec![1.0; samples.len()];
    let y: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let [c_quad, c_log, c_const] = least_squares_3([&quad_col, &log_col, &const_col], &y)?;

    let mut residual_sq = 0.0;
    let mut dominant = 0.0f64;
    for (i, s) in samples.iter().enumerate() {
        let fitted = c_quad * quad_col[i] + c_log * log_col[i] + c_const;
        residual_sq += (s.1 - fitted) * (s.1 - fitted);
        dominant = dominant
            .max((c_quad * quad_col[i]).abs())
            .max((c_log * log_col[i]).abs())
            .max(c_const.abs());
    }
    let residual_rms = (residual_sq / samples.len() as f64).sqrt();
    Ok(DivergenceFit {
        c_quad,
        c_log,
        c_const,
        residual_rms,
        dominant,
        accepted: residual_rms < FIT_RESIDUAL_ACCEPT * dominant,
    })
}

fn require_accepted(fit: &DivergenceFit, quantity: &str) -> Result<()> {
    if fit.accepted {
        Ok(())
    } else {
        Err(Error::FitRejected {
            quantity: quantity.to_string(),
            residual: fit.residual_rms,
            dominant: fit.dominant,
            threshold: FIT_RESIDUAL_ACCEPT,
        })
    }
}

/// Amputated four-point function at the renormalization point:
/// `-lambda + 2 lambda^2 S2(Lambda)`, plus the finite bubble-correction
/// remainder `2 lambda^2 (second - first)` when evaluated at `p_m` instead
/// of 0 (the full squared propagator splits as `C^2 = 1/A^2 - first +
/// second`).
pub fn gamma_four(params: &ModelParams, cutoff: Cutoff, at_pm: bool) -> Result<f64> {
    let floor = 10.0 * params.m2.sqrt();
    if cutoff.value() < floor {
        return Err(Error::Domain(format!(
            "gamma_four needs Lambda >= 10 sqrt(m2) = {floor}, got {}",
            cutoff.value()
        )));
    }
    let lambda = params.lambda;
    let mut value = -lambda + 2.0 * lambda * lambda * s2(params, cutoff).value;
    if at_pm {
        let (first, second) = amplitudes::nc_bubble_corrections(params, cutoff)?;
        value += 2.0 * lambda * lambda * (second.at_cutoff.value - first.at_cutoff.value);
    }
    Ok(value)
}

/// Per-cutoff flow sample, exportable as CSV.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FlowSample {
    pub lambda_cut: f64,
    pub gamma4: f64,
    pub sigma_plr: f64,
    /// Planar-irregular witness `theta^2 p^2 S1(p)` at the reference scale
    /// `theta|p| = 1`, sampled at the phase-commensurate cutoff.
    pub pli_witness: f64,
}

/// Finiteness evidence for `beta_a`: the planar-irregular sector carries no
/// `ln Lambda` and its momentum profile is uniformly bounded.
#[derive(Debug, Clone, Serialize)]
pub struct BoundednessWitness {
    /// `sup` over the scale grid of `theta^2 p^2 S1(p)`.
    pub sup_f: f64,
    /// `theta|p|` where the sup is attained.
    pub sup_argmax_scale: f64,
    /// Relative change of the sup when the nominal cutoff grows tenfold.
    pub sup_drift: f64,
    /// Fit of the sector at `theta|p| = 1` on {Lambda^2, ln Lambda, 1}.
    pub pli_fit: DivergenceFit,
    /// `|c_log| / |c_const|` of that fit.
    pub log_to_const: f64,
}

/// Default scale grid for the boundedness sup: log-spaced `theta|p|` over
/// [1e-3, 1e3].
pub fn default_scale_grid() -> Vec<f64> {
    let (lo, hi, count) = (1e-3f64, 1e3f64, 61);
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Evaluate the planar-irregular boundedness witness on a scale grid.
pub fn pli_boundedness_witness(
    params: &ModelParams,
    theta: &ThetaMatrix,
    grid: &CutoffGrid,
    scale_grid: &[f64],
) -> Result<BoundednessWitness> {
    if scale_grid.is_empty() {
        return Err(Error::InvalidParameter("scale grid must be nonempty".into()));
    }
    let f_tilde = |q: f64, nominal: f64| -> Result<f64> {
        let p = Momentum4::radial((q / params.theta) * (q / params.theta));
        let r = s1_p_averaged(params, theta, &p, Cutoff::new(nominal)?)?;
        Ok(q * q * r.value)
    };
    let sup_at = |nominal: f64| -> Result<(f64, f64)> {
        let values: Vec<(f64, f64)> = scale_grid
            .par_iter()
            .map(|&q| f_tilde(q, nominal).map(|v| (q, v)))
            .collect::<Result<_>>()?;
        Ok(values
            .into_iter()
            .fold((scale_grid[0], f64::NEG_INFINITY), |best, (q, v)| {
                if v > best.1 {
                    (q, v)
                } else {
                    best
                }
            }))
    };
    let (argmax1, sup1) = sup_at(grid.max())?;
    let (_, sup2) = sup_at(10.0 * grid.max())?;
    let sup_drift = ((sup1 - sup2) / sup2).abs();

    let pli_samples: Vec<(f64, f64)> = grid
        .values()
        .par_iter()
        .map(|&nominal| -> Result<(f64, f64)> {
            let p = Momentum4::radial(1.0 / (params.theta * params.theta));
            let r = s1_p_averaged(params, theta, &p, Cutoff::new(nominal)?)?;
            Ok((r.lambda, r.value))
        })
        .collect::<Result<_>>()?;
    let pli_fit = fit_divergence(&pli_samples)?;
    let log_to_const = (pli_fit.c_log / pli_fit.c_const).abs();
    Ok(BoundednessWitness {
        sup_f: sup1,
        sup_argmax_scale: argmax1,
        sup_drift,
        pli_fit,
        log_to_const,
    })
}

/// One-loop flow report.
#[derive(Debug, Clone, Serialize)]
pub struct BetaReport {
    /// Wave-function renormalization; exactly 1 (the planar-regular
    /// self-energy carries no external momentum).
    pub z: f64,
    /// Anomalous dimension at this order.
    pub gamma: f64,
    /// `ln Lambda` coefficient of Gamma^4 divided by lambda^2; 4 pi^2 at
    /// one loop.
    pub beta_lambda_coeff: f64,
    pub gamma4_fit: DivergenceFit,
    /// Fit of the mass shift `m_r^2 - m_b^2 = -Sigma_plr`.
    pub beta_m_fit: DivergenceFit,
    /// Flow of the infrared parameter; vanishes, with the witness attached.
    pub beta_a: f64,
    pub witness: BoundednessWitness,
    pub samples: Vec<FlowSample>,
}

/// Assemble the full one-loop report over a cutoff grid.
pub fn beta_report(params: &ModelParams, grid: &CutoffGrid) -> Result<BetaReport> {
    grid.validate_for(params)?;
    if !(params.lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "flow runs need lambda > 0, got {}",
            params.lambda
        )));
    }
    let theta = ThetaMatrix::canonical(params.theta)?;
    let p_ref = Momentum4::radial(1.0 / (params.theta * params.theta));

    let samples: Vec<FlowSample> = grid
        .values()
        .par_iter()
        .map(|&l| -> Result<FlowSample> {
            let c = Cutoff::new(l)?;
            let gamma4 = gamma_four(params, c, true)?;
            let sigma_plr = -2.0 * params.lambda * s1_zero(params, c).value;
            let pli = s1_p_averaged(params, &theta, &p_ref, c)?;
            Ok(FlowSample {
                lambda_cut: l,
                gamma4,
                sigma_plr,
                pli_witness: pli.value,
            })
        })
        .collect::<Result<_>>()?;

    // Sigma_plr is built from S1(0) alone, so its p^2 derivative vanishes
    // identically; witness the flatness and set Z = 1 exactly.
    let c_ref = Cutoff::new(grid.max())?;
    let se_a = amplitudes::self_energy(params, &theta, &Momentum4::radial(1.0), c_ref)?;
    let se_b = amplitudes::self_energy(params, &theta, &Momentum4::radial(4.0), c_ref)?;
    debug_assert_eq!(se_a.plr, se_b.plr);
    let z = 1.0 + (se_a.plr - se_b.plr); // exact zero derivative
    let gamma = 0.0;

    let gamma4_fit =
        fit_divergence(&samples.iter().map(|s| (s.lambda_cut, s.gamma4)).collect::<Vec<_>>())?;
    require_accepted(&gamma4_fit, "beta_lambda (Gamma^4 fit)")?;
    let beta_lambda_coeff = gamma4_fit.c_log / (params.lambda * params.lambda);

    let beta_m_fit = fit_divergence(
        &samples
            .iter()
            .map(|s| (s.lambda_cut, -s.sigma_plr))
            .collect::<Vec<_>>(),
    )?;
    require_accepted(&beta_m_fit, "beta_m (mass-shift fit)")?;

    let witness = pli_boundedness_witness(params, &theta, grid, &default_scale_grid())?;
    require_accepted(&witness.pli_fit, "beta_a (planar-irregular fit)")?;
    if witness.log_to_const >= FIT_RESIDUAL_ACCEPT {
        return Err(Error::FitRejected {
            quantity: "beta_a (log coefficient)".into(),
            residual: witness.log_to_const,
            dominant: 1.0,
            threshold: FIT_RESIDUAL_ACCEPT,
        });
    }
    if witness.sup_drift >= FIT_RESIDUAL_ACCEPT {
        return Err(Error::FitRejected {
            quantity: "beta_a (boundedness drift)".into(),
            residual: witness.sup_drift,
            dominant: witness.sup_f,
            threshold: FIT_RESIDUAL_ACCEPT,
        });
    }

    Ok(BetaReport {
        z,
        gamma,
        beta_lambda_coeff,
        gamma4_fit,
        beta_m_fit,
        beta_a: 0.0,
        witness,
        samples,
    })
}

/// Ratios against the commutative theory evaluated with identical
/// vertex-factor conventions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatioReport {
    /// `c_log(Gamma^4)` with the infrared term on, over the same at `a = 0`;
    /// 1 because the planar-regular sector is theta independent.
    pub beta_lambda_ratio: f64,
    /// `Sigma_plr(0) / Sigma(0)` at the grid's top cutoff, with
    /// `S1(p -> 0) = S1(0)`: the two regular tadpoles against all three.
    pub sector_ratio: f64,
    /// Tadpole correction at `a = 0`; identically zero.
    pub nc_tadpole_at_zero_a: f64,
    /// Bubble corrections at `a = 0`; identically zero.
    pub nc_bubble_at_zero_a: (f64, f64),
}

pub fn commutative_comparison(params: &ModelParams, grid: &CutoffGrid) -> Result<RatioReport> {
    grid.validate_for(params)?;
    if !(params.lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "flow runs need lambda > 0, got {}",
            params.lambda
        )));
    }
    let commutative = ModelParams::new(params.lambda, params.m2, 0.0, params.theta)?;

    let fit_of = |pr: &ModelParams| -> Result<DivergenceFit> {
        let samples: Vec<(f64, f64)> = grid
            .values()
            .par_iter()
            .map(|&l| gamma_four(pr, Cutoff::new(l)?, true).map(|v| (l, v)))
            .collect::<Result<_>>()?;
        fit_divergence(&samples)
    };
    let nc_fit = fit_of(params)?;
    let comm_fit = fit_of(&commutative)?;
    require_accepted(&nc_fit, "beta_lambda (Gamma^4 fit)")?;
    require_accepted(&comm_fit, "beta_lambda commutative (Gamma^4 fit)")?;

    let c = Cutoff::new(grid.max())?;
    let s0 = s1_zero(params, c).value;
    let sector_ratio = (-2.0 * params.lambda * s0) / (-3.0 * params.lambda * s0);

    let tad = amplitudes::nc_tadpole_correction(&commutative, c)?;
    let (b1, b2) = amplitudes::nc_bubble_corrections(&commutative, c)?;

    Ok(RatioReport {
        beta_lambda_ratio: nc_fit.c_log / comm_fit.c_log,
        sector_ratio,
        nc_tadpole_at_zero_a: tad.at_cutoff.value,
        nc_bubble_at_zero_a: (b1.at_cutoff.value, b2.at_cutoff.value),
    })
}

/// The JSON report shape emitted by the CLI:
/// `{Z, gamma, beta_lambda_coeff, beta_m: {c_quad, c_log}, beta_a, ratios}`.
#[derive(Debug, Clone, Serialize)]
pub struct JsonReport {
    #[serde(rename = "Z")]
    pub z: f64,
    pub gamma: f64,
    pub beta_lambda_coeff: f64,
    pub beta_m: BetaMJson,
    pub beta_a: f64,
    pub ratios: RatiosJson,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BetaMJson {
    pub c_quad: f64,
    pub c_log: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatiosJson {
    pub beta_lambda_nc_over_commutative: f64,
    pub sigma_plr_over_sigma: f64,
    pub nc_tadpole_at_zero_a: f64,
    pub nc_bubble_1_at_zero_a: f64,
    pub nc_bubble_2_at_zero_a: f64,
}

impl JsonReport {
    pub fn new(report: &BetaReport, ratios: &RatioReport) -> Self {
        JsonReport {
            z: report.z,
            gamma: report.gamma,
            beta_lambda_coeff: report.beta_lambda_coeff,
            beta_m: BetaMJson {
                c_quad: report.beta_m_fit.c_quad,
                c_log: report.beta_m_fit.c_log,
            },
            beta_a: report.beta_a,
            ratios: RatiosJson {
                beta_lambda_nc_over_commutative: ratios.beta_lambda_ratio,
                sigma_plr_over_sigma: ratios.sector_ratio,
                nc_tadpole_at_zero_a: ratios.nc_tadpole_at_zero_a,
                nc_bubble_1_at_zero_a: ratios.nc_bubble_at_zero_a.0,
                nc_bubble_2_at_zero_a: ratios.nc_bubble_at_zero_a.1,
            },
        }
    }
}
