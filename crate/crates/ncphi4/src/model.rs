//! Action parameters, the exact propagator, its commutative + correction
//! decomposition and its multiscale Schwinger-parameter slices.
//!
//! The quadratic form of the action gives the momentum-space propagator
//!
//! ```text
//! C(p) = 1 / (p^2 + m^2 + a / (theta^2 p^2)),
//! ```
//!
//! which splits exactly, via the resolvent identity
//! `1/(A+B) = 1/A - (1/A) B (1/(A+B))` with `A = p^2 + m^2` and
//! `B = a/(theta^2 p^2)`, into the commutative propagator plus a correction
//! suppressed by four extra powers of momentum:
//!
//! ```text
//! C(p) = 1/(p^2+m^2) - 1/(p^2+m^2) * a / (theta^2 (p^2+m1^2)(p^2+m2^2)),
//! ```
//!
//! where `-m1^2`, `-m2^2` are the roots of
//! `theta^2 p^4 + theta^2 m^2 p^2 + a` in `p^2`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance for the algebraic identities of this module.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Euclidean 4-momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momentum4(pub [f64; 4]);

impl Momentum4 {
    pub fn new(components: [f64; 4]) -> Self {
        Momentum4(components)
    }

    /// Momentum with squared norm `p_sq` along the first axis.
    pub fn radial(p_sq: f64) -> Self {
        Momentum4([p_sq.max(0.0).sqrt(), 0.0, 0.0, 0.0])
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }
}

/// The antisymmetric noncommutativity matrix Theta.
///
/// The canonical constructor produces the block form `theta * J` with `J`
/// the standard symplectic matrix, for which `|Theta p| = theta |p|` for
/// every `p`; all oscillatory integrals then depend on momenta through
/// `theta |p|` only.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaMatrix {
    entries: [[f64; 4]; 4],
}

impl ThetaMatrix {
    /// Block-diagonal `theta * diag(J, J)` with `J = [[0, 1], [-1, 0]]`.
    pub fn canonical(theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        let mut entries = [[0.0; 4]; 4];
        entries[0][1] = theta;
        entries[1][0] = -theta;
        entries[2][3] = theta;
        entries[3][2] = -theta;
        Ok(ThetaMatrix { entries })
    }

    /// Arbitrary antisymmetric matrix; antisymmetry is checked exactly.
    pub fn from_entries(entries: [[f64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                if entries[i][j] != -entries[j][i] {
                    return Err(Error::InvalidParameter(format!(
                        "Theta must be antisymmetric: [{i}][{j}] = {} vs [{j}][{i}] = {}",
                        entries[i][j], entries[j][i]
                    )));
                }
            }
        }
        Ok(ThetaMatrix { entries })
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    /// Matrix action `(Theta p)_mu = Theta_{mu nu} p_nu`.
    pub fn apply(&self, p: &Momentum4) -> Momentum4 {
        let mut out = [0.0; 4];
        for (mu, row) in self.entries.iter().enumerate() {
            out[mu] = row.iter().zip(&p.0).map(|(t, c)| t * c).sum();
        }
        Momentum4(out)
    }
}

/// The parameter quadruple (lambda, m^2, a, theta) of the action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    /// Quartic coupling (dimensionless).
    pub lambda: f64,
    /// Mass squared (momentum^2, positive).
    pub m2: f64,
    /// Dimensionless coefficient of the infrared 1/p^2 term, a >= 0.
    pub a: f64,
    /// Noncommutativity scale theta (momentum^-2, positive).
    pub theta: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, m2: f64, a: f64, theta: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        if !(m2 > 0.0) || !m2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "m2 must be positive and finite, got {m2}"
            )));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "a must be nonnegative and finite, got {a}"
            )));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        Ok(ModelParams {
            lambda,
            m2,
            a,
            theta,
        })
    }

    /// `a / theta^2`, the coefficient of `1/p^2` in the denominator
    /// (units momentum^4).
    pub fn ir_coefficient(&self) -> f64 {
        self.a / (self.theta * self.theta)
    }

    /// Largest `a` with real roots: `theta^2 m^4 / 4`.
    pub fn root_bound(&self) -> f64 {
        0.25 * self.theta * self.theta * self.m2 * self.m2
    }

    pub fn has_real_roots(&self) -> bool {
        self.a <= self.root_bound() * (1.0 + 1e-15)
    }

    /// Norm of the renormalization point `p_m`, the minimizer of
    /// `p^2 + a/(theta^2 p^2)`: `|p_m| = (a/theta^2)^(1/4)`.
    pub fn renormalization_point(&self) -> f64 {
        self.ir_coefficient().powf(0.25)
    }

    /// Roots of the correction denominator, ordered `m1^2 <= m2^2`.
    ///
    /// `m_{1,2}^2 = (theta^2 m^2 -/+ sqrt(theta^4 m^4 - 4 theta^2 a)) /
    /// (2 theta^2)`. The larger root is computed from the stable `+` branch
    /// and the smaller one through the Vieta product, so both relations
    /// `m1^2 + m2^2 = m^2` and `m1^2 m2^2 = a/theta^2` hold to roundoff even
    /// for tiny `a`. The discriminant-zero boundary `a = theta^2 m^4/4`
    /// (double root `m^2/2`) is accepted.
    pub fn roots(&self) -> Result<Roots> {
        let b = self.ir_coefficient();
        let disc = self.m2 * self.m2 - 4.0 * b;
        if disc < 0.0 {
            if self.a <= self.root_bound() * (1.0 + 1e-12) {
                // roundoff at the double-root boundary
                let half = 0.5 * self.m2;
                return Ok(Roots {
                    m1_sq: half,
                    m2_sq: half,
                });
            }
            return Err(Error::ComplexRoots {
                a: self.a,
                bound: self.root_bound(),
            });
        }
        let m2_sq = 0.5 * (self.m2 + disc.sqrt());
        let m1_sq = if b == 0.0 { 0.0 } else { b / m2_sq };
        Ok(Roots { m1_sq, m2_sq })
    }
}

/// The (negated) roots of `theta^2 p^4 + theta^2 m^2 p^2 + a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Roots {
    pub m1_sq: f64,
    pub m2_sq: f64,
}

impl Roots {
    /// True at the discriminant-zero boundary where the partial-fraction
    /// form degenerates.
    pub fn is_degenerate(&self) -> bool {
        self.m2_sq - self.m1_sq <= 1e-9 * self.m2_sq
    }
}

/// Propagator denominator `p^2 + m^2 + a/(theta^2 p^2)`.
///
/// `p = 0` is allowed only when `a = 0` (commutative limit); otherwise the
/// infrared term diverges.
pub fn denominator(params: &ModelParams, p_sq: f64) -> Result<f64> {
    if p_sq < 0.0 || !p_sq.is_finite() {
        return Err(Error::Domain(format!("p^2 must be finite and >= 0, got {p_sq}")));
    }
    if p_sq == 0.0 {
        if params.a > 0.0 {
            return Err(Error::Domain(
                "propagator undefined at p = 0 for a > 0".into(),
            ));
        }
        return Ok(params.m2);
    }
    Ok(p_sq + params.m2 + params.ir_coefficient() / p_sq)
}

/// The exact propagator `C(p) = 1/(p^2 + m^2 + a/(theta^2 p^2))`.
pub fn propagator(params: &ModelParams, p: &Momentum4) -> Result<f64> {
    Ok(1.0 / denominator(params, p.norm_sq())?)
}

/// The two pieces of the resolvent decomposition; their sum is the exact
/// propagator.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Decomposition {
    /// `1/(p^2 + m^2)`.
    pub commutative: f64,
    /// `-(1/(p^2+m^2)) a / (theta^2 (p^2+m1^2)(p^2+m2^2))`.
    pub nc_correction: f64,
}

impl Decomposition {
    pub fn total(&self) -> f64 {
        self.commutative + self.nc_correction
    }
}

/// Split the propagator into its commutative part and the noncommutative
/// correction. Requires real roots; at the double-root boundary the product
/// form remains regular and is used as-is.
pub fn decompose_propagator(params: &ModelParams, p: &Momentum4) -> Result<Decomposition> {
    let p_sq = p.norm_sq();
    if p_sq == 0.0 && params.a > 0.0 {
        return Err(Error::Domain(
            "decomposition undefined at p = 0 for a > 0".into(),
        ));
    }
    let roots = params.roots()?;
    let commutative = 1.0 / (p_sq + params.m2);
    let nc_correction = if params.a == 0.0 {
        0.0
    } else {
        -commutative * params.ir_coefficient()
            / ((p_sq + roots.m1_sq) * (p_sq + roots.m2_sq))
    };
    Ok(Decomposition {
        commutative,
        nc_correction,
    })
}

/// The partial-fraction form of the correction,
/// `-a/(theta^2 (m2^2-m1^2)) * (1/(p^2+m^2)) (1/(p^2+m1^2) - 1/(p^2+m2^2))`.
///
/// Pointwise equal to [`decompose_propagator`]'s correction, but genuinely
/// singular at the double-root boundary, which is therefore rejected.
pub fn nc_correction_partial_fraction(params: &ModelParams, p: &Momentum4) -> Result<f64> {
    let p_sq = p.norm_sq();
    if p_sq == 0.0 && params.a > 0.0 {
        return Err(Error::Domain(
            "decomposition undefined at p = 0 for a > 0".into(),
        ));
    }
    if params.a == 0.0 {
        return Ok(0.0);
    }
    let roots = params.roots()?;
    if roots.is_degenerate() {
        return Err(Error::DegenerateRoots { value: roots.m1_sq });
    }
    let gap = roots.m2_sq - roots.m1_sq;
    Ok(-params.ir_coefficient() / gap / (p_sq + params.m2)
        * (1.0 / (p_sq + roots.m1_sq) - 1.0 / (p_sq + roots.m2_sq)))
}

/// Geometric multiscale slicing of the Schwinger parameter.
///
/// Slice `i >= 1` covers `alpha in [ratio^-2i, ratio^-2(i-1)]`; slice 0 is
/// the infrared tail `alpha in [1, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceFamily {
    /// Progression ratio (the paper's M), > 1.
    pub ratio: f64,
    /// Highest slice index.
    pub i_max: u32,
}

impl SliceFamily {
    pub fn new(ratio: f64, i_max: u32) -> Result<Self> {
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "slice ratio must be > 1, got {ratio}"
            )));
        }
        Ok(SliceFamily { ratio, i_max })
    }

    /// `(alpha_min, alpha_max)` of slice `i`; slice 0 has `alpha_max = inf`.
    pub fn alpha_interval(&self, i: u32) -> (f64, f64) {
        if i == 0 {
            (1.0, f64::INFINITY)
        } else {
            let e = -2.0 * f64::from(i);
            (self.ratio.powf(e), self.ratio.powf(e + 2.0))
        }
    }
}

/// Slice `C^i(p) = int_{alpha_min}^{alpha_max} e^{-alpha D(p)} d alpha` in
/// closed form, with `D` the propagator denominator.
pub fn slice(params: &ModelParams, family: &SliceFamily, i: u32, p: &Momentum4) -> Result<f64> {
    if i > family.i_max {
        return Err(Error::Domain(format!(
            "slice index {i} exceeds i_max = {}",
            family.i_max
        )));
    }
    let d = denominator(params, p.norm_sq())?;
    let (alpha_min, alpha_max) = family.alpha_interval(i);
    if alpha_max.is_infinite() {
        Ok((-alpha_min * d).exp() / d)
    } else {
        // e^{-a D} - e^{-b D} = e^{-a D} (-expm1(-(b-a) D)), exact for
        // alpha D << 1 where direct subtraction would cancel
        Ok((-alpha_min * d).exp() * (-(-(alpha_max - alpha_min) * d).exp_m1()) / d)
    }
}

/// Partial sum `sum_{i=0}^{i_max} C^i(p)`; telescopes to
/// `(1 - (1 - e^{-ratio^-2 i_max D})) / D -> C(p)` from below.
pub fn slice_partial_sum(params: &ModelParams, family: &SliceFamily, p: &Momentum4) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..=family.i_max {
        acc += slice(params, family, i, p)?;
    }
    Ok(acc)
}

/// An empirically verified pair of slicing constants: for every sampled
/// `(i, p)` with `i >= 1`,
/// `C^i(p) <= k * exp(-c * ratio^-2i * D(p))`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SliceBound {
    pub k: f64,
    pub c: f64,
    pub holds: bool,
}

/// Check a given `(k, c)` candidate on the sample. `c` must lie in (0, 1]
/// and `k` must be positive; the bound is tested with a one-ulp-scale slack.
pub fn check_slice_bound(
    params: &ModelParams,
    family: &SliceFamily,
    sample: &[Momentum4],
    k: f64,
    c: f64,
) -> Result<bool> {
    validate_sample(params, sample)?;
    if k <= 0.0 || !(c > 0.0 && c <= 1.0) {
        return Ok(false);
    }
    for p in sample {
        let d = denominator(params, p.norm_sq())?;
        for i in 1..=family.i_max {
            let lhs = slice(params, family, i, p)?;
            let scale = family.ratio.powf(-2.0 * f64::from(i));
            let rhs = k * (-c * scale * d).exp();
            if lhs > rhs * (1.0 + 1e-12) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Search for slicing constants over a descending ladder of decay rates
/// `c in {1, 1/ratio^2, 1/(2 ratio^2), ...}`, taking for each candidate the
/// smallest admissible `k` on the sample. The first candidate whose per-index
/// worst ratios do not grow with `i` wins.
pub fn verify_slice_bound(
    params: &ModelParams,
    family: &SliceFamily,
    sample: &[Momentum4],
) -> Result<SliceBound> {
    validate_sample(params, sample)?;
    let r2 = family.ratio * family.ratio;
    let candidates = [1.0, 1.0 / r2, 0.5 / r2, 0.25 / r2];
    let mut best: Option<SliceBound> = None;
    for &c in &candidates {
        let mut worst_per_index = Vec::with_capacity(family.i_max as usize);
        for i in 1..=family.i_max {
            let scale = family.ratio.powf(-2.0 * f64::from(i));
            let mut worst = 0.0f64;
            for p in sample {
                let d = denominator(params, p.norm_sq())?;
                let ratio = slice(params, family, i, p)? * (c * scale * d).exp();
                worst = worst.max(ratio);
            }
            worst_per_index.push(worst);
        }
        let k = worst_per_index.iter().cloned().fold(0.0, f64::max);
        if !k.is_finite() || k == 0.0 {
            continue;
        }
        let grows = worst_per_index
            .windows(2)
            .any(|w| w[1] > w[0] * (1.0 + 1e-9) && w[1] > 1e-300);
        let bound = SliceBound { k, c, holds: !grows };
        if bound.holds {
            return Ok(bound);
        }
        if best.is_none() {
            best = Some(bound);
        }
    }
    Ok(best.unwrap_or(SliceBound {
        k: f64::NAN,
        c: candidates[candidates.len() - 1],
        holds: false,
    }))
}

fn validate_sample(params: &ModelParams, sample: &[Momentum4]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::Domain("slice-bound sample must be nonempty".into()));
    }
    if params.a > 0.0 && sample.iter().any(|p| p.norm_sq() == 0.0) {
        return Err(Error::Domain(
            "slice-bound sample must avoid p = 0 when a > 0".into(),
        ));
    }
    Ok(())
}
