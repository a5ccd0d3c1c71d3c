//! Radial integrals against an oscillatory J0 kernel.
//!
//! `int_0^Lambda h(k) J0(k q) dk` is split at the zeros of the kernel; each
//! segment is integrated adaptively and the alternating segment series is
//! accelerated by the Euler transformation. For cutoffs far out in the
//! oscillatory regime the integral is assembled as (full limit) - (tail from
//! the cutoff), which keeps the segment count bounded regardless of
//! `Lambda * q`.

use super::bessel;
use super::quad::{self, Quadrature};
use super::series;
use crate::error::{Error, Result};

/// Upper integration limit.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Upper {
    Finite(f64),
    Infinite,
}

/// Segments handled by direct summation before switching to the
/// limit-minus-tail assembly.
const MAX_DIRECT_SEGMENTS: usize = 256;
/// Segments collected for the infinite series before acceleration.
const COLLECT: usize = 384;
/// Tail terms fed to the Euler transformation.
const EULER_TERMS: usize = 48;
const SEG_REL_TOL: f64 = 1e-13;

struct Kernel<'a> {
    h: &'a dyn Fn(f64) -> f64,
    q: f64,
}

impl Kernel<'_> {
    fn eval(&self, k: f64) -> f64 {
        (self.h)(k) * bessel::j0(k * self.q)
    }

    /// k-position of the s-th kernel zero.
    fn zero(&self, s: usize) -> f64 {
        bessel::j0_zero(s) / self.q
    }

    /// Index of the last kernel zero at or below `k`, 0 if none.
    fn zeros_below(&self, k: f64) -> usize {
        let x = k * self.q;
        let mut s = ((x / std::f64::consts::PI + 0.25).floor() as isize).max(0) as usize;
        while s > 0 && bessel::j0_zero(s) > x {
            s -= 1;
        }
        while bessel::j0_zero(s + 1) <= x {
            s += 1;
        }
        s
    }

    fn segment(&self, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
        quad::integrate(|k| self.eval(k), a, b, abs_tol, SEG_REL_TOL)
    }
}

/// `int_0^upper h(k) J0(k q) dk` for q > 0 and smooth `h` decaying fast
/// enough that the segment series is eventually alternating with decreasing
/// amplitude.
pub(crate) fn j0_weighted<F: Fn(f64) -> f64>(
    h: F,
    q: f64,
    upper: Upper,
    abs_tol: f64,
) -> Result<Quadrature> {
    debug_assert!(q > 0.0);
    let kernel = Kernel { h: &h, q };
    match upper {
        Upper::Infinite => full_limit(&kernel, abs_tol),
        Upper::Finite(lambda) => {
            let z1 = kernel.zero(1);
            if lambda <= z1 {
                return kernel.segment(0.0, lambda, abs_tol);
            }
            let s_end = kernel.zeros_below(lambda);
            if s_end <= MAX_DIRECT_SEGMENTS {
                direct_sum(&kernel, lambda, s_end, abs_tol)
            } else {
                let full = full_limit(&kernel, abs_tol)?;
                let tail = tail_from(&kernel, lambda, s_end, abs_tol)?;
                Ok(Quadrature {
                    value: full.value - tail.value,
                    abs_error: full.abs_error + tail.abs_error,
                })
            }
        }
    }
}

/// Head plus every segment up to the cutoff, summed directly.
fn direct_sum(kernel: &Kernel, lambda: f64, s_end: usize, abs_tol: f64) -> Result<Quadrature> {
    let seg_tol = abs_tol / (s_end as f64 + 2.0);
    let mut total = kernel.segment(0.0, kernel.zero(1), seg_tol)?;
    for s in 1..=s_end {
        let hi = if s == s_end { lambda } else { kernel.zero(s + 1) };
        let seg = kernel.segment(kernel.zero(s), hi, seg_tol)?;
        total.value += seg.value;
        total.abs_error += seg.abs_error;
    }
    Ok(total)
}

/// Head, a directly summed prefix of segments, and an Euler-accelerated
/// alternating tail.
fn full_limit(kernel: &Kernel, abs_tol: f64) -> Result<Quadrature> {
    let seg_tol = abs_tol / (COLLECT as f64);
    let head = kernel.segment(0.0, kernel.zero(1), seg_tol)?;
    let mut terms = Vec::with_capacity(COLLECT);
    let mut seg_err = 0.0;
    let mut converged_directly = false;
    for s in 1..=COLLECT {
        let seg = kernel.segment(kernel.zero(s), kernel.zero(s + 1), seg_tol)?;
        seg_err += seg.abs_error;
        terms.push(seg.value);
        if seg.value.abs() < seg_tol {
            converged_directly = true;
            break;
        }
    }
    if converged_directly {
        let value = head.value + terms.iter().sum::<f64>();
        return Ok(Quadrature {
            value,
            abs_error: head.abs_error + seg_err + abs_tol / COLLECT as f64,
        });
    }
    // locate the amplitude peak; accelerate only the decaying alternating tail
    let peak = terms
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let tail_start = terms
        .len()
        .saturating_sub(EULER_TERMS)
        .max(peak + 2)
        .min(terms.len());
    let tail = &terms[tail_start..];
    if tail.len() < 8 || !alternating_decreasing(tail) {
        let partial = head.value + terms.iter().sum::<f64>();
        return Err(Error::QuadratureNoConverge {
            partial,
            estimate: terms.last().map(|t| t.abs()).unwrap_or(f64::INFINITY),
        });
    }
    let prefix: f64 = terms[..tail_start].iter().sum();
    let (tail_sum, tail_err) = series::euler_sum(tail);
    Ok(Quadrature {
        value: head.value + prefix + tail_sum,
        abs_error: head.abs_error + seg_err + tail_err,
    })
}

/// `int_lambda^inf`, with `lambda` beyond zero index `s_at` (the last zero
/// at or below `lambda`). The segments out there are already in the decaying
/// alternating regime.
fn tail_from(kernel: &Kernel, lambda: f64, s_at: usize, abs_tol: f64) -> Result<Quadrature> {
    let seg_tol = abs_tol / (EULER_TERMS as f64 + 8.0);
    let first = kernel.segment(lambda, kernel.zero(s_at + 1), seg_tol)?;
    let mut terms = Vec::with_capacity(EULER_TERMS);
    let mut seg_err = first.abs_error;
    for s in (s_at + 1)..(s_at + 1 + EULER_TERMS) {
        let seg = kernel.segment(kernel.zero(s), kernel.zero(s + 1), seg_tol)?;
        seg_err += seg.abs_error;
        terms.push(seg.value);
    }
    let (tail_sum, tail_err) = series::euler_sum(&terms);
    Ok(Quadrature {
        value: first.value + tail_sum,
        abs_error: seg_err + tail_err,
    })
}

fn alternating_decreasing(terms: &[f64]) -> bool {
    terms.windows(2).all(|w| w[0] * w[1] < 0.0)
        && terms
            .windows(2)
            .filter(|w| w[1].abs() > w[0].abs() * (1.0 + 1e-9))
            .count()
            <= terms.len() / 8
}
