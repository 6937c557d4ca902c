//! Optimization and comparison layer: delay-curve minima, the
//! complex-mimics-quaternionic height solver and the rescaled-curve
//! intersection finder.
//!
//! Everything here is derivative-free and bracketed; numerical consistency
//! against the scan grids gates every refined result.

use alloc::vec::Vec;

use crate::delay::{self, CurveKind, PhysicalStep};
use crate::error::{Error, Result};
use crate::numeric::{bisect, brent_min};

/// A certified local minimum of a delay curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveMinimum {
    pub eps_star: f64,
    pub tau_star: f64,
    /// `eps_star * tau_star`, the observable both step families share.
    pub product: f64,
}

/// A complex step height that reproduces a quaternionic delay at one energy.
#[derive(Clone, Debug, PartialEq)]
pub struct MimicSolution {
    pub e0_kev: f64,
    pub vq_kev: f64,
    /// The returned height (largest root when several brackets appear).
    pub v1_kev: f64,
    /// The matched delay, KeV t0/hbar.
    pub delay_kev: f64,
    /// Every root found by the bracket scan, ascending.
    pub v1_candidates: Vec<f64>,
}

const SCAN_POINTS: usize = 2001;
const MIN_XTOL: f64 = 1e-9;
const CERTIFICATE_STEP: f64 = 1e-4;

fn curve_eval(kind: CurveKind) -> Result<CurveEval> {
    match kind {
        CurveKind::Complex | CurveKind::Quaternionic | CurveKind::GeneralNuq(_) => {
            Ok(CurveEval { kind })
        }
        _ => Err(Error::Domain {
            what: "rescaled curves are not minimized directly",
            value: 0.0,
        }),
    }
}

#[derive(Clone, Copy)]
struct CurveEval {
    kind: CurveKind,
}

impl CurveEval {
    /// Out-of-domain and boundary points read as +inf so bracketed searches
    /// back away from them.
    fn eval(&self, eps: f64) -> f64 {
        let r = match self.kind {
            CurveKind::Complex => delay::tau_c(eps),
            CurveKind::Quaternionic => delay::tau_q(eps),
            CurveKind::GeneralNuq(nuq) => delay::tau_general(eps, nuq),
            _ => unreachable!(),
        };
        r.unwrap_or(f64::INFINITY)
    }
}

/// Finds the minimum of a delay curve on `(0, 1)`.
///
/// A uniform bracketing scan locates candidate interior minima; the best
/// bracket is refined by Brent to `|d eps| < 1e-8` and certified by checking
/// both neighbors at `eps* +- 1e-4`. [`Error::NoInteriorMinimum`] when the
/// scan never brackets one.
pub fn find_minimum(kind: CurveKind) -> Result<CurveMinimum> {
    let eval = curve_eval(kind)?;
    let f = |x: f64| eval.eval(x);
    let lo = 1e-6;
    let hi = 1.0 - 1e-6;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;

    let values: Vec<f64> = (0..SCAN_POINTS).map(|i| f(lo + i as f64 * step)).collect();
    let mut best: Option<usize> = None;
    for i in 1..SCAN_POINTS - 1 {
        let bracketed =
            values[i].is_finite() && values[i] < values[i - 1] && values[i] < values[i + 1];
        if bracketed && best.is_none_or(|b| values[i] < values[b]) {
            best = Some(i);
        }
    }
    let i = best.ok_or(Error::NoInteriorMinimum)?;
    let a = lo + (i - 1) as f64 * step;
    let b = lo + (i + 1) as f64 * step;
    let (eps_star, tau_star) = brent_min(&f, a, b, MIN_XTOL, 300);

    let left = f((eps_star - CERTIFICATE_STEP).max(lo));
    let right = f((eps_star + CERTIFICATE_STEP).min(hi));
    if !(left > tau_star && right > tau_star) {
        return Err(Error::NoInteriorMinimum);
    }
    Ok(CurveMinimum {
        eps_star,
        tau_star,
        product: eps_star * tau_star,
    })
}

/// Solves for the complex height whose reflection delay at `e0_kev` equals
/// that of a pure quaternionic step of modulus `vq_kev`.
///
/// The complex delay curve in `V1` at fixed `E0` is scanned for sign-change
/// brackets and each bracket is bisected to 1e-6 KeV. When several roots
/// appear the largest height is the primary result; all are reported.
pub fn mimic_potential(e0_kev: f64, vq_kev: f64) -> Result<MimicSolution> {
    if !(e0_kev > 0.0 && e0_kev < vq_kev) {
        return Err(Error::Domain {
            what: "need 0 < E0 < Vq",
            value: e0_kev,
        });
    }
    let target = delay::physical_delay(e0_kev, &PhysicalStep::quaternionic(vq_kev)?)?;
    let g =
        |v1: f64| match PhysicalStep::complex(v1).and_then(|s| delay::physical_delay(e0_kev, &s)) {
            Ok(d) => d - target,
            Err(_) => f64::NAN,
        };

    // the delay falls from +inf at V1 -> E0+ toward 0, so the scan's upper
    // end is padded well past the closed-form root E0 + 1/(E0 target^2)
    let lo = e0_kev * (1.0 + 1e-9);
    let hi = e0_kev + 2.0 / (e0_kev * target * target) + vq_kev;
    let n = 4096;
    let step = (hi - lo) / n as f64;

    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = lo;
    let mut prev_g = g(lo);
    for i in 1..=n {
        let x = lo + i as f64 * step;
        let gx = g(x);
        if prev_g.is_finite() && gx.is_finite() && (prev_g > 0.0) != (gx > 0.0) {
            roots.push(bisect(g, prev_x, x, prev_g, 1e-6));
        }
        prev_x = x;
        prev_g = gx;
    }
    let &v1 = roots.last().ok_or(Error::NoMimic { e0_kev, target })?;
    let delay_kev = delay::physical_delay(e0_kev, &PhysicalStep::complex(v1)?)?;
    Ok(MimicSolution {
        e0_kev,
        vq_kev,
        v1_kev: v1,
        delay_kev,
        v1_candidates: roots,
    })
}

const INTERSECTION_SCAN_STEP: f64 = 1e-3;

/// Intersections of the rescaled complex and quaternionic delay curves on
/// `eps_tilde_range`, as `(eps~, tau~)` pairs.
///
/// Sign-change scan at step 1e-3 followed by bisection to 1e-8, then a
/// guard rescan at a tenth of the step to catch root pairs the coarse scan
/// could merge. An empty list is a valid result.
pub fn curve_intersections(eps_tilde_range: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (scale_c, scale_q) = delay::rescale_constants()?;
    // both rescaled energies must stay inside (0, 1)
    let domain_hi = (1.0 / scale_c).min(1.0 / scale_q) * (1.0 - 1e-9);
    let lo = eps_tilde_range.0.max(1e-6);
    let hi = eps_tilde_range.1.min(domain_hi);
    if lo >= hi {
        return Err(Error::Domain {
            what: "empty intersection range",
            value: eps_tilde_range.0,
        });
    }

    let diff = |et: f64| -> f64 {
        let c = delay::tau_c(scale_c * et).map(|t| scale_c * t);
        let q = delay::tau_q(scale_q * et).map(|t| scale_q * t);
        match (c, q) {
            (Ok(c), Ok(q)) => c - q,
            _ => f64::NAN,
        }
    };

    let coarse = scan_roots(&diff, lo, hi, INTERSECTION_SCAN_STEP);
    let fine = scan_roots(&diff, lo, hi, INTERSECTION_SCAN_STEP / 10.0);
    let roots = if fine.len() > coarse.len() {
        fine
    } else {
        coarse
    };

    Ok(roots
        .into_iter()
        .map(|et| {
            (
                et,
                scale_c * delay::tau_c(scale_c * et).expect("root inside domain"),
            )
        })
        .collect())
}

fn scan_roots(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let n = libm::ceil((hi - lo) / step) as usize;
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    for i in 1..=n {
        let x = (lo + i as f64 * step).min(hi);
        let fx = f(x);
        if prev_f.is_finite() && fx.is_finite() && (prev_f > 0.0) != (fx > 0.0) {
            roots.push(bisect(f, prev_x, x, prev_f, 1e-8));
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}
