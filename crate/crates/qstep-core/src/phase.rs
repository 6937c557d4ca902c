//! Reflection phases in total reflection.
//!
//! Four closed forms plus a numerically unwrapped phase of the full
//! reflection coefficient. The closed forms use the quadrant-aware
//! two-argument arctangent on (numerator, denominator); a scalar arctangent
//! of the ratio would be ambiguous by pi. The ambiguity is invisible in the
//! reconstruction `R = (+-) e^{2 i theta}` (a shift of theta by pi drops out)
//! and constant offsets drop out of the delay derivative, but the
//! two-argument form keeps each phase continuous across its regime.
//!
//! In `0 < eps < nuq` the reflection coefficient carries an explicit overall
//! minus sign, `R = -e^{2 i theta}`; that sign is tracked as a flag and never
//! folded into `theta` itself.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::unwrap_near;
use crate::scatter::{self, EnergyRegime};

/// A reflection phase together with its branch bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseValue {
    /// Principal phase in radians.
    pub theta: f64,
    /// Multiples of pi absorbed while unwrapping a sweep.
    pub branch_offset: i32,
    /// True when the `R = -e^{2 i theta}` form applies (`0 < eps < nuq`).
    pub minus_sign: bool,
}

impl PhaseValue {
    /// `theta + branch_offset * pi`.
    pub fn total(&self) -> f64 {
        self.theta + f64::from(self.branch_offset) * PI
    }

    /// Reconstructs the unit reflection coefficient
    /// `(-1 if minus_sign) * e^{2 i theta}`.
    pub fn unit_reflection(&self) -> Complex64 {
        let u = Complex64::from_polar(1.0, 2.0 * self.total());
        if self.minus_sign {
            -u
        } else {
            u
        }
    }
}

fn require_unit_interval(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            what: "eps must lie in (0, 1)",
            value: eps,
        });
    }
    Ok(())
}

/// Pure-complex phase `theta_c = -arctan sqrt((1 - eps)/eps)`.
pub fn theta_c(eps: f64) -> Result<f64> {
    require_unit_interval(eps)?;
    Ok(-libm::atan(libm::sqrt((1.0 - eps) / eps)))
}

/// Phase for `nuq < eps < 1`, where `R = e^{2 i theta}`.
pub fn theta_gt(eps: f64, nuq: f64) -> Result<f64> {
    match scatter::classify(eps, nuq)? {
        EnergyRegime::Intermediate => {}
        _ => {
            return Err(Error::Domain {
                what: "theta_gt needs nuq < eps < 1",
                value: eps,
            })
        }
    }
    let s1 = libm::sqrt(eps * eps - nuq * nuq);
    let s2 = libm::sqrt(1.0 - nuq * nuq);
    let m = libm::sqrt(s2 - s1); // |alpha_-|
    let p = libm::sqrt(s2 + s1); // alpha_+
    let d = eps + s1;
    let bg = nuq * nuq / (d * d);
    let se = libm::sqrt(eps);
    let num = bg * p * (se + m) - m * (se + p);
    let den = se * (se + p) - bg * se * (se + m);
    Ok(libm::atan2(num, den))
}

/// Phase for `0 < eps < nuq`, where `R = -e^{2 i theta}`.
///
/// Uses `beta*gamma = e^{-2 i omega}` with `tan(omega) = sqrt(nuq^2-eps^2)/eps`,
/// `omega` in `(0, pi/2)`, and the pairing `alpha_+ = i conj(alpha_-)`.
pub fn theta_lt(eps: f64, nuq: f64) -> Result<f64> {
    match scatter::classify(eps, nuq)? {
        EnergyRegime::BelowNuq => {}
        _ => {
            return Err(Error::Domain {
                what: "theta_lt needs 0 < eps < nuq",
                value: eps,
            })
        }
    }
    let omega = libm::atan2(libm::sqrt(nuq * nuq - eps * eps), eps);
    let (am, _) = scatter::alphas(eps, nuq)?;
    let se = libm::sqrt(eps);
    let ew = Complex64::from_polar(1.0, omega);
    let sin_w = libm::sin(omega);
    let num = eps * sin_w + se * (Complex64::i() * am.conj() * ew).im;
    let den = am.norm_sqr() * sin_w - se * (am * ew).re;
    Ok(libm::atan2(num, den))
}

/// Pure-quaternionic phase, with the auxiliary scalar resolved as
/// `alpha = (1 - eps^2)^{1/4} / sqrt(2)` — the common real and imaginary part
/// of `alpha_-` at `nuq = 1`. The identity `theta_q = theta_lt(eps, 1)` is
/// enforced by the test suite.
pub fn theta_q(eps: f64) -> Result<f64> {
    require_unit_interval(eps)?;
    let a = libm::pow(1.0 - eps * eps, 0.25) / core::f64::consts::SQRT_2;
    let se = libm::sqrt(eps);
    let e32 = eps * se;
    let num = 2.0 * a * eps + 2.0 * a * a * se + e32;
    let den = 4.0 * a * a * a + 2.0 * a * a * se - e32;
    Ok(libm::atan2(num, den))
}

/// Phase of the full closed-form reflection coefficient at one point.
///
/// Arguments of numerator and denominator are taken separately and halved;
/// in `0 < eps < nuq` the overall minus sign is split off first so `theta`
/// tracks the same branch the closed forms differentiate. `branch_offset`
/// is zero here; sweeps fill it in while unwrapping.
pub fn phase_of_r(eps: f64, nuq: f64) -> Result<PhaseValue> {
    let regime = scatter::classify(eps, nuq)?;
    if regime == EnergyRegime::Diffusion {
        return Err(Error::Domain {
            what: "phase defined for total reflection only",
            value: eps,
        });
    }
    let (num, den) = scatter::reflection_num_den(eps, nuq)?;
    let minus_sign = regime == EnergyRegime::BelowNuq;
    let signed_num = if minus_sign { -num } else { num };
    Ok(PhaseValue {
        theta: 0.5 * (signed_num.arg() - den.arg()),
        branch_offset: 0,
        minus_sign,
    })
}

/// Phase sweep along an increasing `eps` grid, unwrapped to be continuous;
/// the pi multiples removed at each point land in `branch_offset`.
///
/// Unwrapping is meaningful within one regime only, so a grid that crosses
/// `eps = nuq` is rejected (as is one touching a boundary band).
pub fn phase_sweep(nuq: f64, eps_grid: &[f64]) -> Result<Vec<PhaseValue>> {
    let mut out = Vec::with_capacity(eps_grid.len());
    let mut regime: Option<EnergyRegime> = None;
    let mut prev: Option<f64> = None;
    for &eps in eps_grid {
        let here = scatter::classify(eps, nuq)?;
        if *regime.get_or_insert(here) != here {
            return Err(Error::Domain {
                what: "phase sweep must stay inside one regime",
                value: eps,
            });
        }
        let mut pv = phase_of_r(eps, nuq)?;
        if let Some(anchor) = prev {
            let total = unwrap_near(anchor, pv.theta, PI);
            pv.branch_offset = libm::round((total - pv.theta) / PI) as i32;
        }
        prev = Some(pv.total());
        out.push(pv);
    }
    Ok(out)
}
