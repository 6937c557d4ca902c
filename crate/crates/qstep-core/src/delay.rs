//! Reflection delay times.
//!
//! The delay is twice the energy derivative of the reflection phase. Closed
//! forms exist for the pure-complex and pure-quaternionic steps; for an
//! arbitrary `nuq` the derivative is taken numerically on the unwrapped phase
//! with a Richardson-refined central difference. Physical-unit conversion
//! (KeV in, KeV t0/hbar out) lives here so everything below stays unit-free.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::analysis;
use crate::error::{Error, Result};
use crate::numeric::unwrap_near;
use crate::phase::phase_of_r;
use crate::scatter::{self, EnergyRegime, StepPotential, BOUNDARY_DELTA};

/// Which delay curve a set of samples belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveKind {
    Complex,
    Quaternionic,
    GeneralNuq(f64),
    RescaledComplex,
    RescaledQuaternionic,
}

/// A sampled `(eps, tau)` delay curve.
#[derive(Clone, Debug)]
pub struct DelayCurve {
    pub kind: CurveKind,
    pub samples: Vec<(f64, f64)>,
}

/// Both rescaled curves plus the per-curve counts of grid points dropped for
/// leaving the total-reflection window.
#[derive(Clone, Debug)]
pub struct RescaledCurves {
    pub complex: DelayCurve,
    pub quaternionic: DelayCurve,
    pub dropped_complex: usize,
    pub dropped_quaternionic: usize,
}

/// A physical step in KeV. Constructed through [`Self::new`] so the derived
/// quantities are always well defined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalStep {
    v1_kev: f64,
    v2_kev: f64,
    v3_kev: f64,
}

impl PhysicalStep {
    pub fn new(v1_kev: f64, v2_kev: f64, v3_kev: f64) -> Result<Self> {
        // reuse the adimensional validation
        StepPotential::new(v1_kev, v2_kev, v3_kev)?;
        Ok(Self {
            v1_kev,
            v2_kev,
            v3_kev,
        })
    }

    /// Pure complex step of height `v1` KeV.
    pub fn complex(v1_kev: f64) -> Result<Self> {
        Self::new(v1_kev, 0.0, 0.0)
    }

    /// Pure quaternionic step of modulus `vq` KeV (phase `rho = 0`).
    pub fn quaternionic(vq_kev: f64) -> Result<Self> {
        Self::new(0.0, vq_kev, 0.0)
    }

    fn as_adimensional(&self) -> StepPotential {
        StepPotential::new(self.v1_kev, self.v2_kev, self.v3_kev)
            .expect("validated on construction")
    }

    pub fn v1_kev(&self) -> f64 {
        self.v1_kev
    }

    pub fn v2_kev(&self) -> f64 {
        self.v2_kev
    }

    pub fn v3_kev(&self) -> f64 {
        self.v3_kev
    }

    pub fn vq_kev(&self) -> f64 {
        self.as_adimensional().vq()
    }

    pub fn v0_kev(&self) -> f64 {
        self.as_adimensional().v0()
    }

    pub fn nuq(&self) -> f64 {
        self.as_adimensional().nuq()
    }

    pub fn rho(&self) -> f64 {
        self.as_adimensional().rho()
    }
}

/// Complex-step delay `tau = 1/sqrt(eps (1 - eps))`.
pub fn tau_c(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            what: "tau_c needs 0 < eps < 1",
            value: eps,
        });
    }
    Ok(1.0 / libm::sqrt(eps * (1.0 - eps)))
}

/// Quaternionic-step delay (closed form).
pub fn tau_q(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain {
            what: "tau_q needs 0 < eps < 1",
            value: eps,
        });
    }
    let s = libm::sqrt(2.0 * eps);
    let q = 1.0 - eps * eps;
    let q14 = libm::pow(q, 0.25);
    let q12 = libm::sqrt(q);
    let q34 = q12 * q14;
    let num = 2.0 + 1.0 / (s * q34) + 2.0 * eps / q12 + 2.0 * s / q14;
    let den = eps + s * q14 + q12;
    Ok(num / den)
}

/// Relative agreement demanded between the two finite-difference half-steps.
const FD_AGREEMENT: f64 = 1e-7;

/// Delay for arbitrary `nuq` as `2 d theta/d eps` on the unwrapped phase of
/// the reflection coefficient.
///
/// Central differences at `h` and `h/2` with Richardson combination; the two
/// estimates must agree to `1e-7` relative. The whole stencil must sit inside
/// one regime, otherwise [`Error::BoundaryEnergy`].
pub fn tau_general(eps: f64, nuq: f64) -> Result<f64> {
    let regime = scatter::classify(eps, nuq)?;
    let (lo, hi) = match regime {
        EnergyRegime::BelowNuq => (0.0, nuq),
        EnergyRegime::Intermediate => (nuq, 1.0),
        EnergyRegime::Diffusion => {
            return Err(Error::Domain {
                what: "no delay defined for eps > 1",
                value: eps,
            })
        }
    };
    let h = (1e-4 * (eps - lo).min(hi - eps)).max(1e-6);
    if eps - h <= lo + BOUNDARY_DELTA || eps + h >= hi - BOUNDARY_DELTA {
        return Err(Error::BoundaryEnergy { eps, nuq });
    }

    // stencil phases, unwrapped outward from the center
    let offsets = [-h, -0.5 * h, 0.0, 0.5 * h, h];
    let mut phi = [0.0; 5];
    for (k, off) in offsets.iter().enumerate() {
        phi[k] = phase_of_r(eps + off, nuq)?.theta;
    }
    for k in [1usize, 0] {
        phi[k] = unwrap_near(phi[k + 1], phi[k], PI);
    }
    for k in [3usize, 4] {
        phi[k] = unwrap_near(phi[k - 1], phi[k], PI);
    }

    let d_h = (phi[4] - phi[0]) / (2.0 * h);
    let d_h2 = (phi[3] - phi[1]) / h;
    let refined = (4.0 * d_h2 - d_h) / 3.0;
    let spread = (d_h2 - d_h).abs();
    if spread > FD_AGREEMENT * refined.abs().max(1.0) {
        return Err(Error::FiniteDifference { spread });
    }
    Ok(2.0 * refined)
}

/// The Fig.-2 data: rescaled complex and quaternionic delay curves on a
/// common `eps~` grid.
///
/// The rescaling constants are the computed curve minima (complex: 0.5
/// analytically; quaternionic: ~0.3652), not hard-coded literals, so the
/// rescaled relations stay self-consistent with the minimization layer.
/// Grid points whose rescaled energy leaves `(0, 1)` are dropped per curve
/// and counted.
pub fn rescaled_curves(eps_tilde_grid: &[f64]) -> Result<RescaledCurves> {
    let (scale_c, scale_q) = rescale_constants()?;
    let mut complex = DelayCurve {
        kind: CurveKind::RescaledComplex,
        samples: Vec::new(),
    };
    let mut quaternionic = DelayCurve {
        kind: CurveKind::RescaledQuaternionic,
        samples: Vec::new(),
    };
    let mut dropped_complex = 0usize;
    let mut dropped_quaternionic = 0usize;

    for &et in eps_tilde_grid {
        match rescaled_point(et, scale_c, tau_c) {
            Some(tau) => complex.samples.push((et, tau)),
            None => dropped_complex += 1,
        }
        match rescaled_point(et, scale_q, tau_q) {
            Some(tau) => quaternionic.samples.push((et, tau)),
            None => dropped_quaternionic += 1,
        }
    }
    Ok(RescaledCurves {
        complex,
        quaternionic,
        dropped_complex,
        dropped_quaternionic,
    })
}

fn rescaled_point(eps_tilde: f64, scale: f64, tau: impl Fn(f64) -> Result<f64>) -> Option<f64> {
    let arg = scale * eps_tilde;
    if !(arg > BOUNDARY_DELTA && arg < 1.0 - BOUNDARY_DELTA) {
        return None;
    }
    tau(arg).ok().map(|t| scale * t)
}

/// The minimum locations used as rescaling constants `(complex, quaternionic)`.
pub fn rescale_constants() -> Result<(f64, f64)> {
    let c = analysis::find_minimum(CurveKind::Complex)?;
    let q = analysis::find_minimum(CurveKind::Quaternionic)?;
    Ok((c.eps_star, q.eps_star))
}

/// Reflection delay of a physical step, in KeV t0/hbar (hbar = 1): the
/// adimensional delay at `eps = E0/V0` divided by `V0` in KeV.
///
/// Closed forms are used for pure steps; `tau_general` otherwise. For a pure
/// complex step this reduces to `1/sqrt(E0 (V1 - E0))` in KeV^-1.
pub fn physical_delay(e0_kev: f64, step: &PhysicalStep) -> Result<f64> {
    if e0_kev <= 0.0 || e0_kev.is_nan() {
        return Err(Error::Domain {
            what: "E0 must be positive",
            value: e0_kev,
        });
    }
    let v0 = step.v0_kev();
    if e0_kev >= v0 {
        return Err(Error::Domain {
            what: "E0 must lie below the step height V0",
            value: e0_kev,
        });
    }
    let eps = e0_kev / v0;
    let nuq = step.nuq();
    let tau = if nuq == 0.0 {
        tau_c(eps)?
    } else if nuq == 1.0 {
        tau_q(eps)?
    } else {
        tau_general(eps, nuq)?
    };
    Ok(tau / v0)
}
