//! Stationary-state scattering of a particle on a quaternionic step
//! potential: regime-aware mode exponents, the matching-condition solve,
//! reflection phases, delay times in total reflection, curve minima and
//! mimicry analysis, and an independent wave-packet oracle for the
//! stationary-phase delay.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes
//! through `libm`, so results are deterministic across platforms. Inputs to
//! the core layers are the adimensional triple `(eps, nuq, rho)`; physical
//! units (KeV) appear only in [`delay::PhysicalStep`] and the layers above.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod delay;
mod error;
pub mod numeric;
pub mod packet;
pub mod phase;
pub mod quat;
pub mod scatter;

pub use error::{Error, Result};
pub use num_complex::Complex64;
