//! Stationary states of the quaternionic step potential.
//!
//! The step is `i*V1 + j*V2 + k*V3` for `xi > 0` and zero for `xi < 0`, with
//! everything expressed in the adimensional variables `eps = E/V0`,
//! `nuq = Vq/V0` and `rho = atan2(V3, V2)`. Region I carries the incident,
//! reflected and evanescent-quaternionic waves; region II carries two decaying
//! (or, above the step, propagating) channels with direction-dependent mode
//! exponents `alpha_-`, `alpha_+` and mixing coefficients `beta`, `gamma`.
//!
//! The matching conditions at `xi = 0` form a quaternionic 2x2 system in
//! `(R, R~, T, T~)`; via the symplectic decomposition it becomes a complex
//! 4x4 system, solved here with partial pivoting. A closed form for `R` is
//! implemented independently and the two routes are kept in agreement by the
//! test suite.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quat::{symplectic_compose, Quaternion, SymplecticPair};

/// Half-width of the excluded bands around the regime boundaries
/// `eps = nuq` and `eps = 1`.
pub const BOUNDARY_DELTA: f64 = 1e-9;

/// Condition-number ceiling for the 4x4 matching solve.
pub const SINGULAR_COND_LIMIT: f64 = 1e12;

/// Energy regime of a scattering configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyRegime {
    /// `0 < eps < nuq`: total reflection, both region-II channels evanescent
    /// with complex-conjugate-paired exponents.
    BelowNuq,
    /// `nuq < eps < 1`: total reflection, one oscillating-decaying channel.
    Intermediate,
    /// `eps > 1`: partial transmission; both exponents real.
    Diffusion,
}

/// A quaternionic step `i*V1 + j*V2 + k*V3` in energy units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepPotential {
    v1: f64,
    v2: f64,
    v3: f64,
}

impl StepPotential {
    pub fn new(v1: f64, v2: f64, v3: f64) -> Result<Self> {
        if !(v1.is_finite() && v2.is_finite() && v3.is_finite()) {
            return Err(Error::Domain {
                what: "potential components must be finite",
                value: f64::NAN,
            });
        }
        if v1 < 0.0 {
            return Err(Error::Domain {
                what: "V1 must be non-negative",
                value: v1,
            });
        }
        let s = Self { v1, v2, v3 };
        if s.v0() <= 0.0 {
            return Err(Error::Domain {
                what: "step height V0 must be positive",
                value: 0.0,
            });
        }
        Ok(s)
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    pub fn v3(&self) -> f64 {
        self.v3
    }

    /// `Vq = sqrt(V2^2 + V3^2)`.
    pub fn vq(&self) -> f64 {
        libm::hypot(self.v2, self.v3)
    }

    /// `V0 = sqrt(V1^2 + Vq^2)`.
    pub fn v0(&self) -> f64 {
        libm::hypot(self.v1, self.vq())
    }

    /// `nuq = Vq/V0`, in `[0, 1]`.
    pub fn nuq(&self) -> f64 {
        (self.vq() / self.v0()).clamp(0.0, 1.0)
    }

    /// `rho = atan2(V3, V2)`.
    pub fn rho(&self) -> f64 {
        libm::atan2(self.v3, self.v2)
    }
}

/// Amplitudes and regime data of one stationary state.
#[derive(Clone, Copy, Debug)]
pub struct ScatteringSolution {
    pub eps: f64,
    pub nuq: f64,
    pub rho: f64,
    pub regime: EnergyRegime,
    pub alpha_minus: Complex64,
    pub alpha_plus: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub r: Complex64,
    pub r_tilde: Complex64,
    pub t: Complex64,
    pub t_tilde: Complex64,
}

fn check_inputs(eps: f64, nuq: f64) -> Result<()> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::Domain {
            what: "eps must be positive",
            value: eps,
        });
    }
    if !nuq.is_finite() || !(0.0..=1.0).contains(&nuq) {
        return Err(Error::Domain {
            what: "nuq must lie in [0, 1]",
            value: nuq,
        });
    }
    Ok(())
}

/// Classifies `(eps, nuq)` into its energy regime.
///
/// Points within [`BOUNDARY_DELTA`] of `eps = nuq` or `eps = 1` are rejected
/// as [`Error::BoundaryEnergy`]: there a mode exponent degenerates and the
/// downstream delay formulas diverge.
pub fn classify(eps: f64, nuq: f64) -> Result<EnergyRegime> {
    check_inputs(eps, nuq)?;
    if (eps - 1.0).abs() < BOUNDARY_DELTA || (eps - nuq).abs() < BOUNDARY_DELTA {
        return Err(Error::BoundaryEnergy { eps, nuq });
    }
    if eps > 1.0 {
        Ok(EnergyRegime::Diffusion)
    } else if eps > nuq {
        Ok(EnergyRegime::Intermediate)
    } else {
        Ok(EnergyRegime::BelowNuq)
    }
}

/// Mode exponents `(alpha_-, alpha_+)` with the regime-correct branches.
///
/// - Diffusion: both real positive.
/// - Intermediate: `alpha_-` positive-imaginary, `alpha_+` real positive.
/// - BelowNuq: `alpha_-` in the upper half plane and `alpha_+ = i*conj(alpha_-)`.
///
/// These explicit forms coincide with the principal-branch evaluation of
/// `sqrt(sqrt(eps^2 - nuq^2) +- sqrt(1 - nuq^2))`.
pub fn alphas(eps: f64, nuq: f64) -> Result<(Complex64, Complex64)> {
    let regime = classify(eps, nuq)?;
    let s2 = libm::sqrt(1.0 - nuq * nuq);
    Ok(match regime {
        EnergyRegime::Diffusion => {
            let s1 = libm::sqrt(eps * eps - nuq * nuq);
            (
                Complex64::new(libm::sqrt(s1 - s2), 0.0),
                Complex64::new(libm::sqrt(s1 + s2), 0.0),
            )
        }
        EnergyRegime::Intermediate => {
            let s1 = libm::sqrt(eps * eps - nuq * nuq);
            (
                Complex64::new(0.0, libm::sqrt(s2 - s1)),
                Complex64::new(libm::sqrt(s1 + s2), 0.0),
            )
        }
        EnergyRegime::BelowNuq => {
            let c = libm::pow(1.0 - eps * eps, 0.25);
            let chi = libm::atan2(libm::sqrt(nuq * nuq - eps * eps), s2);
            let am = Complex64::from_polar(c, core::f64::consts::FRAC_PI_2 - 0.5 * chi);
            let ap = Complex64::new(0.0, 1.0) * am.conj();
            (am, ap)
        }
    })
}

/// Channel-mixing coefficients `(beta, gamma)`.
///
/// `beta = i nuq e^{i rho} / D`, `gamma = -i nuq e^{-i rho} / D` with
/// `D = eps + sqrt(eps^2 - nuq^2)` on the principal branch. Defined for every
/// `eps > 0` including the regime boundaries; `beta*gamma = nuq^2 / D^2`
/// carries no `rho`.
pub fn beta_gamma(eps: f64, nuq: f64, rho: f64) -> Result<(Complex64, Complex64)> {
    check_inputs(eps, nuq)?;
    let d = Complex64::new(eps, 0.0) + Complex64::new(eps * eps - nuq * nuq, 0.0).sqrt();
    let phase = Complex64::from_polar(1.0, rho);
    let i = Complex64::i();
    Ok((i * nuq * phase / d, -i * nuq * phase.conj() / d))
}

/// `beta*gamma` (rho-independent).
fn beta_gamma_product(eps: f64, nuq: f64) -> Complex64 {
    let d = Complex64::new(eps, 0.0) + Complex64::new(eps * eps - nuq * nuq, 0.0).sqrt();
    Complex64::new(nuq * nuq, 0.0) / (d * d)
}

/// Closed-form reflection coefficient.
///
/// Independent of `rho` by construction. Unimodular for `0 < eps < 1`; in
/// the diffusion regime the amplitudes are computed but no modulus statement
/// is made (no probability current is defined for the quaternionic case).
pub fn reflection_closed_form(eps: f64, nuq: f64) -> Result<Complex64> {
    let (num, den) = reflection_num_den(eps, nuq)?;
    Ok(num / den)
}

/// Numerator and denominator of the closed-form `R`, exposed separately so
/// the phase layer can take their arguments without forming the quotient.
pub(crate) fn reflection_num_den(eps: f64, nuq: f64) -> Result<(Complex64, Complex64)> {
    let (am, ap) = alphas(eps, nuq)?;
    let bg = beta_gamma_product(eps, nuq);
    let se = Complex64::new(libm::sqrt(eps), 0.0);
    let i = Complex64::i();
    let num = (se + ap) * (se - am) - bg * (se - i * am) * (se - i * ap);
    let den = (se + ap) * (se + am) - bg * (se - i * am) * (se + i * ap);
    Ok((num, den))
}

/// Solves the matching conditions at `xi = 0` for `(R, R~, T, T~)`.
///
/// The quaternionic 2x2 system is embedded as a complex 4x4 system through
/// the symplectic decomposition and solved with partial pivoting; a condition
/// estimate above [`SINGULAR_COND_LIMIT`] is reported as
/// [`Error::SingularSystem`].
pub fn solve_matching(eps: f64, nuq: f64, rho: f64) -> Result<ScatteringSolution> {
    let regime = classify(eps, nuq)?;
    let (am, ap) = alphas(eps, nuq)?;
    let (beta, gamma) = beta_gamma(eps, nuq, rho)?;
    let se = libm::sqrt(eps);
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let cse = Complex64::new(se, 0.0);

    // unknowns ordered [R, R~, T, T~]
    let a = [
        [one, zero, -one, -beta],
        [zero, one, -gamma, -one],
        [i * cse, zero, i * am, -beta * ap],
        [zero, cse, -i * am * gamma, ap],
    ];
    let rhs = [-one, zero, i * cse, zero];
    let (x, cond) = crate::numeric::solve4(&a, &rhs)?;
    if cond > SINGULAR_COND_LIMIT {
        return Err(Error::SingularSystem { cond });
    }

    Ok(ScatteringSolution {
        eps,
        nuq,
        rho,
        regime,
        alpha_minus: am,
        alpha_plus: ap,
        beta,
        gamma,
        r: x[0],
        r_tilde: x[1],
        t: x[2],
        t_tilde: x[3],
    })
}

impl ScatteringSolution {
    fn sqrt_eps(&self) -> f64 {
        libm::sqrt(self.eps)
    }

    /// Region-I wavefunction `exp(i k xi) + R exp(-i k xi) + j R~ exp(k xi)`
    /// with `k = sqrt(eps)`.
    pub fn region_i(&self, xi: f64) -> Quaternion {
        let k = self.sqrt_eps();
        let inc = Complex64::from_polar(1.0, k * xi);
        let z1 = inc + self.r * inc.conj();
        let z2 = self.r_tilde * libm::exp(k * xi);
        symplectic_compose(SymplecticPair::new(z1, z2))
    }

    /// Region-I spatial derivative.
    pub fn region_i_deriv(&self, xi: f64) -> Quaternion {
        let k = self.sqrt_eps();
        let ik = Complex64::new(0.0, k);
        let inc = Complex64::from_polar(1.0, k * xi);
        let z1 = ik * inc - ik * self.r * inc.conj();
        let z2 = self.r_tilde * (k * libm::exp(k * xi));
        symplectic_compose(SymplecticPair::new(z1, z2))
    }

    /// Region-II wavefunction
    /// `(1 + j gamma) T exp(i a- xi) + (beta + j) T~ exp(-a+ xi)`.
    pub fn region_ii(&self, xi: f64) -> Quaternion {
        let u = self.t * (Complex64::i() * self.alpha_minus * xi).exp();
        let v = self.t_tilde * (-self.alpha_plus * xi).exp();
        symplectic_compose(SymplecticPair::new(u + self.beta * v, self.gamma * u + v))
    }

    /// Region-II spatial derivative.
    pub fn region_ii_deriv(&self, xi: f64) -> Quaternion {
        let i = Complex64::i();
        let du = i * self.alpha_minus * self.t * (i * self.alpha_minus * xi).exp();
        let dv = -self.alpha_plus * self.t_tilde * (-self.alpha_plus * xi).exp();
        symplectic_compose(SymplecticPair::new(
            du + self.beta * dv,
            self.gamma * du + dv,
        ))
    }
}

/// Full quaternionic wavefunction value; the region is selected by the sign
/// of `xi` (region II at `xi = 0`, where both sides agree by construction).
pub fn wavefunction_at(sol: &ScatteringSolution, xi: f64) -> Quaternion {
    if xi < 0.0 {
        sol.region_i(xi)
    } else {
        sol.region_ii(xi)
    }
}
