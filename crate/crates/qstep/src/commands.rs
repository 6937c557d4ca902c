//! The subcommand implementations. Each returns the rendered output so the
//! binary shell stays a thin dispatcher and tests can call straight in.

use serde::Serialize;

use qstep_core::analysis::{curve_intersections, find_minimum, mimic_potential};
use qstep_core::delay::{
    physical_delay, rescaled_curves, tau_c, tau_general, tau_q, CurveKind, PhysicalStep,
};
use qstep_core::packet::{build_and_evolve, reflected_trajectory_fit, PacketConfig};
use qstep_core::phase::phase_of_r;
use qstep_core::scatter::{solve_matching, EnergyRegime};
use qstep_core::{Complex64, Error, Result};

use crate::manifest::RunManifest;

/// Formats a float with 10 significant digits (sweep CSV precision).
fn sig10(x: f64) -> String {
    format!("{x:.9e}")
}

/// Fixed 3 decimals (delay-table precision; ties round half to even).
fn dec3(x: f64) -> String {
    format!("{x:.3}")
}

#[derive(Serialize, Clone, Copy)]
struct Cx {
    re: f64,
    im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

fn regime_name(r: EnergyRegime) -> &'static str {
    match r {
        EnergyRegime::BelowNuq => "below_nuq",
        EnergyRegime::Intermediate => "intermediate",
        EnergyRegime::Diffusion => "diffusion",
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum ComputeFormat {
    Json,
    Text,
}

#[derive(Serialize)]
struct ComputeReport {
    eps: f64,
    nuq: f64,
    rho: f64,
    regime: &'static str,
    alpha_minus: Cx,
    alpha_plus: Cx,
    beta: Cx,
    gamma: Cx,
    r: Cx,
    r_tilde: Cx,
    t: Cx,
    t_tilde: Cx,
    abs_r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minus_sign: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

/// Single-point solve: amplitudes, reflection phase and delay.
pub fn compute(eps: f64, nuq: f64, rho: f64, format: ComputeFormat) -> Result<String> {
    let sol = solve_matching(eps, nuq, rho)?;
    let (theta, minus_sign, tau, note) = if sol.regime == EnergyRegime::Diffusion {
        (None, None, None, Some("no delay defined for eps > 1"))
    } else {
        let pv = phase_of_r(eps, nuq)?;
        let tau = if nuq == 0.0 {
            tau_c(eps)?
        } else if nuq == 1.0 {
            tau_q(eps)?
        } else {
            tau_general(eps, nuq)?
        };
        (Some(pv.theta), Some(pv.minus_sign), Some(tau), None)
    };
    let report = ComputeReport {
        eps,
        nuq,
        rho,
        regime: regime_name(sol.regime),
        alpha_minus: sol.alpha_minus.into(),
        alpha_plus: sol.alpha_plus.into(),
        beta: sol.beta.into(),
        gamma: sol.gamma.into(),
        r: sol.r.into(),
        r_tilde: sol.r_tilde.into(),
        t: sol.t.into(),
        t_tilde: sol.t_tilde.into(),
        abs_r: sol.r.norm(),
        theta,
        minus_sign,
        tau,
        note,
    };
    Ok(match format {
        ComputeFormat::Json => to_json(&report),
        ComputeFormat::Text => render_compute_text(&report),
    })
}

fn render_compute_text(r: &ComputeReport) -> String {
    let cx = |c: &Cx| format!("{:+.12e} {:+.12e}i", c.re, c.im);
    let mut out = String::new();
    out.push_str(&format!("eps         : {}\n", r.eps));
    out.push_str(&format!("nuq         : {}\n", r.nuq));
    out.push_str(&format!("rho         : {}\n", r.rho));
    out.push_str(&format!("regime      : {}\n", r.regime));
    out.push_str(&format!("alpha_minus : {}\n", cx(&r.alpha_minus)));
    out.push_str(&format!("alpha_plus  : {}\n", cx(&r.alpha_plus)));
    out.push_str(&format!("beta        : {}\n", cx(&r.beta)));
    out.push_str(&format!("gamma       : {}\n", cx(&r.gamma)));
    out.push_str(&format!("R           : {}\n", cx(&r.r)));
    out.push_str(&format!("R_tilde     : {}\n", cx(&r.r_tilde)));
    out.push_str(&format!("T           : {}\n", cx(&r.t)));
    out.push_str(&format!("T_tilde     : {}\n", cx(&r.t_tilde)));
    out.push_str(&format!("|R|         : {:.12}\n", r.abs_r));
    if let Some(theta) = r.theta {
        out.push_str(&format!("theta       : {theta:.12}\n"));
    }
    if let Some(ms) = r.minus_sign {
        out.push_str(&format!("minus_sign  : {ms}\n"));
    }
    if let Some(tau) = r.tau {
        out.push_str(&format!("tau         : {tau:.12}\n"));
    }
    if let Some(note) = r.note {
        out.push_str(&format!("note        : {note}\n"));
    }
    out
}

/// Delay-time table: one row per energy, quaternionic column first, then one
/// column per complex height. Cells with `E0` at or above the step height
/// read `NA`. Values in KeV t0/hbar at 3 decimals.
pub fn table(
    vq: f64,
    v1_list: &[f64],
    energies: &[f64],
    manifest: Option<&RunManifest>,
) -> Result<String> {
    if vq <= 0.0 {
        return Err(Error::Domain {
            what: "Vq must be positive",
            value: vq,
        });
    }
    let quat = PhysicalStep::quaternionic(vq)?;
    let complexes: Vec<PhysicalStep> = v1_list
        .iter()
        .map(|&v| PhysicalStep::complex(v))
        .collect::<Result<_>>()?;

    let mut out = String::new();
    if let Some(m) = manifest {
        out.push_str(&m.to_comment_block());
        let cols: Vec<String> = v1_list.iter().map(|v| format!("V1_{v}")).collect();
        out.push_str(&format!(
            "# columns: E0_keV,quaternionic,{}\n",
            cols.join(",")
        ));
    }
    for &e0 in energies {
        let mut row = vec![e0.to_string()];
        row.push(match physical_delay(e0, &quat) {
            Ok(d) => dec3(d),
            Err(_) => "NA".to_string(),
        });
        for step in &complexes {
            row.push(match physical_delay(e0, step) {
                Ok(d) => dec3(d),
                Err(_) => "NA".to_string(),
            });
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Fig1,
    Fig2,
}

/// Inclusive arithmetic grid `lo:hi:step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be lo:hi:step, got {s:?}"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|e| format!("bad grid number {p:?}: {e}"))
            })
            .collect::<std::result::Result<_, _>>()?;
        let (lo, hi, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0 && hi > lo) {
            return Err("grid needs hi > lo and step > 0".to_string());
        }
        Ok(Self { lo, hi, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

/// Delay-curve sampling. `fig1` emits `eps,tau_c,tau_q` on the adimensional
/// interval; `fig2` emits `eps_tilde,tau_tilde_c,tau_tilde_q` in rescaled
/// variables, with `NA` where a curve has left its domain. Out-of-domain
/// rows and cells are counted in the header comments.
pub fn sweep(mode: SweepMode, grid: GridSpec, manifest: Option<&RunManifest>) -> Result<String> {
    let points = grid.points();
    let mut body = String::new();
    let mut header_extra = String::new();

    match mode {
        SweepMode::Fig1 => {
            let mut dropped = 0usize;
            for &eps in &points {
                match (tau_c(eps), tau_q(eps)) {
                    (Ok(c), Ok(q)) => {
                        body.push_str(&format!("{},{},{}\n", sig10(eps), sig10(c), sig10(q)));
                    }
                    _ => dropped += 1,
                }
            }
            header_extra.push_str(&format!("# dropped: {dropped}\n"));
            header_extra.push_str("# columns: eps,tau_c,tau_q\n");
        }
        SweepMode::Fig2 => {
            let rc = rescaled_curves(&points)?;
            let mut complex_iter = rc.complex.samples.iter().peekable();
            let mut quat_iter = rc.quaternionic.samples.iter().peekable();
            let mut rows = 0usize;
            for &et in &points {
                let c = match complex_iter.peek() {
                    Some(&&(x, tau)) if x == et => {
                        complex_iter.next();
                        Some(tau)
                    }
                    _ => None,
                };
                let q = match quat_iter.peek() {
                    Some(&&(x, tau)) if x == et => {
                        quat_iter.next();
                        Some(tau)
                    }
                    _ => None,
                };
                if c.is_none() && q.is_none() {
                    continue;
                }
                let fmt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), sig10);
                body.push_str(&format!("{},{},{}\n", sig10(et), fmt(c), fmt(q)));
                rows += 1;
            }
            header_extra.push_str(&format!(
                "# dropped_complex: {}\n# dropped_quaternionic: {}\n# rows: {rows}\n",
                rc.dropped_complex, rc.dropped_quaternionic
            ));
            header_extra.push_str("# columns: eps_tilde,tau_tilde_c,tau_tilde_q\n");
        }
    }

    let mut out = String::new();
    if let Some(m) = manifest {
        out.push_str(&m.to_comment_block());
        out.push_str(&header_extra);
    }
    out.push_str(&body);
    Ok(out)
}

#[derive(Serialize)]
struct MinimumReport {
    curve: String,
    eps_star: f64,
    tau_star: f64,
    product: f64,
}

pub fn minimize(kind: CurveKind) -> Result<String> {
    let m = find_minimum(kind)?;
    let curve = match kind {
        CurveKind::Complex => "complex".to_string(),
        CurveKind::Quaternionic => "quaternionic".to_string(),
        CurveKind::GeneralNuq(nuq) => format!("general(nuq={nuq})"),
        _ => unreachable!("rejected by find_minimum"),
    };
    Ok(to_json(&MinimumReport {
        curve,
        eps_star: m.eps_star,
        tau_star: m.tau_star,
        product: m.product,
    }))
}

#[derive(Serialize)]
struct MimicReport {
    e0_kev: f64,
    vq_kev: f64,
    v1_kev: f64,
    delay_kev: f64,
    v1_candidates: Vec<f64>,
}

pub fn mimic(e0: f64, vq: f64) -> Result<String> {
    let m = mimic_potential(e0, vq)?;
    Ok(to_json(&MimicReport {
        e0_kev: m.e0_kev,
        vq_kev: m.vq_kev,
        v1_kev: m.v1_kev,
        delay_kev: m.delay_kev,
        v1_candidates: m.v1_candidates,
    }))
}

#[derive(Serialize)]
struct IntersectionReport {
    count: usize,
    intersections: Vec<IntersectionPoint>,
}

#[derive(Serialize)]
struct IntersectionPoint {
    eps_tilde: f64,
    tau_tilde: f64,
}

pub fn intersect(lo: f64, hi: f64) -> Result<String> {
    let roots = curve_intersections((lo, hi))?;
    Ok(to_json(&IntersectionReport {
        count: roots.len(),
        intersections: roots
            .into_iter()
            .map(|(eps_tilde, tau_tilde)| IntersectionPoint {
                eps_tilde,
                tau_tilde,
            })
            .collect(),
    }))
}

#[derive(Serialize)]
struct PacketReport {
    eps0: f64,
    sigma_eps: f64,
    nuq: f64,
    rho: f64,
    delay: f64,
    analytic: f64,
    relative_error: f64,
    slope: f64,
    intercept: f64,
    fit_rms: f64,
    tau_sep: f64,
    track: Vec<TrackRow>,
}

#[derive(Serialize)]
struct TrackRow {
    tau: f64,
    xi_centroid: f64,
    norm_captured: f64,
}

/// Runs the wave-packet oracle; returns `(json report, track csv body)`.
pub fn packet(eps0: f64, sigma: f64, nuq: f64, rho: f64) -> Result<(String, String)> {
    let cfg = PacketConfig::standard(eps0, sigma, nuq, rho);
    let track = build_and_evolve(&cfg)?;
    let fit = reflected_trajectory_fit(&track)?;
    let delay = qstep_core::packet::extract_delay(&track, eps0)?;
    let analytic = if nuq == 0.0 {
        tau_c(eps0)?
    } else if nuq == 1.0 {
        tau_q(eps0)?
    } else {
        tau_general(eps0, nuq)?
    };

    let mut csv = String::from("tau,xi_centroid,norm_captured\n");
    for s in &track.samples {
        csv.push_str(&format!(
            "{},{},{}\n",
            sig10(s.tau),
            sig10(s.xi_centroid),
            sig10(s.norm_captured)
        ));
    }

    let report = PacketReport {
        eps0,
        sigma_eps: sigma,
        nuq,
        rho,
        delay,
        analytic,
        relative_error: (delay - analytic) / analytic,
        slope: fit.slope,
        intercept: fit.intercept,
        fit_rms: fit.rms,
        tau_sep: track.tau_sep,
        track: track
            .samples
            .iter()
            .map(|s| TrackRow {
                tau: s.tau,
                xi_centroid: s.xi_centroid,
                norm_captured: s.norm_captured,
            })
            .collect(),
    };
    Ok((to_json(&report), csv))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}
