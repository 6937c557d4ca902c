//! Acceptance suite: every numbered criterion below is pinned to its stated
//! tolerance and prints one PASS/FAIL line (run with `-- --nocapture` to see
//! the lines for passing criteria too).
//!
//! Two checks encode thresholds the computed physics genuinely misses by
//! small, well-understood margins and are expected to fail; their failure
//! messages carry the measured values:
//!   - criterion 5b: one non-starred table cell (E0 = 6, V1 = 14.6) differs
//!     from the quaternionic column by only 7.7e-5 — the two delay curves
//!     truly cross near E0 = 5.95 for that height, so it is a genuine mimic
//!     point the 3-decimal table hides (0.139 vs 0.140).
//!   - criterion 6b: the rescaled-curve ratio at eps~ = 1.96 is 2.83, not
//!     above 3; the ratio passes 3 only for eps~ >= 1.9647.

use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qstep_core::analysis::{curve_intersections, find_minimum, mimic_potential};
use qstep_core::delay::{
    physical_delay, rescaled_curves, tau_c, tau_general, tau_q, CurveKind, PhysicalStep,
};
use qstep_core::packet::{build_and_evolve, extract_delay, PacketConfig};
use qstep_core::quat::{self, symplectic_compose, symplectic_decompose, Quaternion};
use qstep_core::scatter::{reflection_closed_form, solve_matching};

const ENERGIES: [f64; 7] = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0];
const HEIGHTS: [f64; 3] = [18.5, 16.5, 14.6];
/// Published delay table, KeV t0/hbar: rows by energy, columns
/// [quaternionic, V1=18.5, V1=16.5, V1=14.6].
const TABLE: [[f64; 4]; 7] = [
    [0.174, 0.174, 0.186, 0.199],
    [0.147, 0.131, 0.141, 0.154],
    [0.139, 0.115, 0.126, 0.140],
    [0.138, 0.109, 0.121, 0.138],
    [0.142, 0.108, 0.124, 0.147],
    [0.152, 0.113, 0.136, 0.179],
    [0.169, 0.126, 0.169, 0.345],
];
/// Starred cells (energy index, height index): the published mimic points.
const STARS: [(usize, usize); 3] = [(0, 0), (6, 1), (3, 2)];

fn report(criterion: &str, ok: bool, detail: &str) -> bool {
    println!(
        "acceptance criterion {criterion}: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

#[test]
fn criterion_1_table_reproduction() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qstep"))
        .args(["table", "--no-timestamp"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(out.status.success());

    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').skip(1).map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 7);

    let mut worst = 0.0f64;
    for (i, row) in rows.iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            worst = worst.max((cell - TABLE[i][j]).abs());
        }
    }
    let ok = worst <= 0.001 + 1e-12 && elapsed.as_secs_f64() < 1.0;
    let detail = format!(
        "28 cells within +-0.001 (worst |diff| = {worst:.5}), runtime {:.3} s",
        elapsed.as_secs_f64()
    );
    assert!(report("1 (Table-1 reproduction)", ok, &detail), "{detail}");
}

#[test]
fn criterion_2_curve_minima() {
    let start = Instant::now();
    let c = find_minimum(CurveKind::Complex).unwrap();
    let q = find_minimum(CurveKind::Quaternionic).unwrap();
    let elapsed = start.elapsed();

    let ok = (c.eps_star - 0.5).abs() < 1e-6
        && (c.tau_star - 2.0).abs() < 1e-6
        && (c.product - 1.0).abs() < 1e-6
        && (q.eps_star - 0.365).abs() < 5e-3
        && (q.tau_star - 2.763).abs() < 5e-3
        && (q.product - 1.0085).abs() < 1e-3
        && elapsed.as_secs_f64() < 1.0;
    let detail = format!(
        "complex ({:.8}, {:.8}) product {:.8}; quaternionic ({:.6}, {:.6}) product {:.6}; runtime {:.3} s",
        c.eps_star, c.tau_star, c.product, q.eps_star, q.tau_star, q.product,
        elapsed.as_secs_f64()
    );
    assert!(report("2 (curve minima)", ok, &detail), "{detail}");
}

#[test]
fn criterion_3_closed_form_delay_validation() {
    // also certifies the resolution of the pure-quaternionic phase constant
    let mut worst = 0.0f64;
    for i in 1..=19 {
        let eps = i as f64 * 0.05;
        let c = tau_general(eps, 0.0).unwrap();
        worst = worst.max(((c - tau_c(eps).unwrap()) / c).abs());
        let q = tau_general(eps, 1.0).unwrap();
        worst = worst.max(((q - tau_q(eps).unwrap()) / q).abs());
    }
    let ok = worst < 1e-6;
    let detail = format!("numerical 2 d(theta)/d(eps) vs closed forms, worst rel = {worst:.2e}");
    assert!(report("3 (delay closed forms)", ok, &detail), "{detail}");
}

#[test]
fn criterion_4_unitarity_and_solver_equivalence() {
    let start = Instant::now();
    let mut worst_mod = 0.0f64;
    let mut worst_eq = 0.0f64;
    let mut worst_res = 0.0f64;
    for i in 1..=19 {
        let eps = i as f64 * 0.05;
        for &nuq in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            if (eps - nuq).abs() < 1e-9 {
                continue;
            }
            let rc = reflection_closed_form(eps, nuq).unwrap();
            worst_mod = worst_mod.max((rc.norm() - 1.0).abs());
            for &rho in &[0.0, 1.1] {
                let sol = solve_matching(eps, nuq, rho).unwrap();
                worst_eq = worst_eq.max((sol.r - rc).norm());
                worst_res = worst_res
                    .max((sol.region_i(0.0) - sol.region_ii(0.0)).norm())
                    .max((sol.region_i_deriv(0.0) - sol.region_ii_deriv(0.0)).norm());
            }
        }
    }
    let elapsed = start.elapsed();
    let ok =
        worst_mod < 1e-10 && worst_eq < 1e-10 && worst_res < 1e-12 && elapsed.as_secs_f64() < 1.0;
    let detail = format!(
        "| |R|-1 | = {worst_mod:.2e}, |R_closed - R_solver| = {worst_eq:.2e}, residuals = {worst_res:.2e}, runtime {:.3} s",
        elapsed.as_secs_f64()
    );
    assert!(
        report("4 (unitarity + solver equivalence)", ok, &detail),
        "{detail}"
    );
}

#[test]
fn criterion_5a_mimic_heights() {
    let cases = [(2.0, 18.5), (14.0, 16.5), (8.0, 14.6)];
    let mut detail = String::new();
    let mut ok = true;
    for (e0, expect) in cases {
        let m = mimic_potential(e0, 20.0).unwrap();
        ok &= (m.v1_kev - expect).abs() < 0.1;
        detail.push_str(&format!(
            "E0={e0}: V1={:.4} (want {expect}+-0.1); ",
            m.v1_kev
        ));
    }
    assert!(report("5a (mimic heights)", ok, &detail), "{detail}");
}

#[test]
fn criterion_5b_non_starred_cells_do_not_mimic() {
    // As stated: every non-starred cell differs from the quaternionic column
    // by more than 0.002. Known to fail at (E0 = 6, V1 = 14.6): the complex
    // and quaternionic delay curves cross at E0 = 5.95 and 8.57 for this
    // height (both curve minima sit at 7.3 KeV), so the cell is a genuine
    // mimic point; its printed values (0.140 vs 0.139) mask it. 17 of 18
    // cells clear the threshold, so no single complex height reproduces the
    // whole quaternionic column either way.
    let quat = PhysicalStep::quaternionic(20.0).unwrap();
    let mut violations = Vec::new();
    let mut min_margin = f64::INFINITY;
    for (i, &e0) in ENERGIES.iter().enumerate() {
        let target = physical_delay(e0, &quat).unwrap();
        for (j, &v1) in HEIGHTS.iter().enumerate() {
            if STARS.contains(&(i, j)) {
                continue;
            }
            let c = physical_delay(e0, &PhysicalStep::complex(v1).unwrap()).unwrap();
            let margin = (c - target).abs();
            min_margin = min_margin.min(margin);
            if margin <= 0.002 {
                violations.push(format!("(E0={e0}, V1={v1}): |diff| = {margin:.6}"));
            }
        }
    }
    let ok = violations.is_empty();
    let detail = format!(
        "18 non-starred cells, smallest |complex - quaternionic| = {min_margin:.6} (need > 0.002){}{}",
        if ok { "" } else { "; violations: " },
        violations.join(", ")
    );
    assert!(
        report("5b (non-mimicry of non-starred cells)", ok, &detail),
        "{detail}"
    );
}

#[test]
fn criterion_6a_exactly_two_intersections() {
    let roots = curve_intersections((0.02, 1.999)).unwrap();
    let ok = roots.len() == 2;
    // the abscissae have no published values; they are reported, not asserted
    let detail = format!(
        "found {} intersections at eps~ = {:?}",
        roots.len(),
        roots
            .iter()
            .map(|r| (r.0 * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
    assert!(
        report("6a (two rescaled-curve intersections)", ok, &detail),
        "{detail}"
    );
}

#[test]
fn criterion_6b_amplification_factor_near_twice_the_minimum_energy() {
    // As stated: at eps~ = 1.96 the complex rescaled delay exceeds the
    // quaternionic by a factor above 3. Known to fail: the measured ratio is
    // 2.83 (the ratio does diverge as eps~ -> 2, crossing 3 at ~1.9647).
    let rc = rescaled_curves(&[1.96]).unwrap();
    let (_, c) = rc.complex.samples[0];
    let (_, q) = rc.quaternionic.samples[0];
    let ratio = c / q;
    let ok = c > 3.0 * q;
    let detail =
        format!("tau~_c(1.96) = {c:.6}, tau~_q(1.96) = {q:.6}, ratio = {ratio:.4} (need > 3)");
    assert!(
        report("6b (amplification factor at 1.96)", ok, &detail),
        "{detail}"
    );
}

#[test]
fn criterion_7_packet_oracle() {
    let start = Instant::now();
    let mut detail = String::new();
    let mut ok = true;
    for &nuq in &[0.0, 1.0] {
        for &eps0 in &[0.3, 0.5, 0.7] {
            let analytic = if nuq == 0.0 {
                tau_c(eps0).unwrap()
            } else {
                tau_q(eps0).unwrap()
            };
            let mut errs = [0.0f64; 2];
            for (k, &sigma) in [0.02, 0.01].iter().enumerate() {
                let cfg = PacketConfig::standard(eps0, sigma, nuq, 0.0);
                let track = build_and_evolve(&cfg).unwrap();
                let delay = extract_delay(&track, eps0).unwrap();
                errs[k] = (delay - analytic).abs();
            }
            let rel = errs[0] / analytic;
            let shrinks = errs[1] <= errs[0] + 1e-3;
            ok &= rel < 0.05 && shrinks;
            detail.push_str(&format!(
                "(eps0={eps0}, nuq={nuq}): relderr {rel:.1e}, halving {}; ",
                if shrinks { "ok" } else { "GREW" }
            ));
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed.as_secs_f64() < 60.0;
    detail.push_str(&format!("runtime {:.1} s", elapsed.as_secs_f64()));
    assert!(report("7 (wave-packet oracle)", ok, &detail), "{detail}");
}

#[test]
fn criterion_8_algebra_property_suite() {
    // defining relations, exactly
    let exact = quat::I * quat::I == -quat::ONE
        && quat::J * quat::J == -quat::ONE
        && quat::K * quat::K == -quat::ONE
        && quat::I * quat::J * quat::K == -quat::ONE;

    // norm multiplicativity over 10^4 random pairs
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let mut draw = || {
            Quaternion::new(
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
                rng.gen::<f64>() * 2.0 - 1.0,
            )
        };
        let (p, q) = (draw(), draw());
        let rel = ((p * q).norm() - p.norm() * q.norm()).abs() / (p.norm() * q.norm());
        worst = worst.max(rel);
    }

    // symplectic round trip, bit-exact
    let mut bit_exact = true;
    for _ in 0..1_000 {
        let q = Quaternion::new(
            rng.gen::<f64>() * 2e6 - 1e6,
            rng.gen::<f64>() * 2e6 - 1e6,
            rng.gen::<f64>() * 2e6 - 1e6,
            rng.gen::<f64>() * 2e6 - 1e6,
        );
        let rt = symplectic_compose(symplectic_decompose(q));
        bit_exact &= q.w.to_bits() == rt.w.to_bits()
            && q.x.to_bits() == rt.x.to_bits()
            && q.y.to_bits() == rt.y.to_bits()
            && q.z.to_bits() == rt.z.to_bits();
    }

    let ok = exact && worst < 1e-13 && bit_exact;
    let detail = format!(
        "defining relations exact: {exact}; norm multiplicativity worst rel = {worst:.2e} (need < 1e-13); round trip bit-exact: {bit_exact}"
    );
    assert!(report("8 (algebra properties)", ok, &detail), "{detail}");
}
