use noneqcp::force::{ew_force_natural, AtomParams, ForceOptions};
use noneqcp::halfspace::{dispersion_poles, dispersion_quartic, reflection_integrand, reflection_integrand_dz};
use noneqcp::medium::{epsilon_real, MediumParams};
use noneqcp::oracles::*;
use noneqcp::units;
use num_complex::Complex64;

type C64 = Complex64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn horner(c: &[C64], s: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for a in c {
        dp = dp * s + p;
        p = p * s + a;
    }
    (p, dp)
}

#[test]
fn roots_match_dispersion_poles_at_unit_k() {
    let p = MediumParams::gold(295.0);
    let set = dispersion_poles(&p, 1.0).unwrap();
    let roots = root_oracle(&dispersion_quartic(&p, 1.0).map(c)).unwrap();
    assert_eq!(roots.len(), 4);
    assert_eq!(roots.iter().filter(|r| r.norm() < 1e-12).count(), 1);
    for s in &set.poles {
        let d = roots.iter().map(|r| (r - s).norm() / s.norm()).fold(f64::INFINITY, f64::min);
        assert!(d < 1e-8);
    }
}

#[test]
fn residue_sum_over_fixed_stable_media() {
    // residues of (eps(is) s - ik)/(eps(is) s^2 + k^2) written as N/P with
    // N = s(s^2 + g s + w^2 + P^2) - ik(s^2 + g s + w^2)
    let cases = [
        (8.9, 0.0357, 0.3, 1.0),
        (2.0, 0.5, 1.0, 0.2),
        (5.0, 1.5, 0.1, 3.0),
        (1.0, 0.01, 2.0, 0.05),
        (12.0, 0.2, 0.7, 20.0),
    ];
    for (wp, g, w0, k) in cases {
        let m = MediumParams::lorentz(wp, g, w0, 0.0).unwrap();
        let quartic = dispersion_quartic(&m, k).map(c);
        let roots = root_oracle(&quartic).unwrap();
        let ik = C64::new(0.0, k);
        let sum: C64 = roots
            .iter()
            .map(|&s| {
                let d = s * s + g * s + w0 * w0;
                (s * (d + wp * wp) - ik * d) / horner(&quartic, s).1
            })
            .sum();
        assert!((sum - 1.0).norm() < 1e-10, "{wp} {g} {w0} {k}: {sum}");
        assert!(roots.iter().all(|s| s.re < 0.0));
    }
}

#[test]
fn baseline_trivial_integrals() {
    let v = quadrature_baseline(|q| q, Domain::Finite(&[0.0, 1.0]), 1e-12).unwrap();
    assert!((v - 0.5).abs() < 1e-15);
    let v = quadrature_baseline(|k| k.powi(3) * (-k * k).exp(), Domain::SemiInfinite { a: 0.0, scale: 1.0 }, 1e-12)
        .unwrap();
    assert!((v - 0.5).abs() < 1e-12);
}

#[test]
fn evanescent_force_baseline_agrees() {
    let m = MediumParams::gold(295.0);
    let a = AtomParams::rubidium();
    let z = units::length_to_natural(1e-6);
    let opts = ForceOptions::new(1e-8).unwrap();
    let (adaptive, _) = ew_force_natural(&m, &a, z, 295.0, &opts).unwrap();
    let fixed = ew_force_baseline(&m, &a, z, 295.0, 1e-8).unwrap();
    assert!(rel_diff(adaptive, fixed) < 1e-6);
}

#[test]
fn green_identity_gold_samples() {
    let m = MediumParams::gold(295.0);
    let z = units::length_to_natural(1e-6);
    let r = gfid_verify(&m, 0.5, z).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.tolerance, 1e-3);
}

#[test]
fn green_identity_transparent_limit() {
    let z = 3.0;
    let mut last = f64::INFINITY;
    for d in [1e-2, 1e-3, 1e-4] {
        let eps = C64::new(1.0 + d, 1e-2 * d);
        let ((lp, le), (rp, re)) = gfid_sides_eps(eps, 0.7, z, 1e-10).unwrap();
        assert!(le.abs() < last && re.abs() <= 2.0 * le.abs());
        assert!(((lp + le) - (rp + re)).abs() <= 1e-6 * (rp + re).abs());
        last = le.abs();
    }
    assert!(last < 1e-3);
}

#[test]
fn green_identity_converges_under_halving() {
    let m = MediumParams::gold(295.0);
    let (w, z) = (0.8, 2.0);
    let ((lp0, le0), _) = gfid_sides(&m, w, z, 1e-13).unwrap();
    let reference = lp0 + le0;
    let mut prev = f64::INFINITY;
    for tol in [1e-3, 1e-5, 1e-7, 1e-9] {
        let ((lp, le), _) = gfid_sides(&m, w, z, tol).unwrap();
        let err = rel_diff(lp + le, reference);
        assert!(err <= prev.max(1e-14), "tol {tol}: {err} after {prev}");
        prev = err;
    }
    assert!(prev < 1e-8);
}

#[test]
fn finite_difference_checks() {
    let (w, q, z): (f64, f64, f64) = (0.9, 0.4, 1.7);
    let kz = w * (1.0 - q * q).sqrt();
    let i2 = C64::new(0.0, 2.0 * kz);
    let r = finite_diff_check("exp", |x| (i2 * x).exp(), z, i2 * (i2 * z).exp(), 0.1).unwrap();
    assert!(r.pass, "{r:?}");
    let r = finite_diff_check("const", |_| C64::new(3.0, -1.0), z, C64::new(0.0, 0.0), 0.1).unwrap();
    assert!(r.pass, "{r:?}");

    let m = MediumParams::gold(295.0);
    for (w, k) in [(1.0, 0.5), (1.0, 2.0), (0.2, 0.1)] {
        let an = reflection_integrand_dz(&m, w, k, 3.0).unwrap();
        let r = finite_diff_check("reflection", |x| reflection_integrand(&m, w, k, x).unwrap(), 3.0, an, 0.2).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn kramers_kronig_reconstruction() {
    for m in [MediumParams::gold(295.0), MediumParams::lorentz(8.9, 0.2, 1.3, 295.0).unwrap()] {
        for f in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
            let w = f * m.plasma_freq;
            let exact = epsilon_real(&m, w).unwrap().re - 1.0;
            let kk = kramers_kronig_re_eps(&m, w, 1e-10).unwrap();
            assert!(rel_diff(kk, exact) < 1e-3, "{w}: {kk} vs {exact}");
        }
    }
}

#[test]
fn fft_tone() {
    let n = 1024;
    let dt = 0.01;
    let w = 2.0 * std::f64::consts::PI * 37.0 / (n as f64 * dt);
    let x: Vec<f64> = (0..n).map(|i| 2.0 + (w * i as f64 * dt).cos()).collect();
    let (peak, bin) = fft_peak_frequency(&x, dt);
    assert!((peak - w).abs() <= bin);
}

#[test]
fn report_pass_flag() {
    let r = OracleReport::scalar("x", 1.0, 1.0 + 1e-4, 1e-3);
    assert!(r.pass);
    let r = OracleReport::scalar("x", 1.0, 1.1, 1e-3);
    assert!(!r.pass);
}
