use noneqcp::medium::*;
use noneqcp::units;
use num_complex::Complex64;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn gold_permittivity_reference() {
    // arbitrary-precision evaluation of 1 - Omega_P^2/(omega(omega + i gamma))
    let e = epsilon_real(&MediumParams::gold(295.0), 1.0).unwrap();
    assert!(rel(e.re, -78.109_176_146_093_56) < 1e-14);
    assert!(rel(e.im, 2.824_197_588_415_54) < 1e-14);
}

#[test]
fn gold_medium_hadamard_reference() {
    let v = medium_hadamard_steady(&MediumParams::gold(295.0), 0.1).unwrap();
    assert!(rel(v, 65.857_030_720_833_73) < 1e-12, "{v}");
}

#[test]
fn permittivity_is_one_plus_plasma_response() {
    for p in [
        MediumParams::gold(295.0),
        MediumParams::lorentz(8.9, 0.2, 1.3, 295.0).unwrap(),
    ] {
        for w in log_grid(1e-3, 1e2, 100) {
            let e = epsilon_real(&p, w).unwrap();
            let g = matter_gret_omega(&p, w).unwrap();
            let d = (1.0 + p.plasma_freq * p.plasma_freq * g - e).norm() / e.norm();
            assert!(d < 1e-14, "w = {w}: {d}");
        }
    }
}

#[test]
fn reality_and_passivity() {
    let models = [
        MediumParams::gold(295.0),
        MediumParams::lorentz(8.9, 0.2, 1.3, 295.0).unwrap(),
        MediumParams::plasma(8.9, 295.0).unwrap(),
    ];
    for p in models {
        for w in log_grid(1e-2, 1e2, 50) {
            let a = epsilon(&p, Complex64::new(w, 0.0)).unwrap();
            let b = epsilon(&p, Complex64::new(-w, 0.0)).unwrap();
            assert!((a - b.conj()).norm() <= 1e-14 * a.norm());
            if p.damping > 0.0 {
                assert!(a.im > 0.0);
            }
        }
    }
}

#[test]
fn reservoir_fdr_on_log_grid() {
    let p = MediumParams::gold(295.0);
    for w in log_grid(1e-3, 1e2, 100) {
        let (gret, gh) = reservoir_kernels_omega(&p, w);
        let ratio = gh / (2.0 * coth_half(p.beta(), w) * gret.im);
        assert!((ratio - 1.0).abs() < 1e-10, "w = {w}");
    }
    let (g0, _) = reservoir_kernels_omega(&p, 0.0);
    assert_eq!(g0.im, 0.0);
    let cold = p.at_temperature(0.0);
    let (_, h) = reservoir_kernels_omega(&cold, 2.0);
    assert!(rel(h, 2.0 * p.damping * 2.0) < 1e-15);
}

#[test]
fn medium_hadamard_two_routes() {
    for p in [
        MediumParams::gold(295.0),
        MediumParams::lorentz(8.9, 0.2, 1.3, 400.0).unwrap(),
    ] {
        for w in log_grid(1e-3, 1e2, 100) {
            let a = medium_hadamard_steady(&p, w).unwrap();
            let b = medium_hadamard_from_reservoir(&p, w).unwrap();
            assert!(rel(a, b) < 1e-12, "w = {w}: {a} vs {b}");
        }
    }
}

#[test]
fn eckhardt_identity() {
    for p in [
        MediumParams::gold(295.0),
        MediumParams::lorentz(8.9, 0.2, 1.3, 295.0).unwrap(),
    ] {
        for w in log_grid(1e-3, 1e2, 100) {
            let g = matter_gret_omega(&p, w).unwrap();
            let (gret, _) = reservoir_kernels_omega(&p, w);
            let lhs = g.norm_sqr() * gret.im;
            assert!(rel(lhs, g.im) < 1e-12, "w = {w}");
        }
    }
}

#[test]
fn coth_laurent_branch_is_continuous() {
    let beta = units::beta(295.0);
    for x in [0.9e-4, 1.1e-4] {
        let w = x / beta;
        let exact = 1.0 / (0.5 * x).tanh();
        assert!(rel(coth_half(beta, w), exact) < 1e-12);
    }
    assert_eq!(coth_half(f64::INFINITY, 0.3), 1.0);
}

#[test]
fn retarded_time_kernel_is_causal() {
    let p = MediumParams::lorentz(8.9, 0.2, 1.3, 295.0).unwrap();
    for dt in [-3.0, -1e-9, 0.0] {
        assert_eq!(matter_gret_time(&p, dt), 0.0);
    }
    let over = MediumParams::lorentz(8.9, 5.0, 1.0, 295.0).unwrap();
    assert!(over.omega_bar_sq() < 0.0);
    assert!(matter_gret_time(&over, 1.0).is_finite());
}

#[test]
fn hadamard_time_kernel_limits() {
    let p = MediumParams::lorentz(8.9, 0.0, 1.3, 295.0).unwrap();
    let v = matter_gh_time(&p, 2.0, 2.0, 2.0).unwrap();
    let expect = coth_half(p.beta(), 1.3) / 1.3;
    assert!(rel(v, expect) < 1e-14);

    let q = MediumParams::lorentz(8.9, 0.0357, 1.0, 295.0).unwrap();
    let t = 10.0 / q.damping;
    let late = matter_gh_time(&q, t, t, 0.0).unwrap().abs();
    let first = matter_gh_time(&q, 0.0, 0.0, 0.0).unwrap().abs();
    // the oscillator bracket overshoots 1 by at most gamma/(2 omega_bar)
    assert!(late < (-10.0f64).exp() * first * (1.0 + q.damping / q.resonance));
    assert!(late > (-10.0f64).exp() * first * (1.0 - q.damping / q.resonance));

    assert!(matter_gh_time(&MediumParams::gold(295.0), 1.0, 1.0, 0.0).is_err());
}
