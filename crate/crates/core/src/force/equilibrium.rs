//! Equilibrium force. The total comes from the imaginary-frequency
//! (Matsubara) form of the real-frequency MQED integral; the evanescent
//! field-fluctuation part is integrated on the real axis.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{AtomParams, ForceOptions, Scenario};
use crate::error::{Error, Result};
use crate::halfspace::{critical_u, evanescent_bracket_sinh, evanescent_u_max, fresnel_from_wavevectors, spp_u, wave_decompose};
use crate::medium::{coth_half, epsilon_imag_axis, epsilon_real, MediumParams, Model};
use crate::parallel::{self, Execution};
use crate::quad::{breakpoints, integrate, integrate_to_infinity, Estimate, Tolerance};
use crate::units;

type C64 = Complex64;

// Matsubara sums longer than this switch to the xi-integral (relative
// error of order (2 pi T z)^2 / 12 < 1e-9 at the switch).
const MAX_MATSUBARA_TERMS: usize = 200_000;

/// Upper frequency cutoff max(20 Omega, 20 Omega_P, 40/(2z)).
pub(crate) fn omega_max(medium: &MediumParams, atom: &AtomParams, z: f64) -> f64 {
    (20.0 * atom.resonance).max(20.0 * medium.plasma_freq).max(20.0 / z)
}

fn check<V: crate::quad::QuadValue>(est: Estimate<V>, what: &str) -> Result<Estimate<V>> {
    if est.converged {
        Ok(est)
    } else {
        Err(Error::Quadrature {
            what: what.to_string(),
            value: est.value.norm(),
            error: est.error,
        })
    }
}

/// Q(omega) = int_1^qmax dq q [Im R_TE + (2q^2-1) Im R_TM] e^{-2 z omega sqrt(q^2-1)},
/// integrated in u = acosh(q).
pub(crate) fn ew_q_integral(eps: C64, omega: f64, z: f64, rel_tol: f64) -> Estimate<f64> {
    let umax = evanescent_u_max(omega, z);
    let mut interior = Vec::new();
    if let Some(u) = spp_u(eps) {
        interior.push(u);
    }
    // the exponential envelope sets a scale in u near the lower end
    if let Some(u) = critical_u(eps) {
        interior.extend([0.5 * u, u, 2.0 * u]);
    }
    let u_env = (1.0 + 0.5 / (z * omega)).acosh();
    interior.push(u_env);
    integrate(
        |u: f64| {
            let q = u.cosh();
            let s = u.sinh();
            q * s * evanescent_bracket_sinh(eps, s) * (-2.0 * z * omega * s).exp()
        },
        &breakpoints(0.0, umax, &interior),
        Tolerance::rel(rel_tol).with_abs(1e-300),
    )
}

/// Break points for the paired range u in [0, Omega] and for [2 Omega, omega_hi].
pub(crate) fn resonant_partition(atom: &AtomParams, omega_hi: f64, marks: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let w0 = atom.resonance;
    let mut u_marks: Vec<f64> = marks.iter().filter(|m| **m < w0).map(|m| w0 - m).collect();
    u_marks.extend(marks.iter().filter(|m| **m > w0 && **m < 2.0 * w0).map(|m| m - w0));
    if atom.linewidth > 0.0 {
        let mut e = atom.linewidth;
        while e < w0 {
            u_marks.push(e);
            e *= 10.0;
        }
    }
    (breakpoints(0.0, w0, &u_marks), breakpoints(2.0 * w0, omega_hi, marks))
}

/// int_0^omega_max Re alpha(omega) h(omega) d omega with the resonance at
/// Omega handled by pairing omega = Omega -/+ u on [0, 2 Omega]. For eta = 0
/// this is the principal value.
pub(crate) fn resonant_integral<H: Fn(f64) -> f64>(
    atom: &AtomParams,
    h: H,
    omega_hi: f64,
    marks: &[f64],
    tol: Tolerance,
) -> Estimate<f64> {
    let w0 = atom.resonance;
    let (near_pts, far_pts) = resonant_partition(atom, omega_hi, marks);
    let near = integrate(
        |u: f64| atom.re_alpha(w0 - u) * h(w0 - u) + atom.re_alpha(w0 + u) * h(w0 + u),
        &near_pts,
        tol,
    );
    let far = integrate(|w: f64| atom.re_alpha(w) * h(w), &far_pts, tol);
    Estimate {
        value: near.value + far.value,
        error: near.error + far.error,
        intervals: near.intervals + far.intervals,
        converged: near.converged && far.converged,
    }
}

pub(crate) fn spectral_marks(medium: &MediumParams, z: f64, temps: &[f64]) -> Vec<f64> {
    let mut m = vec![
        medium.damping,
        medium.plasma_freq / 2f64.sqrt(),
        medium.plasma_freq,
        0.5 / z,
        2.0 / z,
    ];
    if medium.resonance > 0.0 {
        m.push(medium.resonance);
        m.push((medium.resonance.powi(2) + 0.5 * medium.plasma_freq.powi(2)).sqrt());
    }
    for t in temps {
        if *t > 0.0 {
            m.push(*t);
            m.push(10.0 * t);
            m.push(40.0 * t);
        }
    }
    m.retain(|x| *x > 0.0 && x.is_finite());
    m
}

/// Evanescent spectral integral
/// -(1/pi) int d omega omega^4 Re alpha W(omega) Q(omega) in eV^2,
/// with the thermal weight W. Returns (value, relative quadrature error,
/// relative change per e-fold of the cutoff).
pub(crate) fn ew_spectral<W: Fn(f64) -> f64>(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    weight: W,
    temps: &[f64],
    opts: &ForceOptions,
) -> Result<(f64, f64, f64)> {
    let inner_ok = Cell::new(true);
    let h = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let wt = weight(w);
        if wt == 0.0 {
            return 0.0;
        }
        let eps = match epsilon_real(medium, w) {
            Ok(e) => e,
            Err(_) => {
                inner_ok.set(false);
                return 0.0;
            }
        };
        let q = ew_q_integral(eps, w, z, opts.inner());
        if !q.converged {
            inner_ok.set(false);
        }
        -(1.0 / PI) * w.powi(4) * wt * q.value
    };
    let w_hi = omega_max(medium, atom, z);
    let est = resonant_integral(
        atom,
        h,
        w_hi,
        &spectral_marks(medium, z, temps),
        Tolerance::rel(opts.rel_tol).with_abs(1e-300),
    );
    if !inner_ok.get() {
        return Err(Error::Quadrature {
            what: "evanescent q-integral".into(),
            value: est.value,
            error: est.error,
        });
    }
    let est = check(est, "evanescent frequency integral")?;
    // the evanescent part alone falls off only as 1/omega above the
    // cutoff (the light-line region cancels against the propagating part),
    // so report the contribution per e-fold of omega_max separately.
    let per_efold = (atom.re_alpha(w_hi) * h(w_hi)).abs() * w_hi;
    let (rel, cutoff) = if est.value == 0.0 {
        (0.0, 0.0)
    } else {
        (est.error / est.value.abs(), per_efold / est.value.abs())
    };
    Ok((est.value, rel, cutoff))
}

/// Evanescent field-fluctuation force in eV^2 at temperature T (kelvin),
/// with its relative quadrature error.
pub fn ew_force_natural(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    temperature: f64,
    opts: &ForceOptions,
) -> Result<(f64, f64)> {
    ew_force_with_cutoff(medium, atom, z, temperature, opts).map(|(v, e, _)| (v, e))
}

pub(crate) fn ew_force_with_cutoff(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    temperature: f64,
    opts: &ForceOptions,
) -> Result<(f64, f64, f64)> {
    if z <= 0.0 {
        return Err(Error::domain("ew_force requires z > 0"));
    }
    let beta = units::beta(temperature);
    let t = units::temperature_to_natural(temperature);
    ew_spectral(medium, atom, z, |w| coth_half(beta, w), &[t], opts)
}

/// Evanescent field-fluctuation force in newtons at temperature T (kelvin).
pub fn ew_force(scenario: &Scenario, temperature: f64) -> Result<f64> {
    scenario.validate()?;
    let (v, _) = ew_force_natural(
        &scenario.medium,
        &scenario.atom,
        scenario.z_natural(),
        temperature,
        &scenario.options,
    )?;
    Ok(units::force_to_si(v))
}

/// TM reflection at zero frequency.
fn static_r_tm(medium: &MediumParams) -> f64 {
    match medium.model {
        Model::Drude | Model::Plasma => 1.0,
        // no restoring force: the static response is conducting
        Model::Lorentz if medium.resonance == 0.0 => 1.0,
        Model::Lorentz => {
            let e0 = epsilon_imag_axis(medium, 0.0);
            (e0 - 1.0) / (e0 + 1.0)
        }
    }
}

/// Phi(xi) = int_xi^inf d kappa kappa [(2 kappa^2 - xi^2) r_TM - xi^2 r_TE] e^{-2 kappa z}.
pub(crate) fn matsubara_kernel(medium: &MediumParams, xi: f64, z: f64, rel_tol: f64) -> Estimate<f64> {
    if xi == 0.0 {
        return Estimate {
            value: 0.75 * static_r_tm(medium) / z.powi(4),
            error: 0.0,
            intervals: 0,
            converged: true,
        };
    }
    let em1 = epsilon_imag_axis(medium, xi) - 1.0;
    let eps = em1 + 1.0;
    let xi2 = xi * xi;
    let env = (-2.0 * xi * z).exp();
    let mut est = integrate_to_infinity(
        |x: f64| {
            let kap = xi + x;
            let kp = (em1 * xi2 + kap * kap).sqrt();
            // numerators via kap - kp = -(eps - 1) xi^2/(kap + kp), which
            // stays accurate when eps is close to 1
            let sum = kap + kp;
            let r_te = -em1 * xi2 / (sum * sum);
            let r_tm = em1 * (kap - xi2 / sum) / (eps * kap + kp);
            kap * ((2.0 * kap * kap - xi2) * r_tm - xi2 * r_te) * (-2.0 * x * z).exp()
        },
        0.0,
        1.0 / (2.0 * z),
        Tolerance::rel(rel_tol).with_abs(1e-300),
    );
    est.value *= env;
    est.error *= env;
    est
}

/// Full equilibrium force in eV^2 at temperature T (kelvin), from
/// -2T sum'_n alpha(i xi_n) Phi(xi_n), or -(1/pi) int d xi alpha Phi at T = 0.
pub fn equilibrium_force_natural(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    temperature: f64,
    opts: &ForceOptions,
) -> Result<(f64, f64)> {
    if z <= 0.0 {
        return Err(Error::domain("equilibrium force requires z > 0"));
    }
    let t = units::temperature_to_natural(temperature);
    let xi_stop = 25.0 / z;
    let step = 2.0 * PI * t;
    let n_terms = if t > 0.0 { (xi_stop / step).ceil() } else { f64::INFINITY };
    let inner = opts.inner();
    if n_terms.is_finite() && (n_terms as usize) <= MAX_MATSUBARA_TERMS {
        let ns: Vec<usize> = (0..=n_terms as usize).collect();
        let terms = parallel::map(&ns, Execution::Parallel, |n| {
            let xi = step * *n as f64;
            let k = matsubara_kernel(medium, xi, z, inner);
            let w = if *n == 0 { 0.5 } else { 1.0 };
            (w * atom.alpha_imag_axis(xi) * k.value, k.converged, k.rel_error())
        });
        let mut sum = 0.0;
        let mut worst = 0.0f64;
        for (v, ok, e) in &terms {
            if !ok {
                return Err(Error::Quadrature {
                    what: "Matsubara kernel".into(),
                    value: *v,
                    error: e * v.abs(),
                });
            }
            sum += v;
            worst = worst.max(*e);
        }
        return Ok((-2.0 * t * sum, worst));
    }
    let mut marks = vec![medium.damping, atom.resonance, medium.plasma_freq, 0.5 / z, 2.0 / z];
    marks.retain(|m| *m > 0.0);
    let inner_ok = Cell::new(true);
    let est = integrate(
        |xi: f64| {
            let k = matsubara_kernel(medium, xi, z, inner);
            if !k.converged {
                inner_ok.set(false);
            }
            atom.alpha_imag_axis(xi) * k.value
        },
        &breakpoints(0.0, xi_stop, &marks),
        Tolerance::rel(opts.rel_tol).with_abs(1e-300),
    );
    if !inner_ok.get() {
        return Err(Error::Quadrature {
            what: "Matsubara kernel".into(),
            value: est.value,
            error: est.error,
        });
    }
    let est = check(est, "imaginary-frequency integral")?;
    Ok((-est.value / PI, est.rel_error()))
}

/// Equilibrium force with its evanescent/propagating split, newtons.
///
/// `ew` is the evanescent field-fluctuation force; `pw` = total - ew holds the
/// propagating field-fluctuation part together with the resonant
/// atom-dipole-fluctuation term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FfForce {
    pub total: f64,
    pub ew: f64,
    pub pw: f64,
    pub total_rel_err: f64,
    pub ew_rel_err: f64,
    /// Relative change of `ew` per e-fold of the frequency cutoff.
    pub ew_cutoff_sensitivity: f64,
}

/// Equilibrium atom-surface force with field, medium and atom at temperature T (kelvin).
pub fn ff_force(scenario: &Scenario, temperature: f64) -> Result<FfForce> {
    scenario.validate()?;
    let z = scenario.z_natural();
    let (total, e1) =
        equilibrium_force_natural(&scenario.medium, &scenario.atom, z, temperature, &scenario.options)?;
    let (ew, e2, cut) = ew_force_with_cutoff(&scenario.medium, &scenario.atom, z, temperature, &scenario.options)?;
    let total = units::force_to_si(total);
    let ew = units::force_to_si(ew);
    Ok(FfForce {
        total,
        ew,
        pw: total - ew,
        total_rel_err: e1,
        ew_rel_err: e2,
        ew_cutoff_sensitivity: cut,
    })
}

/// Y(omega) = int_0^inf dk k [R_TE + R_TM (k^2 - k_z^2)/omega^2] e^{2 i k_z z},
/// split into (propagating, evanescent) parts.
pub(crate) fn reflection_moment(eps: C64, omega: f64, z: f64, rel_tol: f64) -> Result<(C64, C64)> {
    let w2 = omega * omega;
    let b = |k: f64| -> C64 {
        let wd = wave_decompose(omega, k);
        match fresnel_from_wavevectors(eps, wd.k_z, wd.medium_kz(eps)) {
            Ok(f) => {
                let pol = (k * k - wd.k_z * wd.k_z) / w2;
                (f.r_te + f.r_tm * pol) * (C64::new(0.0, 2.0) * wd.k_z * z).exp()
            }
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    };
    let pw = integrate(
        |th: f64| b(omega * th.sin()) * (w2 * th.sin() * th.cos()),
        &[0.0, FRAC_PI_2],
        Tolerance::rel(rel_tol).with_abs(1e-300),
    );
    let umax = evanescent_u_max(omega, z);
    let mut interior = vec![(1.0 + 0.5 / (z * omega)).acosh()];
    if let Some(u) = spp_u(eps) {
        interior.push(u);
    }
    let ew = integrate(
        |u: f64| b(omega * u.cosh()) * (w2 * u.cosh() * u.sinh()),
        &breakpoints(0.0, umax, &interior),
        Tolerance::rel(rel_tol).with_abs(1e-300),
    );
    let pw = check(pw, "propagating reflection moment")?;
    let ew = check(ew, "evanescent reflection moment")?;
    if !pw.value.re.is_finite() || !ew.value.re.is_finite() {
        return Err(Error::domain("vanishing Fresnel denominator in reflection moment"));
    }
    Ok((pw.value, ew.value))
}

/// Resonant atom-dipole-fluctuation term -(alpha0 Omega^3/2) coth(beta Omega/2) Re Y(Omega)
/// in eV^2 (delta-function rule for Im alpha).
pub fn atom_fluctuation_term(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    temperature: f64,
    opts: &ForceOptions,
) -> Result<f64> {
    let w = atom.resonance;
    let eps = epsilon_real(medium, w)?;
    let (pw, ew) = reflection_moment(eps, w, z, opts.inner())?;
    let c = coth_half(units::beta(temperature), w);
    Ok(-0.5 * atom.alpha0 * w.powi(3) * c * (pw + ew).re)
}

/// Propagating field-fluctuation force by direct real-frequency quadrature,
/// -(1/pi) int d omega omega^2 Re alpha coth Im Y_PW(omega), in eV^2.
///
/// The integrand oscillates as e^{2 i omega z} with slowly decaying amplitude,
/// so this is only practical for z below about 100 nm; it serves as a check
/// on the split returned by [`ff_force`].
pub fn ff_pw_real_axis(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    temperature: f64,
    opts: &ForceOptions,
) -> Result<f64> {
    let beta = units::beta(temperature);
    let failed = Cell::new(false);
    let h = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let y = epsilon_real(medium, w).and_then(|eps| reflection_moment(eps, w, z, opts.inner()));
        match y {
            Ok((pw, _)) => -(1.0 / PI) * w * w * coth_half(beta, w) * pw.im,
            Err(_) => {
                failed.set(true);
                0.0
            }
        }
    };
    let t = units::temperature_to_natural(temperature);
    let w_hi = omega_max(medium, atom, z);
    let mut marks = spectral_marks(medium, z, &[t]);
    let period = PI / z;
    let mut m = period;
    while m < w_hi {
        marks.push(m);
        m += period;
    }
    let est = resonant_integral(
        atom,
        h,
        w_hi,
        &marks,
        Tolerance::rel(opts.rel_tol).with_abs(1e-300),
    );
    if failed.get() {
        return Err(Error::domain("propagating reflection moment failed"));
    }
    Ok(check(est, "propagating frequency integral")?.value)
}
