//! Transient force from the Drude eddy-current mode after the field is
//! switched on against a medium prepared at t_i.

use std::f64::consts::PI;

use super::Scenario;
use crate::error::{Error, Result};
use crate::medium::{coth_half, Model};
use crate::quad::{integrate_to_infinity, Tolerance};
use crate::units;

/// Integral-form result in newtons, with regime warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct DynIntegral {
    pub value: f64,
    pub rel_err: f64,
    pub warnings: Vec<String>,
}

/// Closed-form force in newtons: `value` includes the cosine term, `mean`
/// drops it, and the envelope is mean +/- amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynClosed {
    pub value: f64,
    pub mean: f64,
    pub envelope_upper: f64,
    pub envelope_lower: f64,
}

fn require_drude(s: &Scenario) -> Result<()> {
    s.validate()?;
    if s.medium.model != Model::Drude || s.medium.damping <= 0.0 {
        return Err(Error::params("the eddy-current force requires a Drude medium with gamma > 0"));
    }
    Ok(())
}

fn regime_warnings(s: &Scenario) -> Vec<String> {
    let mut w = Vec::new();
    let gt = s.medium.damping * s.elapsed_natural();
    let pz = s.medium.plasma_freq * s.z_natural();
    if gt < 100.0 {
        w.push(format!("gamma*tau = {gt:.3e} is not >> 1"));
    }
    if pz < 100.0 {
        w.push(format!("Omega_P*z = {pz:.3e} is not >> 1"));
    }
    w
}

/// -(3/32 pi^2)(alpha0 Omega gamma^2/Omega_P^4)(1/z^3)
///   int_0^tau d lambda int_0^inf dk sin Omega(tau - lambda) k^3 coth(beta k/2) e^{-gamma k^2 (tau + lambda)/Omega_P^2}
///
/// The lambda integral is done in closed form,
/// int_0^tau sin Omega(tau - lambda) e^{-b lambda} = Im[(e^{i Omega tau} - e^{-b tau})/(b + i Omega)]
/// with b = gamma k^2/Omega_P^2, leaving a smooth k integral.
pub fn dyn_eddy_force_integral(scenario: &Scenario) -> Result<DynIntegral> {
    require_drude(scenario)?;
    let m = &scenario.medium;
    let a = &scenario.atom;
    let tau = scenario.elapsed_natural();
    let z = scenario.z_natural();
    let g = m.damping;
    let p2 = m.plasma_freq * m.plasma_freq;
    let w0 = a.resonance;
    let beta = units::beta(scenario.field_temperature);
    if tau == 0.0 {
        return Ok(DynIntegral {
            value: 0.0,
            rel_err: 0.0,
            warnings: regime_warnings(scenario),
        });
    }
    let (s, c) = (w0 * tau).sin_cos();
    let kscale = m.plasma_freq / (g * tau).sqrt();
    let est = integrate_to_infinity(
        |k: f64| {
            if k == 0.0 {
                return 0.0;
            }
            let b = g * k * k / p2;
            let e = (-b * tau).exp();
            let im = (s * b - w0 * (c - e)) / (b * b + w0 * w0);
            k.powi(3) * coth_half(beta, k) * e * im
        },
        0.0,
        kscale,
        Tolerance::rel(scenario.options.rel_tol).with_abs(1e-300),
    );
    if !est.converged {
        return Err(Error::Quadrature {
            what: "eddy-current k integral".into(),
            value: est.value,
            error: est.error,
        });
    }
    let pre = -3.0 / (32.0 * PI * PI) * a.alpha0 * w0 * g * g / (p2 * p2) / z.powi(3);
    Ok(DynIntegral {
        value: units::force_to_si(pre * est.value),
        rel_err: est.rel_error(),
        warnings: regime_warnings(scenario),
    })
}

/// Leading order for Omega tau, gamma tau, Omega_P z >> 1 and thermal k:
/// -(3 alpha0/64 pi^{3/2}) sqrt(gamma/Omega_P^2) (T/z^3) [1/(2 sqrt2) - cos Omega tau] tau^{-3/2}.
pub fn dyn_eddy_force_closed(scenario: &Scenario) -> Result<DynClosed> {
    require_drude(scenario)?;
    let m = &scenario.medium;
    let a = &scenario.atom;
    let tau = scenario.elapsed_natural();
    if tau <= 0.0 {
        return Err(Error::domain("closed-form eddy force diverges at tau = t_i"));
    }
    let z = scenario.z_natural();
    let t = units::temperature_to_natural(scenario.field_temperature);
    let amp = 3.0 * a.alpha0 / (64.0 * PI.powf(1.5)) * (m.damping).sqrt() / m.plasma_freq * t
        / z.powi(3)
        / tau.powf(1.5);
    let mean = -amp / (2.0 * 2f64.sqrt());
    let cos = (a.resonance * tau).cos();
    Ok(DynClosed {
        value: units::force_to_si(mean + amp * cos),
        mean: units::force_to_si(mean),
        envelope_upper: units::force_to_si(mean + amp),
        envelope_lower: units::force_to_si(mean - amp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::MediumParams;

    #[test]
    fn empty_time_range_vanishes() {
        let s = Scenario::gold_rubidium();
        let s = Scenario { tau: s.t_i, ..s };
        let f = dyn_eddy_force_integral(&s).unwrap();
        assert_eq!(f.value, 0.0);
        assert!(!f.warnings.is_empty());
        assert!(dyn_eddy_force_closed(&s).is_err());
    }

    #[test]
    fn distance_scaling_is_exact() {
        let s = Scenario::gold_rubidium();
        let a = dyn_eddy_force_integral(&s).unwrap().value;
        let b = dyn_eddy_force_integral(&s.with_z(2e-6)).unwrap().value;
        assert!((b / a - 0.125).abs() < 1e-14);
    }

    #[test]
    fn closed_form_scalings() {
        let s = Scenario::gold_rubidium();
        let a = dyn_eddy_force_closed(&s).unwrap();
        let hot = Scenario {
            field_temperature: 590.0,
            ..s
        };
        assert!((dyn_eddy_force_closed(&hot).unwrap().value / a.value - 2.0).abs() < 1e-14);
        let late = dyn_eddy_force_closed(&s.with_tau(4e-6)).unwrap();
        assert!((late.mean / a.mean - 0.125).abs() < 1e-14);
    }

    #[test]
    fn closed_matches_integral() {
        for tau in [1e-6, 2e-6] {
            let s = Scenario::gold_rubidium().with_tau(tau);
            let c = dyn_eddy_force_closed(&s).unwrap().value;
            let i = dyn_eddy_force_integral(&s).unwrap().value;
            assert!(((c - i) / i).abs() < 0.1, "tau {tau}: {c} vs {i}");
        }
    }

    #[test]
    fn rejects_non_drude() {
        let s = Scenario {
            medium: MediumParams::lorentz(8.9, 0.1, 1.0, 295.0).unwrap(),
            ..Scenario::gold_rubidium()
        };
        assert!(dyn_eddy_force_integral(&s).is_err());
        assert!(dyn_eddy_force_closed(&s).is_err());
    }
}
