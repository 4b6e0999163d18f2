//! Nonequilibrium steady state: medium at T_M, field at T_E.

use std::collections::BTreeMap;

use super::equilibrium::ew_spectral;
use super::{ff_force, AtomParams, ForceBreakdown, ForceOptions, Scenario};
use crate::error::Result;
use crate::halfspace::propagating_kernel_integral;
use crate::medium::{coth_half_difference, epsilon_real, MediumParams};
use crate::quad::Tolerance;
use crate::units;

/// Nonequilibrium correction in newtons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeqForce {
    pub ew: f64,
    pub pw: f64,
    pub ew_rel_err: f64,
}

/// (f_neq_ew, f_neq_pw, rel err) in eV^2 for medium at T_M and field at T_E (kelvin).
///
/// The evanescent part weights the evanescent kernel with
/// coth(beta_M omega/2) - coth(beta_E omega/2); the propagating part uses the
/// delta-function rule for Im alpha and is
/// (sqrt2/2) alpha0 Omega^5 [coth diff at Omega] int_0^1 dq q sqrt(1-q^2) B_PW.
pub fn neq_correction_natural(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    t_medium: f64,
    t_field: f64,
    opts: &ForceOptions,
) -> Result<(f64, f64, f64)> {
    if t_medium == t_field {
        return Ok((0.0, 0.0, 0.0));
    }
    let bm = units::beta(t_medium);
    let be = units::beta(t_field);
    let temps = [units::temperature_to_natural(t_medium), units::temperature_to_natural(t_field)];
    let (ew, err, _) = ew_spectral(medium, atom, z, |w| coth_half_difference(bm, be, w), &temps, opts)?;
    let w0 = atom.resonance;
    let dc = coth_half_difference(bm, be, w0);
    let pw = if dc == 0.0 {
        0.0
    } else {
        let x = propagating_kernel_integral(epsilon_real(medium, w0)?, Tolerance::rel(opts.inner()))?;
        std::f64::consts::FRAC_1_SQRT_2 * atom.alpha0 * w0.powi(5) * dc * x
    };
    Ok((ew, pw, err))
}

/// Nonequilibrium correction for the scenario's T_M (medium) and T_E (field).
pub fn neq_correction(scenario: &Scenario) -> Result<NeqForce> {
    scenario.validate()?;
    let (ew, pw, err) = neq_correction_natural(
        &scenario.medium,
        &scenario.atom,
        scenario.z_natural(),
        scenario.medium.temperature,
        scenario.field_temperature,
        &scenario.options,
    )?;
    Ok(NeqForce {
        ew: units::force_to_si(ew),
        pw: units::force_to_si(pw),
        ew_rel_err: err,
    })
}

/// f = f(T_E) + [f_EW(T_M) - f_EW(T_E)] + f_neq_PW, composed as
/// eq + neq_ew + neq_pw. With T_M = T_E both corrections are exact zeros.
pub fn steady_total_force(scenario: &Scenario) -> Result<ForceBreakdown> {
    let eq = ff_force(scenario, scenario.field_temperature)?;
    let neq = neq_correction(scenario)?;
    let mut tol = BTreeMap::new();
    tol.insert("eq".to_string(), eq.total_rel_err);
    tol.insert("ff_ew".to_string(), eq.ew_rel_err);
    tol.insert("neq_ew".to_string(), neq.ew_rel_err);
    let mut warnings = Vec::new();
    if eq.ew_cutoff_sensitivity > scenario.options.rel_tol {
        warnings.push(format!(
            "ff_ew/ff_pw split changes by {:.1e} relative per e-fold of the frequency cutoff",
            eq.ew_cutoff_sensitivity
        ));
    }
    Ok(ForceBreakdown::compose(
        &[("eq", eq.total), ("neq_ew", neq.ew), ("neq_pw", neq.pw)],
        &[("ff_ew", eq.ew), ("ff_pw", eq.pw)],
        tol,
        warnings,
    ))
}
