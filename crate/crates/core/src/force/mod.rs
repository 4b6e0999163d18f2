//! Atom-surface forces: equilibrium, nonequilibrium steady state and the
//! eddy-current dynamical force.
//!
//! Public force functions take a [`Scenario`] and return newtons. The
//! `*_natural` variants work in eV^2. Sign convention: negative values pull
//! the atom toward the surface.

mod dynamic;
pub(crate) mod equilibrium;
mod steady;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::units;

pub use dynamic::{dyn_eddy_force_closed, dyn_eddy_force_integral, DynClosed, DynIntegral};
pub use equilibrium::{
    atom_fluctuation_term, equilibrium_force_natural, ew_force, ew_force_natural, ff_force, ff_pw_real_axis,
    FfForce,
};
pub use steady::{neq_correction, neq_correction_natural, steady_total_force, NeqForce};

/// Two-level-free oscillator atom. alpha0 in eV^-3, energies in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    pub alpha0: f64,
    pub resonance: f64,
    /// Regularizing linewidth eta of the polarizability.
    pub linewidth: f64,
    /// Atom temperature T_A in kelvin. The steady-state composition treats the
    /// atom as thermalized with the field, so this is carried for the record.
    pub temperature: f64,
}

impl AtomParams {
    pub fn new(alpha0: f64, resonance: f64, linewidth: f64, temperature: f64) -> Result<Self> {
        let a = AtomParams {
            alpha0,
            resonance,
            linewidth,
            temperature,
        };
        a.validate()?;
        Ok(a)
    }

    /// Rubidium: alpha0 = 4.73e-29 m^3, Omega = 2.35e15 rad/s, eta = 1e-6 Omega.
    pub fn rubidium() -> Self {
        let resonance = units::angular_frequency_to_ev(2.35e15);
        AtomParams {
            alpha0: units::volume_to_natural(4.73e-29),
            resonance,
            linewidth: 1e-6 * resonance,
            temperature: 295.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 > 0.0 && self.resonance > 0.0 && self.linewidth >= 0.0 && self.temperature >= 0.0)
            || !self.alpha0.is_finite()
            || !self.resonance.is_finite()
            || !self.linewidth.is_finite()
        {
            return Err(Error::params(
                "atom requires alpha0 > 0, resonance > 0, linewidth >= 0, temperature >= 0",
            ));
        }
        Ok(())
    }

    /// Weight of the delta-function rule Im alpha -> (pi/2) alpha0 Omega delta(omega - Omega).
    pub fn delta_weight(&self) -> f64 {
        0.5 * std::f64::consts::PI * self.alpha0 * self.resonance
    }

    /// Re alpha(omega), finite at resonance for eta > 0, principal-value form for eta = 0.
    pub fn re_alpha(&self, omega: f64) -> f64 {
        let w2 = self.resonance * self.resonance;
        let d = w2 - omega * omega;
        let g = self.linewidth * omega;
        self.alpha0 * w2 * d / (d * d + g * g)
    }

    /// alpha(i xi) = alpha0 Omega^2/(Omega^2 + xi^2 + eta xi).
    pub fn alpha_imag_axis(&self, xi: f64) -> f64 {
        let w2 = self.resonance * self.resonance;
        self.alpha0 * w2 / (w2 + xi * xi + self.linewidth * xi)
    }
}

/// alpha(omega) = alpha0 Omega^2/(Omega^2 - omega^2 - i eta omega), eV^-3.
///
/// With eta = 0 the imaginary part is a delta function at Omega; spectral
/// integrals then use [`AtomParams::delta_weight`].
pub fn polarizability(atom: &AtomParams, omega: f64) -> Result<Complex64> {
    let w2 = atom.resonance * atom.resonance;
    let den = Complex64::new(w2 - omega * omega, -atom.linewidth * omega);
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::domain(
            "polarizability pole at omega = Omega with eta = 0; use the delta-function rule",
        ));
    }
    Ok(atom.alpha0 * w2 / den)
}

/// Quadrature controls for the force integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceOptions {
    /// Relative tolerance of outer integrals; inner integrals run 100x tighter.
    pub rel_tol: f64,
}

impl Default for ForceOptions {
    fn default() -> Self {
        ForceOptions { rel_tol: 1e-8 }
    }
}

impl ForceOptions {
    pub fn new(rel_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::params(format!("tolerance must lie in (0, 1), got {rel_tol}")));
        }
        Ok(ForceOptions { rel_tol })
    }

    pub(crate) fn inner(&self) -> f64 {
        (self.rel_tol * 1e-2).max(1e-13)
    }
}

/// Physical configuration. Lengths and times are SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub medium: MediumParams,
    pub atom: AtomParams,
    /// Field temperature T_E in kelvin.
    pub field_temperature: f64,
    /// Atom-surface distance in meters.
    pub z: f64,
    /// Observation time in seconds.
    pub tau: f64,
    /// Initial (preparation) time in seconds.
    pub t_i: f64,
    pub options: ForceOptions,
}

impl Scenario {
    /// Gold and rubidium at 295 K, z = 1 um, tau = 1 us.
    pub fn gold_rubidium() -> Self {
        Scenario {
            medium: MediumParams::gold(295.0),
            atom: AtomParams::rubidium(),
            field_temperature: 295.0,
            z: 1e-6,
            tau: 1e-6,
            t_i: 0.0,
            options: ForceOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.medium.validate()?;
        self.atom.validate()?;
        if !(self.z > 0.0 && self.z.is_finite()) {
            return Err(Error::params(format!("distance z must be > 0, got {}", self.z)));
        }
        if !(self.field_temperature >= 0.0 && self.field_temperature.is_finite()) {
            return Err(Error::params("field temperature must be >= 0"));
        }
        if !(self.tau >= self.t_i && self.t_i >= 0.0 && self.tau.is_finite()) {
            return Err(Error::params("observation time tau must not precede t_i >= 0"));
        }
        Ok(())
    }

    /// Distance in 1/eV.
    pub fn z_natural(&self) -> f64 {
        units::length_to_natural(self.z)
    }

    /// tau - t_i in 1/eV.
    pub fn elapsed_natural(&self) -> f64 {
        units::time_to_natural(self.tau - self.t_i)
    }

    pub fn with_z(&self, z: f64) -> Self {
        Scenario { z, ..*self }
    }

    pub fn with_tau(&self, tau: f64) -> Self {
        Scenario { tau, ..*self }
    }

    pub fn with_temperatures(&self, medium: f64, field: f64) -> Self {
        Scenario {
            medium: self.medium.at_temperature(medium),
            field_temperature: field,
            ..*self
        }
    }
}

/// Force in newtons with named components.
///
/// `f_total` is the left-to-right sum of the components listed in
/// `composition`; the remaining components are informational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceBreakdown {
    pub f_total: f64,
    pub components: BTreeMap<String, f64>,
    pub composition: Vec<String>,
    /// Relative error estimates achieved by each quadrature.
    pub achieved_tol: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl ForceBreakdown {
    pub(crate) fn compose(
        parts: &[(&str, f64)],
        extra: &[(&str, f64)],
        achieved_tol: BTreeMap<String, f64>,
        warnings: Vec<String>,
    ) -> Self {
        let mut total = 0.0;
        let mut components = BTreeMap::new();
        for (i, (name, v)) in parts.iter().enumerate() {
            total = if i == 0 { *v } else { total + v };
            components.insert(name.to_string(), *v);
        }
        for (name, v) in extra {
            components.insert(name.to_string(), *v);
        }
        ForceBreakdown {
            f_total: total,
            components,
            composition: parts.iter().map(|(n, _)| n.to_string()).collect(),
            achieved_tol,
            warnings,
        }
    }

    /// Recompute the total from the composition components.
    pub fn recomposed_total(&self) -> f64 {
        let mut it = self.composition.iter().map(|n| self.components[n]);
        let first = it.next().unwrap_or(0.0);
        it.fold(first, |acc, v| acc + v)
    }

    pub fn worst_achieved_tol(&self) -> f64 {
        self.achieved_tol.values().copied().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rubidium_internal_values() {
        let a = AtomParams::rubidium();
        assert!((a.alpha0 / 6.15e-9 - 1.0).abs() < 2e-3);
        assert!((a.resonance - 1.547).abs() < 1e-3);
    }

    #[test]
    fn polarizability_limits() {
        let a = AtomParams::rubidium();
        assert!((polarizability(&a, 0.0).unwrap().re - a.alpha0).abs() < 1e-24);
        let w = 1e4;
        let v = polarizability(&a, w).unwrap();
        assert!((v.re / (-a.alpha0 * a.resonance.powi(2) / (w * w)) - 1.0).abs() < 1e-6);
        let lossless = AtomParams { linewidth: 0.0, ..a };
        assert!(polarizability(&lossless, a.resonance).is_err());
        assert_eq!(lossless.re_alpha(0.5), polarizability(&lossless, 0.5).unwrap().re);
    }

    #[test]
    fn scenario_validation() {
        let s = Scenario::gold_rubidium();
        assert!(s.validate().is_ok());
        assert!(s.with_z(-1.0).validate().is_err());
        assert!(Scenario { tau: 0.0, t_i: 1e-7, ..s }.validate().is_err());
        assert!(Scenario { tau: 0.0, ..s }.validate().is_ok());
    }
}
