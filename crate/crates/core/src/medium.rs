//! Coarse-grained medium kernels: permittivity, matter oscillator Green's
//! functions and the Ohmic reservoir kernels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Lorentz,
    Drude,
    Plasma,
}

/// Dielectric half-space. Energies in eV, temperature in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub model: Model,
    /// Plasma frequency Omega_P.
    pub plasma_freq: f64,
    /// Ohmic damping rate gamma.
    pub damping: f64,
    /// Renormalized oscillator frequency; zero for Drude and plasma.
    pub resonance: f64,
    /// Medium (reservoir) temperature T_M.
    pub temperature: f64,
}

impl MediumParams {
    pub fn new(model: Model, plasma_freq: f64, damping: f64, resonance: f64, temperature: f64) -> Result<Self> {
        let p = MediumParams {
            model,
            plasma_freq,
            damping,
            resonance,
            temperature,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn lorentz(plasma_freq: f64, damping: f64, resonance: f64, temperature: f64) -> Result<Self> {
        Self::new(Model::Lorentz, plasma_freq, damping, resonance, temperature)
    }

    pub fn drude(plasma_freq: f64, damping: f64, temperature: f64) -> Result<Self> {
        Self::new(Model::Drude, plasma_freq, damping, 0.0, temperature)
    }

    pub fn plasma(plasma_freq: f64, temperature: f64) -> Result<Self> {
        Self::new(Model::Plasma, plasma_freq, 0.0, 0.0, temperature)
    }

    /// Drude gold: Omega_P = 8.9 eV, gamma = 0.0357 eV.
    pub fn gold(temperature: f64) -> Self {
        MediumParams {
            model: Model::Drude,
            plasma_freq: 8.9,
            damping: 0.0357,
            resonance: 0.0,
            temperature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.plasma_freq, self.damping, self.resonance, self.temperature]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::params("medium parameters must be finite"));
        }
        if self.plasma_freq <= 0.0 {
            return Err(Error::params(format!("plasma frequency must be > 0, got {}", self.plasma_freq)));
        }
        if self.damping < 0.0 || self.resonance < 0.0 || self.temperature < 0.0 {
            return Err(Error::params("damping, resonance and temperature must be >= 0"));
        }
        match self.model {
            Model::Drude if self.resonance != 0.0 => Err(Error::params("drude model requires resonance = 0")),
            Model::Plasma if self.resonance != 0.0 || self.damping != 0.0 => {
                Err(Error::params("plasma model requires resonance = 0 and damping = 0"))
            }
            _ => Ok(()),
        }
    }

    /// Inverse medium temperature beta_M in 1/eV (infinite at T = 0).
    pub fn beta(&self) -> f64 {
        units::beta(self.temperature)
    }

    /// Squared damped oscillation frequency, omega_bar^2 = omega~^2 - gamma^2/4.
    /// Negative in the overdamped regime.
    pub fn omega_bar_sq(&self) -> f64 {
        self.resonance * self.resonance - 0.25 * self.damping * self.damping
    }

    /// Same medium at another temperature.
    pub fn at_temperature(&self, temperature: f64) -> Self {
        MediumParams { temperature, ..*self }
    }
}

/// coth(beta*omega/2), with the Laurent expansion 2/(beta*omega) + beta*omega/6
/// for |beta*omega| < 1e-4 and the zero-temperature limit sign(omega).
pub fn coth_half(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        return if omega > 0.0 {
            1.0
        } else if omega < 0.0 {
            -1.0
        } else {
            0.0
        };
    }
    let x = beta * omega;
    if x.abs() < 1e-4 {
        2.0 / x + x / 6.0
    } else {
        1.0 / (0.5 * x).tanh()
    }
}

/// coth(beta_a*omega/2) - coth(beta_b*omega/2) for omega > 0, written as
/// 2/expm1(beta_a*omega) - 2/expm1(beta_b*omega) so that the difference keeps
/// full relative accuracy where both coth values round to 1.
pub fn coth_half_difference(beta_a: f64, beta_b: f64, omega: f64) -> f64 {
    if beta_a == beta_b {
        return 0.0;
    }
    let n = |b: f64| if b.is_infinite() { 0.0 } else { 2.0 / (b * omega).exp_m1() };
    n(beta_a) - n(beta_b)
}

/// Permittivity epsilon(omega) = 1 - Omega_P^2 / (omega(omega + i gamma) - omega~^2)
/// at complex frequency.
pub fn epsilon(params: &MediumParams, omega: C64) -> Result<C64> {
    let den = omega * (omega + C64::new(0.0, params.damping)) - params.resonance * params.resonance;
    if den == C64::new(0.0, 0.0) {
        return Err(Error::domain(format!(
            "permittivity pole at omega = {omega} (omega(omega + i gamma) = omega~^2)"
        )));
    }
    Ok(1.0 - params.plasma_freq * params.plasma_freq / den)
}

/// Permittivity at real frequency.
pub fn epsilon_real(params: &MediumParams, omega: f64) -> Result<C64> {
    epsilon(params, C64::new(omega, 0.0))
}

/// Permittivity on the imaginary axis, epsilon(i xi) = 1 + Omega_P^2/(xi^2 + gamma xi + omega~^2).
/// Infinite at xi = 0 for Drude and plasma.
pub fn epsilon_imag_axis(params: &MediumParams, xi: f64) -> f64 {
    let den = xi * xi + params.damping * xi + params.resonance * params.resonance;
    1.0 + params.plasma_freq * params.plasma_freq / den
}

// cos(omega_bar x) continued to imaginary omega_bar.
fn osc_c(wb2: f64, x: f64) -> f64 {
    if wb2 > 0.0 {
        (wb2.sqrt() * x).cos()
    } else if wb2 < 0.0 {
        ((-wb2).sqrt() * x).cosh()
    } else {
        1.0
    }
}

// sin(omega_bar x)/omega_bar continued to imaginary omega_bar.
fn osc_s(wb2: f64, x: f64) -> f64 {
    if wb2 > 0.0 {
        let w = wb2.sqrt();
        (w * x).sin() / w
    } else if wb2 < 0.0 {
        let w = (-wb2).sqrt();
        (w * x).sinh() / w
    } else {
        x
    }
}

/// Retarded matter Green's function g_ret(dt) = e^{-gamma dt/2} sin(omega_bar dt)/omega_bar
/// for dt > 0 and zero otherwise. Units 1/eV.
pub fn matter_gret_time(params: &MediumParams, dt: f64) -> f64 {
    if dt <= 0.0 {
        return 0.0;
    }
    (-0.5 * params.damping * dt).exp() * osc_s(params.omega_bar_sq(), dt)
}

/// Nonstationary matter Hadamard function g_H(t, t') for oscillators prepared
/// thermally at time t_i. The coth is evaluated at the renormalized frequency.
///
/// The three-term bracket over omega_bar^2 is rearranged as
/// 2 omega~^2 S((s+d)/2) S((s-d)/2) + C(s) + (gamma/2) S(s), with
/// s = t + t' - 2 t_i and d = t - t', which has no 1/omega_bar^2 cancellation
/// and stays finite at critical damping.
pub fn matter_gh_time(params: &MediumParams, t: f64, tp: f64, t_i: f64) -> Result<f64> {
    if t < t_i || tp < t_i {
        return Err(Error::domain("g_H requires t, t' >= t_i"));
    }
    let w = params.resonance;
    if w == 0.0 {
        return Err(Error::domain(
            "g_H diverges for a free oscillator (omega~ = 0): no stationary position variance",
        ));
    }
    let wb2 = params.omega_bar_sq();
    let g = params.damping;
    let s = t + tp - 2.0 * t_i;
    let d = t - tp;
    let bracket = 2.0 * w * w * osc_s(wb2, 0.5 * (s + d)) * osc_s(wb2, 0.5 * (s - d))
        + osc_c(wb2, s)
        + 0.5 * g * osc_s(wb2, s);
    Ok((-0.5 * g * s).exp() * coth_half(params.beta(), w) / w * bracket)
}

/// Fourier-domain retarded matter Green's function 1/(omega~^2 - omega^2 - i gamma omega), eV^-2.
pub fn matter_gret_omega(params: &MediumParams, omega: f64) -> Result<C64> {
    let den = C64::new(
        params.resonance * params.resonance - omega * omega,
        -params.damping * omega,
    );
    if den == C64::new(0.0, 0.0) {
        return Err(Error::domain(format!("undamped matter resonance hit at omega = {omega}")));
    }
    Ok(1.0 / den)
}

/// Ohmic reservoir kernels (G_ret, G_H) in eV^2. The real part of G_ret is
/// absorbed into the renormalized frequency, leaving G_ret = i gamma omega and
/// G_H = 2 gamma omega coth(beta_M omega/2).
pub fn reservoir_kernels_omega(params: &MediumParams, omega: f64) -> (C64, f64) {
    let g = params.damping;
    let beta = params.beta();
    let h = if omega == 0.0 {
        if beta.is_infinite() {
            0.0
        } else {
            4.0 * g / beta
        }
    } else {
        2.0 * g * omega * coth_half(beta, omega)
    };
    (C64::new(0.0, g * omega), h)
}

/// Stationary medium Hadamard kernel 2 coth(beta_M omega/2) Im g_ret(omega), eV^-4.
/// At omega = 0 the analytic limit 4 gamma T |g_ret(0)|^2 is returned, which is
/// infinite for a Drude medium at finite temperature.
pub fn medium_hadamard_steady(params: &MediumParams, omega: f64) -> Result<f64> {
    if params.damping <= 0.0 {
        return Err(Error::params("stationary medium Hadamard kernel requires gamma > 0"));
    }
    if omega == 0.0 {
        let beta = params.beta();
        if beta.is_infinite() {
            return Ok(0.0);
        }
        let w2 = params.resonance * params.resonance;
        if w2 == 0.0 {
            return Ok(f64::INFINITY);
        }
        return Ok(4.0 * params.damping / (beta * w2 * w2));
    }
    let g = matter_gret_omega(params, omega)?;
    Ok(2.0 * coth_half(params.beta(), omega) * g.im)
}

/// The same kernel assembled as g_ret^* G_H g_ret from the reservoir kernel.
pub fn medium_hadamard_from_reservoir(params: &MediumParams, omega: f64) -> Result<f64> {
    let g = matter_gret_omega(params, omega)?;
    let (_, h) = reservoir_kernels_omega(params, omega);
    Ok(g.norm_sqr() * h)
}
