//! Pinned CODATA constants and SI <-> natural-unit conversions.
//!
//! Internally everything is in natural units (hbar = c = k_B = 1) with the
//! electron-volt as base: energies in eV, lengths and times in 1/eV, forces
//! in eV^2.

/// hbar*c in eV*nm.
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;
/// hbar in eV*s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;
/// Boltzmann constant in eV/K.
pub const K_B_EV_PER_K: f64 = 8.617_333_262e-5;
/// Elementary charge in C, used only to derive the force conversion.
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;

/// hbar*c in eV*m.
pub const HBAR_C_EV_M: f64 = HBAR_C_EV_NM * 1e-9;

/// Newtons per eV^2 (natural-unit force). Equals e / (hbar c) in SI with the
/// pinned constants, approximately 8.1194e-13 N.
pub const NEWTON_PER_EV2: f64 = ELEMENTARY_CHARGE_C / HBAR_C_EV_M;

/// Meters to 1/eV.
pub fn length_to_natural(meters: f64) -> f64 {
    meters / HBAR_C_EV_M
}

/// 1/eV to meters.
pub fn length_to_si(inv_ev: f64) -> f64 {
    inv_ev * HBAR_C_EV_M
}

/// Seconds to 1/eV.
pub fn time_to_natural(seconds: f64) -> f64 {
    seconds / HBAR_EV_S
}

/// 1/eV to seconds.
pub fn time_to_si(inv_ev: f64) -> f64 {
    inv_ev * HBAR_EV_S
}

/// Cubic meters to eV^-3.
pub fn volume_to_natural(m3: f64) -> f64 {
    m3 / (HBAR_C_EV_M * HBAR_C_EV_M * HBAR_C_EV_M)
}

/// eV^-3 to cubic meters.
pub fn volume_to_si(inv_ev3: f64) -> f64 {
    inv_ev3 * HBAR_C_EV_M * HBAR_C_EV_M * HBAR_C_EV_M
}

/// Angular frequency in rad/s to eV.
pub fn angular_frequency_to_ev(rad_per_s: f64) -> f64 {
    rad_per_s * HBAR_EV_S
}

/// eV to angular frequency in rad/s.
pub fn ev_to_angular_frequency(ev: f64) -> f64 {
    ev / HBAR_EV_S
}

/// Kelvin to eV.
pub fn temperature_to_natural(kelvin: f64) -> f64 {
    kelvin * K_B_EV_PER_K
}

/// eV to kelvin.
pub fn temperature_to_si(ev: f64) -> f64 {
    ev / K_B_EV_PER_K
}

/// eV^2 to newtons.
pub fn force_to_si(ev2: f64) -> f64 {
    ev2 * NEWTON_PER_EV2
}

/// Newtons to eV^2.
pub fn force_to_natural(newtons: f64) -> f64 {
    newtons / NEWTON_PER_EV2
}

/// Inverse temperature 1/T in 1/eV; infinite at T = 0.
pub fn beta(kelvin: f64) -> f64 {
    if kelvin == 0.0 {
        f64::INFINITY
    } else {
        1.0 / temperature_to_natural(kelvin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn rubidium_inputs() {
        assert!(rel(angular_frequency_to_ev(2.35e15), 1.546_798_098_7) < 1e-9);
        assert!(rel(volume_to_natural(4.73e-29), 6.156_044_213e-9) < 1e-9);
        assert!(rel(temperature_to_natural(295.0), 2.542_113_312e-2) < 1e-9);
    }

    #[test]
    fn force_factor() {
        assert!(rel(NEWTON_PER_EV2, 8.1194e-13) < 1e-4);
    }

    #[test]
    fn micron_in_inverse_ev() {
        assert!(rel(length_to_natural(1e-6), 5.067_730_7) < 1e-7);
    }
}
