//! Half-space electromagnetics: wave-vector branches, Fresnel sets, the
//! Ohmic dispersion poles and the reflection integrands used by the force
//! integrals.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::medium::{epsilon, epsilon_real, MediumParams};
use crate::quad::{breakpoints, integrate, Tolerance};

type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

/// Square root on the branch with Im >= 0, and Re >= 0 when the result is real.
pub fn sqrt_upper(v: C64) -> C64 {
    // cancellation-free principal root: the small component is formed as
    // b/(2t) instead of from the polar angle
    let (a, b) = (v.re, v.im);
    let m = v.norm();
    let r = if m == 0.0 {
        C64::new(0.0, 0.0)
    } else if a >= 0.0 {
        let t = (0.5 * (m + a)).sqrt();
        C64::new(t, b / (2.0 * t))
    } else {
        let t = (0.5 * (m - a)).sqrt();
        C64::new(b.abs() / (2.0 * t), t.copysign(b))
    };
    if r.im < 0.0 || (r.im == 0.0 && r.re < 0.0) {
        -r
    } else {
        r
    }
}

/// Plane-wave decomposition at real frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveDecomposition {
    pub omega: f64,
    pub k_par: f64,
    pub q: f64,
    /// Vacuum normal wave vector: real for q < 1, i|omega|sqrt(q^2-1) for q > 1.
    pub k_z: C64,
}

impl WaveDecomposition {
    /// Normal wave vector inside a medium of permittivity `eps`, with Im >= 0.
    pub fn medium_kz(&self, eps: C64) -> C64 {
        sqrt_upper(eps * self.omega * self.omega - self.k_par * self.k_par)
    }
}

pub fn wave_decompose(omega: f64, k_par: f64) -> WaveDecomposition {
    debug_assert!(omega > 0.0 && k_par >= 0.0);
    let q = k_par / omega;
    let k_z = if q <= 1.0 {
        C64::new(omega * ((1.0 - q) * (1.0 + q)).sqrt(), 0.0)
    } else {
        C64::new(0.0, omega.abs() * ((q - 1.0) * (q + 1.0)).sqrt())
    };
    WaveDecomposition { omega, k_par, q, k_z }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    RightIncident,
    LeftIncident,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelSet {
    pub r_te: C64,
    pub t_te: C64,
    pub r_tm: C64,
    pub t_tm: C64,
    pub side: Side,
}

/// Right-incident (vacuum side) coefficients from the two normal wave vectors.
/// Valid for complex frequencies as well.
pub fn fresnel_from_wavevectors(eps: C64, k_z: C64, big_kz: C64) -> Result<FresnelSet> {
    let den_te = k_z + big_kz;
    let den_tm = eps * k_z + big_kz;
    if den_te == C64::new(0.0, 0.0) || den_tm == C64::new(0.0, 0.0) {
        return Err(Error::domain(format!(
            "vanishing Fresnel denominator (k_z = {k_z}, K_z = {big_kz}, eps = {eps})"
        )));
    }
    Ok(FresnelSet {
        r_te: (k_z - big_kz) / den_te,
        t_te: 2.0 * k_z / den_te,
        r_tm: (eps * k_z - big_kz) / den_tm,
        t_tm: 2.0 * eps.sqrt() * k_z / den_tm,
        side: Side::RightIncident,
    })
}

/// Right-incident Fresnel set for a medium of given permittivity.
pub fn fresnel_right_eps(eps: C64, omega: f64, k_par: f64) -> Result<FresnelSet> {
    let w = wave_decompose(omega, k_par);
    fresnel_from_wavevectors(eps, w.k_z, w.medium_kz(eps))
}

pub fn fresnel_right(params: &MediumParams, omega: f64, k_par: f64) -> Result<FresnelSet> {
    fresnel_right_eps(epsilon_real(params, omega)?, omega, k_par)
}

/// Vacuum normal wave vector sqrt(-s^2 - k_par^2) of a pole mode, Im > 0.
pub fn mode_vacuum_kz(s: C64, k_par: f64) -> Result<C64> {
    let k = sqrt_upper(-s * s - k_par * k_par);
    if k.im <= 0.0 {
        return Err(Error::Branch(format!(
            "Im k_z = {} <= 0 for mode s = {s}, k_par = {k_par}",
            k.im
        )));
    }
    Ok(k)
}

/// Left-incident (medium side) coefficients for the mode s_l with real
/// medium normal wave vector K_z > 0; epsilon is evaluated at i s_l.
pub fn fresnel_left(params: &MediumParams, s: C64, big_kz: f64, k_par: f64) -> Result<FresnelSet> {
    if big_kz <= 0.0 {
        return Err(Error::domain("left-incident mode label K_z must be > 0"));
    }
    let eps = epsilon(params, I * s)?;
    fresnel_left_eps(eps, mode_vacuum_kz(s, k_par)?, big_kz)
}

/// Left-incident coefficients from explicit permittivity and wave vectors.
pub fn fresnel_left_eps(eps: C64, k_lz: C64, big_kz: f64) -> Result<FresnelSet> {
    let kz = C64::new(big_kz, 0.0);
    let den_te = kz + k_lz;
    let den_tm = kz + eps * k_lz;
    if den_te == C64::new(0.0, 0.0) || den_tm == C64::new(0.0, 0.0) {
        return Err(Error::domain("vanishing left-incident Fresnel denominator"));
    }
    Ok(FresnelSet {
        r_te: (kz - k_lz) / den_te,
        t_te: 2.0 * kz / den_te,
        r_tm: (kz - eps * k_lz) / den_tm,
        t_tm: 2.0 * eps.sqrt() * kz / den_tm,
        side: Side::LeftIncident,
    })
}

/// Roots s_l of epsilon(i s) s^2 + k^2 = 0 with the residues of
/// (epsilon(i s) s - i k)/(epsilon(i s) s^2 + k^2).
///
/// For omega~ = 0 the quartic has the exact root s = 0, which cancels
/// against the numerator; only the three genuine poles are kept and
/// `removable_zero` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    pub k: f64,
    pub poles: Vec<C64>,
    pub residues: Vec<C64>,
    pub removable_zero: bool,
}

impl PoleSet {
    pub fn residue_sum(&self) -> C64 {
        self.residues.iter().sum()
    }

    /// Vacuum normal wave vectors k_{l,z} for transverse momentum k_par.
    pub fn vacuum_kz(&self, k_par: f64) -> Result<Vec<C64>> {
        self.poles.iter().map(|s| mode_vacuum_kz(*s, k_par)).collect()
    }

    /// The overdamped (eddy-current) pole: real, negative, smallest |s|.
    pub fn diffusive(&self) -> Option<(C64, C64)> {
        self.poles
            .iter()
            .zip(&self.residues)
            .filter(|(s, _)| s.im.abs() <= 1e-12 * s.norm())
            .min_by(|a, b| a.0.norm().total_cmp(&b.0.norm()))
            .map(|(s, r)| (*s, *r))
    }
}

/// Coefficients (highest degree first) of the dispersion quartic
/// s^2 (s^2 + gamma s + omega~^2 + Omega_P^2) + k^2 (s^2 + gamma s + omega~^2).
pub fn dispersion_quartic(params: &MediumParams, k: f64) -> [f64; 5] {
    let g = params.damping;
    let w2 = params.resonance * params.resonance;
    let p2 = params.plasma_freq * params.plasma_freq;
    let k2 = k * k;
    [1.0, g, w2 + p2 + k2, k2 * g, k2 * w2]
}

/// Evaluate a real-coefficient polynomial and its derivative at complex s.
pub fn horner(coeffs: &[f64], s: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs {
        dp = dp * s + p;
        p = p * s + c;
    }
    (p, dp)
}

fn companion_roots(coeffs: &[f64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

pub fn dispersion_poles(params: &MediumParams, k: f64) -> Result<PoleSet> {
    if params.damping <= 0.0 {
        return Err(Error::params("dispersion poles require gamma > 0"));
    }
    if k <= 0.0 || !k.is_finite() {
        return Err(Error::params(format!("dispersion poles require k > 0, got {k}")));
    }
    let quartic = dispersion_quartic(params, k);
    let removable_zero = params.resonance == 0.0;
    let poly: Vec<f64> = if removable_zero {
        quartic[..4].to_vec()
    } else {
        quartic.to_vec()
    };
    let coeff_err = || Error::RootFinder {
        k,
        coefficients: quartic.iter().map(|c| [*c, 0.0]).collect(),
    };

    let mut poles = companion_roots(&poly);
    if poles.len() != poly.len() - 1 || poles.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
        return Err(coeff_err());
    }
    for s in poles.iter_mut() {
        let (p, dp) = horner(&poly, *s);
        if dp != C64::new(0.0, 0.0) {
            *s -= p / dp;
        }
        let scale: f64 = poly
            .iter()
            .rev()
            .enumerate()
            .map(|(i, c)| c.abs() * s.norm().powi(i as i32))
            .sum();
        if horner(&poly, *s).0.norm() > 1e-10 * scale {
            return Err(coeff_err());
        }
    }
    poles.sort_by(|a, b| b.im.total_cmp(&a.im).then(a.re.total_cmp(&b.re)));

    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            let sep = (poles[i] - poles[j]).norm() / poles[i].norm().max(poles[j].norm());
            if sep < 1e-8 {
                return Err(Error::DegenerateRoots { k, separation: sep });
            }
        }
    }

    let g = params.damping;
    let w2 = params.resonance * params.resonance;
    let p2 = params.plasma_freq * params.plasma_freq;
    let ik = C64::new(0.0, k);
    let residues = poles
        .iter()
        .map(|&s| {
            let d = s * s + g * s + w2;
            let num = if removable_zero {
                // numerator divided by the common factor s
                s * s + g * s + p2 - ik * (s + g)
            } else {
                s * (d + p2) - ik * d
            };
            num / horner(&poly, s).1
        })
        .collect();
    Ok(PoleSet {
        k,
        poles,
        residues,
        removable_zero,
    })
}

/// Small-k approximation of the Drude eddy-current mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EddyMode {
    pub k: f64,
    pub s: C64,
    pub residue: C64,
}

impl EddyMode {
    /// k_z ~ i k sqrt(1 - q^2) for the medium label K_z = k q.
    pub fn vacuum_kz(&self, q: f64) -> C64 {
        C64::new(0.0, self.k * (1.0 - q * q).max(0.0).sqrt())
    }
}

pub fn eddy_mode_approx(params: &MediumParams, k: f64) -> Result<EddyMode> {
    if params.resonance != 0.0 || params.damping <= 0.0 {
        return Err(Error::params("eddy-current mode requires a Drude medium"));
    }
    let k2 = k * k;
    let p2 = params.plasma_freq * params.plasma_freq;
    Ok(EddyMode {
        k,
        s: C64::new(-params.damping * k2 / (k2 + p2), 0.0),
        residue: C64::new((p2 - k2) / (2.0 * (k2 + p2)), 0.0),
    })
}

/// [R_TE + R_TM (k_par^2 - k_z^2)/omega^2] e^{2 i k_z z} for right-incident waves.
pub fn reflection_integrand(params: &MediumParams, omega: f64, k_par: f64, z: f64) -> Result<C64> {
    reflection_integrand_eps(epsilon_real(params, omega)?, omega, k_par, z)
}

pub fn reflection_integrand_eps(eps: C64, omega: f64, k_par: f64, z: f64) -> Result<C64> {
    let w = wave_decompose(omega, k_par);
    let f = fresnel_from_wavevectors(eps, w.k_z, w.medium_kz(eps))?;
    let pol = (k_par * k_par - w.k_z * w.k_z) / (omega * omega);
    Ok((f.r_te + f.r_tm * pol) * (2.0 * I * w.k_z * z).exp())
}

/// Analytic z-derivative of [`reflection_integrand`].
pub fn reflection_integrand_dz(params: &MediumParams, omega: f64, k_par: f64, z: f64) -> Result<C64> {
    let w = wave_decompose(omega, k_par);
    Ok(2.0 * I * w.k_z * reflection_integrand(params, omega, k_par, z)?)
}

/// Closed forms of (Im R_TE, Im R_TM) for an evanescent wave, q > 1.
pub fn im_fresnel_evanescent(params: &MediumParams, omega: f64, q: f64) -> Result<(f64, f64)> {
    if q <= 1.0 {
        return Err(Error::domain(format!("evanescent sector requires q > 1, got {q}")));
    }
    Ok(im_fresnel_evanescent_eps(epsilon_real(params, omega)?, omega, q))
}

pub fn im_fresnel_evanescent_eps(eps: C64, omega: f64, q: f64) -> (f64, f64) {
    let w = wave_decompose(omega, q * omega);
    let kappa = w.k_z.im;
    let kzp = w.medium_kz(eps);
    let k2 = w.k_par * w.k_par;
    let te = 2.0 * kappa * kzp.re / (w.k_z + kzp).norm_sqr();
    let tm = 2.0 * kappa * kzp.re * (k2 + kzp.norm_sqr()) / (omega * omega * (eps * w.k_z + kzp).norm_sqr());
    (te, tm)
}

/// Dimensionless evanescent bracket Im R_TE + (2q^2 - 1) Im R_TM, the
/// q-integrand of the evanescent force apart from q and the exponential.
pub fn evanescent_bracket(eps: C64, q: f64) -> f64 {
    evanescent_bracket_sinh(eps, ((q - 1.0) * (q + 1.0)).max(0.0).sqrt())
}

/// [`evanescent_bracket`] parametrized by sh = sqrt(q^2 - 1) = sinh(u), which
/// keeps the critical-angle region q - 1 ~ |eps - 1| resolved.
pub fn evanescent_bracket_sinh(eps: C64, sh: f64) -> f64 {
    let q2 = 1.0 + sh * sh;
    let kz = C64::new(0.0, sh);
    let kzp = sqrt_upper((eps - 1.0) - sh * sh);
    let common = 2.0 * sh * kzp.re;
    let te = common / (kz + kzp).norm_sqr();
    let tm = common * (q2 + kzp.norm_sqr()) / (eps * kz + kzp).norm_sqr();
    te + (2.0 * q2 - 1.0) * tm
}

/// u = asinh sqrt|eps - 1|, where the evanescent bracket of a nearly
/// transparent medium peaks; None when that is not close to the light line.
pub fn critical_u(eps: C64) -> Option<f64> {
    let d = (eps - 1.0).norm();
    (d < 1e-2 && d > 0.0).then(|| d.sqrt().asinh())
}

/// sqrt(Re eps - q^2 + |eps - q^2|) [1/|r1 + r2|^2 + w (q^2 + |eps - q^2|)/|eps r1 + r2|^2]
/// with r1 = sqrt(1 - q^2), r2 = sqrt(eps - q^2) and TM weight `w`.
fn appendix_bracket(eps: C64, q: f64, tm_weight: f64) -> f64 {
    let q2 = q * q;
    let r1 = sqrt_upper(C64::new(1.0 - q2, 0.0));
    let r2 = sqrt_upper(eps - q2);
    let a = (eps - q2).norm();
    let root = (eps.re - q2 + a).max(0.0).sqrt();
    root * (1.0 / (r1 + r2).norm_sqr() + tm_weight * (q2 + a) / (eps * r1 + r2).norm_sqr())
}

/// Propagating-wave q-integrand of the nonequilibrium kernel,
/// q sqrt(1 - q^2) x bracket, on q in (0, 1).
pub fn propagating_kernel(eps: C64, q: f64) -> f64 {
    q * (1.0 - q * q).max(0.0).sqrt() * appendix_bracket(eps, q, 1.0)
}

/// Integral over q in (0, 1) of [`propagating_kernel`], via q = sin(theta).
pub fn propagating_kernel_integral(eps: C64, tol: Tolerance) -> Result<f64> {
    let est = integrate(
        |t: f64| propagating_kernel(eps, t.sin()) * t.cos(),
        &[0.0, std::f64::consts::FRAC_PI_2],
        tol,
    );
    if !est.converged {
        return Err(Error::Quadrature {
            what: "propagating q-integral".into(),
            value: est.value,
            error: est.error,
        });
    }
    Ok(est.value)
}

/// Upper limit in u = acosh(q) for evanescent integrals with envelope
/// e^{-2 z omega sqrt(q^2 - 1)}: q_max = 1 + 30/(2 z omega).
pub fn evanescent_u_max(omega: f64, z: f64) -> f64 {
    (1.0 + 15.0 / (z * omega)).acosh()
}

/// Surface-plasmon-polariton position in u = acosh(q), when Re eps < -1.
pub fn spp_u(eps: C64) -> Option<f64> {
    if eps.re < -1.0 {
        let q2 = (eps / (eps + 1.0)).re;
        if q2 > 1.0 {
            return Some(q2.sqrt().acosh());
        }
    }
    None
}

/// Convolutions (I_EW, I_PW) of left-incident Green's functions over the
/// medium at the atom position, per unit Im eps removed as written:
///
/// I_EW = -(sqrt2/4pi) int_1^inf dq q omega^3|omega| sqrt(q^2-1)/Im eps * B_EW e^{-2z|omega|sqrt(q^2-1)}
/// I_PW = -(i sqrt2/4pi) int_0^1 dq q omega^4 sqrt(1-q^2)/Im eps * B_PW
pub fn greens_convolution(params: &MediumParams, omega: f64, z: f64, tol: Tolerance) -> Result<(C64, C64)> {
    if z <= 0.0 {
        return Err(Error::domain("greens_convolution requires z > 0"));
    }
    if params.damping <= 0.0 {
        return Err(Error::params("greens_convolution requires gamma > 0"));
    }
    let eps = epsilon_real(params, omega)?;
    let pre = std::f64::consts::SQRT_2 / (4.0 * std::f64::consts::PI) * omega.powi(3) * omega.abs() / eps.im;
    let w = omega.abs();
    let umax = evanescent_u_max(w, z);
    let mut interior = vec![];
    if let Some(u) = spp_u(eps) {
        interior.push(u);
    }
    let ew = integrate(
        |u: f64| {
            let q = u.cosh();
            let s = u.sinh();
            q * s * s * appendix_bracket(eps, q, 2.0 * q * q - 1.0) * (-2.0 * z * w * s).exp()
        },
        &breakpoints(0.0, umax, &interior),
        tol,
    );
    if !ew.converged {
        return Err(Error::Quadrature {
            what: "I_EW".into(),
            value: ew.value,
            error: ew.error,
        });
    }
    let pw = propagating_kernel_integral(eps, tol)?;
    let pre_pw = std::f64::consts::SQRT_2 / (4.0 * std::f64::consts::PI) * omega.powi(4) / eps.im;
    Ok((C64::new(-pre * ew.value, 0.0), C64::new(0.0, -pre_pw * pw)))
}
