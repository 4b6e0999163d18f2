//! Independent reference computations used by the test suites and the
//! `validate` command: Durand-Kerner roots, fixed-rule quadrature
//! baselines, the Green's-function identity, Kramers-Kronig and
//! finite-difference derivative checks.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::force::equilibrium::{omega_max, resonant_partition, spectral_marks};
use crate::force::{AtomParams, ForceOptions};
use crate::halfspace::{evanescent_u_max, fresnel_from_wavevectors, spp_u, wave_decompose};
use crate::medium::{coth_half, epsilon_real, MediumParams};
use crate::quad::{breakpoints, gauss_legendre, integrate_with_partition, Tolerance};
use crate::units;

type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: String,
    pub primary: Vec<f64>,
    pub oracle: Vec<f64>,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, primary: Vec<f64>, oracle: Vec<f64>, rel_error: f64, tolerance: f64) -> Self {
        OracleReport {
            quantity: quantity.into(),
            primary,
            oracle,
            rel_error,
            tolerance,
            pass: rel_error <= tolerance,
        }
    }

    /// Report comparing two scalars by |a - b| / |b|.
    pub fn scalar(quantity: impl Into<String>, primary: f64, oracle: f64, tolerance: f64) -> Self {
        let rel = rel_diff(primary, oracle);
        Self::new(quantity, vec![primary], vec![oracle], rel, tolerance)
    }
}

/// |a - b| / |b|, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Roots of a complex polynomial (highest degree first) by Durand-Kerner
/// iteration from the points R (0.4 + 0.9i)^j.
pub fn root_oracle(coeffs: &[C64]) -> Result<Vec<C64>> {
    let lead = coeffs[0];
    if lead == C64::new(0.0, 0.0) {
        return Err(Error::domain("leading coefficient must be nonzero"));
    }
    let c: Vec<C64> = coeffs.iter().map(|x| x / lead).collect();
    let n = c.len() - 1;
    let radius = 1.0 + c[1..].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|j| radius * seed.powu(j as u32 + 1)).collect();
    let eval = |s: C64| c.iter().fold(C64::new(0.0, 0.0), |acc, x| acc * s + x);
    let weight = |s: C64| c.iter().rev().enumerate().map(|(i, x)| x.norm() * s.norm().powi(i as i32)).sum::<f64>();
    let mut settled = 0;
    for _ in 0..20_000 {
        let mut biggest = 0.0f64;
        for i in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den == C64::new(0.0, 0.0) {
                den = C64::new(f64::EPSILON, 0.0);
            }
            let d = eval(z[i]) / den;
            z[i] -= d;
            let scale = z[i].norm();
            biggest = biggest.max(if scale > 0.0 { d.norm() / scale } else { d.norm() });
        }
        if biggest <= 4.0 * f64::EPSILON {
            settled += 1;
            // a few extra sweeps once corrections hit rounding level
            if settled > 3 {
                break;
            }
        }
    }
    // componentwise backward error, or the normwise form ||c|| max(1, |s|)^n
    // that still applies to a root at 0 of a polynomial with c_n = 0
    let norm = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for s in &z {
        let r = eval(*s).norm();
        let normwise = norm * s.norm().max(1.0).powi(n as i32);
        if r > 1e-12 * weight(*s).max(f64::MIN_POSITIVE) && r > 1e-12 * normwise {
            return Err(Error::domain(format!("Durand-Kerner did not converge (root {s})")));
        }
    }
    z.sort_by(|a, b| b.im.total_cmp(&a.im).then(a.re.total_cmp(&b.re)));
    Ok(z)
}

/// Integration range for [`quadrature_baseline`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<'a> {
    /// Sorted break points of a finite range.
    Finite(&'a [f64]),
    /// [a, inf) mapped by x = a + scale t/(1 - t).
    SemiInfinite { a: f64, scale: f64 },
}

const BASELINE_ORDER: usize = 12;
const BASELINE_BUDGET: usize = 400_000;

/// Fixed-rule reference: the adaptive engine's final partition, each
/// segment split in four, each piece integrated by 12-point Gauss-Legendre.
pub fn quadrature_baseline<F: Fn(f64) -> f64>(f: F, domain: Domain, rel_tol: f64) -> Result<f64> {
    match domain {
        Domain::Finite(points) => baseline_finite(&f, points, rel_tol),
        Domain::SemiInfinite { a, scale } => {
            let g = |t: f64| {
                let u = 1.0 - t;
                let v = f(a + scale * t / u);
                if v == 0.0 {
                    0.0
                } else {
                    v * scale / (u * u)
                }
            };
            baseline_finite(&g, &[0.0, 1.0], rel_tol)
        }
    }
}

fn baseline_finite<F: Fn(f64) -> f64>(f: &F, points: &[f64], rel_tol: f64) -> Result<f64> {
    let (_, parts) = integrate_with_partition(f, points, Tolerance::rel(rel_tol).with_abs(1e-300));
    if parts.len() * 4 > BASELINE_BUDGET {
        return Err(Error::domain("quadrature baseline budget exhausted"));
    }
    let (x, w) = gauss_legendre(BASELINE_ORDER);
    let mut sum = 0.0;
    for (a, b) in parts {
        let h = (b - a) / 4.0;
        for j in 0..4 {
            let lo = a + h * j as f64;
            let c = lo + 0.5 * h;
            let mut s = 0.0;
            for (xi, wi) in x.iter().zip(&w) {
                s += wi * f(c + 0.5 * h * xi);
            }
            sum += 0.5 * h * s;
        }
    }
    Ok(sum)
}

/// Evanescent field-fluctuation force in eV^2 computed with the fixed-rule
/// baseline at both quadrature levels.
pub fn ew_force_baseline(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    temperature: f64,
    rel_tol: f64,
) -> Result<f64> {
    let beta = units::beta(temperature);
    let inner_tol = (rel_tol * 1e-2).max(1e-13);
    let h = |w: f64| -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        let Ok(eps) = epsilon_real(medium, w) else { return f64::NAN };
        let umax = evanescent_u_max(w, z);
        let mut interior = vec![(1.0 + 0.5 / (z * w)).acosh()];
        if let Some(u) = spp_u(eps) {
            interior.push(u);
        }
        let q = quadrature_baseline(
            |u: f64| {
                let q = u.cosh();
                let s = u.sinh();
                q * s * crate::halfspace::evanescent_bracket(eps, q) * (-2.0 * z * w * s).exp()
            },
            Domain::Finite(&breakpoints(0.0, umax, &interior)),
            inner_tol,
        )
        .unwrap_or(f64::NAN);
        -(1.0 / PI) * w.powi(4) * coth_half(beta, w) * q
    };
    let w0 = atom.resonance;
    let t = units::temperature_to_natural(temperature);
    let marks = spectral_marks(medium, z, &[t]);
    let (near_pts, far_pts) = resonant_partition(atom, omega_max(medium, atom, z), &marks);
    let near = quadrature_baseline(
        |u: f64| atom.re_alpha(w0 - u) * h(w0 - u) + atom.re_alpha(w0 + u) * h(w0 + u),
        Domain::Finite(&near_pts),
        rel_tol,
    )?;
    let far = quadrature_baseline(|w: f64| atom.re_alpha(w) * h(w), Domain::Finite(&far_pts), rel_tol)?;
    let v = near + far;
    if !v.is_finite() {
        return Err(Error::domain("baseline evanescent force produced a non-finite value"));
    }
    Ok(v)
}

/// Both sides of the Green's-function identity at (omega, z):
/// the medium-volume integral of Im eps |G_L|^2 (transmission route, with a
/// numerical depth integral) and Im Tr G_L(z, z) from reflection
/// coefficients. Returns ((lhs_pw, lhs_ew), (rhs_pw, rhs_ew)).
pub fn gfid_sides(params: &MediumParams, omega: f64, z: f64, rel_tol: f64) -> Result<((f64, f64), (f64, f64))> {
    if params.damping <= 0.0 || z <= 0.0 {
        return Err(Error::params("identity check requires gamma > 0 and z > 0"));
    }
    let eps = epsilon_real(params, omega)?;
    gfid_sides_eps(eps, omega, z, rel_tol)
}

pub fn gfid_sides_eps(eps: C64, omega: f64, z: f64, rel_tol: f64) -> Result<((f64, f64), (f64, f64))> {
    let w2 = omega * omega;
    let tol = Tolerance::rel(rel_tol).with_abs(1e-300);
    let failed = std::cell::Cell::new(false);

    // Transmission route, integrand per k dk. By reciprocity the propagator
    // from a medium point to the atom is the transmitted wave of a source at
    // the atom, amplitude t/(2 k_z) times the two polarization vectors.
    let lhs_k = |k: f64| -> f64 {
        let wd = wave_decompose(omega, k);
        let kz = wd.medium_kz(eps);
        let Ok(f) = fresnel_from_wavevectors(eps, wd.k_z, kz) else {
            failed.set(true);
            return 0.0;
        };
        let pol_v = (k * k + wd.k_z.norm_sqr()) / w2;
        let pol_m = (k * k + kz.norm_sqr()) / (eps.norm() * w2);
        let amp = f.t_te.norm_sqr() + f.t_tm.norm_sqr() * pol_v * pol_m;
        let decay = 2.0 * kz.im;
        // depth integral int_{-inf}^0 e^{2 Im K_z z'} dz'
        let depth = integrate_with_partition(
            |t: f64| {
                let u = 1.0 - t;
                (-t / u).exp() / (decay * u * u)
            },
            &[0.0, 1.0],
            tol,
        )
        .0;
        if !depth.converged {
            failed.set(true);
        }
        eps.im * w2 * w2 / (16.0 * PI * PI) * 2.0 * PI * amp / wd.k_z.norm_sqr()
            * (-2.0 * wd.k_z.im * z).exp()
            * depth.value
    };
    // Reflection route.
    let rhs_k = |k: f64| -> f64 {
        let wd = wave_decompose(omega, k);
        let Ok(f) = fresnel_from_wavevectors(eps, wd.k_z, wd.medium_kz(eps)) else {
            failed.set(true);
            return 0.0;
        };
        if k < omega {
            let kz = wd.k_z.re;
            w2 / (16.0 * PI * PI) * 2.0 * PI / kz * ((1.0 - f.r_te.norm_sqr()) + (1.0 - f.r_tm.norm_sqr()))
        } else {
            let kappa = wd.k_z.im;
            let q2 = k * k / w2;
            let im_b = f.r_te.im + (2.0 * q2 - 1.0) * f.r_tm.im;
            w2 / (8.0 * PI * PI) * 2.0 * PI / kappa * im_b * (-2.0 * kappa * z).exp()
        }
    };
    let pw = |g: &dyn Fn(f64) -> f64| {
        integrate_with_partition(|th: f64| g(omega * th.sin()) * w2 * th.sin() * th.cos(), &[0.0, FRAC_PI_2], tol).0
    };
    let umax = evanescent_u_max(omega, z);
    let mut interior = vec![(1.0 + 0.5 / (z * omega)).acosh()];
    if let Some(u) = spp_u(eps) {
        interior.push(u);
    }
    let pts = breakpoints(0.0, umax, &interior);
    let ew = |g: &dyn Fn(f64) -> f64| {
        integrate_with_partition(|u: f64| g(omega * u.cosh()) * w2 * u.cosh() * u.sinh(), &pts, tol).0
    };
    let parts = [pw(&lhs_k), ew(&lhs_k), pw(&rhs_k), ew(&rhs_k)];
    if failed.get() || parts.iter().any(|e| !e.converged) {
        return Err(Error::Quadrature {
            what: "Green's-function identity".into(),
            value: parts[0].value,
            error: parts[0].error,
        });
    }
    Ok(((parts[0].value, parts[1].value), (parts[2].value, parts[3].value)))
}

/// Green's-function identity check at 1e-3 relative.
pub fn gfid_verify(params: &MediumParams, omega: f64, z: f64) -> Result<OracleReport> {
    let ((lp, le), (rp, re)) = gfid_sides(params, omega, z, 1e-9)?;
    let lhs = lp + le;
    let rhs = rp + re;
    Ok(OracleReport::new(
        format!("GF identity omega={omega} z={z}"),
        vec![lhs, lp, le],
        vec![rhs, rp, re],
        rel_diff(lhs, rhs),
        1e-3,
    ))
}

/// Richardson-extrapolated central differences of `f` at `x`, compared with
/// `analytic` (tolerance 1e-6). The ladder halves `h0` until successive
/// extrapolations agree or rounding noise takes over.
pub fn finite_diff_check<F: Fn(f64) -> C64>(
    quantity: &str,
    f: F,
    x: f64,
    analytic: C64,
    h0: f64,
) -> Result<OracleReport> {
    const ROWS: usize = 10;
    let mut table: Vec<Vec<C64>> = Vec::new();
    let mut best: Option<C64> = None;
    let mut last_change = f64::INFINITY;
    let scale = f(x).norm().max(analytic.norm()).max(f64::MIN_POSITIVE);
    for i in 0..ROWS {
        let h = h0 / 2f64.powi(i as i32);
        let mut row = vec![(f(x + h) - f(x - h)) / (2.0 * h)];
        for j in 1..=i {
            let p = 4f64.powi(j as i32);
            let v = (p * row[j - 1] - table[i - 1][j - 1]) / (p - 1.0);
            row.push(v);
        }
        if i > 0 {
            let change = (row[i] - table[i - 1][i - 1]).norm();
            if change <= 1e-12 * scale.max(row[i].norm()) {
                best = Some(row[i]);
                break;
            }
            if change > last_change && i > 2 {
                // noise floor: keep the previous diagonal entry
                if last_change <= 1e-7 * row[i].norm().max(scale) {
                    best = Some(table[i - 1][i - 1]);
                    break;
                }
                return Err(Error::domain(format!(
                    "finite-difference ladder for {quantity} hit the noise floor before converging"
                )));
            }
            last_change = change;
        }
        table.push(row);
    }
    let est = best
        .or_else(|| table.last().and_then(|r| r.last().copied()))
        .unwrap_or(C64::new(0.0, 0.0));
    let denom = analytic.norm();
    let rel = if denom == 0.0 {
        est.norm() / scale
    } else {
        (est - analytic).norm() / denom
    };
    Ok(OracleReport::new(
        quantity,
        vec![analytic.re, analytic.im],
        vec![est.re, est.im],
        rel,
        1e-6,
    ))
}

/// Re eps(omega) - 1 from (2/pi) PV int_0^inf x Im eps(x)/(x^2 - omega^2) dx,
/// with the singularity subtracted (the PV of 1/(x^2 - omega^2) over (0, inf) is zero).
pub fn kramers_kronig_re_eps(params: &MediumParams, omega: f64, rel_tol: f64) -> Result<f64> {
    if params.damping <= 0.0 {
        return Err(Error::params("Kramers-Kronig check requires gamma > 0"));
    }
    let g = |x: f64| -> f64 {
        if x == 0.0 {
            // x Im eps(x) is finite at 0 for a damped medium
            let p2 = params.plasma_freq * params.plasma_freq;
            let w2 = params.resonance * params.resonance;
            return if w2 == 0.0 { p2 / params.damping } else { 0.0 };
        }
        x * epsilon_real(params, x).map(|e| e.im).unwrap_or(f64::NAN)
    };
    let g0 = g(omega);
    let f = |x: f64| (g(x) - g0) / ((x - omega) * (x + omega));
    let mut marks = vec![params.damping, omega];
    if params.resonance > 0.0 {
        marks.push(params.resonance);
    }
    let tol = Tolerance::rel(rel_tol).with_abs(1e-300);
    let (a, _) = integrate_with_partition(f, &breakpoints(0.0, 2.0 * omega, &marks), tol);
    let b = crate::quad::integrate_to_infinity(f, 2.0 * omega, omega, tol);
    if !a.converged || !b.converged {
        return Err(Error::Quadrature {
            what: "Kramers-Kronig transform".into(),
            value: a.value + b.value,
            error: a.error + b.error,
        });
    }
    Ok(2.0 / PI * (a.value + b.value))
}

/// Angular frequency of the largest non-DC FFT peak of uniformly sampled
/// data (mean removed), with the bin width.
pub fn fft_peak_frequency(samples: &[f64], dt: f64) -> (f64, f64) {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<C64> = samples.iter().map(|x| C64::new(x - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let (k, _) = buf[1..n / 2]
        .iter()
        .enumerate()
        .map(|(i, v)| (i + 1, v.norm()))
        .fold((0, -1.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let bin = 2.0 * PI / (n as f64 * dt);
    (k as f64 * bin, bin)
}

/// Checks that the equilibrium total equals the real-frequency sum of the
/// evanescent and propagating field-fluctuation parts plus the resonant
/// atom-fluctuation term. Practical for z up to roughly 50 nm.
pub fn equilibrium_routes_report(
    medium: &MediumParams,
    atom: &AtomParams,
    z: f64,
    temperature: f64,
    opts: &ForceOptions,
    tolerance: f64,
) -> Result<OracleReport> {
    use crate::force::{atom_fluctuation_term, equilibrium_force_natural, ew_force_natural, ff_pw_real_axis};
    let (total, _) = equilibrium_force_natural(medium, atom, z, temperature, opts)?;
    let (ew, _) = ew_force_natural(medium, atom, z, temperature, opts)?;
    let pw = ff_pw_real_axis(medium, atom, z, temperature, opts)?;
    let af = atom_fluctuation_term(medium, atom, z, temperature, opts)?;
    let real_axis = ew + pw + af;
    Ok(OracleReport::new(
        format!("equilibrium imaginary vs real frequency z={z}"),
        vec![total],
        vec![real_axis, ew, pw, af],
        rel_diff(total, real_axis),
        tolerance,
    ))
}
