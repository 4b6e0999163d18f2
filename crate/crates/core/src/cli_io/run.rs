use num_complex::Complex64;

use super::scenario::{Mode, ResolvedScenario};
use super::table::{build_tag, constants_header, ResultTable};
use crate::error::{Error, Result};
use crate::force::{
    dyn_eddy_force_closed, dyn_eddy_force_integral, ew_force_natural, neq_correction, steady_total_force, Scenario,
};
use crate::halfspace::{dispersion_poles, dispersion_quartic, reflection_integrand, reflection_integrand_dz};
use crate::medium::{epsilon_real, Model};
use crate::oracles::{self, OracleReport};
use crate::parallel::{self, Execution};

/// Tables produced by one run. `suffix` names the file a table goes to when
/// a run produces more than one.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub tables: Vec<(Option<String>, ResultTable)>,
    /// Set when a validation report failed.
    pub validation_failed: bool,
}

const STEADY_COLUMNS: [&str; 8] = [
    "z_m",
    "f_total_N",
    "f_eq_N",
    "f_neq_ew_N",
    "f_neq_pw_N",
    "f_ff_ew_N",
    "f_ff_pw_N",
    "achieved_tol",
];

fn with_context<T>(what: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::scenario(format!("{what}: {e}")))
}

fn header(table: &mut ResultTable, mode: Mode, resolved: &ResolvedScenario) -> Result<()> {
    table.push_header("mode", mode.name());
    table.push_header("build", build_tag());
    table.push_header("scenario", serde_json::to_string(resolved)?);
    for (k, v) in constants_header() {
        table.push_header(k, v);
    }
    Ok(())
}

/// Append rows, with their distinct warnings as header entries.
fn push_rows(t: &mut ResultTable, rows: Vec<Result<(Vec<f64>, Vec<String>)>>) -> Result<()> {
    let mut warnings: Vec<String> = Vec::new();
    let mut data = Vec::new();
    for r in rows {
        let (row, w) = r?;
        for w in w {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        data.push(row);
    }
    for w in warnings {
        t.push_header("warning", w);
    }
    for r in data {
        t.push_row(r);
    }
    Ok(())
}

/// Evaluate `mode` over the scenario grids.
pub fn run(mode: Mode, resolved: &ResolvedScenario, exec: Execution) -> Result<Output> {
    let base = resolved.base;
    let single = |t: ResultTable| Output {
        tables: vec![(None, t)],
        validation_failed: false,
    };
    match mode {
        Mode::Eq | Mode::Steady => {
            let rows = parallel::map(&resolved.z_grid, exec, |&z| -> Result<(Vec<f64>, Vec<String>)> {
                let s = base.with_z(z);
                let ctx = format!("{} at z = {z:e} m", mode.name());
                // steady with T_M = T_E composes eq + 0 + 0, so both modes share columns
                let b = if mode == Mode::Eq {
                    with_context(&ctx, steady_total_force(&s.with_temperatures(s.field_temperature, s.field_temperature)))?
                } else {
                    with_context(&ctx, steady_total_force(&s))?
                };
                let c = |k: &str| b.components[k];
                let row = vec![
                    z,
                    b.f_total,
                    c("eq"),
                    c("neq_ew"),
                    c("neq_pw"),
                    c("ff_ew"),
                    c("ff_pw"),
                    b.worst_achieved_tol(),
                ];
                let warnings = b.warnings.iter().map(|w| format!("z = {z:e} m: {w}")).collect();
                Ok((row, warnings))
            });
            let mut t = ResultTable::new(mode.name(), &STEADY_COLUMNS);
            header(&mut t, mode, resolved)?;
            push_rows(&mut t, rows)?;
            Ok(single(t))
        }
        Mode::Neq => {
            let rows = parallel::map(&resolved.z_grid, exec, |&z| -> Result<Vec<f64>> {
                let n = with_context(&format!("neq at z = {z:e} m"), neq_correction(&base.with_z(z)))?;
                Ok(vec![z, n.ew, n.pw, n.ew_rel_err])
            });
            let mut t = ResultTable::new("neq", &["z_m", "f_neq_ew_N", "f_neq_pw_N", "achieved_tol"]);
            header(&mut t, mode, resolved)?;
            for r in rows {
                t.push_row(r?);
            }
            Ok(single(t))
        }
        Mode::Dyn => {
            let pts: Vec<(f64, f64)> = resolved
                .z_grid
                .iter()
                .flat_map(|&z| resolved.tau_grid.iter().map(move |&tau| (z, tau)))
                .collect();
            let rows = parallel::map(&pts, exec, |&(z, tau)| -> Result<(Vec<f64>, Vec<String>)> {
                let s = base.with_z(z).with_tau(tau);
                let ctx = format!("dyn at z = {z:e} m, tau = {tau:e} s");
                let i = with_context(&ctx, dyn_eddy_force_integral(&s))?;
                let c = with_context(&ctx, dyn_eddy_force_closed(&s))?;
                Ok((
                    vec![z, tau, i.value, c.value, c.mean, c.envelope_upper, c.envelope_lower, i.rel_err],
                    i.warnings,
                ))
            });
            let mut t = ResultTable::new(
                "dyn",
                &[
                    "z_m",
                    "tau_s",
                    "f_integral_N",
                    "f_closed_N",
                    "f_mean_N",
                    "envelope_upper_N",
                    "envelope_lower_N",
                    "achieved_tol",
                ],
            );
            header(&mut t, mode, resolved)?;
            push_rows(&mut t, rows)?;
            Ok(single(t))
        }
        Mode::Fig2 => {
            let (space, time) = fig2_tables(&base, &Fig2Config::default(), exec)?;
            let mut out = Vec::new();
            for (suffix, mut t) in [("space", space), ("time", time)] {
                let mut h = std::mem::take(&mut t.header);
                header(&mut t, mode, resolved)?;
                t.header.append(&mut h);
                out.push((Some(suffix.to_string()), t));
            }
            Ok(Output {
                tables: out,
                validation_failed: false,
            })
        }
        Mode::Validate => {
            let reports = validate_suite(&base, exec)?;
            let mut t = ResultTable::new("validate", &["index", "primary", "oracle", "rel_error", "tolerance", "pass"]);
            header(&mut t, mode, resolved)?;
            let mut failed = false;
            for (i, r) in reports.iter().enumerate() {
                t.push_header(format!("report.{i}"), r.quantity.clone());
                failed |= !r.pass;
                t.push_row(vec![
                    i as f64,
                    r.primary[0],
                    r.oracle[0],
                    r.rel_error,
                    r.tolerance,
                    if r.pass { 1.0 } else { 0.0 },
                ]);
            }
            Ok(Output {
                tables: vec![(None, t)],
                validation_failed: failed,
            })
        }
    }
}

/// Grids for the two time-dependent force tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Config {
    /// Distances in meters for the spatial table.
    pub z_grid: Vec<f64>,
    /// Times in seconds, one mean-force column each.
    pub taus: Vec<f64>,
    /// Distance in meters for the time table.
    pub z_time: f64,
    /// Times in seconds for the time table.
    pub tau_grid: Vec<f64>,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Fig2Config {
            z_grid: (0..=45).map(|i| (0.5 + 0.1 * i as f64) * 1e-6).collect(),
            taus: vec![1e-6, 2e-6, 3e-6, 4e-6],
            z_time: 1e-6,
            tau_grid: (0..=70).map(|i| (0.5 + 0.05 * i as f64) * 1e-6).collect(),
        }
    }
}

/// Mean eddy-current force versus z at several times, and mean with
/// envelope versus time at one distance.
pub fn fig2_tables(base: &Scenario, cfg: &Fig2Config, exec: Execution) -> Result<(ResultTable, ResultTable)> {
    let mut cols = vec!["z_m".to_string()];
    cols.extend(cfg.taus.iter().map(|t| format!("mean_tau_{:.0}us_N", t * 1e6)));
    let rows = parallel::map(&cfg.z_grid, exec, |&z| -> Result<Vec<f64>> {
        let mut row = vec![z];
        for &tau in &cfg.taus {
            let s = base.with_z(z).with_tau(tau);
            row.push(with_context(&format!("fig2 at z = {z:e} m"), dyn_eddy_force_closed(&s))?.mean);
        }
        Ok(row)
    });
    let mut space = ResultTable {
        name: "fig2_space".into(),
        header: Vec::new(),
        columns: cols,
        rows: Vec::new(),
    };
    space.push_header("note", "mean force with the cosine term dropped");
    for r in rows {
        space.push_row(r?);
    }

    let rows = parallel::map(&cfg.tau_grid, exec, |&tau| -> Result<Vec<f64>> {
        let s = base.with_z(cfg.z_time).with_tau(tau);
        let c = with_context(&format!("fig2 at tau = {tau:e} s"), dyn_eddy_force_closed(&s))?;
        Ok(vec![tau, c.mean, c.envelope_upper, c.envelope_lower])
    });
    let mut time = ResultTable::new("fig2_time", &["tau_s", "mean_N", "envelope_upper_N", "envelope_lower_N"]);
    time.push_header("z_m", format!("{:e}", cfg.z_time));
    for r in rows {
        time.push_row(r?);
    }
    Ok((space, time))
}

/// Oracle reports for a scenario: dispersion roots, fixed-rule quadrature,
/// Green's-function identity, z-derivative, Kramers-Kronig and the two
/// dynamical-force forms.
pub fn validate_suite(base: &Scenario, exec: Execution) -> Result<Vec<OracleReport>> {
    base.validate()?;
    let medium = base.medium;
    let atom = base.atom;
    let z = base.z_natural();
    let damped = medium.model != Model::Plasma && medium.damping > 0.0;

    type Job<'a> = Box<dyn Fn() -> Result<OracleReport> + Send + Sync + 'a>;
    let mut jobs: Vec<Job> = Vec::new();
    if damped {
        jobs.push(Box::new(move || {
            let k = 1.0;
            let set = dispersion_poles(&medium, k)?;
            let c = dispersion_quartic(&medium, k).map(|x| Complex64::new(x, 0.0));
            let roots = oracles::root_oracle(&c)?;
            let mut worst = 0.0f64;
            for p in &set.poles {
                let d = roots.iter().map(|r| (r - p).norm() / p.norm()).fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
            Ok(OracleReport::new(
                "dispersion poles vs Durand-Kerner at k = 1 eV",
                set.poles.iter().map(|p| p.norm()).collect(),
                roots.iter().map(|p| p.norm()).collect(),
                worst,
                1e-8,
            ))
        }));
        jobs.push(Box::new(move || {
            let t = medium.temperature;
            let (adaptive, _) = ew_force_natural(&medium, &atom, z, t, &base.options)?;
            let fixed = oracles::ew_force_baseline(&medium, &atom, z, t, base.options.rel_tol)?;
            Ok(OracleReport::scalar("evanescent force: adaptive vs fixed rule", adaptive, fixed, 1e-6))
        }));
        jobs.push(Box::new(move || oracles::gfid_verify(&medium, 0.5, z)));
        jobs.push(Box::new(move || {
            let w = 0.5 * medium.plasma_freq.min(atom.resonance);
            let exact = epsilon_real(&medium, w)?.re - 1.0;
            let kk = oracles::kramers_kronig_re_eps(&medium, w, 1e-10)?;
            Ok(OracleReport::scalar("Kramers-Kronig Re eps", exact, kk, 1e-3))
        }));
    }
    jobs.push(Box::new(move || {
        let w = atom.resonance;
        let k = 1.5 * w;
        let analytic = reflection_integrand_dz(&medium, w, k, z)?;
        oracles::finite_diff_check(
            "reflection integrand z-derivative",
            |x| reflection_integrand(&medium, w, k, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
            z,
            analytic,
            0.05 * z,
        )
    }));
    if medium.model == Model::Drude {
        jobs.push(Box::new(move || {
            let i = dyn_eddy_force_integral(base)?;
            let c = dyn_eddy_force_closed(base)?;
            Ok(OracleReport::scalar("eddy force: closed vs integral", c.value, i.value, 0.1))
        }));
    }
    let results = parallel::map(&jobs, exec, |job| job());
    results.into_iter().collect()
}
