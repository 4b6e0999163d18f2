use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::force::{AtomParams, ForceOptions, Scenario};
use crate::medium::{MediumParams, Model};
use crate::units;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Eq,
    Steady,
    Neq,
    Dyn,
    Fig2,
    Validate,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Eq => "eq",
            Mode::Steady => "steady",
            Mode::Neq => "neq",
            Mode::Dyn => "dyn",
            Mode::Fig2 => "fig2",
            Mode::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Lin,
    Log,
}

/// Either an explicit list or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        n: usize,
        #[serde(default = "default_spacing")]
        spacing: Spacing,
    },
}

fn default_spacing() -> Spacing {
    Spacing::Lin
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        match self {
            Grid::List(v) => {
                if v.is_empty() {
                    return Err(Error::scenario("grid list is empty"));
                }
                Ok(v.clone())
            }
            Grid::Range { start, stop, n, spacing } => {
                let (a, b, n) = (*start, *stop, *n);
                if n == 0 {
                    return Err(Error::scenario("grid needs n >= 1"));
                }
                if n == 1 {
                    return Ok(vec![a]);
                }
                let t = |i: usize| i as f64 / (n - 1) as f64;
                match spacing {
                    Spacing::Lin => Ok((0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * t(i) }).collect()),
                    Spacing::Log => {
                        if !(a > 0.0 && b > 0.0) {
                            return Err(Error::scenario("log grid needs positive bounds"));
                        }
                        let (la, lb) = (a.ln(), b.ln());
                        Ok((0..n)
                            .map(|i| {
                                if i == 0 {
                                    a
                                } else if i == n - 1 {
                                    b
                                } else {
                                    (la + (lb - la) * t(i)).exp()
                                }
                            })
                            .collect())
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    pub model: Model,
    #[serde(rename = "plasma_freq_eV")]
    pub plasma_freq_ev: f64,
    #[serde(rename = "damping_eV", default)]
    pub damping_ev: f64,
    #[serde(rename = "resonance_eV", default)]
    pub resonance_ev: f64,
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    pub alpha0_m3: f64,
    /// Resonance with an explicit unit, e.g. "2.35e15 Hz" or "1.547 eV".
    pub resonance: String,
    /// Defaults to 1e-6 of the resonance.
    #[serde(rename = "linewidth_eV", default, skip_serializing_if = "Option::is_none")]
    pub linewidth_ev: Option<f64>,
    /// Defaults to the field temperature.
    #[serde(rename = "temperature_K", default, skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_grid: Option<Grid>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_grid: Option<Grid>,
    #[serde(default)]
    pub t_i_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_rel")]
    pub rel: f64,
}

fn default_rel() -> f64 {
    ForceOptions::default().rel_tol
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rel: default_rel() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// Scenario document as written by users (SI units, explicit unit tags).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub medium: MediumSection,
    pub atom: AtomSection,
    pub field: FieldSection,
    pub geometry: GeometrySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeSection>,
    #[serde(default)]
    pub run: RunSection,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::scenario(format!("{}: {e}", path.display())))
    }

    /// SI description of an internal scenario at a single (z, tau).
    pub fn from_scenario(s: &Scenario) -> Self {
        ScenarioFile {
            medium: MediumSection {
                model: s.medium.model,
                plasma_freq_ev: s.medium.plasma_freq,
                damping_ev: s.medium.damping,
                resonance_ev: s.medium.resonance,
                temperature_k: s.medium.temperature,
            },
            atom: AtomSection {
                alpha0_m3: units::volume_to_si(s.atom.alpha0),
                resonance: format!("{:e} eV", s.atom.resonance),
                linewidth_ev: Some(s.atom.linewidth),
                temperature_k: Some(s.atom.temperature),
            },
            field: FieldSection {
                temperature_k: s.field_temperature,
            },
            geometry: GeometrySection {
                z_m: Some(s.z),
                z_grid: None,
            },
            time: Some(TimeSection {
                tau_s: Some(s.tau),
                tau_grid: None,
                t_i_s: s.t_i,
            }),
            run: RunSection {
                mode: None,
                tolerances: Tolerances {
                    rel: s.options.rel_tol,
                },
            },
        }
    }
}

/// Parse "<value> <unit>" with unit Hz (angular, rad/s), rad/s or eV into eV.
pub fn parse_resonance(text: &str) -> Result<f64> {
    let mut parts = text.split_whitespace();
    let (Some(v), Some(unit), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::scenario(format!(
            "atom resonance {text:?} needs a value and a unit tag (Hz, rad/s or eV)"
        )));
    };
    let v: f64 = v
        .parse()
        .map_err(|_| Error::scenario(format!("atom resonance value {v:?} is not a number")))?;
    let ev = match unit {
        "Hz" | "rad/s" => units::angular_frequency_to_ev(v),
        "eV" => v,
        other => return Err(Error::scenario(format!("unknown unit tag {other:?} for atom resonance"))),
    };
    if !(ev > 0.0 && ev.is_finite()) {
        return Err(Error::scenario(format!("atom resonance must be positive, got {text:?}")));
    }
    Ok(ev)
}

/// A validated scenario in internal units plus the swept axes (SI).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedScenario {
    pub base: Scenario,
    pub z_grid: Vec<f64>,
    pub tau_grid: Vec<f64>,
    pub mode: Option<Mode>,
}

fn axis(name: &str, scalar: Option<f64>, grid: Option<&Grid>, default: Option<f64>) -> Result<Vec<f64>> {
    let pts = match (scalar, grid) {
        (Some(_), Some(_)) => {
            return Err(Error::scenario(format!("give exactly one of {name} scalar or {name} grid")))
        }
        (Some(v), None) => vec![v],
        (None, Some(g)) => g.points()?,
        (None, None) => match default {
            Some(v) => vec![v],
            None => return Err(Error::scenario(format!("missing {name}"))),
        },
    };
    if let Some(bad) = pts.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::scenario(format!("{name} values must be positive, got {bad}")));
    }
    Ok(pts)
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::scenario(format!("{name} must be non-negative and finite, got {v}")))
    }
}

/// SI scenario file to internal units. Rejects negative quantities and
/// ambiguous axes.
pub fn convert_units(file: &ScenarioFile) -> Result<ResolvedScenario> {
    let m = &file.medium;
    non_negative("medium.damping_eV", m.damping_ev)?;
    non_negative("medium.resonance_eV", m.resonance_ev)?;
    non_negative("medium.temperature_K", m.temperature_k)?;
    non_negative("field.temperature_K", file.field.temperature_k)?;
    if m.plasma_freq_ev.is_nan() || m.plasma_freq_ev <= 0.0 {
        return Err(Error::scenario("medium.plasma_freq_eV must be positive"));
    }
    let medium = MediumParams::new(m.model, m.plasma_freq_ev, m.damping_ev, m.resonance_ev, m.temperature_k)?;

    let a = &file.atom;
    if !(a.alpha0_m3 > 0.0 && a.alpha0_m3.is_finite()) {
        return Err(Error::scenario("atom.alpha0_m3 must be positive"));
    }
    let resonance = parse_resonance(&a.resonance)?;
    let linewidth = a.linewidth_ev.unwrap_or(1e-6 * resonance);
    non_negative("atom.linewidth_eV", linewidth)?;
    let t_atom = a.temperature_k.unwrap_or(file.field.temperature_k);
    non_negative("atom.temperature_K", t_atom)?;
    let atom = AtomParams::new(units::volume_to_natural(a.alpha0_m3), resonance, linewidth, t_atom)?;

    let z_grid = axis("z_m", file.geometry.z_m, file.geometry.z_grid.as_ref(), None)?;
    let (tau_grid, t_i) = match &file.time {
        Some(t) => {
            non_negative("time.t_i_s", t.t_i_s)?;
            (axis("tau_s", t.tau_s, t.tau_grid.as_ref(), Some(1e-6))?, t.t_i_s)
        }
        None => (vec![1e-6], 0.0),
    };
    if let Some(bad) = tau_grid.iter().find(|tau| **tau <= t_i) {
        return Err(Error::scenario(format!("tau = {bad} s must exceed t_i = {t_i} s")));
    }
    let options = ForceOptions::new(file.run.tolerances.rel)?;
    let base = Scenario {
        medium,
        atom,
        field_temperature: file.field.temperature_k,
        z: z_grid[0],
        tau: tau_grid[0],
        t_i,
        options,
    };
    base.validate()?;
    Ok(ResolvedScenario {
        base,
        z_grid,
        tau_grid,
        mode: file.run.mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLD_RB: &str = r#"{
        "medium": {"model": "drude", "plasma_freq_eV": 8.9, "damping_eV": 0.0357, "temperature_K": 295},
        "atom": {"alpha0_m3": 4.73e-29, "resonance": "2.35e15 Hz"},
        "field": {"temperature_K": 295},
        "geometry": {"z_grid": {"start": 1e-6, "stop": 5e-6, "n": 5, "spacing": "log"}},
        "time": {"tau_s": 1e-6, "t_i_s": 0},
        "run": {"mode": "eq"}
    }"#;

    #[test]
    fn parses_gold_rubidium() {
        let r = convert_units(&ScenarioFile::from_json(GOLD_RB).unwrap()).unwrap();
        assert!((r.base.atom.resonance - 1.5467981).abs() < 1e-6);
        assert!((r.base.atom.alpha0 / 6.156044e-9 - 1.0).abs() < 1e-6);
        assert_eq!(r.z_grid.len(), 5);
        assert_eq!(r.z_grid[0], 1e-6);
        assert_eq!(r.z_grid[4], 5e-6);
        assert_eq!(r.mode, Some(Mode::Eq));
    }

    #[test]
    fn resonance_needs_unit() {
        assert!(parse_resonance("2.35e15").is_err());
        assert!(parse_resonance("2.35e15 GHz").is_err());
        assert!((parse_resonance("1.547 eV").unwrap() - 1.547).abs() < 1e-15);
    }

    #[test]
    fn rejects_both_scalar_and_grid() {
        let text = GOLD_RB.replace(r#""geometry": {"#, r#""geometry": {"z_m": 1e-6, "#);
        assert!(convert_units(&ScenarioFile::from_json(&text).unwrap()).is_err());
    }

    #[test]
    fn rejects_negative_values() {
        let text = GOLD_RB.replace(r#""damping_eV": 0.0357"#, r#""damping_eV": -0.0357"#);
        assert!(convert_units(&ScenarioFile::from_json(&text).unwrap()).is_err());
        let text = GOLD_RB.replace(r#""temperature_K": 295}"#, r#""temperature_K": -1}"#);
        assert!(convert_units(&ScenarioFile::from_json(&text).unwrap()).is_err());
    }

    #[test]
    fn round_trips_through_si() {
        let s = Scenario::gold_rubidium();
        let back = convert_units(&ScenarioFile::from_scenario(&s)).unwrap().base;
        for (a, b) in [
            (s.atom.alpha0, back.atom.alpha0),
            (s.atom.resonance, back.atom.resonance),
            (s.z, back.z),
            (s.tau, back.tau),
        ] {
            assert!(((a - b) / a).abs() < 1e-15, "{a} vs {b}");
        }
    }
}
