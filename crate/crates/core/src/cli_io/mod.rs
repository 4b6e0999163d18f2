//! Scenario files, result tables and the command dispatcher behind the
//! `noneqcp` binary.

mod run;
mod scenario;
mod table;

pub use run::{fig2_tables, run, validate_suite, Fig2Config, Output};
pub use scenario::{
    convert_units, parse_resonance, AtomSection, FieldSection, GeometrySection, Grid, MediumSection, Mode,
    ResolvedScenario, RunSection, ScenarioFile, Spacing, TimeSection, Tolerances,
};
pub use table::{build_tag, constants_header, emit, Format, ResultTable};
