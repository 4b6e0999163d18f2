use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use noneqcp::cli_io::{convert_units, emit, run, Format, Mode, ResolvedScenario, ScenarioFile};
use noneqcp::parallel::Execution;
use noneqcp::{ForceOptions, Scenario};

/// Atom-surface fluctuation forces near a dissipative half-space.
#[derive(Debug, Parser)]
#[command(name = "noneqcp", version = env!("NONEQCP_BUILD_TAG"))]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    mode: Mode,
    /// Scenario JSON file (optional for fig2 and validate, which default to gold/Rb).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output file; fig2 writes <stem>_space and <stem>_time next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Relative quadrature tolerance, overriding the scenario file.
    #[arg(long)]
    tol: Option<f64>,
}

fn default_scenario() -> ResolvedScenario {
    let base = Scenario::gold_rubidium();
    ResolvedScenario {
        base,
        z_grid: vec![base.z],
        tau_grid: vec![base.tau],
        mode: None,
    }
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{suffix}.{ext}"),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn main_inner(cli: Cli) -> noneqcp::Result<bool> {
    let mut resolved = match &cli.scenario {
        Some(path) => convert_units(&ScenarioFile::load(path)?)?,
        None if matches!(cli.mode, Mode::Fig2 | Mode::Validate) => default_scenario(),
        None => {
            return Err(noneqcp::Error::Scenario(format!(
                "mode {} needs --scenario",
                cli.mode.name()
            )))
        }
    };
    if let Some(m) = resolved.mode {
        if m != cli.mode {
            eprintln!(
                "note: scenario file asks for mode {}, running {}",
                m.name(),
                cli.mode.name()
            );
        }
    }
    if let Some(tol) = cli.tol {
        resolved.base.options = ForceOptions::new(tol)?;
    }
    let output = run(cli.mode, &resolved, Execution::Parallel)?;
    for (suffix, table) in &output.tables {
        match (&cli.out, suffix) {
            (Some(path), Some(s)) => emit(table, cli.format, &suffixed(path, s))?,
            (Some(path), None) => emit(table, cli.format, path)?,
            (None, _) => print!("{}", table.render(cli.format)?),
        }
    }
    Ok(!output.validation_failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
