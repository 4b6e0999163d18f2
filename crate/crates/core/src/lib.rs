//! Atom-surface fluctuation forces near a dissipative dielectric half-space.
//!
//! Covers the equilibrium Casimir-Polder force, the nonequilibrium steady
//! state with medium and field at different temperatures, and the transient
//! force from the diffusive eddy-current mode of a Drude metal. Internal
//! arithmetic is in natural units with eV as the base unit (see [`units`]);
//! the public force entry points take SI scenarios and return newtons.

pub mod cli_io;
pub mod error;
pub mod force;
pub mod halfspace;
pub mod medium;
pub mod oracles;
pub mod parallel;
pub mod quad;
pub mod units;

pub use error::{Error, Result};
pub use force::{AtomParams, ForceBreakdown, ForceOptions, Scenario};
pub use medium::{MediumParams, Model};
