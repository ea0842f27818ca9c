pub mod config;
pub mod curve;
pub mod error;
pub mod lattice;
pub mod luttinger;
pub mod ode;
pub mod polariton;
pub mod quench;
pub mod presets;
pub mod quad;
pub mod reports;
pub mod units;

pub use config::RunConfig;
pub use curve::{CorrelationCurve, CurveMeta};
pub use error::{Error, Result};
pub use lattice::{Boundary, GroundStateResult, LatticeModel};
pub use luttinger::{Estimator, LuttingerParams, Regime};
pub use polariton::{AuditOptions, AuditReport, ExperimentalParams, PolaritonDerived};
pub use quench::QuenchProtocol;
pub use units::NaturalUnits;

/// Version of this crate, echoed in report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
