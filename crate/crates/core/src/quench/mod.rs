//! Storage protocol: schedule, mode evolution, correlations and
//! feasibility bounds.

pub mod bogoliubov;
pub mod correlation;
pub mod feasibility;
pub mod protocol;

pub use bogoliubov::{evolve_bogoliubov, FrozenSchedule, Method, ProtocolSchedule, QuenchState, Schedule};
pub use correlation::{
    analyze_zero_t, correlation_final_zero_t, correlation_thermal, thermal_analysis, QuenchCorrelation,
    ThermalFit, ZeroTAnalysis,
};
pub use feasibility::{
    feasibility_report, gamma_theta_integral, min_switch_time, temperature_cap, FeasibilityReport, SwitchTime,
};
pub use protocol::{
    crossover_length, crossover_ratio, instantaneous_k, protocol_from_params, protocol_with_l0, QuenchProtocol,
};
