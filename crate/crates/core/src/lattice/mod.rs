//! Lattice discretization, exact diagonalization and DMRG.

pub mod compressibility;
pub mod dmrg;
pub mod ed;
pub mod lanczos;
pub mod lieb_liniger;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod mpo;
pub mod result;

pub use ed::{ground_state_ed, ground_state_ed_seeded};
pub use model::{build_contact_lattice, build_lattice, Boundary, LatticeModel};
pub use result::{GroundStateResult, SolverMethod};
pub use dmrg::{DEFAULT_DMRG_SEED, ground_state_dmrg, run_dmrg, DmrgOptions, DmrgRun, MpsState};
pub use observables::{g2_correlation, oscillation_envelope};
pub use compressibility::{compressibility_k, compressibility_k_refined, compressibility_with_states, KEstimate, LatticeSolver};
pub use lieb_liniger::{lieb_liniger_reference, tonks_extrapolation, LiebLinigerResult, TonksExtrapolation};
