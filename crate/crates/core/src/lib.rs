//! Decay of a trapped Bose–Einstein condensate in thermal equilibrium with its
//! thermal cloud.
//!
//! The condensate is described in the Thomas–Fermi approximation (or by a
//! stationary Gross–Pitaevskii ground state for comparison), the thermal cloud
//! semiclassically in the condensate mean field. Background, two-body and
//! three-body losses drain both; [`dynamics`] keeps the gases in equilibrium
//! while they decay and tracks `N_C(t)` and `T(t)`.
//!
//! ```
//! use bec_decay::{integrate, uniform_grid, InitialState, IntegrationOptions, Model, RunMode};
//! use bec_decay::{SpeciesParams, TrapConfig};
//!
//! let model = Model::new(
//!     TrapConfig::from_hz(1090.0, 1090.0, 115.0, 35.0)?,
//!     SpeciesParams::metastable_helium(),
//! );
//! let initial = InitialState::from_thermal_number(5e5, 5e5, &model)?;
//! assert!((initial.temperature - 1.5e-6).abs() < 0.1e-6);
//!
//! let grid = uniform_grid(0.2, 3);
//! let run = integrate(&model, &initial, RunMode::Full, 0.2, &grid, &IntegrationOptions::default());
//! assert!(run.points[2].n_c < 5e5);
//! # Ok::<(), bec_decay::Error>(())
//! ```

pub mod condensate;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod ideal_gas;
pub mod losses;
pub mod ode;
pub mod quadrature;
pub mod special;
pub mod thermal_cloud;

pub use condensate::{
    build_profile, condensate_boundary, gp_solve, tf_profile, CondensateProfile, GpGrid, ProfileBackend, SpeciesParams,
};
pub use dynamics::{
    full_rhs, integrate, lifetime, simple_rhs, solve_initial_temperature, uniform_grid, InitialState,
    IntegrationOptions, Model, RunMode, SimpleModel, Termination, Trajectory, TrajectoryPoint,
};
pub use error::{Error, Result};
pub use ideal_gas::{IdealState, TrapConfig};
pub use losses::{attributed_losses, loss_rates, AttributionMode, Channel, LossRates};
pub use thermal_cloud::{cloud_partials, integrate_cloud, EquilibriumState, EquilibriumSummary};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bose-functions.md")]
    mod bose_functions {}
    #[doc = include_str!("../../../book/src/ideal-gas.md")]
    mod ideal_gas {}
    #[doc = include_str!("../../../book/src/condensate.md")]
    mod condensate {}
    #[doc = include_str!("../../../book/src/thermal-cloud.md")]
    mod thermal_cloud {}
    #[doc = include_str!("../../../book/src/losses.md")]
    mod losses {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
