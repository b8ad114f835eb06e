//! Condensate density `n_C(r)` and chemical potential `μ(N_C)`.
//!
//! The default profile is Thomas–Fermi,
//! `μ = (ħω̄/2)(15 N_C a/a_ho)^{2/5}`, `n_C = max(0, (μ - V)/U₀)`.
//! A stationary Gross–Pitaevskii ground state on an axisymmetric grid is
//! available through [`gp_solve`] to bound the Thomas–Fermi error.
//!
//! Two chemical potentials are carried. `mu` is the energy removed with each
//! lost condensate atom and enters the energy balance; in Thomas–Fermi mode
//! it is floored at the trap ground-state energy `ε₀`, since the bare result
//! vanishes as `N_C → 0`. `mu_cloud` is the reference for the thermal
//! fugacity and is never floored, so that `V_eff - μ ≥ 0` holds everywhere.

mod gp;

use std::f64::consts::PI;
use std::sync::Arc;

use crate::constants::{PhysConstants, CM3_PER_S, CM6_PER_S, HELIUM4_MASS};
use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::ideal_gas::TrapConfig;

pub use gp::{GpDensity, GpGrid};

/// Atomic species: mass, s-wave scattering length and inelastic rate constants (SI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesParams {
    mass: f64,
    scattering_length: f64,
    chi: f64,
    xi: f64,
}

impl SpeciesParams {
    /// `chi` in m³/s, `xi` in m⁶/s.
    pub fn new(mass: f64, scattering_length: f64, chi: f64, xi: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("scattering_length", scattering_length)?;
        check_non_negative("chi", chi)?;
        check_non_negative("xi", xi)?;
        Ok(Self { mass, scattering_length, chi, xi })
    }

    /// Rate constants in the customary cm³/s and cm⁶/s.
    pub fn from_lab_units(mass: f64, scattering_length: f64, chi_cm3s: f64, xi_cm6s: f64) -> Result<Self> {
        check_non_negative("chi_cm3s", chi_cm3s)?;
        check_non_negative("xi_cm6s", xi_cm6s)?;
        Self::new(mass, scattering_length, chi_cm3s * CM3_PER_S, xi_cm6s * CM6_PER_S)
    }

    /// Metastable helium: a = 16 nm, χ = 1.5×10⁻¹⁴ cm³/s, ξ = 4×10⁻²⁷ cm⁶/s.
    pub fn metastable_helium() -> Self {
        Self::from_lab_units(HELIUM4_MASS, 16e-9, 1.5e-14, 4e-27).expect("valid constants")
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn scattering_length(&self) -> f64 {
        self.scattering_length
    }

    /// Two-body rate constant, m³/s.
    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// Three-body rate constant, m⁶/s.
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Contact interaction `U₀ = 4πħ²a/m`, J·m³.
    pub fn coupling(&self) -> f64 {
        4.0 * PI * PhysConstants::HBAR.powi(2) * self.scattering_length / self.mass
    }

    pub fn with_scattering_length(self, a: f64) -> Result<Self> {
        Self::new(self.mass, a, self.chi, self.xi)
    }

    pub fn with_rates(self, chi: f64, xi: f64) -> Result<Self> {
        Self::new(self.mass, self.scattering_length, chi, xi)
    }
}

/// Which condensate profile to use.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ProfileBackend {
    #[default]
    ThomasFermi,
    Gp(GpGrid),
}

#[derive(Debug, Clone)]
enum Shape {
    ThomasFermi,
    Gp(Arc<GpDensity>),
}

/// Immutable condensate profile for a given `N_C`.
#[derive(Debug, Clone)]
pub struct CondensateProfile {
    n_c: f64,
    mu: f64,
    mu_cloud: f64,
    coupling: f64,
    mass: f64,
    trap: TrapConfig,
    shape: Shape,
}

impl CondensateProfile {
    pub fn n_c(&self) -> f64 {
        self.n_c
    }

    /// Energy carried away by each lost condensate atom, J.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Chemical potential entering the thermal fugacity, J.
    pub fn mu_cloud(&self) -> f64 {
        self.mu_cloud
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn trap(&self) -> &TrapConfig {
        &self.trap
    }

    pub fn is_thomas_fermi(&self) -> bool {
        matches!(self.shape, Shape::ThomasFermi)
    }

    pub fn gp_density(&self) -> Option<&GpDensity> {
        match &self.shape {
            Shape::Gp(d) => Some(d),
            Shape::ThomasFermi => None,
        }
    }

    /// Trap potential in isotropically rescaled coordinates `u_i = x_i ω_i/ω̄`.
    #[inline]
    pub fn rescaled_potential(&self, u: f64) -> f64 {
        0.5 * self.mass * (self.trap.mean_omega() * u).powi(2)
    }

    /// Thomas–Fermi radius in rescaled coordinates, where `V = μ_cloud`.
    pub fn rescaled_radius(&self) -> f64 {
        (2.0 * self.mu_cloud / self.mass).sqrt() / self.trap.mean_omega()
    }

    /// Thomas–Fermi density at rescaled radius `u`.
    #[inline]
    pub fn radial_density(&self, u: f64) -> f64 {
        if self.coupling == 0.0 {
            return 0.0;
        }
        ((self.mu_cloud - self.rescaled_potential(u)) / self.coupling).max(0.0)
    }

    /// `n_C` at a physical position (m).
    pub fn density_at(&self, r: [f64; 3]) -> f64 {
        match &self.shape {
            Shape::ThomasFermi => {
                let v = self.trap.potential(self.mass, r);
                ((self.mu_cloud - v) / self.coupling).max(0.0)
            }
            Shape::Gp(d) => d.density((r[0] * r[0] + r[1] * r[1]).sqrt(), r[2]),
        }
    }
}

/// Thomas–Fermi chemical potential `(ħω̄/2)(15 N_C a/a_ho)^{2/5}`.
pub fn tf_chemical_potential(n_c: f64, trap: &TrapConfig, species: &SpeciesParams) -> f64 {
    let omega = trap.mean_omega();
    let a_ho = (PhysConstants::HBAR / (species.mass() * omega)).sqrt();
    0.5 * PhysConstants::HBAR * omega * (15.0 * n_c * species.scattering_length() / a_ho).powf(0.4)
}

/// Thomas–Fermi profile with `μ` floored at `ε₀`.
pub fn tf_profile(n_c: f64, trap: &TrapConfig, species: &SpeciesParams) -> Result<CondensateProfile> {
    check_non_negative("N_C", n_c)?;
    let mu_tf = tf_chemical_potential(n_c, trap, species);
    Ok(CondensateProfile {
        n_c,
        mu: mu_tf.max(trap.ground_state_energy()),
        mu_cloud: mu_tf,
        coupling: species.coupling(),
        mass: species.mass(),
        trap: *trap,
        shape: Shape::ThomasFermi,
    })
}

/// Stationary Gross–Pitaevskii ground state by imaginary-time propagation.
pub fn gp_solve(n_c: f64, trap: &TrapConfig, species: &SpeciesParams, grid: &GpGrid) -> Result<CondensateProfile> {
    check_positive("N_C", n_c)?;
    if !trap.is_axially_symmetric() {
        return Err(Error::Unsupported("the Gross-Pitaevskii solver needs omega_x == omega_y".into()));
    }
    let density = gp::solve(n_c, trap, species, grid)?;
    let mu = density.mu();
    Ok(CondensateProfile {
        n_c,
        mu,
        mu_cloud: mu,
        coupling: species.coupling(),
        mass: species.mass(),
        trap: *trap,
        shape: Shape::Gp(Arc::new(density)),
    })
}

pub fn build_profile(
    n_c: f64,
    trap: &TrapConfig,
    species: &SpeciesParams,
    backend: &ProfileBackend,
) -> Result<CondensateProfile> {
    match backend {
        ProfileBackend::ThomasFermi => tf_profile(n_c, trap, species),
        ProfileBackend::Gp(grid) => gp_solve(n_c, trap, species, grid),
    }
}

/// Thomas–Fermi radii `R_i = sqrt(2μ/(mω_i²))` along the trap axes, m.
///
/// Uses the unfloored chemical potential, so the density vanishes exactly there.
pub fn condensate_boundary(profile: &CondensateProfile) -> [f64; 3] {
    let mu = profile.mu_cloud().max(0.0);
    profile.trap.omega().map(|w| (2.0 * mu / profile.mass).sqrt() / w)
}
