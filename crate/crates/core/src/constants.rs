//! Physical constants (CODATA 2018 exact / recommended values, SI units).

/// Fixed physical constants used throughout the crate.
///
/// These are compile-time constants and deliberately not configurable.
#[derive(Debug, Clone, Copy)]
pub struct PhysConstants;

impl PhysConstants {
    /// Reduced Planck constant, J·s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Boltzmann constant, J/K.
    pub const K_B: f64 = 1.380_649e-23;
    /// Unified atomic mass unit, kg.
    pub const AMU: f64 = 1.660_539_066_60e-27;
}

/// Mass of a helium-4 atom, kg.
pub const HELIUM4_MASS: f64 = 4.002_602 * PhysConstants::AMU;

/// cm³/s → m³/s.
pub const CM3_PER_S: f64 = 1e-6;
/// cm⁶/s → m⁶/s.
pub const CM6_PER_S: f64 = 1e-12;
