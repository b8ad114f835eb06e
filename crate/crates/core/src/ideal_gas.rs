//! Non-interacting bosons in a harmonic trap, losing atoms only to
//! background-gas collisions while staying in thermal equilibrium.
//!
//! With `N_T = g_3(1) (kT/ħω̄)³` and `E_T = α N_T^{4/3}`, conservation of
//! number and energy under uniform background loss forces
//!
//! ```text
//! dN_T/dt = -(N_T/τ) (1 - ε₀N_T/E_T) / (4/3 - ε₀N_T/E_T)  ≈ -(3/4) N_T/τ
//! dN_C/dt = -(N_C + N_T)/τ - dN_T/dt                     ≈ -(N_C + N_T/4)/τ
//! ```
//!
//! so a quarter of the thermal loss is replenished from the condensate.

use std::f64::consts::PI;

use crate::constants::PhysConstants;
use crate::error::{check_non_negative, check_positive, Result};
use crate::special::ZETA_3;

/// Harmonic trap: angular frequencies (rad/s) and background-loss lifetime (s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig {
    omega: [f64; 3],
    tau: f64,
}

impl TrapConfig {
    /// Angular frequencies in rad/s. `tau` may be `f64::INFINITY` (no background loss).
    pub fn new(omega_x: f64, omega_y: f64, omega_z: f64, tau: f64) -> Result<Self> {
        check_positive("omega_x", omega_x)?;
        check_positive("omega_y", omega_y)?;
        check_positive("omega_z", omega_z)?;
        check_positive("tau", tau)?;
        Ok(Self { omega: [omega_x, omega_y, omega_z], tau })
    }

    /// Ordinary frequencies in Hz, converted with a factor 2π.
    pub fn from_hz(nu_x: f64, nu_y: f64, nu_z: f64, tau: f64) -> Result<Self> {
        let w = 2.0 * PI;
        Self::new(w * nu_x, w * nu_y, w * nu_z, tau)
    }

    pub fn omega(&self) -> [f64; 3] {
        self.omega
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn with_tau(self, tau: f64) -> Result<Self> {
        let [x, y, z] = self.omega;
        Self::new(x, y, z, tau)
    }

    /// Geometric mean `ω̄ = (ω_x ω_y ω_z)^{1/3}`.
    pub fn mean_omega(&self) -> f64 {
        (self.omega[0] * self.omega[1] * self.omega[2]).cbrt()
    }

    /// Ground-state energy `ε₀ = ħ(ω_x + ω_y + ω_z)/2`.
    pub fn ground_state_energy(&self) -> f64 {
        0.5 * PhysConstants::HBAR * self.omega.iter().sum::<f64>()
    }

    pub fn is_axially_symmetric(&self) -> bool {
        self.omega[0] == self.omega[1]
    }

    /// Trap potential at a physical position (m), for atoms of the given mass.
    pub fn potential(&self, mass: f64, r: [f64; 3]) -> f64 {
        0.5 * mass * (0..3).map(|i| (self.omega[i] * r[i]).powi(2)).sum::<f64>()
    }

    fn quantum(&self) -> f64 {
        PhysConstants::HBAR * self.mean_omega()
    }
}

/// Condensate and thermal populations of the ideal gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealState {
    pub n_c: f64,
    pub n_t: f64,
}

impl IdealState {
    pub fn new(n_c: f64, n_t: f64) -> Result<Self> {
        check_non_negative("N_C", n_c)?;
        check_non_negative("N_T", n_t)?;
        Ok(Self { n_c, n_t })
    }

    pub fn total(&self) -> f64 {
        self.n_c + self.n_t
    }
}

/// Thermal population below `T_c`: `g_3(1) (kT/ħω̄)³`.
pub fn thermal_number(temperature: f64, trap: &TrapConfig) -> f64 {
    ZETA_3 * (PhysConstants::K_B * temperature / trap.quantum()).powi(3)
}

/// Temperature at which the thermal population equals `n_t` (inverse of [`thermal_number`]).
pub fn temperature_for_thermal_number(n_t: f64, trap: &TrapConfig) -> f64 {
    trap.quantum() * (n_t / ZETA_3).cbrt() / PhysConstants::K_B
}

/// `α = π⁴ ħω̄ / (30 g_3(1)^{4/3})`.
pub fn energy_coefficient(trap: &TrapConfig) -> f64 {
    PI.powi(4) * trap.quantum() / (30.0 * ZETA_3.powf(4.0 / 3.0))
}

/// Thermal-cloud energy `α N_T^{4/3}`.
pub fn thermal_energy(n_t: f64, trap: &TrapConfig) -> f64 {
    energy_coefficient(trap) * n_t.powf(4.0 / 3.0)
}

/// Thermal-cloud energy written in terms of temperature, `ħω̄ (π⁴/30) (kT/ħω̄)⁴`.
pub fn thermal_energy_at_temperature(temperature: f64, trap: &TrapConfig) -> f64 {
    let q = trap.quantum();
    q * PI.powi(4) / 30.0 * (PhysConstants::K_B * temperature / q).powi(4)
}

/// Condensation temperature of `n` atoms, `ħω̄ (N/g_3(1))^{1/3} / k`.
pub fn critical_temperature(n: f64, trap: &TrapConfig) -> f64 {
    temperature_for_thermal_number(n, trap)
}

/// Which form of the thermal loss rate to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdealRate {
    /// Drop `ε₀N_T/E_T`: `dN_T/dt = -(3/4) N_T/τ`.
    #[default]
    Simplified,
    /// Keep the ground-state energy of condensate atoms.
    Exact,
}

/// `(dN_C/dt, dN_T/dt)` for the ideal gas.
pub fn ideal_decay_rhs(state: IdealState, trap: &TrapConfig, rate: IdealRate) -> (f64, f64) {
    let tau = trap.tau();
    let thermal_fraction = match rate {
        IdealRate::Simplified => 0.75,
        IdealRate::Exact if state.n_t > 0.0 => {
            let x = trap.ground_state_energy() * state.n_t / thermal_energy(state.n_t, trap);
            (1.0 - x) / (4.0 / 3.0 - x)
        }
        IdealRate::Exact => 0.0,
    };
    let n_t_dot = -thermal_fraction * state.n_t / tau;
    let n_c_dot = -state.total() / tau - n_t_dot;
    (n_c_dot, n_t_dot)
}

/// Closed-form ideal-gas state at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    /// State with `N_C` clamped at zero.
    pub state: IdealState,
    /// Unclamped condensate population; negative once the model is exhausted.
    pub raw_n_c: f64,
    /// The condensate was fully depleted before `t`.
    pub exhausted: bool,
}

/// Solution of the simplified ideal-gas rates:
/// `N_T(t) = N_T(0) e^{-3t/4τ}`, `N_C(t) = N(0) e^{-t/τ} - N_T(0) e^{-3t/4τ}`.
pub fn ideal_decay_closed_form(initial: IdealState, trap: &TrapConfig, t: f64) -> ClosedForm {
    let tau = trap.tau();
    let thermal = initial.n_t * (-0.75 * t / tau).exp();
    let raw_n_c = initial.total() * (-t / tau).exp() - thermal;
    ClosedForm { state: IdealState { n_c: raw_n_c.max(0.0), n_t: thermal }, raw_n_c, exhausted: raw_n_c < 0.0 }
}
