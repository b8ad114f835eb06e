//! Axisymmetric stationary Gross–Pitaevskii ground state.
//!
//! Works in oscillator units of the radial frequency (length
//! `ℓ = sqrt(ħ/mω_⊥)`, energy `ħω_⊥`) on a cell-centred `(ρ, z ≥ 0)` grid with
//! mirror symmetry at `z = 0` and `ψ = 0` beyond the outer edges. The
//! discrete Hamiltonian is symmetric in the volume-weighted inner product,
//! so explicit imaginary-time steps followed by renormalization converge to
//! its exact discrete ground state.

use std::f64::consts::PI;

use crate::constants::PhysConstants;
use crate::error::{Error, Result};
use crate::ideal_gas::TrapConfig;

use super::{tf_chemical_potential, SpeciesParams};

/// Grid resolution and stopping rule for [`super::gp_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpGrid {
    pub n_rho: usize,
    /// Cells along `z ≥ 0`.
    pub n_z: usize,
    /// Stop once `|dμ/dτ| / μ` falls below this (τ in units of `1/ω_⊥`).
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for GpGrid {
    fn default() -> Self {
        Self { n_rho: 48, n_z: 128, tolerance: 1e-9, max_iterations: 2_000_000 }
    }
}

/// Converged GP density on the solver grid, in SI units.
#[derive(Debug, Clone)]
pub struct GpDensity {
    n_rho: usize,
    n_z: usize,
    d_rho: f64,
    d_z: f64,
    values: Vec<f64>,
    mu: f64,
    iterations: usize,
}

impl GpDensity {
    /// Chemical potential, J.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Grid extents `(ρ_max, z_max)` in m.
    pub fn extent(&self) -> (f64, f64) {
        (self.d_rho * self.n_rho as f64, self.d_z * self.n_z as f64)
    }

    /// `∫ n d³r` on the grid.
    pub fn norm(&self) -> f64 {
        let mut sum = 0.0;
        for j in 0..self.n_rho {
            let rho = (j as f64 + 0.5) * self.d_rho;
            let w = 4.0 * PI * rho * self.d_rho * self.d_z;
            for k in 0..self.n_z {
                sum += w * self.values[j * self.n_z + k];
            }
        }
        sum
    }

    /// Bilinear interpolation of the density at cylindrical `(ρ, z)` in m.
    pub fn density(&self, rho: f64, z: f64) -> f64 {
        let (j, fj) = locate(rho / self.d_rho - 0.5, self.n_rho);
        let (k, fk) = locate(z.abs() / self.d_z - 0.5, self.n_z);
        let at = |j: usize, k: usize| {
            if j >= self.n_rho || k >= self.n_z {
                0.0
            } else {
                self.values[j * self.n_z + k]
            }
        };
        (1.0 - fj) * ((1.0 - fk) * at(j, k) + fk * at(j, k + 1))
            + fj * ((1.0 - fk) * at(j + 1, k) + fk * at(j + 1, k + 1))
    }
}

/// Cell index and fractional offset, constant below the first centre.
fn locate(x: f64, n: usize) -> (usize, f64) {
    if x <= 0.0 {
        (0, 0.0)
    } else if x >= n as f64 {
        (n, 0.0)
    } else {
        let i = x.floor();
        (i as usize, x - i)
    }
}

pub(super) fn solve(n_c: f64, trap: &TrapConfig, species: &SpeciesParams, grid: &GpGrid) -> Result<GpDensity> {
    let hbar = PhysConstants::HBAR;
    let mass = species.mass();
    let [w_perp, _, w_z] = trap.omega();
    let lam = w_z / w_perp;
    let ell = (hbar / (mass * w_perp)).sqrt();
    let g = 4.0 * PI * species.scattering_length() / ell;

    let mu_tf = tf_chemical_potential(n_c, trap, species) / (hbar * w_perp);
    let r_rho = (2.0 * mu_tf).sqrt();
    let r_z = r_rho / lam;
    let rho_max = 1.25 * r_rho + 6.0;
    let z_max = 1.25 * r_z + 6.0 / lam.sqrt();
    let (nr, nz) = (grid.n_rho, grid.n_z);
    let d_rho = rho_max / nr as f64;
    let d_z = z_max / nz as f64;

    let rho: Vec<f64> = (0..nr).map(|j| (j as f64 + 0.5) * d_rho).collect();
    let z: Vec<f64> = (0..nz).map(|k| (k as f64 + 0.5) * d_z).collect();
    let weight: Vec<f64> = rho.iter().map(|r| 4.0 * PI * r * d_rho * d_z).collect();
    let mut potential = vec![0.0; nr * nz];
    let mut psi = vec![0.0; nr * nz];
    let gauss_norm = lam.sqrt() / PI.powf(1.5);
    for j in 0..nr {
        for k in 0..nz {
            let v = 0.5 * (rho[j].powi(2) + (lam * z[k]).powi(2));
            potential[j * nz + k] = v;
            let tf = ((mu_tf - v) / g).max(0.0);
            let gauss = n_c * gauss_norm * (-(rho[j].powi(2) + lam * z[k].powi(2))).exp();
            psi[j * nz + k] = (0.9 * tf + 0.1 * gauss).sqrt();
        }
    }

    let normalize = |psi: &mut [f64]| {
        let mut sum = 0.0;
        for j in 0..nr {
            for k in 0..nz {
                sum += weight[j] * psi[j * nz + k].powi(2);
            }
        }
        let s = (n_c / sum).sqrt();
        psi.iter_mut().for_each(|p| *p *= s);
    };
    normalize(&mut psi);

    let v_max = potential.iter().cloned().fold(0.0, f64::max);
    let n_max = psi.iter().map(|p| p * p).fold(0.0, f64::max);
    let spectral_bound = 2.0 / d_rho.powi(2) + 2.0 / d_z.powi(2) + v_max + 1.5 * g * n_max;
    let dt = 1.8 / spectral_bound;

    // ρ_{j±1/2} / ρ_j factors of the radial Laplacian
    let outer: Vec<f64> = (0..nr).map(|j| (j as f64 + 1.0) / (j as f64 + 0.5)).collect();
    let inner: Vec<f64> = (0..nr).map(|j| j as f64 / (j as f64 + 0.5)).collect();
    let (cr, cz) = (0.5 / d_rho.powi(2), 0.5 / d_z.powi(2));

    let mut h_psi = vec![0.0; nr * nz];
    let apply = |psi: &[f64], out: &mut [f64]| {
        for j in 0..nr {
            for k in 0..nz {
                let i = j * nz + k;
                let p = psi[i];
                let up = if j + 1 < nr { psi[i + nz] } else { 0.0 };
                let down = if j > 0 { psi[i - nz] } else { 0.0 };
                let radial = outer[j] * (up - p) - inner[j] * (p - down);
                let zp = if k + 1 < nz { psi[i + 1] } else { 0.0 };
                let zm = if k > 0 { psi[i - 1] } else { p };
                let axial = zp - 2.0 * p + zm;
                out[i] = -cr * radial - cz * axial + (potential[i] + g * p * p) * p;
            }
        }
    };
    let chemical_potential = |psi: &[f64], h_psi: &[f64]| {
        let mut sum = 0.0;
        for (j, w) in weight.iter().enumerate().take(nr) {
            for k in 0..nz {
                let i = j * nz + k;
                sum += w * psi[i] * h_psi[i];
            }
        }
        sum / n_c
    };

    let check_every = ((1.0 / dt).ceil() as usize).max(50);
    let mut mu_prev = f64::NAN;
    let mut rate = f64::INFINITY;
    for iteration in 0..grid.max_iterations {
        apply(&psi, &mut h_psi);
        if iteration % check_every == 0 {
            let mu = chemical_potential(&psi, &h_psi);
            if iteration > 0 {
                rate = ((mu - mu_prev) / mu).abs() / (check_every as f64 * dt);
                if rate < grid.tolerance {
                    let scale = 1.0 / ell.powi(3);
                    return Ok(GpDensity {
                        n_rho: nr,
                        n_z: nz,
                        d_rho: d_rho * ell,
                        d_z: d_z * ell,
                        values: psi.iter().map(|p| p * p * scale).collect(),
                        mu: mu * hbar * w_perp,
                        iterations: iteration,
                    });
                }
            }
            mu_prev = mu;
        }
        for (p, h) in psi.iter_mut().zip(&h_psi) {
            *p -= dt * h;
        }
        normalize(&mut psi);
    }
    Err(Error::GpNotConverged { iterations: grid.max_iterations, rate })
}
