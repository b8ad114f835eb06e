//! Semiclassical thermal cloud in the condensate mean field.
//!
//! ```text
//! n_T(r) = λ⁻³ g_{3/2}(z),   e_T(r) = λ⁻³ [ (3/2) kT g_{5/2}(z) + V_eff g_{3/2}(z) ]
//! z(r) = exp(-(V_eff - μ)/kT),  V_eff = V + 2U₀ n_C
//! ```
//!
//! With a Thomas–Fermi condensate, `V_eff - μ = |V - μ|`, and in the
//! rescaled coordinates `u_i = x_i ω_i/ω̄` (unit Jacobian) the potential is
//! `½ m ω̄² u²`. Every spatial integral is then radial, with a single kink at
//! the Thomas–Fermi radius. Gross–Pitaevskii profiles are integrated over
//! `(u, cos θ)` instead.

use std::cell::Cell;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::condensate::{tf_profile, CondensateProfile, SpeciesParams};
use crate::constants::PhysConstants;
use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::ideal_gas::TrapConfig;
use crate::quadrature::{gauss_legendre, integrate_kinked, QuadOptions, Quadrature};
use crate::special::bose_32_52;

/// Integration stops where `V - μ` reaches this many `kT`.
pub const CUTOFF_KT: f64 = 40.0;

/// Relative tolerance for the integrals behind finite-difference partials.
pub const PARTIALS_REL_TOL: f64 = 1e-11;

const ANGULAR_NODES: usize = 32;

/// Independent variables `(N_C, T)` of the equilibrium model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumState {
    n_c: f64,
    temperature: f64,
}

impl EquilibriumState {
    pub fn new(n_c: f64, temperature: f64) -> Result<Self> {
        check_non_negative("N_C", n_c)?;
        check_positive("T", temperature)?;
        Ok(Self { n_c, temperature })
    }

    pub fn n_c(&self) -> f64 {
        self.n_c
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }
}

/// `λ = sqrt(2πħ²/(m k T))`.
pub fn thermal_wavelength(mass: f64, temperature: f64) -> f64 {
    (2.0 * PI * PhysConstants::HBAR.powi(2) / (mass * PhysConstants::K_B * temperature)).sqrt()
}

/// Which thermal density accompanies the condensate in a trap integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalCloud {
    Empty,
    /// Equilibrium cloud at `temperature` with the condensate's `μ_cloud`.
    Equilibrium {
        temperature: f64,
    },
    /// Shape frozen at `(temperature, mu)` of a reference Thomas–Fermi state,
    /// scaled by `scale`. Depends on `V` only, not on the current condensate.
    Frozen {
        temperature: f64,
        mu: f64,
        scale: f64,
    },
}

/// Densities at one point of the trap.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LocalDensities {
    /// Trap potential, J.
    pub v: f64,
    pub n_c: f64,
    pub n_t: f64,
    /// Thermal energy density, J/m³.
    pub e_t: f64,
    /// `V_eff < μ` occurred and the fugacity was clamped to 1.
    pub clamped: bool,
}

impl ThermalCloud {
    /// Thermal densities given `V`, `n_C` and the excess `V_eff - μ`.
    fn local(&self, profile: &CondensateProfile, v: f64, n_c: f64, excess: f64) -> LocalDensities {
        let (temperature, mu, excess, scale) = match *self {
            ThermalCloud::Empty => return LocalDensities { v, n_c, ..Default::default() },
            ThermalCloud::Equilibrium { temperature } => (temperature, profile.mu_cloud(), excess, 1.0),
            ThermalCloud::Frozen { temperature, mu, scale } => (temperature, mu, (v - mu).abs(), scale),
        };
        let kt = PhysConstants::K_B * temperature;
        let lambda3 = thermal_wavelength(profile.mass(), temperature).powi(-3);
        let clamped = excess < 0.0;
        let excess = excess.max(0.0);
        let (g32, g52) = bose_32_52(excess / kt);
        let v_eff = mu + excess;
        LocalDensities {
            v,
            n_c,
            n_t: scale * lambda3 * g32,
            e_t: scale * lambda3 * (1.5 * kt * g52 + v_eff * g32),
            clamped,
        }
    }

    /// Potential energy beyond which the cloud is negligible.
    fn cutoff_potential(&self, profile: &CondensateProfile) -> f64 {
        let reach = |t: f64, mu: f64| mu.max(0.0) + CUTOFF_KT * PhysConstants::K_B * t;
        match *self {
            ThermalCloud::Empty => profile.mu_cloud().max(0.0),
            ThermalCloud::Equilibrium { temperature } => reach(temperature, profile.mu_cloud()),
            ThermalCloud::Frozen { temperature, mu, .. } => reach(temperature, mu),
        }
    }
}

/// Densities at physical position `r` (m).
pub fn local_densities(r: [f64; 3], profile: &CondensateProfile, cloud: &ThermalCloud) -> LocalDensities {
    let v = profile.trap().potential(profile.mass(), r);
    let n_c = profile.density_at(r);
    let excess = if profile.is_thomas_fermi() {
        (v - profile.mu_cloud()).abs()
    } else {
        v + 2.0 * profile.coupling() * n_c - profile.mu_cloud()
    };
    cloud.local(profile, v, n_c, excess)
}

/// `n_T(r)` in m⁻³.
pub fn thermal_density(r: [f64; 3], state: &EquilibriumState, profile: &CondensateProfile) -> f64 {
    let cloud = ThermalCloud::Equilibrium { temperature: state.temperature };
    local_densities(r, profile, &cloud).n_t
}

/// `e_T(r)` in J/m³.
pub fn thermal_energy_density(r: [f64; 3], state: &EquilibriumState, profile: &CondensateProfile) -> f64 {
    let cloud = ThermalCloud::Equilibrium { temperature: state.temperature };
    local_densities(r, profile, &cloud).e_t
}

fn angular_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ANGULAR_NODES).into_iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect())
}

/// Integrates `f(local densities)` over the whole trap.
///
/// Returns the quadrature result and the number of integrand points at which
/// the fugacity had to be clamped.
pub fn integrate_trap<const N: usize, F>(
    profile: &CondensateProfile,
    cloud: &ThermalCloud,
    f: F,
    opts: &QuadOptions,
) -> Result<(Quadrature<N>, usize)>
where
    F: Fn(&LocalDensities) -> [f64; N],
{
    let mass = profile.mass();
    let w_bar = profile.trap().mean_omega();
    let to_u = |v: f64| (2.0 * v.max(0.0) / mass).sqrt() / w_bar;
    let clamps = Cell::new(0usize);
    let mut upper = to_u(cloud.cutoff_potential(profile));
    let mut kinks = Vec::with_capacity(2);

    let result = match profile.gp_density() {
        None => {
            let mu = profile.mu_cloud();
            kinks.push(profile.rescaled_radius());
            if let ThermalCloud::Frozen { mu, .. } = *cloud {
                kinks.push(to_u(mu));
            }
            integrate_kinked(
                |u| {
                    let v = profile.rescaled_potential(u);
                    let local = cloud.local(profile, v, profile.radial_density(u), (v - mu).abs());
                    let mut out = f(&local);
                    let shell = 4.0 * PI * u * u;
                    out.iter_mut().for_each(|x| *x *= shell);
                    out
                },
                0.0,
                upper,
                &kinks,
                opts,
            )
        }
        Some(density) => {
            let [w_rho, _, w_z] = profile.trap().omega();
            let (rho_max, z_max) = density.extent();
            upper = upper.max(rho_max * w_rho / w_bar).max(z_max * w_z / w_bar);
            if let ThermalCloud::Frozen { mu, .. } = *cloud {
                kinks.push(to_u(mu));
            }
            let rule = angular_rule();
            integrate_kinked(
                |u| {
                    let v = profile.rescaled_potential(u);
                    let mut out = [0.0; N];
                    for &(c, w) in rule {
                        let s = (1.0 - c * c).sqrt();
                        let n_c = density.density(u * s * w_bar / w_rho, u * c * w_bar / w_z);
                        let excess = v + 2.0 * profile.coupling() * n_c - profile.mu_cloud();
                        let local = cloud.local(profile, v, n_c, excess);
                        if local.clamped {
                            clamps.set(clamps.get() + 1);
                        }
                        let values = f(&local);
                        for i in 0..N {
                            out[i] += w * values[i];
                        }
                    }
                    let shell = 4.0 * PI * u * u;
                    out.iter_mut().for_each(|x| *x *= shell);
                    out
                },
                0.0,
                upper,
                &kinks,
                opts,
            )
        }
    }?;
    Ok((result, clamps.get()))
}

/// Integrated thermal cloud at one equilibrium state.
#[derive(Debug, Clone)]
pub struct EquilibriumSummary {
    state: EquilibriumState,
    profile: CondensateProfile,
    n_t: f64,
    e_t: f64,
    n_t_error: f64,
    e_t_error: f64,
    lambda_db: f64,
    clamped: usize,
}

impl EquilibriumSummary {
    pub fn state(&self) -> &EquilibriumState {
        &self.state
    }

    pub fn profile(&self) -> &CondensateProfile {
        &self.profile
    }

    /// Energy per lost condensate atom, J.
    pub fn mu(&self) -> f64 {
        self.profile.mu()
    }

    pub fn n_t(&self) -> f64 {
        self.n_t
    }

    /// Thermal-cloud energy, J.
    pub fn e_t(&self) -> f64 {
        self.e_t
    }

    pub fn n_t_error(&self) -> f64 {
        self.n_t_error
    }

    pub fn e_t_error(&self) -> f64 {
        self.e_t_error
    }

    /// Thermal de Broglie wavelength, m.
    pub fn lambda_db(&self) -> f64 {
        self.lambda_db
    }

    /// Integrand points where `V_eff < μ` forced the fugacity to 1.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn n_t_at(&self, r: [f64; 3]) -> f64 {
        thermal_density(r, &self.state, &self.profile)
    }

    pub fn e_t_at(&self, r: [f64; 3]) -> f64 {
        thermal_energy_density(r, &self.state, &self.profile)
    }
}

/// `N_T` and `E_T` at relative tolerance 1e-8.
pub fn integrate_cloud(state: &EquilibriumState, profile: &CondensateProfile) -> Result<EquilibriumSummary> {
    integrate_cloud_with(state, profile, &QuadOptions::default())
}

pub fn integrate_cloud_with(
    state: &EquilibriumState,
    profile: &CondensateProfile,
    opts: &QuadOptions,
) -> Result<EquilibriumSummary> {
    if (state.n_c - profile.n_c()).abs() > 1e-12 * state.n_c.max(1.0) {
        return Err(Error::InvalidParameter {
            name: "profile",
            reason: format!("built for N_C = {}, state has N_C = {}", profile.n_c(), state.n_c),
        });
    }
    let cloud = ThermalCloud::Equilibrium { temperature: state.temperature };
    let (q, clamped) = integrate_trap(profile, &cloud, |p| [p.n_t, p.e_t], opts)?;
    Ok(EquilibriumSummary {
        state: *state,
        profile: profile.clone(),
        n_t: q.value[0],
        e_t: q.value[1],
        n_t_error: q.error[0],
        e_t_error: q.error[1],
        lambda_db: thermal_wavelength(profile.mass(), state.temperature),
        clamped,
    })
}

/// Thermal `(N_T, E_T)` for a Thomas–Fermi condensate of `n_c` atoms at `temperature`.
pub fn thermal_totals(
    n_c: f64,
    temperature: f64,
    trap: &TrapConfig,
    species: &SpeciesParams,
    opts: &QuadOptions,
) -> Result<(f64, f64)> {
    let profile = tf_profile(n_c, trap, species)?;
    let cloud = ThermalCloud::Equilibrium { temperature };
    let (q, _) = integrate_trap(&profile, &cloud, |p| [p.n_t, p.e_t], opts)?;
    Ok((q.value[0], q.value[1]))
}

/// Partial derivatives of `N_T(N_C, T)` and `E_T(N_C, T)` for a Thomas–Fermi condensate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudPartials {
    pub n_t: f64,
    pub e_t: f64,
    pub dnt_dt: f64,
    pub dnt_dnc: f64,
    pub det_dt: f64,
    pub det_dnc: f64,
    /// `N_C` was too small for central differences.
    pub one_sided: bool,
}

/// Richardson-extrapolated finite differences with steps `1e-4·T` and `1e-4·N_C`.
///
/// Falls back to forward differences in `N_C` when `N_C < 1`.
pub fn cloud_partials(state: &EquilibriumState, trap: &TrapConfig, species: &SpeciesParams) -> Result<CloudPartials> {
    let opts = QuadOptions::with_rel_tol(PARTIALS_REL_TOL);
    let (n_c, t) = (state.n_c, state.temperature);
    let at = |n: f64, temp: f64| thermal_totals(n, temp, trap, species, &opts);
    let base = at(n_c, t)?;

    let central = |g: &dyn Fn(f64) -> Result<(f64, f64)>, x: f64, h: f64| -> Result<(f64, f64)> {
        let d = |h: f64| -> Result<(f64, f64)> {
            let (p, m) = (g(x + h)?, g(x - h)?);
            Ok(((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h)))
        };
        let (full, half) = (d(h)?, d(0.5 * h)?);
        Ok(((4.0 * half.0 - full.0) / 3.0, (4.0 * half.1 - full.1) / 3.0))
    };

    let (dnt_dt, det_dt) = central(&|temp| at(n_c, temp), t, 1e-4 * t)?;
    let one_sided = n_c < 1.0;
    let (dnt_dnc, det_dnc) = if one_sided {
        let h = 1e-4 * n_c.max(1.0);
        let d = |h: f64| -> Result<(f64, f64)> {
            let p = at(n_c + h, t)?;
            Ok(((p.0 - base.0) / h, (p.1 - base.1) / h))
        };
        let (full, half) = (d(h)?, d(0.5 * h)?);
        (2.0 * half.0 - full.0, 2.0 * half.1 - full.1)
    } else {
        central(&|n| at(n, t), n_c, 1e-4 * n_c)?
    };
    Ok(CloudPartials { n_t: base.0, e_t: base.1, dnt_dt, dnt_dnc, det_dt, det_dnc, one_sided })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condensate::{gp_solve, GpGrid};
    use crate::ideal_gas::{thermal_energy_at_temperature, thermal_number};
    use crate::special::{ZETA_3, ZETA_3_2, ZETA_5_2};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn he_trap() -> TrapConfig {
        TrapConfig::from_hz(1090.0, 1090.0, 115.0, 35.0).unwrap()
    }

    fn he() -> SpeciesParams {
        SpeciesParams::metastable_helium()
    }

    fn summary(n_c: f64, t: f64) -> EquilibriumSummary {
        let profile = tf_profile(n_c, &he_trap(), &he()).unwrap();
        integrate_cloud(&EquilibriumState::new(n_c, t).unwrap(), &profile).unwrap()
    }

    #[test]
    fn state_validation() {
        assert!(EquilibriumState::new(-1.0, 1e-6).is_err());
        assert!(EquilibriumState::new(1.0, 0.0).is_err());
    }

    #[test]
    fn vanishes_far_out() {
        let s = summary(5e5, 1.5e-6);
        assert_eq!(s.n_t_at([1.0, 0.0, 0.0]), 0.0);
        assert_eq!(s.e_t_at([0.0, 0.0, 1.0]), 0.0);
    }

    #[test]
    fn boundary_value_is_zeta() {
        let s = summary(5e5, 1.5e-6);
        let [rx, _, _] = crate::condensate::condensate_boundary(s.profile());
        let n = s.n_t_at([rx, 0.0, 0.0]);
        assert_relative_eq!(n * s.lambda_db().powi(3), ZETA_3_2, max_relative = 1e-12);
        assert_relative_eq!(n * s.lambda_db().powi(3), 2.612, max_relative = 2e-4);
    }

    #[test]
    fn ideal_limit_matches_trap_formula() {
        // N_C = 0 gives μ_cloud = 0 and the semiclassical integrals are exact
        for t in [0.5e-6, 1.5e-6] {
            let s = summary(0.0, t);
            assert_relative_eq!(s.n_t(), thermal_number(t, &he_trap()), max_relative = 5e-3);
            assert_relative_eq!(s.e_t(), thermal_energy_at_temperature(t, &he_trap()), max_relative = 5e-3);
        }
    }

    #[test]
    fn ideal_limit_temperature_derivative() {
        let trap = he_trap();
        let weak = he().with_scattering_length(16e-12).unwrap();
        let t = 1.5e-6;
        let p = cloud_partials(&EquilibriumState::new(0.0, t).unwrap(), &trap, &weak).unwrap();
        let hw = PhysConstants::HBAR * trap.mean_omega();
        let analytic = 3.0 * ZETA_3 * PhysConstants::K_B.powi(3) * t * t / hw.powi(3);
        assert!(p.one_sided);
        assert_relative_eq!(p.dnt_dt, analytic, max_relative = 1e-2);
    }

    #[test]
    fn temperature_to_zero() {
        let s = summary(5e5, 1e-9);
        let hot = summary(5e5, 1.5e-6);
        assert!(s.n_t() < 1e-6 * hot.n_t());
        assert!(s.e_t() < 1e-6 * hot.e_t());
    }

    #[test]
    fn halving_tolerance_stays_within_error_estimate() {
        let profile = tf_profile(5e5, &he_trap(), &he()).unwrap();
        let state = EquilibriumState::new(5e5, 1.5e-6).unwrap();
        let coarse = integrate_cloud_with(&state, &profile, &QuadOptions::with_rel_tol(1e-6)).unwrap();
        let fine = integrate_cloud_with(&state, &profile, &QuadOptions::with_rel_tol(5e-7)).unwrap();
        assert!((coarse.n_t() - fine.n_t()).abs() <= coarse.n_t_error());
        assert!((coarse.e_t() - fine.e_t()).abs() <= coarse.e_t_error());
    }

    #[test]
    fn mismatched_profile_is_rejected() {
        let profile = tf_profile(5e5, &he_trap(), &he()).unwrap();
        let state = EquilibriumState::new(4e5, 1.5e-6).unwrap();
        assert!(integrate_cloud(&state, &profile).is_err());
    }

    #[test]
    fn partials_in_working_range() {
        let trap = he_trap();
        let hw = PhysConstants::HBAR * trap.mean_omega();
        for (n_c, t) in [(5e5, 1.5e-6), (1e5, 1.5e-6), (5e5, 2.5e-6), (2e4, 1.0e-6), (1e4, 2.5e-6)] {
            let p = cloud_partials(&EquilibriumState::new(n_c, t).unwrap(), &trap, &he()).unwrap();
            assert!(!p.one_sided);
            assert!(p.dnt_dt > 0.0 && p.det_dt > 0.0);
            assert!(p.det_dnc.is_finite());
            // Mean-field expulsion from the condensate region is outweighed by the
            // larger fugacity outside it, so N_T grows with N_C. Leading order in μ/kT:
            // ∂N_T/∂N_C = ζ(2)(kT/ħω̄)² (dμ/dN_C)/ħω̄ with dμ/dN_C = 2μ/(5N_C).
            let mu = tf_profile(n_c, &trap, &he()).unwrap().mu();
            let kt = PhysConstants::K_B * t;
            let leading = PI * PI / 6.0 * (kt / hw).powi(2) * 0.4 * mu / (n_c * hw);
            assert!(p.dnt_dnc > 0.0, "∂N_T/∂N_C = {} at ({n_c}, {t})", p.dnt_dnc);
            let tolerance = if mu < 0.1 * kt { 0.05 } else { 0.25 };
            assert_relative_eq!(p.dnt_dnc, leading, max_relative = tolerance);
        }
    }

    #[test]
    fn partials_match_wider_differences() {
        let trap = he_trap();
        let (n_c, t) = (3e5, 1.2e-6);
        let p = cloud_partials(&EquilibriumState::new(n_c, t).unwrap(), &trap, &he()).unwrap();
        let opts = QuadOptions::with_rel_tol(1e-12);
        let f = |n: f64, temp: f64| thermal_totals(n, temp, &trap, &he(), &opts).unwrap();
        // five-point stencil at a different step
        let h = 2e-3 * t;
        let d = |k: f64| f(n_c, t + k * h);
        let five = |a: (f64, f64), b: (f64, f64), c: (f64, f64), e: (f64, f64)| {
            ((-a.0 + 8.0 * b.0 - 8.0 * c.0 + e.0) / (12.0 * h), (-a.1 + 8.0 * b.1 - 8.0 * c.1 + e.1) / (12.0 * h))
        };
        let (dn, de) = five(d(2.0), d(1.0), d(-1.0), d(-2.0));
        assert_relative_eq!(p.dnt_dt, dn, max_relative = 1e-5);
        assert_relative_eq!(p.det_dt, de, max_relative = 1e-5);
    }

    #[test]
    fn gp_backend_integrates_and_counts_clamps() {
        let trap = he_trap();
        let gp = gp_solve(5e5, &trap, &he(), &GpGrid::default()).unwrap();
        let tf = tf_profile(5e5, &trap, &he()).unwrap();
        let state = EquilibriumState::new(5e5, 1.5e-6).unwrap();
        let opts = QuadOptions::with_rel_tol(1e-6);
        let a = integrate_cloud_with(&state, &gp, &opts).unwrap();
        let b = integrate_cloud(&state, &tf).unwrap();
        assert_relative_eq!(a.n_t(), b.n_t(), max_relative = 5e-2);
        // the GP surface is smooth, so V_eff dips below μ somewhere near it
        assert!(a.clamped() > 0);
        assert_eq!(b.clamped(), 0);

        let (norm, _) = integrate_trap(&gp, &ThermalCloud::Empty, |p| [p.n_c], &opts).unwrap();
        assert_relative_eq!(norm.value[0], 5e5, max_relative = 1e-3);
    }

    #[test]
    fn frozen_cloud_scales_linearly() {
        let profile = tf_profile(5e5, &he_trap(), &he()).unwrap();
        let t = 1.5e-6;
        let reference = summary(5e5, t);
        let frozen = |scale| ThermalCloud::Frozen { temperature: t, mu: profile.mu_cloud(), scale };
        let opts = QuadOptions::default();
        let (one, _) = integrate_trap(&profile, &frozen(1.0), |p| [p.n_t], &opts).unwrap();
        let (half, _) = integrate_trap(&profile, &frozen(0.5), |p| [p.n_t], &opts).unwrap();
        assert_relative_eq!(one.value[0], reference.n_t(), max_relative = 1e-8);
        assert_relative_eq!(half.value[0], 0.5 * one.value[0], max_relative = 1e-12);
        // frozen shape ignores a shrunken condensate
        let small = tf_profile(1e5, &he_trap(), &he()).unwrap();
        let (moved, _) = integrate_trap(&small, &frozen(1.0), |p| [p.n_t], &opts).unwrap();
        assert_relative_eq!(moved.value[0], one.value[0], max_relative = 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn mean_energy_bounds(n_c in 1e3f64..5e5, t in 1.3e-6f64..2.8e-6) {
            let s = summary(n_c, t);
            let kt = PhysConstants::K_B * t;
            let per_atom = s.e_t() / s.n_t();
            prop_assert!(per_atom >= 1.5 * kt * ZETA_5_2 / ZETA_3_2);
            prop_assert!(per_atom <= 3.5 * kt);
        }

        #[test]
        fn pointwise_energy_exceeds_potential(f in 0.0f64..2.0, axis in 0usize..3) {
            let s = summary(5e5, 1.5e-6);
            let radii = crate::condensate::condensate_boundary(s.profile());
            let mut r = [0.0; 3];
            r[axis] = f * radii[axis];
            let n_c = s.profile().density_at(r);
            let v_eff = he_trap().potential(he().mass(), r) + 2.0 * he().coupling() * n_c;
            let n_t = s.n_t_at(r);
            prop_assert!(n_t > 0.0);
            prop_assert!(s.e_t_at(r) >= v_eff * n_t);
            prop_assert!(n_t * s.lambda_db().powi(3) <= ZETA_3_2 * (1.0 + 1e-14));
        }
    }
}
