//! Atom and energy loss rates from background, two-body and three-body collisions.
//!
//! Every inelastic event is classified by how many condensate (C) and thermal
//! (T) atoms take part:
//!
//! | class | event rate density | lost (C, T) | energy carried          |
//! |-------|--------------------|-------------|-------------------------|
//! | CC    | `(χ/2) n_C²`       | (2, 0)      | `2μ`                    |
//! | CT    | `2χ n_C n_T`       | (1, 1)      | `μ + e_T/n_T`           |
//! | TT    | `χ n_T²`           | (0, 2)      | `2 e_T/n_T`             |
//! | CCC   | `(ξ/6) n_C³`       | (3, 0)      | `3μ`                    |
//! | CCT   | `(3ξ/2) n_C² n_T`  | (2, 1)      | `2μ + e_T/n_T`          |
//! | CTT   | `3ξ n_C n_T²`      | (1, 2)      | `μ + 2 e_T/n_T`         |
//! | TTT   | `ξ n_T³`           | (0, 3)      | `3 e_T/n_T`             |
//!
//! Background collisions remove `N_C/τ` and `N_T/τ` with energy `(μN_C + E_T)/τ`.
//! Energies are integrated as `n_C^a n_T^{b-1} e_T` so the ratio `e_T/n_T`
//! never has to be formed.

use crate::condensate::{CondensateProfile, SpeciesParams};
use crate::error::Result;
use crate::quadrature::QuadOptions;
use crate::thermal_cloud::{integrate_trap, EquilibriumSummary, ThermalCloud};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Background,
    CC,
    CT,
    TT,
    CCC,
    CCT,
    CTT,
    TTT,
}

impl Channel {
    pub const ALL: [Channel; 8] = [
        Channel::Background,
        Channel::CC,
        Channel::CT,
        Channel::TT,
        Channel::CCC,
        Channel::CCT,
        Channel::CTT,
        Channel::TTT,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Channel::Background => "bg",
            Channel::CC => "CC",
            Channel::CT => "CT",
            Channel::TT => "TT",
            Channel::CCC => "CCC",
            Channel::CCT => "CCT",
            Channel::CTT => "CTT",
            Channel::TTT => "TTT",
        }
    }

    /// Condensate and thermal atoms lost per event; `None` for background.
    pub fn atoms(self) -> Option<(u8, u8)> {
        match self {
            Channel::Background => None,
            Channel::CC => Some((2, 0)),
            Channel::CT => Some((1, 1)),
            Channel::TT => Some((0, 2)),
            Channel::CCC => Some((3, 0)),
            Channel::CCT => Some((2, 1)),
            Channel::CTT => Some((1, 2)),
            Channel::TTT => Some((0, 3)),
        }
    }

    pub fn body_count(self) -> usize {
        self.atoms().map_or(1, |(c, t)| (c + t) as usize)
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Loss from one channel. All fields are `≤ 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ChannelRate {
    /// Condensate atoms per second.
    pub n_c: f64,
    /// Thermal atoms per second.
    pub n_t: f64,
    /// J/s.
    pub energy: f64,
}

impl ChannelRate {
    pub fn total(&self) -> f64 {
        self.n_c + self.n_t
    }
}

/// Spatial integrals entering the loss rates (SI).
///
/// `number`: `∫n_C², ∫n_C n_T, ∫n_T², ∫n_C³, ∫n_C² n_T, ∫n_C n_T², ∫n_T³`.
/// `energy`: `∫n_C e_T, ∫n_T e_T, ∫n_C² e_T, ∫n_C n_T e_T, ∫n_T² e_T`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LossIntegrals {
    pub number: [f64; 7],
    pub energy: [f64; 5],
}

pub fn loss_integrals(profile: &CondensateProfile, cloud: &ThermalCloud, opts: &QuadOptions) -> Result<LossIntegrals> {
    let (q, _) = integrate_trap(
        profile,
        cloud,
        |p| {
            let (c, t, e) = (p.n_c, p.n_t, p.e_t);
            [
                c * c,
                c * t,
                t * t,
                c * c * c,
                c * c * t,
                c * t * t,
                t * t * t,
                c * e,
                t * e,
                c * c * e,
                c * t * e,
                t * t * e,
            ]
        },
        opts,
    )?;
    let mut out = LossIntegrals::default();
    out.number.copy_from_slice(&q.value[..7]);
    out.energy.copy_from_slice(&q.value[7..]);
    Ok(out)
}

/// Per-channel loss rates.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LossRates {
    channels: [ChannelRate; 8],
}

impl LossRates {
    /// Assembles the channels from integrals and totals.
    ///
    /// `mu` is the energy per lost condensate atom, `e_t` the thermal-cloud energy.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        integrals: &LossIntegrals,
        n_c: f64,
        n_t: f64,
        e_t: f64,
        mu: f64,
        species: &SpeciesParams,
        tau: f64,
    ) -> Self {
        let (chi, xi) = (species.chi(), species.xi());
        let [i_cc, i_ct, i_tt, i_ccc, i_cct, i_ctt, i_ttt] = integrals.number;
        let [e_c, e_t_t, e_cc, e_ct, e_tt] = integrals.energy;
        let mut channels = Self::background_only(n_c, n_t, e_t, mu, tau).channels;

        // (channel, event rate, energy loss rate)
        let events = [
            (Channel::CC, 0.5 * chi * i_cc, chi * mu * i_cc),
            (Channel::CT, 2.0 * chi * i_ct, 2.0 * chi * (mu * i_ct + e_c)),
            (Channel::TT, chi * i_tt, 2.0 * chi * e_t_t),
            (Channel::CCC, xi / 6.0 * i_ccc, 0.5 * xi * mu * i_ccc),
            (Channel::CCT, 1.5 * xi * i_cct, 1.5 * xi * (2.0 * mu * i_cct + e_cc)),
            (Channel::CTT, 3.0 * xi * i_ctt, 3.0 * xi * (mu * i_ctt + 2.0 * e_ct)),
            (Channel::TTT, xi * i_ttt, 3.0 * xi * e_tt),
        ];
        for (channel, rate, energy) in events {
            let (c, t) = channel.atoms().expect("inelastic channel");
            channels[channel.index()] =
                ChannelRate { n_c: -(c as f64) * rate, n_t: -(t as f64) * rate, energy: -energy };
        }
        Self { channels }
    }

    /// Background collisions only, as in the ideal-gas model.
    pub fn background_only(n_c: f64, n_t: f64, e_t: f64, mu: f64, tau: f64) -> Self {
        let inv_tau = if tau.is_finite() { 1.0 / tau } else { 0.0 };
        let mut channels = [ChannelRate::default(); 8];
        channels[Channel::Background.index()] =
            ChannelRate { n_c: -n_c * inv_tau, n_t: -n_t * inv_tau, energy: -(e_t + mu * n_c) * inv_tau };
        Self { channels }
    }

    pub fn channel(&self, channel: Channel) -> ChannelRate {
        self.channels[channel.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Channel, ChannelRate)> + '_ {
        Channel::ALL.iter().map(move |&c| (c, self.channel(c)))
    }

    /// Total atom loss rate `Ṅ`, s⁻¹.
    pub fn ndot(&self) -> f64 {
        self.channels.iter().map(ChannelRate::total).sum()
    }

    /// Total energy loss rate `Ė`, J/s.
    pub fn edot(&self) -> f64 {
        self.channels.iter().map(|c| c.energy).sum()
    }

    pub fn background(&self) -> f64 {
        self.channel(Channel::Background).total()
    }

    pub fn two_body(&self) -> f64 {
        self.sum_by_bodies(2)
    }

    pub fn three_body(&self) -> f64 {
        self.sum_by_bodies(3)
    }

    fn sum_by_bodies(&self, bodies: usize) -> f64 {
        self.iter().filter(|(c, _)| c.atoms().is_some() && c.body_count() == bodies).map(|(_, r)| r.total()).sum()
    }

    /// Separate condensate and thermal loss rates `(Ṅ_C, Ṅ_T)`.
    pub fn attributed(&self, mode: AttributionMode) -> (f64, f64) {
        match mode {
            AttributionMode::Attribution => {
                (self.channels.iter().map(|c| c.n_c).sum(), self.channels.iter().map(|c| c.n_t).sum())
            }
            AttributionMode::Literal => {
                let pick = |channels: [Channel; 3], f: fn(&ChannelRate) -> f64| {
                    channels.iter().map(|&c| f(&self.channel(c))).sum()
                };
                (
                    pick([Channel::Background, Channel::CC, Channel::CCC], |c| c.n_c),
                    pick([Channel::Background, Channel::TT, Channel::TTT], |c| c.n_t),
                )
            }
        }
    }
}

/// How losses are split between condensate and thermal cloud when the two
/// are not kept in equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttributionMode {
    /// Each event removes its own condensate and thermal atoms.
    #[default]
    Attribution,
    /// Condensate losses with `n_T ≡ 0`, thermal losses with `n_C ≡ 0`.
    Literal,
}

/// Loss rates for a condensate profile and an arbitrary thermal cloud.
pub fn compute_losses(
    profile: &CondensateProfile,
    cloud: &ThermalCloud,
    n_t: f64,
    e_t: f64,
    species: &SpeciesParams,
    opts: &QuadOptions,
) -> Result<LossRates> {
    let integrals = loss_integrals(profile, cloud, opts)?;
    Ok(LossRates::assemble(&integrals, profile.n_c(), n_t, e_t, profile.mu(), species, profile.trap().tau()))
}

/// Loss rates of an equilibrium state, carrying both `Ṅ` and `Ė`.
pub fn loss_rates(summary: &EquilibriumSummary, species: &SpeciesParams) -> Result<LossRates> {
    let cloud = ThermalCloud::Equilibrium { temperature: summary.state().temperature() };
    compute_losses(summary.profile(), &cloud, summary.n_t(), summary.e_t(), species, &QuadOptions::default())
}

/// `(Ṅ_C, Ṅ_T)` split according to `mode`.
pub fn attributed_losses(
    summary: &EquilibriumSummary,
    species: &SpeciesParams,
    mode: AttributionMode,
) -> Result<(f64, f64)> {
    Ok(loss_rates(summary, species)?.attributed(mode))
}
