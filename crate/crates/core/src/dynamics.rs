//! Time evolution of `(N_C, T)` under losses.
//!
//! In the full model the two gases stay in mutual equilibrium, so `N_T` and
//! `E_T` are functions of `(N_C, T)`. The total loss rates `(Ṅ, Ė)` then fix
//! `(Ṅ_C, Ṫ)` through
//!
//! ```text
//! Ṅ = ∂N_T/∂T · Ṫ + (∂N_T/∂N_C + 1) · Ṅ_C
//! Ė = ∂E_T/∂T · Ṫ + (∂E_T/∂N_C + μ) · Ṅ_C
//! ```
//!
//! The simple models evolve `(N_C, N_T)` directly with attributed losses and
//! a thermal cloud frozen at its initial shape and temperature.

use std::fmt;
use std::str::FromStr;

use crate::condensate::{tf_profile, SpeciesParams};
use crate::error::{Error, Result};
use crate::ideal_gas::{
    critical_temperature, ideal_decay_rhs, temperature_for_thermal_number, thermal_energy, IdealRate, IdealState,
    TrapConfig,
};
use crate::losses::{compute_losses, AttributionMode, LossRates};
use crate::ode::{dopri5, Event, OdeOptions, Stats, Status};
use crate::quadrature::QuadOptions;
use crate::thermal_cloud::{cloud_partials, thermal_totals, EquilibriumState, ThermalCloud, PARTIALS_REL_TOL};

/// Rows of the reparametrization matrix whose normalized determinant falls
/// below this are treated as parallel.
pub const SINGULAR_THRESHOLD: f64 = 1e-10;

/// Trap and species shared by every mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub trap: TrapConfig,
    pub species: SpeciesParams,
}

impl Model {
    pub fn new(trap: TrapConfig, species: SpeciesParams) -> Self {
        Self { trap, species }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunMode {
    Full,
    SimpleAttribution,
    SimpleLiteral,
    PureCondensate,
    Ideal,
}

impl RunMode {
    pub const ALL: [RunMode; 5] =
        [RunMode::Full, RunMode::SimpleAttribution, RunMode::SimpleLiteral, RunMode::PureCondensate, RunMode::Ideal];

    pub fn label(self) -> &'static str {
        match self {
            RunMode::Full => "full",
            RunMode::SimpleAttribution => "simple-attribution",
            RunMode::SimpleLiteral => "simple-literal",
            RunMode::PureCondensate => "pure-condensate",
            RunMode::Ideal => "ideal",
        }
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RunMode::ALL.into_iter().find(|m| m.label() == s).ok_or_else(|| Error::InvalidParameter {
            name: "mode",
            reason: format!(
                "unknown mode `{s}`; expected one of full, simple-attribution, simple-literal, pure-condensate, ideal"
            ),
        })
    }
}

/// Starting point with both `N_T` and `T` known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub n_c: f64,
    pub n_t: f64,
    pub temperature: f64,
}

impl InitialState {
    /// Solves for the temperature holding `n_t` thermal atoms.
    pub fn from_thermal_number(n_c: f64, n_t: f64, model: &Model) -> Result<Self> {
        let temperature = solve_initial_temperature(n_c, n_t, model)?;
        Ok(Self { n_c, n_t, temperature })
    }

    pub fn from_temperature(n_c: f64, temperature: f64, model: &Model) -> Result<Self> {
        let state = EquilibriumState::new(n_c, temperature)?;
        let opts = QuadOptions::with_rel_tol(PARTIALS_REL_TOL);
        let (n_t, _) = thermal_totals(state.n_c(), temperature, &model.trap, &model.species, &opts)?;
        Ok(Self { n_c, n_t, temperature })
    }
}

/// Temperature at which the equilibrium cloud around `n_c` condensate atoms holds `n_t` atoms.
///
/// Bisection in `[1 nK, 10 T_c]` to `1e-10` relative in `T`.
pub fn solve_initial_temperature(n_c: f64, n_t: f64, model: &Model) -> Result<f64> {
    crate::error::check_non_negative("N_C", n_c)?;
    crate::error::check_positive("N_T", n_t)?;
    let opts = QuadOptions::with_rel_tol(PARTIALS_REL_TOL);
    let count = |t: f64| thermal_totals(n_c, t, &model.trap, &model.species, &opts).map(|(n, _)| n);
    let (mut lo, mut hi) = (1e-9, 10.0 * critical_temperature(n_c + n_t, &model.trap));
    if count(lo)? > n_t || count(hi)? < n_t {
        return Err(Error::TemperatureBracket { lo, hi, target: n_t });
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if count(mid)? < n_t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Full-model right-hand side with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullRhs {
    pub n_c_dot: f64,
    pub t_dot: f64,
    pub n_t: f64,
    pub e_t: f64,
    pub mu: f64,
    pub losses: LossRates,
    /// `|det| / (‖row₁‖ ‖row₂‖)` with the columns scaled by `T` and `N_C`:
    /// the sine of the angle between the rows.
    pub normalized_det: f64,
    /// 2-norm condition number of the row-normalized matrix.
    pub condition: f64,
    /// Largest relative residual of the two equations after the solve.
    pub residual: f64,
    /// `∂N_T/∂N_C` came from one-sided differences.
    pub one_sided: bool,
}

pub fn full_rhs(state: &EquilibriumState, model: &Model) -> Result<FullRhs> {
    let partials = cloud_partials(state, &model.trap, &model.species)?;
    let profile = tf_profile(state.n_c(), &model.trap, &model.species)?;
    let cloud = ThermalCloud::Equilibrium { temperature: state.temperature() };
    let losses = compute_losses(&profile, &cloud, partials.n_t, partials.e_t, &model.species, &QuadOptions::default())?;
    let mu = profile.mu();

    // columns scaled to the relative rates Ṫ/T and Ṅ_C/N_C so both rows are unit-free in their unknowns
    let (t_scale, n_scale) = (state.temperature(), state.n_c().max(1.0));
    let a = [
        [partials.dnt_dt * t_scale, (partials.dnt_dnc + 1.0) * n_scale],
        [partials.det_dt * t_scale, (partials.det_dnc + mu) * n_scale],
    ];
    let b = [losses.ndot(), losses.edot()];
    let norm = |r: [f64; 2]| r[0].hypot(r[1]);
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let normalized_det = det.abs() / (norm(a[0]) * norm(a[1]));
    if normalized_det.is_nan() || normalized_det < SINGULAR_THRESHOLD {
        return Err(Error::SingularSystem { n_c: state.n_c(), temperature: state.temperature(), normalized_det });
    }
    let x_t = (b[0] * a[1][1] - a[0][1] * b[1]) / det;
    let x_n = (a[0][0] * b[1] - a[1][0] * b[0]) / det;

    let residual = (0..2)
        .map(|i| {
            let lhs = a[i][0] * x_t + a[i][1] * x_n;
            let scale = b[i].abs().max(a[i][0].abs() * x_t.abs()).max(a[i][1].abs() * x_n.abs());
            if scale > 0.0 {
                (lhs - b[i]).abs() / scale
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);

    // unit rows: singular values are sqrt(1 ± |cos θ|)
    let cos = (a[0][0] * a[1][0] + a[0][1] * a[1][1]).abs() / (norm(a[0]) * norm(a[1]));
    let condition = ((1.0 + cos) / (1.0 - cos).max(f64::MIN_POSITIVE)).sqrt();

    Ok(FullRhs {
        n_c_dot: x_n * n_scale,
        t_dot: x_t * t_scale,
        n_t: partials.n_t,
        e_t: partials.e_t,
        mu,
        losses,
        normalized_det,
        condition,
        residual,
        one_sided: partials.one_sided,
    })
}

/// Non-thermalizing model at fixed temperature with a frozen cloud shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleModel {
    model: Model,
    temperature: f64,
    mu0: f64,
    n_t0: f64,
    e_t0: f64,
    attribution: AttributionMode,
}

/// `(Ṅ_C, Ṅ_T)` of the simple model with the losses that produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleRhs {
    pub n_c_dot: f64,
    pub n_t_dot: f64,
    pub losses: LossRates,
    pub mu: f64,
    pub e_t: f64,
}

impl SimpleModel {
    pub fn new(model: &Model, initial: &InitialState, attribution: AttributionMode) -> Result<Self> {
        let profile = tf_profile(initial.n_c, &model.trap, &model.species)?;
        let e_t0 = if initial.n_t > 0.0 {
            let opts = QuadOptions::with_rel_tol(PARTIALS_REL_TOL);
            thermal_totals(initial.n_c, initial.temperature, &model.trap, &model.species, &opts)?.1
        } else {
            0.0
        };
        Ok(Self {
            model: *model,
            temperature: initial.temperature,
            mu0: profile.mu_cloud(),
            n_t0: initial.n_t,
            e_t0,
            attribution,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    fn cloud(&self, n_t: f64) -> ThermalCloud {
        if self.n_t0 > 0.0 {
            ThermalCloud::Frozen { temperature: self.temperature, mu: self.mu0, scale: n_t / self.n_t0 }
        } else {
            ThermalCloud::Empty
        }
    }

    pub fn rhs(&self, n_c: f64, n_t: f64) -> Result<SimpleRhs> {
        crate::error::check_non_negative("N_C", n_c)?;
        crate::error::check_non_negative("N_T", n_t)?;
        let profile = tf_profile(n_c, &self.model.trap, &self.model.species)?;
        let scale = if self.n_t0 > 0.0 { n_t / self.n_t0 } else { 0.0 };
        let e_t = scale * self.e_t0;
        let losses =
            compute_losses(&profile, &self.cloud(n_t), n_t, e_t, &self.model.species, &QuadOptions::default())?;
        let (n_c_dot, n_t_dot) = losses.attributed(self.attribution);
        Ok(SimpleRhs { n_c_dot, n_t_dot, losses, mu: profile.mu(), e_t })
    }
}

/// `(Ṅ_C, Ṅ_T)` of the simple model.
pub fn simple_rhs(model: &SimpleModel, n_c: f64, n_t: f64) -> Result<(f64, f64)> {
    model.rhs(n_c, n_t).map(|r| (r.n_c_dot, r.n_t_dot))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub rtol: f64,
    /// Absolute tolerance on atom numbers.
    pub atol_atoms: f64,
    /// Absolute tolerance on temperature, K.
    pub atol_temperature: f64,
    pub max_steps: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self { rtol: 1e-8, atol_atoms: 1.0, atol_temperature: 1e-9, max_steps: 200_000 }
    }
}

/// One output sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub n_c: f64,
    pub n_t: f64,
    /// K; zero for a pure condensate.
    pub temperature: f64,
    pub mu: f64,
    pub e_t: f64,
    pub losses: LossRates,
    /// Condition number of the reparametrization (full model only).
    pub condition: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// `N_C` fell below one atom.
    CondensateDepleted,
    /// `T` came within 0.1% of the ideal-gas `T_c` of the remaining atoms.
    CriticalTemperature,
    Failed(Error),
}

impl Termination {
    pub fn is_failure(&self) -> bool {
        matches!(self, Termination::Failed(_))
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::Completed => f.write_str("completed"),
            Termination::CondensateDepleted => f.write_str("condensate depleted (N_C < 1)"),
            Termination::CriticalTemperature => f.write_str("critical temperature reached"),
            Termination::Failed(e) => write!(f, "failed: {e}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub mode: RunMode,
    pub points: Vec<TrajectoryPoint>,
    pub termination: Termination,
    pub stats: Stats,
}

impl Trajectory {
    /// e-folding time of `N_C`, see [`lifetime`].
    pub fn lifetime(&self) -> Option<f64> {
        lifetime(&self.points)
    }

    pub fn max_condition(&self) -> Option<f64> {
        self.points.iter().filter_map(|p| p.condition).reduce(f64::max)
    }
}

/// First time `N_C` drops to `N_C(0)/e`, linearly interpolated between samples.
pub fn lifetime(points: &[TrajectoryPoint]) -> Option<f64> {
    let first = points.first()?;
    let target = first.n_c / std::f64::consts::E;
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        (a.n_c > target && b.n_c <= target).then(|| a.t + (b.t - a.t) * (a.n_c - target) / (a.n_c - b.n_c))
    })
}

/// Integrates `mode` from `initial` to `t_end`, sampling at the times in `grid`.
pub fn integrate(
    model: &Model,
    initial: &InitialState,
    mode: RunMode,
    t_end: f64,
    grid: &[f64],
    opts: &IntegrationOptions,
) -> Trajectory {
    let result = match mode {
        RunMode::Full => integrate_full(model, initial, t_end, grid, opts),
        RunMode::SimpleAttribution => integrate_simple(model, initial, AttributionMode::Attribution, t_end, grid, opts),
        RunMode::SimpleLiteral => integrate_simple(model, initial, AttributionMode::Literal, t_end, grid, opts),
        RunMode::PureCondensate => {
            let pure = InitialState { n_t: 0.0, temperature: initial.temperature, ..*initial };
            integrate_simple(model, &pure, AttributionMode::Attribution, t_end, grid, opts).map(|mut tr| {
                tr.points.iter_mut().for_each(|p| p.temperature = 0.0);
                tr
            })
        }
        RunMode::Ideal => integrate_ideal(model, initial, t_end, grid, opts),
    };
    match result {
        Ok(mut trajectory) => {
            trajectory.mode = mode;
            trajectory
        }
        Err(e) => Trajectory { mode, points: Vec::new(), termination: Termination::Failed(e), stats: Stats::default() },
    }
}

fn event_tol(model: &Model, t_end: f64) -> f64 {
    1e-6 * model.trap.tau().min(t_end)
}

fn termination<E: Into<Error>>(status: Status<E>, event_kinds: &[Termination]) -> Termination {
    match status {
        Status::Completed => Termination::Completed,
        Status::Event { index } => event_kinds[index].clone(),
        Status::Failed(e) => Termination::Failed(e.into()),
        Status::StepUnderflow { t, h } => Termination::Failed(Error::StepUnderflow { t, h }),
        Status::MaxSteps { t } => Termination::Failed(Error::TooManySteps { t }),
    }
}

fn integrate_full(
    model: &Model,
    initial: &InitialState,
    t_end: f64,
    grid: &[f64],
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    let rhs = |_t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let r = full_rhs(&EquilibriumState::new(y[0], y[1])?, model)?;
        Ok([r.n_c_dot, r.t_dot])
    };
    let n_t_of = |y: &[f64; 2]| -> Result<f64> {
        let opts = QuadOptions::with_rel_tol(PARTIALS_REL_TOL);
        Ok(thermal_totals(y[0].max(0.0), y[1], &model.trap, &model.species, &opts)?.0)
    };
    let tol = event_tol(model, t_end);
    let events = [
        Event { g: Box::new(|_t, y: &[f64; 2]| Ok(y[0] - 1.0)), tol },
        Event {
            g: Box::new(|_t, y: &[f64; 2]| {
                let total = y[0].max(0.0) + n_t_of(y)?;
                Ok(0.999 * critical_temperature(total, &model.trap) - y[1])
            }),
            tol,
        },
    ];
    let mut ode = OdeOptions::new(opts.rtol, [opts.atol_atoms, opts.atol_temperature]);
    ode.max_steps = opts.max_steps;
    let solution = dopri5(rhs, 0.0, [initial.n_c, initial.temperature], t_end, grid, &events, &ode);

    let mut points = Vec::with_capacity(solution.samples.len());
    for &(t, [n_c, temperature]) in &solution.samples {
        let r = full_rhs(&EquilibriumState::new(n_c.max(0.0), temperature)?, model)?;
        points.push(TrajectoryPoint {
            t,
            n_c,
            n_t: r.n_t,
            temperature,
            mu: r.mu,
            e_t: r.e_t,
            losses: r.losses,
            condition: Some(r.condition),
        });
    }
    let termination =
        termination(solution.status, &[Termination::CondensateDepleted, Termination::CriticalTemperature]);
    Ok(Trajectory { mode: RunMode::Full, points, termination, stats: solution.stats })
}

fn integrate_simple(
    model: &Model,
    initial: &InitialState,
    attribution: AttributionMode,
    t_end: f64,
    grid: &[f64],
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    let simple = SimpleModel::new(model, initial, attribution)?;
    let rhs = |_t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let (a, b) = simple_rhs(&simple, y[0], y[1])?;
        Ok([a, b])
    };
    let events = [Event { g: Box::new(|_t, y: &[f64; 2]| Ok(y[0] - 1.0)), tol: event_tol(model, t_end) }];
    let mut ode = OdeOptions::new(opts.rtol, [opts.atol_atoms; 2]);
    ode.max_steps = opts.max_steps;
    let solution = dopri5(rhs, 0.0, [initial.n_c, initial.n_t], t_end, grid, &events, &ode);

    let mut points = Vec::with_capacity(solution.samples.len());
    for &(t, [n_c, n_t]) in &solution.samples {
        let r = simple.rhs(n_c.max(0.0), n_t.max(0.0))?;
        points.push(TrajectoryPoint {
            t,
            n_c,
            n_t,
            temperature: simple.temperature(),
            mu: r.mu,
            e_t: r.e_t,
            losses: r.losses,
            condition: None,
        });
    }
    let termination = termination(solution.status, &[Termination::CondensateDepleted]);
    Ok(Trajectory { mode: RunMode::SimpleAttribution, points, termination, stats: solution.stats })
}

fn integrate_ideal(
    model: &Model,
    initial: &InitialState,
    t_end: f64,
    grid: &[f64],
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    let trap = model.trap;
    let rhs = |_t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let (a, b) = ideal_decay_rhs(IdealState { n_c: y[0], n_t: y[1] }, &trap, IdealRate::Simplified);
        Ok([a, b])
    };
    let events = [Event { g: Box::new(|_t, y: &[f64; 2]| Ok(y[0] - 1.0)), tol: event_tol(model, t_end) }];
    let mut ode = OdeOptions::new(opts.rtol, [opts.atol_atoms; 2]);
    ode.max_steps = opts.max_steps;
    let solution = dopri5(rhs, 0.0, [initial.n_c, initial.n_t], t_end, grid, &events, &ode);

    let mu = trap.ground_state_energy();
    let points = solution
        .samples
        .iter()
        .map(|&(t, [n_c, n_t])| {
            let e_t = thermal_energy(n_t.max(0.0), &trap);
            TrajectoryPoint {
                t,
                n_c,
                n_t,
                temperature: temperature_for_thermal_number(n_t.max(0.0), &trap),
                mu,
                e_t,
                losses: LossRates::background_only(n_c, n_t, e_t, mu, trap.tau()),
                condition: None,
            }
        })
        .collect();
    let termination = termination(solution.status, &[Termination::CondensateDepleted]);
    Ok(Trajectory { mode: RunMode::Ideal, points, termination, stats: solution.stats })
}

/// `n` equally spaced times covering `[0, t_end]`.
pub fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect(),
    }
}
