//! Runs every mode of a configuration and writes the result files.

use std::path::{Path, PathBuf};
use std::thread;

use bec_decay::condensate::{gp_solve, tf_profile, GpGrid};
use bec_decay::{
    integrate, integrate_cloud, uniform_grid, EquilibriumState, InitialState, IntegrationOptions, RunMode, Trajectory,
};
use thiserror::Error;

use crate::config::{ConfigError, InitialCloud, ProfileChoice, RunConfig};
use crate::output::{append_rows, format_float, write_profile, write_rows, write_trajectory};
use crate::plot::plot_runs;

pub const LIFETIME_FILE: &str = "lifetimes.csv";
pub const LIFETIME_HEADER: [&str; 7] = ["scenario", "mode", "N_C0", "N_T0", "T0_K", "lifetime_s", "termination"];
const GP_HEADER: [&str; 11] = [
    "t_s",
    "N_C",
    "T_K",
    "mu_TF_J",
    "mu_GP_J",
    "N_T_TF",
    "N_T_GP",
    "E_T_TF_J",
    "E_T_GP_J",
    "clamped_GP",
    "gp_iterations",
];
const GP_SAMPLES: usize = 5;
const GP_MIN_ATOMS: f64 = 1000.0;
const PROFILE_POINTS: usize = 201;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub mode_override: Option<RunMode>,
    pub out_dir: Option<PathBuf>,
    pub lifetime: bool,
    pub profile: Option<ProfileChoice>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Numerical { context: String, source: bec_decay::Error },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical { .. } => 3,
            RunError::Io { .. } => 1,
        }
    }
}

fn numerical(context: impl Into<String>) -> impl FnOnce(bec_decay::Error) -> RunError {
    let context = context.into();
    move |source| RunError::Numerical { context, source }
}

/// Outcome of a successful scenario run.
#[derive(Debug)]
pub struct ScenarioReport {
    pub initial: InitialState,
    pub trajectories: Vec<Trajectory>,
    pub files: Vec<PathBuf>,
}

impl ScenarioReport {
    pub fn trajectory(&self, mode: RunMode) -> Option<&Trajectory> {
        self.trajectories.iter().find(|t| t.mode == mode)
    }
}

/// Tracks written files so a failed run leaves nothing half-finished behind.
struct Outputs {
    files: Vec<PathBuf>,
}

impl Outputs {
    fn write(&mut self, path: PathBuf, f: impl FnOnce(&Path) -> std::io::Result<()>) -> Result<(), RunError> {
        self.files.push(path.clone());
        f(&path).map_err(|source| RunError::Io { path, source })
    }

    fn remove_all(&self) {
        for f in &self.files {
            let _ = std::fs::remove_file(f);
        }
    }
}

pub fn run_scenario(config: &RunConfig, opts: &RunOptions) -> Result<ScenarioReport, RunError> {
    let mut config = config.clone();
    if let Some(mode) = opts.mode_override {
        config.modes = vec![mode];
    }
    if let Some(profile) = opts.profile {
        config.profile = profile;
    }
    if let Some(dir) = &opts.out_dir {
        config.output_dir = dir.clone();
    }
    config.validate()?;
    let model = config.model()?;

    let initial = match config.initial_cloud {
        InitialCloud::ThermalNumber(n_t) => InitialState::from_thermal_number(config.n_c, n_t, &model),
        InitialCloud::Temperature(t) => InitialState::from_temperature(config.n_c, t, &model),
    }
    .map_err(numerical("initial state"))?;

    let grid = uniform_grid(config.t_end_s, config.n_out);
    let integration = IntegrationOptions::default();
    let (model_ref, initial_ref, grid_ref, integration_ref) = (&model, &initial, &grid, &integration);
    let t_end = config.t_end_s;
    let trajectories: Vec<Trajectory> = thread::scope(|s| {
        let handles: Vec<_> = config
            .modes
            .iter()
            .map(|&mode| s.spawn(move || integrate(model_ref, initial_ref, mode, t_end, grid_ref, integration_ref)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("integration thread panicked")).collect()
    });
    for t in &trajectories {
        if let bec_decay::Termination::Failed(e) = &t.termination {
            return Err(RunError::Numerical { context: format!("mode {}", t.mode), source: e.clone() });
        }
    }

    std::fs::create_dir_all(&config.output_dir)
        .map_err(|source| RunError::Io { path: config.output_dir.clone(), source })?;
    let mut outputs = Outputs { files: Vec::new() };
    match write_outputs(&config, &model, &initial, &trajectories, &mut outputs) {
        Ok(()) => {}
        Err(e) => {
            outputs.remove_all();
            return Err(e);
        }
    }
    if opts.lifetime {
        let path = config.output_dir.join(LIFETIME_FILE);
        let rows: Vec<Vec<String>> = trajectories
            .iter()
            .map(|t| {
                vec![
                    config.name.clone(),
                    t.mode.to_string(),
                    format_float(initial.n_c),
                    format_float(initial.n_t),
                    format_float(initial.temperature),
                    t.lifetime().map(format_float).unwrap_or_default(),
                    t.termination.to_string(),
                ]
            })
            .collect();
        append_rows(&path, &LIFETIME_HEADER, &rows).map_err(|source| RunError::Io { path: path.clone(), source })?;
        outputs.files.push(path);
    }
    Ok(ScenarioReport { initial, trajectories, files: outputs.files })
}

fn write_outputs(
    config: &RunConfig,
    model: &bec_decay::Model,
    initial: &InitialState,
    trajectories: &[Trajectory],
    outputs: &mut Outputs,
) -> Result<(), RunError> {
    let dir = &config.output_dir;
    for t in trajectories {
        outputs.write(dir.join(format!("{}_{}.csv", config.name, t.mode)), |p| write_trajectory(p, t))?;
    }

    if initial.n_c > 0.0 {
        let state = EquilibriumState::new(initial.n_c, initial.temperature).map_err(numerical("profile"))?;
        let profile = tf_profile(initial.n_c, &model.trap, &model.species).map_err(numerical("profile"))?;
        let summary = integrate_cloud(&state, &profile).map_err(numerical("profile"))?;
        outputs
            .write(dir.join(format!("{}_profile.csv", config.name)), |p| write_profile(p, &summary, PROFILE_POINTS))?;
    }

    if config.plot {
        let runs: Vec<(RunMode, &Trajectory)> = trajectories.iter().map(|t| (t.mode, t)).collect();
        outputs.write(dir.join(format!("{}.svg", config.name)), |p| {
            plot_runs(p, &runs, config.t_end_s).map_err(|e| std::io::Error::other(e.to_string()))
        })?;
    }

    if config.profile == ProfileChoice::Gp {
        if let Some(full) = trajectories.iter().find(|t| t.mode == RunMode::Full) {
            let rows = gp_comparison(full, model)?;
            outputs
                .write(dir.join(format!("{}_gp_comparison.csv", config.name)), |p| write_rows(p, &GP_HEADER, &rows))?;
        }
    }
    Ok(())
}

/// Thomas–Fermi against GP cloud totals along the full trajectory.
fn gp_comparison(full: &Trajectory, model: &bec_decay::Model) -> Result<Vec<Vec<String>>, RunError> {
    let eligible: Vec<_> = full.points.iter().filter(|p| p.n_c >= GP_MIN_ATOMS).collect();
    if eligible.is_empty() {
        return Ok(Vec::new());
    }
    let stride = (eligible.len() - 1).max(1) as f64 / (GP_SAMPLES - 1) as f64;
    let mut picks: Vec<usize> = (0..GP_SAMPLES).map(|k| (k as f64 * stride).round() as usize).collect();
    picks.retain(|&i| i < eligible.len());
    picks.dedup();

    let grid = GpGrid::default();
    let rows: Vec<Result<Vec<String>, RunError>> = thread::scope(|s| {
        let handles: Vec<_> = picks
            .iter()
            .map(|&i| {
                let p = eligible[i];
                let grid = &grid;
                s.spawn(move || -> Result<Vec<String>, RunError> {
                    let ctx = || format!("gp comparison at t = {} s", p.t);
                    let state = EquilibriumState::new(p.n_c, p.temperature).map_err(numerical(ctx()))?;
                    let tf = tf_profile(p.n_c, &model.trap, &model.species).map_err(numerical(ctx()))?;
                    let gp = gp_solve(p.n_c, &model.trap, &model.species, grid).map_err(numerical(ctx()))?;
                    let iterations = gp.gp_density().map_or(0, |d| d.iterations());
                    let tf_sum = integrate_cloud(&state, &tf).map_err(numerical(ctx()))?;
                    let gp_sum = integrate_cloud(&state, &gp).map_err(numerical(ctx()))?;
                    let mut row: Vec<String> = [
                        p.t,
                        p.n_c,
                        p.temperature,
                        tf.mu_cloud(),
                        gp.mu_cloud(),
                        tf_sum.n_t(),
                        gp_sum.n_t(),
                        tf_sum.e_t(),
                        gp_sum.e_t(),
                    ]
                    .into_iter()
                    .map(format_float)
                    .collect();
                    row.push(gp_sum.clamped().to_string());
                    row.push(iterations.to_string());
                    Ok(row)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("gp thread panicked")).collect()
    });
    rows.into_iter().collect()
}
