use bec_decay::{
    full_rhs, integrate, simple_rhs, uniform_grid, AttributionMode, EquilibriumState, InitialState, IntegrationOptions,
    Model, RunMode, SimpleModel, SpeciesParams, Termination, TrapConfig,
};

fn model() -> Model {
    Model::new(TrapConfig::from_hz(1090.0, 1090.0, 115.0, 35.0).unwrap(), SpeciesParams::metastable_helium())
}

fn fig1() -> InitialState {
    InitialState::from_thermal_number(5e5, 5e5, &model()).unwrap()
}

fn rk4(model: &SimpleModel, y0: [f64; 2], t_end: f64, steps: usize) -> [f64; 2] {
    let h = t_end / steps as f64;
    let f = |y: [f64; 2]| {
        let (a, b) = simple_rhs(model, y[0], y[1]).unwrap();
        [a, b]
    };
    let mut y = y0;
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

#[test]
fn simple_model_matches_fixed_step_rk4() {
    let (m, init) = (model(), fig1());
    let t_end = 0.5;
    for (mode, attribution) in
        [(RunMode::SimpleAttribution, AttributionMode::Attribution), (RunMode::SimpleLiteral, AttributionMode::Literal)]
    {
        let simple = SimpleModel::new(&m, &init, attribution).unwrap();
        let coarse = rk4(&simple, [init.n_c, init.n_t], t_end, 250);
        let fine = rk4(&simple, [init.n_c, init.n_t], t_end, 2500);
        assert!((coarse[0] / fine[0] - 1.0).abs() < 1e-9, "RK4 not converged");
        let opts = IntegrationOptions { rtol: 1e-10, atol_atoms: 1e-6, ..Default::default() };
        let tr = integrate(&m, &init, mode, t_end, &[t_end], &opts);
        let last = tr.points.last().unwrap();
        assert!((last.n_c / fine[0] - 1.0).abs() < 1e-6, "{mode}: {} vs {}", last.n_c, fine[0]);
        assert!((last.n_t / fine[1] - 1.0).abs() < 1e-6);
    }
}

#[test]
fn tighter_tolerance_changes_little() {
    let (m, init) = (model(), fig1());
    let t_end = 1.0;
    for mode in [RunMode::Full, RunMode::SimpleAttribution, RunMode::PureCondensate] {
        let loose = integrate(&m, &init, mode, t_end, &[t_end], &IntegrationOptions::default());
        let tight =
            integrate(&m, &init, mode, t_end, &[t_end], &IntegrationOptions { rtol: 1e-9, ..Default::default() });
        let (a, b) = (loose.points.last().unwrap().n_c, tight.points.last().unwrap().n_c);
        assert!((a / b - 1.0).abs() < 1e-5, "{mode}: {a} vs {b}");
    }
}

#[test]
fn decay_is_monotone_in_every_mode() {
    let (m, init) = (model(), fig1());
    let grid = uniform_grid(3.0, 601);
    for mode in
        [RunMode::Full, RunMode::SimpleAttribution, RunMode::SimpleLiteral, RunMode::PureCondensate, RunMode::Ideal]
    {
        let tr = integrate(&m, &init, mode, 3.0, &grid, &IntegrationOptions::default());
        assert!(!tr.termination.is_failure(), "{mode}: {}", tr.termination);
        for w in tr.points.windows(2) {
            assert!(w[1].n_c <= w[0].n_c, "{mode}: N_C rose at t = {}", w[1].t);
            assert!(w[1].n_c + w[1].n_t < w[0].n_c + w[0].n_t, "{mode}: N rose at t = {}", w[1].t);
        }
    }
}

#[test]
fn full_model_solve_residuals_stay_small() {
    let m = model();
    let tr = integrate(&m, &fig1(), RunMode::Full, 2.0, &uniform_grid(2.0, 21), &IntegrationOptions::default());
    for p in tr.points.iter().filter(|p| p.n_c > 1.0) {
        let rhs = full_rhs(&EquilibriumState::new(p.n_c, p.temperature).unwrap(), &m).unwrap();
        assert!(rhs.residual < 1e-10, "residual {} at t = {}", rhs.residual, p.t);
        assert!(rhs.normalized_det > 1e-10);
        assert!(rhs.condition.is_finite());
    }
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    let (m, init) = (model(), fig1());
    let grid = uniform_grid(1.0, 101);
    let a = integrate(&m, &init, RunMode::Full, 1.0, &grid, &IntegrationOptions::default());
    let b = integrate(&m, &init, RunMode::Full, 1.0, &grid, &IntegrationOptions::default());
    assert_eq!(a.points.len(), b.points.len());
    for (p, q) in a.points.iter().zip(&b.points) {
        assert_eq!(p.n_c.to_bits(), q.n_c.to_bits());
        assert_eq!(p.temperature.to_bits(), q.temperature.to_bits());
        assert_eq!(p.losses, q.losses);
    }
}

#[test]
fn full_run_ends_by_depletion_or_critical_temperature() {
    let m = model();
    let fig2 = InitialState::from_thermal_number(5e5, 2e6, &m).unwrap();
    let tr = integrate(&m, &fig2, RunMode::Full, 10.0, &uniform_grid(10.0, 101), &IntegrationOptions::default());
    assert!(matches!(tr.termination, Termination::CondensateDepleted | Termination::CriticalTemperature));
    let last = tr.points.last().unwrap();
    assert!(last.t < 10.0);
}
