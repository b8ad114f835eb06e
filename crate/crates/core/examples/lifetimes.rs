//! Prints condensate lifetimes of every run mode for two thermal cloud sizes.

use bec_decay::{integrate, uniform_grid, InitialState, IntegrationOptions, Model, RunMode};
use bec_decay::{SpeciesParams, TrapConfig};

fn main() -> Result<(), bec_decay::Error> {
    let model = Model::new(TrapConfig::from_hz(1090.0, 1090.0, 115.0, 35.0)?, SpeciesParams::metastable_helium());
    let grid = uniform_grid(4.0, 4001);
    let modes = [RunMode::Full, RunMode::SimpleAttribution, RunMode::SimpleLiteral, RunMode::PureCondensate];

    for n_t in [5e5, 2e6] {
        let initial = InitialState::from_thermal_number(5e5, n_t, &model)?;
        println!("N_C = 5e5, N_T = {n_t:e}, T(0) = {:.3} uK", initial.temperature * 1e6);
        let mut full = None;
        for mode in modes {
            let run = integrate(&model, &initial, mode, 4.0, &grid, &IntegrationOptions::default());
            let lifetime = run.lifetime().expect("condensate decays within 4 s");
            let reference = *full.get_or_insert(lifetime);
            println!("  {:<18} {lifetime:.4} s  ({:.2}x full)", mode.label(), lifetime / reference);
        }
    }
    Ok(())
}
