#![allow(dead_code)]

use cvres::states::{random_state, RandomStateParams};
use cvres::{GaussianState, ModeTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mode table with `1..=max_f` frequencies and `1..=max_s` spatial modes,
/// chosen from the seed.
pub fn table_from_seed(seed: u64, max_f: usize, max_s: usize) -> ModeTable {
    let mf = 1 + (seed as usize) % max_f;
    let ms = 1 + (seed as usize / max_f) % max_s;
    let omegas: Vec<f64> = (0..mf).map(|k| 1.0 + 0.75 * k as f64).collect();
    ModeTable::new(&omegas, ms).unwrap()
}

pub fn mixed_state(seed: u64, max_f: usize, max_s: usize) -> GaussianState {
    let modes = table_from_seed(seed, max_f, max_s);
    let params = RandomStateParams { r_max: 2.0, nbar_max: 3.0, displacement_scale: 1.0 };
    random_state(&modes, &params, &mut rng(seed))
}

pub fn pure_state(modes: &ModeTable, seed: u64, r_max: f64) -> GaussianState {
    let params = RandomStateParams { r_max, nbar_max: 0.0, displacement_scale: 1.0 };
    random_state(modes, &params, &mut rng(seed))
}
