mod common;

use cvres::maximizers::{
    balancing_beam_splitter, equidistribution_certificate, passive_search, qft_equidistribute, Objective,
    SearchOptions,
};
use cvres::quantifiers::{coherence_max, entanglement_pure};
use cvres::states::{thermal_state, uniform_state, UniformSpec};
use cvres::symplectic::{random_passive, random_symplectic};
use cvres::{GaussianState, ModeTable};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::Rng;

/// Zero-displacement product of random single-mode states.
fn product_state(modes: &ModeTable, seed: u64) -> GaussianState {
    let mut rng = common::rng(seed);
    let one = ModeTable::single_frequency(1).unwrap();
    let n = modes.num_modes();
    let mut v = nalgebra::DMatrix::zeros(2 * n, 2 * n);
    for m in 0..n {
        let s = random_symplectic(&one, 1.5, &mut rng);
        let nu = 1.0 + 2.0 * rng.random::<f64>();
        let block = s.matrix() * s.matrix().transpose() * nu;
        v.view_mut((2 * m, 2 * m), (2, 2)).copy_from(&block);
    }
    GaussianState::new(modes.clone(), DVector::zeros(2 * n), v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn qft_reaches_the_ceiling_on_products(seed in any::<u64>()) {
        let modes = common::table_from_seed(seed, 2, 4);
        let s = product_state(&modes, seed);
        let out = qft_equidistribute(&s, 1e-12).unwrap();
        prop_assert!(out.gap.abs() <= 1e-8);
        prop_assert!(equidistribution_certificate(&out.output, 1e-10).iter().all(|c| c.equidistributed));
    }

    #[test]
    fn balancing_reaches_the_ceiling(seed in any::<u64>()) {
        let s = {
            let modes = ModeTable::single_frequency(2).unwrap();
            let params = cvres::states::RandomStateParams { r_max: 2.0, nbar_max: 3.0, displacement_scale: 1.0 };
            cvres::states::random_state(&modes, &params, &mut common::rng(seed))
        };
        let out = balancing_beam_splitter(&s).unwrap();
        prop_assert!(out.gap.abs() <= 1e-6, "{}", out.gap);
        prop_assert!(!out.used_fallback);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn search_objectives_respect_the_ceiling(seed in any::<u64>()) {
        let s = common::mixed_state(seed, 2, 2);
        let options = SearchOptions { budget: 16, seed, refine: false, sweeps: 0 };
        for objective in [Objective::Coherence, Objective::Discord] {
            let out = passive_search(&s, objective, &options).unwrap();
            prop_assert!(out.achieved <= coherence_max(&s).unwrap() + 1e-8);
            let before = s.mean_occupation().per_frequency;
            let after = out.output.mean_occupation().per_frequency;
            for (a, b) in before.iter().zip(&after) {
                prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a));
            }
        }
    }
}

#[test]
fn random_passive_never_beats_ceiling() {
    for seed in 0..50 {
        let s = common::mixed_state(seed, 2, 3);
        let cmax = coherence_max(&s).unwrap();
        let mut rng = common::rng(seed + 7);
        for _ in 0..20 {
            let out = random_passive(s.modes(), &mut rng).apply(&s);
            assert!(cvres::quantifiers::coherence_rel(&out).unwrap() <= cmax + 1e-8);
        }
    }
}

#[test]
fn search_is_monotone_in_budget() {
    let s = common::mixed_state(11, 1, 3);
    let mut last = f64::NEG_INFINITY;
    for budget in [1, 4, 16, 64] {
        let options = SearchOptions { budget, seed: 9, refine: false, sweeps: 0 };
        let out = passive_search(&s, Objective::Discord, &options).unwrap();
        assert!(out.achieved >= last);
        last = out.achieved;
    }
}

#[test]
fn entanglement_search_on_pure_state() {
    let modes = ModeTable::single_frequency(3).unwrap();
    let s = common::pure_state(&modes, 21, 1.0);
    let part = vec![0];
    let options = SearchOptions { budget: 32, seed: 1, refine: true, sweeps: 2 };
    let out = passive_search(&s, Objective::EntanglementPure(part.clone()), &options).unwrap();
    assert!(out.achieved + 1e-12 >= entanglement_pure(&s, &part).unwrap());
    assert!(out.achieved <= out.target + 1e-8);
}

#[test]
fn uniform_state_is_certified() {
    let modes = ModeTable::new(&[1.0, 3.0], 3).unwrap();
    let u = uniform_state(&UniformSpec::new(modes.clone(), vec![1.2, 0.4]).unwrap()).unwrap();
    assert!(equidistribution_certificate(&u, 1e-12).iter().all(|c| c.equidistributed));
    let t = thermal_state(&modes, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let cert = equidistribution_certificate(&t, 1e-9);
    assert!(!cert[0].equidistributed && cert[1].equidistributed);
}
