//! Randomized properties of the dephased array dynamics: the 3x3 transfer
//! matrix against the full matrix dynamics, geometric contraction of the
//! sector coordinates, entropy and trace behavior along trajectories, and
//! the finite-temperature fixed points of both injection modes.

use std::sync::Arc;

use nalgebra::Vector3;
use pairstat::basis::{Statistics, TwoParticleBasis};
use pairstat::density::DensityMatrix;
use pairstat::dephasing::{
    iterate_to_equilibrium, recursion_ratios, step, transfer_matrix_3, SectorDistribution,
    DEFAULT_MAX_STEPS, DEFAULT_TOLERANCE,
};
use pairstat::scattering::{lift_two_particle, BeamSplitter};
use pairstat::spectrum::{Beta, LevelSpectrum};
use pairstat::thermal::{
    p11_numeric, p11_product_injection_limit, product_injection_matrix, thermal_density_matrix,
    thermal_sector_injection_matrix,
};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_4, LN_2, TAU};

fn statistics() -> impl Strategy<Value = Statistics> {
    prop_oneof![Just(Statistics::Boson), Just(Statistics::Fermion)]
}

/// Splitters bounded away from the degenerate R in {0, 1} boundary.
fn mixing_splitter() -> impl Strategy<Value = BeamSplitter> {
    (0.01..0.99f64, 0.0..TAU).prop_map(|(reflectance, phase)| {
        BeamSplitter::from_angles(reflectance.sqrt().acos(), phase)
    })
}

fn boson1() -> Arc<TwoParticleBasis> {
    Arc::new(TwoParticleBasis::new(Statistics::Boson, 1).unwrap())
}

/// Random normalized diagonal weights over a basis of the given dimension.
fn diagonal_weights(dimension: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..1.0f64, dimension).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    // the full matrix dynamics restricted to one-level boson diagonals IS
    // the 3x3 transfer matrix, step by step
    #[test]
    fn transfer_matrix_matches_full_dynamics(
        splitter in mixing_splitter(),
        start in diagonal_weights(3),
    ) {
        let basis = boson1();
        let r = splitter.reflectance();
        let t = splitter.transmittance();
        let m = transfer_matrix_3(r, t).unwrap();
        let u = lift_two_particle(&splitter, &basis);

        let mut rho = DensityMatrix::from_diagonal(Arc::clone(&basis), start.clone()).unwrap();
        let d = SectorDistribution::from_density(&rho);
        let mut sector = Vector3::new(d.a, d.b, d.c);
        for _ in 0..20 {
            rho = step(&rho, &u).unwrap();
            sector = m * sector;
            let full = SectorDistribution::from_density(&rho);
            prop_assert!((full.a - sector[0]).abs() <= 1e-12);
            prop_assert!((full.b - sector[1]).abs() <= 1e-12);
            prop_assert!((full.c - sector[2]).abs() <= 1e-12);
        }
    }

    // the coordinates a - b and a + b - 2c contract by exactly the two
    // closed-form ratios at every step
    #[test]
    fn contraction_ratios_are_exact(
        splitter in mixing_splitter(),
        start in diagonal_weights(3),
    ) {
        let basis = boson1();
        let r = splitter.reflectance();
        let t = splitter.transmittance();
        let (imbalance_ratio, spread_ratio) = recursion_ratios(r, t).unwrap();
        let u = lift_two_particle(&splitter, &basis);
        let mut rho = DensityMatrix::from_diagonal(Arc::clone(&basis), start).unwrap();
        let mut prev = SectorDistribution::from_density(&rho);
        for _ in 0..12 {
            rho = step(&rho, &u).unwrap();
            let next = SectorDistribution::from_density(&rho);
            let imbalance = prev.a - prev.b;
            if imbalance.abs() > 1e-4 {
                let measured = (next.a - next.b) / imbalance;
                prop_assert!((measured - imbalance_ratio).abs() <= 1e-10);
            }
            let spread = prev.a + prev.b - 2.0 * prev.c;
            if spread.abs() > 1e-4 {
                let measured = (next.a + next.b - 2.0 * next.c) / spread;
                prop_assert!((measured - spread_ratio).abs() <= 1e-10);
            }
            prev = next;
        }
    }

    #[test]
    fn trajectories_preserve_trace_positivity_and_grow_entropy(
        statistics in statistics(),
        levels in 1usize..=4,
        splitter in mixing_splitter(),
        seed in any::<u64>(),
    ) {
        let basis = Arc::new(TwoParticleBasis::new(statistics, levels).unwrap());
        // deterministic pseudo-random start from the seed
        let dim = basis.dimension();
        let raw: Vec<f64> = (0..dim)
            .map(|i| {
                let x = seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64);
                0.05 + (x >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let rho0 = DensityMatrix::from_diagonal(Arc::clone(&basis), weights).unwrap();
        let trajectory =
            iterate_to_equilibrium(&rho0, &splitter, 60, DEFAULT_TOLERANCE).unwrap();
        for pair in trajectory.steps.windows(2) {
            prop_assert!(pair[1].entropy >= pair[0].entropy - 1e-10);
        }
        for record in &trajectory.steps {
            let trace: f64 = record.diagonal.iter().sum();
            prop_assert!((trace - 1.0).abs() <= 1e-10);
            prop_assert!(record.diagonal.iter().all(|w| *w >= -1e-10));
            prop_assert!((0.0..=1.0 + 1e-12).contains(&record.p11));
        }
    }

    // with thermal-sector injection the array settles exactly onto the
    // Gibbs state of the same truncated basis
    #[test]
    fn sector_injected_array_lands_on_the_gibbs_state(
        statistics in statistics(),
        levels in 1usize..=6,
        splitter in mixing_splitter(),
        beta_value in 0.1..5.0f64,
    ) {
        let spectrum = LevelSpectrum::equally_spaced(levels, 1.0).unwrap();
        let beta = Beta::new(beta_value).unwrap();
        let basis = Arc::new(TwoParticleBasis::new(statistics, levels).unwrap());
        let rho0 = thermal_sector_injection_matrix(&basis, &spectrum, beta).unwrap();
        let trajectory =
            iterate_to_equilibrium(&rho0, &splitter, DEFAULT_MAX_STEPS, DEFAULT_TOLERANCE)
                .unwrap();
        prop_assert!(trajectory.converged);
        let gibbs = thermal_density_matrix(&basis, &spectrum, beta).unwrap();
        let last = trajectory.final_step();
        for (w, g) in last.diagonal.iter().zip(gibbs.diagonal()) {
            prop_assert!((w - g).abs() <= 1e-9);
        }
        prop_assert!((last.p11 - p11_numeric(&spectrum, beta, statistics)).abs() <= 1e-9);
    }
}

#[test]
fn balanced_transfer_trajectory_frozen_points() {
    let m = transfer_matrix_3(0.5, 0.5).unwrap();
    let mut v = Vector3::new(0.0, 0.0, 1.0);
    let expected = [
        Vector3::new(0.5, 0.5, 0.0),
        Vector3::new(0.25, 0.25, 0.5),
        Vector3::new(0.375, 0.375, 0.25),
    ];
    for want in expected {
        v = m * v;
        assert!((v - want).amax() < 1e-15);
    }
}

#[test]
fn scattering_without_dephasing_keeps_entropy_at_zero() {
    let basis = boson1();
    let pq = basis.coincidence_index(0, 0).unwrap();
    let mut rho = DensityMatrix::pure_basis_state(Arc::clone(&basis), pq).unwrap();
    let dephased_start = rho.clone();
    let u = lift_two_particle(&BeamSplitter::from_angles(0.61, 0.47), &basis);
    for _ in 0..30 {
        rho = u.apply(&rho).unwrap();
        assert!(rho.von_neumann_entropy().unwrap().abs() <= 1e-10);
        assert!((rho.purity() - 1.0).abs() <= 1e-10);
    }
    // the same unitary with dephasing raises entropy immediately
    let after = step(&dephased_start, &u).unwrap();
    assert!(after.von_neumann_entropy().unwrap() > 0.1);
}

#[test]
fn product_injected_array_reaches_the_product_limit() {
    let levels = 40;
    let spectrum = LevelSpectrum::equally_spaced(levels, 1.0).unwrap();
    let splitter = BeamSplitter::from_angles(FRAC_PI_4, 0.3);
    for statistics in [Statistics::Boson, Statistics::Fermion] {
        let basis = Arc::new(TwoParticleBasis::new(statistics, levels).unwrap());
        for beta_delta in [LN_2, 1.0, 3.0] {
            let beta = Beta::new(beta_delta).unwrap();
            let rho0 = product_injection_matrix(&basis, &spectrum, beta).unwrap();
            let trajectory =
                iterate_to_equilibrium(&rho0, &splitter, DEFAULT_MAX_STEPS, DEFAULT_TOLERANCE)
                    .unwrap();
            assert!(trajectory.converged, "{statistics} at {beta_delta}");
            let limit = p11_product_injection_limit(beta_delta, statistics).unwrap();
            let reached = trajectory.final_step().p11;
            assert!(
                (reached - limit).abs() <= 1e-8,
                "{statistics} at beta_delta {beta_delta}: |{reached} - {limit}| > 1e-8"
            );
        }
    }
}

#[test]
fn the_two_injection_modes_have_different_limits() {
    // the long-run coincidence probability depends on what is injected:
    // sector-thermal input lands on the Gibbs value, product input on the
    // level-conserving product limit
    let levels = 40;
    let spectrum = LevelSpectrum::equally_spaced(levels, 1.0).unwrap();
    let beta = Beta::new(LN_2).unwrap();
    let splitter = BeamSplitter::from_angles(FRAC_PI_4, 0.0);
    let basis = Arc::new(TwoParticleBasis::new(Statistics::Boson, levels).unwrap());

    let thermal_run = iterate_to_equilibrium(
        &thermal_sector_injection_matrix(&basis, &spectrum, beta).unwrap(),
        &splitter,
        DEFAULT_MAX_STEPS,
        DEFAULT_TOLERANCE,
    )
    .unwrap();
    let product_run = iterate_to_equilibrium(
        &product_injection_matrix(&basis, &spectrum, beta).unwrap(),
        &splitter,
        DEFAULT_MAX_STEPS,
        DEFAULT_TOLERANCE,
    )
    .unwrap();
    assert!((thermal_run.final_step().p11 - 3.0 / 7.0).abs() <= 1e-8);
    assert!((product_run.final_step().p11 - 4.0 / 9.0).abs() <= 1e-8);
}
