//! Randomized properties of the two-particle beam-splitter lift: unitarity,
//! sector conservation, commutation with the Hamiltonian, invariance of
//! thermal states (single splitters and compositions), and site-exchange
//! symmetry.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use pairstat::basis::{Statistics, TwoParticleBasis};
use pairstat::scattering::{
    commutator_residual, commutator_residual_dense, lift_two_particle,
    separation_invariance_residual, BeamSplitter, HamiltonianMatrix,
};
use pairstat::spectrum::{Beta, LevelSpectrum};
use pairstat::thermal::thermal_density_matrix;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn statistics() -> impl Strategy<Value = Statistics> {
    prop_oneof![Just(Statistics::Boson), Just(Statistics::Fermion)]
}

fn splitter() -> impl Strategy<Value = BeamSplitter> {
    (0.0..TAU, 0.0..TAU).prop_map(|(theta, phase)| BeamSplitter::from_angles(theta, phase))
}

fn spectrum(levels: usize) -> impl Strategy<Value = LevelSpectrum> {
    (0.0..1.0f64, prop::collection::vec(0.0..2.0f64, levels - 1)).prop_map(|(start, increments)| {
        let mut energies = vec![start];
        for inc in increments {
            energies.push(energies.last().unwrap() + inc);
        }
        LevelSpectrum::from_energies(energies).unwrap()
    })
}

fn beta() -> impl Strategy<Value = Beta> {
    prop_oneof![
        Just(Beta::INFINITE_TEMPERATURE),
        Just(Beta::ZERO_TEMPERATURE),
        (0.01..10.0f64).prop_map(|b| Beta::new(b).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn lifts_are_unitary(
        statistics in statistics(),
        levels in 1usize..=5,
        splitter in splitter(),
    ) {
        let basis = Arc::new(TwoParticleBasis::new(statistics, levels).unwrap());
        let u = lift_two_particle(&splitter, &basis);
        prop_assert!(u.unitarity_residual() <= 1e-12);
    }

    #[test]
    fn lifts_never_mix_level_sectors(
        statistics in statistics(),
        levels in 1usize..=4,
        splitter in splitter(),
    ) {
        let basis = Arc::new(TwoParticleBasis::new(statistics, levels).unwrap());
        let dense = lift_two_particle(&splitter, &basis).matrix();
        for i in 0..basis.dimension() {
            for j in 0..basis.dimension() {
                if basis.state(i).levels() != basis.state(j).levels() {
                    prop_assert_eq!(dense[(i, j)], Complex64::default());
                }
            }
        }
    }

    #[test]
    fn lifts_commute_with_the_hamiltonian(
        statistics in statistics(),
        levels in 1usize..=5,
        splitter in splitter(),
        seed_spectrum in (1usize..=5).prop_flat_map(spectrum),
    ) {
        // independent draws for splitter geometry and level energies;
        // truncate or pad the spectrum to the basis size
        let energies: Vec<f64> = (0..levels)
            .map(|n| {
                seed_spectrum
                    .energies()
                    .get(n)
                    .copied()
                    .unwrap_or_else(|| seed_spectrum.ground_energy() + 2.0 * n as f64)
            })
            .collect();
        let mut sorted = energies;
        sorted.sort_by(f64::total_cmp);
        let spectrum = LevelSpectrum::from_energies(sorted).unwrap();
        let basis = Arc::new(TwoParticleBasis::new(statistics, levels).unwrap());
        let h = HamiltonianMatrix::new(&basis, &spectrum).unwrap();
        let u = lift_two_particle(&splitter, &basis);
        prop_assert!(commutator_residual(&h, &u).unwrap() <= 1e-10);
        prop_assert!(commutator_residual_dense(&h, &u.matrix()) <= 1e-10);
    }

    #[test]
    fn thermal_states_are_fixed_by_any_lift(
        statistics in statistics(),
        levels in 1usize..=5,
        splitter in splitter(),
        beta in beta(),
    ) {
        let spectrum = LevelSpectrum::equally_spaced(levels, 1.0).unwrap();
        let residual =
            separation_invariance_residual(&spectrum, beta, statistics, &splitter).unwrap();
        prop_assert!(residual <= 1e-10);
    }

    #[test]
    fn thermal_states_are_fixed_by_lift_compositions(
        statistics in statistics(),
        levels in 1usize..=4,
        splitters in prop::collection::vec(splitter(), 5),
        beta in beta(),
    ) {
        let spectrum = LevelSpectrum::equally_spaced(levels, 1.0).unwrap();
        let basis = Arc::new(TwoParticleBasis::new(statistics, levels).unwrap());
        let rho_in = thermal_density_matrix(&basis, &spectrum, beta).unwrap();
        let mut rho = rho_in.clone();
        for s in &splitters {
            rho = lift_two_particle(s, &basis).apply(&rho).unwrap();
        }
        prop_assert!(rho.max_entry_distance(&rho_in).unwrap() <= 1e-10);
    }

    #[test]
    fn exchanging_sites_conjugates_the_lift(
        statistics in statistics(),
        levels in 1usize..=4,
        splitter in splitter(),
    ) {
        let basis = Arc::new(TwoParticleBasis::new(statistics, levels).unwrap());
        let lifted = lift_two_particle(&splitter, &basis).matrix();
        let swapped = BeamSplitter::from_elements(
            splitter.r_prime(),
            splitter.t_prime(),
            splitter.r(),
            splitter.t(),
        )
        .unwrap();
        let lifted_swapped = lift_two_particle(&swapped, &basis).matrix();
        let p = site_swap_matrix(&basis);
        let conjugated = &p * &lifted * &p;
        let diff = (&lifted_swapped - &conjugated)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        prop_assert!(diff <= 1e-13, "diff {diff}");
    }

    #[test]
    fn single_splitter_coincidence_probabilities(
        splitter in splitter(),
    ) {
        // one level: a boson pair injected one-per-site keeps coincidence
        // weight (R - T)^2; a fermion pair always stays coincident
        let boson = Arc::new(TwoParticleBasis::new(Statistics::Boson, 1).unwrap());
        let pq = boson.coincidence_index(0, 0).unwrap();
        let amp = lift_two_particle(&splitter, &boson).matrix()[(pq, pq)];
        let r = splitter.reflectance();
        let t = splitter.transmittance();
        prop_assert!((amp.norm_sqr() - (r - t) * (r - t)).abs() <= 1e-12);

        let fermion = Arc::new(TwoParticleBasis::new(Statistics::Fermion, 1).unwrap());
        let famp = lift_two_particle(&splitter, &fermion).matrix()[(0, 0)];
        prop_assert!((famp.norm_sqr() - 1.0).abs() <= 1e-12);
    }
}

/// The matrix of the site-relabeling operator p <-> q: each state maps to
/// the state with both modes' sites toggled, with a sign when the fermionic
/// canonical order flips.
fn site_swap_matrix(basis: &TwoParticleBasis) -> DMatrix<Complex64> {
    let dim = basis.dimension();
    let mut p = DMatrix::from_element(dim, dim, Complex64::default());
    for (j, state) in basis.states().iter().enumerate() {
        let (m1, m2) = state.mode_indices();
        let (s1, s2) = (m1 ^ 1, m2 ^ 1);
        let i = basis.index_of(s1, s2).unwrap();
        let sign = match basis.statistics() {
            Statistics::Fermion if s1 > s2 => -1.0,
            _ => 1.0,
        };
        p[(i, j)] = Complex64::new(sign, 0.0);
    }
    p
}
