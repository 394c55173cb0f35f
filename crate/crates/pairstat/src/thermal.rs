//! Canonical-ensemble statistics for the particle pair.
//!
//! The two-particle partition function splits by site configuration into a
//! coincidence term (one particle at each site) and two same-site terms.
//! Everything here reduces to two scalar sums over the level spectrum, so
//! these functions take arbitrary spectra of any length; only the dense
//! matrix machinery elsewhere caps the level count.
//!
//! Zero temperature is treated as a symbolic limit: Boltzmann weights are
//! measured from the ground energy, so sums become counts of ground-manifold
//! members instead of overflowing.

use std::sync::Arc;

use crate::basis::{Statistics, TwoParticleBasis};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::spectrum::{Beta, LevelSpectrum};

/// Sum of single-particle Boltzmann weights over the spectrum.
///
/// At zero temperature this is the number of levels tied for the ground
/// energy (exact float equality; degeneracy means identical entries).
pub fn single_particle_sum(spectrum: &LevelSpectrum, beta: Beta) -> f64 {
    if beta.is_zero_temperature() {
        ground_degeneracy(spectrum) as f64
    } else {
        spectrum.energies().iter().map(|&e| beta.boltzmann(e)).sum()
    }
}

/// Sum of doubled-energy weights `exp(-2 beta e_n)`, the diagonal of the
/// pair sum. Computed as squared single-particle weights so that a single
/// level cancels exactly against `z_pq` in [`z_same_site`]. Shares the
/// zero-temperature counting convention.
fn double_occupation_sum(spectrum: &LevelSpectrum, beta: Beta) -> f64 {
    if beta.is_zero_temperature() {
        ground_degeneracy(spectrum) as f64
    } else {
        spectrum
            .energies()
            .iter()
            .map(|&e| {
                let w = beta.boltzmann(e);
                w * w
            })
            .sum()
    }
}

fn ground_degeneracy(spectrum: &LevelSpectrum) -> usize {
    let ground = spectrum.ground_energy();
    spectrum.energies().iter().filter(|&&e| e == ground).count()
}

/// Partition sum over states with one particle at each site: the squared
/// single-particle sum, identical for both statistics.
pub fn z_pq(spectrum: &LevelSpectrum, beta: Beta) -> f64 {
    let sigma = single_particle_sum(spectrum, beta);
    sigma * sigma
}

/// Partition sum over states with both particles at one site.
///
/// Bosons sum over unordered level pairs including double occupancy;
/// fermions exclude the doubly occupied diagonal.
pub fn z_same_site(spectrum: &LevelSpectrum, beta: Beta, statistics: Statistics) -> f64 {
    let sigma = single_particle_sum(spectrum, beta);
    let doubled = double_occupation_sum(spectrum, beta);
    let off_diagonal = 0.5 * (sigma * sigma - doubled);
    match statistics {
        Statistics::Boson => off_diagonal + doubled,
        Statistics::Fermion => off_diagonal,
    }
}

/// The partition function split by site configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionTerms {
    /// Weight of one-particle-per-site states.
    pub z_pq: f64,
    /// Weight of both-at-p states.
    pub z_p: f64,
    /// Weight of both-at-q states; equals `z_p` by site symmetry.
    pub z_q: f64,
    /// Total: `z_pq + z_p + z_q`.
    pub z2: f64,
}

impl PartitionTerms {
    pub fn evaluate(spectrum: &LevelSpectrum, beta: Beta, statistics: Statistics) -> Self {
        let z_pq = z_pq(spectrum, beta);
        let z_same = z_same_site(spectrum, beta, statistics);
        PartitionTerms {
            z_pq,
            z_p: z_same,
            z_q: z_same,
            z2: z_pq + 2.0 * z_same,
        }
    }
}

/// Coincidence probability P(1,1) from the partition sums of the given
/// (possibly unequally spaced) spectrum.
pub fn p11_numeric(spectrum: &LevelSpectrum, beta: Beta, statistics: Statistics) -> f64 {
    let terms = PartitionTerms::evaluate(spectrum, beta, statistics);
    terms.z_pq / terms.z2
}

/// Closed-form P(1,1) for the infinite equally spaced ladder, as a function
/// of the dimensionless ratio `beta_delta` = spacing/kT.
///
/// With x = exp(-beta_delta): bosons (1+x)/(3+x), fermions (1+x)/(1+3x).
/// Both forms stay finite for arbitrarily large `beta_delta` (x -> 0),
/// where they reach 1/3 and 1; at `beta_delta` = 0 both give 1/2.
pub fn p11_analytic(beta_delta: f64, statistics: Statistics) -> Result<f64> {
    if beta_delta.is_nan() || beta_delta < 0.0 {
        return Err(Error::invalid(format!(
            "beta_delta must be non-negative, got {beta_delta}"
        )));
    }
    let x = (-beta_delta).exp();
    Ok(match statistics {
        Statistics::Boson => (1.0 + x) / (3.0 + x),
        Statistics::Fermion => (1.0 + x) / (1.0 + 3.0 * x),
    })
}

/// Smallest ladder truncation L with `exp(-beta_delta * L) <= tolerance`.
///
/// Truncating the infinite ladder at this L perturbs each partition sum by
/// a relative amount at most `tolerance`, so `p11_numeric` at this L matches
/// `p11_analytic` within about `4 * tolerance`.
pub fn required_truncation(beta_delta: f64, tolerance: f64) -> Result<usize> {
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(Error::invalid(format!(
            "tolerance must lie in (0, 1), got {tolerance}"
        )));
    }
    if beta_delta.is_nan() || beta_delta <= 0.0 {
        return Err(Error::invalid(format!(
            "beta_delta must be positive for a finite truncation, got {beta_delta}"
        )));
    }
    let x = (-beta_delta).exp();
    let mut l = (-tolerance.ln() / beta_delta).ceil().max(1.0) as usize;
    // guard the float estimate so L is exactly minimal
    while l > 1 && x.powi(l as i32 - 1) <= tolerance {
        l -= 1;
    }
    while x.powi(l as i32) > tolerance {
        l += 1;
    }
    Ok(l)
}

/// Long-run coincidence probability of the dephased array when each
/// particle is injected independently Boltzmann-distributed over the
/// infinite ladder.
///
/// The array conserves each particle's level, so the probability s that
/// both occupy the same level is fixed at injection: s = (1-x)/(1+x) with
/// x = exp(-beta_delta). Same-level pairs equilibrate to coincidence 1/3
/// (bosons) or stay at 1 (fermions, single-state sector); distinct-level
/// pairs equilibrate to 1/2 for both.
pub fn p11_product_injection_limit(beta_delta: f64, statistics: Statistics) -> Result<f64> {
    if beta_delta.is_nan() || beta_delta < 0.0 {
        return Err(Error::invalid(format!(
            "beta_delta must be non-negative, got {beta_delta}"
        )));
    }
    let x = (-beta_delta).exp();
    let same_level = (1.0 - x) / (1.0 + x);
    let same_level_coincidence = match statistics {
        Statistics::Boson => 1.0 / 3.0,
        Statistics::Fermion => 1.0,
    };
    Ok(same_level * same_level_coincidence + (1.0 - same_level) * 0.5)
}

fn check_basis_spectrum(basis: &TwoParticleBasis, spectrum: &LevelSpectrum) -> Result<()> {
    if basis.levels() != spectrum.len() {
        return Err(Error::invalid(format!(
            "basis has {} levels but spectrum has {}",
            basis.levels(),
            spectrum.len()
        )));
    }
    Ok(())
}

/// Boltzmann weights over basis states, shifted by the minimum state energy
/// so zero temperature and steep spectra stay finite. Unnormalized.
fn state_weights(basis: &TwoParticleBasis, spectrum: &LevelSpectrum, beta: Beta) -> Vec<f64> {
    let energies = basis
        .state_energies(spectrum)
        .expect("level range checked against spectrum length");
    let ground = energies.iter().copied().fold(f64::INFINITY, f64::min);
    energies
        .iter()
        .map(|&e| beta.boltzmann(e - ground))
        .collect()
}

/// Gibbs state over the truncated two-particle basis: diagonal weights
/// proportional to `exp(-beta * state_energy)`. At zero temperature this is
/// the uniform mixture over the degenerate ground manifold.
pub fn thermal_density_matrix(
    basis: &Arc<TwoParticleBasis>,
    spectrum: &LevelSpectrum,
    beta: Beta,
) -> Result<DensityMatrix> {
    check_basis_spectrum(basis, spectrum)?;
    let mut weights = state_weights(basis, spectrum, beta);
    let z: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= z;
    }
    Ok(DensityMatrix::from_diagonal_unchecked(
        Arc::clone(basis),
        weights,
    ))
}

/// Injection state for two independent particles, one per input port, each
/// Boltzmann-distributed over its internal levels.
///
/// Supported on coincidence states only: the ordered level pair (m, n)
/// puts weight `w_m * w_n` on the state with level m at site p and level n
/// at site q. (m, n) and (n, m) are distinct basis states for m != n.
pub fn product_injection_matrix(
    basis: &Arc<TwoParticleBasis>,
    spectrum: &LevelSpectrum,
    beta: Beta,
) -> Result<DensityMatrix> {
    check_basis_spectrum(basis, spectrum)?;
    let ground = spectrum.ground_energy();
    let single: Vec<f64> = spectrum
        .energies()
        .iter()
        .map(|&e| beta.boltzmann(e - ground))
        .collect();
    let norm: f64 = single.iter().sum();
    let mut diagonal = vec![0.0; basis.dimension()];
    for (m, wm) in single.iter().enumerate() {
        for (n, wn) in single.iter().enumerate() {
            let idx = basis
                .coincidence_index(m, n)
                .expect("every level pair has a coincidence state");
            diagonal[idx] += wm * wn / (norm * norm);
        }
    }
    Ok(DensityMatrix::from_diagonal_unchecked(
        Arc::clone(basis),
        diagonal,
    ))
}

/// Injection state carrying the Gibbs weight of each level-pair sector, but
/// concentrated on that sector's coincidence states.
///
/// Level-preserving dynamics conserves each sector's total weight and mixes
/// it toward the uniform in-sector distribution, so this input relaxes to
/// `thermal_density_matrix` exactly.
pub fn thermal_sector_injection_matrix(
    basis: &Arc<TwoParticleBasis>,
    spectrum: &LevelSpectrum,
    beta: Beta,
) -> Result<DensityMatrix> {
    check_basis_spectrum(basis, spectrum)?;
    let weights = state_weights(basis, spectrum, beta);
    let z: f64 = weights.iter().sum();
    let mut diagonal = vec![0.0; basis.dimension()];
    for sector in basis.sectors() {
        let total: f64 = sector.state_indices.iter().map(|&i| weights[i]).sum();
        let coincidence: Vec<usize> = sector
            .state_indices
            .iter()
            .copied()
            .filter(|&i| basis.state(i).is_coincidence())
            .collect();
        let share = total / z / coincidence.len() as f64;
        for i in coincidence {
            diagonal[i] += share;
        }
    }
    Ok(DensityMatrix::from_diagonal_unchecked(
        Arc::clone(basis),
        diagonal,
    ))
}
