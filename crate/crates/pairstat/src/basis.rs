//! The two-particle Fock basis over two sites and L internal levels.
//!
//! Single-particle modes are (site, level) pairs flattened level-major,
//! site-minor: `flat = 2*level + site`. Two-particle basis states are
//! canonical ordered mode pairs `(m1, m2)` with `m1 <= m2` for bosons and
//! `m1 < m2` for fermions, listed in lexicographic order so the basis is
//! reproducible run to run.
//!
//! Because a beam splitter never changes which internal levels are
//! occupied, the basis decomposes into *sectors* labelled by the level
//! multiset `{n1, n2}`: three states (pp, pq, qq) per same-level boson
//! sector, one per same-level fermion sector, and four per distinct-level
//! sector. The sector list is precomputed here and drives the block
//! structure of every lifted unitary.

use crate::error::{Error, Result};
use crate::spectrum::LevelSpectrum;

/// Exchange symmetry of the particle pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// Exchange sign: +1 for bosons, -1 for fermions.
    pub fn sign(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Statistics::Boson => write!(f, "boson"),
            Statistics::Fermion => write!(f, "fermion"),
        }
    }
}

/// One of the two sites a particle can occupy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    P,
    Q,
}

/// A single-particle mode: a (site, internal level) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mode {
    pub site: Site,
    pub level: usize,
}

impl Mode {
    pub fn new(site: Site, level: usize) -> Self {
        Mode { site, level }
    }

    /// Flat index `2*level + (0 for P, 1 for Q)`.
    pub fn flat_index(self) -> usize {
        2 * self.level
            + match self.site {
                Site::P => 0,
                Site::Q => 1,
            }
    }

    /// Inverse of [`Mode::flat_index`].
    pub fn from_flat(flat: usize) -> Self {
        Mode {
            site: if flat.is_multiple_of(2) {
                Site::P
            } else {
                Site::Q
            },
            level: flat / 2,
        }
    }
}

/// A canonical (anti)symmetrized two-particle basis state.
///
/// Stores the flat mode indices `(m1, m2)` with `m1 <= m2` and the
/// normalization of the state relative to the raw two-creation-operator
/// form: `1/sqrt(2)` for a doubly occupied bosonic mode, 1 otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleState {
    modes: (usize, usize),
    norm_factor: f64,
}

impl TwoParticleState {
    fn new(m1: usize, m2: usize) -> Self {
        debug_assert!(m1 <= m2);
        let norm_factor = if m1 == m2 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        };
        TwoParticleState {
            modes: (m1, m2),
            norm_factor,
        }
    }

    /// Flat mode indices, ascending.
    pub fn mode_indices(self) -> (usize, usize) {
        self.modes
    }

    /// The two occupied modes as (site, level) pairs.
    pub fn modes(self) -> (Mode, Mode) {
        (Mode::from_flat(self.modes.0), Mode::from_flat(self.modes.1))
    }

    /// Normalization factor of the state (1 or 1/sqrt(2)).
    pub fn norm_factor(self) -> f64 {
        self.norm_factor
    }

    /// Occupied internal levels, ascending, counted with multiplicity.
    pub fn levels(self) -> (usize, usize) {
        let (a, b) = (self.modes.0 / 2, self.modes.1 / 2);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Number of particles at site p and site q; always sums to 2.
    pub fn site_occupation(self) -> (usize, usize) {
        let mut n_p = 0;
        let mut n_q = 0;
        for m in [self.modes.0, self.modes.1] {
            if m % 2 == 0 {
                n_p += 1
            } else {
                n_q += 1
            }
        }
        (n_p, n_q)
    }

    /// True when one particle sits at each site.
    pub fn is_coincidence(self) -> bool {
        self.site_occupation() == (1, 1)
    }

    /// Total energy of the state under `spectrum`, levels counted with
    /// multiplicity.
    pub fn energy(self, spectrum: &LevelSpectrum) -> Result<f64> {
        let (n1, n2) = self.levels();
        Ok(spectrum.energy(n1)? + spectrum.energy(n2)?)
    }
}

/// A block of basis states sharing the same internal level multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    /// Occupied levels `(n1, n2)` with `n1 <= n2`.
    pub levels: (usize, usize),
    /// Indices into the basis state list, ascending.
    pub state_indices: Vec<usize>,
}

/// Largest L accepted by the dense matrix machinery (basis dimension
/// `64 * 129 = 8256` for bosons). Scalar partition sums have no such cap.
pub const MAX_MATRIX_LEVELS: usize = 64;

/// The enumerated two-particle Hilbert-space basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleBasis {
    statistics: Statistics,
    levels: usize,
    states: Vec<TwoParticleState>,
    sectors: Vec<Sector>,
}

impl TwoParticleBasis {
    /// Enumerate the canonical basis for the given exchange symmetry and
    /// number of internal levels.
    ///
    /// Dimension is `L(2L+1)` for bosons and `L(2L-1)` for fermions.
    pub fn new(statistics: Statistics, levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(Error::invalid("basis needs at least one internal level"));
        }
        if levels > MAX_MATRIX_LEVELS {
            return Err(Error::invalid(format!(
                "levels = {levels} exceeds the matrix-engine bound of {MAX_MATRIX_LEVELS}"
            )));
        }
        let n_modes = 2 * levels;
        let mut states = Vec::new();
        for m1 in 0..n_modes {
            let start = match statistics {
                Statistics::Boson => m1,
                Statistics::Fermion => m1 + 1, // Pauli: no doubly occupied mode
            };
            for m2 in start..n_modes {
                states.push(TwoParticleState::new(m1, m2));
            }
        }

        // Group states into level-multiset sectors, ordered by (n1, n2).
        let mut sectors: Vec<Sector> = Vec::new();
        for n1 in 0..levels {
            for n2 in n1..levels {
                let state_indices: Vec<usize> = states
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.levels() == (n1, n2))
                    .map(|(i, _)| i)
                    .collect();
                if !state_indices.is_empty() {
                    sectors.push(Sector {
                        levels: (n1, n2),
                        state_indices,
                    });
                }
            }
        }

        Ok(TwoParticleBasis {
            statistics,
            levels,
            states,
            sectors,
        })
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// Number of internal levels L.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Hilbert-space dimension.
    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    /// Basis state at index `i` (lexicographic mode-pair order).
    pub fn state(&self, i: usize) -> TwoParticleState {
        self.states[i]
    }

    pub fn states(&self) -> &[TwoParticleState] {
        &self.states
    }

    /// Index of the canonical state on modes `(m1, m2)` (any order).
    pub fn index_of(&self, m1: usize, m2: usize) -> Option<usize> {
        let pair = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
        self.states.binary_search_by(|s| s.modes.cmp(&pair)).ok()
    }

    /// Index of the coincidence state with the p-particle in level
    /// `level_p` and the q-particle in level `level_q`.
    pub fn coincidence_index(&self, level_p: usize, level_q: usize) -> Option<usize> {
        self.index_of(2 * level_p, 2 * level_q + 1)
    }

    /// Level-multiset sectors, ordered by `(n1, n2)`.
    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// Indices of all coincidence (one particle per site) states.
    pub fn coincidence_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_coincidence())
            .map(|(i, _)| i)
    }

    /// True when `other` indexes the same Hilbert space.
    pub fn same_space(&self, other: &TwoParticleBasis) -> bool {
        self.statistics == other.statistics && self.levels == other.levels
    }

    /// Error unless `other` indexes the same Hilbert space.
    pub fn check_same_space(&self, other: &TwoParticleBasis) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: self.statistics,
                levels_expected: self.levels,
                found: other.statistics,
                levels_found: other.levels,
            })
        }
    }

    /// Per-state energies under `spectrum`.
    pub fn state_energies(&self, spectrum: &LevelSpectrum) -> Result<Vec<f64>> {
        if spectrum.len() != self.levels {
            return Err(Error::invalid(format!(
                "spectrum has {} levels but basis has {}",
                spectrum.len(),
                self.levels
            )));
        }
        self.states.iter().map(|s| s.energy(spectrum)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle: count ordered mode pairs filtered by symmetry.
    fn brute_force_dimension(statistics: Statistics, levels: usize) -> usize {
        let m = 2 * levels;
        let mut count = 0;
        for m1 in 0..m {
            for m2 in 0..m {
                let keep = match statistics {
                    Statistics::Boson => m1 <= m2,
                    Statistics::Fermion => m1 < m2,
                };
                if keep {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn dimensions_match_formulas_and_enumeration() {
        for levels in 1..=12 {
            let m = 2 * levels;
            let boson = TwoParticleBasis::new(Statistics::Boson, levels).unwrap();
            let fermion = TwoParticleBasis::new(Statistics::Fermion, levels).unwrap();
            assert_eq!(boson.dimension(), levels * (2 * levels + 1));
            assert_eq!(fermion.dimension(), levels * (2 * levels - 1));
            assert_eq!(boson.dimension(), m * (m + 1) / 2);
            assert_eq!(fermion.dimension(), m * (m - 1) / 2);
            assert_eq!(
                boson.dimension(),
                brute_force_dimension(Statistics::Boson, levels)
            );
            assert_eq!(
                fermion.dimension(),
                brute_force_dimension(Statistics::Fermion, levels)
            );
        }
    }

    #[test]
    fn spec_dimensions() {
        assert_eq!(
            TwoParticleBasis::new(Statistics::Boson, 1)
                .unwrap()
                .dimension(),
            3
        );
        assert_eq!(
            TwoParticleBasis::new(Statistics::Fermion, 1)
                .unwrap()
                .dimension(),
            1
        );
        assert_eq!(
            TwoParticleBasis::new(Statistics::Boson, 3)
                .unwrap()
                .dimension(),
            21
        );
        assert_eq!(
            TwoParticleBasis::new(Statistics::Fermion, 3)
                .unwrap()
                .dimension(),
            15
        );
    }

    #[test]
    fn zero_levels_rejected() {
        assert!(TwoParticleBasis::new(Statistics::Boson, 0).is_err());
        assert!(TwoParticleBasis::new(Statistics::Boson, MAX_MATRIX_LEVELS + 1).is_err());
        assert!(TwoParticleBasis::new(Statistics::Boson, MAX_MATRIX_LEVELS).is_ok());
    }

    #[test]
    fn pauli_exclusion() {
        for levels in 1..=8 {
            let basis = TwoParticleBasis::new(Statistics::Fermion, levels).unwrap();
            assert!(basis
                .states()
                .iter()
                .all(|s| s.mode_indices().0 < s.mode_indices().1));
        }
    }

    #[test]
    fn flat_index_roundtrip() {
        for flat in 0..2 * 12 {
            assert_eq!(Mode::from_flat(flat).flat_index(), flat);
        }
        assert_eq!(Mode::new(Site::P, 3).flat_index(), 6);
        assert_eq!(Mode::new(Site::Q, 3).flat_index(), 7);
    }

    #[test]
    fn site_occupation_examples() {
        // (P,0),(Q,0) -> (1,1)
        let s = TwoParticleState::new(0, 1);
        assert_eq!(s.site_occupation(), (1, 1));
        assert!(s.is_coincidence());
        // (P,0),(P,5) -> (2,0)
        let s = TwoParticleState::new(0, 10);
        assert_eq!(s.site_occupation(), (2, 0));
        // boson L=2: exactly 4 of the 10 states are coincidences
        let basis = TwoParticleBasis::new(Statistics::Boson, 2).unwrap();
        assert_eq!(basis.coincidence_indices().count(), 4);
    }

    #[test]
    fn occupation_partition_counts() {
        for &stats in &[Statistics::Boson, Statistics::Fermion] {
            for levels in 1..=8 {
                let basis = TwoParticleBasis::new(stats, levels).unwrap();
                let mut n20 = 0;
                let mut n11 = 0;
                let mut n02 = 0;
                for s in basis.states() {
                    match s.site_occupation() {
                        (2, 0) => n20 += 1,
                        (1, 1) => n11 += 1,
                        (0, 2) => n02 += 1,
                        other => panic!("impossible occupation {other:?}"),
                    }
                }
                assert_eq!(n20 + n11 + n02, basis.dimension());
                assert_eq!(n20, n02, "p<->q symmetry");
                assert_eq!(n11, levels * levels);
            }
        }
    }

    #[test]
    fn state_energy_examples() {
        let unit = LevelSpectrum::equally_spaced(6, 1.0).unwrap();
        assert_eq!(TwoParticleState::new(0, 1).energy(&unit).unwrap(), 0.0);
        // (P,1),(Q,2), delta = 1 -> 3
        assert_eq!(TwoParticleState::new(2, 5).energy(&unit).unwrap(), 3.0);
        // (P,3),(P,3), delta = 0.5 -> 3.0
        let half = LevelSpectrum::equally_spaced(6, 0.5).unwrap();
        assert_eq!(TwoParticleState::new(6, 6).energy(&half).unwrap(), 3.0);
        // out-of-range level
        let short = LevelSpectrum::equally_spaced(2, 1.0).unwrap();
        assert!(TwoParticleState::new(6, 6).energy(&short).is_err());
    }

    #[test]
    fn norm_factor_only_on_double_occupancy() {
        let basis = TwoParticleBasis::new(Statistics::Boson, 3).unwrap();
        for s in basis.states() {
            let (m1, m2) = s.mode_indices();
            if m1 == m2 {
                assert_eq!(s.norm_factor(), std::f64::consts::FRAC_1_SQRT_2);
            } else {
                assert_eq!(s.norm_factor(), 1.0);
            }
        }
    }

    #[test]
    fn deterministic_ordering_and_lookup() {
        let basis = TwoParticleBasis::new(Statistics::Boson, 2).unwrap();
        let pairs: Vec<(usize, usize)> = basis.states().iter().map(|s| s.mode_indices()).collect();
        let mut sorted = pairs.clone();
        sorted.sort();
        assert_eq!(pairs, sorted);
        // L=1 boson order: pp, pq, qq
        let b1 = TwoParticleBasis::new(Statistics::Boson, 1).unwrap();
        assert_eq!(b1.state(0).mode_indices(), (0, 0));
        assert_eq!(b1.state(1).mode_indices(), (0, 1));
        assert_eq!(b1.state(2).mode_indices(), (1, 1));
        for (i, s) in basis.states().iter().enumerate() {
            let (m1, m2) = s.mode_indices();
            assert_eq!(basis.index_of(m1, m2), Some(i));
            assert_eq!(basis.index_of(m2, m1), Some(i));
        }
        assert_eq!(basis.index_of(0, 99), None);
        assert_eq!(basis.coincidence_index(0, 1), basis.index_of(0, 3));
    }

    #[test]
    fn sectors_partition_the_basis() {
        for &stats in &[Statistics::Boson, Statistics::Fermion] {
            for levels in 1..=6 {
                let basis = TwoParticleBasis::new(stats, levels).unwrap();
                let mut seen = vec![false; basis.dimension()];
                for sector in basis.sectors() {
                    let expected = match (stats, sector.levels.0 == sector.levels.1) {
                        (Statistics::Boson, true) => 3,
                        (Statistics::Fermion, true) => 1,
                        (_, false) => 4,
                    };
                    assert_eq!(sector.state_indices.len(), expected);
                    for &i in &sector.state_indices {
                        assert!(!seen[i]);
                        seen[i] = true;
                        assert_eq!(basis.state(i).levels(), sector.levels);
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }
}
