//! Internal level spectra and inverse temperature.
//!
//! Temperatures cross the public surface only through the dimensionless
//! combination `beta * delta` (equivalently `kT / delta`); absolute energy
//! units live inside [`LevelSpectrum`]. The `T = 0` limit is a distinguished
//! value of [`Beta`] and is handled symbolically (ground-manifold projector)
//! rather than as a large finite `beta`, so nothing ever overflows.

use crate::error::{Error, Result};

/// The internal energy ladder of one particle: a finite, non-decreasing
/// list of level energies.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpectrum {
    energies: Vec<f64>,
    equal_spacing: Option<f64>,
}

impl LevelSpectrum {
    /// Spectrum with explicit level energies. They must be finite and
    /// non-decreasing; degenerate (exactly equal) levels are allowed.
    pub fn from_energies(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::invalid("spectrum must have at least one level"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("level energies must be finite"));
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("level energies must be non-decreasing"));
        }
        Ok(Self {
            energies,
            equal_spacing: None,
        })
    }

    /// Equally spaced ladder `energy(n) = n * delta` with `levels` rungs.
    pub fn equally_spaced(levels: usize, delta: f64) -> Result<Self> {
        if levels == 0 {
            return Err(Error::invalid("spectrum must have at least one level"));
        }
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::invalid("level spacing must be positive and finite"));
        }
        let energies = (0..levels).map(|n| n as f64 * delta).collect();
        Ok(Self {
            energies,
            equal_spacing: Some(delta),
        })
    }

    /// Number of levels L.
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one level
    }

    /// Energy of level `n`.
    pub fn energy(&self, n: usize) -> Result<f64> {
        self.energies.get(n).copied().ok_or(Error::LevelOutOfRange {
            level: n,
            levels: self.energies.len(),
        })
    }

    /// All level energies, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// The spacing `delta` if the spectrum was built as an equal ladder.
    pub fn equal_spacing(&self) -> Option<f64> {
        self.equal_spacing
    }

    /// Smallest level energy.
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }
}

/// Inverse temperature `beta = 1/kT`, non-negative; `f64::INFINITY`
/// designates the `T = 0` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beta(f64);

impl Beta {
    /// The `T = 0` limit.
    pub const ZERO_TEMPERATURE: Beta = Beta(f64::INFINITY);

    /// Infinite temperature (`beta = 0`, all states equiprobable).
    pub const INFINITE_TEMPERATURE: Beta = Beta(0.0);

    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::invalid("beta must be non-negative"));
        }
        Ok(Beta(beta))
    }

    /// Inverse of the dimensionless temperature `kT/delta` for a ladder
    /// with unit spacing.
    pub fn from_kt_over_delta(kt_over_delta: f64) -> Result<Self> {
        if kt_over_delta.is_nan() || kt_over_delta <= 0.0 {
            return Err(Error::invalid("kT/delta must be positive"));
        }
        Ok(Beta(1.0 / kt_over_delta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero_temperature(self) -> bool {
        self.0.is_infinite()
    }

    /// Boltzmann factor `exp(-beta * energy)` with the `T = 0` limit taken
    /// symbolically: 1 for `energy <= 0`, 0 otherwise. Callers shift
    /// energies by the ground energy before using this at `T = 0`.
    pub fn boltzmann(self, energy: f64) -> f64 {
        if self.is_zero_temperature() {
            if energy <= 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (-self.0 * energy).exp()
        }
    }
}
