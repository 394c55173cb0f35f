//! Equilibrium statistics of two identical particles (bosons or fermions)
//! with internal energy levels, and the dynamics of a dephasing
//! beam-splitter array that drives such a pair to equilibrium.
//!
//! The central observable is the coincidence probability `P(1,1)`: the
//! probability of finding one particle at each of two sites. It
//! interpolates between the two-particle quantum values (1/3 for bosons,
//! 1 for fermions) at low temperature and the classical value 1/2 once the
//! thermal energy exceeds the internal level spacing.
//!
//! Module map:
//!
//! - [`basis`]: (anti)symmetrized two-particle Fock basis over 2 sites x L levels
//! - [`spectrum`]: internal level ladders and inverse temperature
//! - [`thermal`]: partition-function decomposition, `P(1,1)` closed forms and
//!   truncated-ladder sums, thermal and injection density matrices
//! - [`density`]: density matrices, dephasing, coincidence probability, entropy
//! - [`scattering`]: beam splitters, their two-particle lift, Hamiltonian
//!   commutation and separation-invariance residuals
//! - [`dephasing`]: the scatter-then-dephase recurrence, sector transfer
//!   matrix, convergence analysis and trajectories

pub mod basis;
pub mod density;
pub mod dephasing;
pub mod error;
pub mod scattering;
pub mod spectrum;
pub mod thermal;

// Matrix and complex types appear in the public API; re-export their crates
// so downstream code matches versions automatically.
pub use nalgebra;
pub use num_complex;

pub use basis::{Mode, Site, Statistics, TwoParticleBasis, TwoParticleState};
pub use density::DensityMatrix;
pub use dephasing::{SectorDistribution, Trajectory, TrajectoryStep};
pub use error::{Error, Result};
pub use scattering::{BeamSplitter, HamiltonianMatrix, TwoParticleUnitary};
pub use spectrum::{Beta, LevelSpectrum};
pub use thermal::PartitionTerms;
