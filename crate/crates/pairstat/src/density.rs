//! Density matrices over a two-particle basis.
//!
//! States that arise along the dephased array dynamics are diagonal in the
//! canonical occupation basis, so the matrix is stored either as a bare
//! diagonal or as a dense Hermitian matrix. The diagonal representation is
//! exact, cheaper, and lets the entropy come straight from the weights
//! without an eigensolve.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::TwoParticleBasis;
use crate::error::{Error, Result};

/// Max |M_ij - conj(M_ji)| accepted when validating Hermiticity.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Max |Tr rho - 1| accepted when validating normalization.
pub const TRACE_TOL: f64 = 1e-12;
/// Diagonal weights may dip this far below zero before being rejected.
pub const PSD_FLOOR: f64 = -1e-10;
/// Eigenvalues below this bound abort the entropy computation.
pub const PSD_ERROR_FLOOR: f64 = -1e-8;

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Diagonal(Vec<f64>),
    Dense(DMatrix<Complex64>),
}

/// A Hermitian, unit-trace matrix over a [`TwoParticleBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    basis: Arc<TwoParticleBasis>,
    repr: Repr,
}

impl DensityMatrix {
    /// Diagonal density matrix from basis-state weights.
    pub fn from_diagonal(basis: Arc<TwoParticleBasis>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != basis.dimension() {
            return Err(Error::NotDensityMatrix(format!(
                "diagonal has {} entries, basis dimension is {}",
                weights.len(),
                basis.dimension()
            )));
        }
        if let Some(&w) = weights.iter().find(|w| **w < PSD_FLOOR || !w.is_finite()) {
            return Err(Error::NotDensityMatrix(format!("negative weight {w:.3e}")));
        }
        let trace: f64 = weights.iter().sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace = {trace} is not 1")));
        }
        Ok(DensityMatrix {
            basis,
            repr: Repr::Diagonal(weights),
        })
    }

    /// Dense density matrix; validates Hermiticity and unit trace.
    pub fn from_dense(basis: Arc<TwoParticleBasis>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.dimension();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::NotDensityMatrix(format!(
                "matrix is {}x{}, basis dimension is {}",
                matrix.nrows(),
                matrix.ncols(),
                dim
            )));
        }
        let mut herm_residual: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                herm_residual = herm_residual.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if herm_residual > HERMITICITY_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "not Hermitian: residual {herm_residual:.3e}"
            )));
        }
        let trace: f64 = (0..dim).map(|i| matrix[(i, i)].re).sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace = {trace} is not 1")));
        }
        Ok(DensityMatrix {
            basis,
            repr: Repr::Dense(matrix),
        })
    }

    /// Projector onto a normalized pure state given by basis amplitudes.
    pub fn pure_state(basis: Arc<TwoParticleBasis>, amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::NotDensityMatrix(format!(
                "{} amplitudes for basis dimension {}",
                amplitudes.len(),
                basis.dimension()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "state norm^2 = {norm_sq} is not 1"
            )));
        }
        let psi = nalgebra::DVector::from_column_slice(amplitudes);
        let rho = &psi * psi.adjoint();
        Ok(DensityMatrix {
            basis,
            repr: Repr::Dense(rho),
        })
    }

    /// Projector onto the basis state at `index`.
    pub fn pure_basis_state(basis: Arc<TwoParticleBasis>, index: usize) -> Result<Self> {
        if index >= basis.dimension() {
            return Err(Error::invalid(format!(
                "state index {index} out of range for dimension {}",
                basis.dimension()
            )));
        }
        let mut weights = vec![0.0; basis.dimension()];
        weights[index] = 1.0;
        Ok(DensityMatrix {
            basis,
            repr: Repr::Diagonal(weights),
        })
    }

    /// Diagonal density matrix without re-validating the weights.
    /// Callers guarantee non-negativity and unit trace up to rounding.
    pub(crate) fn from_diagonal_unchecked(basis: Arc<TwoParticleBasis>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(weights.len(), basis.dimension());
        DensityMatrix {
            basis,
            repr: Repr::Diagonal(weights),
        }
    }

    pub(crate) fn from_dense_unchecked(
        basis: Arc<TwoParticleBasis>,
        matrix: DMatrix<Complex64>,
    ) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.dimension());
        DensityMatrix {
            basis,
            repr: Repr::Dense(matrix),
        }
    }

    pub fn basis(&self) -> &Arc<TwoParticleBasis> {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    /// True when the state is stored as a bare diagonal.
    pub fn is_diagonal(&self) -> bool {
        matches!(self.repr, Repr::Diagonal(_))
    }

    /// Matrix element (i, j).
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match &self.repr {
            Repr::Diagonal(w) => {
                if i == j {
                    Complex64::new(w[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Repr::Dense(m) => m[(i, j)],
        }
    }

    /// Real diagonal of the matrix.
    pub fn diagonal(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Diagonal(w) => w.clone(),
            Repr::Dense(m) => (0..m.nrows()).map(|i| m[(i, i)].re).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Diagonal(w) => w.iter().sum(),
            Repr::Dense(m) => (0..m.nrows()).map(|i| m[(i, i)].re).sum(),
        }
    }

    /// Purity Tr rho^2.
    pub fn purity(&self) -> f64 {
        match &self.repr {
            Repr::Diagonal(w) => w.iter().map(|x| x * x).sum(),
            Repr::Dense(m) => m.iter().map(|x| x.norm_sqr()).sum(),
        }
    }

    /// Dense copy of the matrix.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        match &self.repr {
            Repr::Diagonal(w) => {
                let dim = w.len();
                DMatrix::from_fn(dim, dim, |i, j| {
                    if i == j {
                        Complex64::new(w[i], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            }
            Repr::Dense(m) => m.clone(),
        }
    }

    /// Zero every off-diagonal element in the canonical occupation basis.
    /// Trace is preserved exactly; the map is idempotent.
    pub fn dephased(&self) -> DensityMatrix {
        match &self.repr {
            Repr::Diagonal(_) => self.clone(),
            Repr::Dense(m) => {
                let weights: Vec<f64> = (0..m.nrows()).map(|i| m[(i, i)].re).collect();
                DensityMatrix {
                    basis: Arc::clone(&self.basis),
                    repr: Repr::Diagonal(weights),
                }
            }
        }
    }

    /// Coincidence probability P(1,1): total diagonal weight on states
    /// with one particle at each site.
    pub fn p11(&self) -> f64 {
        let diag = match &self.repr {
            Repr::Diagonal(w) => w.clone(),
            Repr::Dense(_) => self.diagonal(),
        };
        self.basis.coincidence_indices().map(|i| diag[i]).sum()
    }

    /// Von Neumann entropy -sum(lambda ln lambda) in natural-log units.
    ///
    /// Diagonal states read the eigenvalues straight off the weights; dense
    /// states go through a Hermitian eigendecomposition. Eigenvalues below
    /// [`PSD_ERROR_FLOOR`] are reported as a PSD violation.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let eigenvalues: Vec<f64> = match &self.repr {
            Repr::Diagonal(w) => w.clone(),
            Repr::Dense(m) => m
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect(),
        };
        let mut entropy = 0.0;
        for &lambda in &eigenvalues {
            if lambda < PSD_ERROR_FLOOR {
                return Err(Error::PsdViolation { eigenvalue: lambda });
            }
            if lambda > 0.0 {
                entropy -= lambda * lambda.ln();
            }
        }
        Ok(entropy)
    }

    /// Max entry-wise |self - other|.
    pub fn max_entry_distance(&self, other: &DensityMatrix) -> Result<f64> {
        self.basis.check_same_space(&other.basis)?;
        match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) => Ok(a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)),
            _ => {
                let dim = self.dimension();
                let mut max = 0.0f64;
                for i in 0..dim {
                    for j in 0..dim {
                        max = max.max((self.entry(i, j) - other.entry(i, j)).norm());
                    }
                }
                Ok(max)
            }
        }
    }
}
