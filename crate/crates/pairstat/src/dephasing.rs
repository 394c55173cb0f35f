//! Beam-splitter-array dynamics with strong dephasing.
//!
//! One array element scatters the pair and then discards all off-diagonal
//! density-matrix elements in the occupation basis. Iterating drives any
//! input toward the in-sector uniform mixture; for one internal level and
//! bosons the whole dynamics reduces to a 3x3 doubly stochastic transfer
//! matrix on the site-occupation weights (a, b, c).

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::basis::TwoParticleBasis;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::scattering::{lift_two_particle, BeamSplitter, TwoParticleUnitary};

/// Default convergence threshold on the per-step diagonal change.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Default step budget.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Below this reflectance-transmittance product the splitter is treated as
/// fully reflective or transmissive: the dephased dynamics is frozen (or a
/// bare pp/qq swap) and cannot mix toward equilibrium.
pub const MIN_MIXING: f64 = 1e-15;

/// One scattering-plus-dephasing step: the diagonal of `U rho U+`.
pub fn step(rho: &DensityMatrix, u: &TwoParticleUnitary) -> Result<DensityMatrix> {
    u.basis().check_same_space(rho.basis())?;
    if rho.is_diagonal() {
        let diagonal = u.conjugated_diagonal(&rho.diagonal());
        Ok(DensityMatrix::from_diagonal_unchecked(
            Arc::clone(u.basis()),
            diagonal,
        ))
    } else {
        Ok(u.apply(rho)?.dephased())
    }
}

/// Site-occupation weights: both particles at p (`a`), both at q (`b`),
/// one at each site (`c`). They sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorDistribution {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SectorDistribution {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let dist = SectorDistribution { a, b, c };
        if dist.as_array().iter().any(|w| w.is_nan() || *w < -1e-12) {
            return Err(Error::invalid(format!(
                "negative sector weight in {dist:?}"
            )));
        }
        if ((a + b + c) - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "sector weights in {dist:?} do not sum to 1"
            )));
        }
        Ok(dist)
    }

    /// Aggregate the diagonal of a state by site occupation.
    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self::from_diagonal(rho.basis(), &rho.diagonal())
    }

    /// Aggregate explicit diagonal weights by site occupation.
    pub fn from_diagonal(basis: &TwoParticleBasis, diagonal: &[f64]) -> Self {
        let mut dist = SectorDistribution {
            a: 0.0,
            b: 0.0,
            c: 0.0,
        };
        for (i, &w) in diagonal.iter().enumerate() {
            match basis.state(i).site_occupation() {
                (2, 0) => dist.a += w,
                (0, 2) => dist.b += w,
                _ => dist.c += w,
            }
        }
        dist
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn as_vector(self) -> Vector3<f64> {
        Vector3::new(self.a, self.b, self.c)
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        SectorDistribution::new(v[0], v[1], v[2])
    }
}

/// The 3x3 map of one dephased step on (a, b, c) for one internal level
/// and bosons:
///
/// ```text
/// [ R^2    T^2    2RT      ]
/// [ T^2    R^2    2RT      ]
/// [ 2RT    2RT    (R-T)^2  ]
/// ```
///
/// Doubly stochastic with fixed point (1/3, 1/3, 1/3).
pub fn transfer_matrix_3(r_prob: f64, t_prob: f64) -> Result<Matrix3<f64>> {
    check_probability_pair(r_prob, t_prob)?;
    let (r, t) = (r_prob, t_prob);
    Ok(Matrix3::new(
        r * r,
        t * t,
        2.0 * r * t,
        t * t,
        r * r,
        2.0 * r * t,
        2.0 * r * t,
        2.0 * r * t,
        (r - t) * (r - t),
    ))
}

/// Per-step contraction factors of the transfer dynamics: the weight
/// imbalance a - b shrinks by `R^2 - T^2` and the distance from the uniform
/// mixture a + b - 2c by `(R-T)^2 - 2RT`. Both have magnitude below one
/// whenever 0 < R < 1.
pub fn recursion_ratios(r_prob: f64, t_prob: f64) -> Result<(f64, f64)> {
    check_probability_pair(r_prob, t_prob)?;
    let diff = r_prob - t_prob;
    Ok((
        diff * (r_prob + t_prob),
        diff * diff - 2.0 * r_prob * t_prob,
    ))
}

fn check_probability_pair(r_prob: f64, t_prob: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r_prob) || ((r_prob + t_prob) - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "need R in [0, 1] and R + T = 1, got R = {r_prob}, T = {t_prob}"
        )));
    }
    Ok(())
}

/// One recorded point of an array trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStep {
    /// Array position; 0 is the injected state.
    pub step: usize,
    /// Diagonal of the state after this step.
    pub diagonal: Vec<f64>,
    pub p11: f64,
    pub entropy: f64,
    /// Max-entry diagonal change from the previous step; `None` at step 0.
    pub max_delta: Option<f64>,
}

/// A full run down the beam-splitter array.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub converged: bool,
    /// Steps needed to reach the fixed point: the count of recorded steps
    /// after which one more step moves the diagonal by less than the
    /// tolerance. 0 when the input is already stationary.
    pub steps_to_converge: Option<usize>,
    /// Present when the run cannot certify convergence.
    pub diagnostic: Option<String>,
}

impl Trajectory {
    /// Last recorded step; every trajectory records at least the input.
    pub fn final_step(&self) -> &TrajectoryStep {
        self.steps
            .last()
            .expect("trajectory records the input state")
    }
}

/// Run the homogeneous array: the same splitter at every element, up to
/// `max_steps` steps or until one more step changes the diagonal by less
/// than `tolerance`.
///
/// A fully reflective or transmissive splitter (R or T below
/// [`MIN_MIXING`]) cannot mix; the run stops at the input state with
/// `converged = false` and a diagnostic.
pub fn iterate_to_equilibrium(
    rho0: &DensityMatrix,
    splitter: &BeamSplitter,
    max_steps: usize,
    tolerance: f64,
) -> Result<Trajectory> {
    if max_steps == 0 {
        return Err(Error::invalid("max_steps must be at least 1".to_string()));
    }
    check_tolerance(tolerance)?;
    let r = splitter.reflectance();
    let t = splitter.transmittance();
    if r.min(t) < MIN_MIXING {
        let mut trajectory = Trajectory {
            steps: vec![record(0, rho0, None)?],
            converged: false,
            steps_to_converge: None,
            diagnostic: Some(format!(
                "splitter with R = {r:.3e}, T = {t:.3e} is fully reflective or \
                 transmissive; the dephased dynamics cannot mix toward equilibrium"
            )),
        };
        trajectory.steps.shrink_to_fit();
        return Ok(trajectory);
    }
    let u = lift_two_particle(splitter, rho0.basis());
    drive(rho0, |_| &u, max_steps, tolerance)
}

/// Run an inhomogeneous array, one listed splitter per element, until the
/// list is exhausted or the diagonal change drops below `tolerance`.
pub fn iterate_schedule(
    rho0: &DensityMatrix,
    splitters: &[BeamSplitter],
    tolerance: f64,
) -> Result<Trajectory> {
    if splitters.is_empty() {
        return Err(Error::invalid("splitter schedule is empty".to_string()));
    }
    check_tolerance(tolerance)?;
    let lifts: Vec<TwoParticleUnitary> = splitters
        .iter()
        .map(|s| lift_two_particle(s, rho0.basis()))
        .collect();
    drive(rho0, |i| &lifts[i], splitters.len(), tolerance)
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    Ok(())
}

fn record(step: usize, rho: &DensityMatrix, max_delta: Option<f64>) -> Result<TrajectoryStep> {
    Ok(TrajectoryStep {
        step,
        diagonal: rho.diagonal(),
        p11: rho.p11(),
        entropy: rho.von_neumann_entropy()?,
        max_delta,
    })
}

fn drive<'a, F>(
    rho0: &DensityMatrix,
    unitary_at: F,
    max_steps: usize,
    tolerance: f64,
) -> Result<Trajectory>
where
    F: Fn(usize) -> &'a TwoParticleUnitary,
{
    let mut steps = vec![record(0, rho0, None)?];
    let mut current = rho0.clone();
    let mut converged = false;
    let mut steps_to_converge = None;
    for i in 1..=max_steps {
        let next = step(&current, unitary_at(i - 1))?;
        let delta = diagonal_distance(&current.diagonal(), &next.diagonal());
        if delta < tolerance {
            // the state was already stationary; the probe step is not a
            // trajectory point
            converged = true;
            steps_to_converge = Some(i - 1);
            break;
        }
        steps.push(record(i, &next, Some(delta))?);
        current = next;
    }
    let diagnostic = if converged {
        None
    } else {
        Some(format!(
            "diagonal still moving after {max_steps} steps (tolerance {tolerance:.3e})"
        ))
    };
    Ok(Trajectory {
        steps,
        converged,
        steps_to_converge,
        diagnostic,
    })
}

fn diagonal_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
