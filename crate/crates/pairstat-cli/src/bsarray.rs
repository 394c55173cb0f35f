//! `bsarray`: drive an injected two-particle state down a homogeneous
//! beam-splitter array with dephasing between elements, recording one CSV
//! row per array position.
//!
//! For a single level per site and bosons the rows carry the sector
//! populations (a, b, c) = (both at p, both at q, one at each site), the
//! coordinates in which the dynamics is a 3x3 transfer matrix.

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use pairstat::basis::{Statistics, TwoParticleBasis};
use pairstat::density::DensityMatrix;
use pairstat::dephasing::{iterate_to_equilibrium, SectorDistribution, Trajectory};
use pairstat::scattering::BeamSplitter;
use pairstat::spectrum::{Beta, LevelSpectrum};
use pairstat::thermal;

use crate::report::{sci, Report};
use crate::{Failure, OutArg, SingleStatsArg};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum InjectionArg {
    /// Both particles in the lowest level, one per site
    Pure,
    /// Independent thermal particles, one per site
    Product,
    /// Thermal sector weights spread evenly inside each sector
    Thermal,
}

#[derive(Args)]
pub struct BsarrayArgs {
    /// Particle statistics
    #[arg(long, value_enum, default_value = "boson")]
    stats: SingleStatsArg,

    /// Internal levels per site
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=64))]
    levels: u32,

    /// Beam-splitter mixing angle in radians; R = cos^2(theta)
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta: f64,

    /// Beam-splitter phase in radians
    #[arg(long, default_value_t = 0.0)]
    phase: f64,

    /// Inverse temperature in units of the level spacing; `inf` selects
    /// zero temperature
    #[arg(long, default_value_t = f64::INFINITY)]
    beta_delta: f64,

    /// Injected state
    #[arg(long, value_enum, default_value = "pure")]
    injection: InjectionArg,

    /// Largest number of array elements to apply
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,

    /// Stop once one more element moves the diagonal less than this
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,

    #[command(flatten)]
    out: OutArg,
}

pub fn run(args: &BsarrayArgs) -> Result<ExitCode, Failure> {
    if !(args.theta.is_finite() && args.phase.is_finite()) {
        return Err(Failure::usage("--theta and --phase must be finite"));
    }
    if args.beta_delta.is_nan() || args.beta_delta < 0.0 {
        return Err(Failure::usage(format!(
            "--beta-delta must be nonnegative (use inf for zero temperature), got {}",
            args.beta_delta
        )));
    }
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::usage(format!(
            "--tol must be positive, got {}",
            args.tol
        )));
    }

    let statistics = Statistics::from(args.stats);
    let levels = args.levels as usize;
    let basis = Arc::new(TwoParticleBasis::new(statistics, levels)?);
    let spectrum = LevelSpectrum::equally_spaced(levels, 1.0)?;
    let beta = Beta::new(args.beta_delta)?;
    let rho0 = injected_state(args.injection, &basis, &spectrum, beta)?;
    let splitter = BeamSplitter::from_angles(args.theta, args.phase);

    let trajectory = iterate_to_equilibrium(&rho0, &splitter, args.max_steps as usize, args.tol)?;
    if let Some(diagnostic) = &trajectory.diagnostic {
        eprintln!("warning: {diagnostic}");
    }

    let mut report = Report::new();
    let sector_columns = levels == 1 && statistics == Statistics::Boson;
    report.comment("dephased beam-splitter array trajectory, one row per element");
    report.comment("p11: probability of one particle per site; entropy: von Neumann, nats;");
    report.comment("max_delta: largest diagonal change from the previous row");
    if sector_columns {
        report.comment("a, b, c: both particles at p, both at q, one at each site");
    }
    report.comment(format!(
        "stats={statistics} levels={levels} theta={} phase={} beta_delta={} \
         injection={} tol={} max_steps={}",
        sci(args.theta),
        sci(args.phase),
        sci(args.beta_delta),
        match args.injection {
            InjectionArg::Pure => "pure",
            InjectionArg::Product => "product",
            InjectionArg::Thermal => "thermal",
        },
        sci(args.tol),
        args.max_steps,
    ));
    report.line(if sector_columns {
        "step,p11,entropy,max_delta,a,b,c"
    } else {
        "step,p11,entropy,max_delta"
    });
    for step in &trajectory.steps {
        let delta = step.max_delta.map(sci).unwrap_or_default();
        let mut row = format!(
            "{},{},{},{}",
            step.step,
            sci(step.p11),
            sci(step.entropy),
            delta
        );
        if sector_columns {
            let [a, b, c] = SectorDistribution::from_diagonal(&basis, &step.diagonal).as_array();
            row.push_str(&format!(",{},{},{}", sci(a), sci(b), sci(c)));
        }
        report.line(row);
    }
    report.line(summary_line(&trajectory));
    report.deliver(args.out.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn summary_line(trajectory: &Trajectory) -> String {
    match trajectory.steps_to_converge {
        Some(n) => format!("# converged=true steps_to_converge={n}"),
        None => "# converged=false".to_string(),
    }
}

fn injected_state(
    injection: InjectionArg,
    basis: &Arc<TwoParticleBasis>,
    spectrum: &LevelSpectrum,
    beta: Beta,
) -> Result<DensityMatrix, Failure> {
    match injection {
        InjectionArg::Pure => {
            let index = basis
                .coincidence_index(0, 0)
                .expect("every basis holds the ground coincidence state");
            Ok(DensityMatrix::pure_basis_state(Arc::clone(basis), index)?)
        }
        InjectionArg::Product => Ok(thermal::product_injection_matrix(basis, spectrum, beta)?),
        InjectionArg::Thermal => Ok(thermal::thermal_sector_injection_matrix(
            basis, spectrum, beta,
        )?),
    }
}
