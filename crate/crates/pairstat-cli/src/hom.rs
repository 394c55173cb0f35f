//! `hom`: the single-splitter interference check. One particle enters at
//! each port; the reported coincidence probability is measured by actually
//! lifting the splitter and stepping the state once, not from a formula.
//!
//! Bosons bunch: the coincidence probability is (R - T)^2, zero on a
//! balanced splitter. Fermions antibunch: it stays 1 for every splitter.

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Args;
use pairstat::basis::{Statistics, TwoParticleBasis};
use pairstat::density::DensityMatrix;
use pairstat::dephasing::step;
use pairstat::scattering::BeamSplitter;

use crate::report::{sci, Report};
use crate::{Failure, OutArg, StatsArg};

#[derive(Args)]
pub struct HomArgs {
    /// Particle statistics to report
    #[arg(long, value_enum, default_value = "both")]
    stats: StatsArg,

    /// Beam-splitter mixing angle in radians; R = cos^2(theta)
    #[arg(long, default_value_t = FRAC_PI_4)]
    theta: f64,

    /// Beam-splitter phase in radians
    #[arg(long, default_value_t = 0.0)]
    phase: f64,

    #[command(flatten)]
    out: OutArg,
}

pub fn run(args: &HomArgs) -> Result<ExitCode, Failure> {
    if !(args.theta.is_finite() && args.phase.is_finite()) {
        return Err(Failure::usage("--theta and --phase must be finite"));
    }
    let splitter = BeamSplitter::from_angles(args.theta, args.phase);

    let mut report = Report::new();
    report.line("one splitter, one particle per input port");
    report.line(format!(
        "theta={} phase={} R={} T={}",
        sci(args.theta),
        sci(args.phase),
        sci(splitter.reflectance()),
        sci(splitter.transmittance()),
    ));
    for statistics in args.stats.selected() {
        let p11 = measured_coincidence(statistics, &splitter)?;
        report.line(format!(
            "{statistics} coincidence after one step: {}",
            sci(p11)
        ));
    }
    report.deliver(args.out.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn measured_coincidence(statistics: Statistics, splitter: &BeamSplitter) -> Result<f64, Failure> {
    let basis = Arc::new(TwoParticleBasis::new(statistics, 1)?);
    let index = basis
        .coincidence_index(0, 0)
        .expect("single-level basis holds the coincidence state");
    let rho = DensityMatrix::pure_basis_state(Arc::clone(&basis), index)?;
    let u = pairstat::scattering::lift_two_particle(splitter, &basis);
    Ok(step(&rho, &u)?.p11())
}
