//! `sweep`: coincidence probability P(1,1) across a temperature grid.
//!
//! Each row compares the closed-form equal-spacing value against a
//! truncated-ladder sum whose level count is chosen per point from the
//! requested truncation tolerance, so the `abs_err` column measures the
//! truncation quality directly.

use std::process::ExitCode;

use clap::{Args, ValueEnum};
use pairstat::basis::Statistics;
use pairstat::spectrum::{Beta, LevelSpectrum};
use pairstat::thermal;
use rayon::prelude::*;

use crate::report::{sci, Report};
use crate::{Failure, OutArg, StatsArg};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Log,
    Linear,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Particle statistics to include
    #[arg(long, value_enum, default_value = "both")]
    stats: StatsArg,

    /// Lowest kT in units of the level spacing
    #[arg(long, default_value_t = 0.01)]
    kt_min: f64,

    /// Highest kT in units of the level spacing
    #[arg(long, default_value_t = 10.0)]
    kt_max: f64,

    /// Number of grid points
    #[arg(long, default_value_t = 200)]
    points: usize,

    /// Grid spacing
    #[arg(long, value_enum, default_value = "log")]
    grid: GridArg,

    /// Truncation tolerance that picks the ladder length per point
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,

    #[command(flatten)]
    out: OutArg,
}

struct Row {
    statistics: Statistics,
    kt: f64,
    analytic: f64,
    numeric: f64,
    truncation: usize,
}

pub fn run(args: &SweepArgs) -> Result<ExitCode, Failure> {
    let grid = build_grid(args)?;
    if args.tol.is_nan() || args.tol <= 0.0 || args.tol >= 1.0 {
        return Err(Failure::usage(format!(
            "--tol must lie strictly between 0 and 1, got {}",
            args.tol
        )));
    }
    let selected = args.stats.selected();

    let rows: Vec<Row> = grid
        .par_iter()
        .map(|&kt| evaluate_point(kt, args.tol, &selected))
        .collect::<Result<Vec<_>, Failure>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut report = Report::new();
    report.comment("coincidence probability of finding one particle at each site");
    report.comment("for a thermal pair on an equally spaced ladder, vs temperature");
    report.comment("p11_analytic: infinite-ladder closed form; p11_numeric: ladder truncated");
    report.comment("to truncation_L levels; abs_err: absolute difference of the two");
    report.comment(format!(
        "grid={} points={} kt_min={} kt_max={} tol={} stats={}",
        match args.grid {
            GridArg::Log => "log",
            GridArg::Linear => "linear",
        },
        args.points,
        sci(args.kt_min),
        sci(args.kt_max),
        sci(args.tol),
        match args.stats {
            StatsArg::Boson => "boson",
            StatsArg::Fermion => "fermion",
            StatsArg::Both => "both",
        },
    ));
    report.line("stats,kt_over_delta,p11_analytic,p11_numeric,truncation_L,abs_err");
    for row in &rows {
        report.line(format!(
            "{},{},{},{},{},{}",
            row.statistics,
            sci(row.kt),
            sci(row.analytic),
            sci(row.numeric),
            row.truncation,
            sci((row.analytic - row.numeric).abs()),
        ));
    }
    report.deliver(args.out.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn build_grid(args: &SweepArgs) -> Result<Vec<f64>, Failure> {
    if !(args.kt_min.is_finite() && args.kt_min > 0.0) {
        return Err(Failure::usage(format!(
            "--kt-min must be a positive finite temperature, got {}",
            args.kt_min
        )));
    }
    if !args.kt_max.is_finite() {
        return Err(Failure::usage(format!(
            "--kt-max must be finite, got {}",
            args.kt_max
        )));
    }
    if args.points == 0 {
        return Err(Failure::usage("--points must be at least 1"));
    }
    if args.points == 1 {
        if args.kt_min != args.kt_max {
            return Err(Failure::usage(
                "--points 1 requires --kt-min and --kt-max to coincide",
            ));
        }
        return Ok(vec![args.kt_min]);
    }
    if args.kt_min >= args.kt_max {
        return Err(Failure::usage(format!(
            "--kt-min must be below --kt-max, got {} and {}",
            args.kt_min, args.kt_max
        )));
    }

    let n = args.points;
    let grid = (0..n)
        .map(|i| {
            if i == 0 {
                args.kt_min
            } else if i == n - 1 {
                args.kt_max
            } else {
                let frac = i as f64 / (n - 1) as f64;
                match args.grid {
                    GridArg::Log => args.kt_min * (args.kt_max / args.kt_min).powf(frac),
                    GridArg::Linear => args.kt_min + frac * (args.kt_max - args.kt_min),
                }
            }
        })
        .collect();
    Ok(grid)
}

fn evaluate_point(kt: f64, tol: f64, selected: &[Statistics]) -> Result<Vec<Row>, Failure> {
    let beta_delta = 1.0 / kt;
    let levels = thermal::required_truncation(beta_delta, tol)?;
    let ladder = LevelSpectrum::equally_spaced(levels, 1.0)?;
    let beta = Beta::new(beta_delta)?;
    selected
        .iter()
        .map(|&statistics| {
            Ok(Row {
                statistics,
                kt,
                analytic: thermal::p11_analytic(beta_delta, statistics)?,
                numeric: thermal::p11_numeric(&ladder, beta, statistics),
                truncation: levels,
            })
        })
        .collect()
}
