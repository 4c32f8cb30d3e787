//! The experiments behind each subcommand.
//!
//! Every experiment first computes all of its tables and only then touches
//! the output directory, so a failing run leaves no partial output.

use std::fs;
use std::path::PathBuf;

use cachenet_core::analytic::{self, Policy};
use cachenet_core::montecarlo::sample_realization;
use cachenet_core::optimizer::{
    feasible_curve, feasible_interval, grid_verify, objective_value, solve, storage_on_budget,
};
use cachenet_core::{Association, Objective};
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::driver;
use crate::error::{exit, CliError};
use crate::format::decimal;
use crate::output::{write_text, Plot, Table};

/// Files written by a run and the verdict of a validation campaign.
#[derive(Debug, Clone)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub tables: Vec<Table>,
    pub validation: Option<ValidationSummary>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match &self.validation {
            Some(v) if !v.passed() => exit::VALIDATION,
            _ => exit::OK,
        }
    }
}

/// Passing cells per policy.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSummary {
    pub required_fraction: f64,
    /// `(policy, passed, total)`
    pub policies: Vec<(Association, usize, usize)>,
}

impl ValidationSummary {
    pub fn fraction(&self, policy: Association) -> f64 {
        let (_, passed, total) = self.policies.iter().find(|p| p.0 == policy).expect("policy validated");
        *passed as f64 / *total as f64
    }

    pub fn passed(&self) -> bool {
        self.policies
            .iter()
            .all(|&(_, passed, total)| passed as f64 >= self.required_fraction * total as f64)
    }
}

/// Runs `experiment`, writes its CSVs, plot scripts and the effective
/// configuration under `config.out_dir`, and optionally dumps one trial.
pub fn run(config: &ExperimentConfig, experiment: Experiment, dump_trial: Option<u64>) -> Result<Report, CliError> {
    let (mut tables, validation) = match experiment {
        Experiment::SweepHit => (vec![sweep_hit(config)?], None),
        Experiment::FeasibleSet => (feasible_set(config)?, None),
        Experiment::SweepDensityAse => (sweep_density(config, false)?, None),
        Experiment::SweepDensityEe => (sweep_density(config, true)?, None),
        Experiment::Optimize => (vec![optimize(config)?], None),
        Experiment::Validate => {
            let (table, summary) = validate(config)?;
            (vec![table], Some(summary))
        }
    };
    if let Some(trial) = dump_trial {
        tables.push(trial_dump(config, trial)?);
    }

    let dir = &config.out_dir;
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut files = Vec::new();
    for table in &tables {
        files.extend(table.write(dir)?);
    }
    let conf = dir.join(format!("{}.effective.conf", experiment.name()));
    let mut effective = config.clone();
    effective.experiment = Some(experiment);
    write_text(&conf, &effective.to_text())?;
    files.push(conf);

    Ok(Report {
        files,
        tables,
        validation,
    })
}

fn budget_label(c: f64) -> String {
    format!("c{}", decimal(c))
}

/// ASE against hit probability at the configured density.
pub fn sweep_hit(config: &ExperimentConfig) -> Result<Table, CliError> {
    let mut table = Table::new(
        "sweep_hit",
        &["p_hit", "ase_static", "ase_dynamic", "ase_dynamic_lb"],
        Plot {
            title: format!("ASE, lambda = {} SCs/m^2", decimal(config.network.lambda())),
            xlabel: "cache hit probability",
            ylabel: "ASE [bps/Hz/m^2]",
            x: 1,
            series: vec![
                (2, "static".into()),
                (3, "dynamic".into()),
                (4, "dynamic, lower bound".into()),
            ],
            log_x: false,
            log_y: false,
            style: "linespoints",
        },
    );
    let n = &config.network;
    let q = &config.quadrature;
    for p in config.p_hit_grid.values() {
        table.push_numbers(&[
            p,
            analytic::ase(Policy::Static, n, p, q)?,
            analytic::ase(Policy::Dynamic, n, p, q)?,
            analytic::ase(Policy::DynamicLowerBound, n, p, q)?,
        ]);
    }
    Ok(table)
}

/// Budget-equality curve S(λ) for every budget.
pub fn feasible_set(config: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    config
        .budgets
        .iter()
        .map(|&c| {
            let curve = feasible_curve(&config.economics_at(c), config.feasible_points)?;
            let mut table = Table::new(
                format!("feasible_set_{}", budget_label(c)),
                &["lambda", "s"],
                Plot {
                    title: format!("feasible set, c = {} $/m^2", decimal(c)),
                    xlabel: "SC density [SCs/m^2]",
                    ylabel: "storage [files/SC]",
                    x: 1,
                    series: vec![(2, "S on budget".into())],
                    log_x: true,
                    log_y: false,
                    style: "lines",
                },
            );
            for (lambda, s) in curve.points {
                table.push_numbers(&[lambda, s]);
            }
            Ok(table)
        })
        .collect()
}

/// ASE or EE of both policies along each budget curve.
pub fn sweep_density(config: &ExperimentConfig, energy: bool) -> Result<Vec<Table>, CliError> {
    let (stem, ylabel) = if energy {
        ("sweep_density_ee", "EE [bit/J]")
    } else {
        ("sweep_density_ase", "ASE [bps/Hz/m^2]")
    };
    let objective = |a| if energy { Objective::ee(a) } else { Objective::ase(a) };
    let mut tables = Vec::new();
    for &c in &config.budgets {
        let econ = config.economics_at(c);
        let (lo, hi) = feasible_interval(&econ)?;
        let grid = config.density_grid.clipped(lo, hi).ok_or(CliError::EmptySweep {
            budget: c,
            start: config.density_grid.start,
            stop: config.density_grid.stop,
            lo,
            hi,
        })?;
        let mut table = Table::new(
            format!("{stem}_{}", budget_label(c)),
            &["lambda", "s_on_budget", "p_hit", "metric_static", "metric_dynamic"],
            Plot {
                title: format!("{}, c = {} $/m^2", if energy { "EE" } else { "ASE" }, decimal(c)),
                xlabel: "SC density [SCs/m^2]",
                ylabel,
                x: 1,
                series: vec![(4, "static".into()), (5, "dynamic".into())],
                log_x: true,
                log_y: false,
                style: "linespoints",
            },
        );
        for lambda in grid.values() {
            let s = storage_on_budget(&econ, lambda);
            let p_hit = s / econ.catalog_size() as f64;
            let m = |a| objective_value(objective(a), &econ, &config.network, lambda, s, &config.quadrature);
            table.push_numbers(&[lambda, s, p_hit, m(Association::Static)?, m(Association::Dynamic)?]);
        }
        tables.push(table);
    }
    Ok(tables)
}

/// Closed-form optimum and budget-line grid check for every problem,
/// policy and budget.
pub fn optimize(config: &ExperimentConfig) -> Result<Table, CliError> {
    let mut table = Table::new(
        "optimize",
        &[
            "problem",
            "policy",
            "budget",
            "lambda_star",
            "s_star",
            "objective",
            "grid_lambda",
            "grid_s",
            "grid_objective",
            "binding",
        ],
        Plot {
            title: "optimal SC density".into(),
            xlabel: "budget [$/m^2]",
            ylabel: "lambda* [SCs/m^2]",
            x: 3,
            series: vec![(4, "closed form".into()), (7, "grid".into())],
            log_x: false,
            log_y: true,
            style: "points",
        },
    );
    for (problem, energy) in [("P1", false), ("P2", true)] {
        for association in Association::ALL {
            let objective = if energy {
                Objective::ee(association)
            } else {
                Objective::ase(association)
            };
            for &c in &config.budgets {
                let econ = config.economics_at(c);
                let best = solve(objective, &econ, &config.network, &config.quadrature)?;
                let grid = grid_verify(
                    objective,
                    &econ,
                    &config.network,
                    config.grid_resolution,
                    &config.quadrature,
                )?;
                let mut row = vec![problem.to_string(), association.name().to_string()];
                row.extend(
                    [
                        c,
                        best.lambda_star,
                        best.s_star,
                        best.objective_value,
                        grid.lambda_star,
                        grid.s_star,
                        grid.objective_value,
                    ]
                    .map(decimal),
                );
                row.push(best.binding.names().join("|"));
                table.push(row);
            }
        }
    }
    Ok(table)
}

/// Monte Carlo against closed form over the validation grid.
pub fn validate(config: &ExperimentConfig) -> Result<(Table, ValidationSummary), CliError> {
    let mut cells = Vec::new();
    for association in Association::ALL {
        for &lambda in &config.validate_lambda {
            for &p_hit in &config.validate_p_hit {
                for &theta in &config.validate_theta {
                    cells.push((association, lambda, p_hit, theta));
                }
            }
        }
    }
    let results = cells
        .par_iter()
        .map(|&(association, lambda, p_hit, theta)| {
            let params = config.network.with_lambda(lambda)?.with_theta(theta)?;
            let analytic =
                analytic::success_probability(Policy::from(association), &params, p_hit, &config.quadrature)?;
            let spec = config.simulation.spec(association)?;
            let estimate = driver::estimate_success(&params, p_hit, &spec)?;
            Ok((analytic, estimate))
        })
        .collect::<Result<Vec<_>, cachenet_core::Error>>()?;

    let mut table = Table::new(
        "validate",
        &[
            "policy",
            "lambda",
            "p_hit",
            "theta",
            "analytic",
            "p_hat",
            "std_error",
            "z",
            "pass",
        ],
        Plot {
            title: "Monte Carlo against closed form".into(),
            xlabel: "closed-form success probability",
            ylabel: "Monte Carlo estimate",
            x: 5,
            series: vec![(6, "cells".into()), (5, "identity".into())],
            log_x: false,
            log_y: false,
            style: "points",
        },
    );
    let mut policies: Vec<(Association, usize, usize)> = Association::ALL.iter().map(|&a| (a, 0, 0)).collect();
    for (&(association, lambda, p_hit, theta), (analytic, est)) in cells.iter().zip(results) {
        let pass = est.agrees_with(analytic, config.pass_band);
        let z = if est.std_error > 0.0 {
            (est.p_hat - analytic) / est.std_error
        } else {
            0.0
        };
        let tally = policies.iter_mut().find(|p| p.0 == association).expect("policy listed");
        tally.2 += 1;
        if pass {
            tally.1 += 1;
        }
        let mut row = vec![association.name().to_string()];
        row.extend([lambda, p_hit, theta, analytic, est.p_hat, est.std_error, z].map(decimal));
        row.push(if pass { "pass" } else { "fail" }.to_string());
        table.push(row);
    }
    Ok((
        table,
        ValidationSummary {
            required_fraction: config.pass_fraction,
            policies,
        },
    ))
}

/// Interferer layout of one static-association trial at the configured
/// density and storage.
pub fn trial_dump(config: &ExperimentConfig, trial: u64) -> Result<Table, CliError> {
    let spec = config.simulation.spec(Association::Static)?;
    let p_hit = config.economics.hit_probability();
    let realization = sample_realization(&config.network, p_hit, &spec, trial)?;
    let mut table = Table::new(
        format!("trial_{trial}"),
        &["field", "x_m", "y_m", "hit_flag", "bh_angle_rad"],
        Plot {
            title: format!("trial {trial}, window radius {} m", decimal(realization.window_radius)),
            xlabel: "x [m]",
            ylabel: "y [m]",
            x: 2,
            series: vec![(3, "small cells".into())],
            log_x: false,
            log_y: false,
            style: "points",
        },
    );
    let fields = [
        ("access", Some(&realization.access)),
        ("backhaul", realization.backhaul.as_ref()),
    ];
    for (name, field) in fields {
        for i in field.into_iter().flatten() {
            let (x, y) = i.position();
            let mut row = vec![name.to_string()];
            row.extend([x, y].map(decimal));
            row.push(if i.hit { "1" } else { "0" }.to_string());
            row.push(decimal(i.bh_angle()));
            table.push(row);
        }
    }
    Ok(table)
}
