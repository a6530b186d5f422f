use std::io::Write;
use std::path::Path;

use schurdirac::dirac::{
    build_channel, c2_consistency, channel_states, check_admissibility, convergence_study, hardy_sweep,
    lowest_principal, sommerfeld_energy, SweepReport,
};
use schurdirac::{Error, RhsPair};
use thiserror::Error as ThisError;

use crate::config::{Command, RunConfig};
use crate::report::{Cell, Report};

#[derive(Debug, ThisError)]
pub enum RunError {
    #[error("{0}")]
    Hypothesis(String),
    #[error(transparent)]
    Library(Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        if e.is_hypothesis_violation() {
            RunError::Hypothesis(e.to_string())
        } else {
            RunError::Library(e)
        }
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Hypothesis(_) => 2,
            _ => 1,
        }
    }
}

/// A finished report and, for `validate`, the hypotheses it found violated.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub violations: Vec<String>,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let report = match cfg.command {
        Command::Validate => return validate(cfg),
        Command::Solve => solve(cfg)?,
        Command::C2 => c2(cfg)?,
        Command::Spectrum => spectrum(cfg)?,
        Command::HardySweep => {
            let grids = cfg.sweep_grids();
            let sweep = hardy_sweep(cfg.kappa, &cfg.sweep_nu, cfg.gamma, &grids, &cfg.sweep_settings())?;
            sweep_report(&sweep, true)
        }
        Command::Convergence => {
            let spec = cfg.channel()?;
            sweep_report(&convergence_study(&spec, &cfg.sweep_grids(), &cfg.sweep_settings())?, false)
        }
    };
    Ok(Outcome {
        report,
        violations: Vec::new(),
    })
}

fn validate(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let spec = cfg.channel()?;
    let grid = cfg.grid.build()?;
    let op = build_channel(&spec, &grid)?;
    op.validate()?;
    let adm = check_admissibility(&spec, &grid);
    let margin = op.positivity_margin(0.0)?;

    let mut report = Report::new(vec!["a", "local_l2"]);
    for &(a, v) in &adm.local_l2 {
        report.push_row(vec![a.into(), v.into()]);
    }
    report.push_summary("c1", op.c1());
    report.push_summary("margin", margin);
    report.push_summary("coupling_sup", adm.coupling_sup);
    report.push_summary("coupling_ok", adm.coupling_ok);
    report.push_summary("gamma_above_max_v", adm.gamma_above_max_v);
    report.push_summary("local_l2_stable", adm.local_l2_stable.map_or(Cell::Missing, Cell::Bool));

    let mut violations = Vec::new();
    if !adm.coupling_ok {
        violations.push(format!(
            "coupling bound sup r|V(r)| <= 1 fails: sup = {:e}",
            adm.coupling_sup
        ));
    }
    if margin.is_nan() || margin <= 0.0 {
        violations.push(format!(
            "Hardy-type positivity fails: lambda_min(M_0) = {margin:e} on this grid"
        ));
    }
    Ok(Outcome { report, violations })
}

fn solve(cfg: &RunConfig) -> Result<Report, RunError> {
    let spec = cfg.channel()?;
    let grid = cfg.grid.build()?;
    let op = build_channel(&spec, &grid)?;
    let f1: Vec<f64> = grid.nodes().iter().map(|&r| cfg.solve_f1.sample(r)).collect();
    let f2: Vec<f64> = grid.nodes().iter().map(|&r| cfg.solve_f2.sample(r)).collect();
    let rhs = RhsPair::new(f1, f2)?;
    let out = op.solve(&rhs)?;

    let mut report = Report::new(vec!["r", "u", "v"]);
    for (j, &r) in grid.nodes().iter().enumerate() {
        report.push_row(vec![r.into(), out.solution.u[j].into(), out.solution.v[j].into()]);
    }
    report.push_summary("rhs_norm", rhs.norm());
    report.push_summary("residual_norm", out.residual_norm);
    report.push_summary("schur_condition_estimate", out.schur_condition_estimate);
    report.push_summary("ill_conditioned", out.ill_conditioned);
    Ok(report)
}

fn c2(cfg: &RunConfig) -> Result<Report, RunError> {
    let spec = cfg.channel()?;
    let grid = cfg.grid.build()?;
    let check = c2_consistency(&spec, &grid, &cfg.tolerances())?;
    let margin = build_channel(&spec, &grid)?.positivity_margin(0.0)?;
    let mut report = Report::new(vec![
        "nu",
        "grid_N",
        "grid_scheme",
        "margin",
        "c2_numeric",
        "c2_analytic",
        "diff",
        "inertia_oracle",
    ]);
    report.push_row(vec![
        spec.nu.into(),
        grid.n().into(),
        grid.scheme().to_string().into(),
        margin.into(),
        check.c2_numeric.into(),
        check.c2_analytic.into(),
        check.diff.into(),
        check.inertia_oracle.into(),
    ]);
    Ok(report)
}

fn spectrum(cfg: &RunConfig) -> Result<Report, RunError> {
    let spec = cfg.channel()?;
    let grid = cfg.grid.build()?;
    let states = channel_states(&spec, &grid, cfg.spectrum_k, &cfg.spectrum_settings())?;
    let n0 = lowest_principal(spec.kappa);
    let mut report = Report::new(vec![
        "index",
        "n",
        "energy",
        "energy_analytic",
        "eigenvalue",
        "high_frequency_fraction",
    ]);
    for (i, s) in states.iter().enumerate() {
        let n = n0 + i as u32;
        report.push_row(vec![
            (i + 1).into(),
            (n as usize).into(),
            s.energy.into(),
            sommerfeld_energy(n, spec.kappa, spec.nu).ok().into(),
            s.eigenvalue.into(),
            s.high_frequency_fraction.into(),
        ]);
    }
    Ok(report)
}

/// Sweep table; the first eight columns form the CSV schema.
pub fn sweep_report(sweep: &SweepReport<f64>, with_nu_star: bool) -> Report {
    let mut report = Report::new(vec![
        "nu",
        "grid_N",
        "grid_scheme",
        "margin",
        "c2_numeric",
        "c2_analytic",
        "e1_numeric",
        "e1_analytic",
        "r_min",
        "r_max",
        "margin_trend",
        "note",
    ]);
    report.csv_width = 8;
    for row in &sweep.rows {
        report.push_row(vec![
            row.nu.into(),
            row.grid_n.into(),
            row.grid_scheme.to_string().into(),
            row.margin.into(),
            row.c2_numeric.into(),
            row.c2_analytic.into(),
            row.e1_numeric.into(),
            row.e1_analytic.into(),
            row.r_min.into(),
            row.r_max.into(),
            row.margin_trend.into(),
            row.note.clone().into(),
        ]);
    }
    report.push_summary("kappa", sweep.kappa);
    report.push_summary("gamma", sweep.gamma);
    if with_nu_star {
        report.push_summary("nu_star", sweep.nu_star);
        for (g, star) in &sweep.nu_star_by_grid {
            report.push_summary(format!("nu_star[N={},r_min={:?}]", g.n, g.r_min), *star);
        }
    }
    report
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial report.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
