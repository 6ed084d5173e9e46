use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::SystemTime;

use rayon::prelude::*;

use super::{mode_set_checksum, Scenario, TOOL_VERSION};
use crate::control::{
    global_existence_bootstrap, global_existence_simple, solve_control, Certificate, ControlProblem,
    ControlSolution, Envelope, EstimatorProvenance, Horizon, Verdict,
};
use crate::error::{Error, Result};
use crate::estimators::{bundle, EstimatorBundle};
use crate::galerkin::{integrate, Forcing, GalerkinProblem, GalerkinTrajectory};
use crate::spectral::{sobolev_norm, Mode};

/// Points of the uniform figure grid.
pub const FIGURE_POINTS: usize = 400;

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub certificate: Certificate,
    /// Absent when the simple criterion settled the run without integrating.
    pub trajectory: Option<Arc<GalerkinTrajectory>>,
    pub bundle: Option<EstimatorBundle>,
    pub control: Option<ControlSolution>,
}

fn timestamp() -> String {
    humantime::format_rfc3339_seconds(SystemTime::now()).to_string()
}

pub fn run_scenario(scenario: &Scenario) -> Result<RunOutcome> {
    scenario.validate().map_err(|e| e.at_stage("scenario"))?;
    let modes = Arc::new(scenario.load_modes().map_err(|e| e.at_stage("modes"))?);
    let datum = scenario.load_datum().map_err(|e| e.at_stage("datum"))?;
    let (n, nu) = (scenario.n, scenario.nu);
    let c = scenario.constants;
    let t_max = scenario.t_max();

    let mut cert = Certificate {
        nu,
        n,
        k_n: c.k_n,
        g_n: c.g_n,
        delta_n: f64::NAN,
        tc: Horizon::Infinite,
        horizon: t_max,
        blew_up: false,
        verdict: Verdict::CertifiedGlobal,
        t1: None,
        envelope: None,
        simple_threshold: f64::NAN,
        estimators: None,
        samples_csv_path: None,
        tool_version: TOOL_VERSION.to_string(),
        tolerances: scenario.galerkin_tolerances,
        mode_set_checksum: mode_set_checksum(&modes),
        timestamp: timestamp(),
    };

    let norm_u0 = sobolev_norm(&datum, n);
    let simple = global_existence_simple(nu, c.g_n, norm_u0);
    cert.simple_threshold = simple.threshold;
    if simple.global {
        cert.delta_n = norm_u0;
        cert.t1 = Some(0.0);
        cert.envelope = Some(Envelope {
            t1: 0.0,
            amplitude: norm_u0,
        });
        return Ok(RunOutcome {
            certificate: cert,
            trajectory: None,
            bundle: None,
            control: None,
        });
    }

    let problem = GalerkinProblem::new(modes, nu, datum, Forcing::Zero).map_err(|e| e.at_stage("galerkin"))?;
    let traj = integrate(&problem, scenario.horizon, scenario.galerkin_tolerances)
        .map_err(|e| e.at_stage("galerkin"))?;
    let bundle = bundle(&traj, n, &scenario.estimators).map_err(|e| e.at_stage("estimators"))?;
    let control = ControlProblem::new(nu, c, bundle.clone(), t_max)
        .map_err(|e| e.at_stage("control"))?
        .with_options(scenario.control.options);
    let solution = solve_control(&control).map_err(|e| e.at_stage("control"))?;
    let boot = global_existence_bootstrap(&solution, &bundle, nu, c.g_n, scenario.control.bootstrap_scan_points);

    cert.delta_n = bundle.delta_n;
    cert.blew_up = solution.blew_up;
    cert.estimators = Some(EstimatorProvenance {
        delta: bundle.delta_provenance,
        eps: bundle.eps_provenance,
        growth: bundle.growth_provenance,
    });
    cert.tolerances = control.options.tolerances;
    if let (Some(t1), Some(amplitude)) = (boot.t1, boot.amplitude) {
        cert.verdict = Verdict::CertifiedGlobal;
        cert.tc = Horizon::Infinite;
        cert.t1 = Some(t1);
        cert.envelope = Some(Envelope { t1, amplitude });
    } else if solution.blew_up {
        cert.verdict = Verdict::CertifiedUpToTc;
        cert.tc = Horizon::Finite(solution.tc);
    } else {
        cert.verdict = Verdict::Inconclusive;
        cert.tc = Horizon::Finite(solution.tc);
    }

    Ok(RunOutcome {
        certificate: cert,
        trajectory: Some(Arc::new(traj)),
        bundle: Some(bundle),
        control: Some(solution),
    })
}

/// Uniform grid of [`FIGURE_POINTS`] points over the computed part of the
/// control solution: `[0, T_max]`, or up to the last accepted step before
/// blow-up.
pub fn figure_grid(outcome: &RunOutcome) -> Option<Vec<f64>> {
    let end = outcome.control.as_ref()?.t_last();
    let last = (FIGURE_POINTS - 1) as f64;
    Some((0..FIGURE_POINTS).map(|i| end * i as f64 / last).collect())
}

/// Writes `certificate.json` and, when the run integrated anything,
/// `trajectory.csv` and `samples.csv` on the figure grid.
pub fn write_run(outcome: &mut RunOutcome, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    if let (Some(traj), Some(b), Some(sol), Some(grid)) = (
        &outcome.trajectory,
        &outcome.bundle,
        &outcome.control,
        figure_grid(outcome),
    ) {
        fs::write(dir.join("trajectory.csv"), traj.to_csv(&grid)?)?;
        let mut csv = String::from("t,D_n,D_np1,eps_n,R_n\n");
        for &t in &grid {
            let r = sol.value_at(t).unwrap_or(f64::NAN);
            csv.push_str(&format!(
                "{t:.17e},{:.17e},{:.17e},{:.17e},{r:.17e}\n",
                b.growth(t),
                b.growth_next(t),
                b.eps(t)
            ));
        }
        let samples = dir.join("samples.csv");
        fs::write(&samples, csv)?;
        outcome.certificate.samples_csv_path = Some(samples.display().to_string());
    }
    let path = dir.join("certificate.json");
    fs::write(&path, serde_json::to_string_pretty(&outcome.certificate)?)?;
    Ok(path)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureFiles {
    pub modes_csv: PathBuf,
    pub estimators_csv: PathBuf,
}

/// Writes `figure_modes.csv` (`t, |γ_k|` per requested mode) and
/// `figure_estimators.csv` (`t, D_n, eps_n, R_n`) on the figure grid.
pub fn emit_figure_data(outcome: &RunOutcome, modes: &[Mode], dir: &Path) -> Result<FigureFiles> {
    let (traj, b, sol, grid) = match (&outcome.trajectory, &outcome.bundle, &outcome.control, figure_grid(outcome)) {
        (Some(t), Some(b), Some(s), Some(g)) => (t, b, s, g),
        _ => return Err(Error::InvalidArgument("run has no integrated trajectory to plot".into())),
    };
    fs::create_dir_all(dir)?;
    let mut modes_csv = String::from("t");
    for k in modes {
        if !traj.modes().contains(k) {
            return Err(Error::UnknownMode(k.to_string()));
        }
        modes_csv.push_str(&format!(",|g{k}|"));
    }
    modes_csv.push('\n');
    let mut est_csv = String::from("t,D_n,eps_n,R_n\n");
    for &t in &grid {
        modes_csv.push_str(&format!("{t:.17e}"));
        for k in modes {
            modes_csv.push_str(&format!(",{:.17e}", traj.coefficient_abs(k, t)?));
        }
        modes_csv.push('\n');
        est_csv.push_str(&format!(
            "{t:.17e},{:.17e},{:.17e},{:.17e}\n",
            b.growth(t),
            b.eps(t),
            sol.value_at(t).unwrap_or(f64::NAN)
        ));
    }
    let files = FigureFiles {
        modes_csv: dir.join("figure_modes.csv"),
        estimators_csv: dir.join("figure_estimators.csv"),
    };
    fs::write(&files.modes_csv, modes_csv)?;
    fs::write(&files.estimators_csv, est_csv)?;
    Ok(files)
}

/// Builds the figure CSVs from the files a run wrote into `run_dir`.
pub fn figures_from_run_dir(run_dir: &Path, modes: &[Mode], out: &Path) -> Result<FigureFiles> {
    let read = |name: &str| -> Result<String> {
        fs::read_to_string(run_dir.join(name)).map_err(|e| {
            Error::InvalidArgument(format!("cannot read {name} in {}: {e}", run_dir.display()))
        })
    };
    let traj = read("trajectory.csv")?;
    let samples = read("samples.csv")?;
    let mut lines = traj.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let index: HashMap<&str, usize> = header.iter().enumerate().map(|(i, h)| (*h, i)).collect();
    let mut columns = Vec::with_capacity(modes.len());
    for k in modes {
        let (canon, _) = k.canonical();
        let label: Vec<String> = canon.components().iter().map(|c| c.to_string()).collect();
        let label = label.join("_");
        let cols: Vec<usize> = (0..canon.dim())
            .flat_map(|r| [format!("re_{label}_{r}"), format!("im_{label}_{r}")])
            .map(|name| index.get(name.as_str()).copied().ok_or_else(|| Error::UnknownMode(k.to_string())))
            .collect::<Result<_>>()?;
        columns.push(cols);
    }

    let parse_row = |line: &str, lineno: usize| -> Result<Vec<f64>> {
        line.split(',')
            .map(|x| x.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })
    };

    fs::create_dir_all(out)?;
    let mut modes_csv = String::from("t");
    for k in modes {
        modes_csv.push_str(&format!(",|g{k}|"));
    }
    modes_csv.push('\n');
    for (i, line) in lines.enumerate() {
        let row = parse_row(line, i + 2)?;
        modes_csv.push_str(&format!("{:.17e}", row[0]));
        for cols in &columns {
            let abs = cols.iter().map(|&c| row[c] * row[c]).sum::<f64>().sqrt();
            modes_csv.push_str(&format!(",{abs:.17e}"));
        }
        modes_csv.push('\n');
    }

    let mut est_csv = String::from("t,D_n,eps_n,R_n\n");
    for (i, line) in samples.lines().skip(1).enumerate() {
        let row = parse_row(line, i + 2)?;
        est_csv.push_str(&format!("{:.17e},{:.17e},{:.17e},{:.17e}\n", row[0], row[1], row[3], row[4]));
    }

    let files = FigureFiles {
        modes_csv: out.join("figure_modes.csv"),
        estimators_csv: out.join("figure_estimators.csv"),
    };
    fs::write(&files.modes_csv, modes_csv)?;
    fs::write(&files.estimators_csv, est_csv)?;
    Ok(files)
}

/// Runs scenario files in parallel on at most `threads` workers.
pub fn run_batch(paths: &[PathBuf], threads: usize) -> Result<Vec<(PathBuf, Result<RunOutcome>)>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(pool.install(|| {
        paths
            .par_iter()
            .map(|p| {
                let outcome = Scenario::load(p).and_then(|s| {
                    let mut o = run_scenario(&s)?;
                    if let Some(dir) = &s.output_dir {
                        write_run(&mut o, dir)?;
                    }
                    Ok(o)
                });
                (p.clone(), outcome)
            })
            .collect()
    }))
}
