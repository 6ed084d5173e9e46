use nscert::certify::{run_scenario, RunOutcome, Scenario};
use nscert::control::{
    chernyshenko_criterion, decay_envelope, global_existence_bootstrap, solve_control, ControlOptions, ControlProblem,
};
use nscert::estimators::{growth_estimator, EstimatorBundle, ResidualEvaluator};
use nscert::ode::Tolerances;
use nscert::spectral::InequalityConstants;

const C: InequalityConstants = InequalityConstants::D3_N3;

fn bnw(nu: f64) -> RunOutcome {
    run_scenario(&Scenario::bnw(nu, 1.0)).unwrap()
}

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

#[test]
fn inflated_residual_gives_a_supersolution() {
    let run = bnw(7.0);
    let bundle = run.bundle.clone().unwrap();
    let base = run.control.as_ref().unwrap();
    let sup = solve_control(&ControlProblem::new(7.0, C, bundle.with_scaled_eps(1.1, 0.01), 1.0).unwrap()).unwrap();
    assert!(sup.tc <= base.tc);
    for i in 0..=100 {
        let t = sup.t_last() * i as f64 / 100.0;
        assert!(sup.value_at(t).unwrap() >= base.value_at(t).unwrap() * (1.0 - 1e-8), "t = {t}");
    }
}

#[test]
fn blowup_time_grows_with_viscosity() {
    let tc: Vec<f64> = [0.0, 3.0, 7.0].iter().map(|&nu| bnw(nu).certificate.tc.as_f64()).collect();
    assert!(tc[0] <= tc[1] && tc[1] <= tc[2], "{tc:?}");
}

#[test]
fn blowup_time_is_stable_under_tighter_tolerances() {
    let run = bnw(0.0);
    let bundle = run.bundle.clone().unwrap();
    let tol = ControlOptions::default().tolerances;
    let options = ControlOptions {
        tolerances: Tolerances { rtol: tol.rtol / 2.0, atol: tol.atol / 2.0 },
        ..ControlOptions::default()
    };
    let tight = solve_control(&ControlProblem::new(0.0, C, bundle, 1.0).unwrap().with_options(options)).unwrap();
    assert!((tight.tc - run.certificate.tc.as_f64()).abs() < 1e-4);
}

#[test]
fn bootstrap_fails_at_nu_seven() {
    let run = bnw(7.0);
    let out = global_existence_bootstrap(run.control.as_ref().unwrap(), run.bundle.as_ref().unwrap(), 7.0, C.g_n, 1000);
    assert!(!out.global);
}

#[test]
fn worked_envelope_example() {
    let amplitude = 0.06100 + 8.580e-5;
    let env = decay_envelope(0.9, amplitude, 8.0, C.g_n);
    assert!(env.is_global());
    assert!((env.eval(0.9).unwrap() - amplitude).abs() <= 1e-15);
    for i in 0..=100 {
        let t = 0.9 + 0.05 * i as f64;
        let bound = 0.0614 * (-8.0 * (t - 0.9)).exp();
        assert!(env.eval(t).unwrap() <= bound, "t = {t}");
    }
    assert!(env.eval(0.5).is_err());
    assert_eq!(decay_envelope(0.0, 0.0, 8.0, C.g_n).eval(3.0).unwrap(), 0.0);
}

#[test]
fn criterion_fails_on_long_window_with_datum_error() {
    let bundle = EstimatorBundle::zero_approximant(3.0, 154.3, 1.0);
    assert!(!chernyshenko_criterion(1.0, &bundle, C).unwrap().holds);
    assert!(chernyshenko_criterion(1.5, &bundle, C).is_err());
}

#[test]
fn figure_caption_values() {
    let at = |run: &RunOutcome, t: f64| -> (f64, f64, f64) {
        let traj = run.trajectory.clone().unwrap();
        let d = growth_estimator(&traj, 3.0, t).unwrap();
        let eps = ResidualEvaluator::new(traj).exact(3.0, t).unwrap();
        (d, eps, run.control.as_ref().unwrap().value_at(t).unwrap())
    };
    let (nu0, nu7, nu8) = (bnw(0.0), bnw(7.0), bnw(8.0));
    let rows = [
        ("D3(0) nu=0", at(&nu0, 0.0).0, 154.3, 1e-3),
        ("D3(0.02) nu=0", at(&nu0, 0.02).0, 156.4, 0.01),
        ("R3(0.07) nu=7", at(&nu7, 0.07).2, 2.096, 0.10),
        ("R3(0.15) nu=7", at(&nu7, 0.15).2, 20.90, 0.10),
        ("eps3(0.15) nu=8", at(&nu8, 0.15).1, 0.002638, 0.05),
        ("R3(0.2) nu=8", at(&nu8, 0.2).2, 6.435, 0.10),
        ("R3(0.4) nu=8", at(&nu8, 0.4).2, 2.787, 0.10),
        ("R3(0.6) nu=8", at(&nu8, 0.6).2, 0.6503, 0.10),
    ];
    for (name, got, want, tol) in rows {
        assert!(rel(got, want) < tol, "{name}: {got} vs {want}");
    }
    assert!(at(&nu0, 0.0).2.abs() <= 1e-12);
}
