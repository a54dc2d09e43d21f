use deltareg::experiments::{
    burgers_homogeneous, fit_convergence, run_study, self_convergence_reference, ProblemKind, ProblemSpec,
    SolveOptions, SourceTerm, StudyConfig, DESK_N_VALUES,
};
use deltareg::KernelSpec;

fn advection_study(m: usize) -> deltareg::experiments::ConvergenceReport {
    let cfg = StudyConfig::new(ProblemKind::Advection, KernelSpec::new(m, 4).unwrap(), DESK_N_VALUES.to_vec());
    run_study(&cfg).unwrap()
}

#[test]
fn regularized_advection_converges() {
    let r = advection_study(7);
    assert_eq!(r.epsilon, 6.6e-2);
    assert!(r.q_constraint_ok);
    for w in r.points.windows(2) {
        assert!(w[1].error_p < w[0].error_p, "P errors must decrease: {} -> {}", w[0].error_p, w[1].error_p);
        assert!(w[1].error_q < w[0].error_q, "Q errors must decrease: {} -> {}", w[0].error_q, w[1].error_q);
    }
    // The R bands cap the accuracy of the whole domain.
    assert!(r.fit_q.order >= r.fit_full.order);
    assert!(r.fit_pq.order >= 5.0, "{}", r.fit_pq.order);
    for p in &r.points {
        assert_eq!(p.tags.len(), p.nodes.len());
    }
}

#[test]
fn more_moments_keep_the_order() {
    let r = advection_study(9);
    assert!(r.fit_pq.order >= 5.0, "{}", r.fit_pq.order);
}

#[test]
fn burgers_reference_matches_characteristics() {
    let problem = ProblemSpec::burgers();
    let opts = SolveOptions::for_problem(ProblemKind::Burgers);
    let reference = self_convergence_reference(&problem, &SourceTerm::None, 64, &opts).unwrap();
    for i in 0..=50 {
        let x = 2.0 * i as f64 / 50.0;
        let dev = (reference.eval(x) - burgers_homogeneous(x, 2.0)).abs();
        assert!(dev < 1e-8, "x={x}: {dev}");
    }
}

#[test]
fn convergence_fit_examples() {
    let two = fit_convergence(&[100, 200], &[1e-2, 1e-3]).unwrap();
    assert!((two.order - 10f64.log2()).abs() < 1e-12);
    let ns = [10, 20, 40, 80];
    let errors: Vec<f64> = ns.iter().map(|&n| 3.0 * (n as f64).powi(-5)).collect();
    let fit = fit_convergence(&ns, &errors).unwrap();
    assert!((fit.order - 5.0).abs() < 1e-12);
    assert!(fit.residual < 1e-12);
    assert!(fit_convergence(&[10, 20], &[1e-3, 0.0]).is_err());
}

#[test]
fn study_rejects_reference_below_resolution() {
    let mut cfg = StudyConfig::new(ProblemKind::Burgers, KernelSpec::new(13, 4).unwrap(), vec![16, 32]);
    cfg.reference_n = 32;
    assert!(run_study(&cfg).is_err());
}
