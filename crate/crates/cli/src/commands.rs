use std::path::Path;

use anyhow::Context;
use deltareg::experiments::{
    published_epsilon, regularized_source, run_study, self_convergence_reference, solve,
    ConvergenceReport, EpsilonChoice, ProblemKind, ProblemSpec, RegionPartition, SolveOptions, SourceTerm,
    StudyConfig, TableRow, ADVECTION_TABLE_M, BURGERS_TABLE_M, DESK_N_VALUES, FULL_N_VALUES,
};
use deltareg::spectral::SpectralOperator;
use deltareg::{
    validate_exactness_constraint, DeltaKernel, Interval, KernelSpec, ParticleField, QuadratureMode,
    QuadratureRule, RegularizedSource,
};
use num_traits::ToPrimitive;

use crate::args::{Cli, Command, ConvergeArgs, KernelArgs, ProblemArgs, RegularizeArgs, ScalingArgs, SolveArgs, TableArgs};
use crate::error::CliError;
use crate::output::{num, opt_num, CsvOut};

const PROGRESS_EVERY: usize = 2000;

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let progress = cli.progress;
    match cli.command {
        Command::Kernel(a) => kernel(a),
        Command::Regularize(a) => regularize(a),
        Command::Solve(a) => solve_cmd(a, progress),
        Command::Converge(a) => converge(a, progress),
        Command::Table1(a) => table(ProblemKind::Advection, &ADVECTION_TABLE_M, a, progress),
        Command::Table2(a) => table(ProblemKind::Burgers, &BURGERS_TABLE_M, a, progress),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    CliError::Usage(msg.into()).into()
}

fn kernel(a: KernelArgs) -> anyhow::Result<()> {
    let kernel = DeltaKernel::build(KernelSpec::new(a.m, a.k)?)?;
    let mut out = CsvOut::create(a.dump_coeffs.as_deref(), &["power", "numerator", "denominator", "float_value"])?;
    for (power, c) in kernel.expanded_coeffs() {
        let value = c.to_f64().unwrap_or(f64::NAN);
        out.row([power.to_string(), c.numer().to_string(), c.denom().to_string(), num(value)])?;
    }
    let r = kernel.verify_conditions();
    out.finish(&[
        ("mass_residual", num(r.mass)),
        ("max_moment_residual", num(r.max_moment)),
        ("max_boundary_derivative_residual", num(r.max_boundary_derivative)),
    ])
}

fn check_q(m: usize, k: usize, q: usize, allow: bool) -> anyhow::Result<()> {
    if validate_exactness_constraint(m, k, q) {
        return Ok(());
    }
    let msg = format!("q = {q} exceeds min(m, k) - 1 for m = {m}, k = {k}");
    if allow {
        eprintln!("warning: {msg}; continuing because --allow-unsafe-q was given");
        Ok(())
    } else {
        Err(usage(format!("{msg}; pass --allow-unsafe-q to run anyway")))
    }
}

fn epsilon_choice(s: &ScalingArgs) -> EpsilonChoice {
    match (s.epsilon, s.auto_epsilon) {
        (Some(e), _) => EpsilonChoice::Fixed(e),
        (None, true) => EpsilonChoice::Optimal { c: s.c },
        (None, false) => EpsilonChoice::Published,
    }
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || usage(format!("--eval-grid expects LO:HI:COUNT, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() || !(hi > lo || count == 1) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}

struct ParticleFile {
    positions: Vec<f64>,
    values: Vec<f64>,
    densities: Option<Vec<f64>>,
}

fn read_particles(path: &Path) -> anyhow::Result<ParticleFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| usage(format!("cannot read particle file {}: {e}", path.display())))?;
    let mut file = ParticleFile { positions: Vec::new(), values: Vec::new(), densities: None };
    let mut densities = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let fields: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let fields = match fields {
            Ok(f) => f,
            Err(_) if i == 0 => continue,
            Err(_) => return Err(usage(format!("{}: row {} is not numeric", path.display(), i + 1))),
        };
        match fields.as_slice() {
            [x, v] => {
                file.positions.push(*x);
                file.values.push(*v);
            }
            [x, v, n] => {
                file.positions.push(*x);
                file.values.push(*v);
                densities.push(*n);
            }
            _ => return Err(usage(format!("{}: row {} needs 2 or 3 columns", path.display(), i + 1))),
        }
    }
    if !densities.is_empty() {
        if densities.len() != file.positions.len() {
            return Err(usage(format!("{}: density column is incomplete", path.display())));
        }
        file.densities = Some(densities);
    }
    Ok(file)
}

fn regularize(a: RegularizeArgs) -> anyhow::Result<()> {
    let spec = KernelSpec::new(a.m, a.k)?;
    check_q(a.m, a.k, a.q, a.allow_unsafe_q)?;
    let grid = parse_grid(&a.eval_grid)?;
    let source = a.source.as_deref().map(str::parse::<ProblemKind>).transpose()?;
    let file = read_particles(&a.particles)?;
    let mut field = ParticleField::new(file.positions, file.values)?;
    if let Some(d) = file.densities {
        field = field.with_densities(d)?;
    }
    let exact = source.map(|kind| kind.singular_source());
    let mode = match &exact {
        Some(s) => {
            field = field.with_source(s.clone());
            QuadratureMode::AnalyticSubdivision
        }
        None => QuadratureMode::SamplesOnly,
    };
    let rule = QuadratureRule::newton_cotes(a.q)?;
    let epsilon = epsilon_choice(&a.scaling).resolve(a.m, a.q, &field)?;
    let src = RegularizedSource::new(&DeltaKernel::build(spec)?, epsilon, &field, &rule, mode)?;
    let (left, right) = field.span();
    let lo = grid[0].min(left - epsilon);
    let hi = grid[grid.len() - 1].max(right + epsilon);
    let partition = RegionPartition::new(left, right, epsilon, Interval::new(lo, hi)?)?;

    let mut out = CsvOut::create(a.out.as_deref(), &["x", "s_tilde", "s_exact_if_known", "abs_error", "region"])?;
    for &x in &grid {
        let approx = src.evaluate(x);
        let s = exact.as_ref().map(|f| f(x));
        out.row([
            num(x),
            num(approx),
            opt_num(s),
            opt_num(s.map(|s| (s - approx).abs())),
            partition.classify(x).label().to_string(),
        ])?;
    }
    out.finish(&[("epsilon", num(epsilon))])
}

struct Prepared {
    kind: ProblemKind,
    problem: ProblemSpec,
    spec: KernelSpec,
    options: SolveOptions,
    n_particles: usize,
    epsilon: EpsilonChoice,
}

fn prepare(a: &ProblemArgs) -> anyhow::Result<Prepared> {
    let kind: ProblemKind = a.problem.parse()?;
    let spec = KernelSpec::new(a.m, a.k)?;
    if !a.no_regularization {
        check_q(a.m, a.k, a.q, a.allow_unsafe_q)?;
    }
    let mut options = SolveOptions::for_problem(kind);
    if let Some(p) = a.filter_order {
        options.filter_order = Some(p);
    }
    if a.no_filter {
        options.filter_order = None;
    }
    if a.scaling.epsilon.is_none() && !a.scaling.auto_epsilon && published_epsilon(a.m).is_none() {
        eprintln!("note: no published epsilon for m = {}; using the optimal scaling with C = 0.5", a.m);
    }
    Ok(Prepared {
        kind,
        problem: ProblemSpec::of_kind(kind),
        spec,
        options,
        n_particles: a.particles.unwrap_or(kind.default_particles()),
        epsilon: epsilon_choice(&a.scaling),
    })
}

fn dump_operator(op: &SpectralOperator, path: &Path) -> anyhow::Result<()> {
    let n = op.nodes().len();
    let mut header = vec!["i".to_string(), "x".to_string()];
    header.extend((0..n).map(|j| format!("d_{j}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = CsvOut::create(Some(path), &header)?;
    for (i, x) in op.nodes().iter().enumerate() {
        let mut row = vec![i.to_string(), num(*x)];
        row.extend(op.diff_matrix().row(i).iter().map(|v| num(*v)));
        out.row(row)?;
    }
    out.finish(&[])
}

fn solve_cmd(a: SolveArgs, progress: bool) -> anyhow::Result<()> {
    if a.n == 0 {
        return Err(usage("--N must be at least 1"));
    }
    let p = prepare(&a.problem)?;
    let (reg, field) = regularized_source(p.kind, p.spec, a.problem.q, p.n_particles, p.epsilon)?;
    let epsilon = reg.epsilon();
    let partition = RegionPartition::new(field.span().0, field.span().1, epsilon, p.problem.domain)?;
    let source = if a.problem.no_regularization { SourceTerm::Singular(p.kind) } else { SourceTerm::Regularized(reg) };

    let op = p.options.operator(a.n, p.problem.domain)?;
    if let Some(path) = &a.dump_operator {
        dump_operator(&op, path)?;
    }
    let report = |t: f64, steps: usize| {
        if progress && steps % PROGRESS_EVERY == 0 {
            eprintln!("step {steps} t {t:.6}");
        }
    };
    let u = solve(&p.problem, &source, &op, &p.options, report)?;
    if progress {
        eprintln!("reached t = {}", p.problem.t_final);
    }

    let t = p.problem.t_final;
    let u_ref: Vec<f64> = if p.problem.exact(&source, 0.0, 0.0).is_some() {
        op.nodes().iter().map(|&x| p.problem.exact(&source, x, t).expect("analytic solution")).collect()
    } else {
        if a.problem.reference_n <= a.n {
            return Err(usage(format!(
                "--reference-n ({}) must exceed --N ({})",
                a.problem.reference_n, a.n
            )));
        }
        if progress {
            eprintln!("computing reference solution at N = {}", a.problem.reference_n);
        }
        let reference = self_convergence_reference(&p.problem, &source, a.problem.reference_n, &p.options)?;
        op.nodes().iter().map(|&x| reference.eval(x)).collect()
    };

    let mut out = CsvOut::create(a.out.as_deref(), &["x", "u_num", "u_ref", "abs_error", "region"])?;
    for ((x, un), ur) in op.nodes().iter().zip(&u).zip(&u_ref) {
        out.row([num(*x), num(*un), num(*ur), num((un - ur).abs()), partition.classify(*x).label().to_string()])?;
    }
    out.finish(&[("epsilon", num(epsilon))])
}

fn study_config(p: &Prepared, a: &ProblemArgs, n_values: Vec<usize>) -> StudyConfig {
    let mut cfg = StudyConfig::new(p.kind, p.spec, n_values);
    cfg.q = a.q;
    cfg.epsilon = p.epsilon;
    cfg.n_particles = p.n_particles;
    cfg.regularize = !a.no_regularization;
    cfg.options = p.options;
    cfg.reference_n = a.reference_n;
    cfg
}

fn run_reported(cfg: &StudyConfig, progress: bool) -> anyhow::Result<ConvergenceReport> {
    if progress {
        eprintln!("study {} m={} k={} N={:?}", cfg.kind.name(), cfg.kernel.m(), cfg.kernel.k(), cfg.n_values);
    }
    let report = run_study(cfg).with_context(|| format!("study for m = {}", cfg.kernel.m()))?;
    if progress {
        eprintln!("done: order P {:.3}, Q {:.3}", report.fit_p.order, report.fit_q.order);
    }
    Ok(report)
}

fn converge(a: ConvergeArgs, progress: bool) -> anyhow::Result<()> {
    let n_values = match (&a.n_list, a.full) {
        (Some(list), _) => list.clone(),
        (None, true) => FULL_N_VALUES.to_vec(),
        (None, false) => DESK_N_VALUES.to_vec(),
    };
    if n_values.len() < 2 || n_values.contains(&0) {
        return Err(usage("--N-list needs at least two positive resolutions"));
    }
    let p = prepare(&a.problem)?;
    let report = run_reported(&study_config(&p, &a.problem, n_values), progress)?;
    let mut out = CsvOut::create(a.out.as_deref(), &["N", "error_P", "error_Q"])?;
    for pt in &report.points {
        out.row([pt.n.to_string(), num(pt.error_p), num(pt.error_q)])?;
    }
    out.finish(&[
        ("order_P", num(report.fit_p.order)),
        ("order_Q", num(report.fit_q.order)),
        ("epsilon", num(report.epsilon)),
    ])
}

fn table(kind: ProblemKind, ms: &[usize], a: TableArgs, progress: bool) -> anyhow::Result<()> {
    let n_values = if a.full { FULL_N_VALUES.to_vec() } else { DESK_N_VALUES.to_vec() };
    let mut rows = Vec::new();
    for &m in ms {
        let cfg = StudyConfig::new(kind, KernelSpec::new(m, 4)?, n_values.clone());
        if !validate_exactness_constraint(m, 4, cfg.q) {
            eprintln!(
                "warning: m = {m}, k = 4 violates q <= min(m, k) - 1 for Simpson (q = {}); reproduced as published",
                cfg.q
            );
        }
        rows.push(TableRow::from(&run_reported(&cfg, progress)?));
    }
    let mut out = CsvOut::create(a.out.as_deref(), &["m", "epsilon", "max_log10_err_P", "order_P", "order_Q"])?;
    for r in &rows {
        out.row([r.m.to_string(), num(r.epsilon), num(r.max_log10_err_p), num(r.order_p), num(r.order_q)])?;
    }
    out.finish(&[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use deltareg::experiments::particle_grid;

    #[test]
    fn grid_spec() {
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_grid("0.5:0.5:1").unwrap(), vec![0.5]);
        assert!(parse_grid("1:0:3").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn default_scaling_is_published() {
        let s = ScalingArgs { epsilon: None, auto_epsilon: false, c: 0.5 };
        assert_eq!(epsilon_choice(&s), EpsilonChoice::Published);
        let s = ScalingArgs { epsilon: Some(0.1), auto_epsilon: false, c: 0.5 };
        assert_eq!(epsilon_choice(&s), EpsilonChoice::Fixed(0.1));
    }

    #[test]
    fn particle_grid_round_trip() {
        let field = particle_grid(ProblemKind::Advection, 10).unwrap();
        assert_eq!(field.positions().len(), 11);
    }
}
