//! Model problems with singular sources, the P/R/Q error regions, weighted
//! error norms and convergence-order studies.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{DeltaKernel, KernelSpec};
use crate::quadrature::QuadratureRule;
use crate::regularizer::{
    optimal_epsilon, validate_exactness_constraint, ParticleField, QuadratureMode, RegularizedSource, SourceFn,
};
use crate::spectral::{ChebyshevInterpolant, DtRule, Interval, SpectralOperator, TimeStepper};

/// Half-width of the source window.
pub const SOURCE_HALF_WIDTH: f64 = 0.3;
/// Particle count `N_p` for the advection runs.
pub const ADVECTION_PARTICLES: usize = 2001;
/// Particle count `N_p` for the Burgers runs (2000 points in total).
pub const BURGERS_PARTICLES: usize = 1999;
pub const FINAL_TIME: f64 = 2.0;
pub const DEFAULT_CFL: f64 = 0.5;
pub const DEFAULT_FILTER_ORDER: u32 = 12;
/// Default proportionality constant for the optimal scaling.
pub const DEFAULT_EPSILON_CONSTANT: f64 = 0.5;
/// Resolution of the Burgers self-convergence reference.
pub const BURGERS_REFERENCE_N: usize = 500;

/// `H(x)` with `H(0) = 1/2`.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// `3 cos(5πx) (H(x + 3/10) - H(x - 3/10))`.
pub fn advection_source(x: f64) -> f64 {
    3.0 * (5.0 * PI * x).cos() * (heaviside(x + SOURCE_HALF_WIDTH) - heaviside(x - SOURCE_HALF_WIDTH))
}

/// Antiderivative of [`advection_source`], constant outside the window.
pub fn source_antiderivative(xi: f64) -> f64 {
    let clamped = xi.clamp(-SOURCE_HALF_WIDTH, SOURCE_HALF_WIDTH);
    3.0 / (5.0 * PI) * (5.0 * PI * clamped).sin()
}

/// `sin(π(x - t)) + ∫_{x-t}^{x} S`.
pub fn advection_exact(x: f64, t: f64) -> f64 {
    (PI * (x - t)).sin() + source_antiderivative(x) - source_antiderivative(x - t)
}

/// The advection source shifted to the Burgers window around `x = 1`.
pub fn burgers_source(x: f64) -> f64 {
    advection_source(x - 1.0)
}

/// Solution of the source-free Burgers problem, `x / (1 + t)`.
pub fn burgers_homogeneous(x: f64, t: f64) -> f64 {
    x / (1.0 + t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    Advection,
    Burgers,
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Advection => "advection",
            ProblemKind::Burgers => "burgers",
        }
    }

    /// Centre of the particle cloud.
    pub fn source_center(&self) -> f64 {
        match self {
            ProblemKind::Advection => 0.0,
            ProblemKind::Burgers => 1.0,
        }
    }

    pub fn default_particles(&self) -> usize {
        match self {
            ProblemKind::Advection => ADVECTION_PARTICLES,
            ProblemKind::Burgers => BURGERS_PARTICLES,
        }
    }

    pub fn singular_source(&self) -> SourceFn {
        match self {
            ProblemKind::Advection => Arc::new(advection_source),
            ProblemKind::Burgers => Arc::new(burgers_source),
        }
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "advection" => Ok(ProblemKind::Advection),
            "burgers" => Ok(ProblemKind::Burgers),
            other => Err(Error::InvalidInput(format!("unknown problem '{other}'"))),
        }
    }
}

/// Domain, initial and inflow data, and flux of a model problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub domain: Interval,
    pub t_final: f64,
}

impl ProblemSpec {
    /// `u_t + u_x = S` on `[-1, 1]`, `u(x,0) = sin(πx)`, `u(-1,t) = sin(π(-1-t))`.
    pub fn advection() -> Self {
        Self {
            kind: ProblemKind::Advection,
            domain: Interval::new(-1.0, 1.0).expect("valid interval"),
            t_final: FINAL_TIME,
        }
    }

    /// `u_t + (u²/2)_x = S(x-1)` on `[0, 2]`, `u(x,0) = x`, `u(0,t) = 0`.
    pub fn burgers() -> Self {
        Self {
            kind: ProblemKind::Burgers,
            domain: Interval::new(0.0, 2.0).expect("valid interval"),
            t_final: FINAL_TIME,
        }
    }

    pub fn of_kind(kind: ProblemKind) -> Self {
        match kind {
            ProblemKind::Advection => Self::advection(),
            ProblemKind::Burgers => Self::burgers(),
        }
    }

    pub fn initial(&self, x: f64) -> f64 {
        match self.kind {
            ProblemKind::Advection => (PI * x).sin(),
            ProblemKind::Burgers => x,
        }
    }

    /// Dirichlet value at the left (inflow) boundary.
    pub fn inflow(&self, t: f64) -> f64 {
        match self.kind {
            ProblemKind::Advection => (PI * (-1.0 - t)).sin(),
            ProblemKind::Burgers => 0.0,
        }
    }

    pub fn dt_rule(&self, cfl: f64) -> DtRule {
        match self.kind {
            ProblemKind::Advection => DtRule::Fixed { cfl },
            ProblemKind::Burgers => DtRule::WaveSpeed { cfl },
        }
    }

    /// Analytic solution when one is known for the given source.
    pub fn exact(&self, source: &SourceTerm, x: f64, t: f64) -> Option<f64> {
        match (self.kind, source) {
            (ProblemKind::Advection, SourceTerm::None) => Some((PI * (x - t)).sin()),
            (ProblemKind::Advection, _) => Some(advection_exact(x, t)),
            (ProblemKind::Burgers, SourceTerm::None) => Some(burgers_homogeneous(x, t)),
            (ProblemKind::Burgers, _) => None,
        }
    }
}

/// `ξ_i = c + (3/10) sin(π(-1/2 + i/N_p))`, `i = 0..=N_p`, with source samples.
pub fn particle_grid(kind: ProblemKind, n_p: usize) -> Result<ParticleField> {
    if n_p < 2 {
        return Err(Error::InvalidInput(format!("need N_p >= 2, got {n_p}")));
    }
    let center = kind.source_center();
    let positions = (0..=n_p)
        .map(|i| {
            if i == 0 {
                center - SOURCE_HALF_WIDTH
            } else if i == n_p {
                center + SOURCE_HALF_WIDTH
            } else {
                center + SOURCE_HALF_WIDTH * (PI * (-0.5 + i as f64 / n_p as f64)).sin()
            }
        })
        .collect();
    ParticleField::from_source(positions, kind.singular_source())
}

/// Source term fed to the solver.
#[derive(Debug, Clone)]
pub enum SourceTerm {
    None,
    /// The unregularized source sampled pointwise at the collocation nodes.
    Singular(ProblemKind),
    Regularized(RegularizedSource),
}

impl SourceTerm {
    pub fn at(&self, x: f64) -> f64 {
        match self {
            SourceTerm::None => 0.0,
            SourceTerm::Singular(kind) => kind.singular_source()(x),
            SourceTerm::Regularized(src) => src.evaluate(x),
        }
    }

    pub fn sample(&self, nodes: &[f64]) -> Vec<f64> {
        nodes.iter().map(|&x| self.at(x)).collect()
    }
}

/// Solver settings beyond the problem itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub filter_order: Option<u32>,
    pub cfl: f64,
}

impl SolveOptions {
    /// Filter on for Burgers only.
    pub fn for_problem(kind: ProblemKind) -> Self {
        Self {
            filter_order: match kind {
                ProblemKind::Advection => None,
                ProblemKind::Burgers => Some(DEFAULT_FILTER_ORDER),
            },
            cfl: DEFAULT_CFL,
        }
    }

    pub fn operator(&self, n: usize, domain: Interval) -> Result<SpectralOperator> {
        let op = SpectralOperator::new(n, domain)?;
        match self.filter_order {
            Some(p) => op.with_filter(p),
            None => Ok(op),
        }
    }
}

/// Integrates the problem to `t_final` and returns the nodal solution.
///
/// The source is sampled once at the nodes (the particles are stationary).
/// `progress(t, steps)` is called after every step.
pub fn solve(
    problem: &ProblemSpec,
    source: &SourceTerm,
    op: &SpectralOperator,
    options: &SolveOptions,
    mut progress: impl FnMut(f64, usize),
) -> Result<Vec<f64>> {
    if op.domain() != problem.domain {
        return Err(Error::InvalidInput(format!(
            "operator domain {:?} does not match problem domain {:?}",
            op.domain(),
            problem.domain
        )));
    }
    let nodes = op.nodes();
    let s = source.sample(nodes);
    let mut u: Vec<f64> = nodes.iter().map(|&x| problem.initial(x)).collect();
    u[0] = problem.inflow(0.0);
    let mut flux = vec![0.0; u.len()];
    let mut scratch = vec![0.0; u.len()];
    let kind = problem.kind;
    let rhs = |_t: f64, v: &[f64], out: &mut [f64]| {
        match kind {
            ProblemKind::Advection => op.differentiate_into(v, out),
            ProblemKind::Burgers => {
                for (f, x) in flux.iter_mut().zip(v) {
                    *f = 0.5 * x * x;
                }
                op.differentiate_into(&flux, out);
            }
        }
        for (o, si) in out.iter_mut().zip(&s) {
            *o = si - *o;
        }
    };
    let boundary = |t: f64, v: &mut [f64]| v[0] = problem.inflow(t);
    let mut steps = 0usize;
    let after = |t: f64, v: &mut [f64]| {
        if op.filter_order().is_some() {
            op.apply_filter(v, &mut scratch);
            v[0] = problem.inflow(t);
        }
        steps += 1;
        progress(t, steps);
    };
    TimeStepper::new(problem.dt_rule(options.cfl)).integrate(op.n(), &mut u, 0.0, problem.t_final, rhs, boundary, after)?;
    Ok(u)
}

/// Error regions around the particle cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// `(ξ_0 + ε, ξ_{N_p} - ε)`.
    P,
    /// Closed bands of half-width `ε` around `ξ_0` and `ξ_{N_p}`.
    R,
    /// The rest of the domain.
    Q,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::P => "P",
            Region::R => "R",
            Region::Q => "Q",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPartition {
    left: f64,
    right: f64,
    epsilon: f64,
    domain: Interval,
}

/// Splits the domain into P, R and Q for particles spanning `field`.
pub fn partition_domain(field: &ParticleField, epsilon: f64, domain: Interval) -> Result<RegionPartition> {
    let (left, right) = field.span();
    RegionPartition::new(left, right, epsilon, domain)
}

impl RegionPartition {
    pub fn new(left: f64, right: f64, epsilon: f64, domain: Interval) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::InvalidScaling(epsilon));
        }
        let half_span = 0.5 * (right - left);
        if !(epsilon < half_span) {
            return Err(Error::EmptyInterior { epsilon, half_span });
        }
        Ok(Self { left, right, epsilon, domain })
    }

    /// Open interval P as `(lo, hi)`.
    pub fn p_interval(&self) -> (f64, f64) {
        (self.left + self.epsilon, self.right - self.epsilon)
    }

    /// The two closed R bands.
    pub fn r_intervals(&self) -> [(f64, f64); 2] {
        [
            (self.left - self.epsilon, self.left + self.epsilon),
            (self.right - self.epsilon, self.right + self.epsilon),
        ]
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn classify(&self, x: f64) -> Region {
        let (p_lo, p_hi) = self.p_interval();
        if x > p_lo && x < p_hi {
            Region::P
        } else if self.r_intervals().iter().any(|&(a, b)| x >= a && x <= b) {
            Region::R
        } else {
            Region::Q
        }
    }

    pub fn tag_nodes(&self, nodes: &[f64]) -> Vec<Region> {
        nodes.iter().map(|&x| self.classify(x)).collect()
    }
}

/// Discrete `L²_w` norm, `w = (1 - t²)^{-1/2}` in the reference coordinate,
/// of `u_num - u_ref` restricted to nodes whose tag is in `include`.
pub fn weighted_error(
    u_num: &[f64],
    u_ref: &[f64],
    tags: &[Region],
    include: &[Region],
    op: &SpectralOperator,
) -> Result<f64> {
    let n = op.nodes().len();
    if u_num.len() != n || u_ref.len() != n || tags.len() != n {
        return Err(Error::InvalidInput("vector lengths differ from node count".into()));
    }
    let weights = op.quadrature_weights();
    let mut sum = 0.0;
    let mut count = 0;
    for j in 0..n {
        if include.contains(&tags[j]) {
            let e = u_num[j] - u_ref[j];
            sum += weights[j] * e * e;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptyRegion);
    }
    Ok(sum.sqrt())
}

/// Least-squares fit `log e = c - order · log N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceFit {
    pub order: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in natural-log units.
    pub residual: f64,
}

pub fn fit_convergence(n_values: &[usize], errors: &[f64]) -> Result<ConvergenceFit> {
    if n_values.len() != errors.len() {
        return Err(Error::InvalidData("N values and errors differ in length".into()));
    }
    if n_values.len() < 2 {
        return Err(Error::InvalidData("need at least two data points".into()));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidData(format!("error {e} is not positive")));
    }
    let xs: Vec<f64> = n_values.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidData("all N values are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / len)
        .sqrt();
    Ok(ConvergenceFit { order: -slope, intercept, residual })
}

/// Fine-grid solution exposed through barycentric interpolation.
pub fn self_convergence_reference(
    problem: &ProblemSpec,
    source: &SourceTerm,
    n_fine: usize,
    options: &SolveOptions,
) -> Result<ChebyshevInterpolant> {
    let op = options.operator(n_fine, problem.domain)?;
    let u = solve(problem, source, &op, options, |_, _| {})?;
    ChebyshevInterpolant::new(&op, u)
}

/// Scaling values used in the published tables, keyed by `m` (with `k = 4`).
pub fn published_epsilon(m: usize) -> Option<f64> {
    match m {
        1 => Some(6.5e-3),
        5 => Some(4.0e-2),
        7 => Some(6.6e-2),
        9 => Some(9.5e-2),
        13 => Some(1.5e-1),
        17 => Some(2.1e-1),
        _ => None,
    }
}

/// How `ε` is chosen for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonChoice {
    Fixed(f64),
    /// Optimal scaling with the given proportionality constant.
    Optimal { c: f64 },
    /// The published value when one exists for `m`, else optimal with the default constant.
    Published,
}

impl EpsilonChoice {
    pub fn resolve(&self, m: usize, q: usize, field: &ParticleField) -> Result<f64> {
        match *self {
            EpsilonChoice::Fixed(e) => {
                if e > 0.0 && e.is_finite() {
                    Ok(e)
                } else {
                    Err(Error::InvalidScaling(e))
                }
            }
            EpsilonChoice::Optimal { c } => optimal_epsilon(m, q, &field.panel_lengths(q), c),
            EpsilonChoice::Published => match published_epsilon(m) {
                Some(e) => Ok(e),
                None => optimal_epsilon(m, q, &field.panel_lengths(q), DEFAULT_EPSILON_CONSTANT),
            },
        }
    }
}

/// Builds the regularized source of a model problem.
pub fn regularized_source(
    kind: ProblemKind,
    spec: KernelSpec,
    q: usize,
    n_particles: usize,
    epsilon: EpsilonChoice,
) -> Result<(RegularizedSource, ParticleField)> {
    let field = particle_grid(kind, n_particles)?;
    let rule = QuadratureRule::newton_cotes(q)?;
    let eps = epsilon.resolve(spec.m(), q, &field)?;
    let kernel = DeltaKernel::build(spec)?;
    let src = RegularizedSource::new(&kernel, eps, &field, &rule, QuadratureMode::AnalyticSubdivision)?;
    Ok((src, field))
}

/// Largest `|S - S̃|` over `samples` uniformly spaced points of P.
pub fn max_source_error_on_p(
    src: &RegularizedSource,
    exact: impl Fn(f64) -> f64,
    partition: &RegionPartition,
    samples: usize,
) -> f64 {
    let (lo, hi) = partition.p_interval();
    (1..=samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples + 1) as f64)
        .map(|x| (exact(x) - src.evaluate(x)).abs())
        .fold(0.0, f64::max)
}

/// One convergence-study configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub kind: ProblemKind,
    pub kernel: KernelSpec,
    pub q: usize,
    pub epsilon: EpsilonChoice,
    pub n_particles: usize,
    pub n_values: Vec<usize>,
    /// Use the regularized source; otherwise the singular source is sampled directly.
    pub regularize: bool,
    pub options: SolveOptions,
    /// Resolution of the self-convergence reference when no analytic solution exists.
    pub reference_n: usize,
}

impl StudyConfig {
    pub fn new(kind: ProblemKind, kernel: KernelSpec, n_values: Vec<usize>) -> Self {
        Self {
            kind,
            kernel,
            q: 2,
            epsilon: EpsilonChoice::Published,
            n_particles: kind.default_particles(),
            n_values,
            regularize: true,
            options: SolveOptions::for_problem(kind),
            reference_n: BURGERS_REFERENCE_N,
        }
    }
}

/// Errors of one resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyPoint {
    pub n: usize,
    pub error_p: f64,
    pub error_q: f64,
    pub error_pq: f64,
    pub error_full: f64,
    /// Largest pointwise error at nodes in R.
    pub max_pointwise_r: f64,
    pub nodes: Vec<f64>,
    pub u_num: Vec<f64>,
    pub u_ref: Vec<f64>,
    pub tags: Vec<Region>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub kind: ProblemKind,
    pub kernel: KernelSpec,
    pub epsilon: f64,
    pub q_constraint_ok: bool,
    pub max_source_error_p: Option<f64>,
    pub points: Vec<StudyPoint>,
    pub fit_p: ConvergenceFit,
    pub fit_q: ConvergenceFit,
    pub fit_pq: ConvergenceFit,
    pub fit_full: ConvergenceFit,
}

impl ConvergenceReport {
    pub fn n_values(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.n).collect()
    }
}

/// Number of uniform samples used for the pointwise source error on P.
pub const SOURCE_ERROR_SAMPLES: usize = 2001;

/// Runs every resolution of the study (concurrently when threads are
/// available) and fits the convergence orders.
pub fn run_study(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    if cfg.n_values.len() < 2 {
        return Err(Error::InvalidInput("a study needs at least two resolutions".into()));
    }
    if let Some(n) = cfg.n_values.iter().find(|&&n| n == 0) {
        return Err(Error::InvalidInput(format!("invalid resolution N = {n}")));
    }
    let problem = ProblemSpec::of_kind(cfg.kind);
    let (reg, field) = regularized_source(cfg.kind, cfg.kernel, cfg.q, cfg.n_particles, cfg.epsilon)?;
    let epsilon = reg.epsilon();
    let partition = partition_domain(&field, epsilon, problem.domain)?;
    let max_source_error_p = cfg
        .regularize
        .then(|| max_source_error_on_p(&reg, cfg.kind.singular_source().as_ref(), &partition, SOURCE_ERROR_SAMPLES));
    let source = if cfg.regularize { SourceTerm::Regularized(reg) } else { SourceTerm::Singular(cfg.kind) };

    let reference = match problem.exact(&source, 0.0, 0.0) {
        Some(_) => None,
        None => {
            if cfg.n_values.iter().any(|&n| n >= cfg.reference_n) {
                return Err(Error::InvalidInput(format!(
                    "reference resolution {} must exceed every study resolution",
                    cfg.reference_n
                )));
            }
            Some(self_convergence_reference(&problem, &source, cfg.reference_n, &cfg.options)?)
        }
    };

    let points: Vec<StudyPoint> = cfg
        .n_values
        .par_iter()
        .map(|&n| -> Result<StudyPoint> {
            let op = cfg.options.operator(n, problem.domain)?;
            let u_num = solve(&problem, &source, &op, &cfg.options, |_, _| {})?;
            let nodes = op.nodes().to_vec();
            let u_ref: Vec<f64> = match &reference {
                Some(interp) => nodes.iter().map(|&x| interp.eval(x)).collect(),
                None => nodes
                    .iter()
                    .map(|&x| problem.exact(&source, x, problem.t_final).expect("analytic solution"))
                    .collect(),
            };
            let tags = partition.tag_nodes(&nodes);
            let max_pointwise_r = nodes
                .iter()
                .enumerate()
                .filter(|(j, _)| tags[*j] == Region::R)
                .map(|(j, _)| (u_num[j] - u_ref[j]).abs())
                .fold(0.0, f64::max);
            Ok(StudyPoint {
                n,
                error_p: weighted_error(&u_num, &u_ref, &tags, &[Region::P], &op)?,
                error_q: weighted_error(&u_num, &u_ref, &tags, &[Region::Q], &op)?,
                error_pq: weighted_error(&u_num, &u_ref, &tags, &[Region::P, Region::Q], &op)?,
                error_full: weighted_error(&u_num, &u_ref, &tags, &[Region::P, Region::Q, Region::R], &op)?,
                max_pointwise_r,
                nodes,
                u_num,
                u_ref,
                tags,
            })
        })
        .collect::<Result<_>>()?;

    let ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    let fit = |f: fn(&StudyPoint) -> f64| fit_convergence(&ns, &points.iter().map(f).collect::<Vec<_>>());
    Ok(ConvergenceReport {
        kind: cfg.kind,
        kernel: cfg.kernel,
        epsilon,
        q_constraint_ok: validate_exactness_constraint(cfg.kernel.m(), cfg.kernel.k(), cfg.q),
        max_source_error_p,
        fit_p: fit(|p| p.error_p)?,
        fit_q: fit(|p| p.error_q)?,
        fit_pq: fit(|p| p.error_pq)?,
        fit_full: fit(|p| p.error_full)?,
        points,
    })
}

/// Row of a reproduction table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub m: usize,
    pub epsilon: f64,
    pub max_log10_err_p: f64,
    pub order_p: f64,
    pub order_q: f64,
    pub q_constraint_ok: bool,
}

impl From<&ConvergenceReport> for TableRow {
    fn from(r: &ConvergenceReport) -> Self {
        Self {
            m: r.kernel.m(),
            epsilon: r.epsilon,
            max_log10_err_p: r.max_source_error_p.map_or(f64::NAN, f64::log10),
            order_p: r.fit_p.order,
            order_q: r.fit_q.order,
            q_constraint_ok: r.q_constraint_ok,
        }
    }
}

/// `m` values of the advection table.
pub const ADVECTION_TABLE_M: [usize; 5] = [1, 5, 9, 13, 17];
/// `m` values of the Burgers table.
pub const BURGERS_TABLE_M: [usize; 4] = [5, 9, 13, 17];
/// Resolutions of the published studies.
pub const FULL_N_VALUES: [usize; 4] = [100, 200, 300, 400];
/// Reduced advection resolutions for quick runs.
pub const DESK_N_VALUES: [usize; 4] = [60, 100, 140, 200];
