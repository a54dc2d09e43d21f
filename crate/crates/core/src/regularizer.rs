//! Regularization of weighted delta sums by quadrature of the convolution
//! `S * δ_ε`, plus the optimal choice of `ε` and an adaptive oracle for the
//! exact convolution.

use std::fmt;
use std::sync::Arc;

use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};
use crate::kernel::DeltaKernel;
use crate::quadrature::{interpolatory_weights, AdaptiveGauss, QuadratureRule};

/// Analytic source `S(ξ)`.
pub type SourceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Stationary particles `ξ_0 < … < ξ_{N_p}` carrying source samples `S(ξ_i)`.
#[derive(Clone)]
pub struct ParticleField {
    positions: Vec<f64>,
    values: Vec<f64>,
    densities: Option<Vec<f64>>,
    source: Option<SourceFn>,
}

impl fmt::Debug for ParticleField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParticleField")
            .field("len", &self.positions.len())
            .field("span", &self.span())
            .field("has_densities", &self.densities.is_some())
            .field("has_source", &self.source.is_some())
            .finish()
    }
}

impl ParticleField {
    pub fn new(positions: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidParticles("no particles".into()));
        }
        if positions.len() != values.len() {
            return Err(Error::InvalidParticles(format!(
                "{} positions but {} values",
                positions.len(),
                values.len()
            )));
        }
        if positions.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParticles("non-finite entry".into()));
        }
        if let Some(i) = positions.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParticles(format!(
                "positions not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self { positions, values, densities: None, source: None })
    }

    /// Samples `source` at `positions` and keeps it for sub-node evaluation.
    pub fn from_source(positions: Vec<f64>, source: SourceFn) -> Result<Self> {
        let values = positions.iter().map(|&x| source(x)).collect();
        Ok(Self::new(positions, values)?.with_source(source))
    }

    pub fn with_densities(mut self, densities: Vec<f64>) -> Result<Self> {
        if densities.len() != self.positions.len() {
            return Err(Error::InvalidParticles("density count differs from particle count".into()));
        }
        if densities.iter().any(|d| !(*d > 0.0) || !d.is_finite()) {
            return Err(Error::InvalidParticles("densities must be positive".into()));
        }
        self.densities = Some(densities);
        Ok(self)
    }

    pub fn with_source(mut self, source: SourceFn) -> Self {
        self.source = Some(source);
        self
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn densities(&self) -> Option<&[f64]> {
        self.densities.as_deref()
    }

    pub fn source(&self) -> Option<&SourceFn> {
        self.source.as_ref()
    }

    /// `N_p`, the number of intervals between particles.
    pub fn n_intervals(&self) -> usize {
        self.positions.len() - 1
    }

    /// `(ξ_0, ξ_{N_p})`.
    pub fn span(&self) -> (f64, f64) {
        (self.positions[0], self.positions[self.positions.len() - 1])
    }

    /// Sub-step lengths `h_i = (ξ_{i+1} - ξ_i) / q`.
    pub fn panel_lengths(&self, q: usize) -> Vec<f64> {
        self.positions.windows(2).map(|w| (w[1] - w[0]) / q as f64).collect()
    }
}

/// `C · (Σ h_i^{q+2})^{1/(m+q+3)}`.
pub fn optimal_epsilon(m: usize, q: usize, panel_lengths: &[f64], c: f64) -> Result<f64> {
    if panel_lengths.is_empty() {
        return Err(Error::InvalidInput("no panels".into()));
    }
    if panel_lengths.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::InvalidInput("panel lengths must be positive".into()));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!("proportionality constant {c} must be positive")));
    }
    let sum: f64 = panel_lengths.iter().map(|h| h.powi(q as i32 + 2)).sum();
    Ok(c * sum.powf(1.0 / (m + q + 3) as f64))
}

/// Whether a rule of exactness `q` preserves the `ε^{m+1}` order for a
/// `C^k` kernel with `m` moments: `q ≤ min{m, k} - 1`.
pub fn validate_exactness_constraint(m: usize, k: usize, q: usize) -> bool {
    (q as i64) <= m.min(k) as i64 - 1
}

/// How the convolution integral is discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMode {
    /// Each `[ξ_i, ξ_{i+1}]` is one Newton-Cotes panel; interior sub-nodes are
    /// sampled from the analytic source.
    AnalyticSubdivision,
    /// Groups of `q + 1` consecutive samples form a panel, weighted by the
    /// integral of the local interpolant. Explicit densities override the
    /// weights with `1/n(ξ_i)`.
    SamplesOnly,
}

/// `S̃_ε(x) = Σ_i w_i S(η_i) δ_ε(x - η_i)` over precomputed quadrature nodes `η_i`.
#[derive(Debug, Clone)]
pub struct RegularizedSource {
    kernel: DeltaKernel,
    epsilon: f64,
    mode: QuadratureMode,
    nodes: Vec<f64>,
    weighted_values: Vec<f64>,
}

impl RegularizedSource {
    pub fn new(
        kernel: &DeltaKernel,
        epsilon: f64,
        particles: &ParticleField,
        rule: &QuadratureRule,
        mode: QuadratureMode,
    ) -> Result<Self> {
        kernel.scaled(epsilon)?;
        let (nodes, weighted_values) = match mode {
            QuadratureMode::AnalyticSubdivision => analytic_nodes(particles, rule)?,
            QuadratureMode::SamplesOnly => sample_nodes(particles, rule)?,
        };
        Ok(Self { kernel: kernel.clone(), epsilon, mode, nodes, weighted_values })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mode(&self) -> QuadratureMode {
        self.mode
    }

    pub fn kernel(&self) -> &DeltaKernel {
        &self.kernel
    }

    /// Quadrature nodes and the products `w_i S(η_i)`.
    pub fn quadrature_points(&self) -> (&[f64], &[f64]) {
        (&self.nodes, &self.weighted_values)
    }

    /// Evaluates `S̃_ε(x)`; only nodes within `ε` of `x` contribute.
    pub fn evaluate(&self, x: f64) -> f64 {
        let delta = self.kernel.scaled(self.epsilon).expect("epsilon validated at construction");
        let lo = self.nodes.partition_point(|&n| n < x - self.epsilon);
        let hi = self.nodes.partition_point(|&n| n <= x + self.epsilon);
        self.nodes[lo..hi]
            .iter()
            .zip(&self.weighted_values[lo..hi])
            .map(|(n, wv)| wv * delta.eval(x - n))
            .sum()
    }

    pub fn evaluate_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.evaluate(x)).collect()
    }
}

fn push_node(nodes: &mut Vec<f64>, weights: &mut Vec<f64>, x: f64, w: f64) {
    if nodes.last() == Some(&x) {
        *weights.last_mut().unwrap() += w;
    } else {
        nodes.push(x);
        weights.push(w);
    }
}

fn analytic_nodes(particles: &ParticleField, rule: &QuadratureRule) -> Result<(Vec<f64>, Vec<f64>)> {
    let source = particles
        .source()
        .ok_or_else(|| Error::InvalidInput("analytic subdivision needs an analytic source".into()))?;
    let pos = particles.positions();
    if pos.len() < 2 {
        return Err(Error::InvalidInput("analytic subdivision needs at least one interval".into()));
    }
    let q = rule.q();
    let mut nodes = Vec::with_capacity(q * (pos.len() - 1) + 1);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for w in pos.windows(2) {
        let len = w[1] - w[0];
        let step = len / q as f64;
        for (j, alpha) in rule.weights().iter().enumerate() {
            let x = if j == q { w[1] } else { w[0] + j as f64 * step };
            push_node(&mut nodes, &mut weights, x, alpha * len);
        }
    }
    let weighted = nodes.iter().zip(&weights).map(|(&x, w)| w * source(x)).collect();
    Ok((nodes, weighted))
}

fn sample_nodes(particles: &ParticleField, rule: &QuadratureRule) -> Result<(Vec<f64>, Vec<f64>)> {
    let pos = particles.positions();
    let vals = particles.values();
    if let Some(densities) = particles.densities() {
        let weighted = vals.iter().zip(densities).map(|(s, n)| s / n).collect();
        return Ok((pos.to_vec(), weighted));
    }
    let q = rule.q();
    let n_p = particles.n_intervals();
    if n_p == 0 || n_p % q != 0 {
        return Err(Error::InvalidInput(format!(
            "samples-only mode needs N_p divisible by q (N_p = {n_p}, q = {q})"
        )));
    }
    let mut weights = vec![0.0; pos.len()];
    for start in (0..n_p).step_by(q) {
        let panel = &pos[start..=start + q];
        for (j, w) in interpolatory_weights(panel)?.into_iter().enumerate() {
            weights[start + j] += w;
        }
    }
    let weighted = vals.iter().zip(&weights).map(|(s, w)| s * w).collect();
    Ok((pos.to_vec(), weighted))
}

/// Aggregate quadrature weight attached to each particle in samples-only
/// mode; its reciprocal is the quadrature-consistent number density.
pub fn quadrature_densities(particles: &ParticleField, rule: &QuadratureRule) -> Result<Vec<f64>> {
    let ones = ParticleField::new(particles.positions().to_vec(), vec![1.0; particles.positions().len()])?;
    let (_, w) = sample_nodes(&ones, rule)?;
    if let Some(i) = w.iter().position(|w| !(*w > 0.0)) {
        return Err(Error::InvalidParticles(format!(
            "aggregate quadrature weight at particle {i} is not positive; no consistent density exists"
        )));
    }
    Ok(w.into_iter().map(|w| 1.0 / w).collect())
}

/// Default absolute tolerance of [`convolve_oracle`].
pub const ORACLE_TOLERANCE: f64 = 1e-13;

/// Exact convolution `(S * δ_ε)(x)` by globally adaptive Gauss-Legendre
/// quadrature, independent of the Newton-Cotes machinery.
pub fn convolve_oracle(kernel: &DeltaKernel, source: impl Fn(f64) -> f64, epsilon: f64, x: f64) -> Result<f64> {
    convolve_oracle_in(kernel, source, epsilon, x, ORACLE_TOLERANCE)
}

/// [`convolve_oracle`] in any working precision `T`, with explicit tolerance.
///
/// Integrates `∫_{-1}^{1} S(x - εη) P(η) dη`.
pub fn convolve_oracle_in<T: Float + FloatConst>(
    kernel: &DeltaKernel,
    source: impl Fn(T) -> T,
    epsilon: T,
    x: T,
    tol: f64,
) -> Result<T> {
    if !(epsilon > T::zero()) {
        return Err(Error::InvalidScaling(epsilon.to_f64().unwrap_or(f64::NAN)));
    }
    let quad = AdaptiveGauss::<T>::default();
    quad.integrate(|eta| source(x - epsilon * eta) * kernel.profile_in(eta), -T::one(), T::one(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{evaluate_delta, hat_kernel, KernelSpec};

    fn sine_grid(n_p: usize) -> Vec<f64> {
        (0..=n_p)
            .map(|i| 0.3 * (std::f64::consts::PI * (-0.5 + i as f64 / n_p as f64)).sin())
            .collect()
    }

    #[test]
    fn optimal_epsilon_uniform_panels() {
        let eps = optimal_epsilon(5, 2, &vec![0.01; 100], 1.0).unwrap();
        assert!((eps - 1e-6f64.powf(0.1)).abs() < 1e-14);
        assert!((eps - 0.2512).abs() < 1e-4);
    }

    #[test]
    fn optimal_epsilon_rejects_empty() {
        assert!(matches!(optimal_epsilon(5, 2, &[], 1.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn exactness_constraint() {
        assert!(validate_exactness_constraint(7, 4, 2));
        assert!(!validate_exactness_constraint(5, 4, 4));
        assert!(validate_exactness_constraint(2, 2, 1));
        assert!(!validate_exactness_constraint(1, 4, 2));
    }

    #[test]
    fn particle_field_validation() {
        assert!(ParticleField::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(ParticleField::new(vec![0.0, 1.0], vec![1.0]).is_err());
        let f = ParticleField::new(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        assert!(f.clone().with_densities(vec![1.0, 0.0]).is_err());
        assert!(f.with_densities(vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn single_particle_is_a_single_delta() {
        let kernel = hat_kernel();
        let field = ParticleField::new(vec![0.0], vec![1.0]).unwrap().with_densities(vec![1.0]).unwrap();
        let rule = QuadratureRule::newton_cotes(2).unwrap();
        let src = RegularizedSource::new(&kernel, 0.25, &field, &rule, QuadratureMode::SamplesOnly).unwrap();
        for x in [-0.3, -0.2, 0.0, 0.1, 0.24, 0.25] {
            assert_eq!(src.evaluate(x), evaluate_delta(&kernel, 0.25, x).unwrap());
        }
    }

    #[test]
    fn samples_mode_requires_tiling() {
        let kernel = hat_kernel();
        let field = ParticleField::new(vec![0.0, 0.1, 0.2, 0.3], vec![1.0; 4]).unwrap();
        let rule = QuadratureRule::newton_cotes(2).unwrap();
        assert!(RegularizedSource::new(&kernel, 0.1, &field, &rule, QuadratureMode::SamplesOnly).is_err());
    }

    #[test]
    fn analytic_mode_requires_source() {
        let kernel = hat_kernel();
        let field = ParticleField::new(vec![0.0, 0.1, 0.2], vec![1.0; 3]).unwrap();
        let rule = QuadratureRule::newton_cotes(2).unwrap();
        assert!(RegularizedSource::new(&kernel, 0.1, &field, &rule, QuadratureMode::AnalyticSubdivision).is_err());
    }

    #[test]
    fn uniform_samples_weights_are_composite_simpson() {
        let pos: Vec<f64> = (0..=4).map(|i| i as f64 * 0.25).collect();
        let field = ParticleField::new(pos, vec![1.0; 5]).unwrap();
        let rule = QuadratureRule::newton_cotes(2).unwrap();
        let dens = quadrature_densities(&field, &rule).unwrap();
        let w: Vec<f64> = dens.iter().map(|n| 1.0 / n).collect();
        let expected = [1.0 / 12.0, 4.0 / 12.0, 2.0 / 12.0, 4.0 / 12.0, 1.0 / 12.0];
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn explicit_quadrature_densities_match_computed_weights() {
        let pos: Vec<f64> = (0..=40).map(|i| -0.3 + 0.015 * i as f64 + 1e-3 * (i as f64).sin()).collect();
        let source: SourceFn = Arc::new(|x: f64| (3.0 * x).cos());
        let field = ParticleField::from_source(pos, source).unwrap();
        let rule = QuadratureRule::newton_cotes(2).unwrap();
        let kernel = DeltaKernel::build(KernelSpec::new(3, 2).unwrap()).unwrap();
        let computed = RegularizedSource::new(&kernel, 0.1, &field, &rule, QuadratureMode::SamplesOnly).unwrap();
        let dens = quadrature_densities(&field, &rule).unwrap();
        let explicit = RegularizedSource::new(
            &kernel,
            0.1,
            &field.clone().with_densities(dens).unwrap(),
            &rule,
            QuadratureMode::SamplesOnly,
        )
        .unwrap();
        for x in [-0.2, 0.0, 0.05, 0.13] {
            assert!((computed.evaluate(x) - explicit.evaluate(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn strongly_graded_panels_have_no_density() {
        let field = ParticleField::new(sine_grid(40), vec![1.0; 41]).unwrap();
        let rule = QuadratureRule::newton_cotes(2).unwrap();
        assert!(quadrature_densities(&field, &rule).is_err());
    }

    #[test]
    fn oracle_reproduces_constants_and_linears() {
        let kernel = DeltaKernel::build(KernelSpec::new(3, 2).unwrap()).unwrap();
        for (eps, x) in [(0.1, 0.0), (0.5, 0.3), (1e-3, -2.0)] {
            let one = convolve_oracle(&kernel, |_| 1.0, eps, x).unwrap();
            assert!((one - 1.0).abs() < 1e-13);
            let lin = convolve_oracle(&kernel, |t| t, eps, x).unwrap();
            assert!((lin - x).abs() < 1e-13);
        }
    }

    #[test]
    fn oracle_second_moment_error_of_hat_kernel() {
        // cos(εη) ≈ 1 - ε²η²/2 with ∫η² P^{1,0} = 1/5.
        let eps = 0.1;
        let v = convolve_oracle(&hat_kernel(), f64::cos, eps, 0.0).unwrap();
        let err = 1.0 - v;
        assert!((err - eps * eps / 10.0).abs() < 1e-6, "{err}");
    }

    #[test]
    fn oracle_rejects_bad_scaling() {
        assert!(convolve_oracle(&hat_kernel(), f64::cos, 0.0, 0.0).is_err());
    }
}
