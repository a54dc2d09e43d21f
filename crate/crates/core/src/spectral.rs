//! Chebyshev collocation on Gauss-Lobatto nodes: differentiation, exponential
//! filtering, barycentric interpolation and third-order TVD Runge-Kutta.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidDomain { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// Maps `t ∈ [-1, 1]` to the interval.
    pub fn map(&self, t: f64) -> f64 {
        if t == -1.0 {
            return self.a;
        }
        if t == 1.0 {
            return self.b;
        }
        self.a + 0.5 * (t + 1.0) * (self.b - self.a)
    }
}

/// `-cos(πj/N)` written as a sine so that the grid is exactly symmetric.
fn reference_node(j: usize, n: usize) -> f64 {
    (PI * (2.0 * j as f64 - n as f64) / (2.0 * n as f64)).sin()
}

/// Mapped Chebyshev-Gauss-Lobatto points in ascending order.
pub fn gauss_lobatto_nodes(n: usize, domain: Interval) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidInput("polynomial degree N must be at least 1".into()));
    }
    Ok((0..=n).map(|j| domain.map(reference_node(j, n))).collect())
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    /// `y = A x`.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (row, out) in self.data.chunks_exact(self.dim).zip(y.iter_mut()) {
            *out = dot(row, x);
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }
}

/// Dot product with independent partial sums so the loop vectorizes.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..8 {
            acc[l] += x[l] * y[l];
        }
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

/// Chebyshev collocation derivative on the mapped Gauss-Lobatto grid, with
/// diagonal entries from negative row sums.
pub fn differentiation_matrix(n: usize, domain: Interval) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("polynomial degree N must be at least 1".into()));
    }
    let dim = n + 1;
    let c = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
    let scale = 2.0 / domain.len();
    let mut d = DenseMatrix::zeros(dim);
    for i in 0..dim {
        let mut row_sum = 0.0;
        for j in 0..dim {
            if i == j {
                continue;
            }
            // t_i - t_j for t_j = -cos(πj/N), via a product of sines.
            let diff = 2.0
                * (PI * (i + j) as f64 / (2.0 * n as f64)).sin()
                * (PI * (i as f64 - j as f64) / (2.0 * n as f64)).sin();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let v = sign * c(i) / (c(j) * diff);
            row_sum += v;
            d.set(i, j, v * scale);
        }
        d.set(i, i, -row_sum * scale);
    }
    Ok(d)
}

/// `σ_j = exp(-α (j/N)^p)` with `α = -ln(ε_machine)`.
pub fn exponential_filter(n: usize, order: u32) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidInput("polynomial degree N must be at least 1".into()));
    }
    if order < 2 || order % 2 != 0 {
        return Err(Error::InvalidInput(format!("filter order must be even and at least 2, got {order}")));
    }
    let alpha = -f64::EPSILON.ln();
    Ok((0..=n)
        .map(|j| (-alpha * (j as f64 / n as f64).powi(order as i32)).exp())
        .collect())
}

/// Direct (O(N²)) transform between Gauss-Lobatto values and Chebyshev
/// coefficients `u(t) = Σ a_k T_k(t)`.
#[derive(Debug, Clone)]
pub struct ChebyshevTransform {
    n: usize,
    // cos(π k l / N) for the descending node index l = N - j.
    table: Vec<f64>,
}

impl ChebyshevTransform {
    pub fn new(n: usize) -> Self {
        let dim = n + 1;
        let mut table = vec![0.0; dim * dim];
        for k in 0..dim {
            for l in 0..dim {
                // Reduce k*l mod 2N for an accurate cosine.
                let r = (k * l) % (2 * n);
                table[k * dim + l] = (PI * r as f64 / n as f64).cos();
            }
        }
        Self { n, table }
    }

    /// Values at ascending nodes to coefficients.
    pub fn forward(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n;
        let dim = n + 1;
        let c = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
        (0..dim)
            .map(|k| {
                let s: f64 = (0..dim).map(|l| self.table[k * dim + l] * values[n - l] / c(l)).sum();
                2.0 * s / (n as f64 * c(k))
            })
            .collect()
    }

    /// Coefficients to values at ascending nodes.
    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let dim = n + 1;
        let mut out = vec![0.0; dim];
        for l in 0..dim {
            out[n - l] = (0..dim).map(|k| coeffs[k] * self.table[k * dim + l]).sum();
        }
        out
    }
}

/// Nodes, differentiation matrix and (optionally) a filter for one degree `N`.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    n: usize,
    domain: Interval,
    nodes: Vec<f64>,
    diff: DenseMatrix,
    filter: Option<Filter>,
}

#[derive(Debug, Clone)]
struct Filter {
    order: u32,
    diag: Vec<f64>,
    // C^{-1} diag(σ) C, precomputed from the cosine transform.
    matrix: DenseMatrix,
}

impl SpectralOperator {
    pub fn new(n: usize, domain: Interval) -> Result<Self> {
        Ok(Self {
            n,
            domain,
            nodes: gauss_lobatto_nodes(n, domain)?,
            diff: differentiation_matrix(n, domain)?,
            filter: None,
        })
    }

    /// Enables the exponential filter of the given even order.
    pub fn with_filter(mut self, order: u32) -> Result<Self> {
        let diag = exponential_filter(self.n, order)?;
        let transform = ChebyshevTransform::new(self.n);
        let dim = self.n + 1;
        let mut matrix = DenseMatrix::zeros(dim);
        let mut unit = vec![0.0; dim];
        for col in 0..dim {
            unit.iter_mut().for_each(|v| *v = 0.0);
            unit[col] = 1.0;
            let mut coeffs = transform.forward(&unit);
            coeffs.iter_mut().zip(&diag).for_each(|(a, s)| *a *= s);
            for (row, v) in transform.inverse(&coeffs).into_iter().enumerate() {
                matrix.set(row, col, v);
            }
        }
        self.filter = Some(Filter { order, diag, matrix });
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn diff_matrix(&self) -> &DenseMatrix {
        &self.diff
    }

    pub fn filter_order(&self) -> Option<u32> {
        self.filter.as_ref().map(|f| f.order)
    }

    pub fn filter_diag(&self) -> Option<&[f64]> {
        self.filter.as_ref().map(|f| f.diag.as_slice())
    }

    pub fn differentiate_into(&self, u: &[f64], du: &mut [f64]) {
        self.diff.mul_vec_into(u, du);
    }

    pub fn differentiate(&self, u: &[f64]) -> Vec<f64> {
        self.diff.mul_vec(u)
    }

    /// Applies the filter in place; no-op when no filter is configured.
    pub fn apply_filter(&self, u: &mut [f64], scratch: &mut [f64]) {
        if let Some(f) = &self.filter {
            f.matrix.mul_vec_into(u, scratch);
            u.copy_from_slice(scratch);
        }
    }

    /// Chebyshev-Gauss-Lobatto weights `π/N` (halved at the ends); they
    /// integrate `g(t) (1 - t²)^{-1/2}` in the reference coordinate.
    pub fn quadrature_weights(&self) -> Vec<f64> {
        let n = self.n;
        (0..=n)
            .map(|j| if j == 0 || j == n { PI / (2.0 * n as f64) } else { PI / n as f64 })
            .collect()
    }
}

/// Barycentric (second form) interpolant through values on a Gauss-Lobatto grid.
#[derive(Debug, Clone)]
pub struct ChebyshevInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl ChebyshevInterpolant {
    pub fn new(op: &SpectralOperator, values: Vec<f64>) -> Result<Self> {
        if values.len() != op.nodes().len() {
            return Err(Error::InvalidInput("value count differs from node count".into()));
        }
        let n = op.n();
        let weights = (0..=n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == n {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();
        Ok(Self { nodes: op.nodes().to_vec(), values, weights })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((xj, fj), wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = x - xj;
            if d == 0.0 {
                return *fj;
            }
            let t = wj / d;
            num += t * fj;
            den += t;
        }
        num / den
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Scratch buffers for the Shu-Osher TVD-RK3 scheme.
#[derive(Debug, Clone)]
pub struct TvdRk3 {
    u1: Vec<f64>,
    u2: Vec<f64>,
    rhs: Vec<f64>,
}

impl TvdRk3 {
    pub fn new(len: usize) -> Self {
        Self { u1: vec![0.0; len], u2: vec![0.0; len], rhs: vec![0.0; len] }
    }

    /// Advances `u` from `t` to `t + dt`.
    ///
    /// `rhs(t, u, out)` writes `L(u)`; `boundary(t, u)` overwrites boundary
    /// values after every stage.
    pub fn step<R, B>(&mut self, u: &mut [f64], t: f64, dt: f64, mut rhs: R, mut boundary: B) -> Result<()>
    where
        R: FnMut(f64, &[f64], &mut [f64]),
        B: FnMut(f64, &mut [f64]),
    {
        let Self { u1, u2, rhs: l } = self;

        rhs(t, u, l);
        for ((a, &u0), &li) in u1.iter_mut().zip(u.iter()).zip(l.iter()) {
            *a = u0 + dt * li;
        }
        boundary(t + dt, u1);
        check_finite(u1, t + dt)?;

        rhs(t + dt, u1, l);
        for (((b, &u0), &a), &li) in u2.iter_mut().zip(u.iter()).zip(u1.iter()).zip(l.iter()) {
            *b = 0.75 * u0 + 0.25 * (a + dt * li);
        }
        boundary(t + 0.5 * dt, u2);
        check_finite(u2, t + 0.5 * dt)?;

        rhs(t + 0.5 * dt, u2, l);
        for ((u0, &b), &li) in u.iter_mut().zip(u2.iter()).zip(l.iter()) {
            *u0 = (1.0 / 3.0) * *u0 + (2.0 / 3.0) * (b + dt * li);
        }
        boundary(t + dt, u);
        check_finite(u, t + dt)
    }
}

fn check_finite(u: &[f64], time: f64) -> Result<()> {
    if u.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::BlowUp { time })
    }
}

/// One TVD-RK3 step without boundary enforcement, allocating its own scratch.
pub fn tvd_rk3_step<R>(u: &[f64], t: f64, dt: f64, rhs: R) -> Result<Vec<f64>>
where
    R: FnMut(f64, &[f64], &mut [f64]),
{
    let mut out = u.to_vec();
    TvdRk3::new(u.len()).step(&mut out, t, dt, rhs, |_, _| {})?;
    Ok(out)
}

/// Time-step selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtRule {
    /// `Δt = cfl / N²`.
    Fixed { cfl: f64 },
    /// `Δt = cfl / (N² · max(1, max|u|))`, re-evaluated every step.
    WaveSpeed { cfl: f64 },
}

impl DtRule {
    pub fn dt(&self, n: usize, u: &[f64]) -> f64 {
        let n2 = (n * n) as f64;
        match *self {
            DtRule::Fixed { cfl } => cfl / n2,
            DtRule::WaveSpeed { cfl } => {
                let speed = u.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                cfl / (n2 * speed)
            }
        }
    }
}

/// TVD-RK3 driver that lands exactly on the final time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepper {
    pub rule: DtRule,
}

impl TimeStepper {
    pub fn new(rule: DtRule) -> Self {
        Self { rule }
    }

    /// Integrates from `t0` to `t_final`, calling `after_step(u)` after each
    /// completed step (used for filtering) and `monitor(t, steps)` for progress.
    pub fn integrate<R, B, P>(
        &self,
        n: usize,
        u: &mut [f64],
        t0: f64,
        t_final: f64,
        mut rhs: R,
        mut boundary: B,
        mut after_step: P,
    ) -> Result<usize>
    where
        R: FnMut(f64, &[f64], &mut [f64]),
        B: FnMut(f64, &mut [f64]),
        P: FnMut(f64, &mut [f64]),
    {
        let mut rk = TvdRk3::new(u.len());
        let mut t = t0;
        let mut steps = 0;
        match self.rule {
            DtRule::Fixed { .. } => {
                // Uniform steps, rounded so the count is an integer.
                let nominal = self.rule.dt(n, u);
                let count = ((t_final - t0) / nominal - 1e-9).ceil().max(1.0) as usize;
                let dt = (t_final - t0) / count as f64;
                for s in 0..count {
                    rk.step(u, t, dt, &mut rhs, &mut boundary)?;
                    t = if s + 1 == count { t_final } else { t0 + (s + 1) as f64 * dt };
                    after_step(t, u);
                    steps += 1;
                }
            }
            DtRule::WaveSpeed { .. } => {
                while t < t_final {
                    let mut dt = self.rule.dt(n, u);
                    if t + dt >= t_final {
                        dt = t_final - t;
                    }
                    rk.step(u, t, dt, &mut rhs, &mut boundary)?;
                    t = if t + dt >= t_final { t_final } else { t + dt };
                    after_step(t, u);
                    steps += 1;
                }
            }
        }
        Ok(steps)
    }
}
