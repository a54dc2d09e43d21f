//! Quadrature rules: closed Newton-Cotes panels for the regularized source,
//! and Gauss-Legendre (fixed and globally adaptive) for kernel checks and
//! the convolution oracle.
//!
//! The Gauss-Legendre routines are generic over [`num_traits::Float`] so the
//! oracle can run in extended precision (e.g. double-double) when the
//! quantity being measured sits below `f64` round-off.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_rational::BigRational;
use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};
use crate::rational::{ratio, solve_exact, to_f64};

/// Largest panel order accepted; closed rules with more points pick up
/// negative weights.
pub const MAX_NEWTON_COTES_ORDER: usize = 8;

/// Closed Newton-Cotes rule on the reference panel `[0, 1]` with nodes `j/q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    q: usize,
    exact_weights: Vec<BigRational>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the rule by solving the exactness system for monomials `0..=q`.
    pub fn newton_cotes(q: usize) -> Result<Self> {
        if q == 0 || q > MAX_NEWTON_COTES_ORDER {
            return Err(Error::UnsupportedRule(q));
        }
        let nodes: Vec<BigRational> = (0..=q).map(|j| ratio(j as i64, q as i64)).collect();
        let mut system = Vec::with_capacity(q + 1);
        let mut rhs = Vec::with_capacity(q + 1);
        for p in 0..=q {
            system.push(nodes.iter().map(|t| num_traits::pow(t.clone(), p)).collect());
            rhs.push(ratio(1, p as i64 + 1));
        }
        let exact_weights = solve_exact(system, rhs)?;
        let weights = exact_weights.iter().map(to_f64).collect();
        Ok(Self { q, exact_weights, weights })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Reference-panel weights, summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_weights(&self) -> &[BigRational] {
        &self.exact_weights
    }

    /// Applies the rule once on `[a, b]`.
    pub fn integrate_panel(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let len = b - a;
        let step = len / self.q as f64;
        self.weights
            .iter()
            .enumerate()
            .map(|(j, w)| w * f(a + j as f64 * step))
            .sum::<f64>()
            * len
    }
}

/// Weights `∫ L_j` of the Lagrange interpolant through arbitrary distinct
/// `nodes`, integrated over `[nodes[0], nodes[last]]`.
pub fn interpolatory_weights(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    if n < 2 {
        return Err(Error::InvalidInput("panel needs at least two nodes".into()));
    }
    let a = nodes[0];
    let len = nodes[n - 1] - a;
    if !(len > 0.0) {
        return Err(Error::InvalidInput("panel nodes must increase".into()));
    }
    // Vandermonde system on the unit panel, solved with partial pivoting.
    let s: Vec<f64> = nodes.iter().map(|x| (x - a) / len).collect();
    let mut m: Vec<Vec<f64>> = (0..n).map(|p| s.iter().map(|v| v.powi(p as i32)).collect()).collect();
    let mut rhs: Vec<f64> = (0..n).map(|p| 1.0 / (p as f64 + 1.0)).collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap_or(Ordering::Equal))
            .unwrap_or(col);
        if m[pivot][col] == 0.0 {
            return Err(Error::InvalidInput("repeated panel nodes".into()));
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for j in col..n {
                m[row][j] -= f * m[col][j];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut w = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|j| m[row][j] * w[j]).sum();
        w[row] = (rhs[row] - tail) / m[row][row];
    }
    Ok(w.into_iter().map(|v| v * len).collect())
}

fn cast<T: Float>(v: f64) -> T {
    T::from(v).expect("f64 is representable")
}

/// `a / b` followed by one residual correction, so extended types whose
/// division rounds like `f64` still return a quotient accurate to their own
/// precision.
fn div<T: Float>(a: T, b: T) -> T {
    let q = a / b;
    q + (a - b * q) / b
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, refined by Newton's method
/// in the working precision `T`.
pub fn gauss_legendre<T: Float + FloatConst>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nt: T = cast(n as f64);
    let legendre = |x: T| {
        // Returns (P_n(x), P_n'(x)).
        let mut p0 = T::one();
        let mut p1 = x;
        for j in 2..=n {
            let jt: T = cast(j as f64);
            let p2 = div((jt + jt - T::one()) * x * p1 - (jt - T::one()) * p0, jt);
            p0 = p1;
            p1 = p2;
        }
        let p = if n == 0 { p0 } else { p1 };
        let dp = div(nt * (x * p - p0), x * x - T::one());
        (p, dp)
    };
    let half = n.div_ceil(2);
    for i in 0..half {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x: T = cast(guess);
        let tol = T::epsilon() * cast(4.0);
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = div(p, dp);
            x = x - dx;
            if dx.abs() <= tol {
                break;
            }
        }
        let (_, dp) = legendre(x);
        let w = div(cast::<T>(2.0), (T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// A Gauss-Legendre pair used for globally adaptive integration: the
/// higher rule gives the estimate, the difference to the lower one the
/// error indicator.
#[derive(Debug, Clone)]
pub struct AdaptiveGauss<T> {
    low: (Vec<T>, Vec<T>),
    high: (Vec<T>, Vec<T>),
    pub max_intervals: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

impl<T: Float + FloatConst> Default for AdaptiveGauss<T> {
    fn default() -> Self {
        Self::new(12, 24)
    }
}

impl<T: Float + FloatConst> AdaptiveGauss<T> {
    pub fn new(low: usize, high: usize) -> Self {
        Self {
            low: gauss_legendre(low),
            high: gauss_legendre(high),
            max_intervals: 4000,
        }
    }

    fn rule(f: &impl Fn(T) -> T, rule: &(Vec<T>, Vec<T>), a: T, b: T) -> T {
        let two: T = cast(2.0);
        let mid = (a + b) / two;
        let half = (b - a) / two;
        let mut acc = T::zero();
        for (x, w) in rule.0.iter().zip(&rule.1) {
            acc = acc + *w * f(mid + half * *x);
        }
        acc * half
    }

    fn panel(&self, f: &impl Fn(T) -> T, a: T, b: T) -> Panel<T> {
        let hi = Self::rule(f, &self.high, a, b);
        let lo = Self::rule(f, &self.low, a, b);
        let error = (hi - lo).abs().to_f64().unwrap_or(f64::INFINITY);
        Panel { a, b, value: hi, error }
    }

    /// Integrates `f` over `[a, b]` until the summed error indicator drops
    /// below `tol`, splitting the worst panel each round.
    pub fn integrate(&self, f: impl Fn(T) -> T, a: T, b: T, tol: f64) -> Result<T> {
        let mut heap = BinaryHeap::new();
        heap.push(self.panel(&f, a, b));
        let mut total_error = heap.peek().map_or(0.0, |p| p.error);
        loop {
            if !total_error.is_finite() {
                return Err(Error::OracleFailure {
                    tolerance: tol,
                    estimate: total_error,
                    intervals: heap.len(),
                });
            }
            if total_error <= tol {
                break;
            }
            if heap.len() >= self.max_intervals {
                return Err(Error::OracleFailure {
                    tolerance: tol,
                    estimate: total_error,
                    intervals: heap.len(),
                });
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = (worst.a + worst.b) / cast(2.0);
            if mid <= worst.a || mid >= worst.b {
                // Panel can no longer be split in this precision.
                return Err(Error::OracleFailure {
                    tolerance: tol,
                    estimate: total_error,
                    intervals: heap.len() + 1,
                });
            }
            let left = self.panel(&f, worst.a, mid);
            let right = self.panel(&f, mid, worst.b);
            total_error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            if heap.len() % 64 == 0 {
                // Re-sum to stop drift in the running total.
                total_error = heap.iter().map(|p| p.error).sum();
            }
        }
        // Sum smallest contributions first.
        let mut parts: Vec<Panel<T>> = heap.into_vec();
        parts.sort_by(|p, q| {
            p.value.abs().partial_cmp(&q.value.abs()).unwrap_or(Ordering::Equal)
        });
        Ok(parts.into_iter().fold(T::zero(), |acc, p| acc + p.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_reaches_double_double_accuracy() {
        use twofloat::TwoFloat;
        let (x, w) = gauss_legendre::<TwoFloat>(12);
        let third = TwoFloat::from(2.0) / 3.0;
        let sum = x.iter().zip(&w).fold(TwoFloat::from(0.0), |acc, (x, w)| acc + *w * *x * *x);
        assert!(f64::from((sum - third).abs()) < 1e-30);
    }

    #[test]
    fn trapezoid_and_simpson_weights() {
        let r1 = QuadratureRule::newton_cotes(1).unwrap();
        assert_eq!(r1.exact_weights(), &[ratio(1, 2), ratio(1, 2)]);
        let r2 = QuadratureRule::newton_cotes(2).unwrap();
        assert_eq!(r2.exact_weights(), &[ratio(1, 6), ratio(4, 6), ratio(1, 6)]);
    }

    #[test]
    fn simpson_is_exact_on_square() {
        let r2 = QuadratureRule::newton_cotes(2).unwrap();
        assert_eq!(r2.integrate_panel(|x| x * x, 0.0, 1.0), 1.0 / 3.0);
    }

    #[test]
    fn rule_range_is_enforced() {
        assert_eq!(QuadratureRule::newton_cotes(0), Err(Error::UnsupportedRule(0)));
        assert_eq!(QuadratureRule::newton_cotes(9), Err(Error::UnsupportedRule(9)));
        assert!(QuadratureRule::newton_cotes(8).is_ok());
    }

    #[test]
    fn newton_cotes_exactness_up_to_q() {
        for q in 1..=MAX_NEWTON_COTES_ORDER {
            let rule = QuadratureRule::newton_cotes(q).unwrap();
            let sum: f64 = rule.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-14);
            for p in 0..=q {
                let v = rule.integrate_panel(|x| x.powi(p as i32), 0.0, 1.0);
                assert!((v - 1.0 / (p as f64 + 1.0)).abs() < 1e-13, "q={q} p={p}");
            }
        }
    }

    #[test]
    fn interpolatory_weights_reduce_to_simpson() {
        let w = interpolatory_weights(&[0.0, 0.5, 1.0]).unwrap();
        assert_relative_eq!(w[0], 1.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(w[1], 4.0 / 6.0, epsilon = 1e-15);
        assert_relative_eq!(w[2], 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn interpolatory_weights_nonuniform_exactness() {
        let nodes = [0.1, 0.25, 0.7];
        let w = interpolatory_weights(&nodes).unwrap();
        for p in 0..3 {
            let v: f64 = nodes.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let exact = (0.7f64.powi(p + 1) - 0.1f64.powi(p + 1)) / (p + 1) as f64;
            assert!((v - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre::<f64>(10);
        for p in 0..20 {
            let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let exact = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
            assert!((v - exact).abs() < 1e-14, "p={p}");
        }
    }

    #[test]
    fn adaptive_handles_kink() {
        let quad = AdaptiveGauss::<f64>::default();
        let v = quad.integrate(|x: f64| (x - 0.3).abs(), -1.0, 1.0, 1e-13).unwrap();
        assert!((v - (1.3 * 1.3 + 0.7 * 0.7) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_reports_failure() {
        let mut quad = AdaptiveGauss::<f64>::default();
        quad.max_intervals = 4;
        let err = quad.integrate(|x: f64| if x > 0.1 { 1.0 } else { 0.0 }, -1.0, 1.0, 1e-15);
        assert!(matches!(err, Err(Error::OracleFailure { .. })));
    }
}
