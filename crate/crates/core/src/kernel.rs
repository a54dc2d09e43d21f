//! Compactly supported polynomial approximations of the Dirac delta.
//!
//! `P^{m,k}` on `[-1, 1]` has unit mass, `m` vanishing moments and `k`
//! derivatives vanishing at `±1`. It is stored as
//!
//! ```text
//! P(ξ) = (1 - ξ²)^{k+1} · Σ_j a_j ξ^{2j},   j = 0..=⌊m/2⌋
//! ```
//!
//! with the `a_j` found exactly by solving the even-moment system against the
//! weight `(1 - ξ²)^{k+1}`. Odd moments vanish because `P` is even.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::rational::{binomial, ratio, solve_exact, split_f64, to_f64};

/// Number of vanishing moments `m` and smoothness class `k` of a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelSpec {
    m: usize,
    k: usize,
}

impl KernelSpec {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidKernelSpec { m });
        }
        Ok(Self { m, k })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of unknown even coefficients, `⌊m/2⌋ + 1`.
    pub fn n_coeffs(&self) -> usize {
        self.m / 2 + 1
    }

    /// Polynomial degree of `P^{m,k}`.
    pub fn degree(&self) -> usize {
        2 * (self.m / 2 + self.k + 1)
    }
}

/// `μ(n, k) = ∫_{-1}^{1} ξ^{2n} (1 - ξ²)^{k+1} dξ`, exactly.
pub fn weighted_moment(n: usize, k: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for l in 0..=k + 1 {
        let term = BigRational::new(binomial(k + 1, l) * BigInt::from(2), BigInt::from(2 * (n + l) + 1));
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// The polynomial `P^{m,k}` together with its floating-point image.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaKernel {
    spec: KernelSpec,
    even_coeffs: Vec<BigRational>,
    coeffs: Vec<f64>,
    split: Vec<(f64, f64)>,
}

impl DeltaKernel {
    /// Solves `Σ_j a_j μ(i + j, k) = δ_{i0}` for `i = 0..=⌊m/2⌋` in rationals.
    pub fn build(spec: KernelSpec) -> Result<Self> {
        let n = spec.n_coeffs();
        let moments: Vec<BigRational> = (0..2 * n - 1).map(|i| weighted_moment(i, spec.k)).collect();
        let system = (0..n).map(|i| (0..n).map(|j| moments[i + j].clone()).collect()).collect();
        let mut rhs = vec![BigRational::zero(); n];
        rhs[0] = BigRational::one();
        let even_coeffs = solve_exact(system, rhs)?;
        Ok(Self::from_exact(spec, even_coeffs))
    }

    pub(crate) fn from_exact(spec: KernelSpec, even_coeffs: Vec<BigRational>) -> Self {
        let coeffs = even_coeffs.iter().map(to_f64).collect();
        let split = even_coeffs.iter().map(split_f64).collect();
        Self { spec, even_coeffs, coeffs, split }
    }

    pub fn spec(&self) -> KernelSpec {
        self.spec
    }

    pub fn degree(&self) -> usize {
        self.spec.degree()
    }

    /// Exact `a_j`, coefficients of `ξ^{2j}` in the factor multiplying the weight.
    pub fn even_coeffs(&self) -> &[BigRational] {
        &self.even_coeffs
    }

    /// `a_j` rounded to `f64`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Monomial coefficients of the fully expanded `P`, as `(power, coefficient)`
    /// for every even power up to the degree.
    pub fn expanded_coeffs(&self) -> Vec<(usize, BigRational)> {
        let k1 = self.spec.k + 1;
        let mut out = vec![BigRational::zero(); self.spec.n_coeffs() + k1];
        for (j, a) in self.even_coeffs.iter().enumerate() {
            for l in 0..=k1 {
                let b = BigRational::from_integer(binomial(k1, l));
                let term = a * b;
                if l % 2 == 0 {
                    out[j + l] += term;
                } else {
                    out[j + l] -= term;
                }
            }
        }
        out.into_iter().enumerate().map(|(i, c)| (2 * i, c)).collect()
    }

    /// `P(ξ)`, zero outside `[-1, 1]`.
    #[inline]
    pub fn profile(&self, xi: f64) -> f64 {
        if xi.abs() > 1.0 {
            return 0.0;
        }
        let s = xi * xi;
        let q = self.coeffs.iter().rev().fold(0.0, |acc, a| acc * s + a);
        let w = (1.0 - xi) * (1.0 + xi);
        q * w.powi(self.spec.k as i32 + 1)
    }

    /// `P(ξ)` evaluated in an arbitrary float type using the double-`f64`
    /// split of each exact coefficient.
    pub fn profile_in<T: Float>(&self, xi: T) -> T {
        if xi.abs() > T::one() {
            return T::zero();
        }
        let s = xi * xi;
        let q = self.split.iter().rev().fold(T::zero(), |acc, &(hi, lo)| {
            acc * s + T::from(hi).unwrap() + T::from(lo).unwrap()
        });
        let w = (T::one() - xi) * (T::one() + xi);
        q * w.powi(self.spec.k as i32 + 1)
    }

    /// Binds a scaling parameter after validating it.
    pub fn scaled(&self, epsilon: f64) -> Result<ScaledKernel<'_>> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidScaling(epsilon));
        }
        Ok(ScaledKernel { kernel: self, epsilon, inv_epsilon: 1.0 / epsilon })
    }

    /// Condition residuals computed in floating point from the rounded coefficients.
    pub fn verify_conditions(&self) -> KernelResiduals {
        KernelResiduals::of_coeffs(self.spec, &self.coeffs)
    }
}

/// `δ_ε(x) = P(x/ε)/ε` for a fixed `ε`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledKernel<'a> {
    kernel: &'a DeltaKernel,
    epsilon: f64,
    inv_epsilon: f64,
}

impl ScaledKernel<'_> {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if x.abs() > self.epsilon {
            return 0.0;
        }
        self.kernel.profile(x * self.inv_epsilon) * self.inv_epsilon
    }
}

/// `(1/ε) P(x/ε)` for `|x| ≤ ε`, zero otherwise.
pub fn evaluate_delta(kernel: &DeltaKernel, epsilon: f64, x: f64) -> Result<f64> {
    Ok(kernel.scaled(epsilon)?.eval(x))
}

/// How far a kernel is from satisfying its defining conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelResiduals {
    /// `|∫P - 1|`.
    pub mass: f64,
    /// `max_{i=1..m} |∫ξ^i P|`.
    pub max_moment: f64,
    /// `max_{i=0..k} |P^{(i)}(±1)|`.
    pub max_boundary_derivative: f64,
}

impl KernelResiduals {
    pub fn max(&self) -> f64 {
        self.mass.max(self.max_moment).max(self.max_boundary_derivative)
    }

    /// Residuals of the kernel `(1 - ξ²)^{k+1} Σ a_j ξ^{2j}` for arbitrary
    /// floating coefficients `a_j`.
    pub fn of_coeffs(spec: KernelSpec, coeffs: &[f64]) -> Self {
        let k1 = spec.k + 1;
        let degree = 2 * (coeffs.len().saturating_sub(1) + k1);
        let (nodes, weights) = gauss_legendre::<f64>((degree + spec.m) / 2 + 2);
        let profile = |xi: f64| {
            let s = xi * xi;
            let q = coeffs.iter().rev().fold(0.0, |acc, a| acc * s + a);
            q * ((1.0 - xi) * (1.0 + xi)).powi(k1 as i32)
        };
        let values: Vec<f64> = nodes.iter().map(|&x| profile(x)).collect();
        let moment = |i: i32| -> f64 {
            nodes.iter().zip(&weights).zip(&values).map(|((x, w), p)| w * x.powi(i) * p).sum()
        };
        let mass = (moment(0) - 1.0).abs();
        let max_moment = (1..=spec.m as i32).map(|i| moment(i).abs()).fold(0.0, f64::max);

        // Leibniz rule on w·Q: derivatives of the integer-coefficient weight
        // are exact in f64.
        let mut weight_poly = vec![0.0; 2 * k1 + 1];
        for l in 0..=k1 {
            let b = to_f64(&BigRational::from_integer(binomial(k1, l)));
            weight_poly[2 * l] = if l % 2 == 0 { b } else { -b };
        }
        let mut q_poly = vec![0.0; 2 * coeffs.len().max(1) - 1];
        for (j, a) in coeffs.iter().enumerate() {
            q_poly[2 * j] = *a;
        }
        let mut max_boundary_derivative: f64 = 0.0;
        for x in [-1.0, 1.0] {
            for i in 0..=spec.k {
                let mut d = 0.0;
                for l in 0..=i {
                    let c = to_f64(&BigRational::from_integer(binomial(i, l)));
                    d += c * poly_derivative(&weight_poly, l, x) * poly_derivative(&q_poly, i - l, x);
                }
                max_boundary_derivative = max_boundary_derivative.max(d.abs());
            }
        }
        Self { mass, max_moment, max_boundary_derivative }
    }
}

/// `d^order/dx^order Σ c_p x^p` at `x`.
fn poly_derivative(coeffs: &[f64], order: usize, x: f64) -> f64 {
    let mut acc = 0.0;
    for p in (order..coeffs.len()).rev() {
        let falling: f64 = (0..order).map(|i| (p - i) as f64).product();
        acc = acc * x + coeffs[p] * falling;
    }
    acc
}

/// Kernel of `P^{1,0}`, mostly useful in tests and examples.
pub fn hat_kernel() -> DeltaKernel {
    DeltaKernel::from_exact(KernelSpec { m: 1, k: 0 }, vec![ratio(3, 4)])
}
