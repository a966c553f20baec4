//! Staggered radial mesh on `[0, r_max]` and the finite-volume radial
//! Laplacian that lives on it.
//!
//! Nodes sit at `r_j = (j + 1/2) h`, faces at `r_{j+1/2} = (j + 1) h`.
//! The innermost face is the origin itself (zero flux, i.e. even reflection),
//! the outermost one carries a homogeneous Dirichlet ghost value.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Weights of the quadratic extrapolation through the first three nodes,
/// evaluated at `r = 0`.
pub const ORIGIN_EXTRAPOLATION: [f64; 3] = [15.0 / 8.0, -10.0 / 8.0, 3.0 / 8.0];

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    n_points: usize,
    r_max: f64,
    h: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(n_points: usize, r_max: f64) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::GridTooSmall {
                needed: 3,
                got: n_points,
            });
        }
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::Parameter(format!("r_max must be positive, got {r_max}")));
        }
        let h = r_max / n_points as f64;
        let nodes: Vec<f64> = (0..n_points).map(|j| (j as f64 + 0.5) * h).collect();
        let weights = nodes.iter().map(|r| 2.0 * PI * r * h).collect();
        Ok(Self {
            n_points,
            r_max,
            h,
            nodes,
            weights,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Radius of the outer face of cell `j`.
    fn face(&self, j: usize) -> f64 {
        (j as f64 + 1.0) * self.h
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_points {
            return Err(Error::Shape {
                expected: self.n_points,
                got: len,
            });
        }
        Ok(())
    }

    /// `Σ_j w_j f_j`, the midpoint rule for `∫_{|x|<r_max} f dx`.
    pub fn quadrature<T>(&self, values: &[T]) -> Result<T>
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
    {
        self.check_len(values.len())?;
        Ok(values
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&v, &w)| acc + v * w))
    }

    /// Quadrature of `f(j, r_j)` without materialising the integrand.
    pub fn integrate<F: FnMut(usize, f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .enumerate()
            .map(|(j, (&r, &w))| w * f(j, r))
            .sum()
    }

    /// `⟨a, b⟩ = Σ w conj(a) b`.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        debug_assert_eq!(a.len(), self.n_points);
        debug_assert_eq!(b.len(), self.n_points);
        a.iter()
            .zip(b)
            .zip(&self.weights)
            .map(|((x, y), w)| x.conj() * y * *w)
            .sum()
    }

    pub fn norm_sq(&self, a: &[Complex64]) -> f64 {
        a.iter().zip(&self.weights).map(|(x, w)| x.norm_sqr() * w).sum()
    }

    /// `(Σ w |a|^p)^{1/p}`.
    pub fn lp_norm(&self, a: &[Complex64], p: f64) -> f64 {
        let s: f64 = a
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| x.norm().powf(p) * w)
            .sum();
        s.powf(1.0 / p)
    }

    /// Discrete `‖∇a‖²`: face fluxes `2π r_{j+1/2} |a_{j+1} - a_j|² / h`
    /// with the Dirichlet ghost `a_N = 0`. Equals `⟨a, -Δ_h a⟩`.
    pub fn dirichlet_energy(&self, a: &[Complex64]) -> f64 {
        let n = self.n_points;
        let mut acc = 0.0;
        for j in 0..n {
            let next = if j + 1 < n { a[j + 1] } else { Complex64::default() };
            acc += self.face(j) * (next - a[j]).norm_sqr();
        }
        2.0 * PI * acc / self.h
    }

    /// `Δ_h a = (f_{j+1/2}(a_{j+1}-a_j) - f_{j-1/2}(a_j-a_{j-1})) / (r_j h²)`.
    pub fn apply_laplacian(&self, a: &[Complex64]) -> Vec<Complex64> {
        let n = self.n_points;
        let h2 = self.h * self.h;
        (0..n)
            .map(|j| {
                let next = if j + 1 < n { a[j + 1] } else { Complex64::default() };
                let outer = (next - a[j]) * self.face(j);
                let inner = if j > 0 {
                    (a[j] - a[j - 1]) * self.face(j - 1)
                } else {
                    Complex64::default()
                };
                (outer - inner) / (self.nodes[j] * h2)
            })
            .collect()
    }

    /// Node-centred radial derivative with even reflection at the origin
    /// and the Dirichlet ghost at `r_max`.
    pub fn radial_derivative(&self, a: &[Complex64]) -> Vec<Complex64> {
        let n = self.n_points;
        (0..n)
            .map(|j| {
                let prev = if j > 0 { a[j - 1] } else { a[0] };
                let next = if j + 1 < n { a[j + 1] } else { Complex64::default() };
                (next - prev) / (2.0 * self.h)
            })
            .collect()
    }

    /// Quadratic extrapolation of the first three node values to `r = 0`.
    pub fn phi_at_origin(&self, values: &[Complex64]) -> Result<Complex64> {
        if values.len() < 3 {
            return Err(Error::GridTooSmall {
                needed: 3,
                got: values.len(),
            });
        }
        Ok(ORIGIN_EXTRAPOLATION.iter().zip(values).map(|(c, v)| v * *c).sum())
    }

    /// Factor `z - Δ_h` for repeated solves.
    pub fn shifted_laplacian(&self, shift: Complex64) -> Result<ShiftedLaplacian> {
        ShiftedLaplacian::new(self, shift)
    }

    /// Samples `f(r_j)`.
    pub fn sample<T, F: Fn(f64) -> T>(&self, f: F) -> Vec<T> {
        self.nodes.iter().map(|&r| f(r)).collect()
    }
}

/// Thomas factorisation of the tridiagonal matrix `z - Δ_h`.
#[derive(Debug, Clone)]
pub struct ShiftedLaplacian {
    shift: Complex64,
    lower: Vec<f64>,
    upper_prime: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
}

impl ShiftedLaplacian {
    fn new(grid: &RadialGrid, shift: Complex64) -> Result<Self> {
        let n = grid.n_points;
        let h2 = grid.h * grid.h;
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut diag = vec![Complex64::default(); n];
        for j in 0..n {
            let scale = grid.nodes[j] * h2;
            let outer = grid.face(j) / scale;
            let inner = if j > 0 { grid.face(j - 1) / scale } else { 0.0 };
            lower[j] = -inner;
            upper[j] = if j + 1 < n { -outer } else { 0.0 };
            diag[j] = shift + outer + inner;
        }
        let mut upper_prime = vec![Complex64::default(); n];
        let mut inv_pivot = vec![Complex64::default(); n];
        let mut prev = Complex64::default();
        for j in 0..n {
            let pivot = diag[j] - prev * lower[j];
            if !(pivot.norm() > 1e-300) || !pivot.re.is_finite() {
                return Err(Error::LinearAlgebra(format!(
                    "zero pivot at row {j} while factoring z - Δ_h (z = {shift})"
                )));
            }
            inv_pivot[j] = pivot.inv();
            upper_prime[j] = inv_pivot[j] * upper[j];
            prev = upper_prime[j];
        }
        Ok(Self {
            shift,
            lower,
            upper_prime,
            inv_pivot,
        })
    }

    pub fn shift(&self) -> Complex64 {
        self.shift
    }

    /// Solves `(z - Δ_h) x = rhs`.
    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.inv_pivot.len();
        if rhs.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut x = vec![Complex64::default(); n];
        let mut prev = Complex64::default();
        for j in 0..n {
            let v = (rhs[j] - prev * self.lower[j]) * self.inv_pivot[j];
            x[j] = v;
            prev = v;
        }
        for j in (0..n - 1).rev() {
            let next = x[j + 1];
            x[j] -= self.upper_prime[j] * next;
        }
        Ok(x)
    }
}
