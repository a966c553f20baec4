//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use pointnls::{PointInteraction, RadialGrid};

const GL_NODES: [f64; 5] = [
    0.1488743389816312,
    0.4333953941292472,
    0.6794095682990244,
    0.8650633666889845,
    0.9739065285171717,
];
const GL_WEIGHTS: [f64; 5] = [
    0.2955242247147529,
    0.2692667193099963,
    0.219086362515982,
    0.1494513491505806,
    0.0666713443086881,
];

/// Composite 10-point Gauss–Legendre on `[a, b]`.
pub fn gauss<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize) -> Complex64 {
    let w = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * w;
        for (x, wt) in GL_NODES.iter().zip(GL_WEIGHTS) {
            acc += (f(mid + 0.5 * w * x) + f(mid - 0.5 * w * x)) * wt;
        }
    }
    acc * (0.5 * w)
}

pub fn gauss_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    gauss(|x| Complex64::new(f(x), 0.0), a, b, panels).re
}

/// `K_ν(z) = ∫₀^∞ e^{−z cosh t} cosh(νt) dt`, truncated where the integrand
/// is below `e^{−60}`.
pub fn bessel_k_oracle(order: i32, z: Complex64) -> Complex64 {
    let t_max = (60.0 / z.re).max(1.0).acosh() + 1.0;
    let freq = z.norm() * t_max.sinh();
    let panels = ((t_max * freq.max(1.0) / 2.0).ceil() as usize).max(400);
    let nu = order as f64;
    gauss(|t| (-z * t.cosh()).exp() * (nu * t).cosh(), 0.0, t_max, panels)
}

/// `2π ∫₀^∞ f(r) r dr` over `r = e^s`.
pub fn radial_integral<F: Fn(f64) -> f64>(f: F, r_min: f64, r_max: f64) -> f64 {
    let (a, b) = (r_min.ln(), r_max.ln());
    let panels = ((b - a) * 40.0).ceil() as usize;
    2.0 * std::f64::consts::PI
        * gauss_real(
            |s| {
                let r = s.exp();
                f(r) * r * r
            },
            a,
            b,
            panels,
        )
}

pub fn model(n: usize, r_max: f64, alpha: f64) -> Arc<PointInteraction> {
    PointInteraction::new(Arc::new(RadialGrid::new(n, r_max).unwrap()), alpha).unwrap()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn l2_diff(grid: &RadialGrid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    grid.norm_sq(&d).sqrt()
}

pub fn gaussian(grid: &RadialGrid, amplitude: f64, width: f64) -> Vec<Complex64> {
    grid.sample(|r| c(amplitude * (-(r / width).powi(2)).exp()))
}
