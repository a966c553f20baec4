//! Macdonald functions K0, K1 and the free Green function of `-Δ + λ` in 2D.
//!
//! `bessel_k` works on the principal branch for `Re z > 0`:
//! power series for `|z| <= 2`, Steed's continued fraction (CF2) for
//! `2 < |z| <= 30` and the Hankel asymptotic expansion beyond.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant (20 significant digits).
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.57721566490153286061;

const SERIES_RADIUS: f64 = 2.0;
const ASYMPTOTIC_RADIUS: f64 = 30.0;
const EPS: f64 = 1e-17;

/// `K_order(z)` for `order` in {0, 1} and `Re z > 0`.
pub fn bessel_k(order: i32, z: Complex64) -> Result<Complex64> {
    if order != 0 && order != 1 {
        return Err(Error::UnsupportedOrder(order));
    }
    let (k0, k1) = bessel_k01(z)?;
    Ok(if order == 0 { k0 } else { k1 })
}

/// Both `K_0(z)` and `K_1(z)` from one evaluation.
pub fn bessel_k01(z: Complex64) -> Result<(Complex64, Complex64)> {
    if !(z.re > 0.0) || !z.im.is_finite() || !z.re.is_finite() {
        return Err(Error::Domain(format!(
            "Macdonald functions need Re z > 0, got {z}"
        )));
    }
    let m = z.norm();
    Ok(if m <= SERIES_RADIUS {
        k01_series(z)
    } else if m <= ASYMPTOTIC_RADIUS {
        k01_steed(z)
    } else {
        k01_asymptotic(z)
    })
}

fn k01_series(z: Complex64) -> (Complex64, Complex64) {
    let t = z * z * 0.25;
    let log_half = (z * 0.5).ln();

    // I0, I1 and the digamma-weighted sums share the same powers t^k / (k! (k+n)!).
    let mut term0 = Complex64::new(1.0, 0.0); // t^k / (k!)^2
    let mut term1 = Complex64::new(1.0, 0.0); // t^k / (k! (k+1)!)
    let mut i0 = term0;
    let mut i1_sum = term1;
    let mut harmonic = 0.0; // H_k
    let mut k0_sum = Complex64::new(0.0, 0.0);
    let mut k1_sum = term1 * (1.0 - 2.0 * EULER_GAMMA); // psi(1) + psi(2)

    for k in 1..80 {
        let kf = k as f64;
        term0 *= t / (kf * kf);
        term1 *= t / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        i0 += term0;
        i1_sum += term1;
        k0_sum += term0 * harmonic;
        // psi(k+1) + psi(k+2) = H_k + H_{k+1} - 2 gamma
        k1_sum += term1 * (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA);
        if term0.norm() * (1.0 + harmonic) < EPS * i0.norm() {
            break;
        }
    }
    let i1 = z * 0.5 * i1_sum;
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_sum;
    let k1 = z.inv() + log_half * i1 - z * 0.25 * k1_sum;
    (k0, k1)
}

/// Steed's algorithm for the second continued fraction (order 0 and 1).
fn k01_steed(z: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let mut b = (one + z) * 2.0;
    let mut d = b.inv();
    let mut h = d;
    let mut delh = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25;
    let mut q = Complex64::new(a1, 0.0);
    let mut c = Complex64::new(a1, 0.0);
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -c * a / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = (b + d * a).inv();
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < EPS * s.norm() {
            break;
        }
    }
    let h = h * a1;
    let k0 = (Complex64::new(PI, 0.0) / (z * 2.0)).sqrt() * (-z).exp() / s;
    let k1 = k0 * (z + 0.5 - h) / z;
    (k0, k1)
}

fn k01_asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let prefactor = (Complex64::new(PI, 0.0) / (z * 2.0)).sqrt() * (-z).exp();
    let expand = |mu: f64| {
        let mut sum = Complex64::new(1.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        let mut last = f64::INFINITY;
        for k in 1..40 {
            let kf = k as f64;
            let odd = 2.0 * kf - 1.0;
            term *= (mu - odd * odd) / (8.0 * kf) / z;
            let size = term.norm();
            // stop at the smallest term, but always keep the first eight
            if k > 8 && (size > last || size < EPS * sum.norm()) {
                break;
            }
            sum += term;
            last = size;
        }
        sum
    };
    (prefactor * expand(0.0), prefactor * expand(4.0))
}

/// Shift and interaction strength of a Green function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenParams {
    pub alpha: f64,
    pub shift: Complex64,
}

impl GreenParams {
    /// Accepts any shift off the closed negative real axis `(-inf, 0]`,
    /// so that `sqrt(shift)` has a strictly positive real part.
    pub fn new(alpha: f64, shift: Complex64) -> Result<Self> {
        check_shift(shift)?;
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { alpha, shift })
    }

    pub fn real(alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(alpha, Complex64::new(lambda, 0.0))
    }

    pub fn sqrt_shift(&self) -> Complex64 {
        self.shift.sqrt()
    }
}

pub(crate) fn check_shift(shift: Complex64) -> Result<()> {
    if !shift.re.is_finite() || !shift.im.is_finite() {
        return Err(Error::Domain(format!("shift must be finite, got {shift}")));
    }
    if shift.im == 0.0 && shift.re <= 0.0 {
        return Err(Error::Domain(format!(
            "shift {shift} lies on the branch cut (-inf, 0]"
        )));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "the Green function is singular at the origin; need r > 0, got {r}"
        )));
    }
    Ok(())
}

/// `G^z(r) = K_0(sqrt(z) r) / (2 pi)`.
pub fn green_value(params: &GreenParams, r: f64) -> Result<Complex64> {
    check_radius(r)?;
    let k0 = bessel_k(0, params.sqrt_shift() * r)?;
    Ok(k0 / (2.0 * PI))
}

/// `dG^z/dr = -sqrt(z) K_1(sqrt(z) r) / (2 pi)`.
pub fn green_grad(params: &GreenParams, r: f64) -> Result<Complex64> {
    check_radius(r)?;
    let s = params.sqrt_shift();
    let k1 = bessel_k(1, s * r)?;
    Ok(-s * k1 / (2.0 * PI))
}

/// `[G, G', G'', G''']` at `r`, the higher derivatives taken from the
/// radial equation `G'' + G'/r = z G`.
pub fn green_derivatives(params: &GreenParams, r: f64) -> Result<[Complex64; 4]> {
    check_radius(r)?;
    let s = params.sqrt_shift();
    let (k0, k1) = bessel_k01(s * r)?;
    let g = k0 / (2.0 * PI);
    let g1 = -s * k1 / (2.0 * PI);
    let z = params.shift;
    let g2 = z * g - g1 / r;
    let g3 = z * g1 - g2 / r + g1 / (r * r);
    Ok([g, g1, g2, g3])
}

/// `Γ^z_α = α + γ/(2π) + log(sqrt(z)/2)/(2π)` on the principal branch.
pub fn gamma_coeff(alpha: f64, shift: Complex64) -> Result<Complex64> {
    check_shift(shift)?;
    Ok(alpha + EULER_GAMMA / (2.0 * PI) + (shift.sqrt() * 0.5).ln() / (2.0 * PI))
}

/// The negative eigenvalue `e_α = -4 exp(-2(2πα + γ))`.
pub fn eigenvalue_alpha(alpha: f64) -> f64 {
    -4.0 * (-2.0 * (2.0 * PI * alpha + EULER_GAMMA)).exp()
}
