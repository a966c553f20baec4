//! Eigenvalue, `Γ` and Green-function norms of `Δ_α` for a few couplings.
//!
//! ```bash
//! cargo run --release --example spectrum
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use pointnls::specfun::{eigenvalue_alpha, gamma_coeff};
use pointnls::{bound_state, PointInteraction, RadialGrid};

fn main() -> pointnls::Result<()> {
    let grid = Arc::new(RadialGrid::new(4096, 40.0)?);
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>12}",
        "alpha", "e_alpha", "discrete", "gamma(1)", "|G_1|^2"
    );
    for alpha in [-0.2, -0.1, 0.0, 0.1, 0.25, 0.5] {
        let model = PointInteraction::new(Arc::clone(&grid), alpha)?;
        let e = eigenvalue_alpha(alpha);
        let discrete = model.eigenvalue().unwrap_or(f64::NAN);
        let gamma = gamma_coeff(alpha, Complex64::new(1.0, 0.0))?;
        let green = grid.norm_sq(&model.green(Complex64::new(1.0, 0.0))?);
        println!(
            "{alpha:>6} {e:>14.8} {discrete:>14.8} {:>14.8} {green:>12.8}",
            gamma.re
        );
    }
    println!("exact |G_1|^2 = 1/(4 pi) = {:.8}", 1.0 / (4.0 * PI));

    // The bound state is a rescaled Green function at the eigenvalue shift.
    let model = PointInteraction::new(grid, 0.0)?;
    let b = bound_state(&model)?;
    println!(
        "alpha = 0 bound state: mass {:.6}, charge {:.6}, u(r = 1) = {:.6}",
        b.mass(),
        b.q.re,
        b.total_field()[model.grid().nodes().partition_point(|&r| r < 1.0)].re
    );
    Ok(())
}
