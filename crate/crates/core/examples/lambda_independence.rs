//! A state written as `φ_λ + q G^λ` at two different shifts: the field, the
//! charge and the energy do not depend on the choice of `λ`.
//!
//! ```bash
//! cargo run --release --example lambda_independence
//! ```

use num_complex::Complex64;
use pointnls::functionals::{report, ActionConvention};
use pointnls::inequality::random_family;
use pointnls::{PointInteraction, RadialGrid, Sign};
use std::sync::Arc;

fn main() -> pointnls::Result<()> {
    let model = PointInteraction::new(Arc::new(RadialGrid::new(4096, 40.0)?), 0.1)?;
    let grid = model.grid();
    println!(
        "{:>8} {:>8} {:>14} {:>14} {:>10}",
        "lambda", "q", "F", "E(p=3)", "phi(0)"
    );
    for member in random_family(7, 3) {
        let u = member.realize(&model, 3.0)?;
        for lambda in [3.0, 10.0, 100.0] {
            let v = u.change_lambda_to(Complex64::new(lambda, 0.0))?;
            let r = report(&v, 3.0, Sign::Focusing, 0.0, ActionConvention::Half)?;
            let phi0 = grid.phi_at_origin(&v.phi)?;
            println!(
                "{lambda:>8} {:>8.4} {:>14.10} {:>14.10} {:>10.4}",
                v.q.re, r.quadratic_form, r.energy, phi0.re
            );
        }
        println!();
    }
    Ok(())
}
