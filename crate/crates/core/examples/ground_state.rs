//! Ground states `v_ω` by normalized imaginary-time flow, with the
//! residual, Nehari and Pohozaev checks.
//!
//! ```bash
//! cargo run --release --example ground_state -- [alpha] [omega] [p]
//! ```

use pointnls::functionals::{report, ActionConvention};
use pointnls::ground_state::{solve_ground_state, GroundStateOptions};
use pointnls::{PointInteraction, RadialGrid, Sign};
use std::sync::Arc;

fn arg(i: usize, default: f64) -> f64 {
    std::env::args()
        .nth(i)
        .and_then(|a| a.parse().ok())
        .unwrap_or(default)
}

fn main() -> pointnls::Result<()> {
    let (alpha, omega, p) = (arg(1, 0.0), arg(2, 2.0), arg(3, 4.0));
    let model = PointInteraction::new(Arc::new(RadialGrid::new(4096, 40.0)?), alpha)?;
    let gs = solve_ground_state(&model, omega, p, &GroundStateOptions::default())?;
    let f = report(&gs.state, p, Sign::Focusing, omega, ActionConvention::Half)?;

    println!("alpha = {alpha}, omega = {omega}, p = {p}");
    println!("converged {} after {} iterations", gs.converged, gs.iterations);
    for rec in gs.log.iter().step_by((gs.log.len() / 8).max(1)) {
        println!(
            "  iter {:>5}  action {:.10}  residual {:.2e}",
            rec.iteration, rec.action, rec.residual
        );
    }
    println!(
        "stationary residual {:.2e}, nehari {:.2e}",
        gs.residual, gs.nehari
    );
    println!(
        "action S = {:.10}, (1/2 - 1/(p+1)) L = {:.10}",
        f.action,
        (0.5 - 1.0 / (p + 1.0)) * f.lp1
    );
    println!(
        "pohozaev {:.3e} against |F| + L = {:.4}",
        f.pohozaev,
        f.quadratic_form.abs() + f.lp1
    );
    println!(
        "mass {:.6}, energy {:.6}, charge {:.6}",
        f.mass, f.energy, gs.state.q.re
    );
    Ok(())
}
