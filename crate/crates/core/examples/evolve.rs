//! Focusing and defocusing runs from a projected Gaussian, printing the
//! conserved quantities as they go.
//!
//! ```bash
//! cargo run --release --example evolve
//! ```

use pointnls::evolution::{default_projection_shift, make_initial_data, run, InitialData, SimConfig};
use pointnls::Sign;

fn main() -> pointnls::Result<()> {
    for (p, sign) in [(2.0, Sign::Focusing), (3.0, Sign::Defocusing)] {
        let config = SimConfig {
            p,
            sign,
            t_end: 5.0,
            monitor_every: 500,
            ..SimConfig::default()
        };
        let model = config.build_model()?;
        let lambda_ref = config.resolved_lambda_ref(&model)?;
        let u0 = make_initial_data(
            &InitialData::Gaussian {
                amplitude: 1.0,
                width: 1.0,
                projection: Some(default_projection_shift(lambda_ref, 1.0)),
            },
            &model,
            lambda_ref,
            None,
        )?;
        println!("p = {p}, {sign:?}, lambda_ref = {lambda_ref:.4}");
        println!(
            "{:>6} {:>14} {:>14} {:>10} {:>10}",
            "t", "mass", "energy", "h1_alpha", "|q|"
        );
        let out = run(&config, &u0, &mut |rec, _| {
            println!(
                "{:>6.2} {:>14.10} {:>14.10} {:>10.5} {:>10.5}",
                rec.t,
                rec.mass,
                rec.energy,
                rec.h1_alpha,
                rec.q().norm()
            );
            Ok(())
        })?;
        println!("{} steps, {} rejected\n", out.steps, out.rejected);
    }
    Ok(())
}
