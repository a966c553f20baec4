//! Localized virial identity on a bounded focusing run: the breakdown of
//! `V″` into `4P` and remainders at three cut-off radii.
//!
//! ```bash
//! cargo run --release --example virial_scan
//! ```

use pointnls::evolution::{default_projection_shift, make_initial_data, run, InitialData, SimConfig};
use pointnls::virial::{virial_breakdown, CutoffProfile};
use pointnls::Sign;

fn main() -> pointnls::Result<()> {
    let config = SimConfig {
        p: 4.0,
        t_end: 1.0,
        monitor_every: 250,
        ..SimConfig::default()
    };
    let model = config.build_model()?;
    let lambda_ref = config.resolved_lambda_ref(&model)?;
    let u0 = make_initial_data(
        &InitialData::Gaussian {
            amplitude: 0.5,
            width: 1.0,
            projection: Some(default_projection_shift(lambda_ref, 1.0)),
        },
        &model,
        lambda_ref,
        None,
    )?;
    let profiles = [5.0, 10.0, 20.0].map(|r| CutoffProfile::new(r).unwrap());
    run(&config, &u0, &mut |rec, state| {
        println!("t = {:.2}", rec.t);
        for profile in &profiles {
            let b = virial_breakdown(state, profile, config.p, Sign::Focusing)?;
            println!(
                "  R = {:>4}: 4P = {:.6}  remainder = {:+.3e}  (p1 {:+.1e}, uHu {:+.1e}, grad {:+.1e}, cross {:+.1e}, GG {:+.1e})",
                profile.radius(),
                b.four_p,
                b.remainder(),
                b.rem_p1,
                b.rem_uhu,
                b.rem_grad,
                b.rem_cross,
                b.rem_gg
            );
        }
        Ok(())
    })?;
    Ok(())
}
