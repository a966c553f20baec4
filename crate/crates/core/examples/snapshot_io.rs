//! Write a ground state to the JSON snapshot format read by the plotting
//! scripts, read it back and restart an evolution from it.
//!
//! ```bash
//! cargo run --release --example snapshot_io
//! ```

use pointnls::evolution::{run, SimConfig};
use pointnls::ground_state::{solve_ground_state, GroundStateOptions};
use pointnls::snapshot::Snapshot;

fn main() -> pointnls::Result<()> {
    let config = SimConfig {
        n_points: 1024,
        r_max: 20.0,
        p: 4.0,
        t_end: 0.5,
        monitor_every: 100,
        ..SimConfig::default()
    };
    let model = config.build_model()?;
    let gs = solve_ground_state(&model, 2.0, config.p, &GroundStateOptions::default())?;

    let dir = std::env::temp_dir().join("pointnls-snapshot-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("ground_state.json");
    Snapshot::from_state(&gs.state, Some(config.p))?.write(&path)?;
    println!("wrote {}", path.display());

    let snap = Snapshot::read(&path)?;
    let restored = snap.to_state(&snap.model()?)?;
    println!(
        "alpha {}, lambda {:.4}, {} points, q = {:.6}",
        snap.alpha, snap.lambda, snap.n_points, snap.q_re
    );

    // A ground state only turns its phase.
    let out = run(&config, &restored, &mut |rec, _| {
        println!(
            "t = {:.2}  mass {:.10}  h1_alpha {:.8}  q = {:.6}",
            rec.t,
            rec.mass,
            rec.h1_alpha,
            rec.q()
        );
        Ok(())
    })?;
    println!(
        "final constraint defect {:.1e}",
        out.final_state.constraint_defect()
    );
    Ok(())
}
