//! The functional-inequality bench: log-Hardy, Strauss, Sobolev,
//! Gagliardo–Nirenberg and the Kato Lipschitz bound.
//!
//! ```bash
//! cargo run --release --example inequalities
//! ```

use pointnls::inequality::{
    gagliardo_nirenberg_family, gn_mass_threshold, kato_family, log_hardy_family, random_family,
    sobolev_family, strauss_family, GridPair, InequalityRow,
};

fn show(rows: &[InequalityRow]) {
    for r in rows {
        let flag = if r.refinement_flag {
            "  (grid-sensitive)"
        } else {
            ""
        };
        println!(
            "{:<20} {:<40} {:>10} {:>12.6}{flag}",
            r.family, r.params, r.grid, r.ratio
        );
    }
    if let Some(r) = rows.first() {
        println!("{:<20} empirical constant {:.6}\n", r.family, r.empirical_c);
    }
}

fn main() -> pointnls::Result<()> {
    show(&log_hardy_family(40)?);
    show(&strauss_family(40)?);

    let pair = GridPair::new(0.0, 1024, 20.0, 2.6)?;
    let members = random_family(0, 10);
    show(&sobolev_family(&pair, &members, 4.0)?);
    show(&gagliardo_nirenberg_family(&pair, &members, 3.0)?);
    let (c, threshold) = gn_mass_threshold(&pair, &members, 3.0)?;
    println!("C_GN >= {c:.4}; small-mass threshold 2 C^-4 ~ {threshold:.4}\n");
    show(&kato_family(&pair, 0, 50, 3.0, 0.5, 5.0)?);
    Ok(())
}
