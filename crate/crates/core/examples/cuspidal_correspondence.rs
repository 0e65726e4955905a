//! theta -> pi_theta: the unique cuspidal pi with pi * St = Ind_T^G theta.
//!
//!     cargo run --release --example cuspidal_correspondence -- 2 3

use lubin_tate::chars::GlCharacters;

fn main() -> lubin_tate::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (q, n) = (
        args.first().copied().unwrap_or(2),
        args.get(1).copied().unwrap_or(3) as u32,
    );
    let gc = GlCharacters::new(q, n)?;
    let report = gc.correspondence_report()?;
    for e in &report.entries {
        let deg = gc.table.irreducibles[e.pi_index].degree_int().unwrap_or(0);
        println!(
            "theta orbit {:?} -> chi_{} (degree {deg})",
            e.theta_orbit, e.pi_index
        );
    }
    for c in &report.checks {
        println!("  {}: {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
    match gc.dl_correspondence(0) {
        Err(e) => println!("trivial character: {e}"),
        Ok(i) => println!("trivial character unexpectedly maps to chi_{i}"),
    }
    Ok(())
}
