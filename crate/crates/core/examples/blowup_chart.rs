//! Blowing up the closed point: valuations, affine linear parts and the
//! iterated chart along a depth sequence.
//!
//!     cargo run --release --example blowup_chart -- 2 3 3,2

use lubin_tate::depth0::{Depth0Model, TLift};
use lubin_tate::formal::Precision;

fn main() -> lubin_tate::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let q: u64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(2);
    let n: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let seq: Vec<u32> = match args.get(2) {
        Some(s) => s
            .split(',')
            .map(|t| t.parse().expect("sequence entries are integers"))
            .collect(),
        None => (1..=n).rev().take(2).collect(),
    };
    let model = Depth0Model::new(q, n, TLift::Zero, Precision::default_for(q, n))?;
    let report = model.report(&seq)?;
    println!("chart X_i = V_i X_{n}: valuation {}", report.valuations[0]);
    for lp in &report.linear_parts {
        println!(
            "  P'_{:?} mod X_{n} = {}{}",
            lp.a,
            lp.form,
            if lp.exact { "" } else { "  (not affine)" }
        );
    }
    println!(
        "iterated chart along {seq:?}: valuations {:?}",
        report.valuations
    );
    Ok(())
}
