//! The series `P_a`, the local equation `P` and the component census.
//!
//!     cargo run --example depth0_equation -- 3 2

use lubin_tate::depth0::{Depth0Model, TLift};
use lubin_tate::formal::Precision;

fn main() -> lubin_tate::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (q, n) = (
        args.first().copied().unwrap_or(2),
        args.get(1).copied().unwrap_or(2) as u32,
    );
    let model = Depth0Model::new(q, n, TLift::Zero, Precision::default_for(q, n))?;
    let w = model.witt().clone();
    let show = |c: &_| w.to_signed(c).unwrap().to_string();

    for (a, s) in model.p_family()?.iter().take(4) {
        println!("P_{:?} = {}", a.0, s.truncate(4).display_with(show));
    }
    let p = model.p_total()?;
    println!(
        "P has valuation {} (q^n - 1 = {})",
        p.valuation(),
        q.pow(n) - 1
    );

    let comps = model.components()?;
    println!(
        "{} components, each the image of {} vectors a",
        comps.count, comps.multiplicity
    );
    for c in &comps.classes {
        println!(
            "  {:?} <- {:?} compatible: {}",
            c.representative, c.members, c.compatible
        );
    }
    Ok(())
}
