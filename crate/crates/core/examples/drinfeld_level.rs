//! Checking whether candidate points form a Drinfeld level structure.
//!
//!     cargo run --example drinfeld_level

use lubin_tate::coeff::{FiniteAlgebra, Ring};
use lubin_tate::formal::{
    check_drinfeld_divisibility, default_scalars, lubin_tate_from_f, LevelStructureCandidate,
    Precision,
};

fn main() -> lubin_tate::Result<()> {
    // multiplicative group over Z_2 mod 2^4; its 2-torsion point is zeta_2 - 1 = -2
    let m = lubin_tate_from_f(2, 1, &[0, 2, 1], &default_scalars(2)?, Precision::new(4, 6))?;
    let alg = FiniteAlgebra::base(m.witt().clone());
    for (label, x) in [
        ("-2", alg.from_int(-2)),
        ("0", alg.zero()),
        ("2", alg.from_int(2)),
    ] {
        let cand = LevelStructureCandidate {
            algebra: alg.clone(),
            level: 1,
            images: vec![x],
        };
        println!(
            "x = {label}: [2](X) divisible by the point product: {}",
            check_drinfeld_divisibility(&m, &cand)?
        );
    }
    Ok(())
}
