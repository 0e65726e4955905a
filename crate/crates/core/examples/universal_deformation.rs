//! The universal deformation in Drinfeld normal form over `W[T1, ..]`, and a
//! tampered law as a negative control.
//!
//!     cargo run --example universal_deformation

use lubin_tate::all_passed;
use lubin_tate::formal::{build_universal_module, verify_module_axioms, Precision};
use lubin_tate::series::reduce_mod_p;

fn main() -> lubin_tate::Result<()> {
    let m = build_universal_module(2, 2, Precision::new(6, 8))?;
    println!("parameters: {:?}", m.params());
    let k = m.witt().field().clone();
    let ps = reduce_mod_p(m.p_series()?)?;
    println!(
        "[2](X) mod 2 = {}",
        ps.display_with(|c| k.element(*c).code().to_string())
    );
    for c in verify_module_axioms(&m) {
        println!(
            "  {:<50} {}",
            c.name,
            if c.passed { "ok" } else { "FAILED" }
        );
    }

    let bad = m.tampered(1);
    println!(
        "tampered law passes all axioms: {}",
        all_passed(&verify_module_axioms(&bad))
    );
    Ok(())
}
