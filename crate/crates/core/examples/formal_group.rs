//! Lubin-Tate formal modules from a series `f`, and the axiom checks.
//!
//!     cargo run --example formal_group

use lubin_tate::formal::{
    base_module, default_scalars, lubin_tate_from_f, verify_module_axioms, Precision, Scalar,
};

fn main() -> lubin_tate::Result<()> {
    // f = 2X + X^2 gives the multiplicative group (1+X)(1+Y) - 1
    let m = lubin_tate_from_f(2, 1, &[0, 2, 1], &default_scalars(2)?, Precision::new(8, 5))?;
    let w = m.witt().clone();
    let show = |c: &_| w.to_signed(c).unwrap().to_string();
    println!("F(X,Y) = {}", m.law().display_with(show));
    for k in [-1, 2, 3] {
        println!(
            "[{k}](X) = {}",
            m.scalar(Scalar::Int(k))?.display_with(show)
        );
    }

    // the height-2 module over Z_2: [2] reduces to X^4
    let m = base_module(2, 2, Precision::new(8, 6))?;
    let w = m.witt().clone();
    println!(
        "\nheight 2, q = 2: [2](X) = {}",
        m.p_series()?
            .display_with(|c| w.to_signed(c).unwrap().to_string())
    );
    for c in verify_module_axioms(&m) {
        println!(
            "  {:<42} {}",
            c.name,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
