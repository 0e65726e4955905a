//! Finite fields, Teichmüller lifts and exact cyclotomic arithmetic.
//!
//!     cargo run --example finite_fields

use lubin_tate::coeff::{ff_make, CycloElement, Ring, WittRing};

fn main() -> lubin_tate::Result<()> {
    let k = ff_make(2, 2)?;
    println!(
        "F_4: modulus {:?}, generator code {}",
        k.modulus(),
        k.generator()
    );
    for a in k.elements() {
        println!(
            "  {a}: frobenius {}, order {:?}",
            k.frobenius_code(a),
            k.order_code(a).ok()
        );
    }

    // Teichmüller lifts in W(F_4)/2^4 are the (q-1)-th roots of unity
    let w = WittRing::new(k.clone(), 4)?;
    for a in 1..k.size() {
        let t = w.teichmuller(a);
        let cubed = w.pow(&t, 3);
        println!(
            "  teich({a}) digits {:?}, cube is one: {}",
            w.digits(&t),
            cubed == w.one()
        );
    }

    // zeta_5 + zeta_5^4 satisfies x^2 + x - 1 = 0
    let z = &CycloElement::zeta(5, 1) + &CycloElement::zeta(5, 4);
    let lhs = &(&(&z * &z) + &z) - &CycloElement::from_int(5, 1);
    println!("zeta + zeta^-1 = {z}; x^2 + x - 1 at x = that is {lhs}");
    Ok(())
}
