//! The equation on the exceptional divisor against the Deligne-Lusztig
//! equation `prod (a.x)^(q-1) = +-1`.
//!
//!     cargo run --example exceptional_fiber

use lubin_tate::depth0::{Depth0Model, TLift};
use lubin_tate::dl::dl_equation;
use lubin_tate::formal::Precision;

fn main() -> lubin_tate::Result<()> {
    for (q, n) in [(2, 2), (3, 2), (2, 3)] {
        let model = Depth0Model::new(q, n, TLift::Zero, Precision::default_for(q, n))?;
        let un = model.un_special_fiber()?;
        let dl = dl_equation(q, n)?.equation()?;
        println!(
            "(q, n) = ({q}, {n}): {} terms, equals the DL equation: {}",
            un.equation.terms().len(),
            un.matches_dl
        );
        if n == 2 && q == 2 {
            println!("  {}", dl.display_with(|c| c.to_string()));
        }
    }
    Ok(())
}
