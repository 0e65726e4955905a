//! Points of the Deligne-Lusztig variety: counts, fibers, group action and
//! twisted Frobenius counts.
//!
//!     cargo run --release --example dl_points

use lubin_tate::cli::twisted_field_degree;
use lubin_tate::dl::{
    action_invariance, base_points, dl_count, fiber_structure_check, twisted_count, BaseMethod,
    DEFAULT_BUDGET,
};

fn main() -> lubin_tate::Result<()> {
    let b = DEFAULT_BUDGET;
    for (q, n) in [(2u64, 2u32), (3, 2), (2, 3)] {
        println!("(q, n) = ({q}, {n})");
        for m in 1..=n {
            let fib = fiber_structure_check(q, n, m, b)?;
            println!(
                "  m = {m}: {} points over {} base points, fibers of size {}",
                fib.count, fib.base_count, fib.fiber_size
            );
        }
        let (ok, pairs) = action_invariance(q, n, n, b)?;
        println!("  invariant under all {pairs} pairs (g, zeta): {ok}");
    }

    // summing the twisted counts over zeta recovers (q^n - 1) * #base points
    let (q, n) = (2, 2);
    let id = vec![vec![1, 0], vec![0, 1]];
    for m in [1, 2] {
        let big_m = twisted_field_degree(q, n, m).expect("small splitting field");
        let counts: Vec<u64> = (0..3)
            .map(|j| twisted_count(q, n, &id, j, big_m, m, b))
            .collect::<Result<_, _>>()?;
        let base = base_points(q, n, m, BaseMethod::Moebius, b)?;
        println!(
            "m = {m}: twisted counts {counts:?}, 3 x base = {}",
            3 * base
        );
    }
    println!("|DL(F_4)| for q = n = 2: {}", dl_count(2, 2, 2, b)?);
    Ok(())
}
