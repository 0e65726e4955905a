//! Character table of GL_n(F_q) by the Dixon-Schneider method.
//!
//!     cargo run --release --example character_table -- 3 2

use lubin_tate::chars::GlCharacters;

fn main() -> lubin_tate::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (q, n) = (
        args.first().copied().unwrap_or(2),
        args.get(1).copied().unwrap_or(2) as u32,
    );
    let gc = GlCharacters::new(q, n)?;
    println!(
        "GL_{n}(F_{q}): order {}, {} classes",
        gc.group.order(),
        gc.group.num_classes()
    );
    let sizes: Vec<usize> = gc.group.classes().iter().map(|c| c.size).collect();
    println!("class sizes {sizes:?}");
    for (i, chi) in gc.table.irreducibles.iter().enumerate() {
        let vals: Vec<String> = chi.values.iter().map(|v| v.to_string()).collect();
        let tag = if gc.cuspidal[i] { " cuspidal" } else { "" };
        println!("chi_{i:<2} [{}]{tag}", vals.join(", "));
    }
    for c in gc.table.orthogonality_checks(&gc.group) {
        println!("{}: {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
    Ok(())
}
