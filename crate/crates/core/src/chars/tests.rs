use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn tables_of_small_groups() {
    for (q, n, degrees) in [
        (2u64, 2u32, vec![1, 1, 2]),
        (3, 2, vec![1, 1, 2, 2, 2, 3, 3, 4]),
        (2, 3, vec![1, 3, 3, 6, 7, 8]),
    ] {
        let g = GlGroup::new(q, n).unwrap();
        let t = dixon_table(&g).unwrap();
        assert_eq!(t.degrees(), degrees, "({q},{n})");
        for c in t.orthogonality_checks(&g) {
            assert!(c.passed, "({q},{n}) {}: {}", c.name, c.details);
        }
    }
}

#[test]
fn steinberg_degrees() {
    for (q, n, d) in [(2u64, 2u32, 2i64), (3, 2, 3), (2, 3, 8)] {
        let g = GlGroup::new(q, n).unwrap();
        assert_eq!(steinberg(&g).unwrap().degree_int(), Some(d));
    }
}

#[test]
fn torus_and_genericity() {
    let g = GlGroup::new(2, 2).unwrap();
    let t = coxeter_torus(&g).unwrap();
    assert_eq!(t.generator, vec![vec![0, 1], vec![1, 1]]);
    assert_eq!(t.order(), 3);
    assert_eq!(torus_character(&t, 1)[1], CycloElement::zeta(3, 1));
    let chars = torus_characters(&t);
    // character group law
    for a in 0..3 {
        for b in 0..3 {
            let prod: Vec<_> = chars[a].iter().zip(&chars[b]).map(|(x, y)| x * y).collect();
            assert_eq!(prod, chars[(a + b) % 3]);
        }
    }
    assert!(!is_generic(2, 2, 0).unwrap());
    assert!(is_generic(2, 2, 1).unwrap() && is_generic(2, 2, 2).unwrap());
    let gen32 = (0..8).filter(|&j| is_generic(3, 2, j).unwrap()).count();
    assert_eq!(gen32 as i64, generic_count(3, 2));
    assert_eq!(gen32, 6);
    let gen23 = (0..7).filter(|&j| is_generic(2, 3, j).unwrap()).count();
    assert_eq!(gen23, 6);
    let gen24 = (0..15).filter(|&j| is_generic(2, 4, j).unwrap()).count();
    assert_eq!(gen24 as i64, generic_count(2, 4));
}

#[test]
fn induction_matches_direct_formula() {
    let g = GlGroup::new(3, 2).unwrap();
    let t = coxeter_torus(&g).unwrap();
    let theta = torus_character(&t, 1);
    let ind = induce(&g, &t.elements, &theta);
    assert_eq!(ind.degree_int(), Some(6));
    let pos: std::collections::HashMap<usize, usize> = t
        .elements
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    for (c, cl) in g.classes().iter().enumerate() {
        let x0 = cl.representative;
        let mut s = CycloElement::zero(1);
        for x in 0..g.order() {
            let y = g.mul(g.mul(x, x0), g.inverse(x));
            if let Some(&i) = pos.get(&y) {
                s = &s + &theta[i];
            }
        }
        let direct = s.scale(&crate::coeff::ratio(1, t.elements.len() as i64));
        assert_eq!(direct, ind.values[c]);
    }
}

#[test]
fn frobenius_reciprocity() {
    let g = GlGroup::new(3, 2).unwrap();
    let table = dixon_table(&g).unwrap();
    let t = coxeter_torus(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let j = rng.gen_range(0..8);
        let chi = &table.irreducibles[rng.gen_range(0..table.irreducibles.len())];
        let theta = torus_character(&t, j);
        let lhs = inner_product(&g, &induce(&g, &t.elements, &theta), chi).unwrap();
        let mut s = CycloElement::zero(1);
        for (i, &e) in t.elements.iter().enumerate() {
            s = &s + &(&theta[i] * &chi.values[g.class_of(e)].conj());
        }
        let rhs = s.to_rational().unwrap() / BigRational::from_integer(8.into());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn cuspidals() {
    for (q, n, count, deg) in [(2u64, 2u32, 1usize, 1i64), (3, 2, 3, 2), (2, 3, 2, 3)] {
        let ctx = GlCharacters::new(q, n).unwrap();
        let cusp: Vec<usize> = (0..ctx.cuspidal.len())
            .filter(|&i| ctx.cuspidal[i])
            .collect();
        assert_eq!(cusp.len(), count, "({q},{n})");
        for i in cusp {
            assert_eq!(ctx.table.irreducibles[i].degree_int(), Some(deg));
        }
        assert!(
            !ctx.cuspidal[0]
                || ctx.table.irreducibles[0].degree_int() != Some(1)
                || q == 2 && n == 2
        );
    }
}

#[test]
fn correspondence() {
    for (q, n, orbits) in [(2u64, 2u32, 1usize), (3, 2, 3), (2, 3, 2)] {
        let ctx = GlCharacters::new(q, n).unwrap();
        let r = ctx.correspondence_report().unwrap();
        assert_eq!(r.entries.len(), orbits);
        for c in &r.checks {
            assert!(c.passed, "({q},{n}) {}: {}", c.name, c.details);
        }
        let expected: i64 = if n % 2 == 1 { 1 } else { -1 };
        assert!(r.virtual_rep.terms.values().all(|&k| k == expected));
    }
}

#[test]
fn both_linear_characters_solve_at_2_2() {
    let ctx = GlCharacters::new(2, 2).unwrap();
    let sols = ctx.characterization_solutions(1);
    assert_eq!(sols.len(), 2);
    let pi = ctx.dl_correspondence(1).unwrap();
    // the sign character
    assert_eq!(
        ctx.table.irreducibles[pi]
            .values
            .iter()
            .map(|v| v.to_rational().unwrap())
            .filter(|r| *r < BigRational::zero())
            .count(),
        1
    );
}

#[test]
fn non_generic_rejected() {
    let ctx = GlCharacters::new(3, 2).unwrap();
    assert!(matches!(
        ctx.dl_correspondence(0),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        ctx.dl_correspondence(4),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn virtual_rep_algebra() {
    let mut a = VirtualRep::default();
    a.add_term(1, 2, 3);
    let b = a.neg();
    assert!(a.add(&b).terms.is_empty());
}
