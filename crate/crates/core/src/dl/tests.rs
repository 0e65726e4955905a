use super::*;
use crate::chars::GlGroup;

const B: u128 = DEFAULT_BUDGET;

fn identity(n: usize) -> Matrix {
    crate::chars::linalg::identity(n)
}

#[test]
fn equations() {
    let e = dl_equation(2, 2).unwrap().equation().unwrap();
    let terms: Vec<(Vec<u32>, u32)> = e.terms().iter().map(|(m, c)| (m.exps(2), *c)).collect();
    // x1^2 x2 + x1 x2^2 - 1 over F_2
    assert_eq!(
        terms,
        vec![(vec![0, 0], 1), (vec![1, 2], 1), (vec![2, 1], 1)]
    );
    let e = dl_equation(2, 1).unwrap().equation().unwrap();
    assert_eq!(e.terms().len(), 2);
    let e = dl_equation(3, 2).unwrap().equation().unwrap();
    assert_eq!(
        e.terms()
            .iter()
            .map(|(m, _)| m.exps(2).iter().sum::<u32>())
            .max(),
        Some(8)
    );
}

#[test]
fn fast_product_matches_expansion() {
    for (q, n, m) in [(2u64, 2u32, 2u32), (3, 2, 1), (2, 3, 1), (4, 1, 2)] {
        let inst = dl_equation(q, n).unwrap();
        let eq = inst.equation().unwrap();
        let amb = Ambient::new(&inst, m).unwrap();
        let prime = eq.coeff_ring().clone();
        let emb = amb.field.embedding_of(&prime).unwrap();
        for t in 0..amb.num_vectors() as u64 {
            let x = amb.decode(t);
            let mut v = 0;
            for (mono, c) in eq.terms() {
                let mut term = emb[*c as usize];
                for (i, e) in mono.exps(n as usize).into_iter().enumerate() {
                    term = amb
                        .field
                        .mul_codes(term, amb.field.pow_code(x[i], e as u64));
                }
                v = amb.field.add_codes(v, term);
            }
            assert_eq!(v == 0, amb.on_variety(&x), "({q},{n},{m}) {x:?}");
        }
    }
}

#[test]
fn counts() {
    assert_eq!(dl_count(2, 2, 1, B).unwrap(), 0);
    assert_eq!(dl_count(2, 2, 2, B).unwrap(), 6);
    assert_eq!(dl_count(2, 1, 1, B).unwrap(), 1);
    assert_eq!(dl_points(2, 1, 1, B).unwrap(), vec![vec![1]]);
    assert!(matches!(
        dl_count(2, 2, 20, 1000),
        Err(Error::Budget { .. })
    ));
}

#[test]
fn base_point_methods_agree() {
    for (q, n, m, want) in [
        (2u64, 2u32, 2u32, Some(2u128)),
        (2, 2, 1, Some(0)),
        (3, 2, 2, Some(6)),
        (2, 3, 3, None),
        (2, 3, 2, None),
        (3, 2, 3, None),
    ] {
        let a = base_points(q, n, m, BaseMethod::Enumerate, B).unwrap();
        let b = base_points(q, n, m, BaseMethod::Moebius, B).unwrap();
        assert_eq!(a, b, "({q},{n},{m})");
        if let Some(w) = want {
            assert_eq!(a, w);
        }
        // independent coordinates: prod_{i<n} (q^m - q^i) / (q^m - 1)
        let prod: u128 = (0..n)
            .map(|i| (q.pow(m) as i128 - q.pow(i) as i128).max(0) as u128)
            .product();
        assert_eq!(a, prod / (q.pow(m) as u128 - 1));
    }
}

#[test]
fn fibers() {
    let r = fiber_structure_check(2, 2, 2, B).unwrap();
    assert_eq!((r.count, r.base_count, r.fiber_size), (6, 2, 3));
    assert!(r.invariants_passed);
    let r = fiber_structure_check(2, 2, 1, B).unwrap();
    assert_eq!(r.count, 0);
    assert!(r.invariants_passed);
    for m in 1..4 {
        let r = fiber_structure_check(2, 1, m, B).unwrap();
        assert_eq!(r.fiber_size, 1);
        assert!(r.invariants_passed);
    }
    let r = fiber_structure_check(3, 2, 2, B).unwrap();
    assert!(r.invariants_passed);
    assert_eq!(r.count, r.base_count * 8);
}

#[test]
fn actions() {
    let inst = dl_equation(2, 2).unwrap();
    let amb = Ambient::new(&inst, 2).unwrap();
    let w = amb.field.generator();
    let w2 = amb.field.mul_codes(w, w);
    let x = vec![w, w2];
    let swap = vec![vec![0, 1], vec![1, 0]];
    assert_eq!(amb.act_matrix(&x, &swap), vec![w2, w]);
    assert_eq!(amb.act_matrix(&x, &identity(2)), x);
    assert!(amb.on_variety(&x) == amb.on_variety(&[w2, w]));
    let y = vec![1, w];
    let z = amb.act_zeta(&y, w).unwrap();
    let wi = amb.field.inv_code(w).unwrap();
    assert_eq!(z, vec![wi, amb.field.mul_codes(wi, w)]);
    assert_eq!(amb.product(&y), amb.product(&z));
    let (ok, pairs) = action_invariance(2, 2, 2, B).unwrap();
    assert!(ok);
    assert_eq!(pairs, 18);
    let amb1 = Ambient::new(&inst, 1).unwrap();
    assert_eq!(amb.mu().unwrap().len(), 3);
    assert_eq!(amb1.mu().unwrap().len(), 1);
}

#[test]
fn twisted_sums() {
    let id = identity(2);
    // untwisted
    assert_eq!(
        twisted_count(2, 2, &id, 0, 2, 2, B).unwrap(),
        dl_count(2, 2, 2, B).unwrap()
    );
    for (m, big_m) in [(1u32, 2u32), (2, 6)] {
        let total: u64 = (0..3)
            .map(|j| twisted_count(2, 2, &id, j, big_m, m, B).unwrap())
            .sum();
        let base = base_points(2, 2, m, BaseMethod::Moebius, B).unwrap() as u64;
        assert_eq!(total, 3 * base, "m = {m}");
    }
    // scaling alone has no fixed points on the variety at M = m = 2
    for j in 1..3 {
        assert_eq!(twisted_count(2, 2, &id, j, 2, 2, B).unwrap(), 0);
    }
}

#[test]
fn twisted_with_group_elements() {
    // every g, zeta: the count agrees with the direct enumeration of the
    // fixed points of the twisted Frobenius
    let g = GlGroup::new(2, 2).unwrap();
    let pts = dl_points(2, 2, 2, B).unwrap();
    let amb = Ambient::new(&dl_equation(2, 2).unwrap(), 2).unwrap();
    for h in g.elements() {
        for (j, z) in amb.mu().unwrap() {
            let direct = pts
                .iter()
                .filter(|x| {
                    let y = amb.act_zeta(&amb.act_matrix(x, h), z).unwrap();
                    x.iter()
                        .zip(&y)
                        .all(|(&a, &b)| amb.field.pow_code(a, 2) == b)
                })
                .count() as u64;
            assert_eq!(twisted_count(2, 2, h, j, 2, 1, B).unwrap(), direct);
        }
    }
}

#[test]
fn csv_dump() {
    let pts = dl_points(2, 2, 2, B).unwrap();
    let mut buf = Vec::new();
    write_points_csv(&mut buf, 2, &pts).unwrap();
    let s = String::from_utf8(buf).unwrap();
    assert_eq!(s.lines().count(), 7);
    assert!(s.starts_with("x1,x2\n"));
}
