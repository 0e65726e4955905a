use super::*;
use crate::series::reduce_mod_p;

fn model(q: u64, n: u32) -> Depth0Model {
    Depth0Model::new(q, n, TLift::Zero, Precision::default_for(q, n)).unwrap()
}

fn iv(m: &Depth0Model, a: &[u32]) -> IndexVector {
    IndexVector::new(m.field(), a.to_vec()).unwrap()
}

#[test]
fn p_a_basics() {
    let m = model(2, 2);
    let p = m.p_a(&iv(&m, &[1, 0])).unwrap();
    assert_eq!(
        p,
        TruncatedSeries::var(m.family_ring(), "X1", EXACT)
            .unwrap()
            .truncate(6)
    );
    let p = m.p_a(&iv(&m, &[1, 1])).unwrap();
    let x1 = TruncatedSeries::var(m.family_ring(), "X1", EXACT).unwrap();
    let x2 = TruncatedSeries::var(m.family_ring(), "X2", EXACT).unwrap();
    assert_eq!(p.homogeneous_part(1), &x1 + &x2);
    // reduction of the linear part for (3,2)
    let m = model(3, 2);
    for a in m.index_vectors() {
        let red = reduce_mod_p(&m.p_a(&a).unwrap())
            .unwrap()
            .homogeneous_part(1);
        let coeffs: Vec<u32> = (0..2)
            .map(|i| red.coeff(&if i == 0 { [1, 0] } else { [0, 1] }))
            .collect();
        assert_eq!(coeffs, a.0);
    }
}

#[test]
fn p_total_low_degree() {
    let m = model(2, 1);
    assert_eq!(
        m.p_total().unwrap(),
        TruncatedSeries::var(m.family_ring(), "X1", EXACT)
            .unwrap()
            .truncate(4)
    );
    let m = model(3, 1);
    let p = m.p_total().unwrap();
    assert_eq!(p.valuation(), 2);
    assert_eq!(m.witt().to_signed(&p.coeff(&[2])), Some(-1));
    let m = model(2, 2);
    let red = reduce_mod_p(&m.p_total().unwrap()).unwrap();
    assert_eq!(red.valuation(), 3);
    let low: Vec<(Vec<u32>, u32)> = red
        .homogeneous_part(3)
        .terms()
        .iter()
        .map(|(mo, c)| (mo.exps(2), *c))
        .collect();
    assert_eq!(low, vec![(vec![1, 2], 1), (vec![2, 1], 1)]);
}

#[test]
fn lowest_part_is_gl_invariant() {
    let m = model(3, 2);
    let red = reduce_mod_p(&m.p_total().unwrap()).unwrap();
    let low = red.homogeneous_part(8);
    let g = crate::chars::GlGroup::new(3, 2).unwrap();
    let ring = low.ring().clone();
    let k = m.field();
    for h in g.elements().iter().step_by(5) {
        // X_j -> sum_i h[j][i] X_i permutes the linear forms a . X
        let images: Vec<_> = (0..2)
            .map(|j| {
                let mut s = TruncatedSeries::zero(&ring, EXACT);
                for i in 0..2 {
                    s = &s
                        + &TruncatedSeries::var(&ring, &format!("X{}", i + 1), EXACT)
                            .unwrap()
                            .scale(&h[j][i]);
                }
                s
            })
            .collect();
        let moved = low.substitute(&ring, &images).unwrap();
        // q - 1 = 2 scalars per class: the product is invariant up to det^{...}; compare up to a constant
        let lead = |s: &TruncatedSeries<FieldDesc>| s.terms()[0].1;
        let c = k.mul_codes(lead(&moved), k.inv_code(lead(&low)).unwrap());
        assert_eq!(moved, low.scale(&c));
    }
}

#[test]
fn scalar_compatibility() {
    let m = model(3, 2);
    assert!(m.scalar_compat_check(&iv(&m, &[1, 0]), 2).unwrap());
    assert!(m.scalar_compat_check(&iv(&m, &[1, 2]), 1).unwrap());
    let m2 = model(2, 2);
    // P_(1,1) is not [1] o P_(1,0)
    let lhs = m2.p_a(&iv(&m2, &[1, 1])).unwrap();
    let rhs = m2
        .apply_teich(1, &m2.p_a(&iv(&m2, &[1, 0])).unwrap())
        .unwrap();
    assert_ne!(lhs, rhs);
}

#[test]
fn component_census() {
    for (q, n, count, mult) in [(2u64, 2u32, 3usize, 1u64), (3, 2, 4, 2), (2, 3, 7, 1)] {
        let r = model(q, n).components().unwrap();
        assert_eq!((r.count, r.multiplicity), (count, mult), "({q},{n})");
        assert!(r.all_compatible());
    }
}

#[test]
fn strata() {
    let m = model(2, 2);
    assert!(m.stratum_membership(&iv(&m, &[1, 0]), 1).unwrap());
    assert!(!m.stratum_membership(&iv(&m, &[1, 1]), 1).unwrap());
    assert!(!m.stratum_membership(&iv(&m, &[0, 1]), 1).unwrap());
    let m = model(2, 3);
    for a in m.index_vectors() {
        for j in 1..=3u32 {
            let trailing_zero = a.0[j as usize..].iter().all(|&c| c == 0);
            assert_eq!(
                m.stratum_membership(&a, j).unwrap(),
                trailing_zero,
                "{:?} {j}",
                a.0
            );
        }
    }
}

#[test]
fn charts() {
    for (q, n, v) in [(2u64, 2u32, 3u32), (3, 2, 8), (2, 3, 7)] {
        let m = model(q, n);
        let c = m.blowup_chart().unwrap();
        assert_eq!(c.valuation, v);
        assert!(c.linear_parts_exact(), "({q},{n})");
        assert_eq!(c.linear_parts.len() as u32, v);
    }
    let m = model(2, 2);
    let c = m.blowup_chart().unwrap();
    let forms: Vec<String> = c
        .linear_parts
        .iter()
        .map(|(_, s, _)| chart::format_linear(&m, s))
        .collect();
    assert_eq!(forms, vec!["V1", "1", "V1 + 1"]);
}

#[test]
fn iterated() {
    assert_eq!(model(2, 3).iterated_chart(&[3, 2]).unwrap(), vec![7, 3]);
    assert_eq!(model(3, 2).iterated_chart(&[2, 1]).unwrap(), vec![8, 2]);
    assert_eq!(model(2, 2).iterated_chart(&[2]).unwrap(), vec![3]);
    assert_eq!(model(2, 3).iterated_chart(&[3, 1]).unwrap(), vec![7, 1]);
    assert_eq!(
        model(2, 3).iterated_chart(&[3, 2, 1]).unwrap(),
        vec![7, 3, 1]
    );
    assert!(model(2, 2).iterated_chart(&[2, 2]).is_err());
}

#[test]
fn exceptional_equation_is_dl() {
    for (q, n) in [(2u64, 2u32), (3, 2), (2, 3)] {
        let u = model(q, n).un_special_fiber().unwrap();
        assert!(u.matches_dl, "({q},{n}): {:?}", u.equation);
    }
}

#[test]
fn other_lifts() {
    let prec = Precision::new(6, 6);
    let sym = Depth0Model::new(2, 2, TLift::Symbolic, prec).unwrap();
    let c = sym.blowup_chart().unwrap();
    assert_eq!(c.valuation, 3);
    assert!(c.linear_parts_exact());
    assert!(sym.un_special_fiber().unwrap().matches_dl);
    assert!(sym.components().unwrap().all_compatible());
    let custom = Depth0Model::new(2, 2, TLift::Custom(vec![2]), prec).unwrap();
    assert!(custom.un_special_fiber().unwrap().matches_dl);
    assert!(Depth0Model::new(2, 2, TLift::Custom(vec![1]), prec).is_err());
}

#[test]
fn bounds() {
    assert!(Depth0Model::new(2, 2, TLift::Zero, Precision::new(4, 3)).is_err());
    let m = Depth0Model::new(2, 2, TLift::Zero, Precision::new(4, 4)).unwrap();
    assert!(m.blowup_chart().is_err());
    assert!(IndexVector::new(m.field(), vec![0, 0]).is_err());
}

#[test]
fn report_serializes() {
    let r = model(2, 2).report(&[2]).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["valuations"], serde_json::json!([3]));
    assert_eq!(v["un_equation_matches_dl"], serde_json::json!(true));
}
