use super::*;
use crate::coeff::{ff_make, WittRing};
use proptest::prelude::*;

fn zring(p: u64, n: u32, vars: &[&str]) -> Arc<SeriesRing<WittRing>> {
    SeriesRing::new(WittRing::with_params(p, 1, n).unwrap(), vars).unwrap()
}

fn series(
    ring: &Arc<SeriesRing<WittRing>>,
    prec: u32,
    terms: &[(&[u32], i64)],
) -> TruncatedSeries<WittRing> {
    let r = ring.coeff_ring();
    TruncatedSeries::from_terms(
        ring,
        prec,
        terms
            .iter()
            .map(|(e, c)| (Mono::from_exps(e).unwrap(), r.from_int(*c)))
            .collect(),
    )
}

#[test]
fn product_of_variables() {
    let ring = zring(2, 6, &["X", "Y"]);
    let x = TruncatedSeries::var(&ring, "X", 8).unwrap();
    let y = TruncatedSeries::var(&ring, "Y", 8).unwrap();
    // each factor is known below degree 8, so the product is known below 9
    assert_eq!(&x * &y, series(&ring, 9, &[(&[1, 1], 1)]));
}

#[test]
fn geometric_series_inverts_one_plus_x() {
    let ring = zring(3, 6, &["X"]);
    let d = 12;
    let a = series(&ring, d, &[(&[0], 1), (&[1], 1)]);
    let inv = TruncatedSeries::from_terms(
        &ring,
        d,
        (0..d)
            .map(|k| {
                (
                    Mono::from_exps(&[k]).unwrap(),
                    ring.coeff_ring().from_int(if k % 2 == 0 { 1 } else { -1 }),
                )
            })
            .collect(),
    );
    assert_eq!(&a * &inv, TruncatedSeries::one(&ring, d));
}

#[test]
fn mismatched_rings_are_rejected() {
    let a = TruncatedSeries::var(&zring(2, 4, &["X"]), "X", 5).unwrap();
    let b = TruncatedSeries::var(&zring(2, 5, &["X"]), "X", 5).unwrap();
    assert!(matches!(a.try_add(&b), Err(Error::RingMismatch(_))));
}

#[test]
fn substitution_examples() {
    let src = zring(2, 4, &["X", "Y"]);
    let tgt = zring(2, 4, &["U"]);
    let s = series(&src, 10, &[(&[1, 0], 1), (&[0, 1], 1)]);
    let u = TruncatedSeries::var(&tgt, "U", EXACT).unwrap();
    let r = s.substitute(&tgt, &[&u * &u, u.clone()]).unwrap();
    assert_eq!(r, series(&tgt, 10, &[(&[1], 1), (&[2], 1)]));

    // X*Y with X -> V*Z, Y -> Z; V has weight 0
    let tgt2 = SeriesRing::weighted(src.coeff_ring().clone(), &["V", "Z"], &[0, 1]).unwrap();
    let xy = series(&src, 10, &[(&[1, 1], 1)]);
    let v = TruncatedSeries::var(&tgt2, "V", EXACT).unwrap();
    let z = TruncatedSeries::var(&tgt2, "Z", EXACT).unwrap();
    let r = xy.substitute(&tgt2, &[&v * &z, z.clone()]).unwrap();
    assert_eq!(r, series(&tgt2, 10, &[(&[1, 2], 1)]));
}

#[test]
fn binomial_composition_oracle() {
    // ((1+X)^a - 1) o ((1+X)^b - 1) = (1+X)^{ab} - 1
    let ring = zring(5, 8, &["X"]);
    let d = 9;
    let binom = |n: i64| -> TruncatedSeries<WittRing> {
        let mut c = 1i64;
        let mut terms = Vec::new();
        for k in 1..d as i64 {
            c = c * (n - k + 1) / k;
            terms.push((
                Mono::from_exps(&[k as u32]).unwrap(),
                ring.coeff_ring().from_int(c),
            ));
        }
        TruncatedSeries::from_terms(&ring, d, terms)
    };
    for (a, b) in [(2, 3), (3, 4), (6, 2)] {
        let lhs = binom(a).substitute(&ring, &[binom(b)]).unwrap();
        assert_eq!(lhs, binom(a * b));
    }
}

#[test]
fn constant_term_substitution_is_rejected() {
    let ring = zring(2, 4, &["X"]);
    let s = series(&ring, 5, &[(&[1], 1)]);
    let one_plus_x = series(&ring, 5, &[(&[0], 1), (&[1], 1)]);
    assert!(matches!(
        s.substitute(&ring, std::slice::from_ref(&one_plus_x)),
        Err(Error::ConstantTerm(_))
    ));
    // exact polynomials may take constants
    let poly = s.clone().into_exact();
    assert_eq!(
        poly.substitute(&ring, std::slice::from_ref(&one_plus_x))
            .unwrap(),
        one_plus_x
    );
}

#[test]
fn products_over_families() {
    let k = ff_make(2, 1).unwrap();
    let ring = SeriesRing::new(k, &["X", "Y"]).unwrap();
    let x = TruncatedSeries::var(&ring, "X", EXACT).unwrap();
    let y = TruncatedSeries::var(&ring, "Y", EXACT).unwrap();
    assert_eq!(product_over(&[x.clone(), x.clone()]).unwrap(), &x * &x);
    let fam = vec![x.clone(), y.clone(), &x + &y];
    let p = product_over(&fam).unwrap();
    let expected = TruncatedSeries::from_terms(
        &ring,
        EXACT,
        vec![
            (Mono::from_exps(&[2, 1]).unwrap(), 1),
            (Mono::from_exps(&[1, 2]).unwrap(), 1),
        ],
    );
    assert_eq!(p, expected);
    let rev: Vec<_> = fam.iter().rev().cloned().collect();
    assert_eq!(product_over(&rev).unwrap(), p);
    assert!(product_over::<FieldDesc>(&[]).is_err());
}

#[test]
fn valuation_and_factoring() {
    let ring = zring(2, 4, &["X", "Y"]);
    let s = series(&ring, 10, &[(&[2, 1], 1), (&[3, 0], 1)]);
    assert_eq!(s.var_valuation("X").unwrap(), 2);
    let f = s.factor_out("X", 2).unwrap();
    assert_eq!(f, series(&ring, 8, &[(&[0, 1], 1), (&[1, 0], 1)]));
    assert!(matches!(
        s.factor_out("X", 3),
        Err(Error::FactorTooLarge { .. })
    ));
    assert_eq!(
        TruncatedSeries::zero(&ring, 5).var_valuation("X"),
        Err(Error::ZeroSeries)
    );
}

#[test]
fn reduction_mod_p() {
    let ring = zring(2, 3, &["X"]);
    let s = series(&ring, 6, &[(&[1], 2), (&[2], 1)]);
    let r = reduce_mod_p(&s).unwrap();
    assert_eq!(r.terms(), &[(Mono::from_exps(&[2]).unwrap(), 1)]);
}

#[test]
fn monomial_ideal_membership() {
    let ring = zring(2, 3, &["X", "Y"]);
    let s = series(&ring, 6, &[(&[1, 1], 1), (&[2, 0], 1)]);
    assert!(s.ideal_membership_monomial(&["X"]).unwrap());
    let t = series(&ring, 6, &[(&[1, 0], 1), (&[0, 1], 1)]);
    assert!(!t.ideal_membership_monomial(&["X"]).unwrap());
    assert!(t.ideal_membership_monomial(&["X", "Y"]).unwrap());
}

#[test]
fn json_round_trip_is_bit_exact() {
    let w = WittRing::with_params(2, 2, 4).unwrap();
    let ring = SeriesRing::weighted(w.clone(), &["X", "V"], &[1, 0]).unwrap();
    let s = TruncatedSeries::from_terms(
        &ring,
        7,
        vec![
            (Mono::from_exps(&[1, 0]).unwrap(), w.teichmuller(2)),
            (Mono::from_exps(&[3, 2]).unwrap(), w.from_int(6)),
        ],
    );
    let text = serde_json::to_string(&s.to_json()).unwrap();
    let back =
        TruncatedSeries::<WittRing>::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, s);
    assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
}

fn arb_series(
    ring: Arc<SeriesRing<WittRing>>,
    prec: u32,
) -> impl Strategy<Value = TruncatedSeries<WittRing>> {
    let n = ring.nvars();
    prop::collection::vec((prop::collection::vec(0u32..4, n), -20i64..20), 0..8).prop_map(
        move |ts| {
            let r = ring.coeff_ring();
            TruncatedSeries::from_terms(
                &ring,
                prec,
                ts.into_iter()
                    .map(|(e, c)| (Mono::from_exps(&e).unwrap(), r.from_int(c)))
                    .collect(),
            )
        },
    )
}

fn arb_fq_series(prec: u32) -> impl Strategy<Value = TruncatedSeries<FieldDesc>> {
    prop::collection::vec((prop::collection::vec(0u32..4, 2), 0u32..9), 0..6).prop_map(move |ts| {
        let k = ff_make(3, 2).unwrap();
        let ring = SeriesRing::new(k, &["X", "Y"]).unwrap();
        TruncatedSeries::from_terms(
            &ring,
            prec,
            ts.into_iter()
                .map(|(e, c)| (Mono::from_exps(&e).unwrap(), c))
                .collect(),
        )
    })
}

/// Equality on the range where both sides are known.
fn agree<R: Ring>(a: &TruncatedSeries<R>, b: &TruncatedSeries<R>) -> bool {
    let bound = a.prec().min(b.prec());
    a.truncate(bound) == b.truncate(bound)
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_series(zring(3, 5, &["X", "Y"]), 7),
                   b in arb_series(zring(3, 5, &["X", "Y"]), 7),
                   c in arb_series(zring(3, 5, &["X", "Y"]), 7)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!(agree(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        prop_assert!(agree(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
    }

    #[test]
    fn reduction_is_a_ring_map(a in arb_series(zring(2, 4, &["X", "Y"]), 6),
                              b in arb_series(zring(2, 4, &["X", "Y"]), 6)) {
        let ra = reduce_mod_p(&a).unwrap();
        let rb = reduce_mod_p(&b).unwrap();
        prop_assert!(agree(&reduce_mod_p(&(&a * &b)).unwrap(), &(&ra * &rb)));
        prop_assert_eq!(reduce_mod_p(&(&a + &b)).unwrap(), &ra + &rb);
    }

    #[test]
    fn substitution_is_functorial(s in arb_series(zring(3, 5, &["X", "Y"]), 8),
                                 a in arb_series(zring(3, 5, &["X", "Y"]), 8),
                                 b in arb_series(zring(3, 5, &["X", "Y"]), 8)) {
        let ring = s.ring().clone();
        let x = TruncatedSeries::var(&ring, "X", EXACT).unwrap();
        let y = TruncatedSeries::var(&ring, "Y", EXACT).unwrap();
        // images without constant terms
        let f = [&(&a * &x) + &y, &(&b * &y) + &(&x * &x)];
        let g = [&x + &(&y * &y), &(&a * &y) + &x];
        let once = s.substitute(&ring, &f).unwrap().substitute(&ring, &g).unwrap();
        let fg: Vec<_> = f.iter().map(|fi| fi.substitute(&ring, &g).unwrap()).collect();
        let composed = s.substitute(&ring, &fg).unwrap();
        prop_assert!(agree(&once, &composed));
    }

    #[test]
    fn var_valuation_is_additive_over_fq(a in arb_fq_series(30), b in arb_fq_series(30)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = &a * &b;
        prop_assert_eq!(ab.var_valuation("X").unwrap(), a.var_valuation("X").unwrap() + b.var_valuation("X").unwrap());
    }

    #[test]
    fn product_order_is_irrelevant(a in arb_series(zring(2, 6, &["X", "Y"]), 6),
                                  b in arb_series(zring(2, 6, &["X", "Y"]), 6),
                                  c in arb_series(zring(2, 6, &["X", "Y"]), 6)) {
        let p1 = product_over(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let p2 = product_over(&[c, a, b]).unwrap();
        prop_assert_eq!(p1, p2);
    }
}

#[test]
fn display_lists_terms_in_order() {
    let r = zring(2, 4, &["X", "Y"]);
    let s = series(&r, 4, &[(&[1, 0], 3), (&[0, 1], 1), (&[2, 1], -1)]);
    let w = r.coeff_ring().clone();
    let text = s.display_with(|c| w.to_signed(c).unwrap().to_string());
    assert_eq!(text, "Y + 3*X - X^2*Y + O(4)");
}
