use super::*;
use crate::coeff::FiniteAlgebra;
use crate::series::Mono;

fn univariate(m: &FormalModule, s: &TruncatedSeries<WittRing>) -> Vec<i64> {
    let mut out = vec![0; m.precision().d as usize];
    for (mono, c) in s.terms() {
        out[mono.exp(0) as usize] = m.witt().to_signed(c).unwrap();
    }
    out
}

#[test]
fn multiplicative_group_closed_forms() {
    let m = lubin_tate_from_f(
        2,
        1,
        &[0, 2, 1],
        &default_scalars(2).unwrap(),
        Precision::new(8, 4),
    )
    .unwrap();
    let terms: Vec<(Vec<u32>, i64)> = m
        .law()
        .terms()
        .iter()
        .map(|(mono, c)| (mono.exps(2), m.witt().to_signed(c).unwrap()))
        .collect();
    assert_eq!(
        terms,
        vec![(vec![0, 1], 1), (vec![1, 0], 1), (vec![1, 1], 1)]
    );
    assert_eq!(
        univariate(&m, m.scalar(Scalar::Int(3)).unwrap()),
        vec![0, 3, 3, 1]
    );
    assert_eq!(univariate(&m, m.p_series().unwrap()), vec![0, 2, 1, 0]);
    // (1+X)^{-1} - 1 = -X + X^2 - X^3
    assert_eq!(
        univariate(&m, m.scalar(Scalar::Int(-1)).unwrap()),
        vec![0, -1, 1, -1]
    );
}

#[test]
fn binomial_oracle_for_every_scalar() {
    // [a](X) = (1+X)^a - 1 for the multiplicative group, any integer a
    let m = lubin_tate_from_f(2, 1, &[0, 2, 1], &[Scalar::Int(2)], Precision::new(10, 7)).unwrap();
    for a in [-3i64, 5, 6, 7] {
        let s = m.scalar_series(&m.padic().from_int(a)).unwrap();
        let got = univariate(&m, &s);
        let mut binom = [0i64; 7];
        let mut c: f64 = 1.0;
        for k in 1..7 {
            c = c * (a - k as i64 + 1) as f64 / k as f64;
            binom[k] = c.round() as i64;
        }
        let pn = 1i64 << 10;
        for k in 0..7 {
            assert_eq!((got[k] - binom[k]).rem_euclid(pn), 0, "a={a} k={k}");
        }
    }
}

#[test]
fn log_of_multiplicative_group() {
    let m =
        lubin_tate_from_f(3, 1, &[0, 3, 3, 1], &[Scalar::Int(3)], Precision::new(6, 6)).unwrap();
    // log(1+X), coefficient of X^3 is 1/3
    let c = m.log().coeff(&[3]);
    assert_eq!(c.valuation(), -1);
    assert_eq!(m.law().terms().len(), 3);
}

#[test]
fn hazewinkel_height_one() {
    let k = crate::coeff::ff_make(2, 1).unwrap();
    let l = hazewinkel_log(&k, 12, 1, 9).unwrap();
    for (deg, val) in [(1, 0), (2, -1), (4, -2), (8, -3)] {
        let c = l.coeff(&[deg]);
        assert_eq!(c.valuation(), val);
        assert_eq!(c.unit(), &k_one(&l));
    }
    assert!(l.coeff(&[3]).is_known_zero());
}

fn k_one(l: &TruncatedSeries<PadicRing>) -> WittElement {
    l.coeff_ring().witt().one()
}

#[test]
fn base_modules_satisfy_axioms() {
    for (q, n) in [(2u64, 1u32), (3, 1), (2, 2), (4, 1)] {
        let m = base_module(q, n, Precision::default_for(q, n)).unwrap();
        let checks = verify_module_axioms(&m);
        for c in &checks {
            assert!(c.passed, "({q},{n}) {}: {}", c.name, c.details);
        }
        let red = crate::series::reduce_mod_p(m.p_series().unwrap()).unwrap();
        assert_eq!(red.terms().len(), 1);
        assert_eq!(red.terms()[0].0, Mono::var(0).pow(q.pow(n) as u32).unwrap());
    }
}

#[test]
fn teichmuller_scalars_are_linear() {
    let m = base_module(4, 1, Precision::new(5, 8)).unwrap();
    for c in 0..4 {
        let s = m.scalar(Scalar::Teich(c)).unwrap();
        let x = TruncatedSeries::var(m.ring1(), "X", EXACT)
            .unwrap()
            .scale(&m.teich(c))
            .truncate(8);
        assert_eq!(s, &x, "teich({c})");
    }
}

#[test]
fn universal_module_axioms() {
    let m = build_universal_module(2, 2, Precision::new(6, 10)).unwrap();
    assert_eq!(m.params(), &["T1".to_string()]);
    for c in verify_module_axioms(&m) {
        assert!(c.passed, "{}: {}", c.name, c.details);
    }
}

#[test]
fn universal_specializes_to_lubin_tate() {
    let d = 8;
    let m = build_universal_module(2, 2, Precision::new(5, d)).unwrap();
    let padic = m.padic().clone();
    let r1 = SeriesRing::new(padic.clone(), &["X"]).unwrap();
    let zero = TruncatedSeries::zero(&r1, EXACT);
    let log0 = m
        .log()
        .substitute_named(&r1, &[("T1", zero.clone())])
        .unwrap();
    let exp0 = m.exp().substitute_named(&r1, &[("T1", zero)]).unwrap();
    let f0 = exp0
        .substitute_named(&r1, &[("X", log0.scale(&padic.from_int(2)))])
        .unwrap();
    let lt = lubin_tate_from_series(4, 1, &f0, &[Scalar::Int(2)], Precision::new(5, d));
    // the specialization at T = 0 has height 2 over F_2, i.e. q^n = 4
    let lt = lt.unwrap_or_else(|e| panic!("{e}"));
    let r2 = SeriesRing::new(m.witt().clone(), &["X", "Y"]).unwrap();
    let r1w = SeriesRing::new(m.witt().clone(), &["X"]).unwrap();
    let (f, _) = m
        .specialize(
            &r1w,
            &r2,
            &[TruncatedSeries::zero(&r1w, EXACT)],
            &[TruncatedSeries::zero(&r2, EXACT)],
        )
        .unwrap();
    assert_eq!(f.terms(), lt.law().terms());
}

#[test]
fn tampered_law_is_detected() {
    let m = build_universal_module(2, 2, Precision::new(6, 6)).unwrap();
    let t = m.tampered(1);
    let checks = verify_module_axioms(&t);
    let assoc = checks.iter().find(|c| c.name == "associativity").unwrap();
    assert!(!assoc.passed);
    assert!(!crate::all_passed(&checks));
}

#[test]
fn drinfeld_level_one_structure() {
    let m = lubin_tate_from_f(
        2,
        1,
        &[0, 2, 1],
        &default_scalars(2).unwrap(),
        Precision::new(4, 6),
    )
    .unwrap();
    let alg = FiniteAlgebra::base(m.witt().clone());
    let good = LevelStructureCandidate {
        algebra: alg.clone(),
        level: 1,
        images: vec![alg.from_int(-2)],
    };
    assert!(check_drinfeld_divisibility(&m, &good).unwrap());
    let zero = LevelStructureCandidate {
        algebra: alg.clone(),
        level: 1,
        images: vec![alg.zero()],
    };
    assert!(!check_drinfeld_divisibility(&m, &zero).unwrap());

    let m1 = lubin_tate_from_f(
        2,
        1,
        &[0, 2, 1],
        &default_scalars(2).unwrap(),
        Precision::new(1, 6),
    )
    .unwrap();
    let alg1 = FiniteAlgebra::base(m1.witt().clone());
    let zero1 = LevelStructureCandidate {
        algebra: alg1.clone(),
        level: 1,
        images: vec![alg1.zero()],
    };
    assert!(check_drinfeld_divisibility(&m1, &zero1).unwrap());
}

#[test]
fn drinfeld_rejects_short_truncation() {
    let m = lubin_tate_from_f(
        2,
        1,
        &[0, 2, 1],
        &default_scalars(2).unwrap(),
        Precision::new(4, 3),
    )
    .unwrap();
    let alg = FiniteAlgebra::base(m.witt().clone());
    let cand = LevelStructureCandidate {
        algebra: alg.clone(),
        level: 1,
        images: vec![alg.from_int(-2)],
    };
    assert!(matches!(
        check_drinfeld_divisibility(&m, &cand),
        Err(Error::PrecisionExhausted(_))
    ));
}

#[test]
fn invalid_parameters() {
    assert!(matches!(
        lubin_tate_from_f(2, 1, &[0, 3, 1], &[], Precision::new(4, 4)),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        base_module(6, 1, Precision::new(4, 4)),
        Err(Error::InvalidParameter(_))
    ));
    let m = base_module(2, 1, Precision::new(4, 4)).unwrap();
    assert!(matches!(
        m.scalar(Scalar::Int(5)),
        Err(Error::MissingScalar(_))
    ));
}
