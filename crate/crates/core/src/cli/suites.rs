use serde_json::{json, Value};

use super::{
    ok_json, CharsAction, Cli, Command, Depth0Action, DlAction, Format, LiftChoice, ModuleChoice,
    Output, Report, RunConfig,
};
use crate::chars::{is_generic, linalg, GlCharacters};
use crate::depth0::{Depth0Model, TLift};
use crate::dl::{self, BaseMethod};
use crate::formal::{base_module, build_universal_module, verify_module_axioms, FormalModule};
use crate::series::MAX_EXP;
use crate::{Check, Error, Result};

pub(super) fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Output> {
    if cfg.format == Format::Csv
        && !matches!(
            cli.command,
            Command::Dl {
                action: DlAction::Count,
                ..
            }
        )
    {
        return Err(Error::InvalidParameter(
            "CSV output is only available for `dl count`".into(),
        ));
    }
    let (name, results, checks) = match &cli.command {
        Command::FormalGroup { .. } => {
            let (r, c) = formal_group(cfg)?;
            ("formal-group".to_string(), r, c)
        }
        Command::Depth0 { action, .. } => {
            let model = depth0_model(cfg)?;
            let (r, c) = match action {
                Depth0Action::Equation => depth0_equation(&model)?,
                Depth0Action::Chart => depth0_chart(&model, &cfg.sequence)?,
                Depth0Action::Strata => depth0_strata(&model)?,
            };
            (format!("depth0 {}", action_name(action)), r, c)
        }
        Command::Dl { action, .. } => {
            if *action == DlAction::Count && cfg.format == Format::Csv {
                let pts = dl::dl_points(cfg.q, cfg.n, cfg.m, cfg.budget)?;
                let mut buf = Vec::new();
                dl::write_points_csv(&mut buf, cfg.n, &pts)
                    .map_err(|e| Error::Format(e.to_string()))?;
                return Ok(Output::Csv(String::from_utf8(buf).expect("CSV is ASCII")));
            }
            let (r, c) = match action {
                DlAction::Equation => dl_equation(cfg)?,
                DlAction::Count => {
                    let rep = dl::dl_report(cfg.q, cfg.n, cfg.m, cfg.budget)?;
                    let c = vec![Check::new(
                        "enumeration invariants",
                        rep.invariants_passed,
                        String::new(),
                    )];
                    (ok_json(&rep), c)
                }
                DlAction::Fibers => {
                    let rep = dl::fiber_structure_check(cfg.q, cfg.n, cfg.m, cfg.budget)?;
                    let c = rep.checks.clone();
                    (ok_json(&rep), c)
                }
                DlAction::Twisted => dl_twisted(cfg)?,
            };
            (format!("dl {}", format!("{action:?}").to_lowercase()), r, c)
        }
        Command::Chars { action } => {
            let gc = GlCharacters::new(cfg.q, cfg.n)?;
            let (r, c) = match action {
                CharsAction::Table => (
                    gc.table_json(None),
                    gc.table.orthogonality_checks(&gc.group),
                ),
                CharsAction::Steinberg => steinberg(&gc),
                CharsAction::Correspondence => {
                    let rep = gc.correspondence_report()?;
                    let c = rep.checks.clone();
                    (
                        json!({"report": ok_json(&rep), "table": gc.table_json(Some(&rep))}),
                        c,
                    )
                }
            };
            (
                format!("chars {}", format!("{action:?}").to_lowercase()),
                r,
                c,
            )
        }
        Command::VerifyAll { .. } => return Ok(Output::Report(verify_all(cfg))),
    };
    Ok(Output::Report(Report::new(&name, cfg, results, &checks)))
}

fn action_name(a: &Depth0Action) -> &'static str {
    match a {
        Depth0Action::Equation => "equation",
        Depth0Action::Chart => "chart",
        Depth0Action::Strata => "strata",
    }
}

fn lift_of(cfg: &RunConfig) -> TLift {
    match cfg.lift {
        LiftChoice::Zero => TLift::Zero,
        LiftChoice::Symbolic => TLift::Symbolic,
    }
}

fn depth0_model(cfg: &RunConfig) -> Result<Depth0Model> {
    let need = cfg.q.pow(cfg.n) + 1;
    if need > MAX_EXP as u64 {
        return Err(Error::SizeBound(format!(
            "depth-zero charts need degree bound q^n + 1 = {need}, above the series limit {MAX_EXP}"
        )));
    }
    Depth0Model::new(cfg.q, cfg.n, lift_of(cfg), cfg.precision)
}

fn module_of(cfg: &RunConfig, kind: ModuleChoice) -> Result<FormalModule> {
    match kind {
        ModuleChoice::Base => base_module(cfg.q, cfg.n, cfg.precision),
        ModuleChoice::Universal => build_universal_module(cfg.q, cfg.n, cfg.precision),
    }
}

fn formal_group(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let m = module_of(cfg, cfg.kind)?;
    let checks = verify_module_axioms(&m);
    let scalars: Vec<Value> = m
        .scalar_keys()
        .into_iter()
        .map(|k| Ok(json!({"scalar": k.to_string(), "series": m.scalar(k)?.to_json()})))
        .collect::<Result<_>>()?;
    let results = json!({
        "kind": cfg.kind,
        "params": m.params(),
        "min_valuation": m.min_valuation(),
        "law": m.law().to_json(),
        "scalars": scalars,
    });
    Ok((results, checks))
}

fn depth0_equation(model: &Depth0Model) -> Result<(Value, Vec<Check>)> {
    let fam = model.p_family()?;
    let total = model.p_total()?;
    let want = model.q().pow(model.n()) as u32 - 1;
    let val = total.valuation();
    let family: Vec<Value> = fam
        .iter()
        .map(|(a, s)| json!({"a": a.0, "series": s.to_json()}))
        .collect();
    let checks = vec![Check::new(
        "P has valuation q^n - 1",
        val == want,
        format!("valuation {val}, expected {want}"),
    )];
    Ok((
        json!({"p_a": family, "p": total.to_json(), "valuation": val}),
        checks,
    ))
}

fn components_checks(model: &Depth0Model) -> Result<(Value, Vec<Check>)> {
    let comps = model.components()?;
    let q = model.q();
    let want = (q.pow(model.n()) - 1) / (q - 1);
    let checks = vec![
        Check::new(
            "component count (q^n - 1)/(q - 1)",
            comps.count as u64 == want,
            format!("{} classes, expected {want}", comps.count),
        ),
        Check::new(
            "multiplicity q - 1",
            comps.multiplicity == q - 1,
            format!("{}", comps.multiplicity),
        ),
        Check::new(
            "scalar compatibility within classes",
            comps.all_compatible(),
            String::new(),
        ),
    ];
    Ok((ok_json(&comps), checks))
}

fn depth0_strata(model: &Depth0Model) -> Result<(Value, Vec<Check>)> {
    let (comps, mut checks) = components_checks(model)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for a in model.index_vectors() {
        let mut member = Vec::new();
        for j in 1..=model.n() {
            let got = model.stratum_membership(&a, j)?;
            let want = a.0[j as usize..].iter().all(|&c| c == 0);
            ok &= got == want;
            member.push(got);
        }
        rows.push(json!({"a": a.0, "in_ideal_x1_to_xj": member}));
    }
    checks.push(Check::new(
        "P_a in (X1..Xj) iff a_{j+1..n} = 0",
        ok,
        String::new(),
    ));
    Ok((json!({"components": comps, "strata": rows}), checks))
}

fn expected_valuations(q: u64, seq: &[u32]) -> Vec<u32> {
    seq.iter().map(|&s| q.pow(s) as u32 - 1).collect()
}

fn depth0_chart(model: &Depth0Model, seq: &[u32]) -> Result<(Value, Vec<Check>)> {
    let report = model.report(seq)?;
    Ok((
        ok_json(&report),
        chart_checks(model.q(), model.n(), seq, &report.valuations, &report),
    ))
}

fn chart_checks(
    q: u64,
    n: u32,
    seq: &[u32],
    vals: &[u32],
    report: &crate::depth0::Depth0Report,
) -> Vec<Check> {
    let want = expected_valuations(q, seq);
    let first = q.pow(n) as u32 - 1;
    vec![
        Check::new(
            "blow-up valuation q^n - 1",
            vals.first() == Some(&first),
            format!("{:?}", vals.first()),
        ),
        Check::new(
            "linear parts exactly affine mod the pivot",
            report.linear_parts.iter().all(|l| l.exact),
            format!("{} factors", report.linear_parts.len()),
        ),
        Check::new(
            "iterated chart valuations q^s - 1",
            vals == want.as_slice(),
            format!("sequence {seq:?}: {vals:?}, expected {want:?}"),
        ),
    ]
}

fn dl_equation(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let inst = dl::dl_equation(cfg.q, cfg.n)?;
    let eq = inst.equation()?;
    let deg = (cfg.q.pow(cfg.n) - 1) as u32;
    let homogeneous = eq.terms().iter().all(|(m, _)| {
        m.exps(cfg.n as usize).iter().sum::<u32>() == deg
            || m.exps(cfg.n as usize).iter().all(|&e| e == 0)
    });
    let results = json!({"equation": eq.to_json(), "degree": deg, "num_forms": inst.num_forms()});
    Ok((
        results,
        vec![Check::new(
            "equation is (degree q^n - 1 form) - 1",
            homogeneous,
            String::new(),
        )],
    ))
}

fn parse_matrix(s: &str, n: u32, size: u64) -> Result<linalg::Matrix> {
    let rows: Vec<Vec<u32>> = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::InvalidParameter(format!("bad matrix entry '{t}'")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != n as usize
        || rows
            .iter()
            .any(|r| r.len() != n as usize || r.iter().any(|&c| c as u64 >= size))
    {
        return Err(Error::InvalidParameter(format!(
            "g must be an {n}x{n} matrix of codes below {size}"
        )));
    }
    Ok(rows)
}

/// Smallest `M` such that `F_{q^M}` contains every solution of
/// `x^{q^m - 1} = zeta` for `zeta` in `mu_{q^n - 1}`.
pub fn twisted_field_degree(q: u64, n: u32, m: u32) -> Option<u32> {
    let modulus = (q.pow(m) as u128 - 1) * (q.pow(n) as u128 - 1);
    let mut x: u128 = 1;
    for big_m in 1..=64u32 {
        x = x * q as u128 % modulus;
        if x == 1 % modulus {
            return Some(big_m);
        }
    }
    None
}

fn dl_twisted(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let g = match &cfg.g {
        Some(s) => parse_matrix(s, cfg.n, cfg.q)?,
        None => linalg::identity(cfg.n as usize),
    };
    let group = crate::chars::GlGroup::new(cfg.q, cfg.n).ok();
    if let Some(grp) = &group {
        if grp.index_of(&g).is_none() {
            return Err(Error::InvalidParameter("g is not invertible".into()));
        }
    }
    let big_m = match cfg.big_m {
        Some(b) => b,
        None => twisted_field_degree(cfg.q, cfg.n, cfg.frobenius)
            .ok_or_else(|| Error::SizeBound("no small splitting field for the twist".into()))?,
    };
    let count = dl::twisted_count(cfg.q, cfg.n, &g, cfg.zeta, big_m, cfg.frobenius, cfg.budget)?;
    let results = json!({"count": count, "big_m": big_m, "frobenius": cfg.frobenius, "zeta": cfg.zeta, "g": g});
    Ok((results, Vec::new()))
}

fn steinberg(gc: &GlCharacters) -> (Value, Vec<Check>) {
    let q = gc.q();
    let n = gc.n();
    let st = &gc.steinberg;
    let deg = q.pow(n * (n - 1) / 2) as i64;
    let norm = crate::chars::inner_product(&gc.group, st, st)
        .map(|v| v == num_rational::BigRational::from_integer(1.into()));
    let irreducible_index = gc.table.irreducibles.iter().position(|c| c == st);
    let checks = vec![
        Check::new(
            "St(1) = q^{n(n-1)/2}",
            st.degree_int() == Some(deg),
            format!("expected {deg}"),
        ),
        Check::from_result("<St, St> = 1", norm.map(|b| (b, String::new()))),
        Check::new(
            "St is in the table",
            irreducible_index.is_some(),
            format!("{irreducible_index:?}"),
        ),
    ];
    let values: Vec<String> = st.values.iter().map(|v| v.to_string()).collect();
    (
        json!({"values": values, "degree": st.degree_int(), "table_index": irreducible_index}),
        checks,
    )
}

/// Runs every suite in order; failures are recorded, never short-circuited.
pub fn verify_all(cfg: &RunConfig) -> Report {
    let mut checks: Vec<Check> = Vec::new();
    let mut results = serde_json::Map::new();
    let mut resource = false;
    let mut record = |name: &str,
                      r: Result<(Value, Vec<Check>)>,
                      checks: &mut Vec<Check>,
                      results: &mut serde_json::Map<String, Value>| match r {
        Ok((v, cs)) => {
            checks.extend(
                cs.into_iter()
                    .map(|c| Check::new(format!("{name}: {}", c.name), c.passed, c.details)),
            );
            results.insert(name.to_string(), v);
        }
        Err(e) => {
            resource |= matches!(e, Error::Budget { .. } | Error::PrecisionExhausted(_));
            checks.push(Check::new(
                format!("{name}: completed"),
                false,
                format!("error: {e}"),
            ));
            results.insert(name.to_string(), Value::Null);
        }
    };

    record(
        "formal axioms",
        formal_suite(cfg),
        &mut checks,
        &mut results,
    );
    let model = depth0_model(cfg);
    let chart = match &model {
        Ok(m) => m.blowup_chart(),
        Err(e) => Err(e.clone()),
    };
    record(
        "depth0 equation",
        model.as_ref().map_err(Clone::clone).and_then(|m| {
            let (v1, mut c1) = depth0_equation(m)?;
            let (v2, c2) = components_checks(m)?;
            c1.extend(c2);
            Ok((json!({"valuation": v1["valuation"], "components": v2}), c1))
        }),
        &mut checks,
        &mut results,
    );
    record(
        "chart valuations",
        model.as_ref().map_err(Clone::clone).and_then(|m| {
            let ch = chart.clone()?;
            let vals = m.iterated_chart(&cfg.sequence)?;
            let want = expected_valuations(cfg.q, &cfg.sequence);
            let first = cfg.q.pow(cfg.n) as u32 - 1;
            let exact = ch.linear_parts_exact();
            let checks = vec![
                Check::new(
                    "blow-up valuation q^n - 1",
                    ch.valuation == first,
                    format!("{}", ch.valuation),
                ),
                Check::new(
                    "linear parts exactly affine mod the pivot",
                    exact,
                    format!("{} factors", ch.linear_parts.len()),
                ),
                Check::new(
                    "iterated chart valuations q^s - 1",
                    vals == want,
                    format!("sequence {:?}: {vals:?}, expected {want:?}", cfg.sequence),
                ),
            ];
            Ok((
                json!({"blowup": ch.valuation, "sequence": cfg.sequence, "iterated": vals}),
                checks,
            ))
        }),
        &mut checks,
        &mut results,
    );
    record(
        "exceptional equation",
        model.as_ref().map_err(Clone::clone).and_then(|m| {
            let un = m.un_special_fiber_from(&chart.clone()?)?;
            Ok((
                json!({"matches_dl": un.matches_dl}),
                vec![Check::new(
                    "U_n equation = DL equation",
                    un.matches_dl,
                    String::new(),
                )],
            ))
        }),
        &mut checks,
        &mut results,
    );
    record("dl invariants", dl_suite(cfg), &mut checks, &mut results);
    record("characters", chars_suite(cfg), &mut checks, &mut results);

    let mut report = Report::new("verify-all", cfg, Value::Object(results), &checks);
    if resource {
        report.exit_override = Some(super::EXIT_BUDGET);
    }
    report
}

fn formal_suite(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let base = base_module(cfg.q, cfg.n, cfg.precision)?;
    let mut checks: Vec<Check> = verify_module_axioms(&base)
        .into_iter()
        .map(|c| Check::new(format!("base {}", c.name), c.passed, c.details))
        .collect();
    if cfg.n >= 2 {
        let uni = build_universal_module(cfg.q, cfg.n, cfg.precision)?;
        checks.extend(
            verify_module_axioms(&uni)
                .into_iter()
                .map(|c| Check::new(format!("universal {}", c.name), c.passed, c.details)),
        );
    }
    Ok((
        json!({"precision": cfg.precision, "base_min_valuation": base.min_valuation()}),
        checks,
    ))
}

fn dl_suite(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let (q, n, budget) = (cfg.q, cfg.n, cfg.budget);
    let mut checks = Vec::new();
    let mut counts = Vec::new();
    for m in 1..=n {
        if dl::check_budget(q, n, m, budget).is_err() {
            break;
        }
        let fib = dl::fiber_structure_check(q, n, m, budget)?;
        let en = dl::base_points(q, n, m, BaseMethod::Enumerate, budget)?;
        let mo = dl::base_points(q, n, m, BaseMethod::Moebius, budget)?;
        checks.extend(
            fib.checks
                .iter()
                .map(|c| Check::new(format!("m={m} {}", c.name), c.passed, c.details.clone())),
        );
        checks.push(Check::new(
            format!("m={m} count is a union of full fibers over the base"),
            fib.count % fib.fiber_size == 0
                && fib.count as u128 <= en * fib.fiber_size as u128
                && en == mo,
            format!(
                "{} points, fiber {}, base {en}, Moebius base {mo}",
                fib.count, fib.fiber_size
            ),
        ));
        counts.push(json!({"m": m, "count": fib.count, "base": en, "fiber": fib.fiber_size}));
    }
    let (inv, pairs) = dl::action_invariance(q, n, n, budget)?;
    checks.push(Check::new(
        "GL_n x mu action preserves the variety",
        inv,
        format!("{pairs} pairs over F_q^{n}"),
    ));

    let mut twisted = Vec::new();
    let mu = q.pow(n) - 1;
    for m in 1..=2u32 {
        let Some(big_m) = twisted_field_degree(q, n, m) else {
            continue;
        };
        if dl::check_budget(q, n, big_m, budget / mu as u128).is_err() {
            twisted.push(json!({"m": m, "big_m": big_m, "skipped": "budget"}));
            continue;
        }
        let id = linalg::identity(n as usize);
        let mut sum = 0u64;
        for j in 0..mu {
            sum += dl::twisted_count(q, n, &id, j, big_m, m, budget)?;
        }
        let base = dl::base_points(q, n, m, BaseMethod::Moebius, budget)? as u64;
        checks.push(Check::new(
            format!("m={m} sum over zeta of twisted counts = (q^n - 1) base"),
            sum == mu * base,
            format!("{sum} vs {mu} x {base} over F_q^{big_m}"),
        ));
        twisted.push(json!({"m": m, "big_m": big_m, "sum": sum, "base": base}));
    }
    Ok((
        json!({"counts": counts, "action_pairs": pairs, "twisted": twisted}),
        checks,
    ))
}

fn chars_suite(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let gc = GlCharacters::new(cfg.q, cfg.n)?;
    let mut checks = gc.table.orthogonality_checks(&gc.group);
    let (_, st) = steinberg(&gc);
    checks.extend(st);
    let rep = gc.correspondence_report()?;
    checks.extend(rep.checks.iter().cloned());
    if cfg.n >= 2 {
        let rejected = !is_generic(cfg.q, cfg.n, 0)?
            && matches!(gc.dl_correspondence(0), Err(Error::InvalidParameter(_)));
        checks.push(Check::new(
            "non-generic theta_0 rejected",
            rejected,
            String::new(),
        ));
    }
    let cusp: Vec<usize> = (0..gc.cuspidal.len()).filter(|&i| gc.cuspidal[i]).collect();
    Ok((
        json!({
            "order": gc.group.order(),
            "classes": gc.group.num_classes(),
            "degrees": gc.table.degrees(),
            "cuspidal": cusp,
            "correspondence": rep.entries.iter().map(|e| json!({"theta_orbit": e.theta_orbit, "pi_index": e.pi_index})).collect::<Vec<_>>(),
        }),
        checks,
    ))
}
