//! Cross-checks of the built-in catalog: the incremental series evaluator
//! against per-term products, pure telescoping, the induction structure
//! replayed at concrete parameter powers, and recorded edge cases.

use qident::algebra::{ExpVec, RatFunc, Sign, SignedMonomial, SubstMap, Variable};
use qident::catalog::{apply_subst, builtin_catalog, instantiate, Expr, Item};
use qident::qseries::PhiSeries;
use qident::verifier::{
    check_certificate, check_induction, check_relation, verify_symbolic, Status,
};

fn all_series(max: usize) -> Vec<PhiSeries> {
    let cat = builtin_catalog();
    let mut out: Vec<PhiSeries> = Vec::new();
    let mut push = |s: &PhiSeries| {
        if !out.contains(s) {
            out.push(s.clone());
        }
    };
    for item in cat.items() {
        match item {
            Item::Identity(spec) => {
                for side in [&spec.lhs, &spec.rhs] {
                    side.visit(&mut |e| {
                        if let Expr::Phi(s) = e {
                            push(s);
                        }
                    });
                }
            }
            Item::Relation(rel) => {
                push(&rel.base.series);
                push(&rel.shifted.series);
                push(&rel.right.series);
            }
            _ => {}
        }
    }
    assert!(out.len() >= max, "expected at least {max} distinct series");
    out
}

#[test]
fn incremental_sum_matches_per_term_products() {
    // The sum evaluator advances by term ratios; the per-term evaluator
    // multiplies Pochhammer products from scratch. They must agree exactly.
    for series in all_series(10) {
        for n in 0..=4i64 {
            let upper = series.termination.eval(n, 0);
            if upper < 0 {
                continue;
            }
            let incremental = series.sum(n, 0).unwrap();
            let mut naive = RatFunc::zero();
            for k in 0..=upper {
                naive = naive.add(&series.term(n, 0, k).unwrap());
            }
            assert!(
                incremental.equivalent(&naive),
                "series disagrees at n={n}: {incremental} vs {naive}"
            );
        }
    }
}

#[test]
fn term_conventions() {
    for series in all_series(10) {
        // k = 0 is the empty product times z^0.
        assert!(series.term(3, 0, 0).unwrap().equivalent(&RatFunc::one()));
        // k = -1 is 0 by convention.
        assert!(series.term(3, 0, -1).unwrap().is_zero());
    }
}

#[test]
fn extending_the_summation_limit_does_not_change_the_value() {
    // Terms beyond the termination length contain a vanished factor.
    let cat = builtin_catalog();
    let a1 = cat.identity("A1").unwrap();
    let mut series = None;
    a1.lhs.visit(&mut |e| {
        if let Expr::Phi(s) = e {
            series = Some(s.clone());
        }
    });
    let series = series.expect("A1 lhs is a phi series");
    for n in 0..=3 {
        let value = series.sum(n, 0).unwrap();
        let mut extended = series.clone();
        extended.termination.c0 += 5;
        assert!(extended.sum(n, 0).unwrap().equivalent(&value), "n={n}");
    }
}

#[test]
fn telescoping_is_exact_independently_of_the_pairing() {
    // sum_{k=0}^{n} (H_k - H_{k+1}) = H_0 - H_{n+1}, for both certificates.
    let cat = builtin_catalog();
    for id in ["CERT1", "CERT2"] {
        let cert = cat.certificate(id).unwrap();
        for n in 0..=6i64 {
            let mut acc = RatFunc::zero();
            for k in 0..=n {
                let h_k = cert.certificate.eval(n, Some(k)).unwrap();
                let h_k1 = cert.certificate.eval(n, Some(k + 1)).unwrap();
                acc = acc.add(&h_k.sub(&h_k1));
            }
            let h_0 = cert.certificate.eval(n, Some(0)).unwrap();
            let h_top = cert.certificate.eval(n, Some(n + 1)).unwrap();
            assert!(acc.equivalent(&h_0.sub(&h_top)), "{id} n={n}");
        }
    }
}

#[test]
fn induction_structure_replays_at_concrete_powers() {
    // The inductive proof skeleton: the base case and the step both pass,
    // and specializing a to q^2 and q^4 re-verifies the headline identity.
    let cat = builtin_catalog();
    for n in 0..=6 {
        assert_eq!(verify_symbolic(cat, cat.identity("L1").unwrap(), n).status, Status::Pass);
    }
    for n in 2..=6 {
        assert_eq!(check_relation(cat.relation("REL1").unwrap(), n).status, Status::Pass);
        assert_eq!(check_induction(cat, cat.induction("IND1").unwrap(), n).status, Status::Pass);
    }
    let a1 = cat.identity("A1").unwrap();
    for m in 1..=2 {
        let map = SubstMap::new().with(
            Variable::A,
            SignedMonomial::new(Sign::Plus, ExpVec::new(2 * m, 0, 0)),
        );
        let specialized = apply_subst(a1, &map);
        for n in 0..=6 {
            let r = verify_symbolic(cat, &specialized, n);
            assert_eq!(r.status, Status::Pass, "a=q^{} n={n}: {:?}", 2 * m, r.witness);
        }
    }
}

#[test]
fn c2_base_case_fails_as_recorded() {
    // The catalog starts C2 at n = 1 because the n = 0 instance is false
    // under the negative-length conventions; assert exactly that.
    let cat = builtin_catalog();
    let mut c2 = cat.identity("C2").unwrap().clone();
    assert_eq!(c2.n_min, 1);
    c2.n_min = 0;
    let r = verify_symbolic(cat, &c2, 0);
    assert_eq!(r.status, Status::Fail);
    assert!(r.witness.is_some());
}

#[test]
fn certificates_pass_small_ranges() {
    let cat = builtin_catalog();
    for id in ["CERT1", "CERT2"] {
        for n in 0..=4 {
            let r = check_certificate(cat.certificate(id).unwrap(), n);
            assert_eq!(r.status, Status::Pass, "{id} n={n}: {:?}", r.witness);
        }
    }
}

#[test]
fn transport_of_a2_matches_v3_per_n() {
    let cat = builtin_catalog();
    let tr3 = cat.transport("TR3").unwrap();
    let mapped = apply_subst(cat.identity("A2").unwrap(), &tr3.map);
    let v3 = cat.identity("V3").unwrap();
    for n in 0..=4 {
        let (ml, mr) = instantiate(&mapped, n, None).unwrap();
        let (vl, vr) = instantiate(v3, n, None).unwrap();
        assert!(ml.equivalent(&vl), "lhs n={n}");
        assert!(mr.equivalent(&vr), "rhs n={n}");
    }
}
