//! Randomized algebra property suites: ring laws, evaluation/substitution
//! homomorphisms, Pochhammer recurrence and splitting, equality-oracle
//! properties, and serialization round-trips.
//!
//! Every suite runs >= 1000 cases from a fixed-seed ChaCha stream, so a
//! failure reproduces exactly.

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use qident::algebra::{
    rat, rat_frac, BigRat, ExpVec, FieldPoint, LaurentPoly, RatFunc, Sign, SignedMonomial,
    SubstMap, Variable, DEFAULT_PRIME,
};
use qident::qseries::pochhammer;

const SEED: u64 = 42;

struct Gen(ChaCha8Rng);

impl Gen {
    fn new() -> Self {
        Gen(ChaCha8Rng::seed_from_u64(SEED))
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as i64
    }

    fn coeff(&mut self) -> BigRat {
        if self.int(0, 3) == 0 {
            rat_frac(self.int(-9, 9), self.int(1, 4))
        } else {
            rat(self.int(-9, 9))
        }
    }

    fn exps(&mut self) -> ExpVec {
        ExpVec::new(
            self.int(-4, 4) as i32,
            self.int(-2, 2) as i32,
            self.int(-2, 2) as i32,
        )
    }

    fn poly(&mut self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for _ in 0..self.int(0, 5) {
            p = p.add(&LaurentPoly::monomial(self.exps(), self.coeff()));
        }
        p
    }

    fn nonzero_poly(&mut self) -> LaurentPoly {
        loop {
            let p = self.poly();
            if !p.is_zero() {
                return p;
            }
        }
    }

    fn ratfunc(&mut self) -> RatFunc {
        RatFunc::new(self.poly(), self.nonzero_poly()).unwrap()
    }

    fn monomial(&mut self) -> SignedMonomial {
        let sign = if self.int(0, 1) == 0 { Sign::Plus } else { Sign::Minus };
        SignedMonomial::new(sign, self.exps())
    }

    fn subst_map(&mut self) -> SubstMap {
        let mut m = SubstMap::new();
        for v in Variable::ALL {
            if self.int(0, 2) > 0 {
                m.set(v, self.monomial());
            }
        }
        m
    }

    fn point(&mut self) -> FieldPoint {
        let p = DEFAULT_PRIME;
        FieldPoint::new(
            p,
            1 + self.0.next_u64() % (p - 1),
            1 + self.0.next_u64() % (p - 1),
            1 + self.0.next_u64() % (p - 1),
        )
    }
}

#[test]
fn ring_laws_hold_on_random_samples() {
    let mut g = Gen::new();
    let zero = LaurentPoly::zero();
    let one = LaurentPoly::one();
    for _ in 0..1000 {
        let (x, y, z) = (g.poly(), g.poly(), g.poly());
        assert_eq!(x.add(&y), y.add(&x));
        assert_eq!(x.mul(&y), y.mul(&x));
        assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        assert_eq!(x.add(&zero), x);
        assert_eq!(x.mul(&one), x);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.negate().negate(), x);
    }
}

#[test]
fn evaluation_is_a_ring_homomorphism() {
    let mut g = Gen::new();
    let p = DEFAULT_PRIME;
    for _ in 0..1000 {
        let (x, y) = (g.poly(), g.poly());
        let pt = g.point();
        let ex = x.eval_mod(&pt).unwrap();
        let ey = y.eval_mod(&pt).unwrap();
        assert_eq!(
            x.mul(&y).eval_mod(&pt).unwrap(),
            qident::algebra::mul_mod(ex, ey, p)
        );
        assert_eq!(
            x.add(&y).eval_mod(&pt).unwrap(),
            qident::algebra::add_mod(ex, ey, p)
        );
    }
}

#[test]
fn substitution_is_a_ring_homomorphism() {
    let mut g = Gen::new();
    for _ in 0..1000 {
        let (x, y) = (g.poly(), g.poly());
        let m = g.subst_map();
        assert_eq!(x.mul(&y).substitute(&m), x.substitute(&m).mul(&y.substitute(&m)));
        assert_eq!(x.add(&y).substitute(&m), x.substitute(&m).add(&y.substitute(&m)));
    }
}

#[test]
fn substitution_commutes_with_evaluation() {
    // eval(subst(f, m), pt) == eval(f, mapped(pt)) — the transport principle
    // the modular verifier relies on.
    let mut g = Gen::new();
    for _ in 0..1000 {
        let f = g.poly();
        let m = g.subst_map();
        let pt = g.point();
        let mapped = qident::catalog::mapped_point(&m, &pt);
        assert_eq!(
            f.substitute(&m).eval_mod(&pt).unwrap(),
            f.eval_mod(&mapped).unwrap()
        );
    }
}

fn q_shift_monomial(e: i64) -> RatFunc {
    RatFunc::from_poly(LaurentPoly::monomial(ExpVec::new(e as i32, 0, 0), rat(1)))
}

#[test]
fn pochhammer_recurrence_at_every_integer() {
    // (x; q^s)_m = (x; q^s)_{m-1} * (1 - x q^{s(m-1)}), for the named
    // parameters exhaustively and then a randomized sweep.
    let named: Vec<RatFunc> = vec![
        RatFunc::from_poly(LaurentPoly::var(Variable::A)),
        RatFunc::from_poly(LaurentPoly::var(Variable::B)),
        RatFunc::from_poly(
            LaurentPoly::var(Variable::A).mul(&LaurentPoly::var(Variable::B)),
        ),
        RatFunc::from_poly(LaurentPoly::monomial(ExpVec::new(1, 0, 0), rat(-1))),
    ];
    let mut cases = 0;
    let mut check = |x: &RatFunc, s: u32, m: i64| {
        let lhs = match pochhammer(x, s, m) {
            Ok(v) => v,
            Err(_) => return, // zero factor in a negative extension
        };
        let prev = match pochhammer(x, s, m - 1) {
            Ok(v) => v,
            Err(_) => return,
        };
        let factor = &RatFunc::one() - &x.mul(&q_shift_monomial(s as i64 * (m - 1)));
        assert!(lhs.equivalent(&prev.mul(&factor)), "x={x} s={s} m={m}");
        cases += 1;
    };
    for x in &named {
        for s in [1u32, 2] {
            for m in -5..=8 {
                check(x, s, m);
            }
        }
    }
    let mut g = Gen::new();
    for _ in 0..1000 {
        let x = RatFunc::from_poly(LaurentPoly::signed_monomial(g.monomial()));
        let s = g.int(1, 3) as u32;
        let m = g.int(-5, 8);
        check(&x, s, m);
    }
    assert!(cases >= 1000);
}

#[test]
fn pochhammer_splitting_law() {
    // (x; q^s)_{m+r} = (x; q^s)_m * (x q^{sm}; q^s)_r
    let mut g = Gen::new();
    let mut cases = 0;
    for _ in 0..1100 {
        let x = RatFunc::from_poly(LaurentPoly::signed_monomial(g.monomial()));
        let s = g.int(1, 2) as u32;
        let m = g.int(-3, 5);
        let r = g.int(-3, 5);
        let full = match pochhammer(&x, s, m + r) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let left = match pochhammer(&x, s, m) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let shifted = x.mul(&q_shift_monomial(s as i64 * m));
        let right = match pochhammer(&shifted, s, r) {
            Ok(v) => v,
            Err(_) => continue,
        };
        assert!(full.equivalent(&left.mul(&right)), "x={x} s={s} m={m} r={r}");
        cases += 1;
    }
    assert!(cases >= 1000, "only {cases} cases survived pole filtering");
}

#[test]
fn equality_oracle_is_an_equivalence_relation() {
    let mut g = Gen::new();
    for _ in 0..1000 {
        let f = g.ratfunc();
        let u = g.nonzero_poly();
        let v = g.nonzero_poly();
        // Reflexivity.
        assert!(f.equivalent(&f));
        // f ~ f*(u/u) ~ f*(v/v): symmetry and transitivity across
        // differently-scaled representatives of the same function.
        let fu = RatFunc::new(f.num().mul(&u), f.den().mul(&u)).unwrap();
        let fv = RatFunc::new(f.num().mul(&v), f.den().mul(&v)).unwrap();
        assert!(f.equivalent(&fu) && fu.equivalent(&f));
        assert!(fu.equivalent(&fv));
        assert!(f.equivalent(&fv));
    }
}

#[test]
fn equality_oracle_rejects_perturbations() {
    let mut g = Gen::new();
    for _ in 0..1000 {
        let f = g.ratfunc();
        let bump = LaurentPoly::monomial(g.exps(), rat(g.int(1, 5)));
        let perturbed = RatFunc::new(f.num().add(&bump.mul(f.den())), f.den().clone()).unwrap();
        assert!(!f.equivalent(&perturbed));
    }
}

#[test]
fn modular_oracle_is_consistent_with_equality() {
    let mut g = Gen::new();
    let mut distinguished = 0;
    for _ in 0..250 {
        let f = g.ratfunc();
        let u = g.nonzero_poly();
        let equal = RatFunc::new(f.num().mul(&u), f.den().mul(&u)).unwrap();
        // Equal functions agree at every non-pole point.
        let mut checked = 0;
        while checked < 50 {
            let pt = g.point();
            match (f.eval_mod(&pt), equal.eval_mod(&pt)) {
                (Ok(x), Ok(y)) => {
                    assert_eq!(x, y);
                    checked += 1;
                }
                _ => continue,
            }
        }
        // A perturbed function must be caught within 50 sampled points.
        let bump = LaurentPoly::monomial(g.exps(), rat(g.int(1, 5)));
        let other = RatFunc::new(f.num().add(&bump.mul(f.den())), f.den().clone()).unwrap();
        let mut found = false;
        let mut checked = 0;
        while checked < 50 {
            let pt = g.point();
            match (f.eval_mod(&pt), other.eval_mod(&pt)) {
                (Ok(x), Ok(y)) => {
                    checked += 1;
                    if x != y {
                        found = true;
                        break;
                    }
                }
                _ => continue,
            }
        }
        assert!(found, "no distinguishing point for {f} vs {other}");
        distinguished += 1;
    }
    assert_eq!(distinguished, 250);
}

#[test]
fn serialization_round_trips_and_is_injective() {
    let mut g = Gen::new();
    for _ in 0..1000 {
        let f = g.ratfunc();
        let s = f.to_string();
        let back = RatFunc::parse(&s).unwrap_or_else(|e| panic!("parse '{s}': {e}"));
        // Structural equality of normalized representatives.
        assert_eq!(back, f, "round trip of '{s}'");
        assert!(back.equivalent(&f));
        assert_eq!(back.to_string(), s);
    }
    // Injectivity on normalized representatives: equal strings means equal
    // structures, checked via a hash set of rendered forms.
    let mut g = Gen::new();
    let mut seen: std::collections::HashMap<String, RatFunc> = Default::default();
    for _ in 0..1000 {
        let f = g.ratfunc();
        if let Some(prev) = seen.insert(f.to_string(), f.clone()) {
            assert_eq!(prev, f);
        }
    }
}

#[test]
fn zero_coefficients_are_never_stored() {
    let mut g = Gen::new();
    for _ in 0..500 {
        let p = g.poly().mul(&g.poly()).add(&g.poly());
        for (_, c) in p.iter() {
            assert!(!c.is_zero());
        }
    }
}
