use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::modular::{add_mod, inv_mod, mul_mod, pow_mod_signed, FieldPoint, ModEvalError};
use super::{BigInt, BigRat, ExpVec, Sign, SignedMonomial, SubstMap, Variable};

/// Above this output-box volume the dense multiplication buffer is not used.
const DENSE_CELL_LIMIT: u128 = 1 << 23;
/// Coefficient denominators are cleared before dense multiplication; give up
/// on the fast path if their lcm grows past this.
const DENSE_LCM_LIMIT: u64 = 1 << 20;

/// A sparse Laurent polynomial in `q, a, b` with exact rational coefficients.
///
/// Stored coefficients are never zero, and the term map iterates in the
/// canonical (graded-lex) exponent order, so structural equality coincides
/// with mathematical equality and printing is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<ExpVec, BigRat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(super::rat(1))
    }

    pub fn constant(c: BigRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ExpVec::ZERO, c);
        }
        LaurentPoly { terms }
    }

    pub fn monomial(exps: ExpVec, c: BigRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { terms }
    }

    pub fn signed_monomial(m: SignedMonomial) -> Self {
        let c = match m.sign {
            Sign::Plus => super::rat(1),
            Sign::Minus => super::rat(-1),
        };
        LaurentPoly::monomial(m.exps, c)
    }

    pub fn var(v: Variable) -> Self {
        LaurentPoly::signed_monomial(SignedMonomial::var(v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&ExpVec, &BigRat)> {
        self.terms.iter()
    }

    /// The coefficient of the canonical leading (maximal) term; `None` for 0.
    pub fn leading_coeff(&self) -> Option<&BigRat> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Componentwise minimum of all exponent vectors; `None` for 0.
    pub fn min_exps(&self) -> Option<ExpVec> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        Some(it.fold(first, |acc, e| acc.min(*e)))
    }

    fn max_exps(&self) -> Option<ExpVec> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        Some(it.fold(first, |acc, e| {
            ExpVec::new(acc.q.max(e.q), acc.a.max(e.a), acc.b.max(e.b))
        }))
    }

    /// Divide by the monomial `q^s.q a^s.a b^s.b` (shift all exponents).
    pub fn shift_exps(&self, s: ExpVec) -> LaurentPoly {
        if s.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.sub(s), c.clone()))
                .collect(),
        }
    }

    /// Multiply every coefficient by a nonzero rational.
    pub fn scale(&self, c: &BigRat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    fn add_assign_term(terms: &mut BTreeMap<ExpVec, BigRat>, e: ExpVec, c: BigRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let (big, small) = if self.num_terms() >= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        let mut terms = big.terms.clone();
        for (e, c) in &small.terms {
            Self::add_assign_term(&mut terms, *e, c.clone());
        }
        LaurentPoly { terms }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::add_assign_term(&mut terms, *e, -c.clone());
        }
        LaurentPoly { terms }
    }

    pub fn negate(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        // Fast paths for monomial factors.
        if self.num_terms() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            return LaurentPoly {
                terms: other
                    .terms
                    .iter()
                    .map(|(eo, co)| (eo.add(*e), co * c))
                    .collect(),
            };
        }
        if other.num_terms() == 1 {
            return other.mul(self);
        }
        if let Some(result) = self.try_mul_dense(other) {
            return result;
        }
        self.mul_sparse(other)
    }

    fn mul_sparse(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut acc: HashMap<ExpVec, BigRat> =
            HashMap::with_capacity(self.num_terms() + other.num_terms());
        let (outer, inner) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        for (e1, c1) in &outer.terms {
            for (e2, c2) in &inner.terms {
                let e = e1.add(*e2);
                let prod = c1 * c2;
                use std::collections::hash_map::Entry;
                match acc.entry(e) {
                    Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() += prod;
                    }
                }
            }
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Dense multiplication over an i128 grid after clearing denominators.
    /// Returns `None` (fall back to the sparse path) if coefficients do not
    /// fit, the output box is too large, or any accumulation would overflow.
    fn try_mul_dense(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        if self.num_terms().saturating_mul(other.num_terms()) < 2048 {
            return None; // sparse is fine at this size
        }
        let (fmin, fmax) = (self.min_exps()?, self.max_exps()?);
        let (gmin, gmax) = (other.min_exps()?, other.max_exps()?);
        let lo = fmin.add(gmin);
        let hi = fmax.add(gmax);
        let sq = (hi.q - lo.q) as u128 + 1;
        let sa = (hi.a - lo.a) as u128 + 1;
        let sb = (hi.b - lo.b) as u128 + 1;
        let vol = sq.checked_mul(sa)?.checked_mul(sb)?;
        if vol > DENSE_CELL_LIMIT {
            return None;
        }
        let f = ScaledIntTerms::build(self)?;
        let g = ScaledIntTerms::build(other)?;

        let (sa, sb) = (sa as usize, sb as usize);
        let mut grid: Vec<i128> = vec![0; vol as usize];
        for (ef, cf) in &f.terms {
            let cf = *cf as i128;
            let base = ef.sub(lo);
            for (eg, cg) in &g.terms {
                let idx = ((base.q + eg.q) as usize * sa + (base.a + eg.a) as usize) * sb
                    + (base.b + eg.b) as usize;
                let cell = &mut grid[idx];
                *cell = cell.checked_add(cf * *cg as i128)?;
            }
        }
        let denom = BigInt::from(f.denom) * BigInt::from(g.denom);
        let mut terms = BTreeMap::new();
        for (idx, c) in grid.into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            let bq = idx / (sa * sb);
            let ba = (idx / sb) % sa;
            let bb = idx % sb;
            let e = ExpVec::new(lo.q + bq as i32, lo.a + ba as i32, lo.b + bb as i32);
            terms.insert(e, BigRat::new(BigInt::from(c), denom.clone()));
        }
        Some(LaurentPoly { terms })
    }

    pub fn pow(&self, exp: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Apply a ring homomorphism determined by mapping each variable to a
    /// signed Laurent monomial.
    pub fn substitute(&self, map: &SubstMap) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut exps = ExpVec::ZERO;
            let mut sign = Sign::Plus;
            for v in Variable::ALL {
                let ev = e.get(v);
                match map.get(v) {
                    None => {
                        exps = exps.add(SignedMonomial::var(v).exps.scale(ev));
                    }
                    Some(m) => {
                        exps = exps.add(m.exps.scale(ev));
                        sign = sign.mul(m.sign.pow(ev as i64));
                    }
                }
            }
            let coeff = if sign.is_negative() { -c.clone() } else { c.clone() };
            Self::add_assign_term(&mut terms, exps, coeff);
        }
        LaurentPoly { terms }
    }

    /// Exact image under the evaluation homomorphism into `F_p`. Rational
    /// coefficients reduce via the modular inverse of their denominators.
    pub fn eval_mod(&self, pt: &FieldPoint) -> Result<u64, ModEvalError> {
        let p = pt.prime;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let num = bigint_mod(c.numer(), p);
            let den = bigint_mod(c.denom(), p);
            let den_inv = inv_mod(den, p).ok_or(ModEvalError::DenominatorDivisibleByPrime)?;
            let coeff = mul_mod(num, den_inv, p);
            let mono = mul_mod(
                mul_mod(
                    pow_mod_signed(pt.q, e.q as i64, p),
                    pow_mod_signed(pt.a, e.a as i64, p),
                    p,
                ),
                pow_mod_signed(pt.b, e.b as i64, p),
                p,
            );
            acc = add_mod(acc, mul_mod(coeff, mono, p), p);
        }
        Ok(acc)
    }
}

/// Residue of a (possibly negative) big integer mod `p`.
pub(crate) fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let m = (x % BigInt::from(p)).to_i64().expect("|x mod p| < p fits i64");
    if m < 0 {
        (m + p as i64) as u64
    } else {
        m as u64
    }
}

/// A polynomial with denominators cleared to i64 coefficients.
struct ScaledIntTerms {
    terms: Vec<(ExpVec, i64)>,
    denom: u64,
}

impl ScaledIntTerms {
    fn build(p: &LaurentPoly) -> Option<ScaledIntTerms> {
        let mut lcm = BigInt::from(1u32);
        for (_, c) in p.iter() {
            lcm = lcm.lcm(c.denom());
            if lcm > BigInt::from(DENSE_LCM_LIMIT) {
                return None;
            }
        }
        let denom = lcm.to_u64()?;
        let mut terms = Vec::with_capacity(p.num_terms());
        for (e, c) in p.iter() {
            let scaled = c * BigRat::from_integer(lcm.clone());
            debug_assert!(scaled.is_integer());
            let v = scaled.to_integer().to_i64()?;
            // Keep products strictly inside i128.
            if v.unsigned_abs() > (1 << 62) {
                return None;
            }
            terms.push((*e, v));
        }
        Some(ScaledIntTerms { terms, denom })
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.negate()
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                LaurentPoly::$method(self, rhs)
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn q() -> LaurentPoly {
        LaurentPoly::var(Variable::Q)
    }

    #[test]
    fn difference_of_squares() {
        let one = LaurentPoly::one();
        let lhs = (&one - &q()).mul(&(&one + &q()));
        let expected = &one - &q().mul(&q());
        assert_eq!(lhs, expected);
    }

    #[test]
    fn additive_inverse_gives_empty_map() {
        let one = LaurentPoly::one();
        let p = &one - &q().pow(2);
        let m = &q().pow(2) - &one;
        assert!(p.add(&m).is_zero());
    }

    #[test]
    fn binomial_square() {
        let s = LaurentPoly::one().add(&q());
        let sq = s.pow(2);
        assert_eq!(sq.num_terms(), 3);
        let terms: Vec<_> = sq.iter().map(|(e, c)| (*e, c.clone())).collect();
        assert_eq!(terms[0], (ExpVec::ZERO, rat(1)));
        assert_eq!(terms[1], (ExpVec::new(1, 0, 0), rat(2)));
        assert_eq!(terms[2], (ExpVec::new(2, 0, 0), rat(1)));
    }

    #[test]
    fn substitute_examples() {
        let one = LaurentPoly::one();
        // q -> q^{-1} in 1 - q^2  =>  1 - q^{-2}
        let p = &one - &q().pow(2);
        let map = SubstMap::new().with(
            Variable::Q,
            SignedMonomial::new(Sign::Plus, ExpVec::new(-1, 0, 0)),
        );
        let expected = &one - &LaurentPoly::monomial(ExpVec::new(-2, 0, 0), rat(1));
        assert_eq!(p.substitute(&map), expected);

        // q -> -q in 1 + q + q^2  =>  1 - q + q^2
        let p = one.add(&q()).add(&q().pow(2));
        let map = SubstMap::new().with(
            Variable::Q,
            SignedMonomial::new(Sign::Minus, ExpVec::new(1, 0, 0)),
        );
        let expected = LaurentPoly::one().sub(&q()).add(&q().pow(2));
        assert_eq!(p.substitute(&map), expected);

        // b -> b q^2 in 1 - b/q^2  =>  1 - b
        let p = LaurentPoly::one().sub(&LaurentPoly::monomial(ExpVec::new(-2, 0, 1), rat(1)));
        let map = SubstMap::new().with(
            Variable::B,
            SignedMonomial::new(Sign::Plus, ExpVec::new(2, 0, 1)),
        );
        let expected = LaurentPoly::one().sub(&LaurentPoly::var(Variable::B));
        assert_eq!(p.substitute(&map), expected);
    }

    #[test]
    fn eval_mod_examples() {
        // 1 - q^2 at (p=101, q=10) -> 2
        let p = LaurentPoly::one().sub(&q().pow(2));
        let pt = FieldPoint::new(101, 10, 1, 1);
        assert_eq!(p.eval_mod(&pt).unwrap(), 2);

        // q^{-1} at (p=7, q=3) -> 5
        let p = LaurentPoly::monomial(ExpVec::new(-1, 0, 0), rat(1));
        let pt = FieldPoint::new(7, 3, 1, 1);
        assert_eq!(p.eval_mod(&pt).unwrap(), 5);

        // (1/2) q at (p=5, q=2) -> 1
        let p = LaurentPoly::monomial(ExpVec::new(1, 0, 0), crate::algebra::rat_frac(1, 2));
        let pt = FieldPoint::new(5, 2, 1, 1);
        assert_eq!(p.eval_mod(&pt).unwrap(), 1);

        // denominator divisible by p
        let p5 = LaurentPoly::constant(crate::algebra::rat_frac(1, 5));
        assert_eq!(
            p5.eval_mod(&FieldPoint::new(5, 2, 1, 1)),
            Err(ModEvalError::DenominatorDivisibleByPrime)
        );
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        // Build two polynomials big enough to trigger the dense path.
        let mut f = LaurentPoly::one();
        let mut g = LaurentPoly::one();
        for i in 0..7 {
            f = f.mul(&(&LaurentPoly::one() - &LaurentPoly::monomial(ExpVec::new(i, 1, 0), rat(1))));
            g = g.mul(&(&LaurentPoly::one() + &LaurentPoly::monomial(ExpVec::new(1, 0, i), rat(1))));
        }
        let dense = f.try_mul_dense(&g);
        let sparse = f.mul_sparse(&g);
        if let Some(d) = dense {
            assert_eq!(d, sparse);
        }
        assert_eq!(f.mul(&g), sparse);
    }
}
