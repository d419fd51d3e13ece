use std::fmt;

use super::modular::{inv_mod, mul_mod, FieldPoint, ModEvalError};
use super::{AlgebraError, BigRat, LaurentPoly, SubstMap};

/// A rational function `num/den` over the Laurent polynomial ring.
///
/// Normal form: the denominator is nonzero and monic in its canonical leading
/// term, numerator and denominator share no monomial factor `q^i a^j b^k`,
/// and the zero function is `0/1`. No polynomial GCD is ever computed;
/// equality is decided by cross multiplication.
///
/// Derived `PartialEq` is *structural* equality of normal forms. Use
/// [`RatFunc::equivalent`] for mathematical equality of the represented
/// functions (e.g. `(1-q^2)/(1-q)` vs `(1+q)/1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<RatFunc, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZeroFunction);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: LaurentPoly::zero(),
                den: LaurentPoly::one(),
            });
        }
        // Shared monomial content.
        let content = num
            .min_exps()
            .expect("nonzero")
            .min(den.min_exps().expect("nonzero"));
        let (mut num, mut den) = (num.shift_exps(content), den.shift_exps(content));
        // Monic denominator.
        let lc = den.leading_coeff().expect("nonzero").clone();
        if lc != super::rat(1) {
            let inv = BigRat::new(lc.denom().clone(), lc.numer().clone());
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> RatFunc {
        RatFunc::new(p, LaurentPoly::one()).expect("unit denominator")
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(LaurentPoly::one())
    }

    pub fn constant(c: BigRat) -> RatFunc {
        RatFunc::from_poly(LaurentPoly::constant(c))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = &self.num.mul(&other.den) + &other.num.mul(&self.den);
        let den = self.den.mul(&other.den);
        RatFunc::new(num, den).expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        let num = &self.num.mul(&other.den) - &other.num.mul(&self.den);
        let den = self.den.mul(&other.den);
        RatFunc::new(num, den).expect("product of nonzero denominators")
    }

    pub fn negate(&self) -> RatFunc {
        RatFunc {
            num: self.num.negate(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators")
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZeroFunction);
        }
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<RatFunc, AlgebraError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Integer power; negative exponents require a nonzero function.
    pub fn powi(&self, e: i64) -> Result<RatFunc, AlgebraError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mag = e.unsigned_abs() as u32;
        Ok(RatFunc {
            num: base.num.pow(mag),
            den: base.den.pow(mag),
        })
    }

    /// Mathematical equality: `f.num * g.den == g.num * f.den` as polynomials.
    /// This is the ground-truth oracle for symbolic verification.
    pub fn equivalent(&self, other: &RatFunc) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// The cross-multiplied difference `f.num*g.den - g.num*f.den`, which is
    /// zero exactly when the two functions are equal; serialized as a failure
    /// witness.
    pub fn cross_difference(&self, other: &RatFunc) -> LaurentPoly {
        &self.num.mul(&other.den) - &other.num.mul(&self.den)
    }

    pub fn substitute(&self, map: &SubstMap) -> Result<RatFunc, AlgebraError> {
        RatFunc::new(self.num.substitute(map), self.den.substitute(map))
    }

    /// `num(pt)/den(pt)` in `F_p`; [`ModEvalError::Pole`] when the denominator
    /// vanishes at the point.
    pub fn eval_mod(&self, pt: &FieldPoint) -> Result<u64, ModEvalError> {
        let d = self.den.eval_mod(pt)?;
        let d_inv = inv_mod(d, pt.prime).ok_or(ModEvalError::Pole)?;
        let n = self.num.eval_mod(pt)?;
        Ok(mul_mod(n, d_inv, pt.prime))
    }

    /// Parse the canonical text format produced by `Display`.
    pub fn parse(s: &str) -> Result<RatFunc, super::TextError> {
        super::text::parse_ratfunc(s)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::text::format_ratfunc(self, f)
    }
}

impl std::ops::Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::add(self, rhs)
    }
}

impl std::ops::Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::sub(self, rhs)
    }
}

impl std::ops::Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ExpVec, Variable};

    fn q() -> LaurentPoly {
        LaurentPoly::var(Variable::Q)
    }

    fn one() -> LaurentPoly {
        LaurentPoly::one()
    }

    #[test]
    fn add_same_denominator() {
        let f = RatFunc::new(one(), &one() - &q()).unwrap();
        let two_over = RatFunc::new(LaurentPoly::constant(rat(2)), &one() - &q()).unwrap();
        assert!(f.add(&f).equivalent(&two_over));
    }

    #[test]
    fn div_keeps_unreduced_representation() {
        let f = RatFunc::from_poly(&one() - &q().pow(2));
        let g = RatFunc::from_poly(&one() - &q());
        let h = f.div(&g).unwrap();
        // No forced cancellation: num stays quadratic...
        assert_eq!(h.num().num_terms(), 2);
        // ...but the value equals 1 + q under the equality oracle.
        assert!(h.equivalent(&RatFunc::from_poly(&one() + &q())));
    }

    #[test]
    fn recip_swaps_sides() {
        let a = LaurentPoly::var(Variable::A);
        let b = LaurentPoly::var(Variable::B);
        let f = RatFunc::new(&one() - &a, &one() - &b).unwrap();
        let r = f.recip().unwrap();
        assert!(r.equivalent(&RatFunc::new(&one() - &b, &one() - &a).unwrap()));
        assert!(!f.equivalent(&r));
        assert!(RatFunc::zero().recip().is_err());
    }

    #[test]
    fn eval_mod_examples() {
        // (1+q)/q at (p=13, q=3) -> 10
        let f = RatFunc::new(&one() + &q(), q()).unwrap();
        let pt = FieldPoint::new(13, 3, 1, 1);
        assert_eq!(f.eval_mod(&pt).unwrap(), 10);

        // 1/(1-q) at q=1 -> Pole
        let f = RatFunc::new(one(), &one() - &q()).unwrap();
        let pt = FieldPoint::new(13, 1, 1, 1);
        assert_eq!(f.eval_mod(&pt), Err(ModEvalError::Pole));
    }

    #[test]
    fn normalization_removes_shared_monomial_content() {
        // (q^2 + q^2 a) / (q a) -> (q + q a) / a
        let num = &LaurentPoly::monomial(ExpVec::new(2, 0, 0), rat(1))
            + &LaurentPoly::monomial(ExpVec::new(2, 1, 0), rat(1));
        let den = LaurentPoly::monomial(ExpVec::new(1, 1, 0), rat(1));
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.den(), &LaurentPoly::var(Variable::A));
        assert_eq!(f.num().min_exps().unwrap(), ExpVec::new(1, 0, 0));
    }

    #[test]
    fn normalization_makes_denominator_monic() {
        // 1 / (2 - 2q): leading term -2q gets scaled to coefficient 1.
        let den = &LaurentPoly::constant(rat(2)) - &q().scale(&rat(2));
        let f = RatFunc::new(one(), den).unwrap();
        assert_eq!(f.den().leading_coeff(), Some(&rat(1)));
        let g = RatFunc::new(one(), &one() - &q()).unwrap();
        assert!(f.equivalent(&g.mul(&RatFunc::constant(crate::algebra::rat_frac(1, 2)))));
    }

    #[test]
    fn zero_is_canonical() {
        let z = RatFunc::new(LaurentPoly::zero(), &one() - &q()).unwrap();
        assert_eq!(z, RatFunc::zero());
        assert!(RatFunc::new(one(), LaurentPoly::zero()).is_err());
    }
}
