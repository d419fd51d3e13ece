//! q-Pochhammer symbols (including the negative-length extension),
//! terminating basic hypergeometric series, and q-Catalan / Catalan numbers.
//!
//! All series here use a base of the form `q^s` with `s >= 1`. The symbol
//! `(x; q^s)_m` is the product `(1-x)(1-x q^s)...(1-x q^{s(m-1)})` for
//! `m >= 0`; for negative `m` it is extended by the recurrence
//! `(x;q)_m = (x;q)_{m-1} (1 - x q^{m-1})`, which forces
//! `(x; q^s)_{-m} = 1 / prod_{i=1..m} (1 - x q^{-s i})`.
//!
//! A terminating series is evaluated as the exact finite sum of its terms;
//! terms are produced incrementally from the ratio `term_k / term_{k-1}`, and
//! the running sum is kept over the common denominator so that the whole
//! computation stays in the polynomial ring until a single final division.

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::algebra::{
    add_mod, inv_mod, mul_mod, neg_mod, pow_mod, sub_mod, AlgebraError, BigInt, BigRat, ExpVec,
    FieldPoint, LaurentPoly, ModEvalError, RatFunc, Sign, SignedMonomial, SubstMap, Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QSeriesError {
    /// A factor of a negative-length Pochhammer product is the zero function,
    /// so the reciprocal extension does not exist.
    #[error("zero factor in negative-length Pochhammer product")]
    ZeroFactorInNegativeLength,
    /// A denominator Pochhammer factor of a series is identically zero.
    #[error("vanishing denominator factor in series")]
    VanishingDenominatorFactor,
    /// The termination length evaluated to a negative integer.
    #[error("series termination length is negative ({0})")]
    NegativeTermination(i64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Mod(#[from] ModEvalError),
}

/// An integer-linear form `c0 + cn*n + ck*k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AffineInt {
    pub c0: i64,
    pub cn: i64,
    pub ck: i64,
}

impl AffineInt {
    pub fn constant(c0: i64) -> Self {
        AffineInt { c0, cn: 0, ck: 0 }
    }

    pub fn n() -> Self {
        AffineInt { c0: 0, cn: 1, ck: 0 }
    }

    pub fn k() -> Self {
        AffineInt { c0: 0, cn: 0, ck: 1 }
    }

    pub fn eval(&self, n: i64, k: i64) -> i64 {
        self.c0 + self.cn * n + self.ck * k
    }

    pub fn is_constant(&self) -> bool {
        self.cn == 0 && self.ck == 0
    }

    pub fn uses_k(&self) -> bool {
        self.ck != 0
    }

    pub fn add(self, other: AffineInt) -> AffineInt {
        AffineInt {
            c0: self.c0 + other.c0,
            cn: self.cn + other.cn,
            ck: self.ck + other.ck,
        }
    }

    pub fn scale(self, m: i64) -> AffineInt {
        AffineInt {
            c0: self.c0 * m,
            cn: self.cn * m,
            ck: self.ck * m,
        }
    }

    /// Substitute `n -> n + delta`.
    pub fn shift_n(self, delta: i64) -> AffineInt {
        AffineInt {
            c0: self.c0 + self.cn * delta,
            ..self
        }
    }

    /// Exact division by an integer, when all coefficients are divisible.
    pub fn divide_exact(self, d: i64) -> Option<AffineInt> {
        if d == 0 || self.c0 % d != 0 || self.cn % d != 0 || self.ck % d != 0 {
            return None;
        }
        Some(AffineInt {
            c0: self.c0 / d,
            cn: self.cn / d,
            ck: self.ck / d,
        })
    }
}

impl std::fmt::Display for AffineInt {
    /// Canonical rendering, re-parseable by the catalog DSL: `n` terms first,
    /// then `k` terms, then the constant, e.g. `-2*n+1`, `k-1`, `0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut wrote = false;
        let mut part = |f: &mut std::fmt::Formatter<'_>, c: i64, sym: Option<&str>| {
            if c == 0 {
                return Ok(());
            }
            if wrote {
                write!(f, "{}", if c > 0 { "+" } else { "-" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            wrote = true;
            match sym {
                Some(s) => {
                    if c.abs() == 1 {
                        write!(f, "{s}")
                    } else {
                        write!(f, "{}*{s}", c.abs())
                    }
                }
                None => write!(f, "{}", c.abs()),
            }
        };
        part(f, self.cn, Some("n"))?;
        part(f, self.ck, Some("k"))?;
        part(f, self.c0, None)?;
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A signed monomial `±q^(c0+cn*n+ck*k) a^i b^j` — the shape of every series
/// parameter, argument, and closed-form prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineParam {
    pub sign: Sign,
    pub q_exp: AffineInt,
    pub a_exp: i32,
    pub b_exp: i32,
}

impl AffineParam {
    pub fn instantiate(&self, n: i64, k: i64) -> SignedMonomial {
        let q = self.q_exp.eval(n, k);
        SignedMonomial::new(
            self.sign,
            ExpVec::new(q as i32, self.a_exp, self.b_exp),
        )
    }

    pub fn to_poly(&self, n: i64, k: i64) -> LaurentPoly {
        LaurentPoly::signed_monomial(self.instantiate(n, k))
    }

    pub fn to_ratfunc(&self, n: i64, k: i64) -> RatFunc {
        RatFunc::from_poly(self.to_poly(n, k))
    }

    pub fn uses_k(&self) -> bool {
        self.q_exp.uses_k()
    }

    /// Substitute `n -> n + delta` in the q-exponent.
    pub fn shift_n(&self, delta: i64) -> AffineParam {
        AffineParam {
            q_exp: self.q_exp.shift_n(delta),
            ..*self
        }
    }

    /// Image under a monomial substitution, when it is again an affine
    /// parameter (the target's `a`/`b` exponents must not multiply an
    /// n- or k-dependent exponent).
    pub fn substitute(&self, map: &SubstMap) -> Option<AffineParam> {
        let mut sign = self.sign;
        let mut q_exp = AffineInt::default();
        let mut a_exp = 0i64;
        let mut b_exp = 0i64;
        let parts: [(Variable, AffineInt); 3] = [
            (Variable::Q, self.q_exp),
            (Variable::A, AffineInt::constant(self.a_exp as i64)),
            (Variable::B, AffineInt::constant(self.b_exp as i64)),
        ];
        for (v, e) in parts {
            let target = map.get(v).unwrap_or_else(|| SignedMonomial::var(v));
            if e.is_constant() {
                let c = e.c0;
                sign = sign.mul(target.sign.pow(c));
                q_exp = q_exp.add(AffineInt::constant(target.exps.q as i64 * c));
                a_exp += target.exps.a as i64 * c;
                b_exp += target.exps.b as i64 * c;
            } else {
                // n/k-dependent exponent: the target must be a pure power of q
                // with a sign that cannot depend on parity.
                if target.exps.a != 0 || target.exps.b != 0 {
                    return None;
                }
                if target.sign.is_negative() && (e.cn % 2 != 0 || e.ck % 2 != 0) {
                    return None;
                }
                sign = sign.mul(target.sign.pow(e.c0));
                q_exp = q_exp.add(e.scale(target.exps.q as i64));
            }
        }
        Some(AffineParam {
            sign,
            q_exp,
            a_exp: a_exp.to_i32()?,
            b_exp: b_exp.to_i32()?,
        })
    }
}

/// `(x; q^step)_len` for a rational-function argument.
pub fn pochhammer(x: &RatFunc, step: u32, len: i64) -> Result<RatFunc, QSeriesError> {
    let s = step as i64;
    let (pn, pd) = (x.num(), x.den());
    if len >= 0 {
        let mut num = LaurentPoly::one();
        for i in 0..len {
            let shift = LaurentPoly::monomial(ExpVec::new((s * i) as i32, 0, 0), crate::algebra::rat(1));
            num = num.mul(&pd.sub(&pn.mul(&shift)));
        }
        Ok(RatFunc::new(num, pd.pow(len as u32))?)
    } else {
        let m = len.unsigned_abs();
        let mut den = LaurentPoly::one();
        for i in 1..=m {
            let shift =
                LaurentPoly::monomial(ExpVec::new((-s * i as i64) as i32, 0, 0), crate::algebra::rat(1));
            let factor = pd.sub(&pn.mul(&shift));
            if factor.is_zero() {
                return Err(QSeriesError::ZeroFactorInNegativeLength);
            }
            den = den.mul(&factor);
        }
        Ok(RatFunc::new(pd.pow(m as u32), den)?)
    }
}

/// `(x_1, ..., x_m; q^step)_len`: the product of the individual symbols.
pub fn pochhammer_multi(xs: &[RatFunc], step: u32, len: i64) -> Result<RatFunc, QSeriesError> {
    let mut acc = RatFunc::one();
    for x in xs {
        acc = acc.mul(&pochhammer(x, step, len)?);
    }
    Ok(acc)
}

/// `(x; q^step)_len` evaluated in `F_p` at `x = x_val`, `q = pt.q`.
pub fn pochhammer_mod(
    x_val: u64,
    step: u32,
    len: i64,
    pt: &FieldPoint,
) -> Result<u64, QSeriesError> {
    let p = pt.prime;
    let qs = pow_mod(pt.q, step as u64, p);
    if len >= 0 {
        let mut acc = 1u64;
        let mut shift = 1u64;
        for _ in 0..len {
            acc = mul_mod(acc, sub_mod(1, mul_mod(x_val, shift, p), p), p);
            shift = mul_mod(shift, qs, p);
        }
        Ok(acc)
    } else {
        let qs_inv = inv_mod(qs, p).ok_or(ModEvalError::Pole)?;
        let mut acc = 1u64;
        let mut shift = qs_inv;
        for _ in 0..len.unsigned_abs() {
            let factor = sub_mod(1, mul_mod(x_val, shift, p), p);
            acc = mul_mod(acc, factor, p);
            shift = mul_mod(shift, qs_inv, p);
        }
        Ok(inv_mod(acc, p).ok_or(ModEvalError::Pole)?)
    }
}

/// A terminating basic hypergeometric series with base `q^step`: the sum over
/// `k = 0..termination` of
/// `(num_params; q^s)_k z^k / ((q^s; q^s)_k (den_params; q^s)_k)`.
///
/// The implicit `(q^s; q^s)_k` factor of the classical definition is always
/// included; parameter lists never mention it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiSeries {
    pub num_params: Vec<AffineParam>,
    pub den_params: Vec<AffineParam>,
    pub step: u32,
    pub argument: AffineParam,
    pub termination: AffineInt,
}

impl PhiSeries {
    /// The terminating-series invariant: some numerator parameter is exactly
    /// `+q^{-s*N}` with `N` the termination length, so every term with
    /// `k > N` contains a zero factor.
    pub fn check_termination(&self) -> bool {
        let want = self.termination.scale(-(self.step as i64));
        self.num_params.iter().any(|p| {
            p.sign == Sign::Plus && p.a_exp == 0 && p.b_exp == 0 && p.q_exp == want
        })
    }

    /// Derive the termination length from the parameter list (used for term
    /// families written without an explicit length).
    pub fn derive_termination(
        num_params: &[AffineParam],
        step: u32,
    ) -> Option<AffineInt> {
        num_params.iter().find_map(|p| {
            if p.sign == Sign::Plus && p.a_exp == 0 && p.b_exp == 0 {
                p.q_exp.scale(-1).divide_exact(step as i64)
            } else {
                None
            }
        })
    }

    /// Exact sum of the series at outer context `(n, k)`.
    ///
    /// Terms are accumulated by the term ratio, keeping the running sum and
    /// the running term over the common denominator so only one rational
    /// normalization happens at the end.
    pub fn sum(&self, n: i64, outer_k: i64) -> Result<RatFunc, QSeriesError> {
        let upper = self.termination.eval(n, outer_k);
        if upper < 0 {
            return Err(QSeriesError::NegativeTermination(upper));
        }
        let s = self.step as i64;
        let z = self.argument.to_poly(n, outer_k);
        let nums: Vec<SignedMonomial> =
            self.num_params.iter().map(|p| p.instantiate(n, outer_k)).collect();
        let dens: Vec<SignedMonomial> =
            self.den_params.iter().map(|p| p.instantiate(n, outer_k)).collect();

        let mut term_num = LaurentPoly::one();
        let mut sum_num = LaurentPoly::one();
        let mut den = LaurentPoly::one();
        for k in 1..=upper {
            let shift = ExpVec::new((s * (k - 1)) as i32, 0, 0);
            let mut ratio_num = LaurentPoly::one();
            for u in &nums {
                ratio_num = ratio_num.mul(&one_minus_shifted(*u, shift));
            }
            // implicit (q^s; q^s)_k factor
            let mut ratio_den = one_minus_shifted(
                SignedMonomial::new(Sign::Plus, ExpVec::new(s as i32, 0, 0)),
                ExpVec::new((s * (k - 1)) as i32, 0, 0),
            );
            for v in &dens {
                let factor = one_minus_shifted(*v, shift);
                if factor.is_zero() {
                    return Err(QSeriesError::VanishingDenominatorFactor);
                }
                ratio_den = ratio_den.mul(&factor);
            }
            term_num = term_num.mul(&ratio_num).mul(&z);
            sum_num = sum_num.mul(&ratio_den).add(&term_num);
            den = den.mul(&ratio_den);
        }
        Ok(RatFunc::new(sum_num, den)?)
    }

    /// The `idx`-th summand, computed from scratch as a quotient of
    /// Pochhammer products (the independent oracle for [`PhiSeries::sum`]).
    /// Negative indices return 0 by convention.
    pub fn term(&self, n: i64, outer_k: i64, idx: i64) -> Result<RatFunc, QSeriesError> {
        if idx < 0 {
            return Ok(RatFunc::zero());
        }
        let mut num = RatFunc::one();
        for p in &self.num_params {
            num = num.mul(&pochhammer(&p.to_ratfunc(n, outer_k), self.step, idx)?);
        }
        num = num.mul(
            &self
                .argument
                .to_ratfunc(n, outer_k)
                .powi(idx)
                .map_err(QSeriesError::Algebra)?,
        );
        let mut den = pochhammer(
            &RatFunc::from_poly(LaurentPoly::monomial(
                ExpVec::new(self.step as i32, 0, 0),
                crate::algebra::rat(1),
            )),
            self.step,
            idx,
        )?;
        for p in &self.den_params {
            den = den.mul(&pochhammer(&p.to_ratfunc(n, outer_k), self.step, idx)?);
        }
        Ok(num.div(&den).map_err(QSeriesError::Algebra)?)
    }

    /// Modular image of the sum at a field point, by the same term-ratio
    /// recurrence specialized to `F_p`. Never builds a symbolic value, so the
    /// cost is `O(termination * #params)` field operations.
    pub fn sum_mod(&self, n: i64, outer_k: i64, pt: &FieldPoint) -> Result<u64, QSeriesError> {
        let upper = self.termination.eval(n, outer_k);
        if upper < 0 {
            return Err(QSeriesError::NegativeTermination(upper));
        }
        let p = pt.prime;
        let z = param_value(&self.argument, n, outer_k, pt);
        let nums: Vec<u64> = self.num_params.iter().map(|x| param_value(x, n, outer_k, pt)).collect();
        let dens: Vec<u64> = self.den_params.iter().map(|x| param_value(x, n, outer_k, pt)).collect();
        let qs = pow_mod(pt.q, self.step as u64, p);

        let mut acc = 1u64;
        let mut term = 1u64;
        let mut shift = 1u64; // q^{s(k-1)}
        let mut qs_k = qs; // q^{sk}
        for _ in 1..=upper {
            let mut ratio_num = 1u64;
            for &u in &nums {
                ratio_num = mul_mod(ratio_num, sub_mod(1, mul_mod(u, shift, p), p), p);
            }
            let mut ratio_den = sub_mod(1, qs_k, p);
            for &v in &dens {
                ratio_den = mul_mod(ratio_den, sub_mod(1, mul_mod(v, shift, p), p), p);
            }
            let inv = inv_mod(ratio_den, p).ok_or(ModEvalError::Pole)?;
            term = mul_mod(mul_mod(term, mul_mod(ratio_num, z, p), p), inv, p);
            acc = add_mod(acc, term, p);
            shift = mul_mod(shift, qs, p);
            qs_k = mul_mod(qs_k, qs, p);
        }
        Ok(acc)
    }

    /// Modular image of the `idx`-th summand.
    pub fn term_mod(
        &self,
        n: i64,
        outer_k: i64,
        idx: i64,
        pt: &FieldPoint,
    ) -> Result<u64, QSeriesError> {
        if idx < 0 {
            return Ok(0);
        }
        let p = pt.prime;
        let mut num = 1u64;
        for x in &self.num_params {
            num = mul_mod(num, pochhammer_mod(param_value(x, n, outer_k, pt), self.step, idx, pt)?, p);
        }
        let zv = param_value(&self.argument, n, outer_k, pt);
        num = mul_mod(num, pow_mod(zv, idx as u64, p), p);
        let qs = pow_mod(pt.q, self.step as u64, p);
        let mut den = pochhammer_mod(qs, self.step, idx, pt)?;
        for x in &self.den_params {
            den = mul_mod(den, pochhammer_mod(param_value(x, n, outer_k, pt), self.step, idx, pt)?, p);
        }
        let inv = inv_mod(den, p).ok_or(ModEvalError::Pole)?;
        Ok(mul_mod(num, inv, p))
    }
}

fn param_value(p: &AffineParam, n: i64, k: i64, pt: &FieldPoint) -> u64 {
    let m = p.instantiate(n, k);
    pt.monomial_value(m.sign, m.exps)
}

/// `1 - (m * q^shift)` as a Laurent binomial.
fn one_minus_shifted(m: SignedMonomial, shift: ExpVec) -> LaurentPoly {
    let c = match m.sign {
        Sign::Plus => crate::algebra::rat(-1),
        Sign::Minus => crate::algebra::rat(1),
    };
    LaurentPoly::one().add(&LaurentPoly::monomial(m.exps.add(shift), c))
}

/// The q-Catalan number `C_m(q) = q^{2m} (-1/q; q^2)_m / (q^2; q^2)_m`,
/// optionally with `q -> -q` applied afterwards.
pub fn q_catalan(m: u64, negate_q: bool) -> RatFunc {
    let minus_inv_q = RatFunc::from_poly(LaurentPoly::monomial(
        ExpVec::new(-1, 0, 0),
        crate::algebra::rat(-1),
    ));
    let q_sq = RatFunc::from_poly(LaurentPoly::monomial(ExpVec::new(2, 0, 0), crate::algebra::rat(1)));
    let num = pochhammer(&minus_inv_q, 2, m as i64).expect("nonnegative length");
    let den = pochhammer(&q_sq, 2, m as i64).expect("nonnegative length");
    let prefactor = RatFunc::from_poly(LaurentPoly::monomial(
        ExpVec::new(2 * m as i32, 0, 0),
        crate::algebra::rat(1),
    ));
    let value = prefactor
        .mul(&num)
        .div(&den)
        .expect("(q^2;q^2)_m is nonzero");
    if negate_q {
        let map = SubstMap::new().with(
            Variable::Q,
            SignedMonomial::new(Sign::Minus, ExpVec::new(1, 0, 0)),
        );
        value.substitute(&map).expect("q -> -q is invertible")
    } else {
        value
    }
}

/// Modular image of [`q_catalan`]: `q -> -q` is evaluation at `p - q`.
pub fn q_catalan_mod(m: u64, negate_q: bool, pt: &FieldPoint) -> Result<u64, QSeriesError> {
    let p = pt.prime;
    let qv = if negate_q { neg_mod(pt.q, p) } else { pt.q };
    let local = FieldPoint::new(p, qv, pt.a, pt.b);
    let x = neg_mod(inv_mod(qv, p).ok_or(ModEvalError::Pole)?, p);
    let num = pochhammer_mod(x, 2, m as i64, &local)?;
    let qsq = mul_mod(qv, qv, p);
    let den = pochhammer_mod(qsq, 2, m as i64, &local)?;
    let den_inv = inv_mod(den, p).ok_or(ModEvalError::Pole)?;
    Ok(mul_mod(pow_mod(qv, 2 * m, p), mul_mod(num, den_inv, p), p))
}

/// The Catalan number `C_m = binom(2m, m) / (m+1)`, exactly.
pub fn catalan(m: u64) -> BigInt {
    let num = num_integer::binomial(BigInt::from(2 * m), BigInt::from(m));
    num / BigInt::from(m + 1)
}

/// `C_m mod p` (requires `m + 1 < p`).
pub fn catalan_mod(m: u64, prime: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    // binom(2m, m) = prod (m+i)/i for i in 1..=m
    for i in 1..=m {
        num = mul_mod(num, (m + i) % prime, prime);
        den = mul_mod(den, i % prime, prime);
    }
    den = mul_mod(den, (m + 1) % prime, prime);
    mul_mod(num, inv_mod(den, prime).expect("m+1 < p"), prime)
}

/// Convenience: the rational constant `c` as a RatFunc.
pub fn rat_const(c: BigRat) -> RatFunc {
    RatFunc::constant(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn var(v: Variable) -> RatFunc {
        RatFunc::from_poly(LaurentPoly::var(v))
    }

    fn q_pow(e: i32) -> RatFunc {
        RatFunc::from_poly(LaurentPoly::monomial(ExpVec::new(e, 0, 0), rat(1)))
    }

    #[test]
    fn pochhammer_basic() {
        // (a; q^2)_2 = (1-a)(1-a q^2)
        let a = var(Variable::A);
        let got = pochhammer(&a, 2, 2).unwrap();
        let one = RatFunc::one();
        let expected = (&one - &a).mul(&(&one - &a.mul(&q_pow(2))));
        assert!(got.equivalent(&expected));

        // (a; q)_0 = 1
        assert!(pochhammer(&a, 1, 0).unwrap().equivalent(&RatFunc::one()));

        // (b; q)_{-1} = 1/(1 - b/q)
        let b = var(Variable::B);
        let got = pochhammer(&b, 1, -1).unwrap();
        let expected = (&RatFunc::one() - &b.mul(&q_pow(-1))).recip().unwrap();
        assert!(got.equivalent(&expected));
    }

    #[test]
    fn pochhammer_negative_zero_factor() {
        // (q^2; q^2)_{-1} has the factor 1 - q^2 q^{-2} = 0.
        let qsq = q_pow(2);
        assert_eq!(
            pochhammer(&qsq, 2, -1),
            Err(QSeriesError::ZeroFactorInNegativeLength)
        );
    }

    #[test]
    fn pochhammer_multi_single_factors() {
        // (a, b, -q; q)_1 = (1-a)(1-b)(1+q)
        let xs = [
            var(Variable::A),
            var(Variable::B),
            RatFunc::from_poly(LaurentPoly::monomial(ExpVec::new(1, 0, 0), rat(-1))),
        ];
        let got = pochhammer_multi(&xs, 1, 1).unwrap();
        let one = RatFunc::one();
        let q = var(Variable::Q);
        let expected = (&one - &xs[0]).mul(&(&one - &xs[1])).mul(&(&one + &q));
        assert!(got.equivalent(&expected));
        assert!(pochhammer_multi(&[], 1, 5).unwrap().equivalent(&one));
    }

    #[test]
    fn catalan_small_values() {
        assert_eq!(catalan(0), BigInt::from(1));
        assert_eq!(catalan(1), BigInt::from(1));
        assert_eq!(catalan(3), BigInt::from(5));
        // convolution-recurrence oracle
        let mut c = vec![BigInt::from(1)];
        for m in 0..30usize {
            let next: BigInt = (0..=m).map(|i| &c[i] * &c[m - i]).sum();
            c.push(next);
        }
        for (m, expected) in c.iter().enumerate() {
            assert_eq!(&catalan(m as u64), expected, "C_{m}");
        }
    }

    #[test]
    fn q_catalan_small_values() {
        assert!(q_catalan(0, false).equivalent(&RatFunc::one()));
        // m=1: q^2 (1 + 1/q) / (1 - q^2), equal to q/(1-q)
        let one = RatFunc::one();
        let q = var(Variable::Q);
        let expected = q.div(&(&one - &q)).unwrap();
        assert!(q_catalan(1, false).equivalent(&expected));
        // m=1 with q -> -q: -q/(1+q)
        let expected = q.negate().div(&(&one + &q)).unwrap();
        assert!(q_catalan(1, true).equivalent(&expected));
    }

    #[test]
    fn q_catalan_denominator_is_exactly_qq_product() {
        // degree bookkeeping: the normalized denominator of C_m(1,q) is the
        // monic (q^2;q^2)_m, so in particular it divides (q^2;q^2)_m.
        for m in 0..6u64 {
            let c = q_catalan(m, false);
            let qq = pochhammer(&q_pow(2), 2, m as i64).unwrap();
            let monic = RatFunc::new(LaurentPoly::one(), qq.num().clone()).unwrap();
            assert_eq!(c.den(), monic.den(), "m={m}");
        }
    }

    #[test]
    fn catalan_mod_matches_exact() {
        let p = crate::algebra::DEFAULT_PRIME;
        for m in 0..40u64 {
            let exact = catalan(m);
            let expected = crate::algebra::LaurentPoly::constant(BigRat::from_integer(exact))
                .eval_mod(&FieldPoint::new(p, 1, 1, 1))
                .unwrap();
            assert_eq!(catalan_mod(m, p), expected);
        }
    }
}
