//! Canonical text format for rational functions: monomials `c*q^i*a^j*b^k`
//! in canonical order joined by ` + `/` - `, numerator and denominator
//! parenthesized (bare only for integer constants), separated by `/`.
//! The format round-trips through [`parse_ratfunc`].

use std::fmt;

use num_traits::{One, Signed};
use thiserror::Error;

use super::{BigInt, BigRat, ExpVec, LaurentPoly, RatFunc, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at byte {pos}")]
pub struct TextError {
    pub message: String,
    pub pos: usize,
}

fn err<T>(message: impl Into<String>, pos: usize) -> Result<T, TextError> {
    Err(TextError {
        message: message.into(),
        pos,
    })
}

fn write_magnitude(f: &mut fmt::Formatter<'_>, c: &BigRat, e: &ExpVec) -> fmt::Result {
    let c = c.abs();
    let coeff_is_one = c.is_one();
    if !coeff_is_one || e.is_zero() {
        if c.is_integer() {
            write!(f, "{}", c.numer())?;
        } else {
            write!(f, "{}/{}", c.numer(), c.denom())?;
        }
        if !e.is_zero() {
            write!(f, "*")?;
        }
    }
    let mut first = true;
    for v in Variable::ALL {
        let ev = e.get(v);
        if ev == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if ev == 1 {
            write!(f, "{}", v)?;
        } else {
            write!(f, "{}^{}", v, ev)?;
        }
    }
    Ok(())
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &LaurentPoly) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (e, c)) in p.iter().enumerate() {
        if i == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        write_magnitude(f, c, e)?;
    }
    Ok(())
}

/// A side prints bare only when it is a single integer constant; everything
/// else is parenthesized so the separating `/` stays unambiguous.
fn side_is_bare(p: &LaurentPoly) -> bool {
    if p.is_zero() {
        return true;
    }
    if p.num_terms() != 1 {
        return false;
    }
    let (e, c) = p.iter().next().unwrap();
    e.is_zero() && c.is_integer()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self)
    }
}

pub(super) fn format_ratfunc(rf: &RatFunc, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, side) in [rf.num(), rf.den()].into_iter().enumerate() {
        if i == 1 {
            write!(f, "/")?;
        }
        if side_is_bare(side) {
            write_poly(f, side)?;
        } else {
            write!(f, "(")?;
            write_poly(f, side)?;
            write!(f, ")")?;
        }
    }
    Ok(())
}

pub(super) fn parse_ratfunc(s: &str) -> Result<RatFunc, TextError> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    let mut split = None;
    for (i, &ch) in bytes.iter().enumerate() {
        match ch {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return err("unbalanced ')'", i);
                }
            }
            b'/' if depth == 0 => {
                if split.is_some() {
                    return err("multiple top-level '/'", i);
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    if depth != 0 {
        return err("unbalanced '('", s.len());
    }
    let Some(pos) = split else {
        return err("missing '/' between numerator and denominator", s.len());
    };
    let num = parse_poly(&s[..pos], 0)?;
    let den = parse_poly(&s[pos + 1..], pos + 1)?;
    RatFunc::new(num, den).map_err(|_| TextError {
        message: "zero denominator".into(),
        pos,
    })
}

fn parse_poly(s: &str, base: usize) -> Result<LaurentPoly, TextError> {
    let t = s.trim();
    let inner = if t.starts_with('(') && t.ends_with(')') {
        &t[1..t.len() - 1]
    } else {
        t
    };
    // Whitespace is purely cosmetic in this format.
    let compact: String = inner.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return err("empty polynomial", base);
    }
    let mut result = LaurentPoly::zero();
    let mut cur = String::new();
    let mut cur_negative = false;
    let mut prev = '\0';
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && prev != '^' && prev != '*' {
            if cur.is_empty() {
                // (possibly repeated) sign in front of a term
                if ch == '-' {
                    cur_negative = !cur_negative;
                }
            } else {
                let (c, e) = parse_term(&cur, base)?;
                let c = if cur_negative { -c } else { c };
                result = result.add(&LaurentPoly::monomial(e, c));
                cur.clear();
                cur_negative = ch == '-';
            }
        } else {
            cur.push(ch);
        }
        prev = ch;
    }
    if cur.is_empty() {
        return err("trailing operator", base + compact.len());
    }
    let (c, e) = parse_term(&cur, base)?;
    let c = if cur_negative { -c } else { c };
    Ok(result.add(&LaurentPoly::monomial(e, c)))
}

fn parse_term(s: &str, pos: usize) -> Result<(BigRat, ExpVec), TextError> {
    if s.is_empty() {
        return err("empty term", pos);
    }
    let mut coeff = BigRat::from_integer(BigInt::from(1));
    let mut exps = ExpVec::ZERO;
    for factor in s.split('*') {
        let f = factor.trim();
        if f.is_empty() {
            return err("empty factor", pos);
        }
        let first = f.chars().next().unwrap();
        if first.is_ascii_digit() {
            // integer or integer/integer
            if let Some((n, d)) = f.split_once('/') {
                let n: BigInt = n.trim().parse().map_err(|_| TextError {
                    message: format!("bad numerator '{n}'"),
                    pos,
                })?;
                let d: BigInt = d.trim().parse().map_err(|_| TextError {
                    message: format!("bad denominator '{d}'"),
                    pos,
                })?;
                if d == BigInt::from(0) {
                    return err("zero coefficient denominator", pos);
                }
                coeff *= BigRat::new(n, d);
            } else {
                let n: BigInt = f.parse().map_err(|_| TextError {
                    message: format!("bad integer '{f}'"),
                    pos,
                })?;
                coeff *= BigRat::from_integer(n);
            }
        } else {
            let var = match first {
                'q' => Variable::Q,
                'a' => Variable::A,
                'b' => Variable::B,
                _ => return err(format!("unknown symbol '{first}'"), pos),
            };
            let rest = &f[1..];
            let e: i32 = if rest.is_empty() {
                1
            } else if let Some(stripped) = rest.strip_prefix('^') {
                stripped.trim().parse().map_err(|_| TextError {
                    message: format!("bad exponent '{stripped}'"),
                    pos,
                })?
            } else {
                return err(format!("unexpected '{rest}' after variable"), pos);
            };
            let mut add = ExpVec::ZERO;
            match var {
                Variable::Q => add.q = e,
                Variable::A => add.a = e,
                Variable::B => add.b = e,
            }
            exps = exps.add(add);
        }
    }
    Ok((coeff, exps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn q() -> LaurentPoly {
        LaurentPoly::var(Variable::Q)
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(RatFunc::one().to_string(), "1/1");
        let f = RatFunc::new(&LaurentPoly::one() + &q(), q()).unwrap();
        assert_eq!(f.to_string(), "(1 + q)/(q)");
        assert_eq!(RatFunc::zero().to_string(), "0/1");
    }

    #[test]
    fn negative_and_rational_coefficients() {
        let p = &LaurentPoly::constant(rat(-1)) + &q().scale(&crate::algebra::rat_frac(3, 2));
        let f = RatFunc::from_poly(p);
        assert_eq!(f.to_string(), "(-1 + 3/2*q)/1");
        let back = RatFunc::parse(&f.to_string()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn parse_round_trip_structural() {
        let a = LaurentPoly::var(Variable::A);
        let b = LaurentPoly::var(Variable::B);
        let num = &(&LaurentPoly::one() - &a.mul(&b)) + &q().pow(3).scale(&rat(7));
        let den = &q().mul(&a) - &b.mul(&q().pow(2)).scale(&rat(2));
        let f = RatFunc::new(num, den).unwrap();
        let s = f.to_string();
        let g = RatFunc::parse(&s).unwrap();
        assert_eq!(f, g);
        assert_eq!(s, g.to_string());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(RatFunc::parse("").is_err());
        assert!(RatFunc::parse("(1 + q)").is_err());
        assert!(RatFunc::parse("(1 + x)/(q)").is_err());
        assert!(RatFunc::parse("(1 + q)/(0)").is_err());
        assert!(RatFunc::parse("(1 + q)/(q))").is_err());
    }

    #[test]
    fn negative_exponents_round_trip() {
        let p = LaurentPoly::monomial(ExpVec::new(-2, 1, -1), rat(5));
        let f = RatFunc::new(LaurentPoly::one().sub(&p), LaurentPoly::one().add(&p)).unwrap();
        let g = RatFunc::parse(&f.to_string()).unwrap();
        assert_eq!(f, g);
    }
}
