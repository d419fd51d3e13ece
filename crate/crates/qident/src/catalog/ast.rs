//! Expression trees for identities whose exponents are affine in `n` and the
//! innermost summation index, with exact and modular evaluators.

use std::fmt;

use thiserror::Error;

use crate::algebra::{
    inv_mod, mul_mod, pow_mod, sub_mod, AlgebraError, BigRat, FieldPoint, LaurentPoly,
    ModEvalError, RatFunc, SubstMap, Variable,
};
use crate::qseries::{
    catalan, catalan_mod, pochhammer, pochhammer_mod, q_catalan, q_catalan_mod, AffineInt,
    AffineParam, PhiSeries, QSeriesError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    QSeries(#[from] QSeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{node} index evaluated to {value} (must be nonnegative)")]
    NegativeIndex { node: &'static str, value: i64 },
    #[error("spec '{id}' instantiated at n={n}, below its range n >= {n_min}")]
    InstantiationBelowRange { id: String, n: i64, n_min: i64 },
}

impl From<ModEvalError> for EvalError {
    fn from(e: ModEvalError) -> Self {
        EvalError::QSeries(QSeriesError::Mod(e))
    }
}

impl EvalError {
    /// True when the error only signals a bad evaluation point (the modular
    /// verifier resamples on these).
    pub fn is_pole(&self) -> bool {
        matches!(
            self,
            EvalError::QSeries(QSeriesError::Mod(ModEvalError::Pole))
        )
    }
}

/// An expression over `q, a, b` with affine integer slots.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// A rational constant.
    Const(BigRat),
    Var(Variable),
    /// A signed monomial with affine q-exponent (no surface syntax; produced
    /// programmatically, e.g. by spec mutation in tests).
    Monomial(AffineParam),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, AffineInt),
    /// `(arg; q^step)_len`
    Poch {
        arg: AffineParam,
        step: u32,
        len: AffineInt,
    },
    /// A terminating series, summed over its own internal index.
    Phi(PhiSeries),
    /// The `index`-th summand of a series term family.
    PhiTerm { series: PhiSeries, index: AffineInt },
    /// q-Catalan number, optionally with `q -> -q` applied.
    QCatalan { index: AffineInt, negate_q: bool },
    Catalan(AffineInt),
    Sum {
        var: String,
        lo: AffineInt,
        hi: AffineInt,
        body: Box<Expr>,
    },
    /// Lazy substitution: evaluate `inner`, then apply the monomial map.
    Subst { map: SubstMap, inner: Box<Expr> },
}

impl Expr {
    pub fn constant(c: i64) -> Expr {
        Expr::Const(crate::algebra::rat(c))
    }

    /// Exact evaluation at `n` (and bound index `k` where applicable).
    pub fn eval(&self, n: i64, k: Option<i64>) -> Result<RatFunc, EvalError> {
        let kk = k.unwrap_or(0);
        match self {
            Expr::Const(c) => Ok(RatFunc::constant(c.clone())),
            Expr::Var(v) => Ok(RatFunc::from_poly(LaurentPoly::var(*v))),
            Expr::Monomial(p) => Ok(p.to_ratfunc(n, kk)),
            Expr::Add(x, y) => Ok(x.eval(n, k)?.add(&y.eval(n, k)?)),
            Expr::Sub(x, y) => Ok(x.eval(n, k)?.sub(&y.eval(n, k)?)),
            Expr::Mul(x, y) => Ok(x.eval(n, k)?.mul(&y.eval(n, k)?)),
            Expr::Div(x, y) => Ok(x.eval(n, k)?.div(&y.eval(n, k)?)?),
            Expr::Pow(x, e) => Ok(x.eval(n, k)?.powi(e.eval(n, kk))?),
            Expr::Poch { arg, step, len } => Ok(pochhammer(
                &arg.to_ratfunc(n, kk),
                *step,
                len.eval(n, kk),
            )?),
            Expr::Phi(series) => Ok(series.sum(n, kk)?),
            Expr::PhiTerm { series, index } => Ok(series.term(n, kk, index.eval(n, kk))?),
            Expr::QCatalan { index, negate_q } => {
                let m = index.eval(n, kk);
                if m < 0 {
                    return Err(EvalError::NegativeIndex { node: "qcat", value: m });
                }
                Ok(q_catalan(m as u64, *negate_q))
            }
            Expr::Catalan(index) => {
                let m = index.eval(n, kk);
                if m < 0 {
                    return Err(EvalError::NegativeIndex { node: "cat", value: m });
                }
                Ok(RatFunc::constant(BigRat::from_integer(catalan(m as u64))))
            }
            Expr::Sum { lo, hi, body, .. } => {
                let lo = lo.eval(n, kk);
                let hi = hi.eval(n, kk);
                let mut acc = RatFunc::zero();
                for j in lo..=hi {
                    acc = acc.add(&body.eval(n, Some(j))?);
                }
                Ok(acc)
            }
            Expr::Subst { map, inner } => Ok(inner.eval(n, k)?.substitute(map)?),
        }
    }

    /// Image of the expression in `F_p` at a field point, without building
    /// any symbolic value (series go through the modular term recurrence).
    pub fn eval_mod(&self, n: i64, k: Option<i64>, pt: &FieldPoint) -> Result<u64, EvalError> {
        let p = pt.prime;
        let kk = k.unwrap_or(0);
        match self {
            Expr::Const(c) => Ok(LaurentPoly::constant(c.clone()).eval_mod(pt)?),
            Expr::Var(v) => Ok(match v {
                Variable::Q => pt.q,
                Variable::A => pt.a,
                Variable::B => pt.b,
            }),
            Expr::Monomial(par) => {
                let m = par.instantiate(n, kk);
                Ok(pt.monomial_value(m.sign, m.exps))
            }
            Expr::Add(x, y) => Ok(crate::algebra::add_mod(
                x.eval_mod(n, k, pt)?,
                y.eval_mod(n, k, pt)?,
                p,
            )),
            Expr::Sub(x, y) => Ok(sub_mod(x.eval_mod(n, k, pt)?, y.eval_mod(n, k, pt)?, p)),
            Expr::Mul(x, y) => Ok(mul_mod(x.eval_mod(n, k, pt)?, y.eval_mod(n, k, pt)?, p)),
            Expr::Div(x, y) => {
                let d = y.eval_mod(n, k, pt)?;
                let inv = inv_mod(d, p).ok_or(ModEvalError::Pole)?;
                Ok(mul_mod(x.eval_mod(n, k, pt)?, inv, p))
            }
            Expr::Pow(x, e) => {
                let e = e.eval(n, kk);
                let v = x.eval_mod(n, k, pt)?;
                if e >= 0 {
                    Ok(pow_mod(v, e as u64, p))
                } else {
                    let inv = inv_mod(v, p).ok_or(ModEvalError::Pole)?;
                    Ok(pow_mod(inv, e.unsigned_abs(), p))
                }
            }
            Expr::Poch { arg, step, len } => {
                let m = arg.instantiate(n, kk);
                let v = pt.monomial_value(m.sign, m.exps);
                Ok(pochhammer_mod(v, *step, len.eval(n, kk), pt)?)
            }
            Expr::Phi(series) => Ok(series.sum_mod(n, kk, pt)?),
            Expr::PhiTerm { series, index } => Ok(series.term_mod(n, kk, index.eval(n, kk), pt)?),
            Expr::QCatalan { index, negate_q } => {
                let m = index.eval(n, kk);
                if m < 0 {
                    return Err(EvalError::NegativeIndex { node: "qcat", value: m });
                }
                Ok(q_catalan_mod(m as u64, *negate_q, pt)?)
            }
            Expr::Catalan(index) => {
                let m = index.eval(n, kk);
                if m < 0 {
                    return Err(EvalError::NegativeIndex { node: "cat", value: m });
                }
                Ok(catalan_mod(m as u64, p))
            }
            Expr::Sum { lo, hi, body, .. } => {
                let lo = lo.eval(n, kk);
                let hi = hi.eval(n, kk);
                let mut acc = 0u64;
                for j in lo..=hi {
                    acc = crate::algebra::add_mod(acc, body.eval_mod(n, Some(j), pt)?, p);
                }
                Ok(acc)
            }
            Expr::Subst { map, inner } => inner.eval_mod(n, k, &mapped_point(map, pt)),
        }
    }

    /// Walk the tree.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) | Expr::Div(x, y) => {
                x.visit(f);
                y.visit(f);
            }
            Expr::Pow(x, _) => x.visit(f),
            Expr::Sum { body, .. } => body.visit(f),
            Expr::Subst { inner, .. } => inner.visit(f),
            _ => {}
        }
    }

    /// True when evaluation can only produce a rational constant (no
    /// variable ever enters): the shape of an integer identity.
    pub fn is_constant_valued(&self) -> bool {
        let mut constant = true;
        self.visit(&mut |e| match e {
            Expr::Var(_)
            | Expr::Monomial(_)
            | Expr::Poch { .. }
            | Expr::Phi(_)
            | Expr::PhiTerm { .. }
            | Expr::QCatalan { .. } => constant = false,
            _ => {}
        });
        constant
    }
}

/// Transport of an evaluation point through a monomial substitution:
/// evaluating `subst(map, f)` at `pt` equals evaluating `f` at the mapped
/// point whose coordinates are the values of the target monomials.
pub fn mapped_point(map: &SubstMap, pt: &FieldPoint) -> FieldPoint {
    let coord = |v: Variable, orig: u64| -> u64 {
        match map.get(v) {
            None => orig,
            Some(m) => pt.monomial_value(m.sign, m.exps),
        }
    };
    FieldPoint::new(
        pt.prime,
        coord(Variable::Q, pt.q),
        coord(Variable::A, pt.a),
        coord(Variable::B, pt.b),
    )
}

// ---------------------------------------------------------------------------
// Rendering back to DSL syntax
// ---------------------------------------------------------------------------

/// Canonical DSL rendering of an affine parameter, e.g. `q^(1-2*n)/(a*b)`,
/// `a*b*q^3`, `-q`, `b/q^2`.
pub fn format_param(p: &AffineParam, out: &mut String) {
    use std::fmt::Write;
    if p.sign.is_negative() {
        out.push('-');
    }
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    let e = p.q_exp;
    if !e.is_constant() {
        num.push(format!("q^({e})"));
    } else if e.c0 == 1 {
        num.push("q".into());
    } else if e.c0 > 1 {
        num.push(format!("q^{}", e.c0));
    } else if e.c0 < 0 {
        if e.c0 == -1 {
            den.push("q".into());
        } else {
            den.push(format!("q^{}", -e.c0));
        }
    }
    for (sym, e) in [("a", p.a_exp), ("b", p.b_exp)] {
        if e == 1 {
            num.push(sym.into());
        } else if e > 1 {
            num.push(format!("{sym}^{e}"));
        } else if e == -1 {
            den.push(sym.into());
        } else if e < 0 {
            den.push(format!("{sym}^{}", -e));
        }
    }
    if num.is_empty() {
        out.push('1');
    } else {
        out.push_str(&num.join("*"));
    }
    match den.len() {
        0 => {}
        1 => {
            let _ = write!(out, "/{}", den[0]);
        }
        _ => {
            let _ = write!(out, "/({})", den.join("*"));
        }
    }
}

fn format_affine_slot(e: &AffineInt) -> String {
    e.to_string()
}

/// Exponent position: bare for a nonnegative integer or a single `n`/`k`,
/// parenthesized otherwise.
fn format_affine_exponent(e: &AffineInt) -> String {
    if e.is_constant() && e.c0 >= 0 {
        return e.c0.to_string();
    }
    if *e == AffineInt::n() || *e == AffineInt::k() {
        return e.to_string();
    }
    format!("({e})")
}

fn format_series(kind: &str, s: &PhiSeries, last_slot: &AffineInt, out: &mut String) {
    use std::fmt::Write;
    let params = |list: &[AffineParam]| -> String {
        let mut parts = Vec::new();
        for p in list {
            let mut buf = String::new();
            format_param(p, &mut buf);
            parts.push(buf);
        }
        parts.join(", ")
    };
    let mut arg = String::new();
    format_param(&s.argument, &mut arg);
    let _ = write!(
        out,
        "{kind}([{}]; [{}]; {}; {}; {})",
        params(&s.num_params),
        params(&s.den_params),
        s.step,
        arg,
        format_affine_slot(last_slot)
    );
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Monomial(_) => 2, // may print a '/'
            Expr::Const(c) if c.numer().sign() == num_bigint::Sign::Minus => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Const(c) => {
                if c.is_integer() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "({}/{})", c.numer(), c.denom())
                }
            }
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Monomial(p) => {
                let mut buf = String::new();
                format_param(p, &mut buf);
                f.write_str(&buf)
            }
            Expr::Add(x, y) => {
                x.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                y.fmt_prec(f, 2)
            }
            Expr::Sub(x, y) => {
                x.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                y.fmt_prec(f, 2)
            }
            Expr::Mul(x, y) => {
                // Unary minus: parsed as Mul(-1, factor).
                if **x == Expr::constant(-1) {
                    write!(f, "-")?;
                    return y.fmt_prec(f, 3);
                }
                x.fmt_prec(f, 2)?;
                write!(f, "*")?;
                y.fmt_prec(f, 3)
            }
            Expr::Div(x, y) => {
                x.fmt_prec(f, 2)?;
                write!(f, "/")?;
                y.fmt_prec(f, 3)
            }
            Expr::Pow(x, e) => {
                x.fmt_prec(f, 3)?;
                write!(f, "^{}", format_affine_exponent(e))
            }
            Expr::Poch { arg, step, len } => {
                let mut buf = String::new();
                format_param(arg, &mut buf);
                write!(f, "poch({buf}; {step}; {})", format_affine_slot(len))
            }
            Expr::Phi(s) => {
                let mut buf = String::new();
                format_series("phi", s, &s.termination, &mut buf);
                f.write_str(&buf)
            }
            Expr::PhiTerm { series, index } => {
                let mut buf = String::new();
                format_series("phiterm", series, index, &mut buf);
                f.write_str(&buf)
            }
            Expr::QCatalan { index, negate_q } => {
                if *negate_q {
                    write!(f, "qcat({}, negq)", format_affine_slot(index))
                } else {
                    write!(f, "qcat({})", format_affine_slot(index))
                }
            }
            Expr::Catalan(index) => write!(f, "cat({})", format_affine_slot(index)),
            Expr::Sum { var, lo, hi, body } => {
                write!(
                    f,
                    "sum({var}, {}, {}; ",
                    format_affine_slot(lo),
                    format_affine_slot(hi)
                )?;
                body.fmt_prec(f, 0)?;
                write!(f, ")")
            }
            Expr::Subst { map, inner } => {
                // No surface syntax; debugging form only.
                write!(f, "subst[")?;
                let mut first = true;
                for v in Variable::ALL {
                    if let Some(m) = map.get(v) {
                        if !first {
                            write!(f, ", ")?;
                        }
                        first = false;
                        write!(f, "{v} -> {m}")?;
                    }
                }
                write!(f, "](")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
