use std::cmp::Ordering;
use std::fmt;

/// The three fixed indeterminates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Q,
    A,
    B,
}

impl Variable {
    pub const ALL: [Variable; 3] = [Variable::Q, Variable::A, Variable::B];

    pub fn name(self) -> &'static str {
        match self {
            Variable::Q => "q",
            Variable::A => "a",
            Variable::B => "b",
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Laurent exponent vector for a monomial `q^q a^a b^b`.
///
/// The total order is graded-lexicographic on `(|q|+|a|+|b|, q, a, b)`; it is
/// strict, so iteration over a term map in this order is deterministic and the
/// maximal key of a nonzero polynomial (its canonical leading term) is unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExpVec {
    pub q: i32,
    pub a: i32,
    pub b: i32,
}

impl ExpVec {
    pub const ZERO: ExpVec = ExpVec { q: 0, a: 0, b: 0 };

    pub fn new(q: i32, a: i32, b: i32) -> Self {
        ExpVec { q, a, b }
    }

    pub fn is_zero(self) -> bool {
        self == ExpVec::ZERO
    }

    pub fn grade(self) -> i64 {
        self.q.unsigned_abs() as i64 + self.a.unsigned_abs() as i64 + self.b.unsigned_abs() as i64
    }

    pub fn add(self, other: ExpVec) -> ExpVec {
        ExpVec {
            q: self.q + other.q,
            a: self.a + other.a,
            b: self.b + other.b,
        }
    }

    pub fn sub(self, other: ExpVec) -> ExpVec {
        ExpVec {
            q: self.q - other.q,
            a: self.a - other.a,
            b: self.b - other.b,
        }
    }

    pub fn neg(self) -> ExpVec {
        ExpVec {
            q: -self.q,
            a: -self.a,
            b: -self.b,
        }
    }

    /// Scalar multiple `self * e` (used by substitution: `(q^v)^e`).
    pub fn scale(self, e: i32) -> ExpVec {
        ExpVec {
            q: self.q * e,
            a: self.a * e,
            b: self.b * e,
        }
    }

    pub fn get(self, v: Variable) -> i32 {
        match v {
            Variable::Q => self.q,
            Variable::A => self.a,
            Variable::B => self.b,
        }
    }

    /// Componentwise minimum, for monomial-content extraction.
    pub fn min(self, other: ExpVec) -> ExpVec {
        ExpVec {
            q: self.q.min(other.q),
            a: self.a.min(other.a),
            b: self.b.min(other.b),
        }
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.grade(), self.q, self.a, self.b).cmp(&(other.grade(), other.q, other.a, other.b))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `self^e`, which only depends on the parity of `e`.
    pub fn pow(self, e: i64) -> Sign {
        if self == Sign::Minus && e.rem_euclid(2) == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }
}

/// A signed Laurent monomial `±q^i a^j b^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedMonomial {
    pub sign: Sign,
    pub exps: ExpVec,
}

impl SignedMonomial {
    pub fn new(sign: Sign, exps: ExpVec) -> Self {
        SignedMonomial { sign, exps }
    }

    pub fn one() -> Self {
        SignedMonomial {
            sign: Sign::Plus,
            exps: ExpVec::ZERO,
        }
    }

    pub fn var(v: Variable) -> Self {
        let exps = match v {
            Variable::Q => ExpVec::new(1, 0, 0),
            Variable::A => ExpVec::new(0, 1, 0),
            Variable::B => ExpVec::new(0, 0, 1),
        };
        SignedMonomial {
            sign: Sign::Plus,
            exps,
        }
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign.is_negative() {
            write!(f, "-")?;
        }
        if self.exps.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in Variable::ALL {
            let e = self.exps.get(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

/// A per-variable substitution by signed monomials. Unmapped variables are
/// left fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SubstMap {
    pub q: Option<SignedMonomial>,
    pub a: Option<SignedMonomial>,
    pub b: Option<SignedMonomial>,
}

impl SubstMap {
    pub fn new() -> Self {
        SubstMap::default()
    }

    pub fn with(mut self, v: Variable, target: SignedMonomial) -> Self {
        self.set(v, target);
        self
    }

    pub fn set(&mut self, v: Variable, target: SignedMonomial) {
        match v {
            Variable::Q => self.q = Some(target),
            Variable::A => self.a = Some(target),
            Variable::B => self.b = Some(target),
        }
    }

    pub fn get(&self, v: Variable) -> Option<SignedMonomial> {
        match v {
            Variable::Q => self.q,
            Variable::A => self.a,
            Variable::B => self.b,
        }
    }

    /// True if every variable maps to itself (or is unmapped).
    pub fn is_identity(&self) -> bool {
        Variable::ALL
            .iter()
            .all(|&v| match self.get(v) {
                None => true,
                Some(m) => m == SignedMonomial::var(v),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_then_lex() {
        let one = ExpVec::ZERO;
        let q = ExpVec::new(1, 0, 0);
        let qinv = ExpVec::new(-1, 0, 0);
        let ab = ExpVec::new(0, 1, 1);
        assert!(one < q);
        assert!(qinv < q); // same grade, -1 < 1
        assert!(q < ab);
        assert!(ab < ExpVec::new(1, 1, 1));
    }

    #[test]
    fn sign_pow_parity() {
        assert_eq!(Sign::Minus.pow(-3), Sign::Minus);
        assert_eq!(Sign::Minus.pow(-2), Sign::Plus);
        assert_eq!(Sign::Minus.pow(0), Sign::Plus);
        assert_eq!(Sign::Plus.pow(7), Sign::Plus);
    }
}
