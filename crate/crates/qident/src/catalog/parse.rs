//! Lexer and parser for the catalog language.
//!
//! ```text
//! catalog := item* ;
//! item := "id" NAME "for" "n" ">=" INT ":" expr "==" expr ";"
//!       | "family" NAME "for" "n" ">=" INT ":" expr "==" expr ";"
//!       | "cert" NAME ["for" "n" ">=" INT] ":" "f" "=" expr "," "H" "=" expr
//!                ["," "target" "=" expr] ["," "boundary"] ";"
//!       | "rel" NAME ["for" "n" ">=" INT] ":" expr "==" expr
//!                "," "left" VAR "->" expr "," "right" VAR "->" expr ";"
//!       | "transport" NAME ":" NAME "->" NAME "via" "[" shift ("," shift)* "]" ";"
//!       | "induction" NAME ":" NAME "via" NAME ";"
//! shift := VAR "->" expr        (expr restricted to a signed monomial)
//! expr := term (("+"|"-") term)* ;
//! term := factor (("*"|"/") factor)* ;
//! factor := "-" factor | base ("^" affine-atom)? ;
//! base := INT | "q" | "a" | "b" | "(" expr ")"
//!       | "poch" "(" expr ";" INT ";" affine ")"
//!       | "phi" "(" "[" expr-list "]" ";" "[" expr-list "]" ";" INT ";" expr ";" affine ")"
//!       | "phiterm" "(" ... same ... ")"
//!       | "qcat" "(" affine ["," "negq"] ")" | "cat" "(" affine ")"
//!       | "sum" "(" NAME "," affine "," affine ";" expr ")" ;
//! affine := integer-linear form in {1, n, k} ;
//! ```
//!
//! `#` starts a line comment. Expressions in parameter positions (poch/phi
//! arguments, transport targets) must reduce to signed Laurent monomials.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Sign, SignedMonomial, SubstMap, Variable};
use crate::qseries::{AffineInt, AffineParam, PhiSeries};

use super::ast::Expr;
use super::{
    Catalog, CertificateSpec, IdentitySpec, InductionSpec, Item, RelationSpec, SpecKind,
    TermFamily, TransportSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    NonAffineExponent,
    UnknownSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::NonAffineExponent => "non-affine exponent",
            ParseErrorKind::UnknownSymbol => "unknown symbol",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.col, kind, self.message)
    }
}

fn perr<T>(kind: ParseErrorKind, line: u32, col: u32, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        kind,
        message: message.into(),
    })
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Colon,
    Eq,
    EqEq,
    Arrow,
    Ge,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Eof => "end of input".into(),
            t => format!(
                "'{}'",
                match t {
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::Star => "*",
                    Tok::Slash => "/",
                    Tok::Caret => "^",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::Semi => ";",
                    Tok::Comma => ",",
                    Tok::Colon => ":",
                    Tok::Eq => "=",
                    Tok::EqEq => "==",
                    Tok::Arrow => "->",
                    Tok::Ge => ">=",
                    _ => unreachable!(),
                }
            ),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let bump = |chars: &mut std::iter::Peekable<std::str::Chars>, line: &mut u32, col: &mut u32| {
            let c = chars.next().unwrap();
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while let Some(&c2) = chars.peek() {
                if c2 == '\n' {
                    break;
                }
                bump(&mut chars, &mut line, &mut col);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_alphanumeric() || c2 == '_' {
                    s.push(bump(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_digit() {
                    s.push(bump(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            match s.parse::<i64>() {
                Ok(n) => out.push(Token { tok: Tok::Int(n), line: tl, col: tc }),
                Err(_) => return perr(ParseErrorKind::Syntax, tl, tc, format!("integer '{s}' out of range")),
            }
            continue;
        }
        bump(&mut chars, &mut line, &mut col);
        let tok = match c {
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '-' => {
                if chars.peek() == Some(&'>') {
                    bump(&mut chars, &mut line, &mut col);
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            '=' => {
                if chars.peek() == Some(&'=') {
                    bump(&mut chars, &mut line, &mut col);
                    Tok::EqEq
                } else {
                    Tok::Eq
                }
            }
            '>' => {
                if chars.peek() == Some(&'=') {
                    bump(&mut chars, &mut line, &mut col);
                    Tok::Ge
                } else {
                    return perr(ParseErrorKind::Syntax, tl, tc, "expected '>='");
                }
            }
            other => {
                return perr(ParseErrorKind::Syntax, tl, tc, format!("unexpected character '{other}'"));
            }
        };
        out.push(Token { tok, line: tl, col: tc });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    items: Vec<Item>,
}

/// Parse a catalog from DSL text.
pub fn parse(src: &str) -> Result<Catalog, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, items: Vec::new() };
    while p.peek() != &Tok::Eof {
        p.item()?;
    }
    Ok(Catalog::new(p.items))
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (u32, u32) {
        (self.toks[self.pos].line, self.toks[self.pos].col)
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        perr(ParseErrorKind::Syntax, line, col, message)
    }

    fn unknown<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        perr(ParseErrorKind::UnknownSymbol, line, col, message)
    }

    fn non_affine<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        perr(ParseErrorKind::NonAffineExponent, line, col, message)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.peek() == &want {
            self.advance();
            Ok(())
        } else {
            self.syntax(format!("expected {}, found {}", want.describe(), self.peek().describe()))
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            other => self.syntax(format!("expected a name, found {}", other.describe())),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.advance();
                Ok(())
            }
            other => self.syntax(format!("expected '{kw}', found {}", other.describe())),
        }
    }

    fn expect_int(&mut self) -> Result<i64, ParseError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.advance();
                Ok(n)
            }
            ref other => self.syntax(format!("expected an integer, found {}", other.describe())),
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == want {
            self.advance();
            true
        } else {
            false
        }
    }

    // -- items --------------------------------------------------------------

    fn item(&mut self) -> Result<(), ParseError> {
        let kw = self.expect_ident()?;
        let item = match kw.as_str() {
            "id" | "family" => self.identity_item(kw == "family")?,
            "cert" => self.cert_item()?,
            "rel" => self.rel_item()?,
            "transport" => self.transport_item()?,
            "induction" => self.induction_item()?,
            other => {
                return self.syntax(format!(
                    "expected 'id', 'family', 'cert', 'rel', 'transport' or 'induction', found '{other}'"
                ))
            }
        };
        if self.items.iter().any(|i| i.id() == item.id()) {
            return self.syntax(format!("duplicate spec id '{}'", item.id()));
        }
        self.items.push(item);
        Ok(())
    }

    fn range_clause(&mut self, default: i64) -> Result<i64, ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "for") {
            self.advance();
            self.expect_keyword("n")?;
            self.expect(Tok::Ge)?;
            let neg = self.eat(&Tok::Minus);
            let v = self.expect_int()?;
            Ok(if neg { -v } else { v })
        } else {
            Ok(default)
        }
    }

    fn identity_item(&mut self, family: bool) -> Result<Item, ParseError> {
        let id = self.expect_ident()?;
        self.expect_keyword("for")?;
        self.expect_keyword("n")?;
        self.expect(Tok::Ge)?;
        let neg = self.eat(&Tok::Minus);
        let n_min = self.expect_int()?;
        let n_min = if neg { -n_min } else { n_min };
        self.expect(Tok::Colon)?;
        let kname = if family { Some("k") } else { None };
        let lhs = self.expr(kname)?;
        self.expect(Tok::EqEq)?;
        let rhs = self.expr(kname)?;
        self.expect(Tok::Semi)?;
        let kind = if family {
            SpecKind::FamilyInNK
        } else if lhs.is_constant_valued() && rhs.is_constant_valued() {
            SpecKind::IntegerIdentity
        } else {
            SpecKind::IdentityInN
        };
        Ok(Item::Identity(IdentitySpec { id, kind, n_min, lhs, rhs }))
    }

    fn cert_item(&mut self) -> Result<Item, ParseError> {
        let id = self.expect_ident()?;
        let n_min = self.range_clause(0)?;
        self.expect(Tok::Colon)?;
        self.expect_keyword("f")?;
        self.expect(Tok::Eq)?;
        let term = self.expr(Some("k"))?;
        self.expect(Tok::Comma)?;
        self.expect_keyword("H")?;
        self.expect(Tok::Eq)?;
        let certificate = self.expr(Some("k"))?;
        let mut target = None;
        let mut boundary = false;
        while self.eat(&Tok::Comma) {
            match self.peek().clone() {
                Tok::Ident(s) if s == "target" => {
                    self.advance();
                    self.expect(Tok::Eq)?;
                    target = Some(self.expr(None)?);
                }
                Tok::Ident(s) if s == "boundary" => {
                    self.advance();
                    boundary = true;
                }
                other => {
                    return self.syntax(format!("expected 'target' or 'boundary', found {}", other.describe()))
                }
            }
        }
        self.expect(Tok::Semi)?;
        Ok(Item::Certificate(CertificateSpec { id, n_min, term, certificate, target, boundary }))
    }

    fn rel_item(&mut self) -> Result<Item, ParseError> {
        let id = self.expect_ident()?;
        let n_min = self.range_clause(2)?;
        self.expect(Tok::Colon)?;
        let lhs = self.expr(Some("k"))?;
        self.expect(Tok::EqEq)?;
        let rhs = self.expr(Some("k"))?;
        self.expect(Tok::Comma)?;
        self.expect_keyword("left")?;
        let left_shift = self.shift_clause()?;
        self.expect(Tok::Comma)?;
        self.expect_keyword("right")?;
        let right_shift = self.shift_clause()?;
        self.expect(Tok::Semi)?;

        // Shape: phiterm - phiterm == multiplier * phiterm(k-1)
        let (base, shifted) = match lhs {
            Expr::Sub(x, y) => match (*x, *y) {
                (Expr::PhiTerm { series: s1, index: i1 }, Expr::PhiTerm { series: s2, index: i2 }) => {
                    (TermFamily { series: s1, index: i1 }, TermFamily { series: s2, index: i2 })
                }
                _ => return self.syntax("relation left side must be a difference of two phiterm(...)"),
            },
            _ => return self.syntax("relation left side must be a difference of two phiterm(...)"),
        };
        let (multiplier, right) = match rhs {
            Expr::Mul(m, t) => match *t {
                Expr::PhiTerm { series, index } => (*m, TermFamily { series, index }),
                _ => return self.syntax("relation right side must end in * phiterm(...)"),
            },
            Expr::PhiTerm { series, index } => {
                (Expr::constant(1), TermFamily { series, index })
            }
            _ => return self.syntax("relation right side must be multiplier * phiterm(...)"),
        };
        if expr_uses_k(&multiplier) {
            return self.syntax("relation multiplier may not involve k");
        }
        if base.index != AffineInt::k() || shifted.index != AffineInt::k() {
            return self.syntax("relation left-side terms must have index k");
        }
        let k_minus_1 = AffineInt { c0: -1, cn: 0, ck: 1 };
        if right.index != k_minus_1 {
            return self.syntax("relation right-side term must have index k-1");
        }
        // Cross-validate the declared shifts against the parameter lists.
        if !family_matches(&base, &shifted, &left_shift, 0) {
            return self.syntax("shifted family does not equal the base family under the declared left shift");
        }
        if !family_matches(&base, &right, &right_shift, -2) {
            return self.syntax("right family does not equal the base family at n-2 under the declared right shift");
        }
        Ok(Item::Relation(RelationSpec {
            id,
            n_min,
            base,
            shifted,
            right,
            multiplier,
            left_shift,
            right_shift,
        }))
    }

    fn shift_clause(&mut self) -> Result<SubstMap, ParseError> {
        let (var, mono) = self.var_arrow_monomial()?;
        Ok(SubstMap::new().with(var, mono))
    }

    fn var_arrow_monomial(&mut self) -> Result<(Variable, SignedMonomial), ParseError> {
        let name = self.expect_ident()?;
        let var = match name.as_str() {
            "q" => Variable::Q,
            "a" => Variable::A,
            "b" => Variable::B,
            other => return self.unknown(format!("'{other}' is not a variable (expected q, a or b)")),
        };
        self.expect(Tok::Arrow)?;
        let e = self.expr(None)?;
        let param = match to_param(&e) {
            Some(p) => p,
            None => return self.syntax("substitution target must be a signed monomial"),
        };
        if !param.q_exp.is_constant() {
            return self.non_affine("substitution target exponents must be constant");
        }
        let exps = crate::algebra::ExpVec::new(param.q_exp.c0 as i32, param.a_exp, param.b_exp);
        Ok((var, SignedMonomial::new(param.sign, exps)))
    }

    fn transport_item(&mut self) -> Result<Item, ParseError> {
        let id = self.expect_ident()?;
        self.expect(Tok::Colon)?;
        let from = self.expect_ident()?;
        self.expect(Tok::Arrow)?;
        let to = self.expect_ident()?;
        self.expect_keyword("via")?;
        self.expect(Tok::LBracket)?;
        let mut map = SubstMap::new();
        loop {
            let (var, mono) = self.var_arrow_monomial()?;
            map.set(var, mono);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Semi)?;
        let n_from = match self.items.iter().find(|i| i.id() == from) {
            Some(Item::Identity(s)) => s.n_min,
            _ => return self.unknown(format!("transport endpoint '{from}' is not a known identity")),
        };
        let n_to = match self.items.iter().find(|i| i.id() == to) {
            Some(Item::Identity(s)) => s.n_min,
            _ => return self.unknown(format!("transport endpoint '{to}' is not a known identity")),
        };
        Ok(Item::Transport(TransportSpec {
            id,
            from,
            to,
            map,
            n_min: n_from.max(n_to),
        }))
    }

    fn induction_item(&mut self) -> Result<Item, ParseError> {
        let id = self.expect_ident()?;
        self.expect(Tok::Colon)?;
        let identity = self.expect_ident()?;
        self.expect_keyword("via")?;
        let relation = self.expect_ident()?;
        self.expect(Tok::Semi)?;
        let id_min = match self.items.iter().find(|i| i.id() == identity) {
            Some(Item::Identity(s)) => s.n_min,
            _ => return self.unknown(format!("'{identity}' is not a known identity")),
        };
        let rel_min = match self.items.iter().find(|i| i.id() == relation) {
            Some(Item::Relation(s)) => s.n_min,
            _ => return self.unknown(format!("'{relation}' is not a known relation")),
        };
        Ok(Item::Induction(InductionSpec {
            id,
            identity,
            relation,
            n_min: rel_min.max(id_min + 2),
        }))
    }

    // -- expressions ----------------------------------------------------------

    fn expr(&mut self, kname: Option<&str>) -> Result<Expr, ParseError> {
        let mut lhs = self.term(kname)?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term(kname)?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term(kname)?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self, kname: Option<&str>) -> Result<Expr, ParseError> {
        let mut lhs = self.factor(kname)?;
        loop {
            if self.eat(&Tok::Star) {
                let rhs = self.factor(kname)?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Slash) {
                let rhs = self.factor(kname)?;
                lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self, kname: Option<&str>) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            let inner = self.factor(kname)?;
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Mul(Box::new(Expr::constant(-1)), Box::new(other)),
            });
        }
        let base = self.base(kname)?;
        if self.eat(&Tok::Caret) {
            let e = self.affine_atom(kname)?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn base(&mut self, kname: Option<&str>) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(Expr::constant(n))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr(kname)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "q" => {
                    self.advance();
                    Ok(Expr::Var(Variable::Q))
                }
                "a" => {
                    self.advance();
                    Ok(Expr::Var(Variable::A))
                }
                "b" => {
                    self.advance();
                    Ok(Expr::Var(Variable::B))
                }
                "poch" => self.poch(kname),
                "phi" => self.series(kname, false),
                "phiterm" => self.series(kname, true),
                "qcat" => self.qcat(kname),
                "cat" => self.cat(kname),
                "sum" => self.sum(kname),
                other => self.unknown(format!("unknown identifier '{other}'")),
            },
            other => self.syntax(format!("expected an expression, found {}", other.describe())),
        }
    }

    fn param(&mut self, kname: Option<&str>) -> Result<AffineParam, ParseError> {
        let (line, col) = self.here();
        let e = self.expr(kname)?;
        match to_param(&e) {
            Some(p) => Ok(p),
            None => perr(
                ParseErrorKind::Syntax,
                line,
                col,
                "parameter must be a signed monomial (±q^affine * a^i * b^j)",
            ),
        }
    }

    fn poch(&mut self, kname: Option<&str>) -> Result<Expr, ParseError> {
        self.advance(); // poch
        self.expect(Tok::LParen)?;
        let arg = self.param(kname)?;
        self.expect(Tok::Semi)?;
        let step = self.step()?;
        self.expect(Tok::Semi)?;
        let len = self.affine(kname)?;
        self.expect(Tok::RParen)?;
        Ok(Expr::Poch { arg, step, len })
    }

    fn step(&mut self) -> Result<u32, ParseError> {
        let (line, col) = self.here();
        let v = self.expect_int()?;
        if v < 1 || v > u32::MAX as i64 {
            return perr(ParseErrorKind::Syntax, line, col, "base step must be a positive integer");
        }
        Ok(v as u32)
    }

    fn series(&mut self, kname: Option<&str>, is_term: bool) -> Result<Expr, ParseError> {
        let (line, col) = self.here();
        self.advance(); // phi | phiterm
        self.expect(Tok::LParen)?;
        self.expect(Tok::LBracket)?;
        let mut num_params = Vec::new();
        if self.peek() != &Tok::RBracket {
            loop {
                num_params.push(self.param(kname)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Semi)?;
        self.expect(Tok::LBracket)?;
        let mut den_params = Vec::new();
        if self.peek() != &Tok::RBracket {
            loop {
                den_params.push(self.param(kname)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Semi)?;
        let step = self.step()?;
        self.expect(Tok::Semi)?;
        let argument = self.param(kname)?;
        self.expect(Tok::Semi)?;
        let last = self.affine(kname)?;
        self.expect(Tok::RParen)?;
        if is_term {
            let termination = match PhiSeries::derive_termination(&num_params, step) {
                Some(t) => t,
                None => {
                    return perr(
                        ParseErrorKind::Syntax,
                        line,
                        col,
                        "phiterm family has no numerator parameter of the form q^(-step*N)",
                    )
                }
            };
            let series = PhiSeries { num_params, den_params, step, argument, termination };
            Ok(Expr::PhiTerm { series, index: last })
        } else {
            let series = PhiSeries { num_params, den_params, step, argument, termination: last };
            if !series.check_termination() {
                return perr(
                    ParseErrorKind::Syntax,
                    line,
                    col,
                    "no numerator parameter equals q^(-step*termination); the series would not terminate",
                );
            }
            Ok(Expr::Phi(series))
        }
    }

    fn qcat(&mut self, kname: Option<&str>) -> Result<Expr, ParseError> {
        self.advance();
        self.expect(Tok::LParen)?;
        let index = self.affine(kname)?;
        let negate_q = if self.eat(&Tok::Comma) {
            self.expect_keyword("negq")?;
            true
        } else {
            false
        };
        self.expect(Tok::RParen)?;
        Ok(Expr::QCatalan { index, negate_q })
    }

    fn cat(&mut self, kname: Option<&str>) -> Result<Expr, ParseError> {
        self.advance();
        self.expect(Tok::LParen)?;
        let index = self.affine(kname)?;
        self.expect(Tok::RParen)?;
        Ok(Expr::Catalan(index))
    }

    fn sum(&mut self, outer_kname: Option<&str>) -> Result<Expr, ParseError> {
        self.advance();
        self.expect(Tok::LParen)?;
        let var = self.expect_ident()?;
        if var == "n" || var == "q" || var == "a" || var == "b" {
            return self.syntax(format!("summation index may not shadow '{var}'"));
        }
        self.expect(Tok::Comma)?;
        // Bounds are evaluated in the *outer* context.
        let lo = self.affine(outer_kname)?;
        self.expect(Tok::Comma)?;
        let hi = self.affine(outer_kname)?;
        self.expect(Tok::Semi)?;
        let body = self.expr(Some(&var))?;
        self.expect(Tok::RParen)?;
        Ok(Expr::Sum { var, lo, hi, body: Box::new(body) })
    }

    // -- affine forms ---------------------------------------------------------

    fn affine_atom(&mut self, kname: Option<&str>) -> Result<AffineInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.advance();
                Ok(AffineInt::constant(v))
            }
            Tok::Minus => {
                self.advance();
                match self.peek().clone() {
                    Tok::Int(v) => {
                        self.advance();
                        Ok(AffineInt::constant(-v))
                    }
                    Tok::Ident(_) => Ok(self.affine_symbol(kname)?.scale(-1)),
                    other => self.syntax(format!("expected an exponent, found {}", other.describe())),
                }
            }
            Tok::Ident(_) => self.affine_symbol(kname),
            Tok::LParen => {
                self.advance();
                let e = self.affine(kname)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => self.syntax(format!("expected an exponent, found {}", other.describe())),
        }
    }

    fn affine_symbol(&mut self, kname: Option<&str>) -> Result<AffineInt, ParseError> {
        let name = self.expect_ident()?;
        if name == "n" {
            return Ok(AffineInt::n());
        }
        if Some(name.as_str()) == kname {
            return Ok(AffineInt::k());
        }
        if name == "k" {
            self.unknown("'k' is not bound in this context")
        } else {
            self.unknown(format!("'{name}' is not valid in an affine form (expected n{})",
                match kname { Some(k) => format!(" or {k}"), None => String::new() }))
        }
    }

    /// `affine := ["+"|"-"] aterm (("+"|"-") aterm)*`,
    /// `aterm := INT ["*" (n|k)] | (n|k)`.
    fn affine(&mut self, kname: Option<&str>) -> Result<AffineInt, ParseError> {
        let mut acc = AffineInt::default();
        let mut first = true;
        loop {
            let negative = if self.eat(&Tok::Minus) {
                true
            } else if self.eat(&Tok::Plus) {
                false
            } else if first {
                false
            } else {
                break;
            };
            first = false;
            let mut part = match self.peek().clone() {
                Tok::Int(v) => {
                    self.advance();
                    if self.eat(&Tok::Star) {
                        self.affine_symbol(kname)?.scale(v)
                    } else {
                        AffineInt::constant(v)
                    }
                }
                Tok::Ident(_) => self.affine_symbol(kname)?,
                other => return self.syntax(format!("expected an affine term, found {}", other.describe())),
            };
            if self.peek() == &Tok::Star || self.peek() == &Tok::Caret {
                return self.non_affine("exponents must be integer-linear in n and k");
            }
            if negative {
                part = part.scale(-1);
            }
            acc = acc.add(part);
        }
        Ok(acc)
    }
}

/// True if the expression references the bound index `k` anywhere outside its
/// own summation binders.
pub(crate) fn expr_uses_k(e: &Expr) -> bool {
    let param_uses = |p: &AffineParam| p.uses_k();
    let series_uses = |s: &PhiSeries| {
        s.num_params.iter().any(param_uses)
            || s.den_params.iter().any(param_uses)
            || param_uses(&s.argument)
            || s.termination.uses_k()
    };
    match e {
        Expr::Const(_) | Expr::Var(_) => false,
        Expr::Monomial(p) => param_uses(p),
        Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) | Expr::Div(x, y) => {
            expr_uses_k(x) || expr_uses_k(y)
        }
        Expr::Pow(x, e) => expr_uses_k(x) || e.uses_k(),
        Expr::Poch { arg, len, .. } => param_uses(arg) || len.uses_k(),
        Expr::Phi(s) => series_uses(s),
        Expr::PhiTerm { series, index } => series_uses(series) || index.uses_k(),
        Expr::QCatalan { index, .. } => index.uses_k(),
        Expr::Catalan(index) => index.uses_k(),
        // The body's k is bound by the sum itself; only the bounds can leak.
        Expr::Sum { lo, hi, .. } => lo.uses_k() || hi.uses_k(),
        Expr::Subst { inner, .. } => expr_uses_k(inner),
    }
}

/// Interpret an expression as a signed Laurent monomial with affine
/// q-exponent and constant a/b-exponents, if it has that shape.
pub fn to_param(e: &Expr) -> Option<AffineParam> {
    let unit = |sign: Sign| AffineParam {
        sign,
        q_exp: AffineInt::default(),
        a_exp: 0,
        b_exp: 0,
    };
    match e {
        Expr::Const(c) => {
            if *c == crate::algebra::rat(1) {
                Some(unit(Sign::Plus))
            } else if *c == crate::algebra::rat(-1) {
                Some(unit(Sign::Minus))
            } else {
                None
            }
        }
        Expr::Var(v) => Some(var_param(*v, AffineInt::constant(1))?),
        Expr::Monomial(p) => Some(*p),
        Expr::Mul(x, y) => combine(&to_param(x)?, &to_param(y)?),
        Expr::Div(x, y) => combine(&to_param(x)?, &invert(&to_param(y)?)),
        Expr::Pow(x, e) => match **x {
            Expr::Var(v) => var_param(v, *e),
            _ => None,
        },
        _ => None,
    }
}

fn var_param(v: Variable, e: AffineInt) -> Option<AffineParam> {
    let mut p = AffineParam {
        sign: Sign::Plus,
        q_exp: AffineInt::default(),
        a_exp: 0,
        b_exp: 0,
    };
    match v {
        Variable::Q => p.q_exp = e,
        Variable::A => {
            if !e.is_constant() {
                return None;
            }
            p.a_exp = i32::try_from(e.c0).ok()?;
        }
        Variable::B => {
            if !e.is_constant() {
                return None;
            }
            p.b_exp = i32::try_from(e.c0).ok()?;
        }
    }
    Some(p)
}

fn combine(x: &AffineParam, y: &AffineParam) -> Option<AffineParam> {
    Some(AffineParam {
        sign: x.sign.mul(y.sign),
        q_exp: x.q_exp.add(y.q_exp),
        a_exp: x.a_exp.checked_add(y.a_exp)?,
        b_exp: x.b_exp.checked_add(y.b_exp)?,
    })
}

fn invert(x: &AffineParam) -> AffineParam {
    AffineParam {
        sign: x.sign,
        q_exp: x.q_exp.scale(-1),
        a_exp: -x.a_exp,
        b_exp: -x.b_exp,
    }
}

/// Check that `got` equals `base` shifted by `n -> n + n_delta` and then the
/// substitution map, parameter by parameter.
fn family_matches(base: &TermFamily, got: &TermFamily, map: &SubstMap, n_delta: i64) -> bool {
    let transform = |p: &AffineParam| p.shift_n(n_delta).substitute(map);
    let lists_match = |bs: &[AffineParam], gs: &[AffineParam]| {
        bs.len() == gs.len()
            && bs
                .iter()
                .zip(gs)
                .all(|(b, g)| transform(b).as_ref() == Some(g))
    };
    base.series.step == got.series.step
        && lists_match(&base.series.num_params, &got.series.num_params)
        && lists_match(&base.series.den_params, &got.series.den_params)
        && transform(&base.series.argument).as_ref() == Some(&got.series.argument)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke_identity() {
        let src = "id X for n >= 0 : phi([q^(-2*n), a]; [a*b*q]; 2; q^2; n) == poch(a;1;n) ;";
        let cat = parse(src).unwrap();
        assert_eq!(cat.spec_count(), 1);
        let spec = cat.identity("X").unwrap();
        assert_eq!(spec.n_min, 0);
        assert_eq!(spec.kind, SpecKind::IdentityInN);
    }

    #[test]
    fn malformed_poch_reports_position() {
        let err = parse("id X for n >= 0 : poch(a;;n) == 1 ;").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert_eq!(err.line, 1);
        assert!(err.col > 0);
    }

    #[test]
    fn non_affine_exponent_rejected() {
        let err = parse("id X for n >= 0 : q^(n*n) == 1 ;").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonAffineExponent);
    }

    #[test]
    fn unknown_symbol_rejected() {
        let err = parse("id X for n >= 0 : zeta == 1 ;").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownSymbol);
        let err = parse("id X for n >= 0 : q^k == 1 ;").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownSymbol);
    }

    #[test]
    fn nonterminating_phi_rejected() {
        let err = parse("id X for n >= 0 : phi([a]; [b]; 2; q^2; n) == 1 ;").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert!(err.message.contains("terminate"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = parse("id X for n >= 0 : q == q ;\nid X for n >= 0 : a == a ;").unwrap_err();
        assert!(err.message.contains("duplicate"));
        assert_eq!(err.line, 2);
    }

    #[test]
    fn integer_identity_classified() {
        let cat = parse("id C for n >= 0 : sum(k, 0, n; cat(2*k)) == 4^n ;").unwrap();
        assert_eq!(cat.identity("C").unwrap().kind, SpecKind::IntegerIdentity);
    }
}
