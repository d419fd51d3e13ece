//! The identity catalog: a small declarative language for q-series
//! identities with affine exponents, the parser for it, and the built-in
//! catalog shipped with this crate.
//!
//! Five record kinds exist. Identities (`id`/`family` items) equate two
//! expressions for every `n >= n_min` (families also for every `0 <= k <= n`);
//! certificates (`cert`) carry a term `f` and a telescoping certificate `H`
//! with `f_k + f_{n-k} = H_k - H_{k+1}`; relations (`rel`) connect a series
//! term family at contiguous parameters; transports (`transport`) assert that
//! a monomial substitution carries one identity to another; inductions
//! (`induction`) bind an identity to the relation its closed form satisfies.

mod ast;
mod parse;

pub use ast::{format_param, mapped_point, EvalError, Expr};
pub use parse::{parse, ParseError, ParseErrorKind};

use std::fmt;
use std::sync::OnceLock;

use crate::algebra::{RatFunc, SubstMap, Variable};
use crate::qseries::{AffineInt, PhiSeries};

/// Source text of the built-in catalog.
pub const BUILTIN_SOURCE: &str = include_str!("builtin.qid");

/// How an identity record is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecKind {
    /// One equation per `n`.
    IdentityInN,
    /// One equation per `(n, k)` for all `0 <= k <= n`.
    FamilyInNK,
    /// Both sides are exact rational constants for each `n`.
    IntegerIdentity,
}

impl SpecKind {
    pub fn name(self) -> &'static str {
        match self {
            SpecKind::IdentityInN => "identity",
            SpecKind::FamilyInNK => "family",
            SpecKind::IntegerIdentity => "integer",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySpec {
    pub id: String,
    pub kind: SpecKind,
    pub n_min: i64,
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateSpec {
    pub id: String,
    pub n_min: i64,
    /// The summand `f(n, k)`.
    pub term: Expr,
    /// The certificate `H(n, k)`, defined for `0 <= k <= n+1`.
    pub certificate: Expr,
    /// Closed form the telescoped sum must equal.
    pub target: Option<Expr>,
    /// Whether the boundary relation `H_{n+1} = -H_0` is part of the record.
    pub boundary: bool,
}

/// A term family `F_k`: one summand of a terminating series, by index.
#[derive(Debug, Clone, PartialEq)]
pub struct TermFamily {
    pub series: PhiSeries,
    pub index: AffineInt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationSpec {
    pub id: String,
    pub n_min: i64,
    /// `F_k(n, ...)` with original parameters.
    pub base: TermFamily,
    /// `F_k` with one parameter shifted (the subtracted term).
    pub shifted: TermFamily,
    /// `F_{k-1}` at `n-2` with the complementary shift.
    pub right: TermFamily,
    /// The factor in front of the right term.
    pub multiplier: Expr,
    /// Parameter shift producing `shifted` from `base`.
    pub left_shift: SubstMap,
    /// Parameter shift producing `right` from `base` at `n-2`.
    pub right_shift: SubstMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub map: SubstMap,
    pub n_min: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InductionSpec {
    pub id: String,
    pub identity: String,
    pub relation: String,
    pub n_min: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Identity(IdentitySpec),
    Certificate(CertificateSpec),
    Relation(RelationSpec),
    Transport(TransportSpec),
    Induction(InductionSpec),
}

impl Item {
    pub fn id(&self) -> &str {
        match self {
            Item::Identity(s) => &s.id,
            Item::Certificate(s) => &s.id,
            Item::Relation(s) => &s.id,
            Item::Transport(s) => &s.id,
            Item::Induction(s) => &s.id,
        }
    }

    pub fn n_min(&self) -> i64 {
        match self {
            Item::Identity(s) => s.n_min,
            Item::Certificate(s) => s.n_min,
            Item::Relation(s) => s.n_min,
            Item::Transport(s) => s.n_min,
            Item::Induction(s) => s.n_min,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Item::Identity(s) => s.kind.name(),
            Item::Certificate(_) => "certificate",
            Item::Relation(_) => "relation",
            Item::Transport(_) => "transport",
            Item::Induction(_) => "induction",
        }
    }

    /// Induction records are check bindings over other specs, not
    /// formula-bearing specs of their own.
    pub fn is_spec(&self) -> bool {
        !matches!(self, Item::Induction(_))
    }

    /// One-line formula summary for listings.
    pub fn summary(&self) -> String {
        let full = match self {
            Item::Identity(s) => format!("{} == {}", s.lhs, s.rhs),
            Item::Certificate(s) => format!("f = {}, H = {}", s.term, s.certificate),
            Item::Relation(s) => format!(
                "{} - {} == {} * {}",
                Expr::PhiTerm {
                    series: s.base.series.clone(),
                    index: s.base.index,
                },
                Expr::PhiTerm {
                    series: s.shifted.series.clone(),
                    index: s.shifted.index,
                },
                s.multiplier,
                Expr::PhiTerm {
                    series: s.right.series.clone(),
                    index: s.right.index,
                },
            ),
            Item::Transport(s) => format!("{} -> {} via {}", s.from, s.to, fmt_map(&s.map)),
            Item::Induction(s) => format!("{} via {}", s.identity, s.relation),
        };
        let mut out: String = full.chars().take(96).collect();
        if out.len() < full.len() {
            out.push_str("...");
        }
        out
    }
}

fn fmt_map(map: &SubstMap) -> String {
    let mut parts = Vec::new();
    for v in Variable::ALL {
        if let Some(m) = map.get(v) {
            parts.push(format!("{v} -> {m}"));
        }
    }
    format!("[{}]", parts.join(", "))
}

/// An ordered collection of catalog records with unique ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    items: Vec<Item>,
}

impl Catalog {
    pub fn new(items: Vec<Item>) -> Catalog {
        Catalog { items }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Number of formula-bearing specs (induction bindings excluded).
    pub fn spec_count(&self) -> usize {
        self.items.iter().filter(|i| i.is_spec()).count()
    }

    pub fn get(&self, id: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.id() == id)
    }

    pub fn identity(&self, id: &str) -> Option<&IdentitySpec> {
        match self.get(id) {
            Some(Item::Identity(s)) => Some(s),
            _ => None,
        }
    }

    pub fn certificate(&self, id: &str) -> Option<&CertificateSpec> {
        match self.get(id) {
            Some(Item::Certificate(s)) => Some(s),
            _ => None,
        }
    }

    pub fn relation(&self, id: &str) -> Option<&RelationSpec> {
        match self.get(id) {
            Some(Item::Relation(s)) => Some(s),
            _ => None,
        }
    }

    pub fn transport(&self, id: &str) -> Option<&TransportSpec> {
        match self.get(id) {
            Some(Item::Transport(s)) => Some(s),
            _ => None,
        }
    }

    pub fn induction(&self, id: &str) -> Option<&InductionSpec> {
        match self.get(id) {
            Some(Item::Induction(s)) => Some(s),
            _ => None,
        }
    }

    /// Append all items of `other`, rejecting duplicate ids.
    pub fn merge(&mut self, other: Catalog) -> Result<(), String> {
        for item in other.items {
            if self.get(item.id()).is_some() {
                return Err(format!("duplicate spec id '{}'", item.id()));
            }
            self.items.push(item);
        }
        Ok(())
    }
}

impl fmt::Display for Catalog {
    /// Serialize back to DSL text; `parse` of the output reproduces the
    /// catalog structurally.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            match item {
                Item::Identity(s) => {
                    let kw = match s.kind {
                        SpecKind::FamilyInNK => "family",
                        _ => "id",
                    };
                    writeln!(f, "{kw} {} for n >= {} :", s.id, s.n_min)?;
                    writeln!(f, "  {}", s.lhs)?;
                    writeln!(f, "  == {} ;", s.rhs)?;
                }
                Item::Certificate(s) => {
                    writeln!(f, "cert {} for n >= {} :", s.id, s.n_min)?;
                    writeln!(f, "  f = {},", s.term)?;
                    writeln!(f, "  H = {}{}", s.certificate, if s.target.is_some() || s.boundary { "," } else { "" })?;
                    if let Some(t) = &s.target {
                        writeln!(f, "  target = {}{}", t, if s.boundary { "," } else { "" })?;
                    }
                    if s.boundary {
                        writeln!(f, "  boundary")?;
                    }
                    writeln!(f, "  ;")?;
                }
                Item::Relation(s) => {
                    writeln!(f, "rel {} for n >= {} :", s.id, s.n_min)?;
                    writeln!(
                        f,
                        "  {}",
                        Expr::PhiTerm {
                            series: s.base.series.clone(),
                            index: s.base.index,
                        }
                    )?;
                    writeln!(
                        f,
                        "  - {}",
                        Expr::PhiTerm {
                            series: s.shifted.series.clone(),
                            index: s.shifted.index,
                        }
                    )?;
                    writeln!(f, "  == {}", s.multiplier)?;
                    writeln!(
                        f,
                        "     * {},",
                        Expr::PhiTerm {
                            series: s.right.series.clone(),
                            index: s.right.index,
                        }
                    )?;
                    writeln!(f, "  left {},", fmt_shift(&s.left_shift))?;
                    writeln!(f, "  right {} ;", fmt_shift(&s.right_shift))?;
                }
                Item::Transport(s) => {
                    writeln!(f, "transport {} : {} -> {} via {} ;", s.id, s.from, s.to, fmt_map(&s.map))?;
                }
                Item::Induction(s) => {
                    writeln!(f, "induction {} : {} via {} ;", s.id, s.identity, s.relation)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn fmt_shift(map: &SubstMap) -> String {
    for v in Variable::ALL {
        if let Some(m) = map.get(v) {
            return format!("{v} -> {m}");
        }
    }
    "".into()
}

/// Instantiate both sides of an identity at `n` (and `k` for families).
pub fn instantiate(
    spec: &IdentitySpec,
    n: i64,
    k: Option<i64>,
) -> Result<(RatFunc, RatFunc), EvalError> {
    if n < spec.n_min {
        return Err(EvalError::InstantiationBelowRange {
            id: spec.id.clone(),
            n,
            n_min: spec.n_min,
        });
    }
    Ok((spec.lhs.eval(n, k)?, spec.rhs.eval(n, k)?))
}

/// A new spec whose instantiation at every `n` equals the monomial
/// substitution applied to the original instantiation. The identity map
/// returns the spec unchanged.
pub fn apply_subst(spec: &IdentitySpec, map: &SubstMap) -> IdentitySpec {
    if map.is_identity() {
        return spec.clone();
    }
    let wrap = |e: &Expr| Expr::Subst {
        map: *map,
        inner: Box::new(e.clone()),
    };
    IdentitySpec {
        id: spec.id.clone(),
        kind: spec.kind,
        n_min: spec.n_min,
        lhs: wrap(&spec.lhs),
        rhs: wrap(&spec.rhs),
    }
}

static BUILTIN: OnceLock<Catalog> = OnceLock::new();

/// The built-in catalog, parsed once from [`BUILTIN_SOURCE`].
pub fn builtin_catalog() -> &'static Catalog {
    BUILTIN.get_or_init(|| parse(BUILTIN_SOURCE).expect("built-in catalog parses"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{LaurentPoly, Variable};

    #[test]
    fn builtin_parses_with_expected_counts() {
        let cat = builtin_catalog();
        assert_eq!(cat.spec_count(), 26);
        assert_eq!(cat.items().len(), 28);
        for id in ["A1", "A2", "T3", "L1", "L2", "V1", "V2", "V3", "V4", "V5", "V6",
                   "D1", "D2", "S1", "S2", "S3", "S4", "C1", "C2",
                   "CERT1", "CERT2", "REL1", "REL2", "IND1", "IND2", "TR1", "TR2", "TR3"] {
            assert!(cat.get(id).is_some(), "missing {id}");
        }
        assert_eq!(cat.identity("A1").unwrap().n_min, 0);
        assert_eq!(cat.identity("C2").unwrap().n_min, 1);
        assert_eq!(cat.identity("C1").unwrap().kind, SpecKind::IntegerIdentity);
        assert_eq!(cat.identity("S1").unwrap().kind, SpecKind::FamilyInNK);
        assert!(cat.certificate("CERT1").unwrap().boundary);
        assert!(!cat.certificate("CERT2").unwrap().boundary);
    }

    #[test]
    fn builtin_round_trips_through_serialization() {
        let cat = builtin_catalog();
        let text = cat.to_string();
        let back = parse(&text).unwrap_or_else(|e| panic!("reparse failed: {e}\n---\n{text}"));
        assert_eq!(&back, cat);
    }

    #[test]
    fn instantiate_headline_examples() {
        let cat = builtin_catalog();
        let a1 = cat.identity("A1").unwrap();
        let (l0, r0) = instantiate(a1, 0, None).unwrap();
        assert!(l0.equivalent(&RatFunc::one()));
        assert!(r0.equivalent(&RatFunc::one()));
        // n = 1: both sides equal (1+q)/q
        let (l1, r1) = instantiate(a1, 1, None).unwrap();
        let q = RatFunc::from_poly(LaurentPoly::var(Variable::Q));
        let expected = (&RatFunc::one() + &q).div(&q).unwrap();
        assert!(l1.equivalent(&expected));
        assert!(r1.equivalent(&expected));

        let a2 = cat.identity("A2").unwrap();
        let (l, r) = instantiate(a2, 0, None).unwrap();
        assert!(l.equivalent(&RatFunc::one()));
        assert!(r.equivalent(&RatFunc::one()));

        assert!(matches!(
            instantiate(cat.identity("C2").unwrap(), 0, None),
            Err(EvalError::InstantiationBelowRange { .. })
        ));
    }

    #[test]
    fn rel1_base_term_at_1_1_is_inverse_q() {
        let cat = builtin_catalog();
        let rel = cat.relation("REL1").unwrap();
        let t = rel.base.series.term(1, 0, 1).unwrap();
        let q = RatFunc::from_poly(LaurentPoly::var(Variable::Q));
        assert!(t.equivalent(&q.recip().unwrap()));
    }

    #[test]
    fn apply_subst_wraps_and_identity_is_noop() {
        let cat = builtin_catalog();
        let a1 = cat.identity("A1").unwrap();
        assert_eq!(&apply_subst(a1, &SubstMap::new()), a1);
        let tr = cat.transport("TR1").unwrap();
        let mapped = apply_subst(a1, &tr.map);
        // Per-n sides equal V1's sides.
        let v1 = cat.identity("V1").unwrap();
        for n in 0..=3 {
            let (ml, mr) = instantiate(&mapped, n, None).unwrap();
            let (vl, vr) = instantiate(v1, n, None).unwrap();
            assert!(ml.equivalent(&vl), "lhs n={n}");
            assert!(mr.equivalent(&vr), "rhs n={n}");
        }
    }
}
