//! Long knots as signed Gauss codes, singular knots and their resolutions.
//!
//! A code lists the crossings met while traversing the long knot from left to
//! right. Tokens are `O<label><sign>` (over), `U<label><sign>` (under) and
//! `S<label>[sign]` (double point). The sign on a double point is the crossing
//! sign obtained by resolving it with the first passage over; it defaults to `+`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagrams::ChordDiagram;

mod corpus;
mod invariants;
mod realize;

pub use corpus::{
    corpus, parse_corpus, render_corpus, singularize, standard_corpus, CorpusEntry, CORPUS_TEXT,
    CORPUS_VERSION,
};
pub use invariants::{
    extend_invariant, framing_number, symbol, v2, writhe, Constant, Framing, KnotInvariant, Symbol,
    V2,
};
pub use realize::{realize, realize_with_seed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotError {
    #[error("bad token {0:?}")]
    Token(String),
    #[error("label {label} occurs {count} times")]
    LabelCount { label: u32, count: usize },
    #[error("label {0} must be passed once over and once under")]
    OverUnder(u32),
    #[error("label {0} has inconsistent signs")]
    SignMismatch(u32),
    #[error("label {0} mixes singular and ordinary passages")]
    MixedKind(u32),
    #[error("code has {0} double points; an ordinary knot is required")]
    Singular(usize),
    #[error("label {0} is not a double point")]
    NotSingular(u32),
    #[error("expected {expected} double points, found {found}")]
    SingularCount { expected: usize, found: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Passage {
    Over,
    Under,
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub label: u32,
    pub passage: Passage,
    pub sign: i8,
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign > 0 { "+" } else { "-" };
        match self.passage {
            Passage::Over => write!(f, "O{}{sign}", self.label),
            Passage::Under => write!(f, "U{}{sign}", self.label),
            Passage::Singular if self.sign > 0 => write!(f, "S{}", self.label),
            Passage::Singular => write!(f, "S{}-", self.label),
        }
    }
}

impl FromStr for Entry {
    type Err = KnotError;

    fn from_str(tok: &str) -> Result<Self, Self::Err> {
        let bad = || KnotError::Token(tok.to_string());
        let mut chars = tok.chars();
        let passage = match chars.next() {
            Some('O') => Passage::Over,
            Some('U') => Passage::Under,
            Some('S') => Passage::Singular,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        let (digits, sign) = match rest.chars().last() {
            Some('+') => (&rest[..rest.len() - 1], 1),
            Some('-') => (&rest[..rest.len() - 1], -1),
            _ if passage == Passage::Singular => (rest, 1),
            _ => return Err(bad()),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let label = digits.parse().map_err(|_| bad())?;
        Ok(Entry {
            label,
            passage,
            sign,
        })
    }
}

fn check_entries(entries: &[Entry]) -> Result<(), KnotError> {
    let mut by_label: BTreeMap<u32, Vec<&Entry>> = BTreeMap::new();
    for e in entries {
        by_label.entry(e.label).or_default().push(e);
    }
    for (&label, es) in &by_label {
        if es.len() != 2 {
            return Err(KnotError::LabelCount {
                label,
                count: es.len(),
            });
        }
        let (a, b) = (es[0], es[1]);
        if a.sign != b.sign {
            return Err(KnotError::SignMismatch(label));
        }
        match (a.passage, b.passage) {
            (Passage::Singular, Passage::Singular) => {}
            (Passage::Singular, _) | (_, Passage::Singular) => {
                return Err(KnotError::MixedKind(label))
            }
            (x, y) if x == y => return Err(KnotError::OverUnder(label)),
            _ => {}
        }
    }
    Ok(())
}

fn write_entries(f: &mut fmt::Formatter<'_>, entries: &[Entry]) -> fmt::Result {
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

fn parse_entries(s: &str) -> Result<Vec<Entry>, KnotError> {
    let entries = s
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<Vec<Entry>, _>>()?;
    check_entries(&entries)?;
    Ok(entries)
}

/// An ordinary long-knot diagram, optionally carrying an explicit framing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussCode {
    entries: Vec<Entry>,
    framing: Option<i64>,
}

impl GaussCode {
    pub fn unknot() -> Self {
        Self::default()
    }

    pub fn new(entries: Vec<Entry>) -> Result<Self, KnotError> {
        check_entries(&entries)?;
        let singular = entries
            .iter()
            .filter(|e| e.passage == Passage::Singular)
            .count();
        if singular > 0 {
            return Err(KnotError::Singular(singular / 2));
        }
        Ok(Self {
            entries,
            framing: None,
        })
    }

    pub fn with_framing(mut self, framing: i64) -> Self {
        self.framing = Some(framing);
        self
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn framing(&self) -> Option<i64> {
        self.framing
    }

    pub fn crossing_count(&self) -> usize {
        self.entries.len() / 2
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.entries)
    }
}

impl FromStr for GaussCode {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_entries(s)?)
    }
}

/// A long-knot diagram some of whose crossings are double points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SingularKnot {
    entries: Vec<Entry>,
}

impl SingularKnot {
    pub fn new(entries: Vec<Entry>) -> Result<Self, KnotError> {
        check_entries(&entries)?;
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Labels of the double points in order of first appearance.
    pub fn singular_labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for e in &self.entries {
            if e.passage == Passage::Singular && !out.contains(&e.label) {
                out.push(e.label);
            }
        }
        out
    }

    /// Number of double points.
    pub fn n(&self) -> usize {
        self.singular_labels().len()
    }

    /// Replaces the double point `label` by an ordinary crossing; `over_first`
    /// picks which passage goes over. Returns the resolved knot and the sign of
    /// the resolution (the sign of the new crossing).
    pub fn resolve_site(
        &self,
        label: u32,
        over_first: bool,
    ) -> Result<(SingularKnot, i64), KnotError> {
        let mut seen = false;
        let mut sign = 0;
        let mut entries = self.entries.clone();
        for e in entries.iter_mut().filter(|e| e.label == label) {
            if e.passage != Passage::Singular {
                return Err(KnotError::NotSingular(label));
            }
            let over = over_first != seen;
            sign = if over_first { e.sign } else { -e.sign };
            e.passage = if over { Passage::Over } else { Passage::Under };
            seen = true;
        }
        if !seen {
            return Err(KnotError::NotSingular(label));
        }
        for e in entries.iter_mut().filter(|e| e.label == label) {
            e.sign = sign;
        }
        Ok((SingularKnot { entries }, sign as i64))
    }

    /// Both resolutions at `label`, positive first.
    pub fn skein_pair(&self, label: u32) -> Result<(SingularKnot, SingularKnot), KnotError> {
        let (a, sa) = self.resolve_site(label, true)?;
        let (b, _) = self.resolve_site(label, false)?;
        Ok(if sa > 0 { (a, b) } else { (b, a) })
    }

    pub fn to_gauss_code(&self) -> Result<GaussCode, KnotError> {
        GaussCode::new(self.entries.clone())
    }

    /// Resolves every double point, in order of first appearance.
    pub fn resolve(&self) -> ResolutionSum {
        self.resolve_in_order(&self.singular_labels())
            .expect("labels are singular")
    }

    /// Resolves the double points in the given site order. The resulting
    /// multiset of signed terms does not depend on the order.
    pub fn resolve_in_order(&self, order: &[u32]) -> Result<ResolutionSum, KnotError> {
        let n = order.len();
        let mut terms = Vec::with_capacity(1 << n);
        // bit b of the mask selects the negative resolution at order[b]
        for mask in 0..1usize << n {
            let mut k = self.clone();
            let mut sign = 1;
            for (bit, &label) in order.iter().enumerate() {
                let (pos, neg) = k.skein_pair(label)?;
                if mask >> bit & 1 == 0 {
                    k = pos;
                } else {
                    k = neg;
                    sign = -sign;
                }
            }
            let found = k.n();
            if found > 0 {
                return Err(KnotError::SingularCount {
                    expected: n,
                    found: n + found,
                });
            }
            terms.push((sign, GaussCode::new(k.entries)?));
        }
        Ok(ResolutionSum { terms })
    }
}

impl From<GaussCode> for SingularKnot {
    fn from(g: GaussCode) -> Self {
        Self { entries: g.entries }
    }
}

impl fmt::Display for SingularKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.entries)
    }
}

impl FromStr for SingularKnot {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self {
            entries: parse_entries(s)?,
        })
    }
}

/// `Σ sign · term` over the `2^n` resolutions of a singular knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionSum {
    pub terms: Vec<(i64, GaussCode)>,
}

impl ResolutionSum {
    /// Terms sorted, for order-independent comparison.
    pub fn sorted_terms(&self) -> Vec<(i64, GaussCode)> {
        let mut t = self.terms.clone();
        t.sort();
        t
    }
}

/// The chord diagram recording which double points are met together.
pub fn chord_diagram_of(k: &SingularKnot) -> ChordDiagram {
    let word: Vec<u32> = k
        .entries
        .iter()
        .filter(|e| e.passage == Passage::Singular)
        .map(|e| e.label)
        .collect();
    ChordDiagram::from_word(&word).expect("checked codes pair every label")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let g: GaussCode = "O1+ U2+ O3+ U1+ O2+ U3+".parse().unwrap();
        assert_eq!(g.to_string(), "O1+ U2+ O3+ U1+ O2+ U3+");
        assert_eq!(g.crossing_count(), 3);
        let s: SingularKnot = "S1 O2- S1+ U2-".parse().unwrap();
        assert_eq!(s.to_string(), "S1 O2- S1 U2-");
        assert_eq!("".parse::<GaussCode>().unwrap(), GaussCode::unknot());
    }

    #[test]
    fn malformed_codes() {
        for bad in [
            "O1+ O1+",
            "O1+ U1-",
            "O1+",
            "X1+",
            "O1 U1",
            "S1 O1+",
            "S1 S1-",
            "O+ U+",
            "O1+ U1+ O1+",
        ] {
            assert!(bad.parse::<SingularKnot>().is_err(), "{bad}");
        }
        assert!("S1 S1".parse::<GaussCode>().is_err());
    }

    #[test]
    fn resolution_signs() {
        let k: SingularKnot = "S1 S1".parse().unwrap();
        let r = k.resolve();
        assert_eq!(r.terms.len(), 2);
        assert_eq!(r.terms[0], (1, "O1+ U1+".parse().unwrap()));
        assert_eq!(r.terms[1], (-1, "U1- O1-".parse().unwrap()));

        let k: SingularKnot = "S1- S1-".parse().unwrap();
        let r = k.resolve();
        assert_eq!(r.terms[0], (1, "U1+ O1+".parse().unwrap()));

        let k: SingularKnot = "S1 S2 S1 S2".parse().unwrap();
        let signs: Vec<i64> = k.resolve().terms.iter().map(|t| t.0).collect();
        assert_eq!(signs, [1, -1, -1, 1]);
        let a = k.resolve_in_order(&[1, 2]).unwrap().sorted_terms();
        let b = k.resolve_in_order(&[2, 1]).unwrap().sorted_terms();
        assert_eq!(a, b);
    }

    #[test]
    fn unsingular_knot_resolves_to_itself() {
        let k: SingularKnot = "O1+ U1+".parse().unwrap();
        let r = k.resolve();
        assert_eq!(r.terms, vec![(1, "O1+ U1+".parse().unwrap())]);
        assert!(k.resolve_site(1, true).is_err());
    }

    #[test]
    fn chord_diagrams_of_codes() {
        let k: SingularKnot = "S1 S2 S1 S2".parse().unwrap();
        assert_eq!(chord_diagram_of(&k).to_string(), "1-3,2-4");
        let k: SingularKnot = "S7 O3+ S2 U3+ S2 S7".parse().unwrap();
        assert_eq!(chord_diagram_of(&k).to_string(), "2-3,1-4");
    }
}
