use std::collections::BTreeMap;

use num_traits::Zero;

use super::{realize, GaussCode, Passage, SingularKnot};
use crate::diagrams::{enumerate_chord_diagrams, four_t_relations, ChordDiagram};
use crate::linalg::{int, Rational};

/// A knot invariant evaluated on ordinary long-knot codes.
pub trait KnotInvariant {
    fn eval(&self, k: &GaussCode) -> Rational;
}

impl<F: Fn(&GaussCode) -> Rational> KnotInvariant for F {
    fn eval(&self, k: &GaussCode) -> Rational {
        self(k)
    }
}

/// The framing number of the blackboard framing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Framing;

/// The degree-two invariant.
#[derive(Clone, Copy, Debug, Default)]
pub struct V2;

#[derive(Clone, Debug)]
pub struct Constant(pub Rational);

impl KnotInvariant for Framing {
    fn eval(&self, k: &GaussCode) -> Rational {
        framing_number(k)
    }
}

impl KnotInvariant for V2 {
    fn eval(&self, k: &GaussCode) -> Rational {
        v2(k)
    }
}

impl KnotInvariant for Constant {
    fn eval(&self, _: &GaussCode) -> Rational {
        self.0.clone()
    }
}

/// Sum of crossing signs.
pub fn writhe(k: &GaussCode) -> i64 {
    k.entries()
        .iter()
        .filter(|e| e.passage == Passage::Over)
        .map(|e| e.sign as i64)
        .sum()
}

/// The stored framing if present, else the writhe.
pub fn framing_number(k: &GaussCode) -> Rational {
    int(k.framing().unwrap_or_else(|| writhe(k)))
}

/// Counts pairs of crossings `c, d` met in the order `c d c d` where `c` is
/// first met over and `d` first met under, weighted by the product of signs.
pub fn v2(k: &GaussCode) -> Rational {
    let mut first: BTreeMap<u32, usize> = BTreeMap::new();
    let mut spans = Vec::new();
    for (pos, e) in k.entries().iter().enumerate() {
        match first.get(&e.label) {
            None => {
                first.insert(e.label, pos);
            }
            Some(&a) => {
                let e0 = k.entries()[a];
                spans.push((a, pos, e0.passage == Passage::Over, e.sign as i64));
            }
        }
    }
    let mut total = 0;
    for &(ac, bc, c_over, sc) in &spans {
        if !c_over {
            continue;
        }
        for &(ad, bd, d_over, sd) in &spans {
            if !d_over && ac < ad && ad < bc && bc < bd {
                total += sc * sd;
            }
        }
    }
    int(total)
}

/// `Σ sign · V(term)` over all resolutions of the double points.
pub fn extend_invariant<V: KnotInvariant + ?Sized>(v: &V, k: &SingularKnot) -> Rational {
    k.resolve()
        .terms
        .iter()
        .map(|(s, code)| int(*s) * v.eval(code))
        .sum()
}

/// The functional `D ↦ V(K_D)` on chord diagrams with `n` chords.
#[derive(Clone, Debug)]
pub struct Symbol {
    pub n: usize,
    pub diagrams: Vec<ChordDiagram>,
    pub values: Vec<Rational>,
    /// Four-term rows on which the functional is nonzero.
    pub violations: Vec<usize>,
}

impl Symbol {
    pub fn is_weight_system(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

pub fn symbol<V: KnotInvariant + ?Sized>(v: &V, n: usize) -> Symbol {
    let diagrams = enumerate_chord_diagrams(n);
    let values: Vec<Rational> = diagrams
        .iter()
        .map(|d| extend_invariant(v, &realize(d)))
        .collect();
    let violations = four_t_relations(n)
        .mul_vec(&values)
        .expect("values indexed by diagrams")
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect();
    Symbol {
        n,
        diagrams,
        values,
        violations,
    }
}
