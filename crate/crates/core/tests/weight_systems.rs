//! Weight systems from an independent presentation of the four-term relation:
//! for three local strands x, y, z of the interval, in any order along it,
//! `[t_xy + t_xz, t_yz] = 0`, where `t_ab` inserts a chord between strands
//! `a` and `b` and products stack chord ends along each strand.

use std::collections::{BTreeMap, HashMap};

use vss_core::diagrams::{
    double_factorial_odd, enumerate_chord_diagrams, four_t_relations, weight_space, ChordDiagram,
};
use vss_core::linalg::{int, kernel_basis, subspace_equal, Rational, SparseMatrix};

/// Words with `m` chords labelled by first appearance, generated independently
/// of the library enumeration.
fn words(m: usize) -> Vec<Vec<usize>> {
    fn go(
        len: usize,
        w: &mut Vec<usize>,
        open: &mut Vec<usize>,
        next: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if w.len() == len {
            out.push(w.clone());
            return;
        }
        let remaining = len - w.len();
        if next * 2 < len && open.len() < remaining {
            w.push(next);
            open.push(next);
            go(len, w, open, next + 1, out);
            open.pop();
            w.pop();
        }
        for i in 0..open.len() {
            let c = open.remove(i);
            w.push(c);
            go(len, w, open, next, out);
            w.pop();
            open.insert(i, c);
        }
    }
    let mut out = Vec::new();
    go(2 * m, &mut Vec::new(), &mut Vec::new(), 0, &mut out);
    out
}

/// `t_ab t_cd` on strands placed at gaps `at` of `base` (strands sharing a gap
/// keep their order). Chord A joins strands a,b and is applied first, so on a
/// shared strand its end comes first.
fn product(
    base: &[usize],
    at: [usize; 3],
    first: (usize, usize),
    second: (usize, usize),
) -> ChordDiagram {
    let (la, lb) = (1000, 1001);
    let mut strands: [Vec<usize>; 3] = Default::default();
    strands[first.0].push(la);
    strands[first.1].push(la);
    strands[second.0].push(lb);
    strands[second.1].push(lb);
    let mut w = Vec::new();
    for g in 0..=base.len() {
        for (s, &gap) in at.iter().enumerate() {
            if gap == g {
                w.extend(strands[s].iter().copied());
            }
        }
        if g < base.len() {
            w.push(base[g]);
        }
    }
    ChordDiagram::from_word(&w).unwrap()
}

fn bracket_relations(n: usize) -> SparseMatrix {
    let basis = enumerate_chord_diagrams(n);
    let index: HashMap<ChordDiagram, usize> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, d)| (d, i))
        .collect();
    let mut m = SparseMatrix::empty(basis.len());
    if n < 2 {
        return m;
    }
    for base in words(n - 2) {
        let gaps = base.len() + 1;
        for gx in 0..gaps {
            for gy in gx..gaps {
                for gz in gy..gaps {
                    let at = [gx, gy, gz];
                    for (x, y, z) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
                        let terms = [
                            (product(&base, at, (x, y), (y, z)), 1),
                            (product(&base, at, (y, z), (x, y)), -1),
                            (product(&base, at, (x, z), (y, z)), 1),
                            (product(&base, at, (y, z), (x, z)), -1),
                        ];
                        let mut row: BTreeMap<usize, i64> = BTreeMap::new();
                        for (d, c) in terms {
                            *row.entry(index[&d]).or_default() += c;
                        }
                        m.push_row(
                            row.into_iter()
                                .filter(|(_, c)| *c != 0)
                                .map(|(i, c)| (i, int(c))),
                        )
                        .unwrap();
                    }
                }
            }
        }
    }
    m
}

#[test]
fn word_generator_counts() {
    for m in 0..=4 {
        assert_eq!(words(m).len() as u64, double_factorial_odd(m));
    }
    for n in 1..=5 {
        assert_eq!(
            enumerate_chord_diagrams(n).len() as u64,
            double_factorial_odd(n)
        );
    }
}

#[test]
fn both_presentations_give_the_same_weight_systems() {
    for n in 0..=4 {
        let oracle = kernel_basis(&bracket_relations(n));
        let ws = weight_space(n);
        assert!(subspace_equal(&oracle, &ws.annihilator).unwrap(), "n = {n}");
    }
}

#[test]
fn weight_dims_match_golden() {
    let golden: BTreeMap<String, usize> =
        serde_json::from_str(include_str!("golden/weight_dims.json")).unwrap();
    for (n, dim) in golden {
        let n: usize = n.parse().unwrap();
        assert_eq!(kernel_basis(&bracket_relations(n)).dim(), dim);
        assert_eq!(weight_space(n).dim(), dim);
    }
}

#[test]
fn annihilator_kills_every_row() {
    for n in 2..=4 {
        let ws = weight_space(n);
        let rows = four_t_relations(n);
        for v in ws.annihilator.dense_basis() {
            let values: Vec<Rational> = v;
            assert!(ws.violations(&values, &rows).is_empty());
        }
    }
}

#[test]
fn isolated_chord_functional_survives() {
    // a weight system may be nonzero on a diagram with an isolated chord
    for n in 1..=4 {
        let ws = weight_space(n);
        let isolated: Vec<bool> = ws
            .basis_diagrams
            .iter()
            .map(|d| d.has_isolated_chord())
            .collect();
        assert!(ws
            .annihilator
            .dense_basis()
            .iter()
            .any(|v| v.iter().zip(&isolated).any(|(x, &iso)| iso && *x != int(0))));
    }
}
