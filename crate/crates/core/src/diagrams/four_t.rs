//! Four-term relations and weight systems.
//!
//! A relation instance is a diagram in which an end `e` of chord `B` sits next
//! to an end of another chord `A = (a, a')`. Removing `e` and re-inserting it
//! just before and just after each end of `A` gives four diagrams, and
//!
//! ```text
//! D(e before a) - D(e after a) - D(e after a') + D(e before a') = 0.
//! ```

use std::collections::HashMap;

use super::chord::{enumerate_chord_diagrams, ChordDiagram};
use crate::linalg::{int, kernel_basis, rank, Rational, SparseMatrix, Subspace};

/// Inserts a point labelled `label` into `word` so that it becomes position `gap`
/// (0-based), then reads off the chord diagram.
pub(crate) fn insert_at(word: &[usize], gap: usize, label: usize) -> ChordDiagram {
    let mut w = Vec::with_capacity(word.len() + 1);
    w.extend_from_slice(&word[..gap]);
    w.push(label);
    w.extend_from_slice(&word[gap..]);
    ChordDiagram::from_word(&w).expect("insertion keeps a matching")
}

/// The four signed diagrams obtained by sliding the end of chord `moving`
/// (already removed from `word`) around the two ends of chord `fixed`.
pub(crate) fn four_term(word: &[usize], moving: usize, fixed: usize) -> [(ChordDiagram, i64); 4] {
    let ends: Vec<usize> = word
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == fixed)
        .map(|(p, _)| p)
        .collect();
    let (a, a2) = (ends[0], ends[1]);
    [
        (insert_at(word, a, moving), 1),
        (insert_at(word, a + 1, moving), -1),
        (insert_at(word, a2 + 1, moving), -1),
        (insert_at(word, a2, moving), 1),
    ]
}

pub(crate) fn diagram_index(basis: &[ChordDiagram]) -> HashMap<ChordDiagram, usize> {
    basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, d)| (d, i))
        .collect()
}

/// One row per (diagram, moving chord end, adjacent end of another chord).
/// Columns follow [`enumerate_chord_diagrams`]. Empty for `n < 2`.
pub fn four_t_relations(n: usize) -> SparseMatrix {
    let basis = enumerate_chord_diagrams(n);
    let index = diagram_index(&basis);
    let mut m = SparseMatrix::empty(basis.len());
    if n < 2 {
        return m;
    }
    for d in &basis {
        let word = d.word();
        for e in 0..word.len() {
            let moving = word[e];
            let neighbours = [e.checked_sub(1), Some(e + 1).filter(|&x| x < word.len())];
            for x in neighbours.into_iter().flatten() {
                let fixed = word[x];
                if fixed == moving {
                    continue;
                }
                let mut rest = word.clone();
                rest.remove(e);
                let row = four_term(&rest, moving, fixed)
                    .into_iter()
                    .map(|(diag, c)| (index[&diag], int(c)));
                m.push_row(row).expect("columns in range");
            }
        }
    }
    m
}

/// The space of weight systems of degree `n`: functionals on chord diagrams
/// that vanish on every four-term relation.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub n: usize,
    pub basis_diagrams: Vec<ChordDiagram>,
    pub annihilator: Subspace,
    pub relation_rank: usize,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.annihilator.dim()
    }

    /// Evaluates a functional, given by its values on `basis_diagrams`, on every relation row.
    pub fn violations(&self, values: &[Rational], relations: &SparseMatrix) -> Vec<usize> {
        relations
            .mul_vec(values)
            .expect("values indexed by the diagram basis")
            .iter()
            .enumerate()
            .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn weight_space(n: usize) -> WeightSpace {
    let relations = four_t_relations(n);
    WeightSpace {
        n,
        basis_diagrams: enumerate_chord_diagrams(n),
        annihilator: kernel_basis(&relations),
        relation_rank: rank(&relations),
    }
}

/// `dim(Q[CD_n] / 4T)`; equal to the weight-space dimension.
pub fn four_t_quotient_dim(n: usize) -> usize {
    let relations = four_t_relations(n);
    relations.cols() - rank(&relations)
}
