//! Chord diagrams, trivalent diagrams, and their relation spaces.

mod chord;
mod four_t;
mod trivalent;

use thiserror::Error;

pub use chord::{double_factorial_odd, enumerate_chord_diagrams, ChordDiagram, DiagramVector};
pub use four_t::{four_t_quotient_dim, four_t_relations, weight_space, WeightSpace};
pub use trivalent::{
    enumerate_trivalent, stu_quotient_dim, stu_relations, TrivalentDiagram, MAX_TRIVALENT_DEGREE,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("not a perfect matching: {0}")]
    NotAMatching(String),
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("degree {0} expected, got {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {n} outside the supported range 1..={max}")]
    DegreeOutOfRange { n: usize, max: usize },
}
