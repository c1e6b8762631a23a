//! The shipped knot corpus: a few classical knots, knots obtained from them
//! by turning crossings into double points, and realizations of every chord
//! diagram with at most three chords.

use std::fmt::Write;

use super::{realize_with_seed, GaussCode, KnotError, Passage, SingularKnot};
use crate::diagrams::enumerate_chord_diagrams;

pub const CORPUS_VERSION: u32 = 1;
pub const CORPUS_TEXT: &str = include_str!("../../data/corpus.txt");

const BASE: [(&str, &str); 4] = [
    ("unknot", ""),
    ("trefoil+", "O1+ U2+ O3+ U1+ O2+ U3+"),
    ("trefoil-", "O1- U2- O3- U1- O2- U3-"),
    ("figure-eight", "O1- U2+ O3+ U1- O4- U3+ O2+ U4-"),
];
const SEEDS: u64 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub knot: SingularKnot,
}

/// Turns the given crossings into double points. The double point keeps the
/// crossing as its resolution with the same sign.
pub fn singularize(code: &GaussCode, labels: &[u32]) -> SingularKnot {
    let mut entries = code.entries().to_vec();
    for &label in labels {
        let first = entries
            .iter()
            .find(|e| e.label == label)
            .copied()
            .expect("label present in code");
        let sign = if first.passage == Passage::Over {
            first.sign
        } else {
            -first.sign
        };
        for e in entries.iter_mut().filter(|e| e.label == label) {
            e.passage = Passage::Singular;
            e.sign = sign;
        }
    }
    SingularKnot::new(entries).expect("singularizing keeps labels paired")
}

/// Builds the corpus from scratch.
pub fn standard_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (name, code) in BASE {
        out.push(CorpusEntry {
            name: name.to_string(),
            knot: code.parse().expect("base codes are well formed"),
        });
    }
    for (name, code) in &BASE[1..] {
        let g: GaussCode = code.parse().expect("base codes are well formed");
        let labels: Vec<u32> = (1..=g.crossing_count() as u32).collect();
        for size in 1..=3 {
            for subset in itertools::Itertools::combinations(labels.iter().copied(), size) {
                let tag: Vec<String> = subset.iter().map(u32::to_string).collect();
                out.push(CorpusEntry {
                    name: format!("{name}/S{}", tag.join(",")),
                    knot: singularize(&g, &subset),
                });
            }
        }
    }
    for n in 1..=3 {
        for d in enumerate_chord_diagrams(n) {
            for seed in 0..SEEDS {
                out.push(CorpusEntry {
                    name: format!("realize[{d}]#{seed}"),
                    knot: realize_with_seed(&d, seed),
                });
            }
        }
    }
    out
}

pub fn render_corpus(entries: &[CorpusEntry]) -> String {
    let mut s = format!("# long knot corpus\nversion {CORPUS_VERSION}\n");
    for e in entries {
        writeln!(s, "{}\t{}", e.name, e.knot).expect("writing to a string");
    }
    s
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, KnotError> {
    let mut out = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("version ") || line.trim().is_empty() {
            continue;
        }
        let (name, code) = line
            .split_once('\t')
            .ok_or_else(|| KnotError::Token(line.to_string()))?;
        out.push(CorpusEntry {
            name: name.to_string(),
            knot: code.parse()?,
        });
    }
    Ok(out)
}

/// The shipped corpus.
pub fn corpus() -> Vec<CorpusEntry> {
    parse_corpus(CORPUS_TEXT).expect("shipped corpus parses")
}
