use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::DiagramError;
use crate::linalg::Rational;

/// A perfect matching of the points `1..=2n` on an oriented interval.
///
/// Chords are stored as `(i, j)` with `i < j`, sorted by `j`. Two diagrams are
/// equal exactly when they have the same matching.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChordDiagramJson", into = "ChordDiagramJson")]
pub struct ChordDiagram {
    n: usize,
    chords: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct ChordDiagramJson {
    n: usize,
    chords: Vec<[usize; 2]>,
}

impl TryFrom<ChordDiagramJson> for ChordDiagram {
    type Error = DiagramError;

    fn try_from(j: ChordDiagramJson) -> Result<Self, Self::Error> {
        let d = ChordDiagram::from_pairs(j.chords.iter().map(|c| (c[0], c[1])))?;
        if d.n != j.n {
            return Err(DiagramError::Malformed(format!(
                "declared n = {} but {} chords given",
                j.n, d.n
            )));
        }
        Ok(d)
    }
}

impl From<ChordDiagram> for ChordDiagramJson {
    fn from(d: ChordDiagram) -> Self {
        Self {
            n: d.n,
            chords: d.chords.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

impl ChordDiagram {
    pub fn empty() -> Self {
        Self {
            n: 0,
            chords: Vec::new(),
        }
    }

    /// Builds a diagram from unordered pairs; they must partition `1..=2n`.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, DiagramError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut chords: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let n = chords.len();
        let mut seen = vec![false; 2 * n + 1];
        for &(i, j) in &chords {
            if i == j || i == 0 || j > 2 * n {
                return Err(DiagramError::NotAMatching(format!("bad chord {i}-{j}")));
            }
            for p in [i, j] {
                if seen[p] {
                    return Err(DiagramError::NotAMatching(format!("point {p} used twice")));
                }
                seen[p] = true;
            }
        }
        chords.sort_by_key(|&(i, j)| (j, i));
        Ok(Self { n, chords })
    }

    /// Builds a diagram from a word: `labels[p]` names the chord through point `p + 1`.
    /// Each label must occur exactly twice.
    pub fn from_word<T: Ord + Clone>(labels: &[T]) -> Result<Self, DiagramError> {
        let mut pos: BTreeMap<T, Vec<usize>> = BTreeMap::new();
        for (p, l) in labels.iter().enumerate() {
            pos.entry(l.clone()).or_default().push(p + 1);
        }
        let mut pairs = Vec::with_capacity(pos.len());
        for v in pos.values() {
            if v.len() != 2 {
                return Err(DiagramError::NotAMatching(format!(
                    "a label occurs {} times",
                    v.len()
                )));
            }
            pairs.push((v[0], v[1]));
        }
        Self::from_pairs(pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }

    /// `partners()[p]` is the point matched with `p` (index 0 unused).
    pub fn partners(&self) -> Vec<usize> {
        let mut out = vec![0; 2 * self.n + 1];
        for &(i, j) in &self.chords {
            out[i] = j;
            out[j] = i;
        }
        out
    }

    /// Chord index (position in `chords()`) through each point, 0-based positions.
    pub fn word(&self) -> Vec<usize> {
        let mut w = vec![0; 2 * self.n];
        for (c, &(i, j)) in self.chords.iter().enumerate() {
            w[i - 1] = c;
            w[j - 1] = c;
        }
        w
    }

    /// True if some chord joins two neighbouring points.
    pub fn has_isolated_chord(&self) -> bool {
        self.chords.iter().any(|&(i, j)| j == i + 1)
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .chords
            .iter()
            .map(|(i, j)| format!("{i}-{j}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CD[{self}]")
    }
}

impl FromStr for ChordDiagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut pairs = Vec::new();
        for part in s.split(',') {
            let (a, b) = part
                .split_once('-')
                .ok_or_else(|| DiagramError::Malformed(part.to_string()))?;
            let a = a
                .trim()
                .parse()
                .map_err(|_| DiagramError::Malformed(part.to_string()))?;
            let b = b
                .trim()
                .parse()
                .map_err(|_| DiagramError::Malformed(part.to_string()))?;
            pairs.push((a, b));
        }
        Self::from_pairs(pairs)
    }
}

/// All chord diagrams with `n` chords, sorted. There are `(2n-1)!!` of them.
pub fn enumerate_chord_diagrams(n: usize) -> Vec<ChordDiagram> {
    fn go(free: &mut Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<ChordDiagram>) {
        if free.is_empty() {
            out.push(ChordDiagram::from_pairs(acc.iter().copied()).expect("valid matching"));
            return;
        }
        let first = free.remove(0);
        for k in 0..free.len() {
            let other = free.remove(k);
            acc.push((first, other));
            go(free, acc, out);
            acc.pop();
            free.insert(k, other);
        }
        free.insert(0, first);
    }
    let mut out = Vec::new();
    let mut free: Vec<usize> = (1..=2 * n).collect();
    go(&mut free, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `(2n-1)!!`, with the empty product for `n = 0`.
pub fn double_factorial_odd(n: usize) -> u64 {
    (1..=n as u64).map(|k| 2 * k - 1).product()
}

/// A finite formal combination of chord diagrams of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramVector {
    n: usize,
    coeffs: BTreeMap<ChordDiagram, Rational>,
}

impl DiagramVector {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, d: ChordDiagram, c: Rational) -> Result<(), DiagramError> {
        if d.n() != self.n {
            return Err(DiagramError::DegreeMismatch(self.n, d.n()));
        }
        let slot = self.coeffs.entry(d.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&d);
        }
        Ok(())
    }

    pub fn coeff(&self, d: &ChordDiagram) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChordDiagram, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coordinates against an ordered diagram basis.
    pub fn to_dense(&self, basis: &[ChordDiagram]) -> Vec<Rational> {
        basis.iter().map(|d| self.coeff(d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_chord_diagrams(0), vec![ChordDiagram::empty()]);
        let one = enumerate_chord_diagrams(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "1-2");
        let two: Vec<String> = enumerate_chord_diagrams(2)
            .iter()
            .map(|d| d.to_string())
            .collect();
        assert_eq!(two, ["1-2,3-4", "1-3,2-4", "2-3,1-4"]);
    }

    #[test]
    fn text_and_json_formats() {
        let d: ChordDiagram = "1-4,2-5,3-6".parse().unwrap();
        assert_eq!(d.to_string(), "1-4,2-5,3-6");
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"n":3,"chords":[[1,4],[2,5],[3,6]]}"#
        );
        let back: ChordDiagram =
            serde_json::from_str(r#"{"n":3,"chords":[[5,2],[1,4],[3,6]]}"#).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<ChordDiagram>(r#"{"n":2,"chords":[[1,2]]}"#).is_err());
        // unsorted input is canonicalised
        let e: ChordDiagram = "4-1,3-2".parse().unwrap();
        assert_eq!(e.to_string(), "2-3,1-4");
    }

    #[test]
    fn rejects_non_matchings() {
        assert!("1-2,2-3".parse::<ChordDiagram>().is_err());
        assert!("1-5".parse::<ChordDiagram>().is_err());
        assert!("1-1".parse::<ChordDiagram>().is_err());
        assert!("1+2".parse::<ChordDiagram>().is_err());
    }

    #[test]
    fn word_round_trip() {
        for d in enumerate_chord_diagrams(3) {
            assert_eq!(ChordDiagram::from_word(&d.word()).unwrap(), d);
        }
        assert!(ChordDiagram::from_word(&[0, 0, 0]).is_err());
    }

    #[test]
    fn diagram_vector_cancels() {
        let d: ChordDiagram = "1-2".parse().unwrap();
        let mut v = DiagramVector::zero(1);
        v.add_term(d.clone(), crate::linalg::int(2)).unwrap();
        v.add_term(d.clone(), crate::linalg::int(-2)).unwrap();
        assert!(v.is_zero());
        assert!(v
            .add_term(ChordDiagram::empty(), crate::linalg::int(1))
            .is_err());
    }
}
