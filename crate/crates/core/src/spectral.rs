//! The normalized E1 page of the cohomology spectral sequence of the
//! cosimplicial model for long knots, its first differential, and the
//! comparison of the E2 diagonal with weight systems.
//!
//! `E1^{-p,q}` is the normalized cohomology `H^q_norm(F(p))`. The coface
//! `∂^i : F(p-1) -> F(p)` doubles point `i`; its pullback sends `a_ab` to the
//! generator on the merged indices, and to zero when the two indices merge.
//! For the end cofaces `∂^0` and `∂^p`, generators touching the first
//! (respectively last) point go to zero.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{self, basis_index, normalized_basis, rewrite, CohomologyError, Monomial};
use crate::diagrams::{enumerate_chord_diagrams, weight_space, ChordDiagram, DiagramError};
use crate::linalg::{int, kernel_basis, rank, subspace_equal, Rational, SparseMatrix, Subspace};

/// Largest configuration size for which page entries are computed.
pub const MAX_P: usize = 8;
/// Largest chord count for the diagonal comparison.
pub const MAX_DIAGONAL_N: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("coface index {i} outside 0..={p}")]
    CofaceIndex { i: usize, p: usize },
    #[error("configuration size {p} outside 1..={max}")]
    SizeOutOfRange { p: usize, max: usize },
    #[error("diagonal degree {n} outside 1..={max}")]
    DiagonalOutOfRange { n: usize, max: usize },
    #[error("monomial {0} is not a perfect matching")]
    NotAMatching(String),
}

fn check_p(p: usize) -> Result<(), SpectralError> {
    if p == 0 || p > MAX_P {
        Err(SpectralError::SizeOutOfRange { p, max: MAX_P })
    } else {
        Ok(())
    }
}

fn check_n(n: usize) -> Result<(), SpectralError> {
    if n == 0 || n > MAX_DIAGONAL_N {
        Err(SpectralError::DiagonalOutOfRange {
            n,
            max: MAX_DIAGONAL_N,
        })
    } else {
        Ok(())
    }
}

/// Image of a monomial of `F(p)` under `(∂^i)^*`, as raw pairs on `F(p-1)`,
/// or `None` when it vanishes.
fn coface_raw(i: usize, p: usize, m: &Monomial) -> Option<Vec<(usize, usize)>> {
    m.factors()
        .iter()
        .map(|&(a, b)| {
            if i == 0 {
                (a != 1).then(|| (a - 1, b - 1))
            } else if i == p {
                (b != p).then_some((a, b))
            } else {
                let merge = |x: usize| if x <= i { x } else { x - 1 };
                let (a2, b2) = (merge(a), merge(b));
                (a2 != b2).then_some((a2, b2))
            }
        })
        .collect()
}

/// Matrix of `(∂^i)^*` between the given monomial bases of `F(p)` (columns)
/// and `F(p-1)` (rows). Terms outside the row basis are dropped, which is
/// the projection to the normalized quotient when the row basis is normalized.
fn coface_between(
    i: usize,
    p: usize,
    cols: &[Monomial],
    rows: &[Monomial],
) -> Result<SparseMatrix, SpectralError> {
    let index = basis_index(rows);
    let mut triplets = Vec::new();
    for (c, m) in cols.iter().enumerate() {
        let Some(raw) = coface_raw(i, p, m) else {
            continue;
        };
        for (mono, v) in rewrite(p - 1, &raw)?.terms() {
            if let Some(&r) = index.get(mono) {
                triplets.push((r, c, v.clone()));
            }
        }
    }
    Ok(SparseMatrix::from_triplets(rows.len(), cols.len(), triplets).expect("indices in range"))
}

/// A coface pullback on normalized bases.
#[derive(Clone, Debug)]
pub struct CofaceMatrix {
    pub i: usize,
    pub p: usize,
    pub q: usize,
    /// Rows: `normalized_basis(p - 1, q)`; columns: `normalized_basis(p, q)`.
    pub matrix: SparseMatrix,
}

pub fn coface_pullback(i: usize, p: usize, q: usize) -> Result<CofaceMatrix, SpectralError> {
    check_p(p)?;
    if i > p {
        return Err(SpectralError::CofaceIndex { i, p });
    }
    let cols = normalized_basis(p, q)?.monomials;
    let rows = normalized_basis(p - 1, q)?.monomials;
    Ok(CofaceMatrix {
        i,
        p,
        q,
        matrix: coface_between(i, p, &cols, &rows)?,
    })
}

/// `(∂^i)^* : H^q(F(p)) -> H^q(F(p-1))` on the full admissible bases.
pub fn coface_pullback_full(i: usize, p: usize, q: usize) -> Result<SparseMatrix, SpectralError> {
    check_p(p)?;
    if i > p {
        return Err(SpectralError::CofaceIndex { i, p });
    }
    coface_between(
        i,
        p,
        &cohomology::basis(p, q)?,
        &cohomology::basis(p - 1, q)?,
    )
}

fn alternating_sum(p: usize, q: usize, full: bool) -> Result<SparseMatrix, SpectralError> {
    let mut acc: Option<SparseMatrix> = None;
    for i in 0..=p {
        let m = if full {
            coface_pullback_full(i, p, q)?
        } else {
            coface_pullback(i, p, q)?.matrix
        };
        let term = if i % 2 == 0 { m } else { m.scaled(&int(-1)) };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term).expect("cofaces share a shape"),
        });
    }
    Ok(acc.expect("p >= 1 gives at least two cofaces"))
}

/// The first differential `d1 = Σ (-1)^i (∂^i)^* : E1^{-p,q} -> E1^{-p+1,q}`.
pub fn d1_matrix(p: usize, q: usize) -> Result<SparseMatrix, SpectralError> {
    alternating_sum(p, q, false)
}

/// The same alternating sum on the unnormalized complex.
pub fn d1_matrix_full(p: usize, q: usize) -> Result<SparseMatrix, SpectralError> {
    alternating_sum(p, q, true)
}

pub fn e1_dim(p: usize, q: usize) -> Result<usize, SpectralError> {
    if q % 2 == 1 {
        return Ok(0);
    }
    Ok(normalized_basis(p, q)?.dim())
}

/// `dim E2^{-p,q}`: kernel of the outgoing `d1` modulo the incoming image.
pub fn e2_dim(p: usize, q: usize) -> Result<usize, SpectralError> {
    if p > MAX_P {
        return Err(SpectralError::SizeOutOfRange { p, max: MAX_P });
    }
    if q % 2 == 1 {
        return Ok(0);
    }
    let here = e1_dim(p, q)?;
    let kernel = if p == 0 {
        here
    } else {
        here - rank(&d1_matrix(p, q)?)
    };
    // the source of the incoming map vanishes once q < p + 1
    let image = if q < p + 1 || p + 1 > MAX_P {
        0
    } else {
        rank(&d1_matrix(p + 1, q)?)
    };
    Ok(kernel - image)
}

/// `E2^{-2n,2n}` as a subspace of the normalized `E1^{-2n,2n}` coordinates.
/// Nothing comes in, since `E1^{-2n-1,2n} = 0`.
pub fn e2_diagonal(n: usize) -> Result<Subspace, SpectralError> {
    check_n(n)?;
    Ok(kernel_basis(&d1_matrix(2 * n, 2 * n)?))
}

/// Reads a perfect-matching monomial as the chord diagram with the same pairs.
pub fn matching_to_diagram(m: &Monomial) -> Result<ChordDiagram, SpectralError> {
    if !m.is_perfect_matching(m.degree()) {
        return Err(SpectralError::NotAMatching(m.to_string()));
    }
    Ok(ChordDiagram::from_pairs(m.factors().iter().copied())?)
}

/// Sign of the permutation `i1 j1 i2 j2 ... in jn` read off the factors of a
/// perfect matching. Reordering factors moves pairs, so the order is irrelevant.
pub fn matching_sign(m: &Monomial) -> i64 {
    let word: Vec<usize> = m.factors().iter().flat_map(|&(i, j)| [i, j]).collect();
    let inversions = (0..word.len())
        .flat_map(|a| (a + 1..word.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| word[a] > word[b])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// How homology classes of matchings are identified with chord diagrams.
///
/// Labelings that differ by `τ` transpositions of subscripts differ by
/// `(-1)^τ`; fixing the identity labeling `1 2 ... 2n` as `+1` makes the
/// class of a matching `matching_sign` times its diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignConvention {
    #[default]
    Standard,
    /// The identity labeling is taken as `-1` instead.
    Negated,
    /// Every matching is taken with `+1`, ignoring transpositions.
    Unsigned,
}

impl SignConvention {
    pub fn sign(self, m: &Monomial) -> i64 {
        match self {
            Self::Standard => matching_sign(m),
            Self::Negated => -matching_sign(m),
            Self::Unsigned => 1,
        }
    }

    fn signs(self, n: usize) -> Result<Vec<Rational>, SpectralError> {
        Ok(normalized_basis(2 * n, 2 * n)?
            .monomials
            .iter()
            .map(|m| int(self.sign(m)))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalReport {
    pub n: usize,
    pub dim_e1: usize,
    pub dim_e2: usize,
    pub dim_w: usize,
    pub iso: bool,
    /// `dim H^0(T*_{2k})` for `k = 0..=n`.
    pub cotower: Vec<usize>,
    /// `dim H^0(T*_{2k+1})` for `k = 0..=n`.
    pub cotower_odd: Vec<usize>,
}

impl DiagonalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }
}

/// Dimension of the diagonal entry `E2^{-j,j}`; odd entries vanish because
/// the cohomology of `F(j)` is concentrated in even degrees.
pub fn diagonal_e2_dim(j: usize) -> Result<usize, SpectralError> {
    if j % 2 == 1 {
        return Ok(0);
    }
    if j == 0 {
        return e2_dim(0, 0);
    }
    Ok(e2_diagonal(j / 2)?.dim())
}

/// `dim H^0(T*_r) = Σ_{j <= r} dim E2^{-j,j}`, using the collapse on the diagonal.
pub fn cotower_dims(max_r: usize) -> Result<Vec<usize>, SpectralError> {
    let mut out = Vec::with_capacity(max_r + 1);
    let mut total = 0;
    for j in 0..=max_r {
        total += diagonal_e2_dim(j)?;
        out.push(total);
    }
    Ok(out)
}

/// Builds the coordinate map from the normalized `E1^{-2n,2n}` basis to the
/// chord-diagram basis.
pub fn matching_transport(n: usize) -> Result<Vec<usize>, SpectralError> {
    let nb = normalized_basis(2 * n, 2 * n)?;
    let diagrams = enumerate_chord_diagrams(n);
    let index: HashMap<&ChordDiagram, usize> =
        diagrams.iter().enumerate().map(|(i, d)| (d, i)).collect();
    nb.monomials
        .iter()
        .map(|m| Ok(index[&matching_to_diagram(m)?]))
        .collect()
}

pub fn verify_prop_e2(n: usize) -> Result<DiagonalReport, SpectralError> {
    verify_prop_e2_with(n, SignConvention::Standard)
}

/// Transports `ker d1` on the diagonal to functionals on chord diagrams and
/// compares with the 4T annihilator.
pub fn verify_prop_e2_with(
    n: usize,
    convention: SignConvention,
) -> Result<DiagonalReport, SpectralError> {
    check_n(n)?;
    let kernel = e2_diagonal(n)?;
    let perm = matching_transport(n)?;
    let signs = convention.signs(n)?;
    let transported = kernel
        .transport(&perm, &signs)
        .expect("transport is a bijection on coordinates");
    let ws = weight_space(n);
    let iso = subspace_equal(&transported, &ws.annihilator).unwrap_or(false);
    let all = cotower_dims(2 * n + 1)?;
    Ok(DiagonalReport {
        n,
        dim_e1: e1_dim(2 * n, 2 * n)?,
        dim_e2: kernel.dim(),
        dim_w: ws.dim(),
        iso,
        cotower: all.iter().step_by(2).copied().collect(),
        cotower_odd: all.iter().skip(1).step_by(2).copied().collect(),
    })
}

/// Shape of the rows of `d1` on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowPattern {
    pub rows: usize,
    pub max_nonzeros: usize,
    pub four_term_rows: usize,
    /// Rows that fail the four-term shape.
    pub bad_rows: Vec<usize>,
}

/// Checks that each row of `d1 : E1^{-2n,2n} -> E1^{-2n+1,2n}`, with columns
/// read as signed chord diagrams, is a signed sum `a1 - a2 - a3 + a4`,
/// allowing coincident terms to merge:
/// at most four nonzeros, entries summing to zero, total weight at most four,
/// and exactly two `+1` and two `-1` when four entries are present.
pub fn four_term_row_pattern(n: usize) -> Result<RowPattern, SpectralError> {
    check_n(n)?;
    let signs = SignConvention::Standard.signs(n)?;
    let d1 = d1_matrix(2 * n, 2 * n)?;
    let mut bad_rows = Vec::new();
    let mut max_nonzeros = 0;
    let mut four_term_rows = 0;
    for (r, row) in d1.row_iter().enumerate() {
        let row: Vec<(usize, Rational)> = row.iter().map(|(c, v)| (*c, v * &signs[*c])).collect();
        max_nonzeros = max_nonzeros.max(row.len());
        let total: Rational = row.iter().map(|(_, v)| v.clone()).sum();
        let weight: Rational = row.iter().map(|(_, v)| v.abs()).sum();
        let plus = row.iter().filter(|(_, v)| *v == int(1)).count();
        let minus = row.iter().filter(|(_, v)| *v == int(-1)).count();
        let ok = row.len() <= 4
            && total.is_zero()
            && weight <= int(4)
            && (row.len() < 4 || (plus == 2 && minus == 2));
        if row.len() == 4 && ok {
            four_term_rows += 1;
        }
        if !ok {
            bad_rows.push(r);
        }
    }
    Ok(RowPattern {
        rows: d1.rows(),
        max_nonzeros,
        four_term_rows,
        bad_rows,
    })
}

/// Outcome of comparing the chord-diagram presentation of normalized
/// homology with the normalized cohomology basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyCheck {
    pub p: usize,
    pub q: usize,
    pub generators: usize,
    pub presentation_dim: usize,
    pub normalized_dim: usize,
    /// Every relation vector pairs to zero with the cohomology classes.
    pub relations_respected: bool,
}

impl HomologyCheck {
    pub fn passed(&self) -> bool {
        self.relations_respected && self.presentation_dim == self.normalized_dim
    }
}

/// Builds the module spanned by labelled diagrams with `q/2` oriented chords
/// on `p` vertices (every vertex used) modulo: repeated chords vanish,
/// reversing a chord negates, and the cyclic three-term relation
/// `{i→j, j→k} + {j→k, k→i} + {k→i, i→j} = 0`. Loops are never generated.
pub fn homology_presentation_check(p: usize, q: usize) -> Result<HomologyCheck, SpectralError> {
    if p > 6 {
        return Err(SpectralError::SizeOutOfRange { p, max: 6 });
    }
    if q % 2 == 1 {
        return Err(CohomologyError::OddDegree(q).into());
    }
    let chords = q / 2;
    let oriented: Vec<(usize, usize)> = (1..=p)
        .flat_map(|a| (1..=p).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let covers = |set: &BTreeSet<(usize, usize)>| {
        (1..=p).all(|v| set.iter().any(|&(a, b)| a == v || b == v))
    };
    let generators: Vec<BTreeSet<(usize, usize)>> =
        itertools::Itertools::combinations(oriented.iter().copied(), chords)
            .map(|c| c.into_iter().collect::<BTreeSet<_>>())
            .filter(|s| covers(s))
            .collect();
    let index: HashMap<&BTreeSet<(usize, usize)>, usize> =
        generators.iter().enumerate().map(|(i, g)| (g, i)).collect();

    let mut relations = SparseMatrix::empty(generators.len());
    for g in &generators {
        let gi = index[g];
        let unordered: BTreeSet<(usize, usize)> =
            g.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        if unordered.len() < g.len() {
            relations.push_row([(gi, int(1))]).expect("in range");
            continue;
        }
        for &(a, b) in g {
            let mut flipped = g.clone();
            flipped.remove(&(a, b));
            flipped.insert((b, a));
            relations
                .push_row([(gi, int(1)), (index[&flipped], int(1))])
                .expect("in range");
        }
    }
    // cyclic three-term relations, completed by every admissible remainder
    for rest in
        itertools::Itertools::combinations(oriented.iter().copied(), chords.saturating_sub(2))
    {
        if chords < 2 {
            break;
        }
        for i in 1..=p {
            for j in (i + 1)..=p {
                for k in (j + 1)..=p {
                    let cyc = [(i, j), (j, k), (k, i)];
                    let terms: Vec<BTreeSet<(usize, usize)>> = (0..3)
                        .map(|t| {
                            let mut s: BTreeSet<_> = rest.iter().copied().collect();
                            s.insert(cyc[t]);
                            s.insert(cyc[(t + 1) % 3]);
                            s
                        })
                        .collect();
                    if terms.iter().any(|s| s.len() != chords || !covers(s)) {
                        continue;
                    }
                    relations
                        .push_row(terms.iter().map(|s| (index[s], int(1))))
                        .expect("in range");
                }
            }
        }
    }

    let nb = normalized_basis(p, q)?;
    let nindex = nb.index();
    let mut pairing = SparseMatrix::empty(nb.dim());
    for g in &generators {
        let raw: Vec<(usize, usize)> = g.iter().copied().collect();
        let class = rewrite(p, &raw)?;
        pairing
            .push_row(
                class
                    .coordinates(&nindex, nb.dim())
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero()),
            )
            .expect("in range");
    }
    let relations_respected = relations.mul(&pairing).expect("shapes agree").is_zero();
    Ok(HomologyCheck {
        p,
        q,
        generators: generators.len(),
        presentation_dim: generators.len() - rank(&relations),
        normalized_dim: nb.dim(),
        relations_respected,
    })
}
