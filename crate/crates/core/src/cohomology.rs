//! The cohomology ring of the configuration space `F(p)` of `p` ordered points
//! in 3-space.
//!
//! The ring is generated by degree-2 classes `a_ij` (`i < j`, with
//! `a_ji = -a_ij`) subject to `a_ij^2 = 0`, commutativity, and the three-term
//! relation `a_ij a_jk + a_jk a_ki + a_ki a_ij = 0`. A monomial is admissible
//! (a basis element) when its factors have pairwise distinct larger indices.
//!
//! Degrees are topological (`q = 2 * factors`) at the API boundary.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{format_rational, int, parse_rational, rank, Rational, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("cohomological degree {0} is odd")]
    OddDegree(usize),
    #[error("generator a{i},{j} is not valid on {p} points")]
    BadGenerator { i: usize, j: usize, p: usize },
    #[error("index {r} outside 1..={max}")]
    IndexOutOfRange { r: usize, max: usize },
    #[error("malformed monomial {0:?}")]
    Malformed(String),
}

/// A square-free product of generators `a_ij`, `i < j`, kept sorted by `(j, i)`.
/// The empty monomial is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(usize, usize)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a monomial from pairs already in `i < j` form. Returns `None` if a
    /// factor repeats (the product is zero).
    pub fn from_pairs<I>(pairs: I) -> Option<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut factors: Vec<(usize, usize)> = pairs.into_iter().collect();
        debug_assert!(factors.iter().all(|&(i, j)| i < j));
        factors.sort_by_key(|&(i, j)| (j, i));
        let len = factors.len();
        factors.dedup();
        (factors.len() == len).then_some(Self { factors })
    }

    pub fn factors(&self) -> &[(usize, usize)] {
        &self.factors
    }

    /// Topological degree.
    pub fn degree(&self) -> usize {
        2 * self.factors.len()
    }

    /// Distinct larger indices.
    pub fn is_admissible(&self) -> bool {
        self.factors.windows(2).all(|w| w[0].1 != w[1].1)
    }

    /// Every index `1..=p` appears in some factor.
    pub fn uses_all(&self, p: usize) -> bool {
        let mut seen = vec![false; p + 1];
        for &(i, j) in &self.factors {
            if j > p {
                return false;
            }
            seen[i] = true;
            seen[j] = true;
        }
        seen[1..].iter().all(|&x| x)
    }

    /// True when every index `1..=p` appears exactly once.
    pub fn is_perfect_matching(&self, p: usize) -> bool {
        2 * self.factors.len() == p && self.uses_all(p)
    }

    pub fn max_index(&self) -> usize {
        self.factors.iter().map(|&(_, j)| j).max().unwrap_or(0)
    }
}

fn write_generator(f: &mut fmt::Formatter<'_>, i: usize, j: usize) -> fmt::Result {
    if i < 10 && j < 10 {
        write!(f, "a{i}{j}")
    } else {
        write!(f, "a{i}_{j}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (n, &(i, j)) in self.factors.iter().enumerate() {
            if n > 0 {
                f.write_str(".")?;
            }
            write_generator(f, i, j)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a single generator token such as `a12` or `a3_11`, keeping its order.
pub fn parse_generator(tok: &str) -> Result<(usize, usize), CohomologyError> {
    let bad = || CohomologyError::Malformed(tok.to_string());
    let body = tok.strip_prefix('a').ok_or_else(bad)?;
    let (i, j) = match body.split_once('_') {
        Some((i, j)) => (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?),
        None if body.len() == 2 => {
            let d: Vec<usize> = body
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            (d[0], d[1])
        }
        None => return Err(bad()),
    };
    Ok((i, j))
}

impl FromStr for Monomial {
    type Err = CohomologyError;

    /// Accepts only canonical, square-free text with `i < j` in each factor.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let pairs = s
            .split('.')
            .map(parse_generator)
            .collect::<Result<Vec<_>, _>>()?;
        if pairs.iter().any(|&(i, j)| i == 0 || i >= j) {
            return Err(CohomologyError::Malformed(s.to_string()));
        }
        Self::from_pairs(pairs).ok_or_else(|| CohomologyError::Malformed(s.to_string()))
    }
}

/// An element of `H^q(F(p))`, written in admissible monomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohClass {
    p: usize,
    q: usize,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Serialize, Deserialize)]
struct CohClassJson {
    p: usize,
    q: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    mono: String,
    coeff: String,
}

impl CohClass {
    pub fn zero(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.p, self.q);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    /// Coordinates against an ordered monomial basis; terms outside it are dropped.
    pub fn coordinates(&self, index: &HashMap<Monomial, usize>, len: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); len];
        for (m, c) in &self.terms {
            if let Some(&i) = index.get(m) {
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn to_json(&self) -> String {
        let j = CohClassJson {
            p: self.p,
            q: self.q,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    mono: m.to_string(),
                    coeff: format_rational(c),
                })
                .collect(),
        };
        serde_json::to_string(&j).expect("plain data serialises")
    }

    /// Parses the JSON form; every monomial is straightened, so non-admissible
    /// input is accepted and normalised.
    pub fn from_json(s: &str) -> Result<Self, CohomologyError> {
        let j: CohClassJson =
            serde_json::from_str(s).map_err(|e| CohomologyError::Malformed(e.to_string()))?;
        let mut out = Self::zero(j.p, j.q);
        for t in j.terms {
            let raw: Vec<(usize, usize)> = if t.mono == "1" {
                Vec::new()
            } else {
                t.mono
                    .split('.')
                    .map(parse_generator)
                    .collect::<Result<_, _>>()?
            };
            if 2 * raw.len() != j.q {
                return Err(CohomologyError::Malformed(t.mono));
            }
            let c =
                parse_rational(&t.coeff).map_err(|e| CohomologyError::Malformed(e.to_string()))?;
            out = out.plus(&rewrite(j.p, &raw)?.scaled(&c));
        }
        Ok(out)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", format_rational(&mag))?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// A j-collision `a_ik a_jk` with `i < j < k`, given as `(i, j, k)`.
pub type Collision = (usize, usize, usize);

fn collisions(m: &[(usize, usize)]) -> Vec<Collision> {
    let mut out = Vec::new();
    for (x, &(i1, k1)) in m.iter().enumerate() {
        for &(i2, k2) in &m[x + 1..] {
            if k1 == k2 {
                out.push((i1.min(i2), i1.max(i2), k1));
            }
        }
    }
    out
}

/// Default rewriting order: the collision with the largest `k`, then the smallest `i`, then `j`.
fn largest_k_first(cs: &[Collision]) -> usize {
    (0..cs.len())
        .min_by_key(|&n| {
            let (i, j, k) = cs[n];
            (std::cmp::Reverse(k), i, j)
        })
        .expect("called with at least one collision")
}

fn normalise_raw(
    p: usize,
    raw: &[(usize, usize)],
) -> Result<(i64, Vec<(usize, usize)>), CohomologyError> {
    let mut sign = 1;
    let mut pairs = Vec::with_capacity(raw.len());
    for &(i, j) in raw {
        if i == j || i == 0 || j == 0 || i > p || j > p {
            return Err(CohomologyError::BadGenerator { i, j, p });
        }
        if i > j {
            sign = -sign;
            pairs.push((j, i));
        } else {
            pairs.push((i, j));
        }
    }
    Ok((sign, pairs))
}

/// Straightens a product of generators into admissible monomials.
///
/// `raw` lists ordered index pairs; `(j, i)` stands for `-a_ij`. Each step
/// replaces a collision `a_ik a_jk` by `a_ij a_jk - a_ij a_ik`; the multiset of
/// larger indices strictly decreases, so rewriting terminates. `choose` picks
/// which collision to resolve next.
pub fn rewrite_with<F>(
    p: usize,
    raw: &[(usize, usize)],
    mut choose: F,
) -> Result<CohClass, CohomologyError>
where
    F: FnMut(&[Collision]) -> usize,
{
    let (sign, pairs) = normalise_raw(p, raw)?;
    let mut out = CohClass::zero(p, 2 * raw.len());
    let mut stack: Vec<(Rational, Vec<(usize, usize)>)> = vec![(int(sign), pairs)];
    while let Some((c, pairs)) = stack.pop() {
        let Some(m) = Monomial::from_pairs(pairs) else {
            continue;
        };
        let cs = collisions(&m.factors);
        if cs.is_empty() {
            out.add_term(m, c);
            continue;
        }
        let (i, j, k) = cs[choose(&cs)];
        let rest: Vec<(usize, usize)> = m
            .factors
            .iter()
            .copied()
            .filter(|&f| f != (i, k) && f != (j, k))
            .collect();
        let mut t1 = rest.clone();
        t1.extend([(i, j), (j, k)]);
        let mut t2 = rest;
        t2.extend([(i, j), (i, k)]);
        stack.push((c.clone(), t1));
        stack.push((-c, t2));
    }
    Ok(out)
}

/// [`rewrite_with`] using the largest-`k`-first order.
pub fn rewrite(p: usize, raw: &[(usize, usize)]) -> Result<CohClass, CohomologyError> {
    rewrite_with(p, raw, largest_k_first)
}

/// Straightens a linear combination of raw products.
pub fn rewrite_combination(
    p: usize,
    q: usize,
    terms: &[(Rational, Vec<(usize, usize)>)],
) -> Result<CohClass, CohomologyError> {
    let mut out = CohClass::zero(p, q);
    for (c, raw) in terms {
        if 2 * raw.len() != q {
            return Err(CohomologyError::Malformed(format!(
                "{raw:?} has degree != {q}"
            )));
        }
        out = out.plus(&rewrite(p, raw)?.scaled(c));
    }
    Ok(out)
}

fn check_even(q: usize) -> Result<usize, CohomologyError> {
    if q % 2 == 1 {
        Err(CohomologyError::OddDegree(q))
    } else {
        Ok(q / 2)
    }
}

type BasisCache = RwLock<HashMap<(usize, usize), Arc<Vec<Monomial>>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn enumerate_admissible(p: usize, chords: usize) -> Vec<Monomial> {
    // each larger index j picks at most one smaller partner i
    fn go(p: usize, j: usize, left: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_pairs(acc.iter().copied()).expect("distinct factors"));
            return;
        }
        if j > p || p - j + 1 < left {
            return;
        }
        go(p, j + 1, left, acc, out);
        for i in 1..j {
            acc.push((i, j));
            go(p, j + 1, left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(p, 2, chords, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The admissible monomial basis of `H^q(F(p))`, sorted.
pub fn basis(p: usize, q: usize) -> Result<Arc<Vec<Monomial>>, CohomologyError> {
    let chords = check_even(q)?;
    if let Some(b) = basis_cache().read().expect("cache lock").get(&(p, q)) {
        return Ok(Arc::clone(b));
    }
    let computed = Arc::new(enumerate_admissible(p, chords));
    let mut w = basis_cache().write().expect("cache lock");
    Ok(Arc::clone(w.entry((p, q)).or_insert(computed)))
}

pub fn basis_index(b: &[Monomial]) -> HashMap<Monomial, usize> {
    b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Coefficients of `prod_{k=1}^{p-1} (1 + k t^2)`; entry `m` is the coefficient of `t^{2m}`.
pub fn poincare_polynomial(p: usize) -> Vec<u64> {
    let mut coeffs = vec![1u64];
    for k in 1..p.max(1) as u64 {
        let mut next = vec![0u64; coeffs.len() + 1];
        for (m, c) in coeffs.iter().enumerate() {
            next[m] += c;
            next[m + 1] += k * c;
        }
        coeffs = next;
    }
    coeffs
}

/// The coefficient of `t^q` in the Poincaré polynomial of `F(p)`.
pub fn poincare_coefficient(p: usize, q: usize) -> u64 {
    if q % 2 == 1 {
        return 0;
    }
    poincare_polynomial(p).get(q / 2).copied().unwrap_or(0)
}

/// Basis of the normalized cohomology: admissible monomials using every index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedBasis {
    pub p: usize,
    pub q: usize,
    pub monomials: Vec<Monomial>,
}

impl NormalizedBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index(&self) -> HashMap<Monomial, usize> {
        basis_index(&self.monomials)
    }
}

pub fn normalized_basis(p: usize, q: usize) -> Result<NormalizedBasis, CohomologyError> {
    let full = basis(p, q)?;
    let monomials = if q < p {
        // q/2 factors cover at most q indices
        Vec::new()
    } else {
        full.iter().filter(|m| m.uses_all(p)).cloned().collect()
    };
    Ok(NormalizedBasis { p, q, monomials })
}

/// Matrix of the map induced by forgetting point `r` of `F(p)`:
/// `H^q(F(p-1)) -> H^q(F(p))`, indices `>= r` shift up by one.
/// Rows index `basis(p, q)`, columns `basis(p - 1, q)`.
pub fn codegeneracy_pullback(
    r: usize,
    p: usize,
    q: usize,
) -> Result<SparseMatrix, CohomologyError> {
    if p == 0 || r == 0 || r > p {
        return Err(CohomologyError::IndexOutOfRange { r, max: p });
    }
    let source = basis(p - 1, q)?;
    let target = basis(p, q)?;
    let index = basis_index(&target);
    let shift = |x: usize| if x < r { x } else { x + 1 };
    let mut triplets = Vec::new();
    for (col, m) in source.iter().enumerate() {
        let raw: Vec<(usize, usize)> = m
            .factors
            .iter()
            .map(|&(i, j)| (shift(i), shift(j)))
            .collect();
        for (mono, c) in rewrite(p, &raw)?.terms {
            triplets.push((index[&mono], col, c));
        }
    }
    Ok(
        SparseMatrix::from_triplets(target.len(), source.len(), triplets)
            .expect("indices in range"),
    )
}

/// `dim H^q(F(p)) / (sum of codegeneracy images)`, computed by linear algebra.
pub fn normalized_quotient_dim(p: usize, q: usize) -> Result<usize, CohomologyError> {
    let target = basis(p, q)?;
    if p == 0 {
        return Ok(target.len());
    }
    let mut images = SparseMatrix::empty(target.len());
    for r in 1..=p {
        let m = codegeneracy_pullback(r, p, q)?.transpose();
        for row in m.row_iter() {
            images.push_row(row.iter().cloned()).expect("same ambient");
        }
    }
    Ok(target.len() - rank(&images))
}
