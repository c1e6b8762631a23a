//! The cohomology ring as a quotient of the free commutative algebra on the
//! `a_ij` with `a_ij^2 = 0`, by the ideal of three-term relations, computed
//! directly by linear algebra on sets of pairs.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use vss_core::cohomology::{
    basis, codegeneracy_pullback, normalized_basis, normalized_quotient_dim, poincare_coefficient,
    poincare_polynomial, rewrite, rewrite_with, CohClass, Monomial,
};
use vss_core::diagrams::double_factorial_odd;
use vss_core::linalg::{int, rank, Rational, SparseMatrix, Subspace};

type PairSet = BTreeSet<(usize, usize)>;

fn pairs(p: usize) -> Vec<(usize, usize)> {
    (1..=p).tuple_combinations().collect()
}

fn ambient(p: usize, d: usize) -> (Vec<PairSet>, HashMap<PairSet, usize>) {
    let sets: Vec<PairSet> = pairs(p)
        .into_iter()
        .combinations(d)
        .map(|c| c.into_iter().collect())
        .collect();
    let index = sets
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    (sets, index)
}

/// `a_ik a_jk - a_ij a_jk + a_ij a_ik` times every monomial of degree `d - 2`.
fn ideal(p: usize, d: usize) -> Subspace {
    let (sets, index) = ambient(p, d);
    let mut rows = Vec::new();
    if d >= 2 {
        for (i, j, k) in (1..=p).tuple_combinations() {
            let rel = [
                ([(i, k), (j, k)], 1),
                ([(i, j), (j, k)], -1),
                ([(i, j), (i, k)], 1),
            ];
            for rest in pairs(p).into_iter().combinations(d - 2) {
                let mut v = vec![int(0); sets.len()];
                for (two, c) in &rel {
                    let mut s: PairSet = rest.iter().copied().collect();
                    if two.iter().all(|x| s.insert(*x)) {
                        v[index[&s]] += int(*c);
                    }
                }
                rows.push(v);
            }
        }
    }
    Subspace::from_vectors(sets.len(), &rows).unwrap()
}

fn embed(c: &CohClass, index: &HashMap<PairSet, usize>, len: usize) -> Vec<Rational> {
    let mut v = vec![int(0); len];
    for (m, x) in c.terms() {
        v[index[&m.factors().iter().copied().collect::<PairSet>()]] += x;
    }
    v
}

#[test]
fn poincare_counts() {
    for p in 1..=6 {
        let poly = poincare_polynomial(p);
        for (d, &c) in poly.iter().enumerate() {
            assert_eq!(basis(p, 2 * d).unwrap().len() as u64, c);
            assert_eq!(poincare_coefficient(p, 2 * d), c);
        }
        assert!(basis(p, 2 * poly.len()).unwrap().is_empty());
        // product of (1 + j t^2) for j < p
        let mut expected = vec![1u64];
        for j in 1..p as u64 {
            let mut next = vec![0; expected.len() + 1];
            for (d, c) in expected.iter().enumerate() {
                next[d] += c;
                next[d + 1] += j * c;
            }
            expected = next;
        }
        assert_eq!(poly, expected);
    }
    assert_eq!(poincare_polynomial(4), vec![1, 6, 11, 6]);
    assert!(basis(3, 3).is_err());
}

#[test]
fn basis_is_a_quotient_basis() {
    for p in 2..=5 {
        for d in 0..p {
            let (sets, index) = ambient(p, d);
            let id = ideal(p, d);
            assert_eq!(
                sets.len() - id.dim(),
                basis(p, 2 * d).unwrap().len(),
                "p={p} d={d}"
            );
            // admissible monomials are independent modulo the ideal
            let mut rows: Vec<Vec<Rational>> = id.dense_basis();
            for m in basis(p, 2 * d).unwrap().iter() {
                let mut v = vec![int(0); sets.len()];
                v[index[&m.factors().iter().copied().collect::<PairSet>()]] = int(1);
                rows.push(v);
            }
            let all = SparseMatrix::from_dense(&rows, sets.len()).unwrap();
            assert_eq!(rank(&all), sets.len());
        }
    }
}

#[test]
fn rewriting_stays_in_the_same_class() {
    for p in 2..=4 {
        for d in 1..p {
            let (sets, index) = ambient(p, d);
            let id = ideal(p, d);
            for s in &sets {
                let raw: Vec<(usize, usize)> = s.iter().copied().collect();
                let r = rewrite(p, &raw).unwrap();
                assert!(r.terms().all(|(m, _)| m.is_admissible()));
                let mut diff = embed(&r, &index, sets.len());
                for x in diff.iter_mut() {
                    *x = -x.clone();
                }
                diff[index[s]] += int(1);
                assert!(id.contains(&diff).unwrap(), "p={p} {raw:?}");
            }
        }
    }
}

#[test]
fn rewriting_is_confluent_under_random_orders() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for p in 3..=5 {
        for d in 2..p {
            for s in pairs(p).into_iter().combinations(d) {
                let reference = rewrite(p, &s).unwrap();
                for _ in 0..4 {
                    let mut raw = s.clone();
                    for x in raw.iter_mut() {
                        if rng.gen_bool(0.5) {
                            *x = (x.1, x.0);
                        }
                    }
                    let flips = s.iter().zip(&raw).filter(|(a, b)| a != b).count();
                    let sign = if flips % 2 == 0 { int(1) } else { int(-1) };
                    let r = rewrite_with(p, &raw, |cs| rng.gen_range(0..cs.len())).unwrap();
                    assert_eq!(r, reference.scaled(&sign), "p={p} {raw:?}");
                }
            }
        }
    }
}

#[test]
fn rewrite_examples() {
    let r = rewrite(3, &[(1, 3), (2, 3)]).unwrap();
    let a = |s: &str| s.parse::<Monomial>().unwrap();
    assert_eq!(r.coeff(&a("a12.a23")), int(1));
    assert_eq!(r.coeff(&a("a12.a13")), int(-1));
    assert_eq!(r.terms().count(), 2);
    assert!(rewrite(3, &[(1, 2), (1, 2)]).unwrap().is_zero());
    let neg = rewrite(2, &[(2, 1)]).unwrap();
    assert_eq!(neg.coeff(&a("a12")), int(-1));
    assert!(rewrite(3, &[(1, 4)]).is_err());
    assert!(rewrite(3, &[(2, 2)]).is_err());
}

#[test]
fn basis_examples() {
    let names = |p, q| -> Vec<String> {
        basis(p, q)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect()
    };
    assert_eq!(names(3, 2), ["a12", "a13", "a23"]);
    assert_eq!(names(3, 4), ["a12.a13", "a12.a23"]);
    assert_eq!(basis(4, 2).unwrap().len(), 6);
    assert_eq!(basis(0, 0).unwrap().len(), 1);
}

#[test]
fn normalized_bases() {
    for p in 1..=6 {
        for q in (0..p).filter(|q| q % 2 == 0) {
            assert!(
                normalized_basis(p, q).unwrap().monomials.is_empty(),
                "p={p} q={q}"
            );
        }
    }
    assert!(normalized_basis(3, 2).unwrap().monomials.is_empty());
    let n34: Vec<String> = normalized_basis(3, 4)
        .unwrap()
        .monomials
        .iter()
        .map(ToString::to_string)
        .collect();
    assert_eq!(n34, ["a12.a13", "a12.a23"]);
    for n in 1..=4 {
        let b = normalized_basis(2 * n, 2 * n).unwrap();
        assert_eq!(b.dim() as u64, double_factorial_odd(n));
        assert!(b.monomials.iter().all(|m| m.is_perfect_matching(2 * n)));
    }
}

#[test]
fn normalization_is_the_codegeneracy_quotient() {
    for p in 1..=5 {
        for q in (0..=8).step_by(2) {
            assert_eq!(
                normalized_quotient_dim(p, q).unwrap(),
                normalized_basis(p, q).unwrap().dim(),
                "p={p} q={q}"
            );
        }
    }
}

#[test]
fn codegeneracy_examples() {
    // forgetting point 1 of F(3) sends a12 to a23
    let m = codegeneracy_pullback(1, 3, 2).unwrap();
    let target = basis(3, 2).unwrap();
    let col: Vec<(String, Rational)> = (0..m.rows())
        .filter(|&r| m.get(r, 0) != int(0))
        .map(|r| (target[r].to_string(), m.get(r, 0)))
        .collect();
    assert_eq!(col, [("a23".to_string(), int(1))]);
    assert!(codegeneracy_pullback(0, 3, 2).is_err());
    assert!(codegeneracy_pullback(4, 3, 2).is_err());
    // images never use the forgotten index
    for p in 2..=5 {
        for r in 1..=p {
            let m = codegeneracy_pullback(r, p, 4).unwrap();
            let target = basis(p, 4).unwrap();
            for (row, _, _) in m.entries() {
                assert!(target[row].factors().iter().all(|&(i, j)| i != r && j != r));
            }
        }
    }
}

proptest! {
    #[test]
    fn rewrite_is_linear_and_idempotent(
        p in 3usize..=6,
        picks in prop::collection::vec((0usize..15, -3i64..=3), 1..5),
    ) {
        let ps = pairs(p);
        let terms: Vec<(Rational, Vec<(usize, usize)>)> = picks
            .iter()
            .map(|&(x, c)| (int(c), vec![ps[x % ps.len()], ps[(x * 7 + 3) % ps.len()]]))
            .collect();
        let mut sum = CohClass::zero(p, 4);
        for (c, raw) in &terms {
            sum = sum.plus(&rewrite(p, raw).unwrap().scaled(c));
        }
        let combined = vss_core::cohomology::rewrite_combination(p, 4, &terms).unwrap();
        prop_assert_eq!(&combined, &sum);
        for (m, _) in combined.terms() {
            let again = rewrite(p, m.factors()).unwrap();
            prop_assert_eq!(again.terms().count(), 1);
            prop_assert_eq!(again.coeff(m), int(1));
        }
    }
}
