//! Brute-force enumeration of trivalent diagrams: every matching of half-edges,
//! reduced by the full relabelling group with antisymmetry signs.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use vss_core::diagrams::{
    enumerate_chord_diagrams, enumerate_trivalent, four_t_quotient_dim, stu_quotient_dim,
    TrivalentDiagram,
};

/// Ports: legs `0..k`, then three slots per internal vertex.
fn all_matchings(n: usize) -> Vec<Vec<usize>> {
    fn go(partner: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(p) = partner.iter().position(|&x| x == usize::MAX) else {
            out.push(partner.clone());
            return;
        };
        for q in p + 1..partner.len() {
            if partner[q] == usize::MAX {
                partner[p] = q;
                partner[q] = p;
                go(partner, out);
                partner[p] = usize::MAX;
                partner[q] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        go(&mut vec![usize::MAX; n], &mut out);
    }
    out
}

fn vertex(k: usize, port: usize) -> usize {
    if port < k {
        port
    } else {
        k + (port - k) / 3
    }
}

fn connected_to_interval(k: usize, s: usize, m: &[usize]) -> bool {
    let mut reach = vec![false; k + s];
    let mut stack: Vec<usize> = (0..k).collect();
    reach[..k].iter_mut().for_each(|r| *r = true);
    while let Some(v) = stack.pop() {
        for (x, &y) in m.iter().enumerate() {
            if vertex(k, x) == v {
                let w = vertex(k, y);
                if !reach[w] {
                    reach[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    reach.iter().all(|&r| r)
}

const S3: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([1, 0, 2], -1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
];

/// Every element of the relabelling group as a port map with its sign.
fn group(k: usize, s: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    for sigma in (0..s).permutations(s) {
        for slots in (0..s).map(|_| 0..6).multi_cartesian_product() {
            let mut map: Vec<usize> = (0..k).collect();
            map.resize(k + 3 * s, 0);
            let mut sign = 1;
            for v in 0..s {
                let (perm, sg) = S3[slots[v]];
                sign *= sg;
                for t in 0..3 {
                    map[k + 3 * v + t] = k + 3 * sigma[v] + perm[t];
                }
            }
            out.push((map, sign));
        }
        if s == 0 {
            break;
        }
    }
    if out.is_empty() {
        out.push(((0..k).collect(), 1));
    }
    out
}

fn act(g: &[usize], m: &[usize]) -> Vec<usize> {
    let mut out = vec![0; m.len()];
    for x in 0..m.len() {
        out[g[x]] = g[m[x]];
    }
    out
}

/// Nonzero classes by (k, s), each with one representative matching.
fn oracle_classes(n: usize) -> BTreeMap<(usize, usize), Vec<Vec<usize>>> {
    let mut out = BTreeMap::new();
    for s in 0..2 * n {
        let k = 2 * n - s;
        let g = group(k, s);
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut reps = Vec::new();
        for m in all_matchings(k + 3 * s) {
            if !connected_to_interval(k, s, &m) {
                continue;
            }
            let orbit: Vec<(Vec<usize>, i64)> = g.iter().map(|(h, sg)| (act(h, &m), *sg)).collect();
            let canon = orbit.iter().map(|(x, _)| x.clone()).min().unwrap();
            if !seen.insert(canon) {
                continue;
            }
            let zero = orbit.iter().any(|(x, sg)| *x == m && *sg < 0);
            if !zero {
                reps.push(m);
            }
        }
        out.insert((k, s), reps);
    }
    out
}

fn to_json(k: usize, s: usize, m: &[usize]) -> String {
    let mut edges = Vec::new();
    let mut edge_of = vec![0; m.len()];
    for x in 0..m.len() {
        if x < m[x] {
            edge_of[x] = edges.len();
            edge_of[m[x]] = edges.len();
            edges.push([vertex(k, x) + 1, vertex(k, m[x]) + 1]);
        }
    }
    let orient: BTreeMap<String, [usize; 3]> = (0..s)
        .map(|v| {
            (
                (k + v + 1).to_string(),
                [0, 1, 2].map(|t| edge_of[k + 3 * v + t]),
            )
        })
        .collect();
    serde_json::json!({ "k": k, "s": s, "edges": edges, "orient": orient }).to_string()
}

#[test]
fn counts_match_brute_force() {
    for n in 1..=2 {
        let lib = enumerate_trivalent(n).unwrap();
        let mut lib_counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for d in &lib {
            *lib_counts.entry((d.legs(), d.internal())).or_default() += 1;
        }
        for ((k, s), reps) in oracle_classes(n) {
            assert_eq!(
                lib_counts.get(&(k, s)).copied().unwrap_or(0),
                reps.len(),
                "n={n} k={k} s={s}"
            );
            let hit: BTreeSet<TrivalentDiagram> = reps
                .iter()
                .map(|m| {
                    TrivalentDiagram::from_json(&to_json(k, s, m))
                        .unwrap()
                        .unwrap()
                        .0
                })
                .collect();
            assert_eq!(hit.len(), reps.len());
            assert!(hit.iter().all(|d| lib.contains(d)));
        }
    }
}

#[test]
fn relabelling_signs_are_consistent() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for (k, s) in [(3, 1), (2, 2), (1, 3)] {
        let g = group(k, s);
        for m in all_matchings(k + 3 * s) {
            if !connected_to_interval(k, s, &m) {
                continue;
            }
            let base = TrivalentDiagram::from_json(&to_json(k, s, &m)).unwrap();
            for _ in 0..20 {
                let (h, sg) = &g[rng.gen_range(0..g.len())];
                let moved = TrivalentDiagram::from_json(&to_json(k, s, &act(h, &m))).unwrap();
                match (&base, moved) {
                    (None, None) => {}
                    (Some((d1, s1)), Some((d2, s2))) => {
                        assert_eq!(*d1, d2);
                        assert_eq!(s1 * sg, s2);
                    }
                    _ => panic!("zero class not preserved by relabelling"),
                }
            }
        }
    }
}

#[test]
fn chord_subfamily_and_json_round_trip() {
    for n in 1..=3 {
        let lib = enumerate_trivalent(n).unwrap();
        let chords: Vec<_> = lib.iter().filter_map(|d| d.as_chord_diagram()).collect();
        let mut expected = enumerate_chord_diagrams(n);
        expected.sort();
        let mut got = chords.clone();
        got.sort();
        assert_eq!(got, expected);
        for d in &lib {
            assert_eq!(
                TrivalentDiagram::from_json(&d.to_json()).unwrap(),
                Some((d.clone(), 1))
            );
        }
    }
}

#[test]
fn stu_and_four_t_quotients_agree() {
    for n in 1..=3 {
        assert_eq!(
            stu_quotient_dim(n).unwrap(),
            four_t_quotient_dim(n),
            "n={n}"
        );
    }
}
