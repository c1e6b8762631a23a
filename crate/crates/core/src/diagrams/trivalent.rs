//! Trivalent diagrams on an interval and the STU relation.
//!
//! A diagram has `k` legs on the interval (numbered in interval order) and `s`
//! internal trivalent vertices, each carrying a cyclic order of its three
//! half-edges. Internally a diagram is a perfect matching on "ports": one port
//! per leg and three per internal vertex, the slot order giving the cyclic
//! orientation. Relabelling internal vertices is free; permuting the slots at a
//! vertex multiplies the diagram by the sign of the permutation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::DiagramError;
use crate::linalg::{int, rank, SparseMatrix};

pub const MAX_TRIVALENT_DEGREE: usize = 3;

const SLOT_PERMS: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
    ([1, 0, 2], -1),
];

/// Edge list on vertex ids (legs `0..k`, internal vertices `k..k+s`), sorted.
type GraphKey = Vec<(usize, usize)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct PortGraph {
    k: usize,
    s: usize,
    partner: Vec<usize>,
}

impl PortGraph {
    fn nports(&self) -> usize {
        self.k + 3 * self.s
    }

    fn port(&self, v: usize, slot: usize) -> usize {
        self.k + 3 * v + slot
    }

    /// Vertex id of a port: legs keep their index, internal vertex `v` is `k + v`.
    fn vertex(&self, port: usize) -> usize {
        if port < self.k {
            port
        } else {
            self.k + (port - self.k) / 3
        }
    }

    fn key_under(&self, sigma: &[usize]) -> GraphKey {
        let relabel = |p: usize| {
            let v = self.vertex(p);
            if v < self.k {
                v
            } else {
                self.k + sigma[v - self.k]
            }
        };
        let mut key: GraphKey = (0..self.nports())
            .filter(|&x| x < self.partner[x])
            .map(|x| {
                let (a, b) = (relabel(x), relabel(self.partner[x]));
                (a.min(b), a.max(b))
            })
            .collect();
        key.sort_unstable();
        key
    }

    /// Every internal vertex is joined, through the graph, to some leg.
    fn touches_interval(&self) -> bool {
        let nv = self.k + self.s;
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for x in 0..self.nports() {
            let (a, b) = (self.vertex(x), self.vertex(self.partner[x]));
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let leg_roots: BTreeSet<usize> = (0..self.k).map(|l| find(&mut parent, l)).collect();
        (self.k..nv).all(|v| leg_roots.contains(&find(&mut parent, v)))
    }

    /// The representative port matching of a canonical edge list: slots are
    /// filled in edge-list order.
    fn from_key(k: usize, s: usize, key: &GraphKey) -> Self {
        let mut next = vec![0usize; s];
        let mut partner = vec![usize::MAX; k + 3 * s];
        let mut take = |u: usize| {
            if u < k {
                u
            } else {
                let v = u - k;
                let p = k + 3 * v + next[v];
                next[v] += 1;
                p
            }
        };
        for &(a, b) in key {
            let pa = take(a);
            let pb = take(b);
            partner[pa] = pb;
            partner[pb] = pa;
        }
        Self { k, s, partner }
    }
}

/// Signs of every relabelling that carries `from` onto `to` for a fixed vertex map.
fn matching_signs(from: &PortGraph, to: &PortGraph, sigma: &[usize], out: &mut BTreeSet<i64>) {
    let s = from.s;
    let mut choice = vec![0usize; s];

    fn image(g: &PortGraph, sigma: &[usize], choice: &[usize], x: usize) -> usize {
        if x < g.k {
            x
        } else {
            let v = (x - g.k) / 3;
            let slot = (x - g.k) % 3;
            g.k + 3 * sigma[v] + SLOT_PERMS[choice[v]].0[slot]
        }
    }

    fn consistent(
        from: &PortGraph,
        to: &PortGraph,
        sigma: &[usize],
        choice: &[usize],
        upto: usize,
    ) -> bool {
        let assigned = |x: usize| x < from.k || (x - from.k) / 3 < upto;
        (0..from.nports()).all(|x| {
            let y = from.partner[x];
            if !(assigned(x) && assigned(y)) {
                return true;
            }
            to.partner[image(from, sigma, choice, x)] == image(from, sigma, choice, y)
        })
    }

    fn go(
        from: &PortGraph,
        to: &PortGraph,
        sigma: &[usize],
        choice: &mut Vec<usize>,
        v: usize,
        out: &mut BTreeSet<i64>,
    ) {
        if v == from.s {
            out.insert(choice.iter().map(|&c| SLOT_PERMS[c].1).product());
            return;
        }
        for c in 0..SLOT_PERMS.len() {
            choice[v] = c;
            if consistent(from, to, sigma, choice, v + 1) {
                go(from, to, sigma, choice, v + 1, out);
            }
        }
    }

    if s == 0 {
        if consistent(from, to, sigma, &choice, 0) {
            out.insert(1);
        }
        return;
    }
    go(from, to, sigma, &mut choice, 0, out);
}

/// Canonical edge list and the sign relating `g` to the canonical representative,
/// or `None` if `g` is zero because an orientation-reversing symmetry fixes it.
fn canonicalize(g: &PortGraph) -> Option<(GraphKey, i64)> {
    let perms: Vec<Vec<usize>> = (0..g.s).permutations(g.s).collect();
    let keyed: Vec<(GraphKey, &Vec<usize>)> = perms.iter().map(|p| (g.key_under(p), p)).collect();
    let best = keyed
        .iter()
        .map(|(k, _)| k)
        .min()
        .expect("at least one permutation")
        .clone();
    let rep = PortGraph::from_key(g.k, g.s, &best);
    let mut signs = BTreeSet::new();
    for (key, sigma) in &keyed {
        if *key == best {
            matching_signs(g, &rep, sigma, &mut signs);
        }
    }
    match signs.len() {
        1 => Some((best, *signs.iter().next().unwrap())),
        0 => unreachable!("a vertex map realising the canonical key always extends to ports"),
        _ => None,
    }
}

/// Every port matching with `k` legs and `s` internal vertices, up to relabelling,
/// with at least one representative per underlying multigraph.
fn generate_port_graphs(k: usize, s: usize) -> Vec<PortGraph> {
    let nports = k + 3 * s;
    let mut out = Vec::new();

    fn go(k: usize, s: usize, partner: &mut Vec<Option<usize>>, out: &mut Vec<PortGraph>) {
        let Some(p) = partner.iter().position(Option::is_none) else {
            out.push(PortGraph {
                k,
                s,
                partner: partner.iter().map(|x| x.unwrap()).collect(),
            });
            return;
        };
        let own_vertex = (p >= k).then(|| (p - k) / 3);
        let mut candidates: Vec<usize> = ((p + 1)..k).filter(|&q| partner[q].is_none()).collect();
        let mut fresh_taken = false;
        for w in 0..s {
            let ports = (k + 3 * w)..(k + 3 * w + 3);
            let touched = own_vertex == Some(w) || ports.clone().any(|x| partner[x].is_some());
            if touched {
                if let Some(q) = ports.clone().find(|&x| x != p && partner[x].is_none()) {
                    candidates.push(q);
                }
            } else if !fresh_taken {
                fresh_taken = true;
                candidates.push(k + 3 * w);
            }
        }
        for q in candidates {
            partner[p] = Some(q);
            partner[q] = Some(p);
            go(k, s, partner, out);
            partner[p] = None;
            partner[q] = None;
        }
    }

    if nports.is_multiple_of(2) {
        go(k, s, &mut vec![None; nports], &mut out);
    }
    out
}

/// A trivalent diagram in canonical form, in its positive orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrivalentDiagram {
    k: usize,
    s: usize,
    key: GraphKey,
}

#[derive(Serialize, Deserialize)]
struct TrivalentJson {
    k: usize,
    s: usize,
    edges: Vec<[usize; 2]>,
    orient: BTreeMap<usize, [usize; 3]>,
}

impl TrivalentDiagram {
    fn from_key(k: usize, s: usize, key: GraphKey) -> Self {
        Self { k, s, key }
    }

    fn ports(&self) -> PortGraph {
        PortGraph::from_key(self.k, self.s, &self.key)
    }

    /// Number of legs on the interval.
    pub fn legs(&self) -> usize {
        self.k
    }

    /// Number of internal trivalent vertices.
    pub fn internal(&self) -> usize {
        self.s
    }

    pub fn degree(&self) -> usize {
        (self.k + self.s) / 2
    }

    /// Edges on 1-based vertex labels: legs `1..=k`, internal vertices `k+1..=k+s`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.key.iter().map(|&(a, b)| (a + 1, b + 1)).collect()
    }

    /// For each internal vertex, its three edge indices (into [`edges`](Self::edges))
    /// in cyclic order.
    pub fn orientation(&self) -> Vec<[usize; 3]> {
        let g = self.ports();
        let mut edge_of_port = vec![0usize; g.nports()];
        let mut seen = vec![false; g.nports()];
        // ports are assigned in edge-list order by `from_key`
        let mut next = vec![0usize; self.s];
        for (e, &(a, b)) in self.key.iter().enumerate() {
            for u in [a, b] {
                let p = if u < self.k {
                    u
                } else {
                    let v = u - self.k;
                    let p = g.port(v, next[v]);
                    next[v] += 1;
                    p
                };
                edge_of_port[p] = e;
                seen[p] = true;
            }
        }
        debug_assert!(seen.iter().all(|&x| x));
        (0..self.s)
            .map(|v| [0, 1, 2].map(|t| edge_of_port[g.port(v, t)]))
            .collect()
    }

    /// A chord diagram is the case with no internal vertices.
    pub fn as_chord_diagram(&self) -> Option<super::ChordDiagram> {
        (self.s == 0).then(|| {
            super::ChordDiagram::from_pairs(self.edges()).expect("legs pair up into a matching")
        })
    }

    pub fn to_json(&self) -> String {
        let j = TrivalentJson {
            k: self.k,
            s: self.s,
            edges: self.edges().iter().map(|&(a, b)| [a, b]).collect(),
            orient: self
                .orientation()
                .into_iter()
                .enumerate()
                .map(|(v, o)| (self.k + v + 1, o))
                .collect(),
        };
        serde_json::to_string(&j).expect("plain data serialises")
    }

    /// Parses the JSON form of any (not necessarily canonical) oriented diagram.
    /// Returns the canonical diagram with the sign relating the two, or `None`
    /// when the diagram is zero by antisymmetry.
    pub fn from_json(s: &str) -> Result<Option<(Self, i64)>, DiagramError> {
        let j: TrivalentJson =
            serde_json::from_str(s).map_err(|e| DiagramError::Malformed(e.to_string()))?;
        let (k, sv) = (j.k, j.s);
        let nv = k + sv;
        let bad = |m: &str| DiagramError::Malformed(m.to_string());
        let mut partner = vec![usize::MAX; k + 3 * sv];
        // per edge, the ports at which it ends
        let mut ends: Vec<Vec<usize>> = vec![Vec::new(); j.edges.len()];
        for (label, cyc) in &j.orient {
            if *label <= k || *label > nv {
                return Err(bad("orientation given for a non-internal vertex"));
            }
            let v = label - k - 1;
            for (t, &e) in cyc.iter().enumerate() {
                let &[a, b] = j
                    .edges
                    .get(e)
                    .ok_or_else(|| bad("edge index out of range"))?;
                if a != *label && b != *label {
                    return Err(bad("orientation lists an edge not at its vertex"));
                }
                ends[e].push(k + 3 * v + t);
            }
        }
        if j.orient.len() != sv {
            return Err(bad("every internal vertex needs an orientation"));
        }
        for (e, &[a, b]) in j.edges.iter().enumerate() {
            for u in [a, b] {
                if u == 0 || u > nv {
                    return Err(bad("vertex label out of range"));
                }
                if u <= k {
                    ends[e].push(u - 1);
                }
            }
            if ends[e].len() != 2 {
                return Err(bad("edge endpoints do not match orientation data"));
            }
            let (x, y) = (ends[e][0], ends[e][1]);
            if partner[x] != usize::MAX || partner[y] != usize::MAX {
                return Err(bad("a port is used twice"));
            }
            partner[x] = y;
            partner[y] = x;
        }
        if partner.contains(&usize::MAX) {
            return Err(bad("a vertex has the wrong valence"));
        }
        let g = PortGraph { k, s: sv, partner };
        Ok(canonicalize(&g).map(|(key, sign)| (Self::from_key(k, sv, key), sign)))
    }
}

fn check_degree(n: usize) -> Result<(), DiagramError> {
    if n == 0 || n > MAX_TRIVALENT_DEGREE {
        Err(DiagramError::DegreeOutOfRange {
            n,
            max: MAX_TRIVALENT_DEGREE,
        })
    } else {
        Ok(())
    }
}

/// All nonzero trivalent diagrams of degree `n` (total vertex count `2n`),
/// sorted by internal vertex count and then canonical edge list.
pub fn enumerate_trivalent(n: usize) -> Result<Vec<TrivalentDiagram>, DiagramError> {
    check_degree(n)?;
    let mut out = Vec::new();
    for s in 0..2 * n {
        let k = 2 * n - s;
        let mut keys: BTreeSet<GraphKey> = BTreeSet::new();
        for g in generate_port_graphs(k, s) {
            if !g.touches_interval() {
                continue;
            }
            let key = (0..s)
                .permutations(s)
                .map(|p| g.key_under(&p))
                .min()
                .expect("nonempty");
            keys.insert(key);
        }
        for key in keys {
            let rep = PortGraph::from_key(k, s, &key);
            if canonicalize(&rep).is_some() {
                out.push(TrivalentDiagram::from_key(k, s, key));
            }
        }
    }
    out.sort_by(|a, b| (a.s, &a.key).cmp(&(b.s, &b.key)));
    Ok(out)
}

/// The two diagrams obtained by resolving internal vertex `v` at its slot `t`,
/// which must hold a leg: the freed half-edges land on the interval in slot
/// order (`T`) and in reversed order (`U`).
fn stu_pair(g: &PortGraph, v: usize, t: usize) -> (PortGraph, PortGraph) {
    let leg = g.partner[g.port(v, t)];
    debug_assert!(leg < g.k);
    let (k2, s2) = (g.k + 1, g.s - 1);
    let own: BTreeSet<usize> = (0..3).map(|u| g.port(v, u)).collect();
    let remap = |x: usize| -> usize {
        if x < g.k {
            if x < leg {
                x
            } else {
                x + 1
            }
        } else {
            let w = (x - g.k) / 3;
            let slot = (x - g.k) % 3;
            let w2 = if w > v { w - 1 } else { w };
            k2 + 3 * w2 + slot
        }
    };
    let mut base = vec![usize::MAX; k2 + 3 * s2];
    for x in 0..g.nports() {
        let y = g.partner[x];
        if x == leg || own.contains(&x) || own.contains(&y) {
            continue;
        }
        base[remap(x)] = remap(y);
    }
    let a = g.partner[g.port(v, (t + 1) % 3)];
    let b = g.partner[g.port(v, (t + 2) % 3)];
    let (l1, l2) = (leg, leg + 1);
    let link = |p: &mut Vec<usize>, x: usize, y: usize| {
        p[x] = y;
        p[y] = x;
    };
    let mut tp = base.clone();
    let mut up = base;
    if a == g.port(v, (t + 2) % 3) {
        link(&mut tp, l1, l2);
        link(&mut up, l1, l2);
    } else {
        link(&mut tp, l1, remap(a));
        link(&mut tp, l2, remap(b));
        link(&mut up, l1, remap(b));
        link(&mut up, l2, remap(a));
    }
    let mk = |partner| PortGraph {
        k: k2,
        s: s2,
        partner,
    };
    (mk(tp), mk(up))
}

/// STU relations `S - T + U` over the basis [`enumerate_trivalent`]`(n)`, one row
/// per (diagram, internal vertex, slot attached to a leg).
pub fn stu_relations(n: usize) -> Result<SparseMatrix, DiagramError> {
    let basis = enumerate_trivalent(n)?;
    let index: HashMap<(usize, usize, &GraphKey), usize> = basis
        .iter()
        .enumerate()
        .map(|(i, d)| ((d.k, d.s, &d.key), i))
        .collect();
    let lookup = |g: &PortGraph| -> Option<(usize, i64)> {
        canonicalize(g).map(|(key, sign)| {
            let i = index
                .get(&(g.k, g.s, &key))
                .copied()
                .expect("STU terms stay inside the enumerated basis");
            (i, sign)
        })
    };
    let mut m = SparseMatrix::empty(basis.len());
    for (si, d) in basis.iter().enumerate() {
        let g = d.ports();
        for v in 0..g.s {
            for t in 0..3 {
                if g.partner[g.port(v, t)] >= g.k {
                    continue;
                }
                let (tg, ug) = stu_pair(&g, v, t);
                let mut row = vec![(si, int(1))];
                if let Some((i, sign)) = lookup(&tg) {
                    row.push((i, int(-sign)));
                }
                if let Some((i, sign)) = lookup(&ug) {
                    row.push((i, int(sign)));
                }
                m.push_row(row).expect("columns in range");
            }
        }
    }
    Ok(m)
}

/// `dim(Q[TD_n] / STU)`.
pub fn stu_quotient_dim(n: usize) -> Result<usize, DiagramError> {
    let m = stu_relations(n)?;
    Ok(m.cols() - rank(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::enumerate_chord_diagrams;

    #[test]
    fn degree_bounds() {
        assert!(enumerate_trivalent(0).is_err());
        assert!(enumerate_trivalent(4).is_err());
        assert!(stu_relations(4).is_err());
    }

    #[test]
    fn degree_one_is_the_single_chord() {
        let ds = enumerate_trivalent(1).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].as_chord_diagram().unwrap().to_string(), "1-2");
        assert_eq!(stu_quotient_dim(1).unwrap(), 1);
    }

    #[test]
    fn chord_subfamily_matches_chord_enumeration() {
        for n in 1..=3 {
            let mut from_tri: Vec<_> = enumerate_trivalent(n)
                .unwrap()
                .iter()
                .filter_map(TrivalentDiagram::as_chord_diagram)
                .collect();
            from_tri.sort();
            assert_eq!(from_tri, enumerate_chord_diagrams(n));
        }
    }

    #[test]
    fn tripod_is_nonzero_and_loop_is_zero() {
        // three legs on one vertex
        let tripod = r#"{"k":3,"s":1,"edges":[[1,4],[2,4],[3,4]],"orient":{"4":[0,1,2]}}"#;
        let (d, sign) = TrivalentDiagram::from_json(tripod).unwrap().unwrap();
        assert_eq!(sign, 1);
        let flipped = r#"{"k":3,"s":1,"edges":[[1,4],[2,4],[3,4]],"orient":{"4":[0,2,1]}}"#;
        let (d2, sign2) = TrivalentDiagram::from_json(flipped).unwrap().unwrap();
        assert_eq!((d2, sign2), (d.clone(), -1));
        assert_eq!(
            TrivalentDiagram::from_json(&d.to_json()).unwrap(),
            Some((d, 1))
        );

        // a leg on a vertex carrying a loop vanishes by antisymmetry
        let lollipop = r#"{"k":1,"s":1,"edges":[[1,2],[2,2]],"orient":{"2":[0,1,1]}}"#;
        assert_eq!(TrivalentDiagram::from_json(lollipop).unwrap(), None);
    }

    #[test]
    fn malformed_json_is_rejected() {
        let bad = r#"{"k":3,"s":1,"edges":[[1,4],[2,4]],"orient":{"4":[0,1,2]}}"#;
        assert!(TrivalentDiagram::from_json(bad).is_err());
        assert!(TrivalentDiagram::from_json("{").is_err());
    }

    #[test]
    fn tripod_stu_rows_give_four_term_consequence() {
        // In degree 2 the STU quotient agrees with the chord quotient.
        assert_eq!(stu_quotient_dim(2).unwrap(), 2);
    }
}
