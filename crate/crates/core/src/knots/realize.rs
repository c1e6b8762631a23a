//! Singular long knots with prescribed chord diagram.
//!
//! Each chord gets a meeting point in the plane. The knot is a polyline from
//! far left to far right that visits the meeting points in the order given by
//! the diagram, passing straight through each one along a chosen direction.
//! Where the polyline crosses itself elsewhere, the earlier passage goes over,
//! so the diagram is descending away from the double points.

use std::collections::HashSet;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Entry, Passage, SingularKnot};
use crate::diagrams::ChordDiagram;

type Pt = (i64, i64);

const GRID: i64 = 64;
const DIRECTIONS: [Pt; 8] = [
    (3, 1),
    (1, 3),
    (-1, 3),
    (-3, 1),
    (-3, -1),
    (-1, -3),
    (1, -3),
    (3, -1),
];

fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

fn add(a: Pt, b: Pt) -> Pt {
    (a.0 + b.0, a.1 + b.1)
}

fn cross(a: Pt, b: Pt) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: Pt, b: Pt) -> i64 {
    a.0 * b.0 + a.1 * b.1
}

/// A point along the path: segment index and parameter `num/den` in `[0, 1]`.
#[derive(Clone, Copy, Debug)]
struct Place {
    seg: usize,
    num: i128,
    den: i128,
}

impl Place {
    fn key_cmp(&self, other: &Place) -> std::cmp::Ordering {
        self.seg
            .cmp(&other.seg)
            .then((self.num * other.den).cmp(&(other.num * self.den)))
    }
}

enum Event {
    Double { chord: usize, place: Place },
    Crossing { id: usize, place: Place },
}

impl Event {
    fn place(&self) -> &Place {
        match self {
            Event::Double { place, .. } | Event::Crossing { place, .. } => place,
        }
    }
}

struct Layout {
    pts: Vec<Pt>,
    /// Index in `pts` of the meeting point visited at each diagram position.
    visits: Vec<usize>,
    /// Direction of travel at each visit.
    visit_dir: Vec<Pt>,
}

fn layout(d: &ChordDiagram, rng: &mut ChaCha8Rng) -> Layout {
    let word = d.word();
    let meet: Vec<Pt> = (0..d.n())
        .map(|_| (rng.gen_range(0..GRID), rng.gen_range(0..GRID)))
        .collect();
    let dirs: Vec<(Pt, Pt)> = (0..d.n())
        .map(|_| {
            let a = DIRECTIONS[rng.gen_range(0..8)];
            loop {
                let b = DIRECTIONS[rng.gen_range(0..8)];
                if cross(a, b) != 0 {
                    break (a, b);
                }
            }
        })
        .collect();
    let mut seen = vec![false; d.n()];
    let mut pts = vec![(-GRID, rng.gen_range(0..GRID))];
    let mut visits = Vec::with_capacity(word.len());
    let mut visit_dir = Vec::with_capacity(word.len());
    for &c in &word {
        let dir = if seen[c] { dirs[c].1 } else { dirs[c].0 };
        seen[c] = true;
        pts.push(sub(meet[c], dir));
        visits.push(pts.len());
        visit_dir.push(dir);
        pts.push(meet[c]);
        pts.push(add(meet[c], dir));
    }
    pts.push((2 * GRID, rng.gen_range(0..GRID)));
    Layout {
        pts,
        visits,
        visit_dir,
    }
}

struct Crossing {
    first: Place,
    second: Place,
    sign: i8,
}

/// Finds every transverse self-intersection away from the meeting points, or
/// `None` if the layout is not in general position.
fn crossings(l: &Layout) -> Option<Vec<Crossing>> {
    let pts = &l.pts;
    let nseg = pts.len() - 1;
    let at_meeting = |s: usize, t: usize| -> bool {
        // the two segments meet at a shared meeting point of one chord
        l.visits.iter().any(|&v1| {
            l.visits.iter().any(|&v2| {
                v1 < v2
                    && pts[v1] == pts[v2]
                    && (s == v1 - 1 || s == v1)
                    && (t == v2 - 1 || t == v2)
            })
        })
    };
    let mut out = Vec::new();
    let mut points = HashSet::new();
    for s in 0..nseg {
        let (a1, r) = (pts[s], sub(pts[s + 1], pts[s]));
        for t in s + 1..nseg {
            let (a2, q) = (pts[t], sub(pts[t + 1], pts[t]));
            let mut den = cross(r, q) as i128;
            let w = sub(a2, a1);
            if t == s + 1 {
                if den == 0 && dot(r, q) < 0 {
                    return None;
                }
                continue;
            }
            if den == 0 {
                if cross(w, r) != 0 {
                    continue;
                }
                // collinear: reject any overlap
                let rr = dot(r, r);
                let (p0, p1) = (dot(w, r), dot(sub(pts[t + 1], a1), r));
                if p0.max(p1) >= 0 && p0.min(p1) <= rr {
                    return None;
                }
                continue;
            }
            let mut tn = cross(w, q) as i128;
            let mut un = cross(w, r) as i128;
            if den < 0 {
                den = -den;
                tn = -tn;
                un = -un;
            }
            if tn < 0 || tn > den || un < 0 || un > den {
                continue;
            }
            let interior = tn > 0 && tn < den && un > 0 && un < den;
            if !interior {
                if at_meeting(s, t) {
                    continue;
                }
                return None;
            }
            let x = a1.0 as i128 * den + tn * r.0 as i128;
            let y = a1.1 as i128 * den + tn * r.1 as i128;
            let g = x.gcd(&y).gcd(&den);
            if !points.insert((x / g, y / g, den / g)) {
                return None;
            }
            out.push(Crossing {
                first: Place {
                    seg: s,
                    num: tn,
                    den,
                },
                second: Place {
                    seg: t,
                    num: un,
                    den,
                },
                sign: if cross(r, q) > 0 { 1 } else { -1 },
            });
        }
    }
    Some(out)
}

/// A singular long knot whose double points realize `d`, from the default seed.
pub fn realize(d: &ChordDiagram) -> SingularKnot {
    realize_with_seed(d, 0)
}

/// A singular long knot whose double points realize `d`. Different seeds give
/// different planar layouts, hence in general different codes.
pub fn realize_with_seed(d: &ChordDiagram, seed: u64) -> SingularKnot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l, xs) = loop {
        let l = layout(d, &mut rng);
        if let Some(xs) = crossings(&l) {
            break (l, xs);
        }
    };
    let mut events: Vec<Event> = Vec::new();
    for (pos, &v) in l.visits.iter().enumerate() {
        events.push(Event::Double {
            chord: d.word()[pos],
            place: Place {
                seg: v - 1,
                num: 1,
                den: 1,
            },
        });
    }
    for (id, x) in xs.iter().enumerate() {
        events.push(Event::Crossing { id, place: x.first });
        events.push(Event::Crossing {
            id,
            place: x.second,
        });
    }
    events.sort_by(|a, b| a.place().key_cmp(b.place()));

    // double point signs: resolving with the first passage over
    let word = d.word();
    let mut first_dir = vec![None; d.n()];
    let mut double_sign = vec![0i8; d.n()];
    for (pos, &c) in word.iter().enumerate() {
        match first_dir[c] {
            None => first_dir[c] = Some(l.visit_dir[pos]),
            Some(a) => {
                double_sign[c] = if cross(a, l.visit_dir[pos]) > 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    let mut chord_label = vec![0u32; d.n()];
    let mut crossing_label = vec![0u32; xs.len()];
    let mut next = 0;
    let mut entries = Vec::with_capacity(events.len());
    for e in &events {
        match *e {
            Event::Double { chord, .. } => {
                if chord_label[chord] == 0 {
                    next += 1;
                    chord_label[chord] = next;
                }
                entries.push(Entry {
                    label: chord_label[chord],
                    passage: Passage::Singular,
                    sign: double_sign[chord],
                });
            }
            Event::Crossing { id, .. } => {
                let first = crossing_label[id] == 0;
                if first {
                    next += 1;
                    crossing_label[id] = next;
                }
                entries.push(Entry {
                    label: crossing_label[id],
                    passage: if first { Passage::Over } else { Passage::Under },
                    sign: xs[id].sign,
                });
            }
        }
    }
    SingularKnot::new(entries).expect("layout produces a well-formed code")
}
