//! Random small triangulated polygons, once-punctured polygons and annuli, with the arcs and
//! loops drawn on them.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::surface::{
    Arc, ArcId, BoundarySegment, EdgeRef, LoopSpec, PointId, Tag, TaggedArcSpec, Triangle,
    Triangulation,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Builder {
    arcs: Vec<Arc>,
    boundary: Vec<BoundarySegment>,
    triangles: Vec<Triangle>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            arcs: Vec::new(),
            boundary: Vec::new(),
            triangles: Vec::new(),
        }
    }

    fn arc(&mut self, a: PointId, b: PointId) -> EdgeRef {
        let id = self.arcs.len() + 1;
        self.arcs.push(Arc {
            id,
            ends: [a, b],
            tags: [Tag::Plain, Tag::Plain],
        });
        EdgeRef::Arc(id)
    }

    fn segment(&mut self, a: PointId, b: PointId) -> EdgeRef {
        let id = format!("b{}", self.boundary.len());
        self.boundary.push(BoundarySegment {
            id: id.clone(),
            ends: [a, b],
        });
        EdgeRef::Boundary(id)
    }

    fn triangle(&mut self, corners: [PointId; 3], edges: [EdgeRef; 3]) {
        self.triangles.push(Triangle {
            edges,
            corners: Some(corners),
            self_folded: false,
        });
    }

    /// Triangulates the polygon `chain` (counterclockwise) whose closing side `chain.last()` to
    /// `chain[0]` is `base`.
    fn fill<R: Rng>(&mut self, rng: &mut R, chain: &[PointId], sides: &[EdgeRef], base: EdgeRef) {
        // sides[i] joins chain[i] and chain[i+1]
        if chain.len() == 3 {
            self.triangle(
                [chain[0], chain[1], chain[2]],
                [sides[0].clone(), sides[1].clone(), base],
            );
            return;
        }
        let k = chain.len() - 1;
        let m = rng.gen_range(1..k);
        let left = if m == 1 {
            sides[0].clone()
        } else {
            self.arc(chain[0], chain[m])
        };
        let right = if m == k - 1 {
            sides[k - 1].clone()
        } else {
            self.arc(chain[m], chain[k])
        };
        self.triangle(
            [chain[0], chain[m], chain[k]],
            [left.clone(), right.clone(), base],
        );
        if m > 1 {
            self.fill(rng, &chain[..=m], &sides[..m], left);
        }
        if m < k - 1 {
            self.fill(rng, &chain[m..], &sides[m..], right);
        }
    }

    fn finish(self, name: String, punctures: Vec<PointId>) -> Result<Triangulation> {
        let t = Triangulation {
            name: Some(name),
            arcs: self.arcs,
            boundary: self.boundary,
            triangles: self.triangles,
            punctures,
        };
        Triangulation::from_json(&t.to_json())
    }
}

/// Random triangulation of a convex `k`-gon.
pub fn polygon<R: Rng>(rng: &mut R, k: usize) -> Result<Triangulation> {
    let mut b = Builder::new();
    let pts: Vec<PointId> = (0..k as PointId).collect();
    let sides: Vec<EdgeRef> = (0..k - 1).map(|i| b.segment(pts[i], pts[i + 1])).collect();
    let base = b.segment(pts[k - 1], pts[0]);
    b.fill(rng, &pts, &sides, base);
    b.finish(format!("{k}-gon"), Vec::new())
}

/// Random triangulation of a `k`-gon with one puncture joined to `fan` boundary points.
pub fn punctured_polygon<R: Rng>(rng: &mut R, k: usize, fan: usize) -> Result<Triangulation> {
    let mut b = Builder::new();
    let p = k as PointId;
    let mut spokes: Vec<PointId> = (0..k as PointId)
        .collect::<Vec<_>>()
        .choose_multiple(rng, fan)
        .copied()
        .collect();
    spokes.sort();
    let sides: Vec<EdgeRef> = (0..k)
        .map(|i| b.segment(i as PointId, ((i + 1) % k) as PointId))
        .collect();
    let spoke_arcs: Vec<EdgeRef> = spokes.iter().map(|&v| b.arc(p, v)).collect();
    for i in 0..fan {
        let (u, w) = (spokes[i], spokes[(i + 1) % fan]);
        let mut chain = vec![u];
        let mut x = u;
        loop {
            x = (x + 1) % k as PointId;
            chain.push(x);
            if x == w {
                break;
            }
        }
        let chain_sides: Vec<EdgeRef> = chain
            .windows(2)
            .map(|s| sides[s[0] as usize].clone())
            .collect();
        let outer = if chain.len() == 2 {
            chain_sides[0].clone()
        } else {
            let a = b.arc(w, u);
            b.fill(rng, &chain, &chain_sides, a.clone());
            a
        };
        b.triangle(
            [p, u, w],
            [
                spoke_arcs[i].clone(),
                outer,
                spoke_arcs[(i + 1) % fan].clone(),
            ],
        );
    }
    b.finish(format!("once-punctured {k}-gon"), vec![p])
}

/// Annulus triangulated by arcs joining its two boundary components, with the loop around its core.
pub fn annulus<R: Rng>(
    rng: &mut R,
    outer: usize,
    inner: usize,
) -> Result<(Triangulation, LoopSpec)> {
    let mut b = Builder::new();
    let o = |j: usize| (j % outer) as PointId;
    let i = |l: usize| (outer + l % inner) as PointId;
    let osides: Vec<EdgeRef> = (0..outer).map(|j| b.segment(o(j), o(j + 1))).collect();
    let isides: Vec<EdgeRef> = (0..inner).map(|l| b.segment(i(l + 1), i(l))).collect();
    let mut steps: Vec<bool> = vec![true; outer];
    steps.extend(vec![false; inner]);
    steps[1..].shuffle(rng);
    let n = outer + inner;
    let first = b.arc(o(0), i(0));
    let mut prev = first.clone();
    let (mut j, mut l) = (0, 0);
    let mut arcs = Vec::new();
    for (s, &out) in steps.iter().enumerate() {
        let next = if s == n - 1 {
            first.clone()
        } else if out {
            b.arc(o(j + 1), i(l))
        } else {
            b.arc(o(j), i(l + 1))
        };
        if out {
            b.triangle(
                [o(j), o(j + 1), i(l)],
                [osides[j % outer].clone(), next.clone(), prev.clone()],
            );
            j += 1;
        } else {
            b.triangle(
                [i(l + 1), i(l), o(j)],
                [isides[l % inner].clone(), prev.clone(), next.clone()],
            );
            l += 1;
        }
        arcs.push(next.arc().expect("arc"));
        prev = next;
    }
    let t = b.finish(format!("annulus {outer}+{inner}"), Vec::new())?;
    Ok((
        t,
        LoopSpec {
            name: Some("core".into()),
            triangles: (0..n).collect(),
            arcs,
            slots: None,
        },
    ))
}

/// Plain arcs crossing at most `max_cross` arcs, one per curve, as walks through triangles; arcs
/// ending at punctures also appear notched there.
pub fn walk_arcs(t: &Triangulation, max_cross: usize) -> Vec<TaggedArcSpec> {
    let mut seen: BTreeSet<(Vec<PointId>, Vec<ArcId>)> = BTreeSet::new();
    let mut out = Vec::new();
    for tri in 0..t.triangles.len() {
        for c in 0..3 {
            let exit = (c + 1) % 3;
            if t.side_arc((tri, exit)).is_none() {
                continue;
            }
            let start = t.corners(tri)[c];
            let mut walk = vec![(tri, None, Some(exit))];
            extend(
                t,
                start,
                &mut walk,
                &mut Vec::new(),
                max_cross,
                &mut seen,
                &mut out,
            );
        }
    }
    let mut tagged = Vec::new();
    for d in out {
        let punct: Vec<usize> = (0..2).filter(|&k| t.is_puncture(d.endpoints[k])).collect();
        if punct.len() == 2 && d.endpoints[0] == d.endpoints[1] {
            continue;
        }
        for mask in 0..(1usize << punct.len()) {
            let mut e = d.clone();
            for (b, &k) in punct.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    e.tags[k] = Tag::Notched;
                }
            }
            tagged.push(e);
        }
    }
    for a in &t.arcs {
        if t.plain_partner(a.id).is_some() || a.tags.contains(&Tag::Notched) {
            continue;
        }
        for k in 0..2 {
            if t.is_puncture(a.ends[k]) && a.ends[0] != a.ends[1] {
                let mut tags = [Tag::Plain, Tag::Plain];
                tags[k] = Tag::Notched;
                tagged.push(TaggedArcSpec {
                    name: None,
                    endpoints: a.ends,
                    tags,
                    triangles: Vec::new(),
                    arcs: Vec::new(),
                    slots: None,
                    underlying: Some(a.id),
                });
            }
        }
    }
    tagged.retain(|d| t.check_arc_spec(d).is_ok());
    for (i, d) in tagged.iter_mut().enumerate() {
        d.name = Some(format!("w{i}"));
    }
    tagged
}

fn extend(
    t: &Triangulation,
    start: PointId,
    walk: &mut Vec<(usize, Option<usize>, Option<usize>)>,
    crossed: &mut Vec<ArcId>,
    max_cross: usize,
    seen: &mut BTreeSet<(Vec<PointId>, Vec<ArcId>)>,
    out: &mut Vec<TaggedArcSpec>,
) {
    let (tri, _, exit) = *walk.last().expect("step");
    let exit = exit.expect("exit");
    let arc = t.side_arc((tri, exit)).expect("arc");
    if crossed.contains(&arc) || crossed.len() == max_cross {
        return;
    }
    let (t2, entry) = t.partner_slot((tri, exit)).expect("glued");
    crossed.push(arc);
    walk.push((t2, Some(entry), None));
    let end = t.corners(t2)[(entry + 2) % 3];
    let key = {
        let mut ends = vec![start, end];
        let mut seq = crossed.clone();
        if (end, seq.last()) < (start, seq.first()) {
            ends.reverse();
            seq.reverse();
        }
        (ends, seq)
    };
    if seen.insert(key) {
        out.push(TaggedArcSpec {
            name: None,
            endpoints: [start, end],
            tags: [Tag::Plain, Tag::Plain],
            triangles: walk.iter().map(|s| s.0).collect(),
            arcs: crossed.clone(),
            slots: Some(walk.iter().map(|s| [s.1, s.2]).collect()),
            underlying: None,
        });
    }
    for next in [(entry + 1) % 3, (entry + 2) % 3] {
        if t.side_arc((t2, next)).is_some() {
            walk.last_mut().expect("step").2 = Some(next);
            extend(t, start, walk, crossed, max_cross, seen, out);
        }
    }
    walk.pop();
    crossed.pop();
}

/// A random instance: a polygon or once-punctured polygon and one of its arcs crossing it.
pub fn random_arc<R: Rng>(
    rng: &mut R,
    max_sides: usize,
    max_fan: usize,
) -> Result<(Triangulation, TaggedArcSpec)> {
    loop {
        let t = if rng.gen_bool(0.5) {
            let k = rng.gen_range(4..=max_sides.max(4));
            polygon(rng, k)?
        } else {
            let k = rng.gen_range(2..=max_sides.max(2));
            let fan = rng.gen_range(2..=k.min(max_fan).max(2));
            punctured_polygon(rng, k, fan)?
        };
        let arcs: Vec<TaggedArcSpec> = walk_arcs(&t, 6)
            .into_iter()
            .filter(|d| !d.arcs.is_empty())
            .collect();
        if let Some(d) = arcs.choose(rng) {
            return Ok((t.clone(), d.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn hexagon_has_six_new_diagonals() {
        let t = fixtures::hexagon_fan();
        assert_eq!(walk_arcs(&t, 6).len(), 6);
    }

    #[test]
    fn random_surfaces_validate() {
        let mut r = rng(7);
        for _ in 0..20 {
            let k = r.gen_range(3..=8);
            let t = polygon(&mut r, k).unwrap();
            assert_eq!(t.arcs.len(), k - 3);
            assert_eq!(walk_arcs(&t, 10).len(), k * (k - 3) / 2 - (k - 3));
            let k = r.gen_range(2..=6);
            let fan = r.gen_range(2..=k.min(5));
            let p = punctured_polygon(&mut r, k, fan).unwrap();
            assert_eq!(p.arcs.len(), k);
            let (o, i) = (r.gen_range(1..=3), r.gen_range(1..=3));
            let (a, z) = annulus(&mut r, o, i).unwrap();
            assert_eq!(a.arcs.len(), z.arcs.len());
        }
    }
}
