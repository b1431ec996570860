//! Triangulated polygons and annuli obtained by gluing copies of the triangles a curve crosses.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{ArcId, ArcKind, LoopSpec, PointId, Slot, Tag, TaggedArcSpec, Triangulation};

/// One crossed triangle: the surface triangle with the slots where the curve enters and leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub tri: usize,
    pub entry: Option<usize>,
    pub exit: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    Polygon,
    Annulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PolygonKind {
    Plain,
    Notched1,
    Notched2,
    /// Loop around a puncture, cut open at its base point.
    Loop,
    Annulus,
    /// The annulus cut open along the third side of its first triangle.
    AnnulusStrip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PVertex {
    pub point: PointId,
    /// Every incident edge is a diagonal.
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PEdge {
    pub ends: [usize; 2],
    /// Arc of the surface, `None` for a boundary segment of the surface.
    pub label: Option<ArcId>,
    pub diagonal: bool,
    /// `(triangle, slot)` occurrences in this polygon.
    pub sides: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PTriangle {
    pub corners: [usize; 3],
    pub sides: [usize; 3],
    pub source: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Angle {
    pub tri: usize,
    pub corner: usize,
}

/// How a loop polygon folds back onto the strip of the underlying arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopFolding {
    /// Crossings of the underlying arc.
    pub n: usize,
    /// Arcs at the encircled puncture.
    pub m: usize,
    /// Triangle index of the underlying arc's strip for each triangle, when it has one.
    pub strip_index: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TPolygon {
    pub kind: PolygonKind,
    pub shape: Shape,
    pub vertices: Vec<PVertex>,
    pub edges: Vec<PEdge>,
    pub triangles: Vec<PTriangle>,
    pub taus: Vec<usize>,
    pub zetas: Vec<usize>,
    pub xis: Vec<usize>,
    /// Start and end vertex of the strip (absent for annuli).
    pub ends: Option<[usize; 2]>,
    pub steps: Vec<Step>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub folding: Option<LoopFolding>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AngleSets {
    pub all: Vec<Angle>,
    pub at_diagonals: Vec<Angle>,
    pub exterior: Vec<Angle>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Copies of surface triangles with gluings between their sides.
struct Gluing<'a> {
    t: &'a Triangulation,
    copies: Vec<usize>,
    glues: Vec<((usize, usize), (usize, usize))>,
}

impl<'a> Gluing<'a> {
    fn new(t: &'a Triangulation) -> Self {
        Gluing {
            t,
            copies: Vec::new(),
            glues: Vec::new(),
        }
    }

    fn add(&mut self, tri: usize) -> usize {
        self.copies.push(tri);
        self.copies.len() - 1
    }

    fn glue(&mut self, a: (usize, usize), b: (usize, usize)) -> Result<()> {
        let sa = (self.copies[a.0], a.1);
        let sb = (self.copies[b.0], b.1);
        if self.t.partner_slot(sa) != Some(sb) {
            return Err(Error::InvalidArc(format!(
                "sides {sa:?} and {sb:?} are not two sides of one arc"
            )));
        }
        self.glues.push((a, b));
        Ok(())
    }

    /// Fan around the corner `corner` of copy `start`, counterclockwise, closing back onto it.
    /// Returns the glue indices in fan order.
    fn fan(&mut self, start: usize, corner: usize) -> Result<Vec<usize>> {
        let home = (self.copies[start], corner);
        let mut out = Vec::new();
        let (mut cur, mut cc) = (start, corner);
        loop {
            let side = (cc + 2) % 3;
            let (t2, k) = self
                .t
                .partner_slot((self.copies[cur], side))
                .ok_or_else(|| Error::InvalidArc("fan reaches a boundary segment".into()))?;
            if (t2, k) == home {
                self.glue((cur, side), (start, corner))?;
                out.push(self.glues.len() - 1);
                break;
            }
            let nw = self.add(t2);
            self.glue((cur, side), (nw, k))?;
            out.push(self.glues.len() - 1);
            cur = nw;
            cc = k;
            if out.len() > 3 * self.t.triangles.len() + 3 {
                return Err(Error::InvalidArc("fan does not close".into()));
            }
        }
        Ok(out)
    }

    fn finish(self, kind: PolygonKind, shape: Shape) -> (TPolygon, Vec<usize>) {
        let nc = self.copies.len();
        let mut dsu = Dsu::new(3 * nc);
        for &((ca, sa), (cb, sb)) in &self.glues {
            // side sa of ca runs corner sa -> sa+1; glued reversed onto side sb of cb
            dsu.union(3 * ca + sa, 3 * cb + (sb + 1) % 3);
            dsu.union(3 * ca + (sa + 1) % 3, 3 * cb + sb);
        }
        let mut vid: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertices = Vec::new();
        let mut corners = vec![[0usize; 3]; nc];
        for c in 0..nc {
            let pts = self.t.corners(self.copies[c]);
            for j in 0..3 {
                let r = dsu.find(3 * c + j);
                let id = *vid.entry(r).or_insert_with(|| {
                    vertices.push(PVertex {
                        point: pts[j],
                        interior: false,
                    });
                    vertices.len() - 1
                });
                corners[c][j] = id;
            }
        }
        let mut partner: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        let mut glue_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (gi, &(a, b)) in self.glues.iter().enumerate() {
            partner.insert(a, b);
            partner.insert(b, a);
            glue_of.insert(a, gi);
            glue_of.insert(b, gi);
        }
        let mut edges: Vec<PEdge> = Vec::new();
        let mut side_edge = vec![[usize::MAX; 3]; nc];
        let mut glue_edge = vec![usize::MAX; self.glues.len()];
        for c in 0..nc {
            for s in 0..3 {
                if side_edge[c][s] != usize::MAX {
                    continue;
                }
                let label = self.t.side_arc((self.copies[c], s));
                let ends = [corners[c][s], corners[c][(s + 1) % 3]];
                let id = edges.len();
                let mut sides = vec![(c, s)];
                let diagonal = partner.contains_key(&(c, s));
                if let Some(&(c2, s2)) = partner.get(&(c, s)) {
                    side_edge[c2][s2] = id;
                    sides.push((c2, s2));
                    glue_edge[glue_of[&(c, s)]] = id;
                }
                side_edge[c][s] = id;
                edges.push(PEdge {
                    ends,
                    label,
                    diagonal,
                    sides,
                });
            }
        }
        for e in &mut edges {
            e.sides.sort();
        }
        let triangles: Vec<PTriangle> = (0..nc)
            .map(|c| PTriangle {
                corners: corners[c],
                sides: side_edge[c],
                source: self.copies[c],
            })
            .collect();
        let mut on_boundary = vec![false; vertices.len()];
        for e in &edges {
            if !e.diagonal {
                on_boundary[e.ends[0]] = true;
                on_boundary[e.ends[1]] = true;
            }
        }
        for (v, b) in vertices.iter_mut().zip(on_boundary) {
            v.interior = !b;
        }
        let poly = TPolygon {
            kind,
            shape,
            vertices,
            edges,
            triangles,
            taus: Vec::new(),
            zetas: Vec::new(),
            xis: Vec::new(),
            ends: None,
            steps: Vec::new(),
            folding: None,
        };
        (poly, glue_edge)
    }
}

/// Resolves entry/exit slots for crossing data, inferring them where the data leaves them implicit.
pub fn resolve_walk(
    t: &Triangulation,
    triangles: &[usize],
    arcs: &[ArcId],
    slots: Option<&Vec<[Option<usize>; 2]>>,
    start: Option<PointId>,
    end: Option<PointId>,
) -> Result<Vec<Step>> {
    let n = arcs.len();
    if triangles.len() != n + 1 {
        return Err(Error::InvalidArc(
            "need one more triangle than crossed arcs".into(),
        ));
    }
    if let Some(s) = slots {
        if s.len() != n + 1 {
            return Err(Error::InvalidArc(
                "slot list length differs from triangle list".into(),
            ));
        }
        let steps: Vec<Step> = triangles
            .iter()
            .zip(s)
            .map(|(&tri, pair)| Step {
                tri,
                entry: pair[0],
                exit: pair[1],
            })
            .collect();
        check_walk(t, &steps, arcs, start, end)?;
        return Ok(steps);
    }
    let mut steps: Vec<Step> = triangles
        .iter()
        .map(|&tri| Step {
            tri,
            entry: None,
            exit: None,
        })
        .collect();
    let candidates = |tri: usize, arc: ArcId, avoid: Option<usize>| -> Vec<usize> {
        (0..3)
            .filter(|&j| t.triangles[tri].edges[j].arc() == Some(arc) && Some(j) != avoid)
            .collect()
    };
    for i in 0..n {
        let tri = triangles[i];
        let mut cand = candidates(tri, arcs[i], steps[i].entry);
        if i == 0 {
            if let Some(s) = start {
                let c = t.corners(tri);
                cand.retain(|&j| c[(j + 2) % 3] == s);
            }
        }
        cand.retain(|&j| t.partner_slot((tri, j)).map(|p| p.0) == Some(triangles[i + 1]));
        let exit = match cand.len() {
            0 => {
                return Err(Error::InvalidArc(format!(
                    "arc {} does not lead from triangle {} to triangle {}",
                    arcs[i],
                    tri,
                    triangles[i + 1]
                )))
            }
            1 => cand[0],
            _ => self_folded_exit(t, triangles, arcs, &steps, i, start, end)?,
        };
        steps[i].exit = Some(exit);
        let (_, k) = t.partner_slot((tri, exit)).expect("arc side");
        steps[i + 1].entry = Some(k);
    }
    check_walk(t, &steps, arcs, start, end)?;
    Ok(steps)
}

/// Chooses which radius side to leave a self-folded triangle by, given how the curve
/// enters and leaves the surrounding triangle.
fn self_folded_exit(
    t: &Triangulation,
    triangles: &[usize],
    arcs: &[ArcId],
    steps: &[Step],
    i: usize,
    start: Option<PointId>,
    end: Option<PointId>,
) -> Result<usize> {
    let ambiguous = || {
        Error::InvalidArc(format!(
            "crossing {i} through a self-folded triangle is ambiguous; supply slots"
        ))
    };
    let sf = triangles[i];
    let jl = t.loop_slot(sf).ok_or_else(ambiguous)?;
    if steps[i].entry != Some(jl) || i == 0 || i + 2 >= triangles.len() {
        return Err(ambiguous());
    }
    let outer = triangles[i - 1];
    if triangles[i + 2] != outer || triangles[i + 1] != sf {
        return Err(ambiguous());
    }
    let ol = t.partner_slot((sf, jl)).expect("loop side").1;
    let side_pos = |k: usize| ((k + 3 - ol) % 3) as f64 + 0.5;
    let corner_pos = |k: usize| match (k + 3 - ol) % 3 {
        0 => 3.0,
        r => r as f64,
    };
    let from = match steps[i - 1].entry {
        Some(e) => side_pos(e),
        None => {
            let e = steps[i - 1].exit.ok_or_else(ambiguous)?;
            let _ = start;
            corner_pos((e + 2) % 3)
        }
    };
    let to = if i + 2 == triangles.len() - 1 {
        let _ = end;
        corner_pos((ol + 2) % 3)
    } else {
        let next_arc = arcs[i + 2];
        let cands: Vec<usize> = (0..3)
            .filter(|&j| t.triangles[outer].edges[j].arc() == Some(next_arc) && j != ol)
            .collect();
        if cands.len() != 1 {
            return Err(ambiguous());
        }
        side_pos(cands[0])
    };
    if (from - to).abs() < 1e-9 {
        return Err(ambiguous());
    }
    Ok(if to < from {
        (jl + 1) % 3
    } else {
        (jl + 2) % 3
    })
}

fn check_walk(
    t: &Triangulation,
    steps: &[Step],
    arcs: &[ArcId],
    start: Option<PointId>,
    end: Option<PointId>,
) -> Result<()> {
    let n = steps.len() - 1;
    for (i, s) in steps.iter().enumerate() {
        if s.entry.is_some() == (i == 0) || s.exit.is_some() == (i == n) {
            return Err(Error::InvalidArc(format!(
                "step {i} has inconsistent entry/exit slots"
            )));
        }
        if s.entry.is_some() && s.entry == s.exit {
            return Err(Error::InvalidArc(format!(
                "step {i} leaves through its entry side"
            )));
        }
    }
    for i in 0..n {
        let a = (steps[i].tri, steps[i].exit.expect("exit"));
        let b = (steps[i + 1].tri, steps[i + 1].entry.expect("entry"));
        if t.partner_slot(a) != Some(b) || t.side_arc(a) != Some(arcs[i]) {
            return Err(Error::InvalidArc(format!(
                "crossing {i} is not along arc {}",
                arcs[i]
            )));
        }
    }
    if let Some(s) = start {
        let e = steps[0].exit.expect("exit");
        if t.corners(steps[0].tri)[(e + 2) % 3] != s {
            return Err(Error::InvalidArc(
                "start point is not opposite the first crossed arc".into(),
            ));
        }
    }
    if let Some(p) = end {
        let e = steps[n].entry.expect("entry");
        if t.corners(steps[n].tri)[(e + 2) % 3] != p {
            return Err(Error::InvalidArc(
                "end point is not opposite the last crossed arc".into(),
            ));
        }
    }
    Ok(())
}

fn strip_gluing<'a>(t: &'a Triangulation, steps: &[Step]) -> Result<(Gluing<'a>, Vec<usize>)> {
    let mut g = Gluing::new(t);
    let mut taus = Vec::new();
    for s in steps {
        g.add(s.tri);
    }
    for i in 0..steps.len() - 1 {
        g.glue(
            (i, steps[i].exit.expect("exit")),
            (i + 1, steps[i + 1].entry.expect("entry")),
        )?;
        taus.push(g.glues.len() - 1);
    }
    Ok((g, taus))
}

fn strip_ends(poly: &TPolygon, steps: &[Step]) -> [usize; 2] {
    let n = steps.len() - 1;
    let s = poly.triangles[0].corners[(steps[0].exit.expect("exit") + 2) % 3];
    let e = poly.triangles[n].corners[(steps[n].entry.expect("entry") + 2) % 3];
    [s, e]
}

/// Polygon glued from a walk of triangles, each glued to the next along its exit side.
pub fn build_strip(t: &Triangulation, steps: Vec<Step>, kind: PolygonKind) -> Result<TPolygon> {
    let (g, taus) = strip_gluing(t, &steps)?;
    let (mut poly, ge) = g.finish(kind, Shape::Polygon);
    poly.taus = taus.iter().map(|&gi| ge[gi]).collect();
    poly.ends = Some(strip_ends(&poly, &steps));
    poly.steps = steps;
    Ok(poly)
}

/// Walk of a tagged arc oriented so that a single notched end comes last.
pub fn oriented_walk(t: &Triangulation, d: &TaggedArcSpec) -> Result<(TaggedArcSpec, Vec<Step>)> {
    t.check_arc_spec(d)?;
    let d = if d.kind() == ArcKind::Notched1 && d.tags[0] == Tag::Notched {
        d.reversed()
    } else {
        d.clone()
    };
    if d.arcs.is_empty() {
        return Err(Error::ArcInTriangulation(d.underlying.unwrap_or(0)));
    }
    let steps = resolve_walk(
        t,
        &d.triangles,
        &d.arcs,
        d.slots.as_ref(),
        Some(d.endpoints[0]),
        Some(d.endpoints[1]),
    )?;
    Ok((d, steps))
}

/// The strip of triangles crossed by a plain arc.
pub fn build_plain(t: &Triangulation, d: &TaggedArcSpec) -> Result<TPolygon> {
    let (_, steps) = oriented_walk(t, d)?;
    build_strip(t, steps, PolygonKind::Plain)
}

/// The strip with fans around the notched end(s) attached.
pub fn build_notched(t: &Triangulation, d: &TaggedArcSpec) -> Result<TPolygon> {
    let kind = match d.kind() {
        ArcKind::Plain => {
            return Err(Error::InvalidArc(
                "plain arc passed to build_notched".into(),
            ))
        }
        ArcKind::Notched1 => PolygonKind::Notched1,
        ArcKind::Notched2 => PolygonKind::Notched2,
    };
    let (d, steps) = oriented_walk(t, d)?;
    for (k, e) in d.endpoints.iter().enumerate() {
        if d.tags[k] == Tag::Notched
            && t.arcs.iter().any(|a| {
                t.plain_partner(a.id).is_some()
                    && a.ends
                        .iter()
                        .zip(a.tags)
                        .any(|(x, g)| x == e && g == Tag::Notched)
            })
        {
            return Err(Error::Assumption(format!(
                "a 1-notched arc of the triangulation ends at notched end {e}"
            )));
        }
    }
    let n = steps.len() - 1;
    let (mut g, taus) = strip_gluing(t, &steps)?;
    let p_corner = (steps[n].entry.expect("entry") + 2) % 3;
    let zetas = g.fan(n, p_corner)?;
    let xis = if kind == PolygonKind::Notched2 {
        let q_corner = (steps[0].exit.expect("exit") + 2) % 3;
        g.fan(0, q_corner)?
    } else {
        Vec::new()
    };
    let (mut poly, ge) = g.finish(kind, Shape::Polygon);
    poly.taus = taus.iter().map(|&gi| ge[gi]).collect();
    poly.zetas = zetas.iter().map(|&gi| ge[gi]).collect();
    poly.xis = xis.iter().map(|&gi| ge[gi]).collect();
    poly.ends = Some(strip_ends(&poly, &steps));
    poly.steps = steps;
    Ok(poly)
}

/// Steps going once around the corner `corner` of `tri`, from the side arriving at it back to
/// the side leaving it. The first step is entered through `entry`.
fn around(t: &Triangulation, tri: usize, corner: usize) -> Result<Vec<Step>> {
    let mut out = Vec::new();
    let home = (tri, corner);
    let mut cur: Slot = (tri, corner);
    loop {
        let side = (cur.1 + 2) % 3;
        let next = t
            .partner_slot((cur.0, side))
            .ok_or_else(|| Error::InvalidArc("fan reaches a boundary segment".into()))?;
        out.push((cur, side, next));
        if next == home {
            break;
        }
        cur = next;
        if out.len() > 3 * t.triangles.len() + 3 {
            return Err(Error::InvalidArc("fan does not close".into()));
        }
    }
    Ok(out
        .iter()
        .skip(1)
        .map(|&((tr, c), side, _)| Step {
            tri: tr,
            entry: Some(c),
            exit: Some(side),
        })
        .collect())
}

/// Loop around the end puncture of a walk, based at its start point: the walk, once around the
/// puncture, and the walk reversed.
pub fn build_gamma_loop(t: &Triangulation, steps: &[Step]) -> Result<TPolygon> {
    let n = steps.len() - 1;
    let last = steps[n];
    let e = last.entry.expect("entry");
    let corner = (e + 2) % 3;
    let mut walk: Vec<Step> = steps[..n].to_vec();
    walk.push(Step {
        tri: last.tri,
        entry: last.entry,
        exit: Some((corner + 2) % 3),
    });
    let fan = around(t, last.tri, corner)?;
    let m = fan.len() + 1;
    walk.extend(fan);
    walk.push(Step {
        tri: last.tri,
        entry: Some(corner),
        exit: Some(e),
    });
    for s in steps[..n].iter().rev() {
        walk.push(Step {
            tri: s.tri,
            entry: s.exit,
            exit: s.entry,
        });
    }
    let len = walk.len();
    walk[len - 1].exit = None;
    let mut poly = build_strip(t, walk, PolygonKind::Loop)?;
    let mut strip_index = vec![None; len];
    for (k, s) in strip_index.iter_mut().enumerate() {
        if k <= n {
            *s = Some(k);
        } else if k >= n + m {
            *s = Some(2 * n + m - k);
        }
    }
    poly.folding = Some(LoopFolding { n, m, strip_index });
    Ok(poly)
}

/// Loop based at the other end of `arc`, cutting out a once-punctured monogon around `s`.
pub fn build_loop_polygon(t: &Triangulation, arc: ArcId, s: PointId) -> Result<TPolygon> {
    let ends = t.ideal_ends(arc);
    if !ends.contains(&s) || !t.is_puncture(s) {
        return Err(Error::InvalidArc(format!(
            "arc {arc} does not end at puncture {s}"
        )));
    }
    if ends[0] == ends[1] {
        return Err(Error::Unsupported(format!("arc {arc} is a loop at {s}")));
    }
    let (tri, j) = t
        .arc_slots(arc)
        .into_iter()
        .find(|&(tri, j)| t.corners(tri)[j] == s)
        .ok_or_else(|| Error::InvalidArc(format!("arc {arc} never leaves {s}")))?;
    let fan = around(t, tri, j)?;
    let mut walk = vec![Step {
        tri,
        entry: None,
        exit: Some((j + 2) % 3),
    }];
    walk.extend(fan);
    let last = walk.len() - 1;
    walk[last].exit = None;
    if last == 0 {
        return Err(Error::Unsupported(format!("puncture {s} has no other arc")));
    }
    // the final triangle is entered by the side leaving s and has the arc arriving at s
    let fin = walk[last];
    if t.side_arc((fin.tri, (fin.entry.expect("entry") + 2) % 3)) != Some(arc) {
        return Err(Error::InvalidArc(format!(
            "loop around {s} does not return to arc {arc}"
        )));
    }
    build_strip(t, walk, PolygonKind::Loop)
}

fn loop_steps(t: &Triangulation, z: &LoopSpec) -> Result<Vec<Step>> {
    let n = z.arcs.len();
    if n == 0 || z.triangles.len() != n {
        return Err(Error::InvalidArc(
            "cyclic data needs as many triangles as arcs".into(),
        ));
    }
    if let Some(s) = &z.slots {
        if s.len() != n {
            return Err(Error::InvalidArc(
                "slot list length differs from triangle list".into(),
            ));
        }
        return Ok(z
            .triangles
            .iter()
            .zip(s)
            .map(|(&tri, p)| Step {
                tri,
                entry: p[0],
                exit: p[1],
            })
            .collect());
    }
    // open the cycle, resolve as a walk, then close
    let mut tris = z.triangles.clone();
    tris.push(z.triangles[0]);
    let walk = resolve_walk(t, &tris, &z.arcs, None, None, None)?;
    let mut steps: Vec<Step> = walk[..n].to_vec();
    steps[0].entry = walk[n].entry;
    Ok(steps)
}

/// The triangulated annulus swept out by an essential loop.
pub fn build_annulus(t: &Triangulation, z: &LoopSpec) -> Result<TPolygon> {
    let steps = loop_steps(t, z)?;
    let n = steps.len();
    let mut g = Gluing::new(t);
    for s in &steps {
        g.add(s.tri);
    }
    let mut taus = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let a = (
            i,
            steps[i]
                .exit
                .ok_or_else(|| Error::InvalidArc("missing exit".into()))?,
        );
        let b = (
            j,
            steps[j]
                .entry
                .ok_or_else(|| Error::InvalidArc("missing entry".into()))?,
        );
        if a.1 == steps[i].entry.unwrap_or(usize::MAX) {
            return Err(Error::InvalidArc(format!(
                "step {i} leaves through its entry side"
            )));
        }
        g.glue(a, b)?;
        taus.push(g.glues.len() - 1);
    }
    let (mut poly, ge) = g.finish(PolygonKind::Annulus, Shape::Annulus);
    poly.taus = taus.iter().map(|&gi| ge[gi]).collect();
    poly.steps = steps;
    Ok(poly)
}

/// The annulus cut along the third side of its first triangle: a strip starting and ending
/// with copies of that triangle.
pub fn build_annulus_strip(t: &Triangulation, z: &LoopSpec) -> Result<TPolygon> {
    let steps = loop_steps(t, z)?;
    let first = steps[0];
    let mut walk = vec![Step {
        tri: first.tri,
        entry: None,
        exit: first.exit,
    }];
    walk.extend_from_slice(&steps[1..]);
    walk.push(Step {
        tri: first.tri,
        entry: first.entry,
        exit: None,
    });
    build_strip(t, walk, PolygonKind::AnnulusStrip)
}

impl TPolygon {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn n_diagonals(&self) -> usize {
        self.edges.iter().filter(|e| e.diagonal).count()
    }

    pub fn vertex(&self, a: Angle) -> usize {
        self.triangles[a.tri].corners[a.corner]
    }

    /// Edge opposite the angle.
    pub fn opposite(&self, a: Angle) -> usize {
        self.triangles[a.tri].sides[(a.corner + 1) % 3]
    }

    /// The two sides of the angle: leaving and arriving.
    pub fn angle_sides(&self, a: Angle) -> (usize, usize) {
        let s = self.triangles[a.tri].sides;
        (s[a.corner], s[(a.corner + 2) % 3])
    }

    pub fn diagonal_incident(&self) -> Vec<bool> {
        let mut out = vec![false; self.vertices.len()];
        for e in &self.edges {
            if e.diagonal {
                out[e.ends[0]] = true;
                out[e.ends[1]] = true;
            }
        }
        out
    }

    pub fn angles(&self) -> AngleSets {
        let di = self.diagonal_incident();
        let mut s = AngleSets::default();
        for tri in 0..self.triangles.len() {
            for corner in 0..3 {
                let a = Angle { tri, corner };
                s.all.push(a);
                if di[self.vertex(a)] {
                    s.at_diagonals.push(a);
                }
                let (x, y) = self.angle_sides(a);
                if self.edges[x].diagonal != self.edges[y].diagonal {
                    s.exterior.push(a);
                }
            }
        }
        s
    }

    /// Angles at `v` in counterclockwise order; for a boundary vertex the first angle contains
    /// the boundary edge leaving `v`.
    pub fn angles_around(&self, v: usize) -> Vec<Angle> {
        let mut at: Vec<Angle> = Vec::new();
        for tri in 0..self.triangles.len() {
            for corner in 0..3 {
                if self.triangles[tri].corners[corner] == v {
                    at.push(Angle { tri, corner });
                }
            }
        }
        let start = at
            .iter()
            .copied()
            .find(|&a| !self.edges[self.angle_sides(a).0].diagonal)
            .unwrap_or(at[0]);
        let mut out = vec![start];
        let mut cur = start;
        loop {
            let arriving = self.angle_sides(cur).1;
            let e = &self.edges[arriving];
            if !e.diagonal {
                break;
            }
            let &(t2, s2) = e
                .sides
                .iter()
                .find(|&&x| x != (cur.tri, (cur.corner + 2) % 3))
                .expect("glued");
            let next = Angle {
                tri: t2,
                corner: s2,
            };
            if next == start {
                break;
            }
            out.push(next);
            cur = next;
        }
        out
    }

    /// Boundary edges grouped into cycles, each listed in traversal order.
    pub fn boundary_components(&self) -> Vec<Vec<usize>> {
        let bnd: Vec<usize> = (0..self.edges.len())
            .filter(|&e| !self.edges[e].diagonal)
            .collect();
        let mut from: BTreeMap<usize, usize> = BTreeMap::new();
        for &e in &bnd {
            let (tri, s) = self.edges[e].sides[0];
            from.insert(self.triangles[tri].corners[s], e);
        }
        let mut seen = vec![false; self.edges.len()];
        let mut comps = Vec::new();
        for &e0 in &bnd {
            if seen[e0] {
                continue;
            }
            let mut comp = Vec::new();
            let mut e = e0;
            while !seen[e] {
                seen[e] = true;
                comp.push(e);
                let (tri, s) = self.edges[e].sides[0];
                let head = self.triangles[tri].corners[(s + 1) % 3];
                match from.get(&head) {
                    Some(&nx) => e = nx,
                    None => break,
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Product of the labels of the diagonals, as an exponent vector over arc ids.
    pub fn diagonal_labels(&self) -> Vec<ArcId> {
        self.edges
            .iter()
            .filter(|e| e.diagonal)
            .filter_map(|e| e.label)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn labels(p: &TPolygon, es: &[usize]) -> Vec<Option<ArcId>> {
        es.iter().map(|&e| p.edges[e].label).collect()
    }

    fn check_counts(p: &TPolygon) {
        let di = p.diagonal_incident().iter().filter(|b| **b).count();
        assert_eq!(
            p.triangles.len(),
            di,
            "triangles vs diagonal-incident vertices"
        );
    }

    /// Boundary labels read around the polygon starting after vertex `v`.
    fn boundary_cycle(p: &TPolygon) -> Vec<Option<ArcId>> {
        let comps = p.boundary_components();
        assert_eq!(comps.len(), 1);
        labels(p, &comps[0])
    }

    fn rotations_match(a: &[Option<ArcId>], b: &[Option<ArcId>]) -> bool {
        (0..a.len()).any(|r| {
            let mut x = a.to_vec();
            x.rotate_left(r);
            x == b
        })
    }

    #[test]
    fn plain_arc_heptagon() {
        let t = fixtures::square_surface();
        let p = build_plain(&t, &fixtures::plain_arc()).unwrap();
        assert_eq!(p.triangles.len(), 5);
        assert_eq!(p.vertices.len(), 7);
        assert_eq!(
            labels(&p, &p.taus),
            vec![Some(2), Some(1), Some(2), Some(3)]
        );
        // all diagonals share one vertex
        let common = p.edges[p.taus[0]]
            .ends
            .iter()
            .copied()
            .find(|v| p.taus.iter().all(|&e| p.edges[e].ends.contains(v)));
        assert!(common.is_some());
        let b = boundary_cycle(&p);
        let want = vec![Some(3), Some(1), Some(1), None, Some(6), Some(4), None];
        let mut rev = want.clone();
        rev.reverse();
        assert!(
            rotations_match(&b, &want) || rotations_match(&b, &rev),
            "{b:?}"
        );
        check_counts(&p);
    }

    #[test]
    fn notched_arc_punctured_pentagon() {
        let t = fixtures::square_surface();
        let p = build_notched(&t, &fixtures::notched_arc()).unwrap();
        assert_eq!(labels(&p, &p.taus), vec![Some(2), Some(3)]);
        assert_eq!(labels(&p, &p.zetas), vec![Some(4), Some(5), Some(6)]);
        assert_eq!(p.triangles.len(), 5);
        assert_eq!(p.vertices.iter().filter(|v| v.interior).count(), 1);
        let b = boundary_cycle(&p);
        let want = vec![Some(1), None, Some(7), None, Some(1)];
        let mut rev = want.clone();
        rev.reverse();
        assert!(
            rotations_match(&b, &want) || rotations_match(&b, &rev),
            "{b:?}"
        );
        check_counts(&p);
    }

    #[test]
    fn doubly_notched_arc_twice_punctured_square() {
        let t = fixtures::square_surface();
        let p = build_notched(&t, &fixtures::doubly_notched_arc()).unwrap();
        assert_eq!(labels(&p, &p.taus), vec![Some(7)]);
        let mut z = labels(&p, &p.zetas);
        z.sort();
        assert_eq!(z, vec![Some(8), Some(9), Some(10)]);
        let mut x = labels(&p, &p.xis);
        x.sort();
        assert_eq!(x, vec![Some(4), Some(5), Some(6)]);
        assert_eq!(p.triangles.len(), 6);
        assert_eq!(p.n_diagonals(), 7);
        assert_eq!(p.vertices.iter().filter(|v| v.interior).count(), 2);
        let mut b = boundary_cycle(&p);
        b.sort();
        assert_eq!(b, vec![None, None, None, Some(3)]);
        check_counts(&p);
    }

    #[test]
    fn loop_polygon_of_example() {
        let t = fixtures::square_surface();
        let (_, steps) = oriented_walk(&t, &fixtures::notched_arc()).unwrap();
        let p = build_gamma_loop(&t, &steps).unwrap();
        assert_eq!(
            labels(&p, &p.taus),
            [2, 3, 4, 5, 6, 3, 2]
                .iter()
                .map(|&a| Some(a))
                .collect::<Vec<_>>()
        );
        assert_eq!(p.triangles.len(), 8);
        check_counts(&p);
    }

    #[test]
    fn single_crossing_square() {
        let t = fixtures::pentagon_fan();
        let d = TaggedArcSpec {
            name: None,
            endpoints: [1, 3],
            tags: [Tag::Plain, Tag::Plain],
            triangles: vec![0, 1],
            arcs: vec![1],
            slots: None,
            underlying: None,
        };
        let p = build_plain(&t, &d).unwrap();
        assert_eq!(p.triangles.len(), 2);
        assert_eq!(p.vertices.len(), 4);
        let a = p.angles();
        assert_eq!(
            (a.all.len(), a.at_diagonals.len(), a.exterior.len()),
            (6, 4, 4)
        );
    }

    #[test]
    fn annulus_polygon() {
        let t = fixtures::annulus();
        let p = build_annulus(&t, &fixtures::annulus_loop()).unwrap();
        assert_eq!(p.shape, Shape::Annulus);
        assert_eq!(p.triangles.len(), 4);
        assert_eq!(p.vertices.len(), 4);
        assert_eq!(
            labels(&p, &p.taus),
            vec![Some(2), Some(3), Some(4), Some(1)]
        );
        let mut comps: Vec<Vec<Option<ArcId>>> = p
            .boundary_components()
            .iter()
            .map(|c| labels(&p, c))
            .collect();
        comps.sort();
        assert_eq!(comps.len(), 2);
        assert!(comps.contains(&vec![None, None]));
        let outer: Vec<_> = comps.iter().find(|c| c[0].is_some()).unwrap().clone();
        let mut o = outer.clone();
        o.sort();
        assert_eq!(o, vec![Some(5), Some(6)]);
        let a = p.angles();
        assert_eq!(a.at_diagonals.len(), a.all.len());
        check_counts(&p);
        let s = build_annulus_strip(&t, &fixtures::annulus_loop()).unwrap();
        assert_eq!(s.triangles.len(), 5);
        assert_eq!(s.triangles[0].source, s.triangles[4].source);
    }

    #[test]
    fn loop_polygon_around_digon_puncture() {
        let t = fixtures::punctured_digon();
        let p = build_loop_polygon(&t, 1, 2).unwrap();
        assert_eq!(labels(&p, &p.taus), vec![Some(2)]);
        assert_eq!(p.triangles.len(), 2);
        assert!(build_loop_polygon(&t, 1, 0).is_err());
    }

    #[test]
    fn arc_in_triangulation_is_reported() {
        let t = fixtures::twice_punctured_monogon();
        let d = fixtures::monogon_doubly_notched();
        assert!(matches!(
            build_notched(&t, &d),
            Err(Error::ArcInTriangulation(4))
        ));
    }

    #[test]
    fn dump_is_json() {
        let t = fixtures::square_surface();
        let p = build_notched(&t, &fixtures::doubly_notched_arc()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v["triangles"].as_array().unwrap().len(), 6);
    }
}
