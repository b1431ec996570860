//! Combinatorial tagged triangulations of marked surfaces.
//!
//! Triangles are always listed in ideal form: a 1-notched arc `t` whose plain
//! partner is `s` occurs in the triangle data as the loop of the self-folded
//! triangle enclosing the puncture, and `s` as its radius. Sides are listed
//! counterclockwise; side `j` runs from corner `j` to corner `j+1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type PointId = u32;
pub type ArcId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Plain,
    Notched,
}

impl Tag {
    pub fn flipped(self) -> Tag {
        match self {
            Tag::Plain => Tag::Notched,
            Tag::Notched => Tag::Plain,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub id: ArcId,
    pub ends: [PointId; 2],
    #[serde(default = "plain_tags")]
    pub tags: [Tag; 2],
}

fn plain_tags() -> [Tag; 2] {
    [Tag::Plain, Tag::Plain]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySegment {
    pub id: String,
    pub ends: [PointId; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeRef {
    Arc(ArcId),
    Boundary(String),
}

impl EdgeRef {
    pub fn arc(&self) -> Option<ArcId> {
        match self {
            EdgeRef::Arc(a) => Some(*a),
            EdgeRef::Boundary(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangle {
    pub edges: [EdgeRef; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corners: Option<[PointId; 3]>,
    #[serde(default)]
    pub self_folded: bool,
}

/// A side of a triangle: `(triangle index, slot)`.
pub type Slot = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub arcs: Vec<Arc>,
    #[serde(default)]
    pub boundary: Vec<BoundarySegment>,
    pub triangles: Vec<Triangle>,
    #[serde(default)]
    pub punctures: Vec<PointId>,
}

/// Crossing data for a tagged arc: `triangles[i]` and `triangles[i+1]` are glued along `arcs[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedArcSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub endpoints: [PointId; 2],
    #[serde(default = "plain_tags")]
    pub tags: [Tag; 2],
    #[serde(default)]
    pub triangles: Vec<usize>,
    #[serde(default)]
    pub arcs: Vec<ArcId>,
    /// Explicit `[entry, exit]` slots per crossed triangle, overriding inference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slots: Option<Vec<[Option<usize>; 2]>>,
    /// The arc of the triangulation with the same underlying curve, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub underlying: Option<ArcId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    Plain,
    Notched1,
    Notched2,
}

impl TaggedArcSpec {
    pub fn kind(&self) -> ArcKind {
        match self.tags.iter().filter(|t| **t == Tag::Notched).count() {
            0 => ArcKind::Plain,
            1 => ArcKind::Notched1,
            _ => ArcKind::Notched2,
        }
    }

    /// Same curve traversed in the opposite direction.
    pub fn reversed(&self) -> TaggedArcSpec {
        let mut r = self.clone();
        r.endpoints.reverse();
        r.tags.reverse();
        r.triangles.reverse();
        r.arcs.reverse();
        if let Some(s) = &mut r.slots {
            s.reverse();
            for pair in s.iter_mut() {
                pair.reverse();
            }
        }
        r
    }
}

/// Cyclic crossing data for a closed curve: `triangles[i]` and `triangles[i+1 mod n]` share `arcs[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub triangles: Vec<usize>,
    pub arcs: Vec<ArcId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slots: Option<Vec<[Option<usize>; 2]>>,
}

/// Relabeling produced by tag normalization: pairs of arc ids whose roles were swapped.
pub type Relabeling = Vec<(ArcId, ArcId)>;

impl Triangulation {
    pub fn from_json(s: &str) -> Result<Triangulation> {
        let mut t: Triangulation = serde_json::from_str(s)?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id - 1]
    }

    pub fn is_puncture(&self, p: PointId) -> bool {
        self.punctures.contains(&p)
    }

    pub fn corners(&self, tri: usize) -> [PointId; 3] {
        self.triangles[tri]
            .corners
            .expect("validated triangulation")
    }

    pub fn side(&self, (tri, slot): Slot) -> &EdgeRef {
        &self.triangles[tri].edges[slot]
    }

    pub fn side_arc(&self, s: Slot) -> Option<ArcId> {
        self.side(s).arc()
    }

    pub fn marked_points(&self) -> BTreeSet<PointId> {
        let mut out: BTreeSet<PointId> = self.punctures.iter().copied().collect();
        for a in &self.arcs {
            out.extend(a.ends);
        }
        for b in &self.boundary {
            out.extend(b.ends);
        }
        out
    }

    /// The two slots where an arc occurs, in triangle order.
    pub fn arc_slots(&self, id: ArcId) -> Vec<Slot> {
        let mut out = Vec::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for (j, e) in t.edges.iter().enumerate() {
                if e.arc() == Some(id) {
                    out.push((ti, j));
                }
            }
        }
        out
    }

    /// The other occurrence of the arc at `s`, or `None` for boundary segments.
    pub fn partner_slot(&self, s: Slot) -> Option<Slot> {
        let a = self.side_arc(s)?;
        self.arc_slots(a).into_iter().find(|&o| o != s)
    }

    /// Plain arc with the same endpoints as a 1-notched arc.
    pub fn plain_partner(&self, id: ArcId) -> Option<ArcId> {
        let a = self.arc(id);
        if a.tags.iter().filter(|t| **t == Tag::Notched).count() != 1 {
            return None;
        }
        let notched_end = if a.tags[0] == Tag::Notched { 0 } else { 1 };
        let p = a.ends[notched_end];
        let o = a.ends[1 - notched_end];
        self.arcs
            .iter()
            .find(|b| {
                b.id != id
                    && same_ends(b.ends, a.ends)
                    && b.tags
                        .iter()
                        .zip(b.ends)
                        .all(|(t, e)| e != p || *t == Tag::Plain)
                    && b.tags
                        .iter()
                        .zip(b.ends)
                        .all(|(t, e)| e != o || *t == Tag::Plain)
            })
            .map(|b| b.id)
    }

    /// Endpoints of an arc as it occurs in the (ideal-form) triangle data.
    pub fn ideal_ends(&self, id: ArcId) -> [PointId; 2] {
        let a = self.arc(id);
        if self.plain_partner(id).is_some() {
            let plain_end = if a.tags[0] == Tag::Notched {
                a.ends[1]
            } else {
                a.ends[0]
            };
            [plain_end, plain_end]
        } else {
            a.ends
        }
    }

    fn edge_ends(&self, e: &EdgeRef) -> Result<[PointId; 2]> {
        match e {
            EdgeRef::Arc(a) => {
                if *a == 0 || *a > self.arcs.len() {
                    return Err(Error::InvalidTriangulation(format!("unknown arc {a}")));
                }
                Ok(self.ideal_ends(*a))
            }
            EdgeRef::Boundary(b) => self
                .boundary
                .iter()
                .find(|s| &s.id == b)
                .map(|s| s.ends)
                .ok_or_else(|| {
                    Error::InvalidTriangulation(format!("unknown boundary segment {b}"))
                }),
        }
    }

    /// Checks every structural invariant and fills in missing triangle corners.
    pub fn validate(&mut self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTriangulation(m));
        for (i, a) in self.arcs.iter().enumerate() {
            if a.id != i + 1 {
                return bad(format!(
                    "arc ids must be 1..N in order, found {} at position {}",
                    a.id,
                    i + 1
                ));
            }
            for (e, t) in a.ends.iter().zip(a.tags) {
                if t == Tag::Notched && !self.punctures.contains(e) {
                    return bad(format!("arc {} is notched at boundary point {}", a.id, e));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for b in &self.boundary {
            if !seen.insert(b.id.clone()) {
                return bad(format!("duplicate boundary segment {}", b.id));
            }
            if b.ends.iter().any(|e| self.punctures.contains(e)) {
                return bad(format!("boundary segment {} ends at a puncture", b.id));
            }
        }
        let mut count: BTreeMap<EdgeRef, usize> = BTreeMap::new();
        for t in &self.triangles {
            for e in &t.edges {
                *count.entry(e.clone()).or_default() += 1;
            }
        }
        for a in &self.arcs {
            let c = count.get(&EdgeRef::Arc(a.id)).copied().unwrap_or(0);
            if c != 2 {
                return bad(format!(
                    "arc {} occurs {} times among triangle sides",
                    a.id, c
                ));
            }
        }
        for b in &self.boundary {
            let c = count
                .get(&EdgeRef::Boundary(b.id.clone()))
                .copied()
                .unwrap_or(0);
            if c != 1 {
                return bad(format!(
                    "boundary segment {} occurs {} times among triangle sides",
                    b.id, c
                ));
            }
        }
        for e in count.keys() {
            self.edge_ends(e)?;
        }
        for ti in 0..self.triangles.len() {
            let ends: Vec<[PointId; 2]> = self.triangles[ti]
                .edges
                .iter()
                .map(|e| self.edge_ends(e))
                .collect::<Result<_>>()?;
            let corners = match self.triangles[ti].corners {
                Some(c) => {
                    for j in 0..3 {
                        if !same_ends([c[j], c[(j + 1) % 3]], ends[j]) {
                            return bad(format!(
                                "triangle {ti}: side {j} does not join corners {} and {}",
                                c[j],
                                c[(j + 1) % 3]
                            ));
                        }
                    }
                    c
                }
                None => derive_corners(&ends)
                    .map_err(|m| Error::InvalidTriangulation(format!("triangle {ti}: {m}")))?,
            };
            self.triangles[ti].corners = Some(corners);
        }
        // Orientation: the two occurrences of an arc traverse it in opposite directions.
        for a in &self.arcs {
            let s = self.arc_slots(a.id);
            let d0 = self.slot_direction(s[0]);
            let d1 = self.slot_direction(s[1]);
            if d0 != [d1[1], d1[0]] {
                return bad(format!(
                    "arc {} is not glued with opposite orientations",
                    a.id
                ));
            }
        }
        for (ti, t) in self.triangles.iter().enumerate() {
            let arcs: Vec<ArcId> = t.edges.iter().filter_map(|e| e.arc()).collect();
            let repeated = arcs.len() == 3
                && (arcs[0] == arcs[1] || arcs[1] == arcs[2] || arcs[0] == arcs[2])
                || arcs.len() == 2 && arcs[0] == arcs[1];
            if repeated != t.self_folded {
                return bad(format!(
                    "triangle {ti}: self_folded flag disagrees with its sides"
                ));
            }
            if t.self_folded {
                let (lp, r) = self.self_folded_parts(ti).ok_or_else(|| {
                    Error::InvalidTriangulation(format!(
                        "triangle {ti}: malformed self-folded triangle"
                    ))
                })?;
                let le = self.ideal_ends(lp);
                if le[0] != le[1] {
                    return bad(format!("triangle {ti}: loop side {lp} is not a loop"));
                }
                let re = self.arc(r).ends;
                if !re.contains(&le[0]) {
                    return bad(format!(
                        "triangle {ti}: radius {r} does not meet the loop base"
                    ));
                }
            }
        }
        Ok(())
    }

    fn slot_direction(&self, (tri, j): Slot) -> [PointId; 2] {
        let c = self.corners(tri);
        [c[j], c[(j + 1) % 3]]
    }

    /// `(loop, radius)` of a self-folded triangle.
    pub fn self_folded_parts(&self, tri: usize) -> Option<(ArcId, ArcId)> {
        let t = &self.triangles[tri];
        let a: Vec<ArcId> = t.edges.iter().filter_map(|e| e.arc()).collect();
        if a.len() != 3 {
            return None;
        }
        for j in 0..3 {
            let (x, y, z) = (a[j], a[(j + 1) % 3], a[(j + 2) % 3]);
            if y == z && x != y {
                return Some((x, y));
            }
        }
        None
    }

    /// Slot of the loop side in a self-folded triangle.
    pub fn loop_slot(&self, tri: usize) -> Option<usize> {
        let (lp, _) = self.self_folded_parts(tri)?;
        self.triangles[tri]
            .edges
            .iter()
            .position(|e| e.arc() == Some(lp))
    }

    /// The ideal triangulation: each 1-notched arc replaced by the loop enclosing its puncture.
    pub fn to_ideal(&self) -> Result<Triangulation> {
        self.check_tag_assumption()?;
        let mut out = self.clone();
        for a in &mut out.arcs {
            if self.plain_partner(a.id).is_some() {
                a.ends = self.ideal_ends(a.id);
                a.tags = plain_tags();
            }
        }
        Ok(out)
    }

    /// At most one 1-notched arc per puncture, each with its plain partner in the triangulation,
    /// and no other notched ends.
    pub fn check_tag_assumption(&self) -> Result<()> {
        let mut per_puncture: BTreeMap<PointId, usize> = BTreeMap::new();
        for a in &self.arcs {
            for (e, t) in a.ends.iter().zip(a.tags) {
                if t == Tag::Notched {
                    if self.plain_partner(a.id).is_none() {
                        return Err(Error::Assumption(format!(
                            "arc {} is notched at {} without a plain partner",
                            a.id, e
                        )));
                    }
                    *per_puncture.entry(*e).or_default() += 1;
                }
            }
        }
        if let Some((p, _)) = per_puncture.iter().find(|(_, c)| **c > 1) {
            return Err(Error::Assumption(format!(
                "more than one 1-notched arc at puncture {p}"
            )));
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Tags at every arc end incident to `p` flipped.
    fn flip_tags_at(&mut self, p: PointId) {
        for a in &mut self.arcs {
            for k in 0..2 {
                if a.ends[k] == p {
                    a.tags[k] = a.tags[k].flipped();
                }
            }
        }
    }

    fn swap_arc_ids_in_triangles(&mut self, s: ArcId, t: ArcId) {
        for tri in &mut self.triangles {
            for e in &mut tri.edges {
                if let EdgeRef::Arc(a) = e {
                    if *a == s {
                        *a = t;
                    } else if *a == t {
                        *a = s;
                    }
                }
            }
        }
    }

    /// Simultaneous tag change so that the ideal-form assumptions hold for `t` and `d`.
    /// Arc ids keep naming the same variables, so expansions need no renaming afterwards.
    pub fn normalize_tags(
        &self,
        d: &TaggedArcSpec,
    ) -> Result<(Triangulation, TaggedArcSpec, Relabeling)> {
        let mut t = self.clone();
        let mut d = d.clone();
        let mut relabel = Vec::new();
        if t.is_closed() && t.punctures.len() == 1 && d.tags.contains(&Tag::Notched) {
            return Err(Error::Unsupported(
                "notched arc on a closed surface with a single puncture".into(),
            ));
        }
        for &p in &self.punctures.clone() {
            let ends: Vec<Tag> = t
                .arcs
                .iter()
                .flat_map(|a| {
                    a.ends
                        .iter()
                        .zip(a.tags)
                        .filter(|(e, _)| **e == p)
                        .map(|(_, g)| g)
                })
                .collect();
            if !ends.is_empty() && ends.iter().all(|g| *g == Tag::Notched) {
                t.flip_tags_at(p);
                flip_spec_at(&mut d, p);
            }
        }
        for k in 0..2 {
            if d.tags[k] != Tag::Notched {
                continue;
            }
            let p = d.endpoints[k];
            let notched_here = t.arcs.iter().find(|a| {
                a.ends
                    .iter()
                    .zip(a.tags)
                    .any(|(e, g)| *e == p && g == Tag::Notched)
                    && t.plain_partner(a.id).is_some()
            });
            if let Some(a) = notched_here {
                let notched = a.id;
                let plain = t.plain_partner(notched).expect("checked");
                t.flip_tags_at(p);
                flip_spec_at(&mut d, p);
                t.swap_arc_ids_in_triangles(plain, notched);
                for x in &mut d.arcs {
                    if *x == plain {
                        *x = notched;
                    } else if *x == notched {
                        *x = plain;
                    }
                }
                if let Some(u) = &mut d.underlying {
                    if *u == plain {
                        *u = notched;
                    } else if *u == notched {
                        *u = plain;
                    }
                }
                relabel.push((notched, plain));
            }
        }
        t.validate()?;
        t.check_tag_assumption()?;
        Ok((t, d, relabel))
    }

    /// Arcs incident to puncture `p`, counterclockwise, starting from the first incidence in
    /// triangle order. Loops based at `p` appear twice.
    pub fn puncture_fan(&self, p: PointId) -> Result<Vec<ArcId>> {
        Ok(self
            .fan_slots(p)?
            .into_iter()
            .map(|s| self.side_arc(s).expect("arc side"))
            .collect())
    }

    /// Crossed sides of [`puncture_fan`], as the slots on the side of the earlier incidence.
    pub fn fan_slots(&self, p: PointId) -> Result<Vec<Slot>> {
        if !self.is_puncture(p) {
            return Err(Error::InvalidArc(format!("{p} is not a puncture")));
        }
        let start =
            self.incidences(p).into_iter().next().ok_or_else(|| {
                Error::InvalidArc(format!("puncture {p} has no incident triangle"))
            })?;
        let mut out = Vec::new();
        let mut cur = start;
        loop {
            let side = (cur.0, (cur.1 + 2) % 3);
            out.push(side);
            let next = self.partner_slot(side).ok_or_else(|| {
                Error::InvalidTriangulation(format!("boundary segment at puncture {p}"))
            })?;
            cur = next;
            if cur == start {
                break;
            }
            if out.len() > 3 * self.triangles.len() {
                return Err(Error::InvalidTriangulation(format!(
                    "fan at {p} does not close"
                )));
            }
        }
        Ok(out)
    }

    /// `(triangle, corner)` pairs located at point `p`.
    pub fn incidences(&self, p: PointId) -> Vec<Slot> {
        let mut out = Vec::new();
        for ti in 0..self.triangles.len() {
            for (j, c) in self.corners(ti).iter().enumerate() {
                if *c == p {
                    out.push((ti, j));
                }
            }
        }
        out
    }

    /// Loop enclosing `a` when `a` is the radius of a self-folded triangle, otherwise `a`.
    fn project(&self, a: ArcId) -> ArcId {
        for ti in 0..self.triangles.len() {
            if let Some((lp, r)) = self.self_folded_parts(ti) {
                if r == a {
                    return lp;
                }
            }
        }
        a
    }

    /// Signed adjacency matrix of the ideal triangulation, rows and columns indexed by arc id - 1.
    /// A radius takes the row and column of its loop.
    pub fn exchange_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n_arcs();
        let mut base = vec![vec![0i64; n]; n];
        for (ti, t) in self.triangles.iter().enumerate() {
            if t.self_folded || self.self_folded_parts(ti).is_some() {
                continue;
            }
            for k in 0..3 {
                let (Some(a), Some(c)) = (t.edges[k].arc(), t.edges[(k + 2) % 3].arc()) else {
                    continue;
                };
                // Clockwise, side k-1 follows side k.
                base[a - 1][c - 1] += 1;
                base[c - 1][a - 1] -= 1;
            }
        }
        let pi: Vec<usize> = (1..=n).map(|a| self.project(a) - 1).collect();
        (0..n)
            .map(|i| (0..n).map(|j| base[pi[i]][pi[j]]).collect())
            .collect()
    }

    pub fn end_count(&self, arc: ArcId, s: PointId) -> usize {
        self.arc(arc).ends.iter().filter(|e| **e == s).count()
    }

    /// Validates crossing data of a tagged arc against this triangulation.
    pub fn check_arc_spec(&self, d: &TaggedArcSpec) -> Result<()> {
        for (k, e) in d.endpoints.iter().enumerate() {
            if !self.marked_points().contains(e) {
                return Err(Error::InvalidArc(format!("unknown endpoint {e}")));
            }
            if d.tags[k] == Tag::Notched && !self.is_puncture(*e) {
                return Err(Error::InvalidArc(format!(
                    "notched end at boundary point {e}"
                )));
            }
        }
        if d.triangles.is_empty() {
            if d.underlying.is_none() {
                return Err(Error::InvalidArc(
                    "no crossings and no underlying arc".into(),
                ));
            }
            return Ok(());
        }
        if d.triangles.len() != d.arcs.len() + 1 {
            return Err(Error::InvalidArc(
                "need one more triangle than crossed arcs".into(),
            ));
        }
        for &ti in &d.triangles {
            if ti >= self.triangles.len() {
                return Err(Error::InvalidArc(format!("unknown triangle {ti}")));
            }
        }
        for (i, &a) in d.arcs.iter().enumerate() {
            if a == 0 || a > self.n_arcs() {
                return Err(Error::InvalidArc(format!("unknown arc {a}")));
            }
            let has = |ti: usize| self.triangles[ti].edges.iter().any(|e| e.arc() == Some(a));
            if !has(d.triangles[i]) || !has(d.triangles[i + 1]) {
                return Err(Error::InvalidArc(format!(
                    "arc {a} is not shared by triangles {} and {}",
                    d.triangles[i],
                    d.triangles[i + 1]
                )));
            }
        }
        if !self.corners(d.triangles[0]).contains(&d.endpoints[0])
            || !self
                .corners(*d.triangles.last().expect("nonempty"))
                .contains(&d.endpoints[1])
        {
            return Err(Error::InvalidArc(
                "endpoints are not corners of the end triangles".into(),
            ));
        }
        Ok(())
    }

    /// An arc of the triangulation with the same endpoints and tags as `d`, if `d` has no crossings.
    pub fn arc_matching(&self, d: &TaggedArcSpec) -> Option<ArcId> {
        if !d.arcs.is_empty() {
            return None;
        }
        let u = d.underlying?;
        let a = self.arc(u);
        let fwd = a.ends == d.endpoints && a.tags == d.tags;
        let rev = [a.ends[1], a.ends[0]] == d.endpoints && [a.tags[1], a.tags[0]] == d.tags;
        if fwd || rev {
            return Some(u);
        }
        // A 1-notched arc of T is stored with loop ends; compare against its tagged ends.
        self.arcs
            .iter()
            .find(|b| {
                (b.ends == d.endpoints && b.tags == d.tags)
                    || ([b.ends[1], b.ends[0]] == d.endpoints && [b.tags[1], b.tags[0]] == d.tags)
            })
            .filter(|b| b.id == u || self.plain_partner(b.id) == Some(u))
            .map(|b| b.id)
    }
}

fn flip_spec_at(d: &mut TaggedArcSpec, p: PointId) {
    for k in 0..2 {
        if d.endpoints[k] == p {
            d.tags[k] = d.tags[k].flipped();
        }
    }
}

pub fn same_ends(a: [PointId; 2], b: [PointId; 2]) -> bool {
    a == b || a == [b[1], b[0]]
}

fn derive_corners(ends: &[[PointId; 2]]) -> std::result::Result<[PointId; 3], String> {
    let mut found: BTreeSet<[PointId; 3]> = BTreeSet::new();
    for mask in 0..8u32 {
        let dir = |j: usize| {
            let e = ends[j];
            if mask >> j & 1 == 1 {
                [e[1], e[0]]
            } else {
                e
            }
        };
        if (0..3).all(|j| dir(j)[1] == dir((j + 1) % 3)[0]) {
            found.insert([dir(0)[0], dir(1)[0], dir(2)[0]]);
        }
    }
    match found.len() {
        0 => Err("sides do not close up into a triangle".into()),
        1 => Ok(*found.iter().next().expect("one")),
        _ => Err("corners are ambiguous; list them explicitly".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn square_surface_validates() {
        let t = fixtures::square_surface();
        assert_eq!(t.n_arcs(), 10);
        assert_eq!(t.triangles.len(), 8);
    }

    #[test]
    fn arc_in_three_triangles_rejected() {
        let mut t = fixtures::square_surface();
        t.triangles[2].edges[0] = EdgeRef::Arc(7);
        assert!(t.validate().is_err());
    }

    #[test]
    fn notched_at_boundary_rejected() {
        let mut t = fixtures::square_surface();
        t.arcs[2].tags = [Tag::Notched, Tag::Plain];
        assert!(t.validate().is_err());
    }

    #[test]
    fn ideal_form_turns_notched_arc_into_loop() {
        let t = fixtures::square_surface();
        let i = t.to_ideal().unwrap();
        assert_eq!(i.arc(2).ends[0], i.arc(2).ends[1]);
        assert_eq!(i.arc(2).tags, [Tag::Plain, Tag::Plain]);
        let plain = fixtures::pentagon_fan();
        assert_eq!(plain.to_ideal().unwrap(), plain);
    }

    #[test]
    fn two_notched_arcs_at_a_puncture_rejected() {
        let mut t = fixtures::square_surface();
        // arc 1 also notched at p: two notched ends at p
        t.arcs[0].tags = [Tag::Plain, Tag::Notched];
        assert!(t.to_ideal().is_err());
    }

    #[test]
    fn fan_at_center_puncture() {
        let t = fixtures::square_surface();
        let fan = t.puncture_fan(fixtures::Q).unwrap();
        let mut rot = fan.clone();
        while rot[0] != 4 {
            rot.rotate_left(1);
        }
        assert_eq!(rot, vec![4, 5, 6]);
        assert!(t.puncture_fan(fixtures::ORIGIN).is_err());
        // the puncture inside the self-folded triangle sees its radius twice
        assert_eq!(t.puncture_fan(fixtures::P).unwrap(), vec![1]);
        let fan0 = t.puncture_fan(fixtures::R).unwrap();
        assert_eq!(fan0.len(), 3);
    }

    #[test]
    fn fan_length_matches_end_count() {
        for t in [
            fixtures::square_surface(),
            fixtures::punctured_digon(),
            fixtures::twice_punctured_monogon(),
        ] {
            for &p in &t.punctures {
                let ends: usize = t
                    .arcs
                    .iter()
                    .map(|a| t.ideal_ends(a.id).iter().filter(|e| **e == p).count())
                    .sum();
                assert_eq!(t.puncture_fan(p).unwrap().len(), ends);
            }
        }
    }

    #[test]
    fn exchange_matrices() {
        let sq = fixtures::square_one_diagonal();
        assert_eq!(sq.exchange_matrix(), vec![vec![0]]);
        assert_eq!(
            fixtures::pentagon_fan().exchange_matrix(),
            vec![vec![0, 1], vec![-1, 0]]
        );
        let b = fixtures::square_surface()
            .to_ideal()
            .unwrap()
            .exchange_matrix();
        for i in 0..b.len() {
            for j in 0..b.len() {
                assert_eq!(b[i][j], -b[j][i]);
            }
        }
    }

    #[test]
    fn end_counts() {
        let t = fixtures::square_surface().to_ideal().unwrap();
        assert_eq!(t.end_count(2, fixtures::ORIGIN), 2);
        assert_eq!(t.end_count(4, fixtures::Q), 1);
        assert_eq!(t.end_count(4, fixtures::R), 0);
    }

    #[test]
    fn normalization_identity_when_assumptions_hold() {
        let t = fixtures::square_surface();
        let d = fixtures::notched_arc();
        let (t2, d2, rel) = t.normalize_tags(&d).unwrap();
        assert!(rel.is_empty());
        assert_eq!(t2, t);
        assert_eq!(d2, d);
    }

    #[test]
    fn normalization_swaps_pair_at_notched_end() {
        let t = fixtures::punctured_digon_notched();
        let d = fixtures::digon_notched_arc();
        let (t2, d2, rel) = t.normalize_tags(&d).unwrap();
        assert_eq!(rel, vec![(2, 1)]);
        assert_eq!(d2.tags, [Tag::Plain, Tag::Plain]);
        assert!(t2.arc(1).tags.contains(&Tag::Notched));
        assert_eq!(t2.arc(2).tags, [Tag::Plain, Tag::Plain]);
    }

    #[test]
    fn closed_once_punctured_rejected() {
        let t = fixtures::once_punctured_torus();
        let d = TaggedArcSpec {
            name: None,
            endpoints: [0, 0],
            tags: [Tag::Notched, Tag::Notched],
            triangles: vec![0, 1],
            arcs: vec![1],
            slots: None,
            underlying: None,
        };
        assert!(t.normalize_tags(&d).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let t = fixtures::square_surface();
        let back = Triangulation::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
