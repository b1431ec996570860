//! Snake and band graphs: perfect matchings of tiled strips, their heights, and the symmetric,
//! compatible and good matchings used for notched arcs and loops.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::expand::Term;
use crate::lpoly::Monomial;
use crate::polygon::{self, PolygonKind, Shape, Step, TPolygon};
use crate::surface::{ArcId, LoopSpec, TaggedArcSpec, Triangulation};

/// `(triangle, slot)` of the polygon side an edge comes from.
pub type EdgeKey = (usize, usize);

/// Sorted edge indices.
pub type PerfectMatching = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakeEdge {
    pub key: EdgeKey,
    pub ends: [usize; 2],
    pub label: Option<ArcId>,
    /// Tiles containing the edge, 1-based.
    pub tiles: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    /// Polygon diagonal of the tile.
    pub diagonal: usize,
    pub label: Option<ArcId>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakeGraph {
    pub n_vertices: usize,
    pub edges: Vec<SnakeEdge>,
    pub tiles: Vec<Tile>,
    /// Boundary edge anchoring the minimal matching.
    pub e0: usize,
    pub index: BTreeMap<EdgeKey, usize>,
}

/// A snake graph whose first and last tiles share an identified edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandGraph {
    pub snake: SnakeGraph,
    /// Snake edges glued together: in the first tile and in the last tile.
    pub tau: [usize; 2],
    /// Vertex of the quotient for each snake vertex.
    pub quotient: Vec<usize>,
    pub n_vertices: usize,
    /// Endpoints of the glued edge in the quotient.
    pub v: usize,
    pub w: usize,
}

/// Unfolds a fan-free strip into its snake graph.
pub fn build_snake(tp: &TPolygon) -> Result<SnakeGraph> {
    if tp.shape != Shape::Polygon
        || matches!(tp.kind, PolygonKind::Notched1 | PolygonKind::Notched2)
    {
        return Err(Error::Unsupported(
            "snake graphs are built from strips without fans".into(),
        ));
    }
    let l = tp.taus.len();
    if l == 0 || tp.triangles.len() != l + 1 {
        return Err(Error::Unsupported("strip has no diagonal".into()));
    }
    let mut edges: Vec<SnakeEdge> = Vec::new();
    let mut index: BTreeMap<EdgeKey, usize> = BTreeMap::new();
    let mut tiles = Vec::new();
    for tile in 1..=l {
        let diag = tp.taus[tile - 1];
        let mut tile_edges = Vec::new();
        for tri in [tile - 1, tile] {
            for s in 0..3 {
                let e = tp.triangles[tri].sides[s];
                if e == diag {
                    continue;
                }
                let key = (tri, s);
                let gi = *index.entry(key).or_insert_with(|| {
                    edges.push(SnakeEdge {
                        key,
                        ends: tp.edges[e].ends,
                        label: tp.edges[e].label,
                        tiles: Vec::new(),
                    });
                    edges.len() - 1
                });
                edges[gi].tiles.push(tile);
                tile_edges.push(gi);
            }
        }
        tiles.push(Tile {
            diagonal: diag,
            label: tp.edges[diag].label,
            edges: tile_edges,
        });
    }
    // vertices are (tile, polygon vertex), joined across shared edges
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for tile in 1..=l {
        let mut order = tiles[tile - 1].edges.clone();
        order.sort_by_key(|&gi| edges[gi].tiles[0]);
        for gi in order {
            let owner = edges[gi].tiles[0];
            for pv in edges[gi].ends {
                let id = match ids.get(&(owner, pv)) {
                    Some(&id) => id,
                    None => {
                        let id = ids.values().copied().max().map_or(0, |m| m + 1);
                        ids.insert((owner, pv), id);
                        id
                    }
                };
                ids.insert((tile, pv), id);
            }
        }
    }
    for e in edges.iter_mut() {
        let owner = e.tiles[0];
        e.ends = [ids[&(owner, e.ends[0])], ids[&(owner, e.ends[1])]];
    }
    let count = ids.values().copied().max().map_or(0, |m| m + 1);
    let first = tp
        .steps
        .first()
        .and_then(|s| s.exit)
        .ok_or_else(|| Error::Check("strip without steps".into()))?;
    let e0 = index[&(0, (first + 2) % 3)];
    let g = SnakeGraph {
        n_vertices: count,
        edges,
        tiles,
        e0,
        index,
    };
    if g.n_vertices != 2 * l + 2 || g.edges.len() != 3 * l + 1 {
        return Err(Error::Check(format!(
            "snake graph with {l} tiles has {} vertices and {} edges",
            g.n_vertices,
            g.edges.len()
        )));
    }
    Ok(g)
}

impl SnakeGraph {
    pub fn is_boundary(&self, e: usize) -> bool {
        self.edges[e].tiles.len() == 1
    }

    pub fn is_perfect(&self, p: &[usize]) -> bool {
        let mut hit = vec![0; self.n_vertices];
        for &e in p {
            for v in self.edges[e].ends {
                hit[v] += 1;
            }
        }
        hit.iter().all(|&h| h == 1)
    }

    /// Product of the labels of the edges.
    pub fn weight_x(&self, p: &[usize], nvars: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        for &e in p {
            if let Some(l) = self.edges[e].label {
                m.xexp[l - 1] += 1;
            }
        }
        m
    }

    /// Product of `y` over the diagonals of the given tiles.
    pub fn weight_y(&self, tiles: &[usize], nvars: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        for &t in tiles {
            if let Some(l) = self.tiles[t - 1].label {
                m.yexp[l - 1] += 1;
            }
        }
        m
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph snake {\n");
        for (i, e) in self.edges.iter().enumerate() {
            let label = e.label.map_or("b".to_string(), |l| l.to_string());
            let style = if i == self.e0 { ", style=bold" } else { "" };
            let _ = writeln!(
                s,
                "  {} -- {} [label=\"{}\"{}];",
                e.ends[0], e.ends[1], label, style
            );
        }
        for (i, t) in self.tiles.iter().enumerate() {
            let label = t.label.map_or("b".to_string(), |l| l.to_string());
            let _ = writeln!(s, "  // tile {} diagonal {}", i + 1, label);
        }
        s.push_str("}\n");
        s
    }
}

fn incidence(n: usize, edges: &[[usize; 2]]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        adj[e[0]].push(i);
        if e[1] != e[0] {
            adj[e[1]].push(i);
        }
    }
    adj
}

/// All perfect matchings of a small graph, by covering the lowest free vertex first.
fn matchings(n: usize, edges: &[[usize; 2]]) -> Vec<PerfectMatching> {
    let adj = incidence(n, edges);
    let mut out = Vec::new();
    let mut used = vec![false; n];
    let mut cur = Vec::new();
    fn rec(
        adj: &[Vec<usize>],
        edges: &[[usize; 2]],
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<PerfectMatching>,
    ) {
        let Some(v) = used.iter().position(|u| !u) else {
            let mut m = cur.clone();
            m.sort();
            out.push(m);
            return;
        };
        for &e in &adj[v] {
            let [a, b] = edges[e];
            let u = if a == v { b } else { a };
            if u == v || used[u] {
                continue;
            }
            used[v] = true;
            used[u] = true;
            cur.push(e);
            rec(adj, edges, used, cur, out);
            cur.pop();
            used[v] = false;
            used[u] = false;
        }
    }
    rec(&adj, edges, &mut used, &mut cur, &mut out);
    out.sort();
    out
}

pub fn enumerate_pm(g: &SnakeGraph) -> Vec<PerfectMatching> {
    let ends: Vec<[usize; 2]> = g.edges.iter().map(|e| e.ends).collect();
    matchings(g.n_vertices, &ends)
}

/// The matching of boundary edges containing the anchor edge.
pub fn minimal_pm(g: &SnakeGraph) -> Result<PerfectMatching> {
    let bnd: Vec<usize> = (0..g.edges.len()).filter(|&e| g.is_boundary(e)).collect();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); g.n_vertices];
    for &e in &bnd {
        for v in g.edges[e].ends {
            at[v].push(e);
        }
    }
    if at.iter().any(|a| a.len() != 2) {
        return Err(Error::Check(
            "boundary of the snake graph is not a cycle".into(),
        ));
    }
    let mut out = vec![g.e0];
    let (mut prev, mut v) = (g.e0, g.edges[g.e0].ends[1]);
    let mut take = false;
    loop {
        let e = if at[v][0] == prev { at[v][1] } else { at[v][0] };
        if e == g.e0 {
            break;
        }
        if take {
            out.push(e);
        }
        take = !take;
        let [a, b] = g.edges[e].ends;
        v = if a == v { b } else { a };
        prev = e;
    }
    out.sort();
    if !g.is_perfect(&out) {
        return Err(Error::Check("boundary cycle has odd length".into()));
    }
    Ok(out)
}

/// Tiles enclosed by the symmetric difference with the minimal matching, checked to be exactly a
/// union of tile boundaries.
pub fn height(g: &SnakeGraph, minimal: &[usize], p: &[usize]) -> Result<Vec<usize>> {
    let a: BTreeSet<usize> = minimal.iter().copied().collect();
    let b: BTreeSet<usize> = p.iter().copied().collect();
    let diff: BTreeSet<usize> = a.symmetric_difference(&b).copied().collect();
    let l = g.tiles.len();
    let mut inside = vec![false; l + 1];
    let own = |t: usize| {
        g.tiles[t - 1]
            .edges
            .iter()
            .copied()
            .find(|&e| g.is_boundary(e))
            .expect("boundary edge")
    };
    inside[1] = diff.contains(&own(1));
    for t in 1..l {
        let shared = g.tiles[t - 1]
            .edges
            .iter()
            .copied()
            .find(|&e| g.edges[e].tiles.contains(&(t + 1)))
            .expect("shared edge");
        inside[t + 1] = inside[t] ^ diff.contains(&shared);
    }
    for (e, edge) in g.edges.iter().enumerate() {
        let want = if edge.tiles.len() == 1 {
            inside[edge.tiles[0]]
        } else {
            inside[edge.tiles[0]] != inside[edge.tiles[1]]
        };
        if want != diff.contains(&e) {
            return Err(Error::Check(
                "symmetric difference is not a union of tile boundaries".into(),
            ));
        }
    }
    Ok((1..=l).filter(|&t| inside[t]).collect())
}

/// Weights of all perfect matchings of the snake graph of a strip.
pub fn strip_terms(tp: &TPolygon, nvars: usize) -> Result<Vec<Term>> {
    let g = build_snake(tp)?;
    let minimal = minimal_pm(&g)?;
    enumerate_pm(&g)
        .iter()
        .map(|p| {
            Ok(Term {
                x: g.weight_x(p, nvars),
                y: g.weight_y(&height(&g, &minimal, p)?, nvars),
            })
        })
        .collect()
}

/// Snake graph of a loop around a puncture, with how it folds onto the arc's snake graph.
pub struct LoopSnake {
    pub graph: SnakeGraph,
    pub minimal: PerfectMatching,
    n: usize,
    m: usize,
    /// Triangle of the arc's strip for a triangle of the loop's first leg.
    to_arc: Box<dyn Fn(usize) -> usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricMatching {
    pub matching: PerfectMatching,
    /// Restriction, as a matching of the arc's snake graph.
    pub res: PerfectMatching,
}

fn loop_snake(
    t: &Triangulation,
    steps: &[Step],
    to_arc: Box<dyn Fn(usize) -> usize>,
) -> Result<LoopSnake> {
    let tp = polygon::build_gamma_loop(t, steps)?;
    let f = tp
        .folding
        .clone()
        .ok_or_else(|| Error::Check("loop polygon without folding".into()))?;
    let graph = build_snake(&tp)?;
    let minimal = minimal_pm(&graph)?;
    Ok(LoopSnake {
        graph,
        minimal,
        n: f.n,
        m: f.m,
        to_arc,
    })
}

fn mapped(ls: &LoopSnake, p: &[usize], mirror: bool) -> BTreeSet<EdgeKey> {
    let (n, m) = (ls.n, ls.m);
    p.iter()
        .filter_map(|&e| {
            let (k, s) = ls.graph.edges[e].key;
            match mirror {
                false if k < n => Some(((ls.to_arc)(k), s)),
                true if k > n + m => Some(((ls.to_arc)(2 * n + m - k), s)),
                _ => None,
            }
        })
        .collect()
}

/// Matchings of a loop snake graph that agree on the two copies of the arc's snake graph, each
/// with its restriction to the arc's snake graph.
pub fn symmetric_pms(ls: &LoopSnake, arc: &SnakeGraph) -> Result<Vec<SymmetricMatching>> {
    let end = (ls.to_arc)(ls.n);
    let closing: Vec<usize> = (0..arc.edges.len())
        .filter(|&e| arc.edges[e].key.0 == end)
        .collect();
    let mut out = Vec::new();
    for p in enumerate_pm(&ls.graph) {
        let h1 = mapped(ls, &p, false);
        if h1 != mapped(ls, &p, true) {
            continue;
        }
        let mut base = Vec::new();
        for k in &h1 {
            base.push(*arc.index.get(k).ok_or_else(|| {
                Error::Check(format!("edge {k:?} missing from the arc's snake graph"))
            })?);
        }
        let fits: Vec<PerfectMatching> = closing
            .iter()
            .map(|&c| {
                let mut r = base.clone();
                r.push(c);
                r.sort();
                r
            })
            .filter(|r| arc.is_perfect(r))
            .collect();
        if fits.len() != 1 {
            return Err(Error::Check(format!(
                "{} completions of a restriction",
                fits.len()
            )));
        }
        out.push(SymmetricMatching {
            matching: p,
            res: fits[0].clone(),
        });
    }
    Ok(out)
}

fn reversed(steps: &[Step]) -> Vec<Step> {
    steps
        .iter()
        .rev()
        .map(|s| Step {
            tri: s.tri,
            entry: s.exit,
            exit: s.entry,
        })
        .collect()
}

/// Snake graphs of an arc and of the loops around its notched ends.
pub struct NotchedSnakes {
    pub arc: SnakeGraph,
    pub arc_minimal: PerfectMatching,
    pub at_end: LoopSnake,
    pub at_start: Option<LoopSnake>,
}

pub fn notched_snakes(t: &Triangulation, d: &TaggedArcSpec) -> Result<NotchedSnakes> {
    let (d, steps) = polygon::oriented_walk(t, d)?;
    let n = steps.len() - 1;
    let arc = build_snake(&polygon::build_strip(t, steps.clone(), PolygonKind::Plain)?)?;
    let arc_minimal = minimal_pm(&arc)?;
    let at_end = loop_snake(t, &steps, Box::new(|k| k))?;
    let at_start = match d.kind() {
        crate::surface::ArcKind::Notched2 => {
            Some(loop_snake(t, &reversed(&steps), Box::new(move |k| n - k))?)
        }
        _ => None,
    };
    Ok(NotchedSnakes {
        arc,
        arc_minimal,
        at_end,
        at_start,
    })
}

/// Weights of the symmetric matchings (one notched end) or compatible pairs (two notched ends),
/// normalized by their restrictions.
pub fn notched_terms(t: &Triangulation, d: &TaggedArcSpec, nvars: usize) -> Result<Vec<Term>> {
    let s = notched_snakes(t, d)?;
    let weigh = |ls: &LoopSnake, p: &[usize]| -> Result<Term> {
        Ok(Term {
            x: ls.graph.weight_x(p, nvars),
            y: ls
                .graph
                .weight_y(&height(&ls.graph, &ls.minimal, p)?, nvars),
        })
    };
    let res_w = |r: &[usize]| -> Result<Term> {
        Ok(Term {
            x: s.arc.weight_x(r, nvars),
            y: s.arc.weight_y(&height(&s.arc, &s.arc_minimal, r)?, nvars),
        })
    };
    let sp = symmetric_pms(&s.at_end, &s.arc)?;
    let mut out = Vec::new();
    match &s.at_start {
        None => {
            for m in &sp {
                let (a, r) = (weigh(&s.at_end, &m.matching)?, res_w(&m.res)?);
                out.push(Term {
                    x: a.x.div(&r.x),
                    y: a.y.div(&r.y),
                });
            }
        }
        Some(at_start) => {
            let sq = symmetric_pms(at_start, &s.arc)?;
            for (mp, mq) in compatible_pairs(&sp, &sq) {
                let (a, b, r) = (
                    weigh(&s.at_end, &mp.matching)?,
                    weigh(at_start, &mq.matching)?,
                    res_w(&mp.res)?,
                );
                let r3 = Term {
                    x: r.x.mul(&r.x).mul(&r.x),
                    y: r.y.mul(&r.y).mul(&r.y),
                };
                out.push(Term {
                    x: a.x.mul(&b.x).div(&r3.x),
                    y: a.y.mul(&b.y).div(&r3.y),
                });
            }
        }
    }
    Ok(out)
}

/// Pairs of symmetric matchings with equal restrictions.
pub fn compatible_pairs<'a>(
    sp: &'a [SymmetricMatching],
    sq: &'a [SymmetricMatching],
) -> Vec<(&'a SymmetricMatching, &'a SymmetricMatching)> {
    let mut out = Vec::new();
    for a in sp {
        for b in sq {
            if a.res == b.res {
                out.push((a, b));
            }
        }
    }
    out
}

/// Band graph of an essential loop: the snake graph of the cut annulus with the cut edge glued.
pub fn build_band(t: &Triangulation, z: &LoopSpec) -> Result<BandGraph> {
    let strip = polygon::build_annulus_strip(t, z)?;
    let snake = build_snake(&strip)?;
    let n = strip.triangles.len() - 1;
    let (s0, sn) = (strip.steps[0], strip.steps[n]);
    let exit = s0.exit.expect("exit");
    let entry = sn.entry.expect("entry");
    let slot = (0..3)
        .find(|&j| j != exit && j != entry)
        .ok_or_else(|| Error::Check("no cut side".into()))?;
    let first = snake.index[&(0, slot)];
    let last = snake.index[&(n, slot)];
    // identify corner j of the first copy with corner j of the last copy
    let mut root: Vec<usize> = (0..snake.n_vertices).collect();
    let pe = |tri: usize| strip.edges[strip.triangles[tri].sides[slot]].ends;
    let (fa, la) = (pe(0), pe(n));
    // graph ends follow polygon ends in the same order
    let fe = snake.edges[first].ends;
    let le = snake.edges[last].ends;
    let corner_of = |tri: usize, v: usize| {
        (0..3)
            .find(|&j| strip.triangles[tri].corners[j] == v)
            .expect("corner")
    };
    for k in 0..2 {
        let j = corner_of(0, fa[k]);
        let k2 = (0..2)
            .find(|&i| corner_of(n, la[i]) == j)
            .ok_or_else(|| Error::Check("cut side ends differ".into()))?;
        root[le[k2]] = fe[k];
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut quotient = vec![0; snake.n_vertices];
    for v in 0..snake.n_vertices {
        let r = root[v];
        let next = ids.len();
        quotient[v] = *ids.entry(r).or_insert(next);
    }
    let n_vertices = ids.len();
    let (v, w) = (quotient[fe[0]], quotient[fe[1]]);
    Ok(BandGraph {
        snake,
        tau: [first, last],
        quotient,
        n_vertices,
        v,
        w,
    })
}

impl BandGraph {
    /// Edges of the quotient, as snake edge indices; the glued edge appears once, as the first copy.
    pub fn edges(&self) -> Vec<usize> {
        (0..self.snake.edges.len())
            .filter(|&e| e != self.tau[1])
            .collect()
    }

    fn ends(&self, e: usize) -> [usize; 2] {
        let [a, b] = self.snake.edges[e].ends;
        [self.quotient[a], self.quotient[b]]
    }

    pub fn matchings(&self) -> Vec<PerfectMatching> {
        let es = self.edges();
        let ends: Vec<[usize; 2]> = es.iter().map(|&e| self.ends(e)).collect();
        matchings(self.n_vertices, &ends)
            .into_iter()
            .map(|p| {
                let mut v: Vec<usize> = p.iter().map(|&i| es[i]).collect();
                v.sort();
                v
            })
            .collect()
    }

    /// Whether the matching edge at a glued vertex meets the first copy of the vertex (rather than
    /// the last).
    fn at_first(&self, p: &[usize], v: usize) -> bool {
        let first = self.snake.edges[self.tau[0]].ends;
        let e = *p
            .iter()
            .find(|&&e| self.ends(e).contains(&v))
            .expect("covered");
        self.snake.edges[e]
            .ends
            .iter()
            .any(|&u| first.contains(&u) && self.quotient[u] == v)
    }

    /// Good: contains the glued edge, or its edges at the two glued vertices lie on the same end
    /// square of the band.
    pub fn is_good(&self, p: &[usize]) -> bool {
        p.contains(&self.tau[0]) || self.at_first(p, self.v) == self.at_first(p, self.w)
    }

    /// The perfect matching of the unglued snake graph a good matching extends to.
    pub fn completion(&self, p: &[usize]) -> Result<PerfectMatching> {
        let mut out: Vec<usize> = p.to_vec();
        if !p.contains(&self.tau[0]) {
            let with_first = {
                let mut v = out.clone();
                v.push(self.tau[0]);
                v
            };
            let with_last = {
                let mut v = out.clone();
                v.push(self.tau[1]);
                v
            };
            out = if self.snake.is_perfect(&with_first) {
                with_first
            } else if self.snake.is_perfect(&with_last) {
                with_last
            } else {
                return Err(Error::Check("good matching has no completion".into()));
            };
        } else {
            out.push(self.tau[1]);
        }
        out.sort();
        if !self.snake.is_perfect(&out) {
            return Err(Error::Check("completion is not a perfect matching".into()));
        }
        Ok(out)
    }

    pub fn good_pms(&self) -> Vec<PerfectMatching> {
        self.matchings()
            .into_iter()
            .filter(|p| self.is_good(p))
            .collect()
    }
}

/// Weights of the good matchings of the band graph, and the product of the loop's crossed arcs.
pub fn band_terms(t: &Triangulation, z: &LoopSpec) -> Result<(Vec<Term>, Monomial)> {
    let nvars = t.n_arcs();
    let band = build_band(t, z)?;
    let minimal = minimal_pm(&band.snake)?;
    let mut out = Vec::new();
    for p in band.good_pms() {
        let full = band.completion(&p)?;
        out.push(Term {
            x: band.snake.weight_x(&p, nvars),
            y: band
                .snake
                .weight_y(&height(&band.snake, &minimal, &full)?, nvars),
        });
    }
    out.sort();
    let ann = polygon::build_annulus(t, z)?;
    Ok((out, crate::expand::cross(&ann, nvars)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::{angle_terms, annulus_angle_terms};
    use crate::fixtures;

    fn sorted(mut v: Vec<Term>) -> Vec<Term> {
        v.sort();
        v
    }

    #[test]
    fn single_tile() {
        let t = fixtures::square_one_diagonal();
        let d =
            serde_json::from_str(r#"{"endpoints":[1,3],"triangles":[0,1],"arcs":[1]}"#).unwrap();
        let p = polygon::build_plain(&t, &d).unwrap();
        let g = build_snake(&p).unwrap();
        assert_eq!((g.n_vertices, g.edges.len(), g.tiles.len()), (4, 4, 1));
        assert_eq!(enumerate_pm(&g).len(), 2);
        let m = minimal_pm(&g).unwrap();
        assert!(m.contains(&g.e0));
        assert!(height(&g, &m, &m).unwrap().is_empty());
    }

    #[test]
    fn plain_arc_matches_angles() {
        let t = fixtures::square_surface();
        let p = polygon::build_plain(&t, &fixtures::plain_arc()).unwrap();
        let g = build_snake(&p).unwrap();
        assert_eq!(enumerate_pm(&g).len(), 5);
        assert_eq!(
            sorted(strip_terms(&p, 10).unwrap()),
            sorted(angle_terms(&p, 10).unwrap())
        );
    }

    #[test]
    fn notched_arc_symmetric_count_and_weights() {
        let t = fixtures::square_surface();
        let s = notched_snakes(&t, &fixtures::notched_arc()).unwrap();
        let sym = symmetric_pms(&s.at_end, &s.arc).unwrap();
        assert_eq!(sym.len(), 9);
        let minimal = sym
            .iter()
            .find(|m| m.matching == s.at_end.minimal)
            .expect("minimal is symmetric");
        assert_eq!(minimal.res, s.arc_minimal);
        let p = polygon::build_notched(&t, &fixtures::notched_arc()).unwrap();
        assert_eq!(
            sorted(notched_terms(&t, &fixtures::notched_arc(), 10).unwrap()),
            sorted(angle_terms(&p, 10).unwrap())
        );
    }

    #[test]
    fn doubly_notched_arc_compatible_pairs() {
        let t = fixtures::square_surface();
        let terms = notched_terms(&t, &fixtures::doubly_notched_arc(), 10).unwrap();
        assert_eq!(terms.len(), 18);
        let p = polygon::build_notched(&t, &fixtures::doubly_notched_arc()).unwrap();
        assert_eq!(sorted(terms), sorted(angle_terms(&p, 10).unwrap()));
    }

    #[test]
    fn annulus_band_matches_good_angles() {
        let t = fixtures::annulus();
        let z = fixtures::annulus_loop();
        let band = build_band(&t, &z).unwrap();
        assert_eq!(band.n_vertices, band.snake.n_vertices - 2);
        let (a, da) = annulus_angle_terms(&t, &z).unwrap();
        let (b, db) = band_terms(&t, &z).unwrap();
        assert_eq!(da, db);
        assert_eq!(a, b);
        let minimal = minimal_pm(&band.snake).unwrap();
        assert!(band
            .good_pms()
            .iter()
            .any(|p| band.completion(p).unwrap() == minimal));
        let all = band.matchings();
        assert_eq!(all.len() - band.good_pms().len(), 2);
        for p in &all {
            assert_eq!(band.is_good(p), band.completion(p).is_ok());
        }
    }

    #[test]
    fn dot_lists_every_edge() {
        let t = fixtures::square_surface();
        let g = build_snake(&polygon::build_plain(&t, &fixtures::plain_arc()).unwrap()).unwrap();
        assert_eq!(g.to_dot().matches(" -- ").count(), g.edges.len());
    }
}
