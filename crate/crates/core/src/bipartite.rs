//! Bipartite graph of a polygon: diagonal-incident vertices (black) against triangles (white).

use std::collections::BTreeSet;

use crate::angle_matchings::{self, AngleMatching};
use crate::error::{Error, Result};
use crate::expand::Term;
use crate::polygon::{Angle, TPolygon};

/// Black vertices keep polygon vertex ids and white vertices keep triangle ids, so an edge is
/// the angle it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub black: Vec<usize>,
    pub white: usize,
    pub edges: Vec<Angle>,
    /// Squares: a diagonal with the edges joining its ends to its two triangles.
    pub squares: Vec<(usize, Vec<Angle>)>,
}

/// Sorted edges.
pub type BMatching = Vec<Angle>;

pub fn build_bipartite(tp: &TPolygon) -> BipartiteGraph {
    let di = tp.diagonal_incident();
    let black: Vec<usize> = (0..tp.vertices.len()).filter(|&v| di[v]).collect();
    let mut edges = Vec::new();
    for tri in 0..tp.triangles.len() {
        for corner in 0..3 {
            if di[tp.triangles[tri].corners[corner]] {
                edges.push(Angle { tri, corner });
            }
        }
    }
    let mut squares = Vec::new();
    for (e, edge) in tp.edges.iter().enumerate() {
        if !edge.diagonal {
            continue;
        }
        let mut sq: Vec<Angle> = edges
            .iter()
            .copied()
            .filter(|&a| {
                edge.sides.iter().any(|&(t, _)| t == a.tri) && edge.ends.contains(&tp.vertex(a))
            })
            .collect();
        sq.sort();
        squares.push((e, sq));
    }
    BipartiteGraph {
        black,
        white: tp.triangles.len(),
        edges,
        squares,
    }
}

pub fn varpi(a: Angle) -> Angle {
    a
}

pub fn varpi_inv(e: Angle) -> Angle {
    e
}

/// All perfect matchings, covering black vertices in increasing order.
pub fn enumerate_pm(tp: &TPolygon, b: &BipartiteGraph) -> Vec<BMatching> {
    let at: Vec<Vec<Angle>> = b
        .black
        .iter()
        .map(|&v| {
            b.edges
                .iter()
                .copied()
                .filter(|&a| tp.vertex(a) == v)
                .collect()
        })
        .collect();
    if b.black.len() != b.white {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut used = vec![false; b.white];
    let mut cur = Vec::new();
    fn rec(
        at: &[Vec<Angle>],
        k: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Angle>,
        out: &mut Vec<BMatching>,
    ) {
        if k == at.len() {
            let mut m = cur.clone();
            m.sort();
            out.push(m);
            return;
        }
        for &a in &at[k] {
            if used[a.tri] {
                continue;
            }
            used[a.tri] = true;
            cur.push(a);
            rec(at, k + 1, used, cur, out);
            cur.pop();
            used[a.tri] = false;
        }
    }
    rec(&at, 0, &mut used, &mut cur, &mut out);
    out.sort();
    out
}

pub fn minimal_pm(tp: &TPolygon) -> Result<BMatching> {
    let mut m: BMatching = angle_matchings::minimal_matching(tp)?
        .into_iter()
        .map(varpi)
        .collect();
    m.sort();
    Ok(m)
}

/// Squares whose boundaries add up to the symmetric difference with the minimal matching.
pub fn squares_of(b: &BipartiteGraph, minimal: &[Angle], e: &[Angle]) -> Result<Vec<usize>> {
    let a: BTreeSet<Angle> = minimal.iter().copied().collect();
    let c: BTreeSet<Angle> = e.iter().copied().collect();
    let diff: BTreeSet<Angle> = a.symmetric_difference(&c).copied().collect();
    let ne = b.edges.len();
    let ns = b.squares.len();
    // rows: edges; columns: squares, then the target
    let mut rows: Vec<Vec<bool>> = b
        .edges
        .iter()
        .map(|x| {
            let mut r: Vec<bool> = b.squares.iter().map(|(_, s)| s.contains(x)).collect();
            r.push(diff.contains(x));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ns {
        let Some(p) = (row..ne).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(row, p);
        for r in 0..ne {
            if r != row && rows[r][col] {
                let src = rows[row].clone();
                for (x, y) in rows[r].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|r| r[ns]) {
        return Err(Error::Check(
            "symmetric difference is not a union of square boundaries".into(),
        ));
    }
    if pivots.len() != ns {
        return Err(Error::Check("square boundaries are dependent".into()));
    }
    let mut out: Vec<usize> = pivots
        .iter()
        .enumerate()
        .filter(|&(r, _)| rows[r][ns])
        .map(|(_, &c)| b.squares[c].0)
        .collect();
    out.sort();
    Ok(out)
}

/// Weights of the perfect matchings of the bipartite graph.
pub fn terms(tp: &TPolygon, nvars: usize) -> Result<Vec<Term>> {
    let b = build_bipartite(tp);
    let minimal = minimal_pm(tp)?;
    let mut out = Vec::new();
    for e in enumerate_pm(tp, &b) {
        let angles: AngleMatching = {
            let mut v: Vec<Angle> = e.iter().copied().map(varpi_inv).collect();
            v.sort_by_key(|a| a.tri);
            v
        };
        let support = squares_of(&b, &minimal, &e)?;
        out.push(Term {
            x: angle_matchings::weight_x(tp, &angles, nvars),
            y: angle_matchings::y_monomial(tp, &support, nvars),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::angle_terms;
    use crate::fixtures;
    use crate::polygon::{build_notched, build_plain};

    fn sorted(mut v: Vec<Term>) -> Vec<Term> {
        v.sort();
        v
    }

    #[test]
    fn square_polygon() {
        let t = fixtures::square_one_diagonal();
        let d =
            serde_json::from_str(r#"{"endpoints":[1,3],"triangles":[0,1],"arcs":[1]}"#).unwrap();
        let p = build_plain(&t, &d).unwrap();
        let b = build_bipartite(&p);
        assert_eq!((b.black.len(), b.white, b.edges.len()), (2, 2, 4));
        assert_eq!(b.squares.len(), 1);
    }

    #[test]
    fn varpi_round_trips() {
        let t = fixtures::square_surface();
        for p in [
            build_plain(&t, &fixtures::plain_arc()).unwrap(),
            build_notched(&t, &fixtures::notched_arc()).unwrap(),
        ] {
            for a in build_bipartite(&p).edges {
                assert_eq!(varpi_inv(varpi(a)), a);
            }
        }
    }

    #[test]
    fn heights_equal_angle_supports() {
        let t = fixtures::square_surface();
        for p in [
            build_notched(&t, &fixtures::notched_arc()).unwrap(),
            build_notched(&t, &fixtures::doubly_notched_arc()).unwrap(),
        ] {
            let b = build_bipartite(&p);
            let all = enumerate_pm(&p, &b);
            assert_eq!(all.len(), if p.taus.len() == 1 { 18 } else { 9 });
            let minimal = minimal_pm(&p).unwrap();
            assert!(squares_of(&b, &minimal, &minimal).unwrap().is_empty());
            let am = angle_matchings::minimal_matching(&p).unwrap();
            for e in &all {
                let mut a = e.clone();
                a.sort_by_key(|x| x.tri);
                assert_eq!(
                    squares_of(&b, &minimal, e).unwrap(),
                    angle_matchings::y_support(&p, &am, &a)
                );
            }
        }
    }

    #[test]
    fn weights_match_angles() {
        let t = fixtures::square_surface();
        for p in [
            build_plain(&t, &fixtures::plain_arc()).unwrap(),
            build_notched(&t, &fixtures::notched_arc()).unwrap(),
            build_notched(&t, &fixtures::doubly_notched_arc()).unwrap(),
        ] {
            assert_eq!(
                sorted(terms(&p, 10).unwrap()),
                sorted(angle_terms(&p, 10).unwrap())
            );
        }
    }
}
