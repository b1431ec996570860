//! Quiver with potential of a polygon, its cuts and minimal cuts.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::angle_matchings::{self, AngleMatching};
use crate::error::{Error, Result};
use crate::expand::Term;
use crate::polygon::{Angle, Shape, TPolygon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arrow {
    /// Quiver vertices are polygon edges.
    pub from: usize,
    pub to: usize,
    /// Angle the arrow sits in, or `None` for an arrow between boundary segments.
    pub corner: Option<Angle>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    pub n_vertices: usize,
    pub arrows: Vec<Arrow>,
    /// Cycles inside triangles, as arrow indices; the positive part of the potential.
    pub triangle_cycles: Vec<Vec<usize>>,
    /// Cycles winding around a vertex; the negative part of the potential.
    pub exterior_cycles: Vec<Vec<usize>>,
}

/// Sorted arrow indices.
pub type Cut = Vec<usize>;

pub fn build_qp(tp: &TPolygon) -> Result<QuiverWithPotential> {
    if tp.shape != Shape::Polygon {
        return Err(Error::Unsupported("quivers are built for polygons".into()));
    }
    let mut arrows = Vec::new();
    let mut triangle_cycles = Vec::new();
    for tri in 0..tp.triangles.len() {
        let mut cyc = Vec::new();
        for corner in 0..3 {
            let a = Angle { tri, corner };
            let (leaving, arriving) = tp.angle_sides(a);
            cyc.push(arrows.len());
            arrows.push(Arrow {
                from: arriving,
                to: leaving,
                corner: Some(a),
            });
        }
        triangle_cycles.push(cyc);
    }
    let di = tp.diagonal_incident();
    let mut exterior_cycles = Vec::new();
    for v in 0..tp.vertices.len() {
        if !di[v] {
            continue;
        }
        let around = tp.angles_around(v);
        let mut cyc: Vec<usize> = around.iter().map(|a| 3 * a.tri + a.corner).collect();
        if !tp.vertices[v].interior {
            let first = tp.angle_sides(around[0]).0;
            let last = tp.angle_sides(*around.last().expect("angle")).1;
            cyc.push(arrows.len());
            arrows.push(Arrow {
                from: first,
                to: last,
                corner: None,
            });
        }
        exterior_cycles.push(cyc);
    }
    Ok(QuiverWithPotential {
        n_vertices: tp.edges.len(),
        arrows,
        triangle_cycles,
        exterior_cycles,
    })
}

impl QuiverWithPotential {
    pub fn cycles(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.triangle_cycles.iter().chain(&self.exterior_cycles)
    }

    /// Number of triangles, the size of a minimal cut.
    pub fn n(&self) -> usize {
        self.triangle_cycles.len()
    }

    pub fn is_cut(&self, c: &[usize]) -> bool {
        self.cycles()
            .all(|cyc| cyc.iter().filter(|a| c.contains(a)).count() == 1)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph qp {\n");
        for a in &self.arrows {
            let style = if a.corner.is_none() {
                " [style=dashed]"
            } else {
                ""
            };
            let _ = writeln!(s, "  {} -> {}{};", a.from, a.to, style);
        }
        s.push_str("}\n");
        s
    }
}

/// Cuts using only the allowed arrows, smallest first.
fn cuts_among(qp: &QuiverWithPotential, allowed: &[bool]) -> Vec<Cut> {
    let cycles: Vec<&Vec<usize>> = qp.cycles().collect();
    let mut on: Vec<Vec<usize>> = vec![Vec::new(); qp.arrows.len()];
    for (k, c) in cycles.iter().enumerate() {
        for &a in c.iter() {
            on[a].push(k);
        }
    }
    let mut out = Vec::new();
    let mut hit = vec![false; cycles.len()];
    let mut cur = Vec::new();
    fn rec(
        cycles: &[&Vec<usize>],
        on: &[Vec<usize>],
        allowed: &[bool],
        hit: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Cut>,
    ) {
        let Some(k) = hit.iter().position(|h| !h) else {
            let mut c = cur.clone();
            c.sort();
            out.push(c);
            return;
        };
        for &a in cycles[k].iter() {
            if !allowed[a] || on[a].iter().any(|&j| hit[j]) {
                continue;
            }
            for &j in &on[a] {
                hit[j] = true;
            }
            cur.push(a);
            rec(cycles, on, allowed, hit, cur, out);
            cur.pop();
            for &j in &on[a] {
                hit[j] = false;
            }
        }
    }
    rec(&cycles, &on, allowed, &mut hit, &mut cur, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out.dedup();
    out
}

/// Every cut of the potential.
pub fn all_cuts(qp: &QuiverWithPotential) -> Vec<Cut> {
    cuts_among(qp, &vec![true; qp.arrows.len()])
}

/// Cuts of size equal to the number of triangles. With `full`, found among all cuts; otherwise
/// only arrows that are images of angles are tried.
pub fn minimal_cuts(qp: &QuiverWithPotential, tp: &TPolygon, full: bool) -> Vec<Cut> {
    let di = tp.diagonal_incident();
    let allowed: Vec<bool> = qp
        .arrows
        .iter()
        .map(|a| full || a.corner.is_some_and(|c| di[tp.vertex(c)]))
        .collect();
    cuts_among(qp, &allowed)
        .into_iter()
        .filter(|c| c.len() == qp.n())
        .collect()
}

/// The arrow of the quiver sitting in an angle.
pub fn rho(qp: &QuiverWithPotential, a: Angle) -> usize {
    qp.arrows
        .iter()
        .position(|x| x.corner == Some(a))
        .expect("arrow in every angle")
}

pub fn rho_inv(qp: &QuiverWithPotential, c: &[usize]) -> Result<AngleMatching> {
    let mut m: Vec<Angle> = c
        .iter()
        .map(|&i| {
            qp.arrows[i]
                .corner
                .ok_or_else(|| Error::Check("minimal cut contains a boundary arrow".into()))
        })
        .collect::<Result<_>>()?;
    m.sort_by_key(|a| a.tri);
    Ok(m)
}

/// Weights of the minimal cuts, read through the angles they come from.
pub fn terms(tp: &TPolygon, nvars: usize) -> Result<Vec<Term>> {
    let qp = build_qp(tp)?;
    let cuts = minimal_cuts(&qp, tp, false);
    let matchings: Vec<AngleMatching> = cuts
        .iter()
        .map(|c| rho_inv(&qp, c))
        .collect::<Result<_>>()?;
    let minimal = angle_matchings::minimal_among(tp, &matchings)?;
    Ok(matchings
        .iter()
        .map(|m| Term {
            x: angle_matchings::weight_x(tp, m, nvars),
            y: angle_matchings::y_monomial(tp, &angle_matchings::y_support(tp, &minimal, m), nvars),
        })
        .collect())
}

/// Whether the images of the angle matchings are exactly the minimal cuts.
pub fn check_rho(tp: &TPolygon, qp: &QuiverWithPotential, full: bool) -> bool {
    let images: BTreeSet<Cut> = angle_matchings::enumerate(tp)
        .iter()
        .map(|m| {
            let mut c: Cut = m.iter().map(|&a| rho(qp, a)).collect();
            c.sort();
            c
        })
        .collect();
    let cuts: BTreeSet<Cut> = minimal_cuts(qp, tp, full).into_iter().collect();
    images == cuts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::angle_terms;
    use crate::fixtures;
    use crate::polygon::{build_notched, build_plain};

    #[test]
    fn square_has_two_and_two_cycles() {
        let t = fixtures::square_one_diagonal();
        let d =
            serde_json::from_str(r#"{"endpoints":[1,3],"triangles":[0,1],"arcs":[1]}"#).unwrap();
        let p = build_plain(&t, &d).unwrap();
        let qp = build_qp(&p).unwrap();
        assert_eq!((qp.triangle_cycles.len(), qp.exterior_cycles.len()), (2, 2));
        assert_eq!(minimal_cuts(&qp, &p, true).len(), 2);
    }

    #[test]
    fn notched_arc_example() {
        let t = fixtures::square_surface();
        let p = build_notched(&t, &fixtures::notched_arc()).unwrap();
        let qp = build_qp(&p).unwrap();
        assert_eq!((qp.triangle_cycles.len(), qp.exterior_cycles.len()), (5, 5));
        let cuts = minimal_cuts(&qp, &p, false);
        assert_eq!(cuts.len(), 9);
        assert_eq!(minimal_cuts(&qp, &p, true), cuts);
        for c in &cuts {
            assert!(qp.is_cut(c));
            let mut bigger = c.clone();
            if let Some(extra) = (0..qp.arrows.len()).find(|a| !c.contains(a)) {
                bigger.push(extra);
                assert!(!qp.is_cut(&bigger));
            }
        }
        assert!(check_rho(&p, &qp, true));
        let am = angle_matchings::minimal_matching(&p).unwrap();
        let mut c: Cut = am.iter().map(|&a| rho(&qp, a)).collect();
        c.sort();
        assert!(cuts.contains(&c));
    }

    #[test]
    fn weights_match_angles() {
        let t = fixtures::square_surface();
        for p in [
            build_plain(&t, &fixtures::plain_arc()).unwrap(),
            build_notched(&t, &fixtures::notched_arc()).unwrap(),
            build_notched(&t, &fixtures::doubly_notched_arc()).unwrap(),
        ] {
            let mut a = terms(&p, 10).unwrap();
            a.sort();
            let mut b = angle_terms(&p, 10).unwrap();
            b.sort();
            assert_eq!(a, b);
            assert_eq!(build_qp(&p).unwrap().n(), p.triangles.len());
        }
    }
}
