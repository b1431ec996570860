//! Perfect matchings of angles: one marked angle per triangle and per diagonal-incident vertex.

use crate::error::{Error, Result};
use crate::lpoly::Monomial;
use crate::polygon::{Angle, PolygonKind, Shape, TPolygon};

/// One angle per triangle, indexed by triangle.
pub type AngleMatching = Vec<Angle>;

pub fn angle_id(a: Angle) -> usize {
    3 * a.tri + a.corner
}

/// Sorted angle ids, the serialized form of a matching.
pub fn ids(m: &AngleMatching) -> Vec<usize> {
    let mut v: Vec<usize> = m.iter().map(|&a| angle_id(a)).collect();
    v.sort();
    v
}

/// All perfect matchings of angles, ordered lexicographically by (triangle, vertex).
pub fn enumerate(tp: &TPolygon) -> Vec<AngleMatching> {
    let di = tp.diagonal_incident();
    let nt = tp.triangles.len();
    // remaining[v]: triangles not yet decided that have v as a corner
    let mut remaining = vec![0usize; tp.vertices.len()];
    for t in &tp.triangles {
        for &v in &t.corners {
            remaining[v] += 1;
        }
    }
    let options: Vec<Vec<usize>> = tp
        .triangles
        .iter()
        .map(|t| {
            let mut c: Vec<usize> = (0..3).filter(|&j| di[t.corners[j]]).collect();
            c.sort_by_key(|&j| t.corners[j]);
            c
        })
        .collect();
    let mut out = Vec::new();
    let mut used = vec![false; tp.vertices.len()];
    let mut cur = Vec::with_capacity(nt);
    fn rec(
        tp: &TPolygon,
        di: &[bool],
        options: &[Vec<usize>],
        k: usize,
        used: &mut Vec<bool>,
        remaining: &mut Vec<usize>,
        cur: &mut Vec<Angle>,
        out: &mut Vec<AngleMatching>,
    ) {
        if k == tp.triangles.len() {
            if (0..di.len()).all(|v| !di[v] || used[v]) {
                out.push(cur.clone());
            }
            return;
        }
        let corners = tp.triangles[k].corners;
        for &v in &corners {
            remaining[v] -= 1;
        }
        for &j in &options[k] {
            let v = corners[j];
            if used[v] {
                continue;
            }
            used[v] = true;
            let stranded = corners
                .iter()
                .any(|&u| di[u] && !used[u] && remaining[u] == 0);
            if !stranded {
                cur.push(Angle { tri: k, corner: j });
                rec(tp, di, options, k + 1, used, remaining, cur, out);
                cur.pop();
            }
            used[v] = false;
        }
        for &v in &corners {
            remaining[v] += 1;
        }
    }
    rec(
        tp,
        &di,
        &options,
        0,
        &mut used,
        &mut remaining,
        &mut cur,
        &mut out,
    );
    out
}

/// Re-checks both matching conditions independently of the enumeration.
pub fn is_matching(tp: &TPolygon, m: &AngleMatching) -> bool {
    let di = tp.diagonal_incident();
    if m.len() != tp.triangles.len() {
        return false;
    }
    let mut hit = vec![0usize; tp.vertices.len()];
    for (k, a) in m.iter().enumerate() {
        if a.tri != k || a.corner > 2 {
            return false;
        }
        hit[tp.vertex(*a)] += 1;
    }
    (0..di.len()).all(|v| hit[v] == usize::from(di[v]))
}

fn at_vertex(tp: &TPolygon, m: &AngleMatching, v: usize) -> Option<Angle> {
    m.iter().copied().find(|&a| tp.vertex(a) == v)
}

/// The matched angle at `v` is the first in counterclockwise order.
pub fn min_condition(tp: &TPolygon, m: &AngleMatching, v: usize) -> bool {
    let order = tp.angles_around(v);
    at_vertex(tp, m, v) == order.first().copied()
}

/// The matched angle at `v` is the last in counterclockwise order.
pub fn max_condition(tp: &TPolygon, m: &AngleMatching, v: usize) -> bool {
    let order = tp.angles_around(v);
    at_vertex(tp, m, v) == order.last().copied()
}

fn boundary_diagonal_vertices(tp: &TPolygon) -> Vec<usize> {
    let di = tp.diagonal_incident();
    (0..tp.vertices.len())
        .filter(|&v| di[v] && !tp.vertices[v].interior)
        .collect()
}

/// The unique matching satisfying the min-condition at every diagonal-incident boundary vertex.
pub fn minimal_matching(tp: &TPolygon) -> Result<AngleMatching> {
    if tp.shape != Shape::Polygon {
        return Err(Error::Unsupported("minimal matching of an annulus".into()));
    }
    minimal_among(tp, &enumerate(tp))
}

pub fn minimal_among(tp: &TPolygon, all: &[AngleMatching]) -> Result<AngleMatching> {
    let bv = boundary_diagonal_vertices(tp);
    let mins: Vec<&AngleMatching> = all
        .iter()
        .filter(|m| bv.iter().all(|&v| min_condition(tp, m, v)))
        .collect();
    if mins.len() != 1 {
        return Err(Error::Check(format!(
            "{} matchings satisfy the min-condition",
            mins.len()
        )));
    }
    Ok(mins[0].clone())
}

/// Product of the labels of the sides opposite the marked angles.
pub fn weight_x(tp: &TPolygon, m: &AngleMatching, nvars: usize) -> Monomial {
    let mut out = Monomial::one(nvars);
    for &a in m {
        if let Some(l) = tp.edges[tp.opposite(a)].label {
            out.xexp[l - 1] += 1;
        }
    }
    out
}

/// Product of `y` over the labels of a list of diagonals.
pub fn y_monomial(tp: &TPolygon, diagonals: &[usize], nvars: usize) -> Monomial {
    let mut out = Monomial::one(nvars);
    for &e in diagonals {
        if let Some(l) = tp.edges[e].label {
            out.yexp[l - 1] += 1;
        }
    }
    out
}

fn is_exterior(tp: &TPolygon, a: Angle) -> bool {
    let (x, y) = tp.angle_sides(a);
    tp.edges[x].diagonal != tp.edges[y].diagonal
}

/// The four angles whose presence adds the single crossed diagonal to the support, when the arc
/// is notched at both ends and crosses one arc.
pub fn special_angles(tp: &TPolygon) -> Vec<Angle> {
    if tp.kind != PolygonKind::Notched2 || tp.taus.len() != 1 {
        return Vec::new();
    }
    let tau = tp.taus[0];
    let zm = *tp.zetas.last().expect("fan at p");
    let xl = *tp.xis.last().expect("fan at q");
    let mut out = Vec::new();
    for tri in 0..tp.triangles.len() {
        for corner in 0..3 {
            let a = Angle { tri, corner };
            let (s, u) = tp.angle_sides(a);
            let has = |e: usize| s == e || u == e;
            let other = |e: usize| if s == e { u } else { s };
            for f in [zm, xl] {
                if has(f) && (other(f) == tau || !tp.edges[other(f)].diagonal) {
                    out.push(a);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Diagonals in the support of the coefficient monomial of `m`, sorted.
pub fn y_support(tp: &TPolygon, minimal: &AngleMatching, m: &AngleMatching) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (a, b) in minimal.iter().zip(m) {
        if a == b {
            continue;
        }
        for x in [*a, *b] {
            if is_exterior(tp, x) {
                let (s, u) = tp.angle_sides(x);
                out.push(if tp.edges[s].diagonal { s } else { u });
            }
        }
    }
    let special = special_angles(tp);
    if !special.is_empty() && m.iter().any(|a| special.contains(a)) {
        out.push(tp.taus[0]);
    }
    out.sort();
    out.dedup();
    out
}

/// Whether a matching of an annulus is bad: min-condition along one boundary component and
/// max-condition along the other.
pub fn is_bad(tp: &TPolygon, m: &AngleMatching) -> bool {
    let comps = tp.boundary_components();
    if comps.len() != 2 {
        return false;
    }
    let verts = |c: &Vec<usize>| -> Vec<usize> { c.iter().map(|&e| tp.edges[e].ends[0]).collect() };
    let (a, b) = (verts(&comps[0]), verts(&comps[1]));
    let all_min = |vs: &[usize]| vs.iter().all(|&v| min_condition(tp, m, v));
    let all_max = |vs: &[usize]| vs.iter().all(|&v| max_condition(tp, m, v));
    (all_min(&a) && all_max(&b)) || (all_min(&b) && all_max(&a))
}

pub fn good_enumerate(tp: &TPolygon) -> Result<Vec<AngleMatching>> {
    if tp.shape != Shape::Annulus {
        return Err(Error::Unsupported(
            "good matchings are defined on annuli".into(),
        ));
    }
    Ok(enumerate(tp)
        .into_iter()
        .filter(|m| !is_bad(tp, m))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lpoly::Monomial;
    use crate::polygon::{build_annulus, build_notched, build_plain};

    #[test]
    fn golden_counts() {
        let t = fixtures::square_surface();
        assert_eq!(
            enumerate(&build_plain(&t, &fixtures::plain_arc()).unwrap()).len(),
            5
        );
        assert_eq!(
            enumerate(&build_notched(&t, &fixtures::notched_arc()).unwrap()).len(),
            9
        );
        assert_eq!(
            enumerate(&build_notched(&t, &fixtures::doubly_notched_arc()).unwrap()).len(),
            18
        );
    }

    #[test]
    fn square_has_two() {
        let t = fixtures::square_one_diagonal();
        let d =
            serde_json::from_str(r#"{"endpoints":[1,3],"triangles":[0,1],"arcs":[1]}"#).unwrap();
        let p = build_plain(&t, &d).unwrap();
        let all = enumerate(&p);
        assert_eq!(all.len(), 2);
        let m = minimal_matching(&p).unwrap();
        // both diagonal endpoints take their first counterclockwise angle
        for &a in &m {
            let v = p.vertex(a);
            assert_eq!(p.angles_around(v)[0], a);
        }
    }

    #[test]
    fn plain_arc_x_weights_are_distinct_per_matching_class() {
        let t = fixtures::square_surface();
        let p = build_plain(&t, &fixtures::plain_arc()).unwrap();
        let ws: Vec<Monomial> = enumerate(&p).iter().map(|m| weight_x(&p, m, 10)).collect();
        assert_eq!(ws.len(), 5);
        // every weight has one factor per triangle with a labeled opposite side
        for w in &ws {
            assert!(w.xexp.iter().sum::<i64>() >= 2);
        }
    }

    #[test]
    fn minimal_has_empty_support_and_is_unique() {
        let t = fixtures::square_surface();
        for p in [
            build_plain(&t, &fixtures::plain_arc()).unwrap(),
            build_notched(&t, &fixtures::notched_arc()).unwrap(),
            build_notched(&t, &fixtures::doubly_notched_arc()).unwrap(),
        ] {
            let all = enumerate(&p);
            let m = minimal_matching(&p).unwrap();
            assert!(all.contains(&m));
            assert!(y_support(&p, &m, &m).is_empty());
            for a in &all {
                assert!(is_matching(&p, a));
            }
        }
    }

    #[test]
    fn annulus_has_two_bad() {
        let t = fixtures::annulus();
        let p = build_annulus(&t, &fixtures::annulus_loop()).unwrap();
        let all = enumerate(&p);
        let good = good_enumerate(&p).unwrap();
        assert_eq!(all.len() - good.len(), 2);
        assert!(good_enumerate(
            &build_plain(&fixtures::square_surface(), &fixtures::plain_arc()).unwrap()
        )
        .is_err());
    }
}
