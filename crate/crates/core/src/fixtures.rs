//! Small surfaces and arcs shipped with the crate.

use std::collections::BTreeMap;

use crate::lpoly::LPoly;
use crate::surface::{LoopSpec, PointId, TaggedArcSpec, Triangulation};

pub const ORIGIN: PointId = 0;
pub const X: PointId = 1;
pub const Y: PointId = 2;
pub const XY: PointId = 3;
pub const P: PointId = 4;
pub const Q: PointId = 5;
pub const R: PointId = 6;

fn surface(s: &str) -> Triangulation {
    Triangulation::from_json(s).expect("fixture surface")
}

fn arc(s: &str) -> TaggedArcSpec {
    serde_json::from_str(s).expect("fixture arc")
}

/// Square with three punctures and ten arcs, one of them notched.
pub fn square_surface() -> Triangulation {
    surface(include_str!("../fixtures/square_surface.json"))
}

/// Plain arc from the upper-left corner to the central puncture.
pub fn plain_arc() -> TaggedArcSpec {
    arc(include_str!("../fixtures/square_plain_arc.json"))
}

/// Arc from the enclosed puncture to the central one, notched at the center.
pub fn notched_arc() -> TaggedArcSpec {
    arc(include_str!("../fixtures/square_notched_arc.json"))
}

/// Arc between the two free punctures, notched at both ends.
pub fn doubly_notched_arc() -> TaggedArcSpec {
    arc(include_str!("../fixtures/square_doubly_notched_arc.json"))
}

pub fn annulus() -> Triangulation {
    surface(include_str!("../fixtures/annulus.json"))
}

pub fn annulus_loop() -> LoopSpec {
    serde_json::from_str(include_str!("../fixtures/annulus_loop.json")).expect("fixture loop")
}

pub fn square_one_diagonal() -> Triangulation {
    surface(include_str!("../fixtures/square_one_diagonal.json"))
}

pub fn pentagon_fan() -> Triangulation {
    surface(include_str!("../fixtures/pentagon_fan.json"))
}

pub fn hexagon_fan() -> Triangulation {
    surface(include_str!("../fixtures/hexagon_fan.json"))
}

pub fn punctured_digon() -> Triangulation {
    surface(include_str!("../fixtures/punctured_digon.json"))
}

pub fn punctured_digon_notched() -> Triangulation {
    surface(include_str!("../fixtures/punctured_digon_notched.json"))
}

pub fn digon_notched_arc() -> TaggedArcSpec {
    arc(include_str!("../fixtures/digon_notched_arc.json"))
}

pub fn twice_punctured_monogon() -> Triangulation {
    surface(include_str!("../fixtures/twice_punctured_monogon.json"))
}

/// The arc between the two punctures of the monogon, notched at both ends.
pub fn monogon_doubly_notched() -> TaggedArcSpec {
    arc(include_str!("../fixtures/monogon_doubly_notched.json"))
}

pub fn once_punctured_torus() -> Triangulation {
    surface(include_str!("../fixtures/once_punctured_torus.json"))
}

/// Expected expansion on the square surface, `name` one of `{plain,notched,doubly_notched}_arc_{free,principal}`.
pub fn golden(name: &str) -> LPoly {
    let table: BTreeMap<String, String> =
        serde_json::from_str(include_str!("../fixtures/golden.json")).expect("golden table");
    let den_key = format!("{}_den", name.rsplit_once('_').expect("suffix").0);
    let num = LPoly::parse(10, &table[name]).expect("golden numerator");
    let den = LPoly::parse(10, &table[&den_key]).expect("golden denominator");
    let (m, _) = den.as_monomial().expect("monomial denominator");
    let one = crate::lpoly::Monomial::one(10);
    num.mul_monomial(&one.div(m))
}
