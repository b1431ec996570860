//! Cluster variables of surface cluster algebras with principal coefficients, computed from
//! perfect matchings of angles in triangulated polygons, with snake graph, bipartite graph
//! and quiver-with-potential backends and a seed mutation oracle.

pub mod angle_matchings;
pub mod bipartite;
pub mod error;
pub mod expand;
pub mod fixtures;
pub mod generate;
pub mod lpoly;
pub mod oracle;
pub mod polygon;
pub mod qp;
pub mod snake;
pub mod surface;

pub use error::{Error, Result};
pub use lpoly::{LPoly, Monomial};
