//! Random submanifolds as Voronoi color classes of triangulated grid
//! manifolds.
//!
//! The crate builds implicit grid triangulations (torus/ball/sphere families),
//! colors their vertices, and studies the color classes: extraction as
//! explicit subcomplexes of the barycentric subdivision, exact expected
//! Euler-characteristic densities, random-knot sampling and classification,
//! GF(2) homological percolation, realization of prescribed links on the
//! boundary 3-sphere of a 4-box, and simulated-annealing search for low-genus
//! spanning surfaces in the 4-ball.

pub mod complex;
pub mod coloring;
pub mod diagram;
pub mod ec;
pub mod error;
pub mod genus;
pub mod gf2;
pub mod homology;
pub mod knots;
pub mod lattice;
pub mod rng;
pub mod stratum;
pub mod tiles;
pub mod unionfind;

pub use error::{Error, Result};
