//! Cotransverse maps between boolean cubes, their topological extensions,
//! directed paths, and finite symmetric transverse sets.

pub mod cube;
pub mod dpath;
pub mod error;
pub mod geo;
pub mod homset;
pub mod point;
pub mod quotient;
pub mod reedy;
pub mod sample;
pub mod sts;
pub mod suite;
pub mod topo;

pub use cube::{coface, compose, d1_vertex, gamma1, symmetry, CubeMap, ExtDist, Rational, Vertex};
pub use error::{Error, Result};
pub use homset::{enumerate_homset, factorize, Budget, Factorization};
pub use point::RPoint;
pub use sts::{Precubical, Sts, StsMap};
