//! Attractors of plane dynamical systems on discretized grids.
//!
//! The crate computes invariant sets of iterated function systems and of
//! parametrized plane homeomorphisms, then classifies their global topology.
//! A compact plane set is represented by an occupancy bitmap ([`BitGrid`])
//! over a physical rectangle; set dynamics are driven by the Hutchinson
//! operator or by trapping-region iteration, convergence is measured in the
//! Hausdorff metric, and the resulting continuum is classified by the number
//! of bounded components of its complement (trivial shape, circle, wedge of
//! circles, or Hawaiian-earring-like).
//!
//! All core math is generic over the scalar type through the [`Scalar`]
//! trait; `f64` is the default type parameter everywhere, so non-generic
//! code can simply write `BitGrid`, `AffineMap2`, and so on.

pub mod conley;
pub mod config;
pub mod dimension;
pub mod edt;
pub mod error;
pub mod geom;
pub mod grid;
pub mod homeo;
pub mod hyperspace;
pub mod ifs;
pub mod pgm;
pub mod scalar;
pub mod shape;

pub use conley::{AttractorBlock, ContinuationReport, InvertibleIFS};
pub use error::{Error, Result};
pub use geom::{Point2, Rect, SeedRegion};
pub use grid::{BitGrid, BoundaryMode, ComponentReport, Connectivity};
pub use homeo::{HopfReport, MapFamily, RobustnessReport};
pub use hyperspace::ConvergenceTrace;
pub use ifs::{AffineMap2, AttractorReport, IFSystem};
pub use scalar::Scalar;
pub use shape::{H1Rank, ShapeClass, ShapeVerdict, Theorem41Report, Theorem41Status};

/// Single-precision aliases for callers that trade accuracy for memory.
pub type BitGrid32 = grid::BitGrid<f32>;
pub type AffineMap32 = ifs::AffineMap2<f32>;
pub type IFSystem32 = ifs::IFSystem<f32>;
pub type Point32 = geom::Point2<f32>;
pub type Rect32 = geom::Rect<f32>;
