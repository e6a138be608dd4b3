//! Exact exterior algebra, containment constructions, chamber coordinates and numerical
//! ball charts for the totally nonnegative Grassmannian G(k,n)≥0.

pub mod chamber;
pub mod chart;
pub mod convexoid;
pub mod error;
pub mod exterior;
pub mod lemmas;
pub mod linalg;
pub mod plucker;
pub mod polytope;
pub mod rational;
pub mod sample;

pub use chamber::{assemble, split, ChamberPoint, SplitTriple};
pub use chart::{ball_chart, ball_chart_inverse, BallChart, ChartConfig, ChartPoint};
pub use convexoid::{Convexoid, ConvexoidConfig, FiberOracle, Gluing, Side};
pub use error::{Error, Result};
pub use exterior::{IndexSet, MultiVector, SignClass};
pub use lemmas::{EpsilonSearch, Lemmas, Witness};
pub use plucker::PlaneMatrix;
pub use polytope::HPolytope;
pub use rational::Rational;
pub use sample::Sampler;
