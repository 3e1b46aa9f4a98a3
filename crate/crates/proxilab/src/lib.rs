//! Numerical laboratory for best approximations in finite-dimensional
//! normed spaces: distance solvers with honest certificates, nearest-point
//! multiplicity analysis, differentiability probes of distance functions,
//! and reproducible scenario runs.

pub mod convexity;
pub mod diff;
pub mod lp;
pub mod norm;
pub mod par;
pub mod projection;
pub mod report;
pub mod rng;
pub mod scenario;
pub mod sets;
pub mod solver;
pub mod vector;
