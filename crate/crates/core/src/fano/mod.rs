//! Fano fibers and censuses of k-planes.

pub mod census;
pub mod fiber;
pub mod grassmannian;

pub use census::{enumerate_kplanes, CensusMethod, CensusOptions, PlaneCensus};
pub use fiber::{
    dimension_estimate, estimate_from_counts, expected_dims, fano_fiber, fiber_points, tangent_dim,
    DimensionEstimate, ExpectedDims, FanoFiber,
};
