//! Residual hypersurfaces, the boundary series on a marked plane, the
//! quadric base case and a sampler for the resulting tower of
//! parametrizations.

pub mod quadric;
pub mod residual;
pub mod sampler;
pub mod series;

pub use quadric::{quadric_param, QuadricParam};
pub use residual::{residual, residual_in, ResidualDatum};
pub use sampler::{
    reduction_attempt, reduction_step, unirational_sample, Failure, FailureTally, ReductionStep, SampleOptions,
    SingularResidualPolicy, TowerSampleReport,
};
pub use series::{
    basepoint_free_check, bertini_strata, boundary_series, evidence_dim, BaseDim, BasepointReport, BertiniStrata,
    BoundarySeries, LinearSeries, Stratum,
};
