//! Local expansions of a hypersurface at a point and along a plane, and
//! the tangent-space diagnostics built from them.

pub mod diagnostics;
pub mod plane;
pub mod point;
pub mod tangency;

pub use diagnostics::{delta_at, plane_diagnostics, point_diagnostics, DiagOptions, TangentDiagnostics};
pub use plane::{expand_at_plane, index_set, is_downward, Multiset, PlaneExpansion};
pub use point::{expand_at_point, PointExpansion, X0Choice};
pub use tangency::{tangency_locus, TangencyReport};
