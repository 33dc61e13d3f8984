//! Hypersurfaces, projective points and linear subspaces.

pub mod examples;
pub mod hypersurface;
pub mod kplane;
pub mod points;
pub mod singular;

pub use examples::{example_hypersurface, fermat, random_smooth, Example, ExampleKind, GenOptions};
pub use hypersurface::{contains, Hypersurface};
pub use kplane::KPlane;
pub use singular::{singular_search, SingularReport, SingularStatus};
