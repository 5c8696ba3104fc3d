//! Characters, rays and exact set algebra on the character sphere.

mod character;
mod lp;
mod normal;
mod omega;
mod ray;
mod sphere;
mod subspace;

pub use character::{make_character, ray_of, Character};
pub use normal::{cells, complement_cells, count_rational_points, equivalent, finite_rays, is_empty, subset, Cell, PointCount, MAX_CELLS};
pub use lp::{lp_feasible, project_cone, Constraint, Relation};
pub use omega::{omega_from_sigma, restrict_to_subspace, spherical_join};
pub use ray::RationalRay;
pub use sphere::SphereSet;
pub use subspace::RationalSubspace;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphereError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("values violate relator {0}")]
    RelatorViolation(usize),
    #[error("the zero character has no ray")]
    ZeroCharacter,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("unsupported form: {0}")]
    UnsupportedForm(String),
    #[error("normal form exceeds {0} cells")]
    TooComplex(usize),
    #[error("invalid sphere set: {0}")]
    Invalid(String),
}
