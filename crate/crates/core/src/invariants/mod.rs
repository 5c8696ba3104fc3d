//! Known Sigma/Omega values and derivations for extensions and products.

mod catalog;
mod derive;
mod record;

pub use catalog::{lookup_known, Catalog, CatalogEntry, GroupId};
pub use derive::{
    omega_bounds_finite_extension, omega_exact_if_sufficient, omega_from_sigma_record, omega_product, replay,
    restrict_record, sigma_finite_extension,
};
pub use record::{describe_basis, DerivationCertificate, InvariantRecord, Rule};

use thiserror::Error;

use crate::charsphere::SphereError;
use crate::extension::ExtensionError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("no catalog value for `{group}` in degree {degree}")]
    UnknownDegree { group: String, degree: u32 },
    #[error("record has no sigma")]
    MissingSigma,
    #[error("record has no {0}")]
    MissingInvariant(&'static str),
    #[error("degrees differ: {0} and {1}")]
    DegreeMismatch(u32, u32),
    #[error("record has {record} coordinates, expected {expected}")]
    CoordinateMismatch { record: usize, expected: usize },
    #[error("inconsistent catalog entry: {0}")]
    InconsistentCatalog(String),
    #[error("invalid catalog: {0}")]
    Json(String),
    #[error("invalid certificate: {0}")]
    BadCertificate(String),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}
