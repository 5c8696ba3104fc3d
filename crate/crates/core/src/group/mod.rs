//! Presentations, words, integer matrices and abelianization.

mod abelian;
mod coset;
mod matrix;
mod presentation;
mod snf;
mod word;

pub use abelian::{abelianization, exponent_matrix, in_relator_lattice, AbelianizationData, HomBasis};
pub use coset::{enumerate_finite, CosetError, FiniteGroup, DEFAULT_COSET_CAP};
pub use matrix::IntegerMatrix;
pub use presentation::{Presentation, PresentationFile};
pub use snf::{smith_normal_form, SmithForm};
pub use word::{free_reduce, Letter, Word};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid generator name `{0}`")]
    BadGeneratorName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error("malformed token `{0}` (expected `name` or `name^-1`)")]
    BadToken(String),
    #[error("relator {0} is trivial after free reduction")]
    TrivialRelator(usize),
    #[error("invalid presentation file: {0}")]
    Json(String),
}
