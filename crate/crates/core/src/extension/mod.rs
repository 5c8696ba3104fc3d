//! Extensions `1 -> H -> G -> K -> 1` given by transversal data.

mod action;
mod spec;

pub use action::{
    action_on_hom_h, build_extension_presentation, extend_character_finite, fix_subspace, hom_space_split,
    restrict_to_h, transversal_invariance_check, ActionMatrix, SplitHom,
};
pub use spec::{
    ExtensionSpec, ExtensionSpecFile, Flavor, FlavorTag, LiftFile, OrderEntry, OrderFile, RelatorLift,
};

use thiserror::Error;

use crate::charsphere::SphereError;
use crate::group::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error("invalid extension spec: {0}")]
    Json(String),
    #[error("bad table key `{0}`")]
    BadKey(String),
    #[error("generator `{0}` appears in both H and K")]
    NameClash(String),
    #[error("conjugation table has no entry for {k_generator}:{h_generator}")]
    MissingConjugation { k_generator: String, h_generator: String },
    #[error("no order entry for K-generator `{0}`")]
    MissingOrder(String),
    #[error("`{k_generator}^{m}` is not trivial in K")]
    BadOrder { k_generator: String, m: u32 },
    #[error("`{0}` is not a relation of K")]
    NotARelation(String),
    #[error("K-relator {0} is neither an order relator nor lifted")]
    MissingRelatorLift(usize),
    #[error("K is not finite within {0} elements")]
    KNotFinite(usize),
    #[error("conjugation by `{0}` does not induce an endomorphism of H's abelianization")]
    InconsistentAction(String),
    #[error("action of `{0}` on Hom(H, R) is singular")]
    NonInvertibleAction(String),
    #[error("character is not fixed by the action of K")]
    NotFixed,
    #[error("extended character violates relator {0} of G")]
    ValidationFailure(usize),
    #[error("{0}")]
    WrongFlavor(String),
}
