use std::sync::Arc;

use num_traits::Zero;

use super::{RationalRay, SphereError};
use crate::exact::{self, Q};
use crate::group::{HomBasis, Presentation};

/// A homomorphism `G -> R`, stored as its values on the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    owner: Arc<Presentation>,
    values: Vec<Q>,
}

/// Validate generator values against the relators of `p`.
pub fn make_character(p: &Arc<Presentation>, values: Vec<Q>) -> Result<Character, SphereError> {
    if values.len() != p.num_generators() {
        return Err(SphereError::DimensionMismatch {
            expected: p.num_generators(),
            found: values.len(),
        });
    }
    for (i, r) in p.relators().iter().enumerate() {
        let total: Q = r
            .letters()
            .iter()
            .map(|l| &values[l.generator] * exact::q(l.sign()))
            .sum();
        if !total.is_zero() {
            return Err(SphereError::RelatorViolation(i));
        }
    }
    Ok(Character {
        owner: Arc::clone(p),
        values,
    })
}

/// Ray of a nonzero character in generator-value coordinates.
pub fn ray_of(chi: &Character) -> Result<RationalRay, SphereError> {
    RationalRay::from_rational(&chi.values).ok_or(SphereError::ZeroCharacter)
}

impl Character {
    pub fn owner(&self) -> &Arc<Presentation> {
        &self.owner
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn value(&self, generator: usize) -> &Q {
        &self.values[generator]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Coordinates in `Hom(G, R)` (values on the free generators).
    pub fn hom_coords(&self, basis: &HomBasis) -> Vec<Q> {
        basis.coords(&self.values)
    }

    /// Point of the character sphere in `Hom` coordinates.
    pub fn hom_ray(&self, basis: &HomBasis) -> Result<RationalRay, SphereError> {
        RationalRay::from_rational(&self.hom_coords(basis)).ok_or(SphereError::ZeroCharacter)
    }

    /// Value on an arbitrary word.
    pub fn evaluate(&self, w: &crate::group::Word) -> Q {
        w.letters()
            .iter()
            .map(|l| &self.values[l.generator] * exact::q(l.sign()))
            .sum()
    }

    pub fn scaled(&self, factor: &Q) -> Character {
        Character {
            owner: Arc::clone(&self.owner),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}
