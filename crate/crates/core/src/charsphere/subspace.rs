use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SphereError;
use crate::exact::{self, Q};
use crate::group::IntegerMatrix;
use crate::linalg;

/// A rational linear subspace with a canonical integer basis.
///
/// The basis is the reduced echelon basis with each row scaled to a primitive
/// integer vector, so equal subspaces have identical bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalSubspace {
    ambient: usize,
    basis: IntegerMatrix,
}

impl RationalSubspace {
    /// Span of the given vectors (which need not be independent).
    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        let (rows, _) = linalg::rref(vectors, ambient);
        let ints: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| exact::primitive_direction(r).expect("rref rows are nonzero"))
            .collect();
        RationalSubspace {
            ambient,
            basis: IntegerMatrix::from_rows(ambient, ints),
        }
    }

    /// Subspace whose basis vectors are given explicitly, in this order.
    /// The vectors must be linearly independent.
    pub fn with_basis(ambient: usize, vectors: &[Vec<Q>]) -> Result<Self, SphereError> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(SphereError::DimensionMismatch {
                expected: ambient,
                found: vectors.iter().map(Vec::len).find(|&l| l != ambient).unwrap_or(0),
            });
        }
        if linalg::rank(vectors, ambient) != vectors.len() {
            return Err(SphereError::DependentBasis);
        }
        let ints = vectors
            .iter()
            .map(|v| exact::primitive_direction(v).expect("independent vectors are nonzero"))
            .collect();
        Ok(RationalSubspace {
            ambient,
            basis: IntegerMatrix::from_rows(ambient, ints),
        })
    }

    /// Kernel of the given rows.
    pub fn kernel(ambient: usize, rows: &[Vec<Q>]) -> Self {
        let (basis, _) = linalg::nullspace(rows, ambient);
        RationalSubspace::span(ambient, &basis)
    }

    pub fn whole(ambient: usize) -> Self {
        RationalSubspace {
            ambient,
            basis: IntegerMatrix::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn basis_q(&self) -> Vec<Vec<Q>> {
        (0..self.dim())
            .map(|i| exact::to_q_vec(self.basis.row(i)))
            .collect()
    }

    /// Ambient vector with intrinsic coordinates `y`.
    pub fn embed(&self, y: &[Q]) -> Vec<Q> {
        let mut x = vec![Q::from_integer(0.into()); self.ambient];
        for (i, yi) in y.iter().enumerate() {
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += yi * exact::int_to_q(&self.basis[(i, j)]);
            }
        }
        x
    }

    /// Intrinsic coordinates of an ambient vector, if it lies in the subspace.
    pub fn coordinates(&self, x: &[Q]) -> Option<Vec<Q>> {
        linalg::solve_unique(&self.basis_q(), x)
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.coordinates(x).is_some()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceRepr {
    ambient: usize,
    basis: Vec<Vec<String>>,
}

impl Serialize for RationalSubspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient: self.ambient,
            basis: self
                .basis
                .to_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalSubspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SubspaceRepr::deserialize(d)?;
        let vectors = repr
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|t| exact::parse_q(t).map_err(D::Error::custom))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        RationalSubspace::with_basis(repr.ambient, &vectors).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn v(x: &[i64]) -> Vec<Q> {
        x.iter().map(|&a| q(a)).collect()
    }

    #[test]
    fn canonical_span() {
        let a = RationalSubspace::span(3, &[v(&[2, 2, 0]), v(&[1, 1, 0])]);
        let b = RationalSubspace::span(3, &[v(&[-3, -3, 0])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
        assert!(a.contains(&v(&[5, 5, 0])));
        assert!(!a.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn kernel_and_coordinates() {
        let w = RationalSubspace::kernel(4, &[v(&[1, -1, 0, 0]), v(&[0, 0, 1, -1])]);
        assert_eq!(w.dim(), 2);
        assert_eq!(w.coordinates(&v(&[2, 2, 3, 3])), Some(v(&[2, 3])));
        assert_eq!(w.embed(&v(&[1, 0])), v(&[1, 1, 0, 0]));
    }

    #[test]
    fn zero_subspace() {
        let w = RationalSubspace::kernel(1, &[v(&[-2])]);
        assert_eq!(w.dim(), 0);
        assert_eq!(w.ambient(), 1);
    }

    #[test]
    fn serde_roundtrip() {
        let w = RationalSubspace::kernel(4, &[v(&[1, -1, 0, 0]), v(&[0, 0, 1, -1])]);
        let back: RationalSubspace =
            serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(back, w);
    }
}
