use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntegerMatrix;
use super::presentation::Presentation;
use super::snf::{smith_normal_form, SmithForm};
use crate::exact::{int_to_q, Q};
use crate::linalg;

/// Relator exponent sums: one row per relator, one column per generator.
pub fn exponent_matrix(p: &Presentation) -> IntegerMatrix {
    let n = p.num_generators();
    IntegerMatrix::from_rows(
        n,
        p.relators()
            .iter()
            .map(|r| r.exponent_vector(n).into_iter().map(BigInt::from).collect())
            .collect(),
    )
}

/// Structure of `G/G'`: free rank, torsion chain and a projection onto the
/// free part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianizationData {
    pub rank: usize,
    #[serde(with = "crate::exact::int_vec")]
    pub torsion: Vec<BigInt>,
    /// `rank x n` integer matrix; kills every relator exponent vector.
    pub projection: IntegerMatrix,
}

pub fn abelianization(p: &Presentation) -> AbelianizationData {
    let m = exponent_matrix(p);
    let snf = smith_normal_form(&m);
    from_smith(&snf, p.num_generators())
}

fn from_smith(snf: &SmithForm, n: usize) -> AbelianizationData {
    let factors = snf.invariant_factors();
    let r = factors.len();
    let torsion = factors.into_iter().filter(|d| !d.is_one()).collect();
    // x (row) -> x V sends the relator lattice onto the diagonal lattice, so
    // the trailing columns of V read off the free coordinates.
    let proj_rows = (r..n)
        .map(|j| (0..n).map(|i| snf.v[(i, j)].clone()).collect())
        .collect();
    AbelianizationData {
        rank: n - r,
        torsion,
        projection: IntegerMatrix::from_rows(n, proj_rows),
    }
}

/// Whether an integer vector lies in the relator lattice of `p`.
pub fn in_relator_lattice(p: &Presentation, v: &[BigInt]) -> bool {
    let snf = smith_normal_form(&exponent_matrix(p));
    let factors = snf.invariant_factors();
    let n = p.num_generators();
    (0..n).all(|j| {
        let c: BigInt = (0..n).map(|i| &v[i] * &snf.v[(i, j)]).sum();
        match factors.get(j) {
            Some(d) => (&c % d).is_zero(),
            None => c.is_zero(),
        }
    })
}

/// Coordinates on `Hom(G, R)`.
///
/// A character is determined by its values on the generators subject to the
/// relator constraints. The basis vectors come from the reduced echelon form
/// of the exponent matrix: basis vector `k` takes value 1 on the `k`-th free
/// generator and 0 on the other free generators, so the coordinates of a
/// character are simply its values on the free generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomBasis {
    num_generators: usize,
    free_generators: Vec<usize>,
    /// Basis vectors, each of length `num_generators`.
    basis: Vec<Vec<Q>>,
}

impl HomBasis {
    pub fn new(p: &Presentation) -> Self {
        let m = exponent_matrix(p);
        let rows: Vec<Vec<Q>> = m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(int_to_q).collect())
            .collect();
        let (basis, free) = linalg::nullspace(&rows, p.num_generators());
        HomBasis {
            num_generators: p.num_generators(),
            free_generators: free,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    /// Generators whose values are the coordinates.
    pub fn free_generators(&self) -> &[usize] {
        &self.free_generators
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    /// Generator values of the character with the given coordinates.
    pub fn values(&self, coords: &[Q]) -> Vec<Q> {
        assert_eq!(coords.len(), self.dim());
        let mut v = vec![Q::zero(); self.num_generators];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        v
    }

    /// Coordinates of a character given by generator values.
    pub fn coords(&self, values: &[Q]) -> Vec<Q> {
        self.free_generators
            .iter()
            .map(|&g| values[g].clone())
            .collect()
    }

    /// Height contribution of generator `g`: `chi(g) = <coords, height(g)>`.
    pub fn generator_height(&self, g: usize) -> Vec<Q> {
        self.basis.iter().map(|b| b[g].clone()).collect()
    }

    /// Height of a group element from its exponent vector.
    pub fn height(&self, exponents: &[i64]) -> Vec<Q> {
        self.basis
            .iter()
            .map(|b| {
                b.iter()
                    .zip(exponents)
                    .filter(|(_, &e)| e != 0)
                    .map(|(x, &e)| x * Q::from_integer(BigInt::from(e)))
                    .sum()
            })
            .collect()
    }
}
