use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::RinftyError;
use crate::exact::{int_to_q, Q};
use crate::group::{abelianization, exponent_matrix, in_relator_lattice, HomBasis, IntegerMatrix, Presentation, Word};
use crate::linalg::{determinant, solve_unique};

/// An endomorphism of a presented group given by generator images, checked
/// to induce an automorphism of the abelianization's free part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismSpec {
    owner: Arc<Presentation>,
    images: Vec<Word>,
}

impl AutomorphismSpec {
    pub fn new(owner: Arc<Presentation>, images: Vec<Word>) -> Result<Self, RinftyError> {
        let n = owner.num_generators();
        if images.len() != n {
            return Err(RinftyError::NotAnAutomorphism(format!(
                "{} images for {} generators",
                images.len(),
                n
            )));
        }
        if let Some(g) = images.iter().filter_map(Word::max_generator).find(|&g| g >= n) {
            return Err(RinftyError::NotAnAutomorphism(format!("image uses generator index {g}")));
        }
        let phi = AutomorphismSpec { owner, images };
        phi.validate()?;
        Ok(phi)
    }

    /// Images by generator name; unlisted generators are fixed.
    pub fn from_map(owner: Arc<Presentation>, map: &BTreeMap<String, String>) -> Result<Self, RinftyError> {
        for k in map.keys() {
            if owner.generator_index(k).is_none() {
                return Err(RinftyError::UnknownGenerator(k.clone()));
            }
        }
        let images = owner
            .generators()
            .iter()
            .map(|g| match map.get(g) {
                Some(w) => owner.parse_word(w).map_err(RinftyError::from),
                None => owner.parse_word(g).map_err(RinftyError::from),
            })
            .collect::<Result<Vec<_>, _>>()?;
        AutomorphismSpec::new(owner, images)
    }

    pub fn owner(&self) -> &Arc<Presentation> {
        &self.owner
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Row `i` is the exponent vector of the image of generator `i`.
    pub fn exponent_matrix(&self) -> IntegerMatrix {
        let n = self.owner.num_generators();
        IntegerMatrix::from_rows(
            n,
            self.images
                .iter()
                .map(|w| w.exponent_vector(n).into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    fn image_exponents(&self, e: &[BigInt]) -> Vec<BigInt> {
        let m = self.exponent_matrix();
        let n = e.len();
        (0..n).map(|j| (0..n).map(|i| &e[i] * &m[(i, j)]).sum()).collect()
    }

    /// Matrix of the induced map on the free part of the abelianization, in
    /// the coordinates of the abelianization's projection.
    pub fn free_part_matrix(&self) -> Result<IntegerMatrix, RinftyError> {
        let ab = abelianization(&self.owner);
        let n = self.owner.num_generators();
        let p = &ab.projection;
        let p_rows: Vec<Vec<Q>> = (0..ab.rank)
            .map(|k| (0..n).map(|i| int_to_q(&p[(k, i)])).collect())
            .collect();
        let m = self.exponent_matrix();
        let mut rows = Vec::with_capacity(ab.rank);
        for k in 0..ab.rank {
            // row k of P M^T: the k-th free coordinate of each image
            let target: Vec<Q> = (0..n)
                .map(|i| int_to_q(&(0..n).map(|j| &p[(k, j)] * &m[(i, j)]).sum::<BigInt>()))
                .collect();
            let f = solve_unique(&p_rows, &target)
                .ok_or_else(|| RinftyError::NotAnAutomorphism("free part not preserved".into()))?;
            let row = f
                .into_iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(RinftyError::NotAnAutomorphism("non-integral action on the free part".into()))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(IntegerMatrix::from_rows(ab.rank, rows))
    }

    fn validate(&self) -> Result<(), RinftyError> {
        let rel = exponent_matrix(&self.owner);
        for r in 0..rel.rows() {
            if !in_relator_lattice(&self.owner, &self.image_exponents(rel.row(r))) {
                return Err(RinftyError::NotAnAutomorphism(format!(
                    "relator {r} does not map into the relator lattice"
                )));
            }
        }
        let det = self.free_part_matrix()?.determinant();
        if det.abs() != BigInt::from(1) {
            return Err(RinftyError::NotAnAutomorphism(format!(
                "determinant {det} on the free part"
            )));
        }
        Ok(())
    }

    /// `chi . phi` for a character given by its generator values.
    pub fn pullback(&self, values: &[Q]) -> Vec<Q> {
        let n = self.owner.num_generators();
        self.images
            .iter()
            .map(|w| {
                w.exponent_vector(n)
                    .iter()
                    .zip(values)
                    .filter(|(e, _)| !e.is_zero())
                    .map(|(e, v)| Q::from_integer(BigInt::from(*e)) * v)
                    .sum()
            })
            .collect()
    }

    /// Matrix of `chi -> chi . phi` on Hom(G, R) coordinates (columns are
    /// images of basis vectors).
    pub fn hom_action(&self) -> Vec<Vec<Q>> {
        let hb = HomBasis::new(&self.owner);
        let d = hb.dim();
        let cols: Vec<Vec<Q>> = hb.basis().iter().map(|b| hb.coords(&self.pullback(b))).collect();
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn hom_determinant(&self) -> Q {
        determinant(&self.hom_action())
    }
}
