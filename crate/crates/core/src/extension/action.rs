use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::spec::{parse_conjugation, Flavor};
use super::{ExtensionError, ExtensionSpec};
use crate::charsphere::{make_character, Character, RationalSubspace, SphereError};
use crate::exact::{self, Q};
use crate::group::{abelianization, exponent_matrix, AbelianizationData, HomBasis, Letter, Presentation, Word};
use crate::linalg;

/// Action of one generator of `K` on `Hom(H, R)`, in the coordinates of
/// [`HomBasis`] (values on the free generators of `H`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionMatrix {
    pub element: String,
    #[serde(with = "exact::q_mat")]
    pub matrix: Vec<Vec<Q>>,
}

impl ActionMatrix {
    pub fn apply(&self, coords: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.matrix, coords)
    }
}

/// `(b . phi)(a) = phi(w_{a,b})`, expressed in Hom coordinates.
pub(crate) fn compute_actions(
    h: &Presentation,
    k: &Presentation,
    conjugation: &[Vec<Word>],
) -> Result<Vec<ActionMatrix>, ExtensionError> {
    let basis = HomBasis::new(h);
    let n = h.num_generators();
    let r = basis.dim();
    let relator_rows = exponent_matrix(h).to_rows();
    let mut out = Vec::with_capacity(k.num_generators());
    for (bi, row) in conjugation.iter().enumerate() {
        let name = k.generators()[bi].clone();
        // image[k] = generator values of b . (basis vector k)
        let images: Vec<Vec<Q>> = basis
            .basis()
            .iter()
            .map(|v| {
                row.iter()
                    .map(|w| {
                        let e = w.exponent_vector(n);
                        e.iter().zip(v).map(|(&c, x)| x * exact::q(c)).sum()
                    })
                    .collect()
            })
            .collect();
        for img in &images {
            for rel in &relator_rows {
                let s: Q = rel.iter().zip(img).map(|(c, x)| x * exact::int_to_q(c)).sum();
                if !s.is_zero() {
                    return Err(ExtensionError::InconsistentAction(name));
                }
            }
        }
        // column k of the matrix is coords(image[k])
        let cols: Vec<Vec<Q>> = images.iter().map(|img| basis.coords(img)).collect();
        let matrix = linalg::transpose(&cols, r);
        if r > 0 && linalg::determinant(&matrix).is_zero() {
            return Err(ExtensionError::NonInvertibleAction(name));
        }
        out.push(ActionMatrix {
            element: name,
            matrix,
        });
    }
    Ok(out)
}

/// One matrix per generator of `K`.
pub fn action_on_hom_h(spec: &ExtensionSpec) -> Vec<ActionMatrix> {
    spec.actions().to_vec()
}

fn fix_of(dim: usize, actions: &[ActionMatrix]) -> RationalSubspace {
    let mut rows = Vec::new();
    for a in actions {
        for (i, row) in a.matrix.iter().enumerate() {
            let mut row = row.clone();
            row[i] -= Q::one();
            rows.push(row);
        }
    }
    RationalSubspace::kernel(dim, &rows)
}

/// Characters of `H` fixed by every generator of `K`.
pub fn fix_subspace(spec: &ExtensionSpec) -> RationalSubspace {
    fix_of(HomBasis::new(spec.h()).dim(), spec.actions())
}

fn nu(b: usize, offset: usize) -> Letter {
    Letter::pos(b + offset)
}

/// `<A, nu(B) | R, X, Y>`.
pub fn build_extension_presentation(spec: &ExtensionSpec) -> Presentation {
    let h = spec.h();
    let k = spec.k();
    let nh = h.num_generators();
    let mut generators: Vec<String> = h.generators().to_vec();
    generators.extend(k.generators().iter().cloned());
    let mut relators: Vec<Word> = h.relators().to_vec();
    match spec.flavor() {
        Flavor::FiniteQuotient { orders, lifts, .. } => {
            for (b, o) in orders.iter().enumerate() {
                let mut x = Word::from_letters(vec![nu(b, nh)]).power(o.m);
                x = x.concat(&o.w.inverse());
                relators.push(x);
            }
            for l in lifts {
                relators.push(l.relator.shifted(nh).concat(&l.w.inverse()));
            }
        }
        Flavor::Split => {
            relators.extend(k.relators().iter().map(|s| s.shifted(nh)));
        }
    }
    for (b, row) in spec.conjugation().iter().enumerate() {
        for (a, w) in row.iter().enumerate() {
            let y = Word::from_letters(vec![nu(b, nh), Letter::pos(a), nu(b, nh).inverted()]).concat(&w.inverse());
            relators.push(y);
        }
    }
    Presentation::new(generators, relators).expect("extension presentation is well formed")
}

fn check_h_character(spec: &ExtensionSpec, phi: &Character) -> Result<(), ExtensionError> {
    if phi.values().len() != spec.h().num_generators() {
        return Err(SphereError::DimensionMismatch {
            expected: spec.h().num_generators(),
            found: phi.values().len(),
        }
        .into());
    }
    Ok(())
}

fn validate_on(g: &Arc<Presentation>, values: Vec<Q>) -> Result<Character, ExtensionError> {
    make_character(g, values).map_err(|e| match e {
        SphereError::RelatorViolation(i) => ExtensionError::ValidationFailure(i),
        other => other.into(),
    })
}

/// The extension of a fixed character of `H` to `G` (finite flavor):
/// `phi(nu(b)) = phi(w_b) / m_b`.
pub fn extend_character_finite(spec: &ExtensionSpec, phi: &Character) -> Result<Character, ExtensionError> {
    let Flavor::FiniteQuotient { orders, .. } = spec.flavor() else {
        return Err(ExtensionError::WrongFlavor("extension needs a finite quotient".into()));
    };
    check_h_character(spec, phi)?;
    let basis = HomBasis::new(spec.h());
    if !fix_subspace(spec).contains(&phi.hom_coords(&basis)) {
        return Err(ExtensionError::NotFixed);
    }
    let mut values = phi.values().to_vec();
    for o in orders {
        values.push(phi.evaluate(&o.w) / exact::q(i64::from(o.m)));
    }
    validate_on(&Arc::new(build_extension_presentation(spec)), values)
}

/// Restriction of a character of `G` to `H`.
pub fn restrict_to_h(spec: &ExtensionSpec, chi: &Character) -> Result<Character, ExtensionError> {
    let nh = spec.h().num_generators();
    Ok(make_character(spec.h(), chi.values()[..nh].to_vec())?)
}

/// The identification `Hom(G, R) = Fix x Hom(K, R)` of a split extension.
#[derive(Debug, Clone)]
pub struct SplitHom {
    pub fix: RationalSubspace,
    pub hom_k: AbelianizationData,
    h_basis: HomBasis,
    k_basis: HomBasis,
    g: Arc<Presentation>,
}

pub fn hom_space_split(spec: &ExtensionSpec) -> Result<SplitHom, ExtensionError> {
    if spec.is_finite() {
        return Err(ExtensionError::WrongFlavor("split identification needs a split spec".into()));
    }
    Ok(SplitHom {
        fix: fix_subspace(spec),
        hom_k: abelianization(spec.k()),
        h_basis: HomBasis::new(spec.h()),
        k_basis: HomBasis::new(spec.k()),
        g: Arc::new(build_extension_presentation(spec)),
    })
}

impl SplitHom {
    pub fn dim(&self) -> usize {
        self.fix.dim() + self.k_basis.dim()
    }

    pub fn group(&self) -> &Arc<Presentation> {
        &self.g
    }

    pub fn k_basis(&self) -> &HomBasis {
        &self.k_basis
    }

    /// `(alpha, beta) -> alpha^ + beta . pi`, with `alpha` in Hom(H)
    /// coordinates and `beta` in Hom(K) coordinates.
    pub fn assemble(&self, alpha: &[Q], beta: &[Q]) -> Result<Character, ExtensionError> {
        if alpha.len() != self.h_basis.dim() || beta.len() != self.k_basis.dim() {
            return Err(SphereError::DimensionMismatch {
                expected: self.h_basis.dim() + self.k_basis.dim(),
                found: alpha.len() + beta.len(),
            }
            .into());
        }
        if !self.fix.contains(alpha) {
            return Err(ExtensionError::NotFixed);
        }
        let mut values = self.h_basis.values(alpha);
        values.extend(self.k_basis.values(beta));
        validate_on(&self.g, values)
    }

    /// `phi -> (phi . i, phi . sigma)` in the same coordinates.
    pub fn project(&self, chi: &Character) -> (Vec<Q>, Vec<Q>) {
        let nh = self.h_basis.num_generators();
        (
            self.h_basis.coords(&chi.values()[..nh]),
            self.k_basis.coords(&chi.values()[nh..]),
        )
    }
}

/// Whether a second transversal's conjugation table gives the same fixed
/// subspace.
pub fn transversal_invariance_check(
    spec: &ExtensionSpec,
    alternate: &BTreeMap<String, String>,
) -> Result<bool, ExtensionError> {
    let table = parse_conjugation(spec.h(), spec.k(), alternate)?;
    let actions = compute_actions(spec.h(), spec.k(), &table)?;
    let dim = HomBasis::new(spec.h()).dim();
    Ok(fix_of(dim, &actions) == fix_subspace(spec))
}
