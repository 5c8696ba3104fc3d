use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Constraint, RationalRay, RationalSubspace, SphereError};

/// Symbolic subset of a character sphere `S^{dim-1}`.
///
/// Every node knows its ambient dimension. Membership of rational rays is
/// exact; see [`SphereSet::contains`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase", deny_unknown_fields)]
pub enum SphereSet {
    Empty {
        dim: usize,
    },
    Full {
        dim: usize,
    },
    Rays {
        dim: usize,
        rays: BTreeSet<RationalRay>,
    },
    /// `{x != 0 : every constraint holds}`.
    Cone {
        dim: usize,
        constraints: Vec<Constraint>,
    },
    Not {
        set: Box<SphereSet>,
    },
    And {
        dim: usize,
        sets: Vec<SphereSet>,
    },
    Or {
        dim: usize,
        sets: Vec<SphereSet>,
    },
    /// Spherical join over the direct sum of the two ambient spaces.
    Join {
        left: Box<SphereSet>,
        right: Box<SphereSet>,
    },
    /// Trace of `set` on a subspace, in the subspace's intrinsic coordinates.
    Restrict {
        set: Box<SphereSet>,
        subspace: RationalSubspace,
    },
}

fn check_dim(expected: usize, found: usize) -> Result<(), SphereError> {
    if expected == found {
        Ok(())
    } else {
        Err(SphereError::DimensionMismatch { expected, found })
    }
}

impl SphereSet {
    pub fn empty(dim: usize) -> Self {
        SphereSet::Empty { dim }
    }

    pub fn full(dim: usize) -> Self {
        SphereSet::Full { dim }
    }

    pub fn rays<I: IntoIterator<Item = RationalRay>>(dim: usize, rays: I) -> Result<Self, SphereError> {
        let rays: BTreeSet<RationalRay> = rays.into_iter().collect();
        for r in &rays {
            check_dim(dim, r.dim())?;
        }
        Ok(SphereSet::Rays { dim, rays })
    }

    pub fn cone(dim: usize, constraints: Vec<Constraint>) -> Result<Self, SphereError> {
        for c in &constraints {
            check_dim(dim, c.dim())?;
        }
        Ok(SphereSet::Cone { dim, constraints })
    }

    pub fn complement(set: SphereSet) -> Self {
        SphereSet::Not { set: Box::new(set) }
    }

    pub fn and(dim: usize, sets: Vec<SphereSet>) -> Result<Self, SphereError> {
        for s in &sets {
            check_dim(dim, s.dim())?;
        }
        Ok(SphereSet::And { dim, sets })
    }

    pub fn or(dim: usize, sets: Vec<SphereSet>) -> Result<Self, SphereError> {
        for s in &sets {
            check_dim(dim, s.dim())?;
        }
        Ok(SphereSet::Or { dim, sets })
    }

    pub fn join(left: SphereSet, right: SphereSet) -> Self {
        SphereSet::Join {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn restrict(set: SphereSet, subspace: RationalSubspace) -> Result<Self, SphereError> {
        check_dim(subspace.ambient(), set.dim())?;
        Ok(SphereSet::Restrict {
            set: Box::new(set),
            subspace,
        })
    }

    /// Ambient dimension (of `Hom`, so the sphere is `S^{dim-1}`).
    pub fn dim(&self) -> usize {
        match self {
            SphereSet::Empty { dim }
            | SphereSet::Full { dim }
            | SphereSet::Rays { dim, .. }
            | SphereSet::Cone { dim, .. }
            | SphereSet::And { dim, .. }
            | SphereSet::Or { dim, .. } => *dim,
            SphereSet::Not { set } => set.dim(),
            SphereSet::Join { left, right } => left.dim() + right.dim(),
            SphereSet::Restrict { subspace, .. } => subspace.dim(),
        }
    }

    /// Check dimension consistency of the whole tree (used after parsing).
    pub fn validate(&self) -> Result<(), SphereError> {
        match self {
            SphereSet::Empty { .. } | SphereSet::Full { .. } => Ok(()),
            SphereSet::Rays { dim, rays } => rays.iter().try_for_each(|r| check_dim(*dim, r.dim())),
            SphereSet::Cone { dim, constraints } => {
                constraints.iter().try_for_each(|c| check_dim(*dim, c.dim()))
            }
            SphereSet::Not { set } => set.validate(),
            SphereSet::And { dim, sets } | SphereSet::Or { dim, sets } => sets.iter().try_for_each(|s| {
                check_dim(*dim, s.dim())?;
                s.validate()
            }),
            SphereSet::Join { left, right } => {
                left.validate()?;
                right.validate()
            }
            SphereSet::Restrict { set, subspace } => {
                check_dim(subspace.ambient(), set.dim())?;
                set.validate()
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SphereError> {
        let s: SphereSet =
            serde_json::from_str(text).map_err(|e| SphereError::Invalid(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    /// Exact membership test.
    pub fn contains(&self, r: &RationalRay) -> Result<bool, SphereError> {
        check_dim(self.dim(), r.dim())?;
        Ok(self.member(r))
    }

    fn member(&self, r: &RationalRay) -> bool {
        match self {
            SphereSet::Empty { .. } => false,
            SphereSet::Full { .. } => true,
            SphereSet::Rays { rays, .. } => rays.contains(r),
            SphereSet::Cone { constraints, .. } => {
                let x = r.to_q();
                constraints.iter().all(|c| c.holds(&x))
            }
            SphereSet::Not { set } => !set.member(r),
            SphereSet::And { sets, .. } => sets.iter().all(|s| s.member(r)),
            SphereSet::Or { sets, .. } => sets.iter().any(|s| s.member(r)),
            SphereSet::Join { left, right } => match r.split(left.dim()) {
                (Some(u), None) => left.member(&u),
                (None, Some(v)) => right.member(&v),
                (Some(u), Some(v)) => left.member(&u) && right.member(&v),
                (None, None) => unreachable!("rays are nonzero"),
            },
            SphereSet::Restrict { set, subspace } => {
                let x = subspace.embed(&r.to_q());
                let ambient = RationalRay::from_rational(&x).expect("basis is independent");
                set.member(&ambient)
            }
        }
    }

    /// Syntactic sufficient condition for being closed in the sphere.
    pub fn is_closed(&self) -> bool {
        match self {
            SphereSet::Empty { .. } | SphereSet::Full { .. } | SphereSet::Rays { .. } => true,
            SphereSet::Cone { dim, constraints } => *dim <= 1 || constraints.iter().all(|c| !c.is_strict()),
            SphereSet::Not { set } => set.is_open(),
            SphereSet::And { sets, .. } | SphereSet::Or { sets, .. } => sets.iter().all(SphereSet::is_closed),
            SphereSet::Join { left, right } => left.is_closed() && right.is_closed(),
            SphereSet::Restrict { set, .. } => set.is_closed(),
        }
    }

    /// Syntactic sufficient condition for being open in the sphere.
    pub fn is_open(&self) -> bool {
        match self {
            SphereSet::Empty { .. } | SphereSet::Full { .. } => true,
            SphereSet::Rays { dim, rays } => *dim <= 1 || rays.is_empty(),
            SphereSet::Cone { dim, constraints } => {
                *dim <= 1 || constraints.iter().all(Constraint::is_strict)
            }
            SphereSet::Not { set } => set.is_closed(),
            SphereSet::And { sets, .. } | SphereSet::Or { sets, .. } => sets.iter().all(SphereSet::is_open),
            SphereSet::Join { .. } => false,
            SphereSet::Restrict { set, .. } => set.is_open(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsphere::Relation;

    fn ray(v: &[i64]) -> RationalRay {
        RationalRay::new(v)
    }

    pub(crate) fn thompson_sigma() -> SphereSet {
        SphereSet::complement(SphereSet::rays(2, [ray(&[1, 0]), ray(&[-1, -1])]).unwrap())
    }

    #[test]
    fn basic_membership() {
        let s = SphereSet::rays(2, [ray(&[0, 1])]).unwrap();
        assert!(s.contains(&ray(&[0, 1])).unwrap());
        assert!(!s.contains(&ray(&[0, -1])).unwrap());
        assert!(matches!(
            s.contains(&ray(&[1])),
            Err(SphereError::DimensionMismatch { .. })
        ));
        let t = thompson_sigma();
        assert!(t.contains(&ray(&[0, 1])).unwrap());
        assert!(!t.contains(&ray(&[2, 0])).unwrap());
        assert!(!t.contains(&ray(&[-3, -3])).unwrap());
    }

    #[test]
    fn ex52_omega_via_joins() {
        // coordinates (b, d, x, y)
        let plus = SphereSet::rays(1, [ray(&[1])]).unwrap();
        let omega = SphereSet::join(plus.clone(), SphereSet::join(plus, SphereSet::empty(2)));
        assert_eq!(omega.dim(), 4);
        assert!(omega.contains(&ray(&[1, 1, 0, 0])).unwrap());
        assert!(omega.contains(&ray(&[1, 0, 0, 0])).unwrap());
        assert!(!omega.contains(&ray(&[1, 1, 1, 0])).unwrap());
        assert!(!omega.contains(&ray(&[1, -1, 0, 0])).unwrap());
    }

    #[test]
    fn join_with_empty_embeds() {
        let s = SphereSet::cone(2, vec![Constraint::from_i64(&[1, 0], Relation::Gt)]).unwrap();
        let j = SphereSet::join(s, SphereSet::empty(1));
        assert!(j.contains(&ray(&[1, 5, 0])).unwrap());
        assert!(!j.contains(&ray(&[-1, 5, 0])).unwrap());
        assert!(!j.contains(&ray(&[1, 5, 1])).unwrap());
        assert!(!j.contains(&ray(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn circle_as_join_of_zeros() {
        let s0 = SphereSet::full(1);
        let j = SphereSet::join(s0.clone(), s0);
        for v in [[1, 0], [1, 1], [0, 1], [-1, 1], [-1, 0], [-1, -1], [0, -1], [1, -1]] {
            assert!(j.contains(&ray(&v)).unwrap());
        }
    }

    #[test]
    fn restrict_to_line() {
        let t = thompson_sigma();
        let w = RationalSubspace::with_basis(2, &[vec![crate::exact::q(0), crate::exact::q(1)]]).unwrap();
        let r = SphereSet::restrict(t, w).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.contains(&ray(&[1])).unwrap());
        assert!(r.contains(&ray(&[-1])).unwrap());
    }

    #[test]
    fn topology_flags() {
        assert!(thompson_sigma().is_open());
        assert!(!thompson_sigma().is_closed());
        let closed = SphereSet::cone(2, vec![Constraint::from_i64(&[-1, 0], Relation::Ge)]).unwrap();
        assert!(closed.is_closed());
    }

    #[test]
    fn serde_roundtrip_and_tags() {
        let s = SphereSet::and(
            2,
            vec![
                thompson_sigma(),
                SphereSet::cone(2, vec![Constraint::from_i64(&[1, -2], Relation::Gt)]).unwrap(),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""node":"and""#));
        assert!(text.contains(r#""node":"not""#));
        assert!(text.contains(r#""rel":">""#));
        let back = SphereSet::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn parse_rejects_inconsistent_dims() {
        let bad = r#"{"node":"or","dim":2,"sets":[{"node":"full","dim":3}]}"#;
        assert!(SphereSet::from_json(bad).is_err());
    }
}
