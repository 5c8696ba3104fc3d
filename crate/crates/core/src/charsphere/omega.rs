use num_traits::{One, Zero};

use super::normal::complement_cells;
use super::{is_empty, project_cone, Constraint, RationalSubspace, Relation, SphereError, SphereSet};
use crate::exact::Q;

/// The set of `e` whose open pi/2-neighborhood misses the complement of `sigma`:
/// `{e : <f, e> <= 0 for every f outside sigma}`.
///
/// Each cell of the complement is replaced by its closure `{A f >= 0, E f = 0}`,
/// and the condition becomes `-e in cone(A) + span(E)`, which is compiled to
/// constraints on `e` by eliminating the multipliers. The result is closed.
pub fn omega_from_sigma(sigma: &SphereSet) -> Result<SphereSet, SphereError> {
    let n = sigma.dim();
    let comp = complement_cells(sigma)?;
    if comp.is_empty() {
        return Ok(SphereSet::full(n));
    }
    let mut all = Vec::new();
    for cell in &comp {
        if !cell.groups.is_empty() {
            return Err(SphereError::UnsupportedForm(
                "complement is not a union of rays and polyhedral cones".into(),
            ));
        }
        let ineqs: Vec<&Constraint> = cell.constraints.iter().filter(|c| c.rel != Relation::Eq).collect();
        let eqs: Vec<&Constraint> = cell.constraints.iter().filter(|c| c.rel == Relation::Eq).collect();
        let total = n + ineqs.len() + eqs.len();
        // variables: e (n), lambda (ineqs), mu (eqs)
        let mut eq_rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = vec![Q::zero(); total];
            row[i] = Q::one();
            for (j, c) in ineqs.iter().chain(eqs.iter()).enumerate() {
                row[n + j] = c.coeffs[i].clone();
            }
            eq_rows.push(row);
        }
        let lambda_rows: Vec<Vec<Q>> = (0..ineqs.len())
            .map(|j| {
                let mut row = vec![Q::zero(); total];
                row[n + j] = Q::one();
                row
            })
            .collect();
        all.extend(project_cone(n, total, &lambda_rows, &eq_rows));
    }
    let mut constraints: Vec<Constraint> = all
        .iter()
        .filter(|c| c.coeffs.iter().any(|x| !x.is_zero()))
        .map(Constraint::normalized)
        .collect();
    constraints.sort();
    constraints.dedup();
    let cone = SphereSet::cone(n, constraints)?;
    if is_empty(&cone)? {
        return Ok(SphereSet::empty(n));
    }
    Ok(cone)
}

/// `S1 * S2` over the direct sum of the two ambient spaces.
pub fn spherical_join(s1: SphereSet, s2: SphereSet) -> SphereSet {
    SphereSet::join(s1, s2)
}

/// Trace of `s` on the subspace `w`, in `w`'s intrinsic coordinates. The
/// sphere of the zero space is empty, so a zero `w` always gives `Empty`.
pub fn restrict_to_subspace(s: SphereSet, w: &RationalSubspace) -> Result<SphereSet, SphereError> {
    if s.dim() != w.ambient() {
        return Err(SphereError::DimensionMismatch {
            expected: w.ambient(),
            found: s.dim(),
        });
    }
    match s {
        _ if w.dim() == 0 => Ok(SphereSet::empty(0)),
        SphereSet::Full { .. } => Ok(SphereSet::full(w.dim())),
        SphereSet::Empty { .. } => Ok(SphereSet::empty(w.dim())),
        other => SphereSet::restrict(other, w.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsphere::{count_rational_points, equivalent, PointCount, RationalRay};
    use crate::exact::{dot_q, q};
    use num_traits::Signed;
    use proptest::prelude::*;

    fn ray(v: &[i64]) -> RationalRay {
        RationalRay::new(v)
    }

    fn thompson_sigma() -> SphereSet {
        SphereSet::complement(SphereSet::rays(2, [ray(&[1, 0]), ray(&[-1, -1])]).unwrap())
    }

    #[test]
    fn zero_subspace_is_empty() {
        let w = RationalSubspace::kernel(2, &[vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert_eq!(restrict_to_subspace(SphereSet::full(2), &w).unwrap(), SphereSet::empty(0));
        assert_eq!(restrict_to_subspace(thompson_sigma(), &w).unwrap(), SphereSet::empty(0));
    }

    #[test]
    fn full_and_empty() {
        assert_eq!(omega_from_sigma(&SphereSet::full(3)).unwrap(), SphereSet::full(3));
        assert_eq!(omega_from_sigma(&SphereSet::empty(2)).unwrap(), SphereSet::empty(2));
    }

    #[test]
    fn thompson_arc() {
        let omega = omega_from_sigma(&thompson_sigma()).unwrap();
        assert!(omega.is_closed());
        assert!(omega.contains(&ray(&[0, 1])).unwrap());
        assert!(omega.contains(&ray(&[-1, 1])).unwrap());
        assert!(!omega.contains(&ray(&[0, -1])).unwrap());
        assert!(!omega.contains(&ray(&[1, 1])).unwrap());
        let expected = SphereSet::cone(
            2,
            vec![
                Constraint::from_i64(&[-1, 0], Relation::Ge),
                Constraint::from_i64(&[1, 1], Relation::Ge),
            ],
        )
        .unwrap();
        assert!(equivalent(&omega, &expected).unwrap());
        // Omega lies in the half-plane <(1,0), e> <= 0
        let probe = SphereSet::and(
            2,
            vec![omega, SphereSet::cone(2, vec![Constraint::from_i64(&[1, 0], Relation::Gt)]).unwrap()],
        )
        .unwrap();
        assert!(is_empty(&probe).unwrap());
    }

    #[test]
    fn poles_give_equator() {
        let sigma = SphereSet::complement(SphereSet::rays(2, [ray(&[0, 1]), ray(&[0, -1])]).unwrap());
        let omega = omega_from_sigma(&sigma).unwrap();
        assert_eq!(
            count_rational_points(&omega),
            PointCount::TwoAntipodal(ray(&[-1, 0]), ray(&[1, 0]))
        );
    }

    #[test]
    fn cone_complement() {
        // complement of the closed arc around the south pole
        let sigma = SphereSet::complement(
            SphereSet::cone(
                2,
                vec![
                    Constraint::from_i64(&[0, -1], Relation::Ge),
                    Constraint::from_i64(&[1, -1], Relation::Ge),
                ],
            )
            .unwrap(),
        );
        let omega = omega_from_sigma(&sigma).unwrap();
        assert!(omega.contains(&ray(&[0, 1])).unwrap());
        assert!(omega.contains(&ray(&[-1, 1])).unwrap());
        assert!(!omega.contains(&ray(&[1, 1])).unwrap());
        assert!(!omega.contains(&ray(&[-1, 0])).unwrap());
    }

    #[test]
    fn whole_complement_gives_empty() {
        assert_eq!(
            omega_from_sigma(&SphereSet::rays(1, [ray(&[1])]).unwrap()).unwrap(),
            SphereSet::cone(1, vec![Constraint::from_i64(&[1], Relation::Ge)]).unwrap()
        );
        let sigma = SphereSet::rays(2, [ray(&[1, 0])]).unwrap();
        assert_eq!(omega_from_sigma(&sigma).unwrap(), SphereSet::empty(2));
    }

    #[test]
    fn closed_half_circle_from_join() {
        let j = SphereSet::join(SphereSet::rays(1, [ray(&[1])]).unwrap(), SphereSet::full(1));
        let omega = omega_from_sigma(&j).unwrap();
        assert_eq!(count_rational_points(&omega), PointCount::One(ray(&[1, 0])));
    }

    #[test]
    fn restrictions() {
        let w = RationalSubspace::with_basis(4, &[vec![q(1), q(1), q(0), q(0)], vec![q(0), q(0), q(1), q(1)]])
            .unwrap();
        assert_eq!(restrict_to_subspace(SphereSet::full(4), &w).unwrap(), SphereSet::full(2));
        let omega = omega_from_sigma(&thompson_sigma()).unwrap();
        let pole = RationalSubspace::with_basis(2, &[vec![q(0), q(1)]]).unwrap();
        let r = restrict_to_subspace(omega, &pole).unwrap();
        assert_eq!(count_rational_points(&r), PointCount::One(ray(&[1])));
        assert!(restrict_to_subspace(SphereSet::full(3), &pole).is_err());
    }

    fn arb_ray(dim: usize) -> impl Strategy<Value = RationalRay> {
        proptest::collection::vec(-3i64..=3, dim)
            .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
            .prop_map(|v| RationalRay::new(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn finite_complement_matches_direct(bad in proptest::collection::vec(arb_ray(3), 1..4), e in proptest::collection::vec(arb_ray(3), 20)) {
            let sigma = SphereSet::complement(SphereSet::rays(3, bad.clone()).unwrap());
            let omega = omega_from_sigma(&sigma).unwrap();
            prop_assert!(omega.is_closed());
            for r in &e {
                let direct = bad.iter().all(|f| !dot_q(&f.to_q(), &r.to_q()).is_positive());
                prop_assert_eq!(omega.contains(r).unwrap(), direct);
            }
        }
    }
}
