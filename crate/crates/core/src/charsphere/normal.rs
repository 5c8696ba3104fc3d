//! Disjunctive normal form for [`SphereSet`] expressions.
//!
//! A cell is a homogeneous system of constraints together with a list of
//! groups of linear forms, each of which must not vanish identically at the
//! point. The implicit requirement `x != 0` is always present.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{lp_feasible, Constraint, RationalRay, Relation, SphereError, SphereSet};
use crate::exact::{self, Q};
use crate::linalg;

/// Upper bound on the number of cells kept during normalization.
pub const MAX_CELLS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub constraints: Vec<Constraint>,
    pub groups: Vec<Vec<Vec<Q>>>,
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut e = vec![Q::zero(); dim];
    e[i] = Q::one();
    e
}

fn pad(v: &[Q], before: usize, after: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); before];
    out.extend_from_slice(v);
    out.extend(std::iter::repeat_n(Q::zero(), after));
    out
}

impl Cell {
    fn full() -> Self {
        Cell {
            constraints: Vec::new(),
            groups: Vec::new(),
        }
    }

    fn tidy(mut self) -> Self {
        self.constraints = self
            .constraints
            .iter()
            .filter(|c| c.coeffs.iter().any(|x| !x.is_zero()) || c.rel != Relation::Ge)
            .map(Constraint::normalized)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        self.groups.sort();
        self.groups.dedup();
        self
    }

    fn meet(&self, other: &Cell) -> Cell {
        let mut c = self.clone();
        c.constraints.extend(other.constraints.iter().cloned());
        c.groups.extend(other.groups.iter().cloned());
        c.tidy()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        x.iter().any(|v| !v.is_zero())
            && self.constraints.iter().all(|c| c.holds(x))
            && self
                .groups
                .iter()
                .all(|g| g.iter().any(|f| !exact::dot_q(f, x).is_zero()))
    }

    /// A point of the cell, if there is one.
    pub fn witness(&self, dim: usize) -> Option<Vec<Q>> {
        // A zero form is always false; a cell with a contradictory constant
        // constraint is empty.
        if self
            .constraints
            .iter()
            .any(|c| c.rel == Relation::Gt && c.coeffs.iter().all(Zero::is_zero))
        {
            return None;
        }
        let base = lp_feasible(dim, &self.constraints)?;
        if self.groups.is_empty() {
            return Some(base);
        }
        let mut parts = vec![base];
        for g in &self.groups {
            let w = g.iter().find_map(|f| {
                [Q::one(), -Q::one()].into_iter().find_map(|s| {
                    let mut cs = self.constraints.clone();
                    cs.push(Constraint::gt(f.iter().map(|x| x * &s).collect()));
                    lp_feasible(dim, &cs)
                })
            })?;
            parts.push(w);
        }
        // The feasible region is a convex cone, so positive combinations stay
        // inside; a generic weight avoids the finitely many bad values.
        let mut k = Q::one();
        loop {
            let mut x = vec![Q::zero(); dim];
            let mut weight = Q::one();
            for p in &parts {
                for (xi, pi) in x.iter_mut().zip(p) {
                    *xi += &weight * pi;
                }
                weight *= &k;
            }
            if self.contains(&x) {
                return Some(x);
            }
            k += Q::one();
        }
    }

    fn negation(&self, dim: usize) -> Vec<Cell> {
        let mut out = Vec::new();
        for c in &self.constraints {
            let neg = c.negated_coeffs();
            match c.rel {
                Relation::Ge => out.push(vec![Constraint::gt(neg)]),
                Relation::Gt => out.push(vec![Constraint::ge(neg)]),
                Relation::Eq => {
                    out.push(vec![Constraint::gt(c.coeffs.clone())]);
                    out.push(vec![Constraint::gt(neg)]);
                }
            }
        }
        for g in &self.groups {
            out.push(g.iter().map(|f| Constraint::eq(f.clone())).collect());
        }
        out.into_iter()
            .map(|constraints| Cell {
                constraints,
                groups: Vec::new(),
            }
            .tidy())
            .filter(|c| c.witness(dim).is_some())
            .collect()
    }

    fn lift(&self, before: usize, after: usize) -> Cell {
        Cell {
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint::new(pad(&c.coeffs, before, after), c.rel))
                .collect(),
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|f| pad(f, before, after)).collect())
                .collect(),
        }
    }

    fn substitute(&self, basis: &[Vec<Q>]) -> Cell {
        let map = |f: &[Q]| linalg::mat_vec(basis, f);
        Cell {
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint::new(map(&c.coeffs), c.rel))
                .collect(),
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|f| map(f)).collect())
                .collect(),
        }
        .tidy()
    }
}

fn check_size(cells: &[Cell]) -> Result<(), SphereError> {
    if cells.len() > MAX_CELLS {
        Err(SphereError::TooComplex(MAX_CELLS))
    } else {
        Ok(())
    }
}

fn intersect(dim: usize, a: Vec<Cell>, b: Vec<Cell>) -> Result<Vec<Cell>, SphereError> {
    let mut out = BTreeSet::new();
    for x in &a {
        for y in &b {
            let c = x.meet(y);
            if c.witness(dim).is_some() {
                out.insert(c);
            }
        }
        if out.len() > MAX_CELLS {
            return Err(SphereError::TooComplex(MAX_CELLS));
        }
    }
    Ok(out.into_iter().collect())
}

fn negate_cells(dim: usize, cells: Vec<Cell>) -> Result<Vec<Cell>, SphereError> {
    let mut acc = vec![Cell::full()];
    for c in cells {
        acc = intersect(dim, acc, c.negation(dim))?;
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

fn ray_cell(r: &RationalRay) -> Cell {
    let v = r.to_q();
    let (perp, _) = linalg::nullspace(std::slice::from_ref(&v), v.len());
    let mut constraints: Vec<Constraint> = perp.into_iter().map(Constraint::eq).collect();
    constraints.push(Constraint::gt(v));
    Cell {
        constraints,
        groups: Vec::new(),
    }
    .tidy()
}

/// Feasible cells whose union is `s`.
pub fn cells(s: &SphereSet) -> Result<Vec<Cell>, SphereError> {
    let dim = s.dim();
    let out = match s {
        SphereSet::Empty { .. } => Vec::new(),
        SphereSet::Full { .. } => {
            if dim == 0 {
                Vec::new()
            } else {
                vec![Cell::full()]
            }
        }
        SphereSet::Rays { rays, .. } => rays.iter().map(ray_cell).collect(),
        SphereSet::Cone { constraints, .. } => {
            let c = Cell {
                constraints: constraints.clone(),
                groups: Vec::new(),
            }
            .tidy();
            if c.witness(dim).is_some() {
                vec![c]
            } else {
                Vec::new()
            }
        }
        SphereSet::Not { set } => complement_cells(set)?,
        SphereSet::And { sets, .. } => {
            let mut acc = if dim == 0 { Vec::new() } else { vec![Cell::full()] };
            for child in sets {
                if acc.is_empty() {
                    break;
                }
                acc = intersect(dim, acc, cells(child)?)?;
            }
            acc
        }
        SphereSet::Or { sets, .. } => {
            let mut acc = BTreeSet::new();
            for child in sets {
                acc.extend(cells(child)?);
                if acc.len() > MAX_CELLS {
                    return Err(SphereError::TooComplex(MAX_CELLS));
                }
            }
            acc.into_iter().collect()
        }
        SphereSet::Join { left, right } => {
            let (a, b) = (left.dim(), right.dim());
            let left_cells = cells(left)?;
            let right_cells = cells(right)?;
            let u_block: Vec<Vec<Q>> = (0..a).map(|i| unit(dim, i)).collect();
            let v_block: Vec<Vec<Q>> = (a..dim).map(|i| unit(dim, i)).collect();
            let mut out = BTreeSet::new();
            for l in &left_cells {
                let mut c = l.lift(0, b);
                c.constraints.extend(v_block.iter().cloned().map(Constraint::eq));
                out.insert(c.tidy());
            }
            for r in &right_cells {
                let mut c = r.lift(a, 0);
                c.constraints.extend(u_block.iter().cloned().map(Constraint::eq));
                out.insert(c.tidy());
            }
            for l in &left_cells {
                for r in &right_cells {
                    let mut c = l.lift(0, b).meet(&r.lift(a, 0));
                    c.groups.push(u_block.clone());
                    c.groups.push(v_block.clone());
                    out.insert(c.tidy());
                }
                if out.len() > MAX_CELLS {
                    return Err(SphereError::TooComplex(MAX_CELLS));
                }
            }
            out.into_iter().filter(|c| c.witness(dim).is_some()).collect()
        }
        SphereSet::Restrict { set, subspace } => {
            let basis = subspace.basis_q();
            cells(set)?
                .iter()
                .map(|c| c.substitute(&basis))
                .filter(|c| c.witness(dim).is_some())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        }
    };
    check_size(&out)?;
    Ok(out)
}

/// Feasible cells whose union is the complement of `s` in the sphere.
pub fn complement_cells(s: &SphereSet) -> Result<Vec<Cell>, SphereError> {
    let dim = s.dim();
    if dim == 0 {
        return Ok(Vec::new());
    }
    match s {
        SphereSet::Not { set } => cells(set),
        SphereSet::And { sets, .. } => {
            let mut acc = BTreeSet::new();
            for child in sets {
                acc.extend(complement_cells(child)?);
            }
            let out: Vec<Cell> = acc.into_iter().collect();
            check_size(&out)?;
            Ok(out)
        }
        _ => negate_cells(dim, cells(s)?),
    }
}

pub fn is_empty(s: &SphereSet) -> Result<bool, SphereError> {
    Ok(cells(s)?.is_empty())
}

/// Exact set equality.
pub fn equivalent(a: &SphereSet, b: &SphereSet) -> Result<bool, SphereError> {
    if a.dim() != b.dim() {
        return Err(SphereError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let dim = a.dim();
    let a_minus_b = SphereSet::And {
        dim,
        sets: vec![a.clone(), SphereSet::complement(b.clone())],
    };
    let b_minus_a = SphereSet::And {
        dim,
        sets: vec![b.clone(), SphereSet::complement(a.clone())],
    };
    Ok(is_empty(&a_minus_b)? && is_empty(&b_minus_a)?)
}

/// `a` is a subset of `b`.
pub fn subset(a: &SphereSet, b: &SphereSet) -> Result<bool, SphereError> {
    let dim = a.dim();
    is_empty(&SphereSet::And {
        dim,
        sets: vec![a.clone(), SphereSet::complement(b.clone())],
    })
}

/// Number of rational points of a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "count", content = "rays", rename_all = "snake_case")]
pub enum PointCount {
    Zero,
    One(RationalRay),
    TwoAntipodal(RationalRay, RationalRay),
    /// Finitely many rays, but not one of the shapes above.
    Several(Vec<RationalRay>),
    Infinite,
    Unknown,
}

pub fn count_rational_points(s: &SphereSet) -> PointCount {
    let Ok(cs) = cells(s) else {
        return PointCount::Unknown;
    };
    let dim = s.dim();
    let mut rays = BTreeSet::new();
    for c in &cs {
        let Some(w) = c.witness(dim) else { continue };
        // Does the cell leave the line through w?
        let (perp, _) = linalg::nullspace(std::slice::from_ref(&w), dim);
        let mut wider = c.clone();
        if !perp.is_empty() {
            wider.groups.push(perp);
            if wider.witness(dim).is_some() {
                return PointCount::Infinite;
            }
        }
        for x in [w.clone(), w.iter().map(|v| -v).collect::<Vec<_>>()] {
            if c.contains(&x) {
                rays.insert(RationalRay::from_rational(&x).expect("witness is nonzero"));
            }
        }
    }
    let rays: Vec<RationalRay> = rays.into_iter().collect();
    match rays.len() {
        0 => PointCount::Zero,
        1 => PointCount::One(rays[0].clone()),
        2 if rays[0].antipode() == rays[1] => {
            PointCount::TwoAntipodal(rays[0].clone(), rays[1].clone())
        }
        _ => PointCount::Several(rays),
    }
}

/// All rays of a set, when it is finite.
pub fn finite_rays(s: &SphereSet) -> Option<Vec<RationalRay>> {
    match count_rational_points(s) {
        PointCount::Zero => Some(Vec::new()),
        PointCount::One(r) => Some(vec![r]),
        PointCount::TwoAntipodal(a, b) => Some(vec![a, b]),
        PointCount::Several(v) => Some(v),
        PointCount::Infinite | PointCount::Unknown => None,
    }
}
