//! Exact feasibility of homogeneous linear systems by Fourier-Motzkin
//! elimination.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{self, Q};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

/// Homogeneous constraint `<coeffs, x> rel 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constraint {
    #[serde(rename = "c", with = "exact::q_vec")]
    pub coeffs: Vec<Q>,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, rel: Relation) -> Self {
        Constraint { coeffs, rel }
    }

    pub fn ge(coeffs: Vec<Q>) -> Self {
        Constraint::new(coeffs, Relation::Ge)
    }

    pub fn gt(coeffs: Vec<Q>) -> Self {
        Constraint::new(coeffs, Relation::Gt)
    }

    pub fn eq(coeffs: Vec<Q>) -> Self {
        Constraint::new(coeffs, Relation::Eq)
    }

    pub fn from_i64(coeffs: &[i64], rel: Relation) -> Self {
        Constraint::new(coeffs.iter().map(|&x| exact::q(x)).collect(), rel)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let v = exact::dot_q(&self.coeffs, x);
        match self.rel {
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
            Relation::Eq => v.is_zero(),
        }
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Relation::Gt
    }

    /// Same constraint with `>` relaxed to `>=`.
    pub fn closure(&self) -> Constraint {
        match self.rel {
            Relation::Gt => Constraint::ge(self.coeffs.clone()),
            _ => self.clone(),
        }
    }

    pub fn negated_coeffs(&self) -> Vec<Q> {
        self.coeffs.iter().map(|x| -x).collect()
    }

    /// Positive rescaling so the first nonzero coefficient has magnitude 1;
    /// equalities additionally get a positive leading coefficient.
    pub fn normalized(&self) -> Constraint {
        let Some(lead) = self.coeffs.iter().find(|x| !x.is_zero()) else {
            return self.clone();
        };
        let mut scale = Q::one() / lead.abs();
        if self.rel == Relation::Eq && lead.is_negative() {
            scale = -scale;
        }
        Constraint::new(self.coeffs.iter().map(|x| x * &scale).collect(), self.rel)
    }
}

/// Inequality `coeffs . x >= rhs`.
#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<Q>,
    rhs: Q,
}

/// Deduplicate rows with equal (normalized) coefficients, keeping the
/// tightest right-hand side. Returns `None` if a constant row is violated.
fn prune(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: BTreeMap<Vec<Q>, Q> = BTreeMap::new();
    for row in rows {
        let Some(lead) = row.coeffs.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else {
            if row.rhs.is_positive() {
                return None;
            }
            continue;
        };
        let coeffs: Vec<Q> = row.coeffs.iter().map(|x| x / &lead).collect();
        let rhs = &row.rhs / &lead;
        match best.get_mut(&coeffs) {
            Some(r) if *r >= rhs => {}
            Some(r) => *r = rhs,
            None => {
                best.insert(coeffs, rhs);
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(coeffs, rhs)| Row { coeffs, rhs })
            .collect(),
    )
}

fn eliminate(rows: &[Row], k: usize) -> Vec<Row> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for r in rows {
        if r.coeffs[k].is_positive() {
            pos.push(r);
        } else if r.coeffs[k].is_negative() {
            neg.push(r);
        } else {
            out.push(r.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let fp = -&n.coeffs[k];
            let fn_ = p.coeffs[k].clone();
            let coeffs = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(a, b)| a * &fp + b * &fn_)
                .collect();
            out.push(Row {
                coeffs,
                rhs: &p.rhs * &fp + &n.rhs * &fn_,
            });
        }
    }
    out
}

/// Next variable to eliminate: fewest generated rows, ties by index.
fn pick_variable(rows: &[Row], live: &[usize]) -> usize {
    *live
        .iter()
        .min_by_key(|&&k| {
            let p = rows.iter().filter(|r| r.coeffs[k].is_positive()).count();
            let n = rows.iter().filter(|r| r.coeffs[k].is_negative()).count();
            (p * n, k)
        })
        .expect("nonempty")
}

/// Solve `rows` (inequalities `>= rhs`) over `n` variables, returning a witness.
fn solve_inequalities(n: usize, rows: Vec<Row>) -> Option<Vec<Q>> {
    let mut systems = Vec::new();
    let mut current = prune(rows)?;
    let mut live: Vec<usize> = (0..n)
        .filter(|&k| current.iter().any(|r| !r.coeffs[k].is_zero()))
        .collect();
    while !live.is_empty() {
        let k = pick_variable(&current, &live);
        live.retain(|&x| x != k);
        let next = prune(eliminate(&current, k))?;
        systems.push((k, std::mem::replace(&mut current, next)));
    }
    let mut x = vec![Q::zero(); n];
    for (k, rows) in systems.iter().rev() {
        let mut lower: Option<Q> = None;
        let mut upper: Option<Q> = None;
        for r in rows {
            let c = &r.coeffs[*k];
            if c.is_zero() {
                continue;
            }
            let rest: Q = r
                .coeffs
                .iter()
                .zip(&x)
                .enumerate()
                .filter(|(j, _)| j != k)
                .map(|(_, (a, b))| a * b)
                .sum();
            let bound = (&r.rhs - rest) / c;
            if c.is_positive() {
                lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
            }
        }
        let zero = Q::zero();
        x[*k] = match (lower, upper) {
            (Some(l), Some(u)) => {
                debug_assert!(l <= u);
                if l <= zero && zero <= u {
                    zero
                } else if l > zero {
                    l
                } else {
                    u
                }
            }
            (Some(l), None) => l.max(zero),
            (None, Some(u)) => u.min(zero),
            (None, None) => zero,
        };
    }
    Some(x)
}

/// Solve inequalities subject to homogeneous equalities by substituting out
/// the pivot variables of the equalities.
fn solve_with_equalities(n: usize, ineqs: Vec<Row>, eqs: &[Vec<Q>]) -> Option<Vec<Q>> {
    if eqs.is_empty() {
        return solve_inequalities(n, ineqs);
    }
    let (rref, pivots) = linalg::rref(eqs, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    // x_p = -sum_f rref[p][f] x_f
    let expand = |row: &Row| -> Row {
        let coeffs = free
            .iter()
            .map(|&f| {
                let mut c = row.coeffs[f].clone();
                for (r, &p) in rref.iter().zip(&pivots) {
                    c -= &row.coeffs[p] * &r[f];
                }
                c
            })
            .collect();
        Row {
            coeffs,
            rhs: row.rhs.clone(),
        }
    };
    let reduced: Vec<Row> = ineqs.iter().map(expand).collect();
    let y = solve_inequalities(free.len(), reduced)?;
    let mut x = vec![Q::zero(); n];
    for (yi, &f) in y.iter().zip(&free) {
        x[f] = yi.clone();
    }
    for (r, &p) in rref.iter().zip(&pivots) {
        x[p] = -free.iter().map(|&f| &r[f] * &x[f]).sum::<Q>();
    }
    Some(x)
}

/// Exact feasibility of a homogeneous system together with `x != 0`.
///
/// Returns a witness satisfying every constraint exactly, or `None`.
pub fn lp_feasible(dim: usize, constraints: &[Constraint]) -> Option<Vec<Q>> {
    debug_assert!(constraints.iter().all(|c| c.dim() == dim));
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    let mut strict = false;
    for c in constraints {
        match c.rel {
            Relation::Eq => eqs.push(c.coeffs.clone()),
            Relation::Ge => ineqs.push(Row {
                coeffs: c.coeffs.clone(),
                rhs: Q::zero(),
            }),
            // homogeneous: c.x > 0 is feasible iff c.x >= 1 is
            Relation::Gt => {
                strict = true;
                ineqs.push(Row {
                    coeffs: c.coeffs.clone(),
                    rhs: Q::one(),
                })
            }
        }
    }
    let check = |x: Vec<Q>| -> Option<Vec<Q>> {
        let ok = x.iter().any(|v| !v.is_zero()) && constraints.iter().all(|c| c.holds(&x));
        debug_assert!(ok, "Fourier-Motzkin witness failed verification");
        ok.then_some(x)
    };
    if strict {
        return solve_with_equalities(dim, ineqs, &eqs).and_then(check);
    }
    // No strict constraint: look for a point with some coordinate nonzero.
    for i in 0..dim {
        for sign in [1i64, -1] {
            let mut e = vec![Q::zero(); dim];
            e[i] = exact::q(sign);
            let mut rows = ineqs.clone();
            rows.push(Row {
                coeffs: e,
                rhs: Q::one(),
            });
            if let Some(x) = solve_with_equalities(dim, rows, &eqs) {
                return check(x);
            }
        }
    }
    None
}

/// Project the closed cone `{(x, y) : ineqs >= 0, eqs = 0}` onto the first
/// `keep` coordinates by eliminating the remaining ones.
///
/// Returns homogeneous constraints (`>=` and `=`) on the kept coordinates.
pub fn project_cone(keep: usize, total: usize, ineqs: &[Vec<Q>], eqs: &[Vec<Q>]) -> Vec<Constraint> {
    let mut eq_rows: Vec<Vec<Q>> = eqs.to_vec();
    let mut ineq_rows: Vec<Vec<Q>> = ineqs.to_vec();
    // Gaussian elimination of the eliminated variables through equalities.
    for k in keep..total {
        let Some(pos) = eq_rows.iter().position(|r| !r[k].is_zero()) else {
            continue;
        };
        let pivot = eq_rows.remove(pos);
        let sub = |row: &mut Vec<Q>| {
            if row[k].is_zero() {
                return;
            }
            let f = &row[k] / &pivot[k];
            for (a, b) in row.iter_mut().zip(&pivot) {
                *a -= &f * b;
            }
        };
        eq_rows.iter_mut().for_each(sub);
        ineq_rows.iter_mut().for_each(sub);
    }
    // Fourier-Motzkin on what is left.
    let mut rows: Vec<Row> = ineq_rows
        .into_iter()
        .map(|coeffs| Row {
            coeffs,
            rhs: Q::zero(),
        })
        .collect();
    // Equalities that still involve eliminated variables become two inequalities.
    for r in eq_rows.iter().filter(|r| r[keep..].iter().any(|x| !x.is_zero())) {
        rows.push(Row {
            coeffs: r.clone(),
            rhs: Q::zero(),
        });
        rows.push(Row {
            coeffs: r.iter().map(|x| -x).collect(),
            rhs: Q::zero(),
        });
    }
    let mut rows = prune(rows).expect("homogeneous systems are never infeasible");
    let mut live: Vec<usize> = (keep..total).collect();
    while !live.is_empty() {
        let k = pick_variable(&rows, &live);
        live.retain(|&x| x != k);
        rows = prune(eliminate(&rows, k)).expect("homogeneous");
    }
    let mut out: Vec<Constraint> = eq_rows
        .iter()
        .filter(|r| r[keep..].iter().all(|x| x.is_zero()) && r[..keep].iter().any(|x| !x.is_zero()))
        .map(|r| Constraint::eq(r[..keep].to_vec()).normalized())
        .collect();
    out.extend(
        rows.into_iter()
            .filter(|r| r.coeffs[..keep].iter().any(|x| !x.is_zero()))
            .map(|r| Constraint::ge(r.coeffs[..keep].to_vec()).normalized()),
    );
    out.sort();
    out.dedup();
    out
}
