use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntegerMatrix;

/// Result of a Smith normal form computation: `u * m * v == d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Inverse of `v`, tracked alongside the column operations.
    pub v_inv: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Calc {
    m: IntegerMatrix,
    u: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl Calc {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.m.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.m.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        self.v_inv.add_row_multiple(src, dst, &-f);
    }

    /// Smallest |entry| in the trailing submatrix, ties broken by (row, col).
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let x = &self.m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.m[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let (rows, cols) = (self.m.rows(), self.m.cols());
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            let p = self.m[(t, t)].clone();

            let mut dirty = false;
            for i in t + 1..rows {
                let q = &self.m[(i, t)] / &p;
                self.add_row(i, t, &-q);
                dirty |= !self.m[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = &self.m[(t, j)] / &p;
                self.add_col(j, t, &-q);
                dirty |= !self.m[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !self.m[(i, j)].is_multiple_of(&p))
            });
            if let Some(i) = offender {
                self.add_row(t, i, &BigInt::from(1));
                continue;
            }

            if p.is_negative() {
                self.m.negate_row(t);
                self.u.negate_row(t);
            }
            t += 1;
        }
    }
}

/// Smith normal form with deterministic pivoting.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut calc = Calc {
        m: m.clone(),
        u: IntegerMatrix::identity(m.rows()),
        v: IntegerMatrix::identity(m.cols()),
        v_inv: IntegerMatrix::identity(m.cols()),
    };
    calc.run();
    SmithForm {
        u: calc.u,
        d: calc.m,
        v: calc.v,
        v_inv: calc.v_inv,
    }
}
