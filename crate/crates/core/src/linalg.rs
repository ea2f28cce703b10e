//! Incremental Gaussian elimination over a finite field.
//!
//! Rows arrive one at a time, as in an expansion compared coefficient by
//! coefficient, so the first inconsistent row is also the first coefficient
//! at which the target leaves the span.

use crate::gf::{FieldElement, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    /// Pivot variables solved, free variables zero.
    Solution(Vec<FieldElement>),
    /// Row index at which the system became inconsistent.
    Inconsistent { row: usize },
}

/// Reduced echelon form of an augmented system `[A | b]` built row by row.
pub struct Eliminator {
    field: FiniteField,
    ncols: usize,
    /// (pivot column, row with a 1 at the pivot and the rhs in the last slot)
    pivots: Vec<(usize, Vec<FieldElement>)>,
    rows_seen: usize,
}

impl Eliminator {
    pub fn new(field: &FiniteField, ncols: usize) -> Self {
        Eliminator {
            field: field.clone(),
            ncols,
            pivots: Vec::new(),
            rows_seen: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `coeffs . x = rhs`; returns false if the system became inconsistent.
    pub fn push(&mut self, coeffs: &[FieldElement], rhs: &FieldElement) -> bool {
        assert_eq!(coeffs.len(), self.ncols);
        self.rows_seen += 1;
        let mut row: Vec<FieldElement> = coeffs.to_vec();
        row.push(rhs.clone());
        for (col, prow) in &self.pivots {
            let c = row[*col].clone();
            if !c.is_zero() {
                for (x, y) in row.iter_mut().zip(prow) {
                    *x = &*x - &(&c * y);
                }
            }
        }
        match row[..self.ncols].iter().position(|x| !x.is_zero()) {
            None => row[self.ncols].is_zero(),
            Some(col) => {
                let inv = row[col].inv().expect("nonzero");
                for x in row.iter_mut() {
                    *x = &*x * &inv;
                }
                for (_, prow) in self.pivots.iter_mut() {
                    let c = prow[col].clone();
                    if !c.is_zero() {
                        for (x, y) in prow.iter_mut().zip(&row) {
                            *x = &*x - &(&c * y);
                        }
                    }
                }
                self.pivots.push((col, row));
                true
            }
        }
    }

    /// Current solution with free variables set to zero.
    pub fn solution(&self) -> Vec<FieldElement> {
        let mut x = vec![self.field.zero(); self.ncols];
        for (col, row) in &self.pivots {
            x[*col] = row[self.ncols].clone();
        }
        x
    }
}

/// Solves `sum_j x_j columns[j] = target` over the rows both sides know.
pub fn solve(field: &FiniteField, columns: &[Vec<FieldElement>], target: &[FieldElement]) -> Solve {
    let nrows = columns
        .iter()
        .map(Vec::len)
        .chain(std::iter::once(target.len()))
        .min()
        .unwrap_or(0);
    let mut el = Eliminator::new(field, columns.len());
    for i in 0..nrows {
        let row: Vec<FieldElement> = columns.iter().map(|c| c[i].clone()).collect();
        if !el.push(&row, &target[i]) {
            return Solve::Inconsistent { row: i };
        }
    }
    Solve::Solution(el.solution())
}

/// Rank of the matrix whose columns are given.
pub fn rank(field: &FiniteField, columns: &[Vec<FieldElement>]) -> usize {
    let nrows = columns.iter().map(Vec::len).min().unwrap_or(0);
    let mut el = Eliminator::new(field, columns.len());
    let zero = field.zero();
    for i in 0..nrows {
        let row: Vec<FieldElement> = columns.iter().map(|c| c[i].clone()).collect();
        el.push(&row, &zero);
        if el.rank() == columns.len() {
            break;
        }
    }
    el.rank()
}
