//! Exact sparse linear algebra over a field.
//!
//! [`RowReducer`] takes equations one at a time and keeps them in echelon
//! form. A row that reduces to `0 = c` with `c != 0` is reported as the
//! first inconsistent equation; rows reducing to `0 = 0` count as surplus
//! (certificate) rows.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::FieldScalar;

/// Sparse row: column index to nonzero entry.
pub type SparseRow<T> = BTreeMap<usize, T>;

#[derive(Clone, Debug)]
struct Pivot<T> {
    col: usize,
    row: SparseRow<T>,
    rhs: T,
}

/// Incremental echelon form of a linear system `A x = b`.
#[derive(Clone, Debug)]
pub struct RowReducer<T> {
    ncols: usize,
    pivots: Vec<Pivot<T>>,
    pivot_of_col: BTreeMap<usize, usize>,
    rows: usize,
    surplus: usize,
}

/// Outcome of adding one equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    /// The row raised the rank.
    Pivot,
    /// The row was implied by earlier ones.
    Redundant,
    /// The row contradicts earlier ones.
    Inconsistent,
}

fn axpy<T: FieldScalar>(dst: &mut SparseRow<T>, f: &T, src: &SparseRow<T>) {
    for (c, v) in src {
        let add = f.clone() * v.clone();
        match dst.get_mut(c) {
            Some(x) => {
                let s = x.clone() + add;
                if s.is_zero() {
                    dst.remove(c);
                } else {
                    *x = s;
                }
            }
            None => {
                if !add.is_zero() {
                    dst.insert(*c, add);
                }
            }
        }
    }
}

impl<T: FieldScalar> RowReducer<T> {
    pub fn new(ncols: usize) -> Self {
        RowReducer {
            ncols,
            pivots: Vec::new(),
            pivot_of_col: BTreeMap::new(),
            rows: 0,
            surplus: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Number of equations seen.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of consistent redundant equations.
    pub fn surplus(&self) -> usize {
        self.surplus
    }

    fn reduce(&self, row: &mut SparseRow<T>, rhs: &mut T) {
        // pivots are applied in insertion order; pivot i has zeros in the
        // pivot columns of all earlier pivots
        for p in &self.pivots {
            if let Some(v) = row.get(&p.col).cloned() {
                let f = -(v / p.row[&p.col].clone());
                axpy(row, &f, &p.row);
                *rhs = rhs.clone() + f * p.rhs.clone();
            }
        }
    }

    /// Adds the equation `row · x = rhs`.
    pub fn push(&mut self, mut row: SparseRow<T>, mut rhs: T) -> RowStatus {
        row.retain(|_, v| !v.is_zero());
        debug_assert!(row.keys().all(|&c| c < self.ncols));
        self.rows += 1;
        self.reduce(&mut row, &mut rhs);
        match row.keys().next().copied() {
            Some(col) => {
                self.pivot_of_col.insert(col, self.pivots.len());
                self.pivots.push(Pivot { col, row, rhs });
                RowStatus::Pivot
            }
            None if rhs.is_zero() => {
                self.surplus += 1;
                RowStatus::Redundant
            }
            None => RowStatus::Inconsistent,
        }
    }

    /// Adds a dense equation.
    pub fn push_dense(&mut self, row: &[T], rhs: T) -> RowStatus {
        let sparse = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        self.push(sparse, rhs)
    }

    /// Columns without a pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols)
            .filter(|c| !self.pivot_of_col.contains_key(c))
            .collect()
    }

    /// The solution with all free columns set to `free_values` (zero if
    /// absent).
    fn back_substitute(&self, free: &BTreeMap<usize, T>) -> Vec<T> {
        let mut x: Vec<T> = vec![T::zero(); self.ncols];
        for (c, v) in free {
            x[*c] = v.clone();
        }
        for p in self.pivots.iter().rev() {
            let mut s = p.rhs.clone();
            for (c, v) in &p.row {
                if *c != p.col {
                    s = s - v.clone() * x[*c].clone();
                }
            }
            x[p.col] = s / p.row[&p.col].clone();
        }
        x
    }

    /// The unique solution; fails if some column is free.
    pub fn unique_solution(&self) -> Result<Vec<T>> {
        let free = self.free_columns();
        if !free.is_empty() {
            return Err(Error::InsufficientPrecision(format!(
                "system underdetermined: rank {} of {} unknowns",
                self.rank(),
                self.ncols
            )));
        }
        Ok(self.back_substitute(&BTreeMap::new()))
    }

    /// Any particular solution (free columns zero).
    pub fn particular_solution(&self) -> Vec<T> {
        self.back_substitute(&BTreeMap::new())
    }

    /// Basis of the nullspace of the homogeneous system, one vector per
    /// free column (that column set to one, other free columns zero).
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let zero_rhs = RowReducer {
            ncols: self.ncols,
            pivots: self
                .pivots
                .iter()
                .map(|p| Pivot { col: p.col, row: p.row.clone(), rhs: T::zero() })
                .collect(),
            pivot_of_col: self.pivot_of_col.clone(),
            rows: self.rows,
            surplus: self.surplus,
        };
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut m = BTreeMap::new();
                m.insert(f, T::one());
                zero_rhs.back_substitute(&m)
            })
            .collect()
    }
}

/// Rank of a dense matrix.
pub fn rank<T: FieldScalar>(rows: &[Vec<T>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut red = RowReducer::new(ncols);
    for r in rows {
        red.push_dense(r, T::zero());
    }
    red.rank()
}

/// Nullspace basis of a dense matrix.
pub fn nullspace<T: FieldScalar>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut red = RowReducer::new(ncols);
    for r in rows {
        red.push_dense(r, T::zero());
    }
    red.nullspace()
}

/// Result of an overdetermined exact solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Solve<T> {
    pub x: Vec<T>,
    /// Equations beyond the rank that were checked and hold.
    pub surplus: usize,
}

/// Solves `A x = b` exactly, demanding a unique solution, full
/// consistency and at least `min_surplus` redundant equations.
/// `label(i)` names equation `i` in error messages.
pub fn solve_certified<T: FieldScalar>(
    rows: &[Vec<T>],
    rhs: &[T],
    ncols: usize,
    min_surplus: usize,
    label: impl Fn(usize) -> String,
) -> Result<Solve<T>> {
    let mut red = RowReducer::new(ncols);
    for (i, (r, b)) in rows.iter().zip(rhs).enumerate() {
        if red.push_dense(r, b.clone()) == RowStatus::Inconsistent {
            return Err(Error::Inconsistent(label(i)));
        }
    }
    let x = red.unique_solution()?;
    if red.surplus() < min_surplus {
        return Err(Error::InsufficientPrecision(format!(
            "only {} surplus equations, need {}",
            red.surplus(),
            min_surplus
        )));
    }
    Ok(Solve { x, surplus: red.surplus() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn solves_and_certifies() {
        // x + y = 3, x - y = 1, 2x = 4
        let a = vec![r(&[1, 1]), r(&[1, -1]), r(&[2, 0])];
        let b = r(&[3, 1, 4]);
        let s = solve_certified(&a, &b, 2, 1, |i| i.to_string()).unwrap();
        assert_eq!(s.x, r(&[2, 1]));
        assert_eq!(s.surplus, 1);
    }

    #[test]
    fn reports_first_inconsistent_row() {
        let a = vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1]), r(&[1, 2])];
        let b = r(&[1, 1, 2, 5]);
        let e = solve_certified(&a, &b, 2, 0, |i| format!("row {i}")).unwrap_err();
        assert_eq!(e, Error::Inconsistent("row 3".into()));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = vec![r(&[1, 2, 3]), r(&[2, 4, 6])];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot: Rational = a[0].iter().zip(v).map(|(x, y)| x * y).sum();
            assert_eq!(dot, int(0));
        }
        assert_eq!(rank(&a), 1);
    }
}
