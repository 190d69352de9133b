//! Exact Gauss-Jordan elimination over a field.
//!
//! Right-hand sides may live in any module over the field (plain scalars, or
//! parameter polynomials when the constant terms are still symbolic), so the
//! consistency conditions come out as elements of that module.

use num_traits::Zero;

use crate::scalar::{Field, ScaleBy};

/// `A x = rhs` after reduction to reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct Elimination<F, V> {
    ncols: usize,
    /// The nonzero reduced rows; row `r` has its leading one in column `pivots[r]`.
    pub rows: Vec<Vec<F>>,
    pub rhs: Vec<V>,
    pub pivots: Vec<usize>,
    /// Right-hand sides left on rows that reduced to zero. The system is
    /// solvable iff all of these vanish.
    pub conditions: Vec<V>,
}

/// Reduces the augmented system. Pivots are taken in column order, choosing
/// the first row with a nonzero entry.
pub fn eliminate<F: Field, V: ScaleBy<F>>(mut a: Vec<Vec<F>>, mut rhs: Vec<V>, ncols: usize) -> Elimination<F, V> {
    assert_eq!(a.len(), rhs.len(), "row count mismatch");
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        rhs.swap(r, p);
        let inv = a[r][col].inv();
        if inv != F::one() {
            for x in a[r].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            rhs[r] = rhs[r].scale(&inv);
        }
        let pivot_row = a[r].clone();
        for i in 0..nrows {
            if i == r || a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
            rhs[i] = rhs[i].clone() - rhs[r].scale(&factor);
        }
        pivots.push(col);
        r += 1;
    }
    let conditions = rhs.split_off(r);
    a.truncate(r);
    Elimination {
        ncols,
        rows: a,
        rhs,
        pivots,
        conditions,
    }
}

impl<F: Field, V: ScaleBy<F>> Elimination<F, V> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_consistent(&self) -> bool {
        self.conditions.iter().all(Zero::is_zero)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// The solution with every free variable set to zero.
    pub fn particular(&self) -> Vec<V> {
        let mut x = vec![V::zero(); self.ncols];
        for (r, &p) in self.pivots.iter().enumerate() {
            x[p] = self.rhs[r].clone();
        }
        x
    }

    /// One kernel vector per free column, in column order, with a one in its
    /// own free column.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![F::zero(); self.ncols];
                v[f] = F::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    v[p] = -self.rows[r][f].clone();
                }
                v
            })
            .collect()
    }
}

/// Particular solution and kernel basis of a consistent system `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution<F> {
    pub particular: Vec<F>,
    pub kernel: Vec<Vec<F>>,
    pub free_columns: Vec<usize>,
}

/// Solves `A x = b` exactly; `None` if the system is inconsistent.
pub fn solve_affine<F: Field>(a: Vec<Vec<F>>, b: Vec<F>, ncols: usize) -> Option<AffineSolution<F>> {
    let e = eliminate(a, b, ncols);
    if !e.is_consistent() {
        return None;
    }
    Some(AffineSolution {
        particular: e.particular(),
        kernel: e.kernel_basis(),
        free_columns: e.free_columns(),
    })
}

/// Rank of a list of row vectors of length `ncols`.
pub fn rank<F: Field>(rows: Vec<Vec<F>>, ncols: usize) -> usize {
    let n = rows.len();
    eliminate(rows, vec![F::zero(); n], ncols).rank()
}
