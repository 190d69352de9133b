//! Finite-dimensional algebras given by structure constants.
//!
//! Elements are coordinate vectors `Vec<R>` in a fixed basis `e_1..e_n`
//! (indices are zero-based in code and one-based in printed output).

mod builtin;
mod construct;
mod identity;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Ring;

pub use builtin::{d_dt, euler_derivation, euler_gelfand, truncated_poly_dot, witt_window};
pub use construct::{
    commutator, derivation_bracket, derivation_bracket_unchecked, gelfand_construct, gelfand_unchecked,
    is_derivation, subalgebra_check, SubalgebraCheck,
};
pub use identity::{check_identity, check_op, Counterexample, Identity, IdentityReport, UnknownIdentity};

/// Coordinate vector of an algebra element.
pub type Vector<R> = Vec<R>;

pub fn unit<R: Ring>(n: usize, i: usize) -> Vector<R> {
    let mut v = vec![R::zero(); n];
    v[i] = R::one();
    v
}

pub fn vec_is_zero<R: Ring>(v: &[R]) -> bool {
    v.iter().all(R::is_zero)
}

pub fn vec_add<R: Ring>(x: &[R], y: &[R]) -> Vector<R> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn vec_sub<R: Ring>(x: &[R], y: &[R]) -> Vector<R> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn vec_scale<R: Ring>(c: &R, x: &[R]) -> Vector<R> {
    x.iter().map(|a| c.clone() * a.clone()).collect()
}

/// Bilinear product `e_i ⋄ e_j = Σ_k c[i][j][k] e_k` on an `n`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearOp<R> {
    dim: usize,
    c: Vec<R>,
}

impl<R: Ring> BilinearOp<R> {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            c: vec![R::zero(); dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> R) -> Self {
        let mut c = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    c.push(f(i, j, k));
                }
            }
        }
        Self { dim, c }
    }

    /// Builds an op from sparse `(i, j, k, value)` entries; repeated
    /// positions are summed.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, usize, R)>) -> Result<Self> {
        let mut op = Self::zero(dim);
        for (i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Invalid(format!(
                    "entry ({},{},{}) out of range for dimension {dim}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            let idx = op.index(i, j, k);
            op.c[idx] = op.c[idx].clone() + v;
        }
        Ok(op)
    }

    /// The op whose products are given as vectors: `e_i ⋄ e_j = f(i, j)`.
    pub fn from_products(dim: usize, mut f: impl FnMut(usize, usize) -> Vector<R>) -> Self {
        let mut c = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                assert_eq!(v.len(), dim, "product vector has wrong length");
                c.extend(v);
            }
        }
        Self { dim, c }
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &R {
        &self.c[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: R) {
        let idx = self.index(i, j, k);
        self.c[idx] = v;
    }

    /// Coordinates of `e_i ⋄ e_j`.
    pub fn product_basis(&self, i: usize, j: usize) -> &[R] {
        let start = self.index(i, j, 0);
        &self.c[start..start + self.dim]
    }

    pub fn apply(&self, x: &[R], y: &[R]) -> Vector<R> {
        let n = self.dim;
        let mut out = vec![R::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi.clone() * yj.clone();
                for (k, c) in self.product_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Nonzero entries in `(i, j, k)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &R)> {
        let n = self.dim;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(idx, v)| (idx / (n * n), (idx / n) % n, idx % n, v))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(R::is_zero)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.product_basis(i, j) == self.product_basis(j, i)))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> BilinearOp<S> {
        BilinearOp {
            dim: self.dim,
            c: self.c.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            c: vec_add(&self.c, &other.c),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            c: vec_sub(&self.c, &other.c),
        }
    }

    pub fn scale(&self, s: &R) -> Self {
        Self {
            dim: self.dim,
            c: vec_scale(s, &self.c),
        }
    }

    /// The op in another basis: if `p` has the new basis vectors as columns
    /// and `q = p⁻¹`, the new constants are `q · op(p e_i, p e_j)`.
    pub fn change_basis(&self, p: &LinearMap<R>, q: &LinearMap<R>) -> Self {
        let n = self.dim;
        let cols: Vec<Vector<R>> = (0..n).map(|j| p.column(j)).collect();
        Self::from_products(n, |i, j| q.apply(&self.apply(&cols[i], &cols[j])))
    }
}

impl<R: Ring> fmt::Display for BilinearOp<R> {
    /// One line per nonzero product, e.g. `e1*e2 = (a+1)*e2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.product_basis(i, j);
                if vec_is_zero(v) {
                    continue;
                }
                any = true;
                writeln!(f, "e{}*e{} = {}", i + 1, j + 1, format_vector(v))?;
            }
        }
        if !any {
            writeln!(f, "(zero)")?;
        }
        Ok(())
    }
}

/// Formats a coordinate vector as a combination of `e1, e2, ...`.
pub fn format_vector<R: Ring>(v: &[R]) -> String {
    let terms = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
        let cs = crate::scalar::coefficient_string(c);
        if cs == "1" {
            format!("e{}", k + 1)
        } else if cs == "-1" {
            format!("-e{}", k + 1)
        } else {
            format!("{cs}*e{}", k + 1)
        }
    });
    crate::scalar::join_terms(terms)
}

/// Square matrix acting on coordinates: `D(e_j) = Σ_i m[i][j] e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<R> {
    dim: usize,
    m: Vec<R>,
}

impl<R: Ring> LinearMap<R> {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            m: vec![R::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { R::one() } else { R::zero() })
    }

    /// `f(i, j)` is the entry in row `i`, column `j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut m = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                m.push(f(i, j));
            }
        }
        Self { dim, m }
    }

    /// The map sending `e_j` to `images[j]`.
    pub fn from_columns(images: Vec<Vector<R>>) -> Self {
        let n = images.len();
        Self::from_fn(n, |i, j| images[j][i].clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.m[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.m[i * self.dim + j] = v;
    }

    /// Coordinates of the image of `e_j`.
    pub fn column(&self, j: usize) -> Vector<R> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn apply(&self, v: &[R]) -> Vector<R> {
        let n = self.dim;
        let mut out = vec![R::zero(); n];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = o.clone() + a.clone() * vj.clone();
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_columns((0..self.dim).map(|j| self.apply(&other.column(j))).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            m: vec_add(&self.m, &other.m),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            m: vec_sub(&self.m, &other.m),
        }
    }

    pub fn scale(&self, s: &R) -> Self {
        Self {
            dim: self.dim,
            m: vec_scale(s, &self.m),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(R::is_zero)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> LinearMap<S> {
        LinearMap {
            dim: self.dim,
            m: self.m.iter().map(f).collect(),
        }
    }

    /// Gauss-Jordan inverse over the ring. Each pivot must be a unit; for
    /// truncated series this means an invertible constant term.
    pub fn try_inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a: Vec<Vec<R>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut inv: Vec<Vec<R>> = (0..n).map(|i| unit(n, i)).collect();
        for col in 0..n {
            let (p, pinv) = (col..n).find_map(|r| a[r][col].try_inverse().map(|u| (r, u)))?;
            a.swap(col, p);
            inv.swap(col, p);
            a[col] = vec_scale(&pinv, &a[col]);
            inv[col] = vec_scale(&pinv, &inv[col]);
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                a[r] = vec_sub(&a[r], &vec_scale(&f, &a[col]));
                inv[r] = vec_sub(&inv[r], &vec_scale(&f, &inv[col]));
            }
        }
        Some(Self::from_fn(n, |i, j| inv[i][j].clone()))
    }
}

impl<R: Ring> fmt::Display for LinearMap<R> {
    /// One line per basis vector: `e1 -> 2*e1+e2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.dim {
            writeln!(f, "e{} -> {}", j + 1, format_vector(&self.column(j)))?;
        }
        Ok(())
    }
}

/// A vector space with named bilinear operations ("dot", "circ", "bracket").
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraPresentation<R> {
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub ops: BTreeMap<String, BilinearOp<R>>,
}

impl<R: Ring> AlgebraPresentation<R> {
    /// A presentation with basis labels `e1..en` and no operations.
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            basis_labels: (1..=dim).map(|i| format!("e{i}")).collect(),
            ops: BTreeMap::new(),
        }
    }

    /// Adds or replaces an operation. Panics on a dimension mismatch.
    pub fn with_op(mut self, label: &str, op: BilinearOp<R>) -> Self {
        assert_eq!(op.dim(), self.dim, "operation {label:?} has the wrong dimension");
        self.ops.insert(label.to_string(), op);
        self
    }

    pub fn op(&self, label: &str) -> Result<&BilinearOp<R>> {
        self.ops.get(label).ok_or_else(|| Error::MissingOp(label.to_string()))
    }

    pub fn field_tag(&self) -> &'static str {
        R::field_tag()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> AlgebraPresentation<S> {
        AlgebraPresentation {
            dim: self.dim,
            basis_labels: self.basis_labels.clone(),
            ops: self.ops.iter().map(|(k, op)| (k.clone(), op.map(&f))).collect(),
        }
    }
}

impl<R: Ring> fmt::Display for AlgebraPresentation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {} over {}", self.dim, self.field_tag())?;
        for (label, op) in &self.ops {
            writeln!(f, "[{label}]")?;
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    #[test]
    fn apply_matches_constants() {
        let op = BilinearOp::from_entries(2, [(0, 0, 1, q(1)), (0, 1, 1, q(3))]).unwrap();
        assert_eq!(op.apply(&[q(1), q(2)], &[q(1), q(1)]), vec![q(0), q(4)]);
        assert_eq!(op.entries().count(), 2);
        assert!(!op.is_commutative());
    }

    #[test]
    fn out_of_range_entry() {
        assert!(BilinearOp::<Rational>::from_entries(2, [(2, 0, 0, q(1))]).is_err());
    }

    #[test]
    fn inverse_and_compose() {
        let m = LinearMap::from_fn(2, |i, j| q([[2, 1], [1, 1]][i][j]));
        let inv = m.try_inverse().unwrap();
        assert_eq!(m.compose(&inv), LinearMap::identity(2));
        assert!(LinearMap::<Rational>::zero(2).try_inverse().is_none());
    }

    #[test]
    fn display() {
        let op = BilinearOp::from_entries(2, [(0, 0, 0, q(1)), (0, 0, 1, q(-2)), (0, 1, 1, q(1))]).unwrap();
        assert_eq!(op.to_string(), "e1*e1 = e1-2*e2\ne1*e2 = e2\n");
    }
}
