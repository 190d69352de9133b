//! Novikov deformations `x ·_h y = Σ_k μ_k(x,y) h^k` of a commutative
//! associative product, truncated modulo `h^N`.
//!
//! If every `μ_k` vanishes for `k > d`, the Novikov identities have at most
//! two nested products, so their residuals are polynomials in `h` of degree
//! at most `2d`. Any order `N ≥ 2d+1` therefore decides them exactly.

use std::fmt;

use crate::algebra::{
    check_identity, check_op, commutator, unit, AlgebraPresentation, BilinearOp, Identity, IdentityReport, LinearMap,
};
use crate::error::{Error, Result};
use crate::scalar::{Ring, TruncSeries};

/// A truncated deformation of the base algebra's `dot`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedDeformation<R> {
    base: AlgebraPresentation<R>,
    mu: Vec<BilinearOp<R>>,
}

impl<R: Ring> TruncatedDeformation<R> {
    /// `mu.len()` is the truncation order `N ≥ 2`, and `mu[0]` must equal the
    /// base's `dot`.
    pub fn new(base: AlgebraPresentation<R>, mu: Vec<BilinearOp<R>>) -> Result<Self> {
        if mu.len() < 2 {
            return Err(Error::Invalid(format!("truncation order must be at least 2, got {}", mu.len())));
        }
        if let Some(op) = mu.iter().find(|op| op.dim() != base.dim) {
            return Err(Error::DimMismatch(op.dim(), base.dim));
        }
        if *base.op("dot")? != mu[0] {
            return Err(Error::Invalid("mu[0] differs from the base product".into()));
        }
        Ok(Self { base, mu })
    }

    /// A deformation whose base algebra is `(A, dot = mu[0])`.
    pub fn from_mu(mu: Vec<BilinearOp<R>>) -> Result<Self> {
        let first = mu.first().ok_or_else(|| Error::Invalid("empty deformation".into()))?;
        let base = AlgebraPresentation::new(first.dim()).with_op("dot", first.clone());
        Self::new(base, mu)
    }

    /// Reads `μ_k` off the coefficients of a series-valued product.
    pub fn from_series_op(op: &BilinearOp<TruncSeries<R>>, order: usize) -> Result<Self> {
        Self::from_mu((0..order).map(|k| op.map(|s| s.coeff(k))).collect())
    }

    pub fn base(&self) -> &AlgebraPresentation<R> {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.mu.len()
    }

    pub fn dim(&self) -> usize {
        self.base.dim
    }

    pub fn mu(&self) -> &[BilinearOp<R>] {
        &self.mu
    }

    /// Highest `k` with `μ_k ≠ 0`, or 0.
    pub fn degree(&self) -> usize {
        self.mu.iter().rposition(|op| !op.is_zero()).unwrap_or(0)
    }

    /// The same deformation at another truncation order, padding with zero
    /// operations or dropping the top ones.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        let n = self.dim();
        let mu = (0..order)
            .map(|k| self.mu.get(k).cloned().unwrap_or_else(|| BilinearOp::zero(n)))
            .collect();
        Self::new(self.base.clone(), mu)
    }

    /// `·_h` with series coefficients of order `N`.
    pub fn as_series_op(&self) -> BilinearOp<TruncSeries<R>> {
        let n = self.order();
        BilinearOp::from_fn(self.dim(), |i, j, k| {
            TruncSeries::new(self.mu.iter().map(|op| op.get(i, j, k).clone()).collect(), n)
        })
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncatedDeformation<S> {
        TruncatedDeformation {
            base: self.base.map(&f),
            mu: self.mu.iter().map(|op| op.map(&f)).collect(),
        }
    }
}

impl<R: Ring> fmt::Display for TruncatedDeformation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {} order {}", self.dim(), self.order())?;
        for (k, op) in self.mu.iter().enumerate() {
            if k > 0 && op.is_zero() {
                continue;
            }
            writeln!(f, "[mu{k}]")?;
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Checks both Novikov identities for `·_h` over `K[h]/(h^N)`. The report
/// names the first failing identity, or `NOVIKOV` when both pass.
pub fn check_novikov_deformation<R: Ring>(d: &TruncatedDeformation<R>) -> IdentityReport<TruncSeries<R>> {
    let op = d.as_series_op();
    for id in [Identity::NovLeftSym, Identity::NovRightComm] {
        let report = check_op(id, &op).expect("single-op identity");
        if !report.passed {
            return report;
        }
    }
    IdentityReport::pass("NOVIKOV")
}

/// The transposed Poisson algebra `(A, μ_0, commutator of μ_1)` together
/// with the TPA and LIE checks on it.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalLimit<R> {
    pub algebra: AlgebraPresentation<R>,
    pub tpa: IdentityReport<R>,
    pub lie: IdentityReport<R>,
}

impl<R: Ring> ClassicalLimit<R> {
    pub fn passed(&self) -> bool {
        self.tpa.passed && self.lie.passed
    }
}

pub fn classical_limit<R: Ring>(d: &TruncatedDeformation<R>) -> Result<ClassicalLimit<R>> {
    let dot = d.mu[0].clone();
    if !dot.is_commutative() {
        return Err(Error::NotCommutativeBase);
    }
    let algebra = AlgebraPresentation::new(d.dim())
        .with_op("dot", dot)
        .with_op("bracket", commutator(&d.mu[1]));
    let tpa = check_identity(&algebra, Identity::Tpa)?;
    let lie = check_identity(&algebra, Identity::Lie)?;
    Ok(ClassicalLimit { algebra, tpa, lie })
}

/// Checks every Novikov-Poisson axiom on `(dot, circ)`.
pub fn check_novikov_poisson<R: Ring>(np: &AlgebraPresentation<R>) -> Result<()> {
    for id in [
        Identity::CommAssoc,
        Identity::NovLeftSym,
        Identity::NovRightComm,
        Identity::Np1,
        Identity::Np2,
    ] {
        check_identity(np, id)?.require(Error::NotNovikovPoisson)?;
    }
    Ok(())
}

/// `x ·_h y = x·y + (x∘y) h` from a Novikov-Poisson algebra.
pub fn deform_from_np<R: Ring>(np: &AlgebraPresentation<R>, order: usize) -> Result<TruncatedDeformation<R>> {
    check_order(order)?;
    check_novikov_poisson(np)?;
    let n = np.dim;
    let mut mu = vec![np.op("dot")?.clone(), np.op("circ")?.clone()];
    mu.resize(order, BilinearOp::zero(n));
    TruncatedDeformation::from_mu(mu)
}

/// `x ·_h y = (x∘y) h` deforming the zero product.
pub fn commutator_deform<R: Ring>(nov: &BilinearOp<R>, order: usize) -> Result<TruncatedDeformation<R>> {
    check_order(order)?;
    for id in [Identity::NovLeftSym, Identity::NovRightComm] {
        check_op(id, nov)?.require(Error::NotNovikov)?;
    }
    let n = nov.dim();
    let mut mu = vec![BilinearOp::zero(n), nov.clone()];
    mu.resize(order, BilinearOp::zero(n));
    TruncatedDeformation::from_mu(mu)
}

fn check_order(order: usize) -> Result<()> {
    if order < 2 {
        return Err(Error::Invalid(format!("truncation order must be at least 2, got {order}")));
    }
    Ok(())
}

fn common_order<R: Ring>(a: &TruncSeries<R>, b: &TruncSeries<R>) -> Result<usize> {
    match (a.order(), b.order()) {
        (Some(x), Some(y)) if x != y => Err(Error::OrderMismatch(x, y)),
        (Some(x), _) | (None, Some(x)) => Ok(x),
        (None, None) => Err(Error::Invalid("a truncation order is required".into())),
    }
}

/// The two-dimensional family `e1·e1 = a e1 + b e2`, `e1·e2 = (a+h) e2`,
/// `e2·e1 = a e2`, `e2·e2 = 0`.
pub fn family2d_construct<R: Ring>(a: &TruncSeries<R>, b: &TruncSeries<R>) -> Result<TruncatedDeformation<R>> {
    let order = common_order(a, b)?;
    check_order(order)?;
    let a = a.with_order(order);
    let b = b.with_order(order);
    let a_plus_h = a.clone() + TruncSeries::h(order);
    let op = BilinearOp::from_entries(
        2,
        [
            (0, 0, 0, a.clone()),
            (0, 0, 1, b),
            (0, 1, 1, a_plus_h),
            (1, 0, 1, a),
        ],
    )?;
    TruncatedDeformation::from_series_op(&op, order)
}

/// `D(x) = [1, x]` for a unital transposed Poisson algebra.
pub fn unital_derivation<R: Ring>(tpa: &AlgebraPresentation<R>, unit_vec: &[R]) -> Result<LinearMap<R>> {
    let n = tpa.dim;
    if unit_vec.len() != n {
        return Err(Error::DimMismatch(unit_vec.len(), n));
    }
    let dot = tpa.op("dot")?;
    for j in 0..n {
        let e = unit(n, j);
        if dot.apply(unit_vec, &e) != e || dot.apply(&e, unit_vec) != e {
            return Err(Error::NotUnit(format!("fails on e{}", j + 1)));
        }
    }
    check_identity(tpa, Identity::Tpa)?.require(Error::NotTpa)?;
    let bracket = tpa.op("bracket")?;
    Ok(LinearMap::from_columns((0..n).map(|j| bracket.apply(unit_vec, &unit(n, j))).collect()))
}
