//! Equivalence of truncated deformations: `f_h = id + f_1 h + ...` with
//! `f_h(x ·_h y) = f_h(x) ·'_h f_h(y)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{vec_add, vec_is_zero, vec_sub, BilinearOp, IdentityReport, LinearMap, Vector};
use crate::deform::TruncatedDeformation;
use crate::error::{Error, Result};
use crate::linalg::{eliminate, solve_affine};
use crate::scalar::{Field, ParamPoly, Ring, TruncSeries};

/// The coefficients `f[0] = id, f[1], ..., f[N−1]` of a truncated linear map.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceWitness<R> {
    f: Vec<LinearMap<R>>,
}

impl<R: Ring> EquivalenceWitness<R> {
    pub fn new(f: Vec<LinearMap<R>>) -> Result<Self> {
        let first = f.first().ok_or_else(|| Error::Invalid("empty witness".into()))?;
        if *first != LinearMap::identity(first.dim()) {
            return Err(Error::Invalid("witness must reduce to the identity modulo h".into()));
        }
        Ok(Self { f })
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        let mut f = vec![LinearMap::zero(dim); order.max(1)];
        f[0] = LinearMap::identity(dim);
        Self { f }
    }

    /// Reads the coefficients off a matrix with series entries.
    pub fn from_series_map(m: &LinearMap<TruncSeries<R>>, order: usize) -> Result<Self> {
        Self::new((0..order).map(|k| m.map(|s| s.coeff(k))).collect())
    }

    pub fn order(&self) -> usize {
        self.f.len()
    }

    pub fn dim(&self) -> usize {
        self.f[0].dim()
    }

    pub fn coefficients(&self) -> &[LinearMap<R>] {
        &self.f
    }

    pub fn as_series_map(&self) -> LinearMap<TruncSeries<R>> {
        let n = self.order();
        LinearMap::from_fn(self.dim(), |i, j| {
            TruncSeries::new(self.f.iter().map(|m| m.get(i, j).clone()).collect(), n)
        })
    }

    /// The truncated inverse `f_h⁻¹`, a witness for the swapped pair.
    pub fn inverse(&self) -> Self {
        let inv = self
            .as_series_map()
            .try_inverse()
            .expect("f[0] = id makes every pivot a unit");
        Self::from_series_map(&inv, self.order()).expect("inverse reduces to the identity")
    }

    pub fn map<S: Ring>(&self, g: impl Fn(&R) -> S) -> EquivalenceWitness<S> {
        EquivalenceWitness {
            f: self.f.iter().map(|m| m.map(&g)).collect(),
        }
    }
}

impl<R: Ring> fmt::Display for EquivalenceWitness<R> {
    /// Images of the basis vectors as series-valued combinations.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_series_map())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EquivVerdict<R> {
    Equivalent(EquivalenceWitness<R>),
    /// No equivalence exists; the obstruction appears in degree `order`.
    NotEquivalent { order: usize, reason: String },
    Unknown { reason: String },
}

impl<R> EquivVerdict<R> {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivVerdict::Equivalent(_))
    }

    pub fn is_not_equivalent(&self) -> bool {
        matches!(self, EquivVerdict::NotEquivalent { .. })
    }

    pub fn witness(&self) -> Option<&EquivalenceWitness<R>> {
        match self {
            EquivVerdict::Equivalent(w) => Some(w),
            _ => None,
        }
    }
}

fn check_compatible<R: Ring>(d1: &TruncatedDeformation<R>, d2: &TruncatedDeformation<R>) -> Result<()> {
    if d1.dim() != d2.dim() {
        return Err(Error::DimMismatch(d1.dim(), d2.dim()));
    }
    if d1.order() != d2.order() {
        return Err(Error::OrderMismatch(d1.order(), d2.order()));
    }
    Ok(())
}

/// Checks `f_h(e_i ·_h e_j) = f_h(e_i) ·'_h f_h(e_j)` on every basis pair
/// through degree `N−1`.
pub fn verify_witness<R: Ring>(
    d1: &TruncatedDeformation<R>,
    d2: &TruncatedDeformation<R>,
    w: &EquivalenceWitness<R>,
) -> Result<IdentityReport<TruncSeries<R>>> {
    check_compatible(d1, d2)?;
    if w.dim() != d1.dim() {
        return Err(Error::DimMismatch(w.dim(), d1.dim()));
    }
    if w.order() != d1.order() {
        return Err(Error::OrderMismatch(w.order(), d1.order()));
    }
    let (op1, op2, f) = (d1.as_series_op(), d2.as_series_op(), w.as_series_map());
    let n = d1.dim();
    let cols: Vec<Vector<TruncSeries<R>>> = (0..n).map(|j| f.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let r = vec_sub(&f.apply(op1.product_basis(i, j)), &op2.apply(&cols[i], &cols[j]));
            if !vec_is_zero(&r) {
                return Ok(IdentityReport::fail("EQUIVALENCE", vec![i, j], r));
            }
        }
    }
    Ok(IdentityReport::pass("EQUIVALENCE"))
}

type Poly<F> = ParamPoly<F>;

struct Solver<F> {
    n: usize,
    order: usize,
    mu1: Vec<BilinearOp<Poly<F>>>,
    mu2: Vec<BilinearOp<Poly<F>>>,
    /// The coefficient matrix of `f_k ↦ f_k(x·y) − f_k(x)·y − x·f_k(y)`:
    /// rows indexed by `(a, b, c)`, columns by the entry `(i, j)` of `f_k`.
    lhs: Vec<Vec<F>>,
    f: Vec<LinearMap<Poly<F>>>,
    next_param: usize,
    /// Set once free parameters had to be fixed arbitrarily; from then on an
    /// obstruction no longer proves non-equivalence.
    specialized: bool,
}

enum Step {
    Solved,
    Retry,
    Obstructed(String),
    Nonlinear(String),
}

impl<F: Field> Solver<F> {
    fn new(d1: &TruncatedDeformation<F>, d2: &TruncatedDeformation<F>) -> Self {
        let n = d1.dim();
        let mu0 = &d1.mu()[0];
        let mut lhs = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut row = vec![F::zero(); n * n];
                    for (j, v) in mu0.product_basis(a, b).iter().enumerate() {
                        row[c * n + j] = row[c * n + j].clone() + v.clone();
                    }
                    for i in 0..n {
                        row[i * n + a] = row[i * n + a].clone() - mu0.get(i, b, c).clone();
                        row[i * n + b] = row[i * n + b].clone() - mu0.get(a, i, c).clone();
                    }
                    lhs.push(row);
                }
            }
        }
        let lift = |d: &TruncatedDeformation<F>| d.mu().iter().map(|op| op.map(|c| Poly::constant(c.clone()))).collect();
        Self {
            n,
            order: d1.order(),
            mu1: lift(d1),
            mu2: lift(d2),
            lhs,
            f: vec![LinearMap::identity(n)],
            next_param: 1,
            specialized: false,
        }
    }

    fn fresh(&mut self) -> String {
        let name = format!("q{}", self.next_param);
        self.next_param += 1;
        name
    }

    /// Degree-`k` terms of `f(x)·'f(y) − f(x·y)` that do not involve `f_k`.
    fn rhs(&self, k: usize) -> Vec<Poly<F>> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                let mut acc = vec![Poly::zero(); n];
                for p in 0..k {
                    let x = self.f[p].column(a);
                    for q in 0..(k - p + 1).min(k) {
                        let y = self.f[q].column(b);
                        acc = vec_add(&acc, &self.mu2[k - p - q].apply(&x, &y));
                    }
                    acc = vec_sub(&acc, &self.f[p].apply(self.mu1[k - p].product_basis(a, b)));
                }
                out.extend(acc);
            }
        }
        out
    }

    fn substitute(&mut self, assignment: &BTreeMap<String, Poly<F>>) {
        for m in &mut self.f {
            *m = m.map(|p| p.substitute_partial(assignment));
        }
    }

    fn step(&mut self, k: usize) -> Step {
        let n = self.n;
        let e = eliminate(self.lhs.clone(), self.rhs(k), n * n);
        let mut linear = Vec::new();
        let mut nonlinear = None;
        for c in e.conditions.iter().filter(|c| !c.is_zero()) {
            match c.linear_form() {
                Some((lin, c0)) if lin.is_empty() => return Step::Obstructed(format!("{c0} = 0 at order {k}")),
                Some(form) => linear.push(form),
                None => nonlinear = nonlinear.or_else(|| Some(c.to_string())),
            }
        }
        if !linear.is_empty() {
            return self.solve_linear(k, linear);
        }
        if let Some(poly) = nonlinear {
            return Step::Nonlinear(poly);
        }
        let mut fk = e.particular();
        for v in e.kernel_basis() {
            let p = Poly::var(&self.fresh());
            for (x, c) in fk.iter_mut().zip(&v) {
                if !c.is_zero() {
                    *x = x.clone() + p.clone() * Poly::constant(c.clone());
                }
            }
        }
        self.f.push(LinearMap::from_fn(n, |i, j| fk[i * n + j].clone()));
        Step::Solved
    }

    /// Restricts the earlier free parameters to the solutions of linear
    /// consistency conditions.
    fn solve_linear(&mut self, k: usize, forms: Vec<(BTreeMap<String, F>, F)>) -> Step {
        let vars: Vec<String> = forms
            .iter()
            .flat_map(|(lin, _)| lin.keys().cloned())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let rows: Vec<Vec<F>> = forms
            .iter()
            .map(|(lin, _)| vars.iter().map(|v| lin.get(v).cloned().unwrap_or_else(F::zero)).collect())
            .collect();
        let rhs: Vec<F> = forms.iter().map(|(_, c0)| -c0.clone()).collect();
        let Some(sol) = solve_affine(rows, rhs, vars.len()) else {
            return Step::Obstructed(format!("linear conditions on earlier choices are inconsistent at order {k}"));
        };
        let fresh: Vec<Poly<F>> = sol.kernel.iter().map(|_| Poly::var(&self.fresh())).collect();
        let assignment = vars
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let mut value = Poly::constant(sol.particular[idx].clone());
                for (basis, p) in sol.kernel.iter().zip(&fresh) {
                    if !basis[idx].is_zero() {
                        value = value + p.clone() * Poly::constant(basis[idx].clone());
                    }
                }
                (v.clone(), value)
            })
            .collect();
        self.substitute(&assignment);
        Step::Retry
    }

    fn specialize(&mut self) {
        let vars: std::collections::BTreeSet<String> =
            self.f.iter().flat_map(|m| (0..self.n * self.n).flat_map(|idx| m.get(idx / self.n, idx % self.n).variables())).collect();
        let zero = vars.into_iter().map(|v| (v, Poly::zero())).collect();
        self.substitute(&zero);
        self.specialized = true;
    }

    fn run(mut self) -> std::result::Result<EquivalenceWitness<F>, EquivVerdict<F>> {
        let mut k = 1;
        while k < self.order {
            match self.step(k) {
                Step::Solved => k += 1,
                Step::Retry => {}
                Step::Obstructed(reason) if !self.specialized => {
                    return Err(EquivVerdict::NotEquivalent { order: k, reason });
                }
                Step::Obstructed(reason) => {
                    return Err(EquivVerdict::Unknown {
                        reason: format!("{reason} after fixing free parameters to 0"),
                    })
                }
                Step::Nonlinear(_) if !self.specialized => self.specialize(),
                Step::Nonlinear(poly) => {
                    return Err(EquivVerdict::Unknown {
                        reason: format!("nonlinear condition {poly} = 0 at order {k}"),
                    })
                }
            }
        }
        self.specialize();
        let f = self
            .f
            .iter()
            .map(|m| m.map(|p| p.as_constant().expect("all parameters fixed")))
            .collect();
        Ok(EquivalenceWitness { f })
    }
}

/// Order-by-order search for an equivalence `d1 → d2`.
///
/// Free choices made at one order stay symbolic, so an obstruction that is a
/// nonzero constant proves non-equivalence. Linear conditions on earlier
/// choices are solved exactly. A nonlinear condition makes the solver fix
/// the remaining choices to zero and continue; failures after that are
/// reported as `Unknown`. Every `Equivalent` verdict has passed
/// [`verify_witness`].
pub fn solve_equivalence<F: Field>(
    d1: &TruncatedDeformation<F>,
    d2: &TruncatedDeformation<F>,
) -> Result<EquivVerdict<F>> {
    check_compatible(d1, d2)?;
    if d1.mu()[0] != d2.mu()[0] {
        return Ok(EquivVerdict::NotEquivalent {
            order: 0,
            reason: "the products differ modulo h".into(),
        });
    }
    match Solver::new(d1, d2).run() {
        Err(verdict) => Ok(verdict),
        Ok(w) => {
            if verify_witness(d1, d2, &w)?.passed {
                Ok(EquivVerdict::Equivalent(w))
            } else {
                Ok(EquivVerdict::Unknown {
                    reason: "constructed map failed verification".into(),
                })
            }
        }
    }
}

/// The map `e1 ↦ e1 + μ h e2`, `e2 ↦ ε e2`.
pub fn family2d_witness<F: Field>(epsilon: &TruncSeries<F>, mu: &TruncSeries<F>, order: usize) -> Result<EquivalenceWitness<F>> {
    let m = LinearMap::from_fn(2, |i, j| match (i, j) {
        (0, 0) => TruncSeries::constant_at(F::one(), order),
        (1, 0) => mu.with_order(order).shift_up(1),
        (1, 1) => epsilon.with_order(order),
        _ => TruncSeries::constant_at(F::zero(), order),
    });
    EquivalenceWitness::from_series_map(&m, order)
}

/// `(ε_h, μ_h)` solving `b' = b ε − μ h (a+h)` with `ε ≡ 1 mod h` through
/// degree `k`, or `None` if that truncation is already inconsistent.
fn solve_eqv<F: Field>(
    a: &TruncSeries<F>,
    b: &TruncSeries<F>,
    b2: &TruncSeries<F>,
    k: usize,
    order: usize,
) -> Option<(TruncSeries<F>, TruncSeries<F>)> {
    // Unknowns: ε_1..ε_{N−1} then μ_0..μ_{N−2}.
    let c = a.clone() + TruncSeries::h(order);
    let nvars = 2 * (order - 1);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for deg in 0..=k {
        let mut row = vec![F::zero(); nvars];
        for i in 1..=deg {
            row[i - 1] = b.coeff(deg - i);
        }
        for j in 0..deg {
            row[order - 1 + j] = -c.coeff(deg - 1 - j);
        }
        rows.push(row);
        rhs.push(b2.coeff(deg) - b.coeff(deg));
    }
    let sol = solve_affine(rows, rhs, nvars)?;
    let mut eps = vec![F::one()];
    eps.extend(sol.particular[..order - 1].iter().cloned());
    let mu = sol.particular[order - 1..].to_vec();
    Some((TruncSeries::new(eps, order), TruncSeries::new(mu, order)))
}

fn series_order<R: Ring>(series: &[&TruncSeries<R>]) -> Result<usize> {
    let mut order = None;
    for s in series {
        match (order, s.order()) {
            (Some(a), Some(b)) if a != b => return Err(Error::OrderMismatch(a, b)),
            (None, Some(b)) => order = Some(b),
            _ => {}
        }
    }
    order.ok_or_else(|| Error::Invalid("a truncation order is required".into()))
}

/// Decides equivalence of two members of the two-dimensional family: they
/// are equivalent iff `a = a'` and `b' = b ε − μ h (a+h)` for some
/// `ε ≡ 1 mod h` and some `μ`. The verdict's witness is
/// `e1 ↦ e1 + μ h e2`, `e2 ↦ ε e2`.
pub fn family2d_equiv<F: Field>(
    a: &TruncSeries<F>,
    b: &TruncSeries<F>,
    a2: &TruncSeries<F>,
    b2: &TruncSeries<F>,
) -> Result<EquivVerdict<F>> {
    let order = series_order(&[a, b, a2, b2])?;
    if order < 2 {
        return Err(Error::Invalid(format!("truncation order must be at least 2, got {order}")));
    }
    let (a, b, a2, b2) = (a.with_order(order), b.with_order(order), a2.with_order(order), b2.with_order(order));
    if let Some(k) = (0..order).find(|&k| a.coeff(k) != a2.coeff(k)) {
        return Ok(EquivVerdict::NotEquivalent {
            order: k,
            reason: "a_h differs".into(),
        });
    }
    for k in 0..order {
        if solve_eqv(&a, &b, &b2, k, order).is_none() {
            return Ok(EquivVerdict::NotEquivalent {
                order: k,
                reason: "no admissible ε_h".into(),
            });
        }
    }
    let (eps, mu) = solve_eqv(&a, &b, &b2, order - 1, order).expect("checked above");
    let w = family2d_witness(&eps, &mu, order)?;
    let d1 = crate::deform::family2d_construct(&a, &b)?;
    let d2 = crate::deform::family2d_construct(&a2, &b2)?;
    debug_assert!(verify_witness(&d1, &d2, &w)?.passed);
    Ok(EquivVerdict::Equivalent(w))
}

/// `ε_h` and `μ_h` read back from a family witness.
pub fn family2d_parameters<R: Ring>(w: &EquivalenceWitness<R>) -> (TruncSeries<R>, TruncSeries<R>) {
    let m = w.as_series_map();
    let order = w.order();
    let mu = m.get(1, 0).shift_down(1).map(|s| s.with_order(order)).unwrap_or_else(|_| TruncSeries::constant_at(R::zero(), order));
    (m.get(1, 1).clone(), mu)
}
