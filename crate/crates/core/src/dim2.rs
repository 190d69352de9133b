//! Two-dimensional transposed Poisson algebras with bracket `[e1,e2] = e2`
//! and the classification of their Novikov quantizations.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{
    check_identity, check_op, unit, AlgebraPresentation, BilinearOp, Counterexample, Identity, IdentityReport, LinearMap,
};
use crate::deform::{check_novikov_deformation, family2d_construct, TruncatedDeformation};
use crate::equiv::{family2d_witness, verify_witness, EquivalenceWitness};
use crate::error::{Error, Result};
use crate::linalg::solve_affine;
use crate::scalar::{Field, ParamPoly, Ring, TruncSeries};

/// `[e1,e2] = e2`.
pub fn standard_bracket<R: Ring>() -> BilinearOp<R> {
    BilinearOp::from_entries(2, [(0, 1, 1, R::one()), (1, 0, 1, -R::one())]).expect("in range")
}

/// The Novikov products compatible with `[e1,e2] = e2`:
/// `e1∘e1 = a e1 + b e2`, `e1∘e2 = (a+1) e2`, `e2∘e1 = a e2`, `e2∘e2 = 0`.
pub fn compatible_circ<R: Ring>(a: R, b: R) -> BilinearOp<R> {
    BilinearOp::from_entries(
        2,
        [(0, 0, 0, a.clone()), (0, 0, 1, b), (0, 1, 1, a.clone() + R::one()), (1, 0, 1, a)],
    )
    .expect("in range")
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry<R> {
    /// `"A00"`, `"A01"` or `"Alam"`.
    pub name: &'static str,
    pub lambda: Option<R>,
    pub algebra: AlgebraPresentation<R>,
}

fn entry<R: Ring>(name: &'static str, lambda: Option<R>, dot: BilinearOp<R>) -> CatalogEntry<R> {
    CatalogEntry {
        name,
        lambda,
        algebra: AlgebraPresentation::new(2)
            .with_op("dot", dot)
            .with_op("bracket", standard_bracket()),
    }
}

/// Zero product.
pub fn a00<R: Ring>() -> CatalogEntry<R> {
    entry("A00", None, BilinearOp::zero(2))
}

/// `e1·e1 = e2`.
pub fn a01<R: Ring>() -> CatalogEntry<R> {
    entry("A01", None, BilinearOp::from_entries(2, [(0, 0, 1, R::one())]).expect("in range"))
}

/// `e1·e1 = λ e1`, `e1·e2 = e2·e1 = λ e2`.
pub fn a_lambda<R: Ring>(lambda: R) -> CatalogEntry<R> {
    let dot = BilinearOp::from_entries(
        2,
        [(0, 0, 0, lambda.clone()), (0, 1, 1, lambda.clone()), (1, 0, 1, lambda.clone())],
    )
    .expect("in range");
    entry("Alam", Some(lambda), dot)
}

/// The three catalog entries; `lambda` may be symbolic.
pub fn catalog<R: Ring>(lambda: R) -> Vec<CatalogEntry<R>> {
    vec![a00(), a01(), a_lambda(lambda)]
}

/// The affine family of Novikov products `∘` with `commutator(∘) = bracket`
/// satisfying NCTPA, and the right-commutativity residuals on it.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibleFamily<F> {
    /// `None` when the linear system has no solution.
    pub family: Option<BilinearOp<ParamPoly<F>>>,
    /// Free parameters `p1, p2, ...` in kernel-basis order.
    pub params: Vec<String>,
    /// Every basis triple with a nonzero NOV_RIGHTCOMM residual.
    pub obstructions: Vec<Counterexample<ParamPoly<F>>>,
}

impl<F: Field> CompatibleFamily<F> {
    /// True when a family exists and right-commutativity holds identically.
    pub fn is_novikov(&self) -> bool {
        self.family.is_some() && self.obstructions.is_empty()
    }
}

pub fn solve_novikov_compatible<F: Field>(bracket: &BilinearOp<F>) -> Result<CompatibleFamily<F>> {
    check_op(Identity::Lie, bracket)?.require(Error::NotLie)?;
    let n = bracket.dim();
    let nv = n * n * n;
    let var = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![F::zero(); nv];
                row[var(i, j, k)] = row[var(i, j, k)].clone() + F::one();
                row[var(j, i, k)] = row[var(j, i, k)].clone() - F::one();
                rows.push(row);
                rhs.push(bracket.get(i, j, k).clone());
            }
        }
    }
    let two = F::from_i64(2);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for k in 0..n {
                    let mut row = vec![F::zero(); nv];
                    for m in 0..n {
                        let add = |row: &mut Vec<F>, idx: usize, v: F| row[idx] = row[idx].clone() + v;
                        add(&mut row, var(m, c, k), two.clone() * bracket.get(a, b, m).clone());
                        add(&mut row, var(a, c, m), -bracket.get(m, b, k).clone());
                        add(&mut row, var(b, c, m), -bracket.get(a, m, k).clone());
                    }
                    rows.push(row);
                    rhs.push(F::zero());
                }
            }
        }
    }
    let Some(sol) = solve_affine(rows, rhs, nv) else {
        return Ok(CompatibleFamily {
            family: None,
            params: Vec::new(),
            obstructions: Vec::new(),
        });
    };
    let params: Vec<String> = (1..=sol.kernel.len()).map(|i| format!("p{i}")).collect();
    let family = BilinearOp::from_fn(n, |i, j, k| {
        let idx = var(i, j, k);
        let mut v = ParamPoly::constant(sol.particular[idx].clone());
        for (basis, p) in sol.kernel.iter().zip(&params) {
            if !basis[idx].is_zero() {
                v = v + ParamPoly::term(basis[idx].clone(), crate::scalar::Monomial::var(p));
            }
        }
        v
    });
    let alg = AlgebraPresentation::new(n).with_op("circ", family.clone());
    let mut obstructions = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = Identity::NovRightComm.evaluate(&alg, &[unit(n, i), unit(n, j), unit(n, k)])?;
                if r.iter().any(|x| !x.is_zero()) {
                    obstructions.push(Counterexample {
                        tuple: vec![i, j, k],
                        residual: r,
                    });
                }
            }
        }
    }
    Ok(CompatibleFamily {
        family: Some(family),
        params,
        obstructions,
    })
}

/// NP1 then NP2 for `(dot, circ)`; the report names the first failing
/// identity or `NP` when both hold.
pub fn np_compatibility<R: Ring>(dot: &BilinearOp<R>, circ: &BilinearOp<R>) -> Result<IdentityReport<R>> {
    let alg = AlgebraPresentation::new(dot.dim())
        .with_op("dot", dot.clone())
        .with_op("circ", circ.clone());
    for id in [Identity::Np1, Identity::Np2] {
        let r = check_identity(&alg, id)?;
        if !r.passed {
            return Ok(r);
        }
    }
    Ok(IdentityReport::pass("NP"))
}

/// A basis in which a deformation becomes a member of the family.
#[derive(Clone, Debug)]
pub struct BasisNormalization<F> {
    /// Columns are the new basis vectors in old coordinates.
    pub basis: LinearMap<TruncSeries<F>>,
    pub a: TruncSeries<F>,
    pub b: TruncSeries<F>,
    /// Equivalence from the input to `family2d_construct(a, b)`.
    pub witness: EquivalenceWitness<F>,
    /// The order at which the identification holds.
    pub order: usize,
}

fn violated(msg: impl Into<String>) -> Error {
    Error::PreconditionViolated(msg.into())
}

/// Rewrites a two-dimensional deformation with
/// `e1 ·_h e2 − e2 ·_h e1 = h(μ e1 + ν e2)`, `μ ≡ 0`, `ν ≡ 1 (mod h)`, in the
/// basis `E1 = ν⁻¹ e1`, `E2 = ν⁻¹ μ e1 + e2`.
pub fn normalize_basis<F: Field>(d: &TruncatedDeformation<F>) -> Result<BasisNormalization<F>> {
    if d.dim() != 2 {
        return Err(Error::DimMismatch(d.dim(), 2));
    }
    if let Some(fc) = check_novikov_deformation(d).failed_check() {
        return Err(violated(format!("not a Novikov deformation: {fc}")));
    }
    let n = d.order();
    let op = d.as_series_op();
    let comm: Vec<TruncSeries<F>> = (0..2)
        .map(|k| op.get(0, 1, k).clone() - op.get(1, 0, k).clone())
        .collect();
    for (k, c) in comm.iter().enumerate() {
        if !c.coeff(0).is_zero() {
            return Err(violated(format!("commutator has constant e{} coefficient {}", k + 1, c.coeff(0))));
        }
    }
    // μ and ν are known modulo h^(N−1); their top coefficient is taken as 0.
    let shift = |s: &TruncSeries<F>| s.shift_down(1).expect("constant term checked").with_order(n);
    let (mu, nu) = (shift(&comm[0]), shift(&comm[1]));
    if !mu.coeff(0).is_zero() {
        return Err(violated(format!("μ_h has constant coefficient {}", mu.coeff(0))));
    }
    if !nu.coeff(0).is_one() {
        return Err(violated(format!("ν_h has constant coefficient {}, expected 1", nu.coeff(0))));
    }
    let nu_inv = nu.invert()?;
    let zero = TruncSeries::constant_at(F::zero(), n);
    let one = TruncSeries::constant_at(F::one(), n);
    let p = LinearMap::from_columns(vec![vec![nu_inv.clone(), zero], vec![nu_inv * mu, one]]);
    let q = p.try_inverse().expect("basis change is invertible");
    let new_op = op.change_basis(&p, &q);
    let a = new_op.get(1, 0, 1).clone();
    let b = new_op.get(0, 0, 1).clone();
    for order in [n, n - 1] {
        if order < 2 {
            break;
        }
        let (a_t, b_t) = (a.with_order(order), b.with_order(order));
        let fam = family2d_construct(&a_t, &b_t)?;
        let reduced = new_op.map(|s| s.with_order(order));
        if fam.as_series_op() != reduced {
            continue;
        }
        let witness = EquivalenceWitness::from_series_map(&q.map(|s| s.with_order(order)), order)?;
        if verify_witness(&d.with_order(order)?, &fam, &witness)?.passed {
            return Ok(BasisNormalization {
                basis: p,
                a: a_t,
                b: b_t,
                witness,
                order,
            });
        }
    }
    Err(violated("products do not take the family shape in the normalized basis"))
}

/// Canonical representatives of the equivalence classes of family members.
#[derive(Clone, Debug)]
pub enum NormalCase<F> {
    /// `a = −h`, `b = b_m h^m` with `b_m ≠ 0`.
    Case1 { m: usize, b_m: F },
    /// `b = 0`.
    Case2 { a: TruncSeries<F> },
    /// `b = b_1 h` with `b_1 ≠ 0`.
    Case3 { a: TruncSeries<F>, b1: F },
    /// `b = b_m h^m` with `2 ≤ m ≤ val(a+h)`, `a ≠ −h`.
    Resonant { a: TruncSeries<F>, m: usize, b_m: F },
    /// Constant term `b_0 ≠ 0`: `b = b_0`.
    UnitalCase { a: TruncSeries<F>, b0: F },
    /// `a_0 = λ ≠ 0`, `b = 0`.
    LambdaCase { lambda: TruncSeries<F> },
}

impl<F: Field> PartialEq for NormalCase<F> {
    fn eq(&self, other: &Self) -> bool {
        use NormalCase::*;
        match (self, other) {
            (Case1 { m, b_m }, Case1 { m: m2, b_m: b2 }) => m == m2 && b_m == b2,
            (Case2 { a }, Case2 { a: a2 }) => a == a2,
            (Case3 { a, b1 }, Case3 { a: a2, b1: c2 }) => a == a2 && b1 == c2,
            (Resonant { a, m, b_m }, Resonant { a: a2, m: m2, b_m: b2 }) => a == a2 && m == m2 && b_m == b2,
            (UnitalCase { a, b0 }, UnitalCase { a: a2, b0: c2 }) => a == a2 && b0 == c2,
            (LambdaCase { lambda }, LambdaCase { lambda: l2 }) => lambda == l2,
            _ => false,
        }
    }
}

impl<F: Field> fmt::Display for NormalCase<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalCase::Case1 { m, b_m } => write!(f, "Case1(m={m}, b_m={b_m})"),
            NormalCase::Case2 { a } => write!(f, "Case2(a_h={a})"),
            NormalCase::Case3 { a, b1 } => write!(f, "Case3(a_h={a}, b1={b1})"),
            NormalCase::Resonant { a, m, b_m } => write!(f, "Resonant(a_h={a}, m={m}, b_m={b_m})"),
            NormalCase::UnitalCase { a, b0 } => write!(f, "UnitalCase(a_h={a}, b0={b0})"),
            NormalCase::LambdaCase { lambda } => write!(f, "LambdaCase(lambda_h={lambda})"),
        }
    }
}

/// A canonical pair together with the proof of equivalence
/// `b' = b ε − μ h (a+h)`.
#[derive(Clone, Debug)]
pub struct NormalForm<F> {
    pub case: NormalCase<F>,
    pub a: TruncSeries<F>,
    pub b: TruncSeries<F>,
    pub epsilon: TruncSeries<F>,
    pub mu: TruncSeries<F>,
    /// Equivalence from the input deformation to the canonical one.
    pub witness: EquivalenceWitness<F>,
}

/// Classifies `family2d_construct(a, b)` up to equivalence.
pub fn normalize_family<F: Field>(a: &TruncSeries<F>, b: &TruncSeries<F>) -> Result<NormalForm<F>> {
    let input = family2d_construct(a, b)?;
    let n = input.order();
    let (a, b) = (a.with_order(n), b.with_order(n));
    let (a0, b0) = (a.coeff(0), b.coeff(0));
    let h = TruncSeries::h(n);
    let one = TruncSeries::constant_at(F::one(), n);
    let zero = TruncSeries::constant_at(F::zero(), n);
    let a_plus_h = a.clone() + h.clone();

    // Canonical b reached by rescaling e2 (ε = target / b) or by shearing
    // (μ = b / (h(a+h))).
    let rescale = |target: TruncSeries<F>| -> Result<(TruncSeries<F>, TruncSeries<F>, TruncSeries<F>)> {
        let eps = target.div_exact(&b)?;
        Ok((target, eps, zero.clone()))
    };
    let shear = || -> Result<(TruncSeries<F>, TruncSeries<F>, TruncSeries<F>)> {
        let mu = b.div_exact(&(h.clone() * a_plus_h.clone()))?;
        Ok((zero.clone(), one.clone(), mu))
    };

    let (case, (b_canon, epsilon, mu)) = if !a0.is_zero() {
        if !b0.is_zero() {
            return Err(Error::NotAQuantization(format!("a_0 = {a0} and b_0 = {b0} are both nonzero")));
        }
        (NormalCase::LambdaCase { lambda: a.clone() }, shear()?)
    } else if !b0.is_zero() {
        (
            NormalCase::UnitalCase { a: a.clone(), b0: b0.clone() },
            rescale(TruncSeries::constant_at(b0, n))?,
        )
    } else {
        let v = a_plus_h.valuation();
        match (b.valuation(), v) {
            (None, _) => (NormalCase::Case2 { a: a.clone() }, (zero.clone(), one.clone(), zero.clone())),
            (Some(m), None) => {
                let b_m = b.coeff(m);
                (
                    NormalCase::Case1 { m, b_m: b_m.clone() },
                    rescale(TruncSeries::monomial(b_m, m, n))?,
                )
            }
            (Some(m), Some(v)) if m > v => (NormalCase::Case2 { a: a.clone() }, shear()?),
            (Some(m), Some(_)) => {
                let b_m = b.coeff(m);
                let case = if m == 1 {
                    NormalCase::Case3 { a: a.clone(), b1: b_m.clone() }
                } else {
                    NormalCase::Resonant { a: a.clone(), m, b_m: b_m.clone() }
                };
                (case, rescale(TruncSeries::monomial(b_m, m, n))?)
            }
        }
    };
    let canonical = family2d_construct(&a, &b_canon)?;
    let witness = family2d_witness(&epsilon, &mu, n)?;
    if !verify_witness(&input, &canonical, &witness)?.passed {
        return Err(Error::Invalid("normal form witness failed verification".into()));
    }
    Ok(NormalForm {
        case,
        a,
        b: b_canon,
        epsilon,
        mu,
        witness,
    })
}

/// `(dim Nov(n), dim TPois(n))` for `1 ≤ n ≤ 5`.
pub fn operad_dims(n: usize) -> Result<(u64, u64)> {
    const TPOIS: [u64; 5] = [1, 2, 6, 20, 74];
    if n == 0 || n > TPOIS.len() {
        return Err(Error::OutOfRange(n));
    }
    let nov = num_integer::binomial(2 * n as u64 - 2, n as u64 - 1);
    Ok((nov, TPOIS[n - 1]))
}
