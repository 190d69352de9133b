use super::{
    check_op, unit, vec_add, vec_is_zero, vec_sub, AlgebraPresentation, BilinearOp, Identity, IdentityReport, LinearMap,
};
use crate::error::{Error, Result};
use crate::linalg::{rank, solve_affine};
use crate::scalar::{Field, Ring};

/// `[x,y] = x⋄y − y⋄x`.
pub fn commutator<R: Ring>(op: &BilinearOp<R>) -> BilinearOp<R> {
    BilinearOp::from_fn(op.dim(), |i, j, k| op.get(i, j, k).clone() - op.get(j, i, k).clone())
}

/// Checks `D(e_i·e_j) = D(e_i)·e_j + e_i·D(e_j)` on every basis pair.
pub fn is_derivation<R: Ring>(dot: &BilinearOp<R>, d: &LinearMap<R>) -> IdentityReport<R> {
    let n = dot.dim();
    for i in 0..n {
        for j in 0..n {
            let lhs = d.apply(dot.product_basis(i, j));
            let rhs = vec_add(&dot.apply(&d.column(i), &unit(n, j)), &dot.apply(&unit(n, i), &d.column(j)));
            let r = vec_sub(&lhs, &rhs);
            if !vec_is_zero(&r) {
                return IdentityReport::fail("DERIVATION", vec![i, j], r);
            }
        }
    }
    IdentityReport::pass("DERIVATION")
}

fn require_gelfand_input<R: Ring>(dot: &BilinearOp<R>, d: &LinearMap<R>) -> Result<()> {
    if dot.dim() != d.dim() {
        return Err(Error::DimMismatch(dot.dim(), d.dim()));
    }
    check_op(Identity::CommAssoc, dot)?.require(Error::NotCommAssoc)?;
    is_derivation(dot, d).require(Error::NotDerivation)?;
    Ok(())
}

/// The Gel'fand product `x∘y = x·D(y)` without checking that `dot` is
/// commutative associative or that `D` is a derivation.
pub fn gelfand_unchecked<R: Ring>(dot: &BilinearOp<R>, d: &LinearMap<R>) -> BilinearOp<R> {
    let n = dot.dim();
    BilinearOp::from_fn(n, |i, j, k| {
        (0..n).fold(R::zero(), |acc, m| {
            let dm = d.get(m, j);
            if dm.is_zero() {
                acc
            } else {
                acc + dm.clone() * dot.get(i, m, k).clone()
            }
        })
    })
}

/// The Novikov product `x∘y = x·D(y)` of a commutative associative algebra
/// with a derivation.
pub fn gelfand_construct<R: Ring>(dot: &BilinearOp<R>, d: &LinearMap<R>) -> Result<BilinearOp<R>> {
    require_gelfand_input(dot, d)?;
    Ok(gelfand_unchecked(dot, d))
}

pub fn derivation_bracket_unchecked<R: Ring>(dot: &BilinearOp<R>, d: &LinearMap<R>) -> BilinearOp<R> {
    commutator(&gelfand_unchecked(dot, d))
}

/// `[x,y] = x·D(y) − y·D(x)`.
pub fn derivation_bracket<R: Ring>(dot: &BilinearOp<R>, d: &LinearMap<R>) -> Result<BilinearOp<R>> {
    require_gelfand_input(dot, d)?;
    Ok(derivation_bracket_unchecked(dot, d))
}

/// Result of [`subalgebra_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct SubalgebraCheck<R> {
    pub closed: bool,
    /// Structure constants in the span basis, when closed.
    pub induced: Option<AlgebraPresentation<R>>,
    /// First product leaving the span: op label and span indices.
    pub escape: Option<(String, usize, usize)>,
}

/// Tests whether the span of `span` is closed under every operation of `alg`.
pub fn subalgebra_check<F: Field>(alg: &AlgebraPresentation<F>, span: &[Vec<F>]) -> Result<SubalgebraCheck<F>> {
    let n = alg.dim;
    let m = span.len();
    if let Some(v) = span.iter().find(|v| v.len() != n) {
        return Err(Error::DimMismatch(v.len(), n));
    }
    if rank(span.to_vec(), n) < m {
        return Err(Error::DependentSpan);
    }
    let matrix: Vec<Vec<F>> = (0..n).map(|k| span.iter().map(|v| v[k].clone()).collect()).collect();
    let mut induced = AlgebraPresentation::new(m);
    induced.basis_labels = (1..=m).map(|i| format!("f{i}")).collect();
    for (label, op) in &alg.ops {
        let mut products = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let p = op.apply(&span[i], &span[j]);
                match solve_affine(matrix.clone(), p, m) {
                    Some(sol) => products.push(sol.particular),
                    None => {
                        return Ok(SubalgebraCheck {
                            closed: false,
                            induced: None,
                            escape: Some((label.clone(), i, j)),
                        })
                    }
                }
            }
        }
        let mut it = products.into_iter();
        induced = induced.with_op(label, BilinearOp::from_products(m, |_, _| it.next().expect("m*m products")));
    }
    Ok(SubalgebraCheck {
        closed: true,
        induced: Some(induced),
        escape: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{d_dt, euler_derivation, euler_gelfand, truncated_poly_dot};
    use crate::scalar::{rational, Rational};

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    #[test]
    fn commutator_of_commutative_op_vanishes() {
        let dot = truncated_poly_dot::<Rational>(4);
        assert!(commutator(&dot).is_zero());
    }

    #[test]
    fn euler_gelfand_constants() {
        let circ = gelfand_construct(&truncated_poly_dot::<Rational>(4), &euler_derivation(4)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let expected = if i + j == k { q(j as i64) } else { q(0) };
                    assert_eq!(*circ.get(i, j, k), expected, "({i},{j},{k})");
                }
            }
        }
        assert_eq!(circ, euler_gelfand(4));
    }

    #[test]
    fn zero_inputs_give_zero_product() {
        let dot = truncated_poly_dot::<Rational>(3);
        assert!(gelfand_construct(&dot, &LinearMap::zero(3)).unwrap().is_zero());
        assert!(gelfand_construct(&BilinearOp::<Rational>::zero(3), &euler_derivation(3)).unwrap().is_zero());
    }

    #[test]
    fn d_dt_is_not_a_derivation_of_the_quotient() {
        let r = is_derivation(&truncated_poly_dot::<Rational>(4), &d_dt(4));
        let c = r.counterexample.unwrap();
        assert_eq!(c.tuple, vec![1, 3]);
        assert_eq!(c.residual, vec![q(0), q(0), q(0), q(-4)]);
        assert!(matches!(
            gelfand_construct(&truncated_poly_dot::<Rational>(4), &d_dt(4)),
            Err(Error::NotDerivation(_))
        ));
    }

    #[test]
    fn non_associative_dot_rejected() {
        let dot = BilinearOp::from_entries(2, [(0, 0, 1, q(1)), (1, 1, 0, q(1))]).unwrap();
        assert!(matches!(
            gelfand_construct(&dot, &LinearMap::identity(2)),
            Err(Error::NotCommAssoc(_))
        ));
    }

    #[test]
    fn full_span_reproduces_algebra() {
        let alg = AlgebraPresentation::new(3).with_op("circ", euler_gelfand::<Rational>(3));
        let span: Vec<Vec<Rational>> = (0..3).map(|i| unit(3, i)).collect();
        let res = subalgebra_check(&alg, &span).unwrap();
        assert!(res.closed);
        assert_eq!(res.induced.unwrap().ops, alg.ops);
    }

    #[test]
    fn span_of_t_not_closed() {
        let alg = AlgebraPresentation::new(4).with_op("circ", euler_gelfand::<Rational>(4));
        let res = subalgebra_check(&alg, &[unit(4, 1)]).unwrap();
        assert!(!res.closed);
        assert_eq!(res.escape, Some(("circ".to_string(), 0, 0)));
    }

    #[test]
    fn dependent_span_rejected() {
        let alg = AlgebraPresentation::new(2).with_op("dot", BilinearOp::<Rational>::zero(2));
        let span = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(subalgebra_check(&alg, &span), Err(Error::DependentSpan));
    }
}
