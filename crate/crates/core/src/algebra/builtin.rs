//! Polynomial examples in the monomial basis `e_k = t^k`, `k = 0..n−1`.

use super::{BilinearOp, LinearMap};
use crate::scalar::Ring;

/// Multiplication of `K[t]/(t^n)`.
pub fn truncated_poly_dot<R: Ring>(n: usize) -> BilinearOp<R> {
    BilinearOp::from_fn(n, |i, j, k| if i + j == k { R::one() } else { R::zero() })
}

/// `t·d/dt`, i.e. `t^k ↦ k t^k`. It preserves the ideal `(t^n)`, so it is a
/// derivation of the quotient.
pub fn euler_derivation<R: Ring>(n: usize) -> LinearMap<R> {
    LinearMap::from_fn(n, |i, j| if i == j { R::from_i64(j as i64) } else { R::zero() })
}

/// `d/dt`, i.e. `t^k ↦ k t^(k−1)`.
pub fn d_dt<R: Ring>(n: usize) -> LinearMap<R> {
    LinearMap::from_fn(n, |i, j| if i + 1 == j { R::from_i64(j as i64) } else { R::zero() })
}

/// `t^i ∘ t^j = j t^(i+j)` on `K[t]/(t^n)`.
pub fn euler_gelfand<R: Ring>(n: usize) -> BilinearOp<R> {
    BilinearOp::from_fn(n, |i, j, k| if i + j == k { R::from_i64(j as i64) } else { R::zero() })
}

/// `[t^i, t^j] = (j−i) t^(i+j−1)` on polynomials of degree `< n`, with
/// products of degree `≥ n` dropped. Exact on any span whose brackets stay
/// inside the window.
pub fn witt_window<R: Ring>(n: usize) -> BilinearOp<R> {
    BilinearOp::from_fn(n, |i, j, k| {
        if i + j == k + 1 {
            R::from_i64(j as i64 - i as i64)
        } else {
            R::zero()
        }
    })
}
