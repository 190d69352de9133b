use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{commutator, format_vector, unit, vec_add, vec_is_zero, vec_scale, vec_sub, AlgebraPresentation, BilinearOp, Vector};
use crate::error::{Error, FailedCheck, Result};
use crate::scalar::Ring;

/// The multilinear identities the engine knows.
///
/// `∘` is the op labelled `circ`, `·` is `dot` and `[,]` is `bracket`. When an
/// algebra has no `bracket`, identities that need one use the commutator of
/// `circ`. NCTPA always uses the commutator of `circ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `(x∘y)∘z − (y∘x)∘z = x∘(y∘z) − y∘(x∘z)`
    NovLeftSym,
    /// `(x∘y)∘z = (x∘z)∘y`
    NovRightComm,
    /// `2[x,y]∘z = [x∘z,y] + [x,y∘z]`
    Nctpa,
    /// `2[x,y]·z = [x,y·z] + [x·z,y]`
    Tpa,
    /// `(x·y)∘z = x·(y∘z)`
    Np1,
    /// `(x∘y)·z − (y∘x)·z = x∘(y·z) − y∘(x·z)`
    Np2,
    /// Antisymmetry on pairs, then the Jacobi identity on triples.
    Lie,
    /// Commutativity on pairs, then associativity on triples.
    CommAssoc,
    /// `Σ_{σ∈S4} sign(σ) [x_σ1,[x_σ2,[x_σ3,[x_σ4,x5]]]] = 0`
    S5,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::NovLeftSym,
        Identity::NovRightComm,
        Identity::Nctpa,
        Identity::Tpa,
        Identity::Np1,
        Identity::Np2,
        Identity::Lie,
        Identity::CommAssoc,
        Identity::S5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::NovLeftSym => "NOV_LEFTSYM",
            Identity::NovRightComm => "NOV_RIGHTCOMM",
            Identity::Nctpa => "NCTPA",
            Identity::Tpa => "TPA",
            Identity::Np1 => "NP1",
            Identity::Np2 => "NP2",
            Identity::Lie => "LIE",
            Identity::CommAssoc => "COMM_ASSOC",
            Identity::S5 => "S5",
        }
    }

    /// Number of arguments of the main identity (pairs come first for LIE
    /// and COMM_ASSOC).
    pub fn arity(self) -> usize {
        if self == Identity::S5 {
            5
        } else {
            3
        }
    }

    /// Evaluates the identity's residual on arbitrary elements.
    pub fn evaluate<R: Ring>(self, alg: &AlgebraPresentation<R>, args: &[Vector<R>]) -> Result<Vector<R>> {
        let ops = Ops::resolve(alg, self)?;
        assert_eq!(args.len(), self.arity(), "wrong number of arguments");
        Ok(ops.triple_residual(self, args))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown identity {0:?}")]
pub struct UnknownIdentity(pub String);

impl FromStr for Identity {
    type Err = UnknownIdentity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == norm)
            .ok_or_else(|| UnknownIdentity(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample<R> {
    /// Zero-based basis indices.
    pub tuple: Vec<usize>,
    pub residual: Vector<R>,
}

/// Outcome of checking one identity on every basis tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport<R> {
    pub identity: String,
    pub passed: bool,
    /// The lexicographically first failing tuple; present iff `!passed`.
    pub counterexample: Option<Counterexample<R>>,
}

impl<R: Ring> IdentityReport<R> {
    pub fn pass(identity: impl Into<String>) -> Self {
        Self {
            identity: identity.into(),
            passed: true,
            counterexample: None,
        }
    }

    pub fn fail(identity: impl Into<String>, tuple: Vec<usize>, residual: Vector<R>) -> Self {
        Self {
            identity: identity.into(),
            passed: false,
            counterexample: Some(Counterexample { tuple, residual }),
        }
    }

    fn from_search(identity: impl Into<String>, found: Option<Counterexample<R>>) -> Self {
        Self {
            identity: identity.into(),
            passed: found.is_none(),
            counterexample: found,
        }
    }

    pub fn failed_check(&self) -> Option<FailedCheck> {
        self.counterexample.as_ref().map(|c| FailedCheck {
            identity: self.identity.clone(),
            tuple: c.tuple.clone(),
            residual: c.residual.iter().map(ToString::to_string).collect(),
        })
    }

    /// `Ok(self)` when passed, otherwise the error built from the failure.
    pub fn require(self, err: impl FnOnce(FailedCheck) -> Error) -> Result<Self> {
        match self.failed_check() {
            None => Ok(self),
            Some(fc) => Err(err(fc)),
        }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> IdentityReport<S> {
        IdentityReport {
            identity: self.identity.clone(),
            passed: self.passed,
            counterexample: self.counterexample.as_ref().map(|c| Counterexample {
                tuple: c.tuple.clone(),
                residual: c.residual.iter().map(&f).collect(),
            }),
        }
    }
}

impl<R: Ring> fmt::Display for IdentityReport<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{}: pass", self.identity),
            Some(c) => {
                let tuple: Vec<String> = c.tuple.iter().map(|i| format!("e{}", i + 1)).collect();
                write!(
                    f,
                    "{}: FAIL at ({}) residual {}",
                    self.identity,
                    tuple.join(","),
                    format_vector(&c.residual)
                )
            }
        }
    }
}

/// Checks `identity` on every basis tuple of `alg`.
pub fn check_identity<R: Ring>(alg: &AlgebraPresentation<R>, identity: Identity) -> Result<IdentityReport<R>> {
    let ops = Ops::resolve(alg, identity)?;
    let n = alg.dim;
    let name = identity.name();
    let found = match identity {
        Identity::Lie => {
            let b = ops.bracket();
            first_failure(n, 2, |t| {
                vec_add(b.product_basis(t[0], t[1]), b.product_basis(t[1], t[0]))
            })
            .or_else(|| first_failure(n, 3, |t| ops.triple_residual(identity, &units(n, t))))
        }
        Identity::CommAssoc => {
            let d = ops.dot();
            first_failure(n, 2, |t| vec_sub(d.product_basis(t[0], t[1]), d.product_basis(t[1], t[0])))
                .or_else(|| first_failure(n, 3, |t| ops.triple_residual(identity, &units(n, t))))
        }
        Identity::S5 => s5_failure(ops.bracket()),
        _ => first_failure(n, 3, |t| ops.triple_residual(identity, &units(n, t))),
    };
    Ok(IdentityReport::from_search(name, found))
}

/// Checks an identity that involves a single operation, which plays the
/// role of `circ` (Novikov identities, NCTPA), `bracket` (LIE, S5) or `dot`
/// (COMM_ASSOC).
pub fn check_op<R: Ring>(identity: Identity, op: &BilinearOp<R>) -> Result<IdentityReport<R>> {
    let label = match identity {
        Identity::NovLeftSym | Identity::NovRightComm | Identity::Nctpa => "circ",
        Identity::Lie | Identity::S5 => "bracket",
        Identity::CommAssoc => "dot",
        Identity::Tpa | Identity::Np1 | Identity::Np2 => {
            return Err(Error::MissingOp(format!("{identity} needs two operations")))
        }
    };
    check_identity(&AlgebraPresentation::new(op.dim()).with_op(label, op.clone()), identity)
}

fn units<R: Ring>(n: usize, t: &[usize]) -> Vec<Vector<R>> {
    t.iter().map(|&i| unit(n, i)).collect()
}

/// Lexicographically first tuple in `[0, n)^arity` with nonzero residual.
fn first_failure<R: Ring>(
    n: usize,
    arity: usize,
    residual: impl Fn(&[usize]) -> Vector<R> + Sync,
) -> Option<Counterexample<R>> {
    (0..n).into_par_iter().find_map_first(|first| {
        let mut t = vec![0; arity];
        t[0] = first;
        loop {
            let r = residual(&t);
            if !vec_is_zero(&r) {
                return Some(Counterexample { tuple: t, residual: r });
            }
            let mut pos = arity - 1;
            loop {
                if pos == 0 {
                    return None;
                }
                t[pos] += 1;
                if t[pos] < n {
                    break;
                }
                t[pos] = 0;
                pos -= 1;
            }
        }
    })
}

fn permutations4() -> Vec<([usize; 4], bool)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                        out.push((p, inversions % 2 == 0));
                    }
                }
            }
        }
    }
    out
}

/// S5 on basis quintuples, using tables of the nested brackets
/// `[e_a,[e_b,[e_c,[e_d,e_e]]]]`.
fn s5_failure<R: Ring>(b: &BilinearOp<R>) -> Option<Counterexample<R>> {
    let n = b.dim();
    let mut table: Vec<Vector<R>> = (0..n * n).map(|idx| b.product_basis(idx / n, idx % n).to_vec()).collect();
    for _ in 0..3 {
        table = (0..n)
            .into_par_iter()
            .flat_map_iter(|c| table.iter().map(move |v| b.apply(&unit(n, c), v)).collect::<Vec<_>>())
            .collect();
    }
    let perms = permutations4();
    first_failure(n, 5, |t| {
        let mut acc = vec![R::zero(); n];
        for (p, even) in &perms {
            let idx = p.iter().fold(0, |acc, &q| acc * n + t[q]) * n + t[4];
            let v = &table[idx];
            acc = if *even { vec_add(&acc, v) } else { vec_sub(&acc, v) };
        }
        acc
    })
}

struct Ops<R> {
    dot: Option<BilinearOp<R>>,
    circ: Option<BilinearOp<R>>,
    bracket: Option<BilinearOp<R>>,
}

impl<R: Ring> Ops<R> {
    fn resolve(alg: &AlgebraPresentation<R>, identity: Identity) -> Result<Self> {
        let circ = || alg.op("circ").cloned();
        let bracket = || match alg.ops.get("bracket") {
            Some(b) => Ok(b.clone()),
            None => alg
                .op("circ")
                .map(commutator)
                .map_err(|_| Error::MissingOp("bracket".to_string())),
        };
        let dot = || alg.op("dot").cloned();
        let mut ops = Ops {
            dot: None,
            circ: None,
            bracket: None,
        };
        match identity {
            Identity::NovLeftSym | Identity::NovRightComm => ops.circ = Some(circ()?),
            Identity::Nctpa => {
                let c = circ()?;
                ops.bracket = Some(commutator(&c));
                ops.circ = Some(c);
            }
            Identity::Tpa => {
                ops.dot = Some(dot()?);
                ops.bracket = Some(bracket()?);
            }
            Identity::Np1 | Identity::Np2 => {
                ops.dot = Some(dot()?);
                ops.circ = Some(circ()?);
            }
            Identity::Lie | Identity::S5 => ops.bracket = Some(bracket()?),
            Identity::CommAssoc => ops.dot = Some(dot()?),
        }
        Ok(ops)
    }

    fn dot(&self) -> &BilinearOp<R> {
        self.dot.as_ref().expect("dot resolved")
    }

    fn circ(&self) -> &BilinearOp<R> {
        self.circ.as_ref().expect("circ resolved")
    }

    fn bracket(&self) -> &BilinearOp<R> {
        self.bracket.as_ref().expect("bracket resolved")
    }

    /// Residual of the main identity (for LIE: Jacobi, for COMM_ASSOC:
    /// associativity).
    fn triple_residual(&self, identity: Identity, args: &[Vector<R>]) -> Vector<R> {
        let two = R::from_i64(2);
        match identity {
            Identity::NovLeftSym => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let o = self.circ();
                let lhs = vec_sub(&o.apply(&o.apply(x, y), z), &o.apply(&o.apply(y, x), z));
                let rhs = vec_sub(&o.apply(x, &o.apply(y, z)), &o.apply(y, &o.apply(x, z)));
                vec_sub(&lhs, &rhs)
            }
            Identity::NovRightComm => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let o = self.circ();
                vec_sub(&o.apply(&o.apply(x, y), z), &o.apply(&o.apply(x, z), y))
            }
            Identity::Nctpa => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let (o, b) = (self.circ(), self.bracket());
                let lhs = vec_scale(&two, &o.apply(&b.apply(x, y), z));
                let rhs = vec_add(&b.apply(&o.apply(x, z), y), &b.apply(x, &o.apply(y, z)));
                vec_sub(&lhs, &rhs)
            }
            Identity::Tpa => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let (d, b) = (self.dot(), self.bracket());
                let lhs = vec_scale(&two, &d.apply(&b.apply(x, y), z));
                let rhs = vec_add(&b.apply(x, &d.apply(y, z)), &b.apply(&d.apply(x, z), y));
                vec_sub(&lhs, &rhs)
            }
            Identity::Np1 => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let (d, o) = (self.dot(), self.circ());
                vec_sub(&o.apply(&d.apply(x, y), z), &d.apply(x, &o.apply(y, z)))
            }
            Identity::Np2 => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let (d, o) = (self.dot(), self.circ());
                let lhs = vec_sub(&d.apply(&o.apply(x, y), z), &d.apply(&o.apply(y, x), z));
                let rhs = vec_sub(&o.apply(x, &d.apply(y, z)), &o.apply(y, &d.apply(x, z)));
                vec_sub(&lhs, &rhs)
            }
            Identity::Lie => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let b = self.bracket();
                let s = vec_add(&b.apply(x, &b.apply(y, z)), &b.apply(y, &b.apply(z, x)));
                vec_add(&s, &b.apply(z, &b.apply(x, y)))
            }
            Identity::CommAssoc => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let d = self.dot();
                vec_sub(&d.apply(&d.apply(x, y), z), &d.apply(x, &d.apply(y, z)))
            }
            Identity::S5 => {
                let b = self.bracket();
                let mut acc = vec![R::zero(); b.dim()];
                for (p, even) in permutations4() {
                    let mut v = b.apply(&args[p[3]], &args[4]);
                    for pos in (0..3).rev() {
                        v = b.apply(&args[p[pos]], &v);
                    }
                    acc = if even { vec_add(&acc, &v) } else { vec_sub(&acc, &v) };
                }
                acc
            }
        }
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
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert_eq!("nov-leftsym".parse::<Identity>().unwrap(), Identity::NovLeftSym);
        assert_eq!("tpa".parse::<Identity>().unwrap(), Identity::Tpa);
        assert!("jacobi".parse::<Identity>().is_err());
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations4();
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|(_, even)| *even).count(), 12);
        assert!(perms.contains(&([1, 0, 2, 3], false)));
    }

    #[test]
    fn tpa_counterexample() {
        let dot = BilinearOp::from_entries(2, [(0, 0, 0, q(1))]).unwrap();
        let bracket = BilinearOp::from_entries(2, [(0, 1, 1, q(1)), (1, 0, 1, q(-1))]).unwrap();
        let alg = AlgebraPresentation::new(2).with_op("dot", dot).with_op("bracket", bracket);
        let r = check_identity(&alg, Identity::Tpa).unwrap();
        assert!(!r.passed);
        let c = r.counterexample.unwrap();
        assert_eq!(c.tuple, vec![0, 1, 0]);
        assert_eq!(c.residual, vec![q(0), q(-1)]);
    }

    #[test]
    fn missing_op() {
        let alg = AlgebraPresentation::<Rational>::new(1);
        assert_eq!(check_identity(&alg, Identity::Np1), Err(Error::MissingOp("dot".into())));
        assert_eq!(check_identity(&alg, Identity::Lie), Err(Error::MissingOp("bracket".into())));
    }

    #[test]
    fn lie_reports_antisymmetry_on_pairs() {
        let b = BilinearOp::from_entries(1, [(0, 0, 0, q(1))]).unwrap();
        let r = check_op(Identity::Lie, &b).unwrap();
        assert_eq!(r.counterexample.unwrap().tuple, vec![0, 0]);
    }
}
