//! End-to-end acceptance run. Prints one line per criterion and exits with a
//! nonzero status if any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use novdef::algebra::*;
use novdef::deform::*;
use novdef::dim2::*;
use novdef::equiv::*;
use novdef::{rational, QPoly, QSeries, TruncSeries, Q};

type Outcome = Result<String, String>;

fn q(n: i64) -> Q {
    rational(n, 1)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const AB_POINTS: [(i64, i64, i64, i64); 5] = [(0, 1, 0, 1), (1, 1, 0, 1), (-1, 2, 3, 1), (2, 1, -1, 3), (1, 3, 1, 2)];

fn ab_points() -> impl Iterator<Item = (Q, Q)> {
    AB_POINTS.iter().map(|&(an, ad, bn, bd)| (rational(an, ad), rational(bn, bd)))
}

fn lemma_family() -> Outcome {
    let start = Instant::now();
    let fam = solve_novikov_compatible(&standard_bracket::<Q>()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let family = fam.family.clone().ok_or("no compatible family")?;
    ensure(fam.params.len() == 2, || format!("{} parameters", fam.params.len()))?;
    ensure(fam.obstructions.is_empty(), || "nonzero residuals".into())?;
    let expected = compatible_circ(QPoly::var(&fam.params[1]), QPoly::var(&fam.params[0]));
    ensure(family == expected, || format!("family differs:\n{family}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("2 parameters, zero residuals, {elapsed:?}"))
}

fn np_corpus() -> Vec<(String, AlgebraPresentation<Q>)> {
    let mut corpus = Vec::new();
    let dots = [
        ("A00".to_string(), a00::<Q>()),
        ("A01".to_string(), a01()),
        ("Alam(1)".to_string(), a_lambda(q(1))),
        ("Alam(2)".to_string(), a_lambda(q(2))),
    ];
    for (name, entry) in dots {
        for (a, b) in ab_points() {
            let np = AlgebraPresentation::new(2)
                .with_op("dot", entry.algebra.op("dot").unwrap().clone())
                .with_op("circ", compatible_circ(a.clone(), b.clone()));
            corpus.push((format!("{name} a={a} b={b}"), np));
        }
    }
    for n in 3..=6 {
        let np = AlgebraPresentation::new(n)
            .with_op("dot", truncated_poly_dot(n))
            .with_op("circ", euler_gelfand(n));
        corpus.push((format!("Euler Q[t]/(t^{n})"), np));
    }
    corpus
}

fn limit_suite() -> Outcome {
    let corpus = np_corpus();
    for (name, np) in &corpus {
        let d = deform_from_np(np, 3).map_err(|e| format!("{name}: {e}"))?;
        let r = check_novikov_deformation(&d);
        ensure(r.passed, || format!("{name}: {r}"))?;
        let lim = classical_limit(&d).map_err(|e| format!("{name}: {e}"))?;
        ensure(lim.tpa.passed, || format!("{name}: {}", lim.tpa))?;
        ensure(lim.lie.passed, || format!("{name}: {}", lim.lie))?;
    }
    Ok(format!("{} Novikov-Poisson algebras, zero failures", corpus.len()))
}

fn random_series(rng: &mut ChaCha8Rng, order: usize, c0: i64) -> QSeries {
    let mut c: Vec<Q> = (0..order).map(|_| q(rng.gen_range(-3..=3))).collect();
    c[0] = q(c0);
    TruncSeries::new(c, order)
}

fn random_family(rng: &mut ChaCha8Rng, order: usize) -> (QSeries, QSeries) {
    let (a0, b0) = [(0, 0), (0, 1), (0, -2), (1, 0), (-3, 0)][rng.gen_range(0..5)];
    let a = if a0 == 0 && rng.gen_bool(0.2) {
        -TruncSeries::h(order)
    } else {
        random_series(rng, order, a0)
    };
    (a, random_series(rng, order, b0))
}

fn canonical_grid() -> Vec<(QSeries, QSeries)> {
    let n = 6;
    let mono = |c: i64, k: usize| TruncSeries::monomial(q(c), k, n);
    let zero = || TruncSeries::constant_at(q(0), n);
    let a_values = [zero(), mono(1, 1), mono(2, 1), mono(1, 2)];
    let mut grid = Vec::new();
    for m in 1..=3 {
        for bm in 1..=2 {
            grid.push((-TruncSeries::h(n), mono(bm, m)));
        }
    }
    for a in &a_values {
        grid.push((a.clone(), zero()));
        for b1 in 1..=2 {
            grid.push((a.clone(), mono(b1, 1)));
        }
    }
    for lambda in 1..=2 {
        grid.push((mono(lambda, 0), zero()));
    }
    grid.push((zero(), mono(1, 0)));
    grid.push((zero(), mono(2, 0)));
    grid.push((mono(1, 1), mono(1, 0)));
    grid
}

fn normal_form_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for trial in 0..50 {
        let (a, b) = random_family(&mut rng, 6);
        let nf = normalize_family(&a, &b).map_err(|e| format!("trial {trial} ({a}, {b}): {e}"))?;
        let v = family2d_equiv(&a, &b, &nf.a, &nf.b).map_err(|e| e.to_string())?;
        ensure(v.is_equivalent(), || format!("trial {trial}: input not equivalent to {}", nf.case))?;
    }
    let grid = canonical_grid();
    for (a, b) in &grid {
        let nf = normalize_family(a, b).map_err(|e| e.to_string())?;
        ensure(&nf.a == a && &nf.b == b, || format!("({a}, {b}) is not canonical: {}", nf.case))?;
    }
    for (i, (a, b)) in grid.iter().enumerate() {
        for (a2, b2) in &grid[i + 1..] {
            let v = family2d_equiv(a, b, a2, b2).map_err(|e| e.to_string())?;
            ensure(v.is_not_equivalent(), || format!("({a}, {b}) vs ({a2}, {b2}) not separated"))?;
        }
    }
    Ok(format!("50 random families normalized, {} canonical forms pairwise inequivalent", grid.len()))
}

fn closed_form_vs_solver() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let order = 5;
    let (mut equivalent, mut inequivalent, mut unknown) = (0, 0, 0);
    for trial in 0..30 {
        let (a, b) = random_family(&mut rng, order);
        let (a2, b2) = if trial % 2 == 0 {
            let eps = random_series(&mut rng, order, 1);
            let mu0 = rng.gen_range(-3..=3);
            let mu = random_series(&mut rng, order, mu0);
            let h = TruncSeries::h(order);
            (a.clone(), b.clone() * eps - mu * h.clone() * (a.clone() + h))
        } else if trial % 4 == 1 {
            (a.clone(), random_family(&mut rng, order).1)
        } else {
            random_family(&mut rng, order)
        };
        let d1 = family2d_construct(&a, &b).map_err(|e| e.to_string())?;
        let d2 = family2d_construct(&a2, &b2).map_err(|e| e.to_string())?;
        let closed = family2d_equiv(&a, &b, &a2, &b2).map_err(|e| e.to_string())?;
        let solved = solve_equivalence(&d1, &d2).map_err(|e| e.to_string())?;
        let label = || format!("trial {trial}: ({a}, {b}) vs ({a2}, {b2})");
        ensure(
            !(closed.is_equivalent() && solved.is_not_equivalent() || closed.is_not_equivalent() && solved.is_equivalent()),
            || format!("{}: verdicts disagree", label()),
        )?;
        for w in [closed.witness(), solved.witness()].into_iter().flatten() {
            let r = verify_witness(&d1, &d2, w).map_err(|e| e.to_string())?;
            ensure(r.passed, || format!("{}: witness fails {r}", label()))?;
        }
        match solved {
            EquivVerdict::Equivalent(_) => equivalent += 1,
            EquivVerdict::NotEquivalent { .. } => inequivalent += 1,
            EquivVerdict::Unknown { .. } => unknown += 1,
        }
    }
    Ok(format!("30 pairs agree ({equivalent} equivalent, {inequivalent} not, {unknown} unknown to the solver)"))
}

fn np_families() -> Outcome {
    let h_series = |c0: Q, c1: Q| TruncSeries::new(vec![c0, c1], 4);
    let mut count = 0;
    for (a1, b1) in ab_points() {
        let circ = compatible_circ(a1.clone(), b1.clone());
        let zero = q(0);
        let cases = [
            (a00::<Q>(), h_series(zero.clone(), a1.clone()), h_series(zero.clone(), b1.clone())),
            (a01(), h_series(zero.clone(), a1.clone()), h_series(q(1), b1.clone())),
            (a_lambda(q(3)), h_series(q(3), a1.clone()), h_series(zero.clone(), b1.clone())),
        ];
        for (idx, (entry, a, b)) in cases.into_iter().enumerate() {
            let np = AlgebraPresentation::new(2)
                .with_op("dot", entry.algebra.op("dot").unwrap().clone())
                .with_op("circ", circ.clone());
            let d = deform_from_np(&np, 4).map_err(|e| e.to_string())?;
            let expected = family2d_construct(&a, &b).map_err(|e| e.to_string())?;
            ensure(d.mu() == expected.mu(), || format!("{} a1={a1} b1={b1}: not A_h^({a}, {b})", entry.name))?;
            let target = match idx {
                0 => continue,
                1 => TruncSeries::constant_at(q(1), 4),
                _ => TruncSeries::constant_at(q(0), 4),
            };
            let nf = normalize_family(&a, &b).map_err(|e| e.to_string())?;
            ensure(nf.a == a && nf.b == target, || format!("{} a1={a1} b1={b1}: normalized to {}", entry.name, nf.case))?;
            count += 1;
        }
    }
    Ok(format!("15 deformations match the family, {count} normalized as predicted"))
}

fn s5_suite() -> Outcome {
    let start = Instant::now();
    for n in 2..=7 {
        let bracket = commutator(&euler_gelfand::<Q>(n));
        let r = check_op(Identity::S5, &bracket).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("dim {n}: {r}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("dims 2..7 vanish, {elapsed:?}"))
}

fn polynomial_span() -> Outcome {
    let n = 5;
    let ambient = AlgebraPresentation::new(n)
        .with_op("dot", BilinearOp::zero(n))
        .with_op("bracket", derivation_bracket_unchecked(&truncated_poly_dot::<Q>(n), &d_dt(n)));
    let span = vec![
        vec![q(1), q(0), q(0), q(0), q(0)],
        vec![q(0), q(2), q(0), q(0), q(0)],
        vec![q(0), q(0), q(-1), q(0), q(0)],
    ];
    let bracket = ambient.op("bracket").unwrap();
    let expect = [
        (1, 2, vec![q(0), q(0), q(-2), q(0), q(0)]),
        (1, 0, vec![q(-2), q(0), q(0), q(0), q(0)]),
        (2, 0, vec![q(0), q(2), q(0), q(0), q(0)]),
    ];
    for (i, j, want) in expect {
        let got = bracket.apply(&span[i], &span[j]);
        ensure(got == want, || format!("bracket ({i},{j}) = {}", format_vector(&got)))?;
    }
    let res = subalgebra_check(&ambient, &span).map_err(|e| e.to_string())?;
    ensure(res.closed, || format!("escape {:?}", res.escape))?;
    Ok("span closed, [2t,-t^2]=-2t^2, [2t,1]=-2, [-t^2,1]=2t".into())
}

fn operad() -> Outcome {
    let expected = [(1, 1), (2, 2), (6, 6), (20, 20), (70, 74)];
    for (n, want) in (1..=5).zip(expected) {
        let got = operad_dims(n).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("n={n}: {got:?}"))?;
    }
    Ok("(1,1) (2,2) (6,6) (20,20) (70,74)".into())
}

fn leftsym_vs_nctpa() -> Outcome {
    let values = [q(-1), q(0), q(1)];
    let mut corpus: Vec<BilinearOp<Q>> = (0..3usize.pow(8))
        .map(|mut code| {
            BilinearOp::from_fn(2, |_, _, _| {
                let v = values[code % 3].clone();
                code /= 3;
                v
            })
        })
        .collect();
    corpus.extend(np_corpus().into_iter().map(|(_, np)| np.op("circ").unwrap().clone()));
    corpus.extend((2..=6).map(euler_gelfand::<Q>));
    let mut considered = 0;
    let mut novikov = 0;
    for circ in &corpus {
        if !check_op(Identity::NovRightComm, circ).map_err(|e| e.to_string())?.passed {
            continue;
        }
        considered += 1;
        let alg = AlgebraPresentation::new(circ.dim()).with_op("circ", circ.clone());
        let left = check_identity(&alg, Identity::NovLeftSym).map_err(|e| e.to_string())?.passed;
        let nctpa = check_identity(&alg, Identity::Nctpa).map_err(|e| e.to_string())?.passed;
        ensure(left == nctpa, || format!("verdicts differ on\n{circ}"))?;
        novikov += usize::from(left);
    }
    Ok(format!("{considered} right-commutative operations agree ({novikov} Novikov)"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("compatible Novikov family of [e1,e2]=e2", lemma_family),
        ("classical limits of Novikov-Poisson deformations", limit_suite),
        ("normal forms of the two-dimensional family", normal_form_round_trip),
        ("closed-form criterion vs order-by-order solver", closed_form_vs_solver),
        ("deformations from two-dimensional Novikov-Poisson algebras", np_families),
        ("quintuple identity on Euler Gel'fand brackets", s5_suite),
        ("derivation bracket on the span {1, 2t, -t^2}", polynomial_span),
        ("operad dimensions", operad),
        ("left symmetry vs NCTPA under right commutativity", leftsym_vs_nctpa),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
