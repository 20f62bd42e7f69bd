//! Acceptance suite: one line per criterion. Each criterion combines the
//! built-in verification check with independent assertions made here
//! directly against the public API.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

use voaplus_core::autgroup::{
    aut_group, default_kind, dihedral_check, distinguished_set, is_automorphism, permutes_set, StructureTag,
};
use voaplus_core::classify::{
    enumerate_idempotents, enumerate_virasoro, proper_summand_set, type1_parameters, VirasoroOutcome,
};
use voaplus_core::poly::Poly;
use voaplus_core::polysolve::{solve, vanishes_on_solutions, virasoro_system, PolySystem, SolveStatus};
use voaplus_core::rational::texts;
use voaplus_core::scalar::{q, qi};
use voaplus_core::spectra::ad_spectrum;
use voaplus_core::verify::{bounded_rational_search, fixture_algebra, three_pair_frame, verify_one};
use voaplus_core::{Algebra, Q};

type Failures = Vec<String>;

fn expect(f: &mut Failures, ok: bool, msg: impl Into<String>) {
    if !ok {
        f.push(msg.into());
    }
}

fn sorted(mut v: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    v.sort();
    v
}

fn b2_minus() -> Algebra {
    fixture_algebra([[4, -2], [-2, 4]])
}

fn b1() -> Algebra {
    fixture_algebra([[4, 1], [1, 4]])
}

/// The six `(1/32, 0, 0, ±1/8, 0, 0)`-type points.
fn six_points() -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for k in 0..3 {
        for sign in [1, -1] {
            let mut x = vec![Q::zero(); 6];
            x[k] = q(1, 32);
            x[3 + k] = q(sign, 8);
            out.push(x);
        }
    }
    sorted(out)
}

/// The frame equations transcribed by hand, variables `a..f`.
fn hand_frame_system() -> PolySystem {
    let v = |i: usize| Poly::var(i);
    let k = |n: i64| Poly::constant(qi(n));
    let (a, b, c, d, e, f) = (v(0), v(1), v(2), v(3), v(4), v(5));
    let sq = |x: &Poly| x.mul(x);
    // x = 16x^2 + 4xy + 4xz - 4yz + p^2
    let diag = |x: &Poly, y: &Poly, z: &Poly, p: &Poly| {
        x.sub(&sq(x).scale(&qi(16)))
            .sub(&x.mul(y).scale(&qi(4)))
            .sub(&x.mul(z).scale(&qi(4)))
            .add(&y.mul(z).scale(&qi(4)))
            .sub(&sq(p))
    };
    // p = 2p(16x + 4y + 4z) + 2 p' p''
    let off = |p: &Poly, x: &Poly, y: &Poly, z: &Poly, p1: &Poly, p2: &Poly| {
        let lin = x.scale(&qi(16)).add(&y.scale(&qi(4))).add(&z.scale(&qi(4)));
        p.sub(&p.mul(&lin).scale(&qi(2))).sub(&p1.mul(p2).scale(&qi(2)))
    };
    let norm = sq(&a)
        .add(&sq(&b))
        .add(&sq(&c))
        .scale(&qi(32))
        .add(&a.mul(&b).add(&a.mul(&c)).add(&b.mul(&c)).scale(&qi(16)))
        .add(&sq(&d).add(&sq(&e)).add(&sq(&f)).scale(&qi(2)))
        .sub(&k(1).scale(&q(1, 16)));
    PolySystem::new(
        "a b c d e f".split(' ').map(String::from).collect(),
        vec![
            diag(&a, &b, &c, &d),
            diag(&b, &c, &a, &e),
            diag(&c, &a, &b, &f),
            off(&d, &a, &b, &c, &e, &f),
            off(&e, &b, &a, &c, &d, &f),
            off(&f, &c, &a, &b, &d, &e),
            norm,
        ],
    )
}

fn criterion_1(f: &mut Failures) {
    let sys = hand_frame_system();
    let v = solve(&sys).expect("hand system is well formed");
    expect(f, v.status == SolveStatus::ZeroDimensional, format!("hand system: status {:?}", v.status));
    expect(f, v.is_complete() && v.quadratic_solutions.is_empty(), "hand system: non-rational solutions");
    expect(f, v.multiplicity_count == Some(6), format!("hand system: {:?} complex solutions", v.multiplicity_count));
    expect(
        f,
        v.rational_solutions == six_points(),
        format!("hand system: {:?}", v.rational_solutions.iter().map(|x| texts(x)).collect::<Vec<_>>()),
    );
    // the same points, read in the algebra, are norm-1/16 idempotents
    let alg = b2_minus();
    let frame = three_pair_frame(&alg).expect("three norm-4 pairs");
    for p in six_points() {
        let w = frame.to_basis(&p);
        expect(
            f,
            alg.is_idempotent(&w) && alg.form(&w, &w) == q(1, 16),
            format!("{:?} is not a norm-1/16 idempotent", texts(&p)),
        );
    }
}

fn criterion_2(f: &mut Failures) {
    let alg = fixture_algebra([[4, 0], [0, 4]]);
    let VirasoroOutcome::Finite { records, irrational, complete } =
        enumerate_virasoro(&alg, &q(1, 2)).expect("solvable")
    else {
        f.push("positive-dimensional".into());
        return;
    };
    expect(f, complete && irrational.is_empty(), "incomplete or irrational");
    let got = sorted(records.iter().map(|r| r.element.coords.clone()).collect());
    let mut expected = Vec::new();
    for a in [[1, 0], [0, 1]] {
        for sg in [1, -1] {
            let x = alg.square_of(a).scale(&q(1, 16)).add(&alg.v(a).unwrap().scale(&q(sg, 4)));
            expected.push(x.coords);
        }
    }
    expect(f, got == sorted(expected), format!("{} vectors", got.len()));
    expect(f, got.iter().all(|x| x[1].is_zero()), "nonzero mixed coordinate");
    for u in &got {
        expect(
            f,
            alg.mul(u, u) == u.iter().map(|x| x * qi(2)).collect::<Vec<_>>() && alg.form(u, u) == q(1, 4),
            "axioms fail",
        );
    }
}

fn criterion_3(f: &mut Failures) {
    for g in [[[4, 2], [2, 4]], [[4, -2], [-2, 4]]] {
        let alg = fixture_algebra(g);
        let VirasoroOutcome::Finite { records, complete, .. } = enumerate_virasoro(&alg, &q(1, 2)).expect("solvable")
        else {
            f.push(format!("{g:?}: positive-dimensional"));
            continue;
        };
        let us: Vec<Vec<Q>> = records.iter().map(|r| r.element.coords.clone()).collect();
        expect(f, complete && us.len() == 6, format!("{g:?}: {} vectors", us.len()));
        let mut zero_pairs = 0;
        for i in 0..us.len() {
            for j in i + 1..us.len() {
                let x = alg.form(&us[i], &us[j]);
                if x.is_zero() {
                    zero_pairs += 1;
                } else {
                    expect(f, x == q(1, 32), format!("{g:?}: form value {x}"));
                }
            }
        }
        expect(f, zero_pairs == 3, format!("{g:?}: {zero_pairs} orthogonal pairs"));
        // every vector lies in exactly one orthogonal pair
        for (i, u) in us.iter().enumerate() {
            let partners = us.iter().enumerate().filter(|(j, w)| *j != i && alg.form(u, w).is_zero()).count();
            expect(f, partners == 1, format!("{g:?}: vector {i} has {partners} orthogonal partners"));
        }
        if g[0][1] == -2 {
            // halves agree with the frame solutions of criterion 1
            let frame = three_pair_frame(&alg).unwrap();
            let halves = sorted(us.iter().map(|u| u.iter().map(|x| x / qi(2)).collect()).collect());
            let frame_pts = sorted(six_points().iter().map(|p| frame.to_basis(p)).collect());
            expect(f, halves == frame_pts, "halved Virasoro vectors differ from the frame idempotents");
        }
    }
}

fn criterion_4(f: &mut Failures) {
    let alg = b1();
    let en = enumerate_idempotents(&alg, &[1], None).expect("solvable");
    expect(f, en.complete && en.records.len() == 8, format!("{} type-1 idempotents", en.records.len()));
    let mut small = Vec::new();
    for r in &en.records {
        let w = &r.element.coords;
        expect(f, alg.is_idempotent(w), "not idempotent");
        let p = type1_parameters(&alg, w).expect("single v-support");
        let ok = p.a1 == q(1, 32)
            && p.a2_lattice.is_zero()
            && (p.c == q(1, 8) || p.c == q(-1, 8))
            && (p.a3.is_zero() || p.a3 == q(1, 16));
        expect(f, ok, format!("parameters {p:?}"));
        if alg.form(w, w) == q(1, 16) {
            small.push(w.clone());
        }
    }
    expect(f, small.len() == 4, format!("{} of norm 1/16", small.len()));
    let ps = proper_summand_set(&alg).expect("b = 1");
    let summands =
        sorted(ps.pairs.iter().flat_map(|(a, b)| [a.element.coords.clone(), b.element.coords.clone()]).collect());
    expect(f, summands == sorted(small.clone()), "proper summands differ from the norm-1/16 type-1 idempotents");
    // summand pairs are orthogonal idempotents
    for (a, b) in &ps.pairs {
        let (x, y) = (&a.element.coords, &b.element.coords);
        expect(f, alg.mul(x, y).iter().all(Zero::is_zero), "summand pair has nonzero product");
        expect(f, alg.is_idempotent(&voaplus_core::algebra::add(x, y)), "summand pair does not add to an idempotent");
    }
}

fn criterion_5(f: &mut Failures) {
    let alg = b1();
    let small = vec![qi(0), qi(0), q(1, 32), q(1, 4), qi(1)];
    let large = vec![qi(0), q(3, 4), q(31, 32), qi(1), qi(1)];
    let en = enumerate_idempotents(&alg, &[1], None).expect("solvable");
    for r in &en.records {
        let s = ad_spectrum(&alg, &r.element.coords);
        let expected = if r.norm == q(1, 16) { &small } else { &large };
        expect(
            f,
            &s.multiset() == expected && s.irrational_factors.is_empty(),
            format!("norm {}: {:?}", r.norm, texts(&s.multiset())),
        );
        // w is an eigenvector for 1
        let m = &s.matrix;
        expect(f, m.mul_vec(&r.element.coords) == r.element.coords, "ad(w) w != w");
    }
}

fn criterion_6(f: &mut Failures) {
    let alg = b1();
    let ds = distinguished_set(&alg, default_kind(&alg)).expect("distinguished set");
    let g = aut_group(&alg, &ds, true).expect("search runs");
    expect(f, g.order == 8 && g.elements.len() == 8, format!("order {}", g.order));
    expect(f, dihedral_check(&g), "not dihedral");
    let id = alg.identity_element().coords;
    let type1: Vec<Vec<Q>> =
        enumerate_idempotents(&alg, &[1], None).unwrap().records.into_iter().map(|r| r.element.coords).collect();
    for m in &g.elements {
        expect(f, is_automorphism(&alg, m, true), "element is not a form-preserving automorphism");
        expect(f, m.mul_vec(&id) == id, "identity not fixed");
        expect(f, permutes_set(m, &type1), "type-1 set not permuted");
    }
}

fn criterion_7(f: &mut Failures) {
    let alg = fixture_algebra([[4, 0], [0, 8]]);
    let sys = virasoro_system(&alg, &qi(1));
    let v = solve(&sys).expect("solvable");
    expect(f, v.status == SolveStatus::PositiveDimensional, format!("status {:?}", v.status));
    for lambda in alg.shell() {
        let i = alg.v_index(lambda).unwrap();
        expect(f, vanishes_on_solutions(&sys, &Poly::var(i)), format!("v-coordinate {i} does not vanish"));
    }
    let r2 = alg.square_of([1, 0]).scale(&q(1, 8)).coords;
    expect(f, sys.satisfied_by(&r2), "(1/8) r^2 does not satisfy the system");
    expect(
        f,
        alg.mul(&r2, &r2) == r2.iter().map(|x| x * qi(2)).collect::<Vec<_>>() && alg.form(&r2, &r2) == q(1, 2),
        "(1/8) r^2 is not a c=1 Virasoro vector",
    );
}

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn element(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(small_q(), dim)
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

/// Failure reason with the shrunk input written as `p/q` lists.
fn counterexample<T>(e: TestError<T>, parts: impl Fn(T) -> Vec<Vec<Q>>) -> String {
    match e {
        TestError::Abort(r) => format!("aborted: {r}"),
        TestError::Fail(r, v) => {
            let args: Vec<String> = parts(v).iter().map(|x| texts(x).join(",")).collect();
            format!("{} at ({})", r.message().lines().next().unwrap_or(""), args.join("; "))
        }
    }
}

fn criterion_8(f: &mut Failures) {
    for (name, g) in [
        ("b0", [[4, 0], [0, 4]]),
        ("b1", [[4, 1], [1, 4]]),
        ("bm1", [[4, -1], [-1, 4]]),
        ("b2", [[4, 2], [2, 4]]),
        ("bm2", [[4, -2], [-2, 4]]),
        ("rank1", [[4, 0], [0, 8]]),
    ] {
        let alg = fixture_algebra(g);
        let n = alg.dim();
        let triple = (element(n), element(n), element(n));
        let res = runner(48).run(&triple, |(x, y, z)| {
            let xy = alg.mul(&x, &y);
            prop_assert_eq!(&xy, &alg.mul(&y, &x));
            prop_assert_eq!(alg.form(&xy, &z), alg.form(&x, &alg.mul(&y, &z)));
            prop_assert_eq!(alg.mul(&alg.identity_element().coords, &x), x.clone());
            let two_x: Vec<Q> = x.iter().map(|c| c * qi(2)).collect();
            prop_assert_eq!(alg.mul(&alg.virasoro_element().coords, &x), two_x);
            Ok(())
        });
        if let Err(e) = res {
            f.push(format!("{name}: {}", counterexample(e, |(x, y, z)| vec![x, y, z])));
        }
        let res = runner(48).run(&(element(n), element(n)), |(x, y)| {
            let c = |v: &Vec<Q>| alg.conjugate(&alg.element(v.clone()).unwrap()).coords;
            prop_assert_eq!(c(&c(&x)), x.clone());
            prop_assert!(c(&alg.mul(&x, &y)) == alg.mul(&c(&x), &c(&y)), "conjugation is not multiplicative");
            Ok(())
        });
        if let Err(e) = res {
            f.push(format!("{name}: {}", counterexample(e, |(x, y)| vec![x, y])));
        }
    }
    // random two-variable systems with integer x-roots against the oracle
    let sys_strategy = (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3, -2i64..=2);
    let res = runner(64).run(&sys_strategy, |(r1, r2, s1, s2, k)| {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let lin = |v: &Poly, a: i64| v.sub(&Poly::constant(qi(a)));
        let sys = PolySystem::new(
            vec!["x".into(), "y".into()],
            vec![lin(&x, r1).mul(&lin(&x, r2)), lin(&y, s1).mul(&lin(&y, s2)).add(&lin(&x, r1).mul(&y).scale(&qi(k)))],
        );
        let v = solve(&sys).unwrap();
        for p in &v.rational_solutions {
            prop_assert!(sys.satisfied_by(p));
        }
        for p in &v.quadratic_solutions {
            prop_assert!(sys.satisfied_by(p));
        }
        let oracle = bounded_rational_search(&sys, 4).expect("zero-dimensional");
        prop_assert_eq!(sorted(oracle), v.rational_solutions.clone());
        Ok(())
    });
    expect(f, res.is_ok(), format!("solver versus oracle: {res:?}"));
}

fn criterion_9(f: &mut Failures) {
    let en = enumerate_idempotents(&b1(), &[2], None).expect("solvable");
    expect(
        f,
        en.complete && en.records.is_empty() && en.irrational.len() == 8,
        format!("b=1 type 2: {} rational, {} irrational", en.records.len(), en.irrational.len()),
    );
    for (g, order) in [([[4, 0], [0, 4]], 48), ([[4, 2], [2, 4]], 24), ([[4, -2], [-2, 4]], 24)] {
        let alg = fixture_algebra(g);
        let res = distinguished_set(&alg, default_kind(&alg)).and_then(|ds| aut_group(&alg, &ds, true));
        match res {
            Ok(r) => {
                expect(
                    f,
                    r.order == order && r.certified,
                    format!("{g:?}: order {} certified {}", r.order, r.certified),
                );
                if order == 48 {
                    expect(f, r.structure == StructureTag::Sym4X2, format!("{g:?}: {}", r.structure));
                }
            }
            Err(e) => f.push(format!("{g:?}: {e}")),
        }
    }
}

type Criterion = (u8, fn(&mut Failures));

const CRITERIA: [Criterion; 9] = [
    (1, criterion_1),
    (2, criterion_2),
    (3, criterion_3),
    (4, criterion_4),
    (5, criterion_5),
    (6, criterion_6),
    (7, criterion_7),
    (8, criterion_8),
    (9, criterion_9),
];

fn main() -> ExitCode {
    let mut all = true;
    for (id, direct) in CRITERIA {
        let start = Instant::now();
        let check = verify_one(id).expect("criterion exists");
        let mut failures = check.failures.clone();
        direct(&mut failures);
        let ok = failures.is_empty();
        all &= ok;
        let status = if ok { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {id}: {status} - {} ({} ms)", check.name, start.elapsed().as_millis());
        if !ok {
            line.push_str(&format!(": {}", failures.join("; ")));
        }
        println!("{line}");
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
