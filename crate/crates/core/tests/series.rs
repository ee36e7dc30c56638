use sdym_core::algebra::{ConstMatrix, GaussianRational};
use sdym_core::frechet::{cov_ay, cov_az, psdym_residual, sdym_residual};
use sdym_core::jetexpr::{parse, parse_poly, Coordinate, Poly};
use sdym_core::recursion::nonlocal;
use sdym_core::series::{
    abelian_fixture, random_fixture, residual, solve_j, solve_psdym, EvalError, Evaluator, TruncatedSeries,
};

fn p(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

#[test]
fn zero_data_gives_zero() {
    let x = solve_psdym(|_| ConstMatrix::zero(2), 2, 4);
    assert!(x.is_zero());
    let (j, jinv) = solve_j(&x, &TruncatedSeries::identity(2, 4)).unwrap();
    assert_eq!(j, TruncatedSeries::identity(2, 4));
    assert_eq!(jinv, j);
}

#[test]
fn abelian_is_a_solution_and_closed_form() {
    for d in [0, 4, 6] {
        let f = abelian_fixture(d);
        f.check_invariants().unwrap();
        let (j, jinv) = solve_j(&f.x, &TruncatedSeries::identity(2, d)).unwrap();
        assert_eq!(j, f.j);
        assert_eq!(jinv, f.jinv);
        let free = f.x.clone();
        let x = solve_psdym(|e| free.coeff(e), 2, d);
        assert_eq!(x, f.x);
    }
    assert!(abelian_fixture(0).x.is_zero());
}

#[test]
fn random_fixtures_are_solutions() {
    let a = random_fixture(42, 6);
    a.check_invariants().unwrap();
    assert_eq!(a, random_fixture(42, 6));
    let b = random_fixture(43, 6);
    b.check_invariants().unwrap();
    assert_ne!(a.x, b.x);
    assert!(!a.x.derivative(Coordinate::Yb).commutator(&a.x.derivative(Coordinate::Zb)).is_zero());
}

#[test]
fn eval_examples() {
    let f = abelian_fixture(6);
    let ev = Evaluator::new(&f);
    let s = ev.expr(&parse("IDzb(zb*zb*tau3)").unwrap()).unwrap();
    let t3 = ConstMatrix::from_int_rows(&[&[1, 0], &[0, -1]]);
    let mut want = TruncatedSeries::zero(2, 6);
    want.set([0, 0, 0, 3], t3.scale(&GaussianRational::from_ratio(1, 3)));
    assert_eq!(s, want);
    let comm = ev.poly(&p("comm(X_yb, X_zb)")).unwrap();
    assert!(comm.is_zero());
}

#[test]
fn oracle_residuals() {
    let f = random_fixture(42, 6);
    let ev = Evaluator::new(&f);
    let r = residual(&psdym_residual(&p("comm(X, tau1)")), &ev).unwrap();
    assert!(r.is_zero());
    let r = residual(&sdym_residual(&p("J*tau2")), &ev).unwrap();
    assert!(r.is_zero());
    // evaluate the residual tree itself so the symbolic PSDYM reduction does not hide anything
    let raw = parse("Dy(Dyb(X*X)) + Dz(Dzb(X*X)) + comm(X_zb, Dyb(X*X)) - comm(X_yb, Dzb(X*X))").unwrap();
    let s = ev.expr(&raw).unwrap();
    assert!(s.witness().is_some());
    assert!(residual(&psdym_residual(&p("X*X")), &ev).unwrap().witness.is_some());
}

#[test]
fn nonlocal_reconstruction() {
    let src = p("comm(X, tau1)");
    let id = nonlocal::register("test-W", 1, cov_ay(&src), cov_az(&src).neg());
    for f in [abelian_fixture(6), random_fixture(42, 6)] {
        let ev = Evaluator::new(&f);
        let w = ev.nonlocal(id).unwrap();
        let wz = ev.poly(&cov_ay(&src)).unwrap();
        assert!(w.derivative(Coordinate::Zb).sub(&wz).is_zero());
        let wy = ev.poly(&cov_az(&src).neg()).unwrap();
        assert!(w.derivative(Coordinate::Yb).sub(&wy).is_zero());
    }
    let bad = p("X*X");
    let id = nonlocal::register("bad-W", 1, cov_ay(&bad), cov_az(&bad).neg());
    let f = random_fixture(42, 6);
    let ev = Evaluator::new(&f);
    assert!(matches!(ev.nonlocal(id), Err(EvalError::Conflict { .. })));
}

#[test]
fn m_binding_is_traceless() {
    let f = random_fixture(42, 4);
    let ev = Evaluator::new(&f);
    let m = ev.expr(&parse("M").unwrap()).unwrap();
    assert!(!m.is_zero());
    assert!(m.is_traceless());
    assert!(ev.expr(&parse("tr(M)").unwrap()).unwrap().is_zero());
}

mod eval_normalize {
    use std::sync::OnceLock;

    use proptest::prelude::*;
    use sdym_core::series::{abelian_fixture, random_fixture, SolutionFixture};
    use sdym_core::verify::eval_normalize;

    fn fixture() -> &'static SolutionFixture {
        static F: OnceLock<SolutionFixture> = OnceLock::new();
        F.get_or_init(|| random_fixture(44, 6))
    }

    #[test]
    fn corpus_on_four_fixtures() {
        let fx = [abelian_fixture(6), random_fixture(42, 6), random_fixture(43, 6), fixture().clone()];
        let o = eval_normalize(5, 150, &fx);
        assert!(o.pass, "{:?}", o.witness);
        assert!(o.valid_degree.unwrap() >= 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn seeded_corpora(seed in any::<u64>()) {
            let o = eval_normalize(seed, 4, std::slice::from_ref(fixture()));
            prop_assert!(o.pass, "{:?}", o.witness);
        }
    }
}
