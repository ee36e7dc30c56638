use sdym_core::algebra::GaussianRational;
use sdym_core::frechet::psdym_residual;
use sdym_core::hierarchy::{
    apply_l, base_structure_table, bracket, generate_hierarchy, verify_kac_moody, verify_virasoro, Family, Hierarchies,
    Mode,
};
use sdym_core::jetexpr::{parse_poly, poly_is_local, Poly};
use sdym_core::series::{abelian_fixture, random_fixture, SolutionFixture};

fn p(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

fn fixtures() -> Vec<SolutionFixture> {
    vec![abelian_fixture(6), random_fixture(42, 6)]
}

#[test]
fn l_operator_examples() {
    assert_eq!(apply_l(1, &p("X")).unwrap(), p("X_y"));
    assert_eq!(apply_l(3, &p("X")).unwrap(), p("z*X_y - yb*X_zb"));
    assert_eq!(apply_l(6, &p("X")).unwrap(), p("X + y*X_y + z*X_z"));
    assert!(apply_l(6, &Poly::zero()).unwrap().is_zero());
    assert!(apply_l(10, &p("X")).is_err());
}

#[test]
fn l_seeds_are_symmetries() {
    for k in 1..=9 {
        let r = psdym_residual(&apply_l(k, &p("X")).unwrap());
        assert!(r.is_zero(), "L{k}: {}", sdym_core::jetexpr::Expr::from_poly(&r));
    }
}

#[test]
fn structure_table() {
    let t = base_structure_table().unwrap();
    let one = GaussianRational::from_int(1);
    let z = GaussianRational::from_int(0);
    // [L2, L3] = L1 = −f_23^k L_k
    assert_eq!(*t.f(2, 3, 1), -one.clone());
    assert_eq!(*t.f(3, 4, 5), one);
    assert!((1..=5).all(|k| *t.f(1, 2, k) == z));
    assert!(t.is_antisymmetric());
    assert!(t.satisfies_jacobi());
}

#[test]
fn hierarchy_examples() {
    let seed = p("comm(X, tau1)");
    let h = generate_hierarchy("t1", &seed, None, 1).unwrap();
    assert!(h[0].local_in_x());
    assert!(!h[1].local_in_x());
    let z = generate_hierarchy("zero", &Poly::zero(), None, 3).unwrap();
    assert!(z.iter().all(|e| e.phi.is_zero()));
    let xz = generate_hierarchy("xz", &p("X_z"), Some(&p("J_z")), 1).unwrap();
    assert_eq!(xz[1].q.clone().unwrap(), p("J*X_z"));
    assert!(generate_hierarchy("bad", &p("X*X"), None, 1).is_err());
    assert!(bracket(&h[1], &h[1]).unwrap().is_zero());
    assert!(poly_is_local(&h[0].phi));
}

#[test]
fn kac_moody_internal_levels() {
    let mut h = Hierarchies::new();
    let fx = fixtures();
    for i in 1..=3 {
        for j in 1..=3 {
            assert!(verify_kac_moody(&mut h, false, i, j, 0, 0, Mode::Symbolic, &[]).unwrap().pass, "{i}{j}");
        }
    }
    for (m, n) in [(1, 0), (0, 1), (1, 1)] {
        for i in 1..=3 {
            for j in 1..=3 {
                let o = verify_kac_moody(&mut h, false, i, j, m, n, Mode::Oracle, &fx).unwrap();
                assert!(o.pass, "{i}{j} ({m},{n}) {:?}", o);
            }
        }
    }
}

#[test]
fn virasoro_levels() {
    let mut h = Hierarchies::new();
    let fx = fixtures();
    for which in [6, 7] {
        for (m, n) in [(0, 1), (1, 0), (1, 1)] {
            let o = verify_virasoro(&mut h, which, m, n, Mode::Oracle, &fx).unwrap();
            assert!(o.pass, "L{which} ({m},{n}) {:?}", o);
        }
    }
    let _ = Family::L(6);
}

#[test]
fn kac_moody_base_space() {
    let mut h = Hierarchies::new();
    let fx = fixtures();
    for (m, n) in [(0, 0), (1, 0)] {
        for i in 1..=5 {
            for j in 1..=5 {
                let o = verify_kac_moody(&mut h, true, i, j, m, n, Mode::Oracle, &fx).unwrap();
                assert!(o.pass, "L{i} L{j} ({m},{n}) {:?}", o);
            }
        }
    }
}
