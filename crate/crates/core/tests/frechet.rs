use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdym_core::corpus::{corpus, random_expr, CorpusSpec};
use sdym_core::frechet::{cov_ay, cov_az, frechet, psdym_residual, Characteristic};
use sdym_core::jetexpr::{jet, parse_poly, poly_eq, to_poly, total_derivative, Coordinate, Expr, Poly, Var};

fn p(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

/// The BT-related internal pair, usable on expressions containing `J`.
fn internal_pair() -> Characteristic {
    Characteristic::new("int2", Some(p("J*tau2")), Some(p("comm(X, tau2)"))).unwrap()
}

fn cases() -> Vec<(Characteristic, Vec<Poly>)> {
    let full: Vec<Poly> = corpus(11, 150, &CorpusSpec::full(3)).iter().map(to_poly).collect();
    let xs: Vec<Poly> = corpus(12, 150, &CorpusSpec::x_only(3)).iter().map(to_poly).collect();
    vec![(internal_pair(), full), (Characteristic::generic_phi(), xs)]
}

fn d(ch: &Characteristic, e: &Poly) -> Poly {
    frechet(e, ch).unwrap()
}

#[test]
fn leibniz_rules() {
    for (ch, es) in cases() {
        for w in es.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let lhs = d(&ch, &a.mul(b));
            let rhs = d(&ch, a).mul(b).plus(&a.mul(&d(&ch, b)));
            assert!(poly_eq(&lhs, &rhs), "{} | {}", Expr::from_poly(a), Expr::from_poly(b));
            let lhs = d(&ch, &a.commutator(b));
            let rhs = d(&ch, a).commutator(b).plus(&a.commutator(&d(&ch, b)));
            assert!(poly_eq(&lhs, &rhs));
        }
    }
}

#[test]
fn covariant_operators_are_derivations_along_phi() {
    let (ch, es) = cases().remove(0);
    let phi = ch.phi.clone().unwrap();
    let phi_zb = total_derivative(&phi, Coordinate::Zb);
    let phi_yb = total_derivative(&phi, Coordinate::Yb);
    for a in &es {
        let lhs = d(&ch, &cov_ay(a));
        let rhs = cov_ay(&d(&ch, a)).plus(&phi_zb.commutator(a));
        assert!(poly_eq(&lhs, &rhs), "{}", Expr::from_poly(a));
        let lhs = d(&ch, &cov_az(a));
        let rhs = cov_az(&d(&ch, a)).minus(&phi_yb.commutator(a));
        assert!(poly_eq(&lhs, &rhs), "{}", Expr::from_poly(a));
    }
}

#[test]
fn commutes_with_total_derivatives() {
    for (ch, es) in cases() {
        for a in &es {
            for c in Coordinate::ALL {
                let lhs = d(&ch, &total_derivative(a, c));
                let rhs = total_derivative(&d(&ch, a), c);
                assert!(poly_eq(&lhs, &rhs), "{} along D{}", Expr::from_poly(a), c.name());
            }
        }
    }
}

#[test]
fn catalogue_symmetries() {
    let mut cat = vec![p("M"), p("comm(X, M)"), p("X_y"), p("X_z")];
    for k in 1..=9 {
        cat.push(sdym_core::hierarchy::apply_l(k, &jet(Var::X, &[])).unwrap());
    }
    for phi in &cat {
        assert!(psdym_residual(phi).is_zero(), "{}", Expr::from_poly(phi));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_leibniz(s1 in any::<u64>(), s2 in any::<u64>()) {
        let spec = CorpusSpec::full(3);
        let a = to_poly(&random_expr(&mut ChaCha8Rng::seed_from_u64(s1), &spec));
        let b = to_poly(&random_expr(&mut ChaCha8Rng::seed_from_u64(s2), &spec));
        let ch = internal_pair();
        let lhs = d(&ch, &a.mul(&b));
        let rhs = d(&ch, &a).mul(&b).plus(&a.mul(&d(&ch, &b)));
        prop_assert!(poly_eq(&lhs, &rhs));
    }
}
