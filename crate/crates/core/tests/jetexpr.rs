use sdym_core::jetexpr::{equals_mod_ideal, normalize, parse, to_poly, Expr};

fn p(s: &str) -> Expr {
    parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn eq(a: &str, b: &str) -> bool {
    equals_mod_ideal(&p(a), &p(b))
}

#[test]
fn parse_shapes() {
    assert!(matches!(p("comm(X_zb, M)"), Expr::Comm(..)));
    assert!(matches!(p("J * Jinv"), Expr::Prod(_)));
    assert!(matches!(p("Dzb(IDzb(X_y))"), Expr::Deriv(..)));
}

#[test]
fn parse_errors() {
    assert!(parse("X +").is_err());
    assert!(matches!(parse("Foo"), Err(sdym_core::jetexpr::ParseError::UnknownIdentifier { .. })));
    assert!(parse("X_q").is_err());
}

#[test]
fn rewrite_examples() {
    assert_eq!(normalize(&p("Jinv*J")), Expr::IdentityMatrix);
    assert!(eq("J_y", "J*X_zb"));
    assert!(eq("X_yyb", "-X_zzb + X_yb*X_zb - X_zb*X_yb"));
    assert!(eq("Dy(Jinv)", "-X_zb*Jinv"));
    assert!(eq("Dy(J*X_zb)", "J*X_zb*X_zb + J*X_yzb"));
    assert!(eq("Jinv*J*X", "X"));
    assert!(!eq("X_y", "X_z"));
}

#[test]
fn antiderivative_examples() {
    assert!(eq("IDzb(comm(X_zb, M))", "comm(X, M)"));
    assert!(eq("IDzb(X_zzb)", "X_z"));
    let opaque = normalize(&p("IDzb(X_y)"));
    assert!(matches!(opaque, Expr::InvDzbar(_)), "{opaque}");
    assert!(eq("Dzb(IDzb(X_y))", "X_y"));
    assert!(eq("IDzb(Dzb(X_y))", "X_y"));
    assert!(eq("Dyb(IDzb(X_y))", "IDzb(X_yyb)"));
    assert!(eq("IDzb(X_y) + IDzb(X_z)", "IDzb(X_y + X_z)"));
}

#[test]
fn traces() {
    assert_eq!(normalize(&p("tr(comm(X_y, X_z))")), Expr::Zero);
    assert_eq!(normalize(&p("tr(tau1)")), Expr::Zero);
    assert_eq!(normalize(&p("tr(X)")), Expr::Zero);
    assert_eq!(normalize(&p("tr(I)")), p("2"));
}

#[test]
fn print_round_trip() {
    for s in ["comm(X_zb, M) + -3/2*J*X_y", "(1-2*i)*X*tau2", "IDzb(X_y)*Jinv"] {
        let e = normalize(&p(s));
        assert_eq!(p(&e.to_string()), e, "{e}");
        let _ = to_poly(&e);
    }
}

mod corpus_properties {
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use sdym_core::corpus::{corpus, random_expr, CorpusSpec};
    use sdym_core::jetexpr::{canonical, parse, poly_eq, to_poly, total_derivative, Coordinate, Expr, Poly};

    fn big_corpus() -> Vec<Expr> {
        corpus(1, 1000, &CorpusSpec::full(4))
    }

    fn reparse(p: &Poly) -> Poly {
        let text = Expr::from_poly(p).to_string();
        to_poly(&parse(&text).unwrap_or_else(|e| panic!("{text}: {e}")))
    }

    #[test]
    fn normalize_is_idempotent() {
        for e in big_corpus() {
            let p = to_poly(&e);
            assert_eq!(to_poly(&Expr::from_poly(&p)), p, "{e}");
            assert_eq!(canonical(&p), p, "{e}");
        }
    }

    #[test]
    fn normalize_is_linear() {
        let c = big_corpus();
        for pair in c.chunks(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let whole = to_poly(&(a.clone() + b.clone()));
            let parts = to_poly(&(Expr::from_poly(&to_poly(a)) + Expr::from_poly(&to_poly(b))));
            assert!(poly_eq(&whole, &parts), "{a} | {b}");
        }
    }

    #[test]
    fn total_derivatives_commute() {
        for e in corpus(2, 1000, &CorpusSpec::full(4)) {
            let p = to_poly(&e);
            for a in Coordinate::ALL {
                for b in Coordinate::ALL {
                    if a.index() < b.index() {
                        let ab = total_derivative(&total_derivative(&p, a), b);
                        let ba = total_derivative(&total_derivative(&p, b), a);
                        assert!(poly_eq(&ab, &ba), "{e}: D{} D{}", a.name(), b.name());
                    }
                }
            }
        }
    }

    #[test]
    fn printed_normal_forms_reparse() {
        for e in big_corpus() {
            let p = to_poly(&e);
            assert!(poly_eq(&reparse(&p), &p), "{e}");
            let raw = to_poly(&parse(&e.to_string()).unwrap());
            assert!(poly_eq(&raw, &p), "{e}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sampled_idempotence_and_reparse(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = random_expr(&mut rng, &CorpusSpec::full(3));
            let p = to_poly(&e);
            prop_assert_eq!(to_poly(&Expr::from_poly(&p)), p.clone());
            prop_assert!(poly_eq(&reparse(&p), &p));
        }
    }
}
