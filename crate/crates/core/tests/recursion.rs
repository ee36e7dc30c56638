use sdym_core::frechet::{psdym_residual, sdym_residual, Characteristic};
use sdym_core::jetexpr::{parse_poly, poly_eq, poly_is_local, Poly};
use sdym_core::recursion::{
    i_catalogue, i_equivalence_check, iso_i, lemma22_check, lift_j, r_hat, t_hat, trace_r_hat, trace_t_hat,
};

fn p(s: &str) -> Poly {
    parse_poly(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

#[test]
fn r_hat_examples() {
    assert_eq!(r_hat(&p("M")), p("comm(X, M)"));
    assert!(r_hat(&Poly::zero()).is_zero());
    let r = r_hat(&p("X_z"));
    assert!(!poly_is_local(&r));
    assert!(poly_eq(
        &sdym_core::jetexpr::total_derivative(&r, sdym_core::jetexpr::Coordinate::Zb),
        &p("X_yz + comm(X_zb, X_z)")
    ));
}

#[test]
fn t_hat_and_iso_examples() {
    assert_eq!(t_hat(&p("J_z")), p("J*X_z"));
    assert_eq!(t_hat(&p("J*tau2")), p("J*comm(X, tau2)"));
    assert_eq!(t_hat(&p("J_y")), p("J*X_y"));
    assert!(t_hat(&Poly::zero()).is_zero());
    assert_eq!(iso_i(&p("J_z")), p("X_z"));
    assert_eq!(iso_i(&p("J*tau1")), p("comm(X, tau1)"));
    assert!(iso_i(&Poly::zero()).is_zero());
    assert_eq!(lift_j(&p("X_z")), t_hat(&p("J_z")));
}

#[test]
fn recursion_preserves_generic_symmetry() {
    let phi = Characteristic::generic_phi().phi.unwrap();
    assert!(psdym_residual(&phi).is_zero());
    assert!(psdym_residual(&r_hat(&phi)).is_zero());
}

#[test]
fn t_hat_catalogue_gives_local_sdym_symmetries() {
    for pair in i_catalogue() {
        let t = t_hat(&pair.q);
        assert!(poly_is_local(&t), "{}", pair.name);
        assert!(sdym_residual(&t).is_zero(), "{}", pair.name);
    }
}

#[test]
fn variation_recursion_commutator_small() {
    let m = p("M");
    assert!(lemma22_check(&m, &Characteristic::generic_phi()).unwrap());
    assert!(lemma22_check(&Poly::zero(), &Characteristic::generic_phi()).unwrap());
    let ch = Characteristic::psdym("t", p("comm(X, tau1)"));
    for e in ["X_y*X", "comm(X_z, tau2) + X_zb*X_yb", "X*M*X_zzb"] {
        assert!(lemma22_check(&p(e), &ch).unwrap(), "{e}");
        assert!(lemma22_check(&p(e), &Characteristic::generic_phi()).unwrap(), "{e}");
    }
}

#[test]
fn i_equivalence_examples() {
    let sample: Vec<Poly> = ["J*tau1", "J*tau2", "J*tau3", "J_z", "J_y"].iter().map(|s| p(s)).collect();
    assert!(i_equivalence_check(&t_hat, &r_hat, &sample));
    let id = |q: &Poly| q.clone();
    assert!(i_equivalence_check(&id, &id, &sample));
    assert!(!i_equivalence_check(&t_hat, &id, &sample[..1]));
}

#[test]
fn traces_preserved() {
    for pair in i_catalogue() {
        assert!(trace_r_hat(&pair.phi).is_zero(), "{}", pair.name);
        assert!(trace_t_hat(&pair.q).is_zero(), "{}", pair.name);
    }
}

mod corpus_properties {
    use sdym_core::corpus::{corpus, CorpusSpec};
    use sdym_core::frechet::Characteristic;
    use sdym_core::jetexpr::{poly_eq, to_poly, total_derivative, Coordinate, Expr, Factor, Poly, Var};
    use sdym_core::recursion::{inv_dzbar_poly, lemma22_check, lemma22_sides};
    use sdym_core::series::{abelian_fixture, random_fixture, Evaluator};

    fn spec() -> CorpusSpec {
        CorpusSpec { generic: true, ..CorpusSpec::full(3) }
    }

    /// Built from constants and the coordinates `y`, `z` only.
    fn in_kernel_of_dzbar(p: &Poly) -> bool {
        let const_word = |w: &[Factor]| w.iter().all(|f| matches!(f, Factor::Atom(a) if a.var.is_constant()));
        p.terms().all(|(m, _)| {
            m.coords()[Coordinate::Yb.index()] == 0
                && m.coords()[Coordinate::Zb.index()] == 0
                && const_word(m.word())
                && m.traces().iter().all(|t| const_word(t))
        })
    }

    #[test]
    fn dzbar_inverts_inv_dzbar() {
        for e in corpus(21, 400, &spec()) {
            let p = to_poly(&e);
            let back = total_derivative(&inv_dzbar_poly(&p), Coordinate::Zb);
            assert!(poly_eq(&back, &p), "{e}");
        }
    }

    #[test]
    fn inv_dzbar_inverts_dzbar_up_to_kernel() {
        for e in corpus(22, 400, &spec()) {
            let p = to_poly(&e);
            let diff = inv_dzbar_poly(&total_derivative(&p, Coordinate::Zb)).minus(&p);
            let diff = sdym_core::jetexpr::canonical(&diff);
            assert!(in_kernel_of_dzbar(&diff), "{e}: {}", Expr::from_poly(&diff));
        }
    }

    fn lemma_corpus() -> Vec<Poly> {
        corpus(23, 220, &CorpusSpec::x_only(3)).iter().map(to_poly).collect()
    }

    #[test]
    fn variation_recursion_commutator_on_corpus() {
        let chars = [
            Characteristic::generic_phi(),
            Characteristic::psdym("t1", sdym_core::jetexpr::parse_poly("comm(X, tau1)").unwrap()),
            Characteristic::psdym("t3", sdym_core::jetexpr::parse_poly("comm(X, tau3)").unwrap()),
        ];
        for e in lemma_corpus() {
            for ch in &chars {
                assert!(lemma22_check(&e, ch).unwrap(), "{} along {}", Expr::from_poly(&e), ch.name);
            }
        }
    }

    #[test]
    fn variation_recursion_commutator_on_fixtures() {
        let ch = Characteristic::psdym("t2", sdym_core::jetexpr::parse_poly("comm(X, tau2)").unwrap());
        let fixtures = [abelian_fixture(6), random_fixture(42, 6)];
        let evs: Vec<Evaluator> = fixtures.iter().map(Evaluator::new).collect();
        let mut informative = 0;
        for e in lemma_corpus().iter().take(80) {
            let (l, r) = lemma22_sides(e, &ch).unwrap();
            assert!(!l.contains_var(&|v| matches!(v, Var::Nonlocal(_))));
            for ev in &evs {
                // both sides are z̄-antiderivatives; compare their z̄-derivatives
                let dl = ev.poly(&l).unwrap().derivative(Coordinate::Zb);
                let dr = ev.poly(&r).unwrap().derivative(Coordinate::Zb);
                let diff = dl.sub(&dr);
                assert!(diff.is_zero(), "{} on {}: {:?}", Expr::from_poly(e), ev.fixture().label, diff.witness());
                if diff.valid() >= 2 {
                    informative += 1;
                }
            }
        }
        assert!(informative >= 60, "only {informative} comparisons kept degree 2");
    }
}
