//! End-to-end acceptance run: one PASS/FAIL line per criterion, with the
//! measured time against its bound. Runs without the libtest harness so the
//! lines are always printed.

use std::process::ExitCode;
use std::time::Instant;

use sdym_core::algebra::GaussianRational;
use sdym_core::frechet::{
    covariant_identity_residual, psdym_lhs, psdym_residual, verify_eq12, zero_curvature_residual, Characteristic,
};
use sdym_core::hierarchy::{base_structure_table, verify_kac_moody, verify_virasoro, Hierarchies, Mode, Outcome};
use sdym_core::jetexpr::{jet, parse_poly, poly_eq, var, with_rules, Coordinate, Expr, Poly, Rules, Var};
use sdym_core::recursion::{i_catalogue, iso_i, r_hat, t_hat, trace_t_hat};
use sdym_core::series::{abelian_fixture, random_fixture, Evaluator, SolutionFixture};
use sdym_core::verify::{
    abelian_closed_form, commutator_identity_on_fixture, commutator_identity_symbolic, conflict_control,
    equivalence_case, eval_normalize, trace_families, trace_r_hat_on_fixtures,
};

fn p(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

fn show(e: &Poly) -> String {
    Expr::from_poly(e).to_string()
}

/// A detail line on success, the first failure otherwise.
type Check = Result<String, String>;

fn require(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn outcome(o: Outcome, what: &str) -> Result<(), String> {
    require(o.pass, format!("{what}: {}", o.witness.unwrap_or_default()))
}

fn fixtures() -> Vec<SolutionFixture> {
    vec![abelian_fixture(6), random_fixture(42, 6), random_fixture(43, 6)]
}

fn c1() -> Check {
    let f = p("F");
    require(zero_curvature_residual(&f).is_zero(), "residual nonzero with PSDYM reduction")?;
    with_rules(Rules { psdym: false, ..Rules::default() }, || {
        let r = zero_curvature_residual(&f);
        require(!r.is_zero(), "residual vanished without reduction")?;
        require(poly_eq(&r, &psdym_lhs().commutator(&f).neg()), format!("unreduced residual {}", show(&r)))
    })?;
    Ok("reduced 0; unreduced = -[G[X], F]".into())
}

fn c2() -> Check {
    require(
        verify_eq12(&Characteristic::generic_q()).map_err(|e| e.to_string())?,
        "linearized BT fails for generic Q",
    )?;
    let f = p("F");
    require(covariant_identity_residual(&f).is_zero(), "identity fails on shell")?;
    let off = with_rules(Rules { psdym: false, ..Rules::default() }, || covariant_identity_residual(&f));
    require(off.is_zero(), format!("identity fails off shell: {}", show(&off)))?;
    Ok("generic Q, generic probe on and off shell".into())
}

fn c3() -> Check {
    let phi = Characteristic::generic_phi().phi.unwrap();
    let r = psdym_residual(&r_hat(&phi));
    require(r.is_zero(), show(&r))?;
    Ok("psdym_residual(R̂Φ) = 0".into())
}

fn c4() -> Check {
    let mut n = 0;
    for (id, o) in commutator_identity_symbolic(200) {
        n += id.rsplit('/').next().unwrap().parse::<usize>().unwrap();
        outcome(o, &id)?;
    }
    require(n >= 200, format!("only {n} symbolic checks"))?;
    for f in [abelian_fixture(6), random_fixture(42, 6)] {
        outcome(commutator_identity_on_fixture(40, &f), &f.label)?;
    }
    Ok(format!("{n} symbolic checks over 200 expressions; 40 expressions on abelian, random:42"))
}

fn c5() -> Check {
    let jz = jet(Var::J, &[Coordinate::Z]);
    require(poly_eq(&iso_i(&jz), &jet(Var::X, &[Coordinate::Z])), "I(J_z) != X_z")?;
    require(poly_eq(&t_hat(&jz), &p("J*X_z")), "T̂J_z != J X_z")?;
    let (mode, o) = equivalence_case(&jz, &fixtures());
    outcome(o, "R̂X_z vs I(T̂J_z)")?;
    Ok(format!("chain closes ({mode})"))
}

fn c6() -> Check {
    let fx = fixtures();
    let mut modes = Vec::new();
    for s in ["J*tau1", "J*tau2", "J*tau3", "J_z", "J_y"] {
        let (mode, o) = equivalence_case(&p(s), &fx);
        outcome(o, s)?;
        modes.push(format!("{s}:{mode}"));
    }
    Ok(modes.join(" "))
}

fn c7() -> Check {
    let fx = fixtures();
    let mut h = Hierarchies::new();
    let mut n = 0;
    for i in 1..=3 {
        for j in 1..=3 {
            let o = verify_kac_moody(&mut h, false, i, j, 0, 0, Mode::Symbolic, &[]).map_err(|e| e.to_string())?;
            outcome(o, &format!("({i},{j}) level 0"))?;
            n += 1;
        }
    }
    for (m, k) in [(1, 0), (0, 1), (1, 1)] {
        for i in 1..=3 {
            for j in 1..=3 {
                let o = verify_kac_moody(&mut h, false, i, j, m, k, Mode::Oracle, &fx).map_err(|e| e.to_string())?;
                outcome(o, &format!("({i},{j}) levels ({m},{k})"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} cases, fixtures abelian, random:42, random:43"))
}

fn c8() -> Check {
    let t0 = Instant::now();
    let t = base_structure_table().map_err(|e| e.to_string())?;
    let one = GaussianRational::from_int(1);
    require(*t.f(2, 3, 1) == -one.clone(), "[L2, L3] != L1")?;
    require(*t.f(3, 4, 5) == one, "[L3, L4] != -L5")?;
    require(t.is_antisymmetric() && t.satisfies_jacobi(), "antisymmetry or Jacobi fails")?;
    let table_secs = t0.elapsed().as_secs_f64();
    require(table_secs < 1.0, format!("table took {table_secs:.2}s > 1s"))?;
    let fx = fixtures();
    let mut h = Hierarchies::new();
    for (m, k) in [(0, 0), (1, 0)] {
        for i in 1..=5 {
            for j in 1..=5 {
                let o = verify_kac_moody(&mut h, true, i, j, m, k, Mode::Oracle, &fx).map_err(|e| e.to_string())?;
                outcome(o, &format!("L{i} L{j} levels ({m},{k})"))?;
            }
        }
    }
    Ok(format!("table {table_secs:.3}s (< 1s); 50 oracle cases"))
}

fn c9() -> Check {
    let fx = fixtures();
    let mut h = Hierarchies::new();
    let pairs = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 0), (1, 1)];
    for which in [6, 7] {
        for (m, n) in pairs {
            let o = verify_virasoro(&mut h, which, m, n, Mode::Oracle, &fx).map_err(|e| e.to_string())?;
            outcome(o, &format!("L{which} ({m},{n})"))?;
        }
    }
    Ok("L6, L7 at (0,1) (1,0) (1,2) (2,1); controls (0,0) (1,1)".into())
}

fn c10() -> Check {
    let fx = fixtures();
    let fams = trace_families();
    for &fam in &fams {
        outcome(trace_r_hat_on_fixtures(fam, &fx), &format!("tr R̂ on {fam}"))?;
    }
    for pair in i_catalogue() {
        let t = trace_t_hat(&pair.q);
        require(t.is_zero(), format!("tr(J⁻¹T̂Q) for {}: {}", pair.name, show(&t)))?;
        let s = Evaluator::new(&fx[1]).poly(&var(Var::Jinv).mul(&t_hat(&pair.q))).map_err(|e| e.to_string())?;
        require(s.trace().witness().is_none(), format!("series tr(J⁻¹T̂Q) for {}", pair.name))?;
    }
    Ok(format!("{} families, {} catalogue Q", fams.len(), i_catalogue().len()))
}

fn c11() -> Check {
    outcome(abelian_closed_form(6), "abelian")?;
    for seed in [42, 43, 44] {
        let f = random_fixture(seed, 6);
        f.check_invariants().map_err(|e| format!("random:{seed}: {e}"))?;
    }
    let fx = fixtures();
    outcome(eval_normalize(31, 500, &fx), "eval∘normalize")?;
    Ok("3 random fixtures, abelian closed form, 500 expressions on 3 fixtures".into())
}

fn c12() -> Check {
    let r = psdym_residual(&p("X*X"));
    for seed in [42, 43] {
        let f = random_fixture(seed, 6);
        let s = Evaluator::new(&f).poly(&r).map_err(|e| e.to_string())?;
        require(s.witness().is_some(), format!("X*X passes on random:{seed}"))?;
    }
    outcome(conflict_control(&fixtures()), "conflict")?;
    Ok("X*X residual nonzero; reconstruction conflict detected".into())
}

/// Number, name, time bound in seconds, check.
type Criterion = (u32, &'static str, f64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "zero curvature", 1.0, c1),
        (2, "linearized BT and covariant identity", 1.0, c2),
        (3, "recursion operator preserves symmetries", 5.0, c3),
        (4, "commutator of variation and recursion", 60.0, c4),
        (5, "example chain", 5.0, c5),
        (6, "I-equivalence of the recursion operators", 60.0, c6),
        (7, "Kac-Moody, internal", 300.0, c7),
        (8, "base-space table and Kac-Moody", 300.0, c8),
        (9, "Virasoro", 600.0, c9),
        (10, "trace preservation", 30.0, c10),
        (11, "oracle integrity", 300.0, c11),
        (12, "negative controls", 30.0, c12),
    ];
    let mut failed = 0;
    for (n, name, bound, f) in criteria {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        let (ok, detail) = match r {
            Ok(d) if secs < bound => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {n:>2} {}: {name} ({secs:.2}s, bound {bound}s) {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
