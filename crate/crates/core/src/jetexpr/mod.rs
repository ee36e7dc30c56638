//! Symbolic jet-space expressions: atoms, the expression tree, a canonical
//! polynomial normal form and the rewrite rules that define it.

mod atom;
mod expr;
mod parse;
mod poly;
mod rules;

pub use atom::{unit, Coordinate, GenericId, JetAtom, MultiIndex, Relation, Var};
pub use expr::{to_latex, Expr};
pub use parse::{parse, ParseError};
pub use poly::{reduce_word, Factor, Monomial, Poly, Word};
pub use rules::{apply_index, atom_nf, jet, renormalize, rules, total_derivative, var, with_rules, Rules};

/// Converts a tree into its normal form.
pub fn to_poly(e: &Expr) -> Poly {
    canonical(&raw_poly(e))
}

fn raw_poly(e: &Expr) -> Poly {
    match e {
        Expr::Zero => Poly::zero(),
        Expr::IdentityMatrix => Poly::identity(),
        Expr::Atom(a) => atom_nf(a),
        Expr::Coord(c) => Poly::coord(*c),
        Expr::Sum(ts) => {
            let mut acc = Poly::zero();
            for t in ts {
                acc.add_poly(&raw_poly(t));
            }
            acc
        }
        Expr::ScalarMul(c, e) => raw_poly(e).scale(c),
        Expr::Prod(fs) => {
            let ps: Vec<Poly> = fs.iter().map(raw_poly).collect();
            Poly::product(&ps)
        }
        Expr::Comm(a, b) => raw_poly(a).commutator(&raw_poly(b)),
        Expr::InvDzbar(e) => crate::recursion::inv_dzbar_poly(&raw_poly(e)),
        Expr::Deriv(c, e) => total_derivative(&raw_poly(e), *c),
        Expr::Trace(e) => trace_poly(&raw_poly(e)),
    }
}

/// Merges the opaque `D_z̄⁻¹` terms of `p` into a single antiderivative
/// problem, so that e.g. `IDzb(A) + IDzb(B) - IDzb(A + B)` vanishes.
pub fn canonical(p: &Poly) -> Poly {
    let mut local = Poly::zero();
    let mut under = Poly::zero();
    let mut lone = 0usize;
    for (m, c) in p.terms() {
        match m.inverse_integrand() {
            Some(inner) => {
                lone += 1;
                under.add_scaled(&inner, c);
            }
            None => local.add_term(m.clone(), c.clone()),
        }
    }
    if lone < 2 {
        return p.clone();
    }
    local.add_poly(&crate::recursion::inv_dzbar_poly(&under));
    local
}

pub fn normalize(e: &Expr) -> Expr {
    Expr::from_poly(&to_poly(e))
}

pub fn total_derivative_expr(e: &Expr, c: Coordinate) -> Expr {
    Expr::from_poly(&canonical(&total_derivative(&to_poly(e), c)))
}

/// `true` iff `a − b` reduces to zero.
pub fn equals_mod_ideal(a: &Expr, b: &Expr) -> bool {
    poly_eq(&to_poly(a), &to_poly(b))
}

pub fn poly_eq(a: &Poly, b: &Poly) -> bool {
    canonical(&a.minus(b)).is_zero()
}

pub fn trace_expr(e: &Expr) -> Expr {
    Expr::from_poly(&trace_poly(&to_poly(e)))
}

/// Trace of a normal form; the trace is moved under a `D_z̄⁻¹` flanked by
/// constants.
pub fn trace_poly(p: &Poly) -> Poly {
    let tx = rules().traceless_x;
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let scalars = Poly::monomial(Monomial::new(Vec::new(), m.coords(), m.traces().to_vec()), c.clone());
        match m.inverse_sandwich() {
            Some((pre, inner, post)) => {
                let mut w = pre.to_vec();
                w.extend(inner.word().iter().cloned());
                w.extend_from_slice(post);
                let merged = Monomial::new(w, inner.coords(), inner.traces().to_vec());
                let t = Poly::monomial(merged, num_traits::One::one()).trace(tx);
                out.add_poly(&scalars.mul(&crate::recursion::inv_dzbar_poly(&t)));
            }
            None => out.add_poly(&Poly::monomial(m.clone(), c.clone()).trace(tx)),
        }
    }
    canonical(&out)
}

/// `true` iff no opaque antiderivative or nonlocal variable occurs.
pub fn poly_is_local(p: &Poly) -> bool {
    !p.has_inverse() && !p.contains_var(&|v| matches!(v, Var::Nonlocal(_)))
}

pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    parse(src).map(|e| to_poly(&e))
}
