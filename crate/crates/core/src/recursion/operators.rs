use crate::frechet::{cov_ay, frechet, Characteristic, FrechetError};
use crate::jetexpr::{canonical, jet, poly_eq, poly_is_local, var, Coordinate, Poly, Var};

use super::inv_dzbar_poly;

/// `R̂Φ = D_z̄⁻¹Â_yΦ`.
pub fn r_hat(phi: &Poly) -> Poly {
    canonical(&inv_dzbar_poly(&cov_ay(phi)))
}

/// `T̂Q = J R̂ J⁻¹Q`.
pub fn t_hat(q: &Poly) -> Poly {
    canonical(&var(Var::J).mul(&r_hat(&var(Var::Jinv).mul(q))))
}

/// The isomorphism `I{Q} = R̂J⁻¹Q` from SDYM to PSDYM characteristics.
pub fn iso_i(q: &Poly) -> Poly {
    r_hat(&var(Var::Jinv).mul(q))
}

/// `Q = JΦ`.
pub fn lift_j(phi: &Poly) -> Poly {
    var(Var::J).mul(phi)
}

/// Both sides of `[Δ, R̂]e = D_z̄⁻¹[Φ_z̄, e]`.
pub fn lemma22_sides(e: &Poly, ch: &Characteristic) -> Result<(Poly, Poly), FrechetError> {
    let phi = ch.phi.as_ref().ok_or_else(|| FrechetError::MissingPhi(ch.name.clone()))?;
    let lhs = frechet(&r_hat(e), ch)?.minus(&r_hat(&frechet(e, ch)?));
    let phi_zb = crate::jetexpr::total_derivative(phi, Coordinate::Zb);
    let rhs = inv_dzbar_poly(&phi_zb.commutator(e));
    Ok((canonical(&lhs), canonical(&rhs)))
}

pub fn lemma22_check(e: &Poly, ch: &Characteristic) -> Result<bool, FrechetError> {
    let (l, r) = lemma22_sides(e, ch)?;
    Ok(poly_eq(&l, &r))
}

/// Outcome of one sample of an I-equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Both sides agree in normal form.
    Symbolic,
    /// The sides differ symbolically but contain nonlocal terms; the caller
    /// must fall back to the series oracle on `(left, right)`.
    Undecided { left: Poly, right: Poly },
    /// Both sides are local and differ.
    Differs { left: Poly, right: Poly },
}

/// Compares `Ŝ I{Q}` with `I{P̂Q}` for one sample.
pub fn i_equivalence(p_op: &dyn Fn(&Poly) -> Poly, s_op: &dyn Fn(&Poly) -> Poly, q: &Poly) -> Equivalence {
    let left = s_op(&iso_i(q));
    let right = iso_i(&p_op(q));
    if poly_eq(&left, &right) {
        Equivalence::Symbolic
    } else if poly_is_local(&left) && poly_is_local(&right) {
        Equivalence::Differs { left, right }
    } else {
        Equivalence::Undecided { left, right }
    }
}

/// Symbolic I-equivalence over a sample set; undecided samples count as
/// failures here (see [`crate::series`] for the oracle fallback).
pub fn i_equivalence_check(p_op: &dyn Fn(&Poly) -> Poly, s_op: &dyn Fn(&Poly) -> Poly, sample: &[Poly]) -> bool {
    sample.iter().all(|q| i_equivalence(p_op, s_op, q) == Equivalence::Symbolic)
}

/// A catalogued pair of I-related characteristics.
#[derive(Clone, Debug)]
pub struct CataloguePair {
    pub name: String,
    pub q: Poly,
    pub phi: Poly,
}

/// The catalogued I-related pairs: `(J_z, X_z)`, `(J_y, X_y)` and
/// `(Jτ_k, [X, τ_k])`.
pub fn i_catalogue() -> Vec<CataloguePair> {
    let mut out = vec![
        CataloguePair { name: "z".into(), q: jet(Var::J, &[Coordinate::Z]), phi: jet(Var::X, &[Coordinate::Z]) },
        CataloguePair { name: "y".into(), q: jet(Var::J, &[Coordinate::Y]), phi: jet(Var::X, &[Coordinate::Y]) },
    ];
    for k in 0..crate::config::lie_basis().dim() {
        let tau = var(Var::Tau(k as u8));
        out.push(CataloguePair {
            name: format!("tau{}", k + 1),
            q: var(Var::J).mul(&tau),
            phi: var(Var::X).commutator(&tau),
        });
    }
    out
}

/// Looks up the PSDYM partner of `q` in the catalogue.
pub fn catalogue_phi(q: &Poly) -> Option<Poly> {
    i_catalogue().into_iter().find(|p| poly_eq(&p.q, q)).map(|p| p.phi)
}

/// `tr(R̂Φ)`, which vanishes whenever `tr Φ` does.
pub fn trace_r_hat(phi: &Poly) -> Poly {
    crate::jetexpr::trace_poly(&r_hat(phi))
}

/// `tr(J⁻¹T̂Q)`.
pub fn trace_t_hat(q: &Poly) -> Poly {
    crate::jetexpr::trace_poly(&var(Var::Jinv).mul(&t_hat(q)))
}
