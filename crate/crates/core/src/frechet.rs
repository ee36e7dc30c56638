//! Fréchet derivatives along symmetry vector fields, the covariant
//! operators `Â_y`, `Â_z`, and the linearized symmetry conditions.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::One;
use thiserror::Error;

use crate::algebra::GaussianRational;
use crate::jetexpr::{
    apply_index, atom_nf, canonical, jet, rules, total_derivative, var, with_rules, Coordinate, Factor, GenericId,
    JetAtom, Monomial, Poly, Rules, Var,
};
use crate::recursion::inv_dzbar_poly;
use crate::recursion::nonlocal::{self, dressed_lift_slice, Dressing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrechetError {
    #[error("characteristic `{0}` carries neither Q nor Phi")]
    Empty(String),
    #[error("characteristic `{0}` has no Q but the expression depends on J")]
    MissingQ(String),
    #[error("characteristic `{0}` has no Phi but the expression depends on X")]
    MissingPhi(String),
}

/// A symmetry vector field `V = Q ∂/∂J + Φ ∂/∂X`, given by its
/// characteristics in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Characteristic {
    pub name: String,
    pub q: Option<Poly>,
    pub phi: Option<Poly>,
    /// Set for internal hierarchy members; selects the dressing lift on
    /// nonlocals of the same kind.
    pub dressing: Option<Dressing>,
}

impl Characteristic {
    pub fn new(name: &str, q: Option<Poly>, phi: Option<Poly>) -> Result<Self, FrechetError> {
        if q.is_none() && phi.is_none() {
            return Err(FrechetError::Empty(name.to_string()));
        }
        Ok(Self { name: name.to_string(), q, phi, dressing: None })
    }

    pub fn psdym(name: &str, phi: Poly) -> Self {
        Self { name: name.to_string(), q: None, phi: Some(phi), dressing: None }
    }

    pub fn sdym(name: &str, q: Poly) -> Self {
        Self { name: name.to_string(), q: Some(q), phi: None, dressing: None }
    }

    pub fn with_dressing(mut self, d: Option<Dressing>) -> Self {
        self.dressing = d;
        self
    }

    /// A free generic `Q`.
    pub fn generic_q() -> Self {
        Self::sdym("Q", var(Var::Generic(GenericId::free("Q"))))
    }

    /// A generic `Φ` on which the PSDYM symmetry condition is imposed.
    pub fn generic_phi() -> Self {
        Self::psdym("Phi", var(Var::Generic(GenericId::psdym_symmetry("Phi"))))
    }
}

fn one() -> GaussianRational {
    GaussianRational::one()
}

fn raw(var: Var) -> Poly {
    Poly::factor(Factor::Atom(JetAtom::new(var)))
}

type LiftKey = (Rules, Option<Poly>, Option<Poly>, Option<Dressing>, u32);

thread_local! {
    static LIFTED: RefCell<HashMap<LiftKey, Option<u32>>> =
        RefCell::new(HashMap::new());
}

/// `ΔW` for a nonlocal `W`: a new nonlocal whose defining derivatives are
/// (and slice) are the Fréchet derivatives of those of `W`, or `None` if
/// all vanish.
pub fn frechet_nonlocal(id: u32, ch: &Characteristic) -> Result<Option<u32>, FrechetError> {
    let key = (rules(), ch.q.clone(), ch.phi.clone(), ch.dressing, id);
    if let Some(r) = LIFTED.with(|c| c.borrow().get(&key).copied()) {
        return Ok(r);
    }
    let def = nonlocal::get(id);
    let dz = frechet(&def.dzbar, ch)?;
    let dy = frechet(&def.dybar, ch)?;
    let slice = match (ch.dressing, def.dressing) {
        (Some(a), Some(b)) => dressed_lift_slice(a, b),
        _ => frechet(&def.slice, ch)?,
    };
    let out = if dz.is_zero() && dy.is_zero() && slice.is_zero() {
        None
    } else {
        let label = format!("D[{}]{}", ch.name, def.label);
        Some(nonlocal::register_with_slice(&label, def.level, dz, dy, slice))
    };
    LIFTED.with(|c| c.borrow_mut().insert(key, out));
    Ok(out)
}

fn frechet_factor(f: &Factor, ch: &Characteristic) -> Result<Poly, FrechetError> {
    let a = match f {
        Factor::Atom(a) => a,
        Factor::Inv(m) => return Ok(inv_dzbar_poly(&frechet_monomial(m, ch)?)),
    };
    let need_q = || ch.q.clone().ok_or_else(|| FrechetError::MissingQ(ch.name.clone()));
    let need_phi = || ch.phi.clone().ok_or_else(|| FrechetError::MissingPhi(ch.name.clone()));
    Ok(match &a.var {
        Var::Tau(_) | Var::Const(_) | Var::Generic(_) => Poly::zero(),
        Var::X => apply_index(need_phi()?, a.index),
        Var::J => apply_index(need_q()?, a.index),
        Var::Jinv if a.order() == 0 => {
            let jinv = raw(Var::Jinv);
            jinv.mul(&need_q()?).mul(&jinv).neg()
        }
        Var::Jinv => frechet(&atom_nf(a), ch)?,
        Var::Nonlocal(id) => match frechet_nonlocal(*id, ch)? {
            Some(w) => atom_nf(&JetAtom::with_index(Var::Nonlocal(w), a.index)),
            None => Poly::zero(),
        },
    })
}

fn frechet_word(w: &[Factor], ch: &Characteristic) -> Result<Poly, FrechetError> {
    let mut out = Poly::zero();
    for i in 0..w.len() {
        let d = frechet_factor(&w[i], ch)?;
        if d.is_zero() {
            continue;
        }
        let left = Poly::monomial(Monomial::new(w[..i].to_vec(), [0; 4], Vec::new()), one());
        let right = Poly::monomial(Monomial::new(w[i + 1..].to_vec(), [0; 4], Vec::new()), one());
        out.add_poly(&left.mul(&d).mul(&right));
    }
    Ok(out)
}

fn frechet_monomial(m: &Monomial, ch: &Characteristic) -> Result<Poly, FrechetError> {
    let tx = rules().traceless_x;
    let mut out = Poly::zero();
    let traces = m.traces();
    for t in 0..traces.len() {
        let dt = frechet_word(&traces[t], ch)?.trace(tx);
        if dt.is_zero() {
            continue;
        }
        let mut rest = traces.to_vec();
        rest.remove(t);
        out.add_poly(&dt.mul(&Poly::monomial(m.with_traces(rest), one())));
    }
    let dw = frechet_word(m.word(), ch)?;
    if !dw.is_zero() {
        let scalars = Poly::monomial(Monomial::new(Vec::new(), m.coords(), traces.to_vec()), one());
        out.add_poly(&scalars.mul(&dw));
    }
    Ok(out)
}

/// `Δe` along `ch`. A linear derivation commuting with total derivatives;
/// generic characteristic atoms are treated as independent of `X` and `J`.
pub fn frechet(p: &Poly, ch: &Characteristic) -> Result<Poly, FrechetError> {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        out.add_scaled(&frechet_monomial(m, ch)?, c);
    }
    Ok(canonical(&out))
}

/// `Â_y = D_y + [X_z̄, ·]`.
pub fn cov_ay(p: &Poly) -> Poly {
    let xzb = jet(Var::X, &[Coordinate::Zb]);
    canonical(&total_derivative(p, Coordinate::Y).plus(&xzb.commutator(p)))
}

/// `Â_z = D_z − [X_ȳ, ·]`.
pub fn cov_az(p: &Poly) -> Poly {
    let xyb = jet(Var::X, &[Coordinate::Yb]);
    canonical(&total_derivative(p, Coordinate::Z).minus(&xyb.commutator(p)))
}

fn d(p: &Poly, c: Coordinate) -> Poly {
    canonical(&total_derivative(p, c))
}

/// The PSDYM left side `X_yȳ + X_zz̄ − [X_ȳ, X_z̄]`, with the PSDYM rule
/// switched off so that it does not reduce to zero.
pub fn psdym_lhs() -> Poly {
    use Coordinate::*;
    with_rules(Rules { psdym: false, ..rules() }, || {
        jet(Var::X, &[Y, Yb]).plus(&jet(Var::X, &[Z, Zb])).minus(&jet(Var::X, &[Yb]).commutator(&jet(Var::X, &[Zb])))
    })
}

/// `Â_yÂ_z p − Â_zÂ_y p`.
pub fn zero_curvature_residual(probe: &Poly) -> Poly {
    canonical(&cov_ay(&cov_az(probe)).minus(&cov_az(&cov_ay(probe))))
}

pub fn verify_zero_curvature(probe: &Poly) -> bool {
    zero_curvature_residual(probe).is_zero()
}

/// `(Â_yD_ȳ + Â_zD_z̄)p − (D_ȳÂ_y + D_z̄Â_z)p`.
pub fn covariant_identity_residual(probe: &Poly) -> Poly {
    use Coordinate::*;
    let lhs = cov_ay(&d(probe, Yb)).plus(&cov_az(&d(probe, Zb)));
    let rhs = d(&cov_ay(probe), Yb).plus(&d(&cov_az(probe), Zb));
    canonical(&lhs.minus(&rhs))
}

pub fn verify_identity_15(probe: &Poly) -> bool {
    covariant_identity_residual(probe).is_zero()
}

/// `(D_ȳÂ_y + D_z̄Â_z)(J⁻¹Q)`.
pub fn sdym_residual(q: &Poly) -> Poly {
    let u = var(Var::Jinv).mul(q);
    let r = d(&cov_ay(&u), Coordinate::Yb).plus(&d(&cov_az(&u), Coordinate::Zb));
    canonical(&r)
}

/// `Â_yΦ_ȳ + Â_zΦ_z̄`.
pub fn psdym_residual(phi: &Poly) -> Poly {
    let r = cov_ay(&d(phi, Coordinate::Yb)).plus(&cov_az(&d(phi, Coordinate::Zb)));
    canonical(&r)
}

/// Residuals of `Δ(J⁻¹J_y) = Â_y(J⁻¹Q)` and `Δ(J⁻¹J_z) = Â_z(J⁻¹Q)`.
///
/// The left sides are linearized with the Bäcklund rule off, since a
/// generic `Q` is not tied to `Φ`, and reduced afterwards.
pub fn linearized_bt_residuals(ch: &Characteristic) -> Result<(Poly, Poly), FrechetError> {
    use Coordinate::*;
    let q = ch.q.clone().ok_or_else(|| FrechetError::MissingQ(ch.name.clone()))?;
    let off = Rules { bt: false, ..rules() };
    let (ly, lz) = with_rules(off, || -> Result<(Poly, Poly), FrechetError> {
        let jinv = var(Var::Jinv);
        let ly = frechet(&jinv.mul(&jet(Var::J, &[Y])), ch)?;
        let lz = frechet(&jinv.mul(&jet(Var::J, &[Z])), ch)?;
        Ok((ly, lz))
    })?;
    let ly = crate::jetexpr::renormalize(&ly);
    let lz = crate::jetexpr::renormalize(&lz);
    let u = var(Var::Jinv).mul(&crate::jetexpr::renormalize(&q));
    Ok((canonical(&ly.minus(&cov_ay(&u))), canonical(&lz.minus(&cov_az(&u)))))
}

pub fn verify_eq12(ch: &Characteristic) -> Result<bool, FrechetError> {
    let (a, b) = linearized_bt_residuals(ch)?;
    Ok(a.is_zero() && b.is_zero())
}

/// Residuals of `Â_y(J⁻¹Q) = Φ_z̄` and `Â_z(J⁻¹Q) = −Φ_ȳ`.
pub fn bt17_residuals(ch: &Characteristic) -> Result<(Poly, Poly), FrechetError> {
    let q = ch.q.as_ref().ok_or_else(|| FrechetError::MissingQ(ch.name.clone()))?;
    let phi = ch.phi.as_ref().ok_or_else(|| FrechetError::MissingPhi(ch.name.clone()))?;
    let u = var(Var::Jinv).mul(q);
    let first = cov_ay(&u).minus(&d(phi, Coordinate::Zb));
    let second = cov_az(&u).plus(&d(phi, Coordinate::Yb));
    Ok((canonical(&first), canonical(&second)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetexpr::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn frechet_basics() {
        let q = Characteristic::generic_q();
        assert_eq!(frechet(&p("J"), &q).unwrap(), p("Q"));
        assert_eq!(frechet(&p("Jinv"), &q).unwrap(), p("-1*Jinv*Q*Jinv"));
        let ch = Characteristic::psdym("m", p("comm(X, M)"));
        assert_eq!(frechet(&p("X_zb"), &ch).unwrap(), p("comm(X_zb, M)"));
        assert_eq!(frechet(&p("J"), &ch), Err(FrechetError::MissingQ("m".into())));
    }

    #[test]
    fn covariant_examples() {
        assert_eq!(cov_ay(&p("tau1")), p("comm(X_zb, tau1)"));
        assert_eq!(cov_ay(&p("Jinv*J_z")), p("X_zzb"));
        assert!(cov_az(&p("I")).is_zero());
    }

    #[test]
    fn curvature_off_shell() {
        let f = p("F");
        assert!(verify_zero_curvature(&f));
        assert!(verify_zero_curvature(&p("X")));
        let off = Rules { psdym: false, ..Rules::default() };
        with_rules(off, || {
            let r = zero_curvature_residual(&f);
            assert!(!r.is_zero());
            assert_eq!(r, psdym_lhs().commutator(&f).neg());
        });
    }

    #[test]
    fn covariant_identity_both_regimes() {
        assert!(verify_identity_15(&p("F")));
        assert!(verify_identity_15(&Poly::zero()));
        with_rules(Rules { psdym: false, ..Rules::default() }, || assert!(verify_identity_15(&p("F"))));
    }

    #[test]
    fn residual_examples() {
        for q in ["J", "J_z", "J*tau1", "J*tau2", "J*tau3", "J_y"] {
            assert!(sdym_residual(&p(q)).is_zero(), "{q}");
        }
        for phi in ["M", "comm(X, M)", "X_z", "X_y", "comm(X, tau3)"] {
            assert!(psdym_residual(&p(phi)).is_zero(), "{phi}");
        }
        assert!(!psdym_residual(&p("X*X")).is_zero());
    }

    #[test]
    fn linearized_backlund_relations() {
        assert!(verify_eq12(&Characteristic::generic_q()).unwrap());
        assert!(verify_eq12(&Characteristic::sdym("0", Poly::zero())).unwrap());
        assert!(verify_eq12(&Characteristic::sdym("t", p("J*tau2"))).unwrap());
        let ch = Characteristic::new("z", Some(p("J_z")), Some(p("X_z"))).unwrap();
        let (a, b) = bt17_residuals(&ch).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let ch = Characteristic::new("t", Some(p("J*tau1")), Some(p("comm(X, tau1)"))).unwrap();
        let (a, b) = bt17_residuals(&ch).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let ch = Characteristic::new("z0", Some(p("J_z")), Some(Poly::zero())).unwrap();
        assert!(!bt17_residuals(&ch).unwrap().1.is_zero());
    }
}
