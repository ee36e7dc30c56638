//! The rewrite system: Bäcklund elimination of `y`/`z` jets of `J`, PSDYM
//! elimination of mixed `yȳ` jets of `X`, the inverse rule for `J⁻¹`, and
//! total derivatives on normal forms.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use num_traits::One;

use super::atom::{unit, Coordinate, GenericId, JetAtom, Relation, Var};
use super::poly::{reduce_word, Factor, Monomial, Poly};
use crate::algebra::GaussianRational;
use crate::recursion::{inv_dzbar_poly, nonlocal};

/// Which parts of the ideal are reduced during normalization.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Rules {
    /// `J_y → J·X_z̄`, `J_z → −J·X_ȳ`.
    pub bt: bool,
    /// `X_{yȳ} → −X_{zz̄} + [X_ȳ, X_z̄]` and its prolongations.
    pub psdym: bool,
    /// `tr X = 0` (and hence every `tr X_α = 0`).
    pub traceless_x: bool,
}

impl Default for Rules {
    fn default() -> Self {
        Self { bt: true, psdym: true, traceless_x: true }
    }
}

thread_local! {
    static RULES: Cell<Rules> = Cell::new(Rules::default());
    static CACHE: RefCell<HashMap<(Rules, JetAtom), Poly>> = RefCell::new(HashMap::new());
}

pub fn rules() -> Rules {
    RULES.with(Cell::get)
}

/// Runs `f` with the given reduction rules active on this thread.
pub fn with_rules<T>(r: Rules, f: impl FnOnce() -> T) -> T {
    struct Restore(Rules);
    impl Drop for Restore {
        fn drop(&mut self) {
            RULES.with(|c| c.set(self.0));
        }
    }
    let _guard = Restore(RULES.with(|c| c.replace(r)));
    f()
}

fn one() -> GaussianRational {
    GaussianRational::one()
}

fn raw(var: Var, index: [u8; 4]) -> Poly {
    Poly::factor(Factor::Atom(JetAtom::with_index(var, index)))
}

fn raw_jet(var: &Var, cs: &[Coordinate]) -> Poly {
    let mut idx = [0u8; 4];
    for c in cs {
        idx[c.index()] += 1;
    }
    raw(var.clone(), idx)
}

/// Applies `D^index` by successive total derivatives.
pub fn apply_index(mut p: Poly, index: [u8; 4]) -> Poly {
    for c in Coordinate::ALL {
        for _ in 0..index[c.index()] {
            p = total_derivative(&p, c);
        }
    }
    p
}

fn sub_index(a: [u8; 4], b: [u8; 4]) -> [u8; 4] {
    let mut out = a;
    for i in 0..4 {
        out[i] -= b[i];
    }
    out
}

/// Right-hand side of the oriented PSDYM rule for `X`, or of the imposed
/// symmetry condition for a generic characteristic `Φ`.
fn mixed_rule(var: &Var) -> Poly {
    use Coordinate::*;
    let x = Var::X;
    match var {
        Var::X => {
            // X_{yȳ} = −X_{zz̄} + X_ȳX_z̄ − X_z̄X_ȳ
            let xyb = raw_jet(&x, &[Yb]);
            let xzb = raw_jet(&x, &[Zb]);
            raw_jet(&x, &[Z, Zb]).neg().plus(&xyb.commutator(&xzb))
        }
        _ => {
            // Φ_{yȳ} = −Φ_{zz̄} − [X_z̄, Φ_ȳ] + [X_ȳ, Φ_z̄]
            let xyb = raw_jet(&x, &[Yb]);
            let xzb = raw_jet(&x, &[Zb]);
            raw_jet(var, &[Z, Zb])
                .neg()
                .minus(&xzb.commutator(&raw_jet(var, &[Yb])))
                .plus(&xyb.commutator(&raw_jet(var, &[Zb])))
        }
    }
}

fn compute_atom_nf(a: &JetAtom) -> Poly {
    use Coordinate::*;
    let r = rules();
    let idx = a.index;
    let yo = idx[Y.index()];
    let zo = idx[Z.index()];
    let ybo = idx[Yb.index()];
    let zbo = idx[Zb.index()];
    match &a.var {
        Var::Tau(_) | Var::Const(_) => {
            if a.order() == 0 {
                raw(a.var.clone(), idx)
            } else {
                Poly::zero()
            }
        }
        Var::J => {
            if r.bt && yo > 0 {
                let base = raw(Var::J, [0; 4]).mul(&raw_jet(&Var::X, &[Zb]));
                apply_index(base, sub_index(idx, unit(Y)))
            } else if r.bt && zo > 0 {
                let base = raw(Var::J, [0; 4]).mul(&raw_jet(&Var::X, &[Yb])).neg();
                apply_index(base, sub_index(idx, unit(Z)))
            } else {
                raw(Var::J, idx)
            }
        }
        Var::Jinv => {
            if a.order() == 0 {
                raw(Var::Jinv, idx)
            } else {
                apply_index(raw(Var::Jinv, [0; 4]), idx)
            }
        }
        Var::X => {
            if r.psdym && yo > 0 && ybo > 0 {
                let base = mixed_rule(&Var::X);
                apply_index(base, sub_index(idx, [1, 0, 1, 0]))
            } else {
                raw(Var::X, idx)
            }
        }
        Var::Generic(GenericId { relation: Relation::PsdymSymmetry, .. }) if yo > 0 && ybo > 0 => {
            let base = mixed_rule(&a.var);
            apply_index(base, sub_index(idx, [1, 0, 1, 0]))
        }
        Var::Generic(_) => raw(a.var.clone(), idx),
        Var::Nonlocal(id) => {
            if zbo > 0 {
                let def = nonlocal::get(*id);
                apply_index(def.dzbar.clone(), sub_index(idx, unit(Zb)))
            } else if ybo > 0 {
                let def = nonlocal::get(*id);
                apply_index(def.dybar.clone(), sub_index(idx, unit(Yb)))
            } else {
                raw(a.var.clone(), idx)
            }
        }
    }
}

/// Normal form of a single (possibly reducible) jet atom.
pub fn atom_nf(a: &JetAtom) -> Poly {
    let key = (rules(), a.clone());
    if let Some(p) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return p;
    }
    let p = compute_atom_nf(a);
    CACHE.with(|c| c.borrow_mut().insert(key, p.clone()));
    p
}

/// Normal form of the jet `var_{cs}`.
pub fn jet(var: Var, cs: &[Coordinate]) -> Poly {
    let mut idx = [0u8; 4];
    for c in cs {
        idx[c.index()] += 1;
    }
    atom_nf(&JetAtom::with_index(var, idx))
}

pub fn var(v: Var) -> Poly {
    atom_nf(&JetAtom::new(v))
}

fn d_factor(f: &Factor, c: Coordinate) -> Poly {
    match f {
        Factor::Atom(a) if a.var == Var::Jinv && a.order() == 0 => {
            let jinv = raw(Var::Jinv, [0; 4]);
            jinv.mul(&atom_nf(&JetAtom::new(Var::J).bumped(c))).mul(&jinv).neg()
        }
        Factor::Atom(a) => atom_nf(&a.bumped(c)),
        Factor::Inv(m) => {
            let inner = Poly::monomial((**m).clone(), one());
            if c == Coordinate::Zb {
                inner
            } else {
                inv_dzbar_poly(&total_derivative(&inner, c))
            }
        }
    }
}

fn d_word(word: &[Factor], c: Coordinate) -> Poly {
    let mut out = Poly::zero();
    for i in 0..word.len() {
        let d = d_factor(&word[i], c);
        if d.is_zero() {
            continue;
        }
        for (dm, dc) in d.terms() {
            let mut w = word[..i].to_vec();
            w.extend(dm.word().iter().cloned());
            w.extend_from_slice(&word[i + 1..]);
            for (c2, w) in reduce_word(w) {
                out.add_term(Monomial::new(w, dm.coords(), dm.traces().to_vec()), dc * &c2);
            }
        }
    }
    out
}

/// Total derivative `D_c` of a normal-form polynomial; the result is in
/// normal form.
pub fn total_derivative(p: &Poly, c: Coordinate) -> Poly {
    let ci = c.index();
    let mut out = Poly::zero();
    for (m, coef) in p.terms() {
        let coords = m.coords();
        if coords[ci] > 0 {
            let mut lowered = coords;
            lowered[ci] -= 1;
            out.add_term(m.with_coords(lowered), coef * &GaussianRational::from_int(coords[ci] as i64));
        }
        let traces = m.traces();
        for t in 0..traces.len() {
            let dt = d_word(&traces[t], c).trace(rules().traceless_x);
            if dt.is_zero() {
                continue;
            }
            let mut rest = traces.to_vec();
            rest.remove(t);
            let base = Poly::monomial(m.with_traces(rest), coef.clone());
            out.add_poly(&dt.mul(&base));
        }
        let dw = d_word(m.word(), c);
        if !dw.is_zero() {
            let scalar = Poly::monomial(Monomial::new(Vec::new(), coords, traces.to_vec()), coef.clone());
            out.add_poly(&scalar.mul(&dw));
        }
    }
    out
}

/// Re-reduces a polynomial whose atoms may have become reducible (for
/// example after computing under different [`Rules`]).
pub fn renormalize(p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut acc = Poly::monomial(Monomial::new(Vec::new(), m.coords(), Vec::new()), c.clone());
        for t in m.traces() {
            let w = renormalize_word(t);
            acc = acc.mul(&w.trace(rules().traceless_x));
        }
        acc = acc.mul(&renormalize_word(m.word()));
        out.add_poly(&acc);
    }
    out
}

fn renormalize_word(w: &[Factor]) -> Poly {
    let mut acc = Poly::identity();
    for f in w {
        let fp = match f {
            Factor::Atom(a) => atom_nf(a),
            Factor::Inv(m) => inv_dzbar_poly(&renormalize(&Poly::monomial((**m).clone(), one()))),
        };
        acc = acc.mul(&fp);
        if acc.is_zero() {
            break;
        }
    }
    acc
}
