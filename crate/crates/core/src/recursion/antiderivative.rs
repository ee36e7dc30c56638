//! The formal antiderivative `D_z̄⁻¹` with the `M(y, z)` kernel dropped.
//!
//! An exact antiderivative is searched for in the span of candidate
//! monomials (one `z̄`-order stripped from a factor, or one extra power of
//! the coordinate `z̄`). Whatever the span cannot reach is left behind as
//! opaque `D_z̄⁻¹` factors of monic monomials; the remainder is taken with
//! respect to an echelon basis, so it is canonical for the span.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::algebra::GaussianRational;
use crate::jetexpr::{reduce_word, rules, total_derivative, Coordinate, Factor, Monomial, Poly, Rules, Var};

const MAX_ROUNDS: usize = 4;

const MEMO_LIMIT: usize = 1 << 14;

thread_local! {
    static MEMO: RefCell<HashMap<(Rules, Poly), Poly>> = RefCell::new(HashMap::new());
    static IMAGES: RefCell<HashMap<(Rules, Monomial), Poly>> = RefCell::new(HashMap::new());
}

/// `D_z̄⁻¹ p` in normal form.
pub fn inv_dzbar_poly(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let key = (rules(), p.clone());
    if let Some(r) = MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return r;
    }
    let r = compute_inv_dzbar(p);
    MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= MEMO_LIMIT {
            m.clear();
        }
        m.insert(key, r.clone());
    });
    r
}

fn compute_inv_dzbar(p: &Poly) -> Poly {
    let (anti, rest) = split(p);
    let mut out = anti;
    for (m, c) in rest.terms() {
        out.add_term(opaque(m), c.clone());
    }
    out
}

/// `D_z̄⁻¹ m` with the `z̄`-independent factors of `m` (outer constant
/// matrices, powers of `y`, `z`, `ȳ`, traces of constants) pulled out.
fn opaque(m: &Monomial) -> Monomial {
    let is_const = |f: &Factor| matches!(f, Factor::Atom(a) if a.var.is_constant());
    let w = m.word();
    let lead = w.iter().take_while(|f| is_const(f)).count();
    let trail = w[lead..].iter().rev().take_while(|f| is_const(f)).count();
    let zb = Coordinate::Zb.index();
    let mut inner_coords = [0; 4];
    inner_coords[zb] = m.coords()[zb];
    let mut outer_coords = m.coords();
    outer_coords[zb] = 0;
    let (const_traces, traces): (Vec<_>, Vec<_>) =
        m.traces().iter().cloned().partition(|t| t.iter().all(is_const));
    let core = &w[lead..w.len() - trail];
    if core.is_empty() && traces.is_empty() {
        return Monomial::new(vec![Factor::Inv(Box::new(m.clone()))], [0; 4], Vec::new());
    }
    let inner = Monomial::new(core.to_vec(), inner_coords, traces);
    let mut word = w[..lead].to_vec();
    word.push(Factor::Inv(Box::new(inner)));
    word.extend_from_slice(&w[w.len() - trail..]);
    Monomial::new(word, outer_coords, const_traces)
}

/// Splits `p = D_z̄ a + r`, returning `(a, r)` with `r` irreducible.
pub fn split(p: &Poly) -> (Poly, Poly) {
    let mut anti = Poly::zero();
    let mut rest = p.clone();
    for _ in 0..MAX_ROUNDS {
        if rest.is_zero() {
            break;
        }
        let (a, r) = split_once(&rest);
        if a.is_zero() {
            return (anti, r);
        }
        anti.add_poly(&a);
        rest = r;
    }
    (anti, rest)
}

/// The exact antiderivative of `p`, if one exists in the candidate span.
pub fn exact_antiderivative(p: &Poly) -> Option<Poly> {
    let (a, r) = split(p);
    r.is_zero().then_some(a)
}

fn strippable(v: &Var) -> bool {
    matches!(v, Var::X | Var::J | Var::Generic(_))
}

fn lower_word(w: &[Factor], out: &mut Vec<Vec<Factor>>) {
    for (i, f) in w.iter().enumerate() {
        if let Factor::Atom(a) = f {
            if strippable(&a.var) {
                if let Some(l) = a.lowered(Coordinate::Zb) {
                    let mut nw = w.to_vec();
                    nw[i] = Factor::Atom(l);
                    out.push(nw);
                }
            }
        }
    }
}

fn all_constant(m: &Monomial) -> bool {
    let mut ok = true;
    m.visit_atoms(&mut |a| ok &= a.var.is_constant());
    ok && !m.word().iter().any(|f| matches!(f, Factor::Inv(_)))
}

fn candidates_of(m: &Monomial, out: &mut BTreeSet<Monomial>) {
    let mut words = Vec::new();
    lower_word(m.word(), &mut words);
    for w in words {
        for (_, rw) in reduce_word(w) {
            out.insert(Monomial::new(rw, m.coords(), m.traces().to_vec()));
        }
    }
    for (t, tw) in m.traces().iter().enumerate() {
        let mut words = Vec::new();
        lower_word(tw, &mut words);
        for w in words {
            let mut rest = m.traces().to_vec();
            rest.remove(t);
            let base = Poly::monomial(m.with_traces(rest), GaussianRational::one());
            let tr = Poly::monomial(Monomial::new(w, [0; 4], Vec::new()), GaussianRational::one())
                .trace(crate::jetexpr::rules().traceless_x);
            for (cm, _) in tr.mul(&base).terms() {
                out.insert(cm.clone());
            }
        }
    }
    let zb = Coordinate::Zb.index();
    if m.coords()[zb] > 0 || all_constant(m) {
        let mut c = m.coords();
        c[zb] += 1;
        out.insert(m.with_coords(c));
    }
}

/// `D_z̄ m`, memoized per rule set.
fn image(m: &Monomial) -> Poly {
    let key = (rules(), m.clone());
    if let Some(r) = IMAGES.with(|c| c.borrow().get(&key).cloned()) {
        return r;
    }
    let r = total_derivative(&Poly::monomial(m.clone(), GaussianRational::one()), Coordinate::Zb);
    IMAGES.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= MEMO_LIMIT {
            c.clear();
        }
        c.insert(key, r.clone());
    });
    r
}

struct Pivot {
    image: Poly,
    anti: Poly,
}

fn split_once(p: &Poly) -> (Poly, Poly) {
    let mut cands = BTreeSet::new();
    for (m, _) in p.terms() {
        candidates_of(m, &mut cands);
    }
    let mut images: Vec<(Monomial, Poly)> = cands.iter().map(|c| (c.clone(), image(c))).collect();
    // one closure round over monomials the first images introduced
    let mut extra = BTreeSet::new();
    for (_, img) in &images {
        for (m, _) in img.terms() {
            if p.coefficient(m).is_zero() {
                candidates_of(m, &mut extra);
            }
        }
    }
    for c in extra {
        if !cands.contains(&c) {
            let img = image(&c);
            cands.insert(c.clone());
            images.push((c, img));
        }
    }

    let mut pivots: BTreeMap<Monomial, Pivot> = BTreeMap::new();
    for (c, img) in images {
        let mut v = img;
        let mut a = Poly::monomial(c, GaussianRational::one());
        reduce_leading(&mut v, &mut a, &pivots);
        if let Some((lm, lc)) = v.leading() {
            let lm = lm.clone();
            let inv = lc.inv().expect("nonzero leading coefficient");
            pivots.insert(lm, Pivot { image: v.scale(&inv), anti: a.scale(&inv) });
        }
    }

    let mut work = p.clone();
    let mut anti = Poly::zero();
    let mut rest = Poly::zero();
    while let Some((lm, lc)) = work.leading() {
        let (lm, lc) = (lm.clone(), lc.clone());
        match pivots.get(&lm) {
            Some(pv) => {
                work.add_scaled(&pv.image, &-lc.clone());
                anti.add_scaled(&pv.anti, &lc);
            }
            None => {
                work.add_term(lm.clone(), -lc.clone());
                rest.add_term(lm, lc);
            }
        }
    }
    (anti, rest)
}

fn reduce_leading(v: &mut Poly, a: &mut Poly, pivots: &BTreeMap<Monomial, Pivot>) {
    while let Some((lm, lc)) = v.leading() {
        let Some(pv) = pivots.get(lm) else { break };
        let lc = lc.clone();
        v.add_scaled(&pv.image, &-lc.clone());
        a.add_scaled(&pv.anti, &-lc);
    }
}
