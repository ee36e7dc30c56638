//! Normal-form representation: sums of monomials over ordered words of
//! noncommuting factors, with commuting coordinate powers and trace factors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::atom::{Coordinate, JetAtom, Var};
use crate::algebra::GaussianRational;
use crate::config;

/// A noncommuting factor of a monomial word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Factor {
    Atom(JetAtom),
    /// Opaque formal antiderivative `D_z̄⁻¹(m)` of a monic monomial.
    Inv(Box<Monomial>),
}

impl Factor {
    fn weight(&self) -> u32 {
        match self {
            Factor::Atom(a) => 1 + a.order(),
            Factor::Inv(m) => 1 + m.weight,
        }
    }

    pub fn as_atom(&self) -> Option<&JetAtom> {
        match self {
            Factor::Atom(a) => Some(a),
            Factor::Inv(_) => None,
        }
    }

    fn is_constant(&self) -> bool {
        matches!(self, Factor::Atom(a) if a.var.is_constant())
    }
}

pub type Word = Vec<Factor>;

/// `y^a z^b ȳ^c z̄^d · tr(w_1)…tr(w_k) · f_1 f_2 … f_n`.
///
/// Ordering is graded: the first field is a total weight, so the maximum
/// monomial of a sum is its most complex term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    weight: u32,
    word: Word,
    coords: [u16; 4],
    traces: Vec<Word>,
}

impl Monomial {
    pub fn new(word: Word, coords: [u16; 4], mut traces: Vec<Word>) -> Self {
        traces.sort();
        let weight = word.iter().map(Factor::weight).sum::<u32>()
            + coords.iter().map(|&k| k as u32).sum::<u32>()
            + traces.iter().map(|w| 1 + w.iter().map(Factor::weight).sum::<u32>()).sum::<u32>();
        Self { weight, word, coords, traces }
    }

    pub fn identity() -> Self {
        Self::new(Vec::new(), [0; 4], Vec::new())
    }

    pub fn word(&self) -> &[Factor] {
        &self.word
    }

    pub fn coords(&self) -> [u16; 4] {
        self.coords
    }

    pub fn traces(&self) -> &[Word] {
        &self.traces
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn with_word(&self, word: Word) -> Monomial {
        Monomial::new(word, self.coords, self.traces.clone())
    }

    pub fn with_coords(&self, coords: [u16; 4]) -> Monomial {
        Monomial::new(self.word.clone(), coords, self.traces.clone())
    }

    pub fn with_traces(&self, traces: Vec<Word>) -> Monomial {
        Monomial::new(self.word.clone(), self.coords, traces)
    }

    /// For a word `P·D_z̄⁻¹(m)·S` with `P`, `S` made of constant matrices,
    /// returns `(P, m, S)`.
    pub fn inverse_sandwich(&self) -> Option<(&[Factor], &Monomial, &[Factor])> {
        let at = self.word.iter().position(|f| matches!(f, Factor::Inv(_)))?;
        let (pre, rest) = self.word.split_at(at);
        let Factor::Inv(m) = &rest[0] else { unreachable!() };
        let post = &rest[1..];
        let constant = |w: &[Factor]| w.iter().all(|f| matches!(f, Factor::Atom(a) if a.var.is_constant()));
        (constant(pre) && constant(post)).then_some((pre, &**m, post))
    }

    /// An opaque antiderivative times `z̄`-independent factors only: constant
    /// matrices, the coordinates `y`, `z`, `ȳ` and traces of constants.
    /// Returns the integrand with those factors moved inside.
    pub fn inverse_integrand(&self) -> Option<Poly> {
        let (pre, m, post) = self.inverse_sandwich()?;
        if self.coords[3] > 0 {
            return None;
        }
        let constant = |w: &Word| w.iter().all(|f| matches!(f, Factor::Atom(a) if a.var.is_constant()));
        if !self.traces.iter().all(constant) {
            return None;
        }
        let one = GaussianRational::one();
        let outer = |w: &[Factor]| Poly::monomial(Monomial::new(w.to_vec(), [0; 4], Vec::new()), one.clone());
        let scalars = Poly::monomial(Monomial::new(Vec::new(), self.coords, self.traces.clone()), one.clone());
        Some(scalars.mul(&outer(pre)).mul(&Poly::monomial(m.clone(), one.clone())).mul(&outer(post)))
    }

    /// Every atom appearing anywhere inside the monomial, including inside
    /// traces and opaque antiderivatives.
    pub fn visit_atoms<'a>(&'a self, f: &mut dyn FnMut(&'a JetAtom)) {
        fn walk<'a>(w: &'a [Factor], f: &mut dyn FnMut(&'a JetAtom)) {
            for x in w {
                match x {
                    Factor::Atom(a) => f(a),
                    Factor::Inv(m) => m.visit_atoms(f),
                }
            }
        }
        walk(&self.word, f);
        for t in &self.traces {
            walk(t, f);
        }
    }
}

/// A multiplicatively closed product of two monomials before word reduction.
fn concat(a: &Monomial, b: &Monomial) -> (Word, [u16; 4], Vec<Word>) {
    let mut word = a.word.clone();
    word.extend(b.word.iter().cloned());
    let mut coords = a.coords;
    for i in 0..4 {
        coords[i] += b.coords[i];
    }
    let mut traces = a.traces.clone();
    traces.extend(b.traces.iter().cloned());
    (word, coords, traces)
}

fn is_bare(f: &Factor, v: &Var) -> bool {
    matches!(f, Factor::Atom(a) if &a.var == v && a.index == [0; 4])
}

fn tau_of(f: &Factor) -> Option<u8> {
    match f {
        Factor::Atom(JetAtom { var: Var::Tau(k), .. }) => Some(*k),
        _ => None,
    }
}

/// Applies `J·J⁻¹ = J⁻¹·J = I` and collapses adjacent basis constants via the
/// session product table, exhaustively.
pub fn reduce_word(word: Word) -> Vec<(GaussianRational, Word)> {
    for i in 0..word.len().saturating_sub(1) {
        let (a, b) = (&word[i], &word[i + 1]);
        let cancel = (is_bare(a, &Var::J) && is_bare(b, &Var::Jinv)) || (is_bare(a, &Var::Jinv) && is_bare(b, &Var::J));
        if cancel {
            let mut w = word[..i].to_vec();
            w.extend_from_slice(&word[i + 2..]);
            return reduce_word(w);
        }
        if let (Some(p), Some(q)) = (tau_of(a), tau_of(b)) {
            let basis = config::lie_basis();
            if let Some((id, taus)) = basis.product(p as usize, q as usize) {
                let mut out = Vec::new();
                let head = &word[..i];
                let tail = &word[i + 2..];
                if !id.is_zero() {
                    let mut w = head.to_vec();
                    w.extend_from_slice(tail);
                    for (c, w) in reduce_word(w) {
                        out.push((&c * id, w));
                    }
                }
                for (k, c) in taus.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut w = head.to_vec();
                    w.push(Factor::Atom(JetAtom::new(Var::Tau(k as u8))));
                    w.extend_from_slice(tail);
                    for (c2, w) in reduce_word(w) {
                        out.push((&c2 * c, w));
                    }
                }
                return out;
            }
        }
    }
    vec![(GaussianRational::one(), word)]
}

/// Trace of a reduced word: `Some(canonical rotation)` for a formal trace
/// factor, `None` together with the coefficient for a pure number.
fn trace_word(word: Word, traceless_x: bool) -> Vec<(GaussianRational, Option<Word>)> {
    let mut out = Vec::new();
    for (c, w) in reduce_word(word) {
        if w.is_empty() {
            out.push((&c * &GaussianRational::from_int(config::lie_basis().n() as i64), None));
            continue;
        }
        if w.len() >= 2 {
            // cyclic junction: bring the last factor to the front and retry
            let last = &w[w.len() - 1];
            let first = &w[0];
            let junction = (tau_of(last).is_some() && tau_of(first).is_some())
                || (is_bare(last, &Var::J) && is_bare(first, &Var::Jinv))
                || (is_bare(last, &Var::Jinv) && is_bare(first, &Var::J));
            if junction {
                let mut r = vec![last.clone()];
                r.extend_from_slice(&w[..w.len() - 1]);
                for (c2, t) in trace_word(r, traceless_x) {
                    out.push((&c * &c2, t));
                }
                continue;
            }
        }
        if w.len() == 1 {
            if w[0].is_constant() {
                continue;
            }
            if traceless_x && matches!(&w[0], Factor::Atom(a) if a.var == Var::X) {
                continue;
            }
        }
        let best = (0..w.len())
            .map(|r| {
                let mut v = w[r..].to_vec();
                v.extend_from_slice(&w[..r]);
                v
            })
            .min()
            .expect("non-empty word");
        out.push((c, Some(best)));
    }
    out
}

/// A finite linear combination of monomials with Gaussian-rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::monomial(Monomial::identity(), GaussianRational::one())
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Self::monomial(Monomial::identity(), c)
    }

    pub fn monomial(m: Monomial, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// A single factor as-is; callers are responsible for normal form.
    pub fn factor(f: Factor) -> Self {
        Self::monomial(Monomial::new(vec![f], [0; 4], Vec::new()), GaussianRational::one())
    }

    pub fn coord(c: Coordinate) -> Self {
        let mut e = [0; 4];
        e[c.index()] = 1;
        Self::monomial(Monomial::new(Vec::new(), e, Vec::new()), GaussianRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, GaussianRational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Largest monomial in the graded order.
    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, s: &GaussianRational) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add_poly(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_poly(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c);
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Poly {
        let mut p = Poly::zero();
        p.add_scaled(self, s);
        p
    }

    pub fn neg(&self) -> Poly {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn plus(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_poly(o);
        p
    }

    pub fn minus(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        p.sub_poly(o);
        p
    }

    /// Adds `c · m1 · m2` with word reduction.
    pub fn add_product_term(&mut self, m1: &Monomial, m2: &Monomial, c: &GaussianRational) {
        let (word, coords, traces) = concat(m1, m2);
        for (c2, w) in reduce_word(word) {
            self.add_term(Monomial::new(w, coords, traces.clone()), c * &c2);
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_product_term(m1, m2, &(c1 * c2));
            }
        }
        out
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, o: &Poly) -> Poly {
        self.mul(o).minus(&o.mul(self))
    }

    pub fn product(factors: &[Poly]) -> Poly {
        factors.iter().fold(Poly::identity(), |acc, f| acc.mul(f))
    }

    /// Formal trace; the result is a scalar polynomial (empty words).
    pub fn trace(&self, traceless_x: bool) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (c2, t) in trace_word(m.word.clone(), traceless_x) {
                let mut traces = m.traces.clone();
                if let Some(t) = t {
                    traces.push(t);
                }
                out.add_term(Monomial::new(Vec::new(), m.coords, traces), c * &c2);
            }
        }
        out
    }

    /// True when every monomial has an empty word (a commuting scalar).
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|m| m.word.is_empty())
    }

    pub fn atoms(&self) -> Vec<JetAtom> {
        let mut out = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            m.visit_atoms(&mut |a| {
                out.insert(a.clone());
            });
        }
        out.into_iter().collect()
    }

    pub fn contains_var(&self, pred: &dyn Fn(&Var) -> bool) -> bool {
        let mut hit = false;
        for m in self.terms.keys() {
            m.visit_atoms(&mut |a| hit |= pred(&a.var));
            if hit {
                return true;
            }
        }
        false
    }

    /// Whether any opaque `D_z̄⁻¹` node appears.
    pub fn has_inverse(&self) -> bool {
        fn in_word(w: &[Factor]) -> bool {
            w.iter().any(|f| matches!(f, Factor::Inv(_)))
        }
        self.terms.keys().any(|m| in_word(&m.word) || m.traces.iter().any(|t| in_word(t)))
    }
}

impl FromIterator<(Monomial, GaussianRational)> for Poly {
    fn from_iter<I: IntoIterator<Item = (Monomial, GaussianRational)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }
}
