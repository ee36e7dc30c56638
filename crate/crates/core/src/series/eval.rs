use std::cell::RefCell;
use std::collections::HashMap;

use thiserror::Error;

use super::{total_degree, Exponent, SolutionFixture, TruncatedSeries};
use crate::algebra::{ConstMatrix, GaussianRational};
use crate::jetexpr::{Coordinate, Expr, Factor, JetAtom, Monomial, Poly, Var};
use crate::recursion::nonlocal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no series bound for `{0}`")]
    Unresolved(String),
    #[error("defining relations of W{id} disagree at exponent {exponent:?}")]
    Conflict { id: u32, exponent: Exponent },
}

/// Maps normal forms and trees to series over one fixture. Nonlocal
/// variables are reconstructed from their two defining derivatives, with
/// the `(y, z)`-only part taken from their slice expression.
pub struct Evaluator<'a> {
    fixture: &'a SolutionFixture,
    bindings: HashMap<String, TruncatedSeries>,
    atoms: RefCell<HashMap<JetAtom, TruncatedSeries>>,
    nonlocals: RefCell<HashMap<u32, TruncatedSeries>>,
    words: RefCell<HashMap<Vec<Factor>, TruncatedSeries>>,
}

/// The traceless matrix the constant `M` stands for during evaluation.
pub fn default_m(n: usize) -> ConstMatrix {
    let mut m = ConstMatrix::zero(n);
    let mut diag = 0;
    for i in 0..n {
        for j in 0..n {
            let v = ((i * n + j) % 5) as i64 - 1;
            if i == j {
                if i + 1 == n {
                    m.set(i, j, GaussianRational::from_int(-diag));
                    continue;
                }
                diag += v;
            }
            m.set(i, j, GaussianRational::from_int(v));
        }
    }
    m
}

impl<'a> Evaluator<'a> {
    pub fn new(fixture: &'a SolutionFixture) -> Self {
        let mut bindings = HashMap::new();
        bindings.insert("M".to_string(), TruncatedSeries::constant(default_m(fixture.n()), fixture.degree));
        Self { fixture, bindings, atoms: RefCell::default(), nonlocals: RefCell::default(), words: RefCell::default() }
    }

    /// Binds a constant or generic characteristic name to a series.
    pub fn bind(&mut self, name: &str, s: TruncatedSeries) {
        self.atoms.borrow_mut().clear();
        self.nonlocals.borrow_mut().clear();
        self.words.borrow_mut().clear();
        self.bindings.insert(name.to_string(), s);
    }

    pub fn fixture(&self) -> &SolutionFixture {
        self.fixture
    }

    fn cap(&self) -> usize {
        self.fixture.degree
    }

    fn n(&self) -> usize {
        self.fixture.n()
    }

    fn base(&self, v: &Var) -> Result<TruncatedSeries, EvalError> {
        Ok(match v {
            Var::J => self.fixture.j.clone(),
            Var::Jinv => self.fixture.jinv.clone(),
            Var::X => self.fixture.x.clone(),
            Var::Tau(k) => TruncatedSeries::constant(crate::config::lie_basis().tau(*k as usize).clone(), self.cap()),
            Var::Const(name) => {
                self.bindings.get(&**name).cloned().ok_or_else(|| EvalError::Unresolved(name.to_string()))?
            }
            Var::Generic(g) => {
                self.bindings.get(&*g.name).cloned().ok_or_else(|| EvalError::Unresolved(g.name.to_string()))?
            }
            Var::Nonlocal(id) => self.nonlocal(*id)?,
        })
    }

    pub fn atom(&self, a: &JetAtom) -> Result<TruncatedSeries, EvalError> {
        if let Some(s) = self.atoms.borrow().get(a) {
            return Ok(s.clone());
        }
        let s = self.base(&a.var)?.derivatives(&a.index);
        self.atoms.borrow_mut().insert(a.clone(), s.clone());
        Ok(s)
    }

    /// The series of `W_id`, checking that both defining relations agree.
    pub fn nonlocal(&self, id: u32) -> Result<TruncatedSeries, EvalError> {
        if let Some(s) = self.nonlocals.borrow().get(&id) {
            return Ok(s.clone());
        }
        let def = nonlocal::get(id);
        let sz = self.poly(&def.dzbar)?;
        let sy = self.poly(&def.dybar)?;
        let ss = self.poly(&def.slice)?;
        let (zb, yb) = (Coordinate::Zb.index(), Coordinate::Yb.index());
        let valid = (sz.valid().min(sy.valid()) + 1).min(ss.valid()).min(self.cap() as i32);
        let mut w = TruncatedSeries::zero(self.n(), self.cap()).with_valid(valid);
        for (e, m) in ss.terms() {
            if e[zb] == 0 && e[yb] == 0 {
                w.set(*e, m.clone());
            }
        }
        for (e, m) in sz.terms() {
            let mut f = *e;
            f[zb] += 1;
            w.set(f, m.scale(&GaussianRational::from_ratio(1, f[zb] as i64)));
        }
        for (e, m) in sy.terms() {
            if e[zb] > 0 {
                continue;
            }
            let mut f = *e;
            f[yb] += 1;
            w.set(f, m.scale(&GaussianRational::from_ratio(1, f[yb] as i64)));
        }
        // overlapping coefficients: D_ȳW must reproduce W_ȳ where z̄ ≥ 1
        let check = w.derivative(Coordinate::Yb).sub(&sy);
        if let Some((exponent, _)) =
            check.terms().filter(|(e, _)| e[zb] > 0).map(|(e, m)| (*e, m)).min_by_key(|(e, _)| (total_degree(e), *e))
        {
            return Err(EvalError::Conflict { id, exponent });
        }
        self.nonlocals.borrow_mut().insert(id, w.clone());
        Ok(w)
    }

    /// Products are memoized by prefix; normal forms share many.
    fn word(&self, w: &[Factor]) -> Result<TruncatedSeries, EvalError> {
        let Some((last, init)) = w.split_last() else {
            return Ok(TruncatedSeries::identity(self.n(), self.cap()));
        };
        if let Some(s) = self.words.borrow().get(w) {
            return Ok(s.clone());
        }
        let f = match last {
            Factor::Atom(a) => self.atom(a)?,
            Factor::Inv(m) => self.monomial(m)?.integrate_zbar(),
        };
        let s = if init.is_empty() { f } else { self.word(init)?.mul(&f) };
        self.words.borrow_mut().insert(w.to_vec(), s.clone());
        Ok(s)
    }

    fn monomial(&self, m: &Monomial) -> Result<TruncatedSeries, EvalError> {
        let mut acc = TruncatedSeries::identity(self.n(), self.cap());
        for c in Coordinate::ALL {
            for _ in 0..m.coords()[c.index()] {
                acc = acc.mul(&TruncatedSeries::coordinate(c, self.n(), self.cap()));
            }
        }
        for t in m.traces() {
            acc = acc.mul(&self.word(t)?.trace());
        }
        Ok(acc.mul(&self.word(m.word())?))
    }

    pub fn poly(&self, p: &Poly) -> Result<TruncatedSeries, EvalError> {
        let mut acc = TruncatedSeries::zero(self.n(), self.cap());
        for (m, c) in p.terms() {
            acc = acc.add(&self.monomial(m)?.scale(c));
        }
        Ok(acc)
    }

    /// Evaluates a tree directly, without normalizing it.
    pub fn expr(&self, e: &Expr) -> Result<TruncatedSeries, EvalError> {
        let (n, cap) = (self.n(), self.cap());
        Ok(match e {
            Expr::Zero => TruncatedSeries::zero(n, cap),
            Expr::IdentityMatrix => TruncatedSeries::identity(n, cap),
            Expr::Atom(a) => self.atom(a)?,
            Expr::Coord(c) => TruncatedSeries::coordinate(*c, n, cap),
            Expr::Sum(ts) => {
                let mut acc = TruncatedSeries::zero(n, cap);
                for t in ts {
                    acc = acc.add(&self.expr(t)?);
                }
                acc
            }
            Expr::ScalarMul(c, e) => self.expr(e)?.scale(c),
            Expr::Prod(fs) => {
                let mut acc = TruncatedSeries::identity(n, cap);
                for f in fs {
                    acc = acc.mul(&self.expr(f)?);
                }
                acc
            }
            Expr::Comm(a, b) => self.expr(a)?.commutator(&self.expr(b)?),
            Expr::InvDzbar(e) => self.expr(e)?.integrate_zbar(),
            Expr::Deriv(c, e) => self.expr(e)?.derivative(*c),
            Expr::Trace(e) => self.expr(e)?.trace(),
        })
    }
}

/// Whether an expression vanishes on a fixture, with the first nonzero
/// coefficient as witness otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub valid: i32,
    pub witness: Option<(Exponent, ConstMatrix)>,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn residual(p: &Poly, ev: &Evaluator<'_>) -> Result<Residual, EvalError> {
    let s = ev.poly(p)?;
    Ok(Residual { valid: s.valid(), witness: s.witness() })
}
