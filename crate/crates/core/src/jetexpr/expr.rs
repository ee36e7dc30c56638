//! The expression tree produced by the parser and consumed by `normalize`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::atom::{Coordinate, JetAtom, Var};
use super::poly::{Factor, Monomial, Poly};
use crate::algebra::GaussianRational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Zero,
    IdentityMatrix,
    Atom(JetAtom),
    /// An explicit base-space coordinate, a commuting scalar.
    Coord(Coordinate),
    Sum(Vec<Expr>),
    ScalarMul(GaussianRational, Box<Expr>),
    /// Noncommutative ordered product.
    Prod(Vec<Expr>),
    Comm(Box<Expr>, Box<Expr>),
    InvDzbar(Box<Expr>),
    /// Total derivative `D_c`.
    Deriv(Coordinate, Box<Expr>),
    Trace(Box<Expr>),
}

impl Expr {
    pub fn var(v: Var) -> Expr {
        Expr::Atom(JetAtom::new(v))
    }

    pub fn jet(v: Var, cs: &[Coordinate]) -> Expr {
        let mut idx = [0u8; 4];
        for c in cs {
            idx[c.index()] += 1;
        }
        Expr::Atom(JetAtom::with_index(v, idx))
    }

    pub fn x() -> Expr {
        Expr::var(Var::X)
    }

    pub fn j() -> Expr {
        Expr::var(Var::J)
    }

    pub fn jinv() -> Expr {
        Expr::var(Var::Jinv)
    }

    /// `τ_k`, one-based as in the grammar.
    pub fn tau(k: usize) -> Expr {
        assert!(k >= 1, "tau indices are one-based");
        Expr::var(Var::Tau((k - 1) as u8))
    }

    pub fn constant(name: &str) -> Expr {
        Expr::var(Var::Const(name.into()))
    }

    pub fn scalar(c: GaussianRational) -> Expr {
        if c.is_zero() {
            Expr::Zero
        } else if c.is_one() {
            Expr::IdentityMatrix
        } else {
            Expr::ScalarMul(c, Box::new(Expr::IdentityMatrix))
        }
    }

    pub fn int(n: i64) -> Expr {
        Expr::scalar(GaussianRational::from_int(n))
    }

    pub fn comm(a: Expr, b: Expr) -> Expr {
        Expr::Comm(Box::new(a), Box::new(b))
    }

    pub fn inv_dzbar(e: Expr) -> Expr {
        Expr::InvDzbar(Box::new(e))
    }

    pub fn deriv(c: Coordinate, e: Expr) -> Expr {
        Expr::Deriv(c, Box::new(e))
    }

    pub fn trace(e: Expr) -> Expr {
        Expr::Trace(Box::new(e))
    }

    pub fn scaled(self, c: GaussianRational) -> Expr {
        Expr::ScalarMul(c, Box::new(self))
    }

    /// The literal value if this node is a pure number.
    pub fn as_literal(&self) -> Option<GaussianRational> {
        match self {
            Expr::Zero => Some(GaussianRational::zero()),
            Expr::IdentityMatrix => Some(GaussianRational::one()),
            Expr::ScalarMul(c, e) => e.as_literal().map(|v| c * &v),
            Expr::Sum(ts) => {
                let mut acc = GaussianRational::zero();
                for t in ts {
                    acc += &t.as_literal()?;
                }
                Some(acc)
            }
            Expr::Prod(fs) => {
                let mut acc = GaussianRational::one();
                for f in fs {
                    acc = &acc * &f.as_literal()?;
                }
                Some(acc)
            }
            _ => None,
        }
    }

    /// Rebuilds an expression tree from a normal form.
    pub fn from_poly(p: &Poly) -> Expr {
        let mut terms: Vec<Expr> = p.terms().map(|(m, c)| term_expr(m, c)).collect();
        match terms.len() {
            0 => Expr::Zero,
            1 => terms.pop().expect("one term"),
            _ => Expr::Sum(terms),
        }
    }
}

fn word_factors(w: &[Factor], out: &mut Vec<Expr>) {
    for f in w {
        out.push(match f {
            Factor::Atom(a) => Expr::Atom(a.clone()),
            Factor::Inv(m) => Expr::InvDzbar(Box::new(term_expr(m, &GaussianRational::one()))),
        });
    }
}

fn word_expr(w: &[Factor]) -> Expr {
    let mut fs = Vec::new();
    word_factors(w, &mut fs);
    match fs.len() {
        0 => Expr::IdentityMatrix,
        1 => fs.pop().expect("one factor"),
        _ => Expr::Prod(fs),
    }
}

fn term_expr(m: &Monomial, c: &GaussianRational) -> Expr {
    let mut fs = Vec::new();
    for cc in Coordinate::ALL {
        for _ in 0..m.coords()[cc.index()] {
            fs.push(Expr::Coord(cc));
        }
    }
    for t in m.traces() {
        fs.push(Expr::Trace(Box::new(word_expr(t))));
    }
    word_factors(m.word(), &mut fs);
    let body = match fs.len() {
        0 => Expr::IdentityMatrix,
        1 => fs.pop().expect("one factor"),
        _ => Expr::Prod(fs),
    };
    if c.is_one() {
        body
    } else {
        Expr::ScalarMul(c.clone(), Box::new(body))
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        Expr::Sum(vec![self, o])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        Expr::Sum(vec![self, -o])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::ScalarMul(GaussianRational::from_int(-1), Box::new(self))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        Expr::Prod(vec![self, o])
    }
}

fn needs_parens_in_product(e: &Expr) -> bool {
    matches!(e, Expr::Sum(_) | Expr::ScalarMul(..))
}

fn write_product_factor(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    if needs_parens_in_product(e) {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints in the input grammar; `parse(e.to_string())` reproduces `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => f.write_str("0"),
            Expr::IdentityMatrix => f.write_str("I"),
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Coord(c) => f.write_str(c.name()),
            Expr::Sum(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    if matches!(t, Expr::Sum(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
            Expr::ScalarMul(c, e) => {
                if **e == Expr::IdentityMatrix {
                    return write!(f, "{c}*I");
                }
                write!(f, "{c}*")?;
                write_product_factor(f, e)
            }
            Expr::Prod(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write_product_factor(f, x)?;
                }
                Ok(())
            }
            Expr::Comm(a, b) => write!(f, "comm({a}, {b})"),
            Expr::InvDzbar(e) => write!(f, "IDzb({e})"),
            Expr::Deriv(c, e) => {
                let name = match c {
                    Coordinate::Y => "Dy",
                    Coordinate::Z => "Dz",
                    Coordinate::Yb => "Dyb",
                    Coordinate::Zb => "Dzb",
                };
                write!(f, "{name}({e})")
            }
            Expr::Trace(e) => write!(f, "tr({e})"),
        }
    }
}

fn latex_atom(a: &JetAtom) -> String {
    let base = match &a.var {
        Var::J => "J".to_string(),
        Var::Jinv => "J^{-1}".to_string(),
        Var::X => "X".to_string(),
        Var::Tau(k) => format!("\\tau_{{{}}}", k + 1),
        Var::Const(n) => n.to_string(),
        Var::Generic(g) if &*g.name == "Phi" => "\\Phi".to_string(),
        Var::Generic(g) => g.name.to_string(),
        Var::Nonlocal(id) => format!("W^{{({id})}}"),
    };
    if a.order() == 0 {
        return base;
    }
    let mut sub = String::new();
    for c in Coordinate::ALL {
        for _ in 0..a.index[c.index()] {
            sub.push_str(latex_coord(c));
        }
    }
    if matches!(a.var, Var::Jinv) {
        format!("(J^{{-1}})_{{{sub}}}")
    } else {
        format!("{base}_{{{sub}}}")
    }
}

fn latex_coord(c: Coordinate) -> &'static str {
    match c {
        Coordinate::Y => "y",
        Coordinate::Z => "z",
        Coordinate::Yb => "\\bar{y}",
        Coordinate::Zb => "\\bar{z}",
    }
}

fn latex_scalar(c: &GaussianRational) -> String {
    let s = c.to_string();
    s.replace("*i", "i")
}

/// LaTeX rendering, for listings only.
pub fn to_latex(e: &Expr) -> String {
    match e {
        Expr::Zero => "0".into(),
        Expr::IdentityMatrix => "I".into(),
        Expr::Atom(a) => latex_atom(a),
        Expr::Coord(c) => latex_coord(*c).into(),
        Expr::Sum(ts) => {
            let mut out = String::new();
            for (i, t) in ts.iter().enumerate() {
                let s = to_latex(t);
                if i > 0 {
                    if let Some(rest) = s.strip_prefix('-') {
                        out.push_str(" - ");
                        out.push_str(rest);
                        continue;
                    }
                    out.push_str(" + ");
                }
                out.push_str(&s);
            }
            out
        }
        Expr::ScalarMul(c, e) => {
            let inner = match **e {
                Expr::Sum(_) => format!("\\left({}\\right)", to_latex(e)),
                Expr::IdentityMatrix => return latex_scalar(c),
                _ => to_latex(e),
            };
            if *c == GaussianRational::from_int(-1) {
                format!("-{inner}")
            } else {
                format!("{} {inner}", latex_scalar(c))
            }
        }
        Expr::Prod(fs) => fs
            .iter()
            .map(|f| match f {
                Expr::Sum(_) | Expr::ScalarMul(..) => format!("\\left({}\\right)", to_latex(f)),
                _ => to_latex(f),
            })
            .collect::<Vec<_>>()
            .join(" "),
        Expr::Comm(a, b) => format!("\\left[{}, {}\\right]", to_latex(a), to_latex(b)),
        Expr::InvDzbar(e) => format!("D_{{\\bar{{z}}}}^{{-1}}\\left({}\\right)", to_latex(e)),
        Expr::Deriv(c, e) => format!("D_{{{}}}\\left({}\\right)", latex_coord(*c), to_latex(e)),
        Expr::Trace(e) => format!("\\operatorname{{tr}}\\left({}\\right)", to_latex(e)),
    }
}
