//! Hierarchies of nonlocal symmetries and their current-algebra relations.

mod operators;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::GaussianRational;
use crate::frechet::{cov_ay, cov_az, frechet, psdym_residual, Characteristic, FrechetError};
use crate::jetexpr::{canonical, poly_eq, poly_is_local, to_latex, var, Coordinate, Expr, Poly, Var};
use crate::recursion::nonlocal::{self, Dressing};
use crate::recursion::{r_hat, t_hat};
use crate::series::{EvalError, Evaluator, SolutionFixture};

pub use operators::{apply_l, base_structure_table, StructureTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("L-operator index {0} is outside 1..=9")]
    OperatorOutOfRange(usize),
    #[error("internal index {0} is outside the Lie basis")]
    InternalOutOfRange(usize),
    #[error("[L{0}, L{1}] does not close on L1..L5")]
    NotClosed(usize, usize),
    #[error("seed `{0}` does not satisfy the PSDYM symmetry condition")]
    NotSymmetry(String),
    #[error("levels {m} + {n} exceed the cap {cap}")]
    CapExceeded { m: usize, n: usize, cap: usize },
    #[error("unknown family `{0}`")]
    BadFamily(String),
    #[error(transparent)]
    Frechet(#[from] FrechetError),
}

/// A seed family: internal `[X, τ_k]` or base-space `L̂_k X`, one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Internal(usize),
    L(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Internal(k) => write!(f, "internal:{k}"),
            Family::L(k) => write!(f, "L:{k}"),
        }
    }
}

impl FromStr for Family {
    type Err = HierarchyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HierarchyError::BadFamily(s.to_string());
        let (kind, k) = s.split_once(':').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let fam = match kind {
            "internal" => Family::Internal(k),
            "L" => Family::L(k),
            _ => return Err(bad()),
        };
        fam.seed()?;
        Ok(fam)
    }
}

impl Family {
    /// `Φ^(0)`.
    pub fn seed(&self) -> Result<Poly, HierarchyError> {
        match *self {
            Family::Internal(k) => {
                if k == 0 || k > crate::config::lie_basis().dim() {
                    return Err(HierarchyError::InternalOutOfRange(k));
                }
                Ok(var(Var::X).commutator(&var(Var::Tau((k - 1) as u8))))
            }
            Family::L(k) => apply_l(k, &var(Var::X)),
        }
    }

    fn dressing_index(&self) -> Option<usize> {
        match *self {
            Family::Internal(k) => Some(k),
            Family::L(_) => None,
        }
    }

    /// Levels `0..=depth` of this family.
    pub fn hierarchy(&self, depth: usize) -> Result<Vec<HierarchyEntry>, HierarchyError> {
        generate_dressed_hierarchy(
            &self.to_string(),
            &self.seed()?,
            self.q_seed().as_ref(),
            depth,
            self.dressing_index(),
        )
    }

    /// The I-related SDYM seed, where one is catalogued.
    pub fn q_seed(&self) -> Option<Poly> {
        match *self {
            Family::Internal(k) => Some(var(Var::J).mul(&var(Var::Tau((k - 1) as u8)))),
            Family::L(1) => Some(crate::jetexpr::jet(Var::J, &[Coordinate::Y])),
            Family::L(2) => Some(crate::jetexpr::jet(Var::J, &[Coordinate::Z])),
            Family::L(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyEntry {
    pub label: String,
    pub level: usize,
    pub phi: Poly,
    pub q: Option<Poly>,
    pub dressing: Option<Dressing>,
}

impl HierarchyEntry {
    pub fn local_in_x(&self) -> bool {
        poly_is_local(&self.phi)
    }

    /// Whether `Q` is expressible through `J` and its jets alone.
    pub fn local_in_j(&self) -> Option<bool> {
        self.q.as_ref().map(|q| poly_is_local(q) && !q.contains_var(&|v| matches!(v, Var::X)))
    }

    pub fn characteristic(&self) -> Characteristic {
        Characteristic::psdym(&self.label, self.phi.clone()).with_dressing(self.dressing)
    }
}

/// `Φ^(n) = R̂ⁿΦ^(0)` for `n ≤ depth`. Whenever `R̂` has no local
/// antiderivative the level is materialized as a nonlocal `W` with
/// `W_z̄ = Â_yΦ^(n−1)` and `W_ȳ = −Â_zΦ^(n−1)`.
pub fn generate_hierarchy(
    label: &str,
    seed: &Poly,
    q_seed: Option<&Poly>,
    depth: usize,
) -> Result<Vec<HierarchyEntry>, HierarchyError> {
    generate_dressed_hierarchy(label, seed, q_seed, depth, None)
}

/// As [`generate_hierarchy`] for the seed `[X, τ_k]`, `Φ^(n)` being the
/// dressed coefficient of order `n + 1`. Nonlocals are then fixed on
/// `ȳ = z̄ = 0` by the dressing instead of vanishing there.
pub fn generate_dressed_hierarchy(
    label: &str,
    seed: &Poly,
    q_seed: Option<&Poly>,
    depth: usize,
    k: Option<usize>,
) -> Result<Vec<HierarchyEntry>, HierarchyError> {
    let dressing = |n: usize| k.map(|k| Dressing { k, order: n + 1 });
    if !psdym_residual(seed).is_zero() {
        return Err(HierarchyError::NotSymmetry(Expr::from_poly(seed).to_string()));
    }
    let mut out = vec![HierarchyEntry {
        label: format!("{label}^0"),
        level: 0,
        phi: seed.clone(),
        q: q_seed.cloned(),
        dressing: dressing(0),
    }];
    for n in 1..=depth {
        let prev = &out[n - 1];
        let r = r_hat(&prev.phi);
        let name = format!("{label}^{n}");
        let phi = if poly_is_local(&r) {
            r
        } else {
            let (dz, dy) = (cov_ay(&prev.phi), cov_az(&prev.phi).neg());
            let id = match dressing(n) {
                Some(d) => nonlocal::register_dressed(&name, n as u32, dz, dy, d),
                None => nonlocal::register(&name, n as u32, dz, dy),
            };
            var(Var::Nonlocal(id))
        };
        let q = prev.q.as_ref().map(|q| {
            let t = t_hat(q);
            if poly_is_local(&t) {
                t
            } else {
                var(Var::J).mul(&prev.phi)
            }
        });
        out.push(HierarchyEntry { label: name, level: n, phi, q, dressing: dressing(n) });
    }
    Ok(out)
}

/// `[Δ_a, Δ_b]X = Δ_aΦ_b − Δ_bΦ_a`.
pub fn bracket(a: &HierarchyEntry, b: &HierarchyEntry) -> Result<Poly, HierarchyError> {
    let l = frechet(&b.phi, &a.characteristic())?;
    let r = frechet(&a.phi, &b.characteristic())?;
    Ok(canonical(&l.minus(&r)))
}

/// Lazily generated hierarchies, shared across verification cases.
#[derive(Default)]
pub struct Hierarchies {
    families: HashMap<Family, Vec<HierarchyEntry>>,
}

impl Hierarchies {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entry(&mut self, fam: Family, level: usize) -> Result<HierarchyEntry, HierarchyError> {
        let have = self.families.get(&fam).map_or(0, |v| v.len());
        if have <= level {
            self.families.insert(fam, fam.hierarchy(level)?);
        }
        Ok(self.families[&fam][level].clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Symbolic,
    Oracle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Symbolic => "symbolic",
            Mode::Oracle => "oracle",
        })
    }
}

/// Result of one verification case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub pass: bool,
    /// Smallest valid degree over the fixtures, in oracle mode.
    pub valid_degree: Option<i32>,
    pub witness: Option<String>,
}

impl Outcome {
    fn symbolic(residual: &Poly) -> Self {
        let pass = canonical(residual).is_zero();
        Outcome { pass, valid_degree: None, witness: (!pass).then(|| Expr::from_poly(residual).to_string()) }
    }
}

/// Checks that `residual` vanishes, symbolically or on every fixture.
pub fn check_residual(residual: &Poly, mode: Mode, fixtures: &[SolutionFixture]) -> Outcome {
    match mode {
        Mode::Symbolic => Outcome::symbolic(residual),
        Mode::Oracle => {
            let mut valid = i32::MAX;
            for f in fixtures {
                let ev = Evaluator::new(f);
                match ev.poly(residual) {
                    Ok(s) => {
                        valid = valid.min(s.valid());
                        if let Some((e, m)) = s.witness() {
                            return Outcome {
                                pass: false,
                                valid_degree: Some(s.valid()),
                                witness: Some(format!("{}: coefficient {:?} at {:?}", f.label, m, e)),
                            };
                        }
                    }
                    Err(err) => return eval_failure(f, err),
                }
            }
            let witness = if fixtures.is_empty() {
                Some("no fixtures given".to_string())
            } else if valid < 0 {
                Some(format!("valid degree {valid} leaves nothing to compare; raise the degree"))
            } else {
                None
            };
            Outcome { pass: witness.is_none(), valid_degree: Some(valid), witness }
        }
    }
}

fn eval_failure(f: &SolutionFixture, err: EvalError) -> Outcome {
    Outcome { pass: false, valid_degree: None, witness: Some(format!("{}: {err}", f.label)) }
}

fn cap_for(mode: Mode) -> usize {
    match mode {
        Mode::Symbolic => crate::config::SYMBOLIC_LEVEL_CAP,
        Mode::Oracle => crate::config::ORACLE_LEVEL_CAP,
    }
}

fn check_cap(m: usize, n: usize, mode: Mode) -> Result<(), HierarchyError> {
    let cap = cap_for(mode);
    if m + n > cap {
        return Err(HierarchyError::CapExceeded { m, n, cap });
    }
    Ok(())
}

/// `[Δ_i^(m), Δ_j^(n)]X − c_ij^k Δ_k^(m+n)X`, where `c` is the structure
/// constant table of the family (`C_ij^k` internal, `f_ij^k` base-space).
pub fn kac_moody_residual(
    h: &mut Hierarchies,
    base_space: bool,
    i: usize,
    j: usize,
    m: usize,
    n: usize,
) -> Result<Poly, HierarchyError> {
    let fam = |k: usize| if base_space { Family::L(k) } else { Family::Internal(k) };
    let a = h.entry(fam(i), m)?;
    let b = h.entry(fam(j), n)?;
    let mut res = bracket(&a, &b)?;
    if base_space {
        let table = base_structure_table()?;
        for k in 1..=5 {
            let c = table.f(i, j, k).clone();
            if !c.is_zero() {
                res.add_scaled(&h.entry(fam(k), m + n)?.phi, &-c);
            }
        }
    } else {
        let basis = crate::config::lie_basis();
        for k in 1..=basis.dim() {
            let c = basis.c(i - 1, j - 1, k - 1).clone();
            if !c.is_zero() {
                res.add_scaled(&h.entry(fam(k), m + n)?.phi, &-c);
            }
        }
    }
    Ok(canonical(&res))
}

pub fn verify_kac_moody(
    h: &mut Hierarchies,
    base_space: bool,
    i: usize,
    j: usize,
    m: usize,
    n: usize,
    mode: Mode,
    fixtures: &[SolutionFixture],
) -> Result<Outcome, HierarchyError> {
    check_cap(m, n, mode)?;
    let r = kac_moody_residual(h, base_space, i, j, m, n)?;
    Ok(check_residual(&r, mode, fixtures))
}

/// `[Δ^(m), Δ^(n)]X + (m − n)Δ^(m+n)X` for `Δ^(n)X = R̂ⁿL̂_kX`, `k ∈ {6, 7}`.
pub fn virasoro_residual(h: &mut Hierarchies, which: usize, m: usize, n: usize) -> Result<Poly, HierarchyError> {
    let fam = Family::L(which);
    let a = h.entry(fam, m)?;
    let b = h.entry(fam, n)?;
    let mut res = bracket(&a, &b)?;
    let c = GaussianRational::from_int(m as i64 - n as i64);
    if !c.is_zero() {
        res.add_scaled(&h.entry(fam, m + n)?.phi, &c);
    }
    Ok(canonical(&res))
}

pub fn verify_virasoro(
    h: &mut Hierarchies,
    which: usize,
    m: usize,
    n: usize,
    mode: Mode,
    fixtures: &[SolutionFixture],
) -> Result<Outcome, HierarchyError> {
    if which != 6 && which != 7 {
        return Err(HierarchyError::OperatorOutOfRange(which));
    }
    check_cap(m, n, mode)?;
    let r = virasoro_residual(h, which, m, n)?;
    Ok(check_residual(&r, mode, fixtures))
}

/// `a = b` as characteristics, in normal form.
pub fn same_characteristic(a: &HierarchyEntry, b: &HierarchyEntry) -> bool {
    poly_eq(&a.phi, &b.phi)
}

fn nonlocals_of(p: &Poly, out: &mut Vec<u32>) {
    for a in p.atoms() {
        if let Var::Nonlocal(id) = a.var {
            if !out.contains(&id) {
                out.push(id);
                let def = nonlocal::get(id);
                nonlocals_of(&def.dzbar, out);
                nonlocals_of(&def.dybar, out);
                nonlocals_of(&def.slice, out);
            }
        }
    }
}

fn entry_nonlocals(entries: &[HierarchyEntry]) -> Vec<u32> {
    let mut ids = Vec::new();
    for e in entries {
        nonlocals_of(&e.phi, &mut ids);
        if let Some(q) = &e.q {
            nonlocals_of(q, &mut ids);
        }
    }
    ids.sort_unstable();
    ids
}

/// JSON listing of a hierarchy, including the defining relations of every
/// nonlocal variable it mentions.
pub fn listing_json(family: &str, entries: &[HierarchyEntry]) -> Value {
    let levels: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "level": e.level,
                "phi": Expr::from_poly(&e.phi).to_string(),
                "q": e.q.as_ref().map(|q| Expr::from_poly(q).to_string()),
                "local_in_x": e.local_in_x(),
                "local_in_j": e.local_in_j(),
            })
        })
        .collect();
    let nonlocals: Vec<Value> = entry_nonlocals(entries)
        .into_iter()
        .map(|id| {
            let d = nonlocal::get(id);
            json!({
                "id": format!("W{id}"),
                "label": d.label,
                "level": d.level,
                "dzb": Expr::from_poly(&d.dzbar).to_string(),
                "dyb": Expr::from_poly(&d.dybar).to_string(),
                "slice": Expr::from_poly(&d.slice).to_string(),
            })
        })
        .collect();
    json!({ "schema": 1, "family": family, "levels": levels, "nonlocals": nonlocals })
}

pub fn listing_latex(family: &str, entries: &[HierarchyEntry]) -> String {
    let mut out = format!("% hierarchy {family}\n\\begin{{align*}}\n");
    for e in entries {
        out.push_str(&format!("\\Phi^{{({})}} &= {} \\\\\n", e.level, to_latex(&Expr::from_poly(&e.phi))));
        if let Some(q) = &e.q {
            out.push_str(&format!("Q^{{({})}} &= {} \\\\\n", e.level, to_latex(&Expr::from_poly(q))));
        }
    }
    for id in entry_nonlocals(entries) {
        let d = nonlocal::get(id);
        out.push_str(&format!(
            "W^{{({id})}}_{{\\bar{{z}}}} &= {} \\\\\nW^{{({id})}}_{{\\bar{{y}}}} &= {} \\\\\n",
            to_latex(&Expr::from_poly(&d.dzbar)),
            to_latex(&Expr::from_poly(&d.dybar))
        ));
    }
    out.push_str("\\end{align*}\n");
    out
}
