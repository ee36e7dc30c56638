//! Registry of nonlocal variables `W`, each defined by its `z̄`- and
//! `ȳ`-derivatives together with its restriction to `ȳ = z̄ = 0`. Ids start
//! at 1 and are never reused.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::algebra::GaussianRational;
use crate::jetexpr::{var, Poly, Var};

/// Marks `W` as the coefficient of `λ^order` in `ψ(λ)τ_kψ(λ)⁻¹`, where `ψ`
/// solves the linear system `ψ_z̄ = λ(ψ_y + X_z̄ψ)`, `ψ_ȳ = −λ(ψ_z − X_ȳψ)`
/// and equals `exp(λX)` on `ȳ = z̄ = 0`. `k` is one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dressing {
    pub k: usize,
    pub order: usize,
}

impl Dressing {
    /// `ad_X^order τ_k / order!`, the value on `ȳ = z̄ = 0`.
    pub fn slice(&self) -> Poly {
        ad_power_slice(self.k, self.order)
    }
}

fn ad_power_slice(k: usize, order: usize) -> Poly {
    let x = var(Var::X);
    let mut s = var(Var::Tau((k - 1) as u8));
    for n in 1..=order {
        s = x.commutator(&s).scale(&GaussianRational::from_ratio(1, n as i64));
    }
    s
}

/// Slice of `Δ_a W_b` when both are dressed coefficients: the lift
/// `δψ(λ) = Σ_q λ^{q+1}A^a_{N+q} ψ(λ)` gives
/// `Δ_a A^b_M = Σ_{r<M} [A^a_{N+M−1−r}, A^b_r]`.
pub fn dressed_lift_slice(a: Dressing, b: Dressing) -> Poly {
    let (n, m) = (a.order, b.order);
    let mut out = Poly::zero();
    for r in 0..m {
        out.add_poly(&ad_power_slice(a.k, n + m - 1 - r).commutator(&ad_power_slice(b.k, r)));
    }
    out
}

#[derive(Debug)]
pub struct NonlocalDef {
    pub id: u32,
    pub level: u32,
    /// `D_z̄ W`.
    pub dzbar: Poly,
    /// `D_ȳ W`.
    pub dybar: Poly,
    /// Local expression whose `(y, z)`-part fixes `W` at `ȳ = z̄ = 0`.
    pub slice: Poly,
    pub dressing: Option<Dressing>,
    pub label: String,
}

#[derive(Default)]
struct Registry {
    defs: Vec<Arc<NonlocalDef>>,
    by_defs: HashMap<(Poly, Poly, Poly), u32>,
}

fn registry() -> &'static RwLock<Registry> {
    static REG: OnceLock<RwLock<Registry>> = OnceLock::new();
    REG.get_or_init(Default::default)
}

/// Registers `W` with the given derivatives and a vanishing `(y, z)`-slice.
pub fn register(label: &str, level: u32, dzbar: Poly, dybar: Poly) -> u32 {
    register_with_slice(label, level, dzbar, dybar, Poly::zero())
}

/// Registers `W`, or returns the id of an existing variable with identical
/// definitions.
pub fn register_with_slice(label: &str, level: u32, dzbar: Poly, dybar: Poly, slice: Poly) -> u32 {
    register_full(label, level, dzbar, dybar, slice, None)
}

/// Registers a dressed hierarchy coefficient; its slice follows from `d`.
pub fn register_dressed(label: &str, level: u32, dzbar: Poly, dybar: Poly, d: Dressing) -> u32 {
    register_full(label, level, dzbar, dybar, d.slice(), Some(d))
}

fn register_full(label: &str, level: u32, dzbar: Poly, dybar: Poly, slice: Poly, dressing: Option<Dressing>) -> u32 {
    let mut reg = registry().write().expect("nonlocal registry poisoned");
    let key = (dzbar, dybar, slice);
    if let Some(&id) = reg.by_defs.get(&key) {
        return id;
    }
    let id = reg.defs.len() as u32 + 1;
    let (dzbar, dybar, slice) = key.clone();
    reg.defs.push(Arc::new(NonlocalDef { id, level, dzbar, dybar, slice, dressing, label: label.to_string() }));
    reg.by_defs.insert(key, id);
    id
}

pub fn try_get(id: u32) -> Option<Arc<NonlocalDef>> {
    let reg = registry().read().expect("nonlocal registry poisoned");
    reg.defs.get(id.checked_sub(1)? as usize).cloned()
}

/// # Panics
/// If `id` was never registered.
pub fn get(id: u32) -> Arc<NonlocalDef> {
    try_get(id).unwrap_or_else(|| panic!("unknown nonlocal W{id}"))
}

pub fn all() -> Vec<Arc<NonlocalDef>> {
    registry().read().expect("nonlocal registry poisoned").defs.clone()
}
