//! Seeded random expression corpora for the property and oracle checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::GaussianRational;
use crate::config;
use crate::jetexpr::{Coordinate, Expr, GenericId, JetAtom, Var};

/// Which leaves and node kinds a corpus may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub depth: usize,
    /// Jets of `J` and the bare `J⁻¹`.
    pub j: bool,
    pub inv_dzbar: bool,
    pub trace: bool,
    /// Explicit coordinates `y`, `z`, `ȳ`, `z̄` as scalar leaves.
    pub coords: bool,
    /// Jets of the generic characteristic `Phi` (carrying the symmetry rule).
    pub generic: bool,
    pub max_jet_order: u8,
}

impl CorpusSpec {
    /// Everything the engine understands, up to the given depth.
    pub fn full(depth: usize) -> Self {
        Self { depth, j: true, inv_dzbar: true, trace: true, coords: true, generic: false, max_jet_order: 2 }
    }

    /// Leaves in `X`-jets, `M` and `τ_k` only, combined by sums, products,
    /// commutators and derivatives.
    pub fn x_only(depth: usize) -> Self {
        Self { depth, j: false, inv_dzbar: false, trace: false, coords: false, generic: false, max_jet_order: 2 }
    }

    /// Expressions with a finite series evaluation on any fixture.
    pub fn evaluable(depth: usize) -> Self {
        Self { inv_dzbar: false, ..Self::full(depth) }
    }
}

fn random_index(rng: &mut impl Rng, max_order: u8) -> [u8; 4] {
    let order = rng.gen_range(0..=max_order);
    let mut idx = [0u8; 4];
    for _ in 0..order {
        idx[rng.gen_range(0..4)] += 1;
    }
    idx
}

fn small_scalar(rng: &mut impl Rng) -> GaussianRational {
    let num = *[-2i64, -1, 1, 2, 3].choose(rng).unwrap();
    let den = rng.gen_range(1..=3);
    let re = GaussianRational::from_ratio(num, den);
    if rng.gen_bool(0.15) {
        &re * &GaussianRational::i()
    } else {
        re
    }
}

fn leaf(rng: &mut impl Rng, spec: &CorpusSpec) -> Expr {
    let dim = config::lie_basis().dim();
    loop {
        let e = match rng.gen_range(0..10) {
            0..=3 => Expr::Atom(JetAtom::with_index(Var::X, random_index(rng, spec.max_jet_order))),
            4 => Expr::tau(rng.gen_range(1..=dim)),
            5 => Expr::constant("M"),
            6 => Expr::scalar(small_scalar(rng)),
            7 if spec.j => {
                let idx = random_index(rng, 1);
                Expr::Atom(JetAtom::with_index(Var::J, idx))
            }
            8 if spec.j => Expr::jinv(),
            8 | 9 if spec.generic => Expr::Atom(JetAtom::with_index(
                Var::Generic(GenericId::psdym_symmetry("Phi")),
                random_index(rng, spec.max_jet_order),
            )),
            9 if spec.coords => Expr::Coord(Coordinate::from_index(rng.gen_range(0..4))),
            _ => continue,
        };
        return e;
    }
}

/// One random expression of depth at most `spec.depth`.
pub fn random_expr(rng: &mut impl Rng, spec: &CorpusSpec) -> Expr {
    gen(rng, spec, spec.depth)
}

fn gen(rng: &mut impl Rng, spec: &CorpusSpec, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng, spec);
    }
    let d = depth - 1;
    loop {
        let e = match rng.gen_range(0..10) {
            0 | 1 => {
                let n = rng.gen_range(2..=3);
                Expr::Sum((0..n).map(|_| gen(rng, spec, d)).collect())
            }
            2 | 3 => Expr::Prod(vec![gen(rng, spec, d), gen(rng, spec, d)]),
            4 | 5 => Expr::comm(gen(rng, spec, d), gen(rng, spec, d)),
            6 => gen(rng, spec, d).scaled(small_scalar(rng)),
            7 => Expr::deriv(Coordinate::from_index(rng.gen_range(0..4)), gen(rng, spec, d)),
            8 if spec.inv_dzbar => Expr::inv_dzbar(gen(rng, spec, d)),
            9 if spec.trace => Expr::trace(gen(rng, spec, d)),
            _ => continue,
        };
        return e;
    }
}

/// `count` expressions drawn deterministically from `seed`.
pub fn corpus(seed: u64, count: usize, spec: &CorpusSpec) -> Vec<Expr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_expr(&mut rng, spec)).collect()
}
