use num_traits::Zero;

use super::HierarchyError;
use crate::algebra::{solve_in_span, GaussianRational};
use crate::jetexpr::{canonical, total_derivative, var, Coordinate, GenericId, Monomial, Poly, Var};

fn d(p: &Poly, c: Coordinate) -> Poly {
    total_derivative(p, c)
}

fn times(c: Coordinate, p: &Poly) -> Poly {
    Poly::coord(c).mul(p)
}

/// The base-space symmetry operators `L̂_1 … L̂_9`.
pub fn apply_l(k: usize, p: &Poly) -> Result<Poly, HierarchyError> {
    use Coordinate::*;
    let out = match k {
        1 => d(p, Y),
        2 => d(p, Z),
        3 => times(Z, &d(p, Y)).minus(&times(Yb, &d(p, Zb))),
        4 => times(Y, &d(p, Z)).minus(&times(Zb, &d(p, Yb))),
        5 => times(Y, &d(p, Y)).minus(&times(Z, &d(p, Z))).minus(&times(Yb, &d(p, Yb))).plus(&times(Zb, &d(p, Zb))),
        6 => p.plus(&times(Y, &d(p, Y))).plus(&times(Z, &d(p, Z))),
        7 => p.minus(&times(Yb, &d(p, Yb))).minus(&times(Zb, &d(p, Zb))),
        8 => {
            let l6 = apply_l(6, p)?;
            let tail = times(Y, &d(p, Zb)).minus(&times(Z, &d(p, Yb)));
            times(Y, &l6).plus(&times(Zb, &tail))
        }
        9 => {
            let l6 = apply_l(6, p)?;
            let tail = times(Z, &d(p, Yb)).minus(&times(Y, &d(p, Zb)));
            times(Z, &l6).plus(&times(Yb, &tail))
        }
        _ => return Err(HierarchyError::OperatorOutOfRange(k)),
    };
    Ok(canonical(&out))
}

/// `f_ij^k` for `[L̂_i, L̂_j] = −f_ij^k L̂_k`, `i, j, k ∈ 1..=5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
    f: Vec<GaussianRational>,
}

impl StructureTable {
    /// One-based indices.
    pub fn f(&self, i: usize, j: usize, k: usize) -> &GaussianRational {
        &self.f[((i - 1) * 5 + (j - 1)) * 5 + (k - 1)]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (1..=5).all(|i| (1..=5).all(|j| (1..=5).all(|k| *self.f(i, j, k) == -self.f(j, i, k).clone())))
    }

    pub fn satisfies_jacobi(&self) -> bool {
        for i in 1..=5 {
            for j in 1..=5 {
                for l in 1..=5 {
                    for m in 1..=5 {
                        let mut s = GaussianRational::zero();
                        for k in 1..=5 {
                            s += &(self.f(i, j, k) * self.f(k, l, m));
                            s += &(self.f(j, l, k) * self.f(k, i, m));
                            s += &(self.f(l, i, k) * self.f(k, j, m));
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn coordinates(ps: &[Poly], target: &Poly) -> Option<Vec<GaussianRational>> {
    let mut monos: Vec<Monomial> =
        ps.iter().chain(std::iter::once(target)).flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    monos.sort();
    monos.dedup();
    let vec_of = |p: &Poly| monos.iter().map(|m| p.coefficient(m)).collect::<Vec<_>>();
    let vectors: Vec<Vec<GaussianRational>> = ps.iter().map(vec_of).collect();
    solve_in_span(&vectors, &vec_of(target)).ok().flatten()
}

/// Commutes `L̂_i` and `L̂_j` on a generic function and reads off the
/// coefficients on `L̂_1 … L̂_5`.
pub fn base_structure_table() -> Result<StructureTable, HierarchyError> {
    let f = var(Var::Generic(GenericId::free("F")));
    let images: Vec<Poly> = (1..=5).map(|k| apply_l(k, &f)).collect::<Result<_, _>>()?;
    let mut table = vec![GaussianRational::zero(); 125];
    for i in 1..=5 {
        for j in 1..=5 {
            let c = apply_l(i, &apply_l(j, &f)?)?.minus(&apply_l(j, &apply_l(i, &f)?)?);
            let coeffs = coordinates(&images, &c).ok_or(HierarchyError::NotClosed(i, j))?;
            for (k, v) in coeffs.into_iter().enumerate() {
                table[((i - 1) * 5 + (j - 1)) * 5 + k] = -v;
            }
        }
    }
    Ok(StructureTable { f: table })
}
