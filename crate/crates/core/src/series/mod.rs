//! Exact truncated power series in `(y, z, ȳ, z̄)` with matrix
//! coefficients, solution fixtures, and an evaluator for normal forms.

mod eval;
mod fixture;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{ConstMatrix, GaussianRational};
use crate::jetexpr::Coordinate;

pub use eval::{residual, EvalError, Evaluator, Residual};
pub use fixture::{
    abelian_fixture, random_fixture, random_traceless, solve_j, solve_psdym, FixtureError, SolutionFixture,
};

pub type Exponent = [u8; 4];

pub fn total_degree(e: &Exponent) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

/// All exponents of total degree `≤ d`, ordered by degree.
pub fn exponents_up_to(d: usize) -> Vec<Exponent> {
    let mut out = Vec::new();
    for t in 0..=d {
        for a in 0..=t {
            for b in 0..=t - a {
                for c in 0..=t - a - b {
                    out.push([a as u8, b as u8, c as u8, (t - a - b - c) as u8]);
                }
            }
        }
    }
    out
}

/// A matrix-valued series truncated at `cap`. Coefficients are exact for
/// total degree `≤ valid`; nothing above `valid` is stored. A negative
/// `valid` means no coefficient is known.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    n: usize,
    cap: usize,
    valid: i32,
    coeffs: BTreeMap<Exponent, ConstMatrix>,
}

impl TruncatedSeries {
    pub fn zero(n: usize, cap: usize) -> Self {
        Self { n, cap, valid: cap as i32, coeffs: BTreeMap::new() }
    }

    pub fn constant(m: ConstMatrix, cap: usize) -> Self {
        let mut s = Self::zero(m.n(), cap);
        s.set([0; 4], m);
        s
    }

    pub fn identity(n: usize, cap: usize) -> Self {
        Self::constant(ConstMatrix::identity(n), cap)
    }

    /// The coordinate `c` times the identity matrix.
    pub fn coordinate(c: Coordinate, n: usize, cap: usize) -> Self {
        let mut s = Self::zero(n, cap);
        if cap >= 1 {
            let mut e = [0u8; 4];
            e[c.index()] = 1;
            s.set(e, ConstMatrix::identity(n));
        }
        s
    }

    pub fn from_coeffs(n: usize, cap: usize, valid: i32, coeffs: BTreeMap<Exponent, ConstMatrix>) -> Self {
        let mut s = Self { n, cap, valid: valid.min(cap as i32), coeffs };
        s.prune();
        s
    }

    fn prune(&mut self) {
        let v = self.valid;
        self.coeffs.retain(|e, m| (total_degree(e) as i32) <= v && !m.is_zero());
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn valid(&self) -> i32 {
        self.valid
    }

    pub fn with_valid(mut self, v: i32) -> Self {
        self.valid = self.valid.min(v);
        self.prune();
        self
    }

    pub fn coeff(&self, e: &Exponent) -> ConstMatrix {
        self.coeffs.get(e).cloned().unwrap_or_else(|| ConstMatrix::zero(self.n))
    }

    pub fn coeff_ref(&self, e: &Exponent) -> Option<&ConstMatrix> {
        self.coeffs.get(e)
    }

    pub fn set(&mut self, e: Exponent, m: ConstMatrix) {
        if (total_degree(&e) as i32) > self.valid || m.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &ConstMatrix)> {
        self.coeffs.iter()
    }

    /// Zero on the whole valid range (vacuously so if `valid < 0`).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The lowest nonzero coefficient, if any.
    pub fn witness(&self) -> Option<(Exponent, ConstMatrix)> {
        self.coeffs.iter().min_by_key(|(e, _)| (total_degree(e), **e)).map(|(e, m)| (*e, m.clone()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.valid = self.valid.min(o.valid);
        for (e, m) in &o.coeffs {
            let mut c = out.coeff(e);
            c.add_assign_ref(m);
            out.coeffs.insert(*e, c);
        }
        out.prune();
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        let mut out = self.clone();
        for m in out.coeffs.values_mut() {
            *m = m.scale(s);
        }
        out.prune();
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let valid = self.valid.min(o.valid);
        let mut acc: BTreeMap<Exponent, ConstMatrix> = BTreeMap::new();
        for (ea, ma) in &self.coeffs {
            let da = total_degree(ea) as i32;
            for (eb, mb) in &o.coeffs {
                if da + total_degree(eb) as i32 > valid {
                    continue;
                }
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                acc.entry(e).or_insert_with(|| ConstMatrix::zero(self.n)).add_product(ma, mb);
            }
        }
        Self::from_coeffs(self.n, self.cap, valid, acc)
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn derivative(&self, c: Coordinate) -> Self {
        let i = c.index();
        let mut acc = BTreeMap::new();
        for (e, m) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            acc.insert(f, m.scale(&GaussianRational::from_int(e[i] as i64)));
        }
        Self::from_coeffs(self.n, self.cap, self.valid - 1, acc)
    }

    pub fn derivatives(&self, index: &[u8; 4]) -> Self {
        let mut s = self.clone();
        for c in Coordinate::ALL {
            for _ in 0..index[c.index()] {
                s = s.derivative(c);
            }
        }
        s
    }

    /// Integration in `z̄` with zero `z̄`-independent part.
    pub fn integrate_zbar(&self) -> Self {
        self.integrate(Coordinate::Zb)
    }

    pub fn integrate(&self, c: Coordinate) -> Self {
        let i = c.index();
        let mut acc = BTreeMap::new();
        for (e, m) in &self.coeffs {
            let mut f = *e;
            f[i] += 1;
            acc.insert(f, m.scale(&GaussianRational::from_ratio(1, f[i] as i64)));
        }
        Self::from_coeffs(self.n, self.cap, (self.valid + 1).min(self.cap as i32), acc)
    }

    /// The scalar series `tr S` times the identity.
    pub fn trace(&self) -> Self {
        let mut out = Self::zero(self.n, self.cap);
        out.valid = self.valid;
        for (e, m) in &self.coeffs {
            let t = m.trace();
            if !t.is_zero() {
                out.coeffs.insert(*e, ConstMatrix::identity(self.n).scale(&t));
            }
        }
        out
    }

    /// Coefficientwise trace, for checking tracelessness.
    pub fn is_traceless(&self) -> bool {
        self.coeffs.values().all(|m| m.trace().is_zero())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(valid {}/{}", self.valid, self.cap)?;
        for (e, m) in &self.coeffs {
            write!(f, ", {e:?}: {m:?}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_count() {
        assert_eq!(exponents_up_to(6).len(), 210);
    }

    #[test]
    fn integrate_monomial() {
        let t3 = ConstMatrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        let mut s = TruncatedSeries::zero(2, 6);
        s.set([0, 0, 0, 2], t3.clone());
        let i = s.integrate_zbar();
        assert_eq!(i.coeff(&[0, 0, 0, 3]), t3.scale(&GaussianRational::from_ratio(1, 3)));
        assert_eq!(i.derivative(Coordinate::Zb), s.clone().with_valid(s.valid() - 1));
    }

    #[test]
    fn valid_degree_bookkeeping() {
        let s = TruncatedSeries::coordinate(Coordinate::Y, 2, 4);
        assert_eq!(s.derivative(Coordinate::Y).valid(), 3);
        assert_eq!(s.mul(&s.derivative(Coordinate::Z)).valid(), 3);
        assert_eq!(s.integrate_zbar().valid(), 4);
    }
}
