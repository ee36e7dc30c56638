//! Dense `n × n` matrices over the Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraError, GaussianRational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstMatrix {
    n: usize,
    entries: Vec<GaussianRational>,
}

impl ConstMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, entries: vec![GaussianRational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = GaussianRational::one();
        }
        m
    }

    /// Builds a matrix from rows of integers.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix rows must be square");
            entries.extend(r.iter().map(|&v| GaussianRational::from_int(v)));
        }
        Self { n, entries }
    }

    pub fn from_entries(n: usize, entries: Vec<GaussianRational>) -> Result<Self, AlgebraError> {
        if entries.len() != n * n {
            return Err(AlgebraError::DimensionMismatch(n * n, entries.len()));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        Self { n: self.n, entries: self.entries.iter().map(|e| e * s).collect() }
    }

    pub fn add_assign_ref(&mut self, o: &ConstMatrix) {
        debug_assert_eq!(self.n, o.n);
        for (a, b) in self.entries.iter_mut().zip(&o.entries) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn sub_assign_ref(&mut self, o: &ConstMatrix) {
        debug_assert_eq!(self.n, o.n);
        for (a, b) in self.entries.iter_mut().zip(&o.entries) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }

    /// `self += a · b`, the inner kernel of series multiplication.
    pub fn add_product(&mut self, a: &ConstMatrix, b: &ConstMatrix) {
        let n = self.n;
        for i in 0..n {
            for k in 0..n {
                let aik = &a.entries[i * n + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let bkj = &b.entries[k * n + j];
                    if !bkj.is_zero() {
                        self.entries[i * n + j] += &(aik * bkj);
                    }
                }
            }
        }
    }

    pub fn try_mul(&self, o: &ConstMatrix) -> Result<ConstMatrix, AlgebraError> {
        if self.n != o.n {
            return Err(AlgebraError::DimensionMismatch(self.n, o.n));
        }
        let mut out = ConstMatrix::zero(self.n);
        out.add_product(self, o);
        Ok(out)
    }

    pub fn trace(&self) -> GaussianRational {
        let mut t = GaussianRational::zero();
        for i in 0..self.n {
            t += self.get(i, i);
        }
        t
    }
}

/// `[a, b] = ab − ba`.
pub fn commutator(a: &ConstMatrix, b: &ConstMatrix) -> Result<ConstMatrix, AlgebraError> {
    let mut ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    ab.sub_assign_ref(&ba);
    Ok(ab)
}

pub fn trace(a: &ConstMatrix) -> GaussianRational {
    a.trace()
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn const_inverse(a: &ConstMatrix) -> Result<ConstMatrix, AlgebraError> {
    let n = a.n;
    let mut work = a.clone();
    let mut inv = ConstMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work.get(r, col).is_zero()).ok_or(AlgebraError::Singular)?;
        if pivot != col {
            for j in 0..n {
                work.entries.swap(pivot * n + j, col * n + j);
                inv.entries.swap(pivot * n + j, col * n + j);
            }
        }
        let p = work.get(col, col).inv()?;
        for j in 0..n {
            work.entries[col * n + j] *= &p;
            inv.entries[col * n + j] *= &p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = work.get(r, col).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let w = &f * &work.entries[col * n + j];
                work.entries[r * n + j] -= &w;
                let v = &f * &inv.entries[col * n + j];
                inv.entries[r * n + j] -= &v;
            }
        }
    }
    Ok(inv)
}

impl Add for &ConstMatrix {
    type Output = ConstMatrix;
    fn add(self, o: &ConstMatrix) -> ConstMatrix {
        let mut out = self.clone();
        out.add_assign_ref(o);
        out
    }
}

impl Sub for &ConstMatrix {
    type Output = ConstMatrix;
    fn sub(self, o: &ConstMatrix) -> ConstMatrix {
        let mut out = self.clone();
        out.sub_assign_ref(o);
        out
    }
}

impl Mul for &ConstMatrix {
    type Output = ConstMatrix;
    fn mul(self, o: &ConstMatrix) -> ConstMatrix {
        self.try_mul(o).expect("matrix dimension mismatch")
    }
}

impl Neg for &ConstMatrix {
    type Output = ConstMatrix;
    fn neg(self) -> ConstMatrix {
        ConstMatrix { n: self.n, entries: self.entries.iter().map(|e| -e).collect() }
    }
}

impl fmt::Debug for ConstMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for ConstMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_wire()).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConstMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in &rows {
            if r.len() != n {
                return Err(serde::de::Error::custom("matrix is not square"));
            }
            for e in r {
                entries.push(GaussianRational::from_wire(e).map_err(serde::de::Error::custom)?);
            }
        }
        Ok(ConstMatrix { n, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> (ConstMatrix, ConstMatrix, ConstMatrix) {
        (
            ConstMatrix::from_int_rows(&[&[0, 1], &[0, 0]]),
            ConstMatrix::from_int_rows(&[&[0, 0], &[1, 0]]),
            ConstMatrix::from_int_rows(&[&[1, 0], &[0, -1]]),
        )
    }

    // hand-multiplied 2×2 products, independent of `add_product`
    fn naive_mul(a: &ConstMatrix, b: &ConstMatrix) -> ConstMatrix {
        let mut out = ConstMatrix::zero(2);
        for i in 0..2 {
            for j in 0..2 {
                let v = &(a.get(i, 0) * b.get(0, j)) + &(a.get(i, 1) * b.get(1, j));
                out.set(i, j, v);
            }
        }
        out
    }

    #[test]
    fn commutator_examples() {
        let (t1, t2, t3) = sl2();
        assert!(commutator(&t1, &t1).unwrap().is_zero());
        assert_eq!(commutator(&t3, &t1).unwrap(), t1.scale(&GaussianRational::from_int(2)));
        assert_eq!(commutator(&t1, &t2).unwrap(), t3);
        let oracle = &naive_mul(&t1, &t2) - &naive_mul(&t2, &t1);
        assert_eq!(oracle, t3);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        assert!(matches!(
            commutator(&ConstMatrix::identity(2), &ConstMatrix::identity(3)),
            Err(AlgebraError::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn trace_examples() {
        let (t1, t2, t3) = sl2();
        assert_eq!(trace(&ConstMatrix::identity(2)), GaussianRational::from_int(2));
        assert!(trace(&t3).is_zero());
        assert_eq!(trace(&(&t1 * &t2)), GaussianRational::one());
    }

    #[test]
    fn inverse_examples() {
        let id = ConstMatrix::identity(2);
        assert_eq!(const_inverse(&id).unwrap(), id);
        let a = ConstMatrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(const_inverse(&a).unwrap(), ConstMatrix::from_int_rows(&[&[1, -1], &[0, 1]]));
        let s = ConstMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(const_inverse(&s), Err(AlgebraError::Singular)));
    }

    #[test]
    fn serde_round_trip() {
        let a = ConstMatrix::from_int_rows(&[&[1, -3], &[0, 7]]).scale(&GaussianRational::from_ratio(1, 3));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1/3","-1/1"],["0/1","7/3"]]"#);
        let b: ConstMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
