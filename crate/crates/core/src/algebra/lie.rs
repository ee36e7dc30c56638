//! Traceless bases of sl(N) and their structure constants.

use num_traits::{One, Zero};

use super::{commutator, AlgebraError, ConstMatrix, GaussianRational};

/// An ordered basis `τ_1..τ_d` of a matrix Lie algebra together with the
/// structure constants `[τ_i, τ_j] = C_ij^k τ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBasis {
    n: usize,
    taus: Vec<ConstMatrix>,
    structure: Vec<GaussianRational>,
    // τ_a τ_b = p_ab·I + Σ_k q_ab^k τ_k; only present when {I, τ_k} spans gl(n)
    products: Option<Vec<(GaussianRational, Vec<GaussianRational>)>>,
}

impl LieBasis {
    pub fn new(taus: Vec<ConstMatrix>) -> Result<Self, AlgebraError> {
        let n = taus.first().map(ConstMatrix::n).ok_or(AlgebraError::EmptyBasis)?;
        let structure = structure_constants(&taus)?;
        let products = product_table(n, &taus)?;
        Ok(Self { n, taus, structure, products })
    }

    /// The default basis of sl(n): off-diagonal units `E_ij` (row-major
    /// order) followed by `E_kk − E_{k+1,k+1}`. For n = 2 this is
    /// `τ1 = [[0,1],[0,0]]`, `τ2 = [[0,0],[1,0]]`, `τ3 = [[1,0],[0,−1]]`.
    pub fn sl(n: usize) -> Self {
        assert!(n >= 2, "sl(n) needs n >= 2");
        let mut taus = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut m = ConstMatrix::zero(n);
                    m.set(i, j, GaussianRational::one());
                    taus.push(m);
                }
            }
        }
        for k in 0..n - 1 {
            let mut m = ConstMatrix::zero(n);
            m.set(k, k, GaussianRational::one());
            m.set(k + 1, k + 1, GaussianRational::from_int(-1));
            taus.push(m);
        }
        Self::new(taus).expect("sl(n) standard basis is closed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.taus.len()
    }

    /// `τ_k` with zero-based index.
    pub fn tau(&self, k: usize) -> &ConstMatrix {
        &self.taus[k]
    }

    pub fn taus(&self) -> &[ConstMatrix] {
        &self.taus
    }

    /// `C_ij^k`, zero-based indices.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &GaussianRational {
        let d = self.dim();
        &self.structure[(i * d + j) * d + k]
    }

    pub fn structure(&self) -> &[GaussianRational] {
        &self.structure
    }

    /// Expansion of `τ_a τ_b` as `(identity coefficient, τ coefficients)`.
    pub fn product(&self, a: usize, b: usize) -> Option<&(GaussianRational, Vec<GaussianRational>)> {
        self.products.as_ref().map(|p| &p[a * self.dim() + b])
    }

    /// Reassembles `Σ_k c_k τ_k`.
    pub fn combine(&self, coeffs: &[GaussianRational]) -> ConstMatrix {
        let mut out = ConstMatrix::zero(self.n);
        for (c, t) in coeffs.iter().zip(&self.taus) {
            if !c.is_zero() {
                out.add_assign_ref(&t.scale(c));
            }
        }
        out
    }
}

fn flatten(m: &ConstMatrix) -> Vec<GaussianRational> {
    m.entries().to_vec()
}

/// Solves `Σ c_i v_i = target` exactly. Returns `Ok(None)` when the target is
/// outside the span and an error when the vectors are linearly dependent.
pub fn solve_in_span(
    vectors: &[Vec<GaussianRational>],
    target: &[GaussianRational],
) -> Result<Option<Vec<GaussianRational>>, AlgebraError> {
    let rows = target.len();
    let cols = vectors.len();
    // augmented matrix, row-major
    let mut a: Vec<Vec<GaussianRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<GaussianRational> = vectors.iter().map(|v| v[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            return Err(AlgebraError::LinearlyDependent);
        };
        a.swap(r, p);
        let inv = a[r][c].inv()?;
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    Ok(Some((0..cols).map(|i| a[i][cols].clone()).collect()))
}

/// Exact structure constants of a traceless, linearly independent basis.
pub fn structure_constants(basis: &[ConstMatrix]) -> Result<Vec<GaussianRational>, AlgebraError> {
    if let Some(k) = basis.iter().position(|t| !t.trace().is_zero()) {
        return Err(AlgebraError::NotTraceless(k + 1));
    }
    let vectors: Vec<_> = basis.iter().map(flatten).collect();
    let d = basis.len();
    let mut out = vec![GaussianRational::zero(); d * d * d];
    for i in 0..d {
        for j in 0..d {
            let br = commutator(&basis[i], &basis[j])?;
            let coeffs = solve_in_span(&vectors, &flatten(&br))?.ok_or(AlgebraError::NotClosed(i + 1, j + 1))?;
            for (k, c) in coeffs.into_iter().enumerate() {
                out[(i * d + j) * d + k] = c;
            }
        }
    }
    Ok(out)
}

fn product_table(
    n: usize,
    taus: &[ConstMatrix],
) -> Result<Option<Vec<(GaussianRational, Vec<GaussianRational>)>>, AlgebraError> {
    if taus.len() + 1 != n * n {
        return Ok(None);
    }
    let mut vectors = vec![flatten(&ConstMatrix::identity(n))];
    vectors.extend(taus.iter().map(flatten));
    let mut table = Vec::with_capacity(taus.len() * taus.len());
    for a in taus {
        for b in taus {
            let mut c = solve_in_span(&vectors, &flatten(&(a * b)))?.expect("identity plus an sl(n) basis spans gl(n)");
            let id = c.remove(0);
            table.push((id, c));
        }
    }
    Ok(Some(table))
}
