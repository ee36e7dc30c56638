use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use super::{exponents_up_to, total_degree, Exponent, TruncatedSeries};
use crate::algebra::{const_inverse, ConstMatrix, GaussianRational};
use crate::jetexpr::Coordinate;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("constant term of J0 is singular")]
    SingularJ0,
    #[error("fixture invariant `{what}` fails at exponent {exponent:?}")]
    Invariant { what: &'static str, exponent: Exponent },
}

/// An exact truncated solution `(X, J, J⁻¹)` of PSDYM and of the Bäcklund
/// system linking it to SDYM.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFixture {
    pub label: String,
    pub seed: Option<u64>,
    pub degree: usize,
    pub x: TruncatedSeries,
    pub j: TruncatedSeries,
    pub jinv: TruncatedSeries,
}

fn add_e(e: &Exponent, c: Coordinate) -> Exponent {
    let mut f = *e;
    f[c.index()] += 1;
    f
}

fn int(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

/// Solves `X_yȳ = −X_zz̄ + [X_ȳ, X_z̄]` order by order. Coefficients with
/// no `y` or no `ȳ` come from `free`; the others are determined.
pub fn solve_psdym(mut free: impl FnMut(&Exponent) -> ConstMatrix, n: usize, d: usize) -> TruncatedSeries {
    use Coordinate::*;
    let mut order = exponents_up_to(d);
    order.sort_by_key(|e| (total_degree(e), e[Y.index()]));
    let mut x: BTreeMap<Exponent, ConstMatrix> = BTreeMap::new();
    let get = |x: &BTreeMap<Exponent, ConstMatrix>, e: &Exponent| x.get(e).cloned();
    for e in order {
        let (yi, ybi) = (Y.index(), Yb.index());
        if e[yi] == 0 || e[ybi] == 0 {
            let m = free(&e);
            if !m.is_zero() {
                x.insert(e, m);
            }
            continue;
        }
        let mut f = e;
        f[yi] -= 1;
        f[ybi] -= 1;
        let mut acc = ConstMatrix::zero(n);
        if let Some(m) = get(&x, &add_e(&add_e(&f, Z), Zb)) {
            let k = (f[Z.index()] as i64 + 1) * (f[Zb.index()] as i64 + 1);
            acc.sub_assign_ref(&m.scale(&int(k)));
        }
        // ([X_ȳ, X_z̄])_f
        for a in exponents_up_to(total_degree(&f)) {
            if (0..4).any(|i| a[i] > f[i]) {
                continue;
            }
            let b = [f[0] - a[0], f[1] - a[1], f[2] - a[2], f[3] - a[3]];
            let (Some(p), Some(q)) = (get(&x, &add_e(&a, Yb)), get(&x, &add_e(&b, Zb))) else { continue };
            let s = int((a[ybi] as i64 + 1) * (b[Zb.index()] as i64 + 1));
            let mut c = ConstMatrix::zero(n);
            c.add_product(&p, &q);
            let mut qp = ConstMatrix::zero(n);
            qp.add_product(&q, &p);
            c.sub_assign_ref(&qp);
            acc.add_assign_ref(&c.scale(&s));
        }
        let denom = (f[yi] as i64 + 1) * (f[ybi] as i64 + 1);
        let m = acc.scale(&GaussianRational::from_ratio(1, denom));
        if !m.is_zero() {
            x.insert(e, m);
        }
    }
    TruncatedSeries::from_coeffs(n, d, d as i32, x)
}

fn convolve(a: &BTreeMap<Exponent, ConstMatrix>, b: &TruncatedSeries, e: &Exponent, n: usize) -> ConstMatrix {
    let mut acc = ConstMatrix::zero(n);
    for (ea, ma) in a {
        if (0..4).any(|i| ea[i] > e[i]) {
            continue;
        }
        let eb = [e[0] - ea[0], e[1] - ea[1], e[2] - ea[2], e[3] - ea[3]];
        if let Some(mb) = b.coeff_ref(&eb) {
            acc.add_product(ma, mb);
        }
    }
    acc
}

/// Integrates `J_y = J X_z̄`, `J_z = −J X_ȳ` from `J(y = z = 0) = J0`, and
/// inverts the result.
pub fn solve_j(x: &TruncatedSeries, j0: &TruncatedSeries) -> Result<(TruncatedSeries, TruncatedSeries), FixtureError> {
    use Coordinate::*;
    let n = x.n();
    let d = x.cap();
    let xzb = x.derivative(Zb);
    let xyb = x.derivative(Yb);
    let mut j: BTreeMap<Exponent, ConstMatrix> = BTreeMap::new();
    for e in exponents_up_to(d) {
        let m = if e[Y.index()] > 0 {
            let mut f = e;
            f[Y.index()] -= 1;
            convolve(&j, &xzb, &f, n).scale(&GaussianRational::from_ratio(1, e[Y.index()] as i64))
        } else if e[Z.index()] > 0 {
            let mut f = e;
            f[Z.index()] -= 1;
            convolve(&j, &xyb, &f, n).scale(&GaussianRational::from_ratio(-1, e[Z.index()] as i64))
        } else {
            j0.coeff(&e)
        };
        if !m.is_zero() {
            j.insert(e, m);
        }
    }
    let j = TruncatedSeries::from_coeffs(n, d, d as i32, j);
    let jinv = series_inverse(&j)?;
    Ok((j, jinv))
}

fn series_inverse(j: &TruncatedSeries) -> Result<TruncatedSeries, FixtureError> {
    let n = j.n();
    let d = j.cap();
    let c0 = const_inverse(&j.coeff(&[0; 4])).map_err(|_| FixtureError::SingularJ0)?;
    let mut inv: BTreeMap<Exponent, ConstMatrix> = BTreeMap::new();
    inv.insert([0; 4], c0.clone());
    for e in exponents_up_to(d).into_iter().skip(1) {
        let mut acc = ConstMatrix::zero(n);
        for (ea, ma) in &inv {
            if (0..4).any(|i| ea[i] > e[i]) {
                continue;
            }
            let eb = [e[0] - ea[0], e[1] - ea[1], e[2] - ea[2], e[3] - ea[3]];
            if let Some(mb) = j.coeff_ref(&eb) {
                acc.add_product(ma, mb);
            }
        }
        let mut m = ConstMatrix::zero(n);
        m.add_product(&acc, &c0);
        let m = m.scale(&int(-1));
        if !m.is_zero() {
            inv.insert(e, m);
        }
    }
    Ok(TruncatedSeries::from_coeffs(n, d, d as i32, inv))
}

/// `X = (yȳ − zz̄)τ` for the last basis element `τ` (`τ_3` for sl(2)), with
/// `J = exp(−yzτ)` and `J⁻¹ = exp(yzτ)` in closed form.
pub fn abelian_fixture(d: usize) -> SolutionFixture {
    let basis = crate::config::lie_basis();
    let n = basis.n();
    let tau = basis.tau(basis.dim() - 1).clone();
    let mut x = TruncatedSeries::zero(n, d);
    x.set([1, 0, 1, 0], tau.clone());
    x.set([0, 1, 0, 1], tau.scale(&int(-1)));
    let exp = |sign: i64| {
        let mut s = TruncatedSeries::zero(n, d);
        let mut power = ConstMatrix::identity(n);
        let mut fact = 1i64;
        for k in 0..=d / 2 {
            if k > 0 {
                let mut p = ConstMatrix::zero(n);
                p.add_product(&power, &tau);
                power = p;
                fact *= k as i64;
            }
            let c = GaussianRational::from_ratio(sign.pow(k as u32), fact);
            s.set([k as u8, k as u8, 0, 0], power.scale(&c));
        }
        s
    };
    SolutionFixture { label: "abelian".into(), seed: None, degree: d, x, j: exp(-1), jinv: exp(1) }
}

/// A random traceless matrix with entries in `{−2..2}/{1,2,3}`.
pub fn random_traceless(rng: &mut impl Rng, n: usize) -> ConstMatrix {
    let mut m = ConstMatrix::zero(n);
    let mut diag = GaussianRational::zero();
    for i in 0..n {
        for j in 0..n {
            if i == n - 1 && j == n - 1 {
                continue;
            }
            let v = GaussianRational::from_ratio(rng.gen_range(-2..=2), rng.gen_range(1..=3));
            if i == j {
                diag += &v;
            }
            m.set(i, j, v);
        }
    }
    m.set(n - 1, n - 1, -diag);
    m
}

fn non_abelian(x: &TruncatedSeries) -> bool {
    !x.derivative(Coordinate::Yb).commutator(&x.derivative(Coordinate::Zb)).is_zero()
}

/// A seeded random solution; free data is re-drawn from the same stream
/// until `[X_ȳ, X_z̄]` is not identically zero.
pub fn random_fixture(seed: u64, d: usize) -> SolutionFixture {
    let n = crate::config::lie_basis().n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let x = solve_psdym(|_| random_traceless(&mut rng, n), n, d);
        if d >= 2 && !non_abelian(&x) {
            continue;
        }
        let j0 = TruncatedSeries::identity(n, d);
        let (j, jinv) = solve_j(&x, &j0).expect("identity J0 is invertible");
        return SolutionFixture { label: format!("random:{seed}"), seed: Some(seed), degree: d, x, j, jinv };
    }
}

fn series_json(s: &TruncatedSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(e, m)| json!({ "exponent": e, "coefficient": serde_json::to_value(m).expect("matrix") }))
        .collect();
    json!({ "valid_degree": s.valid(), "terms": terms })
}

impl SolutionFixture {
    pub fn n(&self) -> usize {
        self.x.n()
    }

    /// Checks PSDYM, the Bäcklund system, SDYM, `J J⁻¹ = I` and
    /// tracelessness of `X`, each to its valid degree.
    pub fn check_invariants(&self) -> Result<(), FixtureError> {
        use Coordinate::*;
        let x = &self.x;
        let fail = |what: &'static str, s: &TruncatedSeries| match s.witness() {
            Some((exponent, _)) => Err(FixtureError::Invariant { what, exponent }),
            None => Ok(()),
        };
        let (xy, xz, xyb, xzb) = (x.derivative(Y), x.derivative(Z), x.derivative(Yb), x.derivative(Zb));
        let g = xy.derivative(Yb).add(&xz.derivative(Zb)).sub(&xyb.commutator(&xzb));
        fail("psdym", &g)?;
        let bt_y = self.jinv.mul(&self.j.derivative(Y)).sub(&xzb);
        fail("bt-y", &bt_y)?;
        let bt_z = self.jinv.mul(&self.j.derivative(Z)).add(&xyb);
        fail("bt-z", &bt_z)?;
        // (J⁻¹J_y)_ȳ + (J⁻¹J_z)_z̄
        let a = self.jinv.mul(&self.j.derivative(Y)).derivative(Yb);
        let b = self.jinv.mul(&self.j.derivative(Z)).derivative(Zb);
        fail("sdym", &a.add(&b))?;
        let id = TruncatedSeries::identity(self.n(), self.degree);
        fail("j-jinv", &self.j.mul(&self.jinv).sub(&id))?;
        fail("jinv-j", &self.jinv.mul(&self.j).sub(&id))?;
        if !x.is_traceless() {
            let e = x.terms().find(|(_, m)| !m.trace().is_zero()).map(|(e, _)| *e).unwrap_or([0; 4]);
            return Err(FixtureError::Invariant { what: "trace", exponent: e });
        }
        Ok(())
    }

    /// Deterministic JSON rendering with exact rationals as strings.
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "seed": self.seed,
            "degree": self.degree,
            "n": self.n(),
            "X": series_json(&self.x),
            "J": series_json(&self.j),
            "Jinv": series_json(&self.jinv),
        })
    }
}
