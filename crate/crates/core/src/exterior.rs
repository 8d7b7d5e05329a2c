//! Dense exterior algebra over Euclidean `R^dim`.
//!
//! Conventions:
//! - coefficients are the values of the form on sorted tuples of basis
//!   vectors, so `⟨a, b⟩` is the plain dot product of coefficient vectors
//!   (the `1/s!` normalisation over all tuples);
//! - the wedge product is the shuffle sum without factorial division;
//! - the Hodge star uses the standard basis `e_0, …, e_{dim-1}` as the
//!   positively oriented orthonormal frame.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::basis::{basis, binomial, merge_sign, sort_with_sign, FormBasis};
use crate::error::{Error, Result};

/// An alternating `(0, p)`-tensor with dense lexicographic coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct AltForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

/// Sign of `Vol` against `e^0 ∧ … ∧ e^{dim-1}`: `(−1)^{n+1}` when `dim = 4n`.
pub fn orientation(dim: usize) -> f64 {
    if dim.is_multiple_of(4) && (dim / 4).is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

impl AltForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(degree <= dim, "degree {degree} exceeds dimension {dim}");
        Self {
            dim,
            degree,
            coeffs: vec![0.0; binomial(dim, degree)],
        }
    }

    /// The constant 0-form.
    pub fn scalar(dim: usize, value: f64) -> Self {
        Self {
            dim,
            degree: 0,
            coeffs: vec![value],
        }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if degree > dim {
            return Err(Error::DegreeOverflow {
                left: degree,
                right: 0,
                dim,
            });
        }
        let expected = binomial(dim, degree);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self { dim, degree, coeffs })
    }

    /// The one-form `x ↦ ⟨v, x⟩`.
    pub fn one_form(v: &[f64]) -> Self {
        Self {
            dim: v.len(),
            degree: 1,
            coeffs: v.to_vec(),
        }
    }

    /// The basis monomial `e^{i_1} ∧ … ∧ e^{i_p}` for an arbitrary index list.
    pub fn monomial(dim: usize, indices: &[usize]) -> Self {
        let mut out = Self::zero(dim, indices.len());
        let mut idx = indices.to_vec();
        if let Some(sign) = sort_with_sign(&mut idx) {
            let r = out.basis().rank(&idx);
            out.coeffs[r] = sign;
        }
        out
    }

    /// The volume form `Vol = ((−1)^{n+1}/(2n+1)!) Ω^n` for `dim = 4n`, which is
    /// `(−1)^{n+1} e^0 ∧ … ∧ e^{dim-1}`; other dimensions use `e^0 ∧ … ∧ e^{dim-1}`.
    pub fn volume(dim: usize) -> Self {
        Self {
            dim,
            degree: dim,
            coeffs: vec![orientation(dim)],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    #[inline]
    pub fn basis(&self) -> &'static FormBasis {
        basis(self.dim, self.degree)
    }

    /// Value on basis vectors `e_{i_1}, …, e_{i_p}` in the given order.
    pub fn get(&self, indices: &[usize]) -> f64 {
        debug_assert_eq!(indices.len(), self.degree);
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            Some(sign) => sign * self.coeffs[self.basis().rank(&idx)],
            None => 0.0,
        }
    }

    /// Value on arbitrary vectors.
    pub fn eval(&self, vectors: &[&[f64]]) -> Result<f64> {
        if vectors.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: vectors.len(),
            });
        }
        let mut cur = self.clone();
        for v in vectors {
            cur = cur.interior(v)?;
        }
        Ok(cur.coeffs[0])
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &AltForm) {
        assert_eq!(
            (self.dim, self.degree),
            (other.dim, other.degree),
            "axpy between incompatible forms"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// Extended inner product `⟨a, b⟩ = (1/s!) a(e_I) b(e_I)`.
    pub fn inner(&self, other: &AltForm) -> Result<f64> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(dot(&self.coeffs, &other.coeffs))
    }

    /// Shuffle-convention wedge product.
    pub fn wedge(&self, other: &AltForm) -> Result<AltForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(Error::DegreeOverflow {
                left: self.degree,
                right: other.degree,
                dim: self.dim,
            });
        }
        let mut out = AltForm::zero(self.dim, degree);
        let (ba, bb, bo) = (self.basis(), other.basis(), out.basis());
        let mut merged = vec![0u8; degree];
        for (ia, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let ta = ba.tuple(ia);
            for (ib, &cb) in other.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let tb = bb.tuple(ib);
                if let Some(sign) = merge_sign(ta, tb) {
                    merge_into(ta, tb, &mut merged);
                    out.coeffs[bo.rank(&merged)] += sign * ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// Interior product `(x ⌟ a)(…) = a(x, …)`.
    pub fn interior(&self, x: &[f64]) -> Result<AltForm> {
        if self.degree == 0 {
            return Err(Error::InteriorOfScalar);
        }
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut out = AltForm::zero(self.dim, self.degree - 1);
        let src = self.basis();
        // scatter: a(e_I) contributes x_{i_s} (-1)^s to the tuple I \ {i_s}
        let dst = out.basis();
        let mut rest = vec![0u8; self.degree - 1];
        for (ia, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let t = src.tuple(ia);
            for s in 0..t.len() {
                let xv = x[t[s] as usize];
                if xv == 0.0 {
                    continue;
                }
                rest[..s].copy_from_slice(&t[..s]);
                rest[s..].copy_from_slice(&t[s + 1..]);
                let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                out.coeffs[dst.rank(&rest)] += sign * xv * ca;
            }
        }
        Ok(out)
    }

    /// Interior product with the basis vector `e_i`.
    pub fn interior_basis(&self, i: usize) -> Result<AltForm> {
        let mut x = vec![0.0; self.dim];
        x[i] = 1.0;
        self.interior(&x)
    }

    /// Hodge star `ψ ∧ ⋆a = ⟨ψ, a⟩ Vol` with `Vol` as in [`AltForm::volume`].
    pub fn hodge(&self) -> AltForm {
        let dim = self.dim;
        let mut out = AltForm::zero(dim, dim - self.degree);
        let src = self.basis();
        let dst = out.basis();
        let or = orientation(dim);
        let mut comp = Vec::with_capacity(dim);
        for (ia, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let t = src.tuple(ia);
            comp.clear();
            let mut inversions = 0usize;
            let mut k = 0;
            for i in 0..dim as u8 {
                if k < t.len() && t[k] == i {
                    k += 1;
                } else {
                    comp.push(i);
                    // each complement index smaller than a later tuple index
                    inversions += t.len() - k;
                }
            }
            let sign = if inversions.is_multiple_of(2) { or } else { -or };
            out.coeffs[dst.rank(&comp)] += sign * ca;
        }
        out
    }

    /// Pointwise vector of `a(e_i)` for a 1-form.
    pub fn as_vector(&self) -> Vec<f64> {
        assert_eq!(self.degree, 1, "as_vector on a {}-form", self.degree);
        self.coeffs.clone()
    }

    /// Relative distance `‖self − other‖ / max(‖self‖, ‖other‖, floor)`.
    pub fn rel_dist(&self, other: &AltForm) -> f64 {
        let d = (self - other).norm();
        let scale = self.norm().max(other.norm()).max(1e-300);
        d / scale
    }
}

fn merge_into(a: &[u8], b: &[u8], out: &mut [u8]) {
    let (mut i, mut j) = (0, 0);
    for slot in out.iter_mut() {
        if j >= b.len() || (i < a.len() && a[i] < b[j]) {
            *slot = a[i];
            i += 1;
        } else {
            *slot = b[j];
            j += 1;
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Add for &AltForm {
    type Output = AltForm;
    fn add(self, rhs: &AltForm) -> AltForm {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &AltForm {
    type Output = AltForm;
    fn sub(self, rhs: &AltForm) -> AltForm {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Add for AltForm {
    type Output = AltForm;
    fn add(mut self, rhs: AltForm) -> AltForm {
        self.axpy(1.0, &rhs);
        self
    }
}

impl Sub for AltForm {
    type Output = AltForm;
    fn sub(mut self, rhs: AltForm) -> AltForm {
        self.axpy(-1.0, &rhs);
        self
    }
}

impl AddAssign<&AltForm> for AltForm {
    fn add_assign(&mut self, rhs: &AltForm) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&AltForm> for AltForm {
    fn sub_assign(&mut self, rhs: &AltForm) {
        self.axpy(-1.0, rhs);
    }
}

impl Mul<f64> for &AltForm {
    type Output = AltForm;
    fn mul(self, s: f64) -> AltForm {
        self.scaled(s)
    }
}

impl Mul<f64> for AltForm {
    type Output = AltForm;
    fn mul(mut self, s: f64) -> AltForm {
        self.coeffs.iter_mut().for_each(|c| *c *= s);
        self
    }
}

impl Neg for AltForm {
    type Output = AltForm;
    fn neg(self) -> AltForm {
        self * -1.0
    }
}

/// Wedge product that panics on dimension or degree errors; for internal use
/// where the degrees are fixed by construction.
pub(crate) fn wedge(a: &AltForm, b: &AltForm) -> AltForm {
    a.wedge(b).expect("wedge degrees fixed by construction")
}

pub(crate) fn interior(x: &[f64], a: &AltForm) -> AltForm {
    a.interior(x).expect("interior degrees fixed by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_form;

    #[test]
    fn wedge_base_case() {
        let e1 = AltForm::monomial(8, &[0]);
        let e2 = AltForm::monomial(8, &[1]);
        let w = e1.wedge(&e2).unwrap();
        assert_eq!(w.get(&[0, 1]), 1.0);
        assert_eq!(w.get(&[1, 0]), -1.0);
    }

    #[test]
    fn wedge_overflow_is_error() {
        let a = AltForm::zero(4, 3);
        let b = AltForm::zero(4, 2);
        assert!(matches!(a.wedge(&b), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn graded_commutativity() {
        for (p, q) in [(1, 1), (1, 2), (2, 3), (3, 3), (1, 4)] {
            let a = random_form(8, p, 11 + p as u64);
            let b = random_form(8, q, 17 + q as u64);
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
            let resid = (&ab - &ba.scaled(sign)).max_abs();
            assert!(resid < 1e-12, "p={p} q={q} resid={resid}");
        }
    }

    #[test]
    fn wedge_associative() {
        let a = random_form(8, 1, 1);
        let b = random_form(8, 2, 2);
        let c = random_form(8, 3, 3);
        let l = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let r = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        assert!((&l - &r).max_abs() < 1e-12);
    }

    #[test]
    fn interior_basics() {
        let w = AltForm::monomial(8, &[0, 1]);
        let e1 = w.interior_basis(0).unwrap();
        assert_eq!(e1, AltForm::monomial(8, &[1]));
        assert!(matches!(
            AltForm::scalar(8, 1.0).interior(&[0.0; 8]),
            Err(Error::InteriorOfScalar)
        ));
    }

    #[test]
    fn double_interior_vanishes() {
        let a = random_form(8, 3, 5);
        let x: Vec<f64> = random_form(8, 1, 6).as_vector();
        let r = a.interior(&x).unwrap().interior(&x).unwrap();
        assert!(r.max_abs() < 1e-12);
    }

    #[test]
    fn interior_is_adjoint_of_wedge() {
        for p in 1..=5 {
            let a = random_form(8, p, 40 + p as u64);
            let b = random_form(8, p - 1, 50 + p as u64);
            let x = random_form(8, 1, 60 + p as u64);
            let lhs = a.interior(x.coeffs()).unwrap().inner(&b).unwrap();
            let rhs = a.inner(&x.wedge(&b).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "p={p}");
        }
    }

    #[test]
    fn inner_checks_degree() {
        let a = AltForm::zero(8, 2);
        let b = AltForm::zero(8, 3);
        assert!(matches!(a.inner(&b), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn eval_matches_get_on_basis_vectors() {
        let a = random_form(8, 3, 9);
        let mut e = [[0.0; 8]; 3];
        e[0][4] = 1.0;
        e[1][1] = 1.0;
        e[2][6] = 1.0;
        let v = a.eval(&[&e[0], &e[1], &e[2]]).unwrap();
        assert!((v - a.get(&[4, 1, 6])).abs() < 1e-14);
    }

    #[test]
    fn hodge_of_volume_is_one() {
        let s = AltForm::volume(8).hodge();
        assert_eq!(s.degree(), 0);
        assert_eq!(s.coeffs()[0], 1.0);
    }

    #[test]
    fn hodge_involution_and_defining_identity() {
        for dim in [8usize, 12] {
            for p in 0..=dim {
                if dim == 12 && !(p <= 2 || p >= 10 || p == 5) {
                    continue;
                }
                let a = random_form(dim, p, 100 + p as u64);
                let ss = a.hodge().hodge();
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                assert!((&ss - &a.scaled(sign)).max_abs() < 1e-12, "dim={dim} p={p}");
                let psi = random_form(dim, p, 200 + p as u64);
                let top = psi.wedge(&a.hodge()).unwrap();
                let ip = psi.inner(&a).unwrap();
                let vol = AltForm::volume(dim).scaled(ip);
                assert!((top.coeffs()[0] - vol.coeffs()[0]).abs() < 1e-10 * (1.0 + ip.abs()));
            }
        }
    }
}
