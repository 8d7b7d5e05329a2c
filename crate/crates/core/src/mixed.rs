//! Tensors with one distinguished covariant slot followed by an alternating
//! block: `a(x; y_1, …, y_p)`. Row `x` holds the `p`-form `e_x ⌟ a`.

use std::ops::{Add, Mul, Sub};

use crate::basis::binomial;
use crate::error::{Error, Result};
use crate::exterior::{dot, interior, wedge, AltForm};

/// Element of `V* ⊗ Λ^p V*`, stored as `dim` rows of `p`-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedForm {
    dim: usize,
    degree: usize,
    rows: Vec<AltForm>,
}

/// `V* ⊗ Λ⁴ V*`, where covariant derivatives of the fundamental 4-form live.
pub type MixedTorsion = MixedForm;

/// `V* ⊗ Λ² V*`, the home of the two-form families `c`, `c_A`, `d_A`.
pub type MixedTwoFormFamily = MixedForm;

impl MixedForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            rows: (0..dim).map(|_| AltForm::zero(dim, degree)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<AltForm>) -> Result<Self> {
        let dim = rows.len();
        let degree = rows.first().map_or(0, AltForm::degree);
        for r in &rows {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.dim(),
                });
            }
            if r.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    got: r.degree(),
                });
            }
        }
        Ok(Self { dim, degree, rows })
    }

    /// Builds a tensor row by row from a closure.
    pub fn from_fn(dim: usize, degree: usize, mut f: impl FnMut(usize) -> AltForm) -> Self {
        let rows = (0..dim)
            .map(|x| {
                let r = f(x);
                debug_assert_eq!((r.dim(), r.degree()), (dim, degree));
                r
            })
            .collect();
        Self { dim, degree, rows }
    }

    pub fn from_flat(dim: usize, degree: usize, flat: &[f64]) -> Result<Self> {
        let per = binomial(dim, degree);
        if flat.len() != dim * per {
            return Err(Error::DimensionMismatch {
                expected: dim * per,
                got: flat.len(),
            });
        }
        let rows = flat
            .chunks(per)
            .map(|c| AltForm::from_coeffs(dim, degree, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, degree, rows })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.rows.iter().flat_map(|r| r.coeffs().iter().copied()).collect()
    }

    /// Length of [`MixedForm::to_flat`] for the given shape.
    pub fn flat_len(dim: usize, degree: usize) -> usize {
        dim * binomial(dim, degree)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn row(&self, x: usize) -> &AltForm {
        &self.rows[x]
    }

    pub fn row_mut(&mut self, x: usize) -> &mut AltForm {
        &mut self.rows[x]
    }

    pub fn rows(&self) -> &[AltForm] {
        &self.rows
    }

    /// `x ⌟ a = Σ_r x_r a(e_r; ·)`.
    pub fn at(&self, x: &[f64]) -> AltForm {
        let mut out = AltForm::zero(self.dim, self.degree);
        for (r, row) in self.rows.iter().enumerate() {
            if x[r] != 0.0 {
                out.axpy(x[r], row);
            }
        }
        out
    }

    /// Value `a(e_x; e_{i_1}, …, e_{i_p})`.
    pub fn get(&self, x: usize, indices: &[usize]) -> f64 {
        self.rows[x].get(indices)
    }

    pub fn map_rows(&self, f: impl Fn(&AltForm) -> AltForm) -> MixedForm {
        let rows: Vec<AltForm> = self.rows.iter().map(f).collect();
        let degree = rows.first().map_or(self.degree, AltForm::degree);
        MixedForm {
            dim: self.dim,
            degree,
            rows,
        }
    }

    /// Row-wise wedge with a fixed form on the right, covariant slot carried.
    pub fn wedge_right(&self, b: &AltForm) -> MixedForm {
        self.map_rows(|r| wedge(r, b))
    }

    /// Inner product on `V* ⊗ Λ^p`: `Σ_x ⟨a_x, b_x⟩`.
    pub fn inner(&self, other: &MixedForm) -> f64 {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        self.rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| dot(a.coeffs(), b.coeffs()))
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.rows.iter().map(AltForm::norm_sq).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.max_abs()))
    }

    pub fn scaled(&self, s: f64) -> MixedForm {
        self.map_rows(|r| r.scaled(s))
    }

    pub fn axpy(&mut self, s: f64, other: &MixedForm) {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.axpy(s, b);
        }
    }

    /// `‖self − other‖ / max(‖self‖, ‖other‖)`.
    pub fn rel_dist(&self, other: &MixedForm) -> f64 {
        let d = (self - other).norm();
        d / self.norm().max(other.norm()).max(1e-300)
    }

    /// Metric contraction of the covariant slot with the first form slot,
    /// negated: `(d* a)(y, …) = −Σ_r a(e_r; e_r, y, …)`.
    pub fn contract12(&self) -> AltForm {
        assert!(self.degree >= 1, "contraction needs a form slot");
        let mut out = AltForm::zero(self.dim, self.degree - 1);
        let mut e = vec![0.0; self.dim];
        for (r, row) in self.rows.iter().enumerate() {
            e[r] = 1.0;
            out.axpy(-1.0, &interior(&e, row));
            e[r] = 0.0;
        }
        out
    }

    /// Alternation into `Λ^{p+1}`: `a(a)(X_0, …, X_p) = Σ_i (−1)^i a(X_i; X̂_i)`,
    /// which for `p = 4` is the cyclic sum over the five arguments.
    pub fn alternate(&self) -> AltForm {
        let mut out = AltForm::zero(self.dim, self.degree + 1);
        for (r, row) in self.rows.iter().enumerate() {
            out += &wedge(&AltForm::monomial(self.dim, &[r]), row);
        }
        out
    }
}

/// `d* a = −C₁₂(a)` for `a ∈ V* ⊗ Λ⁴`.
pub fn contract12(a: &MixedTorsion) -> AltForm {
    a.contract12()
}

/// The alternation map `V* ⊗ Λ⁴ → Λ⁵`.
pub fn alternate5(a: &MixedTorsion) -> AltForm {
    a.alternate()
}

impl Add for &MixedForm {
    type Output = MixedForm;
    fn add(self, rhs: &MixedForm) -> MixedForm {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &MixedForm {
    type Output = MixedForm;
    fn sub(self, rhs: &MixedForm) -> MixedForm {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Add for MixedForm {
    type Output = MixedForm;
    fn add(mut self, rhs: MixedForm) -> MixedForm {
        self.axpy(1.0, &rhs);
        self
    }
}

impl Sub for MixedForm {
    type Output = MixedForm;
    fn sub(mut self, rhs: MixedForm) -> MixedForm {
        self.axpy(-1.0, &rhs);
        self
    }
}

impl Mul<f64> for &MixedForm {
    type Output = MixedForm;
    fn mul(self, s: f64) -> MixedForm {
        self.scaled(s)
    }
}

impl Mul<f64> for MixedForm {
    type Output = MixedForm;
    fn mul(self, s: f64) -> MixedForm {
        self.scaled(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{gaussian_form, rng};

    fn random_mixed(dim: usize, degree: usize, seed: u64) -> MixedForm {
        let mut g = rng(seed);
        MixedForm::from_fn(dim, degree, |_| gaussian_form(&mut g, dim, degree))
    }

    #[test]
    fn zero_contracts_to_zero() {
        let z = MixedForm::zero(8, 4);
        assert!(z.contract12().is_zero());
        assert!(z.alternate().is_zero());
    }

    #[test]
    fn alternation_equals_cyclic_sum() {
        let a = random_mixed(8, 4, 3);
        let alt = a.alternate();
        // literal cyclic sum over the five arguments
        let args = [1usize, 6, 2, 7, 4];
        let mut cyc = 0.0;
        for s in 0..5 {
            let x = args[s];
            let rest: Vec<usize> = (1..5).map(|k| args[(s + k) % 5]).collect();
            cyc += a.get(x, &rest);
        }
        assert!((alt.get(&args) - cyc).abs() < 1e-12);
    }

    #[test]
    fn contraction_by_hand() {
        let a = random_mixed(8, 4, 4);
        let d = a.contract12();
        let (y, z, u) = (1usize, 3usize, 6usize);
        let expect: f64 = -(0..8).map(|r| a.get(r, &[r, y, z, u])).sum::<f64>();
        assert!((d.get(&[y, z, u]) - expect).abs() < 1e-12);
    }

    #[test]
    fn flat_round_trip() {
        let a = random_mixed(8, 2, 5);
        let b = MixedForm::from_flat(8, 2, &a.to_flat()).unwrap();
        assert_eq!(a, b);
    }
}
