//! Full (non-symmetric) covariant tensors, used where slot-wise operators
//! break alternation: single insertions `A_(i)`, Nijenhuis tensors, and
//! mixed products such as `I_(2) J_(3) c`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exterior::AltForm;

/// A `(0, s)`-tensor on `R^dim`, row-major over its slots.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    rank: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zero(dim: usize, rank: usize) -> Self {
        Self {
            dim,
            rank,
            data: vec![0.0; dim.pow(rank as u32)],
        }
    }

    pub fn from_data(dim: usize, rank: usize, data: Vec<f64>) -> Result<Self> {
        let expected = dim.pow(rank as u32);
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: data.len(),
            });
        }
        Ok(Self { dim, rank, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Expands an alternating form into all of its index tuples.
    pub fn from_form(a: &AltForm) -> Self {
        let mut out = Self::zero(a.dim(), a.degree());
        let mut idx = vec![0usize; a.degree()];
        for flat in 0..out.data.len() {
            unflatten(flat, a.dim(), &mut idx);
            out.data[flat] = a.get(&idx);
        }
        out
    }

    /// Reads off the sorted-tuple coefficients. The caller is responsible for
    /// the tensor being alternating; see [`DenseTensor::antisymmetry_defect`].
    pub fn to_form(&self) -> AltForm {
        let mut out = AltForm::zero(self.dim, self.rank);
        let b = out.basis();
        let coeffs: Vec<f64> = b
            .iter()
            .map(|t| {
                let idx: Vec<usize> = t.iter().map(|&i| i as usize).collect();
                self.get(&idx)
            })
            .collect();
        out.coeffs_mut().copy_from_slice(&coeffs);
        out
    }

    /// Largest violation of antisymmetry under adjacent transpositions.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut idx = vec![0usize; self.rank];
        for flat in 0..self.data.len() {
            unflatten(flat, self.dim, &mut idx);
            for s in 0..self.rank.saturating_sub(1) {
                idx.swap(s, s + 1);
                let swapped = self.get(&idx);
                idx.swap(s, s + 1);
                worst = worst.max((self.data[flat] + swapped).abs());
            }
        }
        worst
    }

    /// `A_(i) b (X_1, …, X_i, …) = −b(X_1, …, A X_i, …)`, slot `i` 1-based.
    pub fn insert(&self, a: &DMatrix<f64>, slot: usize) -> Result<DenseTensor> {
        if slot == 0 || slot > self.rank {
            return Err(Error::BadSlot {
                slot,
                rank: self.rank,
            });
        }
        Ok(self.apply_slot(a, slot - 1, -1.0))
    }

    /// `s · b(…, M X_slot, …)` with a 0-based slot.
    pub(crate) fn apply_slot(&self, m: &DMatrix<f64>, slot: usize, s: f64) -> DenseTensor {
        let d = self.dim;
        let inner = d.pow((self.rank - slot - 1) as u32);
        let outer = d.pow(slot as u32);
        let mut out = DenseTensor::zero(d, self.rank);
        for o in 0..outer {
            for j in 0..d {
                for k in 0..d {
                    let mkj = m[(k, j)];
                    if mkj == 0.0 {
                        continue;
                    }
                    let src = (o * d + k) * inner;
                    let dst = (o * d + j) * inner;
                    for r in 0..inner {
                        out.data[dst + r] += s * mkj * self.data[src + r];
                    }
                }
            }
        }
        out
    }

    /// Pullback `b(M X_1, …, M X_s)`.
    pub fn pullback(&self, m: &DMatrix<f64>) -> DenseTensor {
        (0..self.rank).fold(self.clone(), |t, slot| t.apply_slot(m, slot, 1.0))
    }

    pub fn axpy(&mut self, s: f64, other: &DenseTensor) {
        assert_eq!((self.dim, self.rank), (other.dim, other.rank));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn scaled(&self, s: f64) -> DenseTensor {
        DenseTensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Norm in the `1/s!`-normalised extended inner product.
    pub fn norm(&self) -> f64 {
        let f: f64 = (1..=self.rank).map(|k| k as f64).product();
        (self.data.iter().map(|x| x * x).sum::<f64>() / f).sqrt()
    }
}

fn unflatten(mut flat: usize, dim: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}
