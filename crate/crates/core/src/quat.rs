//! The quaternionic triple `(I, J, K)` on `R^{4n}`, its Kähler forms, the
//! fundamental 4-form, and the slot operators built from it.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::{basis, sort_with_sign};
use crate::error::{Error, Result};
use crate::exterior::{wedge, AltForm};
use crate::mixed::{MixedForm, MixedTorsion};
use crate::tensor::DenseTensor;

/// One of the three structure endomorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    I,
    J,
    K,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::I, Axis::J, Axis::K];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The next axis in the cyclic order `I → J → K → I`.
    pub fn next(self) -> Axis {
        Axis::ALL[(self.index() + 1) % 3]
    }

    pub fn prev(self) -> Axis {
        Axis::ALL[(self.index() + 2) % 3]
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axis::I => "I",
            Axis::J => "J",
            Axis::K => "K",
        };
        f.write_str(s)
    }
}

/// An adapted basis `(I, J, K)` of the quaternionic bundle at a point,
/// together with the forms derived from it.
#[derive(Clone, Debug)]
pub struct QuatStructure {
    n: usize,
    mats: [DMatrix<f64>; 3],
    kahler: [AltForm; 3],
    omega: AltForm,
}

const STRUCTURE_TOL: f64 = 1e-10;

impl QuatStructure {
    /// Builds the structure from `I` and `J`, with `K = IJ`.
    pub fn new(n: usize, i: DMatrix<f64>, j: DMatrix<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidQuaternionicDimension(n));
        }
        let d = 4 * n;
        for m in [&i, &j] {
            if m.shape() != (d, d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: m.nrows(),
                });
            }
        }
        let k = &i * &j;
        let id = DMatrix::<f64>::identity(d, d);
        let checks = [
            ("I² = −1", (&i * &i + &id).norm()),
            ("J² = −1", (&j * &j + &id).norm()),
            ("IJ = −JI", (&i * &j + &j * &i).norm()),
            ("I orthogonal", (i.transpose() * &i - &id).norm()),
            ("J orthogonal", (j.transpose() * &j - &id).norm()),
        ];
        for (what, r) in checks {
            if !(r <= STRUCTURE_TOL) {
                return Err(Error::NotQuaternionHermitian(format!(
                    "{what} fails with residual {r:.3e}"
                )));
            }
        }
        Ok(Self::assemble(n, [i, j, k]))
    }

    fn assemble(n: usize, mats: [DMatrix<f64>; 3]) -> Self {
        let kahler = [0, 1, 2].map(|a| kahler_form(&mats[a]));
        let mut omega = AltForm::zero(4 * n, 4);
        for w in &kahler {
            omega += &wedge(w, w);
        }
        Self {
            n,
            mats,
            kahler,
            omega,
        }
    }

    /// Left multiplication by `i, j, k` on `H^n` in the ordered basis
    /// `(e_1..e_n, Ie_1..Ie_n, Je_1..Je_n, Ke_1..Ke_n)`.
    pub fn standard(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidQuaternionicDimension(n));
        }
        // (sign, target block) for blocks (1, i, j, k)
        const TABLE: [[(f64, usize); 4]; 3] = [
            [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
            [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
            [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
        ];
        let d = 4 * n;
        let mats = TABLE.map(|row| {
            let mut m = DMatrix::zeros(d, d);
            for (b, &(s, t)) in row.iter().enumerate() {
                for i in 0..n {
                    m[(t * n + i, b * n + i)] = s;
                }
            }
            m
        });
        Ok(Self::assemble(n, mats))
    }

    /// Changes the adapted basis by `q ∈ SO(3)`: `A'_a = Σ_b q[a][b] A_b`.
    pub fn rotate(&self, q: &DMatrix<f64>) -> Result<Self> {
        if q.shape() != (3, 3) {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: q.nrows(),
            });
        }
        let orth = (q.transpose() * q - DMatrix::<f64>::identity(3, 3)).norm();
        let det = q.determinant();
        let residual = orth.max((det - 1.0).abs());
        if !(residual <= STRUCTURE_TOL) {
            return Err(Error::NotSpecialOrthogonal { residual });
        }
        let d = self.dim();
        let mats = [0, 1, 2].map(|a| {
            let mut m = DMatrix::zeros(d, d);
            for b in 0..3 {
                m += &self.mats[b] * q[(a, b)];
            }
            m
        });
        Ok(Self::assemble(self.n, mats))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }

    /// `n − 1`.
    pub fn k1(&self) -> f64 {
        (self.n - 1) as f64
    }

    /// `2n + 1`.
    pub fn k2(&self) -> f64 {
        (2 * self.n + 1) as f64
    }

    pub fn matrix(&self, a: Axis) -> &DMatrix<f64> {
        &self.mats[a.index()]
    }

    /// `ω_A(x, y) = ⟨x, Ay⟩`.
    pub fn kahler(&self, a: Axis) -> &AltForm {
        &self.kahler[a.index()]
    }

    /// `Ω = Σ_A ω_A ∧ ω_A`.
    pub fn omega(&self) -> &AltForm {
        &self.omega
    }

    /// `Ω^n`, a multiple of the volume form.
    pub fn omega_power(&self, k: usize) -> AltForm {
        let mut p = AltForm::scalar(self.dim(), 1.0);
        for _ in 0..k {
            p = wedge(&p, &self.omega);
        }
        p
    }

    /// `i_A b = (A_(1) + … + A_(p)) b`.
    pub fn i_a(&self, a: Axis, b: &AltForm) -> AltForm {
        slot_sum(self.matrix(a), b, -1.0)
    }

    /// `A_(i)` on a general covariant tensor.
    pub fn insert(&self, a: Axis, slot: usize, t: &DenseTensor) -> Result<DenseTensor> {
        t.insert(self.matrix(a), slot)
    }

    /// The action of `A` as an element of `so(4n)` extended to forms:
    /// `(A b)(X_1, …, X_p) = (−1)^p b(AX_1, …, AX_p)`.
    pub fn act(&self, a: Axis, b: &AltForm) -> AltForm {
        let s = if b.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
        pullback(self.matrix(a), b).scaled(s)
    }

    /// The vector `A x`.
    pub fn apply(&self, a: Axis, x: &[f64]) -> Vec<f64> {
        let m = self.matrix(a);
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|k| m[(i, k)] * x[k]).sum())
            .collect()
    }

    /// `A` acting on a 1-form `ξ`: `(Aξ)(x) = −ξ(Ax)`.
    pub fn act_one_form(&self, a: Axis, xi: &[f64]) -> Vec<f64> {
        let m = self.matrix(a);
        (0..self.dim())
            .map(|j| -(0..self.dim()).map(|k| m[(k, j)] * xi[k]).sum::<f64>())
            .collect()
    }

    /// `L(b) = Σ_A Σ_{i<j} A_(i) A_(j) b`.
    pub fn l_map(&self, b: &AltForm) -> AltForm {
        let p = b.degree();
        if p < 2 {
            return AltForm::zero(b.dim(), p);
        }
        let mut out = b.scaled(1.5 * p as f64);
        for a in Axis::ALL {
            let t = self.i_a(a, b);
            out.axpy(0.5, &self.i_a(a, &t));
        }
        out
    }

    /// `A_(1) A_(2)` on a 2-form: `b(AX, AY)`.
    pub fn double_insert2(&self, a: Axis, b: &AltForm) -> AltForm {
        debug_assert_eq!(b.degree(), 2);
        let t = self.i_a(a, b);
        let mut out = self.i_a(a, &t).scaled(0.5);
        out.axpy(1.0, b);
        out
    }

    /// `A_(1)` on the covariant slot of a mixed tensor: `−a(Ax; ·)`.
    pub fn insert_first(&self, a: Axis, t: &MixedForm) -> MixedForm {
        let m = self.matrix(a);
        MixedForm::from_fn(t.dim(), t.degree(), |x| {
            let mut row = AltForm::zero(t.dim(), t.degree());
            for k in 0..t.dim() {
                let c = m[(k, x)];
                if c != 0.0 {
                    row.axpy(-c, t.row(k));
                }
            }
            row
        })
    }

    /// `Σ_A A_(1)(A_(2) + … + A_(p+1)) a` without a membership check.
    pub fn lcal_unchecked(&self, a: &MixedTorsion) -> MixedTorsion {
        let mut out = MixedForm::zero(a.dim(), a.degree());
        for ax in Axis::ALL {
            let inner = a.map_rows(|r| self.i_a(ax, r));
            out.axpy(1.0, &self.insert_first(ax, &inner));
        }
        out
    }
}

fn kahler_form(m: &DMatrix<f64>) -> AltForm {
    let d = m.nrows();
    let b = basis(d, 2);
    let coeffs = b.iter().map(|t| m[(t[0] as usize, t[1] as usize)]).collect();
    AltForm::from_coeffs(d, 2, coeffs).expect("sized by construction")
}

/// `Σ_i s · b(X_1, …, M X_i, …, X_p)`, a derivation of the exterior algebra.
pub fn slot_sum(m: &DMatrix<f64>, b: &AltForm, s: f64) -> AltForm {
    let d = b.dim();
    let p = b.degree();
    let mut out = AltForm::zero(d, p);
    if p == 0 {
        return out;
    }
    let src = b.basis();
    let dst = out.basis();
    let mut idx = vec![0usize; p];
    let coeffs = out.coeffs_mut();
    for (ti, t) in src.iter().enumerate() {
        let c = b.coeffs()[ti];
        if c == 0.0 {
            continue;
        }
        for pos in 0..p {
            let k = t[pos] as usize;
            for j in 0..d {
                let mkj = m[(k, j)];
                if mkj == 0.0 {
                    continue;
                }
                for (q, v) in idx.iter_mut().enumerate() {
                    *v = t[q] as usize;
                }
                idx[pos] = j;
                if let Some(sign) = sort_with_sign(&mut idx) {
                    coeffs[dst.rank(&idx)] += s * sign * mkj * c;
                }
            }
        }
    }
    out
}

/// `b(M X_1, …, M X_p)`.
pub fn pullback(m: &DMatrix<f64>, b: &AltForm) -> AltForm {
    DenseTensor::from_form(b).pullback(m).to_form()
}
