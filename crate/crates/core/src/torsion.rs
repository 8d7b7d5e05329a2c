//! The torsion space `W ⊂ V* ⊗ Λ⁴V*`: its two-form parametrisation, the
//! isomorphism `F`, the `c_A` decomposition, and membership tests.

use nalgebra::DMatrix;

use crate::basis::basis;
use crate::error::{Error, Result};
use crate::exterior::{dot, interior, wedge, AltForm};
use crate::mixed::{MixedForm, MixedTorsion, MixedTwoFormFamily};
use crate::quat::{Axis, QuatStructure};
use crate::sample::{gaussian_form, rng, SeededRng};
use crate::tensor::DenseTensor;

/// Default relative tolerance for membership in `W`.
pub const W_TOL: f64 = 1e-8;

/// Residuals of a membership test.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Membership {
    pub in_space: bool,
    /// `max_x ‖L(a_x) − 2a_x‖ / ‖a‖`.
    pub eigen_residual: f64,
    /// `‖F(F⁻¹(a)) − a‖ / ‖a‖`.
    pub round_trip_residual: f64,
}

impl Membership {
    pub fn residual(&self) -> f64 {
        self.eigen_residual.max(self.round_trip_residual)
    }
}

/// `T c = Σ_A A_(2) A_(3) c`, acting on the form slots row by row.
pub fn fiber_t(q: &QuatStructure, c: &MixedTwoFormFamily) -> MixedTwoFormFamily {
    c.map_rows(|r| {
        let mut out = AltForm::zero(r.dim(), 2);
        for a in Axis::ALL {
            out += &q.double_insert2(a, r);
        }
        out
    })
}

/// Per-row `⟨row, ω_A⟩`, as a covector.
pub fn kahler_trace(q: &QuatStructure, c: &MixedTwoFormFamily, a: Axis) -> Vec<f64> {
    let w = q.kahler(a);
    c.rows().iter().map(|r| dot(r.coeffs(), w.coeffs())).collect()
}

/// Orthogonal projection onto the tensors satisfying
/// `c + Σ_A A_(2)A_(3) c = 0` and `⟨·⌟c, ω_A⟩ = 0`.
pub fn fiber_project(q: &QuatStructure, c: &MixedTwoFormFamily) -> MixedTwoFormFamily {
    let t = fiber_t(q, c);
    let mut out = c.scaled(0.75);
    out.axpy(-0.25, &t);
    let norm = 2.0 * q.n() as f64;
    for a in Axis::ALL {
        let tr = kahler_trace(q, &out, a);
        let w = q.kahler(a);
        for (x, s) in tr.into_iter().enumerate() {
            out.row_mut(x).axpy(-s / norm, w);
        }
    }
    out
}

/// Relative violation of the fiber conditions.
pub fn fiber_residual(q: &QuatStructure, c: &MixedTwoFormFamily) -> f64 {
    let scale = c.norm();
    if scale == 0.0 {
        return 0.0;
    }
    let t = fiber_t(q, c);
    let mut r = (c + &t).norm_sq();
    for a in Axis::ALL {
        r += kahler_trace(q, c, a).iter().map(|s| s * s).sum::<f64>();
    }
    r.sqrt() / scale
}

/// `F(c) = ¼ Σ_A i_A(·⌟c) ∧ ω_A` without the fiber check.
pub fn f_map_unchecked(q: &QuatStructure, c: &MixedTwoFormFamily) -> MixedTorsion {
    omega_lift_rows(q, c).scaled(0.25)
}

/// `F(c)`; fails when `c` leaves the fiber.
pub fn f_map(q: &QuatStructure, c: &MixedTwoFormFamily) -> Result<MixedTorsion> {
    let residual = fiber_residual(q, c);
    if residual > W_TOL {
        return Err(Error::OutsideFiber { residual });
    }
    Ok(f_map_unchecked(q, c))
}

/// Row-wise `Σ_A i_A(c_x) ∧ ω_A` for a family of `p`-forms.
pub fn omega_lift_rows(q: &QuatStructure, c: &MixedForm) -> MixedForm {
    c.map_rows(|r| omega_lift_form(q, r))
}

/// `Σ_A i_A(b) ∧ ω_A`.
pub fn omega_lift_form(q: &QuatStructure, b: &AltForm) -> AltForm {
    let mut out = AltForm::zero(b.dim(), b.degree() + 2);
    for a in Axis::ALL {
        out += &wedge(&q.i_a(a, b), q.kahler(a));
    }
    out
}

/// `b ↦ Σ_A i_A(·⌟b) ∧ ω_A`, a tensor in `V* ⊗ Λ^{p+1}`.
pub fn omega_lift(q: &QuatStructure, b: &AltForm) -> MixedForm {
    let d = b.dim();
    let mut e = vec![0.0; d];
    MixedForm::from_fn(d, b.degree() + 1, |x| {
        e.fill(0.0);
        e[x] = 1.0;
        omega_lift_form(q, &interior(&e, b))
    })
}

/// `{·∧(ξ⌟Ω) − ξ∧(·⌟Ω)}` for a one-form `ξ`.
pub fn xi_bracket(q: &QuatStructure, xi: &[f64]) -> MixedTorsion {
    let d = q.dim();
    let xi_form = AltForm::one_form(xi);
    let xo = interior(xi, q.omega());
    let mut e = vec![0.0; d];
    MixedForm::from_fn(d, 4, |x| {
        e.fill(0.0);
        e[x] = 1.0;
        let mut row = wedge(&AltForm::one_form(&e), &xo);
        row -= &wedge(&xi_form, &interior(&e, q.omega()));
        row
    })
}

/// Rows of the matrix `(y, z) ↦ y∧(z⌟Ω) − z∧(y⌟Ω)` over sorted pairs.
fn pair_brackets(q: &QuatStructure) -> Vec<AltForm> {
    let d = q.dim();
    let pairs = basis(d, 2);
    let hooks: Vec<AltForm> = (0..d)
        .map(|i| q.omega().interior_basis(i).expect("Ω has degree 4"))
        .collect();
    pairs
        .iter()
        .map(|t| {
            let (y, z) = (t[0] as usize, t[1] as usize);
            let mut f = wedge(&AltForm::monomial(d, &[y]), &hooks[z]);
            f -= &wedge(&AltForm::monomial(d, &[z]), &hooks[y]);
            f
        })
        .collect()
}

/// `F⁻¹` via `−8n c(x, y, z) = ⟨x⌟a, y∧(z⌟Ω) − z∧(y⌟Ω)⟩`, unchecked.
pub fn f_inverse_unchecked(q: &QuatStructure, a: &MixedTorsion) -> MixedTwoFormFamily {
    let br = pair_brackets(q);
    let s = -1.0 / (8.0 * q.n() as f64);
    a.map_rows(|row| {
        let coeffs = br.iter().map(|f| s * dot(row.coeffs(), f.coeffs())).collect();
        AltForm::from_coeffs(q.dim(), 2, coeffs).expect("sized by construction")
    })
}

/// `F⁻¹(a)`; fails when `a ∉ W`.
pub fn f_inverse(q: &QuatStructure, a: &MixedTorsion) -> Result<MixedTwoFormFamily> {
    let m = membership(q, a, W_TOL);
    if !m.in_space {
        return Err(Error::NotInW {
            residual: m.residual(),
        });
    }
    Ok(f_inverse_unchecked(q, a))
}

/// Tests `a ∈ W` through the eigenvalue `L = 2` on rows and the `F` round trip.
pub fn membership(q: &QuatStructure, a: &MixedTorsion, tol: f64) -> Membership {
    let scale = a.norm();
    if scale == 0.0 {
        return Membership {
            in_space: true,
            eigen_residual: 0.0,
            round_trip_residual: 0.0,
        };
    }
    let eigen = a
        .rows()
        .iter()
        .map(|r| (&q.l_map(r) - &r.scaled(2.0)).norm())
        .fold(0.0, f64::max)
        / scale;
    let back = f_map_unchecked(q, &f_inverse_unchecked(q, a));
    let rt = (&back - a).norm() / scale;
    Membership {
        in_space: eigen <= tol && rt <= tol,
        eigen_residual: eigen,
        round_trip_residual: rt,
    }
}

pub fn is_in_w(q: &QuatStructure, a: &MixedTorsion, tol: f64) -> bool {
    membership(q, a, tol).in_space
}

pub(crate) fn require_w(q: &QuatStructure, a: &MixedTorsion) -> Result<()> {
    let m = membership(q, a, W_TOL);
    if m.in_space {
        Ok(())
    } else {
        Err(Error::NotInW {
            residual: m.residual(),
        })
    }
}

/// `𝓛(a) = Σ_A A_(1)(A_(2) + … + A_(5)) a`, defined on `W` only.
pub fn lcal_map(q: &QuatStructure, a: &MixedTorsion) -> Result<MixedTorsion> {
    require_w(q, a)?;
    Ok(q.lcal_unchecked(a))
}

/// `c_A` via `−4n c_A(x, y, z) = Σ_r a(x, y, z, e_r, Ae_r)`, unchecked.
pub fn extract_ca_unchecked(q: &QuatStructure, a: &MixedTorsion) -> [MixedTwoFormFamily; 3] {
    let d = q.dim();
    let s = -1.0 / (4.0 * q.n() as f64);
    Axis::ALL.map(|ax| {
        let m = q.matrix(ax);
        a.map_rows(|row| {
            let mut out = AltForm::zero(d, 2);
            for r in 0..d {
                let first = row.interior_basis(r).expect("degree 4");
                let ae: Vec<f64> = (0..d).map(|k| m[(k, r)]).collect();
                out += &interior(&ae, &first);
            }
            out.scaled(s)
        })
    })
}

pub fn extract_ca(q: &QuatStructure, a: &MixedTorsion) -> Result<[MixedTwoFormFamily; 3]> {
    require_w(q, a)?;
    Ok(extract_ca_unchecked(q, a))
}

/// `Σ_A c_A ∧ ω_A` with the covariant slot carried.
pub fn assemble_ca(q: &QuatStructure, c: &[MixedTwoFormFamily; 3]) -> MixedTorsion {
    let mut out = MixedForm::zero(q.dim(), 4);
    for a in Axis::ALL {
        out.axpy(1.0, &c[a.index()].wedge_right(q.kahler(a)));
    }
    out
}

/// `A_(2) B_(3)` on a two-form family: `c(x; AY, BZ)`, no longer alternating.
fn mixed_pair(q: &QuatStructure, c: &MixedTwoFormFamily, a: Axis, b: Axis) -> Vec<DenseTensor> {
    c.rows()
        .iter()
        .map(|r| {
            DenseTensor::from_form(r)
                .apply_slot(q.matrix(a), 0, -1.0)
                .apply_slot(q.matrix(b), 1, -1.0)
        })
        .collect()
}

fn rows_norm(t: &[DenseTensor]) -> f64 {
    t.iter()
        .map(|r| r.data().iter().map(|x| x * x).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

/// Residuals of the three conditions on a triple `c_A` (or `d_A`):
/// `A_(2)A_(3)c_A = −c_A`, the cyclic mixed condition, and the `ω_B` traces.
pub fn triple_conditions(q: &QuatStructure, c: &[MixedTwoFormFamily; 3]) -> [f64; 3] {
    let mut first: f64 = 0.0;
    for a in Axis::ALL {
        let ca = &c[a.index()];
        let r = ca.map_rows(|row| {
            let mut v = q.double_insert2(a, row);
            v += row;
            v
        });
        first = first.max(r.norm());
    }
    let mut cyc: Vec<DenseTensor> = Vec::new();
    for (a, b, k) in [(Axis::I, Axis::J, Axis::K), (Axis::J, Axis::K, Axis::I), (Axis::K, Axis::I, Axis::J)] {
        let t = mixed_pair(q, &c[k.index()], a, b);
        if cyc.is_empty() {
            cyc = t;
        } else {
            for (acc, x) in cyc.iter_mut().zip(&t) {
                acc.axpy(1.0, x);
            }
        }
    }
    let second = rows_norm(&cyc);
    let mut third: f64 = 0.0;
    for a in Axis::ALL {
        for b in Axis::ALL {
            let tr = kahler_trace(q, &c[a.index()], b);
            third = third.max(tr.iter().map(|s| s * s).sum::<f64>().sqrt());
        }
    }
    [first, second, third]
}

/// The projection `c_I = d_I + (1/2n)⟨d_I, ω_J⟩ω_J + (1/2n)⟨d_I, ω_K⟩ω_K`
/// (and cyclically), with `sign` multiplying the correction terms.
pub fn project_triple(
    q: &QuatStructure,
    d: &[MixedTwoFormFamily; 3],
    sign: f64,
) -> [MixedTwoFormFamily; 3] {
    let norm = 2.0 * q.n() as f64;
    Axis::ALL.map(|a| {
        let mut c = d[a.index()].clone();
        for b in [a.next(), a.prev()] {
            let tr = kahler_trace(q, &d[a.index()], b);
            for (x, s) in tr.into_iter().enumerate() {
                c.row_mut(x).axpy(sign * s / norm, q.kahler(b));
            }
        }
        c
    })
}

/// `Σ_A d_A ∧ ω_A` for a triple satisfying the `d_A` conditions.
pub fn from_nabla_omegas(q: &QuatStructure, d: &[MixedTwoFormFamily; 3]) -> Result<MixedTorsion> {
    let scale = d.iter().map(MixedForm::norm).fold(0.0, f64::max).max(1e-300);
    let [cond_i, cond_ii, _] = triple_conditions(q, d);
    let (cond_i, cond_ii) = (cond_i / scale, cond_ii / scale);
    if cond_i > 1e-6 || cond_ii > 1e-6 {
        return Err(Error::NablaOmegaConditions { cond_i, cond_ii });
    }
    Ok(assemble_ca(q, d))
}

/// Gaussian two-form family projected to the fiber.
pub fn random_fiber_element(q: &QuatStructure, g: &mut SeededRng) -> MixedTwoFormFamily {
    let d = q.dim();
    let c = MixedForm::from_fn(d, 2, |_| gaussian_form(g, d, 2));
    fiber_project(q, &c)
}

/// `F(fiber_project(gaussian))`, deterministic per seed.
pub fn random_w_element(q: &QuatStructure, seed: u64) -> MixedTorsion {
    random_w_from(q, &mut rng(seed))
}

pub fn random_w_from(q: &QuatStructure, g: &mut SeededRng) -> MixedTorsion {
    f_map_unchecked(q, &random_fiber_element(q, g))
}

/// `dim W = 4n · 3(2n+1)(n−1)`.
pub fn w_dimension(n: usize) -> usize {
    4 * n * 3 * (2 * n + 1) * (n - 1)
}

/// Numerical rank of a set of flattened tensors.
pub fn sample_rank(samples: &[Vec<f64>], tol: f64) -> usize {
    if samples.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(samples.len(), samples[0].len(), |i, j| samples[i][j]);
    let sv = if m.nrows() <= m.ncols() {
        (&m * m.transpose()).symmetric_eigenvalues()
    } else {
        (m.transpose() * &m).symmetric_eigenvalues()
    };
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * top).count()
}
