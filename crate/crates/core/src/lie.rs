//! Left-invariant almost quaternion-Hermitian structures on metric Lie
//! algebras: Levi-Civita connection, covariant derivatives of forms, the
//! Chevalley–Eilenberg differential and the Nijenhuis tensors.
//!
//! Vectors are expressed in an orthonormal basis `e_0, …, e_{4n−1}` which is
//! also the basis the quaternionic structure acts on.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::mixed::{MixedForm, MixedTorsion};
use crate::quat::{slot_sum, Axis, QuatStructure};
use crate::sample::rng;
use crate::tensor::DenseTensor;
use crate::torsion::from_nabla_omegas;

/// Jacobi residual allowed, relative to `max(1, ‖c‖²)`.
pub const JACOBI_TOL: f64 = 1e-12;

/// A Lie algebra with an orthonormal basis and an adapted quaternionic structure.
#[derive(Clone, Debug)]
pub struct MetricLieAlgebra {
    q: QuatStructure,
    /// `c[(i·d + j)·d + k] = ⟨[e_i, e_j], e_k⟩`.
    c: Vec<f64>,
}

/// One structure constant: `[e_i, e_j]` has `value` along `e_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

impl MetricLieAlgebra {
    /// Builds the algebra from listed brackets. A pair listed in one order
    /// only defines both orders; a pair listed in both orders is replaced by
    /// its antisymmetric part. The Jacobi identity is checked, never repaired.
    pub fn new(q: QuatStructure, brackets: &[Bracket]) -> Result<Self> {
        let d = q.dim();
        let mut raw = vec![0.0; d * d * d];
        for b in brackets {
            let bad = [b.i, b.j, b.k].into_iter().find(|&x| x >= d);
            if let Some(x) = bad {
                return Err(Error::DimensionMismatch { expected: d, got: x + 1 });
            }
            raw[(b.i * d + b.j) * d + b.k] += b.value;
        }
        let mut c = vec![0.0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                for k in 0..d {
                    let (ij, ji) = (raw[(i * d + j) * d + k], raw[(j * d + i) * d + k]);
                    c[(i * d + j) * d + k] = if ij != 0.0 && ji != 0.0 { 0.5 * (ij - ji) } else { ij - ji };
                }
            }
        }
        Self::from_constants(q, c)
    }

    /// From a full table `c[(i·d + j)·d + k]`, which must be antisymmetric.
    pub fn from_constants(q: QuatStructure, c: Vec<f64>) -> Result<Self> {
        let d = q.dim();
        if c.len() != d * d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d * d,
                got: c.len(),
            });
        }
        let g = Self { q, c };
        let r = g.jacobi_residual();
        if r > JACOBI_TOL {
            return Err(Error::Jacobi { residual: r });
        }
        Ok(g)
    }

    pub fn abelian(q: QuatStructure) -> Self {
        let d = q.dim();
        Self {
            q,
            c: vec![0.0; d * d * d],
        }
    }

    pub fn structure(&self) -> &QuatStructure {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn n(&self) -> usize {
        self.q.n()
    }

    /// `⟨[e_i, e_j], e_k⟩`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.c[(i * d + j) * d + k]
    }

    pub fn constants(&self) -> &[f64] {
        &self.c
    }

    /// Nonzero constants with `i < j`.
    pub fn brackets(&self) -> Vec<Bracket> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    let value = self.constant(i, j, k);
                    if value != 0.0 {
                        out.push(Bracket { i, j, k, value });
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d];
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let s = x[i] * y[j];
                if s == 0.0 {
                    continue;
                }
                let base = (i * d + j) * d;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += s * self.c[base + k];
                }
            }
        }
        out
    }

    fn basis_bracket(&self, i: usize, j: usize) -> &[f64] {
        let d = self.dim();
        &self.c[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// `max |[[e_i,e_j],e_k] + cyclic|`, relative to `max(1, ‖c‖²)`.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        let mut e = vec![0.0; d];
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let mut s = vec![0.0; d];
                    for (a, b, cc) in [(i, j, k), (j, k, i), (k, i, j)] {
                        e[cc] = 1.0;
                        let v = self.bracket(self.basis_bracket(a, b), &e);
                        e[cc] = 0.0;
                        for (x, y) in s.iter_mut().zip(&v) {
                            *x += y;
                        }
                    }
                    worst = s.iter().fold(worst, |w, x| w.max(x.abs()));
                }
            }
        }
        let scale = self.c.iter().map(|x| x * x).sum::<f64>().max(1.0);
        worst / scale
    }

    /// The same constants with another adapted structure on the same space.
    pub fn with_structure(&self, q: QuatStructure) -> Result<Self> {
        if q.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: q.dim(),
            });
        }
        Ok(Self { q, c: self.c.clone() })
    }

    /// Rescales every constant.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            q: self.q.clone(),
            c: self.c.iter().map(|x| s * x).collect(),
        }
    }
}

/// `R ⋉_D R^{d−1}`: `[e_0, e_i] = D e_i` for `i ≥ 1`, any `D`.
pub fn semidirect(q: QuatStructure, derivation: &DMatrix<f64>) -> Result<MetricLieAlgebra> {
    let d = q.dim();
    if derivation.shape() != (d - 1, d - 1) {
        return Err(Error::DimensionMismatch {
            expected: d - 1,
            got: derivation.nrows(),
        });
    }
    let mut brackets = Vec::new();
    for i in 1..d {
        for k in 1..d {
            let value = derivation[(k - 1, i - 1)];
            if value != 0.0 {
                brackets.push(Bracket { i: 0, j: i, k, value });
            }
        }
    }
    MetricLieAlgebra::new(q, &brackets)
}

/// Two-step nilpotent: brackets of the first `d − centre` vectors land in the
/// last `centre` ones, with Gaussian constants.
pub fn two_step_nilpotent(q: QuatStructure, centre: usize, seed: u64) -> Result<MetricLieAlgebra> {
    let d = q.dim();
    if centre == 0 || centre >= d {
        return Err(Error::Unsupported(format!("centre of size {centre} in dimension {d}")));
    }
    let mut g = rng(seed);
    let free = d - centre;
    let mut brackets = Vec::new();
    for i in 0..free {
        for j in i + 1..free {
            for k in free..d {
                brackets.push(Bracket {
                    i,
                    j,
                    k,
                    value: g.sample(StandardNormal),
                });
            }
        }
    }
    MetricLieAlgebra::new(q, &brackets)
}

/// `su(2) ⊕ R^{d−3}` with `[e_0,e_1] = e_2` and cyclically.
pub fn su2_plus_abelian(q: QuatStructure) -> Result<MetricLieAlgebra> {
    let b = |i, j, k| Bracket { i, j, k, value: 1.0 };
    MetricLieAlgebra::new(q, &[b(0, 1, 2), b(1, 2, 0), b(2, 0, 1)])
}

/// Random nilpotent algebra: constants supported on `k > max(i, j)`, sampled
/// and then moved onto the Jacobi variety by Gauss–Newton with least-norm steps.
pub fn random_nilpotent(q: QuatStructure, seed: u64) -> Result<MetricLieAlgebra> {
    let d = q.dim();
    let mut g = rng(seed);
    let slots: Vec<(usize, usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).flat_map(move |j| (j + 1..d).map(move |k| (i, j, k))))
        .collect();
    let mut x = DVector::from_fn(slots.len(), |_, _| g.sample::<f64, _>(StandardNormal));
    let table = |x: &DVector<f64>| {
        let mut c = vec![0.0; d * d * d];
        for (s, &(i, j, k)) in slots.iter().enumerate() {
            c[(i * d + j) * d + k] = x[s];
            c[(j * d + i) * d + k] = -x[s];
        }
        c
    };
    for _ in 0..100 {
        let c = table(&x);
        let r = jacobi_vector(d, &c);
        let norm = r.norm();
        let scale = c.iter().map(|v| v * v).sum::<f64>().max(1.0);
        if norm < 1e-3 * JACOBI_TOL * scale {
            break;
        }
        // Jacobi is quadratic in c, so central differences are exact.
        let h = 1e-3;
        let mut jac = DMatrix::zeros(r.len(), slots.len());
        for s in 0..slots.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[s] += h;
            xm[s] -= h;
            let col = (jacobi_vector(d, &table(&xp)) - jacobi_vector(d, &table(&xm))) / (2.0 * h);
            jac.set_column(s, &col);
        }
        let step = jac
            .svd(true, true)
            .solve(&r, 1e-10)
            .map_err(|e| Error::Unsupported(e.to_string()))?;
        x -= step;
    }
    MetricLieAlgebra::from_constants(q, table(&x))
}

fn jacobi_vector(d: usize, c: &[f64]) -> DVector<f64> {
    let br = |i: usize, j: usize, k: usize| c[(i * d + j) * d + k];
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                for m in 0..d {
                    let mut s = 0.0;
                    for (a, b, cc) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for l in 0..d {
                            s += br(a, b, l) * br(l, cc, m);
                        }
                    }
                    out.push(s);
                }
            }
        }
    }
    DVector::from_vec(out)
}

/// Levi-Civita connection coefficients `Γ[x][y][z] = ⟨∇_{e_x} e_y, e_z⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<f64>,
}

impl Connection {
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        let d = self.dim;
        self.gamma[(x * d + y) * d + z]
    }

    /// The endomorphism `∇_{e_x}`: column `y` holds `∇_{e_x} e_y`.
    pub fn matrix(&self, x: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |z, y| self.get(x, y, z))
    }

    /// `max |⟨∇_x y, z⟩ + ⟨y, ∇_x z⟩|`.
    pub fn metric_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    worst = worst.max((self.get(x, y, z) + self.get(x, z, y)).abs());
                }
            }
        }
        worst
    }

    /// `max |∇_x y − ∇_y x − [x, y]|` against the bracket table.
    pub fn torsion_residual(&self, g: &MetricLieAlgebra) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let t = self.get(x, y, z) - self.get(y, x, z) - g.constant(x, y, z);
                    worst = worst.max(t.abs());
                }
            }
        }
        worst
    }
}

/// `2⟨∇_x y, z⟩ = ⟨[x,y],z⟩ − ⟨[y,z],x⟩ + ⟨[z,x],y⟩`.
pub fn koszul(g: &MetricLieAlgebra) -> Connection {
    let d = g.dim();
    let mut gamma = vec![0.0; d * d * d];
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                gamma[(x * d + y) * d + z] =
                    0.5 * (g.constant(x, y, z) - g.constant(y, z, x) + g.constant(z, x, y));
            }
        }
    }
    Connection { dim: d, gamma }
}

/// `(∇_x ω)(y_1, …) = −Σ_i ω(…, ∇_x y_i, …)`, rows indexed by `x`.
pub fn nabla_form(conn: &Connection, omega: &AltForm) -> MixedForm {
    MixedForm::from_fn(conn.dim, omega.degree(), |x| slot_sum(&conn.matrix(x), omega, -1.0))
}

/// `d e^k = −Σ_{i<j} c^k_{ij} e^i ∧ e^j`.
pub fn ce_d_one_forms(g: &MetricLieAlgebra) -> Vec<AltForm> {
    let d = g.dim();
    (0..d)
        .map(|k| {
            let mut f = AltForm::zero(d, 2);
            for i in 0..d {
                for j in i + 1..d {
                    let v = g.constant(i, j, k);
                    if v != 0.0 {
                        f.axpy(-v, &AltForm::monomial(d, &[i, j]));
                    }
                }
            }
            f
        })
        .collect()
}

/// Chevalley–Eilenberg differential, extended from `d e^k` as an antiderivation.
pub fn ce_d(g: &MetricLieAlgebra, b: &AltForm) -> AltForm {
    let d = g.dim();
    let mut out = AltForm::zero(d, b.degree() + 1);
    if b.degree() == 0 {
        return out;
    }
    for (k, de) in ce_d_one_forms(g).iter().enumerate() {
        if de.is_zero() {
            continue;
        }
        let hook = b.interior_basis(k).expect("degree ≥ 1");
        out += &de.wedge(&hook).expect("same dimension");
    }
    out
}

/// `N(X, Y, Z) = ⟨X, N_A(Y, Z)⟩` with
/// `N_A(Y, Z) = [Y,Z] + A[AY,Z] + A[Y,AZ] − [AY,AZ]`.
pub fn nijenhuis(g: &MetricLieAlgebra, a: Axis) -> DenseTensor {
    let d = g.dim();
    let q = g.structure();
    let m = q.matrix(a);
    let mut t = DenseTensor::zero(d, 3);
    let mut ey = vec![0.0; d];
    let mut ez = vec![0.0; d];
    for y in 0..d {
        ey[y] = 1.0;
        let ay = q.apply(a, &ey);
        for z in 0..d {
            ez[z] = 1.0;
            let az = q.apply(a, &ez);
            let mut v = g.bracket(&ey, &ez);
            let mixed: Vec<f64> = g
                .bracket(&ay, &ez)
                .iter()
                .zip(g.bracket(&ey, &az))
                .map(|(p, r)| p + r)
                .collect();
            let amixed = m * DVector::from_vec(mixed);
            for (x, w) in g.bracket(&ay, &az).iter().enumerate() {
                v[x] += amixed[x] - w;
            }
            for (x, vx) in v.iter().enumerate() {
                t.set(&[x, y, z], *vx);
            }
            ez[z] = 0.0;
        }
        ey[y] = 0.0;
    }
    t
}

/// `Σ_i N(e_i, e_i, ·)`.
pub fn nijenhuis_trace(g: &MetricLieAlgebra, a: Axis) -> Vec<f64> {
    let d = g.dim();
    let t = nijenhuis(g, a);
    (0..d).map(|z| (0..d).map(|i| t.get(&[i, i, z])).sum()).collect()
}

fn mixed_to_dense(m: &MixedForm) -> DenseTensor {
    let d = m.dim();
    let p = m.degree();
    let mut data = Vec::with_capacity(d.pow(p as u32 + 1));
    for row in m.rows() {
        data.extend_from_slice(DenseTensor::from_form(row).data());
    }
    DenseTensor::from_data(d, p + 1, data).expect("sized by construction")
}

/// Everything the left-invariant structure determines.
#[derive(Clone, Debug)]
pub struct LieGeometry {
    pub connection: Connection,
    /// `∇ω_A`.
    pub nabla_kahler: [MixedForm; 3],
    /// `dω_A`.
    pub d_kahler: [AltForm; 3],
    /// `∇Ω` by the product rule on `Ω` itself.
    pub nabla_omega: MixedTorsion,
    /// `dΩ` from the Chevalley–Eilenberg differential.
    pub d_omega: AltForm,
}

impl LieGeometry {
    pub fn new(g: &MetricLieAlgebra) -> Self {
        let q = g.structure();
        let connection = koszul(g);
        let nabla_kahler = Axis::ALL.map(|a| nabla_form(&connection, q.kahler(a)));
        let d_kahler = Axis::ALL.map(|a| ce_d(g, q.kahler(a)));
        let nabla_omega = nabla_form(&connection, q.omega());
        let d_omega = ce_d(g, q.omega());
        Self {
            connection,
            nabla_kahler,
            d_kahler,
            nabla_omega,
            d_omega,
        }
    }

    /// `∇Ω` assembled from `d_A = 2∇ω_A`.
    pub fn nabla_omega_from_kahler(&self, q: &QuatStructure) -> Result<MixedTorsion> {
        let d = self.nabla_kahler.clone().map(|m| m.scaled(2.0));
        from_nabla_omegas(q, &d)
    }

    /// `d*ω_A = −C₁₂(∇ω_A)`.
    pub fn dstar_kahler(&self, a: Axis) -> Vec<f64> {
        self.nabla_kahler[a.index()].contract12().into_coeffs()
    }
}

/// `‖2∇ω_A − dω_A + A_(2)A_(3)dω_A + A_(2)N_A‖ / ‖∇ω_A‖`.
pub fn gray_residual(g: &MetricLieAlgebra, geo: &LieGeometry, a: Axis) -> f64 {
    let m = g.structure().matrix(a);
    let mut t = mixed_to_dense(&geo.nabla_kahler[a.index()]).scaled(2.0);
    let dw = DenseTensor::from_form(&geo.d_kahler[a.index()]);
    t.axpy(-1.0, &dw);
    let twisted = dw.insert(m, 2).and_then(|x| x.insert(m, 3)).expect("rank 3");
    t.axpy(1.0, &twisted);
    t.axpy(1.0, &nijenhuis(g, a).insert(m, 2).expect("rank 3"));
    let scale = geo.nabla_kahler[a.index()].norm();
    t.norm() / if scale > 1e-300 { scale } else { 1.0 }
}

/// The one-form `X ↦ ⟨(M X) ⌟ φ, ω⟩` for a 3-form `φ`.
pub fn kahler_pairing(m: &DMatrix<f64>, phi: &AltForm, omega: &AltForm) -> Vec<f64> {
    let d = phi.dim();
    (0..d)
        .map(|x| {
            let v: Vec<f64> = m.column(x).iter().copied().collect();
            phi.interior(&v)
                .and_then(|h| h.inner(omega))
                .expect("dimensions agree")
        })
        .collect()
}

/// `‖A d*ω_A + ⟨·⌟dω_A, ω_A⟩‖ / ‖d*ω_A‖`.
pub fn dstar_kahler_residual(g: &MetricLieAlgebra, geo: &LieGeometry, a: Axis) -> f64 {
    let q = g.structure();
    let d = g.dim();
    let dstar = geo.dstar_kahler(a);
    let lhs = q.act_one_form(a, &dstar);
    let id = DMatrix::identity(d, d);
    let rhs = kahler_pairing(&id, &geo.d_kahler[a.index()], q.kahler(a));
    let r: f64 = lhs.iter().zip(&rhs).map(|(x, y)| (x + y) * (x + y)).sum::<f64>().sqrt();
    let s = dstar.iter().map(|x| x * x).sum::<f64>().sqrt();
    r / if s > 1e-300 { s } else { 1.0 }
}

/// `d*Ω` obtained along every available route.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodifferentialRoutes {
    /// `−C₁₂(∇Ω)`.
    pub contraction: Vec<f64>,
    /// `−⋆d⋆Ω` with the Chevalley–Eilenberg `d`.
    pub hodge: Vec<f64>,
    /// `2Σ_A (d*ω_A ∧ ω_A − A dω_A)`.
    pub kahler_split: Vec<f64>,
    /// `−2Σ_A ⟨A·⌟dω_A, ω_A⟩ ∧ ω_A − 2Σ_A A dω_A`.
    pub nijenhuis_route: Vec<f64>,
    /// `⋆(Ω^{n−2} ∧ dΩ)` times the coefficient as commonly quoted, without `‖Ω‖²`.
    pub quoted_from_d_omega: Vec<f64>,
    /// The same with the `‖Ω‖²` factor restored.
    pub from_d_omega: Vec<f64>,
}

/// Relative distance between two coefficient vectors.
pub fn rel_dist(a: &[f64], b: &[f64]) -> f64 {
    let n = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let s = n(a).max(n(b));
    if s < 1e-13 {
        n(&diff)
    } else {
        n(&diff) / s
    }
}

impl CodifferentialRoutes {
    pub fn new(g: &MetricLieAlgebra, geo: &LieGeometry) -> Self {
        let q = g.structure();
        let contraction = geo.nabla_omega.contract12().into_coeffs();
        let hodge = ce_d(g, &q.omega().hodge()).hodge().scaled(-1.0).into_coeffs();
        let mut split = AltForm::zero(g.dim(), 3);
        let mut nij = AltForm::zero(g.dim(), 3);
        for a in Axis::ALL {
            let w = q.kahler(a);
            let dw = &geo.d_kahler[a.index()];
            let ad = q.act(a, dw);
            let dstar = AltForm::one_form(&geo.dstar_kahler(a));
            split += &dstar.wedge(w).expect("dims").scaled(2.0);
            split.axpy(-2.0, &ad);
            let pairing = AltForm::one_form(&kahler_pairing(q.matrix(a), dw, w));
            nij.axpy(-2.0, &pairing.wedge(w).expect("dims"));
            nij.axpy(-2.0, &ad);
        }
        let n = q.n();
        let wedge = q.omega_power(n - 2).wedge(&geo.d_omega).expect("dims").hodge();
        let quoted = wedge.scaled(crate::classifier::dstar_from_d_omega_coefficient(n));
        let restored = quoted.scaled(q.omega().norm_sq());
        Self {
            contraction,
            hodge,
            kahler_split: split.into_coeffs(),
            nijenhuis_route: nij.into_coeffs(),
            quoted_from_d_omega: quoted.into_coeffs(),
            from_d_omega: restored.into_coeffs(),
        }
    }

    /// Named routes in a fixed order.
    pub fn named(&self) -> [(&'static str, &[f64]); 6] {
        [
            ("contraction", &self.contraction),
            ("hodge", &self.hodge),
            ("kahler_split", &self.kahler_split),
            ("nijenhuis_route", &self.nijenhuis_route),
            ("quoted_from_d_omega", &self.quoted_from_d_omega),
            ("from_d_omega", &self.from_d_omega),
        ]
    }

    /// Relative distance of every route from the contraction route.
    pub fn residuals(&self) -> Vec<(&'static str, f64)> {
        self.named()
            .iter()
            .skip(1)
            .map(|(name, v)| (*name, rel_dist(&self.contraction, v)))
            .collect()
    }

    /// Every pairwise relative distance among `routes`.
    pub fn pairwise(&self, routes: &[&str]) -> Vec<(String, String, f64)> {
        let named = self.named();
        let pick: Vec<_> = named.iter().filter(|(n, _)| routes.contains(n)).collect();
        let mut out = Vec::new();
        for (i, (a, va)) in pick.iter().enumerate() {
            for (b, vb) in &pick[i + 1..] {
                out.push((a.to_string(), b.to_string(), rel_dist(va, vb)));
            }
        }
        out
    }

    /// Contraction, Hodge and the ω_A route must agree to `tol`.
    pub fn check_three_way(&self, tol: f64) -> Result<()> {
        let pairs = self.pairwise(&["contraction", "hodge", "nijenhuis_route"]);
        if pairs.iter().all(|(_, _, r)| *r <= tol) {
            return Ok(());
        }
        let listing = self
            .pairwise(&["contraction", "hodge", "kahler_split", "nijenhuis_route", "quoted_from_d_omega", "from_d_omega"])
            .iter()
            .map(|(a, b, r)| format!("{a}/{b}: {r:.3e}"))
            .collect::<Vec<_>>()
            .join(", ");
        Err(Error::CodifferentialDisagreement(listing))
    }
}

/// Both readings of the identity relating `⋆(⋆dΩ ∧ ω_A ∧ ω_A)` to the
/// Kähler forms: with `dω_A`, and with `d*ω_A` read as `X ↦ 2 d*ω_A(AX)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KahlerSquareReadings {
    /// `‖⋆(⋆dΩ∧ω_A∧ω_A) − 2⟨A·⌟dω_A, ω_A⟩‖`, relative, per axis.
    pub with_d: [f64; 3],
    /// `‖⋆(⋆dΩ∧ω_A∧ω_A) − 2 d*ω_A(A·)‖`, relative, per axis.
    pub with_dstar: [f64; 3],
    /// Least-squares `λ` with `⋆(⋆dΩ∧ω_A∧ω_A) ≈ λ⟨A·⌟dω_A, ω_A⟩`, and its residual.
    pub fitted_d: [(f64, f64); 3],
}

pub fn kahler_square_readings(g: &MetricLieAlgebra, geo: &LieGeometry) -> KahlerSquareReadings {
    let q = g.structure();
    let star = geo.d_omega.hodge();
    let mut with_d = [0.0; 3];
    let mut with_dstar = [0.0; 3];
    let mut fitted_d = [(0.0, 0.0); 3];
    for a in Axis::ALL {
        let w = q.kahler(a);
        let lhs = star
            .wedge(w)
            .and_then(|x| x.wedge(w))
            .expect("dims")
            .hodge()
            .into_coeffs();
        let pairing = kahler_pairing(q.matrix(a), &geo.d_kahler[a.index()], w);
        let by_d: Vec<f64> = pairing.iter().map(|x| 2.0 * x).collect();
        let dstar = geo.dstar_kahler(a);
        let m = q.matrix(a);
        let by_dstar: Vec<f64> = (0..g.dim())
            .map(|x| 2.0 * (0..g.dim()).map(|k| m[(k, x)] * dstar[k]).sum::<f64>())
            .collect();
        with_d[a.index()] = rel_dist(&lhs, &by_d);
        with_dstar[a.index()] = rel_dist(&lhs, &by_dstar);
        let pp: f64 = pairing.iter().map(|x| x * x).sum();
        let lambda = if pp > 1e-300 {
            lhs.iter().zip(&pairing).map(|(x, y)| x * y).sum::<f64>() / pp
        } else {
            0.0
        };
        let fit: Vec<f64> = pairing.iter().map(|x| lambda * x).collect();
        fitted_d[a.index()] = (lambda, rel_dist(&lhs, &fit));
    }
    KahlerSquareReadings {
        with_d,
        with_dstar,
        fitted_d,
    }
}

/// A sparse random algebra drawn from one of several families, with about
/// `terms` constants from `{±1, ±2}`: `R ⋉_D R^{d−1}` with `D` sparse,
/// diagonal, or a multiple of the identity plus a sparse part; two-step
/// nilpotent; a product over quaternionic lines; or the quaternionic
/// Heisenberg algebra.
pub fn sparse_random(q: QuatStructure, terms: usize, seed: u64) -> Result<MetricLieAlgebra> {
    let d = q.dim();
    let mut g = rng(seed);
    let value = |g: &mut crate::sample::SeededRng| [-2.0, -1.0, 1.0, 2.0][g.random_range(0..4)];
    let sparse = |g: &mut crate::sample::SeededRng, der: &mut DMatrix<f64>| {
        for _ in 0..terms {
            let (r, c) = (g.random_range(0..d - 1), g.random_range(0..d - 1));
            der[(r, c)] = value(g);
        }
    };
    match g.random_range(0..6) {
        0 => {
            let mut der = DMatrix::zeros(d - 1, d - 1);
            sparse(&mut g, &mut der);
            semidirect(q, &der)
        }
        1 => {
            let der = DMatrix::from_fn(d - 1, d - 1, |i, j| if i == j { (seed as usize + 3 * i) as f64 % 4.0 - 1.0 } else { 0.0 });
            semidirect(q, &der)
        }
        2 => {
            let mut der = DMatrix::identity(d - 1, d - 1) * value(&mut g);
            sparse(&mut g, &mut der);
            semidirect(q, &der)
        }
        3 => line_product(q, terms, seed),
        4 => quaternionic_heisenberg(q),
        _ => {
            let centre = g.random_range(1..=d / 2);
            let free = d - centre;
            let mut brackets = Vec::new();
            for _ in 0..terms {
                let i = g.random_range(0..free);
                let j = g.random_range(0..free);
                if i == j {
                    continue;
                }
                brackets.push(Bracket { i, j, k: g.random_range(free..d), value: value(&mut g) });
            }
            MetricLieAlgebra::new(q, &brackets)
        }
    }
}

/// Quaternionic Heisenberg algebra of dimension `4(n−1) + 3`, plus `R`:
/// `[x, y] = Σ_A ω_A(x, y) z_A` for `x, y` on the first `n − 1` quaternionic
/// lines, with `z_I, z_J, z_K` the imaginary directions of the last line.
pub fn quaternionic_heisenberg(q: QuatStructure) -> Result<MetricLieAlgebra> {
    let n = q.n();
    let last = n - 1;
    let horizontal: Vec<usize> = (0..4).flat_map(|b| (0..last).map(move |l| b * n + l)).collect();
    let mut brackets = Vec::new();
    for a in Axis::ALL {
        let z = (a.index() + 1) * n + last;
        let w = q.kahler(a);
        for (s, &x) in horizontal.iter().enumerate() {
            for &y in &horizontal[s + 1..] {
                let v = w.get(&[x, y]);
                if v != 0.0 {
                    brackets.push(Bracket { i: x, j: y, k: z, value: v });
                }
            }
        }
    }
    MetricLieAlgebra::new(q, &brackets)
}

/// A direct sum of four-dimensional algebras, one on each quaternionic line
/// `{e_l, e_{n+l}, e_{2n+l}, e_{3n+l}}`: abelian, `su(2) ⊕ R`, or `R ⋉_D R³`
/// with a sparse `D` of `terms` entries.
pub fn line_product(q: QuatStructure, terms: usize, seed: u64) -> Result<MetricLieAlgebra> {
    let n = q.n();
    let mut g = rng(seed ^ 0x5eed);
    let mut brackets = Vec::new();
    for l in 0..n {
        let at = |b: usize| b * n + l;
        let lead = g.random_range(0..4);
        let rest: Vec<usize> = (0..4).filter(|&b| b != lead).collect();
        match g.random_range(0..3) {
            0 => {}
            1 => {
                for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                    brackets.push(Bracket { i: at(rest[x]), j: at(rest[y]), k: at(rest[z]), value: 1.0 });
                }
            }
            _ => {
                for _ in 0..terms {
                    let (r, c) = (g.random_range(0..3), g.random_range(0..3));
                    let v = [-2.0, -1.0, 1.0, 2.0][g.random_range(0..4)];
                    brackets.push(Bracket { i: at(lead), j: at(rest[c]), k: at(rest[r]), value: v });
                }
            }
        }
    }
    // Repeated positions add up; rebuild from the summed table.
    let d = q.dim();
    let mut table = vec![0.0; d * d * d];
    for b in &brackets {
        table[(b.i * d + b.j) * d + b.k] += b.value;
        table[(b.j * d + b.i) * d + b.k] -= b.value;
    }
    MetricLieAlgebra::from_constants(q, table)
}

/// Runs [`sparse_random`] over `seeds` and keeps, per class reached, the
/// algebra with the fewest brackets.
pub fn search_reachable(
    q: &QuatStructure,
    seeds: std::ops::Range<u64>,
) -> std::collections::BTreeMap<u8, MetricLieAlgebra> {
    let mut found: std::collections::BTreeMap<u8, MetricLieAlgebra> = Default::default();
    for seed in seeds {
        let terms = 1 + (seed % 4) as usize;
        let Ok(g) = sparse_random(q.clone(), terms, seed) else {
            continue;
        };
        let geo = LieGeometry::new(&g);
        let class = crate::classifier::classify_unchecked(q, &geo.nabla_omega, crate::classifier::CLASS_TOL).class;
        let better = found
            .get(&class.bits())
            .is_none_or(|old| g.brackets().len() < old.brackets().len());
        if better {
            found.insert(class.bits(), g);
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(n: usize) -> Vec<MetricLieAlgebra> {
        let q = QuatStructure::standard(n).unwrap();
        let d = q.dim();
        let mut g = rng(40);
        let der = DMatrix::from_fn(d - 1, d - 1, |_, _| g.sample::<f64, _>(StandardNormal));
        vec![
            two_step_nilpotent(q.clone(), 3, 1).unwrap(),
            su2_plus_abelian(q.clone()).unwrap(),
            semidirect(q.clone(), &der).unwrap(),
            random_nilpotent(q, 2).unwrap(),
        ]
    }

    #[test]
    fn abelian_is_flat() {
        let g = MetricLieAlgebra::abelian(QuatStructure::standard(2).unwrap());
        let geo = LieGeometry::new(&g);
        assert_eq!(geo.nabla_omega.norm(), 0.0);
        assert_eq!(geo.d_omega.norm(), 0.0);
        assert_eq!(nijenhuis(&g, Axis::I).norm(), 0.0);
    }

    #[test]
    fn connection_is_levi_civita() {
        for g in samples(2) {
            let c = koszul(&g);
            assert!(c.metric_residual() < 1e-12);
            assert!(c.torsion_residual(&g) < 1e-12);
        }
    }

    #[test]
    fn ce_d_squares_to_zero_and_matches_alternation() {
        for g in samples(2) {
            let geo = LieGeometry::new(&g);
            assert!(ce_d(&g, &geo.d_omega).norm() < 1e-10 * (1.0 + geo.d_omega.norm()));
            assert!(geo.d_omega.rel_dist(&geo.nabla_omega.alternate()) < 1e-12);
            for a in Axis::ALL {
                let dw = &geo.d_kahler[a.index()];
                assert!(dw.rel_dist(&geo.nabla_kahler[a.index()].alternate()) < 1e-12);
            }
        }
    }

    #[test]
    fn product_rule_matches_kahler_assembly() {
        for g in samples(2) {
            let geo = LieGeometry::new(&g);
            let assembled = geo.nabla_omega_from_kahler(g.structure()).unwrap();
            assert!(assembled.rel_dist(&geo.nabla_omega) < 1e-12);
        }
    }

    #[test]
    fn nijenhuis_and_gray() {
        for g in samples(2) {
            let geo = LieGeometry::new(&g);
            for a in Axis::ALL {
                let tr = nijenhuis_trace(&g, a);
                assert!(tr.iter().all(|x| x.abs() < 1e-12), "{tr:?}");
                assert!(gray_residual(&g, &geo, a) < 1e-10);
                assert!(dstar_kahler_residual(&g, &geo, a) < 1e-10);
            }
        }
    }

    #[test]
    fn codifferential_routes_agree() {
        for g in samples(2) {
            let geo = LieGeometry::new(&g);
            let routes = CodifferentialRoutes::new(&g, &geo);
            for (name, r) in routes.residuals() {
                println!("{name}: {r:e}");
            }
            routes.check_three_way(1e-9).unwrap();
        }
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        let q = QuatStructure::standard(2).unwrap();
        let b = |i, j, k| Bracket { i, j, k, value: 1.0 };
        let err = MetricLieAlgebra::new(q, &[b(0, 1, 2), b(2, 3, 0)]).unwrap_err();
        assert!(matches!(err, Error::Jacobi { .. }));
    }
}
