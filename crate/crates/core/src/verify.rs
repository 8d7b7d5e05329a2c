//! The identity suite behind `aqh verify`.
//!
//! Every check carries a residual and a tolerance. `Identity` checks must
//! hold; `Discrepancy` checks evaluate a constant as commonly quoted
//! next to the value measured here, and never count as failures.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::classifier::{
    classify_unchecked, dstar_from_d_omega, dstar_from_d_omega_coefficient, random_class_member, xi_from_d_omega,
    xi_triple_from_dstar, ClassLabel, DerivedFromDOmega, CLASS_TOL,
};
use crate::components::{
    component_unchecked, decompose_unchecked, dstar_singular_values_on_complement, profile_unchecked,
    three_form_matrix, trace_on_w, ComponentLabel,
};
use crate::error::{Error, Result};
use crate::exterior::{orientation, wedge, AltForm};
use crate::lie::{
    kahler_square_readings, random_nilpotent, semidirect, su2_plus_abelian, two_step_nilpotent,
    CodifferentialRoutes, LieGeometry, MetricLieAlgebra,
};
use crate::mixed::{MixedForm, MixedTorsion};
use crate::quat::{Axis, QuatStructure};
use crate::report::classify_algebra;
use crate::sample::{gaussian_form, gaussian_vec, random_rotation, rng, SeededRng};
use crate::tables::{complement, table2, table2_residual, table2_residual_d_omega, table3, table3_residual};
use crate::tensor::DenseTensor;
use crate::threeform::{dstar, hat_dstar, proj3, xi, xi_triple, Projector3};
use crate::torsion::{
    assemble_ca, extract_ca_unchecked, f_inverse_unchecked, f_map_unchecked, omega_lift, random_fiber_element,
    random_w_from, sample_rank, w_dimension,
};

/// Default tolerance for relative residuals.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Identity,
    Discrepancy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub kind: CheckKind,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn identity_failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Identity && !c.passed)
            .collect()
    }

    pub fn discrepancies(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.kind == CheckKind::Discrepancy).collect()
    }

    pub fn passed(&self) -> bool {
        self.identity_failures().is_empty()
    }

    /// Replaces every nonzero tolerance by `tol` and re-evaluates; exact
    /// counts keep their zero tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        for c in &mut self.checks {
            if c.tol > 0.0 {
                c.tol = tol;
                c.passed = c.residual <= tol;
            }
        }
        self
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("verify n={} seed={}\n", self.n, self.seed);
        for c in &self.checks {
            let status = match (c.kind, c.passed) {
                (CheckKind::Identity, true) => "PASS",
                (CheckKind::Identity, false) => "FAIL",
                (CheckKind::Discrepancy, true) => "AGREE",
                (CheckKind::Discrepancy, false) => "DIFFER",
            };
            out.push_str(&format!("{status:<6} {:<12} {:<56} {:.3e} (tol {:.0e})", c.group, c.name, c.residual, c.tol));
            if let Some(note) = &c.note {
                out.push_str(&format!("  [{note}]"));
            }
            out.push('\n');
        }
        let fails = self.identity_failures().len();
        let diffs = self.discrepancies().iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} identity failures, {} quoted-constant discrepancies\n",
            self.checks.len(),
            fails,
            diffs
        ));
        out
    }
}

struct Suite {
    group: &'static str,
    checks: Vec<Check>,
}

impl Suite {
    fn new(group: &'static str) -> Self {
        Self { group, checks: Vec::new() }
    }

    fn push(&mut self, kind: CheckKind, name: &str, residual: f64, tol: f64, note: Option<String>) {
        self.checks.push(Check {
            group: self.group.to_string(),
            name: name.to_string(),
            kind,
            residual,
            tol,
            passed: residual <= tol,
            note,
        });
    }

    fn identity(&mut self, name: &str, residual: f64, tol: f64) {
        self.push(CheckKind::Identity, name, residual, tol, None);
    }

    fn identity_note(&mut self, name: &str, residual: f64, tol: f64, note: String) {
        self.push(CheckKind::Identity, name, residual, tol, Some(note));
    }

    fn discrepancy(&mut self, name: &str, residual: f64, tol: f64, note: String) {
        self.push(CheckKind::Discrepancy, name, residual, tol, Some(note));
    }
}

fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn vdiff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `‖got − want‖ / ‖want‖`, absolute when `want` vanishes.
fn rel(got: &[f64], want: &[f64]) -> f64 {
    let s = vnorm(want);
    vdiff(got, want) / if s > 0.0 { s } else { 1.0 }
}

fn rel_form(got: &AltForm, want: &AltForm) -> f64 {
    rel(got.coeffs(), want.coeffs())
}

fn rel_mixed(got: &MixedForm, want: &MixedForm) -> f64 {
    rel(&got.to_flat(), &want.to_flat())
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Least-squares `c` in `got ≈ c · want`.
fn fit_scalar(got: &[f64], want: &[f64]) -> f64 {
    let num: f64 = got.iter().zip(want).map(|(a, b)| a * b).sum();
    num / want.iter().map(|b| b * b).sum::<f64>()
}

const TRIALS: usize = 20;

/// Runs every check for `n ∈ {2, 3}`.
pub fn run(n: usize, seed: u64) -> Result<VerifyReport> {
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(format!("verify runs at n = 2 or n = 3, got {n}")));
    }
    let q = QuatStructure::standard(n)?;
    let mut checks = Vec::new();
    checks.extend(exterior_checks(&q, seed));
    checks.extend(quat_checks(&q, seed));
    checks.extend(torsion_checks(&q, seed));
    checks.extend(threeform_checks(&q, seed));
    checks.extend(projector_checks(&q, seed));
    checks.extend(classifier_checks(&q, seed)?);
    checks.extend(hodge_constant_checks(&q, seed));
    checks.extend(lie_checks(&q, seed)?);
    Ok(VerifyReport { n, seed, checks })
}

pub fn exterior_checks(q: &QuatStructure, seed: u64) -> Vec<Check> {
    let mut s = Suite::new("exterior");
    let d = q.dim();
    let mut g = rng(seed);
    let vol = AltForm::volume(d);

    let mut worst: f64 = 0.0;
    for p in 0..=d {
        let psi = gaussian_form(&mut g, d, p);
        let phi = gaussian_form(&mut g, d, p);
        let lhs = wedge(&psi, &phi.hodge());
        let want = vol.scaled(psi.inner(&phi).expect("same degree"));
        worst = worst.max(vdiff(lhs.coeffs(), want.coeffs()) / (psi.norm() * phi.norm()));
    }
    s.identity("ψ∧⋆φ = ⟨ψ,φ⟩Vol, every degree", worst, VERIFY_TOL);

    let mut worst: f64 = 0.0;
    for p in 0..=d {
        let a = gaussian_form(&mut g, d, p);
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        worst = worst.max(rel_form(&a.hodge().hodge(), &a.scaled(sign)));
    }
    s.identity("⋆⋆ = (−1)^p", worst, VERIFY_TOL);

    let mut worst: f64 = 0.0;
    for (p1, p2, p3) in [(1, 1, 1), (1, 2, 3), (2, 2, 2), (3, 1, 4), (2, 3, 3)] {
        if p1 + p2 + p3 > d {
            continue;
        }
        let a = gaussian_form(&mut g, d, p1);
        let b = gaussian_form(&mut g, d, p2);
        let c = gaussian_form(&mut g, d, p3);
        let left = wedge(&wedge(&a, &b), &c);
        let right = wedge(&a, &wedge(&b, &c));
        worst = worst.max(rel_form(&left, &right));
    }
    s.identity("wedge associativity", worst, VERIFY_TOL);

    let mut worst: f64 = 0.0;
    for p in 1..=5 {
        let x = gaussian_vec(&mut g, d);
        let a = gaussian_form(&mut g, d, p);
        let b = gaussian_form(&mut g, d, p - 1);
        let lhs = a.interior(&x).expect("dimension").inner(&b).expect("degree");
        let rhs = a.inner(&wedge(&AltForm::one_form(&x), &b)).expect("degree");
        worst = worst.max((lhs - rhs).abs() / (vnorm(&x) * a.norm() * b.norm()));
    }
    s.identity("⟨x⌟a, b⟩ = ⟨a, x♭∧b⟩", worst, VERIFY_TOL);

    let power = q.omega_power(q.n());
    let raw = power.coeffs()[0];
    let k = factorial(2 * q.n() + 1);
    s.identity_note(
        "|Ωⁿ| on the ordered quaternionic basis = (2n+1)!",
        (raw.abs() - k).abs() / k,
        VERIFY_TOL,
        format!("Ωⁿ = {raw}·e^(0..4n)"),
    );
    let quoted = orientation(d) * k;
    s.discrepancy(
        "Ωⁿ = (−1)^(n+1)(2n+1)! on the ordered basis",
        (raw - quoted).abs() / k,
        VERIFY_TOL,
        format!("quoted {quoted}, measured {raw}"),
    );
    s.identity(
        "Vol = ((−1)^(n+1)/(2n+1)!) Ωⁿ",
        rel_form(&power.scaled(orientation(d) / k), &vol),
        VERIFY_TOL,
    );
    s.checks
}

fn random_rotations(g: &mut SeededRng, count: usize) -> Vec<DMatrix<f64>> {
    (0..count).map(|_| random_rotation(g)).collect()
}

/// `(A_(1)A_(2) + A_(2)A_(3) + A_(3)A_(1)) b` for a three-form.
fn cyclic_pairs(q: &QuatStructure, a: Axis, b: &AltForm) -> DenseTensor {
    let t = DenseTensor::from_form(b);
    let mut out = DenseTensor::zero(b.dim(), 3);
    for (i, j) in [(1, 2), (2, 3), (3, 1)] {
        let r = q.insert(a, j, &t).and_then(|x| q.insert(a, i, &x)).expect("slots in range");
        out.axpy(1.0, &r);
    }
    out
}

pub fn quat_checks(q: &QuatStructure, seed: u64) -> Vec<Check> {
    let mut s = Suite::new("quat");
    let d = q.dim();
    let mut g = rng(seed ^ 0x51);

    let l = three_form_matrix(q, |b| q.l_map(b));
    let nb = l.nrows();
    let l2 = &l * &l - DMatrix::<f64>::identity(nb, nb) * 9.0;
    s.identity(&format!("L² = 9 on Λ³ ({nb}×{nb})"), l2.amax(), VERIFY_TOL);

    let mut worst_plus: f64 = 0.0;
    let mut worst_minus: f64 = 0.0;
    for _ in 0..5 {
        let b = gaussian_form(&mut g, d, 3);
        let plus = proj3(q, &b, Projector3::Plus3);
        let tp = DenseTensor::from_form(&plus);
        for a in Axis::ALL {
            let mut r = cyclic_pairs(q, a, &plus);
            r.axpy(-1.0, &tp);
            worst_plus = worst_plus.max(r.max_abs() / tp.max_abs());
        }
        let minus = proj3(q, &b, Projector3::Minus3);
        let tm = DenseTensor::from_form(&minus);
        let mut r = DenseTensor::zero(d, 3);
        for a in Axis::ALL {
            let x = q.insert(a, 3, &tm).and_then(|x| q.insert(a, 2, &x)).expect("slots in range");
            r.axpy(1.0, &x);
        }
        r.axpy(1.0, &tm);
        worst_minus = worst_minus.max(r.max_abs() / tm.max_abs());
    }
    s.identity("(A₁A₂ + A₂A₃ + A₃A₁) b = b on L = 3, each A", worst_plus, VERIFY_TOL);
    s.identity("Σ_A A₂A₃ b = −b on L = −3", worst_minus, VERIFY_TOL);

    let omega = q.omega();
    let worst = random_rotations(&mut g, 100)
        .iter()
        .map(|r| rel_form(q.rotate(r).expect("rotation").omega(), omega))
        .fold(0.0, f64::max);
    s.identity("Ω invariant under 100 adapted rotations", worst, VERIFY_TOL);
    s.checks
}

pub fn torsion_checks(q: &QuatStructure, seed: u64) -> Vec<Check> {
    let mut s = Suite::new("torsion");
    let mut g = rng(seed ^ 0x7a);
    let samples: Vec<MixedTorsion> = (0..TRIALS).map(|_| random_w_from(q, &mut g)).collect();

    let worst = samples
        .iter()
        .map(|a| rel_mixed(&f_map_unchecked(q, &f_inverse_unchecked(q, a)), a))
        .fold(0.0, f64::max);
    s.identity("F ∘ F⁻¹ = Id on W", worst, VERIFY_TOL);
    let worst = (0..TRIALS)
        .map(|_| {
            let c = random_fiber_element(q, &mut g);
            rel_mixed(&f_inverse_unchecked(q, &f_map_unchecked(q, &c)), &c)
        })
        .fold(0.0, f64::max);
    s.identity("F⁻¹ ∘ F = Id on the fibre", worst, VERIFY_TOL);

    let worst = samples
        .iter()
        .map(|a| {
            let l: Vec<AltForm> = a.rows().iter().map(|r| q.l_map(r)).collect();
            let l = MixedForm::from_rows(l).expect("rows");
            rel_mixed(&l, &a.scaled(2.0))
        })
        .fold(0.0, f64::max);
    s.identity("L = 2 on every row of W", worst, VERIFY_TOL);

    let worst = samples
        .iter()
        .map(|a| {
            let la = q.lcal_unchecked(a);
            let mut r = q.lcal_unchecked(&la);
            r.axpy(-2.0, &la);
            r.axpy(-8.0, a);
            r.norm() / a.norm()
        })
        .fold(0.0, f64::max);
    s.identity("(𝓛 − 4)(𝓛 + 2) = 0 on W", worst, VERIFY_TOL);

    let n = q.n();
    let h_dim: usize = ComponentLabel::ALL.iter().filter(|c| c.is_h()).map(|c| c.dimension(n)).sum();
    let s3h_dim = w_dimension(n) - h_dim;
    let plus = trace_on_w(q, |a| {
        let mut r = q.lcal_unchecked(a);
        r.axpy(2.0, a);
        r.scaled(1.0 / 6.0)
    });
    let minus = trace_on_w(q, |a| {
        let mut r = a.scaled(4.0);
        r.axpy(-1.0, &q.lcal_unchecked(a));
        r.scaled(1.0 / 6.0)
    });
    s.identity_note(
        "dim of the 𝓛 = 4 and 𝓛 = −2 eigenspaces",
        (plus - h_dim as f64).abs().max((minus - s3h_dim as f64).abs()),
        1e-6,
        format!("traces {plus:.6} / {minus:.6}, expected {h_dim} / {s3h_dim}"),
    );

    let want = w_dimension(n);
    let flat: Vec<Vec<f64>> = (0..want + 8).map(|_| random_w_from(q, &mut g).to_flat()).collect();
    let rank = sample_rank(&flat, 1e-8);
    s.identity_note(
        "dim W by rank of random samples",
        (rank as f64 - want as f64).abs(),
        0.0,
        format!("rank {rank}, expected {want}"),
    );
    let tr = trace_on_w(q, |a| {
        let mut r = MixedForm::zero(a.dim(), 4);
        for p in decompose_unchecked(q, a) {
            r.axpy(1.0, &p);
        }
        r
    });
    s.identity_note(
        "dim W by trace of the summed component projectors",
        (tr - want as f64).abs(),
        1e-6,
        format!("trace {tr:.6}"),
    );

    let mut worst: f64 = 0.0;
    let mut moved: f64 = 0.0;
    for (a, r) in samples.iter().take(5).zip(random_rotations(&mut g, 5)) {
        let q2 = q.rotate(&r).expect("rotation");
        let c1 = extract_ca_unchecked(q, a);
        let c2 = extract_ca_unchecked(&q2, a);
        worst = worst.max(rel_mixed(&assemble_ca(&q2, &c2), a));
        worst = worst.max(rel_mixed(&assemble_ca(q, &c1), a));
        moved = moved.max(rel_mixed(&c2[0], &c1[0]));
    }
    s.identity_note(
        "Σ c_A∧ω_A reassembles after adapted rotation",
        worst,
        VERIFY_TOL,
        format!("individual c_A moved by up to {moved:.3}"),
    );
    s.checks
}

pub fn threeform_checks(q: &QuatStructure, seed: u64) -> Vec<Check> {
    let mut s = Suite::new("threeform");
    let d = q.dim();
    let n = q.n();
    let mut g = rng(seed ^ 0x3f);

    let tr = three_form_matrix(q, |b| proj3(q, b, Projector3::EHS3H)).trace();
    s.identity_note(
        "dim E(H + S³H) = 12n",
        (tr - 12.0 * n as f64).abs(),
        1e-6,
        format!("trace {tr:.6}"),
    );

    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let a = random_w_from(q, &mut g);
        let b = dstar(&a);
        for (x, p) in [
            (ComponentLabel::KH, Projector3::KH),
            (ComponentLabel::EH, Projector3::EH),
            (ComponentLabel::ES3H, Projector3::ES3H),
            (ComponentLabel::L3ES3H, Projector3::L3ES3H),
        ] {
            let got = hat_dstar(q, &proj3(q, &b, p));
            let want = component_unchecked(q, &a, x);
            worst = worst.max(vdiff(&got.to_flat(), &want.to_flat()) / a.norm());
        }
    }
    s.identity("ĥat-d*(π_X d*a) = component X of a", worst, VERIFY_TOL);

    let worst = (0..TRIALS)
        .map(|_| {
            let b = gaussian_form(&mut g, d, 3);
            rel_form(&dstar(&hat_dstar(q, &b)), &b)
        })
        .fold(0.0, f64::max);
    s.identity("d* ∘ ĥat-d* = Id on Λ³", worst, VERIFY_TOL);

    let worst = (0..TRIALS)
        .map(|_| {
            let a = random_w_from(q, &mut g);
            let lhs = dstar(&q.lcal_unchecked(&a));
            let b = dstar(&a);
            let rhs = &b + &q.l_map(&b);
            vdiff(lhs.coeffs(), rhs.coeffs()) / a.norm()
        })
        .fold(0.0, f64::max);
    s.identity("d* ∘ 𝓛 = d* + L ∘ d*", worst, VERIFY_TOL);

    let b1 = gaussian_form(&mut g, d, 3);
    let b2 = gaussian_form(&mut g, d, 3);
    let sum = &b1 + &b2.scaled(2.0);
    let lin: Vec<f64> = xi(q, &b1).iter().zip(xi(q, &b2)).map(|(x, y)| x + 2.0 * y).collect();
    s.identity("ξ is linear", rel(&xi(q, &sum), &lin), VERIFY_TOL);

    let mut global: f64 = 0.0;
    let mut projected: f64 = 0.0;
    for r in random_rotations(&mut g, 5) {
        let q2 = q.rotate(&r).expect("rotation");
        let b = gaussian_form(&mut g, d, 3);
        global = global.max(rel(&xi(&q2, &b), &xi(q, &b)));
        let p1 = proj3(q, &b, Projector3::EHS3H);
        projected = projected.max(rel_form(&proj3(&q2, &b, Projector3::EHS3H), &p1));
    }
    s.identity("ξ unchanged by adapted rotations", global, VERIFY_TOL);
    s.identity("Σ Aξ_A∧ω_A unchanged by adapted rotations", projected, VERIFY_TOL);

    let cyclic = DMatrix::from_fn(3, 3, |a, b| if b == (a + 1) % 3 { 1.0 } else { 0.0 });
    let q2 = q.rotate(&cyclic).expect("rotation");
    let mut permuted: f64 = 0.0;
    for _ in 0..5 {
        let b = gaussian_form(&mut g, d, 3);
        let t1 = xi_triple(q, &b);
        let t2 = xi_triple(&q2, &b);
        for a in Axis::ALL {
            permuted = permuted.max(rel(t2.get(a), t1.get(a.next())));
        }
    }
    s.identity("ξ_A permute with (I, J, K) → (J, K, I)", permuted, VERIFY_TOL);
    s.checks
}

pub fn projector_checks(q: &QuatStructure, seed: u64) -> Vec<Check> {
    let mut s = Suite::new("projectors");
    let n = q.n();
    let mut g = rng(seed ^ 0x9d);

    let mut idem: f64 = 0.0;
    let mut orth: f64 = 0.0;
    let mut complete: f64 = 0.0;
    for _ in 0..5 {
        let a = random_w_from(q, &mut g);
        let parts = decompose_unchecked(q, &a);
        let mut sum = MixedForm::zero(q.dim(), 4);
        for (i, p) in parts.iter().enumerate() {
            sum.axpy(1.0, p);
            let again = component_unchecked(q, p, ComponentLabel::ALL[i]);
            idem = idem.max(vdiff(&again.to_flat(), &p.to_flat()) / a.norm());
            for p2 in &parts[..i] {
                orth = orth.max(p.inner(p2).abs() / a.norm_sq());
            }
        }
        complete = complete.max(rel_mixed(&sum, &a));
    }
    s.identity("component projectors are idempotent", idem, VERIFY_TOL);
    s.identity("component projectors are pairwise orthogonal", orth, VERIFY_TOL);
    s.identity("component projectors sum to Id on W", complete, VERIFY_TOL);

    let traces: Vec<f64> = ComponentLabel::ALL
        .iter()
        .map(|&c| trace_on_w(q, |a| component_unchecked(q, a, c)))
        .collect();
    let want: Vec<f64> = ComponentLabel::ALL.iter().map(|c| c.dimension(n) as f64).collect();
    let dev = traces.iter().zip(&want).map(|(t, w)| (t - w).abs()).fold(0.0, f64::max);
    let shown: Vec<String> = traces.iter().map(|t| format!("{t:.4}")).collect();
    s.identity_note(
        "component traces match the dimension census",
        dev,
        1e-6,
        format!("traces ({}) sum {:.4}", shown.join(", "), traces.iter().sum::<f64>()),
    );

    let a = random_w_from(q, &mut g);
    let kernel = [ComponentLabel::L3EH, ComponentLabel::KS3H]
        .iter()
        .map(|&c| dstar(&component_unchecked(q, &a, c)).norm() / a.norm())
        .fold(0.0, f64::max);
    s.identity("d* vanishes on Λ³₀EH + KS³H", kernel, 1e-10);
    let sv = dstar_singular_values_on_complement(q);
    let smallest = sv.first().copied().unwrap_or(0.0);
    s.identity_note(
        "d* injective on the other four components",
        if smallest > 1e-6 { 0.0 } else { 1.0 },
        0.0,
        format!("smallest singular value {smallest:.6}"),
    );

    let mut worst: f64 = 0.0;
    let mut flat: f64 = 0.0;
    for _ in 0..5 {
        let a = component_unchecked(q, &random_w_from(q, &mut g), ComponentLabel::KH);
        let b = dstar(&a);
        worst = worst.max(rel_mixed(&omega_lift(q, &b).scaled(1.0 / 6.0), &a));
        let t = xi_triple(q, &b);
        flat = flat.max(vnorm(&t.xi) / a.norm());
        flat = flat.max(vdiff(&t.xi_i, &t.xi_j).max(vdiff(&t.xi_j, &t.xi_k)) / a.norm());
    }
    s.identity("KH: ∇Ω = (1/6) Σ i_A(·⌟d*Ω)∧ω_A", worst, VERIFY_TOL);
    s.identity("KH: ξ = 0 and ξ_I = ξ_J = ξ_K", flat, VERIFY_TOL);

    let mut worst: f64 = 0.0;
    let mut xi_norm: f64 = 0.0;
    for _ in 0..5 {
        let w = random_w_from(q, &mut g);
        let mut a = component_unchecked(q, &w, ComponentLabel::L3EH);
        a.axpy(1.0, &component_unchecked(q, &w, ComponentLabel::L3ES3H));
        let b = dstar(&a);
        let mut want = a.scaled(4.0);
        want.axpy(1.0, &omega_lift(q, &b));
        worst = worst.max(vdiff(&q.lcal_unchecked(&a).to_flat(), &want.to_flat()) / w.norm());
        xi_norm = xi_norm.max(vnorm(&xi(q, &b)) / w.norm());
    }
    s.identity("Λ³₀E(H+S³H): 𝓛(∇Ω) = 4∇Ω + Σ i_A(·⌟d*Ω)∧ω_A", worst, VERIFY_TOL);
    s.identity("Λ³₀E(H+S³H): ξ = 0", xi_norm, VERIFY_TOL);

    let mut worst: f64 = 0.0;
    for r in random_rotations(&mut g, 5) {
        let q2 = q.rotate(&r).expect("rotation");
        let a = random_w_from(q, &mut g);
        let p1 = profile_unchecked(q, &a);
        let p2 = profile_unchecked(&q2, &a);
        for c in ComponentLabel::ALL {
            worst = worst.max((p1.norm(c) - p2.norm(c)).abs() / p1.total);
        }
    }
    s.identity("component profile invariant under adapted rotations", worst, VERIFY_TOL);
    s.checks
}

pub fn classifier_checks(q: &QuatStructure, seed: u64) -> Result<Vec<Check>> {
    let mut s = Suite::new("classifier");
    let n = q.n();
    let d = q.dim();
    let mut g = rng(seed ^ 0xc1);

    let classes: Vec<ClassLabel> = ClassLabel::all(n).into_iter().filter(|c| !c.is_empty()).collect();
    let wrong: Vec<String> = classes
        .iter()
        .enumerate()
        .filter_map(|(i, &c)| {
            let a = random_class_member(q, c, seed.wrapping_add(i as u64));
            let got = classify_unchecked(q, &a, CLASS_TOL).class;
            (got != c).then(|| format!("{c} → {got}"))
        })
        .collect();
    s.identity_note(
        &format!("round-trip classification of {} classes", classes.len()),
        wrong.len() as f64,
        0.0,
        if wrong.is_empty() { "all exact".to_string() } else { wrong.join("; ") },
    );

    if n >= 3 {
        let mut disagreements = Vec::new();
        let mut worst_member: f64 = 0.0;
        let mut weakest_outsider = f64::INFINITY;
        for (i, row) in table2(n)?.iter().enumerate() {
            let s0 = seed.wrapping_mul(131).wrapping_add(i as u64);
            let member = random_class_member(q, row.class, s0);
            let r2 = table2_residual(q, &member, row.class)?.residual;
            let r3 = table2_residual_d_omega(q, &DerivedFromDOmega::from_torsion(q, &member), row.class)?.residual;
            worst_member = worst_member.max(r2).max(r3);
            for (k, c) in complement(row.class, n).into_iter().enumerate().take(2) {
                let outsider = random_class_member(q, row.class.union(ClassLabel::from_components(&[c])), s0 + 7 + k as u64);
                let o2 = table2_residual(q, &outsider, row.class)?.residual;
                let o3 = table2_residual_d_omega(q, &DerivedFromDOmega::from_torsion(q, &outsider), row.class)?.residual;
                weakest_outsider = weakest_outsider.min(o2).min(o3);
                if (o2 <= 1e-8) != (o3 <= 1e-8) {
                    disagreements.push(format!("{} + {}", row.class, c));
                }
            }
            if (r2 <= 1e-8) != (r3 <= 1e-8) {
                disagreements.push(row.class.to_string());
            }
        }
        s.identity_note(
            "table rows: ∇Ω and dΩ verdicts agree",
            disagreements.len() as f64,
            0.0,
            if disagreements.is_empty() {
                format!("weakest non-member residual {weakest_outsider:.3e}")
            } else {
                disagreements.join("; ")
            },
        );
        s.identity("table rows: residual on members", worst_member, 1e-8);
    } else {
        let mut worst_member: f64 = 0.0;
        let mut weakest_outsider = f64::INFINITY;
        for (i, row) in table3().iter().enumerate() {
            let member = random_class_member(q, row.class, seed.wrapping_add(i as u64));
            let r = table3_residual(q, &DerivedFromDOmega::from_torsion(q, &member), row.class)?.residual;
            worst_member = worst_member.max(r);
            for c in complement(row.class, n) {
                let outsider = random_class_member(q, row.class.union(ClassLabel::from_components(&[c])), seed + 97);
                let o = table3_residual(q, &DerivedFromDOmega::from_torsion(q, &outsider), row.class)?.residual;
                weakest_outsider = weakest_outsider.min(o);
            }
        }
        s.identity("dimension-8 rows: residual on members", worst_member, 1e-8);
        s.identity_note(
            "dimension-8 rows: non-members rejected",
            if weakest_outsider > 1e-3 { 0.0 } else { 1.0 },
            0.0,
            format!("weakest non-member residual {weakest_outsider:.3e}"),
        );
    }

    let samples: Vec<MixedTorsion> = (0..TRIALS).map(|_| random_w_from(q, &mut g)).collect();
    let worst = samples
        .iter()
        .map(|a| {
            let d_omega = a.alternate();
            let lhs = &q.lcal_unchecked(a).alternate() + &d_omega.scaled(2.0);
            vdiff(lhs.coeffs(), q.l_map(&d_omega).coeffs()) / a.norm()
        })
        .fold(0.0, f64::max);
    s.identity("a(𝓛∇Ω) + 2dΩ = L(dΩ)", worst, VERIFY_TOL);

    let omega = q.omega();
    let worst = (0..TRIALS)
        .map(|_| {
            let z = gaussian_vec(&mut g, d);
            let hook = omega.interior(&z).expect("dimension");
            let zf = AltForm::one_form(&z);
            let m = MixedForm::from_fn(d, 4, |x| {
                let mut e = vec![0.0; d];
                e[x] = 1.0;
                let left = wedge(&AltForm::one_form(&e), &hook);
                let right = wedge(&zf, &omega.interior(&e).expect("dimension"));
                &left - &right
            });
            rel_form(&m.alternate(), &wedge(&zf, omega).scaled(4.0))
        })
        .fold(0.0, f64::max);
    s.identity("a(·∧(ζ⌟Ω) − ζ∧(·⌟Ω)) = 4ζ∧Ω", worst, VERIFY_TOL);

    let worst = (0..TRIALS)
        .map(|_| {
            let b = gaussian_form(&mut g, d, 3);
            let mut want = AltForm::zero(d, 5);
            for a in Axis::ALL {
                want.axpy(2.0, &wedge(&q.i_a(a, &b), q.kahler(a)));
            }
            rel_form(&omega_lift(q, &b).alternate(), &want)
        })
        .fold(0.0, f64::max);
    s.identity("a(Σ i_A(·⌟b)∧ω_A) = 2Σ i_A b∧ω_A", worst, VERIFY_TOL);

    let mut xi_worst: f64 = 0.0;
    let mut xi_quoted: f64 = 0.0;
    let mut triple_worst: f64 = 0.0;
    let mut triple_quoted: f64 = 0.0;
    let mut cod_worst: f64 = 0.0;
    let mut cod_quoted: f64 = 0.0;
    for a in &samples {
        let d_omega = a.alternate();
        let b = dstar(a);
        let by_contraction = xi_triple(q, &b);
        let from_d = xi_from_d_omega(q, &d_omega);
        xi_worst = xi_worst.max(rel(&from_d, &by_contraction.xi));
        let flipped: Vec<f64> = from_d.iter().map(|v| -v).collect();
        xi_quoted = xi_quoted.max(rel(&flipped, &by_contraction.xi));
        let t = xi_triple_from_dstar(q, &b, &by_contraction.xi);
        let sb = b.hodge();
        for ax in Axis::ALL {
            triple_worst = triple_worst.max(rel(t.get(ax), by_contraction.get(ax)));
            let want = q.act_one_form(ax, by_contraction.get(ax));
            let quoted = wedge(&sb, q.kahler(ax)).hodge().scaled(-1.0 / (8.0 * n as f64));
            triple_quoted = triple_quoted.max(rel(quoted.coeffs(), &want));
        }
        cod_worst = cod_worst.max(rel_form(&dstar_from_d_omega(q, &d_omega), &b));
        let quoted = wedge(&q.omega_power(n - 2), &d_omega)
            .hodge()
            .scaled(dstar_from_d_omega_coefficient(n));
        cod_quoted = cod_quoted.max(rel_form(&quoted, &b));
    }
    s.identity("ξ = (1/(12(2n+1))) ⋆(⋆dΩ∧Ω) matches ξ from d*Ω", xi_worst, 1e-8);
    s.discrepancy(
        "ξ = (−1/(12(2n+1))) ⋆(⋆dΩ∧Ω)",
        xi_quoted,
        1e-8,
        "holds with the opposite sign".to_string(),
    );
    s.identity("ξ_A recovered from d*Ω and ξ", triple_worst, 1e-8);
    s.discrepancy(
        "Aξ_A = −(1/8n) ⋆(⋆d*Ω∧ω_A)",
        triple_quoted,
        1e-8,
        "inversion omits the ξ term; see ξ_A recovered from d*Ω and ξ".to_string(),
    );
    s.identity("d*Ω = ((−1)ⁿ(n−1)‖Ω‖²/(2n+1)!) ⋆(Ωⁿ⁻²∧dΩ)", cod_worst, 1e-8);
    s.discrepancy(
        "d*Ω = ((−1)ⁿ(n−1)/(2n+1)!) ⋆(Ωⁿ⁻²∧dΩ)",
        cod_quoted,
        1e-8,
        format!("missing factor ‖Ω‖² = {}", q.omega().norm_sq()),
    );
    Ok(s.checks)
}

/// `⋆(⋆(a∧Ω)∧Ω)`.
pub fn star_omega_round(q: &QuatStructure, a: &[f64]) -> Vec<f64> {
    let w = wedge(&AltForm::one_form(a), q.omega());
    wedge(&w.hodge(), q.omega()).hodge().into_coeffs()
}

/// `⋆(Σ_B ⋆(Bζ_B∧ω_B) ∧ ω_A)`.
pub fn star_triple_round(q: &QuatStructure, z: &[Vec<f64>; 3], a: Axis) -> Vec<f64> {
    let mut inner = AltForm::zero(q.dim(), 3);
    for b in Axis::ALL {
        let bz = AltForm::one_form(&q.act_one_form(b, &z[b.index()]));
        inner.axpy(1.0, &wedge(&bz, q.kahler(b)));
    }
    wedge(&inner.hodge(), q.kahler(a)).hodge().into_coeffs()
}

/// `⋆(Σ_{B,C} ⋆(i_B(Cζ_C∧ω_C)∧ω_B) ∧ ω_A∧ω_A)`.
pub fn star_square_round(q: &QuatStructure, z: &[Vec<f64>; 3], a: Axis) -> Vec<f64> {
    let mut inner = AltForm::zero(q.dim(), 3);
    for c in Axis::ALL {
        let cz = AltForm::one_form(&q.act_one_form(c, &z[c.index()]));
        inner.axpy(1.0, &wedge(&cz, q.kahler(c)));
    }
    let mut sum = AltForm::zero(q.dim(), 5);
    for b in Axis::ALL {
        sum.axpy(1.0, &wedge(&q.i_a(b, &inner), q.kahler(b)));
    }
    let sq = wedge(q.kahler(a), q.kahler(a));
    wedge(&sum.hodge(), &sq).hodge().into_coeffs()
}

pub fn hodge_constant_checks(q: &QuatStructure, seed: u64) -> Vec<Check> {
    let mut s = Suite::new("hodge");
    let n = q.n();
    let d = q.dim();
    let (k1, k2) = (q.k1(), q.k2());
    let mut g = rng(seed ^ 0x4d);
    let trials = 10;

    let quoted = 12.0 * k1 * k2;
    let (mut worst, mut off, mut fit): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..trials {
        let a = gaussian_vec(&mut g, d);
        let got = star_omega_round(q, &a);
        let scaled = |c: f64| a.iter().map(|v| c * v).collect::<Vec<f64>>();
        worst = worst.max(rel(&got, &scaled(-quoted)));
        off = off.max(rel(&got, &scaled(quoted)));
        fit = fit_scalar(&got, &a);
    }
    s.identity_note("⋆(⋆(a∧Ω)∧Ω) = −12(n−1)(2n+1) a", worst, VERIFY_TOL, format!("constant {fit:.6}"));
    s.discrepancy(
        "⋆(⋆(a∧Ω)∧Ω) = 12(n−1)(2n+1) a",
        off,
        VERIFY_TOL,
        format!("quoted {quoted}, measured {fit:.6}"),
    );

    let triple = |g: &mut SeededRng| [0, 1, 2].map(|_| gaussian_vec(g, d));
    let (mut worst, mut off) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let z = triple(&mut g);
        let sum: Vec<f64> = (0..d).map(|k| z.iter().map(|v| v[k]).sum()).collect();
        for a in Axis::ALL {
            let got = star_triple_round(q, &z, a);
            let az = q.act_one_form(a, &z[a.index()]);
            let asum = q.act_one_form(a, &sum);
            let want: Vec<f64> = az.iter().zip(&asum).map(|(x, y)| -2.0 * k1 * x - y).collect();
            worst = worst.max(rel(&got, &want));
            let quoted: Vec<f64> = az.iter().map(|x| 4.0 * n as f64 * x).collect();
            off = off.max(rel(&got, &quoted));
        }
    }
    s.identity("⋆(Σ_B ⋆(Bζ_B∧ω_B)∧ω_A) = −2(n−1)Aζ_A − A(ζ_I+ζ_J+ζ_K)", worst, VERIFY_TOL);
    s.discrepancy(
        "⋆(Σ_B ⋆(Bζ_B∧ω_B)∧ω_A) = 4n Aζ_A",
        off,
        VERIFY_TOL,
        "not proportional to Aζ_A".to_string(),
    );

    let quoted = -4.0 * k1 * k2;
    let (mut worst, mut off, mut fit) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let z = triple(&mut g);
        for a in Axis::ALL {
            let got = star_square_round(q, &z, a);
            let za = &z[a.index()];
            let scaled = |c: f64| za.iter().map(|v| c * v).collect::<Vec<f64>>();
            worst = worst.max(rel(&got, &scaled(-quoted)));
            off = off.max(rel(&got, &scaled(quoted)));
            fit = fit_scalar(&got, za);
        }
    }
    s.identity_note(
        "⋆(Σ ⋆(i_B(Cζ_C∧ω_C)∧ω_B)∧ω_A∧ω_A) = 4(n−1)(2n+1) ζ_A",
        worst,
        VERIFY_TOL,
        format!("constant {fit:.6}"),
    );
    s.discrepancy(
        "⋆(Σ ⋆(i_B(Cζ_C∧ω_C)∧ω_B)∧ω_A∧ω_A) = −4(n−1)(2n+1) ζ_A",
        off,
        VERIFY_TOL,
        format!("quoted {quoted}, measured {fit:.6}"),
    );
    s.checks
}

/// Synthetic non-abelian algebras used by the Lie checks.
pub fn synthetic_algebras(q: &QuatStructure, seed: u64) -> Result<Vec<(String, MetricLieAlgebra)>> {
    let d = q.dim();
    let mut g = rng(seed ^ 0x11e);
    let der = DMatrix::from_vec(d - 1, d - 1, gaussian_vec(&mut g, (d - 1) * (d - 1)));
    Ok(vec![
        ("semidirect".to_string(), semidirect(q.clone(), &der)?),
        ("two-step nilpotent".to_string(), two_step_nilpotent(q.clone(), 3, seed)?),
        ("su(2) + abelian".to_string(), su2_plus_abelian(q.clone())?),
        ("projected nilpotent".to_string(), random_nilpotent(q.clone(), seed)?),
    ])
}

pub fn lie_checks(q: &QuatStructure, seed: u64) -> Result<Vec<Check>> {
    let mut s = Suite::new("lie");
    let abelian = classify_algebra(&MetricLieAlgebra::abelian(q.clone()))?;
    s.identity_note(
        "abelian algebra is QK",
        if abelian.class == "QK" { 0.0 } else { 1.0 },
        0.0,
        format!("class {}", abelian.class),
    );
    let mut square_d: f64 = 0.0;
    let mut square_dstar: f64 = 0.0;
    for (name, g) in synthetic_algebras(q, seed)? {
        let r = classify_algebra(&g)?;
        let failures = r.failures(VERIFY_TOL);
        s.identity_note(
            &format!("{name}: every pipeline identity"),
            failures.len() as f64,
            0.0,
            if failures.is_empty() {
                format!("class {}", r.class)
            } else {
                failures.join("; ")
            },
        );
        let geo = LieGeometry::new(&g);
        let class = classify_unchecked(q, &geo.nabla_omega, CLASS_TOL).class;
        let kernel = ClassLabel::from_components(&[ComponentLabel::L3EH, ComponentLabel::KS3H]);
        if class.is_subset_of(kernel) {
            let routes = CodifferentialRoutes::new(&g, &geo);
            let scale = geo.nabla_omega.norm().max(1.0);
            let worst = routes
                .named()
                .iter()
                .filter(|(k, _)| *k != "quoted_from_d_omega")
                .map(|(_, v)| vnorm(v) / scale)
                .fold(0.0, f64::max);
            s.identity(&format!("{name}: d*Ω = 0 inside Λ³₀EH + KS³H"), worst, VERIFY_TOL);
        }
        s.identity(&format!("{name}: ξ by Hodge and by contraction"), r.xi_hodge_vs_contraction, 1e-8);
        let k = kahler_square_readings(&g, &geo);
        square_d = square_d.max(k.with_d.iter().fold(0.0, |m: f64, v| m.max(*v)));
        square_dstar = square_dstar.max(k.with_dstar.iter().fold(0.0, |m: f64, v| m.max(*v)));
    }
    s.discrepancy(
        "⋆(⋆dΩ∧ω_A∧ω_A) = 2⟨A·⌟dω_A, ω_A⟩",
        square_d,
        VERIFY_TOL,
        "frame-dependent right side".to_string(),
    );
    s.discrepancy(
        "⋆(⋆dΩ∧ω_A∧ω_A) = 2 d*ω_A(A·)",
        square_dstar,
        VERIFY_TOL,
        "frame-dependent right side".to_string(),
    );
    Ok(s.checks)
}
