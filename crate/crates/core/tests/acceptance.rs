//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Reference values come from oracles written here against the raw
//! definitions (bitmask wedge and Hodge star, full-tensor slot insertions,
//! Cartan and Koszul formulas) rather than from the library's own routines.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;

use aqh_core::classifier::{classify_unchecked, random_class_member, ClassLabel, DerivedFromDOmega, CLASS_TOL};
use aqh_core::components::{
    component_unchecked, decompose_unchecked, dstar_singular_values_on_complement, trace_on_w, ComponentLabel,
};
use aqh_core::lie::{
    gray_residual, nijenhuis_trace, random_nilpotent, semidirect, su2_plus_abelian, two_step_nilpotent,
    CodifferentialRoutes, LieGeometry, MetricLieAlgebra,
};
use aqh_core::report::classify_algebra;
use aqh_core::sample::{gaussian_form, gaussian_vec, random_rotation, rng, SeededRng};
use aqh_core::tables::{complement, table2, table2_residual, table2_residual_d_omega, table3, table3_residual};
use aqh_core::threeform::hat_dstar;
use aqh_core::torsion::{omega_lift, random_w_from};
use aqh_core::{AltForm, Axis, DenseTensor, MixedForm, MixedTorsion, QuatStructure};

mod oracle {
    use super::*;

    /// Forms as maps from index bitmasks to coefficients.
    pub type Sparse = HashMap<u32, f64>;

    pub fn to_sparse(a: &AltForm) -> Sparse {
        a.basis()
            .iter()
            .zip(a.coeffs())
            .filter(|(_, c)| **c != 0.0)
            .map(|(t, c)| (t.iter().fold(0u32, |m, &i| m | (1 << i)), *c))
            .collect()
    }

    pub fn from_sparse(dim: usize, degree: usize, s: &Sparse) -> AltForm {
        let mut out = AltForm::zero(dim, degree);
        let coeffs: Vec<f64> = out
            .basis()
            .iter()
            .map(|t| *s.get(&t.iter().fold(0u32, |m, &i| m | (1 << i))).unwrap_or(&0.0))
            .collect();
        out.coeffs_mut().copy_from_slice(&coeffs);
        out
    }

    /// `(−1)^{#(i ∈ a, j ∈ b, i > j)}`.
    pub fn merge_sign(a: u32, b: u32) -> f64 {
        let mut inversions = 0;
        let mut rest = b;
        while rest != 0 {
            let j = rest.trailing_zeros();
            inversions += (a >> (j + 1)).count_ones();
            rest &= rest - 1;
        }
        if inversions % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn wedge(a: &Sparse, b: &Sparse) -> Sparse {
        let mut out = Sparse::new();
        for (&ma, &ca) in a {
            for (&mb, &cb) in b {
                if ma & mb == 0 {
                    *out.entry(ma | mb).or_insert(0.0) += merge_sign(ma, mb) * ca * cb;
                }
            }
        }
        out
    }

    /// `Vol = (−1)^{n+1} e^{0…4n−1}`, and `⋆e^I = ε e^{I^c}` with `e^I ∧ ε e^{I^c} = Vol`.
    pub fn hodge(a: &AltForm) -> AltForm {
        let d = a.dim();
        let n = d / 4;
        let orient = if n % 2 == 1 { 1.0 } else { -1.0 };
        let full = (1u32 << d) - 1;
        let out: Sparse = to_sparse(a)
            .into_iter()
            .map(|(m, c)| (full ^ m, orient * merge_sign(m, full ^ m) * c))
            .collect();
        from_sparse(d, d - a.degree(), &out)
    }

    /// `Ω = Σ_A ω_A ∧ ω_A` from the matrices, with `ω_A(x, y) = ⟨x, Ay⟩`.
    pub fn omega(q: &QuatStructure) -> Sparse {
        let d = q.dim();
        let mut out = Sparse::new();
        for a in Axis::ALL {
            let m = q.matrix(a);
            let mut w = Sparse::new();
            for i in 0..d {
                for j in i + 1..d {
                    if m[(i, j)] != 0.0 {
                        w.insert((1 << i) | (1 << j), m[(i, j)]);
                    }
                }
            }
            for (k, v) in wedge(&w, &w) {
                *out.entry(k).or_insert(0.0) += v;
            }
        }
        out
    }

    pub fn mixed_tensor(a: &MixedForm) -> DenseTensor {
        let d = a.dim();
        let p = a.degree();
        let mut t = DenseTensor::zero(d, p + 1);
        let mut idx = vec![0usize; p + 1];
        for flat in 0..d.pow(p as u32 + 1) {
            let mut f = flat;
            for s in idx.iter_mut().rev() {
                *s = f % d;
                f /= d;
            }
            t.set(&idx, a.get(idx[0], &idx[1..]));
        }
        t
    }

    pub fn tensor_mixed(t: &DenseTensor, p: usize) -> MixedForm {
        let d = t.dim();
        let block = d.pow(p as u32);
        MixedForm::from_fn(d, p, |x| {
            let data = t.data()[x * block..(x + 1) * block].to_vec();
            DenseTensor::from_data(d, p, data).unwrap().to_form()
        })
    }

    /// `L(b) = Σ_A Σ_{i<j} A_(i) A_(j) b`.
    pub fn l_map(q: &QuatStructure, b: &AltForm) -> AltForm {
        let p = b.degree();
        let t = DenseTensor::from_form(b);
        let mut out = DenseTensor::zero(b.dim(), p);
        for a in Axis::ALL {
            for i in 1..=p {
                for j in i + 1..=p {
                    let r = q.insert(a, i, &q.insert(a, j, &t).unwrap()).unwrap();
                    out.axpy(1.0, &r);
                }
            }
        }
        out.to_form()
    }

    /// `𝓛 a = Σ_A A_(1) (A_(2) + … + A_(p+1)) a` on the full tensor.
    pub fn lcal(q: &QuatStructure, a: &MixedTorsion) -> MixedTorsion {
        let t = mixed_tensor(a);
        let mut out = DenseTensor::zero(t.dim(), t.rank());
        for ax in Axis::ALL {
            for s in 2..=t.rank() {
                let r = q.insert(ax, 1, &q.insert(ax, s, &t).unwrap()).unwrap();
                out.axpy(1.0, &r);
            }
        }
        tensor_mixed(&out, a.degree())
    }

    /// `d* a = −Σ_i e_i ⌟ a(e_i)`.
    pub fn dstar(a: &MixedTorsion) -> AltForm {
        let mut out = AltForm::zero(a.dim(), a.degree() - 1);
        for i in 0..a.dim() {
            out.axpy(-1.0, &a.row(i).interior_basis(i).unwrap());
        }
        out
    }

    /// `a(T) = Σ_r e^r ∧ T(e_r)`.
    pub fn alternate(a: &MixedForm) -> AltForm {
        let mut out = Sparse::new();
        for r in 0..a.dim() {
            let e: Sparse = [(1u32 << r, 1.0)].into_iter().collect();
            for (k, v) in wedge(&e, &to_sparse(a.row(r))) {
                *out.entry(k).or_insert(0.0) += v;
            }
        }
        from_sparse(a.dim(), a.degree() + 1, &out)
    }

    /// Levi-Civita coefficients `Γ_xyz = ⟨∇_{e_x} e_y, e_z⟩` by Koszul.
    pub fn koszul(g: &MetricLieAlgebra) -> Vec<f64> {
        let d = g.dim();
        let c = |i: usize, j: usize, k: usize| g.constant(i, j, k);
        let mut out = vec![0.0; d * d * d];
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    out[(x * d + y) * d + z] = 0.5 * (c(x, y, z) - c(y, z, x) + c(z, x, y));
                }
            }
        }
        out
    }

    /// `(∇_x Ω)(y_1…y_4) = −Σ_i Ω(…, ∇_x y_i, …)`.
    pub fn nabla_omega(g: &MetricLieAlgebra) -> MixedTorsion {
        let d = g.dim();
        let gamma = koszul(g);
        let omega = g.structure().omega().clone();
        MixedForm::from_fn(d, 4, |x| {
            let mut row = AltForm::zero(d, 4);
            let tuples: Vec<Vec<usize>> = row.basis().iter().map(|t| t.iter().map(|&i| i as usize).collect()).collect();
            for (k, t) in tuples.iter().enumerate() {
                let mut v = 0.0;
                for slot in 0..4 {
                    for z in 0..d {
                        let gz = gamma[(x * d + t[slot]) * d + z];
                        if gz != 0.0 {
                            let mut idx = t.clone();
                            idx[slot] = z;
                            v -= gz * omega.get(&idx);
                        }
                    }
                }
                row.coeffs_mut()[k] = v;
            }
            row
        })
    }

    /// Cartan formula for a left-invariant form:
    /// `dα(x_0…x_p) = Σ_{a<b} (−1)^{a+b} α([x_a, x_b], …)`.
    pub fn cartan_d(g: &MetricLieAlgebra, alpha: &AltForm) -> AltForm {
        let d = g.dim();
        let p = alpha.degree();
        let mut out = AltForm::zero(d, p + 1);
        let tuples: Vec<Vec<usize>> = out.basis().iter().map(|t| t.iter().map(|&i| i as usize).collect()).collect();
        for (k, t) in tuples.iter().enumerate() {
            let mut v = 0.0;
            for a in 0..=p {
                for b in a + 1..=p {
                    let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                    let rest: Vec<usize> = t.iter().enumerate().filter(|(i, _)| *i != a && *i != b).map(|(_, &x)| x).collect();
                    for z in 0..d {
                        let c = g.constant(t[a], t[b], z);
                        if c != 0.0 {
                            let mut idx = vec![z];
                            idx.extend(&rest);
                            v += sign * c * alpha.get(&idx);
                        }
                    }
                }
            }
            out.coeffs_mut()[k] = v;
        }
        out
    }
}

fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn vdiff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

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

fn q(n: usize) -> QuatStructure {
    QuatStructure::standard(n).unwrap()
}

fn w_samples(q: &QuatStructure, g: &mut SeededRng, count: usize) -> Vec<MixedTorsion> {
    (0..count).map(|_| random_w_from(q, g)).collect()
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn c01_l_squared() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for n in [2, 3] {
        let q = q(n);
        let start = Instant::now();
        let d = q.dim();
        let nb = AltForm::zero(d, 3).basis().len();
        let mut l = DMatrix::zeros(nb, nb);
        let mut lib_gap: f64 = 0.0;
        for j in 0..nb {
            let mut e = AltForm::zero(d, 3);
            e.coeffs_mut()[j] = 1.0;
            let col = oracle::l_map(&q, &e);
            lib_gap = lib_gap.max(vdiff(col.coeffs(), q.l_map(&e).coeffs()));
            for (i, v) in col.coeffs().iter().enumerate() {
                l[(i, j)] = *v;
            }
        }
        let res = (&l * &l - DMatrix::<f64>::identity(nb, nb) * 9.0).amax();
        let secs = start.elapsed().as_secs_f64();
        ok &= res < 1e-9 && lib_gap < 1e-12 && secs < 5.0;
        details.push(format!("n={n} {nb}x{nb} max|L²−9| {res:.1e} in {secs:.2}s"));
    }
    verdict(ok, details.join("; "))
}

fn c02_l_on_rows() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let q = q(n);
        let mut g = rng(2);
        for a in w_samples(&q, &mut g, 20) {
            let mut num = 0.0;
            for row in a.rows() {
                let lr = oracle::l_map(&q, row);
                num += vdiff(lr.coeffs(), row.scaled(2.0).coeffs()).powi(2);
            }
            worst = worst.max(num.sqrt() / (2.0 * a.norm()));
        }
    }
    verdict(worst < 1e-9, format!("max relative ‖L(a_x) − 2a_x‖ {worst:.1e}"))
}

fn c03_lcal_spectrum() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for (n, want) in [(2, (40.0, 80.0)), (3, (168.0, 336.0))] {
        let q = q(n);
        let mut g = rng(3);
        let mut worst: f64 = 0.0;
        let mut gap: f64 = 0.0;
        for (i, a) in w_samples(&q, &mut g, 20).iter().enumerate() {
            let la = if i < 4 {
                let o = oracle::lcal(&q, a);
                gap = gap.max(rel_mixed(&q.lcal_unchecked(a), &o));
                o
            } else {
                q.lcal_unchecked(a)
            };
            let mut r = q.lcal_unchecked(&la);
            r.axpy(-2.0, &la);
            r.axpy(-8.0, a);
            worst = worst.max(r.norm() / a.norm());
        }
        let plus = trace_on_w(&q, |a| {
            let mut r = q.lcal_unchecked(a);
            r.axpy(2.0, a);
            r.scaled(1.0 / 6.0)
        });
        let minus = trace_on_w(&q, |a| {
            let mut r = a.scaled(4.0);
            r.axpy(-1.0, &q.lcal_unchecked(a));
            r.scaled(1.0 / 6.0)
        });
        ok &= worst < 1e-8 && gap < 1e-12 && (plus - want.0).abs() < 1e-6 && (minus - want.1).abs() < 1e-6;
        details.push(format!(
            "n={n} ‖(𝓛−4)(𝓛+2)a‖/‖a‖ {worst:.1e}, traces {plus:.4}/{minus:.4} (want {}/{})",
            want.0, want.1
        ));
    }
    verdict(ok, details.join("; "))
}

fn c04_hat_dstar() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let q = q(n);
        let mut g = rng(4);
        for _ in 0..20 {
            let b = gaussian_form(&mut g, q.dim(), 3);
            worst = worst.max(rel_form(&oracle::dstar(&hat_dstar(&q, &b)), &b));
        }
    }
    verdict(worst < 1e-9, format!("max relative ‖d*ĥat-d*(b) − b‖ {worst:.1e}"))
}

fn c05_dstar_lcal() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let q = q(n);
        let mut g = rng(5);
        for a in w_samples(&q, &mut g, 20) {
            let lhs = oracle::dstar(&q.lcal_unchecked(&a));
            let b = oracle::dstar(&a);
            let rhs = &b + &oracle::l_map(&q, &b);
            worst = worst.max(rel_form(&lhs, &rhs));
        }
    }
    verdict(worst < 1e-9, format!("max relative ‖d*𝓛a − d*a − L d*a‖ {worst:.1e}"))
}

fn c06_projectors() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for (n, want) in [(2, [0.0, 32.0, 8.0, 0.0, 64.0, 16.0]), (3, [28.0, 128.0, 12.0, 56.0, 256.0, 24.0])] {
        let q = q(n);
        let mut g = rng(6);
        let (mut idem, mut orth, mut complete): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for a in w_samples(&q, &mut g, 5) {
            let parts = decompose_unchecked(&q, &a);
            let mut sum = MixedForm::zero(q.dim(), 4);
            for (i, p) in parts.iter().enumerate() {
                sum.axpy(1.0, p);
                let again = component_unchecked(&q, p, ComponentLabel::ALL[i]);
                idem = idem.max(vdiff(&again.to_flat(), &p.to_flat()) / a.norm());
                for p2 in &parts[..i] {
                    orth = orth.max(p.inner(p2).abs() / a.norm_sq());
                }
            }
            complete = complete.max(rel_mixed(&sum, &a));
        }
        let traces: Vec<f64> = ComponentLabel::ALL
            .iter()
            .map(|&c| trace_on_w(&q, |a| component_unchecked(&q, a, c)))
            .collect();
        let trace_dev = traces.iter().zip(want).map(|(t, w)| (t - w).abs()).fold(0.0, f64::max);
        let sum: f64 = traces.iter().sum();
        ok &= idem < 1e-9 && orth < 1e-9 && complete < 1e-9 && trace_dev < 1e-6;
        let shown: Vec<String> = traces.iter().map(|t| format!("{t:.0}")).collect();
        details.push(format!(
            "n={n} traces ({}) sum {sum:.0}, idempotency {idem:.0e}, orthogonality {orth:.0e}, completeness {complete:.0e}",
            shown.join(",")
        ));
    }
    verdict(ok, details.join("; "))
}

fn c07_kernel() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for n in [2, 3] {
        let q = q(n);
        let mut g = rng(7);
        let mut worst: f64 = 0.0;
        for a in w_samples(&q, &mut g, 5) {
            for c in [ComponentLabel::L3EH, ComponentLabel::KS3H] {
                worst = worst.max(oracle::dstar(&component_unchecked(&q, &a, c)).norm() / a.norm());
            }
        }
        let smallest = dstar_singular_values_on_complement(&q)[0];
        ok &= worst < 1e-10 && smallest > 1e-6;
        details.push(format!("n={n} ‖d* on kernel‖ {worst:.1e}, smallest singular value elsewhere {smallest:.4}"));
    }
    verdict(ok, details.join("; "))
}

fn star_omega_round(q: &QuatStructure, a: &[f64]) -> Vec<f64> {
    let omega = oracle::omega(q);
    let d = q.dim();
    let af: oracle::Sparse = a.iter().enumerate().map(|(i, v)| (1u32 << i, *v)).collect();
    let inner = oracle::hodge(&oracle::from_sparse(d, 5, &oracle::wedge(&af, &omega)));
    let outer = oracle::wedge(&oracle::to_sparse(&inner), &omega);
    oracle::hodge(&oracle::from_sparse(d, d - 1, &outer)).into_coeffs()
}

fn kahler(q: &QuatStructure, a: Axis) -> oracle::Sparse {
    oracle::to_sparse(q.kahler(a))
}

fn one_form(v: &[f64]) -> oracle::Sparse {
    v.iter().enumerate().map(|(i, x)| (1u32 << i, *x)).collect()
}

fn c08_hodge_constants() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for n in [2, 3] {
        let q = q(n);
        let d = q.dim();
        let (k1, k2) = ((n - 1) as f64, (2 * n + 1) as f64);
        let mut g = rng(8);

        let quoted = 12.0 * k1 * k2;
        let (mut err, mut measured): (f64, f64) = (0.0, 0.0);
        for _ in 0..10 {
            let a = gaussian_vec(&mut g, d);
            let got = star_omega_round(&q, &a);
            let want: Vec<f64> = a.iter().map(|v| quoted * v).collect();
            err = err.max(rel(&got, &want));
            measured = got.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>() / a.iter().map(|y| y * y).sum::<f64>();
        }
        ok &= err < 1e-9;
        details.push(format!("n={n} ⋆(⋆(a∧Ω)∧Ω): want {quoted}, measured {measured:.3} (rel err {err:.2})"));

        let quoted = 4.0 * n as f64;
        let mut err: f64 = 0.0;
        for _ in 0..10 {
            let z = [0, 1, 2].map(|_| gaussian_vec(&mut g, d));
            let mut inner = oracle::Sparse::new();
            for b in Axis::ALL {
                let bz = one_form(&q.act_one_form(b, &z[b.index()]));
                for (k, v) in oracle::wedge(&bz, &kahler(&q, b)) {
                    *inner.entry(k).or_insert(0.0) += v;
                }
            }
            let star_inner = oracle::to_sparse(&oracle::hodge(&oracle::from_sparse(d, 3, &inner)));
            for a in Axis::ALL {
                let got = oracle::hodge(&oracle::from_sparse(d, d - 1, &oracle::wedge(&star_inner, &kahler(&q, a))));
                let want: Vec<f64> = q.act_one_form(a, &z[a.index()]).iter().map(|v| quoted * v).collect();
                err = err.max(rel(got.coeffs(), &want));
            }
        }
        ok &= err < 1e-9;
        details.push(format!("n={n} ⋆(Σ⋆(Bζ_B∧ω_B)∧ω_A): want {quoted}·Aζ_A, rel err {err:.2}"));

        let quoted = -4.0 * k1 * k2;
        let (mut err, mut measured): (f64, f64) = (0.0, 0.0);
        for _ in 0..10 {
            let z = [0, 1, 2].map(|_| gaussian_vec(&mut g, d));
            let mut inner = AltForm::zero(d, 3);
            for c in Axis::ALL {
                let cz = one_form(&q.act_one_form(c, &z[c.index()]));
                let term = oracle::from_sparse(d, 3, &oracle::wedge(&cz, &kahler(&q, c)));
                inner.axpy(1.0, &term);
            }
            let mut sum = oracle::Sparse::new();
            for b in Axis::ALL {
                let ib = oracle::to_sparse(&q.i_a(b, &inner));
                for (k, v) in oracle::wedge(&ib, &kahler(&q, b)) {
                    *sum.entry(k).or_insert(0.0) += v;
                }
            }
            let star_sum = oracle::to_sparse(&oracle::hodge(&oracle::from_sparse(d, 5, &sum)));
            for a in Axis::ALL {
                let sq = oracle::wedge(&kahler(&q, a), &kahler(&q, a));
                let got = oracle::hodge(&oracle::from_sparse(d, d - 1, &oracle::wedge(&star_sum, &sq)));
                let za = &z[a.index()];
                let want: Vec<f64> = za.iter().map(|v| quoted * v).collect();
                err = err.max(rel(got.coeffs(), &want));
                measured = got.coeffs().iter().zip(za).map(|(x, y)| x * y).sum::<f64>() / za.iter().map(|y| y * y).sum::<f64>();
            }
        }
        ok &= err < 1e-9;
        details.push(format!("n={n} ⋆(Σ⋆(i_B(Cζ_C∧ω_C)∧ω_B)∧ω_A∧ω_A): want {quoted}, measured {measured:.3} (rel err {err:.2})"));
    }
    verdict(ok, details.join("; "))
}

fn c09_alternation_identities() -> Verdict {
    let mut worst = [0.0f64; 3];
    for n in [2, 3] {
        let q = q(n);
        let d = q.dim();
        let mut g = rng(9);
        let omega = oracle::omega(&q);
        for a in w_samples(&q, &mut g, 20) {
            let d_omega = oracle::alternate(&a);
            let lhs = &oracle::alternate(&oracle::lcal(&q, &a)) + &d_omega.scaled(2.0);
            worst[0] = worst[0].max(rel_form(&lhs, &oracle::l_map(&q, &d_omega)));
        }
        for _ in 0..20 {
            let z = gaussian_vec(&mut g, d);
            let zf = one_form(&z);
            let omega_form = oracle::from_sparse(d, 4, &omega);
            let hook = oracle::to_sparse(&omega_form.interior(&z).unwrap());
            let m = MixedForm::from_fn(d, 4, |x| {
                let ex: oracle::Sparse = [(1u32 << x, 1.0)].into_iter().collect();
                let mut e = vec![0.0; d];
                e[x] = 1.0;
                let left = oracle::from_sparse(d, 4, &oracle::wedge(&ex, &hook));
                let right = oracle::from_sparse(d, 4, &oracle::wedge(&zf, &oracle::to_sparse(&omega_form.interior(&e).unwrap())));
                &left - &right
            });
            let want = oracle::from_sparse(d, 5, &oracle::wedge(&zf, &omega)).scaled(4.0);
            worst[1] = worst[1].max(rel_form(&oracle::alternate(&m), &want));
        }
        for _ in 0..20 {
            let b = gaussian_form(&mut g, d, 3);
            let mut want = oracle::Sparse::new();
            for ax in Axis::ALL {
                for (k, v) in oracle::wedge(&oracle::to_sparse(&q.i_a(ax, &b)), &kahler(&q, ax)) {
                    *want.entry(k).or_insert(0.0) += 2.0 * v;
                }
            }
            worst[2] = worst[2].max(rel_form(&oracle::alternate(&omega_lift(&q, &b)), &oracle::from_sparse(d, 5, &want)));
        }
    }
    let ok = worst.iter().all(|w| *w < 1e-9);
    verdict(
        ok,
        format!(
            "a(𝓛∇Ω)+2dΩ=L(dΩ) {:.1e}; a(·∧(ζ⌟Ω)−ζ∧(·⌟Ω))=4ζ∧Ω {:.1e}; a(Σi_A(·⌟b)∧ω_A)=2Σi_Ab∧ω_A {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn c10_volume() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for (n, want) in [(2usize, -120.0), (3, 5040.0)] {
        let q = q(n);
        let omega = oracle::omega(&q);
        let mut p: oracle::Sparse = [(0u32, 1.0)].into_iter().collect();
        for _ in 0..n {
            p = oracle::wedge(&p, &omega);
        }
        let top = *p.get(&((1u32 << q.dim()) - 1)).unwrap_or(&0.0);
        let lib = q.omega_power(n).coeffs()[0];
        let good = (top - want).abs() < 1e-9;
        ok &= good;
        details.push(format!("n={n} Ωⁿ = {top} (library {lib}), want {want}"));
    }
    verdict(ok, details.join("; "))
}

fn c11_round_trip() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    for (n, count) in [(2, 15), (3, 63)] {
        let q = q(n);
        let start = Instant::now();
        let classes: Vec<ClassLabel> = ClassLabel::all(n).into_iter().filter(|c| !c.is_empty()).collect();
        let wrong = classes
            .iter()
            .enumerate()
            .filter(|(i, c)| classify_unchecked(&q, &random_class_member(&q, **c, 1000 + *i as u64), CLASS_TOL).class != **c)
            .count();
        let secs = start.elapsed().as_secs_f64();
        ok &= classes.len() == count && wrong == 0 && secs < 600.0;
        details.push(format!("n={n} {}/{} exact in {secs:.1}s", classes.len() - wrong, classes.len()));
    }
    verdict(ok, details.join("; "))
}

fn c12_column_consistency() -> Verdict {
    let q = q(3);
    let rows = table2(3).unwrap();
    let singles: Vec<ClassLabel> = rows.iter().map(|r| r.class).filter(|c| c.components().len() == 1).collect();
    let composites: Vec<ClassLabel> = rows.iter().map(|r| r.class).filter(|c| c.components().len() >= 2).collect();
    let step = composites.len() / 12;
    let picked: Vec<ClassLabel> = singles.iter().copied().chain(composites.iter().step_by(step.max(1)).take(12).copied()).collect();
    let mut disagreements = 0;
    let mut wrong = 0;
    let mut evaluated = 0;
    for (r, class) in picked.iter().enumerate() {
        let outside = complement(*class, 3);
        for k in 0..20u64 {
            let seed = 5000 + 100 * r as u64 + k;
            let member = k < 10;
            let a = if member {
                random_class_member(&q, *class, seed)
            } else {
                let extra = outside[k as usize % outside.len()];
                random_class_member(&q, class.union(ClassLabel::from_components(&[extra])), seed)
            };
            let r2 = table2_residual(&q, &a, *class).unwrap().residual <= 1e-8;
            let r3 = table2_residual_d_omega(&q, &DerivedFromDOmega::from_torsion(&q, &a), *class).unwrap().residual <= 1e-8;
            evaluated += 1;
            if r2 != r3 {
                disagreements += 1;
            }
            if r2 != member {
                wrong += 1;
            }
        }
    }
    verdict(
        disagreements == 0 && wrong == 0 && singles.len() == 6 && picked.len() >= 16,
        format!(
            "{} rows ({} single, {} composite), {evaluated} tensors: {disagreements} column disagreements, {wrong} wrong verdicts",
            picked.len(),
            singles.len(),
            picked.len() - singles.len()
        ),
    )
}

fn c13_dimension_eight() -> Verdict {
    let q = q(2);
    let rows = table3();
    let mut worst_member: f64 = 0.0;
    let mut weakest = f64::INFINITY;
    for (i, row) in rows.iter().enumerate() {
        let a = random_class_member(&q, row.class, 700 + i as u64);
        worst_member = worst_member.max(table3_residual(&q, &DerivedFromDOmega::from_torsion(&q, &a), row.class).unwrap().residual);
        for (k, c) in complement(row.class, 2).into_iter().enumerate() {
            let b = random_class_member(&q, row.class.union(ClassLabel::from_components(&[c])), 800 + 10 * i as u64 + k as u64);
            weakest = weakest.min(table3_residual(&q, &DerivedFromDOmega::from_torsion(&q, &b), row.class).unwrap().residual);
        }
    }
    verdict(
        rows.len() == 8 && worst_member < 1e-8 && weakest > 1e-3,
        format!("{} rows, worst member residual {worst_member:.1e}, weakest non-member residual {weakest:.2e}", rows.len()),
    )
}

fn c14_lie_pipeline() -> Verdict {
    let mut details = Vec::new();
    let mut ok = true;
    let abelian = classify_algebra(&MetricLieAlgebra::abelian(q(2))).unwrap();
    ok &= abelian.class == "QK";
    details.push(format!("abelian → {}", abelian.class));
    for n in [2, 3] {
        let qs = q(n);
        let d = qs.dim();
        let mut g = rng(14);
        let der = DMatrix::from_vec(d - 1, d - 1, gaussian_vec(&mut g, (d - 1) * (d - 1)));
        let algebras = [
            ("semidirect", semidirect(qs.clone(), &der).unwrap()),
            ("two-step", two_step_nilpotent(qs.clone(), 3, 14).unwrap()),
            ("su2", su2_plus_abelian(qs.clone()).unwrap()),
            ("nilpotent", random_nilpotent(qs.clone(), 14).unwrap()),
        ];
        for (name, alg) in &algebras {
            assert!(!alg.is_abelian());
            let geo = LieGeometry::new(alg);
            let nabla = oracle::nabla_omega(alg);
            let cartan = oracle::cartan_d(alg, qs.omega());
            let nabla_gap = rel_mixed(&geo.nabla_omega, &nabla);
            let d_alt = rel_form(&cartan, &oracle::alternate(&nabla)).max(rel_form(&geo.d_omega, &cartan));
            let gray = Axis::ALL.map(|a| gray_residual(alg, &geo, a)).into_iter().fold(0.0, f64::max);
            let nij = Axis::ALL
                .map(|a| nijenhuis_trace(alg, a).iter().fold(0.0f64, |m, v| m.max(v.abs())))
                .into_iter()
                .fold(0.0, f64::max);
            let routes = CodifferentialRoutes::new(alg, &geo);
            let three = routes
                .pairwise(&["contraction", "hodge", "nijenhuis_route"])
                .iter()
                .map(|(_, _, r)| *r)
                .fold(0.0, f64::max);
            let contraction = oracle::dstar(&nabla);
            let oracle_gap = rel(&routes.contraction, contraction.coeffs());
            let good = nabla_gap < 1e-12 && d_alt < 1e-9 && gray < 1e-10 && nij < 1e-12 && three < 1e-9 && oracle_gap < 1e-12;
            ok &= good;
            details.push(format!(
                "n={n} {name}: dΩ vs a(∇Ω) {d_alt:.0e}, Gray {gray:.0e}, Nijenhuis {nij:.0e}, d*Ω three-way {three:.0e}"
            ));
        }
    }
    verdict(ok, details.join("; "))
}

fn c15_basis_independence() -> Verdict {
    let mut changed = 0;
    let mut total = 0;
    for n in [2, 3] {
        let q = q(n);
        let mut g = rng(15);
        let classes: Vec<ClassLabel> = ClassLabel::all(n).into_iter().filter(|c| !c.is_empty()).step_by(3).collect();
        let tensors: Vec<(ClassLabel, MixedTorsion)> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, random_class_member(&q, *c, 1500 + i as u64)))
            .collect();
        for _ in 0..20 {
            let q2 = q.rotate(&random_rotation(&mut g)).unwrap();
            for (c, a) in &tensors {
                let c1 = classify_unchecked(&q, a, CLASS_TOL).class;
                let c2 = classify_unchecked(&q2, a, CLASS_TOL).class;
                total += 1;
                if c1 != *c || c2 != c1 {
                    changed += 1;
                }
            }
        }
    }
    verdict(changed == 0, format!("{total} rotated classifications, {changed} changed"))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("L² = 9·Id on Λ³", c01_l_squared),
        ("L = 2·Id on rows of W", c02_l_on_rows),
        ("(𝓛−4)(𝓛+2) = 0 and eigenspace traces", c03_lcal_spectrum),
        ("d* ∘ ĥat-d* = Id", c04_hat_dstar),
        ("d* ∘ 𝓛 = d* + L ∘ d*", c05_dstar_lcal),
        ("six-projector suite", c06_projectors),
        ("ker d* = Λ₀³EH + KS³H", c07_kernel),
        ("quoted Hodge constants", c08_hodge_constants),
        ("alternation identities", c09_alternation_identities),
        ("Ωⁿ = (−1)^(n+1)(2n+1)!", c10_volume),
        ("classification round-trip", c11_round_trip),
        ("table column consistency at n=3", c12_column_consistency),
        ("dimension-8 table", c13_dimension_eight),
        ("Lie pipeline", c14_lie_pipeline),
        ("basis independence", c15_basis_independence),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        let status = if v.passed { "PASS" } else { "FAIL" };
        if !v.passed {
            failed += 1;
        }
        println!("{status} criterion {:>2}: {title} [{:.1}s] {}", i + 1, start.elapsed().as_secs_f64(), v.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
