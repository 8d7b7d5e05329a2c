//! Three-forms under `Sp(n)Sp(1)`: the contractions `ξ_b`, `ξ_{b;A}`, the
//! projectors onto `KH`, `EH`, `Λ³₀E S³H`, `E S³H`, the sixteen subspace
//! predicates, and the right inverse of `d*`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{dot, interior, wedge, AltForm};
use crate::mixed::{MixedForm, MixedTorsion};
use crate::quat::{Axis, QuatStructure};
use crate::torsion::{omega_lift, xi_bracket};

/// Basis-dependent one-forms `ξ_{b;I}, ξ_{b;J}, ξ_{b;K}` with the global `ξ_b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneFormTriple {
    pub xi_i: Vec<f64>,
    pub xi_j: Vec<f64>,
    pub xi_k: Vec<f64>,
    pub xi: Vec<f64>,
}

impl OneFormTriple {
    pub fn get(&self, a: Axis) -> &[f64] {
        match a {
            Axis::I => &self.xi_i,
            Axis::J => &self.xi_j,
            Axis::K => &self.xi_k,
        }
    }

    /// `(ξ_I + ξ_J + ξ_K) / 3`.
    pub fn mean(&self) -> Vec<f64> {
        (0..self.xi.len())
            .map(|i| (self.xi_i[i] + self.xi_j[i] + self.xi_k[i]) / 3.0)
            .collect()
    }
}

fn vnorm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn vsub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `⟨Ax⌟b, ω_A⟩` as a covector in `x`.
fn kahler_hook(q: &QuatStructure, a: Axis, b: &AltForm) -> Vec<f64> {
    let d = q.dim();
    let w = q.kahler(a);
    let mut e = vec![0.0; d];
    (0..d)
        .map(|x| {
            e.fill(0.0);
            e[x] = 1.0;
            let ax = q.apply(a, &e);
            dot(interior(&ax, b).coeffs(), w.coeffs())
        })
        .collect()
}

/// `ξ_b(x) = (1/(12(2n+1))) Σ_A Σ_r b(e_r, Ae_r, Ax)`.
pub fn xi(q: &QuatStructure, b: &AltForm) -> Vec<f64> {
    let d = q.dim();
    let s = 1.0 / (12.0 * q.k2());
    let mut out = vec![0.0; d];
    let mut e = vec![0.0; d];
    for a in Axis::ALL {
        let m = q.matrix(a);
        // Σ_r b(e_r, Ae_r, ·) as a 1-form, then evaluated at Ax
        let mut c = AltForm::zero(d, 1);
        for r in 0..d {
            let ae: Vec<f64> = (0..d).map(|k| m[(k, r)]).collect();
            e.fill(0.0);
            e[r] = 1.0;
            c += &interior(&ae, &interior(&e, b));
        }
        for (x, o) in out.iter_mut().enumerate() {
            *o += s * (0..d).map(|k| m[(k, x)] * c.coeffs()[k]).sum::<f64>();
        }
    }
    out
}

/// The second expression for `ξ_b`: `−(1/(6(2n+1))) Σ_A ⟨Ax⌟b, ω_A⟩`.
pub fn xi_via_kahler(q: &QuatStructure, b: &AltForm) -> Vec<f64> {
    let s = -1.0 / (6.0 * q.k2());
    let mut out = vec![0.0; q.dim()];
    for a in Axis::ALL {
        for (o, h) in out.iter_mut().zip(kahler_hook(q, a, b)) {
            *o += s * h;
        }
    }
    out
}

/// `ξ_{b;A}(x) = −(3/(2(n−1))) ξ_b(x) − (1/(4(n−1))) ⟨Ax⌟b, ω_A⟩`.
pub fn xi_triple(q: &QuatStructure, b: &AltForm) -> OneFormTriple {
    let x = xi(q, b);
    let k1 = q.k1();
    let per = Axis::ALL.map(|a| {
        let h = kahler_hook(q, a, b);
        x.iter()
            .zip(h)
            .map(|(xv, hv)| -1.5 / k1 * xv - 0.25 / k1 * hv)
            .collect::<Vec<f64>>()
    });
    let [xi_i, xi_j, xi_k] = per;
    OneFormTriple {
        xi_i,
        xi_j,
        xi_k,
        xi: x,
    }
}

/// `Σ_B Bξ_B ∧ ω_B`.
pub fn triple_form(q: &QuatStructure, t: &OneFormTriple) -> AltForm {
    let mut out = AltForm::zero(q.dim(), 3);
    for a in Axis::ALL {
        let ax = AltForm::one_form(&q.act_one_form(a, t.get(a)));
        out += &wedge(&ax, q.kahler(a));
    }
    out
}

/// `Σ_B ξ_B ∧ ω_B`, without the action of `B` on the one-forms.
pub fn triple_form_plain(q: &QuatStructure, t: &OneFormTriple) -> AltForm {
    let mut out = AltForm::zero(q.dim(), 3);
    for a in Axis::ALL {
        out += &wedge(&AltForm::one_form(t.get(a)), q.kahler(a));
    }
    out
}

/// `ξ ⌟ Ω`.
pub fn hook_omega(q: &QuatStructure, xi: &[f64]) -> AltForm {
    interior(xi, q.omega())
}

/// Operators on `Λ³` built from `L` and the `ξ` contractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Projector3 {
    KH,
    EH,
    L3ES3H,
    ES3H,
    /// `L = 3` eigenspace, `(K + E)H`.
    Plus3,
    /// `L = −3` eigenspace, `(Λ³₀E + E)S³H`.
    Minus3,
    /// `E(H + S³H)`.
    EHS3H,
}

impl Projector3 {
    pub const ALL: [Projector3; 7] = [
        Projector3::KH,
        Projector3::EH,
        Projector3::L3ES3H,
        Projector3::ES3H,
        Projector3::Plus3,
        Projector3::Minus3,
        Projector3::EHS3H,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "KH" => Projector3::KH,
            "EH" => Projector3::EH,
            "L3ES3H" | "L3E.S3H" => Projector3::L3ES3H,
            "ES3H" | "E.S3H" => Projector3::ES3H,
            "plus3" | "(K+E)H" => Projector3::Plus3,
            "minus3" | "(L3E+E)S3H" => Projector3::Minus3,
            "EHS3H" | "E(H+S3H)" => Projector3::EHS3H,
            _ => return Err(Error::UnknownLabel(s.to_string())),
        })
    }
}

/// Projection of a three-form onto one of the invariant subspaces.
pub fn proj3(q: &QuatStructure, b: &AltForm, which: Projector3) -> AltForm {
    let lb = || q.l_map(b);
    let plus = || (&b.scaled(3.0) + &lb()).scaled(1.0 / 6.0);
    let minus = || (&b.scaled(3.0) - &lb()).scaled(1.0 / 6.0);
    let eh = || hook_omega(q, &xi(q, b));
    let ehs3h = || triple_form(q, &xi_triple(q, b)).scaled(-2.0);
    match which {
        Projector3::Plus3 => plus(),
        Projector3::Minus3 => minus(),
        Projector3::EH => eh(),
        Projector3::EHS3H => ehs3h(),
        Projector3::ES3H => ehs3h() - eh(),
        Projector3::KH => plus() - eh(),
        Projector3::L3ES3H => minus() - (ehs3h() - eh()),
    }
}

/// The four irreducible parts of `Λ³` as a bit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Table1Row {
    pub kh: bool,
    pub eh: bool,
    pub l3es3h: bool,
    pub es3h: bool,
}

/// Names of the sixteen rows, `{0}` first and the full space last.
pub const TABLE1_ROWS: [&str; 16] = [
    "0",
    "KH",
    "EH",
    "L3ES3H",
    "ES3H",
    "(K+E)H",
    "KH+L3ES3H",
    "KH+ES3H",
    "EH+L3ES3H",
    "E(H+S3H)",
    "(L3E+E)S3H",
    "(K+E)H+L3ES3H",
    "(K+E)H+ES3H",
    "KH+(L3E+E)S3H",
    "EH+(L3E+E)S3H",
    "full",
];

impl Table1Row {
    pub fn parse(id: &str) -> Result<Self> {
        let (kh, eh, l3, es) = match id {
            "0" => (false, false, false, false),
            "KH" => (true, false, false, false),
            "EH" => (false, true, false, false),
            "L3ES3H" => (false, false, true, false),
            "ES3H" => (false, false, false, true),
            "(K+E)H" => (true, true, false, false),
            "KH+L3ES3H" => (true, false, true, false),
            "KH+ES3H" => (true, false, false, true),
            "EH+L3ES3H" => (false, true, true, false),
            "E(H+S3H)" => (false, true, false, true),
            "(L3E+E)S3H" => (false, false, true, true),
            "(K+E)H+L3ES3H" => (true, true, true, false),
            "(K+E)H+ES3H" => (true, true, false, true),
            "KH+(L3E+E)S3H" => (true, false, true, true),
            "EH+(L3E+E)S3H" => (false, true, true, true),
            "full" => (true, true, true, true),
            _ => return Err(Error::UnknownLabel(id.to_string())),
        };
        Ok(Self {
            kh,
            eh,
            l3es3h: l3,
            es3h: es,
        })
    }

    /// Irreducible parts excluded by this row.
    pub fn excluded(&self) -> Vec<Projector3> {
        let mut out = Vec::new();
        if !self.kh {
            out.push(Projector3::KH);
        }
        if !self.eh {
            out.push(Projector3::EH);
        }
        if !self.l3es3h {
            out.push(Projector3::L3ES3H);
        }
        if !self.es3h {
            out.push(Projector3::ES3H);
        }
        out
    }
}

/// Reading of the `KH + E S³H` row: with or without `A` acting on `ξ_{b;A}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KhEs3hReading {
    WithAction,
    Plain,
}

/// Residuals of the displayed conditions of one row, each divided by `‖b‖`.
pub fn table1_residuals(q: &QuatStructure, b: &AltForm, id: &str) -> Result<Vec<f64>> {
    table1_residuals_with(q, b, id, KhEs3hReading::WithAction)
}

pub fn table1_residuals_with(
    q: &QuatStructure,
    b: &AltForm,
    id: &str,
    reading: KhEs3hReading,
) -> Result<Vec<f64>> {
    Table1Row::parse(id)?;
    let scale = b.norm();
    if scale == 0.0 {
        return Ok(vec![0.0]);
    }
    let lb = q.l_map(b);
    let t = xi_triple(q, b);
    let hook = hook_omega(q, &t.xi);
    let tf = triple_form(q, &t);
    let l_minus = |c: f64| (&lb - &b.scaled(c)).norm();
    let xis_zero = || vnorm(&t.xi_i).max(vnorm(&t.xi_j)).max(vnorm(&t.xi_k));
    let xis_equal = || vnorm(&vsub(&t.xi_i, &t.xi_j)).max(vnorm(&vsub(&t.xi_j, &t.xi_k)));
    let r = match id {
        "0" => vec![scale],
        "KH" => vec![l_minus(3.0), vnorm(&t.xi)],
        "EH" => vec![(b - &hook).norm()],
        "L3ES3H" => vec![l_minus(-3.0), xis_zero()],
        "ES3H" => vec![(b + &tf.scaled(2.0)).norm(), vnorm(&t.xi)],
        "(K+E)H" => vec![l_minus(3.0)],
        "KH+L3ES3H" => vec![xis_zero()],
        "KH+ES3H" => {
            let sum = match reading {
                KhEs3hReading::WithAction => tf.clone(),
                KhEs3hReading::Plain => triple_form_plain(q, &t),
            };
            vec![(&(&lb - &b.scaled(3.0)) - &sum.scaled(12.0)).norm()]
        }
        "EH+L3ES3H" => vec![(&(&lb + &b.scaled(3.0)) - &hook.scaled(6.0)).norm(), xis_equal()],
        "E(H+S3H)" => vec![(b + &tf.scaled(2.0)).norm()],
        "(L3E+E)S3H" => vec![l_minus(-3.0)],
        "(K+E)H+L3ES3H" => vec![xis_equal()],
        "(K+E)H+ES3H" => {
            let rhs = &(&b.scaled(3.0) + &hook.scaled(6.0)) + &tf.scaled(12.0);
            vec![(&lb - &rhs).norm()]
        }
        "KH+(L3E+E)S3H" => vec![vnorm(&t.xi)],
        "EH+(L3E+E)S3H" => vec![(&(&lb + &b.scaled(3.0)) - &hook.scaled(6.0)).norm()],
        "full" => vec![0.0],
        _ => unreachable!("validated above"),
    };
    Ok(r.into_iter().map(|x| x / scale).collect())
}

/// Whether `b` satisfies the displayed conditions of a row.
pub fn table1_member(q: &QuatStructure, b: &AltForm, id: &str, tol: f64) -> Result<bool> {
    Ok(table1_residuals(q, b, id)?.iter().all(|&r| r <= tol))
}

/// Membership by projector norms: the excluded parts must vanish.
pub fn table1_member_by_projectors(q: &QuatStructure, b: &AltForm, id: &str, tol: f64) -> Result<bool> {
    let row = Table1Row::parse(id)?;
    let scale = b.norm();
    if scale == 0.0 {
        return Ok(true);
    }
    Ok(row
        .excluded()
        .into_iter()
        .all(|p| proj3(q, b, p).norm() <= tol * scale))
}

/// Right inverse of `d*` on `Λ³`.
pub fn hat_dstar(q: &QuatStructure, b: &AltForm) -> MixedTorsion {
    let (k1, k2) = (q.k1(), q.k2());
    let t = xi_triple(q, b);
    let mut out = omega_lift(q, &q.l_map(b)).scaled(1.0 / 18.0);
    out.axpy(-2.0 * k1 / (3.0 * k2), &omega_lift(q, &triple_form(q, &t)));
    let c = (4.0 * k1 * k1 + k2 * k2) / (12.0 * k1 * k2);
    out.axpy(-c, &xi_bracket(q, &t.xi));
    out
}

/// `d* a = −C₁₂(a)`.
pub fn dstar(a: &MixedTorsion) -> AltForm {
    a.contract12()
}

/// `Σ_A i_A(·⌟b) ∧ ω_A`, with rows `x ↦ Σ_A i_A(x⌟b) ∧ ω_A`.
pub fn omega_lift3(q: &QuatStructure, b: &AltForm) -> MixedForm {
    omega_lift(q, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_form;
    use crate::torsion::is_in_w;

    #[test]
    fn xi_of_hook_is_the_vector() {
        let q = QuatStructure::standard(2).unwrap();
        let x: Vec<f64> = (0..8).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = hook_omega(&q, &x);
        let t = xi_triple(&q, &b);
        for v in [&t.xi, &t.xi_i, &t.xi_j, &t.xi_k] {
            assert!(vnorm(&vsub(v, &x)) < 1e-12);
        }
        assert!(vnorm(&vsub(&xi_via_kahler(&q, &b), &x)) < 1e-12);
    }

    #[test]
    fn right_inverse_of_dstar() {
        for n in [2, 3] {
            let q = QuatStructure::standard(n).unwrap();
            let b = random_form(4 * n, 3, 11);
            let a = hat_dstar(&q, &b);
            assert!(dstar(&a).rel_dist(&b) < 1e-12);
            assert!(is_in_w(&q, &a, 1e-10));
        }
    }

    #[test]
    fn projectors_sum_to_identity() {
        let q = QuatStructure::standard(3).unwrap();
        let b = random_form(12, 3, 12);
        let mut s = AltForm::zero(12, 3);
        for p in [Projector3::KH, Projector3::EH, Projector3::L3ES3H, Projector3::ES3H] {
            s += &proj3(&q, &b, p);
        }
        assert!(s.rel_dist(&b) < 1e-12);
    }

    #[test]
    fn zero_satisfies_every_row() {
        let q = QuatStructure::standard(2).unwrap();
        let z = AltForm::zero(8, 3);
        for id in TABLE1_ROWS {
            assert!(table1_member(&q, &z, id, 1e-12).unwrap());
        }
        assert!(Table1Row::parse("nope").is_err());
    }
}
