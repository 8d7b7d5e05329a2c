//! Explicit characterisations of every class: conditions on `∇Ω` and the
//! equivalent conditions on `dΩ` (dimension at least 12), and the partial
//! conditions on `dΩ` in dimension 8.
//!
//! A condition is a linear relation `Σ cᵢ Tᵢ = 0` among a fixed vocabulary of
//! terms. A row holds one or more alternatives, each a list of conditions.
//! Its residual is the smallest, over alternatives, of the largest condition
//! residual.

use serde::{Deserialize, Serialize};

use crate::classifier::{star_kahler_squares, ClassLabel, DerivedFromDOmega};
use crate::components::ComponentLabel;
use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::mixed::MixedTorsion;
use crate::quat::{Axis, QuatStructure};
use crate::threeform::{hook_omega, triple_form};
use crate::torsion::{omega_lift, omega_lift_form, xi_bracket};

/// Below this norm the input counts as zero and residuals are absolute.
pub const ZERO_SCALE: f64 = 1e-12;

/// Building blocks of the conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    /// `∇Ω`.
    Nabla,
    /// `𝓛(∇Ω)`.
    LcalNabla,
    /// `Σ_A i_A(·⌟d*Ω) ∧ ω_A`.
    LiftDstar,
    /// `Σ_A i_A(·⌟L(d*Ω)) ∧ ω_A`.
    LiftLDstar,
    /// `Σ_{A,B} i_A(·⌟(Bξ_B ∧ ω_B)) ∧ ω_A`.
    LiftTriple,
    /// `{·∧(ξ⌟Ω) − ξ∧(·⌟Ω)}`.
    XiBracket,
    /// `dΩ`.
    DOmega,
    /// `L(dΩ)`.
    LDOmega,
    /// `Σ_A i_A(d*Ω) ∧ ω_A`.
    WedgeDstar,
    /// `Σ_A i_A(L(d*Ω)) ∧ ω_A`.
    WedgeLDstar,
    /// `Σ_{A,B} i_A(Bξ_B ∧ ω_B) ∧ ω_A`.
    WedgeTriple,
    /// `ξ ∧ Ω`.
    XiWedgeOmega,
    /// `d*Ω`.
    Dstar,
    /// `L(d*Ω)`.
    LDstar,
    /// `ξ ⌟ Ω`.
    XiHook,
    /// `Σ_A Aξ_A ∧ ω_A`.
    TripleForm,
    /// `ξ`.
    Xi,
    /// `ξ_A`.
    XiA(Axis),
    /// `Ω^{n−2} ∧ dΩ`.
    OmegaPowerDOmega,
    /// `⋆dΩ ∧ Ω`.
    StarDOmegaOmega,
    /// `⋆dΩ ∧ ω_A ∧ ω_A`.
    StarDOmegaKahler(Axis),
}

impl Term {
    fn needs_nabla(self) -> bool {
        matches!(self, Term::Nabla | Term::LcalNabla)
    }
}

/// `Σ cᵢ Tᵢ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition(pub Vec<(f64, Term)>);

/// One row: a class and its characterisations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub class: ClassLabel,
    /// Alternatives in terms of `∇Ω`.
    pub nabla: Vec<Vec<Condition>>,
    /// Alternatives in terms of `dΩ`.
    pub d_omega: Vec<Vec<Condition>>,
}

/// Everything a term can be evaluated from.
pub struct TermContext<'a> {
    pub q: &'a QuatStructure,
    pub nabla: Option<&'a MixedTorsion>,
    pub derived: &'a DerivedFromDOmega,
}

impl TermContext<'_> {
    pub fn eval_term(&self, t: Term) -> Result<Vec<f64>> {
        let q = self.q;
        let d = self.derived;
        let nabla = || {
            self.nabla
                .ok_or_else(|| Error::Unsupported("condition needs ∇Ω".into()))
        };
        let flat = |f: AltForm| f.into_coeffs();
        let wedge = |a: &AltForm, b: &AltForm| a.wedge(b);
        Ok(match t {
            Term::Nabla => nabla()?.to_flat(),
            Term::LcalNabla => q.lcal_unchecked(nabla()?).to_flat(),
            Term::LiftDstar => omega_lift(q, &d.dstar_omega).to_flat(),
            Term::LiftLDstar => omega_lift(q, &q.l_map(&d.dstar_omega)).to_flat(),
            Term::LiftTriple => omega_lift(q, &triple_form(q, &d.xi_triple)).to_flat(),
            Term::XiBracket => xi_bracket(q, &d.xi).to_flat(),
            Term::DOmega => d.d_omega.coeffs().to_vec(),
            Term::LDOmega => flat(q.l_map(&d.d_omega)),
            Term::WedgeDstar => flat(omega_lift_form(q, &d.dstar_omega)),
            Term::WedgeLDstar => flat(omega_lift_form(q, &q.l_map(&d.dstar_omega))),
            Term::WedgeTriple => flat(omega_lift_form(q, &triple_form(q, &d.xi_triple))),
            Term::XiWedgeOmega => flat(wedge(&AltForm::one_form(&d.xi), q.omega())?),
            Term::Dstar => d.dstar_omega.coeffs().to_vec(),
            Term::LDstar => flat(q.l_map(&d.dstar_omega)),
            Term::XiHook => flat(hook_omega(q, &d.xi)),
            Term::TripleForm => flat(triple_form(q, &d.xi_triple)),
            Term::Xi => d.xi.clone(),
            Term::XiA(a) => d.xi_triple.get(a).to_vec(),
            Term::OmegaPowerDOmega => flat(wedge(&q.omega_power(q.n() - 2), &d.d_omega)?),
            Term::StarDOmegaOmega => flat(wedge(&d.d_omega.hodge(), q.omega())?),
            Term::StarDOmegaKahler(a) => flat(star_kahler_squares(q, &d.d_omega)[a.index()].clone()),
        })
    }

    /// `‖Σ cᵢ Tᵢ‖`.
    pub fn condition_norm(&self, c: &Condition) -> Result<f64> {
        let mut acc: Option<Vec<f64>> = None;
        for (coef, t) in &c.0 {
            let v = self.eval_term(*t)?;
            match acc.as_mut() {
                None => acc = Some(v.iter().map(|x| coef * x).collect()),
                Some(s) => {
                    if s.len() != v.len() {
                        return Err(Error::DimensionMismatch {
                            expected: s.len(),
                            got: v.len(),
                        });
                    }
                    for (a, b) in s.iter_mut().zip(&v) {
                        *a += coef * b;
                    }
                }
            }
        }
        Ok(acc.map_or(0.0, |s| s.iter().map(|x| x * x).sum::<f64>().sqrt()))
    }
}

/// Residuals of one row on one tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowResidual {
    pub class: String,
    /// Per alternative, per condition, relative residuals.
    pub conditions: Vec<Vec<f64>>,
    pub residual: f64,
}

fn evaluate(ctx: &TermContext<'_>, class: ClassLabel, alts: &[Vec<Condition>], scale: f64) -> Result<RowResidual> {
    let s = if scale > ZERO_SCALE { scale } else { 1.0 };
    let mut conditions = Vec::with_capacity(alts.len());
    for alt in alts {
        let r = alt
            .iter()
            .map(|c| ctx.condition_norm(c).map(|v| v / s))
            .collect::<Result<Vec<f64>>>()?;
        conditions.push(r);
    }
    let residual = if conditions.is_empty() {
        0.0
    } else {
        conditions
            .iter()
            .map(|r| r.iter().copied().fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min)
    };
    Ok(RowResidual {
        class: class.ascii(),
        conditions,
        residual,
    })
}

fn lookup(rows: &[TableRow], class: ClassLabel) -> Result<&TableRow> {
    rows.iter()
        .find(|r| r.class == class)
        .ok_or_else(|| Error::UnknownLabel(class.ascii()))
}

/// Residual of the `∇Ω` characterisation of `class`, relative to `‖∇Ω‖`;
/// `ξ`, `ξ_A` and `d*Ω` come from `∇Ω` by contraction.
pub fn table2_residual(q: &QuatStructure, a: &MixedTorsion, class: ClassLabel) -> Result<RowResidual> {
    let rows = table2(q.n())?;
    let row = lookup(&rows, class)?;
    let derived = DerivedFromDOmega::by_contraction(q, a);
    let ctx = TermContext {
        q,
        nabla: Some(a),
        derived: &derived,
    };
    evaluate(&ctx, class, &row.nabla, a.norm())
}

/// Residual of the `dΩ` characterisation of `class`, relative to `‖dΩ‖`.
pub fn table2_residual_d_omega(q: &QuatStructure, d: &DerivedFromDOmega, class: ClassLabel) -> Result<RowResidual> {
    if q.n() < 3 {
        return Err(Error::Unsupported(
            "in dimension 8, dΩ does not determine ∇Ω; use the dimension-8 table".into(),
        ));
    }
    let rows = table2(q.n())?;
    let row = lookup(&rows, class)?;
    let ctx = TermContext {
        q,
        nabla: None,
        derived: d,
    };
    evaluate(&ctx, class, &row.d_omega, d.d_omega.norm())
}

/// Residual of a dimension-8 row, relative to `‖dΩ‖`.
pub fn table3_residual(q: &QuatStructure, d: &DerivedFromDOmega, class: ClassLabel) -> Result<RowResidual> {
    if q.n() != 2 {
        return Err(Error::Unsupported("the dimension-8 table needs n = 2".into()));
    }
    let rows = table3();
    let row = lookup(&rows, class)?;
    let ctx = TermContext {
        q,
        nabla: None,
        derived: d,
    };
    evaluate(&ctx, class, &row.d_omega, d.d_omega.norm())
}

fn cls(s: &str) -> ClassLabel {
    ClassLabel::parse(s).expect("static label")
}

fn c(terms: &[(f64, Term)]) -> Condition {
    Condition(terms.to_vec())
}

fn zero(t: Term) -> Condition {
    Condition(vec![(1.0, t)])
}

fn xi_equal() -> Vec<Condition> {
    vec![
        c(&[(1.0, Term::XiA(Axis::I)), (-1.0, Term::XiA(Axis::J))]),
        c(&[(1.0, Term::XiA(Axis::J)), (-1.0, Term::XiA(Axis::K))]),
    ]
}

fn xi_all_zero() -> Vec<Condition> {
    Axis::ALL.map(|a| zero(Term::XiA(a))).to_vec()
}

fn star_kahler_equal() -> Vec<Condition> {
    let s = Term::StarDOmegaKahler;
    vec![
        c(&[(1.0, s(Axis::I)), (-1.0, s(Axis::J))]),
        c(&[(1.0, s(Axis::J)), (-1.0, s(Axis::K))]),
    ]
}

fn star_kahler_zero() -> Vec<Condition> {
    Axis::ALL.map(|a| zero(Term::StarDOmegaKahler(a))).to_vec()
}

fn with(mut v: Vec<Condition>, more: Vec<Condition>) -> Vec<Condition> {
    v.extend(more);
    v
}

/// The 64 rows for `n ≥ 3`.
pub fn table2(n: usize) -> Result<Vec<TableRow>> {
    if n < 2 {
        return Err(Error::InvalidQuaternionicDimension(n));
    }
    use Term::*;
    let k1 = (n - 1) as f64;
    let k2 = (2 * n + 1) as f64;
    let mut rows = Vec::with_capacity(64);
    let mut row = |class: &str, nabla: Vec<Vec<Condition>>, d_omega: Option<Vec<Vec<Condition>>>| {
        let d_omega = d_omega.unwrap_or_else(|| nabla.clone());
        debug_assert!(d_omega.iter().flatten().all(|c| c.0.iter().all(|(_, t)| !t.needs_nabla())));
        rows.push(TableRow {
            class: cls(class),
            nabla,
            d_omega,
        });
    };
    let h4 = [(1.0, LcalNabla), (-4.0, Nabla)];
    let s2 = [(1.0, LcalNabla), (2.0, Nabla)];
    let l6 = [(1.0, LDOmega), (-6.0, DOmega)];
    let ext = |base: &[(f64, Term)], more: &[(f64, Term)]| {
        let mut v = base.to_vec();
        v.extend_from_slice(more);
        c(&v)
    };
    let xi0 = || vec![zero(Xi)];
    let dstar_hook = || c(&[(1.0, Dstar), (-1.0, XiHook)]);
    let dstar_triple = || c(&[(1.0, Dstar), (2.0, TripleForm)]);

    row("QK", vec![vec![zero(Nabla)]], Some(vec![vec![zero(DOmega)]]));
    row(
        "L3EH",
        vec![vec![c(&h4), zero(Dstar)]],
        Some(vec![vec![c(&l6), zero(Dstar)]]),
    );
    row(
        "KH",
        vec![with(vec![c(&[(1.0, Nabla), (-1.0 / 6.0, LiftDstar)])], xi_equal())],
        Some(vec![with(vec![c(&[(1.0, DOmega), (-1.0 / 3.0, WedgeDstar)])], xi_equal())]),
    );
    row(
        "EH",
        vec![vec![c(&[(1.0, Nabla), (1.0 / (4.0 * k1), XiBracket)])]],
        Some(vec![vec![c(&[(1.0, DOmega), (1.0 / k1, XiWedgeOmega)])]]),
    );
    row(
        "L3ES3H",
        vec![with(vec![c(&[(1.0, Nabla), (1.0 / 6.0, LiftDstar)])], xi0())],
        Some(vec![with(vec![c(&[(1.0, DOmega), (1.0 / 3.0, WedgeDstar)])], xi0())]),
    );
    row(
        "KS3H",
        vec![vec![c(&s2), zero(Dstar)]],
        Some(vec![vec![zero(LDOmega), zero(Dstar)]]),
    );
    row(
        "ES3H",
        vec![with(vec![c(&[(1.0, Nabla), (-1.0 / k2, LiftTriple)])], xi0())],
        Some(vec![with(vec![c(&[(1.0, DOmega), (-2.0 / k2, WedgeTriple)])], xi0())]),
    );
    row(
        "(L3E+K)H",
        vec![with(vec![c(&h4)], xi0())],
        Some(vec![with(vec![c(&l6)], xi0())]),
    );
    row(
        "(L3E+E)H",
        vec![vec![c(&h4), dstar_hook()]],
        Some(vec![vec![c(&l6), dstar_hook()]]),
    );
    row(
        "L3E(H+S3H)",
        vec![with(vec![ext(&h4, &[(-1.0, LiftDstar)])], xi0())],
        Some(vec![with(vec![ext(&l6, &[(-2.0, WedgeDstar)])], xi0())]),
    );
    row(
        "L3EH+KS3H",
        vec![vec![zero(Dstar)], vec![zero(OmegaPowerDOmega)]],
        None,
    );
    row(
        "L3EH+ES3H",
        vec![vec![ext(&h4, &[(6.0 / k2, LiftTriple)]), dstar_triple()]],
        Some(vec![vec![ext(&l6, &[(12.0 / k2, WedgeTriple)]), dstar_triple()]]),
    );
    row(
        "(K+E)H",
        vec![with(
            vec![c(&[(1.0, Nabla), (-1.0 / 6.0, LiftDstar), (k2 / (12.0 * k1), XiBracket)])],
            xi_equal(),
        )],
        Some(vec![with(
            vec![c(&[(1.0, DOmega), (-1.0 / 3.0, WedgeDstar), (k2 / (3.0 * k1), XiWedgeOmega)])],
            xi_equal(),
        )]),
    );
    row(
        "KH+L3ES3H",
        vec![vec![c(&[(1.0, Nabla), (-1.0 / 18.0, LiftLDstar)])]],
        Some(vec![vec![c(&[(1.0, DOmega), (-1.0 / 9.0, WedgeLDstar)])]]),
    );
    row(
        "K(H+S3H)",
        vec![with(vec![ext(&s2, &[(-1.0, LiftDstar)])], xi_equal())],
        Some(vec![with(vec![c(&[(1.0, LDOmega), (-2.0, WedgeDstar)])], xi_equal())]),
    );
    row(
        "KH+ES3H",
        vec![vec![c(&[
            (1.0, Nabla),
            (-1.0 / 6.0, LiftDstar),
            (-(k2 + 3.0) / (3.0 * k2), LiftTriple),
        ])]],
        Some(vec![vec![c(&[
            (1.0, DOmega),
            (-1.0 / 3.0, WedgeDstar),
            (-2.0 * (k2 + 3.0) / (3.0 * k2), WedgeTriple),
        ])]]),
    );
    row(
        "EH+L3ES3H",
        vec![vec![c(&[
            (1.0, Nabla),
            (1.0 / 6.0, LiftDstar),
            (-(k2 - 6.0) / (12.0 * k1), XiBracket),
        ])]],
        Some(vec![vec![c(&[
            (1.0, DOmega),
            (1.0 / 3.0, WedgeDstar),
            (-(k2 - 6.0) / (3.0 * k1), XiWedgeOmega),
        ])]]),
    );
    row(
        "EH+KS3H",
        vec![vec![ext(&s2, &[(3.0 / (2.0 * k1), XiBracket)]), dstar_hook()]],
        Some(vec![vec![c(&[(1.0, LDOmega), (6.0 / k1, XiWedgeOmega)]), dstar_hook()]]),
    );
    row(
        "E(H+S3H)",
        vec![vec![c(&[
            (1.0, Nabla),
            (-1.0 / k2, LiftTriple),
            (3.0 / (4.0 * k1 * k2), XiBracket),
        ])]],
        Some(vec![vec![c(&[
            (1.0, DOmega),
            (-2.0 / k2, WedgeTriple),
            (3.0 / (k1 * k2), XiWedgeOmega),
        ])]]),
    );
    row(
        "(L3E+K)S3H",
        vec![with(vec![c(&s2)], xi_equal())],
        Some(vec![with(vec![zero(LDOmega)], xi_equal())]),
    );
    row(
        "(L3E+E)S3H",
        vec![with(
            vec![c(&[(1.0, Nabla), (1.0 / 6.0, LiftDstar), (2.0 * k1 / (3.0 * k2), LiftTriple)])],
            xi0(),
        )],
        Some(vec![with(
            vec![c(&[(1.0, DOmega), (1.0 / 3.0, WedgeDstar), (4.0 * k1 / (3.0 * k2), WedgeTriple)])],
            xi0(),
        )]),
    );
    row(
        "(K+E)S3H",
        vec![vec![c(&s2), dstar_triple()]],
        Some(vec![vec![zero(LDOmega), dstar_triple()]]),
    );
    row("(L3E+K+E)H", vec![vec![c(&h4)]], Some(vec![vec![c(&l6)]]));
    row(
        "(L3E+K)H+L3ES3H",
        vec![with(vec![ext(&h4, &[(-0.5, LiftDstar), (1.0 / 6.0, LiftLDstar)])], xi0())],
        Some(vec![with(vec![ext(&l6, &[(-1.0, WedgeDstar), (1.0 / 3.0, WedgeLDstar)])], xi0())]),
    );
    row(
        "(L3E+K)H+KS3H",
        vec![with(vec![c(&[(1.0, LDstar), (-3.0, Dstar)])], xi0())],
        None,
    );
    row(
        "(L3E+K)H+ES3H",
        vec![vec![ext(&h4, &[(6.0 / k2, LiftTriple)])]],
        Some(vec![vec![ext(&l6, &[(12.0 / k2, WedgeTriple)])]]),
    );
    row(
        "L3E(H+S3H)+EH",
        vec![vec![ext(&h4, &[(-1.0, LiftDstar), (1.0, XiBracket)])]],
        Some(vec![vec![ext(&l6, &[(-2.0, WedgeDstar), (4.0, XiWedgeOmega)])]]),
    );
    row("(L3E+E)H+KS3H", vec![vec![dstar_hook()]], None);
    row(
        "(L3E+E)H+ES3H",
        vec![vec![ext(&h4, &[(6.0 / k2, LiftTriple), (3.0 / k2, XiBracket)]), dstar_triple()]],
        Some(vec![vec![
            ext(&l6, &[(12.0 / k2, WedgeTriple), (12.0 / k2, XiWedgeOmega)]),
            dstar_triple(),
        ]]),
    );
    row(
        "L3E(H+S3H)+KS3H",
        vec![with(vec![c(&[(1.0, LDstar), (3.0, Dstar)])], xi_equal())],
        None,
    );
    row(
        "L3E(H+S3H)+ES3H",
        vec![with(vec![ext(&h4, &[(-1.0, LiftDstar), (-4.0 * k1 / k2, LiftTriple)])], xi0())],
        Some(vec![with(vec![ext(&l6, &[(-2.0, WedgeDstar), (-8.0 * k1 / k2, WedgeTriple)])], xi0())]),
    );
    row("L3EH+(K+E)S3H", vec![with(vec![dstar_triple()], xi0())], None);
    row(
        "(K+E)H+L3ES3H",
        vec![vec![c(&[
            (1.0, Nabla),
            (-1.0 / 18.0, LiftLDstar),
            (k2 / (12.0 * k1), XiBracket),
        ])]],
        Some(vec![vec![c(&[
            (1.0, DOmega),
            (-1.0 / 9.0, WedgeLDstar),
            (k2 / (3.0 * k1), XiWedgeOmega),
        ])]]),
    );
    row(
        "K(H+S3H)+EH",
        vec![vec![ext(&s2, &[(-1.0, LiftDstar), (k2 / (2.0 * k1), XiBracket)])]],
        Some(vec![vec![c(&[(1.0, LDOmega), (-2.0, WedgeDstar), (2.0 * k2 / k1, XiWedgeOmega)])]]),
    );
    row(
        "E(H+S3H)+KH",
        vec![vec![c(&[
            (1.0, Nabla),
            (-1.0 / 6.0, LiftDstar),
            (-(k2 + 3.0) / (3.0 * k2), LiftTriple),
            (3.0 / (4.0 * k1 * k2), XiBracket),
        ])]],
        Some(vec![vec![c(&[
            (1.0, DOmega),
            (-1.0 / 3.0, WedgeDstar),
            (-(2.0 * k2 + 6.0) / (3.0 * k2), WedgeTriple),
            (3.0 / (k1 * k2), XiWedgeOmega),
        ])]]),
    );
    row(
        "K(H+S3H)+L3ES3H",
        vec![with(vec![ext(&s2, &[(-0.5, LiftDstar), (-1.0 / 6.0, LiftLDstar)])], xi_equal())],
        Some(vec![with(
            vec![c(&[(1.0, LDOmega), (-1.0, WedgeDstar), (-1.0 / 3.0, WedgeLDstar)])],
            xi_equal(),
        )]),
    );
    row(
        "KH+(L3E+E)S3H",
        vec![vec![c(&[
            (1.0, Nabla),
            (-1.0 / 18.0, LiftLDstar),
            (2.0 * k1 / (3.0 * k2), LiftTriple),
        ])]],
        Some(vec![vec![c(&[
            (1.0, DOmega),
            (-1.0 / 9.0, WedgeLDstar),
            (4.0 * k1 / (3.0 * k2), WedgeTriple),
        ])]]),
    );
    row(
        "K(H+S3H)+ES3H",
        vec![vec![ext(&s2, &[(-1.0, LiftDstar), (-2.0, LiftTriple)])]],
        Some(vec![vec![c(&[(1.0, LDOmega), (-2.0, WedgeDstar), (-4.0, WedgeTriple)])]]),
    );
    row(
        "EH+(L3E+K)S3H",
        vec![with(vec![ext(&s2, &[(3.0 / (2.0 * k1), XiBracket)])], xi_equal())],
        Some(vec![with(vec![c(&[(1.0, LDOmega), (6.0 / k1, XiWedgeOmega)])], xi_equal())]),
    );
    row(
        "E(H+S3H)+L3ES3H",
        vec![vec![c(&[
            (1.0, Nabla),
            (1.0 / 6.0, LiftDstar),
            (2.0 * k1 / (3.0 * k2), LiftTriple),
            (3.0 / (4.0 * k1 * k2), XiBracket),
        ])]],
        Some(vec![vec![c(&[
            (1.0, DOmega),
            (1.0 / 3.0, WedgeDstar),
            (4.0 * k1 / (3.0 * k2), WedgeTriple),
            (3.0 / (k1 * k2), XiWedgeOmega),
        ])]]),
    );
    row(
        "E(H+S3H)+KS3H",
        vec![vec![ext(&s2, &[(3.0 / (2.0 * k1), XiBracket)]), dstar_triple()]],
        Some(vec![vec![c(&[(1.0, LDOmega), (6.0 / k1, XiWedgeOmega)]), dstar_triple()]]),
    );
    row("(L3E+K+E)S3H", vec![vec![c(&s2)]], Some(vec![vec![zero(LDOmega)]]));
    row(
        "L3E(H+S3H)+(K+E)H",
        vec![vec![ext(&h4, &[(-0.5, LiftDstar), (1.0 / 6.0, LiftLDstar)])]],
        Some(vec![vec![ext(&l6, &[(-1.0, WedgeDstar), (1.0 / 3.0, WedgeLDstar)])]]),
    );
    row(
        "K(H+S3H)+(L3E+E)H",
        vec![vec![c(&[(1.0, LDstar), (-3.0, Dstar)])]],
        None,
    );
    row(
        "E(H+S3H)+(L3E+K)H",
        vec![vec![ext(&h4, &[(3.0 / k2, XiBracket), (6.0 / k2, LiftTriple)])]],
        Some(vec![vec![ext(&l6, &[(12.0 / k2, XiWedgeOmega), (12.0 / k2, WedgeTriple)])]]),
    );
    row(
        "(L3E+K)(H+S3H)",
        vec![xi_all_zero(), star_kahler_zero()],
        None,
    );
    row(
        "L3E(H+S3H)+KH+ES3H",
        vec![vec![ext(
            &h4,
            &[(-0.5, LiftDstar), (1.0 / 6.0, LiftLDstar), (-4.0 * k1 / k2, LiftTriple)],
        )]],
        Some(vec![vec![ext(
            &l6,
            &[(-1.0, WedgeDstar), (1.0 / 3.0, WedgeLDstar), (-8.0 * k1 / k2, WedgeTriple)],
        )]]),
    );
    row(
        "(L3E+K)H+(K+E)S3H",
        vec![vec![c(&[(1.0, LDstar), (-3.0, Dstar), (-12.0, TripleForm)])]],
        None,
    );
    row(
        "(L3E+E)H+(L3E+K)S3H",
        vec![with(vec![c(&[(1.0, LDstar), (3.0, Dstar), (-6.0, XiHook)])], xi_equal())],
        None,
    );
    row(
        "(L3E+E)(H+S3H)",
        vec![vec![ext(
            &h4,
            &[(-1.0, LiftDstar), (3.0 / k2, XiBracket), (-4.0 * k1 / k2, LiftTriple)],
        )]],
        Some(vec![vec![ext(
            &l6,
            &[(-2.0, WedgeDstar), (12.0 / k2, XiWedgeOmega), (-8.0 * k1 / k2, WedgeTriple)],
        )]]),
    );
    row("(L3E+E)H+(K+E)S3H", vec![vec![dstar_triple()]], None);
    row(
        "L3E(H+S3H)+(K+E)S3H",
        vec![vec![c(&[(1.0, LDstar), (3.0, Dstar)])]],
        None,
    );
    row(
        "(K+E)H+(L3E+K)S3H",
        vec![with(
            vec![ext(
                &s2,
                &[(-0.5, LiftDstar), (-1.0 / 6.0, LiftLDstar), (k2 / (2.0 * k1), XiBracket)],
            )],
            xi_equal(),
        )],
        Some(vec![with(
            vec![c(&[
                (1.0, LDOmega),
                (-1.0, WedgeDstar),
                (-1.0 / 3.0, WedgeLDstar),
                (2.0 * k2 / k1, XiWedgeOmega),
            ])],
            xi_equal(),
        )]),
    );
    row(
        "(K+E)H+(L3E+E)S3H",
        vec![vec![c(&[
            (1.0, Nabla),
            (-1.0 / 18.0, LiftLDstar),
            ((4.0 * k1 * k1 + k2 * k2) / (12.0 * k1 * k2), XiBracket),
            (2.0 * k1 / (3.0 * k2), LiftTriple),
        ])]],
        Some(vec![vec![c(&[
            (1.0, DOmega),
            (-1.0 / 9.0, WedgeLDstar),
            ((4.0 * k1 * k1 + k2 * k2) / (3.0 * k1 * k2), XiWedgeOmega),
            (4.0 * k1 / (3.0 * k2), WedgeTriple),
        ])]]),
    );
    row(
        "(K+E)(H+S3H)",
        vec![vec![ext(
            &s2,
            &[(-1.0, LiftDstar), (3.0 / (2.0 * k1), XiBracket), (-2.0, LiftTriple)],
        )]],
        Some(vec![vec![c(&[
            (1.0, LDOmega),
            (-2.0, WedgeDstar),
            (6.0 / k1, XiWedgeOmega),
            (-4.0, WedgeTriple),
        ])]]),
    );
    row(
        "K(H+S3H)+(L3E+E)S3H",
        vec![vec![ext(&s2, &[(-0.5, LiftDstar), (-1.0 / 6.0, LiftLDstar)])]],
        Some(vec![vec![c(&[(1.0, LDOmega), (-1.0, WedgeDstar), (-1.0 / 3.0, WedgeLDstar)])]]),
    );
    row(
        "E(H+S3H)+(L3E+K)S3H",
        vec![vec![ext(&s2, &[(3.0 / (2.0 * k1), XiBracket)])]],
        Some(vec![vec![c(&[(1.0, LDOmega), (6.0 / k1, XiWedgeOmega)])]]),
    );
    row(
        "(L3E+K)(H+S3H)+EH",
        vec![xi_equal(), star_kahler_equal()],
        None,
    );
    row(
        "(L3E+E)(H+S3H)+KH",
        vec![vec![ext(
            &h4,
            &[
                (-0.5, LiftDstar),
                (1.0 / 6.0, LiftLDstar),
                (-2.0 * k1 / k2, XiBracket),
                (-4.0 * k1 / k2, LiftTriple),
            ],
        )]],
        Some(vec![vec![ext(
            &l6,
            &[
                (-1.0, WedgeDstar),
                (1.0 / 3.0, WedgeLDstar),
                (-8.0 * k1 / k2, XiWedgeOmega),
                (-8.0 * k1 / k2, WedgeTriple),
            ],
        )]]),
    );
    row(
        "(K+E)(H+S3H)+L3EH",
        vec![vec![c(&[(1.0, LDstar), (-3.0, Dstar), (-6.0, XiHook), (-12.0, TripleForm)])]],
        None,
    );
    row(
        "(L3E+K)(H+S3H)+ES3H",
        vec![xi0(), vec![zero(StarDOmegaOmega)]],
        None,
    );
    row(
        "(L3E+E)(H+S3H)+KS3H",
        vec![vec![c(&[(1.0, LDstar), (3.0, Dstar), (-6.0, XiHook)])]],
        None,
    );
    row(
        "(K+E)(H+S3H)+L3ES3H",
        vec![vec![ext(
            &s2,
            &[(-0.5, LiftDstar), (-1.0 / 6.0, LiftLDstar), (k2 / (2.0 * k1), XiBracket)],
        )]],
        Some(vec![vec![c(&[
            (1.0, LDOmega),
            (-1.0, WedgeDstar),
            (-1.0 / 3.0, WedgeLDstar),
            (2.0 * k2 / k1, XiWedgeOmega),
        ])]]),
    );
    row("(L3E+K+E)(H+S3H)", vec![], Some(vec![]));
    debug_assert_eq!(rows.len(), 64);
    Ok(rows)
}

/// The eight rows for `n = 2`, in terms of `dΩ` only.
pub fn table3() -> Vec<TableRow> {
    use Term::*;
    let mut rows = Vec::with_capacity(8);
    let mut row = |class: &str, d_omega: Vec<Vec<Condition>>| {
        rows.push(TableRow {
            class: cls(class),
            nabla: Vec::new(),
            d_omega,
        })
    };
    row("KS3H", vec![vec![zero(DOmega)]]);
    row("K(H+S3H)", vec![xi_all_zero(), star_kahler_zero()]);
    row("EH+KS3H", vec![vec![c(&[(1.0, DOmega), (1.0, XiWedgeOmega)])]]);
    row(
        "(K+E)S3H",
        vec![
            vec![c(&[(1.0, DOmega), (-0.4, WedgeTriple)]), zero(Xi)],
            vec![zero(LDOmega)],
        ],
    );
    row(
        "K(H+S3H)+EH",
        vec![xi_equal(), vec![c(&[(1.0, LDOmega), (-6.0, DOmega)])]],
    );
    row("K(H+S3H)+ES3H", vec![vec![zero(Xi)], vec![zero(StarDOmegaOmega)]]);
    row(
        "E(H+S3H)+KS3H",
        vec![vec![c(&[(1.0, DOmega), (-0.4, WedgeTriple), (0.6, XiWedgeOmega)])]],
    );
    row(
        "(K+E)(H+S3H)",
        vec![vec![c(&[
            (1.0, DOmega),
            (-1.0 / 3.0, WedgeDstar),
            (-16.0 / 15.0, WedgeTriple),
            (0.6, XiWedgeOmega),
        ])]],
    );
    rows
}

/// Whether every class in the table is distinct and realisable at `n`.
pub fn rows_are_well_formed(rows: &[TableRow], n: usize) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    rows.iter()
        .all(|r| r.class.valid_at(n) && seen.insert(r.class.bits()))
}

/// The component labels a row's class leaves out.
pub fn complement(class: ClassLabel, n: usize) -> Vec<ComponentLabel> {
    ComponentLabel::ALL
        .into_iter()
        .filter(|c| !class.contains(*c) && !c.vanishes_at(n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::random_class_member;

    #[test]
    fn table_shapes() {
        let rows = table2(3).unwrap();
        assert_eq!(rows.len(), 64);
        assert!(rows_are_well_formed(&rows, 3));
        let rows = table3();
        assert_eq!(rows.len(), 8);
        assert!(rows_are_well_formed(&rows, 2));
    }

    #[test]
    fn every_row_accepts_members_and_rejects_supersets() {
        let n = 3;
        let q = QuatStructure::standard(n).unwrap();
        for row in table2(n).unwrap() {
            let a = random_class_member(&q, row.class, 5);
            let d = DerivedFromDOmega::from_torsion(&q, &a);
            assert!(table2_residual(&q, &a, row.class).unwrap().residual < 1e-10, "{}", row.class);
            assert!(table2_residual_d_omega(&q, &d, row.class).unwrap().residual < 1e-10, "{}", row.class);
            for c in complement(row.class, n) {
                let b = random_class_member(&q, row.class.union(ClassLabel::from_components(&[c])), 6);
                let db = DerivedFromDOmega::from_torsion(&q, &b);
                assert!(table2_residual(&q, &b, row.class).unwrap().residual > 1e-3, "{} + {}", row.class, c.code());
                assert!(table2_residual_d_omega(&q, &db, row.class).unwrap().residual > 1e-3);
            }
        }
    }

    #[test]
    fn dimension_eight_rows() {
        let q = QuatStructure::standard(2).unwrap();
        for row in table3() {
            let a = random_class_member(&q, row.class, 7);
            let d = DerivedFromDOmega::from_torsion(&q, &a);
            assert!(table3_residual(&q, &d, row.class).unwrap().residual < 1e-10, "{}", row.class);
            for c in complement(row.class, 2) {
                let b = random_class_member(&q, row.class.union(ClassLabel::from_components(&[c])), 8);
                let db = DerivedFromDOmega::from_torsion(&q, &b);
                assert!(table3_residual(&q, &db, row.class).unwrap().residual > 1e-3);
            }
        }
        assert!(table2_residual_d_omega(&q, &DerivedFromDOmega::from_torsion(&q, &random_class_member(&q, ClassLabel::FULL, 1)), ClassLabel::EMPTY).is_err());
    }
}
