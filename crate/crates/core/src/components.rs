//! The six irreducible components of `W` and their projectors.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::basis;
use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::mixed::{MixedForm, MixedTorsion};
use crate::quat::QuatStructure;
use crate::threeform::{dstar, hat_dstar, proj3, Projector3};
use crate::torsion::{f_inverse_unchecked, f_map_unchecked, fiber_project, random_w_element, require_w};

/// One of the six irreducible summands `(Λ³₀E + K + E)(H + S³H)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ComponentLabel {
    L3EH,
    KH,
    EH,
    L3ES3H,
    KS3H,
    ES3H,
}

impl ComponentLabel {
    pub const ALL: [ComponentLabel; 6] = [
        ComponentLabel::L3EH,
        ComponentLabel::KH,
        ComponentLabel::EH,
        ComponentLabel::L3ES3H,
        ComponentLabel::KS3H,
        ComponentLabel::ES3H,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn code(self) -> &'static str {
        match self {
            ComponentLabel::L3EH => "L3EH",
            ComponentLabel::KH => "KH",
            ComponentLabel::EH => "EH",
            ComponentLabel::L3ES3H => "L3ES3H",
            ComponentLabel::KS3H => "KS3H",
            ComponentLabel::ES3H => "ES3H",
        }
    }

    pub fn display(self) -> &'static str {
        match self {
            ComponentLabel::L3EH => "Λ₀³EH",
            ComponentLabel::KH => "KH",
            ComponentLabel::EH => "EH",
            ComponentLabel::L3ES3H => "Λ₀³ES³H",
            ComponentLabel::KS3H => "KS³H",
            ComponentLabel::ES3H => "ES³H",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.replace(['.', ' '], "");
        ComponentLabel::ALL
            .into_iter()
            .find(|c| c.code().eq_ignore_ascii_case(&t) || c.display() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }

    /// Summands built on `Λ³₀E`, which vanish in dimension eight.
    pub fn vanishes_at(self, n: usize) -> bool {
        n == 2 && matches!(self, ComponentLabel::L3EH | ComponentLabel::L3ES3H)
    }

    /// `true` for the `H` summands, `false` for `S³H`.
    pub fn is_h(self) -> bool {
        matches!(
            self,
            ComponentLabel::L3EH | ComponentLabel::KH | ComponentLabel::EH
        )
    }

    /// Dimension of the summand for `n ≥ 2`.
    pub fn dimension(self, n: usize) -> usize {
        let e = 2 * n;
        let l3e = e * (e - 1) * (e - 2) / 6 - e;
        let k = e * (e * e - 1) / 3 - e;
        let base = match self {
            ComponentLabel::L3EH | ComponentLabel::L3ES3H => l3e,
            ComponentLabel::KH | ComponentLabel::KS3H => k,
            ComponentLabel::EH | ComponentLabel::ES3H => e,
        };
        base * if self.is_h() { 2 } else { 4 }
    }

    fn three_form_part(self) -> Option<Projector3> {
        match self {
            ComponentLabel::KH => Some(Projector3::KH),
            ComponentLabel::EH => Some(Projector3::EH),
            ComponentLabel::ES3H => Some(Projector3::ES3H),
            ComponentLabel::L3ES3H => Some(Projector3::L3ES3H),
            _ => None,
        }
    }
}

impl std::fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.display())
    }
}

/// `(𝓛a + 2a)/6`, the `H` part, unchecked.
pub fn hpart_unchecked(q: &QuatStructure, a: &MixedTorsion) -> MixedTorsion {
    let mut out = q.lcal_unchecked(a);
    out.axpy(2.0, a);
    out.scaled(1.0 / 6.0)
}

/// `(4a − 𝓛a)/6`, the `S³H` part, unchecked.
pub fn s3hpart_unchecked(q: &QuatStructure, a: &MixedTorsion) -> MixedTorsion {
    let mut out = a.scaled(4.0);
    out.axpy(-1.0, &q.lcal_unchecked(a));
    out.scaled(1.0 / 6.0)
}

pub fn proj_hpart(q: &QuatStructure, a: &MixedTorsion) -> Result<MixedTorsion> {
    require_w(q, a)?;
    Ok(hpart_unchecked(q, a))
}

pub fn proj_s3hpart(q: &QuatStructure, a: &MixedTorsion) -> Result<MixedTorsion> {
    require_w(q, a)?;
    Ok(s3hpart_unchecked(q, a))
}

/// All six components at once; they sum to `a`.
pub fn decompose_unchecked(q: &QuatStructure, a: &MixedTorsion) -> [MixedTorsion; 6] {
    let b = dstar(a);
    let lift = |p| hat_dstar(q, &proj3(q, &b, p));
    let kh = lift(Projector3::KH);
    let eh = lift(Projector3::EH);
    let es = lift(Projector3::ES3H);
    let l3s = lift(Projector3::L3ES3H);
    let l3h = &(&hpart_unchecked(q, a) - &kh) - &eh;
    let ks = &(&s3hpart_unchecked(q, a) - &es) - &l3s;
    [l3h, kh, eh, l3s, ks, es]
}

/// One component, unchecked.
pub fn component_unchecked(q: &QuatStructure, a: &MixedTorsion, x: ComponentLabel) -> MixedTorsion {
    if let Some(p) = x.three_form_part() {
        return hat_dstar(q, &proj3(q, &dstar(a), p));
    }
    let b = dstar(a);
    let lift = |p| hat_dstar(q, &proj3(q, &b, p));
    match x {
        ComponentLabel::L3EH => {
            &(&hpart_unchecked(q, a) - &lift(Projector3::KH)) - &lift(Projector3::EH)
        }
        ComponentLabel::KS3H => {
            &(&s3hpart_unchecked(q, a) - &lift(Projector3::ES3H)) - &lift(Projector3::L3ES3H)
        }
        _ => unreachable!("handled above"),
    }
}

/// The `X` component of `a ∈ W`.
pub fn component(q: &QuatStructure, a: &MixedTorsion, x: ComponentLabel) -> Result<MixedTorsion> {
    require_w(q, a)?;
    Ok(component_unchecked(q, a, x))
}

/// `component(random_w_element(seed), x)`, refusing components that vanish at `n`.
pub fn inject(q: &QuatStructure, x: ComponentLabel, seed: u64) -> Result<MixedTorsion> {
    if x.vanishes_at(q.n()) {
        return Err(Error::ZeroInDimensionEight { label: x.code().to_string() });
    }
    Ok(component_unchecked(q, &random_w_element(q, seed), x))
}

/// Six component norms of `a ∈ W` and its total norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentProfile {
    pub norms: BTreeMap<String, f64>,
    pub total: f64,
}

impl ComponentProfile {
    pub fn norm(&self, x: ComponentLabel) -> f64 {
        self.norms.get(x.code()).copied().unwrap_or(0.0)
    }

    /// `|Σ‖a_X‖² − ‖a‖²| / ‖a‖²`.
    pub fn pythagoras_residual(&self) -> f64 {
        if self.total == 0.0 {
            return 0.0;
        }
        let s: f64 = self.norms.values().map(|v| v * v).sum();
        (s - self.total * self.total).abs() / (self.total * self.total)
    }
}

pub fn profile_unchecked(q: &QuatStructure, a: &MixedTorsion) -> ComponentProfile {
    let parts = decompose_unchecked(q, a);
    let norms = ComponentLabel::ALL
        .iter()
        .map(|x| (x.code().to_string(), parts[x.index()].norm()))
        .collect();
    ComponentProfile {
        norms,
        total: a.norm(),
    }
}

pub fn profile(q: &QuatStructure, a: &MixedTorsion) -> Result<ComponentProfile> {
    require_w(q, a)?;
    Ok(profile_unchecked(q, a))
}

/// Trace of a linear operator on `W`, computed as the trace of its
/// conjugate `F⁻¹ ∘ P ∘ F ∘ Π_fiber` over the ambient basis of `V* ⊗ Λ²`.
pub fn trace_on_w(q: &QuatStructure, op: impl Fn(&MixedTorsion) -> MixedTorsion) -> f64 {
    let d = q.dim();
    let per = basis(d, 2).len();
    let mut tr = 0.0;
    for x in 0..d {
        for k in 0..per {
            let mut e = MixedForm::zero(d, 2);
            e.row_mut(x).coeffs_mut()[k] = 1.0;
            let c = fiber_project(q, &e);
            if c.norm_sq() < 1e-24 {
                continue;
            }
            let back = f_inverse_unchecked(q, &op(&f_map_unchecked(q, &c)));
            tr += back.row(x).coeffs()[k];
        }
    }
    tr
}

/// Matrix of a linear map on `Λ³`, built column by column.
pub fn three_form_matrix(q: &QuatStructure, op: impl Fn(&AltForm) -> AltForm) -> DMatrix<f64> {
    let d = q.dim();
    let nb = basis(d, 3).len();
    let mut m = DMatrix::zeros(nb, nb);
    for j in 0..nb {
        let mut e = AltForm::zero(d, 3);
        e.coeffs_mut()[j] = 1.0;
        let col = op(&e);
        for (i, v) in col.coeffs().iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

/// Singular values of `d*` restricted to the image of `ĥat-d*`, which is the
/// orthogonal complement of `ker d*` in `W`.
pub fn dstar_singular_values_on_complement(q: &QuatStructure) -> Vec<f64> {
    let d = q.dim();
    let nb = basis(d, 3).len();
    let len = MixedForm::flat_len(d, 4);
    let mut cols = DMatrix::zeros(len, nb);
    for j in 0..nb {
        let mut e = AltForm::zero(d, 3);
        e.coeffs_mut()[j] = 1.0;
        for (i, v) in hat_dstar(q, &e).to_flat().into_iter().enumerate() {
            cols[(i, j)] = v;
        }
    }
    let qmat = cols.qr().q();
    let mut m = DMatrix::zeros(nb, nb);
    for j in 0..nb {
        let col: Vec<f64> = qmat.column(j).iter().copied().collect();
        let a = MixedForm::from_flat(d, 4, &col).expect("sized by construction");
        for (i, v) in dstar(&a).coeffs().iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    sv
}

/// One summand in the dimension census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub label: String,
    pub display: String,
    pub dimension: usize,
    /// Trace of the component projector on `W`.
    pub trace: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub n: usize,
    pub components: Vec<CensusEntry>,
    pub w_dimension: usize,
    pub trace_sum: f64,
}

/// Dimensions of the six summands, both by formula and by projector trace.
pub fn census(q: &QuatStructure) -> Census {
    let components: Vec<CensusEntry> = ComponentLabel::ALL
        .iter()
        .map(|&x| CensusEntry {
            label: x.code().to_string(),
            display: x.display().to_string(),
            dimension: x.dimension(q.n()),
            trace: trace_on_w(q, |a| component_unchecked(q, a, x)),
        })
        .collect();
    Census {
        n: q.n(),
        w_dimension: components.iter().map(|c| c.dimension).sum(),
        trace_sum: components.iter().map(|c| c.trace).sum(),
        components,
    }
}
