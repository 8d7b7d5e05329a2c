//! Class labels over the lattice of component subsets, projector-based
//! classification, the quantities recovered from `dΩ`, and the wedge tests.

use serde::{Deserialize, Serialize};

use crate::components::{component_unchecked, profile_unchecked, ComponentLabel, ComponentProfile};
use crate::error::{Error, Result};
use crate::exterior::{wedge, AltForm};
use crate::mixed::MixedTorsion;
use crate::quat::{Axis, QuatStructure};
use crate::threeform::{dstar, xi_triple, OneFormTriple};
use crate::torsion::{random_w_element, require_w};

/// Default relative threshold below which a component counts as absent.
pub const CLASS_TOL: f64 = 1e-8;

/// A subset of the six components, one of the `2⁶` classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassLabel(u8);

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    L3,
    K,
    E,
}

impl Kind {
    fn of(c: ComponentLabel) -> Kind {
        match c {
            ComponentLabel::L3EH | ComponentLabel::L3ES3H => Kind::L3,
            ComponentLabel::KH | ComponentLabel::KS3H => Kind::K,
            ComponentLabel::EH | ComponentLabel::ES3H => Kind::E,
        }
    }

    fn name(self, ascii: bool) -> &'static str {
        match (self, ascii) {
            (Kind::L3, true) => "L3E",
            (Kind::L3, false) => "Λ₀³E",
            (Kind::K, _) => "K",
            (Kind::E, _) => "E",
        }
    }
}

const KINDS: [Kind; 3] = [Kind::L3, Kind::K, Kind::E];

fn group(kinds: &[Kind], ascii: bool) -> String {
    let names: Vec<&str> = kinds.iter().map(|k| k.name(ascii)).collect();
    if names.len() == 1 {
        names[0].to_string()
    } else {
        format!("({})", names.join("+"))
    }
}

impl ClassLabel {
    pub const EMPTY: ClassLabel = ClassLabel(0);
    pub const FULL: ClassLabel = ClassLabel(0b11_1111);

    pub fn from_components(cs: &[ComponentLabel]) -> Self {
        ClassLabel(cs.iter().fold(0, |m, c| m | (1 << c.index())))
    }

    pub fn from_bits(bits: u8) -> Self {
        ClassLabel(bits & 0b11_1111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, c: ComponentLabel) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn is_subset_of(self, other: ClassLabel) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ClassLabel) -> ClassLabel {
        ClassLabel(self.0 | other.0)
    }

    pub fn components(self) -> Vec<ComponentLabel> {
        ComponentLabel::ALL.into_iter().filter(|c| self.contains(*c)).collect()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// `false` if the label names a summand that vanishes in dimension `4n`.
    pub fn valid_at(self, n: usize) -> bool {
        self.components().iter().all(|c| !c.vanishes_at(n))
    }

    /// Every class realisable in dimension `4n`: 64 for `n ≥ 3`, 16 for `n = 2`.
    pub fn all(n: usize) -> Vec<ClassLabel> {
        (0u8..64).map(ClassLabel).filter(|c| c.valid_at(n)).collect()
    }

    fn render(self, ascii: bool) -> String {
        if self.is_empty() {
            return "QK".to_string();
        }
        let h: Vec<Kind> = KINDS
            .into_iter()
            .filter(|k| self.components().iter().any(|c| c.is_h() && Kind::of(*c) == *k))
            .collect();
        let s: Vec<Kind> = KINDS
            .into_iter()
            .filter(|k| self.components().iter().any(|c| !c.is_h() && Kind::of(*c) == *k))
            .collect();
        let both: Vec<Kind> = h.iter().copied().filter(|k| s.contains(k)).collect();
        let h_only: Vec<Kind> = h.iter().copied().filter(|k| !both.contains(k)).collect();
        let s_only: Vec<Kind> = s.iter().copied().filter(|k| !both.contains(k)).collect();
        let (hh, ss) = if ascii { ("H", "S3H") } else { ("H", "S³H") };
        let mut parts = Vec::new();
        if !both.is_empty() {
            parts.push(format!("{}({hh}+{ss})", group(&both, ascii)));
        }
        if !h_only.is_empty() {
            parts.push(format!("{}{hh}", group(&h_only, ascii)));
        }
        if !s_only.is_empty() {
            parts.push(format!("{}{ss}", group(&s_only, ascii)));
        }
        parts.join("+")
    }

    /// ASCII form, e.g. `(K+E)H` or `L3E(H+S3H)+KS3H`.
    pub fn ascii(self) -> String {
        self.render(true)
    }

    /// Display form, e.g. `(K+E)H` or `Λ₀³E(H+S³H)+KS³H`.
    pub fn display(self) -> String {
        self.render(false)
    }

    /// Established names of special classes.
    pub fn aliases(self) -> Vec<&'static str> {
        use ComponentLabel::*;
        let named: [(&[ComponentLabel], &[&str]); 4] = [
            (&[], &["QK", "quaternion Kähler"]),
            (&[EH], &["l.c.q.K.", "locally conformal quaternionic Kähler"]),
            (&[KH, EH], &["QKT"]),
            (&[L3EH, KH, EH], &["quaternionic"]),
        ];
        named
            .iter()
            .find(|(cs, _)| ClassLabel::from_components(cs) == self)
            .map(|(_, names)| names.to_vec())
            .unwrap_or_default()
    }

    /// Accepts the ASCII or display form, an alias, `0`, or a comma-separated
    /// list of component codes.
    pub fn parse(s: &str) -> Result<Self> {
        let key = |t: &str| t.replace(' ', "").to_lowercase();
        let k = key(s);
        if k == "0" || k == "{}" || k == "∅" {
            return Ok(ClassLabel::EMPTY);
        }
        for c in (0u8..64).map(ClassLabel) {
            if key(&c.ascii()) == k
                || key(&c.display()) == k
                || c.aliases().iter().any(|a| key(a) == k)
            {
                return Ok(c);
            }
        }
        if k == "full" {
            return Ok(ClassLabel::FULL);
        }
        if let Some(c) = parse_sum(&k) {
            return Ok(c);
        }
        let inner = k.trim_start_matches('{').trim_end_matches('}');
        inner
            .split(',')
            .map(ComponentLabel::parse)
            .collect::<Result<Vec<_>>>()
            .map(|cs| ClassLabel::from_components(&cs))
            .map_err(|_| Error::UnknownLabel(s.to_string()))
    }
}

fn split_top(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Sums like `(l3e+k)h+ks3h` in any order, lower-cased without spaces.
fn parse_sum(k: &str) -> Option<ClassLabel> {
    use ComponentLabel::*;
    let k = k.replace("λ₀³", "l3").replace("s³h", "s3h");
    let mut out = ClassLabel::EMPTY;
    for term in split_top(&k) {
        let (kinds, suffix) = if let Some(rest) = term.strip_prefix('(') {
            let close = rest.find(')')?;
            (&rest[..close], &rest[close + 1..])
        } else {
            let at = ["(h+s3h)", "s3h", "h"].iter().find_map(|suf| term.strip_suffix(suf).map(|p| p.len()))?;
            (&term[..at], &term[at..])
        };
        let (h, s) = match suffix {
            "h" => (true, false),
            "s3h" => (false, true),
            "(h+s3h)" => (true, true),
            _ => return None,
        };
        for kind in kinds.split('+') {
            let (ch, cs) = match kind {
                "l3e" => (L3EH, L3ES3H),
                "k" => (KH, KS3H),
                "e" => (EH, ES3H),
                _ => return None,
            };
            if h {
                out = out.union(ClassLabel::from_components(&[ch]));
            }
            if s {
                out = out.union(ClassLabel::from_components(&[cs]));
            }
        }
    }
    Some(out)
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display())
    }
}

/// Result of [`classify`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: ClassLabel,
    pub profile: ComponentProfile,
}

/// Class of `a ∈ W`: the components whose norm exceeds `tol · ‖a‖`.
pub fn classify(q: &QuatStructure, a: &MixedTorsion, tol: f64) -> Result<Classification> {
    require_w(q, a)?;
    Ok(classify_unchecked(q, a, tol))
}

pub fn classify_unchecked(q: &QuatStructure, a: &MixedTorsion, tol: f64) -> Classification {
    let profile = profile_unchecked(q, a);
    let total = profile.total;
    let class = if total < 1e-14 {
        ClassLabel::EMPTY
    } else {
        let cs: Vec<ComponentLabel> = ComponentLabel::ALL
            .into_iter()
            .filter(|c| !c.vanishes_at(q.n()) && profile.norm(*c) > tol * total)
            .collect();
        ClassLabel::from_components(&cs)
    };
    Classification { class, profile }
}

/// A random element of `W` whose nonzero components are exactly `class`.
pub fn random_class_member(q: &QuatStructure, class: ClassLabel, seed: u64) -> MixedTorsion {
    let a = random_w_element(q, seed);
    let mut out = a.scaled(0.0);
    for c in class.components() {
        out.axpy(1.0, &component_unchecked(q, &a, c));
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `d*Ω` from `dΩ`: `((−1)^n (n−1) ‖Ω‖² / (2n+1)!) ⋆(Ω^{n−2} ∧ dΩ)`.
pub fn dstar_from_d_omega(q: &QuatStructure, d_omega: &AltForm) -> AltForm {
    let c = q.omega().norm_sq() * dstar_from_d_omega_coefficient(q.n());
    wedge(&q.omega_power(q.n() - 2), d_omega).hodge().scaled(c)
}

/// `(−1)^n (n−1) / (2n+1)!`, the coefficient as it is usually quoted, without
/// the factor `‖Ω‖² = 12n(2n+1)`.
pub fn dstar_from_d_omega_coefficient(n: usize) -> f64 {
    let s = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    s * (n - 1) as f64 / factorial(2 * n + 1)
}

/// `ξ = (1/(12(2n+1))) ⋆(⋆dΩ ∧ Ω)`.
pub fn xi_from_d_omega(q: &QuatStructure, d_omega: &AltForm) -> Vec<f64> {
    wedge(&d_omega.hodge(), q.omega())
        .hodge()
        .scaled(1.0 / (12.0 * q.k2()))
        .into_coeffs()
}

/// `Aξ_A = (⋆(⋆b ∧ ω_A) − 6Aξ) / (4(n−1))` for `b = d*Ω`, returned as the
/// triple `ξ_A` together with `ξ`.
pub fn xi_triple_from_dstar(q: &QuatStructure, b: &AltForm, xi: &[f64]) -> OneFormTriple {
    let sb = b.hodge();
    let per = Axis::ALL.map(|a| {
        let s = wedge(&sb, q.kahler(a)).hodge();
        let ax = q.act_one_form(a, xi);
        let a_xi_a: Vec<f64> = s
            .coeffs()
            .iter()
            .zip(&ax)
            .map(|(v, w)| (v - 6.0 * w) / (4.0 * q.k1()))
            .collect();
        q.act_one_form(a, &a_xi_a).iter().map(|v| -v).collect::<Vec<f64>>()
    });
    let [xi_i, xi_j, xi_k] = per;
    OneFormTriple {
        xi_i,
        xi_j,
        xi_k,
        xi: xi.to_vec(),
    }
}

/// `dΩ` together with `d*Ω`, `ξ` and `ξ_A` recovered from it alone.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedFromDOmega {
    pub d_omega: AltForm,
    pub dstar_omega: AltForm,
    pub xi: Vec<f64>,
    pub xi_triple: OneFormTriple,
}

impl DerivedFromDOmega {
    pub fn from_d_omega(q: &QuatStructure, d_omega: AltForm) -> Self {
        let dstar_omega = dstar_from_d_omega(q, &d_omega);
        let xi = xi_from_d_omega(q, &d_omega);
        let xi_triple = xi_triple_from_dstar(q, &dstar_omega, &xi);
        Self {
            d_omega,
            dstar_omega,
            xi,
            xi_triple,
        }
    }

    /// Starts from `dΩ = a(∇Ω)`.
    pub fn from_torsion(q: &QuatStructure, a: &MixedTorsion) -> Self {
        Self::from_d_omega(q, a.alternate())
    }

    /// The same quantities computed by contraction from `∇Ω` itself.
    pub fn by_contraction(q: &QuatStructure, a: &MixedTorsion) -> Self {
        let dstar_omega = dstar(a);
        let xi_triple = xi_triple(q, &dstar_omega);
        Self {
            d_omega: a.alternate(),
            xi: xi_triple.xi.clone(),
            dstar_omega,
            xi_triple,
        }
    }
}

/// The three wedge tests on `⋆dΩ`, with their residuals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeCriteria {
    /// `⋆dΩ ∧ Ω = 0`, equivalent to a vanishing `EH` component.
    pub eh_free: bool,
    /// `⋆dΩ ∧ ω_A ∧ ω_A` independent of `A`, equivalent to a vanishing `ES³H` component.
    pub es3h_free: bool,
    /// `⋆dΩ ∧ ω_A ∧ ω_A = 0` for every `A`.
    pub e_free: bool,
    pub residuals: [f64; 3],
}

/// `⋆φ ∧ ω_A ∧ ω_A` for each `A`.
pub fn star_kahler_squares(q: &QuatStructure, phi: &AltForm) -> [AltForm; 3] {
    let s = phi.hodge();
    Axis::ALL.map(|a| wedge(&wedge(&s, q.kahler(a)), q.kahler(a)))
}

pub fn wedge_criteria(q: &QuatStructure, d: &DerivedFromDOmega, tol: f64) -> WedgeCriteria {
    let scale = d.d_omega.norm() * q.omega().norm();
    let rel = |x: f64| if scale > 0.0 { x / scale } else { x };
    let r0 = rel(wedge(&d.d_omega.hodge(), q.omega()).norm());
    let sq = star_kahler_squares(q, &d.d_omega);
    let r1 = rel(
        (&sq[0] - &sq[1])
            .norm()
            .max((&sq[1] - &sq[2]).norm())
            .max((&sq[2] - &sq[0]).norm()),
    );
    let r2 = rel(sq.iter().map(AltForm::norm).fold(0.0, f64::max));
    WedgeCriteria {
        eh_free: r0 <= tol,
        es3h_free: r1 <= tol,
        e_free: r2 <= tol,
        residuals: [r0, r1, r2],
    }
}

/// Largest `‖⋆φ ∧ ω_A ∧ ω_B‖ / (‖φ‖ ‖ω‖²)` over the six unordered pairs.
pub fn perp_eh5_residual(q: &QuatStructure, phi: &AltForm) -> f64 {
    let s = phi.hodge();
    let scale = phi.norm() * q.kahler(Axis::I).norm_sq();
    let mut worst: f64 = 0.0;
    for (i, a) in Axis::ALL.into_iter().enumerate() {
        for b in Axis::ALL.into_iter().skip(i) {
            worst = worst.max(wedge(&wedge(&s, q.kahler(a)), q.kahler(b)).norm());
        }
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Whether a five-form is orthogonal to every `ζ ∧ ω_A ∧ ω_B`.
pub fn perp_eh5_test(q: &QuatStructure, phi: &AltForm, tol: f64) -> bool {
    perp_eh5_residual(q, phi) <= tol
}
