//! End-to-end analysis of a metric Lie algebra: intrinsic torsion, class,
//! every applicable table row, and the identity residuals along the way.

use serde::{Deserialize, Serialize};

use crate::classifier::{classify_unchecked, wedge_criteria, ClassLabel, DerivedFromDOmega, WedgeCriteria, CLASS_TOL};
use crate::components::ComponentProfile;
use crate::lie::{
    dstar_kahler_residual, gray_residual, kahler_square_readings, nijenhuis_trace, rel_dist, CodifferentialRoutes,
    KahlerSquareReadings, LieGeometry, MetricLieAlgebra,
};
use crate::quat::{Axis, QuatStructure};
use crate::tables::{table2, table2_residual, table2_residual_d_omega, table3, table3_residual};
use crate::torsion::{membership, Membership, W_TOL};
use crate::{MixedTorsion, Result};

/// Residual below which a table condition counts as satisfied.
pub const TABLE_TOL: f64 = 1e-8;

/// Which characterisation a row check used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableColumn {
    Nabla,
    DOmega,
    DimensionEight,
}

/// One row evaluated on one tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowCheck {
    pub column: TableColumn,
    pub class: String,
    pub residual: f64,
    /// Whether the detected class lies in the row's class.
    pub contained: bool,
    /// Whether `residual < TABLE_TOL` agrees with `contained`.
    pub consistent: bool,
}

/// Evaluates every row that applies at the dimension of `q`.
pub fn table_checks(q: &QuatStructure, a: &MixedTorsion, class: ClassLabel) -> Result<Vec<RowCheck>> {
    let n = q.n();
    let derived = DerivedFromDOmega::from_torsion(q, a);
    let mut out = Vec::new();
    let mut push = |column, row: ClassLabel, residual: f64| {
        let contained = class.is_subset_of(row);
        out.push(RowCheck {
            column,
            class: row.ascii(),
            residual,
            contained,
            consistent: (residual < TABLE_TOL) == contained,
        });
    };
    for row in table2(n)? {
        if !row.class.valid_at(n) {
            continue;
        }
        push(TableColumn::Nabla, row.class, table2_residual(q, a, row.class)?.residual);
        if n >= 3 {
            push(TableColumn::DOmega, row.class, table2_residual_d_omega(q, &derived, row.class)?.residual);
        }
    }
    if n == 2 {
        for row in table3() {
            // Dimension-8 rows only characterise up to what dΩ sees.
            let residual = table3_residual(q, &derived, row.class)?.residual;
            push(TableColumn::DimensionEight, row.class, residual);
        }
    }
    Ok(out)
}

/// Full analysis of one algebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub n: usize,
    pub class: String,
    pub class_display: String,
    pub aliases: Vec<String>,
    pub profile: ComponentProfile,
    pub membership: Membership,
    pub jacobi_residual: f64,
    pub metric_residual: f64,
    pub torsion_residual: f64,
    /// `dΩ` from the Chevalley–Eilenberg differential against the alternation of `∇Ω`.
    pub d_omega_vs_alternation: f64,
    /// `∇Ω` by the product rule against the assembly from `2∇ω_A`.
    pub product_rule_vs_kahler: f64,
    pub gray: [f64; 3],
    pub nijenhuis_trace: [f64; 3],
    pub dstar_kahler: [f64; 3],
    /// Relative distance of every `d*Ω` route from `−C₁₂(∇Ω)`.
    pub codifferential: Vec<(String, f64)>,
    /// `ξ` recovered from `dΩ` alone against `ξ` by contraction.
    pub xi_hodge_vs_contraction: f64,
    pub kahler_squares: KahlerSquareReadings,
    pub wedge: WedgeCriteria,
    pub rows: Vec<RowCheck>,
}

impl AlgebraReport {
    /// Whether every identity that must hold does, at `tol`.
    pub fn failures(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, v: f64| {
            if !(v <= tol) {
                out.push(format!("{name}: {v:.3e}"));
            }
        };
        check("jacobi", self.jacobi_residual);
        check("metric compatibility", self.metric_residual);
        check("torsion-free", self.torsion_residual);
        check("dΩ = a(∇Ω)", self.d_omega_vs_alternation);
        check("∇Ω = Σ 2∇ω_A ∧ ω_A", self.product_rule_vs_kahler);
        check("membership in W", self.membership.eigen_residual.max(self.membership.round_trip_residual));
        for a in Axis::ALL {
            let i = a.index();
            check(&format!("Gray identity ({a})"), self.gray[i]);
            check(&format!("Nijenhuis trace ({a})"), self.nijenhuis_trace[i]);
            check(&format!("A d*ω_A = −⟨·⌟dω_A, ω_A⟩ ({a})"), self.dstar_kahler[i]);
        }
        for (name, r) in &self.codifferential {
            if name != "quoted_from_d_omega" {
                check(&format!("d*Ω {name}"), *r);
            }
        }
        check("ξ from ⋆(⋆dΩ∧Ω)", self.xi_hodge_vs_contraction);
        for r in &self.rows {
            if !r.consistent {
                out.push(format!("{:?} row {}: residual {:.3e}, contained {}", r.column, r.class, r.residual, r.contained));
            }
        }
        out
    }
}

/// Koszul connection, `∇Ω`, class and every cross-check.
pub fn classify_algebra(g: &MetricLieAlgebra) -> Result<AlgebraReport> {
    let q = g.structure();
    let geo = LieGeometry::new(g);
    let a = &geo.nabla_omega;
    let membership = membership(q, a, W_TOL);
    let cls = classify_unchecked(q, a, CLASS_TOL);
    let routes = CodifferentialRoutes::new(g, &geo);
    let by_d = DerivedFromDOmega::from_d_omega(q, geo.d_omega.clone());
    let by_c = DerivedFromDOmega::by_contraction(q, a);
    let product_rule_vs_kahler = match geo.nabla_omega_from_kahler(q) {
        Ok(b) => b.rel_dist(a),
        Err(_) => f64::INFINITY,
    };
    Ok(AlgebraReport {
        n: q.n(),
        class: cls.class.ascii(),
        class_display: cls.class.display(),
        aliases: cls.class.aliases().iter().map(|s| s.to_string()).collect(),
        profile: cls.profile.clone(),
        membership,
        jacobi_residual: g.jacobi_residual(),
        metric_residual: geo.connection.metric_residual(),
        torsion_residual: geo.connection.torsion_residual(g),
        d_omega_vs_alternation: geo.d_omega.rel_dist(&a.alternate()),
        product_rule_vs_kahler,
        gray: Axis::ALL.map(|x| gray_residual(g, &geo, x)),
        nijenhuis_trace: Axis::ALL.map(|x| nijenhuis_trace(g, x).iter().fold(0.0, |m: f64, v| m.max(v.abs()))),
        dstar_kahler: Axis::ALL.map(|x| dstar_kahler_residual(g, &geo, x)),
        codifferential: routes.residuals().into_iter().map(|(n, r)| (n.to_string(), r)).collect(),
        xi_hodge_vs_contraction: rel_dist(&by_d.xi, &by_c.xi),
        kahler_squares: kahler_square_readings(g, &geo),
        wedge: wedge_criteria(q, &by_d, 1e-8),
        rows: table_checks(q, a, cls.class)?,
    })
}
