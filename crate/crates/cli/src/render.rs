//! Human-readable renderings of the reports.

use std::fmt::Write;

use aqh_core::components::{Census, ComponentLabel, ComponentProfile};
use aqh_core::io::TensorReport;
use aqh_core::report::AlgebraReport;

pub fn census(c: &Census) -> String {
    let mut s = format!("n={}  dim W = {}  (projector traces sum to {:.6})\n", c.n, c.w_dimension, c.trace_sum);
    for e in &c.components {
        let _ = writeln!(s, "  {:<8} {:>5}   trace {:.6}", e.display, e.dimension, e.trace);
    }
    s
}

fn profile(s: &mut String, p: &ComponentProfile) {
    let _ = writeln!(s, "  ‖a‖ = {:.6e}", p.total);
    for x in ComponentLabel::ALL {
        let _ = writeln!(s, "  {:<8} {:.6e}", x.display(), p.norm(x));
    }
}

fn header(s: &mut String, class: &str, display: &str, aliases: &[String]) {
    let _ = write!(s, "class {class}  ({display})");
    if !aliases.is_empty() {
        let _ = write!(s, "  aka {}", aliases.join(", "));
    }
    s.push('\n');
}

pub fn tensor(r: &TensorReport) -> String {
    let mut s = format!("n={}\n", r.n);
    header(&mut s, &r.class, &r.class_display, &r.aliases);
    profile(&mut s, &r.profile);
    let _ = writeln!(s, "∇Ω row {}: residual {:.3e}", r.table2.row, r.table2.residual);
    if let Some(t) = &r.table3 {
        let _ = writeln!(s, "dΩ row {} (dimension 8): residual {:.3e}", t.row, t.residual);
    }
    let w = &r.wedge_criteria;
    let _ = writeln!(
        s,
        "⋆dΩ∧Ω = 0: {}  ⋆dΩ∧ω_A∧ω_A independent of A: {}  ⋆dΩ∧ω_A∧ω_A = 0: {}",
        w.eh_free, w.es3h_free, w.e_free
    );
    s
}

pub fn algebra(r: &AlgebraReport, failures: &[String]) -> String {
    let mut s = format!("n={}\n", r.n);
    header(&mut s, &r.class, &r.class_display, &r.aliases);
    profile(&mut s, &r.profile);
    let rows = [
        ("Jacobi", r.jacobi_residual),
        ("metric compatibility", r.metric_residual),
        ("torsion-free", r.torsion_residual),
        ("dΩ = a(∇Ω)", r.d_omega_vs_alternation),
        ("∇Ω = Σ 2∇ω_A∧ω_A", r.product_rule_vs_kahler),
        ("ξ from ⋆(⋆dΩ∧Ω) vs contraction", r.xi_hodge_vs_contraction),
    ];
    for (name, v) in rows {
        let _ = writeln!(s, "  {name:<34} {v:.3e}");
    }
    let max3 = |v: &[f64; 3]| v.iter().fold(0.0f64, |m, x| m.max(*x));
    let _ = writeln!(s, "  {:<34} {:.3e}", "Gray identity", max3(&r.gray));
    let _ = writeln!(s, "  {:<34} {:.3e}", "Nijenhuis trace", max3(&r.nijenhuis_trace));
    let _ = writeln!(s, "  {:<34} {:.3e}", "A d*ω_A = −⟨·⌟dω_A, ω_A⟩", max3(&r.dstar_kahler));
    for (name, v) in &r.codifferential {
        let _ = writeln!(s, "  d*Ω {name:<30} {v:.3e}");
    }
    for row in &r.rows {
        let _ = writeln!(
            s,
            "  row {:<24} {:?}: residual {:.3e}, contained {}",
            row.class, row.column, row.residual, row.contained
        );
    }
    if failures.is_empty() {
        s.push_str("all identities hold\n");
    } else {
        for f in failures {
            let _ = writeln!(s, "FAIL {f}");
        }
    }
    s
}
