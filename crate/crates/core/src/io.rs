//! JSON formats for forms, torsion tensors, structures, Lie algebras and
//! classification reports.
//!
//! Forms: `{"n": 2, "degree": 4, "coeffs": {"0,1,2,3": 1.0, …}}` with zero
//! entries omitted and `n` the quaternionic dimension. Torsion tensors use the
//! same layout with the row index as the first key entry. Structures are
//! `"standard"` or `{"n": 2, "I": [[…]], "J": [[…]]}`. Lie algebras are
//! `{"n": 2, "brackets": [[i, j, k, value], …], "structure": …}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::classifier::{classify, wedge_criteria, DerivedFromDOmega, WedgeCriteria};
use crate::components::ComponentProfile;
use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::lie::{Bracket, MetricLieAlgebra};
use crate::mixed::{MixedForm, MixedTorsion};
use crate::quat::QuatStructure;
use crate::tables::{table2_residual, table3_residual};

/// `"standard"` or explicit `I`, `J` matrices (rows of the matrix).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureSpec {
    Named(String),
    Matrices {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(rename = "I")]
        i: Vec<Vec<f64>>,
        #[serde(rename = "J")]
        j: Vec<Vec<f64>>,
    },
}

impl Default for StructureSpec {
    fn default() -> Self {
        StructureSpec::Named("standard".into())
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn rows_matrix(rows: &[Vec<f64>], d: usize) -> Result<DMatrix<f64>> {
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(Error::Parse(format!("expected a {d}×{d} matrix")));
    }
    Ok(DMatrix::from_fn(d, d, |r, c| rows[r][c]))
}

impl StructureSpec {
    pub fn of(q: &QuatStructure) -> Self {
        if let Ok(s) = QuatStructure::standard(q.n()) {
            let same = crate::quat::Axis::ALL
                .iter()
                .all(|a| s.matrix(*a) == q.matrix(*a));
            if same {
                return Self::default();
            }
        }
        StructureSpec::Matrices {
            n: Some(q.n()),
            i: matrix_rows(q.matrix(crate::quat::Axis::I)),
            j: matrix_rows(q.matrix(crate::quat::Axis::J)),
        }
    }

    pub fn build(&self, n: usize) -> Result<QuatStructure> {
        match self {
            StructureSpec::Named(s) if s == "standard" => QuatStructure::standard(n),
            StructureSpec::Named(s) => Err(Error::Parse(format!("unknown structure {s:?}"))),
            StructureSpec::Matrices { n: m, i, j } => {
                if let Some(m) = m {
                    if *m != n {
                        return Err(Error::DimensionMismatch { expected: n, got: *m });
                    }
                }
                let d = 4 * n;
                QuatStructure::new(n, rows_matrix(i, d)?, rows_matrix(j, d)?)
            }
        }
    }
}

/// Serialized form or torsion tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormFile {
    pub n: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSpec>,
}

fn key(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_key(k: &str) -> Result<Vec<usize>> {
    if k.trim().is_empty() {
        return Ok(Vec::new());
    }
    k.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index tuple {k:?}"))))
        .collect()
}

fn check_n(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidQuaternionicDimension(n));
    }
    Ok(4 * n)
}

fn entries(f: &AltForm) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
    f.basis()
        .iter()
        .zip(f.coeffs())
        .filter(|(_, v)| **v != 0.0)
        .map(|(t, v)| (t.iter().map(|&x| x as usize).collect(), *v))
}

fn accumulate(f: &mut AltForm, idx: &mut [usize], v: f64, k: &str) -> Result<()> {
    let d = f.dim();
    if idx.iter().any(|&i| i >= d) {
        return Err(Error::Parse(format!("index out of range in {k:?}")));
    }
    let sign = crate::basis::sort_with_sign(idx).ok_or_else(|| Error::Parse(format!("repeated index in {k:?}")))?;
    f.axpy(sign * v, &AltForm::monomial(d, idx));
    Ok(())
}

pub fn form_to_file(n: usize, f: &AltForm) -> FormFile {
    FormFile {
        n,
        degree: f.degree(),
        coeffs: entries(f).map(|(t, v)| (key(&t), v)).collect(),
        structure: None,
    }
}

pub fn form_from_file(file: &FormFile) -> Result<AltForm> {
    let d = check_n(file.n)?;
    let mut f = AltForm::zero(d, file.degree);
    for (k, v) in &file.coeffs {
        let mut idx = parse_key(k)?;
        if idx.len() != file.degree {
            return Err(Error::Parse(format!("{k:?} has {} indices, degree is {}", idx.len(), file.degree)));
        }
        accumulate(&mut f, &mut idx, *v, k)?;
    }
    Ok(f)
}

pub fn mixed_to_file(n: usize, a: &MixedForm) -> FormFile {
    let mut coeffs = BTreeMap::new();
    for (r, row) in a.rows().iter().enumerate() {
        for (t, v) in entries(row) {
            let mut full = vec![r];
            full.extend(t);
            coeffs.insert(key(&full), v);
        }
    }
    FormFile {
        n,
        degree: a.degree(),
        coeffs,
        structure: None,
    }
}

pub fn mixed_from_file(file: &FormFile) -> Result<MixedForm> {
    let d = check_n(file.n)?;
    let mut rows = vec![AltForm::zero(d, file.degree); d];
    for (k, v) in &file.coeffs {
        let idx = parse_key(k)?;
        if idx.len() != file.degree + 1 {
            return Err(Error::Parse(format!(
                "{k:?} has {} indices, expected row plus {}",
                idx.len(),
                file.degree
            )));
        }
        let r = idx[0];
        if r >= d {
            return Err(Error::Parse(format!("row out of range in {k:?}")));
        }
        let mut rest = idx[1..].to_vec();
        accumulate(&mut rows[r], &mut rest, *v, k)?;
    }
    MixedForm::from_rows(rows)
}

/// Serialized Lie algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieFile {
    pub n: usize,
    pub brackets: Vec<(usize, usize, usize, f64)>,
    #[serde(default)]
    pub structure: StructureSpec,
}

pub fn lie_to_file(g: &MetricLieAlgebra) -> LieFile {
    LieFile {
        n: g.n(),
        brackets: g.brackets().iter().map(|b| (b.i, b.j, b.k, b.value)).collect(),
        structure: StructureSpec::of(g.structure()),
    }
}

pub fn lie_from_file(file: &LieFile) -> Result<MetricLieAlgebra> {
    let q = file.structure.build(file.n)?;
    let brackets: Vec<Bracket> = file
        .brackets
        .iter()
        .map(|&(i, j, k, value)| Bracket { i, j, k, value })
        .collect();
    MetricLieAlgebra::new(q, &brackets)
}

/// A Lie algebra together with the class recorded for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieFixture {
    #[serde(flatten)]
    pub algebra: LieFile,
    pub class: String,
}

/// Anything the classifier accepts.
#[derive(Clone, Debug)]
pub enum Input {
    Torsion { q: QuatStructure, a: MixedTorsion },
    Algebra(MetricLieAlgebra),
}

/// Parses a torsion tensor (form file whose keys carry a row index) or a Lie algebra.
pub fn parse_input(text: &str) -> Result<Input> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("brackets").is_some() {
        let file: LieFile = serde_json::from_value(v)?;
        return lie_from_file(&file).map(Input::Algebra);
    }
    let file: FormFile = serde_json::from_value(v)?;
    if file.degree != 4 {
        return Err(Error::Parse(format!("torsion tensors have degree 4, got {}", file.degree)));
    }
    let q = file.structure.clone().unwrap_or_default().build(file.n)?;
    let a = mixed_from_file(&file)?;
    Ok(Input::Torsion { q, a })
}

/// The row of the detected class and its residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowSummary {
    pub row: String,
    pub residual: f64,
}

/// Classification report for a torsion tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorReport {
    pub n: usize,
    pub class: String,
    pub class_display: String,
    pub aliases: Vec<String>,
    pub profile: ComponentProfile,
    pub table2: RowSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table3: Option<RowSummary>,
    pub wedge_criteria: WedgeCriteria,
}

pub fn tensor_report(q: &QuatStructure, a: &MixedTorsion, tol: f64) -> Result<TensorReport> {
    let c = classify(q, a, tol)?;
    let t2 = table2_residual(q, a, c.class)?;
    let derived = DerivedFromDOmega::from_torsion(q, a);
    let table3 = if q.n() == 2 {
        table3_residual(q, &derived, c.class).ok().map(|r| RowSummary {
            row: r.class,
            residual: r.residual,
        })
    } else {
        None
    };
    Ok(TensorReport {
        n: q.n(),
        class: c.class.ascii(),
        class_display: c.class.display(),
        aliases: c.class.aliases().iter().map(|s| s.to_string()).collect(),
        profile: c.profile,
        table2: RowSummary {
            row: t2.class,
            residual: t2.residual,
        },
        table3,
        wedge_criteria: wedge_criteria(q, &derived, 1e-8),
    })
}
