//! JSON documents for tensors, witnesses and results.
//!
//! A tensor is `{"p": 5, "dims": [m, n, q], "slices": [[[...]]]}` with slices
//! indexed by k, then row i, then column j, and entries in `[0, p)`.
//! Polynomials are ascending coefficient lists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::oracle::Orbit;
use crate::pencil::{KroneckerForm, PencilBlock};
use crate::poly::Poly;
use crate::spatial::{CanonicalSum, RegularClass22, SpatialMatrix, TensorLabel, TransformWitness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDoc {
    pub p: u32,
    pub dims: [usize; 3],
    pub slices: Vec<Vec<Vec<u32>>>,
}

fn parse_field(p: u32) -> Result<PrimeField> {
    PrimeField::new(p).map_err(|e| Error::Parse(e.to_string()))
}

fn check_entry(field: PrimeField, v: u32) -> Result<u32> {
    if v >= field.p() {
        return Err(Error::Parse(format!("entry {v} is outside [0, {})", field.p())));
    }
    Ok(v)
}

impl TensorDoc {
    pub fn to_tensor(&self) -> Result<SpatialMatrix> {
        let field = parse_field(self.p)?;
        let [m, n, q] = self.dims;
        if self.slices.len() != q {
            return Err(Error::Parse(format!("dims say q={q} but {} slices given", self.slices.len())));
        }
        for (k, s) in self.slices.iter().enumerate() {
            if s.len() != m || s.iter().any(|row| row.len() != n) {
                return Err(Error::Parse(format!("slice {k} is not {m}x{n}")));
            }
            for &v in s.iter().flatten() {
                check_entry(field, v)?;
            }
        }
        Ok(SpatialMatrix::from_fn(field, (m, n, q), |i, j, k| self.slices[k][i][j]))
    }

    pub fn from_tensor(a: &SpatialMatrix) -> Self {
        let (m, n, q) = a.dims();
        TensorDoc {
            p: a.field().p(),
            dims: [m, n, q],
            slices: a.slices().iter().map(|s| s.to_rows()).collect(),
        }
    }
}

pub fn parse_tensor(text: &str) -> Result<SpatialMatrix> {
    let doc: TensorDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_tensor()
}

pub fn tensor_to_value(a: &SpatialMatrix) -> serde_json::Value {
    serde_json::to_value(TensorDoc::from_tensor(a)).expect("tensor documents serialize")
}

/// `{"p", "R", "S", "T"}`, each matrix as a list of rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub p: u32,
    #[serde(rename = "R")]
    pub r: Vec<Vec<u32>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<u32>>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<u32>>,
}

fn square_matrix(field: PrimeField, rows: &[Vec<u32>], name: &str) -> Result<Matrix> {
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::Parse(format!("witness matrix {name} is not square")));
    }
    for &v in rows.iter().flatten() {
        check_entry(field, v)?;
    }
    Ok(Matrix::from_fn(field, rows.len(), rows.len(), |i, j| rows[i][j]))
}

impl WitnessDoc {
    pub fn to_witness(&self) -> Result<TransformWitness> {
        let field = parse_field(self.p)?;
        TransformWitness::new(
            square_matrix(field, &self.r, "R")?,
            square_matrix(field, &self.s, "S")?,
            square_matrix(field, &self.t, "T")?,
        )
    }

    pub fn from_witness(w: &TransformWitness) -> Self {
        WitnessDoc {
            p: w.field().p(),
            r: w.r.to_rows(),
            s: w.s.to_rows(),
            t: w.t.to_rows(),
        }
    }
}

pub fn parse_witness(text: &str) -> Result<TransformWitness> {
    let doc: WitnessDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_witness()
}

pub fn witness_to_value(w: &TransformWitness) -> serde_json::Value {
    serde_json::to_value(WitnessDoc::from_witness(w)).expect("witness documents serialize")
}

fn poly_from_coeffs(field: PrimeField, coeffs: &[u32]) -> Result<Poly> {
    for &c in coeffs {
        check_entry(field, c)?;
    }
    let poly = Poly::new(field, coeffs.to_vec());
    if poly.coeffs().len() != coeffs.len() {
        return Err(Error::Parse(format!("polynomial {coeffs:?} has trailing zero coefficients")));
    }
    Ok(poly)
}

/// Kronecker block list: `{"p", "right", "left", "inf", "finite"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KroneckerDoc {
    pub p: u32,
    pub right: Vec<usize>,
    pub left: Vec<usize>,
    pub inf: Vec<usize>,
    pub finite: Vec<Vec<u32>>,
}

impl KroneckerDoc {
    pub fn from_form(k: &KroneckerForm) -> Self {
        KroneckerDoc {
            p: k.field.p(),
            right: k.right_indices(),
            left: k.left_indices(),
            inf: k.infinite_sizes(),
            finite: k.finite_polys().iter().map(|c| c.coeffs().to_vec()).collect(),
        }
    }

    pub fn to_form(&self) -> Result<KroneckerForm> {
        let field = parse_field(self.p)?;
        let mut blocks = Vec::new();
        for &r in &self.right {
            blocks.push(PencilBlock::RightSingular(r));
        }
        for &s in &self.left {
            blocks.push(PencilBlock::LeftSingular(s));
        }
        for &l in &self.inf {
            blocks.push(PencilBlock::Infinite(l));
        }
        for c in &self.finite {
            blocks.push(PencilBlock::Finite(poly_from_coeffs(field, c)?));
        }
        for b in &blocks {
            let bad = match b {
                PencilBlock::RightSingular(0) | PencilBlock::LeftSingular(0) | PencilBlock::Infinite(0) => true,
                PencilBlock::Finite(chi) => !crate::poly::is_prime_power(chi),
                _ => false,
            };
            if bad {
                return Err(Error::Parse(format!("invalid block {b:?}")));
            }
        }
        Ok(KroneckerForm::new(field, blocks))
    }
}

/// `{"p", "right", "left", "finite"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalSumDoc {
    pub p: u32,
    pub right: Vec<usize>,
    pub left: Vec<usize>,
    pub finite: Vec<Vec<u32>>,
}

impl CanonicalSumDoc {
    pub fn from_sum(c: &CanonicalSum) -> Self {
        CanonicalSumDoc {
            p: c.field.p(),
            right: c.right_indices.clone(),
            left: c.left_indices.clone(),
            finite: c.finite_polys.iter().map(|c| c.coeffs().to_vec()).collect(),
        }
    }

    pub fn to_sum(&self) -> Result<CanonicalSum> {
        let field = parse_field(self.p)?;
        let polys = self
            .finite
            .iter()
            .map(|c| poly_from_coeffs(field, c))
            .collect::<Result<Vec<_>>>()?;
        CanonicalSum::new(field, self.right.clone(), self.left.clone(), polys).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `{"kind": "matrix", "rank": r}` or `{"kind": "pencil", "p", "right", "left", "finite"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LabelDoc {
    Matrix { rank: usize },
    Pencil(CanonicalSumDoc),
}

impl LabelDoc {
    pub fn from_label(l: &TensorLabel) -> Self {
        match l {
            TensorLabel::Matrix { rank } => LabelDoc::Matrix { rank: *rank },
            TensorLabel::Pencil(c) => LabelDoc::Pencil(CanonicalSumDoc::from_sum(c)),
        }
    }

    pub fn to_label(&self) -> Result<TensorLabel> {
        Ok(match self {
            LabelDoc::Matrix { rank } => TensorLabel::Matrix { rank: *rank },
            LabelDoc::Pencil(c) => TensorLabel::Pencil(c.to_sum()?),
        })
    }
}

/// `{"label": "B", "v": 1}`; `v` only for the A and B families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<u32>,
}

impl ClassDoc {
    pub fn from_class(c: &RegularClass22) -> Self {
        ClassDoc {
            label: c.label().to_string(),
            v: c.param(),
        }
    }

    pub fn to_class(&self) -> Result<RegularClass22> {
        RegularClass22::from_label(&self.label, self.v)
    }
}

/// One line of an orbit table: representative tensor and orbit size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLine {
    pub representative: TensorDoc,
    pub size: usize,
}

pub fn orbits_to_jsonl(orbits: &[Orbit]) -> String {
    let mut out = String::new();
    for o in orbits {
        let line = OrbitLine {
            representative: TensorDoc::from_tensor(&o.representative),
            size: o.size,
        };
        out.push_str(&serde_json::to_string(&line).expect("orbit lines serialize"));
        out.push('\n');
    }
    out
}
