//! JSON documents for matrices, tuples, certificates and reports.
//!
//! Every top-level document carries `format_version`. Rational entries are
//! written as `"a/b"` strings, `F_p` entries as integers.

use commvar_core::certify::{Attempt, CertKind, Certificate, Verdict, Witness};
use commvar_core::geomdim::MapKind;
use commvar_core::{AnyMat, FieldSpec};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Core(#[from] commvar_core::Error),
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldJson {
    Q,
    Fp { p: u64 },
}

impl From<FieldSpec> for FieldJson {
    fn from(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Rationals => FieldJson::Q,
            FieldSpec::Prime(p) => FieldJson::Fp { p },
        }
    }
}

impl TryFrom<FieldJson> for FieldSpec {
    type Error = FormatError;
    fn try_from(f: FieldJson) -> Result<Self> {
        Ok(match f {
            FieldJson::Q => FieldSpec::Rationals,
            FieldJson::Fp { p } => FieldSpec::prime(p)?,
        })
    }
}

/// A matrix body without its field; the enclosing document names the field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatBody {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Value>>,
}

impl MatBody {
    pub fn from_mat(m: &AnyMat) -> Self {
        let (rows, cols) = m.shape();
        let text = m.text_rows();
        let entries = match m {
            AnyMat::Q(_) => text
                .into_iter()
                .map(|r| r.into_iter().map(Value::String).collect())
                .collect(),
            AnyMat::Fp(_) => text
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|s| Value::from(s.parse::<u64>().expect("residue")))
                        .collect()
                })
                .collect(),
        };
        Self { rows, cols, entries }
    }

    /// Rationals accept `"a/b"` strings or integers; `F_p` accepts
    /// integers, reduced modulo `p`.
    pub fn to_mat(&self, field: FieldSpec) -> Result<AnyMat> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(FormatError::Invalid(format!(
                "entries do not form a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let text = self
            .entries
            .iter()
            .map(|row| row.iter().map(|v| entry_text(v, field)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if self.rows == 0 {
            return Err(FormatError::Invalid("empty matrix".into()));
        }
        Ok(AnyMat::parse_rows(field, &text)?)
    }
}

fn entry_text(v: &Value, field: FieldSpec) -> Result<String> {
    match (v, field) {
        (Value::String(s), FieldSpec::Rationals) => Ok(s.clone()),
        (Value::Number(n), _) => {
            let i = n
                .as_i64()
                .ok_or_else(|| FormatError::Invalid(format!("entry {n} is not an integer")))?;
            Ok(match field {
                FieldSpec::Rationals => i.to_string(),
                FieldSpec::Prime(p) => i.rem_euclid(p as i64).to_string(),
            })
        }
        _ => Err(FormatError::Invalid(format!("bad entry {v} for field {field}"))),
    }
}

fn check_version(v: u32) -> Result<()> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version(v))
    }
}

fn bodies_to_mats(bodies: &[MatBody], field: FieldSpec) -> Result<Vec<AnyMat>> {
    bodies.iter().map(|b| b.to_mat(field)).collect()
}

fn mats_to_bodies(mats: &[AnyMat]) -> Vec<MatBody> {
    mats.iter().map(MatBody::from_mat).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub format_version: u32,
    pub field: FieldJson,
    #[serde(flatten)]
    pub body: MatBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleDoc {
    pub format_version: u32,
    pub field: FieldJson,
    pub n: usize,
    pub r: usize,
    pub mats: Vec<MatBody>,
}

/// A single matrix or a tuple, as read from an input file.
#[derive(Clone, Debug, PartialEq)]
pub struct Tuple {
    pub field: FieldSpec,
    pub mats: Vec<AnyMat>,
}

impl Tuple {
    pub fn n(&self) -> usize {
        self.mats[0].shape().0
    }
}

pub fn matrix_json(m: &AnyMat) -> Value {
    serde_json::to_value(MatrixDoc {
        format_version: FORMAT_VERSION,
        field: m.field_spec().into(),
        body: MatBody::from_mat(m),
    })
    .expect("serializable")
}

pub fn tuple_json(field: FieldSpec, mats: &[AnyMat]) -> Value {
    let n = mats.first().map_or(0, |m| m.shape().0);
    serde_json::to_value(TupleDoc {
        format_version: FORMAT_VERSION,
        field: field.into(),
        n,
        r: mats.len(),
        mats: mats_to_bodies(mats),
    })
    .expect("serializable")
}

/// Reads either a matrix document or a tuple document.
pub fn parse_tuple(text: &str) -> Result<Tuple> {
    let v: Value = serde_json::from_str(text)?;
    let (field, mats) = if v.get("mats").is_some() {
        let doc: TupleDoc = serde_json::from_value(v)?;
        check_version(doc.format_version)?;
        let field = FieldSpec::try_from(doc.field)?;
        let mats = bodies_to_mats(&doc.mats, field)?;
        if mats.len() != doc.r || mats.iter().any(|m| m.shape() != (doc.n, doc.n)) {
            return Err(FormatError::Invalid(format!(
                "expected {} matrices of size {}x{}",
                doc.r, doc.n, doc.n
            )));
        }
        (field, mats)
    } else {
        let doc: MatrixDoc = serde_json::from_value(v)?;
        check_version(doc.format_version)?;
        let field = FieldSpec::try_from(doc.field)?;
        (field, vec![doc.body.to_mat(field)?])
    };
    if mats.is_empty() {
        return Err(FormatError::Invalid("tuple has no matrices".into()));
    }
    let n = mats[0].shape().0;
    if mats.iter().any(|m| m.shape() != (n, n)) {
        return Err(FormatError::Invalid("matrices must be square of one size".into()));
    }
    Ok(Tuple { field, mats })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum WitnessJson {
    Tuple {
        construction: String,
        mats: Vec<MatBody>,
    },
    Rank {
        map: String,
        n: usize,
        r: usize,
        s: Option<usize>,
        base_point: Vec<MatBody>,
        jacobian_shape: [usize; 2],
        rank: usize,
    },
    Gamma {
        s: usize,
        coords: Vec<MatBody>,
        orbit_term: usize,
        free_term: usize,
        partner_term: usize,
    },
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct AttemptJson {
    kind: String,
    quantity: usize,
    threshold: usize,
    verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CertificateJson {
    format_version: u32,
    kind: String,
    n: usize,
    r: usize,
    field: FieldJson,
    witness: WitnessJson,
    quantity: usize,
    threshold: usize,
    verdict: String,
    paper_basis: String,
    seed: u64,
    budget: u64,
    semantics: String,
    #[serde(default)]
    attempts: Vec<AttemptJson>,
}

pub fn certificate_json(c: &Certificate) -> Value {
    let witness = match &c.witness {
        Witness::Tuple { construction, mats } => WitnessJson::Tuple {
            construction: construction.clone(),
            mats: mats_to_bodies(mats),
        },
        Witness::Rank {
            map,
            n,
            r,
            s,
            base_point,
            jacobian_shape,
            rank,
        } => WitnessJson::Rank {
            map: map.name().to_string(),
            n: *n,
            r: *r,
            s: *s,
            base_point: mats_to_bodies(base_point),
            jacobian_shape: [jacobian_shape.0, jacobian_shape.1],
            rank: *rank,
        },
        Witness::Gamma {
            s,
            coords,
            orbit_term,
            free_term,
            partner_term,
        } => WitnessJson::Gamma {
            s: *s,
            coords: mats_to_bodies(coords),
            orbit_term: *orbit_term,
            free_term: *free_term,
            partner_term: *partner_term,
        },
        Witness::Empty => WitnessJson::Empty,
    };
    let doc = CertificateJson {
        format_version: FORMAT_VERSION,
        kind: c.kind.name().to_string(),
        n: c.n,
        r: c.r,
        field: c.field.into(),
        witness,
        quantity: c.quantity,
        threshold: c.threshold,
        verdict: c.verdict.name().to_string(),
        paper_basis: c.basis.clone(),
        seed: c.seed,
        budget: c.budget,
        semantics: c.semantics.clone(),
        attempts: c
            .attempts
            .iter()
            .map(|a| AttemptJson {
                kind: a.kind.name().to_string(),
                quantity: a.quantity,
                threshold: a.threshold,
                verdict: a.verdict.name().to_string(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let doc: CertificateJson = serde_json::from_str(text)?;
    check_version(doc.format_version)?;
    let field = FieldSpec::try_from(doc.field)?;
    let witness = match doc.witness {
        WitnessJson::Tuple { construction, mats } => Witness::Tuple {
            construction,
            mats: bodies_to_mats(&mats, field)?,
        },
        WitnessJson::Rank {
            map,
            n,
            r,
            s,
            base_point,
            jacobian_shape,
            rank,
        } => Witness::Rank {
            map: MapKind::from_name(&map)?,
            n,
            r,
            s,
            base_point: bodies_to_mats(&base_point, field)?,
            jacobian_shape: (jacobian_shape[0], jacobian_shape[1]),
            rank,
        },
        WitnessJson::Gamma {
            s,
            coords,
            orbit_term,
            free_term,
            partner_term,
        } => Witness::Gamma {
            s,
            coords: bodies_to_mats(&coords, field)?,
            orbit_term,
            free_term,
            partner_term,
        },
        WitnessJson::Empty => Witness::Empty,
    };
    let attempts = doc
        .attempts
        .iter()
        .map(|a| {
            Ok(Attempt {
                kind: CertKind::from_name(&a.kind)?,
                quantity: a.quantity,
                threshold: a.threshold,
                verdict: Verdict::from_name(&a.verdict)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate {
        kind: CertKind::from_name(&doc.kind)?,
        n: doc.n,
        r: doc.r,
        field,
        witness,
        quantity: doc.quantity,
        threshold: doc.threshold,
        verdict: Verdict::from_name(&doc.verdict)?,
        basis: doc.paper_basis,
        seed: doc.seed,
        budget: doc.budget,
        semantics: doc.semantics,
        attempts,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
