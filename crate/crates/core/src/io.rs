//! JSON file formats for matrices, coefficient tables, γ tables, Weyl
//! weights and channels.
//!
//! Every float is written as `{:.16e}` (17 significant digits) with negative
//! zero normalized, so the same value always produces the same bytes.

use std::io::{self, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::channels::{QuantumChannel, WeylWeights, CHOI_CONVENTION};
use crate::dilation::GammaTable;
use crate::error::{Error, Result};
use crate::numerics::{Complex, ComplexMatrix, Tolerances};
use crate::weyl::CoefficientTable;

pub const L_MAJOR: &str = "l-major";

/// Formats one float the way every artifact does.
pub fn format_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` to a single line of JSON terminated by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value.serialize(&mut ser).expect("in-memory JSON serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn from_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("{what}: {e} (line {}, column {})", e.line(), e.column()))
    })
}

fn pairs(entries: &[Complex]) -> Vec<[f64; 2]> {
    entries.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(pairs: &[[f64; 2]]) -> Vec<Complex> {
    pairs.iter().map(|[re, im]| Complex::new(*re, *im)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<Value>,
}

impl From<&ComplexMatrix> for MatrixDoc {
    fn from(m: &ComplexMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), entries: pairs(m.entries()), convention: None, summary: None }
    }
}

impl TryFrom<&MatrixDoc> for ComplexMatrix {
    type Error = Error;

    fn try_from(doc: &MatrixDoc) -> Result<Self> {
        ComplexMatrix::new(doc.rows, doc.cols, complexes(&doc.entries))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientDoc {
    pub d: usize,
    pub order: String,
    pub xi: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roundtrip_residual: Option<f64>,
}

impl From<&CoefficientTable> for CoefficientDoc {
    fn from(t: &CoefficientTable) -> Self {
        Self { d: t.d(), order: L_MAJOR.into(), xi: pairs(t.entries()), roundtrip_residual: None }
    }
}

fn check_order(order: &str) -> Result<()> {
    if order != L_MAJOR {
        return Err(Error::Parse(format!("unsupported order {order:?}; expected {L_MAJOR:?}")));
    }
    Ok(())
}

impl TryFrom<&CoefficientDoc> for CoefficientTable {
    type Error = Error;

    fn try_from(doc: &CoefficientDoc) -> Result<Self> {
        check_order(&doc.order)?;
        CoefficientTable::new(doc.d, complexes(&doc.xi))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaDoc {
    pub d: usize,
    pub gamma: Vec<[f64; 2]>,
}

impl From<&GammaTable> for GammaDoc {
    fn from(g: &GammaTable) -> Self {
        Self { d: g.d(), gamma: pairs(g.entries()) }
    }
}

impl GammaDoc {
    pub fn to_table(&self, tol: &Tolerances) -> Result<GammaTable> {
        GammaTable::with_tolerances(self.d, complexes(&self.gamma), tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightsDoc {
    pub d: usize,
    pub order: String,
    pub p: Vec<f64>,
}

impl From<&WeylWeights> for WeightsDoc {
    fn from(w: &WeylWeights) -> Self {
        Self { d: w.d(), order: L_MAJOR.into(), p: w.weights().to_vec() }
    }
}

impl WeightsDoc {
    pub fn to_weights(&self, tol: &Tolerances) -> Result<WeylWeights> {
        check_order(&self.order)?;
        WeylWeights::with_tolerances(self.d, self.p.clone(), tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDoc {
    pub d: usize,
    pub kraus: Vec<MatrixDoc>,
}

impl From<&QuantumChannel> for ChannelDoc {
    fn from(ch: &QuantumChannel) -> Self {
        Self { d: ch.d(), kraus: ch.kraus().iter().map(MatrixDoc::from).collect() }
    }
}

impl ChannelDoc {
    pub fn to_channel(&self, tol: &Tolerances) -> Result<QuantumChannel> {
        let kraus = self.kraus.iter().map(ComplexMatrix::try_from).collect::<Result<Vec<_>>>()?;
        if let Some(e) = kraus.iter().find(|e| e.rows() != self.d) {
            return Err(Error::Shape(format!(
                "channel file declares d = {} but holds a {}x{} Kraus operator",
                self.d,
                e.rows(),
                e.cols()
            )));
        }
        QuantumChannel::with_tolerances(kraus, *tol)
    }
}

/// Choi matrix document: matrix format plus the convention header.
pub fn choi_doc(mat: &ComplexMatrix) -> MatrixDoc {
    MatrixDoc { convention: Some(CHOI_CONVENTION.into()), ..MatrixDoc::from(mat) }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisElementDoc {
    pub l: usize,
    pub k: usize,
    pub matrix: MatrixDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisDoc {
    pub d: usize,
    pub order: String,
    pub elements: Vec<BasisElementDoc>,
}

/// Plain-text rendering of a matrix, one row per line.
pub fn matrix_table(m: &ComplexMatrix) -> String {
    let mut out = format!("{}x{}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| {
                let z = m[(r, c)];
                format!("{:>12} {:>12}i", format!("{:+.6}", z.re + 0.0), format!("{:+.6}", z.im + 0.0))
            })
            .collect();
        out.push_str(&row.join("  "));
        out.push('\n');
    }
    out
}
