//! Text serialization of matrices, chains, count tables and step records.
//!
//! Every float is written with 17 significant digits in `%.17g` style, so
//! values round-trip exactly and identical runs produce identical bytes.
//! Structured records are JSON; tables are comma-separated with a header.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix4};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::bench::{CountRecord, MeasurementSetting, Outcome, SixStateTable};
use crate::compensation::StepRecord;
use crate::elements::{ElementChain, OpticalElement, Reciprocity};
use crate::error::{Error, Result};
use crate::spin::{AxisAngle, CMatrix, C64};
use crate::tomography::{PauliTransferMatrix, TomoResult};

/// `%.17g`: 17 significant digits, trailing zeros trimmed, exponent form
/// below 1e-4 and from 1e17. Zero of either sign prints as `0`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_owned()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A float that serializes to JSON through [`format_g17`].
#[derive(Debug, Clone, Copy)]
struct G17(f64);

impl Serialize for G17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite value"));
        }
        RawValue::from_string(format_g17(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

/// `{rows, cols, data: [[re, im], ...]}`, row-major.
pub fn complex_matrix_json<const D: usize>(m: &CMatrix<D>) -> String {
    let data = (0..D)
        .flat_map(|r| (0..D).map(move |c| (r, c)))
        .map(|(r, c)| [G17(m[(r, c)].re), G17(m[(r, c)].im)])
        .collect();
    to_json(&MatrixRecord {
        rows: D,
        cols: D,
        data,
    })
}

pub fn parse_complex_matrix(text: &str) -> Result<DMatrix<C64>> {
    let rec: MatrixRecord<[f64; 2]> = serde_json::from_str(text).map_err(parse_err)?;
    if rec.data.len() != rec.rows * rec.cols {
        return Err(Error::Parse(format!(
            "{}x{} matrix with {} entries",
            rec.rows,
            rec.cols,
            rec.data.len()
        )));
    }
    Ok(DMatrix::from_row_iterator(
        rec.rows,
        rec.cols,
        rec.data.iter().map(|[re, im]| C64::new(*re, *im)),
    ))
}

/// `{rows, cols, data: [x, ...]}`, row-major.
pub fn real_matrix_json(m: &Matrix4<f64>) -> String {
    let data = (0..4)
        .flat_map(|r| (0..4).map(move |c| (r, c)))
        .map(|(r, c)| G17(m[(r, c)]))
        .collect();
    to_json(&MatrixRecord {
        rows: 4,
        cols: 4,
        data,
    })
}

pub fn parse_real_matrix(text: &str) -> Result<DMatrix<f64>> {
    let rec: MatrixRecord<f64> = serde_json::from_str(text).map_err(parse_err)?;
    if rec.data.len() != rec.rows * rec.cols {
        return Err(Error::Parse(format!(
            "{}x{} matrix with {} entries",
            rec.rows,
            rec.cols,
            rec.data.len()
        )));
    }
    Ok(DMatrix::from_row_slice(rec.rows, rec.cols, &rec.data))
}

/// Four space-separated rows, one per output Pauli component.
pub fn ptm_rows(ptm: &PauliTransferMatrix) -> String {
    let mut out = String::new();
    for r in 0..4 {
        let row: Vec<String> = (0..4).map(|c| format_g17(ptm.m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_ptm_rows(text: &str) -> Result<PauliTransferMatrix> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|x| x.parse::<f64>().map_err(parse_err))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::Parse("expected four rows of four values".into()));
    }
    Ok(PauliTransferMatrix {
        m: Matrix4::from_fn(|r, c| rows[r][c]),
    })
}

#[derive(Serialize)]
struct ElementOut<'a> {
    kind: String,
    axis: [G17; 3],
    theta: G17,
    label: &'a str,
}

#[derive(Deserialize)]
struct ElementIn {
    kind: String,
    axis: [f64; 3],
    theta: f64,
    label: String,
}

/// `[{kind, axis: [n1, n2, n3], theta, label}, ...]`.
pub fn chain_json(chain: &ElementChain) -> String {
    let list: Vec<ElementOut> = chain
        .elements
        .iter()
        .map(|e| ElementOut {
            kind: e.kind.to_string(),
            axis: e.rotation.axis.map(G17),
            theta: G17(e.rotation.theta),
            label: &e.label,
        })
        .collect();
    to_json(&list)
}

pub fn parse_chain(text: &str) -> Result<ElementChain> {
    let list: Vec<ElementIn> = serde_json::from_str(text).map_err(parse_err)?;
    let elements = list
        .into_iter()
        .map(|e| {
            let kind = match e.kind.as_str() {
                "reciprocal" => Reciprocity::Reciprocal,
                "faraday" => Reciprocity::Faraday,
                other => return Err(Error::Parse(format!("unknown element kind `{other}`"))),
            };
            Ok(OpticalElement {
                kind,
                rotation: AxisAngle::new(e.axis, e.theta)?,
                label: e.label,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ElementChain::new(elements))
}

#[derive(Serialize, Deserialize)]
struct CountRow {
    setting: String,
    outcome: String,
    count: u64,
}

fn csv_string<T: Serialize>(rows: impl IntoIterator<Item = T>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

/// `setting,outcome,count`, one row per outcome.
pub fn counts_csv(records: &[CountRecord]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(["setting", "outcome", "count"])
        .expect("in-memory csv write");
    for rec in records {
        for (o, n) in &rec.counts {
            w.serialize(CountRow {
                setting: rec.setting.to_string(),
                outcome: o.to_string(),
                count: *n,
            })
            .expect("in-memory csv write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

pub fn parse_counts_csv(text: &str) -> Result<Vec<CountRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut grouped: Vec<(MeasurementSetting, BTreeMap<Outcome, u64>)> = Vec::new();
    for row in rdr.deserialize::<CountRow>() {
        let row = row.map_err(parse_err)?;
        let setting: MeasurementSetting = row.setting.parse()?;
        let outcome: Outcome = row.outcome.parse()?;
        if outcome.first.is_some() != setting.first.is_some() {
            return Err(Error::SettingMismatch(format!(
                "{setting} with outcome {outcome}"
            )));
        }
        match grouped.iter_mut().find(|(s, _)| *s == setting) {
            Some((_, counts)) => {
                counts.insert(outcome, row.count);
            }
            None => grouped.push((setting, BTreeMap::from([(outcome, row.count)]))),
        }
    }
    Ok(grouped
        .into_iter()
        .map(|(setting, counts)| CountRecord { setting, counts })
        .collect())
}

#[derive(Serialize)]
struct StepRow {
    step: usize,
    params: String,
    fidelity: String,
}

/// `step,params,fidelity`; params lists each element as `n1 n2 n3 theta`,
/// elements separated by `;`.
pub fn steps_csv(steps: &[StepRecord]) -> String {
    csv_string(steps.iter().map(|s| {
        StepRow {
            step: s.step,
            params: s
                .chain
                .elements
                .iter()
                .map(|e| {
                    let [a, b, c] = e.rotation.axis.map(format_g17);
                    format!("{a} {b} {c} {}", format_g17(e.rotation.theta))
                })
                .collect::<Vec<_>>()
                .join(";"),
            fidelity: format_g17(s.fidelity),
        }
    }))
}

#[derive(Serialize)]
struct MappingRow {
    input: &'static str,
    expected: &'static str,
    fidelity: String,
    herald_probability: String,
}

/// `input,expected,fidelity,herald_probability` for each probe state.
pub fn mapping_csv(table: &SixStateTable) -> String {
    csv_string(table.rows.iter().map(|r| MappingRow {
        input: r.input.label(),
        expected: r.expected.label(),
        fidelity: format_g17(r.fidelity),
        herald_probability: format_g17(r.herald_probability),
    }))
}

#[derive(Serialize)]
struct LabeledCountRow<'a> {
    input: &'a str,
    setting: String,
    outcome: String,
    count: u64,
}

/// `input,setting,outcome,count` over every probe state of the table.
pub fn six_state_counts_csv(table: &SixStateTable) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(["input", "setting", "outcome", "count"])
        .expect("in-memory csv write");
    for row in &table.rows {
        for rec in &row.counts {
            for (o, n) in &rec.counts {
                w.serialize(LabeledCountRow {
                    input: row.input.label(),
                    setting: rec.setting.to_string(),
                    outcome: o.to_string(),
                    count: *n,
                })
                .expect("in-memory csv write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

#[derive(Serialize)]
struct TomoOut<'a> {
    state: &'a RawValue,
    settings: Vec<String>,
    shots: u64,
    seed: u64,
    clipped_mass: G17,
}

/// Reconstructed state plus the metadata needed to reproduce it.
pub fn tomo_json<const D: usize>(t: &TomoResult<D>, seed: u64) -> String {
    let state = complex_matrix_json(t.state.matrix());
    let raw = RawValue::from_string(state.trim_end().to_owned()).expect("valid json");
    to_json(&TomoOut {
        state: &raw,
        settings: t.settings_used.iter().map(|s| s.to_string()).collect(),
        shots: t.shots,
        seed,
        clipped_mass: G17(t.clipped_mass),
    })
}

/// Flat `{key: value}` summary with 17-digit floats, keys in the given order.
pub fn summary_json(entries: &[(&str, SummaryValue)]) -> String {
    to_json(&Summary(entries))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SummaryValue {
    Float(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Serialize for SummaryValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SummaryValue::Float(x) => G17(*x).serialize(serializer),
            SummaryValue::Int(n) => serializer.serialize_u64(*n),
            SummaryValue::Text(s) => serializer.serialize_str(s),
            SummaryValue::Bool(b) => serializer.serialize_bool(*b),
        }
    }
}

struct Summary<'a>(&'a [(&'a str, SummaryValue)]);

impl Serialize for Summary<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}
