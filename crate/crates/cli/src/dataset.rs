//! Datasets of aggregation inputs: CSV for scalars, JSON for any carrier.
//!
//! JSON accepts either a bare array of records or
//! `{"carrier": "...", "rows": [...]}`; a record is an array of elements or
//! `{"id": "...", "values": [...]}`. CSV has one record per line, an optional
//! header, and an optional leading `id` column (header required for ids).

use std::path::Path;

use choquet_core::{Carrier, Element64};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub id: Option<String>,
    pub values: Vec<Element64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    carrier: Carrier,
    rows: Vec<Record>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Dataset {
    /// Checks that every row has the same length and every element is a
    /// valid element of `carrier`.
    pub fn new(carrier: Carrier, rows: Vec<Record>) -> CliResult<Self> {
        let n = rows
            .first()
            .map(|r| r.values.len())
            .ok_or_else(|| CliError::Invalid("dataset has no rows".into()))?;
        if n == 0 {
            return Err(CliError::Invalid("records must not be empty".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.values.len() != n {
                return Err(CliError::Invalid(format!(
                    "row {} has {} values, expected {n}",
                    i + 1,
                    row.values.len()
                )));
            }
            for x in &row.values {
                x.validate()?;
                if x.carrier() != carrier {
                    return Err(choquet_core::Error::KindMismatch {
                        expected: carrier,
                        found: x.carrier(),
                    }
                    .into());
                }
            }
        }
        Ok(Dataset { carrier, rows })
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn rows(&self) -> &[Record] {
        &self.rows
    }

    /// Arity of every record.
    pub fn n(&self) -> usize {
        self.rows[0].values.len()
    }

    pub fn has_ids(&self) -> bool {
        self.rows.iter().any(|r| r.id.is_some())
    }

    /// Reads `path`, choosing the format from the extension and falling back
    /// to sniffing the first character.
    pub fn load(path: &Path, carrier: Carrier) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let format = match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ if text.trim_start().starts_with(['[', '{']) => Format::Json,
            _ => Format::Csv,
        };
        Self::parse(&text, format, carrier)
    }

    pub fn parse(text: &str, format: Format, carrier: Carrier) -> CliResult<Self> {
        match format {
            Format::Csv => Self::from_csv(text, carrier),
            Format::Json => Self::from_json(&serde_json::from_str(text)?, carrier),
        }
    }

    pub fn serialize(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(serde_json::to_string_pretty(&self.to_json())?),
        }
    }

    pub fn from_csv(text: &str, carrier: Carrier) -> CliResult<Self> {
        if carrier != Carrier::Scalar {
            return Err(CliError::Invalid(format!(
                "CSV input carries scalars only; use JSON for {carrier}"
            )));
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut records = reader.records().peekable();
        let mut with_id = false;
        if let Some(Ok(first)) = records.peek() {
            if first.iter().any(|f| f.parse::<f64>().is_err()) {
                with_id = first.get(0).is_some_and(|f| f.eq_ignore_ascii_case("id"));
                records.next();
            }
        }
        let mut rows = Vec::new();
        for (line, rec) in records.enumerate() {
            let rec = rec?;
            let mut fields = rec.iter();
            let id = if with_id {
                fields.next().filter(|s| !s.is_empty()).map(str::to_string)
            } else {
                None
            };
            let values = fields
                .map(|f| {
                    let v = f.parse::<f64>().map_err(|_| {
                        CliError::Invalid(format!("record {}: {f:?} is not a number", line + 1))
                    })?;
                    Ok(Element64::scalar(v)?)
                })
                .collect::<CliResult<Vec<_>>>()?;
            rows.push(Record { id, values });
        }
        Self::new(carrier, rows)
    }

    pub fn to_csv(&self) -> CliResult<String> {
        if self.carrier != Carrier::Scalar {
            return Err(CliError::Invalid(format!("cannot write {} rows as CSV", self.carrier)));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let ids = self.has_ids();
        let mut header: Vec<String> = (1..=self.n()).map(|i| format!("x{i}")).collect();
        if ids {
            header.insert(0, "id".into());
        }
        w.write_record(&header)?;
        for row in &self.rows {
            let mut fields: Vec<String> = row.values.iter().map(|x| x.to_string()).collect();
            if ids {
                fields.insert(0, row.id.clone().unwrap_or_default());
            }
            w.write_record(&fields)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Invalid(e.to_string()))
    }

    /// The declared `"carrier"`, when present, must agree with `carrier`.
    pub fn from_json(value: &Value, carrier: Carrier) -> CliResult<Self> {
        let rows = match value {
            Value::Array(rows) => rows,
            Value::Object(obj) => {
                if let Some(declared) = obj.get("carrier") {
                    let declared: Carrier = declared
                        .as_str()
                        .ok_or_else(|| CliError::Invalid("\"carrier\" must be a string".into()))?
                        .parse()?;
                    if declared != carrier {
                        return Err(choquet_core::Error::KindMismatch {
                            expected: carrier,
                            found: declared,
                        }
                        .into());
                    }
                }
                obj.get("rows")
                    .and_then(Value::as_array)
                    .ok_or_else(|| CliError::Invalid("dataset object needs a \"rows\" array".into()))?
            }
            _ => return Err(CliError::Invalid("dataset must be an array or an object".into())),
        };
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, rec)| {
                let (id, values) = match rec {
                    Value::Array(vs) => (None, vs),
                    Value::Object(o) => {
                        let id = match o.get("id") {
                            None | Some(Value::Null) => None,
                            Some(Value::String(s)) => Some(s.clone()),
                            Some(other) => Some(other.to_string()),
                        };
                        let vs = o.get("values").and_then(Value::as_array).ok_or_else(|| {
                            CliError::Invalid(format!("record {} needs a \"values\" array", i + 1))
                        })?;
                        (id, vs)
                    }
                    _ => return Err(CliError::Invalid(format!("record {} is not an array", i + 1))),
                };
                let values = values
                    .iter()
                    .map(|v| Ok(Element64::from_json(carrier, v)?))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Record { id, values })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Self::new(carrier, rows)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let values: Vec<Value> = r.values.iter().map(Element64::to_json).collect();
                match &r.id {
                    Some(id) => json!({"id": id, "values": values}),
                    None => Value::Array(values),
                }
            })
            .collect();
        json!({"carrier": self.carrier.to_string(), "rows": rows})
    }
}
