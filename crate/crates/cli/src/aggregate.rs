use std::path::{Path, PathBuf};

use choquet_core::{
    choquet_aggregate, AdditionOp, Addition64, Capacity64, Carrier, Element64, Input64, Kernel64, KernelRegistry,
    Order64,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dataset::Dataset;
use crate::error::{CliError, CliResult};
use crate::OutputFormat;

/// Everything `aggregate` needs, already parsed.
pub struct AggregateJob {
    pub input: PathBuf,
    pub capacity: Option<PathBuf>,
    pub order: String,
    pub kernel: String,
    pub add: Option<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowResult {
    pub id: Option<String>,
    pub value: Element64,
    pub consistent: bool,
    pub in_k: bool,
    pub permutations: u128,
    pub sampled: bool,
}

pub struct AggregateOutcome {
    pub rows: Vec<RowResult>,
    pub carrier: Carrier,
    pub order: String,
    pub kernel: String,
}

impl AggregateOutcome {
    pub fn all_consistent(&self) -> bool {
        self.rows.iter().all(|r| r.consistent)
    }

    /// 0 when every row is consistent, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_consistent() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut row = json!({
                    "value": r.value.to_json(),
                    "consistent": r.consistent,
                    "in_K": r.in_k,
                    "permutations": permutation_count(r.permutations),
                    "sampled": r.sampled,
                });
                if let Some(id) = &r.id {
                    row["id"] = json!(id);
                }
                row
            })
            .collect();
        json!({
            "carrier": self.carrier.to_string(),
            "order": self.order,
            "kernel": self.kernel,
            "consistent": self.all_consistent(),
            "rows": rows,
        })
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let with_ids = self.rows.iter().any(|r| r.id.is_some());
        let mut header: Vec<String> = Vec::new();
        if with_ids {
            header.push("id".into());
        }
        header.extend(value_columns(self.carrier));
        header.extend(["consistent", "in_K", "permutations", "sampled"].map(String::from));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut fields = Vec::new();
            if with_ids {
                fields.push(r.id.clone().unwrap_or_default());
            }
            fields.extend(r.value.component_vec().iter().map(f64::to_string));
            fields.push(r.consistent.to_string());
            fields.push(r.in_k.to_string());
            fields.push(r.permutations.to_string());
            fields.push(r.sampled.to_string());
            w.write_record(&fields)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Invalid(e.to_string()))
    }

    pub fn render(&self, format: OutputFormat) -> CliResult<String> {
        match format {
            OutputFormat::Json => Ok(serde_json::to_string_pretty(&self.to_json())? + "\n"),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

fn value_columns(carrier: Carrier) -> Vec<String> {
    match carrier {
        Carrier::Scalar => vec!["value".into()],
        Carrier::Interval => vec!["lower".into(), "upper".into()],
        Carrier::Vector(k) => (1..=k).map(|i| format!("v{i}")).collect(),
    }
}

/// `|Pi_X|` as a JSON number when it fits in `u64`, else as a string.
fn permutation_count(count: u128) -> Value {
    u64::try_from(count).map_or_else(|_| json!(count.to_string()), |c| json!(c))
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Loads a capacity; a `random` capacity without a `"seed"` gets `seed`.
pub fn load_capacity(path: &Path, seed: u64) -> CliResult<Capacity64> {
    let mut value = read_json(path)?;
    if value.get("kind").and_then(Value::as_str) == Some("random") && value.get("seed").is_none() {
        value["seed"] = json!(seed);
    }
    Ok(Capacity64::from_json(&value)?)
}

/// Kernel spec: inline JSON, a path to a JSON file, or a catalog name.
pub fn resolve_kernel(spec: &str, ord: &Order64) -> CliResult<Kernel64> {
    let registry = KernelRegistry::new();
    let path = Path::new(spec);
    if !spec.trim_start().starts_with('{') && spec.ends_with(".json") && path.is_file() {
        return Ok(registry.from_json(&read_json(path)?, ord)?);
    }
    Ok(registry.resolve(spec, ord)?)
}

pub fn resolve_addition(spec: Option<&str>, carrier: Carrier) -> CliResult<Addition64> {
    Ok(match spec {
        Some(s) => AdditionOp::parse(s)?,
        None => AdditionOp::for_carrier(carrier),
    })
}

/// Aggregates every row; rows are independent and keep input order.
pub fn run(job: &AggregateJob) -> CliResult<AggregateOutcome> {
    let ord = Order64::parse(&job.order)?;
    let carrier = ord.carrier();
    let data = Dataset::load(&job.input, carrier)?;
    let n = data.n();
    let mu = match &job.capacity {
        Some(p) => load_capacity(p, job.seed)?,
        None => Capacity64::cardinality(n)?,
    };
    if mu.n() != n {
        return Err(CliError::Invalid(format!(
            "records have {n} values but the capacity is on {} elements",
            mu.n()
        )));
    }
    let add = resolve_addition(job.add.as_deref(), carrier)?;
    let kernel = resolve_kernel(&job.kernel, &ord)?;

    let rows = data
        .rows()
        .par_iter()
        .map(|rec| {
            let input = Input64::new(rec.values.clone(), mu.clone(), ord.clone(), add.clone())?;
            let agg = choquet_aggregate(&input, &kernel)?;
            Ok(RowResult {
                id: rec.id.clone(),
                value: agg.value,
                consistent: agg.consistent,
                in_k: agg.in_k,
                permutations: agg.permutations,
                sampled: agg.sampled,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(AggregateOutcome {
        rows,
        carrier,
        order: ord.to_string(),
        kernel: kernel.name().to_string(),
    })
}
