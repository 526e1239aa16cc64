use std::path::PathBuf;
use std::time::Duration;

use choquet_core::algebra::{check_associativity, check_cancellation, check_commutativity, check_compatibility};
use choquet_core::dissimilarity::{
    appendix_c_counterexample, check_dissimilarity, check_telescoping, ScalarDissimilarity, WidthMean,
};
use choquet_core::order::check_admissibility;
use choquet_core::verifier::{
    check_aggregation, check_monotonicity, check_wd, oracle_crosscheck_seeded, CrossScope, Search,
};
use choquet_core::{
    AdditionOp, Addition64, Carrier, DissimilarityFn, Error, GridSpec, Kernel64, KernelRegistry, Order64, Report64,
};
use clap::ValueEnum;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::aggregate::{read_json, resolve_addition, resolve_kernel};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Order,
    Wd,
    Monotone,
    Aggregation,
    Dissimilarity,
    AppendixC,
    /// Operator-level brute force against the condition-level checks.
    Oracle,
    /// Every suite except `oracle`.
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Order => "order",
            Suite::Wd => "wd",
            Suite::Monotone => "monotone",
            Suite::Aggregation => "aggregation",
            Suite::Dissimilarity => "dissimilarity",
            Suite::AppendixC => "appendix-c",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppendixCConfig {
    pub alpha: f64,
    pub beta: f64,
    pub mean: String,
    pub delta: String,
    pub grid: u32,
    pub fallback: bool,
}

impl Default for AppendixCConfig {
    fn default() -> Self {
        AppendixCConfig {
            alpha: 0.5,
            beta: 1.0,
            mean: "max".into(),
            delta: "abs-diff".into(),
            grid: 8,
            fallback: true,
        }
    }
}

/// Verification config file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Kernel names, inline JSON strings, or JSON kernel objects.
    pub kernels: Vec<Value>,
    pub orders: Vec<String>,
    /// Operations checked by the `algebra` suite.
    pub additions: Vec<String>,
    /// Addition used by the operator suites (default: the carrier's own).
    pub add: Option<String>,
    pub n: Vec<usize>,
    pub grid: Option<u32>,
    pub seed: Option<u64>,
    pub dissimilarities: Vec<String>,
    pub appendix_c: AppendixCConfig,
}

/// Command-line overrides, applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct VerifyJob {
    pub suite: Option<Suite>,
    pub config: Option<PathBuf>,
    pub kernels: Vec<String>,
    pub orders: Vec<String>,
    pub add: Option<String>,
    pub n: Vec<usize>,
    pub grid: Option<u32>,
    pub seed: Option<u64>,
}

const DEFAULT_ORDERS: &[&str] = &["scalar", "ab:0.5:1"];
const ORDER_SUITE: &[&str] = &["scalar", "ab:0.5:1", "ab:0:1", "ab:1:0", "veclex:1,2", "veclex:2,1"];
const ADDITIONS: &[&str] = &["plus", "iv-plus", "vv-plus"];

/// Resolved settings for one run.
pub struct Settings {
    kernels: Vec<Value>,
    orders: Option<Vec<String>>,
    additions: Vec<String>,
    add: Option<String>,
    ns: Vec<usize>,
    grid: Option<u32>,
    seed: u64,
    dissimilarities: Vec<String>,
    appendix_c: AppendixCConfig,
}

impl Settings {
    pub fn resolve(job: &VerifyJob) -> CliResult<Self> {
        let cfg = match &job.config {
            Some(p) => serde_json::from_value::<VerifyConfig>(read_json(p)?)?,
            None => VerifyConfig::default(),
        };
        let pick = |cli: &[String], file: Vec<String>| {
            if !cli.is_empty() {
                Some(cli.to_vec())
            } else if !file.is_empty() {
                Some(file)
            } else {
                None
            }
        };
        let kernels = if !job.kernels.is_empty() {
            job.kernels.iter().map(|k| json!(k)).collect()
        } else if !cfg.kernels.is_empty() {
            cfg.kernels
        } else {
            vec![json!("choquet")]
        };
        let ns = match (&job.n[..], &cfg.n[..]) {
            ([], []) => vec![2, 3, 4],
            ([], file) => file.to_vec(),
            (cli, _) => cli.to_vec(),
        };
        if let Some(&bad) = ns.iter().find(|&&n| n < 2) {
            return Err(CliError::Invalid(format!("arity must be at least 2, got {bad}")));
        }
        Ok(Settings {
            kernels,
            orders: pick(&job.orders, cfg.orders),
            additions: pick(&[], cfg.additions).unwrap_or_else(|| ADDITIONS.iter().map(|s| s.to_string()).collect()),
            add: job.add.clone().or(cfg.add),
            ns,
            grid: job.grid.or(cfg.grid),
            seed: job.seed.or(cfg.seed).unwrap_or(42),
            dissimilarities: if cfg.dissimilarities.is_empty() {
                vec!["abs-diff".into()]
            } else {
                cfg.dissimilarities
            },
            appendix_c: cfg.appendix_c,
        })
    }

    fn orders_or(&self, default: &[&str]) -> Vec<String> {
        self.orders
            .clone()
            .unwrap_or_else(|| default.iter().map(|s| s.to_string()).collect())
    }

    fn grid_for(&self, carrier: Carrier) -> CliResult<GridSpec> {
        Ok(match self.grid {
            Some(m) => GridSpec::new(carrier, m)?,
            None => GridSpec::default_for(carrier),
        })
    }

    fn kernel(&self, spec: &Value, ord: &Order64) -> CliResult<Kernel64> {
        match spec {
            Value::String(s) => resolve_kernel(s, ord),
            Value::Object(_) => Ok(KernelRegistry::new().from_json(spec, ord)?),
            other => Err(CliError::Invalid(format!("kernel entries must be strings or objects, got {other}"))),
        }
    }

    fn addition(&self, carrier: Carrier) -> CliResult<Addition64> {
        resolve_addition(self.add.as_deref(), carrier)
    }

    /// Random-capacity seeds of the oracle family.
    fn seeds(&self) -> Vec<u64> {
        (0..5).map(|i| self.seed.wrapping_add(i)).collect()
    }
}

/// One report plus where it came from.
pub struct Entry {
    pub context: Map<String, Value>,
    pub report: Report64,
}

pub struct VerifyOutcome {
    pub suite: Suite,
    pub entries: Vec<Entry>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.report.passed())
    }

    /// 0 when every report passes, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            3
        }
    }

    pub fn to_json(&self) -> Value {
        let reports: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = e.report.to_json();
                if let Value::Object(map) = &mut v {
                    for (k, x) in &e.context {
                        map.insert(k.clone(), x.clone());
                    }
                }
                v
            })
            .collect();
        json!({
            "suite": self.suite.name(),
            "verdict": if self.passed() { "pass" } else { "fail" },
            "reports": reports,
        })
    }
}

fn context(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Carrier an addition is checked on when the op itself does not fix one.
fn addition_carrier(add: &Addition64) -> Carrier {
    match (add.carrier(), add) {
        (Some(c), _) => c,
        (None, AdditionOp::Vector) => Carrier::Vector(2),
        _ => Carrier::Scalar,
    }
}

fn algebra_suite(s: &Settings, out: &mut Vec<Entry>) -> CliResult<()> {
    for spec in &s.additions {
        let add = AdditionOp::parse(spec)?;
        let carrier = addition_carrier(&add);
        let grid = s.grid_for(carrier)?;
        let ctx = context(&[("suite", json!("algebra")), ("add", json!(spec)), ("carrier", json!(carrier.to_string()))]);
        for report in [
            check_commutativity(&add, &grid)?,
            check_associativity(&add, &grid)?,
            check_cancellation(&add, &grid)?,
        ] {
            out.push(Entry {
                context: ctx.clone(),
                report,
            });
        }
        for ord_spec in s.orders_or(ORDER_SUITE) {
            let ord = Order64::parse(&ord_spec)?;
            if ord.carrier() != carrier {
                continue;
            }
            let mut ctx = ctx.clone();
            ctx.insert("order".into(), json!(ord_spec));
            out.push(Entry {
                context: ctx,
                report: check_compatibility(&add, &ord, true, &grid)?,
            });
        }
    }
    Ok(())
}

fn order_suite(s: &Settings, out: &mut Vec<Entry>) -> CliResult<()> {
    for spec in s.orders_or(ORDER_SUITE) {
        let ord = Order64::parse(&spec)?;
        out.push(Entry {
            context: context(&[("suite", json!("order")), ("order", json!(spec))]),
            report: check_admissibility(&ord, &s.grid_for(ord.carrier())?)?,
        });
    }
    Ok(())
}

type OperatorCheck = fn(&Kernel64, &Addition64, &Order64, usize, &GridSpec) -> choquet_core::Result<Report64>;

fn operator_suite(s: &Settings, suite: &str, check: OperatorCheck, out: &mut Vec<Entry>) -> CliResult<()> {
    for ord_spec in s.orders_or(DEFAULT_ORDERS) {
        let ord = Order64::parse(&ord_spec)?;
        let grid = s.grid_for(ord.carrier())?;
        let add = s.addition(ord.carrier())?;
        for spec in &s.kernels {
            let kernel = s.kernel(spec, &ord)?;
            for &n in &s.ns {
                out.push(Entry {
                    context: context(&[
                        ("suite", json!(suite)),
                        ("kernel", json!(kernel.name())),
                        ("order", json!(ord_spec)),
                        ("add", json!(add.name())),
                    ]),
                    report: check(&kernel, &add, &ord, n, &grid)?,
                });
            }
        }
    }
    Ok(())
}

fn oracle_suite(s: &Settings, out: &mut Vec<Entry>) -> CliResult<()> {
    for ord_spec in s.orders_or(&["scalar"]) {
        let ord = Order64::parse(&ord_spec)?;
        let grid = GridSpec::new(ord.carrier(), s.grid.unwrap_or(2))?;
        let add = s.addition(ord.carrier())?;
        for spec in &s.kernels {
            let kernel = s.kernel(spec, &ord)?;
            for &n in &s.ns {
                let report =
                    oracle_crosscheck_seeded(&kernel, &add, &ord, n, &grid, CrossScope::Aggregation, &s.seeds())?;
                out.push(Entry {
                    context: context(&[
                        ("suite", json!("oracle")),
                        ("kernel", json!(kernel.name())),
                        ("order", json!(ord_spec)),
                        ("add", json!(add.name())),
                    ]),
                    report,
                });
            }
        }
    }
    Ok(())
}

fn dissimilarity_suite(s: &Settings, out: &mut Vec<Entry>) -> CliResult<()> {
    for ord_spec in s.orders_or(DEFAULT_ORDERS) {
        let ord = Order64::parse(&ord_spec)?;
        let grid = s.grid_for(ord.carrier())?;
        let add = s.addition(ord.carrier())?;
        for spec in &s.dissimilarities {
            let d = DissimilarityFn::parse(spec, &ord)?;
            if d.carrier().is_some_and(|c| c != ord.carrier()) {
                continue;
            }
            let ctx = context(&[
                ("suite", json!("dissimilarity")),
                ("dissimilarity", json!(d.name())),
                ("order", json!(ord_spec)),
            ]);
            out.push(Entry {
                context: ctx.clone(),
                report: check_dissimilarity(&d, &ord, &grid)?,
            });
            out.push(Entry {
                context: ctx,
                report: check_telescoping(&d, &add, &ord, &grid)?,
            });
        }
    }
    Ok(())
}

/// A found counterexample is a failing report.
fn appendix_c_suite(s: &Settings, out: &mut Vec<Entry>) -> CliResult<()> {
    let c = &s.appendix_c;
    let mean = WidthMean::parse(&c.mean)?;
    let delta = ScalarDissimilarity::parse(&c.delta)?;
    let m = s.grid.unwrap_or(c.grid);
    let grid = GridSpec::new(Carrier::Interval, m)?;
    let start = std::time::Instant::now();
    let mut search = Search::new();
    let checked = match appendix_c_counterexample(c.alpha, c.beta, mean, delta, &grid, c.fallback) {
        Ok(w) => {
            search.offer(0, 1.0, || w.to_witness());
            w.checked
        }
        Err(Error::NoWitnessFound(_)) => 0,
        Err(e) => return Err(e.into()),
    };
    let mut report = Report64::from_search("telescoping", search, Duration::ZERO)
        .with_grid(m)
        .with_note(format!("takac dissimilarity with M_d={}, delta_d={}", mean.name(), delta.name()));
    report.checked = checked;
    report.elapsed = start.elapsed();
    out.push(Entry {
        context: context(&[
            ("suite", json!("appendix-c")),
            ("alpha", json!(c.alpha)),
            ("beta", json!(c.beta)),
            ("fallback", json!(c.fallback)),
        ]),
        report,
    });
    Ok(())
}

pub fn run(job: &VerifyJob) -> CliResult<VerifyOutcome> {
    let suite = job.suite.unwrap_or(Suite::All);
    let s = Settings::resolve(job)?;
    let mut entries = Vec::new();
    let suites = match suite {
        Suite::All => vec![
            Suite::Algebra,
            Suite::Order,
            Suite::Wd,
            Suite::Monotone,
            Suite::Aggregation,
            Suite::Dissimilarity,
            Suite::AppendixC,
        ],
        one => vec![one],
    };
    for one in suites {
        match one {
            Suite::Algebra => algebra_suite(&s, &mut entries)?,
            Suite::Order => order_suite(&s, &mut entries)?,
            Suite::Wd => operator_suite(&s, "wd", check_wd, &mut entries)?,
            Suite::Monotone => operator_suite(&s, "monotone", check_monotonicity, &mut entries)?,
            Suite::Aggregation => operator_suite(&s, "aggregation", check_aggregation, &mut entries)?,
            Suite::Dissimilarity => dissimilarity_suite(&s, &mut entries)?,
            Suite::AppendixC => appendix_c_suite(&s, &mut entries)?,
            Suite::Oracle => oracle_suite(&s, &mut entries)?,
            Suite::All => unreachable!("expanded above"),
        }
    }
    Ok(VerifyOutcome { suite, entries })
}
