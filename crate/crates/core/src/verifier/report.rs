use std::time::Duration;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::capacity::Capacity;
use crate::element::Element;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessValue<T> {
    Element(Element<T>),
    Elements(Vec<Element<T>>),
    Real(T),
    Reals(Vec<T>),
    /// Zero-based permutation; rendered one-based.
    Permutation(Vec<usize>),
    Capacity(Capacity<T>),
    Text(String),
}

impl<T: Scalar> WitnessValue<T> {
    fn to_json(&self) -> Value {
        match self {
            WitnessValue::Element(e) => e.to_json(),
            WitnessValue::Elements(es) => Value::Array(es.iter().map(Element::to_json).collect()),
            WitnessValue::Real(v) => json!(v.to_f64()),
            WitnessValue::Reals(vs) => json!(vs.iter().map(|v| v.to_f64()).collect::<Vec<_>>()),
            WitnessValue::Permutation(p) => json!(p.iter().map(|i| i + 1).collect::<Vec<_>>()),
            WitnessValue::Capacity(c) => c.to_json(),
            WitnessValue::Text(s) => json!(s),
        }
    }
}

/// Named values reproducing a violation.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    pub entries: Vec<(String, WitnessValue<T>)>,
}

impl<T> Default for Witness<T> {
    fn default() -> Self {
        Witness {
            entries: Vec::new(),
        }
    }
}

impl<T: Scalar> Witness<T> {
    pub fn new() -> Self {
        Self::default()
    }

    fn with(mut self, name: &str, value: WitnessValue<T>) -> Self {
        self.entries.push((name.to_string(), value));
        self
    }

    pub fn element(self, name: &str, e: &Element<T>) -> Self {
        self.with(name, WitnessValue::Element(e.clone()))
    }

    pub fn elements(self, name: &str, es: &[Element<T>]) -> Self {
        self.with(name, WitnessValue::Elements(es.to_vec()))
    }

    pub fn real(self, name: &str, v: T) -> Self {
        self.with(name, WitnessValue::Real(v))
    }

    pub fn reals(self, name: &str, vs: &[T]) -> Self {
        self.with(name, WitnessValue::Reals(vs.to_vec()))
    }

    pub fn permutation(self, name: &str, p: &[usize]) -> Self {
        self.with(name, WitnessValue::Permutation(p.to_vec()))
    }

    pub fn capacity(self, name: &str, c: &Capacity<T>) -> Self {
        self.with(name, WitnessValue::Capacity(c.clone()))
    }

    pub fn text(self, name: &str, s: impl Into<String>) -> Self {
        self.with(name, WitnessValue::Text(s.into()))
    }

    pub fn get(&self, name: &str) -> Option<&WitnessValue<T>> {
        self.entries.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn get_element(&self, name: &str) -> Option<&Element<T>> {
        match self.get(name) {
            Some(WitnessValue::Element(e)) => Some(e),
            _ => None,
        }
    }

    pub fn get_elements(&self, name: &str) -> Option<&[Element<T>]> {
        match self.get(name) {
            Some(WitnessValue::Elements(e)) => Some(e),
            _ => None,
        }
    }

    pub fn get_real(&self, name: &str) -> Option<T> {
        match self.get(name) {
            Some(WitnessValue::Real(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn get_reals(&self, name: &str) -> Option<&[T]> {
        match self.get(name) {
            Some(WitnessValue::Reals(v)) => Some(v),
            _ => None,
        }
    }

    pub fn get_permutation(&self, name: &str) -> Option<&[usize]> {
        match self.get(name) {
            Some(WitnessValue::Permutation(p)) => Some(p),
            _ => None,
        }
    }

    pub fn get_capacity(&self, name: &str) -> Option<&Capacity<T>> {
        match self.get(name) {
            Some(WitnessValue::Capacity(c)) => Some(c),
            _ => None,
        }
    }

    pub fn get_text(&self, name: &str) -> Option<&str> {
        match self.get(name) {
            Some(WitnessValue::Text(s)) => Some(s),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.entries {
            map.insert(k.clone(), v.to_json());
        }
        Value::Object(map)
    }
}

/// Outcome of one law check on a finite grid.
#[derive(Debug, Clone)]
pub struct LawReport<T> {
    pub law: String,
    pub n: Option<usize>,
    pub grid_m: Option<u32>,
    pub verdict: Verdict,
    pub witness: Option<Witness<T>>,
    /// Severity of the reported witness (largest violation found).
    pub severity: f64,
    pub checked: u64,
    pub elapsed: Duration,
    pub notes: Vec<String>,
    /// Sub-conditions, in the order they were checked.
    pub parts: Vec<LawReport<T>>,
}

impl<T: Scalar> LawReport<T> {
    pub fn from_search(law: impl Into<String>, search: Search<T>, elapsed: Duration) -> Self {
        let (witness, severity) = match search.best {
            Some(c) => (Some(c.witness), c.severity),
            None => (None, 0.0),
        };
        LawReport {
            law: law.into(),
            n: None,
            grid_m: None,
            verdict: if witness.is_some() {
                Verdict::Fail
            } else {
                Verdict::Pass
            },
            witness,
            severity,
            checked: search.checked,
            elapsed,
            notes: Vec::new(),
            parts: Vec::new(),
        }
    }

    /// Conjunction of sub-reports; the first failing part supplies the witness.
    pub fn combine(law: impl Into<String>, parts: Vec<LawReport<T>>) -> Self {
        let failing = parts.iter().find(|p| p.failed());
        let witness = failing.and_then(|p| p.witness.clone());
        let severity = failing.map_or(0.0, |p| p.severity);
        let verdict = if failing.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        LawReport {
            law: law.into(),
            n: None,
            grid_m: None,
            verdict,
            witness,
            severity,
            checked: parts.iter().map(|p| p.checked).sum(),
            elapsed: parts.iter().map(|p| p.elapsed).sum(),
            notes: Vec::new(),
            parts,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_grid(mut self, m: u32) -> Self {
        self.grid_m = Some(m);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Name of the first failing sub-condition, if any.
    pub fn failing_part(&self) -> Option<&str> {
        self.parts.iter().find(|p| p.failed()).map(|p| p.law.as_str())
    }

    pub fn part(&self, law: &str) -> Option<&LawReport<T>> {
        self.parts.iter().find(|p| p.law == law)
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("law".into(), json!(self.law));
        if let Some(n) = self.n {
            map.insert("n".into(), json!(n));
        }
        if let Some(m) = self.grid_m {
            map.insert("grid".into(), json!(m));
        }
        map.insert("verdict".into(), json!(self.verdict.as_str()));
        if let Some(w) = &self.witness {
            map.insert("witness".into(), w.to_json());
        }
        map.insert("checked".into(), json!(self.checked));
        map.insert("elapsed_ms".into(), json!(self.elapsed.as_secs_f64() * 1e3));
        if !self.notes.is_empty() {
            map.insert("notes".into(), json!(self.notes));
        }
        if !self.parts.is_empty() {
            map.insert(
                "parts".into(),
                Value::Array(self.parts.iter().map(LawReport::to_json).collect()),
            );
        }
        Value::Object(map)
    }
}

/// Resolution note attached to every grid verdict.
pub fn resolution_note(m: u32) -> String {
    format!("pass means no counterexample at resolution 1/{m}")
}

struct Candidate<T> {
    severity: f64,
    key: u64,
    witness: Witness<T>,
}

/// Accumulates instance counts and keeps the most severe violation.
///
/// Ties in severity go to the smallest enumeration key, so merging partial
/// searches in any order yields the same witness.
pub struct Search<T> {
    best: Option<Candidate<T>>,
    pub checked: u64,
}

impl<T> Default for Search<T> {
    fn default() -> Self {
        Search {
            best: None,
            checked: 0,
        }
    }
}

impl<T: Scalar> Search<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Enumeration key from an outer (parallel) index and an inner counter.
    pub fn key(outer: usize, inner: u64) -> u64 {
        ((outer as u64) << 40) | (inner & ((1 << 40) - 1))
    }

    pub fn tick(&mut self) {
        self.checked += 1;
    }

    pub fn offer(&mut self, key: u64, severity: f64, make: impl FnOnce() -> Witness<T>) {
        let better = match &self.best {
            None => true,
            Some(b) => severity > b.severity || (severity == b.severity && key < b.key),
        };
        if better {
            self.best = Some(Candidate {
                severity,
                key,
                witness: make(),
            });
        }
    }

    pub fn found(&self) -> bool {
        self.best.is_some()
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        if let Some(c) = other.best {
            let key = c.key;
            let severity = c.severity;
            let mut slot = Some(c.witness);
            self.offer(key, severity, || slot.take().unwrap_or_default());
        }
        self
    }
}

/// Runs `body` over `items` in parallel; `body` receives the item index for
/// building enumeration keys.
pub fn par_search<A, T, F>(items: &[A], body: F) -> Search<T>
where
    A: Sync,
    T: Scalar,
    F: Fn(usize, &A, &mut Search<T>) + Sync,
{
    items
        .par_iter()
        .enumerate()
        .fold(Search::new, |mut s, (i, a)| {
            body(i, a, &mut s);
            s
        })
        .reduce(Search::new, Search::merge)
}
