//! Capacities (normalized monotone set functions) on `[n]`.
//!
//! Subsets are bitmasks over zero-based indices internally; every external
//! format uses one-based element lists.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{approx_eq, le_tol, Scalar};

pub const MAX_N: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct Capacity<T> {
    n: usize,
    values: Vec<T>,
}

/// One-based element list of `mask`.
pub fn subset_elements(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::BadParameter(format!("n must be in 1..={MAX_N}, got {n}")));
    }
    Ok(())
}

fn mask_of(n: usize, subset: &[usize]) -> Result<usize> {
    let mut mask = 0usize;
    for &e in subset {
        if e == 0 || e > n {
            return Err(Error::BadParameter(format!("subset element {e} outside 1..={n}")));
        }
        mask |= 1 << (e - 1);
    }
    Ok(mask)
}

impl<T: Scalar> Capacity<T> {
    /// Validates a full table indexed by bitmask.
    pub fn from_values(n: usize, values: Vec<T>) -> Result<Self> {
        check_n(n)?;
        if values.len() != 1 << n {
            return Err(Error::BadParameter(format!(
                "expected {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        let c = Capacity { n, values };
        c.validate()?;
        Ok(c)
    }

    /// Builds a capacity from `(subset, value)` entries covering all `2^n`
    /// subsets. Subsets are one-based element lists.
    pub fn from_table(n: usize, entries: &[(Vec<usize>, T)]) -> Result<Self> {
        let table = Self::collect_entries(n, entries)?;
        let values = table
            .into_iter()
            .enumerate()
            .map(|(mask, v)| v.ok_or_else(|| Error::MissingSubset(subset_elements(mask))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(n, values)
    }

    /// Completes a partial table by the maximal monotone extension: each
    /// missing `mu(A)` is the least given value over supersets of `A`.
    /// `mu(empty) = 0` and `mu([n]) = 1` are assumed when absent.
    pub fn from_partial_table(n: usize, entries: &[(Vec<usize>, T)]) -> Result<Self> {
        let mut table = Self::collect_entries(n, entries)?;
        let full = (1 << n) - 1;
        table[0].get_or_insert(T::zero());
        table[full].get_or_insert(T::one());
        let given: Vec<Option<T>> = table.clone();
        let values = (0..=full)
            .map(|a| match given[a] {
                Some(v) => v,
                None => (0..=full)
                    .filter(|d| d & a == a)
                    .filter_map(|d| given[d])
                    .fold(T::one(), |m, v| m.min_of(v)),
            })
            .collect();
        Self::from_values(n, values)
    }

    /// Trusted full table; callers guarantee the capacity axioms.
    pub(crate) fn from_raw(n: usize, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        Capacity { n, values }
    }

    fn collect_entries(n: usize, entries: &[(Vec<usize>, T)]) -> Result<Vec<Option<T>>> {
        check_n(n)?;
        let mut table = vec![None; 1 << n];
        for (subset, v) in entries {
            let mask = mask_of(n, subset)?;
            if table[mask].replace(*v).is_some() {
                return Err(Error::BadParameter(format!("subset {subset:?} given twice")));
            }
        }
        Ok(table)
    }

    /// `mu(A) = |A| / n`.
    pub fn cardinality(n: usize) -> Result<Self> {
        check_n(n)?;
        let values = (0..1usize << n)
            .map(|m| T::from_ratio(m.count_ones() as i64, n as i64))
            .collect();
        Ok(Capacity { n, values })
    }

    /// `mu(A) = 1` iff `i` (one-based) is in `A`.
    pub fn dirac(n: usize, i: usize) -> Result<Self> {
        check_n(n)?;
        if i == 0 || i > n {
            return Err(Error::BadParameter(format!("dirac index {i} outside 1..={n}")));
        }
        let values = (0..1usize << n)
            .map(|m| if m >> (i - 1) & 1 == 1 { T::one() } else { T::zero() })
            .collect();
        Ok(Capacity { n, values })
    }

    /// `mu(A) = 1` iff `|A| >= k`.
    pub fn top(n: usize, k: usize) -> Result<Self> {
        check_n(n)?;
        if k == 0 || k > n {
            return Err(Error::BadParameter(format!("top threshold {k} outside 1..={n}")));
        }
        let values = (0..1usize << n)
            .map(|m| if m.count_ones() as usize >= k { T::one() } else { T::zero() })
            .collect();
        Ok(Capacity { n, values })
    }

    /// Seeded random capacity: uniform draws on proper subsets made monotone
    /// by taking the running maximum over subsets.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        Self::random_with(n, seed, |v| T::from_f64(v).unwrap_or_else(T::zero))
    }

    /// Like [`random`](Self::random) with every value rounded to `j/m`.
    pub fn grid_random(n: usize, m: u32, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadParameter("grid denominator must be >= 1".into()));
        }
        Self::random_with(n, seed, |v| {
            T::from_ratio((v * m as f64).round() as i64, m as i64)
        })
    }

    fn random_with(n: usize, seed: u64, cast: impl Fn(f64) -> T) -> Result<Self> {
        check_n(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = (1usize << n) - 1;
        let mut raw = vec![0.0f64; full + 1];
        for (mask, slot) in raw.iter_mut().enumerate() {
            *slot = match mask {
                0 => 0.0,
                m if m == full => 1.0,
                _ => rng.gen::<f64>(),
            };
        }
        // Ascending mask order visits every subset before its supersets.
        for mask in 1..=full {
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    raw[mask] = raw[mask].max(raw[mask & !(1 << i)]);
                }
            }
        }
        let values = raw.into_iter().map(cast).collect();
        Ok(Capacity { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `mu` of the subset encoded by `mask` (bit `i` = element `i + 1`).
    pub fn value(&self, mask: usize) -> T {
        self.values[mask]
    }

    /// `mu` of a one-based element list.
    pub fn value_of(&self, subset: &[usize]) -> Result<T> {
        Ok(self.values[mask_of(self.n, subset)?])
    }

    /// Raw table indexed by bitmask.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    fn validate(&self) -> Result<()> {
        let full = (1usize << self.n) - 1;
        if !approx_eq(self.values[0], T::zero()) {
            return Err(Error::BadBoundary(format!("mu(empty) = {}", self.values[0])));
        }
        for (mask, v) in self.values.iter().enumerate() {
            if !(le_tol(T::zero(), *v) && le_tol(*v, T::one())) {
                return Err(Error::BadBoundary(format!(
                    "mu({:?}) = {v} outside [0,1]",
                    subset_elements(mask)
                )));
            }
        }
        // Covering pairs suffice: monotone along every single-element step.
        for mask in 0..full {
            for i in 0..self.n {
                let bigger = mask | 1 << i;
                if bigger != mask && !le_tol(self.values[mask], self.values[bigger]) {
                    return Err(Error::NotMonotone {
                        smaller: subset_elements(mask),
                        larger: subset_elements(bigger),
                    });
                }
            }
        }
        if !approx_eq(self.values[full], T::one()) {
            return Err(Error::BadBoundary(format!("mu([n]) = {}", self.values[full])));
        }
        Ok(())
    }

    /// `b_i = mu({sigma(i), ..., sigma(n)})` for `i = 1..n`, then `b_{n+1} = 0`.
    /// `sigma` is zero-based.
    pub fn tail_values(&self, sigma: &[usize]) -> Vec<T> {
        let mut out = vec![T::zero(); sigma.len() + 1];
        let mut mask = 0usize;
        for (i, &s) in sigma.iter().enumerate().rev() {
            mask |= 1 << s;
            out[i] = self.values[mask];
        }
        out
    }

    /// Relabelled capacity `mu_hat(C) = mu({pi(i) : i in C})` for a zero-based
    /// permutation `pi`.
    pub fn transport(&self, pi: &[usize]) -> Result<Self> {
        if pi.len() != self.n {
            return Err(Error::BadParameter(format!(
                "permutation of length {} for a capacity on {} elements",
                pi.len(),
                self.n
            )));
        }
        let values = (0..1usize << self.n)
            .map(|c| {
                let image = (0..self.n)
                    .filter(|i| c >> i & 1 == 1)
                    .fold(0usize, |acc, i| acc | 1 << pi[i]);
                self.values[image]
            })
            .collect();
        Ok(Capacity { n: self.n, values })
    }

    /// Table form: `{"n", "kind": "table", "entries": [{"subset", "value"}]}`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .values
            .iter()
            .enumerate()
            .map(|(mask, v)| json!({"subset": subset_elements(mask), "value": v.to_f64()}))
            .collect();
        json!({"n": self.n, "kind": "table", "entries": entries})
    }

    /// Reads the table form or a named family (`cardinality`, `dirac` with
    /// `"i"`, `top` with `"k"`, `random` with optional `"seed"` and `"grid"`).
    pub fn from_json(value: &Value) -> Result<Self> {
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("capacity needs an integer \"n\"".into()))? as usize;
        let kind = value.get("kind").and_then(Value::as_str).unwrap_or("table");
        let int = |key: &str| {
            value
                .get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("capacity kind {kind} needs integer \"{key}\"")))
        };
        match kind {
            "cardinality" => Self::cardinality(n),
            "dirac" => Self::dirac(n, int("i")? as usize),
            "top" => Self::top(n, int("k")? as usize),
            "random" => {
                let seed = value.get("seed").and_then(Value::as_u64).unwrap_or(42);
                match value.get("grid").and_then(Value::as_u64) {
                    Some(m) => Self::grid_random(n, m as u32, seed),
                    None => Self::random(n, seed),
                }
            }
            "table" => {
                let raw = value
                    .get("entries")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("table capacity needs \"entries\"".into()))?;
                let mut entries = Vec::with_capacity(raw.len());
                for e in raw {
                    let subset = e
                        .get("subset")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::Parse(format!("entry without subset: {e}")))?
                        .iter()
                        .map(|s| {
                            s.as_u64()
                                .map(|s| s as usize)
                                .ok_or_else(|| Error::Parse(format!("bad subset element {s}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let v = e
                        .get("value")
                        .and_then(Value::as_f64)
                        .and_then(T::from_f64)
                        .ok_or_else(|| Error::Parse(format!("entry without numeric value: {e}")))?;
                    entries.push((subset, v));
                }
                if value.get("complete").and_then(Value::as_bool) == Some(true) {
                    Self::from_partial_table(n, &entries)
                } else {
                    Self::from_table(n, &entries)
                }
            }
            other => Err(Error::Parse(format!("unknown capacity kind {other:?}"))),
        }
    }
}
