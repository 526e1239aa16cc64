use crate::element::{Carrier, Element};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite sample of a carrier: every real component ranges over
/// `{0, 1/m, ..., 1}`; intervals keep only `lower <= upper`; vectors are full
/// products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub carrier: Carrier,
    pub m: u32,
    /// Arity for operator-level checks.
    pub n: usize,
    /// Optional index range `lo..=hi` (in units of `1/m`) for element components.
    pub bounds: Option<(u32, u32)>,
}

impl GridSpec {
    pub fn new(carrier: Carrier, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadParameter("grid step denominator must be >= 1".into()));
        }
        if let Carrier::Vector(0) = carrier {
            return Err(Error::BadParameter("vector dimension must be >= 1".into()));
        }
        Ok(GridSpec {
            carrier,
            m,
            n: 3,
            bounds: None,
        })
    }

    /// Default resolution per carrier: scalar 8, interval 4, vector 4.
    pub fn default_for(carrier: Carrier) -> Self {
        let m = match carrier {
            Carrier::Scalar => 8,
            Carrier::Interval | Carrier::Vector(_) => 4,
        };
        GridSpec {
            carrier,
            m,
            n: 3,
            bounds: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_bounds(mut self, lo: u32, hi: u32) -> Result<Self> {
        if lo > hi || hi > self.m {
            return Err(Error::BadParameter(format!(
                "component bounds {lo}..={hi} invalid for m={}",
                self.m
            )));
        }
        self.bounds = Some((lo, hi));
        Ok(self)
    }

    pub fn value<T: Scalar>(&self, j: u32) -> T {
        T::from_ratio(j as i64, self.m as i64)
    }

    /// All parameter values `j/m`, ascending. Bounds never restrict these.
    pub fn values<T: Scalar>(&self) -> Vec<T> {
        (0..=self.m).map(|j| self.value(j)).collect()
    }

    fn component_range(&self) -> std::ops::RangeInclusive<u32> {
        let (lo, hi) = self.bounds.unwrap_or((0, self.m));
        lo..=hi
    }

    /// Every grid element of the carrier, in lexicographic component order.
    pub fn elements<T: Scalar>(&self) -> Vec<Element<T>> {
        let range = self.component_range();
        match self.carrier {
            Carrier::Scalar => range.map(|j| Element::Scalar(self.value(j))).collect(),
            Carrier::Interval => {
                let mut out = Vec::new();
                for l in range.clone() {
                    for u in l..=*range.end() {
                        out.push(Element::Interval(self.value(l), self.value(u)));
                    }
                }
                out
            }
            Carrier::Vector(k) => {
                let comps: Vec<T> = range.map(|j| self.value(j)).collect();
                let mut out = Vec::new();
                let mut idx = vec![0usize; k];
                loop {
                    out.push(Element::Vector(idx.iter().map(|&i| comps[i]).collect()));
                    let mut pos = k;
                    loop {
                        if pos == 0 {
                            return out;
                        }
                        pos -= 1;
                        idx[pos] += 1;
                        if idx[pos] < comps.len() {
                            break;
                        }
                        idx[pos] = 0;
                    }
                }
            }
        }
    }

    /// Non-increasing tuples `(t_1 >= t_2 >= ... >= t_len)` of grid values.
    pub fn descending_tuples<T: Scalar>(&self, len: usize) -> Vec<Vec<T>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        descend(self.m, len, &mut cur, &mut out);
        out.into_iter()
            .map(|t| t.into_iter().map(|j| self.value(j)).collect())
            .collect()
    }

    /// Chains `1 = b_1 >= b_2 >= ... >= b_n >= b_{n+1} = 0` of grid values.
    pub fn pinned_chains<T: Scalar>(&self, n: usize) -> Vec<Vec<T>> {
        if n == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = Vec::new();
        descend(self.m, n - 1, &mut cur, &mut out);
        out.into_iter()
            .map(|inner| {
                let mut chain = Vec::with_capacity(n + 1);
                chain.push(T::one());
                chain.extend(inner.into_iter().map(|j| self.value::<T>(j)));
                chain.push(T::zero());
                chain
            })
            .collect()
    }

    /// Ordered `n`-tuples of grid values summing to exactly 1.
    pub fn compositions<T: Scalar>(&self, n: usize) -> Vec<Vec<T>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        compose(self.m, n, &mut cur, &mut out);
        out.into_iter()
            .map(|t| t.into_iter().map(|j| self.value(j)).collect())
            .collect()
    }
}

fn descend(bound: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let top = cur.last().copied().unwrap_or(bound);
    for j in (0..=top).rev() {
        cur.push(j);
        descend(bound, len, cur, out);
        cur.pop();
    }
}

fn compose(remaining: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        cur.push(remaining);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for j in 0..=remaining {
        cur.push(j);
        compose(remaining - j, parts - 1, cur, out);
        cur.pop();
    }
}
