//! Admissible (total) orders refining the natural partial order of each
//! carrier.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use crate::element::{k_alpha, partial_leq, Carrier, Element};
use crate::error::{Error, Result};
use crate::scalar::{cmp_tol, parse_scalar, Scalar};
use crate::verifier::grid::GridSpec;
use crate::verifier::report::{par_search, LawReport, Search, Witness};

pub type CompareFn<T> = dyn Fn(&Element<T>, &Element<T>) -> Ordering + Send + Sync;

#[derive(Clone)]
pub enum AdmissibleOrder<T> {
    /// Usual order of `[0,1]`.
    ScalarUsual,
    /// Compare `K_alpha`, then break ties with `K_beta`.
    AlphaBeta { alpha: T, beta: T },
    /// Lexicographic order on `[0,1]^k`, visiting coordinates in `priority`
    /// (zero-based).
    VectorLex { priority: Vec<usize> },
    /// A user comparator. Nothing is assumed about it; run
    /// [`check_admissibility`] before relying on it.
    Custom {
        name: String,
        carrier: Carrier,
        compare: Arc<CompareFn<T>>,
    },
}

impl<T: Scalar> fmt::Debug for AdmissibleOrder<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdmissibleOrder({self})")
    }
}

impl<T: Scalar> fmt::Display for AdmissibleOrder<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibleOrder::ScalarUsual => write!(f, "scalar"),
            AdmissibleOrder::AlphaBeta { alpha, beta } => {
                write!(f, "ab:{}:{}", alpha.to_f64(), beta.to_f64())
            }
            AdmissibleOrder::VectorLex { priority } => {
                let p: Vec<String> = priority.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "veclex:{}", p.join(","))
            }
            AdmissibleOrder::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl<T: Scalar> AdmissibleOrder<T> {
    pub fn alpha_beta(alpha: T, beta: T) -> Result<Self> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if !unit(alpha) || !unit(beta) {
            return Err(Error::InvalidOrder(format!(
                "alpha and beta must lie in [0,1], got ({alpha}, {beta})"
            )));
        }
        if cmp_tol(alpha, beta) == Ordering::Equal {
            return Err(Error::InvalidOrder(format!(
                "alpha must differ from beta, got {alpha} twice"
            )));
        }
        Ok(AdmissibleOrder::AlphaBeta { alpha, beta })
    }

    /// The Xu-Yager order, `(alpha, beta) = (0.5, 1)`.
    pub fn xu_yager() -> Self {
        AdmissibleOrder::AlphaBeta {
            alpha: T::half(),
            beta: T::one(),
        }
    }

    pub fn lexicographic() -> Self {
        AdmissibleOrder::AlphaBeta {
            alpha: T::zero(),
            beta: T::one(),
        }
    }

    pub fn antilexicographic() -> Self {
        AdmissibleOrder::AlphaBeta {
            alpha: T::one(),
            beta: T::zero(),
        }
    }

    /// Lexicographic vector order; `priority` is a zero-based permutation of `0..k`.
    pub fn vector_lex(priority: Vec<usize>) -> Result<Self> {
        let k = priority.len();
        let mut seen = vec![false; k];
        for &p in &priority {
            if p >= k || seen[p] {
                return Err(Error::InvalidOrder(format!(
                    "{priority:?} is not a permutation of 0..{k}"
                )));
            }
            seen[p] = true;
        }
        if k == 0 {
            return Err(Error::InvalidOrder("empty coordinate priority".into()));
        }
        Ok(AdmissibleOrder::VectorLex { priority })
    }

    pub fn custom(
        name: impl Into<String>,
        carrier: Carrier,
        compare: impl Fn(&Element<T>, &Element<T>) -> Ordering + Send + Sync + 'static,
    ) -> Self {
        AdmissibleOrder::Custom {
            name: name.into(),
            carrier,
            compare: Arc::new(compare),
        }
    }

    /// Parses `scalar`, `ab:<alpha>:<beta>` or `veclex:<1-based perm>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "scalar" {
            return Ok(AdmissibleOrder::ScalarUsual);
        }
        if let Some(rest) = spec.strip_prefix("ab:") {
            let (a, b) = rest
                .split_once(':')
                .ok_or_else(|| Error::InvalidOrder(format!("expected ab:<alpha>:<beta>, got {spec}")))?;
            let alpha = parse_scalar(a)
                .ok_or_else(|| Error::InvalidOrder(format!("bad alpha in {spec}")))?;
            let beta = parse_scalar(b)
                .ok_or_else(|| Error::InvalidOrder(format!("bad beta in {spec}")))?;
            return Self::alpha_beta(alpha, beta);
        }
        if let Some(rest) = spec.strip_prefix("veclex:") {
            let priority = rest
                .split(',')
                .map(|s| match s.trim().parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(Error::InvalidOrder(format!("bad coordinate {s:?} in {spec}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::vector_lex(priority);
        }
        Err(Error::InvalidOrder(format!("unknown order spec {spec:?}")))
    }

    pub fn carrier(&self) -> Carrier {
        match self {
            AdmissibleOrder::ScalarUsual => Carrier::Scalar,
            AdmissibleOrder::AlphaBeta { .. } => Carrier::Interval,
            AdmissibleOrder::VectorLex { priority } => Carrier::Vector(priority.len()),
            AdmissibleOrder::Custom { carrier, .. } => *carrier,
        }
    }

    fn accepts(&self, x: &Element<T>) -> Result<()> {
        if x.carrier() == self.carrier() {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: self.carrier(),
                found: x.carrier(),
            })
        }
    }

    /// Total comparison; values within tolerance compare equal.
    pub fn compare(&self, x: &Element<T>, z: &Element<T>) -> Result<Ordering> {
        self.accepts(x)?;
        self.accepts(z)?;
        Ok(self.compare_unchecked(x, z))
    }

    /// [`compare`](Self::compare) without the carrier check. Mismatched
    /// carriers compare as equal.
    pub fn compare_unchecked(&self, x: &Element<T>, z: &Element<T>) -> Ordering {
        match (self, x, z) {
            (AdmissibleOrder::ScalarUsual, Element::Scalar(a), Element::Scalar(b)) => cmp_tol(*a, *b),
            (
                AdmissibleOrder::AlphaBeta { alpha, beta },
                Element::Interval(xl, xu),
                Element::Interval(zl, zu),
            ) => cmp_tol(k_alpha(*xl, *xu, *alpha), k_alpha(*zl, *zu, *alpha))
                .then_with(|| cmp_tol(k_alpha(*xl, *xu, *beta), k_alpha(*zl, *zu, *beta))),
            (AdmissibleOrder::VectorLex { priority }, Element::Vector(a), Element::Vector(b)) => {
                priority
                    .iter()
                    .map(|&i| cmp_tol(a[i], b[i]))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            }
            (AdmissibleOrder::Custom { compare, .. }, x, z) => compare(x, z),
            _ => Ordering::Equal,
        }
    }

    pub fn leq(&self, x: &Element<T>, z: &Element<T>) -> bool {
        self.compare_unchecked(x, z) != Ordering::Greater
    }

    pub fn lt(&self, x: &Element<T>, z: &Element<T>) -> bool {
        self.compare_unchecked(x, z) == Ordering::Less
    }

    /// `u <= x <= v`.
    pub fn between(&self, u: &Element<T>, x: &Element<T>, v: &Element<T>) -> bool {
        self.leq(u, x) && self.leq(x, v)
    }

    /// The real score compared first: the value itself, `K_alpha`, or the
    /// highest-priority coordinate. `None` for custom orders.
    pub fn primary_score(&self, x: &Element<T>) -> Option<T> {
        match (self, x) {
            (AdmissibleOrder::ScalarUsual, Element::Scalar(v)) => Some(*v),
            (AdmissibleOrder::AlphaBeta { alpha, .. }, Element::Interval(l, u)) => {
                Some(k_alpha(*l, *u, *alpha))
            }
            (AdmissibleOrder::VectorLex { priority }, Element::Vector(v)) => Some(v[priority[0]]),
            _ => None,
        }
    }
}

impl FromStr for AdmissibleOrder<f64> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn check_carrier<T: Scalar>(ord: &AdmissibleOrder<T>, grid: &GridSpec) -> Result<()> {
    if ord.carrier() != grid.carrier {
        return Err(Error::KindMismatch {
            expected: ord.carrier(),
            found: grid.carrier,
        });
    }
    Ok(())
}

/// `x <=_P z` implies `x <= z` on every grid pair.
pub fn check_refines_partial<T: Scalar>(
    ord: &AdmissibleOrder<T>,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    check_carrier(ord, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let search = par_search(&elems, |i, x, s: &mut Search<T>| {
        for (j, z) in elems.iter().enumerate() {
            s.tick();
            let below = partial_leq(x, z).unwrap_or(false);
            if below && !ord.leq(x, z) {
                s.offer(Search::<T>::key(i, j as u64), 1.0, || {
                    Witness::new().element("x", x).element("z", z).text("compare", "greater")
                });
            }
        }
    });
    Ok(LawReport::from_search("admissibility", search, start.elapsed()).with_grid(grid.m))
}

/// Reflexivity, antisymmetry (equal iff componentwise equal) and totality
/// (`compare(x, z)` is the reverse of `compare(z, x)`).
pub fn check_antisymmetry<T: Scalar>(ord: &AdmissibleOrder<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    check_carrier(ord, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let search = par_search(&elems, |i, x, s: &mut Search<T>| {
        for (j, z) in elems.iter().enumerate() {
            s.tick();
            let xz = ord.compare_unchecked(x, z);
            let zx = ord.compare_unchecked(z, x);
            let problem = if i == j && xz != Ordering::Equal {
                Some("not reflexive")
            } else if xz != zx.reverse() {
                Some("compare(x,z) is not the reverse of compare(z,x)")
            } else if (xz == Ordering::Equal) != x.approx_eq(z) {
                Some("equal under the order but distinct elements")
            } else {
                None
            };
            if let Some(p) = problem {
                s.offer(Search::<T>::key(i, j as u64), 1.0, || {
                    Witness::new().element("x", x).element("z", z).text("problem", p)
                });
            }
        }
    });
    Ok(LawReport::from_search("antisymmetry", search, start.elapsed()).with_grid(grid.m))
}

/// `x <= y <= z` implies `x <= z` on every grid triple.
pub fn check_transitivity<T: Scalar>(ord: &AdmissibleOrder<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    check_carrier(ord, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let len = elems.len() as u64;
    let search = par_search(&elems, |i, x, s: &mut Search<T>| {
        for (j, y) in elems.iter().enumerate() {
            if !ord.leq(x, y) {
                s.checked += len;
                continue;
            }
            for (k, z) in elems.iter().enumerate() {
                s.tick();
                if ord.leq(y, z) && !ord.leq(x, z) {
                    s.offer(Search::<T>::key(i, j as u64 * len + k as u64), 1.0, || {
                        Witness::new().element("x", x).element("y", y).element("z", z)
                    });
                }
            }
        }
    });
    Ok(LawReport::from_search("transitivity", search, start.elapsed()).with_grid(grid.m))
}

/// Full admissibility check: refinement of the partial order plus the total
/// order axioms.
pub fn check_admissibility<T: Scalar>(ord: &AdmissibleOrder<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    let parts = vec![
        check_refines_partial(ord, grid)?,
        check_antisymmetry(ord, grid)?,
        check_transitivity(ord, grid)?,
    ];
    Ok(LawReport::combine("order", parts).with_grid(grid.m))
}
