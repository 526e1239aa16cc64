//! Addition and multiplication on each carrier, with grid checks of the
//! algebraic laws the operator characterizations assume.
//!
//! Sums live in the ambient set: `0.6 (+) 0.7 = 1.3` is not clamped.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::element::{Carrier, Element};
use crate::error::{Error, Result};
use crate::order::AdmissibleOrder;
use crate::scalar::{le_tol, Scalar};
use crate::verifier::grid::GridSpec;
use crate::verifier::report::{par_search, LawReport, Search, Witness};

pub type BinaryFn<T> = dyn Fn(&Element<T>, &Element<T>) -> Element<T> + Send + Sync;
pub type ScaleFn<T> = dyn Fn(T, &Element<T>) -> Element<T> + Send + Sync;

#[derive(Clone)]
pub enum AdditionOp<T> {
    /// `x + z` on `[0, inf)`.
    Standard,
    /// `[xl + zl, xu + zu]`.
    Interval,
    /// Coordinatewise sum.
    Vector,
    /// Componentwise minimum; a negative control without cancellation.
    Min,
    /// `min(1, x + z)` componentwise; closed on the unit box, no cancellation.
    BoundedSum,
    Custom {
        name: String,
        f: Arc<BinaryFn<T>>,
    },
}

impl<T> fmt::Debug for AdditionOp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdditionOp({})", self.name())
    }
}

impl<T> AdditionOp<T> {
    pub fn name(&self) -> &str {
        match self {
            AdditionOp::Standard => "plus",
            AdditionOp::Interval => "iv-plus",
            AdditionOp::Vector => "vv-plus",
            AdditionOp::Min => "min",
            AdditionOp::BoundedSum => "bounded-sum",
            AdditionOp::Custom { name, .. } => name,
        }
    }
}

impl<T: Scalar> AdditionOp<T> {
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(&Element<T>, &Element<T>) -> Element<T> + Send + Sync + 'static,
    ) -> Self {
        AdditionOp::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// The standard sum for `carrier`.
    pub fn for_carrier(carrier: Carrier) -> Self {
        match carrier {
            Carrier::Scalar => AdditionOp::Standard,
            Carrier::Interval => AdditionOp::Interval,
            Carrier::Vector(_) => AdditionOp::Vector,
        }
    }

    /// Built-in op by name: `plus`, `iv-plus`, `vv-plus`, `min`, `bounded-sum`.
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name.trim() {
            "plus" => AdditionOp::Standard,
            "iv-plus" => AdditionOp::Interval,
            "vv-plus" => AdditionOp::Vector,
            "min" => AdditionOp::Min,
            "bounded-sum" => AdditionOp::BoundedSum,
            other => return Err(Error::UnknownOp(other.to_string())),
        })
    }

    /// Carrier the op is restricted to, if any.
    pub fn carrier(&self) -> Option<Carrier> {
        match self {
            AdditionOp::Standard => Some(Carrier::Scalar),
            AdditionOp::Interval => Some(Carrier::Interval),
            _ => None,
        }
    }

    pub fn supports(&self, carrier: Carrier) -> bool {
        match (self, carrier) {
            (AdditionOp::Vector, Carrier::Vector(_)) => true,
            (AdditionOp::Vector, _) => false,
            _ => self.carrier().is_none_or(|c| c == carrier),
        }
    }

    pub fn add(&self, x: &Element<T>, z: &Element<T>) -> Result<Element<T>> {
        x.same_kind(z)?;
        if !self.supports(x.carrier()) {
            return Err(Error::UnknownOp(format!(
                "{} is not defined on {}",
                self.name(),
                x.carrier()
            )));
        }
        match self {
            AdditionOp::Standard | AdditionOp::Interval | AdditionOp::Vector => x.zip_with(z, |a, b| a + b),
            AdditionOp::Min => x.zip_with(z, |a, b| a.min_of(b)),
            AdditionOp::BoundedSum => x.zip_with(z, |a, b| (a + b).min_of(T::one())),
            AdditionOp::Custom { f, .. } => Ok(f(x, z)),
        }
    }

    /// Left fold `t_1 (+) t_2 (+) ... (+) t_n`.
    pub fn fold(&self, terms: &[Element<T>]) -> Result<Element<T>> {
        let (first, rest) = terms
            .split_first()
            .ok_or_else(|| Error::BadParameter("cannot fold an empty sum".into()))?;
        rest.iter().try_fold(first.clone(), |acc, t| self.add(&acc, t))
    }
}

#[derive(Clone)]
pub enum MultiplicationOp<T> {
    /// `c * x` on scalars.
    Times,
    /// `[c xl, c xu]`.
    IntervalScale,
    /// Coordinatewise scaling.
    VectorScale,
    Custom {
        name: String,
        f: Arc<ScaleFn<T>>,
    },
}

impl<T> fmt::Debug for MultiplicationOp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiplicationOp({})", self.name())
    }
}

impl<T> MultiplicationOp<T> {
    pub fn name(&self) -> &str {
        match self {
            MultiplicationOp::Times => "times",
            MultiplicationOp::IntervalScale => "iv-scale",
            MultiplicationOp::VectorScale => "vv-scale",
            MultiplicationOp::Custom { name, .. } => name,
        }
    }
}

impl<T: Scalar> MultiplicationOp<T> {
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(T, &Element<T>) -> Element<T> + Send + Sync + 'static,
    ) -> Self {
        MultiplicationOp::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn for_carrier(carrier: Carrier) -> Self {
        match carrier {
            Carrier::Scalar => MultiplicationOp::Times,
            Carrier::Interval => MultiplicationOp::IntervalScale,
            Carrier::Vector(_) => MultiplicationOp::VectorScale,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name.trim() {
            "times" => MultiplicationOp::Times,
            "iv-scale" => MultiplicationOp::IntervalScale,
            "vv-scale" => MultiplicationOp::VectorScale,
            other => return Err(Error::UnknownOp(other.to_string())),
        })
    }

    pub fn supports(&self, carrier: Carrier) -> bool {
        matches!(
            (self, carrier),
            (MultiplicationOp::Times, Carrier::Scalar)
                | (MultiplicationOp::IntervalScale, Carrier::Interval)
                | (MultiplicationOp::VectorScale, Carrier::Vector(_))
                | (MultiplicationOp::Custom { .. }, _)
        )
    }

    /// `c (.) x` for `c` in `[0,1]` (tolerant at the ends).
    pub fn scale(&self, c: T, x: &Element<T>) -> Result<Element<T>> {
        if !(le_tol(T::zero(), c) && le_tol(c, T::one())) {
            return Err(Error::ScaleOutOfRange(c.to_f64()));
        }
        if !self.supports(x.carrier()) {
            return Err(Error::UnknownOp(format!(
                "{} is not defined on {}",
                self.name(),
                x.carrier()
            )));
        }
        Ok(match self {
            MultiplicationOp::Custom { f, .. } => f(c, x),
            _ => x.map(|v| c * v),
        })
    }
}

/// Named custom operations, consulted before the built-in names.
pub struct OpRegistry<T> {
    additions: BTreeMap<String, AdditionOp<T>>,
    multiplications: BTreeMap<String, MultiplicationOp<T>>,
}

impl<T> Default for OpRegistry<T> {
    fn default() -> Self {
        OpRegistry {
            additions: BTreeMap::new(),
            multiplications: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> OpRegistry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_addition(&mut self, op: AdditionOp<T>) {
        self.additions.insert(op.name().to_string(), op);
    }

    pub fn register_multiplication(&mut self, op: MultiplicationOp<T>) {
        self.multiplications.insert(op.name().to_string(), op);
    }

    pub fn addition(&self, name: &str) -> Result<AdditionOp<T>> {
        match self.additions.get(name.trim()) {
            Some(op) => Ok(op.clone()),
            None => AdditionOp::parse(name),
        }
    }

    pub fn multiplication(&self, name: &str) -> Result<MultiplicationOp<T>> {
        match self.multiplications.get(name.trim()) {
            Some(op) => Ok(op.clone()),
            None => MultiplicationOp::parse(name),
        }
    }
}

fn ensure_supported<T: Scalar>(op: &AdditionOp<T>, grid: &GridSpec) -> Result<()> {
    if op.supports(grid.carrier) {
        Ok(())
    } else {
        Err(Error::UnknownOp(format!(
            "{} is not defined on {}",
            op.name(),
            grid.carrier
        )))
    }
}

/// `x (+) z = z (+) x` on grid pairs.
pub fn check_commutativity<T: Scalar>(op: &AdditionOp<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    ensure_supported(op, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let search = par_search(&elems, |i, x, s: &mut Search<T>| {
        for (j, z) in elems.iter().enumerate() {
            s.tick();
            let (Ok(l), Ok(r)) = (op.add(x, z), op.add(z, x)) else {
                continue;
            };
            if !l.approx_eq(&r) {
                s.offer(Search::<T>::key(i, j as u64), l.distance(&r), || {
                    Witness::new().element("x", x).element("z", z).element("lhs", &l).element("rhs", &r)
                });
            }
        }
    });
    Ok(LawReport::from_search("commutativity", search, start.elapsed()).with_grid(grid.m))
}

/// `(x (+) y) (+) z = x (+) (y (+) z)` on grid triples.
pub fn check_associativity<T: Scalar>(op: &AdditionOp<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    ensure_supported(op, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let len = elems.len() as u64;
    let search = par_search(&elems, |i, x, s: &mut Search<T>| {
        for (j, y) in elems.iter().enumerate() {
            let Ok(xy) = op.add(x, y) else { continue };
            for (k, z) in elems.iter().enumerate() {
                s.tick();
                let (Ok(l), Ok(r)) = (op.add(&xy, z), op.add(y, z).and_then(|yz| op.add(x, &yz))) else {
                    continue;
                };
                if !l.approx_eq(&r) {
                    s.offer(Search::<T>::key(i, j as u64 * len + k as u64), l.distance(&r), || {
                        Witness::new()
                            .element("x", x)
                            .element("y", y)
                            .element("z", z)
                            .element("lhs", &l)
                            .element("rhs", &r)
                    });
                }
            }
        }
    });
    Ok(LawReport::from_search("associativity", search, start.elapsed()).with_grid(grid.m))
}

/// `x1 (+) v = x2 (+) v` implies `x1 = x2`; the first offending triple in
/// enumeration order is reported.
pub fn check_cancellation<T: Scalar>(op: &AdditionOp<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    ensure_supported(op, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let len = elems.len() as u64;
    let search = par_search(&elems, |i, x1, s: &mut Search<T>| {
        for (j, x2) in elems.iter().enumerate() {
            if i == j {
                s.checked += len;
                continue;
            }
            for (k, v) in elems.iter().enumerate() {
                s.tick();
                let (Ok(a), Ok(b)) = (op.add(x1, v), op.add(x2, v)) else {
                    continue;
                };
                if a.approx_eq(&b) {
                    s.offer(Search::<T>::key(i, j as u64 * len + k as u64), 1.0, || {
                        Witness::new()
                            .element("x1", x1)
                            .element("x2", x2)
                            .element("v", v)
                            .element("sum", &a)
                    });
                }
            }
        }
    });
    Ok(LawReport::from_search("cancellation", search, start.elapsed()).with_grid(grid.m))
}

fn compatibility_search<T: Scalar>(
    op: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    strict: bool,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    ensure_supported(op, grid)?;
    if ord.carrier() != grid.carrier {
        return Err(Error::KindMismatch {
            expected: ord.carrier(),
            found: grid.carrier,
        });
    }
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let len = elems.len() as u64;
    let search = par_search(&elems, |i, x1, s: &mut Search<T>| {
        for (j, x2) in elems.iter().enumerate() {
            let premise = if strict { ord.lt(x1, x2) } else { ord.leq(x1, x2) };
            if !premise {
                s.checked += len;
                continue;
            }
            for (k, v) in elems.iter().enumerate() {
                s.tick();
                let (Ok(a), Ok(b)) = (op.add(x1, v), op.add(x2, v)) else {
                    continue;
                };
                let holds = if strict { ord.lt(&a, &b) } else { ord.leq(&a, &b) };
                if !holds {
                    s.offer(Search::<T>::key(i, j as u64 * len + k as u64), 1.0, || {
                        Witness::new()
                            .element("x1", x1)
                            .element("x2", x2)
                            .element("v", v)
                            .element("lhs", &a)
                            .element("rhs", &b)
                    });
                }
            }
        }
    });
    let law = if strict { "strict-compatibility" } else { "compatibility" };
    Ok(LawReport::from_search(law, search, start.elapsed()).with_grid(grid.m))
}

/// Compatibility of `ord` (or of its strict part) with `op`.
///
/// The grid verdicts are cross-checked against the general facts that strict
/// compatibility implies weak compatibility and cancellation, and that weak
/// compatibility plus cancellation implies strict compatibility. A
/// contradiction is returned as [`Error::OracleDisagreement`].
pub fn check_compatibility<T: Scalar>(
    op: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    strict: bool,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    let report = compatibility_search(op, ord, strict, grid)?;
    let other = compatibility_search(op, ord, !strict, grid)?;
    let cancel = check_cancellation(op, grid)?;
    let (strict_r, weak_r) = if strict { (&report, &other) } else { (&other, &report) };
    if strict_r.passed() && (weak_r.failed() || cancel.failed()) {
        return Err(Error::OracleDisagreement {
            law: "compatibility".into(),
            conditions: "strict compatibility holds".into(),
            oracle: format!(
                "weak compatibility {}, cancellation {}",
                weak_r.verdict.as_str(),
                cancel.verdict.as_str()
            ),
        });
    }
    if weak_r.passed() && cancel.passed() && strict_r.failed() {
        return Err(Error::OracleDisagreement {
            law: "compatibility".into(),
            conditions: "weak compatibility and cancellation hold".into(),
            oracle: "strict compatibility fails".into(),
        });
    }
    Ok(report.with_note(format!(
        "{} compatibility {}, cancellation {}",
        if strict { "weak" } else { "strict" },
        other.verdict.as_str(),
        cancel.verdict.as_str()
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Right: `(c1 + c2) (.) x = (c1 (.) x) (+) (c2 (.) x)` for `c1 + c2 <= 1`.
/// Left: `c (.) (x (+) z) = (c (.) x) (+) (c (.) z)` whenever `x (+) z` is in K.
pub fn check_distributivity<T: Scalar>(
    mul: &MultiplicationOp<T>,
    add: &AdditionOp<T>,
    side: Side,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    ensure_supported(add, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let cs = grid.values::<T>();
    let search = match side {
        Side::Right => par_search(&elems, |i, x, s: &mut Search<T>| {
            for (a, &c1) in cs.iter().enumerate() {
                for (b, &c2) in cs.iter().enumerate() {
                    if a + b > grid.m as usize {
                        continue;
                    }
                    s.tick();
                    let lhs = mul.scale(c1 + c2, x);
                    let rhs = mul
                        .scale(c1, x)
                        .and_then(|p| mul.scale(c2, x).and_then(|q| add.add(&p, &q)));
                    let (Ok(l), Ok(r)) = (lhs, rhs) else { continue };
                    if !l.approx_eq(&r) {
                        let key = Search::<T>::key(i, (a * cs.len() + b) as u64);
                        s.offer(key, l.distance(&r), || {
                            Witness::new()
                                .real("c1", c1)
                                .real("c2", c2)
                                .element("x", x)
                                .element("lhs", &l)
                                .element("rhs", &r)
                        });
                    }
                }
            }
        }),
        Side::Left => par_search(&elems, |i, x, s: &mut Search<T>| {
            for (j, z) in elems.iter().enumerate() {
                let Ok(sum) = add.add(x, z) else { continue };
                if !sum.in_unit() {
                    continue;
                }
                for (a, &c) in cs.iter().enumerate() {
                    s.tick();
                    let lhs = mul.scale(c, &sum);
                    let rhs = mul
                        .scale(c, x)
                        .and_then(|p| mul.scale(c, z).and_then(|q| add.add(&p, &q)));
                    let (Ok(l), Ok(r)) = (lhs, rhs) else { continue };
                    if !l.approx_eq(&r) {
                        let key = Search::<T>::key(i, (j * cs.len() + a) as u64);
                        s.offer(key, l.distance(&r), || {
                            Witness::new()
                                .real("c", c)
                                .element("x", x)
                                .element("z", z)
                                .element("lhs", &l)
                                .element("rhs", &r)
                        });
                    }
                }
            }
        }),
    };
    let law = match side {
        Side::Left => "left-distributivity",
        Side::Right => "right-distributivity",
    };
    Ok(LawReport::from_search(law, search, start.elapsed()).with_grid(grid.m))
}

/// Condition (C1): for `b2 <= b1`, `u1 <= u2`, `v1 <= v2` and
/// `u1 (+) v2 = u2 (+) v1` in K,
/// `(b1 (.) u1) (+) (b2 (.) v2) <= (b1 (.) u2) (+) (b2 (.) v1)`.
pub fn check_c1<T: Scalar>(
    mul: &MultiplicationOp<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    ensure_supported(add, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let chains = grid.descending_tuples::<T>(2);
    let search = par_search(&elems, |i, u1, s: &mut Search<T>| {
        let mut inner = 0u64;
        for u2 in elems.iter().filter(|u2| ord.leq(u1, u2)) {
            for v1 in &elems {
                for v2 in elems.iter().filter(|v2| ord.leq(v1, v2)) {
                    inner += chains.len() as u64;
                    let (Ok(p), Ok(q)) = (add.add(u1, v2), add.add(u2, v1)) else {
                        continue;
                    };
                    if !p.approx_eq(&q) || !p.in_unit() {
                        continue;
                    }
                    for (c, b) in chains.iter().enumerate() {
                        s.tick();
                        let (b1, b2) = (b[0], b[1]);
                        let side = |x: &Element<T>, y: &Element<T>| -> Result<Element<T>> {
                            add.add(&mul.scale(b1, x)?, &mul.scale(b2, y)?)
                        };
                        let (Ok(l), Ok(r)) = (side(u1, v2), side(u2, v1)) else {
                            continue;
                        };
                        if !ord.leq(&l, &r) {
                            s.offer(Search::<T>::key(i, inner + c as u64), 1.0, || {
                                Witness::new()
                                    .real("b1", b1)
                                    .real("b2", b2)
                                    .element("u1", u1)
                                    .element("u2", u2)
                                    .element("v1", v1)
                                    .element("v2", v2)
                                    .element("lhs", &l)
                                    .element("rhs", &r)
                            });
                        }
                    }
                }
            }
        }
    });
    Ok(LawReport::from_search("c1", search, start.elapsed()).with_grid(grid.m))
}

/// Whether `x (+) z` stays in K for every grid pair.
pub fn is_closed_on<T: Scalar>(op: &AdditionOp<T>, grid: &GridSpec) -> bool {
    let elems = grid.elements::<T>();
    elems.iter().all(|x| {
        elems
            .iter()
            .all(|z| op.add(x, z).map(|s| s.in_unit()).unwrap_or(false))
    })
}

/// `u (+) v = 0` with `u, v` in K forces `u = v = 0`.
pub fn check_zero_sum<T: Scalar>(op: &AdditionOp<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    ensure_supported(op, grid)?;
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let zero = Element::zero(grid.carrier);
    let search = par_search(&elems, |i, u, s: &mut Search<T>| {
        for (j, v) in elems.iter().enumerate() {
            s.tick();
            let Ok(sum) = op.add(u, v) else { continue };
            if sum.approx_eq(&zero) && !(u.approx_eq(&zero) && v.approx_eq(&zero)) {
                s.offer(Search::<T>::key(i, j as u64), 1.0, || {
                    Witness::new().element("u", u).element("v", v)
                });
            }
        }
    });
    Ok(LawReport::from_search("zero-sum", search, start.elapsed()).with_grid(grid.m))
}
