//! Values of the three carriers: scalars in `[0,1]`, closed subintervals of
//! `[0,1]`, and vectors in `[0,1]^k`.
//!
//! An [`Element`] may also hold a value of the ambient set (sums produced by
//! an addition can exceed 1); [`Element::in_unit`] reports membership in the
//! bounded set.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{approx_eq, le_tol, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    Scalar,
    Interval,
    Vector(usize),
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Scalar => write!(f, "scalar"),
            Carrier::Interval => write!(f, "interval"),
            Carrier::Vector(k) => write!(f, "vector[{k}]"),
        }
    }
}

impl std::str::FromStr for Carrier {
    type Err = Error;

    /// `scalar`, `interval`, or `vector[k]`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "scalar" => Ok(Carrier::Scalar),
            "interval" => Ok(Carrier::Interval),
            other => other
                .strip_prefix("vector[")
                .and_then(|r| r.strip_suffix(']'))
                .and_then(|k| k.parse().ok())
                .filter(|&k: &usize| k >= 1)
                .map(Carrier::Vector)
                .ok_or_else(|| Error::Parse(format!("unknown carrier {other:?}"))),
        }
    }
}

impl Carrier {
    /// Number of real components of an element of this carrier.
    pub fn arity(self) -> usize {
        match self {
            Carrier::Scalar => 1,
            Carrier::Interval => 2,
            Carrier::Vector(k) => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element<T> {
    Scalar(T),
    Interval(T, T),
    Vector(Vec<T>),
}

impl<T: Scalar> Element<T> {
    /// A scalar in `[0,1]`.
    pub fn scalar(value: T) -> Result<Self> {
        let e = Element::Scalar(value);
        e.validate()?;
        Ok(e)
    }

    /// An interval `[lower, upper]` with `0 <= lower <= upper <= 1`.
    pub fn interval(lower: T, upper: T) -> Result<Self> {
        let e = Element::Interval(lower, upper);
        e.validate()?;
        Ok(e)
    }

    pub fn vector(coords: Vec<T>) -> Result<Self> {
        let e = Element::Vector(coords);
        e.validate()?;
        Ok(e)
    }

    /// Builds an element of `carrier` from raw components without range checks.
    pub fn from_components(carrier: Carrier, comps: &[T]) -> Result<Self> {
        if comps.len() != carrier.arity() {
            return Err(Error::InvalidElement(format!(
                "{carrier} needs {} components, got {}",
                carrier.arity(),
                comps.len()
            )));
        }
        Ok(match carrier {
            Carrier::Scalar => Element::Scalar(comps[0]),
            Carrier::Interval => Element::Interval(comps[0], comps[1]),
            Carrier::Vector(_) => Element::Vector(comps.to_vec()),
        })
    }

    pub fn carrier(&self) -> Carrier {
        match self {
            Element::Scalar(_) => Carrier::Scalar,
            Element::Interval(..) => Carrier::Interval,
            Element::Vector(v) => Carrier::Vector(v.len()),
        }
    }

    /// Least element of the bounded set.
    pub fn zero(carrier: Carrier) -> Self {
        Self::constant(carrier, T::zero())
    }

    /// Greatest element of the bounded set.
    pub fn one(carrier: Carrier) -> Self {
        Self::constant(carrier, T::one())
    }

    pub fn constant(carrier: Carrier, value: T) -> Self {
        match carrier {
            Carrier::Scalar => Element::Scalar(value),
            Carrier::Interval => Element::Interval(value, value),
            Carrier::Vector(k) => Element::Vector(vec![value; k]),
        }
    }

    /// All real components in a fixed order (`[lower, upper]` for intervals).
    pub fn component_vec(&self) -> Vec<T> {
        match self {
            Element::Scalar(v) => vec![*v],
            Element::Interval(l, u) => vec![*l, *u],
            Element::Vector(v) => v.clone(),
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        match self {
            Element::Scalar(v) => Element::Scalar(f(*v)),
            Element::Interval(l, u) => Element::Interval(f(*l), f(*u)),
            Element::Vector(v) => Element::Vector(v.iter().map(|c| f(*c)).collect()),
        }
    }

    /// Componentwise combination; fails on carrier or dimension mismatch.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        match (self, other) {
            (Element::Scalar(a), Element::Scalar(b)) => Ok(Element::Scalar(f(*a, *b))),
            (Element::Interval(al, au), Element::Interval(bl, bu)) => {
                Ok(Element::Interval(f(*al, *bl), f(*au, *bu)))
            }
            (Element::Vector(a), Element::Vector(b)) if a.len() == b.len() => Ok(Element::Vector(
                a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect(),
            )),
            _ => Err(self.mismatch(other)),
        }
    }

    /// Checks `other` has the same carrier (and dimension) as `self`.
    pub fn same_kind(&self, other: &Self) -> Result<()> {
        if self.carrier() == other.carrier() {
            Ok(())
        } else {
            Err(self.mismatch(other))
        }
    }

    pub(crate) fn mismatch(&self, other: &Self) -> Error {
        Error::KindMismatch {
            expected: self.carrier(),
            found: other.carrier(),
        }
    }

    /// Checks the bounded-set invariants of the carrier.
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        match self {
            Element::Scalar(v) if unit(*v) => Ok(()),
            Element::Interval(l, u) if unit(*l) && unit(*u) && l <= u => Ok(()),
            Element::Vector(v) if !v.is_empty() && v.iter().all(|c| unit(*c)) => Ok(()),
            _ => Err(Error::InvalidElement(self.to_string())),
        }
    }

    /// Membership in the bounded set, up to tolerance.
    pub fn in_unit(&self) -> bool {
        let unit = |v: T| le_tol(T::zero(), v) && le_tol(v, T::one());
        match self {
            Element::Scalar(v) => unit(*v),
            Element::Interval(l, u) => unit(*l) && unit(*u) && le_tol(*l, *u),
            Element::Vector(v) => v.iter().all(|c| unit(*c)),
        }
    }

    /// Snaps components within tolerance of the unit box onto it.
    pub fn snap_unit(&self) -> Self {
        self.map(|v| {
            if v < T::zero() && approx_eq(v, T::zero()) {
                T::zero()
            } else if v > T::one() && approx_eq(v, T::one()) {
                T::one()
            } else {
                v
            }
        })
    }

    /// Componentwise equality within tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Element::Scalar(a), Element::Scalar(b)) => approx_eq(*a, *b),
            (Element::Interval(al, au), Element::Interval(bl, bu)) => {
                approx_eq(*al, *bl) && approx_eq(*au, *bu)
            }
            (Element::Vector(a), Element::Vector(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| approx_eq(*x, *y))
            }
            _ => false,
        }
    }

    /// Largest componentwise absolute difference (infinite across carriers).
    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (Element::Scalar(a), Element::Scalar(b)) => (*a - *b).abs().to_f64(),
            (Element::Interval(al, au), Element::Interval(bl, bu)) => {
                (*al - *bl).abs().to_f64().max((*au - *bu).abs().to_f64())
            }
            (Element::Vector(a), Element::Vector(b)) if a.len() == b.len() => a
                .iter()
                .zip(b)
                .map(|(x, y)| (*x - *y).abs().to_f64())
                .fold(0.0, f64::max),
            _ => f64::INFINITY,
        }
    }

    pub fn to_f64(&self) -> Element<f64> {
        match self {
            Element::Scalar(v) => Element::Scalar(v.to_f64()),
            Element::Interval(l, u) => Element::Interval(l.to_f64(), u.to_f64()),
            Element::Vector(v) => Element::Vector(v.iter().map(|c| c.to_f64()).collect()),
        }
    }

    /// JSON rendering: a number, `[l, u]`, or a coordinate list.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Element::Scalar(v) => serde_json::json!(v.to_f64()),
            _ => serde_json::json!(self.component_vec().iter().map(|c| c.to_f64()).collect::<Vec<_>>()),
        }
    }

    /// Reads an element of `carrier` from its JSON rendering.
    pub fn from_json(carrier: Carrier, value: &serde_json::Value) -> Result<Self> {
        let num = |v: &serde_json::Value| {
            v.as_f64()
                .and_then(T::from_f64)
                .ok_or_else(|| Error::Parse(format!("expected a number, got {v}")))
        };
        let element = match (carrier, value) {
            (Carrier::Scalar, v) if v.is_number() => Element::Scalar(num(v)?),
            (Carrier::Scalar, serde_json::Value::Array(a)) if a.len() == 1 => {
                Element::Scalar(num(&a[0])?)
            }
            (_, serde_json::Value::Array(a)) => {
                let comps = a.iter().map(num).collect::<Result<Vec<_>>>()?;
                Element::from_components(carrier, &comps)?
            }
            _ => return Err(Error::Parse(format!("cannot read {carrier} from {value}"))),
        };
        element.validate()?;
        Ok(element)
    }
}

impl<T: Scalar> fmt::Display for Element<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Scalar(v) => write!(f, "{v}"),
            Element::Interval(l, u) => write!(f, "[{l}, {u}]"),
            Element::Vector(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Natural partial order of the carrier: `<=` on scalars, endpointwise on
/// intervals, coordinatewise on vectors.
pub fn partial_leq<T: Scalar>(x: &Element<T>, z: &Element<T>) -> Result<bool> {
    match (x, z) {
        (Element::Scalar(a), Element::Scalar(b)) => Ok(le_tol(*a, *b)),
        (Element::Interval(xl, xu), Element::Interval(zl, zu)) => {
            Ok(le_tol(*xl, *zl) && le_tol(*xu, *zu))
        }
        (Element::Vector(a), Element::Vector(b)) if a.len() == b.len() => {
            Ok(a.iter().zip(b).all(|(p, q)| le_tol(*p, *q)))
        }
        _ => Err(x.mismatch(z)),
    }
}

/// `K_alpha(x) = (1 - alpha) * lower + alpha * upper`.
pub fn k_alpha<T: Scalar>(lower: T, upper: T, alpha: T) -> T {
    (T::one() - alpha) * lower + alpha * upper
}
