//! Kernel catalog: the named kernel families, a JSON spec format, and a
//! registry for user kernels.
//!
//! Spec JSON:
//! `{"family": "delta-scale", "delta": "difference"}`,
//! `{"family": "f-difference", "F": "a2x"}`,
//! `{"family": "affine-F", "C": "0.5*id", "D": "1/6*id"}`,
//! `{"family": "b-scale-d", "d": "abs-diff"}`,
//! `{"family": "custom", "name": "..."}`.
//! An optional `"mul"` names the multiplication (default: the carrier's).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;

use crate::algebra::MultiplicationOp;
use crate::dissimilarity::DissimilarityFn;
use crate::element::{Carrier, Element};
use crate::error::{Error, Result};
use crate::operator::kernel::{DeltaFn, Kernel, Provenance};
use crate::order::AdmissibleOrder;
use crate::scalar::{parse_scalar, Scalar};

/// Named scalar `delta(b1, b2)` for `b1 >= b2`.
pub fn named_delta<T: Scalar>(name: &str) -> Result<Arc<DeltaFn<T>>> {
    let f: Arc<DeltaFn<T>> = match name.trim() {
        "difference" | "abs-diff" => Arc::new(|a: T, b: T| (a - b).max_of(T::zero())),
        "sq-diff" => Arc::new(|a: T, b: T| (a - b) * (a - b)),
        "clipped-double" => Arc::new(|a: T, b: T| {
            let d = (a - b).abs();
            (d + d).min_of(T::one())
        }),
        other => return Err(Error::UnknownKernel(format!("unknown delta {other:?}"))),
    };
    Ok(f)
}

/// Building block of affine `C` and `D` maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Id,
    /// Componentwise square.
    Sq,
    /// `[u, u]` for intervals.
    Upper,
    /// `[l, l]` for intervals.
    Lower,
    Zero,
}

impl Base {
    fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "id" => Ok(Base::Id),
            "sq" => Ok(Base::Sq),
            "upper" => Ok(Base::Upper),
            "lower" => Ok(Base::Lower),
            "zero" | "0" => Ok(Base::Zero),
            other => Err(Error::BadParameter(format!("unknown affine base {other:?}"))),
        }
    }

    fn apply<T: Scalar>(self, x: &Element<T>) -> Result<Element<T>> {
        Ok(match (self, x) {
            (Base::Id, _) => x.clone(),
            (Base::Sq, _) => x.map(|v| v * v),
            (Base::Zero, _) => Element::zero(x.carrier()),
            (Base::Upper, Element::Interval(_, u)) => Element::Interval(*u, *u),
            (Base::Lower, Element::Interval(l, _)) => Element::Interval(*l, *l),
            (Base::Upper | Base::Lower, Element::Scalar(_)) => x.clone(),
            (Base::Upper | Base::Lower, Element::Vector(_)) => {
                return Err(Error::BadParameter("upper/lower bases need intervals".into()))
            }
        })
    }
}

/// `coef * base`, written `"<coef>*<base>"`, `"<base>"` or `"0"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTerm<T> {
    pub coef: T,
    pub base: Base,
}

impl<T: Scalar> AffineTerm<T> {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec.split_once('*') {
            Some((c, b)) => Ok(AffineTerm {
                coef: parse_scalar(c)
                    .ok_or_else(|| Error::BadParameter(format!("bad coefficient in {spec:?}")))?,
                base: Base::parse(b)?,
            }),
            None if parse_scalar::<T>(spec).is_some_and(|v| v == T::zero()) => Ok(AffineTerm {
                coef: T::zero(),
                base: Base::Zero,
            }),
            None => Ok(AffineTerm {
                coef: T::one(),
                base: Base::parse(spec)?,
            }),
        }
    }

    pub fn apply(&self, x: &Element<T>) -> Result<Element<T>> {
        let c = self.coef;
        Ok(self.base.apply(x)?.map(|v| c * v))
    }
}

/// `F(x, a) = a C(x) + D(x)` as an F-difference kernel.
pub fn affine_f<T: Scalar>(c_spec: &str, d_spec: &str) -> Result<Kernel<T>> {
    let c = AffineTerm::<T>::parse(c_spec)?;
    let d = AffineTerm::<T>::parse(d_spec)?;
    let kernel = Kernel::f_difference(format!("affine({c_spec};{d_spec})"), move |x, a| {
        let cx = c.apply(x)?;
        let dx = d.apply(x)?;
        cx.zip_with(&dx, |p, q| a * p + q)
    });
    Ok(kernel.with_provenance(Provenance::AffineF {
        c: c_spec.to_string(),
        d: d_spec.to_string(),
    }))
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "choquet",
    "dg-abs",
    "dg-sq",
    "zero",
    "half-mixture",
    "b1-scale",
    "delta-sq",
    "cii-b-scale",
    "prev-blend",
    "a2x",
];

/// Named kernels for the carrier of `ord`:
///
/// * `choquet`: `(b1 - b2) (.) x`
/// * `dg-abs` / `dg-sq`: `b (.) d(x1, x2)` with abs-diff / sq-diff
/// * `zero`: constant `0`
/// * `half-mixture`: `0.5 (b1 - b2) (.) x1 (+) 0.5 b1 (.) d(x1, x2)`
/// * `b1-scale`: `b1 (.) x`
/// * `delta-sq`: `(b1 - b2)^2 (.) x`
/// * `cii-b-scale`: `b (.) x1`
/// * `prev-blend`: `(b1 - b2) (.) (x1 + x2)/2`
/// * `a2x`: `F(x, a) = a^2 (.) x`
pub fn builtin<T: Scalar>(name: &str, ord: &AdmissibleOrder<T>) -> Result<Kernel<T>> {
    let carrier = ord.carrier();
    let mul = MultiplicationOp::for_carrier(carrier);
    let kernel = match name {
        "choquet" => Kernel::delta_scale("difference", move |a: T, b: T| (a - b).max_of(T::zero()), mul),
        "delta-sq" => Kernel::delta_scale("sq-diff", |a: T, b: T| (a - b) * (a - b), mul),
        "dg-abs" => Kernel::b_scale_d(DissimilarityFn::abs_diff(ord)?, mul),
        "dg-sq" => Kernel::b_scale_d(DissimilarityFn::sq_diff(ord)?, mul),
        "zero" => Kernel::general("zero", move |x, _, _, _| Ok(Element::zero(x.carrier()))),
        "half-mixture" => {
            let d = DissimilarityFn::abs_diff(ord)?;
            Kernel::general("half-mixture", move |x1, x2, b1, b2| {
                let h = T::half();
                let left = mul.scale(h * (b1 - b2), x1)?;
                let right = mul.scale(h * b1, &d.eval(x1, x2)?)?;
                left.zip_with(&right, |p, q| p + q)
            })
        }
        "b1-scale" => Kernel::ci("b1-scale", move |x, b1, _| mul.scale(b1, x)),
        "cii-b-scale" => Kernel::cii("cii-b-scale", move |x1, _, b| mul.scale(b, x1)),
        "prev-blend" => Kernel::general("prev-blend", move |x1, x2, b1, b2| {
            let mid = x1.zip_with(x2, |p, q| (p + q) * T::half())?;
            mul.scale(b1 - b2, &mid)
        }),
        "a2x" => Kernel::f_difference("a2x", move |x, a| mul.scale(a * a, x)),
        other => return Err(Error::UnknownKernel(other.to_string())),
    };
    Ok(kernel.with_name(name))
}

/// User kernels by name, plus the builtins and the JSON spec format.
pub struct KernelRegistry<T> {
    custom: BTreeMap<String, Kernel<T>>,
}

impl<T> Default for KernelRegistry<T> {
    fn default() -> Self {
        KernelRegistry {
            custom: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> KernelRegistry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, kernel: Kernel<T>) {
        self.custom.insert(kernel.name().to_string(), kernel);
    }

    /// Resolves a kernel spec: a JSON object, a registered name, or a builtin
    /// name.
    pub fn resolve(&self, spec: &str, ord: &AdmissibleOrder<T>) -> Result<Kernel<T>> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            let value: Value = serde_json::from_str(spec).map_err(|e| Error::Parse(e.to_string()))?;
            return self.from_json(&value, ord);
        }
        if let Some(k) = self.custom.get(spec) {
            return Ok(k.clone());
        }
        builtin(spec, ord)
    }

    pub fn from_json(&self, value: &Value, ord: &AdmissibleOrder<T>) -> Result<Kernel<T>> {
        let field = |key: &str| {
            value
                .get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::BadParameter(format!("kernel spec needs string field {key:?}")))
        };
        let family = field("family")?;
        let mul = match value.get("mul").and_then(Value::as_str) {
            Some(name) => MultiplicationOp::parse(name)?,
            None => MultiplicationOp::for_carrier(ord.carrier()),
        };
        match family {
            "delta-scale" => {
                let name = field("delta")?;
                let delta = named_delta::<T>(name)?;
                Ok(Kernel::delta_scale(name, move |a, b| delta(a, b), mul))
            }
            "f-difference" => {
                let name = field("F")?;
                match name {
                    "a2x" => Ok(Kernel::f_difference("a2x", move |x, a| mul.scale(a * a, x))),
                    "zero" => Ok(Kernel::f_difference("zero", |x, _| Ok(Element::zero(x.carrier())))),
                    "identity" => Ok(Kernel::f_difference("identity", move |x, a| mul.scale(a, x))),
                    other => Err(Error::UnknownKernel(format!("unknown F {other:?}"))),
                }
            }
            "affine-F" => affine_f(field("C")?, field("D")?),
            "b-scale-d" => Ok(Kernel::b_scale_d(DissimilarityFn::parse(field("d")?, ord)?, mul)),
            "custom" => {
                let name = field("name")?;
                self.custom
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::UnknownKernel(name.to_string()))
            }
            other => Err(Error::UnknownKernel(format!("unknown family {other:?}"))),
        }
    }
}

/// Carrier-independent check that a spec names a known kernel.
pub fn is_builtin(name: &str) -> bool {
    BUILTIN_NAMES.contains(&name)
}

#[doc(hidden)]
pub fn default_carrier_order<T: Scalar>(carrier: Carrier) -> AdmissibleOrder<T> {
    match carrier {
        Carrier::Scalar => AdmissibleOrder::ScalarUsual,
        Carrier::Interval => AdmissibleOrder::xu_yager(),
        Carrier::Vector(k) => AdmissibleOrder::VectorLex {
            priority: (0..k).collect(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_specs_resolve() {
        let reg = KernelRegistry::<f64>::new();
        let ord = AdmissibleOrder::xu_yager();
        let k = reg.resolve(r#"{"family": "delta-scale", "delta": "difference"}"#, &ord).unwrap();
        assert_eq!(k.provenance(), &Provenance::DeltaScale("difference".into()));
        let x = Element::Interval(0.2, 0.4);
        assert!(k.eval(&x, &x, 1.0, 0.5).unwrap().approx_eq(&Element::Interval(0.1, 0.2)));

        let k = reg.resolve(r#"{"family": "affine-F", "C": "1*upper", "D": "0"}"#, &ord).unwrap();
        assert!(k.eval(&x, &x, 0.5, 0.0).unwrap().approx_eq(&Element::Interval(0.2, 0.2)));
        assert!(matches!(k.provenance(), Provenance::AffineF { .. }));

        let scalar = AdmissibleOrder::ScalarUsual;
        let k = reg.resolve(r#"{"family": "b-scale-d", "d": "abs-diff"}"#, &scalar).unwrap();
        let v = k.eval(&Element::Scalar(0.9), &Element::Scalar(0.4), 0.5, 0.0).unwrap();
        assert!(v.approx_eq(&Element::Scalar(0.25)));

        assert!(matches!(
            reg.resolve(r#"{"family": "nope"}"#, &scalar),
            Err(Error::UnknownKernel(_))
        ));
        assert!(matches!(reg.resolve("unheard-of", &scalar), Err(Error::UnknownKernel(_))));
    }

    #[test]
    fn custom_kernels_are_found_by_name() {
        let mut reg = KernelRegistry::<f64>::new();
        reg.register(Kernel::ci("half", |x, b1, b2| Ok(x.map(|v| 0.5 * v * (b1 - b2)))));
        let ord = AdmissibleOrder::ScalarUsual;
        assert_eq!(reg.resolve("half", &ord).unwrap().name(), "half");
        let k = reg.resolve(r#"{"family": "custom", "name": "half"}"#, &ord).unwrap();
        assert_eq!(k.name(), "half");
    }

    #[test]
    fn builtins_build_on_every_carrier() {
        for carrier in [Carrier::Scalar, Carrier::Interval, Carrier::Vector(2)] {
            let ord = default_carrier_order::<f64>(carrier);
            let one = Element::one(carrier);
            for name in BUILTIN_NAMES {
                let k = builtin(name, &ord).unwrap();
                k.eval(&one, &Element::zero(carrier), 1.0, 0.5).unwrap();
            }
        }
    }

    #[test]
    fn affine_terms_parse() {
        let t = AffineTerm::<f64>::parse("1/3*sq").unwrap();
        assert_eq!(t.base, Base::Sq);
        assert!((t.coef - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(AffineTerm::<f64>::parse("0").unwrap().base, Base::Zero);
        assert_eq!(AffineTerm::<f64>::parse("id").unwrap().coef, 1.0);
        assert!(AffineTerm::<f64>::parse("2*cube").is_err());
    }
}
