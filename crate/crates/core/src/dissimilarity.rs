//! Dissimilarity functions, the Takáč interval construction, and the
//! telescoping identity that decides whether the `b (.) d` operator
//! aggregates.

use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use crate::algebra::AdditionOp;
use crate::element::{k_alpha, Carrier, Element};
use crate::error::{Error, Result};
use crate::order::AdmissibleOrder;
use crate::scalar::{approx_eq, le_tol, parse_scalar, Scalar};
use crate::verifier::grid::GridSpec;
use crate::verifier::report::{par_search, LawReport, Search, Witness};

pub type DissFn<T> = dyn Fn(&Element<T>, &Element<T>) -> Result<Element<T>> + Send + Sync;

/// A named function `d : K x K -> K`.
#[derive(Clone)]
pub struct DissimilarityFn<T> {
    name: String,
    carrier: Option<Carrier>,
    f: Arc<DissFn<T>>,
}

impl<T> fmt::Debug for DissimilarityFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DissimilarityFn({})", self.name)
    }
}

/// Scalar dissimilarities usable as `delta_d` in the Takáč construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarDissimilarity {
    AbsDiff,
    SqDiff,
    /// `min(1, 2|a - b|)`.
    ClippedDouble,
}

impl ScalarDissimilarity {
    pub fn parse(name: &str) -> Result<Self> {
        match name.trim() {
            "abs-diff" => Ok(ScalarDissimilarity::AbsDiff),
            "sq-diff" => Ok(ScalarDissimilarity::SqDiff),
            "clipped-double" => Ok(ScalarDissimilarity::ClippedDouble),
            other => Err(Error::UnknownDissimilarity(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalarDissimilarity::AbsDiff => "abs-diff",
            ScalarDissimilarity::SqDiff => "sq-diff",
            ScalarDissimilarity::ClippedDouble => "clipped-double",
        }
    }

    pub fn eval<T: Scalar>(self, a: T, b: T) -> T {
        let diff = (a - b).abs();
        match self {
            ScalarDissimilarity::AbsDiff => diff,
            ScalarDissimilarity::SqDiff => diff * diff,
            ScalarDissimilarity::ClippedDouble => (diff + diff).min_of(T::one()),
        }
    }

    /// Range condition of the Takáč construction: `t -> delta(t, 0)` must map
    /// `[0,1]` onto `[0,1]`. Checked as strict increase across the grid with
    /// `delta(0,0) = 0` and `delta(1,0) = 1`.
    pub fn range_condition<T: Scalar>(self, grid: &GridSpec) -> bool {
        let vals: Vec<T> = grid.values::<T>().into_iter().map(|t| self.eval(t, T::zero())).collect();
        approx_eq(vals[0], T::zero())
            && approx_eq(*vals.last().unwrap_or(&T::zero()), T::one())
            && vals.windows(2).all(|w| w[0] < w[1] && !approx_eq(w[0], w[1]))
    }
}

/// Symmetric aggregation `M_d` for interval widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthMean {
    Max,
    Min,
    Mean,
}

impl WidthMean {
    pub fn parse(name: &str) -> Result<Self> {
        match name.trim() {
            "max" => Ok(WidthMean::Max),
            "min" => Ok(WidthMean::Min),
            "mean" => Ok(WidthMean::Mean),
            other => Err(Error::UnknownDissimilarity(format!("width aggregation {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WidthMean::Max => "max",
            WidthMean::Min => "min",
            WidthMean::Mean => "mean",
        }
    }

    pub fn eval<T: Scalar>(self, a: T, b: T) -> T {
        match self {
            WidthMean::Max => a.max_of(b),
            WidthMean::Min => a.min_of(b),
            WidthMean::Mean => (a + b) * T::half(),
        }
    }
}

/// Parameters of the Takáč interval dissimilarity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Takac<T> {
    pub alpha: T,
    pub mean: WidthMean,
    pub delta: ScalarDissimilarity,
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha <= T::zero() || alpha >= T::one() {
        return Err(Error::AlphaOutOfRange(alpha.to_f64()));
    }
    Ok(())
}

/// `min(K/alpha, (1-K)/(1-alpha))`: the largest width an interval with this
/// `K_alpha` can have.
fn width_bound<T: Scalar>(k: T, alpha: T) -> T {
    (k / alpha).min_of((T::one() - k) / (T::one() - alpha))
}

/// `lambda_alpha(x) = w(x) / min(K_alpha(x)/alpha, (1 - K_alpha(x))/(1 - alpha))`
/// with `0/0 = 0`.
pub fn lambda_alpha<T: Scalar>(x: &Element<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let Element::Interval(l, u) = *x else {
        return Err(Error::KindMismatch {
            expected: Carrier::Interval,
            found: x.carrier(),
        });
    };
    let w = u - l;
    let bound = width_bound(k_alpha(l, u, alpha), alpha);
    if approx_eq(bound, T::zero()) {
        return Ok(T::zero());
    }
    Ok(w / bound)
}

/// Interval with prescribed `K_alpha` and `lambda_alpha`:
/// `[K - alpha w, K + (1 - alpha) w]` where `w = lambda * bound(K)`.
pub fn reconstruct<T: Scalar>(k: T, lambda: T, alpha: T) -> Result<Element<T>> {
    check_alpha(alpha)?;
    let bound = width_bound(k, alpha);
    let w = if approx_eq(bound, T::zero()) { T::zero() } else { lambda * bound };
    let lower = k - alpha * w;
    let upper = k + (T::one() - alpha) * w;
    let slack = T::from_f64(1e-9).unwrap_or_else(T::tolerance);
    let fix = |v: T| {
        if v < T::zero() && v >= -slack {
            Some(T::zero())
        } else if v > T::one() && v <= T::one() + slack {
            Some(T::one())
        } else if v >= T::zero() && v <= T::one() {
            Some(v)
        } else {
            None
        }
    };
    match (fix(lower), fix(upper)) {
        (Some(l), Some(u)) if le_tol(l, u) => Ok(Element::Interval(l, u.max_of(l))),
        _ => Err(Error::ReconstructionOutOfK {
            lower: lower.to_f64(),
            upper: upper.to_f64(),
        }),
    }
}

/// Takáč interval dissimilarity: the `z` with
/// `K_alpha(z) = delta_d(K_alpha(x), K_alpha(y))` and
/// `lambda_alpha(z) = M_d(lambda_alpha(x), lambda_alpha(y))`.
pub fn takac_dissimilarity<T: Scalar>(
    x: &Element<T>,
    y: &Element<T>,
    alpha: T,
    mean: WidthMean,
    delta: ScalarDissimilarity,
) -> Result<Element<T>> {
    check_alpha(alpha)?;
    let (Element::Interval(xl, xu), Element::Interval(yl, yu)) = (x, y) else {
        return Err(x.mismatch(y));
    };
    let k = delta.eval(k_alpha(*xl, *xu, alpha), k_alpha(*yl, *yu, alpha));
    let lambda = mean.eval(lambda_alpha(x, alpha)?, lambda_alpha(y, alpha)?);
    reconstruct(k, lambda, alpha)
}

impl<T: Scalar> DissimilarityFn<T> {
    pub fn custom(
        name: impl Into<String>,
        carrier: Option<Carrier>,
        f: impl Fn(&Element<T>, &Element<T>) -> Result<Element<T>> + Send + Sync + 'static,
    ) -> Self {
        DissimilarityFn {
            name: name.into(),
            carrier,
            f: Arc::new(f),
        }
    }

    /// Scalar-valued `delta(g(x), g(z))` lifted to the constant element, where
    /// `g` is the real score the order compares first. On scalars this is
    /// `delta` itself.
    pub fn score_based(delta: ScalarDissimilarity, ord: &AdmissibleOrder<T>) -> Result<Self> {
        let carrier = ord.carrier();
        if matches!(ord, AdmissibleOrder::Custom { .. }) {
            return Err(Error::BadParameter(format!(
                "{} needs an order with a primary score, got {ord}",
                delta.name()
            )));
        }
        let ord = ord.clone();
        Ok(Self::custom(delta.name(), Some(carrier), move |x, z| {
            x.same_kind(z)?;
            let (Some(a), Some(b)) = (ord.primary_score(x), ord.primary_score(z)) else {
                return Err(Error::KindMismatch {
                    expected: ord.carrier(),
                    found: x.carrier(),
                });
            };
            Ok(Element::constant(x.carrier(), delta.eval(a, b)))
        }))
    }

    pub fn abs_diff(ord: &AdmissibleOrder<T>) -> Result<Self> {
        Self::score_based(ScalarDissimilarity::AbsDiff, ord)
    }

    pub fn sq_diff(ord: &AdmissibleOrder<T>) -> Result<Self> {
        Self::score_based(ScalarDissimilarity::SqDiff, ord)
    }

    pub fn takac(params: Takac<T>) -> Result<Self> {
        check_alpha(params.alpha)?;
        let name = format!(
            "takac:{}:{}:{}",
            params.alpha.to_f64(),
            params.mean.name(),
            params.delta.name()
        );
        Ok(Self::custom(name, Some(Carrier::Interval), move |x, y| {
            takac_dissimilarity(x, y, params.alpha, params.mean, params.delta)
        }))
    }

    /// `abs-diff`, `sq-diff`, `clipped-double`, or `takac:<alpha>:<Md>:<deltad>`.
    pub fn parse(spec: &str, ord: &AdmissibleOrder<T>) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("takac:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let [a, md, dd] = parts[..] else {
                return Err(Error::UnknownDissimilarity(spec.to_string()));
            };
            let alpha = parse_scalar(a).ok_or_else(|| Error::Parse(format!("bad alpha in {spec}")))?;
            let delta = ScalarDissimilarity::parse(dd)?;
            if delta != ScalarDissimilarity::AbsDiff {
                return Err(Error::UnknownDissimilarity(format!(
                    "{spec}: only abs-diff is supported as delta_d"
                )));
            }
            return Self::takac(Takac {
                alpha,
                mean: WidthMean::parse(md)?,
                delta,
            });
        }
        Self::score_based(ScalarDissimilarity::parse(spec)?, ord)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> Option<Carrier> {
        self.carrier
    }

    pub fn eval(&self, x: &Element<T>, z: &Element<T>) -> Result<Element<T>> {
        if let Some(c) = self.carrier {
            if x.carrier() != c {
                return Err(Error::KindMismatch {
                    expected: c,
                    found: x.carrier(),
                });
            }
        }
        (self.f)(x, z)
    }
}

/// Symmetry, `d(0,1) = 1`, `d(x,x) = 0` and monotonicity along chains
/// `x <= y <= z`: `d(x,y) <= d(x,z)` and `d(y,z) <= d(x,z)`.
pub fn check_dissimilarity<T: Scalar>(
    d: &DissimilarityFn<T>,
    ord: &AdmissibleOrder<T>,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let zero = Element::zero(grid.carrier);
    let one = Element::one(grid.carrier);

    let symmetry = par_search(&elems, |i, x, s: &mut Search<T>| {
        for (j, z) in elems.iter().enumerate().skip(i + 1) {
            s.tick();
            let (a, b) = (d.eval(x, z), d.eval(z, x));
            if let (Ok(a), Ok(b)) = (&a, &b) {
                if !a.approx_eq(b) {
                    s.offer(Search::<T>::key(i, j as u64), a.distance(b), || {
                        Witness::new().element("x", x).element("z", z).element("d(x,z)", a).element("d(z,x)", b)
                    });
                }
            }
        }
    });
    let symmetry = LawReport::from_search("symmetry", symmetry, start.elapsed());

    let mut boundary = Search::new();
    boundary.tick();
    let top = d.eval(&zero, &one)?;
    if !top.approx_eq(&one) {
        boundary.offer(0, top.distance(&one), || Witness::new().element("d(0,1)", &top));
    }
    let boundary = LawReport::from_search("boundary", boundary, start.elapsed());

    let diagonal = par_search(&elems, |i, x, s: &mut Search<T>| {
        s.tick();
        if let Ok(v) = d.eval(x, x) {
            if !v.approx_eq(&zero) {
                s.offer(Search::<T>::key(i, 0), 1.0, || {
                    Witness::new().element("x", x).element("d(x,x)", &v)
                });
            }
        }
    });
    let diagonal = LawReport::from_search("diagonal", diagonal, start.elapsed());

    let len = elems.len() as u64;
    let chains = par_search(&elems, |i, x, s: &mut Search<T>| {
        for (j, y) in elems.iter().enumerate() {
            if !ord.leq(x, y) {
                continue;
            }
            for (k, z) in elems.iter().enumerate() {
                if !ord.leq(y, z) {
                    continue;
                }
                s.tick();
                let (Ok(xy), Ok(xz), Ok(yz)) = (d.eval(x, y), d.eval(x, z), d.eval(y, z)) else {
                    continue;
                };
                if !ord.leq(&xy, &xz) || !ord.leq(&yz, &xz) {
                    s.offer(Search::<T>::key(i, j as u64 * len + k as u64), 1.0, || {
                        Witness::new()
                            .element("x", x)
                            .element("y", y)
                            .element("z", z)
                            .element("d(x,y)", &xy)
                            .element("d(y,z)", &yz)
                            .element("d(x,z)", &xz)
                    });
                }
            }
        }
    });
    let chains = LawReport::from_search("chain-monotonicity", chains, start.elapsed());

    Ok(LawReport::combine("dissimilarity", vec![symmetry, boundary, diagonal, chains]).with_grid(grid.m))
}

/// `d(x1, 0) (+) d(x2, x1) = d(x2, 0)` for all grid pairs `x1 <= x2`.
///
/// The witness is the pair with the largest discrepancy.
pub fn check_telescoping<T: Scalar>(
    d: &DissimilarityFn<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let zero = Element::zero(grid.carrier);
    // Errors are surfaced rather than skipped: a dissimilarity that cannot be
    // evaluated on the grid is a configuration problem.
    let firsts: Vec<Element<T>> = elems.iter().map(|x| d.eval(x, &zero)).collect::<Result<_>>()?;
    let failure = Mutex::new(None);
    let search = par_search(&elems, |i, x1, s: &mut Search<T>| {
        for (j, x2) in elems.iter().enumerate() {
            if !ord.leq(x1, x2) {
                continue;
            }
            s.tick();
            let lhs = match d.eval(x2, x1).and_then(|step| add.add(&firsts[i], &step)) {
                Ok(v) => v,
                Err(e) => {
                    failure.lock().unwrap_or_else(|p| p.into_inner()).get_or_insert(e);
                    continue;
                }
            };
            let rhs = &firsts[j];
            if !lhs.approx_eq(rhs) {
                s.offer(Search::<T>::key(i, j as u64), lhs.distance(rhs), || {
                    Witness::new()
                        .element("x1", x1)
                        .element("x2", x2)
                        .element("lhs", &lhs)
                        .element("rhs", rhs)
                });
            }
        }
    });
    if let Some(e) = failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Err(e);
    }
    Ok(LawReport::from_search("telescoping", search, start.elapsed()).with_grid(grid.m))
}

/// Telescoping failure of the Takáč dissimilarity, with the quantities of the
/// width argument.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixCWitness<T> {
    pub x1: Element<T>,
    pub x2: Element<T>,
    /// `d(x1, 0) (+) d(x2, x1)`.
    pub lhs: Element<T>,
    /// `d(x2, 0)`.
    pub rhs: Element<T>,
    /// `K_alpha` of `d(x1,0)`, `d(x2,0)` and `d(x2,x1)`.
    pub a1: T,
    pub a2: T,
    pub a12: T,
    /// `w(z1) + w(z12)` against `w(z2)`.
    pub width_lhs: T,
    pub width_rhs: T,
    /// True when the `[0,t]` family had no witness and the full grid was used.
    pub from_fallback: bool,
    pub checked: u64,
}

impl<T: Scalar> AppendixCWitness<T> {
    pub fn to_witness(&self) -> Witness<T> {
        Witness::new()
            .element("x1", &self.x1)
            .element("x2", &self.x2)
            .element("lhs", &self.lhs)
            .element("rhs", &self.rhs)
            .real("A1", self.a1)
            .real("A2", self.a2)
            .real("A12", self.a12)
            .real("width_lhs", self.width_lhs)
            .real("width_rhs", self.width_rhs)
            .text("family", if self.from_fallback { "full-grid" } else { "[0,t]" })
    }
}

fn width<T: Scalar>(x: &Element<T>) -> T {
    match x {
        Element::Interval(l, u) => *u - *l,
        _ => T::zero(),
    }
}

/// Searches for a telescoping violation of the Takáč dissimilarity built from
/// `(alpha, mean, delta)`, ordered by the `(alpha, beta)` order.
///
/// Pairs `[0,t1], [0,t2]` with `t1 < t2` are tried first in lexicographic
/// order of `(t1, t2)`. When `fallback` is set and that family has no
/// violation, every grid pair `x1 < x2` is tried in enumeration order.
pub fn appendix_c_counterexample<T: Scalar>(
    alpha: T,
    beta: T,
    mean: WidthMean,
    delta: ScalarDissimilarity,
    grid: &GridSpec,
    fallback: bool,
) -> Result<AppendixCWitness<T>> {
    let ord = AdmissibleOrder::alpha_beta(alpha, beta)?;
    check_alpha(alpha)?;
    let grid = GridSpec::new(Carrier::Interval, grid.m)?;
    let zero = Element::zero(Carrier::Interval);
    let add = AdditionOp::Interval;
    let d = |x: &Element<T>, y: &Element<T>| takac_dissimilarity(x, y, alpha, mean, delta);
    let mut checked = 0u64;

    let mut attempt = |x1: &Element<T>, x2: &Element<T>, from_fallback: bool| -> Result<Option<AppendixCWitness<T>>> {
        checked += 1;
        let z1 = d(x1, &zero)?;
        let z2 = d(x2, &zero)?;
        let z12 = d(x2, x1)?;
        let lhs = add.add(&z1, &z12)?;
        if lhs.approx_eq(&z2) {
            return Ok(None);
        }
        let score = |z: &Element<T>| ord.primary_score(z).unwrap_or_else(T::zero);
        Ok(Some(AppendixCWitness {
            x1: x1.clone(),
            x2: x2.clone(),
            lhs,
            rhs: z2.clone(),
            a1: score(&z1),
            a2: score(&z2),
            a12: score(&z12),
            width_lhs: width(&z1) + width(&z12),
            width_rhs: width(&z2),
            from_fallback,
            checked: 0,
        }))
    };

    let ts = grid.values::<T>();
    for (i, &t1) in ts.iter().enumerate() {
        for &t2 in &ts[i + 1..] {
            let (x1, x2) = (Element::Interval(T::zero(), t1), Element::Interval(T::zero(), t2));
            if let Some(mut w) = attempt(&x1, &x2, false)? {
                w.checked = checked;
                return Ok(w);
            }
        }
    }
    if fallback {
        let elems = grid.elements::<T>();
        for x1 in &elems {
            for x2 in &elems {
                if !ord.lt(x1, x2) {
                    continue;
                }
                if let Some(mut w) = attempt(x1, x2, true)? {
                    w.checked = checked;
                    return Ok(w);
                }
            }
        }
    }
    Err(Error::NoWitnessFound(format!(
        "no telescoping violation among {checked} pairs at resolution 1/{}{}",
        grid.m,
        if fallback { "" } else { " in the [0,t] family" }
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord() -> AdmissibleOrder<f64> {
        AdmissibleOrder::xu_yager()
    }

    #[test]
    fn lambda_examples() {
        assert!(approx_eq(lambda_alpha(&Element::Interval(0.0, 1.0), 0.5).unwrap(), 1.0));
        assert_eq!(lambda_alpha(&Element::Interval(0.3, 0.3), 0.5).unwrap(), 0.0);
        assert_eq!(lambda_alpha(&Element::Interval(0.0, 0.0), 0.25).unwrap(), 0.0);
        assert!(matches!(
            lambda_alpha(&Element::Interval(0.0, 0.0), 1.0),
            Err(Error::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn takac_examples() {
        let z = takac_dissimilarity(
            &Element::Interval(0.0, 1.0),
            &Element::Interval(0.0, 0.0),
            0.5,
            WidthMean::Max,
            ScalarDissimilarity::AbsDiff,
        )
        .unwrap();
        assert!(z.approx_eq(&Element::Interval(0.0, 1.0)));
        let x = Element::Interval(0.25, 0.75);
        let z = takac_dissimilarity(&x, &x, 0.5, WidthMean::Max, ScalarDissimilarity::AbsDiff).unwrap();
        assert!(z.approx_eq(&Element::Interval(0.0, 0.0)));
    }

    #[test]
    fn reconstruction_round_trip() {
        let g = GridSpec::new(Carrier::Interval, 8).unwrap();
        for alpha in [0.25, 0.5, 0.75] {
            for x in g.elements::<f64>() {
                for y in g.elements::<f64>() {
                    let z = takac_dissimilarity(&x, &y, alpha, WidthMean::Mean, ScalarDissimilarity::AbsDiff)
                        .unwrap();
                    let Element::Interval(l, u) = z else { unreachable!() };
                    let (Element::Interval(xl, xu), Element::Interval(yl, yu)) = (&x, &y) else {
                        unreachable!()
                    };
                    let k = (k_alpha(*xl, *xu, alpha) - k_alpha(*yl, *yu, alpha)).abs();
                    assert!((k_alpha(l, u, alpha) - k).abs() < 1e-9);
                    let lam = 0.5 * (lambda_alpha(&x, alpha).unwrap() + lambda_alpha(&y, alpha).unwrap());
                    let got = lambda_alpha(&z, alpha).unwrap();
                    if width_bound(k, alpha) > 1e-12 {
                        assert!((got - lam).abs() < 1e-9, "{x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn scalar_dissimilarities() {
        let g = GridSpec::new(Carrier::Scalar, 8).unwrap();
        let o = AdmissibleOrder::ScalarUsual;
        assert!(check_dissimilarity(&DissimilarityFn::abs_diff(&o).unwrap(), &o, &g).unwrap().passed());
        assert!(check_dissimilarity(&DissimilarityFn::sq_diff(&o).unwrap(), &o, &g).unwrap().passed());
        let sum = DissimilarityFn::custom("sum", None, |x: &Element<f64>, z: &Element<f64>| {
            x.zip_with(z, |a, b| (a + b).min(1.0))
        });
        let r = check_dissimilarity(&sum, &o, &g).unwrap();
        assert_eq!(r.failing_part(), Some("diagonal"));
    }

    #[test]
    fn telescoping_abs_passes_sq_fails() {
        let o = AdmissibleOrder::ScalarUsual;
        let g = GridSpec::new(Carrier::Scalar, 4).unwrap();
        let add = AdditionOp::Standard;
        let abs = DissimilarityFn::abs_diff(&o).unwrap();
        assert!(check_telescoping(&abs, &add, &o, &g).unwrap().passed());
        let sq = DissimilarityFn::sq_diff(&o).unwrap();
        let r = check_telescoping(&sq, &add, &o, &g).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.get_element("x1"), Some(&Element::Scalar(0.5)));
        assert_eq!(w.get_element("x2"), Some(&Element::Scalar(1.0)));
        assert_eq!(w.get_element("lhs"), Some(&Element::Scalar(0.5)));
    }

    #[test]
    fn interval_abs_diff_telescopes() {
        let o = ord();
        let g = GridSpec::new(Carrier::Interval, 4).unwrap();
        let abs = DissimilarityFn::abs_diff(&o).unwrap();
        assert!(check_dissimilarity(&abs, &o, &g).unwrap().passed());
        assert!(check_telescoping(&abs, &AdditionOp::Interval, &o, &g).unwrap().passed());
    }

    #[test]
    fn takac_is_a_dissimilarity_without_k_ties() {
        // No two grid intervals share K_0.3 at m = 4 or 8.
        for m in [4, 8] {
            let g = GridSpec::new(Carrier::Interval, m).unwrap();
            for (a, b) in [(0.3, 0.6), (0.7, 0.2)] {
                let o = AdmissibleOrder::alpha_beta(a, b).unwrap();
                for md in ["max", "min", "mean"] {
                    let d = DissimilarityFn::parse(&format!("takac:{a}:{md}:abs-diff"), &o).unwrap();
                    let r = check_dissimilarity(&d, &o, &g).unwrap();
                    assert!(r.passed(), "m={m} a={a} {md}: {:?}", r.witness);
                }
            }
        }
    }

    #[test]
    fn takac_breaks_chain_monotonicity_on_k_ties() {
        // Equal K_0.5 with different widths: the tie-break then ranks the
        // wider image above the narrower one.
        let o = AdmissibleOrder::alpha_beta(0.5, 0.75).unwrap();
        let g = GridSpec::new(Carrier::Interval, 4).unwrap();
        let d = DissimilarityFn::parse("takac:0.5:max:abs-diff", &o).unwrap();
        let r = check_dissimilarity(&d, &o, &g).unwrap();
        assert_eq!(r.failing_part(), Some("chain-monotonicity"));
        let w = r.witness.unwrap();
        let (x, y, z) = (
            w.get_element("x").unwrap(),
            w.get_element("y").unwrap(),
            w.get_element("z").unwrap(),
        );
        assert!(o.leq(x, y) && o.leq(y, z));
        let dxz = d.eval(x, z).unwrap();
        let broken = !o.leq(&d.eval(x, y).unwrap(), &dxz) || !o.leq(&d.eval(y, z).unwrap(), &dxz);
        assert!(broken);
    }

    #[test]
    fn appendix_c_family_and_fallback() {
        let g = GridSpec::new(Carrier::Interval, 8).unwrap();
        let restricted = appendix_c_counterexample(0.5, 1.0, WidthMean::Max, ScalarDissimilarity::AbsDiff, &g, false);
        assert!(matches!(restricted, Err(Error::NoWitnessFound(_))));
        let w = appendix_c_counterexample(0.5, 1.0, WidthMean::Max, ScalarDissimilarity::AbsDiff, &g, true).unwrap();
        assert!(w.from_fallback);
        assert!(!w.lhs.approx_eq(&w.rhs));
        let w = appendix_c_counterexample(0.5, 1.0, WidthMean::Min, ScalarDissimilarity::AbsDiff, &g, false).unwrap();
        assert!(!w.from_fallback);
        let coarse = GridSpec::new(Carrier::Interval, 1).unwrap();
        assert!(matches!(
            appendix_c_counterexample(0.5, 1.0, WidthMean::Max, ScalarDissimilarity::AbsDiff, &coarse, false),
            Err(Error::NoWitnessFound(_))
        ));
    }

    #[test]
    fn range_condition() {
        let g = GridSpec::new(Carrier::Scalar, 8).unwrap();
        assert!(ScalarDissimilarity::AbsDiff.range_condition::<f64>(&g));
        assert!(!ScalarDissimilarity::ClippedDouble.range_condition::<f64>(&g));
    }
}
