//! Grid verification of the well-definedness, monotonicity and aggregation
//! characterizations, plus brute-force operator-level oracles that the
//! condition-level checks are cross-validated against.
//!
//! Every pass is "no counterexample at resolution 1/m"; reports carry that
//! note.

pub mod grid;
pub mod report;

use std::sync::Mutex;
use std::time::Instant;

pub use grid::GridSpec;
pub use report::{par_search, resolution_note, LawReport, Search, Verdict, Witness, WitnessValue};

use crate::algebra::{check_cancellation, check_compatibility, AdditionOp};
use crate::capacity::Capacity;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::operator::kernel::{DeltaFn, FFn, Kernel};
use crate::operator::{choquet_sum, sample_admissible, TieGroups, MATERIALIZE_LIMIT, SAMPLE_COUNT, SAMPLE_SEED};
use crate::order::AdmissibleOrder;
use crate::scalar::Scalar;

/// Seeds of the random capacities in the oracle family.
pub const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

const FAMILY_NOTE: &str = "capacities: all grid-valued ones on the relevant tail sets, plus cardinality, \
     Dirac, top(k) and seeded random; a finite family cannot certify every capacity";

/// [`par_search`] for fallible bodies. The error of the smallest item index
/// wins, so failures are deterministic.
fn try_par_search<A, T, F>(items: &[A], body: F) -> Result<Search<T>>
where
    A: Sync,
    T: Scalar,
    F: Fn(usize, &A, &mut Search<T>) -> Result<()> + Sync,
{
    let failure: Mutex<Option<(usize, Error)>> = Mutex::new(None);
    let search = par_search(items, |i, a, s| {
        if let Err(e) = body(i, a, s) {
            let mut slot = failure.lock().unwrap_or_else(|p| p.into_inner());
            if slot.as_ref().is_none_or(|(j, _)| i < *j) {
                *slot = Some((i, e));
            }
        }
    });
    match failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
        Some((_, e)) => Err(e),
        None => Ok(search),
    }
}

/// Grid elements sorted by `ord`.
fn sorted_grid<T: Scalar>(ord: &AdmissibleOrder<T>, grid: &GridSpec) -> Result<Vec<Element<T>>> {
    if ord.carrier() != grid.carrier {
        return Err(Error::KindMismatch {
            expected: ord.carrier(),
            found: grid.carrier,
        });
    }
    let mut elems = grid.elements::<T>();
    elems.sort_by(|a, b| ord.compare_unchecked(a, b));
    Ok(elems)
}

fn check_arity(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::BadParameter(format!("operator-level checks need n >= 2, got {n}")));
    }
    Ok(())
}

fn require_cancellation<T: Scalar>(law: &str, add: &AdditionOp<T>, grid: &GridSpec) -> Result<()> {
    let cancel = check_cancellation(add, grid)?;
    if cancel.failed() {
        return Err(Error::HypothesisViolated {
            law: law.into(),
            detail: format!("{} fails cancellation on the grid", add.name()),
        });
    }
    Ok(())
}

fn require_strict_compatibility<T: Scalar>(
    law: &str,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    grid: &GridSpec,
) -> Result<()> {
    let compat = check_compatibility(add, ord, true, grid)?;
    if compat.failed() {
        return Err(Error::HypothesisViolated {
            law: law.into(),
            detail: format!("strict order {ord} is not compatible with {} on the grid", add.name()),
        });
    }
    Ok(())
}

/// Per-element search body of a grid scan.
type ItemBody<'a, T> = dyn Fn(usize, &Element<T>, &mut Search<T>) -> Result<()> + Sync + 'a;

/// `L(x1, x2, b1, c) (+) L(x1, x1, c, b2)`, the quantity that must not depend
/// on `c` for the operator to be well defined.
pub fn wd_value<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    x1: &Element<T>,
    x2: &Element<T>,
    b1: T,
    c: T,
    b2: T,
) -> Result<Element<T>> {
    add.add(&kernel.eval(x1, x2, b1, c)?, &kernel.eval(x1, x1, c, b2)?)
}

/// `c -> wd_value(.., c, ..)` must be constant on `[b2, b1]` (grid points).
#[allow(clippy::too_many_arguments)]
fn constancy<T: Scalar>(
    s: &mut Search<T>,
    outer: usize,
    inner: &mut u64,
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    vals: &[T],
    x1: &Element<T>,
    x2: &Element<T>,
    b1: T,
    b2: T,
) -> Result<()> {
    let reference = wd_value(kernel, add, x1, x2, b1, b2, b2)?;
    for &c in vals.iter().filter(|&&c| c > b2 && c <= b1) {
        s.tick();
        *inner += 1;
        let v = wd_value(kernel, add, x1, x2, b1, c, b2)?;
        if !v.approx_eq(&reference) {
            s.offer(Search::<T>::key(outer, *inner), reference.distance(&v), || {
                Witness::new()
                    .element("x1", x1)
                    .element("x2", x2)
                    .real("b1", b1)
                    .real("b2", b2)
                    .real("c0", b2)
                    .real("c", c)
                    .element("lhs", &reference)
                    .element("rhs", &v)
            });
        }
    }
    Ok(())
}

/// Well-definedness for arity `n`.
///
/// * `n = 2`: `c -> L(x, 0, 1, c) (+) L(x, x, c, 0)` constant on `[0, 1]`.
/// * `n = 3`: `c -> L(x, 0, 1, c) (+) L(x, x, c, b)` constant on `[b, 1]`, and
///   `c -> L(x1, x2, b, c) (+) L(x1, x1, c, 0)` constant on `[0, b]` for
///   `x2 <= x1`.
/// * `n >= 4`: `c -> L(x1, x2, b1, c) (+) L(x1, x1, c, b2)` constant on
///   `[b2, b1]` for `x2 <= x1`.
///
/// The witness is the largest deviation from the value at `c = b2`.
/// Requires `add` to be cancellative on the grid.
pub fn check_wd<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    check_arity(n)?;
    let elems = sorted_grid(ord, grid)?;
    require_cancellation("wd", add, grid)?;
    let vals = grid.values::<T>();
    let zero = Element::zero(grid.carrier);
    let (one, nil) = (T::one(), T::zero());

    let run = |law: &str, body: &ItemBody<'_, T>| {
        let start = Instant::now();
        let search = try_par_search(&elems, |i, x, s| body(i, x, s))?;
        Ok::<_, Error>(LawReport::from_search(law, search, start.elapsed()))
    };

    let report = match n {
        2 => run("wd", &|i, x, s| {
            constancy(s, i, &mut 0, kernel, add, &vals, x, &zero, one, nil)
        })?,
        3 => {
            let first = run("wd-first-pair", &|i, x, s| {
                let mut inner = 0;
                for &b in &vals {
                    constancy(s, i, &mut inner, kernel, add, &vals, x, &zero, one, b)?;
                }
                Ok(())
            })?;
            let second = run("wd-last-pair", &|i, x1, s| {
                let mut inner = 0;
                for x2 in &elems[..=i] {
                    for &b in &vals {
                        constancy(s, i, &mut inner, kernel, add, &vals, x1, x2, b, nil)?;
                    }
                }
                Ok(())
            })?;
            LawReport::combine("wd", vec![first, second])
        }
        _ => {
            let pairs = grid.descending_tuples::<T>(2);
            run("wd", &|i, x1, s| {
                let mut inner = 0;
                for x2 in &elems[..=i] {
                    for p in &pairs {
                        constancy(s, i, &mut inner, kernel, add, &vals, x1, x2, p[0], p[1])?;
                    }
                }
                Ok(())
            })?
        }
    };
    Ok(report.with_n(n).with_grid(grid.m).with_note(resolution_note(grid.m)))
}

/// Scans `x -> f(x)` over consecutive elements of the sorted slice `xs`;
/// returns true at the first decrease (which is offered as the witness).
fn scan_nondecreasing<T: Scalar>(
    s: &mut Search<T>,
    ord: &AdmissibleOrder<T>,
    outer: usize,
    inner: &mut u64,
    xs: &[Element<T>],
    f: impl Fn(&Element<T>) -> Result<Element<T>>,
    params: impl Fn() -> Witness<T>,
) -> Result<bool> {
    let mut prev: Option<(&Element<T>, Element<T>)> = None;
    for x in xs {
        let v = f(x)?;
        if let Some((px, pv)) = &prev {
            s.tick();
            *inner += 1;
            if !ord.leq(pv, &v) {
                s.offer(Search::<T>::key(outer, *inner), 1.0, || {
                    params().element("x", px).element("x_hat", x).element("lhs", pv).element("rhs", &v)
                });
                return Ok(true);
            }
        }
        prev = Some((x, v));
    }
    Ok(false)
}

/// `x -> L(x, u, b1, b2) (+) L(v, x, b2, b3)` non-decreasing on `[u, v]` for
/// every chain `(b1, b2, b3)`. With `u_free = false`, `u = 0` and `[0, v]`.
#[allow(clippy::too_many_arguments)]
fn pair_condition<T: Scalar>(
    law: &str,
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    elems: &[Element<T>],
    u_free: bool,
    chains: &[[T; 3]],
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let zero = Element::zero(ord.carrier());
    let search = try_par_search(elems, |i, _, s| {
        let mut inner = 0;
        let ranges: Vec<(usize, usize)> = if u_free {
            (i..elems.len()).map(|iv| (i, iv)).collect()
        } else {
            vec![(0, i)]
        };
        for (iu, iv) in ranges {
            let u = if u_free { &elems[iu] } else { &zero };
            let v = &elems[iv];
            for &[b1, b2, b3] in chains {
                let f = |x: &Element<T>| add.add(&kernel.eval(x, u, b1, b2)?, &kernel.eval(v, x, b2, b3)?);
                let params = || Witness::new().element("u", u).element("v", v).reals("b", &[b1, b2, b3]);
                if scan_nondecreasing(s, ord, i, &mut inner, &elems[iu..=iv], f, params)? {
                    return Ok(());
                }
            }
        }
        Ok(())
    })?;
    Ok(LawReport::from_search(law, search, start.elapsed()))
}

/// `x -> L(x, u, b, 0)` non-decreasing on `[u, 1]` for every `b`.
fn last_condition<T: Scalar>(
    law: &str,
    kernel: &Kernel<T>,
    ord: &AdmissibleOrder<T>,
    elems: &[Element<T>],
    vals: &[T],
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let search = try_par_search(elems, |i, u, s| {
        let mut inner = 0;
        for &b in vals {
            let f = |x: &Element<T>| kernel.eval(x, u, b, T::zero());
            let params = || Witness::new().element("u", u).reals("b", &[b, T::zero()]);
            if scan_nondecreasing(s, ord, i, &mut inner, &elems[i..], f, params)? {
                return Ok(());
            }
        }
        Ok(())
    })?;
    Ok(LawReport::from_search(law, search, start.elapsed()))
}

/// The monotonicity characterization for arity `n`: well-definedness plus the
/// order-interval conditions
///
/// * `n = 2`: `[0, v] -> L(x, 0, 1, b) (+) L(v, x, b, 0)` and
///   `[u, 1] -> L(x, u, b, 0)`;
/// * `n = 3`: `[0, v] -> L(x, 0, 1, b1) (+) L(v, x, b1, b2)`,
///   `[u, v] -> L(x, u, b1, b2) (+) L(v, x, b2, 0)` and `[u, 1] -> L(x, u, b, 0)`;
/// * `n >= 4`: `[u, v] -> L(x, u, b1, b2) (+) L(v, x, b2, b3)` and
///   `[u, 1] -> L(x, u, b, 0)`;
///
/// all non-decreasing, over non-increasing `b` chains. Requires the strict
/// order to be compatible with `add` on the grid.
pub fn check_monotonicity<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    check_arity(n)?;
    let elems = sorted_grid(ord, grid)?;
    require_strict_compatibility("monotonicity", add, ord, grid)?;
    let wd = check_wd(kernel, add, ord, n, grid)?;
    let vals = grid.values::<T>();
    let (one, nil) = (T::one(), T::zero());
    let pairs: Vec<[T; 3]> = grid.descending_tuples::<T>(2).into_iter().map(|p| [p[0], p[1], nil]).collect();

    let mut parts = vec![wd];
    match n {
        2 => {
            let chains: Vec<[T; 3]> = vals.iter().map(|&b| [one, b, nil]).collect();
            parts.push(pair_condition("cond-b", kernel, add, ord, &elems, false, &chains)?);
            parts.push(last_condition("cond-c", kernel, ord, &elems, &vals)?);
        }
        3 => {
            let leading: Vec<[T; 3]> = pairs.iter().map(|p| [one, p[0], p[1]]).collect();
            parts.push(pair_condition("cond-b", kernel, add, ord, &elems, false, &leading)?);
            parts.push(pair_condition("cond-c", kernel, add, ord, &elems, true, &pairs)?);
            parts.push(last_condition("cond-d", kernel, ord, &elems, &vals)?);
        }
        _ => {
            let triples: Vec<[T; 3]> = grid
                .descending_tuples::<T>(3)
                .into_iter()
                .map(|t| [t[0], t[1], t[2]])
                .collect();
            parts.push(pair_condition("cond-b", kernel, add, ord, &elems, true, &triples)?);
            parts.push(last_condition("cond-c", kernel, ord, &elems, &vals)?);
        }
    }
    Ok(LawReport::combine("monotonicity", parts)
        .with_n(n)
        .with_grid(grid.m)
        .with_note(resolution_note(grid.m)))
}

/// `(+)_i L(x_i, x_{i-1}, b_i, b_{i+1})` for a constant-like input where the
/// first previous element is `first_prev` and the rest are `prev`.
fn boundary_sum<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    x: &Element<T>,
    first_prev: &Element<T>,
    chain: &[T],
) -> Result<Element<T>> {
    let mut acc = kernel.eval(x, first_prev, chain[0], chain[1])?;
    for w in chain[1..].windows(2) {
        acc = add.add(&acc, &kernel.eval(x, x, w[0], w[1])?)?;
    }
    Ok(acc)
}

fn boundary_check<T: Scalar>(
    law: &str,
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    x: &Element<T>,
    n: usize,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let zero = Element::zero(grid.carrier);
    let chains = grid.pinned_chains::<T>(n);
    let mut s = Search::new();
    for (k, chain) in chains.iter().enumerate() {
        s.tick();
        let v = boundary_sum(kernel, add, x, &zero, chain)?;
        if !v.approx_eq(x) {
            s.offer(k as u64, v.distance(x), || {
                Witness::new().reals("b", chain).element("lhs", &v).element("rhs", x)
            });
        }
    }
    Ok(LawReport::from_search(law, s, start.elapsed()))
}

/// Aggregation-function characterization: the monotonicity conditions plus
///
/// * `(+)_i L(0, 0, b_i, b_{i+1}) = 0` and
/// * `L(1, 0, b_1, b_2) (+) (+)_{i >= 2} L(1, 1, b_i, b_{i+1}) = 1`
///
/// over every grid chain `1 = b_1 >= ... >= b_{n+1} = 0`.
pub fn check_aggregation<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    let mono = check_monotonicity(kernel, add, ord, n, grid)?;
    let zero = Element::zero(grid.carrier);
    let one = Element::one(grid.carrier);
    let low = boundary_check("boundary-zero", kernel, add, &zero, n, grid)?;
    let high = boundary_check("boundary-one", kernel, add, &one, n, grid)?;
    Ok(LawReport::combine("aggregation", vec![mono, low, high])
        .with_n(n)
        .with_grid(grid.m)
        .with_note(resolution_note(grid.m)))
}

/// `delta(b1, b2) = delta(b1, 0) - delta(b2, 0)` for grid pairs `b2 <= b1`.
/// The witness is the pair with the largest discrepancy.
pub fn check_delta_decomposition<T: Scalar>(delta: &DeltaFn<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    let start = Instant::now();
    let mut s = Search::new();
    for (k, p) in grid.descending_tuples::<T>(2).iter().enumerate() {
        let (b1, b2) = (p[0], p[1]);
        s.tick();
        let lhs = delta(b1, b2);
        let rhs = delta(b1, T::zero()) - delta(b2, T::zero());
        if !crate::scalar::approx_eq(lhs, rhs) {
            s.offer(k as u64, (lhs - rhs).abs().to_f64(), || {
                Witness::new().real("b1", b1).real("b2", b2).real("lhs", lhs).real("rhs", rhs)
            });
        }
    }
    Ok(LawReport::from_search("delta-decomposition", s, start.elapsed())
        .with_grid(grid.m)
        .with_note(resolution_note(grid.m)))
}

/// `F(x, a) (+) F(x, b) = F(x, (a+b)/2) (+) F(x, (a+b)/2)` for grid `x` and
/// grid pairs `a, b` whose midpoint is on the grid. The witness is the largest
/// discrepancy.
pub fn check_jensen_f<T: Scalar>(f: &FFn<T>, add: &AdditionOp<T>, grid: &GridSpec) -> Result<LawReport<T>> {
    let start = Instant::now();
    let elems = grid.elements::<T>();
    let m = grid.m;
    let search = try_par_search(&elems, |i, x, s| {
        let mut inner = 0;
        for ja in 0..=m {
            for jb in (0..=m).filter(|jb| (ja + jb) % 2 == 0) {
                s.tick();
                inner += 1;
                let (a, b) = (grid.value::<T>(ja), grid.value::<T>(jb));
                let mid = grid.value::<T>((ja + jb) / 2);
                let lhs = add.add(&f(x, a)?, &f(x, b)?)?;
                let fm = f(x, mid)?;
                let rhs = add.add(&fm, &fm)?;
                if !lhs.approx_eq(&rhs) {
                    s.offer(Search::<T>::key(i, inner), lhs.distance(&rhs), || {
                        Witness::new()
                            .element("x", x)
                            .real("a", a)
                            .real("b", b)
                            .element("lhs", &lhs)
                            .element("rhs", &rhs)
                    });
                }
            }
        }
        Ok(())
    })?;
    Ok(LawReport::from_search("jensen", search, start.elapsed())
        .with_grid(m)
        .with_note(resolution_note(m)))
}

/// The F-conditions: Jensen, `x -> F(x, b)` non-decreasing, `F(0, b) = 0`, and
/// `(+)_i F(1, b_i) = 1` whenever `sum b_i = 1` (`n` terms).
pub fn check_f_conditions<T: Scalar>(
    f: &FFn<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
) -> Result<LawReport<T>> {
    check_arity(n)?;
    let elems = sorted_grid(ord, grid)?;
    let jensen = check_jensen_f(f, add, grid)?;
    let vals = grid.values::<T>();

    let start = Instant::now();
    let mut s = Search::new();
    let mut inner = 0;
    for (k, &b) in vals.iter().enumerate() {
        let params = || Witness::new().real("b", b);
        if scan_nondecreasing(&mut s, ord, k, &mut inner, &elems, |x| f(x, b), params)? {
            break;
        }
    }
    let monotone = LawReport::from_search("monotone-in-x", s, start.elapsed());

    let start = Instant::now();
    let zero = Element::zero(grid.carrier);
    let mut s = Search::new();
    for (k, &b) in vals.iter().enumerate() {
        s.tick();
        let v = f(&zero, b)?;
        if !v.approx_eq(&zero) {
            s.offer(k as u64, v.distance(&zero), || {
                Witness::new().real("b", b).element("lhs", &v).element("rhs", &zero)
            });
        }
    }
    let at_zero = LawReport::from_search("zero", s, start.elapsed());

    let start = Instant::now();
    let one = Element::one(grid.carrier);
    let mut s = Search::new();
    for (k, bs) in grid.compositions::<T>(n).iter().enumerate() {
        s.tick();
        let terms = bs.iter().map(|&b| f(&one, b)).collect::<Result<Vec<_>>>()?;
        let v = add.fold(&terms)?;
        if !v.approx_eq(&one) {
            s.offer(k as u64, v.distance(&one), || {
                Witness::new().reals("b", bs).element("lhs", &v).element("rhs", &one)
            });
        }
    }
    let at_one = LawReport::from_search("one", s, start.elapsed());

    Ok(LawReport::combine("f-conditions", vec![jensen, monotone, at_zero, at_one])
        .with_n(n)
        .with_grid(grid.m)
        .with_note(resolution_note(grid.m)))
}

// ---------------------------------------------------------------------------
// Operator-level oracles.

/// Fixed capacities: cardinality, every Dirac, every `top(k)`, and one random
/// capacity per seed.
pub fn capacity_family<T: Scalar>(n: usize, seeds: &[u64]) -> Result<Vec<Capacity<T>>> {
    let mut out = vec![Capacity::cardinality(n)?];
    for i in 1..=n {
        out.push(Capacity::dirac(n, i)?);
    }
    for k in 1..=n {
        out.push(Capacity::top(n, k)?);
    }
    for &seed in seeds {
        out.push(Capacity::random(n, seed)?);
    }
    Ok(out)
}

/// Every monotone assignment of grid values `{0, 1/m, ..., 1}` to the subsets
/// `masks`, extended to a capacity by `mu(A) = max { mu(S) : S in masks, S ⊆ A }`.
pub fn grid_capacities<T: Scalar>(n: usize, masks: &[usize], m: u32) -> Vec<Capacity<T>> {
    let full = (1usize << n) - 1;
    let mut ms: Vec<usize> = masks.iter().copied().filter(|&a| a != 0 && a != full).collect();
    ms.sort_by_key(|&a| (a.count_ones(), a));
    ms.dedup();
    // Proper subsets of each mask among the earlier ones.
    let below: Vec<Vec<usize>> = (0..ms.len())
        .map(|k| (0..k).filter(|&j| ms[j] & ms[k] == ms[j]).collect())
        .collect();

    fn rec<T: Scalar>(
        k: usize,
        n: usize,
        m: u32,
        ms: &[usize],
        below: &[Vec<usize>],
        assign: &mut Vec<u32>,
        out: &mut Vec<Capacity<T>>,
    ) {
        if k == ms.len() {
            let full = (1usize << n) - 1;
            let values = (0..=full)
                .map(|a| {
                    if a == full {
                        return T::one();
                    }
                    let j = ms
                        .iter()
                        .zip(assign.iter())
                        .filter(|(&s, _)| s & a == s)
                        .map(|(_, &v)| v)
                        .max()
                        .unwrap_or(0);
                    T::from_ratio(j as i64, m as i64)
                })
                .collect();
            out.push(Capacity::from_raw(n, values));
            return;
        }
        let lo = below[k].iter().map(|&j| assign[j]).max().unwrap_or(0);
        for v in lo..=m {
            assign.push(v);
            rec(k + 1, n, m, ms, below, assign, out);
            assign.pop();
        }
    }

    let mut out = Vec::new();
    rec(0, n, m, &ms, &below, &mut Vec::with_capacity(ms.len()), &mut out);
    out
}

/// Masks of `B_sigma(i)`, `i = 2..n`.
fn tail_masks(sigma: &[usize]) -> impl Iterator<Item = usize> + '_ {
    (1..sigma.len()).map(move |i| sigma[i..].iter().fold(0usize, |acc, &s| acc | 1 << s))
}

fn all_tuples(len: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..len).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

fn permutations_of<T: Scalar>(xs: &[Element<T>], ord: &AdmissibleOrder<T>) -> Vec<Vec<usize>> {
    let groups = TieGroups::new(xs, ord);
    if groups.count() > MATERIALIZE_LIMIT as u128 {
        sample_admissible(xs, ord, SAMPLE_COUNT, SAMPLE_SEED)
    } else {
        groups.iter().collect()
    }
}

/// Everything an oracle needs besides the kernel.
struct OracleSetup<T> {
    elems: Vec<Element<T>>,
    family: Vec<Capacity<T>>,
    tuples: Vec<Vec<usize>>,
}

impl<T: Scalar> OracleSetup<T> {
    fn new(ord: &AdmissibleOrder<T>, n: usize, grid: &GridSpec, seeds: &[u64]) -> Result<Self> {
        check_arity(n)?;
        let elems = sorted_grid(ord, grid)?;
        let tuples = all_tuples(elems.len(), n);
        Ok(OracleSetup {
            family: capacity_family(n, seeds)?,
            elems,
            tuples,
        })
    }

    fn inputs(&self, t: &[usize]) -> Vec<Element<T>> {
        t.iter().map(|&j| self.elems[j].clone()).collect()
    }
}

fn oracle_witness<T: Scalar>(
    xs: &[Element<T>],
    zs: &[Element<T>],
    mu: &Capacity<T>,
    sigma: &[usize],
    tau: &[usize],
    lhs: &Element<T>,
    rhs: &Element<T>,
) -> Witness<T> {
    Witness::new()
        .elements("X", xs)
        .elements("Z", zs)
        .capacity("mu", mu)
        .permutation("sigma", sigma)
        .permutation("tau", tau)
        .element("lhs", lhs)
        .element("rhs", rhs)
}

fn wd_oracle_with<T: Scalar>(
    setup: &OracleSetup<T>,
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    m: u32,
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let search = try_par_search(&setup.tuples, |i, t, s| {
        let xs = setup.inputs(t);
        let perms = permutations_of(&xs, ord);
        let first = &perms[0];
        let mut inner = 0;
        if perms.len() == 1 {
            s.tick();
        }
        for tau in &perms[1..] {
            let masks: Vec<usize> = tail_masks(first).chain(tail_masks(tau)).collect();
            let caps = grid_capacities::<T>(n, &masks, m);
            for mu in caps.iter().chain(&setup.family) {
                s.tick();
                inner += 1;
                let a = choquet_sum(&xs, mu, add, kernel, first)?;
                let b = choquet_sum(&xs, mu, add, kernel, tau)?;
                if !a.approx_eq(&b) {
                    s.offer(Search::<T>::key(i, inner), 1.0, || oracle_witness(&xs, &xs, mu, first, tau, &a, &b));
                    return Ok(());
                }
            }
        }
        Ok(())
    })?;
    Ok(LawReport::from_search("wd-oracle", search, start.elapsed())
        .with_n(n)
        .with_grid(m)
        .with_note(FAMILY_NOTE))
}

/// Brute-force well-definedness: every grid input `X`, every admissible
/// `tau` compared with the first admissible `sigma`, every capacity in the
/// oracle family.
pub fn wd_oracle<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
    seeds: &[u64],
) -> Result<LawReport<T>> {
    let setup = OracleSetup::new(ord, n, grid, seeds)?;
    wd_oracle_with(&setup, kernel, add, ord, n, grid.m)
}

fn monotonicity_oracle_with<T: Scalar>(
    setup: &OracleSetup<T>,
    wd: LawReport<T>,
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    m: u32,
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let last = setup.elems.len() - 1;
    // Under well-definedness any admissible permutation gives the operator
    // value, and increasing one coordinate to its grid successor generates
    // every pair X <= Z by transitivity.
    let search = try_par_search(&setup.tuples, |i, t, s| {
        if wd.failed() {
            return Ok(());
        }
        let xs = setup.inputs(t);
        let sigma = TieGroups::new(&xs, ord).first();
        let mut inner = 0;
        for coord in (0..n).filter(|&c| t[c] < last) {
            let mut zt = t.clone();
            zt[coord] += 1;
            let zs = setup.inputs(&zt);
            let tau = TieGroups::new(&zs, ord).first();
            let masks: Vec<usize> = tail_masks(&sigma).chain(tail_masks(&tau)).collect();
            let caps = grid_capacities::<T>(n, &masks, m);
            for mu in caps.iter().chain(&setup.family) {
                s.tick();
                inner += 1;
                let a = choquet_sum(&xs, mu, add, kernel, &sigma)?;
                let b = choquet_sum(&zs, mu, add, kernel, &tau)?;
                if !ord.leq(&a, &b) {
                    s.offer(Search::<T>::key(i, inner), 1.0, || {
                        oracle_witness(&xs, &zs, mu, &sigma, &tau, &a, &b)
                    });
                    return Ok(());
                }
            }
        }
        Ok(())
    })?;
    let steps = LawReport::from_search("step-oracle", search, start.elapsed());
    Ok(LawReport::combine("monotonicity-oracle", vec![wd, steps])
        .with_n(n)
        .with_grid(m)
        .with_note(FAMILY_NOTE))
}

/// Brute-force condition (M): `C_sigma(X, mu) <= C_tau(Z, mu)` for grid pairs
/// `X <= Z` (componentwise), every admissible `sigma`, `tau`, and every
/// capacity in the oracle family.
pub fn monotonicity_oracle<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
    seeds: &[u64],
) -> Result<LawReport<T>> {
    let setup = OracleSetup::new(ord, n, grid, seeds)?;
    let wd = wd_oracle_with(&setup, kernel, add, ord, n, grid.m)?;
    monotonicity_oracle_with(&setup, wd, kernel, add, ord, n, grid.m)
}

fn boundary_oracle<T: Scalar>(
    law: &str,
    setup: &OracleSetup<T>,
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    x: &Element<T>,
    n: usize,
    m: u32,
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let xs = vec![x.clone(); n];
    let sigma: Vec<usize> = (0..n).collect();
    let masks: Vec<usize> = tail_masks(&sigma).collect();
    let caps = grid_capacities::<T>(n, &masks, m);
    let mut s = Search::new();
    for (k, mu) in caps.iter().chain(&setup.family).enumerate() {
        s.tick();
        let v = choquet_sum(&xs, mu, add, kernel, &sigma)?;
        if !v.approx_eq(x) {
            s.offer(k as u64, 1.0, || oracle_witness(&xs, &xs, mu, &sigma, &sigma, &v, x));
            break;
        }
    }
    Ok(LawReport::from_search(law, s, start.elapsed()))
}

/// Brute-force aggregation-function check: condition (M) plus
/// `C(0, ..., 0) = 0` and `C(1, ..., 1) = 1` for every capacity in the family.
pub fn aggregation_oracle<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
    seeds: &[u64],
) -> Result<LawReport<T>> {
    let setup = OracleSetup::new(ord, n, grid, seeds)?;
    let wd = wd_oracle_with(&setup, kernel, add, ord, n, grid.m)?;
    let mono = monotonicity_oracle_with(&setup, wd, kernel, add, ord, n, grid.m)?;
    let zero = Element::zero(grid.carrier);
    let one = Element::one(grid.carrier);
    let low = boundary_oracle("boundary-zero-oracle", &setup, kernel, add, &zero, n, grid.m)?;
    let high = boundary_oracle("boundary-one-oracle", &setup, kernel, add, &one, n, grid.m)?;
    Ok(LawReport::combine("aggregation-oracle", vec![mono, low, high])
        .with_n(n)
        .with_grid(grid.m)
        .with_note(FAMILY_NOTE))
}

fn agree<T: Scalar>(law: &str, conditions: &LawReport<T>, oracle: &LawReport<T>) -> Result<()> {
    if conditions.verdict != oracle.verdict {
        return Err(Error::OracleDisagreement {
            law: law.into(),
            conditions: conditions.verdict.as_str().into(),
            oracle: oracle.verdict.as_str().into(),
        });
    }
    Ok(())
}

/// What [`oracle_crosscheck`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossScope {
    /// Well-definedness only (needs cancellation).
    Wd,
    /// Well-definedness and monotonicity (needs strict compatibility).
    Monotonicity,
    /// Additionally the aggregation boundary conditions.
    Aggregation,
}

/// Runs the condition-level checks and the brute-force oracles and demands
/// identical verdicts. A disagreement is returned as
/// [`Error::OracleDisagreement`]; otherwise the report passes and lists both
/// sides as parts.
pub fn oracle_crosscheck<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
    scope: CrossScope,
) -> Result<LawReport<T>> {
    oracle_crosscheck_seeded(kernel, add, ord, n, grid, scope, &DEFAULT_SEEDS)
}

/// [`oracle_crosscheck`] with explicit random-capacity seeds.
pub fn oracle_crosscheck_seeded<T: Scalar>(
    kernel: &Kernel<T>,
    add: &AdditionOp<T>,
    ord: &AdmissibleOrder<T>,
    n: usize,
    grid: &GridSpec,
    scope: CrossScope,
    seeds: &[u64],
) -> Result<LawReport<T>> {
    let start = Instant::now();
    let setup = OracleSetup::new(ord, n, grid, seeds)?;
    let mut parts = Vec::new();
    let mut notes = Vec::new();

    let wd = check_wd(kernel, add, ord, n, grid)?;
    let wd_o = wd_oracle_with(&setup, kernel, add, ord, n, grid.m)?;
    agree("wd", &wd, &wd_o)?;
    notes.push(format!("wd: {}", wd.verdict.as_str()));

    if scope == CrossScope::Wd {
        parts.extend([wd, wd_o]);
    } else {
        let mono = check_monotonicity(kernel, add, ord, n, grid)?;
        let mono_o = monotonicity_oracle_with(&setup, wd_o, kernel, add, ord, n, grid.m)?;
        agree("monotonicity", &mono, &mono_o)?;
        notes.push(format!("monotonicity: {}", mono.verdict.as_str()));
        if scope == CrossScope::Aggregation {
            let zero = Element::zero(grid.carrier);
            let one = Element::one(grid.carrier);
            let low = boundary_check("boundary-zero", kernel, add, &zero, n, grid)?;
            let low_o = boundary_oracle("boundary-zero-oracle", &setup, kernel, add, &zero, n, grid.m)?;
            agree("boundary-zero", &low, &low_o)?;
            let high = boundary_check("boundary-one", kernel, add, &one, n, grid)?;
            let high_o = boundary_oracle("boundary-one-oracle", &setup, kernel, add, &one, n, grid.m)?;
            agree("boundary-one", &high, &high_o)?;
            let agg = LawReport::combine("aggregation", vec![mono, low, high]);
            let agg_o = LawReport::combine("aggregation-oracle", vec![mono_o, low_o, high_o]);
            notes.push(format!("aggregation: {}", agg.verdict.as_str()));
            parts.extend([agg, agg_o]);
        } else {
            parts.extend([mono, mono_o]);
        }
    }

    let checked = parts.iter().map(|p| p.checked).sum();
    let mut report = LawReport::from_search("oracle-crosscheck", Search::new(), start.elapsed());
    report.checked = checked;
    report.parts = parts;
    report.notes = notes;
    report.notes.push(FAMILY_NOTE.into());
    Ok(report.with_n(n).with_grid(grid.m))
}

#[cfg(test)]
mod tests;
