//! The Choquet-like operator
//! `C(X, mu) = (+)_i L(x_sigma(i), x_sigma(i-1), mu(B_sigma(i)), mu(B_sigma(i+1)))`
//! along an admissible permutation, with `x_sigma(0) = 0` and
//! `B_sigma(n+1) = {}`.

pub mod catalog;
pub mod kernel;
pub mod permutations;

use rayon::prelude::*;

use crate::algebra::AdditionOp;
use crate::capacity::Capacity;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::order::AdmissibleOrder;
use crate::scalar::Scalar;

pub use catalog::{builtin, KernelRegistry, BUILTIN_NAMES};
pub use kernel::{Arity, Kernel, KernelForm, Provenance};
pub use permutations::{
    admissible_permutations, is_admissible, sample_admissible, TieGroups, MATERIALIZE_LIMIT,
};

/// Number of permutations checked when `Pi_X` is too large to list.
pub const SAMPLE_COUNT: usize = 1_000;
/// Seed of the sampled consistency sweep.
pub const SAMPLE_SEED: u64 = 0x5eed;

/// Inputs, capacity, order and addition for one aggregation.
#[derive(Clone)]
pub struct AggregationInput<T> {
    pub xs: Vec<Element<T>>,
    pub mu: Capacity<T>,
    pub ord: AdmissibleOrder<T>,
    pub add: AdditionOp<T>,
}

impl<T: Scalar> AggregationInput<T> {
    pub fn new(xs: Vec<Element<T>>, mu: Capacity<T>, ord: AdmissibleOrder<T>, add: AdditionOp<T>) -> Result<Self> {
        let input = AggregationInput { xs, mu, ord, add };
        input.validate()?;
        Ok(input)
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.xs.len() < 2 {
            return Err(Error::BadParameter(format!("need n >= 2 inputs, got {}", self.xs.len())));
        }
        if self.mu.n() != self.xs.len() {
            return Err(Error::BadParameter(format!(
                "{} inputs but the capacity is on {} elements",
                self.xs.len(),
                self.mu.n()
            )));
        }
        let carrier = self.ord.carrier();
        for x in &self.xs {
            x.validate()?;
            if x.carrier() != carrier {
                return Err(Error::KindMismatch {
                    expected: carrier,
                    found: x.carrier(),
                });
            }
        }
        if !self.add.supports(carrier) {
            return Err(Error::UnknownOp(format!("{} is not defined on {carrier}", self.add.name())));
        }
        Ok(())
    }
}

/// One operator value; the sum may leave K.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    pub value: Element<T>,
    pub in_k: bool,
}

/// The sum along `sigma` (zero-based) without the admissibility check.
pub fn choquet_sum<T: Scalar>(
    xs: &[Element<T>],
    mu: &Capacity<T>,
    add: &AdditionOp<T>,
    kernel: &Kernel<T>,
    sigma: &[usize],
) -> Result<Element<T>> {
    let b = mu.tail_values(sigma);
    let zero = Element::zero(xs[sigma[0]].carrier());
    let mut acc: Option<Element<T>> = None;
    for i in 0..sigma.len() {
        let prev = if i == 0 { &zero } else { &xs[sigma[i - 1]] };
        let term = kernel.eval(&xs[sigma[i]], prev, b[i], b[i + 1])?;
        acc = Some(match acc {
            None => term,
            Some(a) => add.add(&a, &term)?,
        });
    }
    acc.ok_or_else(|| Error::BadParameter("empty input".into()))
}

/// `C_sigma(X, mu)` for an admissible `sigma` (zero-based).
pub fn choquet_eval<T: Scalar>(
    input: &AggregationInput<T>,
    kernel: &Kernel<T>,
    sigma: &[usize],
) -> Result<Evaluation<T>> {
    input.validate()?;
    if !is_admissible(&input.xs, &input.ord, sigma) {
        return Err(Error::NotAdmissiblePermutation(
            sigma.iter().map(|s| s + 1).collect(),
        ));
    }
    let value = choquet_sum(&input.xs, &input.mu, &input.add, kernel, sigma)?;
    Ok(Evaluation {
        in_k: value.in_unit(),
        value,
    })
}

/// Two admissible permutations with different operator values.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy<T> {
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub value_sigma: Element<T>,
    pub value_tau: Element<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate<T> {
    /// Value along the lexicographically first admissible permutation.
    pub value: Element<T>,
    pub in_k: bool,
    /// All checked permutations gave the same value.
    pub consistent: bool,
    /// `|Pi_X|`.
    pub permutations: u128,
    /// Whether only a sample of `Pi_X` was checked.
    pub sampled: bool,
    pub discrepancy: Option<Discrepancy<T>>,
}

/// Evaluates every admissible permutation (or a deterministic sample of
/// [`SAMPLE_COUNT`] when there are too many) and reports consistency.
pub fn choquet_aggregate<T: Scalar>(input: &AggregationInput<T>, kernel: &Kernel<T>) -> Result<Aggregate<T>> {
    input.validate()?;
    let groups = TieGroups::new(&input.xs, &input.ord);
    let count = groups.count();
    let first = groups.first();
    let value = choquet_sum(&input.xs, &input.mu, &input.add, kernel, &first)?;
    let mut out = Aggregate {
        in_k: value.in_unit(),
        value,
        consistent: true,
        permutations: count,
        sampled: false,
        discrepancy: None,
    };
    if count == 1 {
        return Ok(out);
    }
    let perms: Vec<Vec<usize>> = if count > MATERIALIZE_LIMIT as u128 {
        out.sampled = true;
        sample_admissible(&input.xs, &input.ord, SAMPLE_COUNT, SAMPLE_SEED)
    } else {
        groups.iter().collect()
    };
    // Index of the first permutation that disagrees with the first one.
    let found = perms
        .par_iter()
        .enumerate()
        .skip(1)
        .map(|(i, p)| -> Result<Option<(usize, Element<T>)>> {
            let v = choquet_sum(&input.xs, &input.mu, &input.add, kernel, p)?;
            Ok((!v.approx_eq(&out.value)).then_some((i, v)))
        })
        .try_reduce(
            || None,
            |a, b| {
                Ok(match (a, b) {
                    (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
                    (a, b) => a.or(b),
                })
            },
        )?;
    if let Some((i, v)) = found {
        out.consistent = false;
        out.discrepancy = Some(Discrepancy {
            sigma: first,
            tau: perms[i].clone(),
            value_sigma: out.value.clone(),
            value_tau: v,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiplicationOp;
    use crate::element::Carrier;

    fn scalars(v: &[f64]) -> Vec<Element<f64>> {
        v.iter().map(|&x| Element::Scalar(x)).collect()
    }

    fn scalar_input(xs: &[f64], mu: Capacity<f64>) -> AggregationInput<f64> {
        AggregationInput::new(scalars(xs), mu, AdmissibleOrder::ScalarUsual, AdditionOp::Standard).unwrap()
    }

    #[test]
    fn worked_classical_instance() {
        let ord = AdmissibleOrder::ScalarUsual;
        let k = builtin("choquet", &ord).unwrap();
        let input = scalar_input(&[0.2, 0.5, 0.9], Capacity::cardinality(3).unwrap());
        let e = choquet_eval(&input, &k, &[0, 1, 2]).unwrap();
        assert!((e.value.component_vec()[0] - 8.0 / 15.0).abs() < 1e-12);
        assert!(e.in_k);
        assert!(matches!(
            choquet_eval(&input, &k, &[1, 0, 2]),
            Err(Error::NotAdmissiblePermutation(_))
        ));
    }

    #[test]
    fn interval_two_term_instance() {
        let ord = AdmissibleOrder::xu_yager();
        let k = builtin("choquet", &ord).unwrap();
        let mu = Capacity::from_partial_table(2, &[(vec![1], 0.0), (vec![2], 0.5)]).unwrap();
        let xs = vec![Element::Interval(0.2, 0.4), Element::Interval(0.5, 0.7)];
        let input = AggregationInput::new(xs, mu, ord, AdditionOp::Interval).unwrap();
        let agg = choquet_aggregate(&input, &k).unwrap();
        assert!(agg.value.approx_eq(&Element::Interval(0.35, 0.55)));
        assert!(agg.consistent);
    }

    #[test]
    fn wd_violation_is_reported_not_thrown() {
        let ord = AdmissibleOrder::ScalarUsual;
        let k = builtin("b1-scale", &ord).unwrap();
        let mu = Capacity::from_partial_table(2, &[(vec![1], 0.2), (vec![2], 0.7)]).unwrap();
        let agg = choquet_aggregate(&scalar_input(&[0.5, 0.5], mu), &k).unwrap();
        assert!(!agg.consistent);
        let d = agg.discrepancy.unwrap();
        assert_eq!(d.sigma, vec![0, 1]);
        assert_eq!(d.tau, vec![1, 0]);
        assert!(d.value_sigma.approx_eq(&Element::Scalar(0.5 + 0.7 * 0.5)));
        assert!(d.value_tau.approx_eq(&Element::Scalar(0.5 + 0.2 * 0.5)));
    }

    #[test]
    fn large_tie_sets_are_sampled() {
        let ord = AdmissibleOrder::ScalarUsual;
        let k = builtin("choquet", &ord).unwrap();
        let agg = choquet_aggregate(&scalar_input(&[0.25; 8], Capacity::random(8, 3).unwrap()), &k).unwrap();
        assert!(agg.sampled);
        assert_eq!(agg.permutations, 40320);
        assert!(agg.consistent);
        assert!(agg.value.approx_eq(&Element::Scalar(0.25)));
    }

    #[test]
    fn input_validation() {
        let mu = Capacity::<f64>::cardinality(3).unwrap();
        let bad = AggregationInput::new(scalars(&[0.1, 0.2]), mu, AdmissibleOrder::ScalarUsual, AdditionOp::Standard);
        assert!(bad.is_err());
        let mixed = AggregationInput::new(
            vec![Element::Scalar(0.1), Element::Interval(0.1, 0.2)],
            Capacity::cardinality(2).unwrap(),
            AdmissibleOrder::ScalarUsual,
            AdditionOp::Standard,
        );
        assert!(matches!(mixed, Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn exact_scalars_are_exact() {
        use crate::scalar::Exact;
        let ord = AdmissibleOrder::<Exact>::ScalarUsual;
        let k = Kernel::delta_scale("difference", |a: Exact, b: Exact| a - b, MultiplicationOp::Times);
        let xs = [(1, 5), (1, 2), (9, 10)]
            .iter()
            .map(|&(p, q)| Element::Scalar(Exact::new(p, q)))
            .collect();
        let input = AggregationInput::new(xs, Capacity::cardinality(3).unwrap(), ord, AdditionOp::Standard).unwrap();
        let agg = choquet_aggregate(&input, &k).unwrap();
        assert_eq!(agg.value, Element::Scalar(Exact::new(8, 15)));
        assert_eq!(agg.value.carrier(), Carrier::Scalar);
    }
}
