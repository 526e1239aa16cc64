use super::*;
use crate::element::Carrier;
use crate::operator::{builtin, choquet_aggregate, choquet_eval, AggregationInput};

fn scalar_grid(m: u32) -> GridSpec {
    GridSpec::new(Carrier::Scalar, m).unwrap()
}

fn scalar_setup(name: &str) -> (Kernel<f64>, AdditionOp<f64>, AdmissibleOrder<f64>) {
    let ord = AdmissibleOrder::ScalarUsual;
    (builtin(name, &ord).unwrap(), AdditionOp::Standard, ord)
}

#[test]
fn wd_passes_for_good_kernels() {
    for name in ["choquet", "dg-abs", "half-mixture", "zero"] {
        let (k, add, ord) = scalar_setup(name);
        for n in 2..=4 {
            let r = check_wd(&k, &add, &ord, n, &scalar_grid(4)).unwrap();
            assert!(r.passed(), "{name} n={n}");
            assert!(r.checked > 0);
        }
    }
}

#[test]
fn wd_witness_for_b1_scale() {
    let (k, add, ord) = scalar_setup("b1-scale");
    let r = check_wd(&k, &add, &ord, 2, &scalar_grid(4)).unwrap();
    assert!(r.failed());
    let w = r.witness.as_ref().unwrap();
    assert_eq!(w.get_element("x1"), Some(&Element::Scalar(1.0)));
    assert_eq!(w.get_real("c0"), Some(0.0));
    assert_eq!(w.get_real("c"), Some(1.0));
    // Replay both sides.
    let x = w.get_element("x1").unwrap();
    let zero = Element::zero(Carrier::Scalar);
    let lhs = wd_value(&k, &add, x, &zero, 1.0, 0.0, 0.0).unwrap();
    let rhs = wd_value(&k, &add, x, &zero, 1.0, 1.0, 0.0).unwrap();
    assert!(!lhs.approx_eq(&rhs));
    assert_eq!(&lhs, w.get_element("lhs").unwrap());
}

#[test]
fn wd_requires_cancellation() {
    let (k, _, ord) = scalar_setup("choquet");
    let e = check_wd(&k, &AdditionOp::Min, &ord, 2, &scalar_grid(4)).unwrap_err();
    assert!(matches!(e, Error::HypothesisViolated { .. }));
}

#[test]
fn monotonicity_examples() {
    let ord = AdmissibleOrder::<f64>::xu_yager();
    let k = builtin("choquet", &ord).unwrap();
    let grid = GridSpec::new(Carrier::Interval, 2).unwrap();
    assert!(check_monotonicity(&k, &AdditionOp::Interval, &ord, 3, &grid).unwrap().passed());

    let (k, add, ord) = scalar_setup("dg-sq");
    let r = check_monotonicity(&k, &add, &ord, 3, &scalar_grid(4)).unwrap();
    assert!(r.failed());
    assert_ne!(r.failing_part(), Some("wd"));

    let (k, add, ord) = scalar_setup("zero");
    assert!(check_monotonicity(&k, &add, &ord, 3, &scalar_grid(4)).unwrap().passed());
    let agg = check_aggregation(&k, &add, &ord, 3, &scalar_grid(4)).unwrap();
    assert_eq!(agg.failing_part(), Some("boundary-one"));
}

#[test]
fn monotonicity_requires_strict_compatibility() {
    let (k, _, ord) = scalar_setup("choquet");
    let e = check_monotonicity(&k, &AdditionOp::BoundedSum, &ord, 2, &scalar_grid(4)).unwrap_err();
    assert!(matches!(e, Error::HypothesisViolated { .. }));
}

#[test]
fn aggregation_examples() {
    let (k, add, ord) = scalar_setup("choquet");
    assert!(check_aggregation(&k, &add, &ord, 3, &scalar_grid(4)).unwrap().passed());
    let (k, add, ord) = scalar_setup("delta-sq");
    assert!(check_aggregation(&k, &add, &ord, 3, &scalar_grid(4)).unwrap().failed());
}

#[test]
fn delta_decomposition_examples() {
    let grid = scalar_grid(8);
    let diff = |a: f64, b: f64| a - b;
    assert!(check_delta_decomposition(&diff, &grid).unwrap().passed());

    let sq = |a: f64, b: f64| (a - b) * (a - b);
    let r = check_delta_decomposition(&sq, &grid).unwrap();
    let w = r.witness.unwrap();
    assert_eq!((w.get_real("b1"), w.get_real("b2")), (Some(1.0), Some(0.5)));
    assert_eq!((w.get_real("lhs"), w.get_real("rhs")), (Some(0.25), Some(0.75)));

    let clipped = |a: f64, b: f64| (2.0 * (a - b).abs()).min(1.0);
    let w = check_delta_decomposition(&clipped, &grid).unwrap().witness.unwrap();
    assert_eq!((w.get_real("b1"), w.get_real("b2")), (Some(1.0), Some(0.5)));
    assert_eq!((w.get_real("lhs"), w.get_real("rhs")), (Some(1.0), Some(0.0)));
}

#[test]
fn jensen_examples() {
    let ord = AdmissibleOrder::ScalarUsual;
    let grid = scalar_grid(8);
    let k = builtin("a2x", &ord).unwrap();
    let r = check_jensen_f(k.f_payload().unwrap(), &AdditionOp::Standard, &grid).unwrap();
    let w = r.witness.unwrap();
    assert_eq!(w.get_element("x"), Some(&Element::Scalar(1.0)));
    assert_eq!((w.get_real("a"), w.get_real("b")), (Some(0.0), Some(1.0)));
    assert_eq!(w.get_element("lhs"), Some(&Element::Scalar(1.0)));
    assert_eq!(w.get_element("rhs"), Some(&Element::Scalar(0.5)));

    let zero = |x: &Element<f64>, _: f64| Ok(Element::zero(x.carrier()));
    assert!(check_jensen_f(&zero, &AdditionOp::Standard, &grid).unwrap().passed());
    let r = check_f_conditions(&zero, &AdditionOp::Standard, &ord, 3, &grid).unwrap();
    assert_eq!(r.failing_part(), Some("one"));
}

#[test]
fn grid_capacities_are_capacities() {
    let sigma = [2usize, 0, 1];
    let tau = [0usize, 2, 1];
    let masks: Vec<usize> = tail_masks(&sigma).chain(tail_masks(&tau)).collect();
    let caps = grid_capacities::<f64>(3, &masks, 2);
    assert!(!caps.is_empty());
    for c in &caps {
        Capacity::from_values(3, c.values().to_vec()).unwrap();
    }
    // {1,2}, {2}, {3,2}, {2} -> three distinct masks with {2} below both.
    assert_eq!(caps.len(), 3 * 3 + 2 * 2 + 1);
}

#[test]
fn crosscheck_agrees_on_examples() {
    let (k, add, ord) = scalar_setup("choquet");
    let r = oracle_crosscheck(&k, &add, &ord, 3, &scalar_grid(2), CrossScope::Aggregation).unwrap();
    assert!(r.passed());
    assert!(r.parts.iter().all(|p| p.passed()));

    let (k, add, ord) = scalar_setup("b1-scale");
    let r = oracle_crosscheck(&k, &add, &ord, 2, &scalar_grid(2), CrossScope::Wd).unwrap();
    assert!(r.parts.iter().all(|p| p.failed()));
}

#[test]
fn oracle_witnesses_replay() {
    let (k, add, ord) = scalar_setup("b1-scale");
    let r = wd_oracle(&k, &add, &ord, 2, &scalar_grid(2), &DEFAULT_SEEDS).unwrap();
    let w = r.witness.unwrap();
    let xs = w.get_elements("X").unwrap().to_vec();
    let mu = w.get_capacity("mu").unwrap().clone();
    let sigma = w.get_permutation("sigma").unwrap().to_vec();
    let tau = w.get_permutation("tau").unwrap().to_vec();
    let input = AggregationInput::new(xs, mu, ord.clone(), add.clone()).unwrap();
    let a = choquet_eval(&input, &k, &sigma).unwrap().value;
    let b = choquet_eval(&input, &k, &tau).unwrap().value;
    assert!(!a.approx_eq(&b));
    assert!(!choquet_aggregate(&input, &k).unwrap().consistent);

    let (k, add, ord) = scalar_setup("dg-sq");
    let r = monotonicity_oracle(&k, &add, &ord, 3, &scalar_grid(2), &DEFAULT_SEEDS).unwrap();
    let w = r.witness.unwrap();
    let mu = w.get_capacity("mu").unwrap().clone();
    let xs = w.get_elements("X").unwrap().to_vec();
    let zs = w.get_elements("Z").unwrap().to_vec();
    assert!(xs.iter().zip(&zs).all(|(x, z)| ord.leq(x, z)));
    let cx = choquet_aggregate(&AggregationInput::new(xs, mu.clone(), ord.clone(), add.clone()).unwrap(), &k).unwrap();
    let cz = choquet_aggregate(&AggregationInput::new(zs, mu, ord.clone(), add).unwrap(), &k).unwrap();
    assert!(ord.lt(&cz.value, &cx.value));
}
