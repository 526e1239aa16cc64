//! End-to-end acceptance run: nine criteria, each with its own time budget.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use choquet_core::algebra::{check_associativity, check_cancellation, check_commutativity};
use choquet_core::dissimilarity::{
    appendix_c_counterexample, check_telescoping, takac_dissimilarity, ScalarDissimilarity, WidthMean,
};
use choquet_core::operator::catalog::affine_f;
use choquet_core::order::check_admissibility;
use choquet_core::verifier::{
    aggregation_oracle, check_aggregation, check_delta_decomposition, check_jensen_f, check_monotonicity, check_wd,
    oracle_crosscheck, CrossScope, DEFAULT_SEEDS,
};
use choquet_core::{
    builtin, choquet_aggregate, AdditionOp, Capacity, Carrier, DissimilarityFn, Element, GridSpec, Input64, Order64,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
/// Name, time budget in seconds, and body.
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const GOOD: [&str; 4] = ["choquet", "dg-abs", "half-mixture", "zero"];
const BAD: [&str; 4] = ["b1-scale", "delta-sq", "cii-b-scale", "prev-blend"];

fn scalar_grid(m: u32) -> GridSpec {
    GridSpec::new(Carrier::Scalar, m).unwrap()
}

/// Textbook Choquet integral: sort ascending, weight increments by the
/// capacity of the upper tail.
fn textbook(xs: &[f64], mu: &Capacity<f64>) -> f64 {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let mut prev = 0.0;
    let mut total = 0.0;
    for (i, &j) in idx.iter().enumerate() {
        let tail: usize = idx[i..].iter().map(|&k| 1 << k).sum();
        total += (xs[j] - prev) * mu.value(tail);
        prev = xs[j];
    }
    total
}

fn classical_recovery() -> Check {
    let ord = Order64::ScalarUsual;
    let kernel = builtin("choquet", &ord).map_err(err)?;
    let mu = Capacity::cardinality(3).map_err(err)?;
    let xs_grid = scalar_grid(4).values::<f64>();
    let mut count = 0;
    for &a in &xs_grid {
        for &b in &xs_grid {
            for &c in &xs_grid {
                let xs = [a, b, c];
                let input = Input64::new(
                    xs.iter().map(|&v| Element::Scalar(v)).collect(),
                    mu.clone(),
                    ord.clone(),
                    AdditionOp::Standard,
                )
                .map_err(err)?;
                let got = choquet_aggregate(&input, &kernel).map_err(err)?;
                let v = got.value.component_vec()[0];
                let want = textbook(&xs, &mu);
                ensure((v - want).abs() <= 1e-12 && got.consistent, || {
                    format!("X={xs:?}: operator {v}, textbook {want}")
                })?;
                count += 1;
            }
        }
    }
    let input = Input64::new(
        vec![Element::Scalar(0.2), Element::Scalar(0.5), Element::Scalar(0.9)],
        mu,
        ord,
        AdditionOp::Standard,
    )
    .map_err(err)?;
    let v = choquet_aggregate(&input, &kernel).map_err(err)?.value.component_vec()[0];
    ensure((v - 8.0 / 15.0).abs() <= 1e-12, || format!("worked instance gave {v}"))?;
    Ok(format!("{count} grid inputs match; (0.2,0.5,0.9) -> {v:.15}"))
}

fn wd_equivalence() -> Check {
    let settings = [
        (Order64::ScalarUsual, AdditionOp::Standard, 4u32),
        (Order64::xu_yager(), AdditionOp::Interval, 2u32),
    ];
    let mut runs = 0;
    for (ord, add, m) in &settings {
        let grid = GridSpec::new(ord.carrier(), *m).map_err(err)?;
        for name in GOOD.iter().chain(&BAD) {
            let kernel = builtin(name, ord).map_err(err)?;
            for n in 2..=4 {
                // Disagreement between the condition-level check and the
                // brute force is an error here.
                oracle_crosscheck(&kernel, add, ord, n, &grid, CrossScope::Wd)
                    .map_err(|e| format!("{name} {} n={n}: {e}", ord.carrier()))?;
                let verdict = check_wd(&kernel, add, ord, n, &grid).map_err(err)?;
                let expect_pass = GOOD.contains(name);
                ensure(verdict.passed() == expect_pass, || {
                    format!("{name} {} n={n}: expected pass={expect_pass}", ord.carrier())
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} kernel/arity/carrier runs, 0 disagreements"))
}

fn monotonicity_equivalence() -> Check {
    let ord = Order64::ScalarUsual;
    let add = AdditionOp::Standard;
    let battery: Vec<&str> = GOOD.iter().chain(&BAD).copied().chain(["dg-sq"]).collect();
    let mut runs = 0;
    let mut failing = Vec::new();
    for (n, m) in [(2usize, 4u32), (3, 4), (4, 4)] {
        let grid = scalar_grid(m);
        for name in &battery {
            let kernel = builtin(name, &ord).map_err(err)?;
            oracle_crosscheck(&kernel, &add, &ord, n, &grid, CrossScope::Monotonicity)
                .map_err(|e| format!("{name} n={n} m={m}: {e}"))?;
            if check_monotonicity(&kernel, &add, &ord, n, &grid).map_err(err)?.failed() {
                failing.push(format!("{name}@{n}"));
            }
            runs += 1;
        }
    }
    ensure(failing.iter().any(|f| f.starts_with("dg-sq")), || {
        "dg-sq should fail monotonicity".into()
    })?;
    Ok(format!("{runs} runs, 0 disagreements ({} failing verdicts)", failing.len()))
}

fn aggregation_characterization() -> Check {
    let cases = [
        ("scalar", Order64::ScalarUsual, AdditionOp::Standard),
        ("interval xu-yager", Order64::xu_yager(), AdditionOp::Interval),
        ("interval lex", Order64::lexicographic(), AdditionOp::Interval),
        ("vector lex", Order64::vector_lex(vec![0, 1]).map_err(err)?, AdditionOp::Vector),
    ];
    for (label, ord, add) in &cases {
        let grid = GridSpec::new(ord.carrier(), 4).map_err(err)?;
        let kernel = builtin("choquet", ord).map_err(err)?;
        let r = check_aggregation(&kernel, add, ord, 3, &grid).map_err(err)?;
        ensure(r.passed(), || format!("delta-difference fails on {label}: {:?}", r.failing_part()))?;
    }

    let sq = |a: f64, b: f64| (a - b) * (a - b);
    let r = check_delta_decomposition(&sq, &scalar_grid(4)).map_err(err)?;
    let w = r.witness.as_ref().ok_or("squared difference passed the decomposition")?;
    let (b1, b2) = (w.get_real("b1").unwrap(), w.get_real("b2").unwrap());
    let (lhs, rhs) = (sq(b1, b2), sq(b1, 0.0) - sq(b2, 0.0));
    ensure((lhs - rhs).abs() > 1e-9 && Some(lhs) == w.get_real("lhs"), || {
        format!("witness ({b1},{b2}) does not replay")
    })?;

    let ord = Order64::ScalarUsual;
    let kernel = builtin("delta-sq", &ord).map_err(err)?;
    let oracle = aggregation_oracle(&kernel, &AdditionOp::Standard, &ord, 3, &scalar_grid(4), &DEFAULT_SEEDS)
        .map_err(err)?;
    ensure(oracle.failed(), || "operator-level aggregation oracle passed delta-sq".into())?;
    Ok(format!(
        "4 carriers pass; sq witness (b1={b1}, b2={b2}): {lhs} vs {rhs}; oracle fails at {}",
        oracle.failing_part().unwrap_or(&oracle.law)
    ))
}

fn affine_f_characterization() -> Check {
    // C(0) = D(0) = 0 and C(1) + 3 D(1) = 1, with non-negative coefficients.
    let family = [
        ("id", "0"),
        ("0.7*id", "0.1*id"),
        ("0.4*sq", "0.2*id"),
        ("0.1*id", "0.3*sq"),
        ("0.25*id", "0.25*id"),
        ("0.25*sq", "0.25*sq"),
        ("0.55*id", "0.15*sq"),
        ("sq", "0*id"),
        ("0.4*upper", "0.2*lower"),
        ("0.85*lower", "0.05*id"),
    ];
    let ord = Order64::ScalarUsual;
    let add = AdditionOp::Standard;
    let grid = scalar_grid(4);
    for (c, d) in family {
        let kernel = affine_f::<f64>(c, d).map_err(err)?;
        let r = check_aggregation(&kernel, &add, &ord, 3, &grid).map_err(err)?;
        ensure(r.passed(), || format!("affine C={c}, D={d} fails {:?}", r.failing_part()))?;
    }
    let a2x = builtin("a2x", &ord).map_err(err)?;
    let r = check_jensen_f(a2x.f_payload().ok_or("a2x has no F")?, &add, &scalar_grid(8)).map_err(err)?;
    let w = r.witness.ok_or("a2x passed Jensen")?;
    let got = (
        w.get_element("x").cloned(),
        w.get_real("a"),
        w.get_real("b"),
    );
    ensure(got == (Some(Element::Scalar(1.0)), Some(0.0), Some(1.0)), || {
        format!("a2x witness {got:?}")
    })?;
    Ok("10 affine instances pass; a2x witness (x=1, a=0, b=1)".into())
}

fn telescoping() -> Check {
    for ord in [Order64::ScalarUsual, Order64::xu_yager()] {
        let grid = GridSpec::default_for(ord.carrier());
        let add = AdditionOp::for_carrier(ord.carrier());
        let d = DissimilarityFn::abs_diff(&ord).map_err(err)?;
        let r = check_telescoping(&d, &add, &ord, &grid).map_err(err)?;
        ensure(r.passed(), || format!("abs-diff fails telescoping on {}", ord.carrier()))?;
    }
    let ord = Order64::ScalarUsual;
    let d = DissimilarityFn::sq_diff(&ord).map_err(err)?;
    let r = check_telescoping(&d, &AdditionOp::Standard, &ord, &scalar_grid(8)).map_err(err)?;
    let w = r.witness.ok_or("sq-diff passed telescoping")?;
    let at = (w.get_element("x1").cloned(), w.get_element("x2").cloned());
    ensure(at == (Some(Element::Scalar(0.5)), Some(Element::Scalar(1.0))), || {
        format!("sq-diff witness at {at:?}")
    })?;
    let first = d.eval(&Element::Scalar(0.5), &Element::zero(Carrier::Scalar)).map_err(err)?;
    let second = d.eval(&Element::Scalar(1.0), &Element::Scalar(0.5)).map_err(err)?;
    let whole = d.eval(&Element::Scalar(1.0), &Element::zero(Carrier::Scalar)).map_err(err)?;
    ensure(
        first == Element::Scalar(0.25) && second == Element::Scalar(0.25) && whole == Element::Scalar(1.0),
        || format!("replay gave {first} + {second} vs {whole}"),
    )?;
    Ok(format!("abs-diff passes; sq-diff: {first} + {second} != {whole} at (0.5, 1)"))
}

fn appendix_c() -> Check {
    let grid = GridSpec::new(Carrier::Interval, 8).map_err(err)?;
    let (alpha, mean, delta) = (0.5, WidthMean::Max, ScalarDissimilarity::AbsDiff);
    let w = appendix_c_counterexample(alpha, 1.0, mean, delta, &grid, true).map_err(err)?;
    let zero = Element::zero(Carrier::Interval);
    let d = |x: &Element<f64>, y: &Element<f64>| takac_dissimilarity(x, y, alpha, mean, delta);
    let lhs = AdditionOp::Interval
        .add(&d(&w.x1, &zero).map_err(err)?, &d(&w.x2, &w.x1).map_err(err)?)
        .map_err(err)?;
    let rhs = d(&w.x2, &zero).map_err(err)?;
    ensure(lhs.distance(&w.lhs) <= 1e-9 && rhs.distance(&w.rhs) <= 1e-9, || {
        format!("replay {lhs} / {rhs} differs from recorded {} / {}", w.lhs, w.rhs)
    })?;
    ensure(lhs.distance(&rhs) > 1e-9, || "replayed sides are equal".into())?;
    Ok(format!("x1={}, x2={}: {lhs} != {rhs}", w.x1, w.x2))
}

fn order_and_algebra_laws() -> Check {
    let orders = [
        Order64::ScalarUsual,
        Order64::xu_yager(),
        Order64::lexicographic(),
        Order64::antilexicographic(),
        Order64::alpha_beta(0.3, 0.7).map_err(err)?,
        Order64::vector_lex(vec![0, 1]).map_err(err)?,
        Order64::vector_lex(vec![2, 0, 1]).map_err(err)?,
    ];
    for ord in &orders {
        let r = check_admissibility(ord, &GridSpec::default_for(ord.carrier())).map_err(err)?;
        ensure(r.passed(), || format!("{ord} fails {:?}", r.failing_part()))?;
    }
    let ops = [
        (AdditionOp::<f64>::Standard, Carrier::Scalar),
        (AdditionOp::Interval, Carrier::Interval),
        (AdditionOp::Vector, Carrier::Vector(2)),
        (AdditionOp::Vector, Carrier::Vector(3)),
    ];
    for (op, carrier) in &ops {
        let grid = GridSpec::default_for(*carrier);
        for r in [
            check_commutativity(op, &grid).map_err(err)?,
            check_associativity(op, &grid).map_err(err)?,
            check_cancellation(op, &grid).map_err(err)?,
        ] {
            ensure(r.passed(), || format!("{} on {carrier} fails {}", op.name(), r.law))?;
        }
    }
    let r = check_cancellation(&AdditionOp::<f64>::Min, &scalar_grid(8)).map_err(err)?;
    ensure(r.failed() && r.witness.is_some(), || "min passed cancellation".into())?;
    Ok(format!("{} orders admissible; 3 additions lawful; min fails cancellation", orders.len()))
}

fn random_element(rng: &mut ChaCha8Rng, carrier: Carrier) -> Element<f64> {
    // Quarter steps so that ties are common.
    let mut v = || f64::from(rng.gen_range(0..=4u32)) / 4.0;
    match carrier {
        Carrier::Scalar => Element::Scalar(v()),
        Carrier::Interval => {
            let (a, b) = (v(), v());
            Element::Interval(a.min(b), a.max(b))
        }
        Carrier::Vector(k) => Element::Vector((0..k).map(|_| v()).collect()),
    }
}

fn equivariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_261_014);
    let orders = [
        Order64::ScalarUsual,
        Order64::xu_yager(),
        Order64::lexicographic(),
        Order64::antilexicographic(),
        Order64::vector_lex(vec![1, 0]).map_err(err)?,
        Order64::vector_lex(vec![0, 2, 1]).map_err(err)?,
    ];
    let mut worst = 0.0f64;
    for case in 0..200 {
        let ord = &orders[case % orders.len()];
        let n = rng.gen_range(2..=5);
        let xs: Vec<_> = (0..n).map(|_| random_element(&mut rng, ord.carrier())).collect();
        let mu = Capacity::random(n, rng.gen()).map_err(err)?;
        let mut pi: Vec<usize> = (0..n).collect();
        pi.shuffle(&mut rng);
        let add = AdditionOp::for_carrier(ord.carrier());
        let kernel = builtin("choquet", ord).map_err(err)?;

        let base = Input64::new(xs.clone(), mu.clone(), ord.clone(), add.clone()).map_err(err)?;
        let moved = Input64::new(
            pi.iter().map(|&i| xs[i].clone()).collect(),
            mu.transport(&pi).map_err(err)?,
            ord.clone(),
            add,
        )
        .map_err(err)?;
        let a = choquet_aggregate(&base, &kernel).map_err(err)?.value;
        let b = choquet_aggregate(&moved, &kernel).map_err(err)?.value;
        let gap = a.distance(&b);
        worst = worst.max(gap);
        ensure(gap <= 1e-12, || format!("case {case} ({ord}, pi={pi:?}): {a} vs {b}"))?;
    }
    Ok(format!("200 instances, max deviation {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("classical recovery", 1, classical_recovery),
        ("well-definedness equivalence", 120, wd_equivalence),
        ("monotonicity equivalence", 600, monotonicity_equivalence),
        ("aggregation characterization", 60, aggregation_characterization),
        ("affine-F characterization", 60, affine_f_characterization),
        ("telescoping criterion", 30, telescoping),
        ("interval counterexample reproduction", 30, appendix_c),
        ("order and algebra laws", 30, order_and_algebra_laws),
        ("permutation equivariance", 60, equivariance),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*budget);
        let outcome = outcome.and_then(|d| {
            if elapsed <= limit {
                Ok(d)
            } else {
                Err(format!("{d}; over the {budget}s budget"))
            }
        });
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(e) => {
                failures += 1;
                ("FAIL", e.as_str())
            }
        };
        println!(
            "{tag} [{}] {name} ({:.2}s / {budget}s): {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
