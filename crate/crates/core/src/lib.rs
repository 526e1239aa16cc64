//! Choquet-like aggregation of multivalued data (scalars, intervals, vectors)
//! with respect to an admissible order, and a grid verifier for the
//! well-definedness, monotonicity and aggregation-function conditions.
//!
//! Everything is generic over the [`Scalar`] type; `f64`, `f32` and the exact
//! rational [`Exact`] are supported. The aliases below fix `f64`.
//!
//! ```
//! use choquet_core::{builtin, choquet_aggregate, AdditionOp, AdmissibleOrder, AggregationInput, Capacity, Element};
//!
//! let ord = AdmissibleOrder::ScalarUsual;
//! let xs = vec![Element::Scalar(0.2), Element::Scalar(0.5), Element::Scalar(0.9)];
//! let input = AggregationInput::new(xs, Capacity::cardinality(3)?, ord.clone(), AdditionOp::Standard)?;
//! let out = choquet_aggregate(&input, &builtin("choquet", &ord)?)?;
//! assert!(out.value.approx_eq(&Element::Scalar(8.0 / 15.0)));
//! # Ok::<(), choquet_core::Error>(())
//! ```

pub mod algebra;
pub mod capacity;
pub mod dissimilarity;
pub mod element;
pub mod error;
pub mod operator;
pub mod order;
pub mod scalar;
pub mod verifier;

pub use algebra::{AdditionOp, MultiplicationOp, OpRegistry};
pub use capacity::Capacity;
pub use dissimilarity::{takac_dissimilarity, DissimilarityFn, ScalarDissimilarity, Takac, WidthMean};
pub use element::{Carrier, Element};
pub use error::{Error, Result};
pub use operator::{
    admissible_permutations, builtin, choquet_aggregate, choquet_eval, Aggregate, AggregationInput, Kernel,
    KernelRegistry,
};
pub use order::AdmissibleOrder;
pub use scalar::{Exact, Scalar};
pub use verifier::{GridSpec, LawReport, Verdict, Witness};

pub type Element64 = Element<f64>;
pub type Capacity64 = Capacity<f64>;
pub type Order64 = AdmissibleOrder<f64>;
pub type Kernel64 = Kernel<f64>;
pub type Addition64 = AdditionOp<f64>;
pub type Input64 = AggregationInput<f64>;
pub type Report64 = LawReport<f64>;

pub type ElementExact = Element<Exact>;
pub type CapacityExact = Capacity<Exact>;
pub type KernelExact = Kernel<Exact>;
