//! Kernels `L(x1, x2, b1, b2)` driving the Choquet-like sum, in the general
//! form or one of the two specializations.

use std::fmt;
use std::sync::Arc;

use crate::algebra::MultiplicationOp;
use crate::dissimilarity::DissimilarityFn;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type GeneralFn<T> = dyn Fn(&Element<T>, &Element<T>, T, T) -> Result<Element<T>> + Send + Sync;
/// `G(x, b1, b2)`.
pub type CiFn<T> = dyn Fn(&Element<T>, T, T) -> Result<Element<T>> + Send + Sync;
/// `G(x1, x2, b)`.
pub type CiiFn<T> = dyn Fn(&Element<T>, &Element<T>, T) -> Result<Element<T>> + Send + Sync;
/// `delta(b1, b2)`.
pub type DeltaFn<T> = dyn Fn(T, T) -> T + Send + Sync;
/// `F(x, a)`.
pub type FFn<T> = dyn Fn(&Element<T>, T) -> Result<Element<T>> + Send + Sync;

#[derive(Clone)]
pub enum KernelForm<T> {
    General(Arc<GeneralFn<T>>),
    /// Ignores the previous input.
    CI(Arc<CiFn<T>>),
    /// Ignores the second capacity value.
    CII(Arc<CiiFn<T>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    General,
    CI,
    CII,
}

/// Where a kernel came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// `delta(b1, b2) (.) x`.
    DeltaScale(String),
    /// `F(x, b1 - b2)`.
    FDifference(String),
    /// `F(x, a) = a C(x) + D(x)`.
    AffineF { c: String, d: String },
    /// `b (.) d(x1, x2)`.
    BScaleD(String),
    Custom(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::DeltaScale(d) => write!(f, "delta-scale({d})"),
            Provenance::FDifference(name) => write!(f, "f-difference({name})"),
            Provenance::AffineF { c, d } => write!(f, "affine-F(C={c}, D={d})"),
            Provenance::BScaleD(d) => write!(f, "b-scale-d({d})"),
            Provenance::Custom(name) => write!(f, "custom({name})"),
        }
    }
}

#[derive(Clone)]
pub struct Kernel<T> {
    name: String,
    form: KernelForm<T>,
    provenance: Provenance,
    delta: Option<Arc<DeltaFn<T>>>,
    f: Option<Arc<FFn<T>>>,
    d: Option<DissimilarityFn<T>>,
}

impl<T> fmt::Debug for Kernel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel({}: {})", self.name, self.provenance)
    }
}

impl<T: Scalar> Kernel<T> {
    pub fn general(
        name: impl Into<String>,
        f: impl Fn(&Element<T>, &Element<T>, T, T) -> Result<Element<T>> + Send + Sync + 'static,
    ) -> Self {
        let name = name.into();
        Kernel {
            provenance: Provenance::Custom(name.clone()),
            name,
            form: KernelForm::General(Arc::new(f)),
            delta: None,
            f: None,
            d: None,
        }
    }

    pub fn ci(
        name: impl Into<String>,
        g: impl Fn(&Element<T>, T, T) -> Result<Element<T>> + Send + Sync + 'static,
    ) -> Self {
        let name = name.into();
        Kernel {
            provenance: Provenance::Custom(name.clone()),
            name,
            form: KernelForm::CI(Arc::new(g)),
            delta: None,
            f: None,
            d: None,
        }
    }

    pub fn cii(
        name: impl Into<String>,
        g: impl Fn(&Element<T>, &Element<T>, T) -> Result<Element<T>> + Send + Sync + 'static,
    ) -> Self {
        let name = name.into();
        Kernel {
            provenance: Provenance::Custom(name.clone()),
            name,
            form: KernelForm::CII(Arc::new(g)),
            delta: None,
            f: None,
            d: None,
        }
    }

    /// `G(x, b1, b2) = delta(b1, b2) (.) x`.
    pub fn delta_scale(
        delta_name: impl Into<String>,
        delta: impl Fn(T, T) -> T + Send + Sync + 'static,
        mul: MultiplicationOp<T>,
    ) -> Self {
        let delta_name = delta_name.into();
        let delta: Arc<DeltaFn<T>> = Arc::new(delta);
        let dd = Arc::clone(&delta);
        let mut k = Self::ci(format!("delta-scale:{delta_name}"), move |x, b1, b2| {
            mul.scale(dd(b1, b2), x)
        });
        k.provenance = Provenance::DeltaScale(delta_name);
        k.delta = Some(delta);
        k
    }

    /// `G(x, b1, b2) = F(x, b1 - b2)`.
    pub fn f_difference(
        f_name: impl Into<String>,
        f: impl Fn(&Element<T>, T) -> Result<Element<T>> + Send + Sync + 'static,
    ) -> Self {
        let f_name = f_name.into();
        let f: Arc<FFn<T>> = Arc::new(f);
        let ff = Arc::clone(&f);
        let mut k = Self::ci(format!("f-difference:{f_name}"), move |x, b1, b2| ff(x, b1 - b2));
        k.provenance = Provenance::FDifference(f_name);
        k.f = Some(f);
        k
    }

    /// `G(x1, x2, b) = b (.) d(x1, x2)`.
    pub fn b_scale_d(d: DissimilarityFn<T>, mul: MultiplicationOp<T>) -> Self {
        let dd = d.clone();
        let mut k = Self::cii(format!("b-scale-d:{}", d.name()), move |x1, x2, b| {
            mul.scale(b, &dd.eval(x1, x2)?)
        });
        k.provenance = Provenance::BScaleD(d.name().to_string());
        k.d = Some(d);
        k
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn arity(&self) -> Arity {
        match self.form {
            KernelForm::General(_) => Arity::General,
            KernelForm::CI(_) => Arity::CI,
            KernelForm::CII(_) => Arity::CII,
        }
    }

    pub fn form(&self) -> &KernelForm<T> {
        &self.form
    }

    /// The scalar `delta` of a delta-scale kernel.
    pub fn delta(&self) -> Option<&DeltaFn<T>> {
        self.delta.as_deref()
    }

    /// The `F(x, a)` of an F-difference kernel.
    pub fn f_payload(&self) -> Option<&FFn<T>> {
        self.f.as_deref()
    }

    pub fn dissimilarity(&self) -> Option<&DissimilarityFn<T>> {
        self.d.as_ref()
    }

    /// Raw kernel value, without the range check.
    pub fn apply(&self, x1: &Element<T>, x2: &Element<T>, b1: T, b2: T) -> Result<Element<T>> {
        match &self.form {
            KernelForm::General(f) => f(x1, x2, b1, b2),
            KernelForm::CI(g) => g(x1, b1, b2),
            KernelForm::CII(g) => g(x1, x2, b1),
        }
    }

    /// Kernel value, snapped onto K within tolerance.
    ///
    /// Fails with [`Error::KernelOutOfRange`] if the value leaves K.
    pub fn eval(&self, x1: &Element<T>, x2: &Element<T>, b1: T, b2: T) -> Result<Element<T>> {
        let v = self.apply(x1, x2, b1, b2)?;
        if v.carrier() != x1.carrier() || !v.in_unit() {
            return Err(Error::KernelOutOfRange {
                kernel: self.name.clone(),
                value: v.to_string(),
            });
        }
        Ok(v.snap_unit())
    }
}
