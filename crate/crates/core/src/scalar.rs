use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar used by the geometric kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Send + Sync + Debug + Display + Default + 'static
{
    /// Converts an `f64` literal; every supported type can represent it approximately.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion used in diagnostics and reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
