use std::fmt::{Debug, Display};

use num_traits::PrimInt;

/// Edge weight scalar: any primitive integer type.
///
/// Weights are compared exactly, so floats are out by construction. The
/// parser reads literals through i128 and casts down, which turns a value
/// that does not fit the chosen scalar into a reportable error instead of
/// a silent wrap.
pub trait Weight: PrimInt + Display + Debug + Send + Sync + 'static {}

impl<T> Weight for T where T: PrimInt + Display + Debug + Send + Sync + 'static {}
