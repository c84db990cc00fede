//! Exact and high-precision number kernels.

mod field;
mod probe;
mod quad;
mod rational;
mod real;

pub use field::Field;
pub use probe::{probe_limit, LimitOutcome, ProbeFraction, ProbeLimit, ProbePoly};
pub use quad::{quad_arith, QuadExt, QuadOp};
pub use rational::{format_rational, int, parse_decimal, parse_rational, rat, Rational};
pub use real::{check_precision, decimal_digits, to_real, BigReal, RealContext, DEFAULT_PRECISION, GUARD_BITS, MIN_PRECISION};

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
