//! Scalar abstraction: every numerical routine in this crate is generic over
//! [`Real`], so the same code runs at `f32` or `f64` precision. Concrete type
//! aliases live at the crate root.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lift an `f64` literal into the scalar type.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("literal not representable")
    }

    /// Convert back to `f64` for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Parse a decimal literal, e.g. a catalog constant stored as a string.
    fn parse_decimal(s: &str) -> Option<Self> {
        s.parse::<Self>().ok()
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn of_round_trips_literals() {
        assert_eq!(f64::of(0.25), 0.25);
        assert_eq!(f32::of(0.25), 0.25f32);
    }

    #[test]
    fn parse_decimal_reads_long_strings() {
        let v = f64::parse_decimal("0.707106781186547524400844362104849").unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
    }
}
