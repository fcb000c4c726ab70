//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the field and operator math is generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_phase<T: Real>(phi: T) -> T {
    let tau = T::two_pi();
    let r = phi % tau;
    let r = if r < T::zero() { r + tau } else { r };
    // `r + tau` can round up to exactly tau for tiny negative inputs
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_branches_agree_at_switch() {
        let x = 1e-4_f64;
        let taylor = 1.0 - x * x / 6.0 + x.powi(4) / 120.0;
        assert!((taylor - x.sin() / x).abs() < 4.0 * f64::EPSILON);
        assert_eq!(sinc(0.0_f64), 1.0);
        assert!((sinc(std::f64::consts::PI)).abs() < 1e-16);
    }

    #[test]
    fn wrap_phase_range() {
        use std::f64::consts::TAU;
        for &p in &[-7.0, -TAU, -1e-300, 0.0, 3.0, TAU, 100.0] {
            let w = wrap_phase(p);
            assert!((0.0..TAU).contains(&w), "{p} -> {w}");
        }
        assert_eq!(wrap_phase(std::f64::consts::PI), std::f64::consts::PI);
        assert!((wrap_phase(-1.0_f32) - (std::f32::consts::TAU - 1.0)).abs() < 1e-6);
    }
}
