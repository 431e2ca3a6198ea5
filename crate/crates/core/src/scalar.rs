use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

/// Numeric types the cost model can be evaluated in: `f32`, `f64`, and exact
/// rationals such as [`num_rational::BigRational`].
pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + Debug {
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn pow2(exp: u32) -> Self {
        num_traits::pow(Self::two(), exp as usize)
    }
}

impl<T: Num + Clone + PartialOrd + FromPrimitive + Debug> Scalar for T {}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn pow2_in_each_type() {
        assert_eq!(f64::pow2(10), 1024.0);
        assert_eq!(f32::pow2(0), 1.0);
        assert_eq!(BigRational::pow2(100), BigRational::from_count(1 << 50) * BigRational::from_count(1 << 50));
    }
}
