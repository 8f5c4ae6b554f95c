//! Exact rational thresholds.
//!
//! Real-valued parameters (ε, δ, γ, ...) arrive as `f64` and are converted
//! once to the simplest rational within float precision, so `0.1` becomes
//! exactly `1/10`. Every threshold comparison is then made between integer
//! counts and exact products.

use num_rational::Ratio;

pub type Frac = Ratio<i64>;

pub fn frac(x: f64) -> Frac {
    Ratio::approximate_float(x).unwrap_or_else(|| panic!("parameter {x} is not representable"))
}

pub fn int(x: usize) -> Frac {
    Frac::from_integer(x as i64)
}

/// `count ≥ bound`
#[inline]
pub fn at_least(count: usize, bound: Frac) -> bool {
    int(count) >= bound
}

/// `count ≤ bound`
#[inline]
pub fn at_most(count: usize, bound: Frac) -> bool {
    int(count) <= bound
}

/// Smallest integer `≥ x`, clamped at zero.
pub fn ceil_usize(x: Frac) -> usize {
    x.ceil().to_integer().max(0) as usize
}

pub fn floor_usize(x: Frac) -> usize {
    x.floor().to_integer().max(0) as usize
}

/// Nearest integer, halves away from zero.
pub fn round_usize(x: Frac) -> usize {
    x.round().to_integer().max(0) as usize
}

pub fn to_f64(x: Frac) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// ⌈(1/2 − ε)n⌉, the set size used by the niceness tests.
pub fn half_minus(n: usize, eps: Frac) -> usize {
    ceil_usize((Frac::new(1, 2) - eps) * int(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parameters_are_exact() {
        assert_eq!(frac(0.1), Frac::new(1, 10));
        assert_eq!(frac(0.05), Frac::new(1, 20));
        assert_eq!(frac(0.15), Frac::new(3, 20));
        assert_eq!(half_minus(10, frac(0.1)), 4);
        assert_eq!(half_minus(8, frac(0.1)), 4);
        assert_eq!(half_minus(12, frac(0.1)), 5);
    }

    #[test]
    fn rounding() {
        assert_eq!(round_usize(Frac::new(5, 2)), 3);
        assert_eq!(round_usize(Frac::new(9, 5)), 2);
        assert!(at_least(10, frac(0.1) * int(100)));
        assert!(!at_least(9, frac(0.1) * int(100)));
    }
}
