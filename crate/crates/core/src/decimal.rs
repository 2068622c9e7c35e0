//! Fixed-point rendering of exact rationals with round-half-even.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub fn format_rational(value: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value.abs() * BigRational::from_integer(scale.clone());
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = BigRational::new(1.into(), 2.into());
    let mut q = floor.to_integer();
    if frac > half || (frac == half && (&q % 2u32) == BigInt::from(1u32)) {
        q += 1u32;
    }
    let int_part = &q / &scale;
    let frac_part = &q % &scale;
    let sign = if value.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = digits as usize
        )
    }
}

/// Renders an `f64` through its exact binary value.
pub fn format_f64(value: f64, digits: u32) -> String {
    match BigRational::from_float(value) {
        Some(r) => format_rational(&r, digits),
        None => value.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn unit_fractions() {
        assert_eq!(format_rational(&r(1, 13), 6), "0.076923");
        assert_eq!(format_rational(&r(1, 12), 6), "0.083333");
        assert_eq!(format_rational(&r(1, 1), 6), "1.000000");
        assert_eq!(format_rational(&r(1, 8), 6), "0.125000");
    }

    #[test]
    fn ties_round_to_even() {
        assert_eq!(format_rational(&r(1, 8), 2), "0.12");
        assert_eq!(format_rational(&r(3, 8), 2), "0.38");
        assert_eq!(format_rational(&r(5, 2), 0), "2");
        assert_eq!(format_rational(&r(-1, 8), 2), "-0.12");
        assert_eq!(format_rational(&r(-1, 1000), 2), "0.00");
    }

    #[test]
    fn floats() {
        assert_eq!(format_f64(0.8, 4), "0.8000");
        assert_eq!(format_f64(-1.0, 4), "-1.0000");
        assert_eq!(format_f64(0.0, 4), "0.0000");
    }
}
