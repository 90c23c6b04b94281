//! Fixed-precision decimal rendering for exact rationals.
//!
//! All report files are rendered through these helpers so that identical
//! inputs serialize to byte-identical output, with no float formatting in
//! the path.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Render `r` with exactly `dp` fractional digits, rounding half away
/// from zero.
pub fn fixed(r: &BigRational, dp: usize) -> String {
    let pow = BigInt::from(10u32).pow(dp as u32);
    let scaled = r * BigRational::from_integer(pow);
    let rounded = round_half_away(&scaled);
    let (sign, mag) = match rounded.sign() {
        Sign::Minus => ("-", -rounded),
        _ => ("", rounded),
    };
    let digits = mag.to_str_radix(10);
    if dp == 0 {
        return format!("{sign}{digits}");
    }
    if digits.len() <= dp {
        format!("{sign}0.{digits:0>width$}", width = dp)
    } else {
        let (int_part, frac_part) = digits.split_at(digits.len() - dp);
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Render `r` with `sig` significant digits (plain decimal, no exponent).
///
/// Used for the per-mille error-rate columns, which span several orders of
/// magnitude across rule families.
pub fn significant(r: &BigRational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let abs = r.abs();
    // Decimal exponent of the leading digit: 10^e <= |r| < 10^(e+1).
    let mut e: i64 = 0;
    let one = BigRational::from_integer(BigInt::from(1));
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut probe = abs.clone();
    while probe >= ten {
        probe /= &ten;
        e += 1;
    }
    while probe < one {
        probe *= &ten;
        e -= 1;
    }
    let dp = (sig as i64 - 1 - e).max(0) as usize;
    fixed(r, dp)
}

/// Nearest integer to `r`, ties away from zero.
fn round_half_away(r: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let num = r.numer();
    let den = r.denom(); // > 0 by BigRational invariant
    let (q, rem) = num.div_rem(den);
    if (&rem * &two).abs() >= *den {
        if num.sign() == Sign::Minus {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Lossy conversion for summaries and tolerance checks.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

use num_integer::Integer;
