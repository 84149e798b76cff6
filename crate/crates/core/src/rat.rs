//! Exact rational scalars and their `"p/q"` text form used by all file
//! formats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The scalar type for every coordinate, height and predicate in the crate.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p/q` (or just `p` when the denominator is 1),
/// always in lowest terms with the sign on the numerator.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the `p/q` form accepted by the file formats. Whole integers are
/// allowed; whitespace is not.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let mk = |n: &str| -> Result<BigInt, String> {
        n.parse::<BigInt>().map_err(|e| format!("bad integer {n:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(mk(s)?)),
        Some((n, d)) => {
            let d = mk(d)?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(mk(n)?, d))
        }
    }
}

/// Floor of `x` as a BigInt-valued rational multiple helper: returns the
/// largest integer `k` with `k * unit <= x`. Used to reduce periodic
/// coordinates into a fundamental domain. Requires `unit > 0`.
pub fn floor_div(x: &Rat, unit: &Rat) -> BigInt {
    assert!(unit.is_positive(), "floor_div needs a positive unit");
    (x / unit).floor().to_integer()
}
