//! Exact big-rational arithmetic helpers.
//!
//! All measure accounting in this crate is done with arbitrary-precision
//! rationals so that sum-to-one checks, independence tests and the strict
//! `< 2^-n` bounds of test certification are bit-exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rat;

/// Build a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// `2^-n` as an exact rational.
pub fn pow2_neg(n: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << n)
}

/// `r^k` for a nonnegative exponent.
pub fn rat_pow(r: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

/// Parse `p/q` or a bare integer `p`. Whitespace is not tolerated inside.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("bad numerator in `{s}`"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator in `{s}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(num, den))
}

/// Render as `p/q`, or just `p` when the denominator is 1.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Best-effort f64 approximation, for report output only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for huge components
        let scale: BigInt = BigInt::one() << 64u32;
        let scaled = (r.numer() * &scale) / r.denom();
        scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(64)
    })
}

/// If `r` equals `2^-k` for some k >= 0, return k.
pub fn dyadic_exponent(r: &Rat) -> Option<u32> {
    if !r.numer().is_one() || r.is_negative() {
        return None;
    }
    let den = r.denom();
    let bits = den.bits();
    // power of two iff den == 1 << (bits - 1)
    if den == &(BigInt::one() << (bits - 1) as u32) {
        Some((bits - 1) as u32)
    } else {
        None
    }
}
