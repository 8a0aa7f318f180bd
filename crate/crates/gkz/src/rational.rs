//! Exact rational helpers shared by every module.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Option<Q> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn fmt_rational(x: &Q) -> String {
    x.to_string()
}

pub fn fmt_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// `x ∈ Z_{<0}`.
pub fn is_negative_integer(x: &Q) -> bool {
    is_integer(x) && x.is_negative()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[Q], b: &[BigInt]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !y.is_zero() {
            acc += x * qi(y);
        }
    }
    acc
}

pub fn to_q_vec(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(qi).collect()
}

/// Converts a rational vector with integer entries; `None` if any entry is fractional.
pub fn to_int_vec(v: &[Q]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| if is_integer(x) { Some(x.numer().clone()) } else { None })
        .collect()
}

/// Scales a nonzero rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * qi(&l)).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Natural log of `|x|` for big integers, without overflowing `f64`.
pub fn ln_abs_int(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural log of `|x|`; `-inf` for zero.
pub fn ln_abs(x: &Q) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_int(x.numer()) - ln_abs_int(x.denom())
}

pub fn sign_of(x: &Q) -> Sign {
    if x.is_zero() {
        Sign::NoSign
    } else if x.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Floor of a rational as a big integer.
pub fn floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}
