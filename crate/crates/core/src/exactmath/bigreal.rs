//! Binary fixed-point reals over arbitrary-precision integers.
//!
//! A [`BigReal`] stores `mantissa / 2^bits`. The number of fraction bits is
//! derived from the requested decimal precision plus guard bits, so that a
//! value built at `d` digits is accurate to well below `10^-d` after a few
//! dozen arithmetic steps.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Euler-Mascheroni constant, first 100 decimals (OEIS A001620).
const EULER_GAMMA_DIGITS: &str = "5772156649015328606065120900824024310421\
5933593992359880576723488486772677766467\
09369470632917467495";

/// Largest decimal precision that the hard-coded constants can support.
pub const MAX_DIGITS: u32 = 90;

const GUARD_BITS: u32 = 64;

fn bits_for_digits(digits: u32) -> u32 {
    // log2(10) = 3.3219...
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// Arbitrary-precision real in binary fixed point.
#[derive(Clone, Debug)]
pub struct BigReal {
    mantissa: BigInt,
    bits: u32,
    digits: u32,
}

impl BigReal {
    fn with_mantissa(mantissa: BigInt, digits: u32) -> Self {
        BigReal {
            mantissa,
            bits: bits_for_digits(digits),
            digits,
        }
    }

    fn clamp_digits(digits: u32) -> u32 {
        digits.clamp(1, MAX_DIGITS)
    }

    pub fn zero(digits: u32) -> Self {
        Self::with_mantissa(BigInt::zero(), Self::clamp_digits(digits))
    }

    pub fn from_int(value: impl Into<BigInt>, digits: u32) -> Self {
        let digits = Self::clamp_digits(digits);
        let bits = bits_for_digits(digits);
        Self::with_mantissa(value.into() << bits, digits)
    }

    /// Nearest fixed-point value to `p/q`.
    pub fn from_ratio(value: &BigRational, digits: u32) -> Self {
        let digits = Self::clamp_digits(digits);
        let bits = bits_for_digits(digits);
        let mantissa = round_div(&(value.numer() << bits), value.denom());
        Self::with_mantissa(mantissa, digits)
    }

    /// `10^-k` at the requested precision.
    pub fn ten_pow_neg(k: u32, digits: u32) -> Self {
        let denom = BigInt::from(10u32).pow(k);
        Self::from_ratio(&BigRational::new(BigInt::one(), denom), digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Euler-Mascheroni constant at the requested precision.
    pub fn euler_gamma(digits: u32) -> Self {
        let digits = Self::clamp_digits(digits);
        let bits = bits_for_digits(digits);
        let numer: BigInt = EULER_GAMMA_DIGITS.parse().expect("constant parses");
        let denom = BigInt::from(10u32).pow(EULER_GAMMA_DIGITS.len() as u32);
        Self::with_mantissa(round_div(&(numer << bits), &denom), digits)
    }

    pub fn ln2(digits: u32) -> Self {
        let digits = Self::clamp_digits(digits);
        let bits = bits_for_digits(digits);
        let m = atanh_ratio(&BigInt::one(), &BigInt::from(3u32), bits) << 1u32;
        Self::with_mantissa(m, digits)
    }

    /// Natural logarithm of a positive integer.
    ///
    /// Writes `n = 2^j * x` with `x` in `[3/4, 3/2)` and evaluates
    /// `ln x = 2 atanh((n - 2^j) / (n + 2^j))`, where the argument is at most 1/5.
    pub fn ln_uint(n: &BigUint, digits: u32) -> Self {
        assert!(!n.is_zero(), "logarithm of zero");
        let digits = Self::clamp_digits(digits);
        let bits = bits_for_digits(digits);
        let mut j = n.bits() - 1;
        // Move to the next power of two when n/2^j >= 3/2.
        if (n << 1u32) >= (BigUint::from(3u32) << j) {
            j += 1;
        }
        let pow = BigInt::one() << j;
        let n = BigInt::from(n.clone());
        let p = &n - &pow;
        let q = &n + &pow;
        let mut m = atanh_ratio(&p, &q, bits) << 1u32;
        if j > 0 {
            let ln2 = atanh_ratio(&BigInt::one(), &BigInt::from(3u32), bits) << 1u32;
            m += ln2 * BigInt::from(j);
        }
        Self::with_mantissa(m, digits)
    }

    pub fn ln_u64(n: u64, digits: u32) -> Self {
        Self::ln_uint(&BigUint::from(n), digits)
    }

    /// `ln(n) - ln(n - 1) = 2 atanh(1 / (2n - 1))`, used by incremental sweeps.
    pub fn ln_step(n: u64, digits: u32) -> Self {
        assert!(n >= 2);
        let digits = Self::clamp_digits(digits);
        let bits = bits_for_digits(digits);
        let q = BigInt::from(2 * n - 1);
        Self::with_mantissa(atanh_ratio(&BigInt::one(), &q, bits) << 1u32, digits)
    }

    /// Exact reciprocal `1/n` at this precision.
    pub fn recip_u64(n: u64, digits: u32) -> Self {
        let digits = Self::clamp_digits(digits);
        let bits = bits_for_digits(digits);
        let one = BigInt::one() << bits;
        Self::with_mantissa(round_div(&one, &BigInt::from(n)), digits)
    }

    /// Square root; `None` for negative input.
    pub fn sqrt(&self) -> Option<Self> {
        if self.mantissa.is_negative() {
            return None;
        }
        let scaled = self.mantissa.magnitude() << self.bits;
        Some(BigReal {
            mantissa: BigInt::from(scaled.sqrt()),
            bits: self.bits,
            digits: self.digits,
        })
    }

    pub fn abs(&self) -> Self {
        BigReal {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        BigReal {
            mantissa: &self.mantissa * BigInt::from(k),
            ..self.clone()
        }
    }

    pub fn div_u64(&self, k: u64) -> Self {
        BigReal {
            mantissa: round_div(&self.mantissa, &BigInt::from(k)),
            ..self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 64 fraction bits before handing off to f64.
        let shift = self.bits.saturating_sub(64);
        let reduced = &self.mantissa >> shift;
        let frac_bits = self.bits - shift;
        reduced.to_f64().unwrap_or(f64::NAN) / 2f64.powi(frac_bits as i32)
    }

    /// Decimal rendering with exactly `places` digits after the point, rounded
    /// to nearest.
    pub fn to_decimal(&self, places: u32) -> String {
        let ten = BigInt::from(10u32).pow(places);
        let scaled = self.mantissa.magnitude() * ten.magnitude();
        let denom = BigUint::one() << self.bits;
        let rounded = (scaled + (&denom >> 1u32)) / denom;
        let (int_part, frac_part) = rounded.div_rem(ten.magnitude());
        let sign = if self.is_negative() && !rounded.is_zero() {
            "-"
        } else {
            ""
        };
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!(
                "{sign}{int_part}.{:0>width$}",
                frac_part.to_string(),
                width = places as usize
            )
        }
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32, u32) {
        let bits = self.bits.max(other.bits);
        let digits = self.digits.max(other.digits);
        let a = &self.mantissa << (bits - self.bits);
        let b = &other.mantissa << (bits - other.bits);
        (a, b, bits, digits)
    }
}

/// Round-half-away division of signed integers.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    let twice = r.abs() << 1u32;
    if twice >= d.abs() {
        if n.sign() == d.sign() || n.sign() == Sign::NoSign {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Fixed-point mantissa of `atanh(p/q)` for `|p/q| < 1`.
fn atanh_ratio(p: &BigInt, q: &BigInt, bits: u32) -> BigInt {
    if p.is_zero() {
        return BigInt::zero();
    }
    let p2 = p * p;
    let q2 = q * q;
    let mut power = (p << bits) / q;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = power * &p2 / &q2;
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    sum
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _, _) = self.aligned(other);
        a == b
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b, _, _) = self.aligned(other);
        Some(a.cmp(&b))
    }
}

impl Add for &BigReal {
    type Output = BigReal;
    fn add(self, rhs: &BigReal) -> BigReal {
        let (a, b, bits, digits) = self.aligned(rhs);
        BigReal {
            mantissa: a + b,
            bits,
            digits,
        }
    }
}

impl Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, rhs: &BigReal) -> BigReal {
        let (a, b, bits, digits) = self.aligned(rhs);
        BigReal {
            mantissa: a - b,
            bits,
            digits,
        }
    }
}

impl Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, rhs: &BigReal) -> BigReal {
        let (a, b, bits, digits) = self.aligned(rhs);
        BigReal {
            mantissa: (a * b) >> bits,
            bits,
            digits,
        }
    }
}

impl Div for &BigReal {
    type Output = BigReal;
    fn div(self, rhs: &BigReal) -> BigReal {
        let (a, b, bits, digits) = self.aligned(rhs);
        assert!(!b.is_zero(), "division by zero");
        BigReal {
            mantissa: round_div(&(a << bits), &b),
            bits,
            digits,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal { (&self).$m(&rhs) }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &BigReal) -> BigReal { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mantissa: -self.mantissa,
            ..self
        }
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -(self.clone())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = f.precision().map(|p| p as u32).unwrap_or(self.digits);
        f.write_str(&self.to_decimal(places))
    }
}
