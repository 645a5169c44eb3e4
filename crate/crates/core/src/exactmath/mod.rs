//! Harmonic numbers, exact and to arbitrary precision, together with the
//! classical two-sided bounds on `H_n - gamma - ln n`.
//!
//! Exact values are [`Rational`]s (lowest terms, positive denominator).
//! Everything involving `gamma` or a logarithm is a [`BigReal`].

mod bigreal;

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use bigreal::{BigReal, MAX_DIGITS};

/// Exact rational number in lowest terms.
pub type Rational = BigRational;

/// Largest `n` for which [`harmonic`] returns an exact rational.
pub const EXACT_HARMONIC_CAP: u64 = 100_000;

/// Working precision used by the bound operations.
pub const BOUND_DIGITS: u32 = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactMathError {
    #[error("harmonic({n}) exceeds the exact-mode cap {cap}; use harmonic_approx")]
    ExactCapExceeded { n: u64, cap: u64 },
    #[error("argument must be at least 1, got {0}")]
    NonPositive(u64),
    #[error("{bound} bound violated at n = {n}: value {value} outside ({lower}, {upper})")]
    BoundViolation {
        bound: &'static str,
        n: u64,
        value: String,
        lower: String,
        upper: String,
    },
}

pub type Result<T> = std::result::Result<T, ExactMathError>;

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn rational_from_uint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// `lcm(1, 2, ..., n)` as a product of maximal prime powers.
fn lcm_upto(n: u64) -> BigUint {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut acc = BigUint::one();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        let mut multiple = p * p;
        while multiple <= n {
            composite[multiple] = true;
            multiple += p;
        }
        let mut power = p as u64;
        while power * (p as u64) <= n as u64 {
            power *= p as u64;
        }
        acc *= power;
    }
    acc
}

/// Exact `H_n = sum_{i=1}^{n} 1/i`.
///
/// All terms are put over `lcm(1..n)` so the sum is a single pass of small
/// divisions followed by one reduction.
pub fn harmonic(n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(ExactMathError::NonPositive(0));
    }
    if n > EXACT_HARMONIC_CAP {
        return Err(ExactMathError::ExactCapExceeded {
            n,
            cap: EXACT_HARMONIC_CAP,
        });
    }
    let lcm = lcm_upto(n);
    let mut numer = BigUint::zero();
    for i in 1..=n {
        numer += &lcm / i;
    }
    Ok(Rational::new(numer.into(), lcm.into()))
}

/// `H_b - H_a` for `a <= b`, exact.
pub fn harmonic_difference(b: u64, a: u64) -> Result<Rational> {
    assert!(a <= b);
    if a == 0 {
        return harmonic(b);
    }
    Ok(harmonic(b)? - harmonic(a)?)
}

/// Below this `n` the asymptotic series cannot reach `digits` accuracy with a
/// modest number of terms, so the sum is taken directly.
fn direct_sum_threshold(digits: u32) -> u64 {
    10 * (digits as u64 + 5)
}

fn harmonic_direct(n: u64, digits: u32) -> BigReal {
    let mut acc = BigReal::zero(digits);
    for i in 1..=n {
        acc = acc + BigReal::recip_u64(i, digits);
    }
    acc
}

/// Bernoulli numbers `B_0..=B_{2*MAX}` via the standard recurrence.
fn bernoulli_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        const LEN: usize = 81;
        let mut b: Vec<Rational> = Vec::with_capacity(LEN);
        b.push(Rational::one());
        for m in 1..LEN {
            // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
            let mut binom = BigInt::one();
            let mut acc = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += bj * Rational::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// `H_n` to absolute error below `10^-digits`.
///
/// Uses `gamma + ln n + 1/(2n) - sum_k B_{2k} / (2k n^{2k})` with terms added
/// until they drop under the target; small `n` is summed directly.
pub fn harmonic_approx(n: impl Into<BigUint>, digits: u32) -> BigReal {
    let n: BigUint = n.into();
    assert!(!n.is_zero(), "harmonic_approx needs n >= 1");
    let digits = digits.min(MAX_DIGITS);
    let work = (digits + 8).min(MAX_DIGITS);
    if let Some(small) = n.to_u64() {
        if small <= direct_sum_threshold(digits) {
            return harmonic_direct(small, work);
        }
    }
    let nr = rational_from_uint(&n);
    let mut acc = &BigReal::euler_gamma(work) + &BigReal::ln_uint(&n, work);
    acc = acc + BigReal::from_ratio(&(Rational::one() / (&nr * rational(2, 1))), work);
    let cutoff = BigReal::ten_pow_neg(work, work);
    let bern = bernoulli_table();
    let n2 = &nr * &nr;
    let mut npow = n2.clone();
    let mut k = 1usize;
    loop {
        assert!(2 * k < bern.len(), "Bernoulli table exhausted");
        let coeff = &bern[2 * k] / (rational(2 * k as i64, 1) * &npow);
        let term = BigReal::from_ratio(&coeff, work);
        acc = acc - &term;
        if term.abs() < cutoff {
            break;
        }
        npow *= &n2;
        k += 1;
    }
    acc
}

fn check_open(
    bound: &'static str,
    n: u64,
    value: &BigReal,
    lower: &BigReal,
    upper: &BigReal,
) -> Result<()> {
    if value > lower && value < upper {
        Ok(())
    } else {
        Err(ExactMathError::BoundViolation {
            bound,
            n,
            value: value.to_decimal(30),
            lower: lower.to_decimal(30),
            upper: upper.to_decimal(30),
        })
    }
}

/// The four error terms of `H_n` relative to its asymptotic expansion,
/// computed from a given `H_n` and `ln n`.
#[derive(Clone, Debug)]
pub struct HarmonicErrors {
    pub n: u64,
    /// `eps_n = H_n - gamma - ln n`, in `(1/(2(n+1)), 1/(2n))`.
    pub havil: BigReal,
    /// `8 n^2 (gamma + ln n + 1/(2n) - H_n)`, in `(0, 1)`.
    pub franel: BigReal,
    /// `120 n^4 (H_n - gamma - ln n - 1/(2n) + 1/(12 n^2))`, in `(0, 1)`.
    pub fourth_order: BigReal,
    /// `H_n - ln n`, in `(1/n, 1)` for `n >= 2`, equal to 1 at `n = 1`.
    pub weak: BigReal,
}

impl HarmonicErrors {
    pub fn from_parts(n: u64, h: &BigReal, ln_n: &BigReal, gamma: &BigReal) -> Self {
        let digits = h.digits();
        let havil = &(h - gamma) - ln_n;
        let half_over_n = BigReal::recip_u64(2 * n, digits);
        let n2 = BigInt::from(n).pow(2);
        let twelfth = BigReal::from_ratio(
            &Rational::new(BigInt::one(), BigInt::from(12) * &n2),
            digits,
        );
        let franel_gap = &half_over_n - &havil;
        let franel = &franel_gap * &BigReal::from_int(BigInt::from(8) * &n2, digits);
        let fourth_gap = &twelfth - &franel_gap;
        let fourth_order = &fourth_gap * &BigReal::from_int(BigInt::from(120) * &n2 * &n2, digits);
        let weak = h - ln_n;
        HarmonicErrors {
            n,
            havil,
            franel,
            fourth_order,
            weak,
        }
    }

    /// Check every interval; returns the first violation.
    pub fn check(&self) -> Result<()> {
        let d = self.havil.digits();
        let n = self.n;
        check_open(
            "Havil",
            n,
            &self.havil,
            &BigReal::recip_u64(2 * (n + 1), d),
            &BigReal::recip_u64(2 * n, d),
        )?;
        let zero = BigReal::zero(d);
        let one = BigReal::from_int(1, d);
        check_open("Franel", n, &self.franel, &zero, &one)?;
        check_open("fourth-order", n, &self.fourth_order, &zero, &one)?;
        if n == 1 {
            if self.weak != one {
                return Err(ExactMathError::BoundViolation {
                    bound: "weak",
                    n,
                    value: self.weak.to_decimal(30),
                    lower: "1".into(),
                    upper: "1".into(),
                });
            }
        } else {
            check_open("weak", n, &self.weak, &BigReal::recip_u64(n, d), &one)?;
        }
        Ok(())
    }
}

fn errors_at(n: u64) -> Result<HarmonicErrors> {
    if n == 0 {
        return Err(ExactMathError::NonPositive(0));
    }
    let h = harmonic_approx(n, BOUND_DIGITS + 10);
    let ln_n = BigReal::ln_u64(n, BOUND_DIGITS + 10);
    let gamma = BigReal::euler_gamma(BOUND_DIGITS + 10);
    Ok(HarmonicErrors::from_parts(n, &h, &ln_n, &gamma))
}

/// `eps_n = H_n - gamma - ln n`, checked against `(1/(2(n+1)), 1/(2n))`.
pub fn havil_epsilon(n: u64) -> Result<BigReal> {
    let e = errors_at(n)?;
    let d = e.havil.digits();
    check_open(
        "Havil",
        n,
        &e.havil,
        &BigReal::recip_u64(2 * (n + 1), d),
        &BigReal::recip_u64(2 * n, d),
    )?;
    Ok(e.havil)
}

/// `eps^_n` solving `H_n = gamma + ln n + 1/(2n) - eps^_n/(8n^2)`; in `(0, 1)`.
pub fn franel_epsilon(n: u64) -> Result<BigReal> {
    let e = errors_at(n)?;
    let d = e.franel.digits();
    check_open(
        "Franel",
        n,
        &e.franel,
        &BigReal::zero(d),
        &BigReal::from_int(1, d),
    )?;
    Ok(e.franel)
}

/// `eps^_n` solving `H_n = gamma + ln n + 1/(2n) - 1/(12n^2) + eps^_n/(120n^4)`.
pub fn fourth_order_epsilon(n: u64) -> Result<BigReal> {
    let e = errors_at(n)?;
    let d = e.fourth_order.digits();
    check_open(
        "fourth-order",
        n,
        &e.fourth_order,
        &BigReal::zero(d),
        &BigReal::from_int(1, d),
    )?;
    Ok(e.fourth_order)
}

/// `eps~_n = H_n - ln n`; equals 1 at `n = 1`, otherwise in `(1/n, 1)`.
pub fn weak_epsilon(n: u64) -> Result<BigReal> {
    let e = errors_at(n)?;
    let d = e.weak.digits();
    let one = BigReal::from_int(1, d);
    if n == 1 {
        return Ok(one);
    }
    check_open("weak", n, &e.weak, &BigReal::recip_u64(n, d), &one)?;
    Ok(e.weak)
}

/// Running `(n, H_n, ln n)` for `n = 1, 2, ...`, built by adding `1/n` and
/// `2 atanh(1/(2n-1))` at each step. Independent of the asymptotic series.
pub struct HarmonicSweep {
    n: u64,
    digits: u32,
    h: BigReal,
    ln_n: BigReal,
}

impl HarmonicSweep {
    pub fn new(digits: u32) -> Self {
        HarmonicSweep {
            n: 0,
            digits,
            h: BigReal::zero(digits),
            ln_n: BigReal::zero(digits),
        }
    }
}

impl Iterator for HarmonicSweep {
    type Item = (u64, BigReal, BigReal);

    fn next(&mut self) -> Option<Self::Item> {
        self.n += 1;
        let n = self.n;
        self.h = &self.h + &BigReal::recip_u64(n, self.digits);
        if n >= 2 {
            self.ln_n = &self.ln_n + &BigReal::ln_step(n, self.digits);
        }
        Some((n, self.h.clone(), self.ln_n.clone()))
    }
}

/// Exact rational to a `BigReal`; convenience for callers that mix both.
pub fn to_real(r: &Rational, digits: u32) -> BigReal {
    BigReal::from_ratio(r, digits)
}

/// Lowest terms with a positive denominator.
pub fn is_canonical(r: &Rational) -> bool {
    r.denom() > &BigInt::zero() && r.numer().gcd(r.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Term-by-term rational accumulation, the obvious oracle.
    fn naive_harmonic(n: u64) -> Rational {
        (1..=n).fold(Rational::zero(), |acc, i| acc + rational(1, i as i64))
    }

    #[test]
    fn harmonic_small_values() {
        assert_eq!(harmonic(1).unwrap(), rational(1, 1));
        assert_eq!(harmonic(4).unwrap(), rational(25, 12));
        assert_eq!(harmonic(10).unwrap(), rational(7381, 2520));
        for n in 1..=60 {
            let h = harmonic(n).unwrap();
            assert_eq!(h, naive_harmonic(n), "n = {n}");
            assert!(is_canonical(&h));
        }
    }

    #[test]
    fn harmonic_rejects_zero_and_cap() {
        assert_eq!(harmonic(0), Err(ExactMathError::NonPositive(0)));
        assert!(matches!(
            harmonic(EXACT_HARMONIC_CAP + 1),
            Err(ExactMathError::ExactCapExceeded { .. })
        ));
    }

    #[test]
    fn telescoped_difference_is_exact() {
        let (a, b) = (7u64, 13u64);
        let direct = harmonic(a * b).unwrap() - harmonic(b).unwrap();
        let telescoped =
            (b + 1..=a * b).fold(Rational::zero(), |acc, i| acc + rational(1, i as i64));
        assert_eq!(direct, telescoped);
        assert_eq!(harmonic_difference(a * b, b).unwrap(), telescoped);
    }

    #[test]
    fn bernoulli_prefix() {
        let b = bernoulli_table();
        assert_eq!(b[1], rational(-1, 2));
        assert_eq!(b[2], rational(1, 6));
        assert_eq!(b[4], rational(-1, 30));
        assert_eq!(b[6], rational(1, 42));
        assert_eq!(b[12], rational(-691, 2730));
        assert!(b[3].is_zero() && b[25].is_zero());
    }

    #[test]
    fn approx_small_n() {
        assert_eq!(
            harmonic_approx(1u64, 20).to_decimal(20),
            "1.00000000000000000000"
        );
        assert_eq!(
            harmonic_approx(10u64, 20).to_decimal(20),
            "2.92896825396825396825"
        );
    }

    #[test]
    fn approx_matches_exact_across_the_series_switch() {
        for digits in [20u32, 30, 45] {
            let t = direct_sum_threshold(digits);
            for n in [t - 1, t, t + 1, 3 * t, 5000] {
                let exact = to_real(&harmonic(n).unwrap(), digits + 10);
                let approx = harmonic_approx(n, digits);
                let err = (&exact - &approx).abs();
                assert!(
                    err < BigReal::ten_pow_neg(digits, digits + 10),
                    "n={n} digits={digits} err={}",
                    err.to_f64()
                );
            }
        }
    }

    #[test]
    fn approx_million_against_compensated_sum() {
        // Neumaier summation in f64, largest terms last.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for i in (1..=1_000_000u64).rev() {
            let x = 1.0 / i as f64;
            let t = sum + x;
            if sum.abs() >= x.abs() {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
        }
        let reference = sum + comp;
        let approx = harmonic_approx(1_000_000u64, 20).to_f64();
        assert!((approx - reference).abs() / reference < 1e-15);
        assert_eq!(
            harmonic_approx(1_000_000u64, 25).to_decimal(25),
            "14.3927267228657236313811275"
        );
    }

    #[test]
    fn havil_examples() {
        let e1 = havil_epsilon(1).unwrap();
        assert_eq!(e1.to_decimal(20), "0.42278433509846713939");
        let e2 = havil_epsilon(2).unwrap();
        assert_eq!(e2.to_decimal(20), "0.22963715453852182998");
        let e100 = havil_epsilon(100).unwrap().to_f64();
        assert!(e100 > 1.0 / 202.0 && e100 < 1.0 / 200.0);
    }

    #[test]
    fn franel_and_fourth_order_examples() {
        assert_eq!(
            franel_epsilon(1).unwrap().to_decimal(15),
            "0.617725319212263"
        );
        for n in [10u64, 10_000] {
            let f = franel_epsilon(n).unwrap().to_f64();
            assert!(f > 0.0 && f < 1.0);
        }
        assert_eq!(
            fourth_order_epsilon(1).unwrap().to_decimal(15),
            "0.734120211816057"
        );
    }

    #[test]
    fn weak_examples() {
        assert_eq!(weak_epsilon(1).unwrap(), BigReal::from_int(1, 30));
        assert_eq!(weak_epsilon(2).unwrap().to_decimal(4), "0.8069");
        let w = weak_epsilon(1000).unwrap().to_f64();
        assert!(w > 0.001 && w < 1.0);
    }

    #[test]
    fn sweep_matches_exact_and_direct_log() {
        let sweep: Vec<_> = HarmonicSweep::new(40).take(300).collect();
        for (n, h, ln_n) in sweep.iter().step_by(37) {
            let exact = to_real(&harmonic(*n).unwrap(), 40);
            assert!((&exact - h).abs() < BigReal::ten_pow_neg(35, 40));
            assert!((&BigReal::ln_u64(*n, 40) - ln_n).abs() < BigReal::ten_pow_neg(35, 40));
        }
    }

    #[test]
    fn bound_violation_is_reported() {
        let gamma = BigReal::euler_gamma(40);
        // Feed a deliberately wrong H_n.
        let bogus = BigReal::from_int(5, 40);
        let e = HarmonicErrors::from_parts(3, &bogus, &BigReal::ln_u64(3, 40), &gamma);
        assert!(matches!(
            e.check(),
            Err(ExactMathError::BoundViolation {
                bound: "Havil",
                n: 3,
                ..
            })
        ));
    }
}
