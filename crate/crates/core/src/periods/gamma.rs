//! Gamma and Beta at rational arguments.
//!
//! Spouge's approximation with parameter `a` chosen so that the relative
//! truncation error `a^{-1/2} (2π)^{-(a+1/2)}` is below the requested
//! precision; the alternating coefficients are summed with `prec + 30`
//! extra digits. Arguments below `1/2` use the reflection formula.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::num::{with_digits, Complex, Real};
use super::{guarded, PeriodError, PeriodValue, GUARD_DIGITS};

fn spouge(z: &Real, digits: u32) -> Real {
    // Γ(z + 1) for z > -1/2.
    let a = ((digits as f64 + 5.0) * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI).ln()).ceil() as i64 + 1;
    let ar = Real::from_i64(a);
    let half = Real::ratio(1, 2);
    let mut sum = (Real::pi() * Real::from_i64(2)).sqrt();
    let mut fact = Real::one();
    for k in 1..a {
        if k > 1 {
            fact = fact * Real::from_i64(k - 1);
        }
        let base = Real::from_i64(a - k);
        let ck = base.powf(&(Real::from_i64(k) - &half)) * Real::from_i64(a - k).exp() / &fact;
        let term = ck / (z + Real::from_i64(k));
        sum = if k % 2 == 1 { sum + term } else { sum - term };
    }
    let za = z + &ar;
    za.powf(&(z + &half)) * (-za).exp() * sum
}

fn gamma_real(x: &BigRational, prec: u32) -> Real {
    let work = 2 * prec + 30;
    with_digits(work, || {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        if x < &half {
            let xr = Real::from_ratio(x);
            let one_minus = BigRational::one() - x;
            let g = spouge(&(Real::from_ratio(&one_minus) - Real::one()), prec + GUARD_DIGITS);
            Real::pi() / ((Real::pi() * xr).sin() * g)
        } else {
            let z = Real::from_ratio(&(x - BigRational::one()));
            spouge(&z, prec + GUARD_DIGITS)
        }
    })
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `Γ(x)` for rational `x`.
pub fn gamma_value(x: &BigRational, prec: u32) -> Result<PeriodValue, PeriodError> {
    if x.is_integer() && !x.is_positive() {
        return Err(PeriodError::PoleAtNonPositiveInteger(x.to_string()));
    }
    if x.is_integer() {
        if let Some(n) = x.to_integer().to_u64().filter(|n| *n <= 2000) {
            let f = factorial(n - 1);
            return Ok(guarded(prec, || {
                PeriodValue::new(Complex::from_real(Real::from_bigint(&f)), Real::zero(), prec)
            }));
        }
    }
    let g = gamma_real(x, prec);
    Ok(guarded(prec, || {
        let v = g.rounded_to_bits(super::num::working_bits());
        let err = v.abs() * Real::pow10(-((prec + 5) as i32));
        PeriodValue::new(Complex::from_real(v), err, prec)
    }))
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_value(a: &BigRational, b: &BigRational, prec: u32) -> Result<PeriodValue, PeriodError> {
    let ga = gamma_value(a, prec + 5)?;
    let gb = gamma_value(b, prec + 5)?;
    let s = a + b;
    if s.is_integer() && !s.is_positive() {
        return Ok(guarded(prec, || PeriodValue::new(Complex::zero(), Real::zero(), prec)));
    }
    let gs = gamma_value(&s, prec + 5)?;
    guarded(prec, || {
        let mut v = ga.mul(&gb).div(&gs)?;
        v.precision = prec;
        if v.err.is_zero() && !(v.re.is_zero()) {
            v.err = v.abs() * Real::pow10(-((prec + 5) as i32));
        }
        Ok(v)
    })
}
