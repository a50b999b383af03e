//! Gauss hypergeometric series and the closed forms of the
//! `(1/4, 3/4, 1/2)` family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::num::{with_digits, Complex, Real};
use super::{guarded, PeriodError, PeriodValue, GUARD_DIGITS};

const MAX_TERMS: usize = 2_000_000;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn is_nonpositive_integer(c: &BigRational) -> bool {
    c.is_integer() && !c.is_positive()
}

fn abs_f64(x: &BigRational) -> f64 {
    let r = x.abs();
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::INFINITY);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::INFINITY);
    n / d
}

/// `2F1(a, b; c; x)` by its power series, `|x| < 1`.
///
/// The tail after `N` terms is bounded by `|t_N| / (1 - |x| U(N))` where
/// `U(N) = (1 + |a|/N)(1 + |b|/N) / (1 - |c|/N)` bounds every later term
/// ratio once `N > |c|`.
pub fn gauss_2f1(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    x: &Complex,
    prec: u32,
) -> Result<PeriodValue, PeriodError> {
    if is_nonpositive_integer(c) {
        return Err(PeriodError::PolarC);
    }
    let xa = x.abs().to_f64();
    if xa >= 1.0 {
        return Err(PeriodError::OutOfRegion(format!("|x| = {xa} >= 1")));
    }
    let (fa, fb, fc) = (abs_f64(a), abs_f64(b), abs_f64(c));
    guarded(prec, || {
        let ar = Real::from_ratio(a);
        let br = Real::from_ratio(b);
        let cr = Real::from_ratio(c);
        let tol = Real::pow10(-((prec + GUARD_DIGITS) as i32));
        let ulp = Real::pow10(-((prec + GUARD_DIGITS) as i32 + 5));
        let mut term = Complex::one();
        let mut sum = Complex::one();
        let mut peak = Real::one();
        for n in 0..MAX_TERMS {
            let nr = Real::from_i64(n as i64);
            let ratio = (&ar + &nr) * (&br + &nr) / ((&cr + &nr) * Real::from_i64(n as i64 + 1));
            term = (&term * x).scale(&ratio);
            let big_n = (n + 1) as f64;
            let tabs = term.abs();
            if tabs.is_zero() {
                let rounding = Real::from_f64(4.0 * big_n) * &peak * &ulp;
                return Ok(PeriodValue::new(sum, rounding, prec));
            }
            if big_n > fc {
                let u = (1.0 + fa / big_n) * (1.0 + fb / big_n) / (1.0 - fc / big_n);
                let qf = xa * u;
                if qf < 1.0 {
                    let tail = &tabs * Real::from_f64(1.0 / (1.0 - qf) * (1.0 + 1e-9));
                    let scale = sum.abs().max(Real::one());
                    if tail < &tol * &scale {
                        let rounding = Real::from_f64(4.0 * big_n) * &peak * &ulp;
                        return Ok(PeriodValue::new(sum, tail + rounding, prec));
                    }
                }
            }
            sum = &sum + &term;
            let sabs = sum.abs();
            if sabs > peak {
                peak = sabs;
            }
        }
        Err(PeriodError::OutOfRegion(format!(
            "series did not converge in {MAX_TERMS} terms"
        )))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `F(1/4, 3/4; 1/2; s) = ((1-√s)^{-1/2} + (1+√s)^{-1/2}) / 2`.
    First,
    /// `F(5/4, 3/4; 3/2; s) = ((1-√s)^{-1/2} - (1+√s)^{-1/2}) / √s`.
    Second,
}

fn check_cut(s: &Complex) -> Result<(), PeriodError> {
    if s.im.is_zero() && s.re >= Real::one() {
        Err(PeriodError::BranchCut)
    } else {
        Ok(())
    }
}

/// Extra digits to absorb the cancellation in `A - B` for small `|s|`.
fn cancellation_digits(s: &Complex) -> u32 {
    let l = s.abs().log10_abs();
    if l.is_finite() && l < 0.0 {
        (-l / 2.0).ceil() as u32 + 2
    } else {
        2
    }
}

/// `(A, B, √s)` with `A = (1-√s)^{-1/2}`, `B = (1+√s)^{-1/2}`.
fn legs(s: &Complex) -> (Complex, Complex, Complex) {
    let r = s.sqrt();
    let one = Complex::one();
    let a = (&one - &r).sqrt().recip();
    let b = (&one + &r).sqrt().recip();
    (a, b, r)
}

/// Evaluates one of the two algebraic closed forms with principal roots.
pub fn hypergeom_closed_forms(
    s: &Complex,
    which: ClosedForm,
    prec: u32,
) -> Result<PeriodValue, PeriodError> {
    check_cut(s)?;
    if s.is_zero() {
        return Ok(guarded(prec, || PeriodValue::new(Complex::one(), Real::zero(), prec)));
    }
    let extra = cancellation_digits(s);
    let v = with_digits(prec + GUARD_DIGITS + extra, || {
        let (a, b, r) = legs(s);
        match which {
            ClosedForm::First => (&a + &b).scale(&Real::ratio(1, 2)),
            ClosedForm::Second => (&a - &b) / &r,
        }
    });
    Ok(guarded(prec, || {
        let err = v.abs() * Real::pow10(-((prec + 8) as i32));
        PeriodValue::new(v, err, prec)
    }))
}

/// The Schwarz map `2(A - B)/(A + B)` in closed form.
pub fn schwarz_t(s: &Complex, prec: u32) -> Result<PeriodValue, PeriodError> {
    check_cut(s)?;
    if s.is_zero() {
        return Ok(guarded(prec, || PeriodValue::new(Complex::zero(), Real::zero(), prec)));
    }
    let extra = cancellation_digits(s);
    let v = with_digits(prec + GUARD_DIGITS + extra, || {
        let (a, b, _) = legs(s);
        ((&a - &b) / (&a + &b)).scale(&Real::from_i64(2))
    });
    Ok(guarded(prec, || {
        let err = v.abs() * Real::pow10(-((prec + 8) as i32));
        PeriodValue::new(v, err, prec)
    }))
}

/// The Schwarz map as the series quotient `√s F(5/4,3/4;3/2;s) / F(1/4,3/4;1/2;s)`.
pub fn schwarz_t_series(s: &Complex, prec: u32) -> Result<PeriodValue, PeriodError> {
    check_cut(s)?;
    let num = gauss_2f1(&q(5, 4), &q(3, 4), &q(3, 2), s, prec)?;
    let den = gauss_2f1(&q(1, 4), &q(3, 4), &q(1, 2), s, prec)?;
    guarded(prec, || {
        let ratio = num.div(&den)?;
        Ok(ratio.scale(&s.sqrt()))
    })
}
