//! Periods of the Legendre family `y^2 = x(x-1)(x-λ)`.
//!
//! `ω₂ = π F(1/2,1/2;1;λ)` and `ω₁ = i π F(1/2,1/2;1;1-λ)`, with the
//! normalized period `τ = -ω₂/ω₁ = i F(λ)/F(1-λ)` in the upper half plane.

use num_rational::BigRational;

use super::hyper::gauss_2f1;
use super::num::{Complex, Real};
use super::ode::{default_path, pf_continue, HypergeometricOde};
use super::{guarded, PeriodError, PeriodValue, GUARD_DIGITS};

/// Beyond this radius the series is replaced by continuation from `1/2`.
const SERIES_RADIUS: f64 = 0.9;

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn check_lambda(lambda: &Complex) -> Result<(), PeriodError> {
    let one = Complex::one();
    if lambda.is_zero() || (lambda - &one).is_zero() {
        return Err(PeriodError::DegenerateLambda);
    }
    Ok(())
}

fn on_cut(x: &Complex) -> bool {
    x.im.is_zero() && x.re > Real::one()
}

/// `F(1/2,1/2;1;x)` on the principal branch.
fn legendre_f(x: &Complex, prec: u32) -> Result<PeriodValue, PeriodError> {
    if on_cut(x) {
        return Err(PeriodError::BranchCut);
    }
    let (h, one) = (half(), BigRational::from_integer(1.into()));
    if x.abs().to_f64() < SERIES_RADIUS {
        return gauss_2f1(&h, &h, &one, x, prec);
    }
    let start = Complex::from_ratio(&h);
    let y0 = gauss_2f1(&h, &h, &one, &start, prec + 5)?;
    let three_halves = BigRational::new(3.into(), 2.into());
    let two = BigRational::from_integer(2.into());
    let d = gauss_2f1(&three_halves, &three_halves, &two, &start, prec + 5)?;
    let dy0 = guarded(prec, || d.scale(&Complex::from_real(Real::ratio(1, 4))));
    let path = default_path(&start, x);
    let (y, _) = pf_continue(&HypergeometricOde::legendre(), &path, &y0, &dy0, prec)?;
    Ok(y)
}

/// `(ω₁, ω₂)` from hypergeometric series, continued where needed.
pub fn elliptic_periods(
    lambda: &Complex,
    prec: u32,
) -> Result<(PeriodValue, PeriodValue), PeriodError> {
    check_lambda(lambda)?;
    let f = legendre_f(lambda, prec)?;
    let g = legendre_f(&(Complex::one() - lambda), prec)?;
    Ok(guarded(prec, || {
        let pi = Complex::from_real(Real::pi());
        let ipi = Complex::new(Real::zero(), Real::pi());
        (g.scale(&ipi), f.scale(&pi))
    }))
}

/// Arithmetic-geometric mean with the optimal choice of square root.
pub fn agm(a: &Complex, b: &Complex, prec: u32) -> Complex {
    guarded(prec, || {
        let tol = Real::pow10(-((prec + GUARD_DIGITS) as i32));
        let (mut a, mut b) = (a.clone(), b.clone());
        for _ in 0..200 {
            if (&a - &b).abs() <= &tol * a.abs() {
                break;
            }
            let next_a = (&a + &b).scale(&Real::ratio(1, 2));
            let mut next_b = (&a * &b).sqrt();
            if (&next_a - &next_b).abs() > (&next_a + &next_b).abs() {
                next_b = -next_b;
            }
            a = next_a;
            b = next_b;
        }
        a
    })
}

/// `(ω₁, ω₂)` via `F(1/2,1/2;1;x) = 1/AGM(1, √(1-x))`.
pub fn agm_periods(lambda: &Complex, prec: u32) -> Result<(PeriodValue, PeriodValue), PeriodError> {
    check_lambda(lambda)?;
    let one = Complex::one();
    let m2 = agm(&one, &(&one - lambda).sqrt(), prec);
    let m1 = agm(&one, &lambda.sqrt(), prec);
    Ok(guarded(prec, || {
        let w2 = Complex::from_real(Real::pi()) / m2;
        let w1 = Complex::new(Real::zero(), Real::pi()) / m1;
        let e1 = w1.abs() * Real::pow10(-((prec + 6) as i32));
        let e2 = w2.abs() * Real::pow10(-((prec + 6) as i32));
        (PeriodValue::new(w1, e1, prec), PeriodValue::new(w2, e2, prec))
    }))
}

/// Normalized period `τ = -ω₂/ω₁ = i F(λ)/F(1-λ)`.
pub fn tau(lambda: &Complex, prec: u32) -> Result<PeriodValue, PeriodError> {
    let (w1, w2) = elliptic_periods(lambda, prec)?;
    guarded(prec, || {
        let q = w2.div(&w1)?;
        Ok(q.scale(&Complex::from_real(Real::from_i64(-1))))
    })
}
