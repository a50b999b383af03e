//! Appell's `F1` by diagonal summation of its double series.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::num::{Complex, Real};
use super::{guarded, PeriodError, PeriodValue, GUARD_DIGITS};

const MAX_DIAGONALS: usize = 20_000;

fn abs_f64(x: &BigRational) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}

/// `F1(a; b, b'; c; x, y) = Σ (a)_{m+n} (b)_m (b')_n / ((c)_{m+n} m! n!) x^m y^n`.
///
/// Summed along diagonals `m + n = N`. With `u_m = (b)_m x^m/m!`,
/// `|u_m| <= ρ_x^m` for `ρ_x = max(1,|b|)|x|` (likewise `v_n`), and
/// `|(a)_N/(c)_N|` grows by at most `κ = (|a|+N)/(N-|c|)` per diagonal, so
/// the tail from diagonal `N` is at most
/// `|w_N| ρ^N [(N+1)/(1-κρ) + κρ/(1-κρ)^2]` with `ρ = max(ρ_x, ρ_y)`.
pub fn appell_f1(
    a: &BigRational,
    b: &BigRational,
    b2: &BigRational,
    c: &BigRational,
    x: &Complex,
    y: &Complex,
    prec: u32,
) -> Result<PeriodValue, PeriodError> {
    if c.is_integer() && !c.is_positive() {
        return Err(PeriodError::PolarC);
    }
    let (xa, ya) = (x.abs().to_f64(), y.abs().to_f64());
    if xa >= 1.0 || ya >= 1.0 {
        return Err(PeriodError::OutOfRegion(format!("|x| = {xa}, |y| = {ya}")));
    }
    let rho = (abs_f64(b).max(1.0) * xa).max(abs_f64(b2).max(1.0) * ya);
    if rho >= 1.0 {
        return Err(PeriodError::OutOfRegion(format!(
            "tail bound needs max(1,|b|)|x| < 1 and max(1,|b'|)|y| < 1, got {rho}"
        )));
    }
    let (fa, fc) = (abs_f64(a), abs_f64(c));
    guarded(prec, || {
        let ar = Real::from_ratio(a);
        let br = Real::from_ratio(b);
        let b2r = Real::from_ratio(b2);
        let cr = Real::from_ratio(c);
        let tol = Real::pow10(-((prec + GUARD_DIGITS) as i32));
        let ulp = Real::pow10(-((prec + GUARD_DIGITS) as i32 + 5));
        let rho_r = Real::from_f64(rho);
        let mut u: Vec<Complex> = vec![Complex::one()];
        let mut v: Vec<Complex> = vec![Complex::one()];
        let mut w = Real::one();
        let mut rho_pow = Real::one();
        let mut sum = Complex::zero();
        let mut peak = Real::one();
        for n in 0..MAX_DIAGONALS {
            let nf = n as f64;
            if n > 0 {
                let k = Real::from_i64(n as i64 - 1);
                let kk = Real::from_i64(n as i64);
                let um = (&u[n - 1] * x).scale(&((&br + &k) / &kk));
                let vm = (&v[n - 1] * y).scale(&((&b2r + &k) / &kk));
                u.push(um);
                v.push(vm);
                w = w * (&ar + &k) / (&cr + &k);
                rho_pow = rho_pow * &rho_r;
            }
            if nf > fc && n > 0 {
                let kappa = (fa + nf) / (nf - fc);
                let r = kappa * rho;
                if r < 1.0 {
                    let factor = (nf + 1.0) / (1.0 - r) + r / ((1.0 - r) * (1.0 - r));
                    let tail = w.abs() * &rho_pow * Real::from_f64(factor * (1.0 + 1e-9));
                    if tail < &tol * sum.abs().max(Real::one()) {
                        let rounding = Real::from_f64(4.0 * (nf + 1.0) * (nf + 1.0)) * &peak * &ulp;
                        return Ok(PeriodValue::new(sum, tail + rounding, prec));
                    }
                }
            }
            if w.is_zero() {
                let rounding = Real::from_f64(4.0 * (nf + 1.0) * (nf + 1.0)) * &peak * &ulp;
                return Ok(PeriodValue::new(sum, rounding, prec));
            }
            let mut diag = Complex::zero();
            for m in 0..=n {
                diag = diag + &u[m] * &v[n - m];
            }
            sum = sum + diag.scale(&w);
            let s = sum.abs();
            if s > peak {
                peak = s;
            }
        }
        Err(PeriodError::OutOfRegion(format!(
            "double series did not converge in {MAX_DIAGONALS} diagonals"
        )))
    })
}
