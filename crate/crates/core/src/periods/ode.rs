//! Analytic continuation of hypergeometric functions along polylines.
//!
//! The equation `s(1-s) y'' + (c - (a+b+1) s) y' - ab y = 0` is solved by
//! local Taylor expansion. Each step stays within a third of the distance
//! to the nearest singular point, so the local series converge
//! geometrically and their tails are estimated from the last terms.

use num_rational::BigRational;

use super::num::{Complex, Real};
use super::{guarded, PeriodError, PeriodValue, GUARD_DIGITS};

/// Minimum distance a path keeps from `0` and `1` unless an endpoint is
/// itself closer.
pub const DEFAULT_CLEARANCE: f64 = 0.05;

const MAX_TAYLOR_TERMS: usize = 4000;
const MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergeometricOde {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl HypergeometricOde {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Self {
        Self { a, b, c }
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Parameters `(1/2, 1/2, 1)` of the Legendre family.
    pub fn legendre() -> Self {
        Self::new(Self::ratio(1, 2), Self::ratio(1, 2), Self::ratio(1, 1))
    }

    /// Parameters `(1/4, 3/4, 1/2)`.
    pub fn quarter() -> Self {
        Self::new(Self::ratio(1, 4), Self::ratio(3, 4), Self::ratio(1, 2))
    }
}

/// Transfer matrix mapping `(y, y')` at the start of a path to the end.
#[derive(Debug, Clone)]
pub struct Transfer {
    pub matrix: [[Complex; 2]; 2],
    /// Entrywise absolute error bound.
    pub err: Real,
    pub steps: usize,
}

impl Transfer {
    pub fn determinant(&self) -> Complex {
        let m = &self.matrix;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn apply(&self, y: &Complex, dy: &Complex) -> (Complex, Complex) {
        let m = &self.matrix;
        (&m[0][0] * y + &m[0][1] * dy, &m[1][0] * y + &m[1][1] * dy)
    }

    fn norm(&self) -> Real {
        let m = &self.matrix;
        let r0 = m[0][0].abs() + m[0][1].abs();
        let r1 = m[1][0].abs() + m[1][1].abs();
        r0.max(r1)
    }
}

type P2 = (f64, f64);

fn to_pt(z: &Complex) -> P2 {
    z.to_f64()
}

fn dist(a: P2, b: P2) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn point_segment_distance(p: P2, u: P2, v: P2) -> f64 {
    let d = (v.0 - u.0, v.1 - u.1);
    let len2 = d.0 * d.0 + d.1 * d.1;
    if len2 == 0.0 {
        return dist(p, u);
    }
    let t = (((p.0 - u.0) * d.0 + (p.1 - u.1) * d.1) / len2).clamp(0.0, 1.0);
    dist(p, (u.0 + t * d.0, u.1 + t * d.1))
}

fn check_segment(u: &Complex, v: &Complex, clearance: f64) -> Result<(), PeriodError> {
    let (pu, pv) = (to_pt(u), to_pt(v));
    for e in [(0.0, 0.0), (1.0, 0.0)] {
        let allowed = clearance.min(dist(pu, e)).min(dist(pv, e));
        let d = point_segment_distance(e, pu, pv);
        if d == 0.0 || d + 1e-15 < allowed {
            return Err(PeriodError::SingularPath(format!(
                "segment ({:.4},{:.4})->({:.4},{:.4}) comes within {d:.3e} of {}",
                pu.0, pu.1, pv.0, pv.1, e.0
            )));
        }
    }
    Ok(())
}

/// True if the segment meets the ray `[1, ∞)` anywhere but its endpoints.
fn crosses_cut(u: P2, v: P2) -> bool {
    if (u.1 > 0.0 && v.1 > 0.0) || (u.1 < 0.0 && v.1 < 0.0) {
        return false;
    }
    if u.1 == v.1 {
        return false;
    }
    let t = u.1 / (u.1 - v.1);
    let x = u.0 + t * (v.0 - u.0);
    x > 1.0 && t > 0.0 && t < 1.0
}

/// A path from `from` to `to` that keeps the default clearance and does not
/// cross the cut `[1, ∞)`: the straight segment when possible, otherwise a
/// detour through `1/2 ± i/2` on the side of `to`.
pub fn default_path(from: &Complex, to: &Complex) -> Vec<Complex> {
    let direct = vec![from.clone(), to.clone()];
    let ok = |pts: &[Complex]| {
        pts.windows(2).all(|w| {
            check_segment(&w[0], &w[1], DEFAULT_CLEARANCE).is_ok()
                && !crosses_cut(to_pt(&w[0]), to_pt(&w[1]))
        })
    };
    if ok(&direct) {
        return direct;
    }
    let up = to.im.to_f64() >= 0.0;
    let signs = if up { [0.5, -0.5] } else { [-0.5, 0.5] };
    for s in signs {
        let w = Complex::from_f64(0.5, s);
        let path = vec![from.clone(), w, to.clone()];
        if ok(&path) {
            return path;
        }
    }
    direct
}

struct Coeffs {
    p0: Complex,
    p1: Complex,
    q0: Complex,
    q1: Real,
    r: Real,
}

impl Coeffs {
    fn at(ode: &HypergeometricOde, s0: &Complex) -> Self {
        let a = Real::from_ratio(&ode.a);
        let b = Real::from_ratio(&ode.b);
        let c = Real::from_ratio(&ode.c);
        let one = Complex::one();
        let abc1 = &a + &b + Real::one();
        Coeffs {
            p0: s0 * &(&one - s0),
            p1: &one - &s0.scale(&Real::from_i64(2)),
            q0: Complex::from_real(c) - s0.scale(&abc1),
            q1: -abc1,
            r: -(&a * &b),
        }
    }
}

/// One Taylor step of length `h` from the expansion point; returns the
/// local transfer matrix and a truncation estimate.
fn taylor_step(k: &Coeffs, h: &Complex, tol: &Real) -> Result<([[Complex; 2]; 2], Real), PeriodError> {
    let mut mats: Vec<(Complex, Complex)> = Vec::with_capacity(2);
    let mut trunc = Real::zero();
    let h2 = h * h;
    for init in 0..2 {
        // z_n = y_n h^n
        let mut z0 = if init == 0 { Complex::one() } else { Complex::zero() };
        let mut z1 = if init == 0 { Complex::zero() } else { h.clone() };
        let mut val = &z0 + &z1;
        let mut der = z1.clone();
        let mut peak = val.abs().max(Real::one());
        let mut settled = 0;
        let mut n = 0usize;
        loop {
            if n > MAX_TAYLOR_TERMS {
                return Err(PeriodError::SingularPath("local series failed to converge".into()));
            }
            let nf = n as i64;
            let lin = (&k.p1.scale(&Real::from_i64(nf)) + &k.q0).scale(&Real::from_i64(nf + 1));
            let quad = Real::from_i64(-nf * (nf - 1)) + &k.q1 * Real::from_i64(nf) + &k.r;
            let num = &(&lin * h) * &z1 + (&h2 * &z0).scale(&quad);
            let z2 = -(num / k.p0.scale(&Real::from_i64((nf + 2) * (nf + 1))));
            val = &val + &z2;
            der = &der + &z2.scale(&Real::from_i64(nf + 2));
            let mag = z2.abs();
            if mag > peak {
                peak = mag.clone();
            }
            let small = &mag * Real::from_i64(nf + 3) <= tol * &peak;
            settled = if small { settled + 1 } else { 0 };
            z0 = z1;
            z1 = z2;
            n += 1;
            if settled >= 3 {
                let est = (z0.abs() + z1.abs()) * Real::from_i64(4 * (nf + 4));
                trunc = trunc.max(est * (Real::one() + Real::one() / h.abs()));
                break;
            }
        }
        mats.push((val, der / h));
    }
    let (c0, c1) = (mats.remove(0), mats.remove(0));
    Ok(([[c0.0, c1.0], [c0.1, c1.1]], trunc))
}

fn mat_mul(a: &[[Complex; 2]; 2], b: &[[Complex; 2]; 2]) -> [[Complex; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity() -> [[Complex; 2]; 2] {
    [[Complex::one(), Complex::zero()], [Complex::zero(), Complex::one()]]
}

fn mat_norm(m: &[[Complex; 2]; 2]) -> Real {
    let r0 = m[0][0].abs() + m[0][1].abs();
    let r1 = m[1][0].abs() + m[1][1].abs();
    r0.max(r1)
}

/// Transfer matrix of the equation along the polyline `path`.
pub fn pf_transfer(
    ode: &HypergeometricOde,
    path: &[Complex],
    clearance: f64,
    prec: u32,
) -> Result<Transfer, PeriodError> {
    if path.is_empty() {
        return Err(PeriodError::InvalidInput("empty path".into()));
    }
    for w in path.windows(2) {
        check_segment(&w[0], &w[1], clearance)?;
    }
    guarded(prec, || {
        let tol = Real::pow10(-((prec + GUARD_DIGITS) as i32));
        let mut t = identity();
        let mut err = Real::zero();
        let mut steps = 0usize;
        for w in path.windows(2) {
            let target = &w[1];
            let mut cur = w[0].clone();
            loop {
                let remaining = (target - &cur).abs();
                if remaining.is_zero() {
                    break;
                }
                let pc = to_pt(&cur);
                let rho = dist(pc, (0.0, 0.0)).min(dist(pc, (1.0, 0.0)));
                if rho == 0.0 {
                    return Err(PeriodError::SingularPath("path starts at a singular point".into()));
                }
                let hmax = Real::from_f64(rho / 3.0);
                let h = if remaining <= hmax {
                    target - &cur
                } else {
                    (target - &cur).scale(&(&hmax / &remaining))
                };
                let (m, trunc) = taylor_step(&Coeffs::at(ode, &cur), &h, &tol)?;
                let tn = mat_norm(&t);
                err = mat_norm(&m) * &err + trunc * tn;
                t = mat_mul(&m, &t);
                cur = if remaining <= hmax { target.clone() } else { &cur + &h };
                steps += 1;
                if steps > MAX_STEPS {
                    return Err(PeriodError::SingularPath("step limit exceeded".into()));
                }
            }
        }
        let rounding = mat_norm(&t) * Real::from_i64(steps as i64 + 1) * Real::pow10(-((prec + GUARD_DIGITS) as i32 + 3));
        Ok(Transfer {
            matrix: t,
            err: err + rounding,
            steps,
        })
    })
}

/// Continues the solution with initial data `(y0, dy0)` at `path[0]` to the
/// end of `path`, returning `(y, y')` there.
pub fn pf_continue(
    ode: &HypergeometricOde,
    path: &[Complex],
    y0: &PeriodValue,
    dy0: &PeriodValue,
    prec: u32,
) -> Result<(PeriodValue, PeriodValue), PeriodError> {
    let t = pf_transfer(ode, path, DEFAULT_CLEARANCE, prec)?;
    guarded(prec, || {
        let (y, dy) = t.apply(&y0.value(), &dy0.value());
        let err = t.norm() * (&y0.err + &dy0.err) + &t.err * (y0.abs() + dy0.abs());
        Ok((
            PeriodValue::new(y, err.clone(), prec),
            PeriodValue::new(dy, err, prec),
        ))
    })
}
