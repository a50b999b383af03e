//! Euler-type integrals on the quintic cyclic cover
//! `w^5 = x(x-1)(x-a1)(x-a2)` by tanh-sinh quadrature.
//!
//! Each factor `(W - e)^{-2/5}` uses the principal branch. Along a real
//! segment this is the boundary value from above, so the contour is
//! deformed above any branch point it meets. Segments are split at branch
//! points lying on them and bisected until every other branch point is at
//! least half a piece length away, which keeps the double-exponential
//! rule converging at full speed.

use std::cell::RefCell;
use std::rc::Rc;

use super::num::{Complex, Real};
use super::{guarded, PeriodError, PeriodValue, GUARD_DIGITS};

const MAX_LEVEL: u32 = 10;
const MIN_LEVEL: u32 = 3;
const MAX_DEPTH: u32 = 80;

/// The three periods `P1 = ∫_0^1`, `P2 = ∫_1^{a1}`, `P3 = ∫_0^{a2}`.
#[derive(Debug, Clone)]
pub struct VzPeriods {
    pub p1: PeriodValue,
    pub p2: PeriodValue,
    pub p3: PeriodValue,
}

struct Node {
    t: Real,
    t_c: Real,
    weight: Real,
}

/// Node tables per level, built on demand; level `k` holds only the nodes
/// new at that level.
struct Nodes {
    xmax: f64,
    levels: RefCell<Vec<Rc<Vec<Node>>>>,
}

impl Nodes {
    fn new(prec: u32) -> Self {
        let xmax = (5.0 * (prec as f64 + 15.0) * std::f64::consts::LN_10 / std::f64::consts::PI).asinh();
        Nodes {
            xmax,
            levels: RefCell::new(Vec::new()),
        }
    }

    fn level(&self, level: u32) -> Rc<Vec<Node>> {
        let mut levels = self.levels.borrow_mut();
        while levels.len() <= level as usize {
            let k = levels.len() as i32;
            let h = 0.5f64.powi(k);
            let jmax = (self.xmax / h).ceil() as i64;
            let mut nodes = Vec::new();
            for j in -jmax..=jmax {
                if k > 0 && j % 2 == 0 {
                    continue;
                }
                let x = Real::from_i64(j) * Real::from_f64(h);
                let y = Real::pi() * x.sinh();
                let e = y.exp();
                let one = Real::one();
                let t = &e / (&one + &e);
                let t_c = &one / (&one + &e);
                let weight = Real::pi() * x.cosh() * &t * &t_c;
                nodes.push(Node { t, t_c, weight });
            }
            levels.push(Rc::new(nodes));
        }
        levels[level as usize].clone()
    }
}

fn f64pt(z: &Complex) -> (f64, f64) {
    z.to_f64()
}

fn dist_point_segment(p: (f64, f64), u: (f64, f64), v: (f64, f64)) -> f64 {
    let d = (v.0 - u.0, v.1 - u.1);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - u.0) * d.0 + (p.1 - u.1) * d.1) / len2).clamp(0.0, 1.0)
    };
    let q = (u.0 + t * d.0, u.1 + t * d.1);
    ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
}

struct Integrand<'a> {
    branch: &'a [Complex],
    exponent: Real,
}

impl Integrand<'_> {
    /// Integrand at `W = u + (v-u) t`; differences to endpoints that are
    /// branch points are formed from `t` and `1-t` directly.
    fn eval(&self, u: &Complex, v: &Complex, node: &Node) -> Complex {
        let d = v - u;
        let w = u + &d.scale(&node.t);
        let mut log_abs = Real::zero();
        let mut arg = Real::zero();
        for e in self.branch {
            let diff = if e == u {
                d.scale(&node.t)
            } else if e == v {
                (u - v).scale(&node.t_c)
            } else {
                &w - e
            };
            let m = diff.norm_sqr();
            if m.is_zero() {
                return Complex::zero();
            }
            log_abs = log_abs + m.ln();
            arg = arg + diff.arg();
        }
        let mag = (log_abs * Real::ratio(1, 2) * &self.exponent).exp();
        let ph = arg * &self.exponent;
        Complex::new(&mag * ph.cos(), &mag * ph.sin())
    }
}

fn tanh_sinh(
    f: &Integrand<'_>,
    u: &Complex,
    v: &Complex,
    nodes: &Nodes,
    tol: &Real,
) -> (Complex, Real) {
    let d = v - u;
    let mut raw = Complex::zero();
    let mut prev: Option<Complex> = None;
    for level in 0..=MAX_LEVEL {
        for node in nodes.level(level).iter() {
            raw = raw + f.eval(u, v, node).scale(&node.weight);
        }
        let h = Real::from_f64(0.5f64.powi(level as i32));
        let est = (&raw * &d).scale(&h);
        if let Some(p) = &prev {
            let diff = (&est - p).abs();
            let scale = est.abs().max(Real::pow10(-5));
            if level >= MIN_LEVEL && diff <= tol * &scale {
                return (est, diff);
            }
            if level == MAX_LEVEL {
                return (est, diff);
            }
        }
        prev = Some(est);
    }
    unreachable!("level loop returns at MAX_LEVEL")
}

fn split_points(u: &Complex, v: &Complex, branch: &[Complex]) -> Vec<Complex> {
    let (pu, pv) = (f64pt(u), f64pt(v));
    let len = ((pv.0 - pu.0).powi(2) + (pv.1 - pu.1).powi(2)).sqrt();
    let mut inner: Vec<(f64, Complex)> = Vec::new();
    for e in branch {
        if e == u || e == v {
            continue;
        }
        let pe = f64pt(e);
        if dist_point_segment(pe, pu, pv) <= 1e-14 * len.max(1.0) {
            let t = ((pe.0 - pu.0) * (pv.0 - pu.0) + (pe.1 - pu.1) * (pv.1 - pu.1)) / (len * len);
            if t > 0.0 && t < 1.0 {
                inner.push((t, e.clone()));
            }
        }
    }
    inner.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pts = vec![u.clone()];
    pts.extend(inner.into_iter().map(|(_, e)| e));
    pts.push(v.clone());
    pts
}

fn integrate_piece(
    f: &Integrand<'_>,
    u: &Complex,
    v: &Complex,
    nodes: &Nodes,
    tol: &Real,
    depth: u32,
) -> (Complex, Real) {
    let (pu, pv) = (f64pt(u), f64pt(v));
    let len = ((pv.0 - pu.0).powi(2) + (pv.1 - pu.1).powi(2)).sqrt();
    let near = f
        .branch
        .iter()
        .filter(|e| *e != u && *e != v)
        .map(|e| dist_point_segment(f64pt(e), pu, pv))
        .fold(f64::INFINITY, f64::min);
    if near < 0.5 * len && depth < MAX_DEPTH {
        let mid = (u + v).scale(&Real::ratio(1, 2));
        let (a, ea) = integrate_piece(f, u, &mid, nodes, tol, depth + 1);
        let (b, eb) = integrate_piece(f, &mid, v, nodes, tol, depth + 1);
        return (a + b, ea + eb);
    }
    tanh_sinh(f, u, v, nodes, tol)
}

fn integrate(
    f: &Integrand<'_>,
    u: &Complex,
    v: &Complex,
    nodes: &Nodes,
    prec: u32,
) -> PeriodValue {
    let tol = Real::pow10(-((prec + 5) as i32));
    let pts = split_points(u, v, f.branch);
    let mut total = Complex::zero();
    let mut err = Real::zero();
    for w in pts.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (val, e) = integrate_piece(f, &w[0], &w[1], nodes, &tol, 0);
        total = total + val;
        err = err + e;
    }
    let rounding = total.abs() * Real::pow10(-((prec + GUARD_DIGITS) as i32 - 3));
    PeriodValue::new(total, err + rounding, prec)
}

fn check_branch_points(a1: &Complex, a2: &Complex) -> Result<(), PeriodError> {
    let one = Complex::one();
    if a1.is_zero() || a2.is_zero() || a1 == &one || a2 == &one || a1 == a2 {
        return Err(PeriodError::CoincidentBranchPoints);
    }
    Ok(())
}

/// The three displayed periods of the quintic cover at `(a1, a2)`.
pub fn vz_curve_periods(a1: &Complex, a2: &Complex, prec: u32) -> Result<VzPeriods, PeriodError> {
    check_branch_points(a1, a2)?;
    Ok(guarded(prec, || {
        let branch = [Complex::zero(), Complex::one(), a1.clone(), a2.clone()];
        let f = Integrand {
            branch: &branch,
            exponent: Real::ratio(-2, 5),
        };
        let nodes = Nodes::new(prec);
        let zero = Complex::zero();
        let one = Complex::one();
        VzPeriods {
            p1: integrate(&f, &zero, &one, &nodes, prec),
            p2: integrate(&f, &one, a1, &nodes, prec),
            p3: integrate(&f, &zero, a2, &nodes, prec),
        }
    }))
}

/// Normalized periods `(P2/P1, P3/P1)`.
pub fn vz_normalized_ratios(
    a1: &Complex,
    a2: &Complex,
    prec: u32,
) -> Result<(PeriodValue, PeriodValue), PeriodError> {
    let p = vz_curve_periods(a1, a2, prec)?;
    guarded(prec, || Ok((p.p2.div(&p.p1)?, p.p3.div(&p.p1)?)))
}

#[cfg(test)]
mod tests {
    use super::super::beta_value;
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn beta_integral_by_quadrature() {
        // ∫_0^1 W^{-2/5} (W-1)^{-2/5} dW = e^{-2πi/5} B(3/5, 3/5).
        let branch = [Complex::zero(), Complex::one()];
        let v = guarded(20, || {
            let f = Integrand {
                branch: &branch,
                exponent: Real::ratio(-2, 5),
            };
            integrate(&f, &Complex::zero(), &Complex::one(), &Nodes::new(20), 20)
        });
        let b = beta_value(&BigRational::new(3.into(), 5.into()), &BigRational::new(3.into(), 5.into()), 25).unwrap();
        assert!((v.abs() - &b.re).abs().log10_abs() < -18.0);
        let ph = v.value().arg().to_f64();
        assert!((ph + 2.0 * std::f64::consts::PI / 5.0).abs() < 1e-15);
    }

    #[test]
    fn error_estimate_against_higher_precision() {
        let a1 = Complex::from_f64(0.9, 0.0);
        let a2 = Complex::from_f64(0.05, 0.0);
        let lo = vz_curve_periods(&a1, &a2, 12).unwrap();
        let hi = vz_curve_periods(&a1, &a2, 24).unwrap();
        assert!(lo.p1.distance(&hi.p1) < lo.p1.err);
        assert!(lo.p2.distance(&hi.p2) < lo.p2.err);
        assert!(lo.p3.distance(&hi.p3) < lo.p3.err);
    }

    #[test]
    fn complex_branch_points() {
        let a1 = Complex::from_f64(1.5, 0.5);
        let a2 = Complex::from_f64(-0.3, 0.2);
        let p = vz_curve_periods(&a1, &a2, 12).unwrap();
        assert!(p.p2.err.to_f64() < 1e-10);
        assert!(p.p3.abs().to_f64() > 0.0);
    }

    #[test]
    fn coincident_points() {
        let z = Complex::from_f64(0.3, 0.0);
        assert_eq!(vz_curve_periods(&z, &z, 10).unwrap_err(), PeriodError::CoincidentBranchPoints);
        assert_eq!(
            vz_curve_periods(&Complex::one(), &z, 10).unwrap_err(),
            PeriodError::CoincidentBranchPoints
        );
    }
}
