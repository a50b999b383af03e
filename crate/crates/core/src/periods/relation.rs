//! Algebraicity detection by integer-relation search.
//!
//! For a value `v` known to `P` digits, the powers `1, v, …, v^d` are
//! embedded at `P/2` digits into an integer lattice and LLL-reduced. A
//! short vector is a candidate polynomial; it is reported only if the
//! residual at the full `P` digits also vanishes to within the value's
//! error bound. A negative result means "none found at (D, H)" and is not
//! a transcendence statement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::num::{with_digits, Complex, Real};
use super::{PeriodError, PeriodValue};

/// Anything that can be evaluated to a requested number of digits.
pub trait PeriodSource {
    fn evaluate(&self, digits: u32) -> Result<PeriodValue, PeriodError>;
    /// Largest precision available; `None` if unbounded.
    fn max_digits(&self) -> Option<u32>;
}

impl PeriodSource for PeriodValue {
    fn evaluate(&self, digits: u32) -> Result<PeriodValue, PeriodError> {
        if digits > self.precision {
            return Err(PeriodError::InsufficientPrecision {
                needed: digits,
                available: self.precision,
            });
        }
        Ok(self.clone())
    }

    fn max_digits(&self) -> Option<u32> {
        Some(self.precision)
    }
}

/// A complex number given exactly by decimal literals.
#[derive(Debug, Clone)]
pub struct ExactDecimal {
    pub re: String,
    pub im: String,
}

impl ExactDecimal {
    pub fn new(re: impl Into<String>, im: impl Into<String>) -> Result<Self, PeriodError> {
        let d = Self {
            re: re.into(),
            im: im.into(),
        };
        if Real::parse(&d.re).is_none() || Real::parse(&d.im).is_none() {
            return Err(PeriodError::InvalidInput(format!(
                "not a decimal literal: {:?} + {:?}i",
                d.re, d.im
            )));
        }
        Ok(d)
    }
}

impl PeriodSource for ExactDecimal {
    fn evaluate(&self, digits: u32) -> Result<PeriodValue, PeriodError> {
        with_digits(digits + 10, || {
            let z = Complex::parse(&self.re, &self.im)
                .ok_or_else(|| PeriodError::InvalidInput("bad decimal".into()))?;
            Ok(PeriodValue::rounded(z, digits))
        })
    }

    fn max_digits(&self) -> Option<u32> {
        None
    }
}

/// Wraps an evaluator closure.
pub struct FnSource<F>(pub F);

impl<F: Fn(u32) -> Result<PeriodValue, PeriodError>> PeriodSource for FnSource<F> {
    fn evaluate(&self, digits: u32) -> Result<PeriodValue, PeriodError> {
        (self.0)(digits)
    }

    fn max_digits(&self) -> Option<u32> {
        None
    }
}

#[derive(Clone)]
pub struct AlgebraicityReport {
    pub value: PeriodValue,
    /// Coefficients `c_0, …, c_d` of a primitive polynomial with positive
    /// leading coefficient.
    pub found: Option<Vec<BigInt>>,
    pub residual: Real,
    pub verified_at_double_precision: bool,
    pub degree_bound: u32,
    pub height_bound: BigInt,
    pub search_digits: u32,
}

impl AlgebraicityReport {
    pub fn polynomial_string(&self) -> Option<String> {
        self.found.as_ref().map(|c| format_polynomial(c))
    }

    pub fn summary(&self) -> String {
        match self.polynomial_string() {
            Some(p) => p,
            None => format!("none found at ({},{})", self.degree_bound, self.height_bound),
        }
    }
}

impl std::fmt::Debug for AlgebraicityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgebraicityReport({})", self.summary())
    }
}

impl Serialize for AlgebraicityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AlgebraicityReport", 8)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field(
            "found",
            &self
                .found
                .as_ref()
                .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        )?;
        s.serialize_field("polynomial", &self.polynomial_string())?;
        s.serialize_field("summary", &self.summary())?;
        s.serialize_field("residual", &self.residual.to_decimal_sig(3))?;
        s.serialize_field("verified_at_double_precision", &self.verified_at_double_precision)?;
        s.serialize_field("degree_bound", &self.degree_bound)?;
        s.serialize_field("height_bound", &self.height_bound.to_string())?;
        s.end()
    }
}

/// Formats `c_0 + c_1 x + …` as `x^2 - x - 1` (highest degree first).
pub fn format_polynomial(c: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, coeff) in c.iter().enumerate().rev() {
        if coeff.is_zero() {
            continue;
        }
        let neg = coeff.is_negative();
        let mag = coeff.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}{mono}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Digits required for a search with degree bound `d` and height bound `h`:
/// `4 (d log10 h + 20)`.
pub fn required_digits(degree: u32, height: &BigInt) -> u32 {
    let lh = height_log10(height);
    (4.0 * (degree as f64 * lh + 20.0)).ceil() as u32
}

fn height_log10(h: &BigInt) -> f64 {
    let s = h.abs().to_string();
    let lead: f64 = s[..s.len().min(15)].parse().unwrap_or(1.0);
    lead.log10() + (s.len().saturating_sub(15)) as f64
}

fn round_rational(q: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (q + half).floor().to_integer()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let rows: Vec<Vec<BigRational>> = b
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            if norms[j] == BigRational::zero() {
                continue;
            }
            mu[i][j] = dot(&rows[i], &star[j]) / &norms[j];
            for (k, x) in v.iter_mut().enumerate() {
                *x -= &mu[i][j] * &star[j][k];
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

/// Exact LLL reduction with `δ = 3/4`.
pub(crate) fn lll(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        for j in (0..k).rev() {
            let q = round_rational(&mu[k][j]);
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = BigRational::from_integer(q);
                for i in 0..j {
                    let t = &qr * &mu[j][i];
                    mu[k][i] -= t;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let gs = gram_schmidt(&b);
            mu = gs.0;
            norms = gs.1;
            k = (k - 1).max(1);
        }
    }
    b
}

fn normalize(mut c: Vec<BigInt>) -> Option<Vec<BigInt>> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() < 2 {
        return None;
    }
    let g = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    for x in c.iter_mut() {
        *x = &*x / &g;
    }
    if c.last().is_some_and(|x| x.is_negative()) {
        for x in c.iter_mut() {
            *x = -&*x;
        }
    }
    Some(c)
}

fn eval_poly(c: &[BigInt], v: &Complex) -> Complex {
    let mut acc = Complex::zero();
    for coeff in c.iter().rev() {
        acc = &acc * v + Complex::from_real(Real::from_bigint(coeff));
    }
    acc
}

/// Residual tolerance implied by the value's error bound.
fn residual_tolerance(c: &[BigInt], v: &PeriodValue) -> Real {
    let m = v.abs().max(Real::one());
    let floor = Real::pow10(-(v.precision as i32));
    let err = v.err.clone().max(floor.clone());
    let mut deriv = Real::zero();
    let mut size = Real::zero();
    let mut mp = Real::one();
    for (i, coeff) in c.iter().enumerate() {
        let a = Real::from_bigint(&coeff.abs());
        size = size + &a * &mp;
        if i > 0 {
            deriv = deriv + &a * Real::from_i64(i as i64) * m.powi(i as u32 - 1);
        }
        mp = mp * &m;
    }
    (deriv * err + size * floor) * Real::from_i64(10)
}

/// Relation search on a value known to `value.precision` digits.
///
/// The lattice uses `precision / 2` digits; hits are re-verified against
/// the full value, i.e. at doubled precision relative to the search.
pub fn cm_detect(
    value: &PeriodValue,
    degree_bound: u32,
    height_bound: &BigInt,
) -> Result<AlgebraicityReport, PeriodError> {
    if degree_bound == 0 || !height_bound.is_positive() {
        return Err(PeriodError::InvalidInput("degree and height bounds must be positive".into()));
    }
    let needed = required_digits(degree_bound, height_bound);
    if value.precision < needed {
        return Err(PeriodError::InsufficientPrecision {
            needed,
            available: value.precision,
        });
    }
    let search = value.precision / 2;
    let full = value.precision;
    let v = value.value();
    let mut best_residual: Option<Real> = None;
    for d in 1..=degree_bound {
        let candidates = with_digits(search + 20, || {
            let mag = v.abs().log10_abs().max(0.0);
            let scale_exp = search as i32 - (d as f64 * mag).ceil() as i32;
            let scale = Real::pow10(scale_exp.max(1));
            let mut rows = Vec::with_capacity(d as usize + 1);
            let mut p = Complex::one();
            for i in 0..=d as usize {
                let mut row = vec![BigInt::zero(); d as usize + 1];
                row[i] = BigInt::one();
                row.push((&p.re * &scale).round_to_bigint());
                row.push((&p.im * &scale).round_to_bigint());
                rows.push(row);
                p = &p * &v;
            }
            let mut reduced = lll(rows);
            reduced.sort_by_key(|r| r.iter().map(|x| x * x).fold(BigInt::zero(), |a, b| a + b));
            reduced
        });
        for row in candidates {
            let coeffs: Vec<BigInt> = row[..=d as usize].to_vec();
            if coeffs.iter().any(|x| x.abs() > *height_bound) {
                continue;
            }
            let Some(c) = normalize(coeffs) else { continue };
            let (residual, tol) = with_digits(full + 20, || {
                (eval_poly(&c, &v).abs(), residual_tolerance(&c, value))
            });
            let half = with_digits(full + 20, || Real::pow10(-((full / 2) as i32)));
            let ok = residual <= tol && residual < half;
            if best_residual.as_ref().is_none_or(|b| &residual < b) {
                best_residual = Some(residual.clone());
            }
            if ok {
                return Ok(AlgebraicityReport {
                    value: value.clone(),
                    found: Some(c),
                    residual,
                    verified_at_double_precision: true,
                    degree_bound,
                    height_bound: height_bound.clone(),
                    search_digits: search,
                });
            }
        }
    }
    Ok(AlgebraicityReport {
        value: value.clone(),
        found: None,
        residual: best_residual.unwrap_or_else(Real::zero),
        verified_at_double_precision: false,
        degree_bound,
        height_bound: height_bound.clone(),
        search_digits: search,
    })
}

/// Evaluates `source` at `max(required, min_digits)` digits and searches.
pub fn cm_detect_source(
    source: &dyn PeriodSource,
    degree_bound: u32,
    height_bound: &BigInt,
    min_digits: u32,
) -> Result<AlgebraicityReport, PeriodError> {
    let needed = required_digits(degree_bound, height_bound).max(min_digits);
    if let Some(max) = source.max_digits() {
        if max < needed {
            return Err(PeriodError::InsufficientPrecision {
                needed,
                available: max,
            });
        }
    }
    let value = source.evaluate(needed)?;
    cm_detect(&value, degree_bound, height_bound)
}
