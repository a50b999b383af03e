//! Arbitrary-precision real and complex scalars.
//!
//! Arithmetic runs at a per-thread working precision (in bits) set by
//! [`with_digits`]; nothing is shared across threads.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign as FloatSign};
use num_bigint::BigInt;
use num_rational::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static BITS: Cell<usize> = const { Cell::new(256) };
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Bits needed for `digits` decimal digits, rounded up to whole words.
pub fn bits_for_digits(digits: u32) -> usize {
    let raw = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
    raw.div_ceil(64) * 64
}

pub fn working_bits() -> usize {
    BITS.with(|b| b.get())
}

/// Runs `f` with the working precision set to `digits` decimal digits.
pub fn with_digits<T>(digits: u32, f: impl FnOnce() -> T) -> T {
    with_bits(bits_for_digits(digits), f)
}

pub fn with_bits<T>(bits: usize, f: impl FnOnce() -> T) -> T {
    struct Restore(usize);
    impl Drop for Restore {
        fn drop(&mut self) {
            BITS.with(|b| b.set(self.0));
        }
    }
    let _restore = Restore(BITS.with(|b| b.replace(bits)));
    f()
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct Real(BigFloat);

impl Real {
    pub fn zero() -> Self {
        Real(BigFloat::from_word(0, working_bits()))
    }

    pub fn one() -> Self {
        Real(BigFloat::from_word(1, working_bits()))
    }

    pub fn from_i64(v: i64) -> Self {
        Real(BigFloat::from_i64(v, working_bits()))
    }

    pub fn from_f64(v: f64) -> Self {
        Real(BigFloat::from_f64(v, working_bits()))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::parse(&v.to_string()).expect("integer literal")
    }

    pub fn from_ratio(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Parses a decimal literal such as `-1.25e-3`.
    pub fn parse(s: &str) -> Option<Self> {
        let t = s.trim();
        if t.is_empty() || !t.chars().all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E')) {
            return None;
        }
        let v = with_consts(|cc| BigFloat::parse(t, Radix::Dec, working_bits(), RM, cc));
        if v.is_nan() || v.is_inf() {
            None
        } else {
            Some(Real(v))
        }
    }

    /// `10^e`.
    pub fn pow10(e: i32) -> Self {
        let ten = Real::from_i64(10);
        let p = ten.0.powi(e.unsigned_abs() as usize, working_bits(), RM);
        if e >= 0 {
            Real(p)
        } else {
            Real::one() / Real(p)
        }
    }

    pub fn pi() -> Self {
        Real(with_consts(|cc| cc.pi(working_bits(), RM)))
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.sqrt(working_bits(), RM))
    }

    pub fn ln(&self) -> Self {
        Real(with_consts(|cc| self.0.ln(working_bits(), RM, cc)))
    }

    pub fn exp(&self) -> Self {
        Real(with_consts(|cc| self.0.exp(working_bits(), RM, cc)))
    }

    pub fn sin(&self) -> Self {
        Real(with_consts(|cc| self.0.sin(working_bits(), RM, cc)))
    }

    pub fn cos(&self) -> Self {
        Real(with_consts(|cc| self.0.cos(working_bits(), RM, cc)))
    }

    pub fn sinh(&self) -> Self {
        Real(with_consts(|cc| self.0.sinh(working_bits(), RM, cc)))
    }

    pub fn cosh(&self) -> Self {
        Real(with_consts(|cc| self.0.cosh(working_bits(), RM, cc)))
    }

    pub fn atan(&self) -> Self {
        Real(with_consts(|cc| self.0.atan(working_bits(), RM, cc)))
    }

    /// Angle of `(x, y)` in `(-π, π]`.
    pub fn atan2(y: &Real, x: &Real) -> Real {
        if x.is_zero() {
            let half = Real::pi() / Real::from_i64(2);
            return match y.sign() {
                Ordering::Greater => half,
                Ordering::Less => -half,
                Ordering::Equal => Real::zero(),
            };
        }
        let base = (y / x).atan();
        if x.sign() == Ordering::Greater {
            base
        } else if y.sign() == Ordering::Less {
            base - Real::pi()
        } else {
            base + Real::pi()
        }
    }

    /// `self^e` for `self > 0`.
    pub fn powf(&self, e: &Real) -> Self {
        Real(with_consts(|cc| self.0.pow(&e.0, working_bits(), RM, cc)))
    }

    pub fn powi(&self, n: u32) -> Self {
        Real(self.0.powi(n as usize, working_bits(), RM))
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn sign(&self) -> Ordering {
        if self.0.is_zero() {
            Ordering::Equal
        } else if self.0.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn floor(&self) -> Real {
        Real(self.0.floor())
    }

    /// Nearest integer.
    pub fn round_to_bigint(&self) -> BigInt {
        let r = (self + &Real::ratio(1, 2)).floor();
        let s = r.to_decimal_fixed(0);
        s.parse::<BigInt>().unwrap_or_default()
    }

    /// Base-2 exponent `e` with `2^{e-1} <= |x| < 2^e`; `None` for zero.
    pub fn exponent2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        self.0.exponent().map(|e| e as i64)
    }

    /// `log10 |x|` as an `f64`, valid far outside the `f64` range.
    pub fn log10_abs(&self) -> f64 {
        match self.0.as_raw_parts() {
            Some((m, _, _, e, _)) if !m.is_empty() && !self.is_zero() => {
                let top = m[m.len() - 1] as f64 / 2f64.powi(64);
                top.log10() + e as f64 * std::f64::consts::LOG10_2
            }
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.0.as_raw_parts() {
            Some((m, _, s, e, _)) if !m.is_empty() && !self.is_zero() => {
                let mut mant = m[m.len() - 1] as f64 / 2f64.powi(64);
                if m.len() > 1 {
                    mant += m[m.len() - 2] as f64 / 2f64.powi(128);
                }
                let v = mant * 2f64.powi(e.clamp(-1100, 1100));
                if s == FloatSign::Neg {
                    -v
                } else {
                    v
                }
            }
            _ => {
                if self.0.is_nan() {
                    f64::NAN
                } else {
                    0.0
                }
            }
        }
    }

    /// Rounds to `bits` of mantissa.
    pub fn rounded_to_bits(&self, bits: usize) -> Real {
        let mut v = self.0.clone();
        let _ = v.set_precision(bits.max(64), RM);
        Real(v)
    }

    fn raw_decimal(&self) -> (bool, String, i64) {
        let s = with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "0".into());
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, s),
        };
        let (mant, exp) = match body.split_once('e') {
            Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
            None => (body, 0),
        };
        let (ip, fp) = mant.split_once('.').unwrap_or((&mant, ""));
        let digits: String = format!("{ip}{fp}");
        // value = 0.digits * 10^(exp + len(ip))
        let lead = digits.len() - digits.trim_start_matches('0').len();
        let digits = digits.trim_start_matches('0').to_string();
        let point = exp + ip.len() as i64 - lead as i64;
        (neg, digits, point)
    }

    /// Decimal string with `sig` significant digits, positional for moderate
    /// exponents and `d.ddde±x` otherwise.
    pub fn to_decimal_sig(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (neg, digits, point) = self.raw_decimal();
        let (digits, point) = round_digits(&digits, sig.max(1), point);
        let digits = digits.trim_end_matches('0');
        let digits = if digits.is_empty() { "0" } else { digits };
        let sign = if neg { "-" } else { "" };
        if (-6..=24).contains(&point) {
            let body = if point <= 0 {
                format!("0.{}{}", "0".repeat((-point) as usize), digits)
            } else if point as usize >= digits.len() {
                format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
            } else {
                format!("{}.{}", &digits[..point as usize], &digits[point as usize..])
            };
            format!("{sign}{body}")
        } else {
            let rest = if digits.len() > 1 { format!(".{}", &digits[1..]) } else { String::new() };
            format!("{sign}{}{}e{}", &digits[..1], rest, point - 1)
        }
    }

    /// Fixed-point decimal string with `frac` digits after the point.
    pub fn to_decimal_fixed(&self, frac: usize) -> String {
        if self.is_zero() {
            return if frac == 0 { "0".into() } else { format!("0.{}", "0".repeat(frac)) };
        }
        let (neg, digits, point) = self.raw_decimal();
        let keep = point + frac as i64;
        if keep <= 0 {
            return if frac == 0 { "0".into() } else { format!("0.{}", "0".repeat(frac)) };
        }
        let (digits, point) = round_digits(&digits, keep as usize, point);
        let mut d = digits;
        let need = (point + frac as i64) as usize;
        while d.len() < need {
            d.push('0');
        }
        d.truncate(need);
        let ip_len = point.max(0) as usize;
        let (ip, fp) = if ip_len == 0 {
            ("0".to_string(), format!("{}{}", "0".repeat((-point).max(0) as usize), d))
        } else {
            (d[..ip_len].to_string(), d[ip_len..].to_string())
        };
        let sign = if neg && d.chars().any(|c| c != '0') { "-" } else { "" };
        if frac == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{}", &fp[..frac.min(fp.len())])
        }
    }
}

/// Rounds a digit string (value `0.d1d2... × 10^point`) to `keep` digits,
/// half away from zero.
fn round_digits(digits: &str, keep: usize, point: i64) -> (String, i64) {
    if digits.len() <= keep {
        return (digits.to_string(), point);
    }
    let mut out: Vec<u8> = digits.as_bytes()[..keep].to_vec();
    if digits.as_bytes()[keep] >= b'5' {
        let mut i = keep;
        loop {
            if i == 0 {
                out.insert(0, b'1');
                out.pop();
                return (String::from_utf8(out).expect("ascii"), point + 1);
            }
            i -= 1;
            if out[i] == b'9' {
                out[i] = b'0';
            } else {
                out[i] += 1;
                break;
            }
        }
    }
    (String::from_utf8(out).expect("ascii"), point)
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_sig(25))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_sig(f.precision().unwrap_or(20)))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real(self.0.$call(&rhs.0, working_bits(), RM))
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(BigFloat::neg(&self.0))
    }
}

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Real::zero(), Real::zero())
    }

    pub fn one() -> Self {
        Self::new(Real::one(), Real::zero())
    }

    pub fn i() -> Self {
        Self::new(Real::zero(), Real::one())
    }

    pub fn from_real(re: Real) -> Self {
        Self::new(re, Real::zero())
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Self::new(Real::from_f64(re), Real::from_f64(im))
    }

    pub fn from_ratio(q: &BigRational) -> Self {
        Self::from_real(Real::from_ratio(q))
    }

    pub fn parse(re: &str, im: &str) -> Option<Self> {
        Some(Self::new(Real::parse(re)?, Real::parse(im)?))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> Real {
        Real::atan2(&self.im, &self.re)
    }

    pub fn scale(&self, k: &Real) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(&self.re / &n, -(&self.im / &n))
    }

    /// Principal square root (branch cut along the negative real axis,
    /// `sqrt(-x) = i sqrt(x)` on the cut).
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if self.im.is_zero() {
            return if self.re.sign() == Ordering::Less {
                Self::new(Real::zero(), (-&self.re).sqrt())
            } else {
                Self::from_real(self.re.sqrt())
            };
        }
        let r = self.abs();
        let two = Real::from_i64(2);
        if self.re.sign() != Ordering::Less {
            let t = ((&r + &self.re) / &two).sqrt();
            Self::new(t.clone(), &self.im / (&two * &t))
        } else {
            let t = ((&r - &self.re) / &two).sqrt();
            let t = if self.im.sign() == Ordering::Less { -t } else { t };
            Self::new(&self.im / (&two * &t), t)
        }
    }

    /// Principal logarithm, `Im ∈ (-π, π]`.
    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        if self.im.is_zero() {
            return Self::from_real(m);
        }
        Self::new(&m * self.im.cos(), &m * self.im.sin())
    }

    /// Principal power `exp(e log z)`; `0^e = 0` for `e > 0`.
    pub fn powf(&self, e: &Real) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if self.im.is_zero() && self.re.sign() == Ordering::Greater {
            return Self::from_real(self.re.powf(e));
        }
        let mag = self.abs().powf(e);
        let ang = self.arg() * e;
        Self::new(&mag * ang.cos(), &mag * ang.sin())
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Complex::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

macro_rules! complex_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Complex> for &Complex {
            type Output = Complex;
            fn $method(self, rhs: &Complex) -> Complex {
                let f: fn(&Complex, &Complex) -> Complex = $body;
                f(self, rhs)
            }
        }
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: &Complex) -> Complex {
                (&self).$method(rhs)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                self.$method(&rhs)
            }
        }
    };
}

complex_binop!(Add, add, |a, b| Complex::new(&a.re + &b.re, &a.im + &b.im));
complex_binop!(Sub, sub, |a, b| Complex::new(&a.re - &b.re, &a.im - &b.im));
complex_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() {
        return Complex::new(&a.re * &b.re, &a.re * &b.im);
    }
    if b.im.is_zero() {
        return Complex::new(&a.re * &b.re, &a.im * &b.re);
    }
    Complex::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
});
complex_binop!(Div, div, |a, b| {
    if b.im.is_zero() {
        return Complex::new(&a.re / &b.re, &a.im / &b.re);
    }
    a * &b.recip()
});

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}
