//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(m)-1}`. Binary
//! operations on elements of different conductors lift both operands to
//! `Q(ζ_lcm)` first.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::periods::num::{with_digits, Complex, Real};

/// `Q(ζ_m)` with its reduction table.
#[derive(Debug)]
pub struct CyclotomicField {
    m: u32,
    degree: usize,
    /// `reduce[e]` = coordinates of `x^e mod Φ_m`, for `e < max(m, 2φ(m))`.
    reduce: Vec<Vec<i64>>,
}

fn cyclotomic_poly(m: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&m) {
        return p.clone();
    }
    // x^m - 1, ascending coefficients
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let den = cyclotomic_poly(d, cache);
            num = poly_div_exact(&num, &den);
        }
    }
    cache.insert(m, num.clone());
    num
}

/// Exact division by a monic integer polynomial.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        q[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    q
}

impl CyclotomicField {
    fn build(m: u32) -> Self {
        let mut cache = HashMap::new();
        let phi = cyclotomic_poly(m, &mut cache);
        let degree = phi.len() - 1;
        let len = (m as usize).max(2 * degree);
        let mut reduce = Vec::with_capacity(len);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        if degree == 1 {
            // Q: ζ = -phi[0]
            let z = -phi[0];
            let mut v = 1i64;
            for _ in 0..len {
                reduce.push(vec![v]);
                v *= z;
            }
        } else {
            for _ in 0..len {
                reduce.push(cur.clone());
                // multiply by x and reduce with x^degree = -Σ phi_i x^i
                let top = cur[degree - 1];
                let mut next = vec![0i64; degree];
                for i in (1..degree).rev() {
                    next[i] = cur[i - 1];
                }
                for i in 0..degree {
                    next[i] -= top * phi[i];
                }
                cur = next;
            }
        }
        CyclotomicField { m, degree, reduce }
    }

    /// Shared instance for conductor `m`.
    pub fn get(m: u32) -> Arc<CyclotomicField> {
        assert!(m >= 1, "conductor must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("field cache poisoned");
        guard
            .entry(m)
            .or_insert_with(|| Arc::new(CyclotomicField::build(m)))
            .clone()
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn power(&self, e: usize) -> &[i64] {
        let e = if e < self.reduce.len() { e } else { e % self.m as usize };
        &self.reduce[e]
    }
}

#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CyclotomicNumber {
    fn with_field(field: Arc<CyclotomicField>, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len(), field.degree);
        Self { field, coeffs }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::with_field(CyclotomicField::get(1), vec![q])
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// `Σ c_e ζ_m^e` for arbitrary exponents `e`.
    pub fn from_powers(m: u32, coeffs: &[BigRational]) -> Self {
        let field = CyclotomicField::get(m);
        let mut out = vec![BigRational::zero(); field.degree];
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, r) in field.power(e).iter().enumerate() {
                if *r != 0 {
                    out[i] += c * rat(*r);
                }
            }
        }
        Self::with_field(field, out)
    }

    /// Element with the given power-basis coordinates (length at most `φ(m)`).
    pub fn from_coeffs(m: u32, coeffs: Vec<BigRational>) -> Self {
        Self::from_powers(m, &coeffs)
    }

    pub fn zeta(m: u32) -> Self {
        Self::zeta_pow(m, 1)
    }

    pub fn zeta_pow(m: u32, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Self::from_powers(m, &c)
    }

    /// The imaginary unit `ζ_4`.
    pub fn i() -> Self {
        Self::zeta(4)
    }

    pub fn conductor(&self) -> u32 {
        self.field.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Re-expresses the element in `Q(ζ_target)`; `target` must be a
    /// multiple of the conductor.
    pub fn lift(&self, target: u32) -> Self {
        let m = self.field.m;
        if m == target {
            return self.clone();
        }
        assert!(target.is_multiple_of(m), "cannot lift Q(ζ_{m}) into Q(ζ_{target})");
        let step = (target / m) as usize;
        let mut powers = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            powers[i * step] = c.clone();
        }
        Self::from_powers(target, &powers)
    }

    fn unify<'a>(a: &'a Self, b: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        let (ma, mb) = (a.field.m, b.field.m);
        if ma == mb {
            (Cow::Borrowed(a), Cow::Borrowed(b))
        } else if mb % ma == 0 {
            (Cow::Owned(a.lift(mb)), Cow::Borrowed(b))
        } else if ma % mb == 0 {
            (Cow::Borrowed(a), Cow::Owned(b.lift(ma)))
        } else {
            let l = ma.lcm(&mb);
            (Cow::Owned(a.lift(l)), Cow::Owned(b.lift(l)))
        }
    }

    fn rational_value(&self) -> Option<&BigRational> {
        (self.field.degree == 1).then(|| &self.coeffs[0])
    }

    fn scaled(&self, q: &BigRational) -> Self {
        Self::with_field(self.field.clone(), self.coeffs.iter().map(|c| c * q).collect())
    }

    /// The automorphism `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.field.m as usize;
        let mut powers = vec![BigRational::zero(); m.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (m - i % m) % m;
            powers[e] += c;
        }
        Self::from_powers(self.field.m, &powers)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.rational_value() {
            return Some(Self::from_rational(q.recip()));
        }
        let n = self.field.degree;
        // Columns of the multiplication-by-self matrix.
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![BigRational::zero(); n];
            e[j] = BigRational::one();
            let basis = Self::with_field(self.field.clone(), e);
            cols.push((self * &basis).coeffs);
        }
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        let sol = solve_rational(&mut aug)?;
        Some(Self::with_field(self.field.clone(), sol))
    }

    /// Image under `ζ_m ↦ exp(2πi/m)` at `digits` decimal digits.
    pub fn embed(&self, digits: u32) -> Complex {
        with_digits(digits + 10, || {
            let m = self.field.m as i64;
            let two_pi = Real::pi() * Real::from_i64(2);
            let mut acc = Complex::zero();
            for (k, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let ang = &two_pi * Real::from_i64(k as i64) / Real::from_i64(m);
                let z = Complex::new(ang.cos(), ang.sin());
                acc = acc + z.scale(&Real::from_ratio(c));
            }
            acc
        })
    }

    /// Sum of absolute values of the coordinates, used for error bounds.
    pub(crate) fn coeff_l1(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |a, c| a + c.abs())
    }
}

/// Solves a square augmented system over `Q`; `None` if singular.
fn solve_rational(aug: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = aug.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(aug.iter().map(|row| row[n].clone()).collect())
}

/// Numerators over the lcm of the denominators.
fn integer_form(coeffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let l = coeffs.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    (coeffs.iter().map(|q| q.numer() * (&l / q.denom())).collect(), l)
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.field.m == other.field.m {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => format!("ζ{}", self.field.m),
                _ => format!("ζ{}^{k}", self.field.m),
            };
            let s = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if *c == -BigRational::one() {
                format!("-{mono}")
            } else {
                format!("({c}){mono}")
            };
            parts.push(s);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = CyclotomicNumber::unify(self, rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicNumber::with_field(a.field.clone(), coeffs)
    }
}

impl Sub<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = CyclotomicNumber::unify(self, rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        CyclotomicNumber::with_field(a.field.clone(), coeffs)
    }
}

impl Mul<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if let Some(q) = rhs.rational_value() {
            return self.scaled(q);
        }
        if let Some(q) = self.rational_value() {
            return rhs.scaled(q);
        }
        let (a, b) = CyclotomicNumber::unify(self, rhs);
        let n = a.field.degree;
        // Integer convolution over a common denominator; one gcd per output
        // coefficient instead of one per product.
        let (na, da) = integer_form(&a.coeffs);
        let (nb, db) = integer_form(&b.coeffs);
        let mut raw = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in na.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in nb.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        let mut acc: Vec<BigInt> = raw[..n].to_vec();
        for (e, c) in raw.iter().enumerate().skip(n) {
            if c.is_zero() {
                continue;
            }
            for (i, r) in a.field.power(e).iter().enumerate() {
                if *r != 0 {
                    acc[i] += c * *r;
                }
            }
        }
        let den = da * db;
        let out = acc.into_iter().map(|x| BigRational::new(x, den.clone())).collect();
        CyclotomicNumber::with_field(a.field.clone(), out)
    }
}

impl Div<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn div(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if let Some(q) = rhs.rational_value() {
            assert!(!q.is_zero(), "division by zero in cyclotomic field");
            return self.scaled(&q.recip());
        }
        self * &rhs.inv().expect("division by zero in cyclotomic field")
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber::with_field(self.field.clone(), self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $method:ident) => {
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(rhs)
            }
        }
        impl $tr<CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                self.$method(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    m: u32,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Wire {
            m: self.field.m,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(deserializer)?;
        if w.m == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let field = CyclotomicField::get(w.m);
        if w.coeffs.len() > field.degree {
            return Err(D::Error::custom(format!(
                "Q(ζ_{}) has degree {}, got {} coordinates",
                w.m,
                field.degree,
                w.coeffs.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(w.coeffs.len());
        for s in &w.coeffs {
            let q: BigRational = s
                .parse()
                .map_err(|_| D::Error::custom(format!("bad rational {s:?}")))?;
            coeffs.push(q);
        }
        Ok(CyclotomicNumber::from_coeffs(w.m, coeffs))
    }
}
