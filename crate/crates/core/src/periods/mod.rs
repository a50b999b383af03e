//! High-precision period evaluation.
//!
//! Every evaluator takes a decimal precision `prec`, works internally with
//! guard digits, and returns a [`PeriodValue`] carrying an absolute error
//! bound for the method used.

mod appell;
mod elliptic;
mod gamma;
mod hyper;
pub mod num;
mod ode;
mod quad;
mod relation;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use appell::appell_f1;
pub use elliptic::{agm, agm_periods, elliptic_periods, tau};
pub use gamma::{beta_value, gamma_value};
pub use hyper::{
    gauss_2f1, hypergeom_closed_forms, schwarz_t, schwarz_t_series, ClosedForm,
};
pub use num::{with_digits, Complex, Real};
pub use ode::{
    default_path, pf_continue, pf_transfer, HypergeometricOde, Transfer, DEFAULT_CLEARANCE,
};
pub use quad::{vz_curve_periods, vz_normalized_ratios, VzPeriods};
pub use relation::{
    cm_detect, cm_detect_source, required_digits, AlgebraicityReport, ExactDecimal, FnSource,
    PeriodSource,
};

/// Guard digits added to every internal computation.
pub const GUARD_DIGITS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("argument outside the convergence region: {0}")]
    OutOfRegion(String),
    #[error("lower parameter c is a non-positive integer")]
    PolarC,
    #[error("argument lies on the branch cut [1, inf)")]
    BranchCut,
    #[error("continuation path passes too close to a singular point: {0}")]
    SingularPath(String),
    #[error("lambda must avoid 0 and 1")]
    DegenerateLambda,
    #[error("denominator period vanishes")]
    DivisionByZeroPeriod,
    #[error("Gamma has a pole at the non-positive integer {0}")]
    PoleAtNonPositiveInteger(String),
    #[error("branch points must be distinct and avoid 0 and 1")]
    CoincidentBranchPoints,
    #[error("relation search needs {needed} digits but only {available} are available")]
    InsufficientPrecision { needed: u32, available: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A complex number with an absolute error bound.
#[derive(Clone)]
pub struct PeriodValue {
    pub re: Real,
    pub im: Real,
    pub err: Real,
    pub precision: u32,
}

impl PeriodValue {
    pub fn new(z: Complex, err: Real, precision: u32) -> Self {
        Self {
            re: z.re,
            im: z.im,
            err: err.abs(),
            precision,
        }
    }

    /// A value known exactly up to rounding at `precision` digits.
    pub fn rounded(z: Complex, precision: u32) -> Self {
        let err = z.abs() * Real::pow10(-(precision as i32 + 5));
        Self::new(z, err, precision)
    }

    pub fn value(&self) -> Complex {
        Complex::new(self.re.clone(), self.im.clone())
    }

    pub fn abs(&self) -> Real {
        self.value().abs()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &PeriodValue) -> Real {
        (self.value() - other.value()).abs()
    }

    pub fn distance_to(&self, z: &Complex) -> Real {
        (self.value() - z).abs()
    }

    pub fn scale(&self, k: &Complex) -> PeriodValue {
        PeriodValue::new(self.value() * k, &self.err * k.abs(), self.precision)
    }

    /// First-order error propagation for a quotient.
    pub fn div(&self, other: &PeriodValue) -> Result<PeriodValue, PeriodError> {
        let den = other.value();
        let dabs = den.abs();
        if dabs.is_zero() || dabs <= other.err {
            return Err(PeriodError::DivisionByZeroPeriod);
        }
        let q = self.value() / &den;
        let margin = &dabs - &other.err;
        let err = (&self.err + q.abs() * &other.err) / margin;
        Ok(PeriodValue::new(q, err, self.precision.min(other.precision)))
    }

    pub fn mul(&self, other: &PeriodValue) -> PeriodValue {
        let z = self.value() * other.value();
        let err = &self.err * other.abs() + &other.err * self.abs() + &self.err * &other.err;
        PeriodValue::new(z, err, self.precision.min(other.precision))
    }

    pub fn add(&self, other: &PeriodValue) -> PeriodValue {
        PeriodValue::new(
            self.value() + other.value(),
            &self.err + &other.err,
            self.precision.min(other.precision),
        )
    }

    fn digits_shown(&self) -> usize {
        self.precision.max(1) as usize
    }
}

impl fmt::Debug for PeriodValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}i (±{})",
            self.re.to_decimal_sig(self.digits_shown()),
            self.im.to_decimal_sig(self.digits_shown()),
            self.err.to_decimal_sig(3)
        )
    }
}

impl Serialize for PeriodValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PeriodValue", 4)?;
        s.serialize_field("re", &self.re.to_decimal_sig(self.digits_shown()))?;
        s.serialize_field("im", &self.im.to_decimal_sig(self.digits_shown()))?;
        s.serialize_field("err", &self.err.to_decimal_sig(3))?;
        s.serialize_field("precision", &self.precision)?;
        s.end()
    }
}

/// Runs `f` at `prec` plus guard digits.
pub(crate) fn guarded<T>(prec: u32, f: impl FnOnce() -> T) -> T {
    with_digits(prec + GUARD_DIGITS, f)
}
