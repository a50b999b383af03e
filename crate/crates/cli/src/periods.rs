//! Period and CM-detection commands.

use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{anyhow, Result};
use clap::{Args, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use hodge_core::periods::{
    agm_periods, appell_f1, cm_detect_source, elliptic_periods, schwarz_t, schwarz_t_series, vz_curve_periods,
    with_digits, Complex, ExactDecimal, PeriodValue, Real, GUARD_DIGITS,
};

use crate::render;
use crate::{Emit, Precision};

/// A complex literal: `0.5`, `-2i`, `0.3+0.1i`, `1e-3-4.5i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexArg {
    pub re: String,
    pub im: String,
}

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (re, im) = match t.strip_suffix('i') {
            None => (t.clone(), "0".to_string()),
            Some(body) => {
                let bytes = body.as_bytes();
                let split = (1..bytes.len())
                    .rev()
                    .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
                let (re, im) = match split {
                    Some(k) => (&body[..k], &body[k..]),
                    None => ("0", body),
                };
                let im = match im {
                    "" | "+" => "1".to_string(),
                    "-" => "-1".to_string(),
                    x => x.trim_start_matches('+').to_string(),
                };
                (re.to_string(), im)
            }
        };
        if decimal(&re).is_err() || decimal(&im).is_err() {
            return Err(format!("not a complex decimal literal: {s:?}"));
        }
        Ok(ComplexArg { re, im })
    }
}

impl ComplexArg {
    fn value(&self) -> Complex {
        Complex::parse(&self.re, &self.im).expect("validated when parsed")
    }
}

/// Validates a decimal literal `[+-]digits[.digits][e[+-]digits]`.
pub fn decimal(s: &str) -> Result<String, String> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], Some(&t[k + 1..])),
        None => (t, None),
    };
    let mantissa = mantissa.strip_prefix('-').unwrap_or(mantissa);
    let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = match mantissa.split_once('.') {
        Some((a, b)) => (digits(a) || a.is_empty()) && (digits(b) || b.is_empty()) && !(a.is_empty() && b.is_empty()),
        None => digits(mantissa),
    };
    let exponent_ok = exponent.is_none_or(|e| digits(e.strip_prefix(['+', '-']).unwrap_or(e)));
    if mantissa_ok && exponent_ok && with_digits(20, || Real::parse(t)).is_some() {
        Ok(t.to_string())
    } else {
        Err(format!("not a decimal literal: {s:?}"))
    }
}

#[derive(Args, Clone, Copy)]
pub struct Common {
    #[command(flatten)]
    prec: Precision,
    /// Worker threads for grids of points.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    #[arg(long, value_enum, default_value = "json")]
    emit: Emit,
}

#[derive(Subcommand)]
pub enum PeriodCommand {
    /// Legendre periods and the normalized period tau at lambda (repeat for a grid).
    Elliptic {
        #[arg(long, required = true, allow_hyphen_values = true)]
        lambda: Vec<ComplexArg>,
        #[command(flatten)]
        common: Common,
    },
    /// The Schwarz map t(s) (repeat for a grid).
    Schwarz {
        #[arg(long, required = true, allow_hyphen_values = true)]
        s: Vec<ComplexArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Appell F1(a, b, b', c; a1, a2); points pair the k-th --a1 with the k-th --a2.
    Appell {
        #[arg(long, required = true, allow_hyphen_values = true)]
        a1: Vec<ComplexArg>,
        #[arg(long, required = true, allow_hyphen_values = true)]
        a2: Vec<ComplexArg>,
        #[arg(long, default_value = "3/5", allow_hyphen_values = true)]
        a: BigRational,
        #[arg(long, default_value = "2/5", allow_hyphen_values = true)]
        b: BigRational,
        #[arg(long, default_value = "2/5", allow_hyphen_values = true)]
        b2: BigRational,
        #[arg(long, default_value = "6/5", allow_hyphen_values = true)]
        c: BigRational,
        #[command(flatten)]
        common: Common,
    },
    /// The three periods of the quintic cyclic cover branched at 0, 1, a1, a2.
    Vz5 {
        #[arg(long, required = true, allow_hyphen_values = true)]
        a1: Vec<ComplexArg>,
        #[arg(long, required = true, allow_hyphen_values = true)]
        a2: Vec<ComplexArg>,
        #[command(flatten)]
        common: Common,
    },
}

fn pv(v: &PeriodValue) -> Value {
    serde_json::to_value(v).expect("period values serialize")
}

fn point(z: &ComplexArg) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// `{"re","im","err","precision","report"}` for a main value.
fn with_report(main: &PeriodValue, report: Value) -> Value {
    let mut v = pv(main);
    v["report"] = report;
    v
}

fn distance(a: &PeriodValue, b: &PeriodValue, prec: u32) -> String {
    with_digits(prec + GUARD_DIGITS, || a.distance(b).to_decimal_sig(3))
}

fn paired(a1: &[ComplexArg], a2: &[ComplexArg]) -> Vec<(ComplexArg, ComplexArg)> {
    if a1.len() != a2.len() {
        clap::Error::raw(
            clap::error::ErrorKind::WrongNumberOfValues,
            format!("--a1 given {} times but --a2 {} times\n", a1.len(), a2.len()),
        )
        .exit();
    }
    a1.iter().cloned().zip(a2.iter().cloned()).collect()
}

pub fn run(cmd: PeriodCommand) -> Result<String> {
    let (values, emit) = match cmd {
        PeriodCommand::Elliptic { lambda, common } => {
            let p = common.prec.digits;
            let out = grid(&lambda, common.jobs, |l| {
                let z = l.value();
                let (w1, w2) = elliptic_periods(&z, p)?;
                let (g1, g2) = agm_periods(&z, p)?;
                let tau = with_digits(p + GUARD_DIGITS, || -> Result<PeriodValue> {
                    Ok(w2.div(&w1)?.scale(&Complex::from_real(Real::from_i64(-1))))
                })?;
                Ok(with_report(
                    &tau,
                    json!({
                        "quantity": "tau",
                        "lambda": point(l),
                        "omega1": pv(&w1),
                        "omega2": pv(&w2),
                        "agm_omega1_gap": distance(&w1, &g1, p),
                        "agm_omega2_gap": distance(&w2, &g2, p),
                    }),
                ))
            })?;
            (out, common.emit)
        }
        PeriodCommand::Schwarz { s, common } => {
            let p = common.prec.digits;
            let out = grid(&s, common.jobs, |s| {
                let z = s.value();
                let t = schwarz_t(&z, p)?;
                let check = if z.abs().to_f64() < 0.9 {
                    Value::String(distance(&t, &schwarz_t_series(&z, p)?, p))
                } else {
                    Value::Null
                };
                Ok(with_report(
                    &t,
                    json!({ "quantity": "schwarz_t", "s": point(s), "series_gap": check }),
                ))
            })?;
            (out, common.emit)
        }
        PeriodCommand::Appell {
            a1,
            a2,
            a,
            b,
            b2,
            c,
            common,
        } => {
            let p = common.prec.digits;
            let out = grid(&paired(&a1, &a2), common.jobs, |(x, y)| {
                let v = appell_f1(&a, &b, &b2, &c, &x.value(), &y.value(), p)?;
                Ok(with_report(
                    &v,
                    json!({
                        "quantity": "appell_f1",
                        "parameters": [a.to_string(), b.to_string(), b2.to_string(), c.to_string()],
                        "a1": point(x),
                        "a2": point(y),
                    }),
                ))
            })?;
            (out, common.emit)
        }
        PeriodCommand::Vz5 { a1, a2, common } => {
            let p = common.prec.digits;
            let out = grid(&paired(&a1, &a2), common.jobs, |(x, y)| {
                let per = vz_curve_periods(&x.value(), &y.value(), p)?;
                let (r2, r3) = with_digits(p + GUARD_DIGITS, || -> Result<_> {
                    Ok((per.p2.div(&per.p1)?, per.p3.div(&per.p1)?))
                })?;
                Ok(with_report(
                    &per.p1,
                    json!({
                        "quantity": "p1",
                        "a1": point(x),
                        "a2": point(y),
                        "p2": pv(&per.p2),
                        "p3": pv(&per.p3),
                        "p2_over_p1": pv(&r2),
                        "p3_over_p1": pv(&r3),
                    }),
                ))
            })?;
            (out, common.emit)
        }
    };
    let doc = if values.len() == 1 {
        values.into_iter().next().expect("one value")
    } else {
        Value::Array(values)
    };
    match emit {
        Emit::Json => render::json(&doc),
        Emit::Table => Ok(render::flat_table(&doc)),
    }
}

/// Evaluates `f` on every point with up to `jobs` threads, keeping input order.
fn grid<T, F>(points: &[T], jobs: u32, f: F) -> Result<Vec<Value>>
where
    T: Sync,
    F: Fn(&T) -> Result<Value> + Sync,
{
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Value>>>> = Mutex::new((0..points.len()).map(|_| None).collect());
    let workers = (jobs as usize).clamp(1, points.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= points.len() {
                    break;
                }
                let r = f(&points[i]);
                slots.lock().expect("result slots")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots")
        .into_iter()
        .map(|r| r.unwrap_or_else(|| Err(anyhow!("worker did not finish"))))
        .collect()
}

pub fn cm_detect(re: &str, im: &str, deg: u32, height: &BigInt, prec: u32, emit: Emit) -> Result<String> {
    let source = ExactDecimal::new(decimal(re).map_err(|e| anyhow!(e))?, decimal(im).map_err(|e| anyhow!(e))?)?;
    let report = cm_detect_source(&source, deg, height, prec)?;
    let mut doc = pv(&report.value);
    doc["report"] = serde_json::to_value(&report)?;
    match emit {
        Emit::Json => render::json(&doc),
        Emit::Table => Ok(format!(
            "{}\nsearch digits: {}\nverified at double precision: {}\n",
            report.summary(),
            report.search_digits,
            report.verified_at_double_precision
        )),
    }
}
