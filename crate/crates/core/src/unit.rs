//! Scalars on the closed unit interval and the arithmetic policies they live under.
//!
//! Two carriers implement [`Scalar`]:
//!
//! * [`Exact`] is a reduced rational. Law-verification suites run on it, with
//!   every input drawn from a uniform grid `{0, 1/n, ..., 1}`.
//! * [`Approx`] is an `f64` compared with an absolute tolerance of
//!   [`Approx::TOLERANCE`]. The product t-norm runs on it.
//!
//! A [`Policy`] is the declared arithmetic of a model or a suite. It decides
//! which carrier is used and which inputs are admissible.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A number in `[0, 1]` together with the field operations needed by the
/// t-norms. Ordering is total; `approx_eq`/`approx_le` are the comparisons
/// used when checking laws.
pub trait Scalar:
    Copy
    + Ord
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Short tag used in reports.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;

    /// `num / den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Best representable value for `x`. Lossy for [`Exact`].
    fn from_f64(x: f64) -> Self;

    fn to_f64(self) -> f64;

    /// Equality up to the carrier's tolerance.
    fn approx_eq(self, other: Self) -> bool;

    /// `self <= other` up to the carrier's tolerance.
    fn approx_le(self, other: Self) -> bool {
        self <= other || self.approx_eq(other)
    }

    /// Whether the value is exactly `k / n` for an integer `k`.
    fn on_grid(self, n: u32) -> bool;

    /// Splits `self * m` into its integer part (clamped to `m - 1`) and the
    /// fractional remainder. Used by table interpolation.
    fn split_cell(self, m: u32) -> (u32, Self);

    fn is_unit(self) -> bool {
        Self::zero() <= self && self <= Self::one()
    }

    /// Clamp into `[0, 1]`.
    fn clamp_unit(self) -> Self {
        self.max(Self::zero()).min(Self::one())
    }
}

/// Exact rational on `[0, 1]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(Ratio<i64>);

impl Exact {
    pub fn new(num: i64, den: i64) -> Self {
        Exact(Ratio::new(num, den))
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    /// Parses `"0.25"`, `"1/3"`, `"1"` exactly.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some((n, d)) = text.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d <= 0 {
                return None;
            }
            return Some(Exact::new(n, d));
        }
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        if frac.len() > 15 {
            return None;
        }
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let int_part: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let frac_part: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        let num = int_part.checked_mul(den)?.checked_add(frac_part)?;
        Some(Exact::new(if neg { -num } else { num }, den))
    }

    /// Terminating decimal when the denominator allows it, otherwise `p/q`.
    pub fn render(self) -> String {
        let (n, d) = (self.numer(), self.denom());
        let mut rest = d;
        let (mut twos, mut fives) = (0u32, 0u32);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        if rest != 1 {
            return format!("{n}/{d}");
        }
        let digits = twos.max(fives);
        if digits == 0 {
            return n.to_string();
        }
        let scale = 10i128.pow(digits);
        let scaled = n as i128 * scale / d as i128;
        let sign = if scaled < 0 { "-" } else { "" };
        let scaled = scaled.abs();
        let int = scaled / scale;
        let frac = scaled % scale;
        format!("{sign}{int}.{frac:0width$}", width = digits as usize)
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $m:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            #[inline]
            fn $m(self, rhs: $ty) -> $ty {
                $ty(self.0.$m(rhs.0))
            }
        }
    };
}

forward_binop!(Exact, Add, add);
forward_binop!(Exact, Sub, sub);
forward_binop!(Exact, Mul, mul);
forward_binop!(Exact, Div, div);

impl Scalar for Exact {
    const NAME: &'static str = "exact";

    fn zero() -> Self {
        Exact(Ratio::from_integer(0))
    }

    fn one() -> Self {
        Exact(Ratio::from_integer(1))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Exact::new(num, den)
    }

    fn from_f64(x: f64) -> Self {
        Ratio::approximate_float(x)
            .map(Exact)
            .unwrap_or_else(|| if x > 0.5 { Self::one() } else { Self::zero() })
    }

    fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    fn approx_eq(self, other: Self) -> bool {
        self == other
    }

    fn approx_le(self, other: Self) -> bool {
        self <= other
    }

    fn on_grid(self, n: u32) -> bool {
        (n as i64) % self.denom() == 0
    }

    fn split_cell(self, m: u32) -> (u32, Self) {
        let scaled = self.0 * Ratio::from_integer(m as i64);
        let cell = (scaled.floor().to_integer().max(0) as u32).min(m.saturating_sub(1));
        (cell, Exact(scaled - Ratio::from_integer(cell as i64)))
    }
}

/// `f64` on `[0, 1]` with tolerant comparisons. Ordering is `f64::total_cmp`.
#[derive(Clone, Copy)]
pub struct Approx(pub f64);

impl Approx {
    pub const TOLERANCE: f64 = 1e-9;
}

impl PartialEq for Approx {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl Eq for Approx {}

impl PartialOrd for Approx {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Approx {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Twelve decimals with trailing zeros dropped; `Debug` keeps every digit.
impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = f.precision() {
            return write!(f, "{:.*}", p, self.0);
        }
        let s = format!("{:.12}", self.0);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        f.write_str(if s == "-0" { "0" } else { s })
    }
}

forward_binop!(Approx, Add, add);
forward_binop!(Approx, Sub, sub);
forward_binop!(Approx, Mul, mul);
forward_binop!(Approx, Div, div);

impl Scalar for Approx {
    const NAME: &'static str = "float";

    fn zero() -> Self {
        Approx(0.0)
    }

    fn one() -> Self {
        Approx(1.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Approx(num as f64 / den as f64)
    }

    fn from_f64(x: f64) -> Self {
        Approx(x)
    }

    fn to_f64(self) -> f64 {
        self.0
    }

    fn approx_eq(self, other: Self) -> bool {
        (self.0 - other.0).abs() <= Self::TOLERANCE
    }

    fn on_grid(self, n: u32) -> bool {
        let k = (self.0 * n as f64).round();
        (k / n as f64 - self.0).abs() <= Self::TOLERANCE
    }

    fn split_cell(self, m: u32) -> (u32, Self) {
        let scaled = self.0 * m as f64;
        let cell = (scaled.floor().max(0.0) as u32).min(m.saturating_sub(1));
        (cell, Approx(scaled - cell as f64))
    }
}

impl From<Exact> for Approx {
    fn from(v: Exact) -> Self {
        Approx(v.to_f64())
    }
}

/// Declared arithmetic of a model or verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Exact rationals restricted to `{0, 1/n, ..., 1}`.
    ExactGrid(u32),
    /// `f64` with absolute tolerance [`Approx::TOLERANCE`].
    Float,
}

impl Policy {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "float" {
            return Ok(Policy::Float);
        }
        let n = text
            .strip_prefix("grid:")
            .or_else(|| text.strip_prefix("grid "))
            .and_then(|n| n.trim().parse::<u32>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Usage(format!("unknown policy `{text}` (expected grid:<n> or float)")))?;
        Ok(Policy::ExactGrid(n))
    }

    /// Checks that `value` is admissible under this policy.
    pub fn admit<S: Scalar>(&self, value: S) -> Result<S> {
        if !value.is_unit() {
            return Err(Error::OutOfRange(value.to_string()));
        }
        match *self {
            Policy::ExactGrid(n) if !value.on_grid(n) => Err(Error::PolicyMismatch(format!(
                "{value} is not on the grid of resolution {n}"
            ))),
            _ => Ok(value),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::ExactGrid(n) => write!(f, "grid:{n}"),
            Policy::Float => f.write_str("float"),
        }
    }
}

/// Grid resolution plus whether a given t-norm maps the grid into itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPolicy {
    pub n: u32,
    pub closed: bool,
}

impl GridPolicy {
    /// Decides closure by applying `op` to every pair of grid values.
    pub fn for_tnorm<S: Scalar>(n: u32, op: &crate::tnorm::TNorm<S>) -> Self {
        let closed = (0..=n).all(|i| {
            (0..=n).all(|j| {
                op.apply(S::from_ratio(i as i64, n as i64), S::from_ratio(j as i64, n as i64))
                    .on_grid(n)
            })
        });
        GridPolicy { n, closed }
    }

    pub fn values<S: Scalar>(&self) -> Vec<S> {
        grid_values(self.n)
    }
}

/// `[0, 1/n, ..., 1]`.
pub fn grid_values<S: Scalar>(n: u32) -> Vec<S> {
    (0..=n).map(|k| S::from_ratio(k as i64, n as i64)).collect()
}
