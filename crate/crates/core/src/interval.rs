//! Closed real intervals with outward rounding.
//!
//! Every endpoint produced here is rounded away from the true result, so an
//! interval computed from enclosures of the inputs always encloses the exact
//! real result. Rounding is realized by nudging to the neighbouring float
//! after each operation; for `+ - * / sqrt` the nudge is only applied when an
//! error-free transformation shows the float result is inexact, so exact
//! operations stay tight. Library transcendentals are widened by a fixed
//! number of ulps.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Largest argument magnitude accepted by `sin`/`cos`.
pub const MAX_TRIG_ARGUMENT: f64 = 1.0e4;

/// Ulps added on each side of a libm transcendental result.
const LIBM_ULPS: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero: {0}")]
    DivisionByIntervalContainingZero(Interval),
    #[error("{op} is undefined on {arg}")]
    DomainViolation { op: &'static str, arg: Interval },
    #[error("invalid endpoints [{lo}, {hi}]")]
    InvalidBounds { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, IntervalError>;

mod round {
    // Below this magnitude the error terms of fma/two-sum may be inexact.
    const TINY: f64 = 1.0e-290;

    #[inline]
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        let e = (a - (s - bb)) + (b - bb);
        (s, e)
    }

    #[inline]
    pub fn add_down(a: f64, b: f64) -> f64 {
        let (s, e) = two_sum(a, b);
        if !s.is_finite() {
            return s;
        }
        if e < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    #[inline]
    pub fn add_up(a: f64, b: f64) -> f64 {
        let (s, e) = two_sum(a, b);
        if !s.is_finite() {
            return s;
        }
        if e > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_down(a: f64, b: f64) -> f64 {
        add_down(a, -b)
    }

    #[inline]
    pub fn sub_up(a: f64, b: f64) -> f64 {
        add_up(a, -b)
    }

    #[inline]
    pub fn mul_down(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if !p.is_finite() {
            return p;
        }
        if p.abs() < TINY {
            return p.next_down();
        }
        let e = a.mul_add(b, -p);
        if e < 0.0 {
            p.next_down()
        } else {
            p
        }
    }

    #[inline]
    pub fn mul_up(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if !p.is_finite() {
            return p;
        }
        if p.abs() < TINY {
            return p.next_up();
        }
        let e = a.mul_add(b, -p);
        if e > 0.0 {
            p.next_up()
        } else {
            p
        }
    }

    // Sign of (a/b - fl(a/b)); zero when exact.
    #[inline]
    fn div_residual_sign(a: f64, b: f64, q: f64) -> f64 {
        let r = (-q).mul_add(b, a);
        if r == 0.0 {
            0.0
        } else if (r < 0.0) == (b < 0.0) {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    pub fn div_down(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        let q = a / b;
        if !q.is_finite() {
            return q;
        }
        if q.abs() < TINY || a.abs() < TINY {
            return q.next_down();
        }
        if div_residual_sign(a, b, q) < 0.0 {
            q.next_down()
        } else {
            q
        }
    }

    #[inline]
    pub fn div_up(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        let q = a / b;
        if !q.is_finite() {
            return q;
        }
        if q.abs() < TINY || a.abs() < TINY {
            return q.next_up();
        }
        if div_residual_sign(a, b, q) > 0.0 {
            q.next_up()
        } else {
            q
        }
    }

    #[inline]
    pub fn sqrt_down(x: f64) -> f64 {
        let s = x.sqrt();
        if s == 0.0 || x < TINY {
            return if s == 0.0 { 0.0 } else { s.next_down() };
        }
        let r = (-s).mul_add(s, x);
        if r < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    #[inline]
    pub fn sqrt_up(x: f64) -> f64 {
        let s = x.sqrt();
        if x == 0.0 {
            return 0.0;
        }
        if x < TINY {
            return s.next_up();
        }
        let r = (-s).mul_add(s, x);
        if r > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    #[inline]
    pub fn down_ulps(mut v: f64, n: u32) -> f64 {
        for _ in 0..n {
            v = v.next_down();
        }
        v
    }

    #[inline]
    pub fn up_ulps(mut v: f64, n: u32) -> f64 {
        for _ in 0..n {
            v = v.next_up();
        }
        v
    }
}

/// A closed interval `[lo, hi]` of reals.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[{:.*e}, {:.*e}]", p, self.lo, p, self.hi),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo.is_infinite() || hi.is_infinite() {
            return Err(IntervalError::InvalidBounds { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Point interval holding exactly `x`.
    pub fn point(x: f64) -> Self {
        debug_assert!(x.is_finite());
        Interval { lo: x, hi: x }
    }

    /// Enclosure of a real that `x` approximates to within half an ulp,
    /// such as a decimal literal parsed into a float.
    pub fn around(x: f64) -> Self {
        Interval {
            lo: x.next_down(),
            hi: x.next_up(),
        }
    }

    /// Interval `[c - r, c + r]`, rounded outward.
    pub fn centered(c: f64, r: f64) -> Self {
        let r = r.abs();
        Interval {
            lo: round::sub_down(c, r),
            hi: round::add_up(c, r),
        }
    }

    pub(crate) fn from_raw(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "from_raw({lo}, {hi})");
        Interval { lo, hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        round::sub_up(self.hi, self.lo)
    }

    /// Upper bound on `max |x|`.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on `min |x|`.
    pub fn mig(&self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// True if every element is strictly below every element of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    // Fallible, so not `ops::Div`.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByIntervalContainingZero(rhs));
        }
        let (a, b) = (self, rhs);
        let candidates_lo = [
            round::div_down(a.lo, b.lo),
            round::div_down(a.lo, b.hi),
            round::div_down(a.hi, b.lo),
            round::div_down(a.hi, b.hi),
        ];
        let candidates_hi = [
            round::div_up(a.lo, b.lo),
            round::div_up(a.lo, b.hi),
            round::div_up(a.hi, b.lo),
            round::div_up(a.hi, b.hi),
        ];
        Ok(Interval {
            lo: candidates_lo.into_iter().fold(f64::INFINITY, f64::min),
            hi: candidates_hi.into_iter().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn sqr(self) -> Interval {
        let m = self.mig();
        let big = self.mag();
        Interval {
            lo: round::mul_down(m, m),
            hi: round::mul_up(big, big),
        }
    }

    pub fn abs(self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(IntervalError::DomainViolation {
                op: "sqrt",
                arg: self,
            });
        }
        Ok(Interval {
            lo: round::sqrt_down(self.lo),
            hi: round::sqrt_up(self.hi),
        })
    }

    /// `sqrt` of the non-negative part; only for quantities known to be
    /// non-negative whose enclosure straddles zero through rounding.
    pub fn sqrt_nonneg(self) -> Interval {
        let lo = self.lo.max(0.0);
        let hi = self.hi.max(0.0);
        Interval {
            lo: round::sqrt_down(lo),
            hi: round::sqrt_up(hi),
        }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn powi(self, n: u32) -> Interval {
        let mut acc = Interval::ONE;
        for _ in 0..n {
            acc = acc * self;
        }
        if n.is_multiple_of(2) && n > 0 && acc.lo < 0.0 {
            acc.lo = 0.0;
        }
        acc
    }

    pub fn sin(self) -> Result<Interval> {
        self.trig(Trig::Sin)
    }

    pub fn cos(self) -> Result<Interval> {
        self.trig(Trig::Cos)
    }

    fn trig(self, which: Trig) -> Result<Interval> {
        if self.mag() >= MAX_TRIG_ARGUMENT {
            return Err(IntervalError::DomainViolation {
                op: which.name(),
                arg: self,
            });
        }
        if self.is_point() && self.lo == 0.0 {
            return Ok(match which {
                Trig::Sin => Interval::ZERO,
                Trig::Cos => Interval::ONE,
            });
        }
        if self.hi - self.lo >= 6.3 {
            return Ok(Interval::from_raw(-1.0, 1.0));
        }
        let f = |x: f64| match which {
            Trig::Sin => x.sin(),
            Trig::Cos => x.cos(),
        };
        let (a, b) = (f(self.lo), f(self.hi));
        let mut lo = round::down_ulps(a.min(b), LIBM_ULPS);
        let mut hi = round::up_ulps(a.max(b), LIBM_ULPS);
        // Critical points: maxima at `max_phase + 2k pi`, minima at `max_phase + pi + 2k pi`.
        let max_phase = match which {
            Trig::Sin => std::f64::consts::FRAC_PI_2,
            Trig::Cos => 0.0,
        };
        if may_contain_phase(self, max_phase) {
            hi = 1.0;
        }
        if may_contain_phase(self, max_phase + std::f64::consts::PI) {
            lo = -1.0;
        }
        Ok(Interval::from_raw(lo.max(-1.0), hi.min(1.0)))
    }

    pub fn asin(self) -> Result<Interval> {
        if self.lo < -1.0 || self.hi > 1.0 {
            return Err(IntervalError::DomainViolation {
                op: "arcsin",
                arg: self,
            });
        }
        if self.is_point() && self.lo == 0.0 {
            return Ok(Interval::ZERO);
        }
        let half_pi = Interval::half_pi();
        Ok(Interval::from_raw(
            round::down_ulps(self.lo.asin(), LIBM_ULPS).max(-half_pi.hi),
            round::up_ulps(self.hi.asin(), LIBM_ULPS).min(half_pi.hi),
        ))
    }

    pub fn acos(self) -> Result<Interval> {
        if self.lo < -1.0 || self.hi > 1.0 {
            return Err(IntervalError::DomainViolation {
                op: "arccos",
                arg: self,
            });
        }
        let lo = if self.hi == 1.0 {
            0.0
        } else {
            round::down_ulps(self.hi.acos(), LIBM_ULPS).max(0.0)
        };
        let hi = round::up_ulps(self.lo.acos(), LIBM_ULPS).min(Interval::pi().hi);
        Ok(Interval::from_raw(lo, hi))
    }

    /// Enclosure of pi.
    pub fn pi() -> Interval {
        // f64 PI is the float just below pi.
        Interval::from_raw(std::f64::consts::PI, std::f64::consts::PI.next_up())
    }

    pub fn half_pi() -> Interval {
        Interval::from_raw(
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2.next_up(),
        )
    }

    /// Enclosure of `num * pi / den`.
    pub fn pi_frac(num: i64, den: i64) -> Interval {
        (Interval::pi() * Interval::point(num as f64))
            .div(Interval::point(den as f64))
            .expect("non-zero denominator")
    }

    pub fn sqrt2() -> Interval {
        Interval::point(2.0).sqrt().expect("positive")
    }

    pub fn sqrt3() -> Interval {
        Interval::point(3.0).sqrt().expect("positive")
    }

    pub fn sqrt6() -> Interval {
        Interval::point(6.0).sqrt().expect("positive")
    }

    /// Enclosure of the rational `num / den`.
    pub fn ratio(num: f64, den: f64) -> Interval {
        Interval::point(num)
            .div(Interval::point(den))
            .expect("non-zero denominator")
    }
}

#[derive(Clone, Copy)]
enum Trig {
    Sin,
    Cos,
}

impl Trig {
    fn name(self) -> &'static str {
        match self {
            Trig::Sin => "sin",
            Trig::Cos => "cos",
        }
    }
}

/// Whether `[x.lo, x.hi]` may contain `phase + 2k pi` for an integer `k`.
/// Errs on the side of `true`.
fn may_contain_phase(x: Interval, phase: f64) -> bool {
    let two_pi = 2.0 * std::f64::consts::PI;
    let u = (x.lo - phase) / two_pi;
    let v = (x.hi - phase) / two_pi;
    let slack = 1.0e-9;
    (v + slack).floor() >= (u - slack).ceil()
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::add_down(self.lo, rhs.lo),
            hi: round::add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: round::sub_down(self.lo, rhs.hi),
            hi: round::sub_up(self.hi, rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        // Sign-based case split keeps the common all-positive case cheap.
        if a.lo >= 0.0 && b.lo >= 0.0 {
            return Interval {
                lo: round::mul_down(a.lo, b.lo),
                hi: round::mul_up(a.hi, b.hi),
            };
        }
        let lo = [
            round::mul_down(a.lo, b.lo),
            round::mul_down(a.lo, b.hi),
            round::mul_down(a.hi, b.lo),
            round::mul_down(a.hi, b.hi),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let hi = [
            round::mul_up(a.lo, b.lo),
            round::mul_up(a.lo, b.hi),
            round::mul_up(a.hi, b.lo),
            round::mul_up(a.hi, b.hi),
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}
