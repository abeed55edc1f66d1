//! Polynomial enclosures of functions of a small angle offset `t` on
//! `[-1/30, 1/30]`.
//!
//! A side is a polynomial with interval coefficients. The lower side of a
//! [`PolyBound`] bounds its function from below by the smallest value any
//! choice of coefficients can take at `t`; the upper side bounds it from
//! above by the largest. Rounding is absorbed into the coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Highest degree kept in a bound.
pub const DEGREE: usize = 6;

/// Interval-coefficient polynomial, constant term first.
pub type Poly = Vec<Interval>;

/// Upper enclosure of the half-width 1/30.
pub fn half_width() -> f64 {
    Interval::ratio(1.0, 30.0).hi()
}

/// The variable's domain, rounded outward.
pub fn domain() -> Interval {
    let h = half_width();
    Interval::from_raw(-h, h)
}

pub fn eval(p: &[Interval], t: Interval) -> Interval {
    let mut acc = Interval::ZERO;
    for c in p.iter().rev() {
        acc = acc * t + *c;
    }
    acc
}

fn poly_add(a: &[Interval], b: &[Interval]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).copied().unwrap_or(Interval::ZERO);
            let y = b.get(k).copied().unwrap_or(Interval::ZERO);
            x + y
        })
        .collect()
}

fn poly_scale(a: &[Interval], k: Interval) -> Poly {
    a.iter().map(|c| *c * k).collect()
}

fn poly_mul(a: &[Interval], b: &[Interval]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![Interval::ZERO];
    }
    let mut out = vec![Interval::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + *x * *y;
        }
    }
    out
}

/// Folds every monomial above `target` into the `t^target` coefficient using
/// `|a t^k| <= |a| h^(k - target) t^target` for `|t| <= h` and even `target`.
pub fn reduce_degree(p: &[Interval], target: usize) -> Poly {
    assert!(target == 2 || target == DEGREE, "target degree must be 2 or 6");
    let mut out: Poly = (0..=target)
        .map(|k| p.get(k).copied().unwrap_or(Interval::ZERO))
        .collect();
    let h = Interval::point(half_width());
    for (k, a) in p.iter().enumerate().skip(target + 1) {
        let m = (Interval::point(a.mag()) * h.powi((k - target) as u32)).hi();
        out[target] = out[target] + Interval::centered(0.0, m);
    }
    out
}

/// Enclosure of the range of `c0 + c1 t + c2 t^2` over `dom`.
pub fn quadratic_range(c: &[Interval; 3], dom: Interval) -> Interval {
    let ends = eval(c, Interval::point(dom.lo())).hull(&eval(c, Interval::point(dom.hi())));
    if c[2].certainly_positive() || c[2].certainly_negative() {
        let two_c2 = c[2] * 2.0;
        let vertex = (-c[1]).div(two_c2).expect("sign-definite");
        if vertex.overlaps(&dom) {
            let v = c[0] - c[1].sqr().div(two_c2 * 2.0).expect("sign-definite");
            return ends.hull(&v);
        }
        ends
    } else {
        c[0] + c[1] * dom + c[2] * dom.sqr()
    }
}

fn as_quadratic(p: &[Interval]) -> [Interval; 3] {
    let r = reduce_degree(p, 2);
    [r[0], r[1], r[2]]
}

/// Smallest value a side can take over the domain.
pub fn side_min(p: &[Interval]) -> f64 {
    quadratic_range(&as_quadratic(p), domain()).lo()
}

/// Largest value a side can take over the domain.
pub fn side_max(p: &[Interval]) -> f64 {
    quadratic_range(&as_quadratic(p), domain()).hi()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Span {
    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lo_open { t > self.lo } else { t >= self.lo };
        let below = if self.hi_open { t < self.hi } else { t <= self.hi };
        above && below
    }

    fn disjoint(&self, other: &Span) -> bool {
        let before = |a: &Span, b: &Span| a.hi < b.lo || (a.hi == b.lo && (a.hi_open || b.lo_open));
        before(self, other) || before(other, self)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// A superset of the points of the domain where a condition may hold.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibleSet {
    pub spans: Vec<Span>,
}

impl FeasibleSet {
    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.spans.iter().any(|s| s.contains(t))
    }

    pub fn disjoint(&self, other: &FeasibleSet) -> bool {
        self.spans
            .iter()
            .all(|a| other.spans.iter().all(|b| a.disjoint(b)))
    }

    /// Smallest and largest points, if any.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        let lo = self.spans.first()?.lo;
        let hi = self.spans.last()?.hi;
        Some((lo, hi))
    }
}

impl fmt::Display for FeasibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spans.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, s) in self.spans.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

fn midpoint_roots(c: &[Interval; 3], dom: Interval) -> Vec<f64> {
    let (a, b, k) = (c[2].mid(), c[1].mid(), c[0].mid());
    let scale = a.abs().max(b.abs()).max(k.abs());
    let mut roots = Vec::new();
    if scale == 0.0 {
        return roots;
    }
    if a.abs() > 1e-12 * scale {
        let disc = b * b - 4.0 * a * k;
        if disc >= 0.0 {
            let s = disc.sqrt();
            let qq = -0.5 * (b + b.signum() * s);
            if qq != 0.0 {
                roots.push(qq / a);
                roots.push(k / qq);
            } else {
                roots.push(0.0);
            }
        }
    } else if b != 0.0 {
        roots.push(-k / b);
    }
    roots.retain(|r| r.is_finite() && *r > dom.lo() && *r < dom.hi());
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// Superset of `{t in domain : p(t) >= 0}` (or `> 0` when `strict`), where
/// `p(t)` ranges over every choice of coefficients. Pieces are dropped only
/// when the quadratic is certified to violate the condition on them.
pub fn quadratic_feasible_set(c: &[Interval; 3], strict: bool) -> FeasibleSet {
    let dom = domain();
    let roots = midpoint_roots(c, dom);
    let mut cuts = vec![dom.lo()];
    cuts.extend(&roots);
    cuts.push(dom.hi());

    let violates = |piece: Interval| {
        let r = quadratic_range(c, piece);
        if strict {
            r.hi() <= 0.0
        } else {
            r.hi() < 0.0
        }
    };
    let mid_poly = [c[0].mid(), c[1].mid(), c[2].mid()];
    let mid_value = |t: f64| mid_poly[0] + t * (mid_poly[1] + t * mid_poly[2]);

    // Excluded closed pieces, in order.
    let mut excluded: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let m = 0.5 * (a + b);
        let v = mid_value(m);
        if (strict && v > 0.0) || (!strict && v >= 0.0) {
            continue;
        }
        let lo_is_root = a > dom.lo();
        let hi_is_root = b < dom.hi();
        let mut eps = 0.0_f64;
        let step = f64::EPSILON * half_width();
        loop {
            let lo = if lo_is_root { a + eps } else { a };
            let hi = if hi_is_root { b - eps } else { b };
            if lo > hi {
                break;
            }
            if violates(Interval::from_raw(lo, hi)) {
                excluded.push((lo, hi));
                break;
            }
            eps = if eps == 0.0 { step } else { eps * 4.0 };
            if eps > 0.25 * (b - a) {
                break;
            }
        }
    }

    let mut spans = Vec::new();
    let mut cursor = dom.lo();
    let mut cursor_open = false;
    for (lo, hi) in excluded {
        if lo > cursor {
            spans.push(Span {
                lo: cursor,
                hi: lo,
                lo_open: cursor_open,
                hi_open: true,
            });
        }
        cursor = hi;
        cursor_open = true;
    }
    if cursor < dom.hi() || !cursor_open {
        spans.push(Span {
            lo: cursor,
            hi: dom.hi(),
            lo_open: cursor_open,
            hi_open: false,
        });
    }
    FeasibleSet { spans }
}

/// Lower and upper polynomial bounds of one function of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBound {
    pub lower: [Interval; DEGREE + 1],
    pub upper: [Interval; DEGREE + 1],
}

fn to_array(p: &[Interval]) -> [Interval; DEGREE + 1] {
    let r = reduce_degree(p, DEGREE);
    let mut out = [Interval::ZERO; DEGREE + 1];
    out.copy_from_slice(&r);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    NonNegative,
    NonPositive,
}

impl PolyBound {
    pub fn from_sides(lower: &[Interval], upper: &[Interval]) -> Self {
        PolyBound {
            lower: to_array(lower),
            upper: to_array(upper),
        }
    }

    pub fn constant(c: Interval) -> Self {
        PolyBound::from_sides(&[c], &[c])
    }

    /// `c + slope * t`.
    pub fn affine(c: Interval, slope: Interval) -> Self {
        PolyBound::from_sides(&[c, slope], &[c, slope])
    }

    /// The variable itself.
    pub fn var() -> Self {
        PolyBound::affine(Interval::ZERO, Interval::ONE)
    }

    /// Enclosure of the bounded function at `t`.
    pub fn enclose_at(&self, t: f64) -> Interval {
        let x = Interval::point(t);
        Interval::from_raw(eval(&self.lower, x).lo(), eval(&self.upper, x).hi())
    }

    /// Enclosure of the function over the whole domain.
    pub fn range(&self) -> Interval {
        let lo = side_min(&self.lower);
        let hi = side_max(&self.upper);
        Interval::from_raw(lo.min(hi), hi.max(lo))
    }

    pub fn neg(&self) -> Self {
        PolyBound {
            lower: self.upper.map(|c| -c),
            upper: self.lower.map(|c| -c),
        }
    }

    pub fn add(&self, other: &PolyBound) -> Self {
        PolyBound::from_sides(
            &poly_add(&self.lower, &other.lower),
            &poly_add(&self.upper, &other.upper),
        )
    }

    pub fn sub(&self, other: &PolyBound) -> Self {
        self.add(&other.neg())
    }

    pub fn add_const(&self, c: Interval) -> Self {
        self.add(&PolyBound::constant(c))
    }

    /// Multiplication by a sign-definite constant.
    pub fn scale(&self, k: Interval) -> Result<Self> {
        if k.lo() >= 0.0 {
            Ok(PolyBound::from_sides(
                &poly_scale(&self.lower, k),
                &poly_scale(&self.upper, k),
            ))
        } else if k.hi() <= 0.0 {
            Ok(PolyBound::from_sides(
                &poly_scale(&self.upper, k),
                &poly_scale(&self.lower, k),
            ))
        } else {
            Err(Error::RangeConditionUnverifiable {
                step: format!("scale by {k} of indefinite sign"),
            })
        }
    }

    fn sign(&self) -> Option<Sign> {
        if side_min(&self.lower) >= 0.0 {
            Some(Sign::NonNegative)
        } else if side_max(&self.upper) <= 0.0 {
            Some(Sign::NonPositive)
        } else {
            None
        }
    }

    /// Product of two bounds. Each factor must be certified sign-definite on
    /// the domain; a non-positive factor is handled through its negation.
    pub fn mul(&self, other: &PolyBound) -> Result<Self> {
        let sa = self.sign().ok_or(Error::NegativityUnderMul)?;
        let sb = other.sign().ok_or(Error::NegativityUnderMul)?;
        let a = if sa == Sign::NonNegative { self.clone() } else { self.neg() };
        let b = if sb == Sign::NonNegative { other.clone() } else { other.neg() };
        let prod = PolyBound::from_sides(
            &poly_mul(&a.lower, &b.lower),
            &poly_mul(&a.upper, &b.upper),
        );
        Ok(if sa == sb { prod } else { prod.neg() })
    }

    /// Superset of the points where the bounded function may be `> 0`
    /// (`strict`) or `>= 0`, from the upper side reduced to a quadratic.
    pub fn feasible_set(&self, strict: bool) -> FeasibleSet {
        quadratic_feasible_set(&as_quadratic(&self.upper), strict)
    }
}

/// Allowed values of the argument `x + c`.
#[derive(Debug, Clone, Copy)]
pub enum Upper {
    Fixed(f64),
    TwiceCenter,
}

/// A function with Taylor coefficients and a monotone, sign-fixed sixth
/// derivative on its admissible arguments.
pub trait BaseFunction: Send + Sync {
    fn name(&self) -> &'static str;
    fn increasing(&self) -> bool;
    /// Open bounds on the expansion center.
    fn center_bounds(&self) -> (f64, f64);
    /// Open lower bound and upper rule for the argument.
    fn argument_bounds(&self) -> (f64, Upper);
    /// `f^(k)(c) / k!` for `k = 0..=5`.
    fn taylor(&self, c: Interval) -> Result<[Interval; 6]>;
    /// `f^(6)(z) / 6!`.
    fn sixth(&self, z: Interval) -> Result<Interval>;
}

fn fact(k: u32) -> f64 {
    (1..=k).product::<u32>() as f64
}

struct Sin;
struct Cos;
struct Arccos;
struct Recip(f64, &'static str);
struct Sqrt;

impl BaseFunction for Sin {
    fn name(&self) -> &'static str {
        "sin"
    }
    fn increasing(&self) -> bool {
        true
    }
    fn center_bounds(&self) -> (f64, f64) {
        (0.0, Interval::half_pi().lo())
    }
    fn argument_bounds(&self) -> (f64, Upper) {
        (0.0, Upper::Fixed(Interval::half_pi().lo()))
    }
    fn taylor(&self, c: Interval) -> Result<[Interval; 6]> {
        let (s, co) = (c.sin()?, c.cos()?);
        let cyc = [s, co, -s, -co];
        Ok(std::array::from_fn(|k| {
            cyc[k % 4].div(Interval::point(fact(k as u32))).expect("k! > 0")
        }))
    }
    fn sixth(&self, z: Interval) -> Result<Interval> {
        Ok((-z.sin()?).div(Interval::point(720.0))?)
    }
}

impl BaseFunction for Cos {
    fn name(&self) -> &'static str {
        "cos"
    }
    fn increasing(&self) -> bool {
        false
    }
    fn center_bounds(&self) -> (f64, f64) {
        (0.0, Interval::half_pi().lo())
    }
    fn argument_bounds(&self) -> (f64, Upper) {
        (0.0, Upper::Fixed(Interval::half_pi().lo()))
    }
    fn taylor(&self, c: Interval) -> Result<[Interval; 6]> {
        let (s, co) = (c.sin()?, c.cos()?);
        let cyc = [co, -s, -co, s];
        Ok(std::array::from_fn(|k| {
            cyc[k % 4].div(Interval::point(fact(k as u32))).expect("k! > 0")
        }))
    }
    fn sixth(&self, z: Interval) -> Result<Interval> {
        Ok((-z.cos()?).div(Interval::point(720.0))?)
    }
}

// Derivatives of arccos are -P_k(x) / (1 - x^2)^((2k - 1) / 2).
fn arccos_derivative(k: u32, x: Interval) -> Result<Interval> {
    let x2 = x.sqr();
    let num = match k {
        1 => Interval::ONE,
        2 => x,
        3 => x2 * 2.0 + 1.0,
        4 => x * (x2 * 2.0 + 3.0) * 3.0,
        5 => (x2.sqr() * 8.0 + x2 * 24.0 + 3.0) * 3.0,
        6 => x * (x2.sqr() * 8.0 + x2 * 40.0 + 15.0) * 15.0,
        _ => unreachable!("derivative order {k}"),
    };
    let w = Interval::ONE - x2;
    let root = w.sqrt()?;
    let den = w.powi(k - 1) * root;
    Ok(-num.div(den)?)
}

impl BaseFunction for Arccos {
    fn name(&self) -> &'static str {
        "arccos"
    }
    fn increasing(&self) -> bool {
        false
    }
    fn center_bounds(&self) -> (f64, f64) {
        (0.0, 0.85)
    }
    fn argument_bounds(&self) -> (f64, Upper) {
        (0.0, Upper::Fixed(0.85))
    }
    fn taylor(&self, c: Interval) -> Result<[Interval; 6]> {
        let mut out = [c.acos()?; 6];
        for k in 1..6u32 {
            out[k as usize] = arccos_derivative(k, c)?.div(Interval::point(fact(k)))?;
        }
        Ok(out)
    }
    fn sixth(&self, z: Interval) -> Result<Interval> {
        Ok(arccos_derivative(6, z)?.div(Interval::point(720.0))?)
    }
}

impl BaseFunction for Recip {
    fn name(&self) -> &'static str {
        self.1
    }
    fn increasing(&self) -> bool {
        false
    }
    fn center_bounds(&self) -> (f64, f64) {
        (self.0, f64::INFINITY)
    }
    fn argument_bounds(&self) -> (f64, Upper) {
        (self.0, Upper::TwiceCenter)
    }
    fn taylor(&self, c: Interval) -> Result<[Interval; 6]> {
        let r = c.recip()?;
        let mut out = [r; 6];
        for k in 1..6 {
            out[k] = -out[k - 1] * r;
        }
        Ok(out)
    }
    fn sixth(&self, z: Interval) -> Result<Interval> {
        Ok(z.recip()?.powi(7))
    }
}

impl BaseFunction for Sqrt {
    fn name(&self) -> &'static str {
        "sqrt"
    }
    fn increasing(&self) -> bool {
        true
    }
    fn center_bounds(&self) -> (f64, f64) {
        (1.5, f64::INFINITY)
    }
    fn argument_bounds(&self) -> (f64, Upper) {
        (1.5, Upper::TwiceCenter)
    }
    fn taylor(&self, c: Interval) -> Result<[Interval; 6]> {
        // binom(1/2, k) c^(1/2 - k)
        let root = c.sqrt()?;
        let inv = c.recip()?;
        let mut out = [root; 6];
        let mut binom = Interval::ONE;
        for k in 1..6 {
            binom = binom * Interval::ratio(1.5 - k as f64, k as f64);
            out[k] = binom * root * inv.powi(k as u32);
        }
        Ok(out)
    }
    fn sixth(&self, z: Interval) -> Result<Interval> {
        // binom(1/2, 6) = -21/1024
        let root = z.sqrt()?;
        Ok(-Interval::ratio(21.0, 1024.0) * root * z.recip()?.powi(6))
    }
}

/// Named base functions.
#[derive(Clone)]
pub struct BaseRegistry {
    entries: BTreeMap<&'static str, Arc<dyn BaseFunction>>,
}

impl Default for BaseRegistry {
    fn default() -> Self {
        let mut r = BaseRegistry {
            entries: BTreeMap::new(),
        };
        r.register(Arc::new(Sin));
        r.register(Arc::new(Cos));
        r.register(Arc::new(Arccos));
        r.register(Arc::new(Recip(0.4, "recip_0.4")));
        r.register(Arc::new(Recip(1.2, "recip_1.2")));
        r.register(Arc::new(Sqrt));
        r
    }
}

impl BaseRegistry {
    pub fn register(&mut self, f: Arc<dyn BaseFunction>) {
        self.entries.insert(f.name(), f);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn BaseFunction>> {
        self.entries.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

/// Looks up a function of the default registry; panics on unknown names.
pub fn base(name: &str) -> Arc<dyn BaseFunction> {
    BaseRegistry::default()
        .get(name)
        .unwrap_or_else(|| panic!("unknown base function {name}"))
}

fn check_center(f: &dyn BaseFunction, c: Interval) -> Result<()> {
    let (lo, hi) = f.center_bounds();
    if c.lo() > lo && c.hi() < hi {
        Ok(())
    } else {
        Err(Error::DomainConstraintViolated {
            function: f.name(),
            c,
        })
    }
}

fn argument_hi(f: &dyn BaseFunction, c: Interval) -> f64 {
    match f.argument_bounds().1 {
        Upper::Fixed(r) => r,
        Upper::TwiceCenter => 2.0 * c.lo(),
    }
}

/// Lower and upper remainder coefficients of `t^6` around center `c`.
fn remainder(f: &dyn BaseFunction, c: Interval) -> Result<(Interval, Interval)> {
    let lo = Interval::point(f.argument_bounds().0);
    let hi = match f.argument_bounds().1 {
        Upper::Fixed(r) => Interval::point(r),
        Upper::TwiceCenter => c * 2.0,
    };
    let m = f.sixth(lo)?.hull(&f.sixth(hi)?);
    Ok((Interval::point(m.lo()), Interval::point(m.hi())))
}

/// Taylor polynomial of `f(c + x)` with one-sided remainder, as lower and
/// upper sides in `x`.
fn taylor_sides(f: &dyn BaseFunction, c: Interval) -> Result<(Poly, Poly)> {
    let coeffs = f.taylor(c)?;
    let (r_lo, r_hi) = remainder(f, c)?;
    let mut lower: Poly = coeffs.to_vec();
    let mut upper = lower.clone();
    lower.push(r_lo);
    upper.push(r_hi);
    Ok((lower, upper))
}

/// Bound of `f(t + c)` over the domain.
pub fn base_bound(f: &dyn BaseFunction, c: f64) -> Result<PolyBound> {
    let ci = Interval::point(c);
    check_center(f, ci)?;
    let h = half_width();
    let (lo, _) = f.argument_bounds();
    if !(c - h > lo && c + h < argument_hi(f, ci)) {
        return Err(Error::DomainConstraintViolated {
            function: f.name(),
            c: ci,
        });
    }
    let (lower, upper) = taylor_sides(f, ci)?;
    Ok(PolyBound::from_sides(&lower, &upper))
}

/// `sum coeffs[k] * s^k`, with `s` an interval polynomial.
fn substitute(coeffs: &[Interval], s: &[Interval]) -> Poly {
    let mut out: Poly = vec![Interval::ZERO];
    let mut power: Poly = vec![Interval::ONE];
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = poly_mul(&power, s);
        }
        out = poly_add(&out, &poly_scale(&power, *c));
    }
    out
}

/// Bound of `f(g(t))` from a bound of `g`.
pub fn compose(f: &dyn BaseFunction, inner: &PolyBound) -> Result<PolyBound> {
    let c_low = inner.lower[0];
    let c_up = inner.upper[0];
    check_center(f, c_low)?;
    check_center(f, c_up)?;

    let lo_min = side_min(&inner.lower);
    let hi_max = side_max(&inner.upper);
    let (arg_lo, _) = f.argument_bounds();
    let arg_hi = argument_hi(f, c_low).min(argument_hi(f, c_up));
    if !(lo_min > arg_lo && hi_max < arg_hi) {
        return Err(Error::RangeConditionUnverifiable {
            step: format!(
                "{}: argument range [{lo_min}, {hi_max}] not inside ({arg_lo}, {arg_hi})",
                f.name()
            ),
        });
    }

    let shifted = |p: &[Interval; DEGREE + 1]| {
        let mut s = p.to_vec();
        s[0] = Interval::ZERO;
        s
    };
    let (lo_src, lo_c, up_src, up_c) = if f.increasing() {
        (&inner.lower, c_low, &inner.upper, c_up)
    } else {
        (&inner.upper, c_up, &inner.lower, c_low)
    };
    let (lower_taylor, _) = taylor_sides(f, lo_c)?;
    let (_, upper_taylor) = taylor_sides(f, up_c)?;
    let lower = substitute(&lower_taylor, &shifted(lo_src));
    let upper = substitute(&upper_taylor, &shifted(up_src));
    Ok(PolyBound::from_sides(&lower, &upper))
}

/// `compose` through a registry name.
pub fn apply(name: &str, inner: &PolyBound) -> Result<PolyBound> {
    compose(base(name).as_ref(), inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> impl Iterator<Item = f64> {
        let h = 1.0 / 30.0;
        (0..=n).map(move |i| -h + 2.0 * h * i as f64 / n as f64)
    }

    fn encloses(b: &PolyBound, f: impl Fn(f64) -> f64, tol: f64) {
        for t in grid(400) {
            let e = b.enclose_at(t);
            let v = f(t);
            assert!(
                e.lo() <= v + tol && v - tol <= e.hi(),
                "t = {t}: {v} not in {e}"
            );
        }
    }

    #[test]
    fn sin_at_zero_offset() {
        let b = base_bound(base("sin").as_ref(), std::f64::consts::FRAC_PI_4).unwrap();
        let e = b.enclose_at(0.0);
        assert!(e.contains(std::f64::consts::FRAC_1_SQRT_2));
        assert!(e.width() < 1e-15);
    }

    #[test]
    fn base_bounds_enclose() {
        encloses(&base_bound(base("recip_1.2").as_ref(), 1.3).unwrap(), |t| 1.0 / (t + 1.3), 1e-14);
        encloses(&base_bound(base("recip_0.4").as_ref(), 0.5).unwrap(), |t| 1.0 / (t + 0.5), 1e-14);
        encloses(&base_bound(base("arccos").as_ref(), 0.5).unwrap(), |t| (t + 0.5).acos(), 1e-14);
        encloses(&base_bound(base("sqrt").as_ref(), 2.0).unwrap(), |t| (t + 2.0).sqrt(), 1e-14);
        encloses(&base_bound(base("cos").as_ref(), 1.0).unwrap(), |t| (t + 1.0).cos(), 1e-14);
        encloses(&base_bound(base("sin").as_ref(), 0.3).unwrap(), |t| (t + 0.3).sin(), 1e-14);
    }

    #[test]
    fn arccos_width_matches_remainder() {
        let b = base_bound(base("arccos").as_ref(), 0.5).unwrap();
        let h = 1.0 / 30.0;
        let m = arccos_derivative(6, Interval::point(0.85)).unwrap().mag() / 720.0;
        for t in [-h, h] {
            assert!(b.enclose_at(t).width() <= m * h.powi(6) * 1.0001 + 1e-15);
        }
    }

    #[test]
    fn domain_constraints() {
        assert!(matches!(
            base_bound(base("recip_1.2").as_ref(), 1.0),
            Err(Error::DomainConstraintViolated { .. })
        ));
        assert!(base_bound(base("arccos").as_ref(), 0.84).is_err());
        assert!(base_bound(base("sqrt").as_ref(), 1.4).is_err());
    }

    #[test]
    fn reduce_seventh_power() {
        let mut p = vec![Interval::ZERO; 8];
        p[7] = Interval::ONE;
        let r = reduce_degree(&p, 6);
        assert_eq!(r.len(), 7);
        assert!(r[6].contains(1.0 / 30.0) && r[6].contains(-1.0 / 30.0));
        assert!(r[6].width() < 2.0 / 30.0 + 1e-15);
        let q = vec![Interval::point(1.0), Interval::point(2.0)];
        assert_eq!(reduce_degree(&q, 2)[..2], q[..]);
    }

    #[test]
    fn quadratic_examples() {
        let z = Interval::ZERO;
        let r = quadratic_range(&[z, z, Interval::ONE], domain());
        assert!(r.contains(0.0) && r.lo() >= 0.0);
        assert!((r.hi() - 1.0 / 900.0).abs() < 1e-15);

        let s = quadratic_feasible_set(&[z, Interval::ONE, z], true);
        assert_eq!(s.spans.len(), 1);
        let sp = s.spans[0];
        assert!(sp.lo_open && sp.lo == 0.0 && !sp.hi_open);
        assert!(!s.contains(0.0) && s.contains(1e-9) && s.contains(1.0 / 30.0));

        let s = quadratic_feasible_set(&[Interval::point(1e-4), z, -Interval::ONE], false);
        assert_eq!(s.spans.len(), 1);
        let (lo, hi) = s.bounds().unwrap();
        assert!((lo + 0.01).abs() < 1e-12 && (hi - 0.01).abs() < 1e-12, "{s}");
    }

    #[test]
    fn sum_with_negation_encloses_zero() {
        let a = base_bound(base("sin").as_ref(), 0.7).unwrap();
        let z = a.add(&a.neg());
        for t in grid(50) {
            assert!(z.enclose_at(t).contains(0.0));
        }
    }

    #[test]
    fn constant_products() {
        let a = PolyBound::constant(Interval::new(2.0, 3.0).unwrap());
        let b = PolyBound::constant(Interval::new(4.0, 5.0).unwrap());
        let p = a.mul(&b).unwrap();
        let e = p.enclose_at(0.01);
        assert!(e.contains(8.0) && e.contains(15.0));
        let m = PolyBound::var();
        assert!(matches!(m.mul(&a), Err(Error::NegativityUnderMul)));
        let neg = a.neg().mul(&b).unwrap();
        assert!(neg.enclose_at(0.0).contains(-12.0));
    }

    #[test]
    fn composition_encloses() {
        let g = PolyBound::affine(Interval::point(0.9), Interval::point(2.0));
        encloses(&apply("sin", &g).unwrap(), |t| (0.9 + 2.0 * t).sin(), 1e-15);
        let g = PolyBound::affine(Interval::point(0.5), Interval::point(-1.5));
        encloses(&apply("arccos", &g).unwrap(), |t| (0.5 - 1.5 * t).acos(), 1e-15);
        let g = apply("sin", &PolyBound::affine(Interval::point(1.0), Interval::ONE)).unwrap();
        encloses(&apply("recip_0.4", &g).unwrap(), |t| 1.0 / (1.0 + t).sin(), 1e-15);
        let c = PolyBound::constant(Interval::point(1.3));
        assert!(apply("recip_1.2", &c).unwrap().enclose_at(0.02).contains(1.0 / 1.3));
    }

    #[test]
    fn unverifiable_range_is_reported() {
        let g = PolyBound::affine(Interval::point(0.8), Interval::point(3.0));
        assert!(matches!(
            apply("arccos", &g),
            Err(Error::RangeConditionUnverifiable { .. })
        ));
    }

    #[test]
    fn registry_lists_six() {
        assert_eq!(BaseRegistry::default().names().len(), 6);
    }
}
