//! Error budget for the box search.
//!
//! For a box with center `c` and half-widths `D`, every `p` in the box has
//! `L(p) >= L(c) - err(c, D)`, where the budget combines suprema of the
//! partial derivatives of `C` and `V` with the displacement of the Steiner
//! terminals `Q1`, `Q2`, `Q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Result;
use crate::interval::Interval;
use crate::scene::ParamBox;

/// Suprema of the absolute partial derivatives of `C` and `V` over a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBounds {
    pub dc_dx: f64,
    pub dc_dy: f64,
    pub dc_dalpha: f64,
    pub dv_dx: f64,
    pub dv_dy: f64,
    pub dv_dalpha: f64,
}

/// A way of bounding the partial derivatives over a box.
pub trait DerivativeStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn bounds(&self, b: &ParamBox) -> Result<DerivativeBounds>;
}

fn k() -> Interval {
    Interval::point(2.0).div(Interval::sqrt3()).expect("sqrt3 > 0")
}

fn phase(alpha: Interval) -> Interval {
    alpha * 2.0 - Interval::pi_frac(2, 3)
}

/// `dC/dx = -1 + (2/sqrt3) sin(2a - 2pi/3)`.
pub fn dc_dx(alpha: Interval) -> Result<Interval> {
    Ok(k() * phase(alpha).sin()? - 1.0)
}

/// `dC/dy = -1 + (2/sqrt3) cos(2a - 2pi/3)`.
pub fn dc_dy(alpha: Interval) -> Result<Interval> {
    Ok(k() * phase(alpha).cos()? - 1.0)
}

/// `dC/dalpha`, with `beta = 11pi/12 - alpha` moving along.
pub fn dc_dalpha(x: Interval, y: Interval, alpha: Interval) -> Result<Interval> {
    let beta = crate::scene::alpha_beta_sum() - alpha;
    let ph = phase(alpha);
    let inner = x * 2.0 * ph.cos()? - y * 2.0 * ph.sin()?
        + (alpha - Interval::pi_frac(1, 6)).sin()?
        - (alpha - Interval::pi_frac(1, 4)).cos()?;
    Ok(alpha.sin()? - beta.sin()? + k() * inner)
}

/// `dV/dalpha` as a vector, with `beta = 11pi/12 - alpha` moving along.
pub fn dv_dalpha(x: Interval, y: Interval, alpha: Interval) -> Result<(Interval, Interval)> {
    let beta = crate::scene::alpha_beta_sum() - alpha;
    let (a2, b2) = (alpha * 2.0, beta * 2.0);
    let (s2a, c2a, s2b, c2b) = (a2.sin()?, a2.cos()?, b2.sin()?, b2.cos()?);
    let l1 = -k() * (x * c2b + y * s2b + (alpha + b2).cos()? + beta.sin()?);
    let dl1 = -k() * (x * 2.0 * s2b - y * 2.0 * c2b + (alpha + b2).sin()? - beta.cos()?);
    let vx = -alpha.sin()? + dl1 * c2a - l1 * 2.0 * s2a;
    let vy = alpha.cos()? + dl1 * s2a + l1 * 2.0 * c2a;
    Ok((vx, vy))
}

fn norm(v: (Interval, Interval)) -> Interval {
    (v.0.sqr() + v.1.sqr()).sqrt_nonneg()
}

/// Interval evaluation of every partial derivative over the whole box.
pub struct IntervalStrategy;

impl DerivativeStrategy for IntervalStrategy {
    fn name(&self) -> &'static str {
        "interval"
    }

    fn bounds(&self, b: &ParamBox) -> Result<DerivativeBounds> {
        let (x, y, a) = (b.range(0), b.range(1), b.range(2));
        let beta = crate::scene::alpha_beta_sum() - a;
        Ok(DerivativeBounds {
            dc_dx: dc_dx(a)?.mag(),
            dc_dy: dc_dy(a)?.mag(),
            dc_dalpha: dc_dalpha(x, y, a)?.mag(),
            dv_dx: (k() * (a * 2.0).sin()?).mag(),
            dv_dy: (k() * (beta * 2.0).sin()?).mag(),
            dv_dalpha: norm(dv_dalpha(x, y, a)?).hi(),
        })
    }
}

/// Endpoint formulas exploiting monotonicity of each term in the parameter
/// space; falls back to interval evaluation where monotonicity is not given.
pub struct MonotoneStrategy;

impl MonotoneStrategy {
    fn applicable(b: &ParamBox) -> bool {
        let a = b.range(2);
        b.range(0).lo() >= 0.0
            && b.range(1).lo() >= 0.0
            && a.lo() >= Interval::pi_frac(1, 3).hi()
            && a.hi() <= Interval::pi_frac(7, 12).lo()
    }
}

impl DerivativeStrategy for MonotoneStrategy {
    fn name(&self) -> &'static str {
        "monotone"
    }

    fn bounds(&self, b: &ParamBox) -> Result<DerivativeBounds> {
        if !Self::applicable(b) {
            return IntervalStrategy.bounds(b);
        }
        let (xr, yr, ar) = (b.range(0), b.range(1), b.range(2));
        let a_lo = Interval::point(ar.lo());
        let a_hi = Interval::point(ar.hi());
        let b_lo = crate::scene::alpha_beta_sum() - a_hi;
        let b_hi = crate::scene::alpha_beta_sum() - a_lo;
        let (x_lo, x_hi) = (Interval::point(xr.lo()), Interval::point(xr.hi()));
        let (y_lo, y_hi) = (Interval::point(yr.lo()), Interval::point(yr.hi()));

        // Upper and lower bounds of dC/dalpha from the monotone pieces.
        let f1 = a_hi.sin()? - b_lo.sin()?
            + k() * (x_hi * 2.0 * phase(a_lo).cos()? - y_lo * 2.0 * phase(a_lo).sin()?
                + (a_hi - Interval::pi_frac(1, 6)).sin()?
                - (a_hi - Interval::pi_frac(1, 4)).cos()?);
        let f2 = -(a_lo.sin()? - b_hi.sin()?
            + k() * (x_lo * 2.0 * phase(a_hi).cos()? - y_hi * 2.0 * phase(a_hi).sin()?
                + (a_lo - Interval::pi_frac(1, 6)).sin()?
                - (a_lo - Interval::pi_frac(1, 4)).cos()?));
        let dc_dalpha = f1.hi().max(f2.hi()).max(0.0);

        Ok(DerivativeBounds {
            dc_dx: (Interval::ONE - k() * phase(a_lo).sin()?).mag(),
            dc_dy: (Interval::ONE - k() * phase(a_hi).cos()?).mag(),
            dc_dalpha,
            dv_dx: (k() * (a_lo * 2.0).sin()?).mag(),
            dv_dy: (k() * (b_lo * 2.0).sin()?).mag(),
            dv_dalpha: norm(dv_dalpha(xr, yr, ar)?).hi(),
        })
    }
}

/// Named derivative-bound strategies.
pub struct StrategyRegistry {
    strategies: BTreeMap<&'static str, Arc<dyn DerivativeStrategy>>,
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = StrategyRegistry {
            strategies: BTreeMap::new(),
        };
        r.register(Arc::new(IntervalStrategy));
        r.register(Arc::new(MonotoneStrategy));
        r
    }
}

impl StrategyRegistry {
    pub const DEFAULT: &'static str = "interval";

    pub fn register(&mut self, s: Arc<dyn DerivativeStrategy>) {
        self.strategies.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn DerivativeStrategy>> {
        self.strategies.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.keys().copied().collect()
    }
}

/// Derivative bounds with the default strategy.
pub fn derivative_bounds(b: &ParamBox) -> Result<DerivativeBounds> {
    IntervalStrategy.bounds(b)
}

/// `err(c, D)` for the given derivative bounds. The Steiner terminals move by
/// at most `D xi` (Q), `D xi1 + D x` (Q1) and `D xi2 + D y` (Q2).
pub fn err_with(b: &ParamBox, d: &DerivativeBounds) -> Interval {
    let h = b.half.map(Interval::point);
    let p = Interval::point;
    (p(d.dc_dx) + p(d.dv_dx) + 1.0) * h[0]
        + (p(d.dc_dy) + p(d.dv_dy) + 1.0) * h[1]
        + (p(d.dc_dalpha) + p(d.dv_dalpha)) * h[2]
        + h[3]
        + h[4]
        + h[5]
}

pub fn err(b: &ParamBox) -> Result<Interval> {
    Ok(err_with(b, &derivative_bounds(b)?))
}

/// Numeric `|dV/dalpha|` in the compact closed form.
pub fn dv_dalpha_compact(x: f64, y: f64, alpha: f64) -> f64 {
    let beta = 11.0 * std::f64::consts::PI / 12.0 - alpha;
    let num = 4.0 * x * (2.0 * beta).cos()
        + 4.0 * y * (2.0 * beta).sin()
        + 4.0 * beta.sin()
        + 3.0 * (alpha + 2.0 * beta).cos()
        - (3.0 * alpha + 2.0 * beta).cos();
    (num / ((4.0 * alpha + 4.0 * beta).cos() + 1.0)).abs()
}

/// Numeric `dV/dalpha` by components. `corrected` replaces the term
/// `-cos(a)` of the second numerator by `-cos(3a)`; without it the two forms
/// disagree.
pub fn dv_dalpha_components(x: f64, y: f64, alpha: f64, corrected: bool) -> (f64, f64) {
    let (a, b) = (alpha, 11.0 * std::f64::consts::PI / 12.0 - alpha);
    let den = 2.0 * ((4.0 * a + 4.0 * b).cos() + 1.0);
    let vx = (4.0 * y * (4.0 * b).cos() - 4.0 * x * (4.0 * b).sin() - 4.0 * y
        + 4.0 * (3.0 * b).cos()
        - 4.0 * b.cos()
        - (3.0 * a).sin()
        + (3.0 * a + 4.0 * b).sin()
        - 3.0 * (a + 4.0 * b).sin()
        + 3.0 * a.sin())
        / den;
    let odd = if corrected { (3.0 * a).cos() } else { a.cos() };
    let vy = -(4.0 * x * (4.0 * b).cos() + 4.0 * y * (4.0 * b).sin() + 4.0 * x - odd
        - (3.0 * a + 4.0 * b).cos()
        + 3.0 * (a + 4.0 * b).cos()
        + 3.0 * a.cos()
        + 4.0 * (3.0 * b).sin()
        - 4.0 * b.sin())
        / den;
    (vx, vy)
}

/// The compact and the (corrected) component forms of `|dV/dalpha|` agree.
pub fn dv_dalpha_crosscheck(x: Interval, y: Interval, alpha: Interval) -> bool {
    let (x, y, a) = (x.mid(), y.mid(), alpha.mid());
    let (vx, vy) = dv_dalpha_components(x, y, a, true);
    (vx.hypot(vy) - dv_dalpha_compact(x, y, a)).abs() <= 1e-9
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{chain_lengths, ConfigPoint};

    #[test]
    fn zero_box_has_zero_err() {
        let b = ParamBox::point(ConfigPoint::reference().mid());
        assert_eq!(err(&b).unwrap().hi(), 0.0);
    }

    #[test]
    fn dv_dx_at_reference() {
        let b = ParamBox::point(ConfigPoint::reference().mid());
        let d = derivative_bounds(&b).unwrap();
        // (2/sqrt3) sin(11pi/12)
        assert!((d.dv_dx - 0.298_858_490_722_684_2).abs() < 1e-12, "{}", d.dv_dx);
    }

    #[test]
    fn dc_dx_vanishes_at_right_angle() {
        let b = ParamBox::point([0.0, 0.0, std::f64::consts::FRAC_PI_2, 0.1, 0.1, 0.1]);
        let d = derivative_bounds(&b).unwrap();
        assert!(d.dc_dx < 1e-15, "{}", d.dc_dx);
    }

    #[test]
    fn registry_lists_both_strategies() {
        let r = StrategyRegistry::default();
        assert_eq!(r.names(), vec!["interval", "monotone"]);
        assert!(r.get(StrategyRegistry::DEFAULT).is_some());
        assert!(r.get("nope").is_none());
    }

    #[test]
    fn compact_form_is_the_partial_with_beta_fixed() {
        // Intersect the two rays with beta held fixed and differentiate in alpha.
        let (x, y, a) = (1.3, 1.5, 1.45);
        let b = 11.0 * std::f64::consts::PI / 12.0 - a;
        let v = |a: f64| {
            let l1 = -(x * (2.0 * b).cos() + y * (2.0 * b).sin() + (a + 2.0 * b).cos() + b.sin())
                / (2.0 * (a + b)).cos();
            (x + a.cos() + l1 * (2.0 * a).cos(), a.sin() + l1 * (2.0 * a).sin())
        };
        let h = 1e-6;
        let (p, m) = (v(a + h), v(a - h));
        let fd = ((p.0 - m.0) / (2.0 * h)).hypot((p.1 - m.1) / (2.0 * h));
        assert!((fd - dv_dalpha_compact(x, y, a)).abs() < 1e-6);
    }

    #[test]
    fn total_derivative_matches_finite_differences() {
        let (x, y, a) = (1.3, 1.5, 1.45);
        let v = |a: f64| {
            let p = ConfigPoint::from_f64([x, y, a, 0.0, 0.0, 0.0]);
            let (l1, _) = chain_lengths(&p).unwrap();
            let l1 = l1.mid();
            (x + a.cos() + l1 * (2.0 * a).cos(), a.sin() + l1 * (2.0 * a).sin())
        };
        let h = 1e-6;
        let (p, m) = (v(a + h), v(a - h));
        let fd = ((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h));
        let i = |t: f64| Interval::point(t);
        let (vx, vy) = dv_dalpha(i(x), i(y), i(a)).unwrap();
        assert!((vx.mid() - fd.0).abs() < 1e-6 && (vy.mid() - fd.1).abs() < 1e-6);
    }

    #[test]
    fn printed_component_form_disagrees_without_correction() {
        let (x, y, a) = (1.0, 1.5, 5.0 * std::f64::consts::PI / 12.0);
        let (vx, vy) = dv_dalpha_components(x, y, a, false);
        assert!((vx.hypot(vy) - dv_dalpha_compact(x, y, a)).abs() > 1e-3);
    }

    #[test]
    fn strategies_agree_on_zero_width_alpha_terms() {
        let b = ParamBox::point(ConfigPoint::reference().mid());
        let i = IntervalStrategy.bounds(&b).unwrap();
        let m = MonotoneStrategy.bounds(&b).unwrap();
        assert!((i.dc_dx - m.dc_dx).abs() < 1e-12);
        assert!((i.dc_dalpha - m.dc_dalpha).abs() < 1e-12);
        assert!((i.dv_dy - m.dv_dy).abs() < 1e-12);
    }
}
