//! Corner configurations and their derived geometry.
//!
//! A configuration near the corner `A1 = (0, 0)` of the rectangle, with side
//! `A1 A2` along the X axis, is described by six parameters
//! `(x, y, alpha, xi1, xi2, xi)`. The covering radius is normalized to 1.

use std::fmt;

use crate::error::{Error, Result};
use crate::geom::IPoint;
use crate::interval::Interval;
use crate::steiner::{self, SteinerBound};

pub const PARAM_NAMES: [&str; 6] = ["x", "y", "alpha", "xi1", "xi2", "xi"];

/// Slack accepted when checking membership in the parameter space; boxes are
/// snapped outward to a dyadic grid, which may overshoot by far less.
const MEMBERSHIP_SLACK: f64 = 1.0e-6;

/// Grid used to snap search regions outward so that repeated bisection is exact.
pub const GRID_BITS: i32 = 30;

/// Deepest subdivision level at which bisection of a snapped box stays exact.
pub const MAX_EXACT_DEPTH: u32 = 19;

/// `4/sqrt(6) + 4`: abscissa of `Z1` and ordinate of `Z2`.
pub fn corner_reach() -> Interval {
    Interval::point(4.0).div(Interval::sqrt6()).expect("sqrt6 > 0") + 4.0
}

/// `4/sqrt(6) + 3`: upper end of the range of `x` and `y`.
pub fn xy_range_max() -> Interval {
    Interval::point(4.0).div(Interval::sqrt6()).expect("sqrt6 > 0") + 3.0
}

/// `11 pi / 12`, the fixed sum `alpha + beta`.
pub fn alpha_beta_sum() -> Interval {
    Interval::pi_frac(11, 12)
}

/// Reference angle `11 pi / 24`.
pub fn alpha_ref() -> Interval {
    Interval::pi_frac(11, 24)
}

/// Ranges of the parameter space, as enclosures of the exact endpoints.
pub fn parameter_ranges() -> [(Interval, Interval); 6] {
    let zero = Interval::ZERO;
    let half_pi = Interval::half_pi();
    [
        (zero, xy_range_max()),
        (zero, xy_range_max()),
        (Interval::pi_frac(5, 12), half_pi),
        (zero, half_pi),
        (zero, half_pi),
        (zero, half_pi),
    ]
}

/// A point (or a box, when the entries are wide) of the parameter space.
#[derive(Clone, Copy, PartialEq)]
pub struct ConfigPoint {
    pub x: Interval,
    pub y: Interval,
    pub alpha: Interval,
    pub xi1: Interval,
    pub xi2: Interval,
    pub xi: Interval,
}

impl fmt::Debug for ConfigPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_array()).finish()
    }
}

impl ConfigPoint {
    pub fn from_array(v: [Interval; 6]) -> Self {
        ConfigPoint {
            x: v[0],
            y: v[1],
            alpha: v[2],
            xi1: v[3],
            xi2: v[4],
            xi: v[5],
        }
    }

    pub fn from_f64(v: [f64; 6]) -> Self {
        ConfigPoint::from_array(v.map(Interval::point))
    }

    pub fn to_array(&self) -> [Interval; 6] {
        [self.x, self.y, self.alpha, self.xi1, self.xi2, self.xi]
    }

    pub fn mid(&self) -> [f64; 6] {
        self.to_array().map(|i| i.mid())
    }

    /// The symmetric reference configuration `(sqrt2, sqrt2, 11pi/24, pi/4, pi/4, pi/4)`.
    pub fn reference() -> Self {
        let q = Interval::pi_frac(1, 4);
        ConfigPoint {
            x: Interval::sqrt2(),
            y: Interval::sqrt2(),
            alpha: alpha_ref(),
            xi1: q,
            xi2: q,
            xi: q,
        }
    }

    pub fn beta(&self) -> Interval {
        alpha_beta_sum() - self.alpha
    }

    /// Reflection across the diagonal of the corner.
    pub fn mirror(&self) -> Self {
        ConfigPoint {
            x: self.y,
            y: self.x,
            alpha: self.beta(),
            xi1: self.xi2,
            xi2: self.xi1,
            xi: Interval::half_pi() - self.xi,
        }
    }

    /// Membership in the parameter space, up to a small slack.
    pub fn check_in_space(&self) -> Result<()> {
        let ranges = parameter_ranges();
        for (k, v) in self.to_array().iter().enumerate() {
            let (lo, hi) = ranges[k];
            if v.lo() < lo.lo() - MEMBERSHIP_SLACK || v.hi() > hi.hi() + MEMBERSHIP_SLACK {
                return Err(Error::OutOfParameterSpace {
                    name: PARAM_NAMES[k],
                    value: *v,
                });
            }
        }
        Ok(())
    }

    pub fn in_space(&self) -> bool {
        self.check_in_space().is_ok()
    }
}

/// A box `center +- half` in parameter space.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ParamBox {
    pub center: [f64; 6],
    pub half: [f64; 6],
}

impl ParamBox {
    pub fn new(center: [f64; 6], half: [f64; 6]) -> Result<Self> {
        for k in 0..6 {
            if !center[k].is_finite() || !half[k].is_finite() || half[k] < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "bad box coordinate {}: center {} half {}",
                    PARAM_NAMES[k], center[k], half[k]
                )));
            }
        }
        Ok(ParamBox { center, half })
    }

    pub fn point(center: [f64; 6]) -> Self {
        ParamBox {
            center,
            half: [0.0; 6],
        }
    }

    /// Smallest box with float center and half-widths covering `[lo, hi]` per axis.
    pub fn covering(ranges: [(f64, f64); 6]) -> Result<Self> {
        let mut center = [0.0; 6];
        let mut half = [0.0; 6];
        for k in 0..6 {
            let (lo, hi) = ranges[k];
            if !(lo <= hi) {
                return Err(Error::InvalidConfig(format!(
                    "empty range for {}: [{lo}, {hi}]",
                    PARAM_NAMES[k]
                )));
            }
            let c = 0.5 * lo + 0.5 * hi;
            let mut h = (c - lo).max(hi - c);
            while c - h > lo || c + h < hi {
                h = h.next_up();
            }
            center[k] = c;
            half[k] = h;
        }
        ParamBox::new(center, half)
    }

    /// Outward snap of `ranges` to the `2^-GRID_BITS` grid. Bisecting the
    /// resulting box up to `MAX_EXACT_DEPTH` times is exact in floating point.
    pub fn snapped(ranges: [(f64, f64); 6]) -> Result<Self> {
        let scale = 2f64.powi(GRID_BITS);
        let snapped = ranges.map(|(lo, hi)| ((lo * scale).floor() / scale, (hi * scale).ceil() / scale));
        let b = ParamBox::covering(snapped)?;
        debug_assert!((0..6).all(|k| b.center[k] - b.half[k] == snapped[k].0));
        Ok(b)
    }

    /// The whole parameter space, snapped outward.
    pub fn parameter_space() -> Self {
        let r = parameter_ranges().map(|(lo, hi)| (lo.lo(), hi.hi()));
        ParamBox::snapped(r).expect("valid ranges")
    }

    /// The target box around the reference configuration.
    pub fn target() -> Self {
        let half_pi = std::f64::consts::FRAC_PI_4;
        let s2 = std::f64::consts::SQRT_2;
        ParamBox {
            center: [s2, s2, alpha_ref().mid(), half_pi, half_pi, half_pi],
            half: [0.1, 0.1, 1.0 / 30.0, half_pi, half_pi, half_pi],
        }
    }

    /// Enclosure of the coordinate range along axis `k`.
    pub fn range(&self, k: usize) -> Interval {
        Interval::centered(self.center[k], self.half[k])
    }

    pub fn to_config(&self) -> ConfigPoint {
        ConfigPoint::from_array(std::array::from_fn(|k| self.range(k)))
    }

    pub fn center_config(&self) -> ConfigPoint {
        ConfigPoint::from_f64(self.center)
    }

    pub fn volume(&self) -> f64 {
        self.half.iter().map(|h| 2.0 * h).product()
    }

    /// The `2^6` boxes obtained by halving every side.
    pub fn children(&self) -> Vec<ParamBox> {
        let h2 = self.half.map(|h| 0.5 * h);
        (0..64u32)
            .map(|mask| {
                let center = std::array::from_fn(|k| {
                    if mask & (1 << k) != 0 {
                        self.center[k] + h2[k]
                    } else {
                        self.center[k] - h2[k]
                    }
                });
                ParamBox { center, half: h2 }
            })
            .collect()
    }

    /// Intersects the box with the parameter space; the flag records whether
    /// anything was cut away.
    pub fn clamp_to_space(&self) -> (ParamBox, bool) {
        let space = ParamBox::parameter_space();
        let mut ranges = [(0.0, 0.0); 6];
        let mut clamped = false;
        for k in 0..6 {
            let r = self.range(k);
            let s = space.range(k);
            let lo = r.lo().max(s.lo());
            let hi = r.hi().min(s.hi()).max(lo);
            clamped |= lo > r.lo() || hi < r.hi();
            ranges[k] = (lo, hi);
        }
        if !clamped {
            return (*self, false);
        }
        (ParamBox::covering(ranges).expect("non-empty"), true)
    }

    /// Canonical sort key: the bit patterns of center and half-widths.
    pub fn canonical_key(&self) -> [u64; 12] {
        let mut key = [0u64; 12];
        for k in 0..6 {
            key[k] = order_bits(self.center[k]);
            key[6 + k] = order_bits(self.half[k]);
        }
        key
    }
}

/// Bit pattern whose unsigned order matches the numeric order of floats.
fn order_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

/// The derived geometric points of a configuration.
#[derive(Clone, Copy, Debug)]
pub struct Scene {
    pub z1: IPoint,
    pub w1: IPoint,
    pub v: IPoint,
    pub w2: IPoint,
    pub z2: IPoint,
    pub q1: IPoint,
    pub q2: IPoint,
    pub q: IPoint,
    pub y_w1: IPoint,
    pub y_w2: IPoint,
    pub l1: Interval,
    pub l2: Interval,
}

impl Scene {
    /// Terminals of the Steiner tree closing the configuration.
    pub fn steiner_terminals(&self) -> [IPoint; 4] {
        [self.v, self.q1, self.q2, self.q]
    }
}

struct Trig {
    sin_a: Interval,
    cos_a: Interval,
    sin_b: Interval,
    cos_b: Interval,
    sin_2a: Interval,
    cos_2a: Interval,
    sin_2b: Interval,
    cos_2b: Interval,
}

fn trig(p: &ConfigPoint) -> Result<Trig> {
    let b = p.beta();
    let (a2, b2) = (p.alpha * 2.0, b * 2.0);
    Ok(Trig {
        sin_a: p.alpha.sin()?,
        cos_a: p.alpha.cos()?,
        sin_b: b.sin()?,
        cos_b: b.cos()?,
        sin_2a: a2.sin()?,
        cos_2a: a2.cos()?,
        sin_2b: b2.sin()?,
        cos_2b: b2.cos()?,
    })
}

fn two_over_sqrt3() -> Interval {
    Interval::point(2.0).div(Interval::sqrt3()).expect("sqrt3 > 0")
}

/// Lengths `|W1 V|` and `|W2 V|` from the intersection of the two rays.
pub fn chain_lengths(p: &ConfigPoint) -> Result<(Interval, Interval)> {
    let t = trig(p)?;
    let k = -two_over_sqrt3();
    let (x, y, a, b) = (p.x, p.y, p.alpha, p.beta());
    let l1 = k * (x * t.cos_2b + y * t.sin_2b + (a + b * 2.0).cos()? + t.sin_b);
    let l2 = k * (y * t.cos_2a + x * t.sin_2a + (a * 2.0 + b).cos()? + t.sin_a);
    Ok((l1, l2))
}

/// Geometry of a configuration. Fails only outside the parameter space.
pub fn derive_scene(p: &ConfigPoint) -> Result<Scene> {
    p.check_in_space()?;
    let t = trig(p)?;
    let (l1, l2) = chain_lengths(p)?;
    let (x, y) = (p.x, p.y);
    let w1 = IPoint::new(x + t.cos_a, t.sin_a);
    let w2 = IPoint::new(t.sin_b, y + t.cos_b);
    let v_from_w1 = w1 + IPoint::new(t.cos_2a, t.sin_2a).scale(l1);
    let v_from_w2 = w2 + IPoint::new(t.sin_2b, t.cos_2b).scale(l2);
    // Both expressions enclose V; the intersection is tighter than either.
    let v = IPoint::new(
        v_from_w1.x.intersect(&v_from_w2.x).unwrap_or(v_from_w1.x),
        v_from_w1.y.intersect(&v_from_w2.y).unwrap_or(v_from_w1.y),
    );
    let reach = corner_reach();
    Ok(Scene {
        z1: IPoint::new(reach, t.sin_a),
        w1,
        v,
        w2,
        z2: IPoint::new(t.sin_b, reach),
        q1: IPoint::new(x - p.xi1.cos()?, p.xi1.sin()?),
        q2: IPoint::new(p.xi2.sin()?, y - p.xi2.cos()?),
        q: IPoint::new(p.xi.cos()?, p.xi.sin()?),
        y_w1: IPoint::new(x, Interval::ZERO),
        y_w2: IPoint::new(Interval::ZERO, y),
        l1,
        l2,
    })
}

/// Closed form of `|Z1 W1| + |W1 V| + |V W2| + |W2 Z2|`, valid on all of the
/// parameter space regardless of the signs of the chain lengths.
pub fn curve_length_closed(p: &ConfigPoint) -> Result<Interval> {
    let (x, y, a) = (p.x, p.y, p.alpha);
    let b = p.beta();
    let phase = a * 2.0 - Interval::pi_frac(2, 3);
    let bracket = x * phase.sin()? + y * phase.cos()?
        - (a - Interval::pi_frac(1, 6)).cos()?
        - (a - Interval::pi_frac(1, 4)).sin()?;
    Ok(corner_reach() * 2.0 - x - a.cos()? - y - b.cos()? + two_over_sqrt3() * bracket)
}

/// `C(p)`; rejects configurations whose chain is certainly degenerate.
pub fn curve_length_c(p: &ConfigPoint) -> Result<Interval> {
    p.check_in_space()?;
    let (l1, l2) = chain_lengths(p)?;
    if l1.certainly_negative() || l2.certainly_negative() {
        return Err(Error::DegenerateChain { l1, l2 });
    }
    curve_length_closed(p)
}

/// `C(p)` by summing point-to-point distances of the scene.
pub fn curve_length_by_distances(s: &Scene) -> Interval {
    s.z1.dist(s.w1) + s.w1.dist(s.v) + s.v.dist(s.w2) + s.w2.dist(s.z2)
}

/// `L(p) = C(p) + |SMT(V, Q1, Q2, Q)|` together with the Steiner bound used.
#[derive(Clone, Debug)]
pub struct TotalLength {
    pub length: Interval,
    pub curve: Interval,
    pub steiner: SteinerBound,
}

pub fn total_length(p: &ConfigPoint) -> Result<TotalLength> {
    let scene = derive_scene(p)?;
    let curve = curve_length_closed(p)?;
    let steiner = steiner::melzak_lower_bound(&scene.steiner_terminals())?;
    let lo = (curve + Interval::point(steiner.lower)).lo();
    let hi = (curve + steiner.upper_enclosure).hi();
    Ok(TotalLength {
        length: Interval::from_raw(lo, hi.max(lo)),
        curve,
        steiner,
    })
}

/// Enclosure of `L(p)`.
pub fn total_length_l(p: &ConfigPoint) -> Result<Interval> {
    Ok(total_length(p)?.length)
}

/// No configuration in the box is obtainable: the two unit disks around
/// `y(W1)` and `y(W2)` would overlap.
pub fn is_unobtainable(b: &ParamBox) -> bool {
    let x = b.range(0).mag();
    let y = b.range(1).mag();
    let s = Interval::point(x).sqr() + Interval::point(y).sqr();
    s.hi() < 4.0
}

/// The x, y and alpha projections of the box lie inside those of the target box.
pub fn in_target_box(b: &ParamBox) -> bool {
    let t = ParamBox::target();
    (0..3).all(|k| b.range(k).subset_of(&t.range(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(i: Interval, v: f64, tol: f64) -> bool {
        i.lo() - tol <= v && v <= i.hi() + tol
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn reference_scene_matches_published_points() {
        let s = derive_scene(&ConfigPoint::reference()).unwrap();
        assert!(close(s.v.x, 1.108370, 1e-6) && close(s.v.y, 1.108370, 1e-6));
        assert!(close(s.w1.x, 1.544740, 1e-6) && close(s.w1.y, 0.991445, 1e-6));
        for q in [s.q, s.q1, s.q2] {
            assert!(close(q.x, 0.707107, 1e-6) && close(q.y, 0.707107, 1e-6));
        }
        assert!(s.l1.overlaps(&s.l2));
        assert!(s.v.x.width() < 1e-12);
    }

    #[test]
    fn right_angle_alpha_puts_w1_above_corner() {
        let p = ConfigPoint::from_f64([0.0, 1.0, std::f64::consts::FRAC_PI_2, 0.3, 0.3, 0.3]);
        let s = derive_scene(&p).unwrap();
        assert!(close(s.w1.x, 0.0, 1e-15) && close(s.w1.y, 1.0, 1e-15));
        assert!(s.z1.x.overlaps(&corner_reach()) && close(s.z1.y, 1.0, 1e-15));
    }

    #[test]
    fn reference_curve_length() {
        // 9.647504 - 0.567472 from the published reference values.
        let c = curve_length_c(&ConfigPoint::reference()).unwrap();
        assert!(close(c, 9.080032, 2e-6), "{c}");
    }

    #[test]
    fn outside_space_is_rejected() {
        let p = ConfigPoint::from_f64([5.0, 1.0, 1.4, 0.1, 0.1, 0.1]);
        assert!(matches!(
            derive_scene(&p),
            Err(Error::OutOfParameterSpace { name: "x", .. })
        ));
    }

    #[test]
    fn unobtainable_examples() {
        let b = ParamBox::new([0.5, 0.5, 1.4, 0.5, 0.5, 0.5], [0.1; 6]).unwrap();
        assert!(is_unobtainable(&b));
        let s2 = std::f64::consts::SQRT_2;
        assert!(!is_unobtainable(&ParamBox::point([s2, s2, 1.4, 0.5, 0.5, 0.5])));
        let b = ParamBox::new([2.0, 2.0, 1.4, 0.5, 0.5, 0.5], [0.05; 6]).unwrap();
        assert!(!is_unobtainable(&b));
    }

    #[test]
    fn target_examples() {
        let p0 = ConfigPoint::reference().mid();
        let b = ParamBox::new(p0, [0.01, 0.01, 0.001, 1.0, 1.0, 1.0]).unwrap();
        assert!(in_target_box(&b));
        let mut c = p0;
        c[0] += 0.2;
        assert!(!in_target_box(&ParamBox::new(c, [1e-6; 6]).unwrap()));
        assert!(!in_target_box(&ParamBox::parameter_space()));
        assert!(in_target_box(&ParamBox::target()));
    }

    #[test]
    fn bisection_of_snapped_space_is_exact() {
        let mut b = ParamBox::parameter_space();
        for depth in 0..MAX_EXACT_DEPTH {
            let kids = b.children();
            for k in 0..6 {
                let c = kids[0].center[k];
                let h = kids[0].half[k];
                assert_eq!((c - h) + h, c, "depth {depth}");
                assert_eq!(c - h, b.center[k] - b.half[k]);
            }
            b = kids[63];
        }
    }

    #[test]
    fn snapped_space_covers_exact_space() {
        let b = ParamBox::parameter_space();
        for (k, (lo, hi)) in parameter_ranges().iter().enumerate() {
            assert!(b.range(k).lo() <= lo.lo() && b.range(k).hi() >= hi.hi());
            assert!(b.range(k).hi() - hi.hi() < 1e-8);
        }
    }
}
