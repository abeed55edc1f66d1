use mdm_core::Interval;
use proptest::prelude::*;

fn interval() -> impl Strategy<Value = (Interval, f64, f64)> {
    (-50.0..50.0f64, 0.0..5.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(lo, w, s, u)| {
        let i = Interval::new(lo, lo + w).unwrap();
        (i, lo + s * w, lo + u * w)
    })
}

fn positive() -> impl Strategy<Value = (Interval, f64)> {
    (0.01..50.0f64, 0.0..5.0f64, 0.0..=1.0f64).prop_map(|(lo, w, s)| {
        (Interval::new(lo, lo + w).unwrap(), lo + s * w)
    })
}

proptest! {
    #[test]
    fn arithmetic_contains_pointwise((a, x, _) in interval(), (b, y, _) in interval()) {
        prop_assert!((a + b).contains(x + y));
        prop_assert!((a - b).contains(x - y));
        prop_assert!((a * b).contains(x * y));
        prop_assert!(a.sqr().contains(x * x));
        prop_assert!(a.abs().contains(x.abs()));
        if !b.contains_zero() {
            prop_assert!(a.div(b).unwrap().contains(x / y));
        }
    }

    #[test]
    fn elementary_functions_contain_pointwise((a, x, _) in interval(), (p, z) in positive()) {
        prop_assert!(a.sin().unwrap().contains(x.sin()));
        prop_assert!(a.cos().unwrap().contains(x.cos()));
        prop_assert!(p.sqrt().unwrap().contains(z.sqrt()));
        prop_assert!(p.recip().unwrap().contains(1.0 / z));
        let c = x.sin();
        let ci = Interval::point(c);
        prop_assert!(ci.asin().unwrap().contains(c.asin()));
        prop_assert!(ci.acos().unwrap().contains(c.acos()));
    }

    #[test]
    fn inclusion_monotone((a, x, y) in interval()) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let sub = Interval::new(lo, hi).unwrap();
        prop_assert!(sub.subset_of(&a));
        prop_assert!(sub.sin().unwrap().subset_of(&a.sin().unwrap()));
        prop_assert!(sub.cos().unwrap().subset_of(&a.cos().unwrap()));
        prop_assert!((sub * sub).subset_of(&(a * a)));
        prop_assert!(sub.sqr().subset_of(&a.sqr()));
    }

    #[test]
    fn outward_rounding_on_sums(x in -1e6..1e6f64, y in -1e6..1e6f64) {
        let s = Interval::point(x) + Interval::point(y);
        prop_assert!(s.lo() <= x + y && x + y <= s.hi());
        prop_assert!(s.width() <= 2.0 * f64::EPSILON * (x + y).abs().max(1e-300));
    }
}

#[test]
fn pi_constants_bracket() {
    assert!(Interval::pi().contains(std::f64::consts::PI));
    assert!(Interval::pi().hi() > std::f64::consts::PI);
    assert!(Interval::pi_frac(11, 24).contains(11.0 * std::f64::consts::PI / 24.0));
}
