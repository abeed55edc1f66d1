use mdm_core::bounds::{err, err_with, StrategyRegistry};
use mdm_core::scene::{parameter_ranges, total_length_l, ConfigPoint, ParamBox};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_box(rng: &mut ChaCha8Rng) -> ParamBox {
    let r = parameter_ranges().map(|(lo, hi)| (lo.hi(), hi.lo()));
    let mut center = [0.0; 6];
    let mut half = [0.0; 6];
    for k in 0..6 {
        let span = r[k].1 - r[k].0;
        let h = span * rng.gen_range(0.001..0.05);
        center[k] = rng.gen_range(r[k].0 + h..r[k].1 - h);
        half[k] = h;
    }
    ParamBox::new(center, half).unwrap()
}

#[test]
fn err_bounds_the_drop_from_the_center() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let registry = StrategyRegistry::default();
    for _ in 0..150 {
        let b = random_box(&mut rng);
        let lc = total_length_l(&b.center_config()).unwrap();
        let budgets: Vec<f64> = registry
            .names()
            .into_iter()
            .filter_map(|n| registry.get(n).unwrap().bounds(&b).ok())
            .map(|d| err_with(&b, &d).hi())
            .collect();
        assert!(!budgets.is_empty());
        assert!(err(&b).unwrap().hi() >= 0.0);
        for _ in 0..20 {
            let p: [f64; 6] =
                std::array::from_fn(|k| b.center[k] + b.half[k] * rng.gen_range(-1.0..=1.0));
            let lp = total_length_l(&ConfigPoint::from_f64(p)).unwrap();
            for e in &budgets {
                assert!(lp.hi() >= lc.lo() - e - 1e-9, "box {b:?} point {p:?}");
            }
        }
    }
}
