//! Seeded random search for configurations shorter than the reference one
//! outside the target box.

use std::fmt;

use anyhow::Result;
use mdm_core::scene::{self, parameter_ranges, ConfigPoint, ParamBox};
use mdm_core::search;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Margin below `L0` that counts as a violation.
pub const TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct FalsifyReport {
    pub samples: u64,
    pub seed: u64,
    pub l0: f64,
    pub rejected: u64,
    pub failed_evaluations: u64,
    /// Smallest upper end of `L(p)` seen, with its point.
    pub min_upper: Option<(f64, [f64; 6])>,
    pub violations: Vec<(f64, [f64; 6])>,
}

impl fmt::Display for FalsifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples {}", self.samples)?;
        writeln!(f, "seed {}", self.seed)?;
        writeln!(f, "l0 {}", self.l0)?;
        writeln!(f, "rejected {}", self.rejected)?;
        writeln!(f, "failed_evaluations {}", self.failed_evaluations)?;
        if let Some((v, p)) = &self.min_upper {
            writeln!(f, "min_upper {v} at {p:?}")?;
        }
        writeln!(f, "violations {}", self.violations.len())?;
        for (v, p) in &self.violations {
            writeln!(f, "violation {v} at {p:?}")?;
        }
        Ok(())
    }
}

fn in_target(p: &[f64; 6]) -> bool {
    let t = ParamBox::target();
    (0..3).all(|k| t.range(k).contains(p[k]))
}

/// Draws `samples` obtainable points of the parameter space outside the
/// target box, uniformly by rejection.
pub fn falsify(samples: u64, seed: u64) -> Result<FalsifyReport> {
    let l0 = search::reference_l0()?;
    let ranges = parameter_ranges().map(|(lo, hi)| (lo.hi(), hi.lo()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FalsifyReport {
        samples,
        seed,
        l0,
        rejected: 0,
        failed_evaluations: 0,
        min_upper: None,
        violations: Vec::new(),
    };
    let mut taken = 0;
    while taken < samples {
        let p: [f64; 6] = std::array::from_fn(|k| rng.gen_range(ranges[k].0..=ranges[k].1));
        if p[0] * p[0] + p[1] * p[1] < 4.0 || in_target(&p) {
            report.rejected += 1;
            continue;
        }
        taken += 1;
        let upper = match scene::total_length_l(&ConfigPoint::from_f64(p)) {
            Ok(l) => l.hi(),
            Err(_) => {
                report.failed_evaluations += 1;
                continue;
            }
        };
        if report.min_upper.is_none_or(|(m, _)| upper < m) {
            report.min_upper = Some((upper, p));
        }
        if upper < l0 - TOLERANCE {
            report.violations.push((upper, p));
        }
    }
    Ok(report)
}
