//! Branch and bound over the parameter space, with an auditable certificate.
//!
//! Each box is resolved as unobtainable, as lying in the target box, or by the
//! bound `L(c) - err(c, D) >= L0`; otherwise it is split into `2^6` halves.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{err_with, DerivativeStrategy, IntervalStrategy, StrategyRegistry};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scene::{
    in_target_box, is_unobtainable, total_length_l, ConfigPoint, ParamBox, MAX_EXACT_DEPTH,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    Unobtainable,
    InTargetBox,
    BoundProved,
    Subdivided,
    BudgetExhausted,
}

impl Reason {
    pub const ALL: [Reason; 5] = [
        Reason::Unobtainable,
        Reason::InTargetBox,
        Reason::BoundProved,
        Reason::Subdivided,
        Reason::BudgetExhausted,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Reason::Unobtainable => "UNOBTAINABLE",
            Reason::InTargetBox => "IN_TARGET_BOX",
            Reason::BoundProved => "BOUND_PROVED",
            Reason::Subdivided => "SUBDIVIDED",
            Reason::BudgetExhausted => "BUDGET_EXHAUSTED",
        }
    }

    pub fn is_leaf(self) -> bool {
        self != Reason::Subdivided
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub center: [f64; 6],
    pub half: [f64; 6],
}

/// One resolved box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRecord {
    #[serde(rename = "box")]
    pub bx: BoxRecord,
    pub reason: Reason,
    #[serde(rename = "L_center", default, skip_serializing_if = "Option::is_none")]
    pub l_center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub err: Option<f64>,
    pub depth: u32,
}

impl CertificateRecord {
    pub fn param_box(&self) -> Result<ParamBox> {
        ParamBox::new(self.bx.center, self.bx.half)
    }

    fn sort_key(&self) -> ([u64; 12], u32) {
        let b = ParamBox {
            center: self.bx.center,
            half: self.bx.half,
        };
        (b.canonical_key(), self.depth)
    }
}

/// Certified lower endpoint of `L` at the reference configuration.
pub fn reference_l0() -> Result<f64> {
    Ok(total_length_l(&ConfigPoint::reference())?.lo())
}

#[derive(Clone)]
pub struct SearchConfig {
    pub l0: f64,
    /// Boxes at depth `depth_limit - 1` are not split further; the root has depth 0.
    pub depth_limit: u32,
    pub time_budget: Option<Duration>,
    pub workers: usize,
    pub root: ParamBox,
    pub strategy: Arc<dyn DerivativeStrategy>,
}

impl fmt::Debug for SearchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchConfig")
            .field("l0", &self.l0)
            .field("depth_limit", &self.depth_limit)
            .field("time_budget", &self.time_budget)
            .field("workers", &self.workers)
            .field("root", &self.root)
            .field("strategy", &self.strategy.name())
            .finish()
    }
}

impl SearchConfig {
    pub fn new(l0: f64, depth_limit: u32, root: ParamBox) -> Self {
        SearchConfig {
            l0,
            depth_limit,
            time_budget: None,
            workers: 1,
            root,
            strategy: Arc::new(IntervalStrategy),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth_limit < 1 || self.depth_limit > MAX_EXACT_DEPTH + 1 {
            return Err(Error::InvalidConfig(format!(
                "depth limit must lie in 1..={}, got {}",
                MAX_EXACT_DEPTH + 1,
                self.depth_limit
            )));
        }
        if !(self.l0 > 0.0 && self.l0.is_finite()) {
            return Err(Error::InvalidConfig(format!("L0 must be positive, got {}", self.l0)));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("at least one worker is needed".into()));
        }
        Ok(())
    }
}

/// Resolves one box; returns its record and, when split, its children.
pub fn process_box(
    b: &ParamBox,
    depth: u32,
    cfg: &SearchConfig,
) -> (CertificateRecord, Vec<ParamBox>) {
    let record = |reason, l_center, err| CertificateRecord {
        bx: BoxRecord {
            center: b.center,
            half: b.half,
        },
        reason,
        l_center,
        err,
        depth,
    };
    if is_unobtainable(b) {
        return (record(Reason::Unobtainable, None, None), vec![]);
    }
    if in_target_box(b) {
        return (record(Reason::InTargetBox, None, None), vec![]);
    }
    let evaluated = (|| -> Result<(f64, f64)> {
        let l = total_length_l(&b.center_config())?.lo();
        let e = err_with(b, &cfg.strategy.bounds(b)?).hi();
        Ok((l, e))
    })();
    let (l_center, err) = match evaluated {
        Ok((l, e)) => {
            if bound_holds(l, e, cfg.l0) {
                return (record(Reason::BoundProved, Some(l), Some(e)), vec![]);
            }
            (Some(l), Some(e))
        }
        Err(_) => (None, None),
    };
    if depth + 1 >= cfg.depth_limit {
        (record(Reason::BudgetExhausted, l_center, err), vec![])
    } else {
        (record(Reason::Subdivided, l_center, err), b.children())
    }
}

/// `l - e >= l0` with the subtraction rounded down.
pub fn bound_holds(l: f64, e: f64, l0: f64) -> bool {
    (Interval::point(l) - Interval::point(e)).lo() >= l0
}

#[derive(Debug, Clone)]
pub struct SearchSummary {
    pub counts: BTreeMap<Reason, u64>,
    pub max_depth: u32,
    pub wall: Duration,
    pub root: ParamBox,
    pub root_clamped: bool,
    /// Records sorted by canonical box key.
    pub records: Vec<CertificateRecord>,
}

impl SearchSummary {
    pub fn count(&self, r: Reason) -> u64 {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    pub fn success(&self) -> bool {
        self.count(Reason::BudgetExhausted) == 0
    }

    pub fn digest(&self) -> String {
        certificate_digest(&self.records)
    }
}

struct Queue {
    items: Vec<(ParamBox, u32)>,
    active: usize,
}

/// Runs the search. Records can arrive in any order; the summary holds them
/// sorted, so the certificate does not depend on scheduling.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchSummary> {
    cfg.validate()?;
    let start = Instant::now();
    let deadline = cfg.time_budget.map(|d| start + d);
    let (root, root_clamped) = cfg.root.clamp_to_space();
    let queue = Mutex::new(Queue {
        items: vec![(root, 0)],
        active: 0,
    });
    let ready = Condvar::new();
    let (tx, rx) = crossbeam_channel::unbounded::<CertificateRecord>();

    std::thread::scope(|scope| {
        for _ in 0..cfg.workers {
            let tx = tx.clone();
            let (queue, ready) = (&queue, &ready);
            scope.spawn(move || loop {
                let (b, depth) = {
                    let mut q = queue.lock().expect("queue lock");
                    loop {
                        if let Some(item) = q.items.pop() {
                            q.active += 1;
                            break item;
                        }
                        if q.active == 0 {
                            ready.notify_all();
                            return;
                        }
                        q = ready.wait(q).expect("queue lock");
                    }
                };
                let out_of_time = deadline.is_some_and(|d| Instant::now() >= d);
                let (record, children) = if out_of_time {
                    let r = CertificateRecord {
                        bx: BoxRecord {
                            center: b.center,
                            half: b.half,
                        },
                        reason: Reason::BudgetExhausted,
                        l_center: None,
                        err: None,
                        depth,
                    };
                    (r, vec![])
                } else {
                    process_box(&b, depth, cfg)
                };
                tx.send(record).expect("collector alive");
                let mut q = queue.lock().expect("queue lock");
                q.items.extend(children.into_iter().map(|c| (c, depth + 1)));
                q.active -= 1;
                ready.notify_all();
            });
        }
    });
    drop(tx);

    let mut records: Vec<CertificateRecord> = rx.into_iter().collect();
    sort_records(&mut records);
    let mut counts = BTreeMap::new();
    let mut max_depth = 0;
    for r in &records {
        *counts.entry(r.reason).or_insert(0) += 1;
        max_depth = max_depth.max(r.depth);
    }
    Ok(SearchSummary {
        counts,
        max_depth,
        wall: start.elapsed(),
        root,
        root_clamped,
        records,
    })
}

pub fn sort_records(records: &mut [CertificateRecord]) {
    records.sort_by_key(|r| r.sort_key());
}

pub fn record_line(r: &CertificateRecord) -> String {
    serde_json::to_string(r).expect("records serialize")
}

/// SHA-256 over the newline-terminated lines of the sorted records.
pub fn certificate_digest(records: &[CertificateRecord]) -> String {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut h = Sha256::new();
    for r in &sorted {
        h.update(record_line(r).as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

pub fn write_certificate<W: Write>(records: &[CertificateRecord], mut w: W) -> Result<()> {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    for r in &sorted {
        writeln!(w, "{}", record_line(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_certificate<R: BufRead>(r: R) -> Result<Vec<CertificateRecord>> {
    let mut out = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CertificateRecord =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: k + 1,
                msg: e.to_string(),
            })?;
        out.push(rec);
    }
    Ok(out)
}

impl FromStr for CertificateRecord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedRecord {
            line: 0,
            msg: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayReport {
    pub records: usize,
    pub leaves: usize,
    pub exhausted: usize,
    pub leaf_volume: f64,
    pub root_volume: f64,
}

impl ReplayReport {
    /// The certificate resolves every box (no exhausted leaves).
    pub fn complete(&self) -> bool {
        self.exhausted == 0
    }
}

/// Re-verifies every claim of a certificate and its partition bookkeeping.
/// Lines are numbered from 1 in the given order.
pub fn replay_certificate(records: &[CertificateRecord], l0: f64) -> Result<ReplayReport> {
    let registry = StrategyRegistry::default();
    let mut index: HashMap<([u64; 12], u32), usize> = HashMap::new();
    for (k, r) in records.iter().enumerate() {
        let b = r.param_box().map_err(|e| Error::MalformedRecord {
            line: k + 1,
            msg: e.to_string(),
        })?;
        if index.insert((b.canonical_key(), r.depth), k).is_some() {
            return Err(Error::PartitionFailure(format!(
                "line {} repeats a box",
                k + 1
            )));
        }
    }

    let mismatch = |line: usize, msg: String| Error::ClaimMismatch { line, msg };
    let mut claimed_children: HashSet<usize> = HashSet::new();
    let mut roots = Vec::new();
    let (mut leaves, mut exhausted) = (0, 0);
    let mut leaf_volume = 0.0;
    for (k, r) in records.iter().enumerate() {
        let line = k + 1;
        let b = r.param_box()?;
        if r.depth == 0 {
            roots.push(k);
        }
        match r.reason {
            Reason::Unobtainable => {
                if !is_unobtainable(&b) {
                    return Err(mismatch(line, "box is not unobtainable".into()));
                }
            }
            Reason::InTargetBox => {
                if !in_target_box(&b) {
                    return Err(mismatch(line, "box is not inside the target box".into()));
                }
            }
            Reason::BoundProved => {
                let (l, e) = match (r.l_center, r.err) {
                    (Some(l), Some(e)) => (l, e),
                    _ => {
                        return Err(Error::MalformedRecord {
                            line,
                            msg: "BOUND_PROVED without L_center and err".into(),
                        })
                    }
                };
                if !bound_holds(l, e, l0) {
                    return Err(mismatch(line, format!("{l} - {e} < L0 = {l0}")));
                }
                let l_true = total_length_l(&b.center_config())
                    .map_err(|err| mismatch(line, err.to_string()))?
                    .lo();
                if l > l_true {
                    return Err(mismatch(
                        line,
                        format!("L_center {l} exceeds the certified value {l_true}"),
                    ));
                }
                let e_needed = registry
                    .names()
                    .into_iter()
                    .filter_map(|n| registry.get(n)?.bounds(&b).ok().map(|d| err_with(&b, &d).hi()))
                    .fold(f64::INFINITY, f64::min);
                if e < e_needed {
                    return Err(mismatch(
                        line,
                        format!("err {e} is below the certified budget {e_needed}"),
                    ));
                }
            }
            Reason::Subdivided => {
                for c in b.children() {
                    match index.get(&(c.canonical_key(), r.depth + 1)) {
                        Some(&j) => {
                            if !claimed_children.insert(j) {
                                return Err(Error::PartitionFailure(format!(
                                    "line {} is the child of two boxes",
                                    j + 1
                                )));
                            }
                        }
                        None => {
                            return Err(Error::PartitionFailure(format!(
                                "line {line}: child box missing"
                            )))
                        }
                    }
                }
            }
            Reason::BudgetExhausted => exhausted += 1,
        }
        if r.reason.is_leaf() {
            leaves += 1;
            leaf_volume += b.volume();
        }
    }
    if roots.len() != 1 {
        return Err(Error::PartitionFailure(format!(
            "expected one root record, found {}",
            roots.len()
        )));
    }
    if claimed_children.len() + 1 != records.len() {
        return Err(Error::PartitionFailure(format!(
            "{} records are not reachable from the root",
            records.len() - 1 - claimed_children.len()
        )));
    }
    let root_volume = records[roots[0]].param_box()?.volume();
    if (leaf_volume - root_volume).abs() > 1e-9 * root_volume.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::PartitionFailure(format!(
            "leaf volume {leaf_volume} differs from root volume {root_volume}"
        )));
    }
    Ok(ReplayReport {
        records: records.len(),
        leaves,
        exhausted,
        leaf_volume,
        root_volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(root: ParamBox, depth: u32) -> SearchConfig {
        SearchConfig::new(reference_l0().unwrap(), depth, root)
    }

    #[test]
    fn unobtainable_box() {
        let b = ParamBox::new([0.3, 0.3, 1.4, 0.5, 0.5, 0.5], [0.05; 6]).unwrap();
        let (r, kids) = process_box(&b, 0, &cfg(b, 3));
        assert_eq!(r.reason, Reason::Unobtainable);
        assert!(kids.is_empty());
    }

    #[test]
    fn target_box_root() {
        let s = run_search(&cfg(ParamBox::target(), 2)).unwrap();
        assert_eq!(s.records.len(), 1);
        assert_eq!(s.records[0].reason, Reason::InTargetBox);
        assert!(s.success());
    }

    #[test]
    fn full_space_root_is_split() {
        let p = ParamBox::parameter_space();
        let (r, kids) = process_box(&p, 0, &cfg(p, 3));
        assert_eq!(r.reason, Reason::Subdivided);
        assert_eq!(kids.len(), 64);
        assert!(r.l_center.unwrap() - r.err.unwrap() < reference_l0().unwrap());
    }

    #[test]
    fn zero_time_budget_exhausts_root() {
        let mut c = cfg(ParamBox::parameter_space(), 3);
        c.time_budget = Some(Duration::ZERO);
        let s = run_search(&c).unwrap();
        assert_eq!(s.records.len(), 1);
        assert_eq!(s.records[0].reason, Reason::BudgetExhausted);
        assert!(!s.success());
    }

    #[test]
    fn records_round_trip_through_json() {
        let r = CertificateRecord {
            bx: BoxRecord {
                center: [0.1, 0.2, 1.3, 0.4, 0.5, 0.6],
                half: [0.5; 6],
            },
            reason: Reason::BoundProved,
            l_center: Some(9.75),
            err: Some(0.1),
            depth: 2,
        };
        let line = record_line(&r);
        assert!(line.starts_with(r#"{"box":{"center":[0.1,0.2,1.3,0.4,0.5,0.6]"#), "{line}");
        assert!(line.contains(r#""reason":"BOUND_PROVED","L_center":9.75,"err":0.1,"depth":2"#));
        assert_eq!(line.parse::<CertificateRecord>().unwrap(), r);
        let bare = CertificateRecord {
            reason: Reason::Unobtainable,
            l_center: None,
            err: None,
            ..r
        };
        assert!(!record_line(&bare).contains("L_center"));
    }

    #[test]
    fn invalid_configs() {
        let p = ParamBox::parameter_space();
        assert!(cfg(p, 0).validate().is_err());
        assert!(SearchConfig::new(-1.0, 2, p).validate().is_err());
    }
}
