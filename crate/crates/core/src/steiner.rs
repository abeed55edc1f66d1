//! Steiner minimal trees on two to four terminals.
//!
//! The lower bound is the minimum, over every tree topology, of a certified
//! lower bound on the shortest tree with that topology. Steiner points are
//! eliminated with Melzak's equilateral-point construction: for any point `P`
//! and any equilateral triangle `a b E`, Ptolemy's inequality gives
//! `|Pa| + |Pb| >= |PE|`, so replacing a cherry `{a, b}` by either of its two
//! equilateral points never overestimates, and the larger of the two results
//! is still a lower bound. The upper value comes from an
//! explicit tree whose Steiner points are computed numerically.

use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{IPoint, Pt};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    SpanningTree,
    OneSteiner,
    FullSteiner,
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::SpanningTree => "spanning-tree",
            TopologyKind::OneSteiner => "one-steiner",
            TopologyKind::FullSteiner => "full-steiner",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Terminal(usize),
    Steiner(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Terminal(i) => write!(f, "T{i}"),
            Node::Steiner(i) => write!(f, "S{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Tree,
    /// Steiner point joined to three terminals, plus optional pendant edge.
    Star([usize; 3], Option<(usize, usize)>),
    /// Two Steiner points, each joined to a cherry of terminals.
    Cherries([usize; 2], [usize; 2]),
}

/// A tree topology over terminals `T0..Tn` and abstract Steiner slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub kind: TopologyKind,
    pub terminals: usize,
    pub edges: Vec<(Node, Node)>,
    shape: Shape,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.kind)?;
        for (k, (a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, " {a}-{b}")?;
        }
        f.write_str(" }")
    }
}

impl Topology {
    fn tree(terminals: usize, edges: Vec<(usize, usize)>) -> Self {
        Topology {
            kind: TopologyKind::SpanningTree,
            terminals,
            edges: edges
                .into_iter()
                .map(|(a, b)| (Node::Terminal(a.min(b)), Node::Terminal(a.max(b))))
                .collect(),
            shape: Shape::Tree,
        }
    }

    fn star(terminals: usize, triple: [usize; 3], pendant: Option<(usize, usize)>) -> Self {
        let s = Node::Steiner(0);
        let mut edges: Vec<_> = triple.iter().map(|&t| (Node::Terminal(t), s)).collect();
        if let Some((d, e)) = pendant {
            edges.push((Node::Terminal(d.min(e)), Node::Terminal(d.max(e))));
        }
        Topology {
            kind: if pendant.is_some() {
                TopologyKind::OneSteiner
            } else {
                TopologyKind::FullSteiner
            },
            terminals,
            edges,
            shape: Shape::Star(triple, pendant),
        }
    }

    fn cherries(p: [usize; 2], q: [usize; 2]) -> Self {
        let (s0, s1) = (Node::Steiner(0), Node::Steiner(1));
        Topology {
            kind: TopologyKind::FullSteiner,
            terminals: 4,
            edges: vec![
                (Node::Terminal(p[0]), s0),
                (Node::Terminal(p[1]), s0),
                (s0, s1),
                (Node::Terminal(q[0]), s1),
                (Node::Terminal(q[1]), s1),
            ],
            shape: Shape::Cherries(p, q),
        }
    }

    pub fn steiner_slots(&self) -> usize {
        match self.shape {
            Shape::Tree => 0,
            Shape::Star(..) => 1,
            Shape::Cherries(..) => 2,
        }
    }

    /// Structural invariants: a connected tree, Steiner slots of degree 3,
    /// terminals of degree at most 3.
    pub fn is_well_formed(&self) -> bool {
        let nodes = self.terminals + self.steiner_slots();
        if self.edges.len() + 1 != nodes.max(1) {
            return false;
        }
        let index = |n: Node| match n {
            Node::Terminal(i) => i,
            Node::Steiner(i) => self.terminals + i,
        };
        let mut degree = vec![0usize; nodes];
        let mut parent: Vec<usize> = (0..nodes).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for &(a, b) in &self.edges {
            let (a, b) = (index(a), index(b));
            if a >= nodes || b >= nodes {
                return false;
            }
            degree[a] += 1;
            degree[b] += 1;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        let terminals_ok = degree[..self.terminals].iter().all(|&d| d <= 3);
        let steiner_ok = degree[self.terminals..].iter().all(|&d| d == 3);
        terminals_ok && steiner_ok
    }
}

/// Labeled trees on `n` vertices via Pruefer sequences.
fn labeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n <= 1 {
        return vec![vec![]];
    }
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = n - 2;
    let mut out = Vec::new();
    let total = n.pow(len as u32);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = (0..n).find(|&i| degree[i] == 1).expect("a leaf exists");
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

/// Every tree topology on `n` terminals with Steiner points of degree 3.
pub fn enumerate_topologies(n: usize) -> Result<Vec<Topology>> {
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedCount(n));
    }
    Ok(catalogue(n))
}

fn catalogue(n: usize) -> Vec<Topology> {
    let mut out: Vec<Topology> = labeled_trees(n)
        .into_iter()
        .map(|e| Topology::tree(n, e))
        .collect();
    match n {
        3 => out.push(Topology::star(3, [0, 1, 2], None)),
        4 => {
            for missing in 0..4 {
                let triple: Vec<usize> = (0..4).filter(|&i| i != missing).collect();
                let triple = [triple[0], triple[1], triple[2]];
                for &attach in &triple {
                    out.push(Topology::star(4, triple, Some((missing, attach))));
                }
            }
            for q in [[1, 2, 3], [2, 1, 3], [3, 1, 2]] {
                out.push(Topology::cherries([0, q[0]], [q[1], q[2]]));
            }
        }
        _ => {}
    }
    out
}

fn cos_120_bound() -> f64 {
    -0.5
}

/// Whether the angle at `v` in triangle `a v b` is certainly at least 2pi/3,
/// certainly below it, or undecidable.
fn obtuse_at(a: IPoint, v: IPoint, b: IPoint) -> Option<bool> {
    let c = IPoint::cos_angle(a, v, b).ok()?;
    if c.hi() <= cos_120_bound() {
        Some(true)
    } else if c.lo() > cos_120_bound() {
        Some(false)
    } else {
        None
    }
}

/// Largest Melzak bound `|X c|` over the two equilateral points `X` on `a b`.
/// Either orientation gives a valid lower bound, so the larger one is kept.
fn melzak_distance(a: IPoint, b: IPoint, c: IPoint) -> Interval {
    let left = IPoint::equilateral_left(a, b).dist(c);
    let right = IPoint::equilateral_right(a, b).dist(c);
    left.max(right)
}

/// Enclosure of the length of the Steiner minimal tree on three points.
pub fn torricelli_length(a: IPoint, b: IPoint, c: IPoint) -> Interval {
    let pts = [a, b, c];
    let mut hi = f64::INFINITY;
    let mut all_acute = true;
    for k in 0..3 {
        let (v, p, q) = (pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]);
        let path = v.dist(p) + v.dist(q);
        hi = hi.min(path.hi());
        match obtuse_at(p, v, q) {
            Some(true) => return path,
            Some(false) => {}
            None => all_acute = false,
        }
    }
    let melzak = melzak_distance(a, b, c);
    if all_acute {
        // The Torricelli point exists and the larger orientation is exact.
        hi = hi.min(melzak.hi());
    }
    Interval::from_raw(melzak.lo().min(hi), hi)
}

/// Ptolemy bound for the full topology joining cherry `{a, b}` to cherry
/// `{c, d}`, merging `{a, b}` first.
fn cherry_merge_lower(a: IPoint, b: IPoint, c: IPoint, d: IPoint) -> f64 {
    [IPoint::equilateral_left(a, b), IPoint::equilateral_right(a, b)]
        .into_iter()
        .map(|x| torricelli_length(x, c, d).lo())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The line through `x` and `y` certainly misses the closed segment `p q`.
fn line_misses_segment(x: IPoint, y: IPoint, p: IPoint, q: IPoint) -> bool {
    let dir = y - x;
    let (sp, sq) = (dir.cross(p - x), dir.cross(q - x));
    (sp.certainly_positive() && sq.certainly_positive())
        || (sp.certainly_negative() && sq.certainly_negative())
}

/// Lower bound on a tree with the full topology `{a, b} | {c, d}` whose two
/// Steiner points are proper (120 degree angles). Such a tree has length
/// `|X Y|` for equilateral points `X` on `a b` and `Y` on `c d`, and the line
/// `X Y` crosses both segments. Orientation pairs violating this are dropped;
/// if all are dropped the topology cannot carry a minimal tree.
fn cherries_lower(a: IPoint, b: IPoint, c: IPoint, d: IPoint) -> f64 {
    let xs = [IPoint::equilateral_left(a, b), IPoint::equilateral_right(a, b)];
    let ys = [IPoint::equilateral_left(c, d), IPoint::equilateral_right(c, d)];
    let mut best = f64::INFINITY;
    for x in xs {
        for y in ys {
            if line_misses_segment(x, y, a, b) || line_misses_segment(x, y, c, d) {
                continue;
            }
            best = best.min(x.dist(y).lo());
        }
    }
    if best.is_infinite() {
        return best;
    }
    best.max(cherry_merge_lower(a, b, c, d))
        .max(cherry_merge_lower(c, d, a, b))
}

fn topology_lower(t: &Topology, pts: &[IPoint]) -> f64 {
    match &t.shape {
        Shape::Tree => t
            .edges
            .iter()
            .map(|&(a, b)| match (a, b) {
                (Node::Terminal(i), Node::Terminal(j)) => pts[i].dist(pts[j]),
                _ => unreachable!("spanning trees have no Steiner slots"),
            })
            .fold(Interval::ZERO, |s, d| s + d)
            .lo(),
        Shape::Star([a, b, c], pendant) => {
            let mut s = torricelli_length(pts[*a], pts[*b], pts[*c]);
            if let Some((d, e)) = pendant {
                s = s + pts[*d].dist(pts[*e]);
            }
            s.lo()
        }
        Shape::Cherries([a, b], [c, d]) => {
            let (a, b, c, d) = (pts[*a], pts[*b], pts[*c], pts[*d]);
            cherries_lower(a, b, c, d)
        }
    }
}

/// Numeric Fermat point of a triangle.
pub fn fermat_point(a: Pt, b: Pt, c: Pt) -> Pt {
    let pts = [a, b, c];
    for k in 0..3 {
        let (v, p, q) = (pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]);
        if v.dist(p) == 0.0 || v.dist(q) == 0.0 {
            return v;
        }
        if Pt::angle(p, v, q) >= 2.0 * std::f64::consts::FRAC_PI_3 {
            return v;
        }
    }
    // Intersection of the Simpson lines through a and through c.
    let e_bc = far_equilateral(b, c, a);
    let e_ab = far_equilateral(a, b, c);
    let (d1, d2) = (a.sub(e_bc), c.sub(e_ab));
    let det = d1.x * (-d2.y) - d1.y * (-d2.x);
    if det.abs() < 1e-300 {
        return weiszfeld(&[a, b, c], a.add(b).add(c).scale(1.0 / 3.0), 200);
    }
    let r = e_ab.sub(e_bc);
    let s = (r.x * (-d2.y) - r.y * (-d2.x)) / det;
    let f = e_bc.add(d1.scale(s));
    // One polishing pass for accuracy near degenerate triangles.
    weiszfeld(&[a, b, c], f, 4)
}

/// Equilateral point on `a b` on the side away from `o`.
fn far_equilateral(a: Pt, b: Pt, o: Pt) -> Pt {
    let ab = b.sub(a);
    let ao = o.sub(a);
    let side = ab.x * ao.y - ab.y * ao.x;
    let h = 3f64.sqrt() / 2.0;
    let sgn = if side > 0.0 { -1.0 } else { 1.0 };
    Pt::new(
        a.x + 0.5 * ab.x - sgn * h * ab.y,
        a.y + 0.5 * ab.y + sgn * h * ab.x,
    )
}

fn weiszfeld(anchors: &[Pt], start: Pt, iters: usize) -> Pt {
    let mut s = start;
    for _ in 0..iters {
        let (mut num, mut den) = (Pt::default(), 0.0);
        for &p in anchors {
            let d = s.dist(p);
            if d < 1e-300 {
                return s;
            }
            num = num.add(p.scale(1.0 / d));
            den += 1.0 / d;
        }
        let next = num.scale(1.0 / den);
        if next.dist(s) == 0.0 {
            break;
        }
        s = next;
    }
    s
}

fn realized_steiner_points(t: &Topology, m: &[Pt]) -> Vec<Pt> {
    match &t.shape {
        Shape::Tree => vec![],
        Shape::Star([a, b, c], _) => vec![fermat_point(m[*a], m[*b], m[*c])],
        Shape::Cherries(p, q) => {
            let mut best: Option<(f64, Vec<Pt>)> = None;
            for (first, second, flip) in [(p, q, false), (q, p, true)] {
                let (a, b) = (m[first[0]], m[first[1]]);
                let (c, d) = (m[second[0]], m[second[1]]);
                let ab = b.sub(a);
                let h = 3f64.sqrt() / 2.0;
                for sgn in [1.0, -1.0] {
                    let x = Pt::new(
                        a.x + 0.5 * ab.x - sgn * h * ab.y,
                        a.y + 0.5 * ab.y + sgn * h * ab.x,
                    );
                    let s2 = fermat_point(x, c, d);
                    let s1 = fermat_point(a, b, s2);
                    let len = a.dist(s1) + b.dist(s1) + s1.dist(s2) + c.dist(s2) + d.dist(s2);
                    let pts = if flip { vec![s2, s1] } else { vec![s1, s2] };
                    if best.as_ref().is_none_or(|(l, _)| len < *l) {
                        best = Some((len, pts));
                    }
                }
            }
            best.expect("four candidates").1
        }
    }
}

/// Length of the tree with Steiner points fixed at `steiner`, for interval terminals.
fn tree_length(t: &Topology, pts: &[IPoint], steiner: &[Pt]) -> Interval {
    let at = |n: Node| match n {
        Node::Terminal(i) => pts[i],
        Node::Steiner(i) => steiner[i].to_interval(),
    };
    t.edges
        .iter()
        .fold(Interval::ZERO, |s, &(a, b)| s + at(a).dist(at(b)))
}

#[derive(Debug, Clone)]
pub struct SteinerBound {
    /// Certified lower bound on the Steiner minimal tree length.
    pub lower: f64,
    /// Length of the best realized tree, evaluated at the terminal midpoints.
    pub upper: f64,
    /// Enclosure of the best realized tree's length over the terminal enclosures.
    pub upper_enclosure: Interval,
    /// Topology attaining the lower bound.
    pub witness: Topology,
    /// The realized tree of the witness topology attains its lower bound.
    pub witness_valid: bool,
}

/// Certified Steiner bounds for 2 to 4 terminals.
pub fn melzak_lower_bound(terminals: &[IPoint]) -> Result<SteinerBound> {
    if !(2..=4).contains(&terminals.len()) {
        return Err(Error::UnsupportedCount(terminals.len()));
    }
    let mut pts: Vec<IPoint> = Vec::with_capacity(terminals.len());
    for &t in terminals {
        if !(t.is_point() && pts.contains(&t)) {
            pts.push(t);
        }
    }
    if pts.len() == 1 {
        return Ok(SteinerBound {
            lower: 0.0,
            upper: 0.0,
            upper_enclosure: Interval::ZERO,
            witness: Topology::tree(1, vec![]),
            witness_valid: true,
        });
    }
    let mids: Vec<Pt> = pts.iter().map(|p| Pt::new(p.x.mid(), p.y.mid())).collect();
    let mut lower = f64::INFINITY;
    let mut witness: Option<(Topology, f64)> = None;
    let mut upper = f64::INFINITY;
    let mut upper_enclosure = Interval::ZERO;
    let mid_pts: Vec<IPoint> = mids.iter().map(|m| m.to_interval()).collect();
    for t in catalogue(pts.len()) {
        let lo = topology_lower(&t, &pts);
        let steiner = realized_steiner_points(&t, &mids);
        let enclosure = tree_length(&t, &pts, &steiner);
        let at_mid = tree_length(&t, &mid_pts, &steiner).mid();
        if enclosure.hi() < upper_enclosure.hi() || upper.is_infinite() {
            upper_enclosure = enclosure;
            upper = at_mid;
        }
        if lo < lower {
            lower = lo;
            witness = Some((t, at_mid));
        }
    }
    let (witness, witness_len) = witness.expect("non-empty catalogue");
    let scale = 1.0 + lower.abs();
    Ok(SteinerBound {
        lower,
        upper,
        upper_enclosure,
        witness_valid: witness_len - lower <= 1e-9 * scale,
        witness,
    })
}

/// Numeric Steiner minimal tree length by per-topology fixed-point iteration.
/// Not certified; an independent reference for tests.
pub fn oracle_smt_length(terminals: &[Pt], iters: usize) -> Result<f64> {
    if !(2..=4).contains(&terminals.len()) {
        return Err(Error::UnsupportedCount(terminals.len()));
    }
    let n = terminals.len();
    let scale = terminals
        .iter()
        .flat_map(|p| terminals.iter().map(move |q| p.dist(*q)))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let centroid = terminals
        .iter()
        .fold(Pt::default(), |s, p| s.add(*p))
        .scale(1.0 / n as f64);
    let mut best_converged = f64::INFINITY;
    let mut best_unconverged = f64::INFINITY;
    let mut slow: Option<(Topology, Vec<Pt>)> = None;
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    let mut jitter = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for t in catalogue(n) {
        let slots = t.steiner_slots();
        if slots == 0 {
            let len = oracle_length(&t, terminals, &[]);
            best_converged = best_converged.min(len);
            continue;
        }
        for start in 0..6 {
            let mut s: Vec<Pt> = (0..slots)
                .map(|_| {
                    if start == 0 {
                        centroid
                    } else {
                        centroid.add(Pt::new(jitter() * scale, jitter() * scale))
                    }
                })
                .collect();
            let converged = smith_iterate(&t, terminals, &mut s, iters, scale);
            let len = oracle_length(&t, terminals, &s);
            if converged {
                best_converged = best_converged.min(len);
            } else if len < best_unconverged {
                best_unconverged = len;
                slow = Some((t.clone(), s));
            }
        }
    }
    // A Steiner point closing in on a terminal converges sublinearly; give
    // only the best such start a longer run.
    if best_unconverged < best_converged - 1e-9 {
        let (t, mut s) = slow.expect("recorded with best_unconverged");
        if !smith_iterate(&t, terminals, &mut s, 20 * iters, scale) {
            return Err(Error::NonConvergence { iters: 21 * iters });
        }
        best_converged = best_converged.min(oracle_length(&t, terminals, &s));
        best_unconverged = f64::INFINITY;
    }
    Ok(best_converged.min(best_unconverged))
}

fn oracle_length(t: &Topology, terminals: &[Pt], s: &[Pt]) -> f64 {
    let at = |n: Node| match n {
        Node::Terminal(i) => terminals[i],
        Node::Steiner(i) => s[i],
    };
    t.edges.iter().map(|&(a, b)| at(a).dist(at(b))).sum()
}

/// Joint fixed-point update of all Steiner points; true on convergence.
fn smith_iterate(t: &Topology, terminals: &[Pt], s: &mut [Pt], iters: usize, scale: f64) -> bool {
    let eps = 1e-12 * scale;
    let at = |n: Node, s: &[Pt]| match n {
        Node::Terminal(i) => terminals[i],
        Node::Steiner(i) => s[i],
    };
    let mut prev = oracle_length(t, terminals, s);
    let mut quiet = 0;
    for _ in 0..iters {
        let mut moved: f64 = 0.0;
        for k in 0..s.len() {
            let me = Node::Steiner(k);
            let (mut num, mut den) = (Pt::default(), 0.0);
            for &(a, b) in &t.edges {
                let other = if a == me {
                    b
                } else if b == me {
                    a
                } else {
                    continue;
                };
                let p = at(other, s);
                let w = 1.0 / s[k].dist(p).max(eps);
                num = num.add(p.scale(w));
                den += w;
            }
            let next = num.scale(1.0 / den);
            moved = moved.max(next.dist(s[k]));
            s[k] = next;
        }
        let len = oracle_length(t, terminals, s);
        if moved <= 1e-15 * scale || (prev - len).abs() <= 1e-16 * scale {
            quiet += 1;
            if quiet >= 3 {
                return true;
            }
        } else {
            quiet = 0;
        }
        prev = len;
    }
    false
}
