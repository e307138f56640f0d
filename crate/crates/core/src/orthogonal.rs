//! Orthogonal subdigraphs of circulants on `Z_t`.
//!
//! An `S`-orthogonal subdigraph contains exactly one arc of each difference
//! in the connection set `S`. The constructors below realise prescribed
//! component shapes (many 1-paths plus one long path, or 1-paths plus
//! digons) through a case split on the parities of `s` and `t` and on the
//! size of `a`. Every result is certified before it is returned, so a bad
//! index anywhere in the casework surfaces as an error rather than a wrong
//! answer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{md, ConnectionSet, Digraph};
use crate::error::{Error, Result};
use crate::verify::{verify_orthogonal, Shape};

/// A component of a subdigraph of a circulant, listed along its arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    /// A directed path; a single vertex is a path with no arcs.
    Path(Vec<usize>),
    /// A directed cycle; the closing arc is implicit.
    Cycle(Vec<usize>),
}

impl Component {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Component::Path(v) | Component::Cycle(v) => v,
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Component::Path(v) => Shape::Path(v.len() - 1),
            Component::Cycle(v) => Shape::Cycle(v.len()),
        }
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        match self {
            Component::Path(v) => v.windows(2).map(|w| (w[0], w[1])).collect(),
            Component::Cycle(v) => (0..v.len()).map(|i| (v[i], v[(i + 1) % v.len()])).collect(),
        }
    }

    /// Shifts every vertex by `j` modulo `t`.
    pub fn rotated(&self, j: usize, t: usize) -> Component {
        let f = |v: &Vec<usize>| v.iter().map(|&x| (x + j) % t).collect();
        match self {
            Component::Path(v) => Component::Path(f(v)),
            Component::Cycle(v) => Component::Cycle(f(v)),
        }
    }
}

/// Which branch of the casework produced a subdigraph, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CaseworkState {
    pub case: String,
    pub params: Vec<(String, i64)>,
}

impl fmt::Display for CaseworkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {}", self.case)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// A certified orthogonal subdigraph of `Circ(t; set)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalSubdigraph {
    pub t: usize,
    pub set: ConnectionSet,
    pub components: Vec<Component>,
    pub casework: CaseworkState,
}

impl OrthogonalSubdigraph {
    pub fn digraph(&self) -> Digraph {
        let mut g = Digraph::new(self.t);
        for c in &self.components {
            g.vertices.extend(c.vertices().iter().copied());
            for (a, b) in c.arcs() {
                g.add_arc(a, b);
            }
        }
        g
    }

    pub fn shape(&self) -> Vec<Shape> {
        let mut s: Vec<_> = self.components.iter().map(|c| c.shape()).collect();
        s.sort();
        s
    }

    /// A vertex outside every component, lowest first.
    pub fn free_vertices(&self) -> Vec<usize> {
        let used = self.digraph().vertices;
        (0..self.t).filter(|v| !used.contains(v)).collect()
    }
}

fn ceil2(x: i64) -> i64 {
    x.div_euclid(2) + x.rem_euclid(2)
}

fn floor2(x: i64) -> i64 {
    x.div_euclid(2)
}

fn ceil4(x: i64) -> i64 {
    (x + 3).div_euclid(4)
}

/// The path starting at `y_k` with differences
/// `d_1, -d_2, d_3, ..., ±d_l, ⌊t/2⌋, ∓d_l, ..., d_2, -d_1`, for a set of the
/// form `R = {±d_1, ..., ±d_l} ∪ {⌊t/2⌋}` with `d_1 < ... < d_l < ⌊t/2⌋`.
///
/// The path ends at `y_{k + ⌊t/2⌋}`.
pub fn walk_p(r: &ConnectionSet, k: i64, t: usize) -> Result<Vec<usize>> {
    if r.modulus() != t {
        return Err(Error::BadForm(format!(
            "set taken modulo {}, walk modulo {t}",
            r.modulus()
        )));
    }
    let m = t / 2;
    if !r.contains(m) {
        return Err(Error::BadForm(format!("{r} does not contain {m}")));
    }
    if t % 2 == 1 && r.contains(t - m) {
        return Err(Error::BadForm(format!("{r} contains both ±{m}")));
    }
    let mut ds = Vec::new();
    for d in 1..m {
        match (r.contains(d), r.contains(t - d)) {
            (true, true) => ds.push(d as i64),
            (false, false) => {}
            _ => return Err(Error::BadForm(format!("{r} contains only one of ±{d}"))),
        }
    }
    let mut v = k;
    let mut seq = vec![md(v, t)];
    for (i, &d) in ds.iter().enumerate() {
        v += if i % 2 == 0 { d } else { -d };
        seq.push(md(v, t));
    }
    v += m as i64;
    seq.push(md(v, t));
    for (i, &d) in ds.iter().enumerate().rev() {
        v += if i % 2 == 0 { -d } else { d };
        seq.push(md(v, t));
    }
    let mut sorted = seq.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != seq.len() {
        return Err(Error::CollisionDetected(format!(
            "walk from y_{} over {r} revisits a vertex: {seq:?}",
            md(k, t)
        )));
    }
    Ok(seq)
}

struct Build {
    t: usize,
    comps: Vec<Component>,
    case: String,
    params: Vec<(String, i64)>,
}

impl Build {
    fn new(t: usize) -> Self {
        Build {
            t,
            comps: Vec::new(),
            case: String::new(),
            params: Vec::new(),
        }
    }

    fn y(&self, i: i64) -> usize {
        md(i, self.t)
    }

    fn case(&mut self, case: &str, params: &[(&str, i64)]) {
        self.case = case.to_string();
        self.params
            .extend(params.iter().map(|&(k, v)| (k.to_string(), v)));
    }

    fn arc(&mut self, a: i64, b: i64) {
        let p = Component::Path(vec![self.y(a), self.y(b)]);
        self.comps.push(p);
    }

    fn digon(&mut self, a: i64, b: i64) {
        let c = Component::Cycle(vec![self.y(a), self.y(b)]);
        self.comps.push(c);
    }

    fn path(&mut self, p: Vec<usize>) {
        self.comps.push(Component::Path(p));
    }

    fn used(&self) -> ConnectionSet {
        let t = self.t;
        ConnectionSet::from_residues(
            t,
            self.comps
                .iter()
                .flat_map(|c| c.arcs())
                .map(|(a, b)| (b + t - a) % t)
                .filter(|&d| d != 0),
        )
        .expect("differences are nonzero residues")
    }

    /// `S` minus every difference used so far and minus `extra`.
    fn rest(&self, s: &ConnectionSet, extra: &[i64]) -> ConnectionSet {
        let drop = ConnectionSet::new(self.t, extra.iter().copied()).expect("valid residues");
        s.minus(&self.used()).minus(&drop)
    }

    fn isolated(&mut self) {
        let used: std::collections::BTreeSet<usize> = self
            .comps
            .iter()
            .flat_map(|c| c.vertices().to_vec())
            .collect();
        let v = (0..self.t)
            .find(|v| !used.contains(v))
            .expect("a free vertex");
        self.comps.push(Component::Path(vec![v]));
    }

    fn finish(self, s: ConnectionSet, shape: &[Shape]) -> Result<OrthogonalSubdigraph> {
        let out = OrthogonalSubdigraph {
            t: self.t,
            set: s,
            components: self.comps,
            casework: CaseworkState {
                case: self.case,
                params: self.params,
            },
        };
        let report = verify_orthogonal(&out.digraph(), &out.set, shape);
        if !report.ok {
            return Err(Error::ConditionFailed {
                condition: format!("orthogonality ({})", out.casework),
                detail: report.to_string(),
            });
        }
        Ok(out)
    }
}

fn smallest(r: &ConnectionSet) -> i64 {
    *r.residues().iter().next().expect("non-empty") as i64
}

fn signed_range(from: i64, to: i64, step: usize) -> Vec<i64> {
    if from > to {
        return Vec::new();
    }
    (from..=to).step_by(step).collect()
}

/// Connection set used by [`orthogonal_paths`].
pub fn path_connection_set(s: usize, t: usize) -> Result<ConnectionSet> {
    let m = t / 2;
    let lo = if s % 2 == 1 { (s + 1) / 2 } else { s / 2 + 1 };
    let mut vals: Vec<i64> = (lo..=m).flat_map(|d| [d as i64, -(d as i64)]).collect();
    if s % 2 == 0 {
        vals.push(1);
    }
    ConnectionSet::new(t, vals)
}

/// Connection set used by [`orthogonal_digons`].
pub fn digon_connection_set(s: usize, t: usize) -> Result<ConnectionSet> {
    let h = t / 2;
    let lo = if s % 2 == 1 { (s + 1) / 2 } else { s / 2 };
    let mut vals: Vec<i64> = (lo..h).flat_map(|d| [d as i64, -(d as i64)]).collect();
    if s % 2 == 1 {
        vals.push(h as i64);
    }
    ConnectionSet::new(t, vals)
}

/// An `S`-orthogonal subdigraph of `Circ(t; S)` made of `a` directed
/// 1-paths and one directed path with `t - s - a` arcs, where
/// `S = {±(s+1)/2, ..., ±⌊t/2⌋}` for odd `s` and
/// `S = {1} ∪ {±(s/2+1), ..., ±⌊t/2⌋}` for even `s`.
///
/// Requires `2 <= s < t`, `s != 3` for even `t`, `a ≡ s (mod 2)` and
/// `0 <= a <= min(⌊s/3⌋, 2⌊t/2⌋ - s)`. When `t - s - a = 0` the long path is
/// a single isolated vertex.
pub fn orthogonal_paths(s: usize, t: usize, a: usize) -> Result<OrthogonalSubdigraph> {
    if s < 2 || s >= t {
        return Err(Error::HypothesisViolated(format!(
            "need 2 <= s < t, got s = {s}, t = {t}"
        )));
    }
    if t % 2 == 0 && s == 3 {
        return Err(Error::HypothesisViolated(format!(
            "s = 3 with even t = {t}"
        )));
    }
    let cap = (s / 3).min(2 * (t / 2) - s);
    if a > cap || a % 2 != s % 2 {
        return Err(Error::HypothesisViolated(format!(
            "a = {a} must satisfy a ≡ s (mod 2) and a <= {cap} for s = {s}, t = {t}"
        )));
    }
    let set = path_connection_set(s, t)?;
    let mut shape = vec![Shape::Path(1); a];
    shape.push(Shape::Path(t - s - a));
    let b = match (t % 2, s % 2) {
        (0, 0) => paths_even_even(s, t, a, &set)?,
        (0, _) => paths_even_odd(s, t, a, &set)?,
        (_, 1) => paths_odd_odd(s, t, a, &set)?,
        _ => paths_odd_even(s, t, a, &set)?,
    };
    b.finish(set, &shape)
}

fn paths_even_even(s: usize, t: usize, a: usize, set: &ConnectionSet) -> Result<Build> {
    let (s, t, a) = (s as i64, t as i64, a as i64);
    let h = t / 2;
    let mut b = Build::new(t as usize);
    if a <= (t - s) / 2 - 1 {
        b.case("1.1", &[]);
        for i in (-a / 2 + 1)..=(a / 2) {
            b.arc(i, h - i + 1);
        }
        let r = b.rest(set, &[1]);
        let k = -ceil4(s + 2);
        let mut p = walk_p(&r, k, t as usize)?;
        p.push(md(h + k + 1, t as usize));
        b.path(p);
        return Ok(b);
    }
    let ap = (t - s) / 4;
    let bb = a - 2 * ap;
    let d_b = if t % 4 == s % 4 {
        (s + 4) / 2
    } else {
        (s + 2) / 2
    };
    b.case(
        if a < t - s { "1.2" } else { "1.3" },
        &[("a'", ap), ("b", bb), ("d_B", d_b)],
    );
    let a_arc = |b: &mut Build, i: i64| b.arc(i, h - i + 1);
    let b_pos = |b: &mut Build, d: i64| b.arc(-ceil2(d), floor2(d));
    let b_neg = |b: &mut Build, d: i64| b.arc(h + floor2(d), h - ceil2(d));
    if a == t - s {
        for i in (-ap + 1)..=ap {
            a_arc(&mut b, i);
        }
        let rp = b.rest(set, &[1]);
        for &d in rp.residues() {
            let d = d as i64;
            if d < h {
                b_pos(&mut b, d);
                b_neg(&mut b, d);
            } else if d == h {
                b_pos(&mut b, d);
            }
        }
        b.arc(-ap - 1, -ap);
        b.isolated();
        return Ok(b);
    }
    let rp: Vec<i64> = signed_range(d_b, d_b + bb - 2, 2);
    let mut dropped: Vec<i64> = rp.iter().flat_map(|&d| [d, -d]).collect();
    dropped.push(1);
    // Differences of A' are known before A' is placed.
    let mut probe = Build::new(t as usize);
    for i in (-ap + 1)..=ap {
        a_arc(&mut probe, i);
    }
    let r = probe.rest(set, &dropped);
    if r.len() > 1 {
        for i in (-ap + 1)..=ap {
            a_arc(&mut b, i);
        }
        for &d in &rp {
            b_pos(&mut b, d);
            b_neg(&mut b, d);
        }
        let d1 = smallest(&r);
        let k = -ceil2(d1);
        let mut p = vec![md(k - 1, t as usize)];
        p.extend(walk_p(&r, k, t as usize)?);
        b.path(p);
    } else {
        b.case("1.2 (|R| = 1)", &[]);
        for i in (-ap + 2)..=ap {
            a_arc(&mut b, i);
        }
        for &d in &rp {
            b_pos(&mut b, d);
            b_neg(&mut b, d);
        }
        b.arc(-ceil4(t), t / 4);
        b.path(vec![
            md(-ap, t as usize),
            md(-ap + 1, t as usize),
            md(h + ap, t as usize),
        ]);
    }
    Ok(b)
}

fn paths_even_odd(s: usize, t: usize, a: usize, set: &ConnectionSet) -> Result<Build> {
    let (s, t, a) = (s as i64, t as i64, a as i64);
    let tu = t as usize;
    let h = t / 2;
    let mut b = Build::new(tu);
    if a <= (t - s - 1) / 2 {
        if a == 1 {
            b.case(
                if s == 5 {
                    "2.2 (s,a)=(5,1)"
                } else {
                    "2.1 (a=1)"
                },
                &[],
            );
            b.arc(0, h + 1);
            let r = set.minus(&ConnectionSet::new(tu, [h - 1, -(h - 1)])?);
            let mut p = vec![md(h, tu)];
            p.extend(walk_p(&r, -1, tu)?);
            b.path(p);
            return Ok(b);
        }
        b.case(
            if (s, a) == (9, 3) {
                "2.2 (s,a)=(9,3)"
            } else {
                "2.1"
            },
            &[],
        );
        for i in 1..=(a - 1) / 2 {
            b.arc(-i, h + i - 1);
        }
        for i in 2..=(a - 1) / 2 {
            b.arc(i, h - i + 1);
        }
        if a >= 3 {
            if (s, a) == (9, 3) {
                b.arc(h + 2, 1);
            } else {
                b.arc((s - a) / 2 - 1, h + (s - a) / 2 - 2);
            }
        }
        b.arc(h - (a - 1) / 2, (a + 1) / 2);
        let r = b.rest(set, &[h - a]);
        let mut p = vec![md(h + (a - 1) / 2, tu)];
        p.extend(walk_p(&r, -(a + 1) / 2, tu)?);
        b.path(p);
        return Ok(b);
    }
    let ap = (t - s + 1) / 4;
    let bb = a - 2 * ap;
    let d_b = if t % 4 == (s + 1) % 4 {
        (s + 1) / 2
    } else {
        (s + 3) / 2
    };
    for i in -ap..ap {
        b.arc(i, h - i - 1);
    }
    if a == t - s {
        b.case("2.4", &[("a'", ap), ("b", bb), ("d_B", d_b)]);
        let rp = b.rest(set, &[]);
        for &d in rp.residues() {
            let d = d as i64;
            if d < h {
                b.arc(floor2(d), -ceil2(d));
                b.arc(h - ceil2(d), h + floor2(d));
            } else if d == h {
                b.arc(h - ceil2(d), h + floor2(d));
            }
        }
        b.isolated();
        return Ok(b);
    }
    b.case("2.3", &[("a'", ap), ("b", bb), ("d_B", d_b)]);
    let top = d_b + bb - 1;
    let rp = signed_range(d_b, top, 2);
    let dropped: Vec<i64> = rp.iter().flat_map(|&d| [d, -d]).collect();
    let r = b.rest(set, &dropped);
    for &d in &rp {
        b.arc(floor2(d), -ceil2(d));
        if d != top {
            b.arc(h - ceil2(d + 2), h + floor2(d - 2));
        }
    }
    if r.len() > 1 {
        let d1 = smallest(&r);
        let mut p = walk_p(&r, -ceil2(d1), tu)?;
        p.push(md(h + floor2(top - 2), tu));
        b.path(p);
    } else {
        b.case("2.3 (|R| = 1)", &[]);
        b.path(vec![
            md(h + t / 4, tu),
            md(h - ceil4(t), tu),
            md(h + t / 4 - 2, tu),
        ]);
    }
    Ok(b)
}

fn paths_odd_odd(s: usize, t: usize, a: usize, set: &ConnectionSet) -> Result<Build> {
    let (s, t, a) = (s as i64, t as i64, a as i64);
    let tu = t as usize;
    let h = (t - 1) / 2;
    let mut b = Build::new(tu);
    let a_arc = |b: &mut Build, i: i64| {
        if i >= 1 {
            b.arc(i, h - i)
        } else {
            b.arc(i, h - i + 1)
        }
    };
    if a <= (t - s - 2) / 2 {
        match (s, a) {
            (9, 3) => {
                b.case("3.2 (s,a)=(9,3)", &[]);
                b.arc(-2, (t + 1) / 2);
                b.arc(-1, h);
                b.arc(0, (t - 5) / 2);
            }
            (3, 1) | (5, 1) => {
                b.case(&format!("3.2 (s,a)=({s},1)"), &[]);
                b.arc(h, 0);
            }
            _ => {
                b.case("3.1", &[]);
                for i in -(a - 1) / 2..=(a - 1) / 2 {
                    a_arc(&mut b, i);
                }
            }
        }
        let r = b.rest(set, &[]);
        b.path(walk_p(&r, -ceil4(s + 1), tu)?);
        return Ok(b);
    }
    if s == 3 {
        b.case("3.3 (s=3)", &[]);
        b.arc(0, -2);
        b.arc(-1, 1);
        return Ok(b);
    }
    if a < t - s - 1 {
        let ap = (t - s - 2) / 4;
        let bb = a - 2 * ap - 1;
        let d_b = if t % 4 == (s + 2) % 4 {
            (s + 3) / 2
        } else {
            (s + 1) / 2
        };
        b.case("3.3", &[("a'", ap), ("b", bb), ("d_B", d_b)]);
        for i in -ap..=ap {
            a_arc(&mut b, i);
        }
        for d in signed_range(d_b, d_b + bb - 2, 2) {
            b.arc(floor2(d), -ceil2(d));
            b.arc(h - ceil2(d), h + floor2(d));
        }
        let r = b.rest(set, &[]);
        let d1 = smallest(&r);
        b.path(walk_p(&r, -ceil2(d1), tu)?);
        return Ok(b);
    }
    let ap = ceil4(t - s - 2);
    let bb = 2 * ap + 1;
    b.case("3.4", &[("a'", ap), ("b", bb)]);
    let hi = if (t - s) % 4 == 2 { ap } else { ap - 1 };
    for i in -ap..=hi {
        b.arc(i, h - i);
        b.arc(bb + h - i, bb + i);
    }
    Ok(b)
}

fn paths_odd_even(s: usize, t: usize, a: usize, set: &ConnectionSet) -> Result<Build> {
    let (s, t, a) = (s as i64, t as i64, a as i64);
    let tu = t as usize;
    let h = (t - 1) / 2;
    let mut b = Build::new(tu);
    if t - s == 1 {
        b.case("4 (t-s=1)", &[]);
        b.arc(0, 1);
        return Ok(b);
    }
    let a_arc = |b: &mut Build, i: i64| {
        if i >= 1 {
            b.arc(i, h - i)
        } else {
            b.arc(i, h - i + 1)
        }
    };
    let c0 = ceil4(s + 2);
    if a == 0 {
        b.case("4.2", &[]);
        let r = b.rest(set, &[1, -h]);
        let mut p = walk_p(&r, -c0, tu)?;
        p.push(md(h - c0 + 1, tu));
        p.push(md(1 - c0, tu));
        b.path(p);
        return Ok(b);
    }
    if a <= (t - s - 1) / 2 {
        b.case("4.1", &[]);
        if (s, a) == (6, 2) {
            b.arc((t + 1) / 2, 1);
        } else {
            for i in -(a - 2) / 2..=(a - 2) / 2 {
                a_arc(&mut b, i);
            }
        }
        b.arc(1 - c0, 2 - c0);
        let r = b.rest(set, &[]);
        b.path(walk_p(&r, -c0, tu)?);
        return Ok(b);
    }
    if a < t - s - 1 {
        let ap = (t - s - 3) / 4;
        let bb = a - 2 * ap - 2;
        let d_b = if t % 4 == (s + 3) % 4 {
            (s + 4) / 2
        } else {
            (s + 2) / 2
        };
        b.case("4.3", &[("a'", ap), ("b", bb), ("d_B", d_b)]);
        for i in -ap..=ap {
            a_arc(&mut b, i);
        }
        for d in signed_range(d_b, d_b + bb - 2, 2) {
            b.arc(floor2(d), -ceil2(d));
            b.arc(h - ceil2(d), h + floor2(d));
        }
        b.arc(1 - ceil2(d_b), 2 - ceil2(d_b));
        let r = b.rest(set, &[]);
        let d1 = smallest(&r);
        b.path(walk_p(&r, -ceil2(d1), tu)?);
        return Ok(b);
    }
    let ap = ceil4(t - s - 3);
    let bb = 2 * ap + 1;
    b.case("4.4", &[("a'", ap), ("b", bb)]);
    b.arc(-ap - 2, -ap - 1);
    let hi = if (t - s) % 4 == 3 { ap } else { ap - 1 };
    for i in -ap..=hi {
        b.arc(i, h - i);
        b.arc(bb + h - i, bb + i);
    }
    Ok(b)
}

/// An `S`-orthogonal subdigraph of `Circ(t; S)` made of `a` directed
/// 1-paths and `(t - s - a)/2` digons, where
/// `S = {±(s+1)/2, ..., ±(t/2 - 1)} ∪ {t/2}` for odd `s` and
/// `S = {±s/2, ..., ±(t/2 - 1)}` for even `s`.
///
/// Requires even `t`, `2 <= s < t`, `a ≡ s (mod 2)` and
/// `a <= min(⌊s/3⌋, t - s)`.
pub fn orthogonal_digons(s: usize, t: usize, a: usize) -> Result<OrthogonalSubdigraph> {
    if t % 2 == 1 {
        return Err(Error::HypothesisViolated(format!(
            "digons need even t, got {t}"
        )));
    }
    if s < 2 || s >= t {
        return Err(Error::HypothesisViolated(format!(
            "need 2 <= s < t, got s = {s}, t = {t}"
        )));
    }
    let cap = (s / 3).min(t - s);
    if a > cap || a % 2 != s % 2 {
        return Err(Error::HypothesisViolated(format!(
            "a = {a} must satisfy a ≡ s (mod 2) and a <= {cap} for s = {s}, t = {t}"
        )));
    }
    let set = digon_connection_set(s, t)?;
    let mut shape = vec![Shape::Path(1); a];
    shape.extend(std::iter::repeat(Shape::Cycle(2)).take((t - s - a) / 2));
    let (s, t, a) = (s as i64, t as i64, a as i64);
    let h = t / 2;
    let mut b = Build::new(t as usize);
    let b_pair = |i: i64| (-ceil2(i), floor2(i));
    let e_pair = |i: i64| (h - ceil2(i), h + floor2(i));
    let odd = s % 2 == 1;
    let (d_a, d_b) = if odd {
        if t % 4 == (s + 1) % 4 {
            ((s + 1) / 2, (s + 3) / 2)
        } else {
            ((s + 3) / 2, (s + 1) / 2)
        }
    } else if t % 4 == (s + 2) % 4 {
        (s / 2, (s + 2) / 2)
    } else {
        ((s + 2) / 2, s / 2)
    };
    let (i_set, j_set) = if odd {
        (signed_range(d_b, h - 1, 2), signed_range(d_a, h - 2, 2))
    } else {
        (signed_range(d_b, h - 2, 2), signed_range(d_a, h - 1, 2))
    };
    let c_pair = |i: i64| {
        if odd {
            (h - ceil2(i - 1), h + floor2(i + 1))
        } else {
            (h - ceil2(i + 1), h + floor2(i - 1))
        }
    };
    let a_arc = |b: &mut Build, i: i64| {
        if odd {
            b.arc(i, h - i)
        } else {
            b.arc(i, h - i - 1)
        }
    };
    let (small, c) = if odd {
        (
            a <= (t - s - 1) / 2,
            if a <= (t - s - 1) / 2 {
                (a - 1) / 2
            } else {
                (t - s - 1) / 4
            },
        )
    } else {
        (
            a <= (t - s + 2) / 2,
            if a <= (t - s + 2) / 2 {
                a / 2
            } else {
                (t - s + 2) / 4
            },
        )
    };
    let a_range: Vec<i64> = if odd {
        (-c..=c).collect()
    } else {
        (-c..c).collect()
    };
    for &i in &a_range {
        a_arc(&mut b, i);
    }
    let case = match (odd, small, a) {
        (true, true, _) => "1.1",
        (true, false, _) => "1.2",
        (false, _, 0) => "2.2",
        (false, true, _) => "2.1",
        (false, false, _) => "2.3",
    };
    b.case(case, &[("c", c), ("d_A", d_a), ("d_B", d_b)]);
    if small {
        for &i in &i_set {
            let (u, v) = b_pair(i);
            b.digon(u, v);
        }
        let used = b.used();
        for &j in &j_set {
            if !used.contains(j as usize) {
                let (u, v) = c_pair(j);
                b.digon(u, v);
            }
        }
    } else {
        let bb = a - a_range.len() as i64;
        b.params.push(("b".into(), bb));
        let split = (bb / 2) as usize;
        for (idx, &i) in i_set.iter().enumerate() {
            let (u, v) = b_pair(i);
            if idx < split {
                b.arc(u, v);
                let (p, q) = e_pair(i);
                b.arc(q, p);
            } else {
                b.digon(u, v);
            }
        }
    }
    b.finish(set, &shape)
}

/// Orthogonal pieces for a base consisting of one 3-cycle and a new cycle
/// of even length `t >= 4`: returns the subdigraph, whose components are a
/// 1-path and a path with `t - 4` arcs, and the complementary connection set
/// `D`, each of whose elements is coprime to `t`.
pub fn special_3_t(t: usize) -> Result<(OrthogonalSubdigraph, ConnectionSet)> {
    if t % 2 == 1 || t < 4 {
        return Err(Error::HypothesisViolated(format!(
            "need even t >= 4, got {t}"
        )));
    }
    let ti = t as i64;
    let h = ti / 2;
    let mut b = Build::new(t);
    let d = match t {
        4 => {
            b.case("t=4", &[]);
            b.arc(0, 2);
            b.isolated();
            ConnectionSet::new(t, [1, -1])?
        }
        6 => {
            b.case("t=6", &[]);
            b.arc(3, 1);
            b.path(vec![0, 2, 5]);
            ConnectionSet::new(t, [1, -1])?
        }
        _ if t % 4 == 0 => {
            b.case("t≡0 (mod 4)", &[]);
            let q = ti / 4;
            let mut p = Vec::new();
            for j in 0..=(q - 2) {
                p.push(-j);
                p.push(j + 2);
            }
            for i in 0..=(q - 2) {
                p.push(-(q - 1 + i));
                p.push(q + 3 + i);
            }
            p.push(1);
            b.arc(q + 1, q + 2);
            b.path(p.into_iter().map(|x| md(x, t)).collect());
            ConnectionSet::new(t, [-1, h - 1])?
        }
        _ => {
            b.case("t≡2 (mod 4)", &[]);
            let mut p = Vec::new();
            for j in 0..=((ti - 10) / 4) {
                p.push(-j);
                p.push(j + 2);
            }
            p.push(-(ti - 2) / 4);
            for i in 0..=((ti - 10) / 4) {
                p.push(-((ti + 2) / 4 + i));
                p.push((ti + 10) / 4 + i);
            }
            p.push(h + 1);
            p.push(1);
            b.arc(-(ti - 6) / 4, (ti + 2) / 4);
            b.path(p.into_iter().map(|x| md(x, t)).collect());
            ConnectionSet::new(t, [h - 2, -(h - 2)])?
        }
    };
    let set = d.complement();
    let shape = [Shape::Path(1), Shape::Path(t - 4)];
    Ok((b.finish(set, &shape)?, d))
}

/// Orthogonal pieces for a base of two digons and a new cycle of even
/// length `t >= 8`: returns the subdigraph, whose components are two
/// isolated vertices and a path with `t - 4` arcs, and the complementary
/// connection set `D`, each of whose elements is coprime to `t`.
pub fn special_22_t(t: usize) -> Result<(OrthogonalSubdigraph, ConnectionSet)> {
    if t % 2 == 1 || t < 8 {
        return Err(Error::HypothesisViolated(format!(
            "need even t >= 8, got {t}"
        )));
    }
    let ti = t as i64;
    let h = ti / 2;
    let mut b = Build::new(t);
    let mut p = Vec::new();
    let d = if t % 4 == 0 {
        b.case("t≡0 (mod 4)", &[]);
        let q = ti / 4;
        for j in 0..=(q - 2) {
            p.push(-j);
            p.push(j + 2);
        }
        for i in 0..=(q - 2) {
            p.push(-(q + i));
            p.push(q + 2 + i);
        }
        p.push(h + 1);
        ConnectionSet::new(t, [-1, h - 1, -(h - 1)])?
    } else {
        b.case("t≡2 (mod 4)", &[]);
        for j in 0..=((ti - 10) / 4) {
            p.push(-j);
            p.push(j + 2);
        }
        p.push(-(ti - 2) / 4);
        p.push((ti + 2) / 4);
        for i in 0..=((ti - 10) / 4) {
            p.push(-((ti + 2) / 4 + i));
            p.push((ti + 10) / 4 + i);
        }
        p.push(h + 1);
        ConnectionSet::new(t, [-1, h - 2, -(h - 2)])?
    };
    let p: Vec<usize> = p.into_iter().map(|x| md(x, t)).collect();
    b.path(p);
    b.isolated();
    b.isolated();
    // Put the isolated vertices first, matching the two digons of the base.
    let long = b.comps.remove(0);
    b.comps.push(long);
    let set = d.complement();
    let shape = [Shape::Path(0), Shape::Path(0), Shape::Path(t - 4)];
    Ok((b.finish(set, &shape)?, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(t: usize, vals: &[i64]) -> ConnectionSet {
        ConnectionSet::new(t, vals.iter().copied()).unwrap()
    }

    #[test]
    fn walk_examples() {
        assert_eq!(walk_p(&r(6, &[2, -2, 3]), 0, 6).unwrap(), vec![0, 2, 5, 3]);
        assert_eq!(walk_p(&r(8, &[4]), 0, 8).unwrap(), vec![0, 4]);
        let p = walk_p(&r(9, &[2, -2, 3, -3, 4]), 0, 9).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p, vec![0, 2, 8, 3, 6, 4]);
    }

    #[test]
    fn walk_rejects_bad_forms() {
        assert!(matches!(
            walk_p(&r(8, &[1, 4]), 0, 8),
            Err(Error::BadForm(_))
        ));
        assert!(matches!(
            walk_p(&r(8, &[2, -2]), 0, 8),
            Err(Error::BadForm(_))
        ));
        assert!(matches!(
            walk_p(&r(9, &[4, -4]), 0, 9),
            Err(Error::BadForm(_))
        ));
    }

    #[test]
    fn path_examples() {
        let h = orthogonal_paths(3, 5, 1).unwrap();
        assert_eq!(
            h.digraph().arcs.into_iter().collect::<Vec<_>>(),
            vec![(0, 3), (4, 1)]
        );
        let h = orthogonal_paths(5, 8, 1).unwrap();
        assert_eq!(h.casework.case, "2.2 (s,a)=(5,1)");
        let h = orthogonal_paths(6, 9, 0).unwrap();
        assert_eq!(h.casework.case, "4.2");
        assert_eq!(h.shape(), vec![Shape::Path(3)]);
    }

    #[test]
    fn path_hypotheses() {
        assert!(orthogonal_paths(3, 8, 1).is_err());
        assert!(orthogonal_paths(6, 9, 1).is_err());
        assert!(orthogonal_paths(6, 9, 4).is_err());
        assert!(orthogonal_paths(9, 9, 1).is_err());
    }

    #[test]
    fn digon_examples() {
        let h = orthogonal_digons(2, 4, 0).unwrap();
        assert_eq!(h.shape(), vec![Shape::Cycle(2)]);
        let h = orthogonal_digons(3, 6, 1).unwrap();
        let arcs: Vec<_> = h.digraph().arcs.into_iter().collect();
        assert!(arcs.contains(&(0, 3)));
        assert_eq!(h.shape(), vec![Shape::Path(1), Shape::Cycle(2)]);
        let h = orthogonal_digons(7, 10, 1).unwrap();
        assert_eq!(h.shape(), vec![Shape::Path(1), Shape::Cycle(2)]);
    }

    #[test]
    fn path_sweep() {
        let mut failures = Vec::new();
        for t in 3..=40 {
            for s in 2..t {
                if t % 2 == 0 && s == 3 {
                    continue;
                }
                let cap = (s / 3).min(2 * (t / 2) - s);
                for a in (s % 2..=cap).step_by(2) {
                    if let Err(e) = orthogonal_paths(s, t, a) {
                        failures.push(format!("(s,t,a)=({s},{t},{a}): {e}"));
                    }
                }
            }
        }
        assert!(
            failures.is_empty(),
            "{} failures:\n{}",
            failures.len(),
            failures.join("\n")
        );
    }

    #[test]
    fn digon_sweep() {
        let mut failures = Vec::new();
        for t in (4..=40).step_by(2) {
            for s in 2..t {
                let cap = (s / 3).min(t - s);
                for a in (s % 2..=cap).step_by(2) {
                    if let Err(e) = orthogonal_digons(s, t, a) {
                        failures.push(format!("(s,t,a)=({s},{t},{a}): {e}"));
                    }
                }
            }
        }
        assert!(
            failures.is_empty(),
            "{} failures:\n{}",
            failures.len(),
            failures.join("\n")
        );
    }

    #[test]
    fn special_gadgets() {
        for t in (4..=40).step_by(2) {
            let (h, d) = special_3_t(t).unwrap_or_else(|e| panic!("t={t}: {e}"));
            assert_eq!(h.set.len() + d.len(), t - 1);
        }
        for t in (8..=40).step_by(2) {
            special_22_t(t).unwrap_or_else(|e| panic!("t={t}: {e}"));
        }
        assert!(matches!(special_22_t(6), Err(Error::HypothesisViolated(_))));
        let (_, d) = special_3_t(10).unwrap();
        assert_eq!(d, r(10, &[3, -3]));
        let (_, d) = special_22_t(8).unwrap();
        assert_eq!(d, r(8, &[-1, 3, -3]));
    }
}
