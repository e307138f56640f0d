//! Vertices, arcs, cycles, 2-factors and circulant digraphs.
//!
//! Vertices are dense indices, optionally extended by a single point at
//! infinity that every rotation fixes. Decompositions are always stored
//! over plain indices; [`Decomposition::normalized`] sends the point at
//! infinity to index `n - 1`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of a complete symmetric digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vertex {
    Finite(usize),
    Infinity,
}

impl Vertex {
    /// Index of the vertex in a ground set of size `n`, with infinity last.
    pub fn index(self, n: usize) -> usize {
        match self {
            Vertex::Finite(i) => i,
            Vertex::Infinity => n - 1,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Vertex::Finite(i) => Some(i),
            Vertex::Infinity => None,
        }
    }
}

impl From<usize> for Vertex {
    fn from(i: usize) -> Self {
        Vertex::Finite(i)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Finite(i) => write!(f, "u_{i}"),
            Vertex::Infinity => write!(f, "u_inf"),
        }
    }
}

/// A directed arc `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub tail: Vertex,
    pub head: Vertex,
}

impl Arc {
    pub fn new(tail: impl Into<Vertex>, head: impl Into<Vertex>) -> Result<Self> {
        let (tail, head) = (tail.into(), head.into());
        if tail == head {
            return Err(Error::CollisionDetected(format!("loop at {tail}")));
        }
        Ok(Arc { tail, head })
    }

    /// Arc between finite indices. Panics on a loop.
    pub fn finite(tail: usize, head: usize) -> Self {
        assert_ne!(tail, head, "arcs join distinct vertices");
        Arc {
            tail: Vertex::Finite(tail),
            head: Vertex::Finite(head),
        }
    }

    /// Difference `head - tail` modulo `t`, for arcs between finite vertices.
    pub fn difference(&self, t: usize) -> Option<usize> {
        let (a, b) = (self.tail.finite()?, self.head.finite()?);
        Some((b + t - a % t) % t)
    }

    pub fn indices(&self, n: usize) -> (usize, usize) {
        (self.tail.index(n), self.head.index(n))
    }
}

/// A directed cycle given by its vertex sequence; the closing arc is implicit.
///
/// Length 2 is a digon, which is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedCycle {
    vertices: Vec<Vertex>,
}

impl DirectedCycle {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InstanceTooSmall(format!(
                "a directed cycle needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::CollisionDetected(format!(
                "repeated vertex in cycle {:?}",
                vertices
            )));
        }
        Ok(DirectedCycle { vertices })
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| Vertex::Finite(i)).collect())
    }

    /// Builds a cycle without checking it. Used by mutation tests and parsers
    /// that hand the result straight to the verifier.
    pub fn new_unchecked(vertices: Vec<Vertex>) -> Self {
        DirectedCycle { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| Arc {
            tail: self.vertices[i],
            head: self.vertices[(i + 1) % k],
        })
    }

    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        DirectedCycle {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
        }
    }

    /// The same cycle listed from its least vertex.
    pub fn rotated_to_min(&self) -> Self {
        let start = (0..self.vertices.len())
            .min_by_key(|&i| self.vertices[i])
            .unwrap_or(0);
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(start);
        DirectedCycle { vertices }
    }
}

/// A spanning union of vertex-disjoint directed cycles on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoFactor {
    pub n: usize,
    pub cycles: Vec<DirectedCycle>,
}

impl TwoFactor {
    pub fn new(n: usize, cycles: Vec<DirectedCycle>) -> Self {
        TwoFactor { n, cycles }
    }

    pub fn from_index_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let cycles = cycles
            .iter()
            .map(|c| DirectedCycle::from_indices(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(TwoFactor { n, cycles })
    }

    /// Recovers the cycles of a successor map given as a list of arcs over
    /// `0..n`. Fails unless every vertex has exactly one successor and one
    /// predecessor.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut succ = vec![usize::MAX; n];
        let mut has_pred = vec![false; n];
        for &(a, b) in arcs {
            if a >= n || b >= n || a == b || succ[a] != usize::MAX || has_pred[b] {
                return Err(Error::CollisionDetected(format!(
                    "arc ({a},{b}) breaks the 2-factor structure on {n} vertices"
                )));
            }
            succ[a] = b;
            has_pred[b] = true;
        }
        if arcs.len() != n {
            return Err(Error::SizeMismatch(format!(
                "{} arcs cannot span {n} vertices",
                arcs.len()
            )));
        }
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(Vertex::Finite(v));
                v = succ[v];
            }
            cycles.push(DirectedCycle::new(cycle)?);
        }
        Ok(TwoFactor { n, cycles })
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.cycles.iter().flat_map(|c| c.arcs())
    }

    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        TwoFactor {
            n: self.n,
            cycles: self.cycles.iter().map(|c| c.map(&f)).collect(),
        }
    }

    /// Infinity becomes index `n - 1`.
    pub fn normalized(&self) -> Self {
        let n = self.n;
        self.map(|v| Vertex::Finite(v.index(n)))
    }

    /// Cycles listed from their least vertex, ordered by that vertex.
    pub fn canonical(&self) -> Self {
        let mut cycles: Vec<_> = self.cycles.iter().map(|c| c.rotated_to_min()).collect();
        cycles.sort_by_key(|c| c.vertices()[0]);
        TwoFactor { n: self.n, cycles }
    }

    /// Vertex sequences over `0..n`.
    pub fn index_cycles(&self) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .map(|c| c.vertices().iter().map(|v| v.index(self.n)).collect())
            .collect()
    }
}

/// A sorted multiset of cycle lengths, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CycleType {
    lengths: Vec<usize>,
}

impl CycleType {
    pub fn new(mut lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::BadCycleType("empty cycle type".into()));
        }
        if let Some(&m) = lengths.iter().find(|&&m| m < 2) {
            return Err(Error::BadCycleType(format!("cycle length {m} is below 2")));
        }
        lengths.sort_unstable();
        Ok(CycleType { lengths })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Number of vertices covered.
    pub fn order(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn count(&self, m: usize) -> usize {
        self.lengths.iter().filter(|&&x| x == m).count()
    }

    pub fn max(&self) -> usize {
        *self.lengths.last().expect("non-empty")
    }

    pub fn is_uniform(&self) -> bool {
        self.lengths.iter().all(|&m| m == self.lengths[0])
    }

    /// Number of odd lengths.
    pub fn odd_count(&self) -> usize {
        self.lengths.iter().filter(|&&m| m % 2 == 1).count()
    }

    /// The multiset with one copy of each element of `other` removed.
    pub fn without(&self, other: &[usize]) -> Option<CycleType> {
        let mut rest = self.lengths.clone();
        for m in other {
            let pos = rest.iter().position(|x| x == m)?;
            rest.remove(pos);
        }
        CycleType::new(rest).ok()
    }

    pub fn with(&self, other: &[usize]) -> CycleType {
        let mut all = self.lengths.clone();
        all.extend_from_slice(other);
        all.sort_unstable();
        CycleType { lengths: all }
    }
}

impl TryFrom<Vec<usize>> for CycleType {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        CycleType::new(v)
    }
}

impl From<CycleType> for Vec<usize> {
    fn from(c: CycleType) -> Self {
        c.lengths
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Accepts `3,4,5`, `(3,4,5)`, `3 4 5` and powers such as `2^3,4`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut lengths = Vec::new();
        for token in trimmed.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => (b, e),
                None => (token, "1"),
            };
            let m: usize = base
                .parse()
                .map_err(|_| Error::BadCycleType(format!("cannot parse length {base:?}")))?;
            let k: usize = exp
                .parse()
                .map_err(|_| Error::BadCycleType(format!("cannot parse exponent {exp:?}")))?;
            lengths.extend(std::iter::repeat(m).take(k));
        }
        CycleType::new(lengths)
    }
}

/// An ordered list of 2-factors of the complete symmetric digraph on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: usize,
    pub factors: Vec<TwoFactor>,
}

impl Decomposition {
    pub fn new(n: usize, factors: Vec<TwoFactor>) -> Self {
        Decomposition { n, factors }
    }

    pub fn normalized(&self) -> Self {
        Decomposition {
            n: self.n,
            factors: self.factors.iter().map(|f| f.normalized()).collect(),
        }
    }

    pub fn canonical(&self) -> Self {
        Decomposition {
            n: self.n,
            factors: self
                .factors
                .iter()
                .map(|f| f.normalized().canonical())
                .collect(),
        }
    }

    /// Applies a vertex relabelling to every factor.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.n;
        Decomposition {
            n,
            factors: self
                .factors
                .iter()
                .map(|f| f.map(|v| Vertex::Finite(perm[v.index(n)])))
                .collect(),
        }
    }
}

/// A symmetric or asymmetric set of nonzero residues modulo `modulus`.
///
/// A signed value `-d` is stored as `modulus - d`, so `{1, -1}` becomes `{1, t-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConnectionSet {
    modulus: usize,
    residues: BTreeSet<usize>,
}

impl ConnectionSet {
    pub fn new(modulus: usize, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadConnectionSet(format!(
                "modulus {modulus} below 2"
            )));
        }
        let t = modulus as i64;
        let mut residues = BTreeSet::new();
        for v in values {
            if v == 0 || v.abs() >= t {
                return Err(Error::BadConnectionSet(format!(
                    "value {v} is not a nonzero residue modulo {modulus}"
                )));
            }
            residues.insert(v.rem_euclid(t) as usize);
        }
        Ok(ConnectionSet { modulus, residues })
    }

    pub fn from_residues(
        modulus: usize,
        residues: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        Self::new(modulus, residues.into_iter().map(|r| r as i64))
    }

    /// Symmetric closure `{+d, -d}` of each value.
    pub fn symmetric(modulus: usize, values: impl IntoIterator<Item = usize>) -> Result<Self> {
        let t = modulus as i64;
        Self::new(
            modulus,
            values
                .into_iter()
                .flat_map(|d| [d as i64 % t, -(d as i64 % t)]),
        )
    }

    /// All nonzero residues.
    pub fn full(modulus: usize) -> Self {
        ConnectionSet {
            modulus,
            residues: (1..modulus).collect(),
        }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<usize> {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, d: usize) -> bool {
        self.residues.contains(&(d % self.modulus))
    }

    pub fn complement(&self) -> Self {
        ConnectionSet {
            modulus: self.modulus,
            residues: (1..self.modulus)
                .filter(|r| !self.residues.contains(r))
                .collect(),
        }
    }

    pub fn minus(&self, other: &ConnectionSet) -> Self {
        ConnectionSet {
            modulus: self.modulus,
            residues: self.residues.difference(&other.residues).copied().collect(),
        }
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}} mod {}", parts.join(","), self.modulus)
    }
}

/// A digraph on a vertex subset of `0..order`; isolated vertices are kept.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    pub order: usize,
    pub vertices: BTreeSet<usize>,
    pub arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(order: usize) -> Self {
        Digraph {
            order,
            ..Default::default()
        }
    }

    pub fn add_arc(&mut self, a: usize, b: usize) {
        self.vertices.insert(a);
        self.vertices.insert(b);
        self.arcs.insert((a, b));
    }
}

/// All `n(n-1)` arcs of the complete symmetric digraph on `0..n`.
pub fn complete_symmetric_arcs(n: usize) -> Result<BTreeSet<(usize, usize)>> {
    if n < 2 {
        return Err(Error::InstanceTooSmall(format!(
            "the complete symmetric digraph needs n >= 2, got {n}"
        )));
    }
    Ok((0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect())
}

/// The circulant digraph on `Z_t` with an arc `x -> x + d` for every `d` in `set`.
pub fn circulant_digraph(set: &ConnectionSet) -> Digraph {
    let t = set.modulus();
    let mut g = Digraph::new(t);
    g.vertices = (0..t).collect();
    for x in 0..t {
        for &d in set.residues() {
            g.arcs.insert((x, (x + d) % t));
        }
    }
    g
}

/// A block of consecutive indices `start..start + len` that a rotation cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orbit {
    pub start: usize,
    pub len: usize,
}

impl Orbit {
    pub fn new(start: usize, len: usize) -> Self {
        Orbit { start, len }
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= self.start && i < self.start + self.len
    }

    /// `rho^j` applied to a single vertex.
    pub fn rotate(&self, v: Vertex, j: usize) -> Vertex {
        match v {
            Vertex::Finite(i) if self.contains(i) => {
                Vertex::Finite(self.start + (i - self.start + j) % self.len)
            }
            other => other,
        }
    }
}

/// `rho^j(F)`: shifts orbit vertices by `j` and fixes everything else.
pub fn rotate(factor: &TwoFactor, j: usize, orbit: Orbit) -> TwoFactor {
    factor.map(|v| orbit.rotate(v, j))
}

pub fn cycle_type_of(factor: &TwoFactor) -> Result<CycleType> {
    CycleType::new(factor.cycles.iter().map(|c| c.len()).collect())
}

/// Reduces a signed residue into `0..t`.
pub fn md(x: i64, t: usize) -> usize {
    x.rem_euclid(t as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_arc_counts() {
        assert!(matches!(
            complete_symmetric_arcs(1),
            Err(Error::InstanceTooSmall(_))
        ));
        let two = complete_symmetric_arcs(2).unwrap();
        assert_eq!(two.into_iter().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(complete_symmetric_arcs(4).unwrap().len(), 12);
        assert_eq!(complete_symmetric_arcs(9).unwrap().len(), 72);
    }

    #[test]
    fn circulant_examples() {
        let s = ConnectionSet::new(5, [1, -1]).unwrap();
        assert_eq!(circulant_digraph(&s).arcs.len(), 10);
        let s = ConnectionSet::new(4, [2]).unwrap();
        let arcs: Vec<_> = circulant_digraph(&s).arcs.into_iter().collect();
        assert_eq!(arcs, vec![(0, 2), (1, 3), (2, 0), (3, 1)]);
        let s = ConnectionSet::new(6, [1, -1, 3]).unwrap();
        assert_eq!(circulant_digraph(&s).arcs.len(), 18);
    }

    #[test]
    fn bad_connection_sets() {
        assert!(matches!(
            ConnectionSet::new(5, [0]),
            Err(Error::BadConnectionSet(_))
        ));
        assert!(matches!(
            ConnectionSet::new(5, [5]),
            Err(Error::BadConnectionSet(_))
        ));
        assert!(matches!(
            ConnectionSet::from_residues(4, [7]),
            Err(Error::BadConnectionSet(_))
        ));
    }

    #[test]
    fn connection_set_storage() {
        let s = ConnectionSet::new(6, [1, -1, 3]).unwrap();
        assert_eq!(
            s.residues().iter().copied().collect::<Vec<_>>(),
            vec![1, 3, 5]
        );
        assert_eq!(s.complement().residues().len(), 2);
    }

    #[test]
    fn rotation_fixes_infinity_and_outsiders() {
        let orbit = Orbit::new(2, 5);
        assert_eq!(orbit.rotate(Vertex::Infinity, 3), Vertex::Infinity);
        assert_eq!(orbit.rotate(Vertex::Finite(0), 3), Vertex::Finite(0));
        assert_eq!(orbit.rotate(Vertex::Finite(5), 3), Vertex::Finite(3));
        let f = TwoFactor::new(
            8,
            vec![
                DirectedCycle::new(vec![0.into(), 2.into(), Vertex::Infinity]).unwrap(),
                DirectedCycle::from_indices(&[1, 3, 4, 5, 6]).unwrap(),
            ],
        );
        assert_eq!(rotate(&f, 5, orbit), f);
    }

    #[test]
    fn cycle_type_parsing() {
        let c: CycleType = "2^3,4".parse().unwrap();
        assert_eq!(c.lengths(), &[2, 2, 2, 4]);
        assert_eq!(c.to_string(), "(2,2,2,4)");
        let c: CycleType = "(5, 3 4)".parse().unwrap();
        assert_eq!(c.lengths(), &[3, 4, 5]);
        assert_eq!(c.order(), 12);
        assert!("1,3".parse::<CycleType>().is_err());
        assert!("".parse::<CycleType>().is_err());
    }

    #[test]
    fn from_arcs_recovers_cycles() {
        let f = TwoFactor::from_arcs(5, &[(0, 3), (3, 0), (1, 2), (2, 4), (4, 1)]).unwrap();
        assert_eq!(cycle_type_of(&f).unwrap().lengths(), &[2, 3]);
        assert!(TwoFactor::from_arcs(3, &[(0, 1), (1, 0), (2, 0)]).is_err());
    }

    #[test]
    fn arc_difference() {
        assert_eq!(Arc::finite(4, 1).difference(5), Some(2));
        assert_eq!(Arc::finite(0, 3).difference(5), Some(3));
        assert_eq!(Arc::new(0, Vertex::Infinity).unwrap().difference(5), None);
    }
}
