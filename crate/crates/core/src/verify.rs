//! Independent certification of 2-factors, decompositions and orthogonal
//! subdigraphs.
//!
//! Every check works from raw arcs. Nothing a constructor reports about its
//! own output is trusted.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{ConnectionSet, CycleType, Decomposition, Digraph, TwoFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FailureKind {
    MissingArc,
    DuplicateArc,
    NotSpanning,
    WrongCycleType,
    WrongFactorCount,
    NotOrthogonal,
    WrongShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub detail: String,
}

/// Outcome of a certification run.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CertificateReport {
    pub ok: bool,
    pub failures: Vec<Failure>,
}

impl CertificateReport {
    fn from_failures(failures: Vec<Failure>) -> Self {
        CertificateReport {
            ok: failures.is_empty(),
            failures,
        }
    }

    pub fn has(&self, kind: FailureKind) -> bool {
        self.failures.iter().any(|f| f.kind == kind)
    }

    pub fn kinds(&self) -> Vec<FailureKind> {
        let mut kinds: Vec<_> = self.failures.iter().map(|f| f.kind).collect();
        kinds.sort();
        kinds.dedup();
        kinds
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        write!(f, "{} failure(s)", self.failures.len())?;
        for fail in self.failures.iter().take(5) {
            write!(f, "; {:?}: {}", fail.kind, fail.detail)?;
        }
        Ok(())
    }
}

/// Component shape of a subdigraph: a directed path with the given number of
/// arcs (`Path(0)` is an isolated vertex) or a directed cycle of given length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Shape {
    Path(usize),
    Cycle(usize),
}

fn fail(kind: FailureKind, detail: String) -> Failure {
    Failure { kind, detail }
}

/// Checks that `arcs` is a 2-factor of the complete symmetric digraph on
/// `0..n` with the given cycle type.
pub fn check_factor_arcs(n: usize, arcs: &[(usize, usize)], ty: &CycleType) -> Vec<Failure> {
    let mut failures = Vec::new();
    let mut succ = vec![usize::MAX; n];
    let mut indeg = vec![0usize; n];
    for &(a, b) in arcs {
        if a >= n || b >= n {
            failures.push(fail(
                FailureKind::NotSpanning,
                format!("arc ({a},{b}) leaves the ground set 0..{n}"),
            ));
            continue;
        }
        if a == b {
            failures.push(fail(FailureKind::NotSpanning, format!("loop at {a}")));
            continue;
        }
        if succ[a] != usize::MAX {
            failures.push(fail(
                FailureKind::NotSpanning,
                format!("vertex {a} has out-degree above 1"),
            ));
            continue;
        }
        succ[a] = b;
        indeg[b] += 1;
    }
    for v in 0..n {
        if succ[v] == usize::MAX {
            failures.push(fail(
                FailureKind::NotSpanning,
                format!("vertex {v} has out-degree 0"),
            ));
        }
        if indeg[v] != 1 {
            failures.push(fail(
                FailureKind::NotSpanning,
                format!("vertex {v} has in-degree {}", indeg[v]),
            ));
        }
    }
    if !failures.is_empty() {
        return failures;
    }
    let mut seen = vec![false; n];
    let mut lengths = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            len += 1;
            v = succ[v];
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    if lengths != ty.lengths() {
        failures.push(fail(
            FailureKind::WrongCycleType,
            format!("cycle lengths {lengths:?}, expected {ty}"),
        ));
    }
    failures
}

fn factor_arcs(f: &TwoFactor, n: usize) -> Vec<(usize, usize)> {
    f.arcs().map(|a| a.indices(n)).collect()
}

/// Certifies a single 2-factor of type `ty` on `n` vertices.
pub fn verify_two_factor(f: &TwoFactor, n: usize, ty: &CycleType) -> CertificateReport {
    let mut failures = Vec::new();
    if ty.order() != n {
        failures.push(fail(
            FailureKind::WrongCycleType,
            format!("type {ty} covers {} vertices, not {n}", ty.order()),
        ));
    }
    for c in &f.cycles {
        if c.len() < 2 {
            failures.push(fail(
                FailureKind::WrongCycleType,
                format!("cycle of length {}", c.len()),
            ));
        }
    }
    failures.extend(check_factor_arcs(n, &factor_arcs(f, n), ty));
    CertificateReport::from_failures(failures)
}

/// Certifies a list of factors, each given by its arcs, as a decomposition of
/// the complete symmetric digraph on `0..n` into 2-factors of type `ty`.
pub fn verify_arc_factors(
    n: usize,
    factors: &[Vec<(usize, usize)>],
    ty: &CycleType,
) -> CertificateReport {
    let mut failures = Vec::new();
    if ty.order() != n {
        failures.push(fail(
            FailureKind::WrongCycleType,
            format!("type {ty} covers {} vertices, not {n}", ty.order()),
        ));
        return CertificateReport::from_failures(failures);
    }
    if factors.len() + 1 != n {
        failures.push(fail(
            FailureKind::WrongFactorCount,
            format!("{} factors, expected {}", factors.len(), n - 1),
        ));
    }
    for (j, arcs) in factors.iter().enumerate() {
        for mut f in check_factor_arcs(n, arcs, ty) {
            f.detail = format!("factor {j}: {}", f.detail);
            failures.push(f);
        }
    }
    let mut count = vec![0u32; n * n];
    for arcs in factors {
        for &(a, b) in arcs {
            if a < n && b < n && a != b {
                count[a * n + b] += 1;
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            match count[a * n + b] {
                0 => failures.push(fail(
                    FailureKind::MissingArc,
                    format!("arc ({a},{b}) missing"),
                )),
                1 => {}
                k => failures.push(fail(
                    FailureKind::DuplicateArc,
                    format!("arc ({a},{b}) used {k} times"),
                )),
            }
        }
    }
    CertificateReport::from_failures(failures)
}

/// Certifies `d` as a decomposition of the complete symmetric digraph into
/// exactly `n - 1` 2-factors of type `ty`.
pub fn verify_decomposition(d: &Decomposition, ty: &CycleType) -> CertificateReport {
    let n = d.n;
    let mut failures = Vec::new();
    for (j, f) in d.factors.iter().enumerate() {
        if f.cycles.iter().any(|c| c.len() < 2) {
            failures.push(fail(
                FailureKind::WrongCycleType,
                format!("factor {j} has a cycle shorter than 2"),
            ));
        }
    }
    let arcs: Vec<_> = d.factors.iter().map(|f| factor_arcs(f, n)).collect();
    let mut report = verify_arc_factors(n, &arcs, ty);
    failures.append(&mut report.failures);
    CertificateReport::from_failures(failures)
}

/// Components of a subdigraph whose vertices all have in- and out-degree at
/// most 1. Returns `Err` with a detail message otherwise.
pub fn components(h: &Digraph) -> Result<Vec<Shape>, String> {
    let mut succ: BTreeMap<usize, usize> = BTreeMap::new();
    let mut pred: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in &h.arcs {
        if a == b {
            return Err(format!("loop at {a}"));
        }
        if succ.insert(a, b).is_some() {
            return Err(format!("vertex {a} has out-degree above 1"));
        }
        if pred.insert(b, a).is_some() {
            return Err(format!("vertex {b} has in-degree above 1"));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut shapes = Vec::new();
    let mut vertices = h.vertices.clone();
    vertices.extend(h.arcs.iter().flat_map(|&(a, b)| [a, b]));
    // Paths first, walking forward from every source.
    for &v in &vertices {
        if pred.contains_key(&v) {
            continue;
        }
        let mut len = 0;
        let mut x = v;
        seen.insert(x);
        while let Some(&y) = succ.get(&x) {
            seen.insert(y);
            len += 1;
            x = y;
        }
        shapes.push(Shape::Path(len));
    }
    for &v in &vertices {
        if seen.contains(&v) {
            continue;
        }
        let mut len = 0;
        let mut x = v;
        while seen.insert(x) {
            len += 1;
            x = succ[&x];
        }
        shapes.push(Shape::Cycle(len));
    }
    shapes.sort();
    Ok(shapes)
}

/// Certifies that `h` is an `s`-orthogonal subdigraph of the circulant on
/// `Z_t` with the given component shape: its arc differences are exactly the
/// residues of `s`, each once.
pub fn verify_orthogonal(h: &Digraph, s: &ConnectionSet, shape: &[Shape]) -> CertificateReport {
    let t = s.modulus();
    let mut failures = Vec::new();
    if let Some(&v) = h.vertices.iter().find(|&&v| v >= t) {
        failures.push(fail(
            FailureKind::WrongShape,
            format!("vertex {v} outside Z_{t}"),
        ));
    }
    let mut diffs: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in &h.arcs {
        if a >= t || b >= t {
            failures.push(fail(
                FailureKind::WrongShape,
                format!("arc ({a},{b}) outside Z_{t}"),
            ));
            continue;
        }
        *diffs.entry((b + t - a) % t).or_default() += 1;
    }
    for (&d, &k) in &diffs {
        if !s.contains(d) {
            failures.push(fail(
                FailureKind::NotOrthogonal,
                format!("difference {d} is not in the connection set"),
            ));
        } else if k > 1 {
            failures.push(fail(
                FailureKind::NotOrthogonal,
                format!("difference {d} occurs {k} times"),
            ));
        }
    }
    for &d in s.residues() {
        if !diffs.contains_key(&d) {
            failures.push(fail(
                FailureKind::NotOrthogonal,
                format!("difference {d} does not occur"),
            ));
        }
    }
    match components(h) {
        Err(detail) => failures.push(fail(FailureKind::WrongShape, detail)),
        Ok(found) => {
            let mut want = shape.to_vec();
            want.sort();
            if found != want {
                failures.push(fail(
                    FailureKind::WrongShape,
                    format!("components {found:?}, expected {want:?}"),
                ));
            }
        }
    }
    CertificateReport::from_failures(failures)
}
