//! Hamilton decompositions of 2-, 4- and 6-regular circulant graphs, and the
//! two circulant factorizations built from them: one into directed Hamilton
//! cycles and one into digon factors.
//!
//! The decomposition search starts from the colouring "generator `i` gets
//! colour `i`" and repairs it with colour swaps on alternating 4-cycles
//! `x, x+a, x+a+b, x+b`. A swap keeps every colour class 2-regular, so the
//! search only has to drive the number of cycles per colour down to one.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{ConnectionSet, DirectedCycle, TwoFactor};
use crate::error::{Error, Result};

/// An undirected Hamilton cycle on `Z_t`, listed from vertex 0.
pub type HamiltonCycle = Vec<usize>;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

const STEP_BUDGET: usize = 2_000_000;

fn cache() -> &'static Mutex<HashMap<(usize, Vec<usize>), Vec<HamiltonCycle>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Vec<usize>), Vec<HamiltonCycle>>>> =
        OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn check_hypothesis(t: usize, gens: &[usize]) -> Result<()> {
    let violated = |msg: String| Err(Error::HypothesisViolated(msg));
    if gens.is_empty() || gens.len() > 3 {
        return violated(format!("{} generators; 1 to 3 are supported", gens.len()));
    }
    let mut values = Vec::new();
    for &g in gens {
        if g % t == 0 {
            return violated(format!("generator {g} is 0 modulo {t}"));
        }
        values.push(g % t);
        values.push(t - g % t);
    }
    let mut distinct = values.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != values.len() {
        return violated(format!(
            "connection set {{±{gens:?}}} mod {t} has degree {}, not {}",
            distinct.len(),
            values.len()
        ));
    }
    match gens {
        [a] => {
            if gcd(t, *a) != 1 {
                return violated(format!("gcd({t}, {a}) != 1"));
            }
        }
        [a, b] => {
            if gcd(gcd(t, *a), *b) != 1 {
                return violated(format!("gcd({t}, {a}, {b}) != 1"));
            }
        }
        [a, b, c] => {
            if t % 2 == 1 {
                return violated(format!("6-regular case needs even order, got {t}"));
            }
            let ok = [(a, b, c), (a, c, b), (b, c, a)]
                .iter()
                .any(|&(x, y, z)| gcd(gcd(t, *x), *y) * gcd(t, *z) == 2);
            if !ok {
                return violated(format!(
                    "no ordering of {{{a},{b},{c}}} has gcd product 2 modulo {t}"
                ));
            }
        }
        _ => unreachable!(),
    }
    Ok(())
}

struct Colouring {
    t: usize,
    gens: Vec<usize>,
    /// colour of edge {x, x + gens[i]} at index x * k + i
    colour: Vec<usize>,
}

impl Colouring {
    fn k(&self) -> usize {
        self.gens.len()
    }

    fn edge(&self, x: usize, i: usize) -> usize {
        x * self.k() + i
    }

    /// The two neighbours of `x` in colour `c`.
    fn neighbours(&self, x: usize, c: usize) -> [usize; 2] {
        let (t, k) = (self.t, self.k());
        let mut out = [usize::MAX; 2];
        let mut m = 0;
        for i in 0..k {
            if self.colour[x * k + i] == c {
                out[m] = (x + self.gens[i]) % t;
                m += 1;
            }
            let y = (x + t - self.gens[i]) % t;
            if self.colour[y * k + i] == c {
                out[m] = y;
                m += 1;
            }
        }
        debug_assert_eq!(m, 2);
        out
    }

    fn cycles_of(&self, c: usize) -> Vec<HamiltonCycle> {
        let t = self.t;
        let mut seen = vec![false; t];
        let mut cycles = Vec::new();
        for start in 0..t {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut prev = start;
            let mut cur = self.neighbours(start, c)[0];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                let [p, q] = self.neighbours(cur, c);
                let next = if p == prev { q } else { p };
                prev = cur;
                cur = next;
            }
            cycles.push(cycle);
        }
        cycles
    }

    fn count(&self, c: usize) -> usize {
        self.cycles_of(c).len()
    }
}

fn search(t: usize, gens: &[usize]) -> Option<Vec<HamiltonCycle>> {
    let k = gens.len();
    let seed = gens.iter().fold(t as u64, |h, &g| {
        h.wrapping_mul(1_000_003).wrapping_add(g as u64)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut col = Colouring {
        t,
        gens: gens.to_vec(),
        colour: (0..t * k).map(|e| e % k).collect(),
    };
    let mut counts: Vec<usize> = (0..k).map(|c| col.count(c)).collect();
    let mut excess: usize = counts.iter().sum::<usize>() - k;
    for _ in 0..STEP_BUDGET {
        if excess == 0 {
            return Some((0..k).map(|c| col.cycles_of(c).remove(0)).collect());
        }
        if k == 1 {
            return None;
        }
        let x = rng.gen_range(0..t);
        let a = rng.gen_range(0..k);
        let mut b = rng.gen_range(0..k - 1);
        if b >= a {
            b += 1;
        }
        let xa = (x + gens[a]) % t;
        let xb = (x + gens[b]) % t;
        let e1 = col.edge(x, a);
        let e2 = col.edge(xa, b);
        let e3 = col.edge(xb, a);
        let e4 = col.edge(x, b);
        let (cx, cy) = (col.colour[e1], col.colour[e4]);
        if cx == cy || col.colour[e3] != cx || col.colour[e2] != cy {
            continue;
        }
        col.colour[e1] = cy;
        col.colour[e3] = cy;
        col.colour[e2] = cx;
        col.colour[e4] = cx;
        let (nx, ny) = (col.count(cx), col.count(cy));
        let new_excess = excess + nx + ny - counts[cx] - counts[cy];
        if new_excess <= excess || rng.gen_bool(0.05) {
            counts[cx] = nx;
            counts[cy] = ny;
            excess = new_excess;
        } else {
            col.colour[e1] = cx;
            col.colour[e3] = cx;
            col.colour[e2] = cy;
            col.colour[e4] = cy;
        }
    }
    None
}

/// Decomposes the circulant graph `Circ(t; ±gens)` into `gens.len()`
/// Hamilton cycles.
///
/// Supported: a single generator coprime to `t`; two generators giving a
/// connected 4-regular graph; three generators giving a 6-regular graph of
/// even order whose generators split as `{a, b}, {c}` with
/// `gcd(t, a, b) * gcd(t, c) = 2`. Results are memoized.
pub fn hamilton_decompose_circulant(t: usize, gens: &[usize]) -> Result<Vec<HamiltonCycle>> {
    let mut key: Vec<usize> = gens.iter().map(|&g| (g % t).min(t - g % t)).collect();
    key.sort_unstable();
    check_hypothesis(t, gens)?;
    if let Some(hit) = cache().lock().expect("cache lock").get(&(t, key.clone())) {
        return Ok(hit.clone());
    }
    let found = if let [g] = key[..] {
        Some(vec![(0..t).map(|i| i * g % t).collect()])
    } else {
        search(t, &key)
    };
    let cycles = found.ok_or_else(|| {
        Error::SearchFailed(format!(
            "no Hamilton decomposition of Circ({t}; ±{key:?}) found"
        ))
    })?;
    cache()
        .lock()
        .expect("cache lock")
        .insert((t, key), cycles.clone());
    Ok(cycles)
}

fn directed_pair(t: usize, cycle: &[usize]) -> Result<[TwoFactor; 2]> {
    let forward = DirectedCycle::from_indices(cycle)?;
    let mut rev = cycle.to_vec();
    rev.reverse();
    let backward = DirectedCycle::from_indices(&rev)?;
    Ok([
        TwoFactor::new(t, vec![forward]),
        TwoFactor::new(t, vec![backward]),
    ])
}

fn single_difference_factor(t: usize, d: usize) -> Result<TwoFactor> {
    let arcs: Vec<_> = (0..t).map(|x| (x, (x + d) % t)).collect();
    TwoFactor::from_arcs(t, &arcs)
}

/// One directed Hamilton cycle `x -> x + d` per element of `d`; every
/// element must be coprime to the modulus.
pub fn difference_factorization(d: &ConnectionSet) -> Result<Vec<TwoFactor>> {
    let t = d.modulus();
    d.residues()
        .iter()
        .map(|&x| {
            if gcd(t, x) != 1 {
                return Err(Error::HypothesisViolated(format!(
                    "difference {x} is not coprime to {t}"
                )));
            }
            single_difference_factor(t, x)
        })
        .collect()
}

/// Factorizes `Circ(t; D)` into `s - 1` directed Hamilton cycles, where
/// `D = {±1, ..., ±(s-1)/2}` for odd `s` and `D = {-1} ∪ {±2, ..., ±s/2}`
/// for even `s`. Requires `2 <= s < t`, and `s != 4` when `t` is even.
pub fn ct_factorization(t: usize, s: usize) -> Result<(ConnectionSet, Vec<TwoFactor>)> {
    if s < 2 || s >= t {
        return Err(Error::HypothesisViolated(format!(
            "need 2 <= s < t, got s = {s}, t = {t}"
        )));
    }
    if t % 2 == 0 && s == 4 {
        return Err(Error::HypothesisViolated(format!(
            "s = 4 with even t = {t}"
        )));
    }
    let k = s / 2;
    let d = if s % 2 == 1 {
        ConnectionSet::symmetric(t, 1..=k)?
    } else {
        let mut vals: Vec<i64> = vec![-1];
        vals.extend((2..=k as i64).flat_map(|x| [x, -x]));
        ConnectionSet::new(t, vals)?
    };
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut factors = Vec::new();
    let mut direct_one = true;
    if k == 2 {
        if t % 2 == 1 {
            blocks.push(vec![2]);
        } else {
            direct_one = false;
            blocks.push(vec![1, 2]);
        }
    } else if k >= 3 {
        let mut start = 2;
        if k % 2 == 0 {
            if t % 2 == 0 {
                blocks.push(vec![2, 3, 4]);
            } else {
                blocks.push(vec![2]);
                blocks.push(vec![3, 4]);
            }
            start = 5;
        }
        while start < k {
            blocks.push(vec![start, start + 1]);
            start += 2;
        }
    }
    if direct_one {
        if s % 2 == 1 {
            factors.push(single_difference_factor(t, 1)?);
            factors.push(single_difference_factor(t, t - 1)?);
        } else {
            factors.push(single_difference_factor(t, t - 1)?);
        }
    }
    for block in &blocks {
        for cycle in hamilton_decompose_circulant(t, block)? {
            factors.extend(directed_pair(t, &cycle)?);
        }
    }
    debug_assert_eq!(factors.len(), s - 1);
    Ok((d, factors))
}

/// Splits an even cycle into two perfect matchings by alternating edges
/// from its first vertex.
fn matchings(cycle: &[usize]) -> [Vec<(usize, usize)>; 2] {
    let len = cycle.len();
    let mut out = [Vec::new(), Vec::new()];
    for i in 0..len {
        out[i % 2].push((cycle[i], cycle[(i + 1) % len]));
    }
    out
}

fn digon_factor(t: usize, edges: &[(usize, usize)]) -> Result<TwoFactor> {
    let cycles = edges
        .iter()
        .map(|&(a, b)| DirectedCycle::from_indices(&[a.min(b), a.max(b)]))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoFactor::new(t, cycles))
}

/// Factorizes `Circ(t; D)` into `s - 1` factors made of digons, where
/// `D = {±1, ..., ±(s-1)/2}` for odd `s` and
/// `D = {±1, ..., ±(s/2 - 1)} ∪ {t/2}` for even `s`. Requires even `t` and
/// `2 <= s < t`.
pub fn c2_factorization(t: usize, s: usize) -> Result<(ConnectionSet, Vec<TwoFactor>)> {
    if t % 2 == 1 {
        return Err(Error::HypothesisViolated(format!(
            "digon factors need even t, got {t}"
        )));
    }
    if s < 2 || s >= t {
        return Err(Error::HypothesisViolated(format!(
            "need 2 <= s < t, got s = {s}, t = {t}"
        )));
    }
    let h = t / 2;
    let k = (s - 1) / 2;
    let mut residues: Vec<usize> = (1..=k).flat_map(|x| [x, t - x]).collect();
    if s % 2 == 0 {
        residues.push(h);
    }
    let d = ConnectionSet::from_residues(t, residues)?;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut start = 1;
    if k % 2 == 1 {
        blocks.push(vec![1]);
        start = 2;
    }
    while start < k {
        blocks.push(vec![start, start + 1]);
        start += 2;
    }
    let mut factors = Vec::new();
    for block in &blocks {
        for cycle in hamilton_decompose_circulant(t, block)? {
            for m in matchings(&cycle) {
                factors.push(digon_factor(t, &m)?);
            }
        }
    }
    if s % 2 == 0 {
        let edges: Vec<_> = (0..h).map(|x| (x, x + h)).collect();
        factors.push(digon_factor(t, &edges)?);
    }
    debug_assert_eq!(factors.len(), s - 1);
    Ok((d, factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::circulant_digraph;
    use std::collections::BTreeSet;

    /// Every edge of Circ(t; ±gens) lies on exactly one of the cycles, and
    /// each cycle is Hamiltonian.
    fn check_undirected(t: usize, gens: &[usize], cycles: &[HamiltonCycle]) {
        let mut edges = BTreeSet::new();
        for c in cycles {
            assert_eq!(c.len(), t);
            assert_eq!(c.iter().collect::<BTreeSet<_>>().len(), t);
            for i in 0..t {
                let (a, b) = (c[i], c[(i + 1) % t]);
                assert!(edges.insert((a.min(b), a.max(b))), "edge {a}-{b} twice");
            }
        }
        let want: BTreeSet<_> = (0..t)
            .flat_map(|x| {
                gens.iter()
                    .map(move |&g| (x.min((x + g) % t), x.max((x + g) % t)))
            })
            .collect();
        assert_eq!(edges, want);
    }

    fn check_directed(t: usize, d: &ConnectionSet, factors: &[TwoFactor], cycle_len: usize) {
        let mut arcs = BTreeSet::new();
        for f in factors {
            let report = crate::verify::check_factor_arcs(
                t,
                &f.arcs().map(|a| a.indices(t)).collect::<Vec<_>>(),
                &crate::digraph::CycleType::new(vec![cycle_len; t / cycle_len]).unwrap(),
            );
            assert!(report.is_empty(), "{report:?}");
            for a in f.arcs() {
                assert!(arcs.insert(a.indices(t)));
            }
        }
        assert_eq!(arcs, circulant_digraph(d).arcs);
    }

    #[test]
    fn degree_four_example() {
        let cycles = hamilton_decompose_circulant(7, &[2, 3]).unwrap();
        assert_eq!(cycles.len(), 2);
        check_undirected(7, &[2, 3], &cycles);
    }

    #[test]
    fn single_generator() {
        assert_eq!(
            hamilton_decompose_circulant(5, &[1]).unwrap(),
            vec![vec![0, 1, 2, 3, 4]]
        );
    }

    #[test]
    fn degree_five_is_rejected() {
        assert!(matches!(
            hamilton_decompose_circulant(8, &[2, 3, 4]),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            hamilton_decompose_circulant(8, &[2, 4]),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            hamilton_decompose_circulant(12, &[2, 4]),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn degree_six() {
        for t in [10, 12, 14, 20, 30] {
            let cycles = hamilton_decompose_circulant(t, &[2, 3, 4]).unwrap();
            check_undirected(t, &[2, 3, 4], &cycles);
        }
    }

    #[test]
    fn ct_examples() {
        let (d, f) = ct_factorization(5, 3).unwrap();
        assert_eq!(f.len(), 2);
        check_directed(5, &d, &f, 5);
        let (d, f) = ct_factorization(9, 2).unwrap();
        assert_eq!(f.len(), 1);
        check_directed(9, &d, &f, 9);
        let (d, f) = ct_factorization(10, 7).unwrap();
        assert_eq!(f.len(), 6);
        check_directed(10, &d, &f, 10);
        assert!(ct_factorization(8, 4).is_err());
    }

    #[test]
    fn c2_examples() {
        let (d, f) = c2_factorization(4, 2).unwrap();
        assert_eq!(d.residues().iter().copied().collect::<Vec<_>>(), vec![2]);
        let arcs: BTreeSet<_> = f[0].arcs().map(|a| a.indices(4)).collect();
        assert_eq!(arcs, [(0, 2), (2, 0), (1, 3), (3, 1)].into_iter().collect());
        let (d, f) = c2_factorization(6, 3).unwrap();
        assert_eq!(f.len(), 2);
        check_directed(6, &d, &f, 2);
        let (d, f) = c2_factorization(8, 5).unwrap();
        assert_eq!(f.len(), 4);
        check_directed(8, &d, &f, 2);
        assert!(c2_factorization(7, 3).is_err());
    }

    #[test]
    fn ct_sweep_small() {
        for t in 3..=20 {
            for s in 2..t {
                if t % 2 == 0 && s == 4 {
                    continue;
                }
                let (d, f) = ct_factorization(t, s).unwrap_or_else(|e| panic!("t={t} s={s}: {e}"));
                assert_eq!(d.len(), s - 1);
                check_directed(t, &d, &f, t);
            }
        }
    }

    #[test]
    fn c2_sweep_small() {
        for t in (4..=20).step_by(2) {
            for s in 2..t {
                let (d, f) = c2_factorization(t, s).unwrap_or_else(|e| panic!("t={t} s={s}: {e}"));
                assert_eq!(d.len(), s - 1);
                check_directed(t, &d, &f, 2);
            }
        }
    }
}
