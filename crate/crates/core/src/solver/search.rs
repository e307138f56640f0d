//! Search kernels.
//!
//! * [`exact_cover`]: complete backtracking over arcs with bitset candidate
//!   filtering. It decides existence for orders up to 11.
//! * [`starter_search`]: randomized depth-first search for a base-`q` starter
//!   set on `Z_{n-1}` plus infinity.
//! * [`anneal`]: local search over arc colourings in which every colour class
//!   is a permutation, moving by swaps along alternating chains of two
//!   colours until every class has the target cycle type.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::{CycleType, Decomposition, TwoFactor, Vertex};
use crate::rotational::StarterSet;

/// Largest order [`exact_cover`] accepts; arcs must fit a `u128`.
pub const EXACT_COVER_MAX_N: usize = 11;

/// How a search ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult<T> {
    Found(T),
    /// The whole space was explored without a solution.
    Exhausted(SearchLog),
    OutOfBudget(SearchLog),
}

/// Work done by a search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLog {
    pub kernel: String,
    pub nodes: u64,
    pub candidates: u64,
}

fn arc_bit(n: usize, u: usize, v: usize) -> u32 {
    (u * (n - 1) + if v < u { v } else { v - 1 }) as u32
}

/// Every 2-factor of type `ty` inside the digraph with out-lists `out`,
/// as bitmasks over the arc labels in `out`. Cycles are listed from their
/// least vertex.
fn factors_in(ty: &CycleType, out: &[Vec<(usize, u32)>]) -> Vec<u128> {
    struct Enum<'a> {
        out: &'a [Vec<(usize, u32)>],
        remaining: Vec<usize>,
        used: Vec<bool>,
        found: Vec<u128>,
    }
    impl Enum<'_> {
        fn next_cycle(&mut self, mask: u128) {
            let Some(start) = (0..self.used.len()).find(|&v| !self.used[v]) else {
                self.found.push(mask);
                return;
            };
            let mut lens = self.remaining.clone();
            lens.dedup();
            for len in lens {
                let pos = self.remaining.iter().position(|&x| x == len).unwrap();
                self.remaining.remove(pos);
                self.used[start] = true;
                self.extend(start, start, 1, len, mask);
                self.used[start] = false;
                self.remaining.insert(pos, len);
            }
        }

        fn extend(&mut self, start: usize, last: usize, got: usize, len: usize, mask: u128) {
            let out = self.out;
            for &(v, bit) in &out[last] {
                let m = mask | 1u128 << bit;
                if got == len {
                    if v == start {
                        self.next_cycle(m);
                    }
                } else if !self.used[v] && v > start {
                    self.used[v] = true;
                    self.extend(start, v, got + 1, len, m);
                    self.used[v] = false;
                }
            }
        }
    }
    let mut e = Enum {
        out,
        remaining: ty.lengths().to_vec(),
        used: vec![false; out.len()],
        found: Vec::new(),
    };
    e.next_cycle(0);
    e.found
}

fn complete_out_lists(n: usize) -> Vec<Vec<(usize, u32)>> {
    (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v != u)
                .map(|v| (v, arc_bit(n, u, v)))
                .collect()
        })
        .collect()
}

#[cfg(test)]
fn all_factors(ty: &CycleType) -> Vec<u128> {
    factors_in(ty, &complete_out_lists(ty.order()))
}

/// Exact cover of the `bits` labels outside `covered` by `cands`. `Some(true)` leaves the chosen
/// masks in `chosen`; `None` means the node budget ran out.
fn cover_from(
    cands: &[u128],
    covered: u128,
    bits: usize,
    budget: u64,
    nodes: &mut u64,
    chosen: &mut Vec<u128>,
) -> Option<bool> {
    let full: u128 = if bits == 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    };
    fn rec(
        cands: &[u128],
        covered: u128,
        full: u128,
        bits: usize,
        budget: u64,
        nodes: &mut u64,
        chosen: &mut Vec<u128>,
    ) -> Option<bool> {
        if covered == full {
            return Some(true);
        }
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let mut counts = [0u32; 128];
        for &c in cands {
            let mut m = c;
            while m != 0 {
                counts[m.trailing_zeros() as usize] += 1;
                m &= m - 1;
            }
        }
        let mut best = usize::MAX;
        for b in 0..bits {
            if covered >> b & 1 == 0 && (best == usize::MAX || counts[b] < counts[best]) {
                best = b;
                if counts[b] == 0 {
                    return Some(false);
                }
            }
        }
        for &c in cands.iter().filter(|&&c| c >> best & 1 == 1) {
            let next = covered | c;
            let rest: Vec<u128> = cands.iter().copied().filter(|&d| d & next == 0).collect();
            chosen.push(c);
            match rec(&rest, next, full, bits, budget, nodes, chosen) {
                Some(false) => {}
                other => return other,
            }
            chosen.pop();
        }
        Some(false)
    }
    rec(cands, covered, full, bits, budget, nodes, chosen)
}

fn factor_from_mask(n: usize, mask: u128) -> TwoFactor {
    let mut arcs = Vec::with_capacity(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && mask >> arc_bit(n, u, v) & 1 == 1 {
                arcs.push((u, v));
            }
        }
    }
    TwoFactor::from_arcs(n, &arcs).expect("candidate masks are 2-factors")
}

/// Complete search for a decomposition of `K*_n` into factors of type `ty`.
///
/// Branches on the uncovered arc lying in the fewest surviving candidates,
/// so [`SearchResult::Exhausted`] is a proof of nonexistence.
pub fn exact_cover(ty: &CycleType, node_budget: u64, seed: u64) -> SearchResult<Decomposition> {
    let n = ty.order();
    let mut log = SearchLog {
        kernel: "exact-cover".into(),
        ..Default::default()
    };
    if n > EXACT_COVER_MAX_N || n < 2 {
        return SearchResult::OutOfBudget(log);
    }
    let mut cands = factors_in(ty, &complete_out_lists(n));
    cands.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    log.candidates = cands.len() as u64;
    // Every factor of the type is a relabelling of every other, so one
    // factor may be fixed to consecutive runs of vertices.
    let mut first = 0u128;
    let mut at = 0;
    for &m in ty.lengths() {
        for i in 0..m {
            first |= 1u128 << arc_bit(n, at + i, at + (i + 1) % m);
        }
        at += m;
    }
    cands.retain(|&c| c & first == 0);
    let mut chosen = vec![first];
    let outcome = cover_from(
        &cands,
        first,
        n * (n - 1),
        node_budget,
        &mut log.nodes,
        &mut chosen,
    );
    match outcome {
        Some(true) => {
            let factors = chosen.iter().map(|&m| factor_from_mask(n, m)).collect();
            SearchResult::Found(Decomposition::new(n, factors))
        }
        Some(false) => SearchResult::Exhausted(log),
        None => SearchResult::OutOfBudget(log),
    }
}

struct StarterState<'a> {
    m: usize,
    q: usize,
    lengths: Vec<Vec<usize>>,
    used_diff: Vec<bool>,
    plus_inf: Vec<bool>,
    in_factor: Vec<bool>,
    cycles: Vec<Vec<Vec<usize>>>,
    nodes: u64,
    limit: u64,
    rng: &'a mut ChaCha8Rng,
}

impl StarterState<'_> {
    fn diff(&self, u: usize, v: usize) -> usize {
        (u % self.q) * self.m + (v + self.m - u) % self.m
    }

    /// Builds starter `j`, cycle `c`, whose partial vertex list is `path`.
    fn place(&mut self, j: usize, c: usize, path: &mut Vec<usize>) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        let inf = self.m;
        let len = self.lengths[j][c];
        let last = *path.last().unwrap();
        let first = path[0];
        if path.len() == len {
            return self.next_cycle(j, c, path);
        }
        let closing = path.len() + 1 == len;
        let mut cands: Vec<usize> = (0..self.m)
            .filter(|&w| !self.in_factor[w] && !self.used_diff[self.diff(last, w)])
            .collect();
        cands.shuffle(self.rng);
        for w in cands {
            let d = self.diff(last, w);
            if closing {
                if first == inf {
                    if self.plus_inf[w % self.q] {
                        continue;
                    }
                } else {
                    let d2 = self.diff(w, first);
                    if d2 == d || self.used_diff[d2] {
                        continue;
                    }
                }
            }
            self.used_diff[d] = true;
            self.in_factor[w] = true;
            path.push(w);
            match self.place(j, c, path) {
                Some(false) => {}
                other => return other,
            }
            path.pop();
            self.in_factor[w] = false;
            self.used_diff[d] = false;
        }
        Some(false)
    }

    fn next_cycle(&mut self, j: usize, c: usize, path: &mut Vec<usize>) -> Option<bool> {
        let inf = self.m;
        let last = *path.last().unwrap();
        let first = path[0];
        let closing_mark = if first == inf {
            self.plus_inf[last % self.q] = true;
            None
        } else {
            let d = self.diff(last, first);
            self.used_diff[d] = true;
            Some(d)
        };
        self.cycles[j].push(path.clone());
        let r = if c + 1 < self.lengths[j].len() {
            let start = (0..self.m).find(|&v| !self.in_factor[v]).unwrap();
            self.in_factor[start] = true;
            let r = self.place(j, c + 1, &mut vec![start]);
            self.in_factor[start] = false;
            r
        } else if j + 1 < self.q {
            self.start_factor(j + 1)
        } else {
            Some(true)
        };
        if r == Some(true) {
            return r;
        }
        self.cycles[j].pop();
        match closing_mark {
            None => self.plus_inf[last % self.q] = false,
            Some(d) => self.used_diff[d] = false,
        }
        r
    }

    fn start_factor(&mut self, j: usize) -> Option<bool> {
        let saved = std::mem::replace(&mut self.in_factor, vec![false; self.m]);
        self.in_factor[j] = true;
        let r = self.place(j, 0, &mut vec![self.m, j]);
        if r != Some(true) {
            self.in_factor = saved;
        }
        r
    }
}

/// Randomized search for `q` starters of type `ty` that together contain
/// every base-`q` difference once. Starter `j` sends infinity to `j`.
pub fn starter_search(
    ty: &CycleType,
    q: usize,
    node_budget: u64,
    seed: u64,
) -> SearchResult<StarterSet> {
    let n = ty.order();
    let mut log = SearchLog {
        kernel: format!("starter-q{q}"),
        ..Default::default()
    };
    if n < 3 || q == 0 || (n - 1) % q != 0 {
        return SearchResult::OutOfBudget(log);
    }
    let m = n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_restart = (20 * n as u64 * n as u64).max(2_000);
    let mut spent = 0u64;
    while spent < node_budget {
        // Which cycle carries infinity is chosen per starter and restart.
        let lengths: Vec<Vec<usize>> = (0..q)
            .map(|_| {
                let mut l = ty.lengths().to_vec();
                let k = rng.gen_range(0..l.len());
                l.swap(0, k);
                l[1..].shuffle(&mut rng);
                l
            })
            .collect();
        let mut st = StarterState {
            m,
            q,
            lengths,
            used_diff: vec![false; q * m],
            plus_inf: vec![false; q],
            in_factor: vec![false; m],
            cycles: vec![Vec::new(); q],
            nodes: 0,
            limit: per_restart.min(node_budget - spent),
            rng: &mut rng,
        };
        // The differences with d = 0 never occur.
        for r in 0..q {
            st.used_diff[r * m] = true;
        }
        let r = st.start_factor(0);
        spent += st.nodes;
        if r == Some(true) {
            let starters = st
                .cycles
                .iter()
                .map(|cs| {
                    let cycles = cs
                        .iter()
                        .map(|c| {
                            crate::digraph::DirectedCycle::new_unchecked(
                                c.iter()
                                    .map(|&v| {
                                        if v == m {
                                            Vertex::Infinity
                                        } else {
                                            Vertex::Finite(v)
                                        }
                                    })
                                    .collect(),
                            )
                        })
                        .collect();
                    TwoFactor::new(n, cycles)
                })
                .collect();
            match StarterSet::new(ty.clone(), q, starters) {
                Ok(set) => return SearchResult::Found(set),
                Err(e) => unreachable!("search produced an invalid starter set: {e}"),
            }
        }
    }
    log.nodes = spent;
    SearchResult::OutOfBudget(log)
}

/// Vertices `i * q + x` for `i < k`, `x` in `Z_q`; the group shifts `x`.
struct OrbitSpace {
    q: usize,
    k: usize,
}

impl OrbitSpace {
    fn orbit(&self, u: usize, v: usize) -> usize {
        let (iu, xu) = (u / self.q, u % self.q);
        let (iv, xv) = (v / self.q, v % self.q);
        (iu * self.k + iv) * self.q + (xv + self.q - xu) % self.q
    }

    fn shift(&self, v: usize, d: usize) -> usize {
        v / self.q * self.q + (v % self.q + d) % self.q
    }

    /// A random factor fixed by the group with the lengths of `ty` whose
    /// arc orbits are all unused, marking them used.
    fn invariant_factor(
        &self,
        ty: &CycleType,
        used: &mut [bool],
        rng: &mut ChaCha8Rng,
    ) -> Option<Vec<usize>> {
        let (q, k) = (self.q, self.k);
        for _ in 0..2_000 {
            let mut perm: Vec<usize> = (0..k).collect();
            perm.shuffle(rng);
            let shifts: Vec<usize> = (0..k).map(|_| rng.gen_range(0..q)).collect();
            let succ: Vec<usize> = (0..q * k)
                .map(|v| perm[v / q] * q + (v % q + shifts[v / q]) % q)
                .collect();
            if (0..q * k).any(|v| succ[v] == v || used[self.orbit(v, succ[v])]) {
                continue;
            }
            let arcs: Vec<(usize, usize)> = (0..q * k).map(|v| (v, succ[v])).collect();
            let f = TwoFactor::from_arcs(q * k, &arcs).ok()?;
            if crate::digraph::cycle_type_of(&f).ok().as_ref() != Some(ty) {
                continue;
            }
            for i in 0..k {
                used[self.orbit(i * q, succ[i * q])] = true;
            }
            return Some(succ);
        }
        None
    }
}

struct OrbitDfs<'a> {
    space: OrbitSpace,
    lengths: Vec<Vec<usize>>,
    used: Vec<bool>,
    in_factor: Vec<bool>,
    cycles: Vec<Vec<Vec<usize>>>,
    nodes: u64,
    limit: u64,
    rng: &'a mut ChaCha8Rng,
}

impl OrbitDfs<'_> {
    fn place(&mut self, j: usize, c: usize, path: &mut Vec<usize>) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        let len = self.lengths[j][c];
        if path.len() == len {
            return self.next_cycle(j, c, path);
        }
        let last = *path.last().unwrap();
        let first = path[0];
        let closing = path.len() + 1 == len;
        let n = self.in_factor.len();
        let mut cands: Vec<usize> = (0..n)
            .filter(|&w| !self.in_factor[w] && !self.used[self.space.orbit(last, w)])
            .collect();
        cands.shuffle(self.rng);
        for w in cands {
            let o = self.space.orbit(last, w);
            if closing {
                let o2 = self.space.orbit(w, first);
                if o2 == o || self.used[o2] {
                    continue;
                }
            }
            self.used[o] = true;
            self.in_factor[w] = true;
            path.push(w);
            match self.place(j, c, path) {
                Some(false) => {}
                other => return other,
            }
            path.pop();
            self.in_factor[w] = false;
            self.used[o] = false;
        }
        Some(false)
    }

    fn next_cycle(&mut self, j: usize, c: usize, path: &mut Vec<usize>) -> Option<bool> {
        let close = self.space.orbit(*path.last().unwrap(), path[0]);
        self.used[close] = true;
        self.cycles[j].push(path.clone());
        let r = if c + 1 < self.lengths[j].len() {
            let start = (0..self.in_factor.len())
                .find(|&v| !self.in_factor[v])
                .unwrap();
            self.in_factor[start] = true;
            let r = self.place(j, c + 1, &mut vec![start]);
            self.in_factor[start] = false;
            r
        } else if j + 1 < self.lengths.len() {
            let fresh = vec![false; self.in_factor.len()];
            let saved = std::mem::replace(&mut self.in_factor, fresh);
            self.in_factor[0] = true;
            let r = self.place(j + 1, 0, &mut vec![0]);
            if r != Some(true) {
                self.in_factor = saved;
            }
            r
        } else {
            Some(true)
        };
        if r != Some(true) {
            self.cycles[j].pop();
            self.used[close] = false;
        }
        r
    }
}

/// Randomized search for a decomposition invariant under a fixed-point-free
/// cyclic group of order `q`. The `n - 1` factors are `(n - 1) mod q`
/// invariant factors plus the orbits of `(n - 1) / q` starters.
pub fn orbit_search(
    ty: &CycleType,
    q: usize,
    node_budget: u64,
    seed: u64,
) -> SearchResult<Decomposition> {
    let n = ty.order();
    let mut log = SearchLog {
        kernel: format!("orbit-q{q}"),
        ..Default::default()
    };
    if q < 2 || n % q != 0 || n < 3 {
        return SearchResult::OutOfBudget(log);
    }
    let space = OrbitSpace { q, k: n / q };
    let (starters, fixed) = ((n - 1) / q, (n - 1) % q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_restart = (50 * n as u64 * n as u64).max(5_000);
    let mut spent = 0u64;
    while spent < node_budget {
        let mut used = vec![false; n * space.k];
        for i in 0..space.k {
            used[(i * space.k + i) * q] = true;
        }
        let mut invariant = Vec::new();
        for _ in 0..fixed {
            match space.invariant_factor(ty, &mut used, &mut rng) {
                Some(f) => invariant.push(f),
                None => break,
            }
        }
        spent += 1;
        if invariant.len() < fixed {
            continue;
        }
        if starters == 0 {
            let factors = invariant.iter().map(|s| succ_factor(s)).collect();
            return SearchResult::Found(Decomposition::new(n, factors));
        }
        let lengths: Vec<Vec<usize>> = (0..starters)
            .map(|_| {
                let mut l = ty.lengths().to_vec();
                l.shuffle(&mut rng);
                l
            })
            .collect();
        let mut dfs = OrbitDfs {
            space: OrbitSpace { q, k: space.k },
            lengths,
            used,
            in_factor: vec![false; n],
            cycles: vec![Vec::new(); starters],
            nodes: 0,
            limit: per_restart.min(node_budget - spent.min(node_budget)),
            rng: &mut rng,
        };
        dfs.in_factor[0] = true;
        let r = dfs.place(0, 0, &mut vec![0]);
        spent += dfs.nodes;
        if r == Some(true) {
            let mut factors: Vec<TwoFactor> = invariant.iter().map(|s| succ_factor(s)).collect();
            for cs in &dfs.cycles {
                for d in 0..q {
                    let shifted: Vec<Vec<usize>> = cs
                        .iter()
                        .map(|c| c.iter().map(|&v| space.shift(v, d)).collect())
                        .collect();
                    factors.push(
                        TwoFactor::from_index_cycles(n, &shifted)
                            .expect("starter cycles are disjoint"),
                    );
                }
            }
            return SearchResult::Found(Decomposition::new(n, factors));
        }
    }
    log.nodes = spent;
    SearchResult::OutOfBudget(log)
}

fn succ_factor(succ: &[usize]) -> TwoFactor {
    let arcs: Vec<(usize, usize)> = succ.iter().enumerate().map(|(u, &v)| (u, v)).collect();
    TwoFactor::from_arcs(succ.len(), &arcs).expect("successor maps are permutations")
}

struct Colouring {
    n: usize,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    colour: Vec<Vec<usize>>,
    target: Vec<usize>,
    cost: Vec<i64>,
    seen: Vec<usize>,
    stamp: usize,
    hist: Vec<i64>,
}

impl Colouring {
    fn factor_cost(&mut self, f: usize) -> i64 {
        self.stamp += 1;
        for h in self.hist.iter_mut() {
            *h = 0;
        }
        for s in 0..self.n {
            if self.seen[s] == self.stamp {
                continue;
            }
            let mut len = 0;
            let mut v = s;
            while self.seen[v] != self.stamp {
                self.seen[v] = self.stamp;
                v = self.succ[f][v];
                len += 1;
            }
            self.hist[len] += 1;
        }
        self.hist
            .iter()
            .zip(&self.target)
            .map(|(&h, &t)| (h - t as i64).abs())
            .sum()
    }

    /// Swaps colours `f` and `g` on the chain through `u`; returns the
    /// tails whose out-arcs were swapped.
    fn swap_chain(&mut self, f: usize, g: usize, u: usize) -> Vec<usize> {
        let mut chain = Vec::new();
        let mut x = u;
        loop {
            chain.push(x);
            x = self.pred[f][self.succ[g][x]];
            if x == u {
                break;
            }
        }
        if chain.len() < self.n {
            self.apply(f, g, &chain);
        }
        chain
    }

    fn apply(&mut self, f: usize, g: usize, chain: &[usize]) {
        for &x in chain {
            let (a, b) = (self.succ[f][x], self.succ[g][x]);
            self.set(f, x, b);
            self.set(g, x, a);
        }
    }

    fn set(&mut self, f: usize, x: usize, v: usize) {
        self.succ[f][x] = v;
        self.pred[f][v] = x;
        self.colour[x][v] = f;
    }

    /// Colours `f` in which the out-arcs of `u` and `w` can be exchanged
    /// starting from colour `f0`, or `None` if the chain runs into a loop.
    fn vertex_chain(&self, u: usize, w: usize, f0: usize) -> Option<Vec<usize>> {
        let mut chain = Vec::new();
        let mut f = f0;
        loop {
            let v = self.succ[f][u];
            if v == w {
                return None;
            }
            chain.push(f);
            f = self.colour[w][v];
            if f == f0 {
                return Some(chain);
            }
        }
    }

    /// As [`Self::vertex_chain`] for the in-arcs of `u` and `w`.
    fn vertex_chain_in(&self, u: usize, w: usize, f0: usize) -> Option<Vec<usize>> {
        let mut chain = Vec::new();
        let mut f = f0;
        loop {
            let a = self.pred[f][u];
            if a == w {
                return None;
            }
            chain.push(f);
            f = self.colour[a][w];
            if f == f0 {
                return Some(chain);
            }
        }
    }

    fn exchange_in(&mut self, u: usize, w: usize, chain: &[usize]) {
        for &f in chain {
            let (a, b) = (self.pred[f][u], self.pred[f][w]);
            self.set(f, a, w);
            self.set(f, b, u);
        }
    }

    fn exchange(&mut self, u: usize, w: usize, chain: &[usize]) {
        for &f in chain {
            let (a, b) = (self.succ[f][u], self.succ[f][w]);
            self.set(f, u, b);
            self.set(f, w, a);
        }
    }
}

/// A starting colouring in the same sign class as the target.
///
/// Swaps along two-colour chains never change the product of the signs of
/// the colour classes. For even `n` that product is `(-1)^k` for a target
/// with `k` cycles, while the cyclic colouring gives `(-1)^(n/2)`; on a
/// mismatch the start comes from a 1-rotational starter with the other sign.
fn initial_colouring(ty: &CycleType, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let n = ty.order();
    let k = ty.lengths().len();
    if n % 2 == 0 && k % 2 != (n / 2) % 2 {
        let mut helpers = Vec::new();
        if n >= 4 {
            helpers.push([vec![4], vec![2; (n - 4) / 2]].concat());
        }
        if n >= 6 {
            helpers.push([vec![3, 3], vec![2; (n - 6) / 2]].concat());
        }
        for lengths in helpers {
            let helper = CycleType::new(lengths).expect("helper types are valid");
            if let SearchResult::Found(set) = starter_search(&helper, 1, 200_000, rng.gen()) {
                let d = crate::rotational::expand_starters(&set);
                return d
                    .factors
                    .iter()
                    .map(|f| {
                        let mut row = vec![0; n];
                        for a in f.arcs() {
                            let (u, v) = a.indices(n);
                            row[u] = v;
                        }
                        row
                    })
                    .collect();
            }
        }
    }
    (1..n)
        .map(|f| (0..n).map(|u| (u + f) % n).collect())
        .collect()
}

/// Local search for a decomposition of `K*_n` into factors of type `ty`.
///
/// Starts from a randomly relabelled cyclic colouring and repeatedly swaps
/// two colours along one alternating chain, accepting worse states with a
/// probability that decays with the cost increase.
pub fn anneal(ty: &CycleType, step_budget: u64, seed: u64) -> SearchResult<Decomposition> {
    let n = ty.order();
    let log = |steps| SearchLog {
        kernel: "anneal".into(),
        nodes: steps,
        candidates: 0,
    };
    if n < 3 {
        return SearchResult::OutOfBudget(log(0));
    }
    let nf = n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = initial_colouring(ty, &mut rng);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut succ = vec![vec![0; n]; nf];
    let mut pred = vec![vec![0; n]; nf];
    let mut colour = vec![vec![usize::MAX; n]; n];
    for (f, row) in start.iter().enumerate() {
        for u in 0..n {
            let (a, b) = (perm[u], perm[row[u]]);
            succ[f][a] = b;
            pred[f][b] = a;
            colour[a][b] = f;
        }
    }
    let mut target = vec![0; n + 1];
    for &m in ty.lengths() {
        target[m] += 1;
    }
    let mut st = Colouring {
        n,
        succ,
        pred,
        colour,
        target,
        cost: vec![0; nf],
        seen: vec![0; n],
        stamp: 0,
        hist: vec![0; n + 1],
    };
    for f in 0..nf {
        st.cost[f] = st.factor_cost(f);
    }
    let mut total: i64 = st.cost.iter().sum();
    let temperature = 0.35f64;
    let mut steps = 0u64;
    while total > 0 {
        if steps >= step_budget {
            return SearchResult::OutOfBudget(log(steps));
        }
        steps += 1;
        if rng.gen_bool(0.5) {
            // Prefer moving a colour that is still wrong.
            let f = loop {
                let f = rng.gen_range(0..nf);
                if st.cost[f] > 0 || rng.gen_bool(0.2) {
                    break f;
                }
            };
            let mut g = rng.gen_range(0..nf - 1);
            if g >= f {
                g += 1;
            }
            let u = rng.gen_range(0..n);
            let chain = st.swap_chain(f, g, u);
            if chain.len() == n {
                continue;
            }
            let (cf, cg) = (st.factor_cost(f), st.factor_cost(g));
            let delta = cf + cg - st.cost[f] - st.cost[g];
            if delta <= 0 || rng.gen_bool((-(delta as f64) / temperature).exp()) {
                st.cost[f] = cf;
                st.cost[g] = cg;
                total += delta;
            } else {
                // The swap is an involution on the same chain.
                st.apply(f, g, &chain);
            }
        } else {
            let u = rng.gen_range(0..n);
            let mut w = rng.gen_range(0..n - 1);
            if w >= u {
                w += 1;
            }
            let f0 = loop {
                let f = rng.gen_range(0..nf);
                if st.cost[f] > 0 || rng.gen_bool(0.2) {
                    break f;
                }
            };
            let incoming = rng.gen_bool(0.5);
            let chain = if incoming {
                st.vertex_chain_in(u, w, f0)
            } else {
                st.vertex_chain(u, w, f0)
            };
            let Some(chain) = chain else {
                continue;
            };
            if incoming {
                st.exchange_in(u, w, &chain);
            } else {
                st.exchange(u, w, &chain);
            }
            let new: Vec<i64> = chain.iter().map(|&f| st.factor_cost(f)).collect();
            let delta: i64 = chain.iter().zip(&new).map(|(&f, &c)| c - st.cost[f]).sum();
            if delta <= 0 || rng.gen_bool((-(delta as f64) / temperature).exp()) {
                for (&f, &c) in chain.iter().zip(&new) {
                    st.cost[f] = c;
                }
                total += delta;
            } else if incoming {
                st.exchange_in(u, w, &chain);
            } else {
                st.exchange(u, w, &chain);
            }
        }
    }
    let factors = (0..nf)
        .map(|f| {
            let arcs: Vec<_> = (0..n).map(|u| (u, st.succ[f][u])).collect();
            TwoFactor::from_arcs(n, &arcs).expect("colour classes are permutations")
        })
        .collect();
    SearchResult::Found(Decomposition::new(n, factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_decomposition;

    fn ty(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn candidate_counts() {
        // 3!/3 * 2 directed triangles per split, 10 splits.
        assert_eq!(all_factors(&ty("3,3")).len(), 40);
        assert_eq!(all_factors(&ty("6")).len(), 120);
        assert_eq!(all_factors(&ty("2,2")).len(), 3);
    }

    #[test]
    fn exact_cover_small() {
        for t in ["3,3", "4", "6"] {
            assert!(
                matches!(
                    exact_cover(&ty(t), 1_000_000, 0),
                    SearchResult::Exhausted(_)
                ),
                "{t}"
            );
        }
        for t in ["2,3", "5", "2,2,2", "3,4"] {
            match exact_cover(&ty(t), 1_000_000, 0) {
                SearchResult::Found(d) => assert!(verify_decomposition(&d, &ty(t)).ok),
                other => panic!("{t}: {other:?}"),
            }
        }
    }

    #[test]
    fn starters_small() {
        for (t, q) in [
            ("4,5", 1),
            ("2,3,4", 1),
            ("3,3,3", 1),
            ("5,5", 3),
            ("10", 3),
        ] {
            match starter_search(&ty(t), q, 5_000_000, 1) {
                SearchResult::Found(set) => {
                    let d = crate::rotational::expand_starters(&set);
                    assert!(verify_decomposition(&d, &ty(t)).ok, "{t}");
                }
                other => panic!("{t}: {other:?}"),
            }
        }
    }

    #[test]
    fn anneal_small() {
        for t in ["4,4", "8", "2,2,4"] {
            match anneal(&ty(t), 5_000_000, 3) {
                SearchResult::Found(d) => assert!(verify_decomposition(&d, &ty(t)).ok, "{t}"),
                other => panic!("{t}: {other:?}"),
            }
        }
    }
}
