//! Building decompositions of larger orders out of smaller ones.
//!
//! Two engines live here. [`bipartite_double`] joins two solutions of equal
//! order whose cycles are all even. [`join_extend`] joins a solution on `s`
//! vertices with a structured decomposition of `K*_t`, `s < t`, threading the
//! `s` old vertices through paths that rotate around `Z_t`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circulant::{c2_factorization, ct_factorization, difference_factorization};
use crate::digraph::{complete_symmetric_arcs, ConnectionSet, CycleType, Decomposition, TwoFactor};
use crate::error::{Error, Result};
use crate::orthogonal::{
    orthogonal_digons, orthogonal_paths, special_22_t, special_3_t, Component,
};
use crate::verify::verify_decomposition;

fn certify(d: Decomposition, ty: &CycleType) -> Result<Decomposition> {
    let report = verify_decomposition(&d, ty);
    if report.ok {
        Ok(d)
    } else {
        Err(Error::NotCertified(report))
    }
}

fn index_arcs(f: &TwoFactor) -> Vec<(usize, usize)> {
    f.arcs().map(|a| a.indices(f.n)).collect()
}

/// Doubles two solutions of the same order `n` with all cycle lengths even
/// into a solution on `2n` vertices whose type is the union of both types.
///
/// The first solution lives on `0..n`, the second on `n..2n`. The remaining
/// arcs between the halves are covered by the `n` rotations of one factor
/// whose cycles alternate between the halves.
pub fn bipartite_double(
    sol_x: &Decomposition,
    ty_x: &CycleType,
    sol_y: &Decomposition,
    ty_y: &CycleType,
) -> Result<Decomposition> {
    if let Some(&m) = ty_x
        .lengths()
        .iter()
        .chain(ty_y.lengths())
        .find(|&&m| m % 2 == 1)
    {
        return Err(Error::OddLengthInBipartite(format!(
            "cycle length {m} in {ty_x} + {ty_y}"
        )));
    }
    let n = ty_x.order();
    if ty_y.order() != n || sol_x.n != n || sol_y.n != n {
        return Err(Error::SizeMismatch(format!(
            "halves of order {} and {} cannot be doubled",
            sol_x.n, sol_y.n
        )));
    }
    for (d, ty) in [(sol_x, ty_x), (sol_y, ty_y)] {
        let report = verify_decomposition(d, ty);
        if !report.ok {
            return Err(Error::NotCertified(report));
        }
    }
    let ty = ty_x.with(ty_y.lengths());
    let mut factors = Vec::with_capacity(2 * n - 1);
    for (fx, fy) in sol_x.factors.iter().zip(&sol_y.factors) {
        let mut arcs = index_arcs(fx);
        arcs.extend(index_arcs(fy).into_iter().map(|(a, b)| (a + n, b + n)));
        factors.push(TwoFactor::from_arcs(2 * n, &arcs)?);
    }
    let mut alternating = Vec::with_capacity(2 * n);
    let mut next = 0;
    for &m in ty.lengths() {
        let half = m / 2;
        let cycle: Vec<usize> = (0..half).flat_map(|i| [next + i, n + next + i]).collect();
        for i in 0..m {
            alternating.push((cycle[i], cycle[(i + 1) % m]));
        }
        next += half;
    }
    let shift = |v: usize, j: usize| if v < n { v } else { n + (v - n + j) % n };
    for j in 0..n {
        let arcs: Vec<_> = alternating
            .iter()
            .map(|&(a, b)| (shift(a, j), shift(b, j)))
            .collect();
        factors.push(TwoFactor::from_arcs(2 * n, &arcs)?);
    }
    certify(Decomposition::new(2 * n, factors), &ty)
}

/// How each cycle of the joined type splits between the `s` old vertices and
/// the `t` new ones: cycle `i` of length `m_i = 2 s_i + t_i` meets the old
/// part in `s_i` vertices and the new part in `s_i + t_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub lengths: Vec<usize>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

impl SplitAssignment {
    pub fn new(lengths: Vec<usize>, s: Vec<usize>, t: Vec<usize>) -> Result<Self> {
        let a = SplitAssignment { lengths, s, t };
        if a.s.len() != a.lengths.len() || a.t.len() != a.lengths.len() {
            return Err(Error::SizeMismatch("split vectors differ in length".into()));
        }
        for i in 0..a.lengths.len() {
            if a.lengths[i] != 2 * a.s[i] + a.t[i] {
                return Err(Error::ConditionFailed {
                    condition: "(2c) m_i = 2 s_i + t_i".into(),
                    detail: format!("cycle {i}: {} != 2*{} + {}", a.lengths[i], a.s[i], a.t[i]),
                });
            }
        }
        Ok(a)
    }

    pub fn s_total(&self) -> usize {
        self.s.iter().sum()
    }

    pub fn t_total(&self) -> usize {
        self.s.iter().zip(&self.t).map(|(a, b)| a + b).sum()
    }

    fn expected(&self, i: usize) -> Shape2 {
        if self.t[i] == self.lengths[i] {
            Shape2::Cycle(self.lengths[i])
        } else {
            Shape2::Path(self.t[i])
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Shape2 {
    Path(usize),
    Cycle(usize),
}

fn shape_of(c: &Component) -> Shape2 {
    match c {
        Component::Path(v) => Shape2::Path(v.len() - 1),
        Component::Cycle(v) => Shape2::Cycle(v.len()),
    }
}

fn condition(name: &str, detail: String) -> Error {
    Error::ConditionFailed {
        condition: name.to_string(),
        detail,
    }
}

/// Joins a solution on `s` vertices with a decomposition of `K*_t` into
/// `s - 1` factors `dprime` and `t` subdigraphs `family[j]`, each the image
/// of `family[0]` under the rotation by `j` up to rerouting of its paths.
///
/// `family[j][i]` is the piece of cycle `i` inside the new part. The output
/// lives on `0..s` (old) and `s..s+t` (new) and has `s + t - 1` factors.
pub fn join_extend(
    sol_s: &Decomposition,
    ty_s: &CycleType,
    dprime: &[TwoFactor],
    family: &[Vec<Component>],
    assign: &SplitAssignment,
) -> Result<Decomposition> {
    let s = sol_s.n;
    let t = family.len();
    let k = assign.lengths.len();
    let report = verify_decomposition(sol_s, ty_s);
    if !report.ok || s != ty_s.order() {
        return Err(condition("(1) base solution", report.to_string()));
    }
    if s >= t {
        return Err(Error::HypothesisViolated(format!(
            "need s < t, got s = {s}, t = {t}"
        )));
    }
    if assign.s_total() != s {
        return Err(condition(
            "(2b) sum of s_i",
            format!("{} != {s}", assign.s_total()),
        ));
    }
    if assign.t_total() != t {
        return Err(condition(
            "vertex count",
            format!("sum of s_i + t_i is {} != {t}", assign.t_total()),
        ));
    }
    let mut old_lengths: Vec<usize> = ty_s.lengths().to_vec();
    let mut new_lengths = assign.lengths.clone();
    for m in &old_lengths {
        let pos = new_lengths.iter().position(|x| x == m).ok_or_else(|| {
            condition(
                "(2c) cycle lengths",
                format!("{ty_s} is not contained in {:?}", assign.lengths),
            )
        })?;
        new_lengths.remove(pos);
    }
    old_lengths.extend(&new_lengths);
    let ty = CycleType::new(old_lengths)?;
    let ty_t = CycleType::new(new_lengths)?;
    if dprime.len() != s - 1 {
        return Err(condition(
            "(2a) complement factors",
            format!("{} factors, need {}", dprime.len(), s - 1),
        ));
    }
    for (i, f) in dprime.iter().enumerate() {
        let r = crate::verify::verify_two_factor(f, t, &ty_t);
        if !r.ok {
            return Err(condition(
                "(2a) complement factors",
                format!("factor {i}: {r}"),
            ));
        }
    }
    check_family(t, dprime, family, assign)?;

    // Threading the old vertices through the paths of family[0].
    let y = |v: usize| s + v;
    let h0 = &family[0];
    let mut used_x = 0usize;
    let mut used_y: BTreeSet<usize> = BTreeSet::new();
    let mut f0: Vec<(usize, usize)> = Vec::with_capacity(s + t);
    for i in 0..k {
        let reserved: BTreeSet<usize> = h0[i + 1..]
            .iter()
            .chain(if assign.t[i] > 0 { &h0[i..=i] } else { &[] })
            .flat_map(|c| c.vertices().to_vec())
            .collect();
        let fresh_y = |count: usize, used_y: &mut BTreeSet<usize>| -> Result<Vec<usize>> {
            let picked: Vec<usize> = (0..t)
                .filter(|v| !used_y.contains(v) && !reserved.contains(v))
                .take(count)
                .collect();
            if picked.len() < count {
                return Err(condition(
                    "vertex count",
                    format!("cycle {i} ran out of new vertices"),
                ));
            }
            used_y.extend(&picked);
            Ok(picked)
        };
        let si = assign.s[i];
        let us: Vec<usize> = (used_x..used_x + si).collect();
        used_x += si;
        let cycle: Vec<usize> = match &h0[i] {
            Component::Cycle(v) => {
                used_y.extend(v);
                v.iter().map(|&x| y(x)).collect()
            }
            Component::Path(_) if assign.t[i] == 0 => {
                let vs = fresh_y(si, &mut used_y)?;
                us.iter().zip(&vs).flat_map(|(&u, &v)| [u, y(v)]).collect()
            }
            Component::Path(p) => {
                used_y.extend(p);
                let vs = fresh_y(si - 1, &mut used_y)?;
                let mut c: Vec<usize> = p.iter().map(|&x| y(x)).collect();
                c.push(us[0]);
                for (j, &v) in vs.iter().enumerate() {
                    c.push(y(v));
                    c.push(us[j + 1]);
                }
                c
            }
        };
        debug_assert_eq!(cycle.len(), assign.lengths[i]);
        for j in 0..cycle.len() {
            f0.push((cycle[j], cycle[(j + 1) % cycle.len()]));
        }
    }
    let mixed: Vec<(usize, usize)> = f0
        .iter()
        .copied()
        .filter(|&(a, b)| (a < s) != (b < s))
        .collect();
    let rot = |v: usize, j: usize| if v < s { v } else { s + (v - s + j) % t };

    let mut factors = Vec::with_capacity(s + t - 1);
    for (j, h) in family.iter().enumerate() {
        let mut arcs: Vec<_> = mixed.iter().map(|&(a, b)| (rot(a, j), rot(b, j))).collect();
        for c in h {
            arcs.extend(c.arcs().into_iter().map(|(a, b)| (y(a), y(b))));
        }
        factors.push(TwoFactor::from_arcs(s + t, &arcs)?);
    }
    for (fs, ft) in sol_s.factors.iter().zip(dprime) {
        let mut arcs = index_arcs(fs);
        arcs.extend(index_arcs(ft).into_iter().map(|(a, b)| (y(a), y(b))));
        factors.push(TwoFactor::from_arcs(s + t, &arcs)?);
    }
    certify(Decomposition::new(s + t, factors), &ty)
}

fn check_family(
    t: usize,
    dprime: &[TwoFactor],
    family: &[Vec<Component>],
    assign: &SplitAssignment,
) -> Result<()> {
    let k = assign.lengths.len();
    let name = "(2d) rotating family";
    let rot = |v: usize, j: usize| (v + j) % t;
    let h0 = &family[0];
    let v0: BTreeSet<usize> = h0.iter().flat_map(|c| c.vertices().to_vec()).collect();
    for (j, h) in family.iter().enumerate() {
        if h.len() != k {
            return Err(condition(
                name,
                format!("H_{j} has {} pieces, need {k}", h.len()),
            ));
        }
        let vj: BTreeSet<usize> = h.iter().flat_map(|c| c.vertices().to_vec()).collect();
        let want: BTreeSet<usize> = v0.iter().map(|&v| rot(v, j)).collect();
        if vj != want {
            return Err(condition(
                name,
                format!("V(H_{j}) is not the rotation of V(H_0) by {j}"),
            ));
        }
        let count: usize = h.iter().map(|c| c.vertices().len()).sum();
        if count != vj.len() {
            return Err(condition(name, format!("pieces of H_{j} overlap")));
        }
        for i in 0..k {
            if shape_of(&h[i]) != assign.expected(i) {
                return Err(condition(
                    name,
                    format!(
                        "H_{j} piece {i} is {:?}, need {:?}",
                        shape_of(&h[i]),
                        assign.expected(i)
                    ),
                ));
            }
            if let (Component::Path(p), Component::Path(q)) = (&h0[i], &h[i]) {
                if q[0] != rot(p[0], j) || q[q.len() - 1] != rot(p[p.len() - 1], j) {
                    return Err(condition(
                        name,
                        format!("H_{j} piece {i} does not run between the rotated endpoints"),
                    ));
                }
            }
        }
    }
    let mut remaining = complete_symmetric_arcs(t)?;
    let all_arcs = dprime
        .iter()
        .flat_map(index_arcs)
        .chain(family.iter().flatten().flat_map(|c| c.arcs()));
    for a in all_arcs {
        if !remaining.remove(&a) {
            return Err(condition(
                name,
                format!("arc {a:?} of K*_{t} covered twice"),
            ));
        }
    }
    if let Some(a) = remaining.iter().next() {
        return Err(condition(name, format!("arc {a:?} of K*_{t} not covered")));
    }
    Ok(())
}

/// Joins a solution on `s` vertices with a circulant split of `K*_t`: the
/// `s - 1` factors of `Circ(t; Z_t^* - S)` and the rotations of one
/// `S`-orthogonal subdigraph whose pieces are listed per cycle in `pieces`.
pub fn join_extend_circulant(
    sol_s: &Decomposition,
    ty_s: &CycleType,
    set: &ConnectionSet,
    pieces: &[Component],
    complement: &[TwoFactor],
    assign: &SplitAssignment,
) -> Result<Decomposition> {
    let t = set.modulus();
    let s = sol_s.n;
    if set.len() + s != t {
        return Err(Error::SizeMismatch(format!(
            "|S| = {} but t - s = {}",
            set.len(),
            t as i64 - s as i64
        )));
    }
    let family: Vec<Vec<Component>> = (0..t)
        .map(|j| pieces.iter().map(|c| c.rotated(j, t)).collect())
        .collect();
    join_extend(sol_s, ty_s, complement, &family, assign)
}

/// The hand-made solution on 8 vertices with two digons and a 4-cycle per
/// factor, joining `K*_2` with a split of `K*_6`.
pub fn special_224() -> Result<Decomposition> {
    let base = Decomposition::new(2, vec![TwoFactor::from_index_cycles(2, &[vec![0, 1]])?]);
    let ty_s = CycleType::new(vec![2])?;
    let dprime = vec![TwoFactor::from_index_cycles(
        6,
        &[vec![1, 4], vec![0, 5, 2, 3]],
    )?];
    let h = |p: usize, q: usize, c: [usize; 4]| {
        vec![
            Component::Path(vec![p]),
            Component::Path(vec![q]),
            Component::Cycle(c.to_vec()),
        ]
    };
    let h2 = h(2, 3, [4, 5, 1, 0]);
    let mut family = vec![h(0, 1, [2, 5, 3, 4]), h(1, 2, [3, 5, 4, 0]), h2.clone()];
    for j in 1..=3 {
        family.push(h2.iter().map(|c| c.rotated(j, 6)).collect());
    }
    let assign = SplitAssignment::new(vec![2, 2, 4], vec![1, 1, 0], vec![0, 0, 4])?;
    join_extend(&base, &ty_s, &dprime, &family, &assign)
}

/// Whether a base of type `ty` can be extended by one cycle of length `t`.
pub fn long_cycle_admissible(ty: &CycleType, t: usize) -> bool {
    let s = ty.order();
    if t <= s || ty.odd_count() + s > 2 * (t / 2) {
        return false;
    }
    if t % 2 == 0 && s == 4 {
        return ty.lengths() == [2, 2] && t >= 8;
    }
    true
}

/// Whether a base of type `ty` can be extended by `t/2` digons.
pub fn digons_admissible(ty: &CycleType, t: usize) -> bool {
    let s = ty.order();
    t % 2 == 0 && t > s && ty.odd_count() + s <= t
}

/// Per-cycle pieces of the base cycles: a 1-path for each odd cycle, taken
/// in order from `paths`, and a free vertex for each even one.
fn base_pieces(
    ty: &CycleType,
    paths: &mut Vec<Component>,
    free: &mut Vec<usize>,
) -> Result<Vec<Component>> {
    ty.lengths()
        .iter()
        .map(|&m| {
            if m % 2 == 1 {
                paths
                    .pop()
                    .ok_or_else(|| condition("piece count", "too few 1-paths".into()))
            } else if free.is_empty() {
                Err(condition("piece count", "too few free vertices".into()))
            } else {
                Ok(Component::Path(vec![free.remove(0)]))
            }
        })
        .collect()
}

/// Extends a solution of type `ty` by one cycle of length `t`.
///
/// Needs `t > s` and `a <= 2⌊t/2⌋ - s` with `a` the number of odd lengths.
/// Bases `(3)` and `(2,2)` with even `t` use dedicated pieces; `(2,2,6)` is
/// not reachable this way.
pub fn extend_by_long_cycle(
    base: &Decomposition,
    ty: &CycleType,
    t: usize,
) -> Result<Decomposition> {
    let s = ty.order();
    let a = ty.odd_count();
    if t <= s || a + s > 2 * (t / 2) {
        return Err(Error::HypothesisViolated(format!(
            "extending {ty} by {t} needs t > {s} and {a} <= {}",
            (2 * (t / 2)).saturating_sub(s)
        )));
    }
    let r = (s + a) / 2;
    let mut lengths = ty.lengths().to_vec();
    lengths.push(t);
    let mut sv: Vec<usize> = ty.lengths().iter().map(|m| m / 2).collect();
    let mut tv: Vec<usize> = ty.lengths().iter().map(|m| m % 2).collect();
    sv.push(r);
    tv.push(t - 2 * r);
    let assign = SplitAssignment::new(lengths, sv, tv)?;

    if t % 2 == 0 && s == 3 {
        let (h, d) = special_3_t(t)?;
        let complement = difference_factorization(&d)?;
        let pieces = vec![h.components[0].clone(), h.components[1].clone()];
        return join_extend_circulant(base, ty, &h.set, &pieces, &complement, &assign);
    }
    if t % 2 == 0 && s == 4 {
        if ty.lengths() != [2, 2] {
            return Err(Error::HypothesisViolated(format!(
                "base {ty} of order 4 with even t"
            )));
        }
        let (h, d) = special_22_t(t)?;
        let complement = difference_factorization(&d)?;
        return join_extend_circulant(base, ty, &h.set, &h.components, &complement, &assign);
    }
    let (d, complement) = ct_factorization(t, s)?;
    let h = orthogonal_paths(s, t, a)?;
    debug_assert_eq!(h.set, d.complement());
    let mut paths: Vec<Component> = h.components[..a].iter().rev().cloned().collect();
    let long = h.components[a].clone();
    let mut free = h.free_vertices();
    let mut pieces = base_pieces(ty, &mut paths, &mut free)?;
    pieces.push(long);
    join_extend_circulant(base, ty, &h.set, &pieces, &complement, &assign)
}

/// Extends a solution of type `ty` by `t/2` digons, `t` even.
pub fn extend_by_digons(base: &Decomposition, ty: &CycleType, t: usize) -> Result<Decomposition> {
    let s = ty.order();
    let a = ty.odd_count();
    if t % 2 == 1 || t <= s || a + s > t {
        return Err(Error::HypothesisViolated(format!(
            "extending {ty} by {t}/2 digons needs even t > {s} and {a} <= {}",
            t.saturating_sub(s)
        )));
    }
    let r = (s + a) / 2;
    let mut lengths = ty.lengths().to_vec();
    let mut sv: Vec<usize> = ty.lengths().iter().map(|m| m / 2).collect();
    let mut tv: Vec<usize> = ty.lengths().iter().map(|m| m % 2).collect();
    for i in 0..t / 2 {
        lengths.push(2);
        sv.push(usize::from(i < r));
        tv.push(if i < r { 0 } else { 2 });
    }
    let assign = SplitAssignment::new(lengths, sv, tv)?;
    let (d, complement) = c2_factorization(t, s)?;
    let h = orthogonal_digons(s, t, a)?;
    debug_assert_eq!(h.set, d.complement());
    let mut paths: Vec<Component> = h
        .components
        .iter()
        .filter(|c| matches!(c, Component::Path(_)))
        .rev()
        .cloned()
        .collect();
    let digons: Vec<Component> = h
        .components
        .iter()
        .filter(|c| matches!(c, Component::Cycle(_)))
        .cloned()
        .collect();
    let mut free = h.free_vertices();
    let mut pieces = base_pieces(ty, &mut paths, &mut free)?;
    for _ in 0..r {
        if free.is_empty() {
            return Err(condition("piece count", "too few free vertices".into()));
        }
        pieces.push(Component::Path(vec![free.remove(0)]));
    }
    pieces.extend(digons);
    join_extend_circulant(base, ty, &h.set, &pieces, &complement, &assign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digon_pair() -> Decomposition {
        Decomposition::new(
            2,
            vec![TwoFactor::from_index_cycles(2, &[vec![0, 1]]).unwrap()],
        )
    }

    fn triangle_pair() -> Decomposition {
        Decomposition::new(
            3,
            vec![
                TwoFactor::from_index_cycles(3, &[vec![0, 1, 2]]).unwrap(),
                TwoFactor::from_index_cycles(3, &[vec![0, 2, 1]]).unwrap(),
            ],
        )
    }

    fn ty(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn doubling_digons() {
        let d22 = special_224().unwrap();
        assert_eq!(d22.factors.len(), 7);
        let two = digon_pair();
        let d = bipartite_double(&two, &ty("2"), &two, &ty("2")).unwrap();
        assert_eq!(d.factors.len(), 3);
        assert!(verify_decomposition(&d, &ty("2,2")).ok);
        let d = bipartite_double(&d22, &ty("2,2,4"), &d22, &ty("2,2,4")).unwrap();
        assert!(verify_decomposition(&d, &ty("2,2,2,2,4,4")).ok);
    }

    #[test]
    fn doubling_rejects_odd_and_mismatch() {
        let two = digon_pair();
        let three = triangle_pair();
        assert!(matches!(
            bipartite_double(&three, &ty("3"), &three, &ty("3")),
            Err(Error::OddLengthInBipartite(_))
        ));
        let d = special_224().unwrap();
        assert!(matches!(
            bipartite_double(&two, &ty("2"), &d, &ty("2,2,4")),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn doubling_keeps_halves_apart() {
        let two = digon_pair();
        let d = bipartite_double(&two, &ty("2"), &two, &ty("2")).unwrap();
        for f in &d.factors[1..] {
            for a in f.arcs() {
                let (u, v) = a.indices(4);
                assert_ne!(u < 2, v < 2, "{a:?} lies inside one half");
            }
        }
    }

    #[test]
    fn special_224_certifies() {
        let d = special_224().unwrap();
        assert!(verify_decomposition(&d, &ty("2,2,4")).ok);
    }

    #[test]
    fn long_cycle_examples() {
        let d = extend_by_long_cycle(&digon_pair(), &ty("2"), 5).unwrap();
        assert!(verify_decomposition(&d, &ty("2,5")).ok);
        let d = extend_by_long_cycle(&triangle_pair(), &ty("3"), 6).unwrap();
        assert!(verify_decomposition(&d, &ty("3,6")).ok);
        let d = extend_by_long_cycle(&triangle_pair(), &ty("3"), 8).unwrap();
        assert!(verify_decomposition(&d, &ty("3,8")).ok);
        assert!(matches!(
            extend_by_long_cycle(&triangle_pair(), &ty("3"), 3),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn long_cycle_on_two_digons() {
        let two = digon_pair();
        let d22 = bipartite_double(&two, &ty("2"), &two, &ty("2")).unwrap();
        for t in [5, 7, 8, 10] {
            let d =
                extend_by_long_cycle(&d22, &ty("2,2"), t).unwrap_or_else(|e| panic!("t={t}: {e}"));
            assert_eq!(d.factors.len(), 3 + t);
        }
    }

    #[test]
    fn digon_extension_examples() {
        let d = extend_by_digons(&triangle_pair(), &ty("3"), 4).unwrap();
        assert!(verify_decomposition(&d, &ty("2,2,3")).ok);
        let d = extend_by_digons(&digon_pair(), &ty("2"), 6).unwrap();
        assert!(verify_decomposition(&d, &ty("2,2,2,2")).ok);
        assert!(extend_by_digons(&digon_pair(), &ty("2"), 2).is_err());
    }

    #[test]
    fn circulant_join_size_mismatch() {
        let set = ConnectionSet::new(5, [2, -2]).unwrap();
        let assign = SplitAssignment::new(vec![2, 5], vec![1, 1], vec![0, 3]).unwrap();
        let err = join_extend_circulant(&digon_pair(), &ty("2"), &set, &[], &[], &assign);
        assert!(matches!(err, Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn join_names_the_broken_condition() {
        let assign = SplitAssignment::new(vec![2, 2, 4], vec![1, 1, 0], vec![0, 0, 4]).unwrap();
        let base = digon_pair();
        let dprime =
            vec![TwoFactor::from_index_cycles(6, &[vec![1, 4], vec![0, 5, 2, 3]]).unwrap()];
        let h = |p: usize, q: usize, c: [usize; 4]| {
            vec![
                Component::Path(vec![p]),
                Component::Path(vec![q]),
                Component::Cycle(c.to_vec()),
            ]
        };
        let family: Vec<_> = (0..6)
            .map(|j| h(j % 6, (j + 1) % 6, [2, 5, 3, 4]))
            .collect();
        match join_extend(&base, &ty("2"), &dprime, &family, &assign) {
            Err(Error::ConditionFailed { condition, .. }) => assert!(condition.starts_with("(2d)")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            SplitAssignment::new(vec![3], vec![1], vec![2]),
            Err(Error::ConditionFailed { .. })
        ));
    }
}
