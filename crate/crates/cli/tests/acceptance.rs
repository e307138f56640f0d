//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use oberwolfach::circulant::{c2_factorization, ct_factorization};
use oberwolfach::orthogonal::{
    digon_connection_set, orthogonal_digons, orthogonal_paths, path_connection_set,
    OrthogonalSubdigraph,
};
use oberwolfach::recursion::{digons_admissible, long_cycle_admissible, special_224};
use oberwolfach::rotational::catalog::{catalog_lookup, catalog_types};
use oberwolfach::solver::trace::replay;
use oberwolfach::solver::{
    brute_force_search, cycle_types, extend_by_digons, extend_by_long_cycle, Nonexistence,
    SearchBudget, Solution, SolveOutcome, Solver, UnknownReason,
};
use oberwolfach::verify::verify_arc_factors;
use oberwolfach::{
    circulant_digraph, verify_decomposition, verify_orthogonal, verify_two_factor, CycleType,
    Decomposition, DirectedCycle, Shape, TwoFactor, Vertex,
};
use oberwolfach_cli::{run, EXIT_OK};

type Outcome = Result<String, String>;

fn ty(s: &str) -> CycleType {
    s.parse().unwrap()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:.1?}, limit {limit:?}"));
    }
    Ok(())
}

fn check_all(failures: Vec<String>, checked: usize, what: &str) -> Outcome {
    if failures.is_empty() {
        Ok(format!("{checked} {what}"))
    } else {
        Err(format!(
            "{} of {checked} {what} failed; first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn certified(sol: &Solution) -> Result<(), String> {
    if !sol.report.ok {
        return Err(format!("{}: report {}", sol.cycle_type, sol.report));
    }
    let again = verify_decomposition(&sol.decomposition, &sol.cycle_type);
    if !again.ok {
        return Err(format!("{}: {again}", sol.cycle_type));
    }
    Ok(())
}

fn small_orders() -> Outcome {
    let start = Instant::now();
    let solver = Solver::new(SearchBudget::default());
    let types = cycle_types(13);
    let exceptions: BTreeSet<CycleType> = [ty("4"), ty("6"), ty("3,3")].into_iter().collect();
    let failures: Vec<String> = types
        .par_iter()
        .filter_map(|t| match solver.solve(t) {
            SolveOutcome::Solved(sol) if !exceptions.contains(t) => certified(&sol).err(),
            SolveOutcome::Nonexistent(_) if exceptions.contains(t) => None,
            other => Some(format!("{t}: {}", other.verdict())),
        })
        .collect();

    let mut out = Vec::new();
    let code = run(
        ["opstar", "batch", "--max-n", "13"],
        &mut out,
        &mut Vec::new(),
    );
    let csv = String::from_utf8(out).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    let unknown = rows.iter().filter(|r| r.contains(",unknown,")).count();
    let nonexistent = rows.iter().filter(|r| r.contains(",nonexistent,")).count();
    if code != EXIT_OK || rows.len() != types.len() || unknown != 0 || nonexistent != 3 {
        return Err(format!(
            "batch exit {code}, {} rows, {unknown} unknown, {nonexistent} nonexistent",
            rows.len()
        ));
    }
    within(Duration::from_secs(300), start)?;
    check_all(failures, types.len(), "types")
}

fn nonexistence_proofs() -> Outcome {
    let mut done = Vec::new();
    for t in ["3,3", "4", "6"] {
        let start = Instant::now();
        match brute_force_search(
            &ty(t),
            SearchBudget {
                nodes: u64::MAX,
                seed: 0,
            },
        ) {
            SolveOutcome::Nonexistent(Nonexistence::ExhaustiveSearch(log)) => {
                within(Duration::from_secs(600), start)?;
                done.push(format!("({t}) {} nodes", log.nodes));
            }
            other => return Err(format!("({t}): {}", other.verdict())),
        }
    }
    Ok(done.join(", "))
}

fn catalog() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let types = catalog_types();
    for t in &types {
        let d = catalog_lookup(t)
            .expect("listed type has an entry")
            .expand();
        let report = verify_decomposition(&d, t);
        if !report.ok {
            failures.push(format!("{t}: {report}"));
        }
    }
    match special_224() {
        Ok(d) if verify_decomposition(&d, &ty("2,2,4")).ok => {}
        Ok(_) => failures.push("(2,2,4) join fails verification".into()),
        Err(e) => failures.push(format!("(2,2,4) join: {e}")),
    }
    within(Duration::from_secs(10), start)?;
    check_all(failures, types.len() + 1, "entries")
}

fn two_cycle_table() -> Outcome {
    let start = Instant::now();
    let solver = Solver::new(SearchBudget::default());
    let pairs: Vec<(usize, usize)> = (2..=12)
        .flat_map(|a| (a..=24 - a).map(move |b| (a, b)))
        .collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let t = CycleType::new(vec![a, b]).unwrap();
            let open = (a == 4 || a == 6) && b % 2 == 0 && a + b >= 14;
            match solver.solve(&t) {
                SolveOutcome::Nonexistent(Nonexistence::KnownException) if (a, b) == (3, 3) => None,
                SolveOutcome::Unknown(UnknownReason::OpenCase) if open => None,
                SolveOutcome::Solved(sol) if !open && (a, b) != (3, 3) => certified(&sol).err(),
                other => Some(format!("{t}: {}", other.verdict())),
            }
        })
        .collect();
    within(Duration::from_secs(120), start)?;
    check_all(failures, pairs.len(), "pairs")
}

fn orthogonal_check(
    h: &OrthogonalSubdigraph,
    expected_set: &oberwolfach::ConnectionSet,
    mut shape: Vec<Shape>,
) -> Result<(), String> {
    if &h.set != expected_set {
        return Err("wrong difference set".into());
    }
    shape.sort();
    if h.shape() != shape {
        return Err(format!("shape {:?}, expected {shape:?}", h.shape()));
    }
    let report = verify_orthogonal(&h.digraph(), &h.set, &shape);
    if report.ok {
        Ok(())
    } else {
        Err(report.to_string())
    }
}

fn path_sweep() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut specials = BTreeSet::new();
    for t in 3..=40usize {
        for s in 2..t {
            if t % 2 == 0 && s == 3 {
                continue;
            }
            let cap = (s / 3).min(2 * (t / 2) - s);
            for a in (s % 2..=cap).step_by(2) {
                checked += 1;
                if matches!((s, a), (9, 3) | (5, 1) | (3, 1)) {
                    specials.insert((s, a));
                }
                let mut shape = vec![Shape::Path(1); a];
                shape.push(Shape::Path(t - s - a));
                let res = orthogonal_paths(s, t, a)
                    .map_err(|e| e.to_string())
                    .and_then(|h| orthogonal_check(&h, &path_connection_set(s, t).unwrap(), shape));
                if let Err(e) = res {
                    failures.push(format!("(s,t,a)=({s},{t},{a}): {e}"));
                }
            }
        }
    }
    if specials.len() != 3 {
        failures.push(format!("special pairs covered: {specials:?}"));
    }
    within(Duration::from_secs(60), start)?;
    check_all(failures, checked, "triples")
}

fn digon_sweep() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for t in (4..=40usize).step_by(2) {
        for s in 2..t {
            let cap = (s / 3).min(t - s);
            for a in (s % 2..=cap).step_by(2) {
                checked += 1;
                let mut shape = vec![Shape::Path(1); a];
                shape.extend(vec![Shape::Cycle(2); (t - s - a) / 2]);
                let res = orthogonal_digons(s, t, a)
                    .map_err(|e| e.to_string())
                    .and_then(|h| {
                        orthogonal_check(&h, &digon_connection_set(s, t).unwrap(), shape)
                    });
                if let Err(e) = res {
                    failures.push(format!("(s,t,a)=({s},{t},{a}): {e}"));
                }
            }
        }
    }
    check_all(failures, checked, "triples")
}

fn partition_check(
    t: usize,
    s: usize,
    set: &oberwolfach::ConnectionSet,
    factors: &[TwoFactor],
    cycle: usize,
) -> Result<(), String> {
    if factors.len() != s - 1 || set.len() != s - 1 {
        return Err(format!(
            "{} factors over {} differences",
            factors.len(),
            set.len()
        ));
    }
    let kind = CycleType::new(vec![cycle; t / cycle]).unwrap();
    let mut arcs = BTreeSet::new();
    for f in factors {
        let report = verify_two_factor(f, t, &kind);
        if !report.ok {
            return Err(report.to_string());
        }
        for a in f.arcs() {
            if !arcs.insert(a.indices(t)) {
                return Err(format!("arc {:?} repeated", a.indices(t)));
            }
        }
    }
    if arcs != circulant_digraph(set).arcs {
        return Err("factors do not partition the circulant".into());
    }
    Ok(())
}

fn circulant_factorizations() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for t in 3..=30usize {
        for s in 2..t {
            if !(t % 2 == 0 && s == 4) {
                checked += 1;
                let res = ct_factorization(t, s)
                    .map_err(|e| e.to_string())
                    .and_then(|(set, f)| partition_check(t, s, &set, &f, t));
                if let Err(e) = res {
                    failures.push(format!("hamilton (t,s)=({t},{s}): {e}"));
                }
            }
            if t % 2 == 0 {
                checked += 1;
                let res = c2_factorization(t, s)
                    .map_err(|e| e.to_string())
                    .and_then(|(set, f)| partition_check(t, s, &set, &f, 2));
                if let Err(e) = res {
                    failures.push(format!("digon (t,s)=({t},{s}): {e}"));
                }
            }
        }
    }
    check_all(failures, checked, "pairs")
}

fn random_type(rng: &mut ChaCha8Rng, order: usize) -> CycleType {
    let mut left = order;
    let mut lengths = Vec::new();
    while left > 0 {
        let m = if left <= 3 {
            left
        } else {
            rng.gen_range(2..=left.min(12))
        };
        let m = if left - m == 1 { m + 1 } else { m };
        lengths.push(m);
        left -= m;
    }
    CycleType::new(lengths).unwrap()
}

fn extensions() -> Outcome {
    let start = Instant::now();
    let solver = Solver::new(SearchBudget::default());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    let (mut long, mut digons, mut resampled) = (0, 0, 0);
    while long + digons < 50 {
        let order = rng.gen_range(2..=30);
        let base_ty = random_type(&mut rng, order);
        let Some(base) = solver.solve(&base_ty).solution().cloned() else {
            resampled += 1;
            continue;
        };
        let s = base_ty.order();
        let by_digons = rng.gen_bool(0.5);
        let ts: Vec<usize> = (s + 1..=60 - s)
            .filter(|&t| {
                if by_digons {
                    digons_admissible(&base_ty, t)
                } else {
                    long_cycle_admissible(&base_ty, t)
                }
            })
            .collect();
        let Some(&t) = ts.choose(&mut rng) else {
            resampled += 1;
            continue;
        };
        let res = if by_digons {
            digons += 1;
            extend_by_digons(&base, t)
        } else {
            long += 1;
            extend_by_long_cycle(&base, t)
        };
        let res = res.map_err(|e| e.to_string()).and_then(|sol| {
            certified(&sol)?;
            match replay(&sol.trace) {
                Ok(d) if d == sol.decomposition => Ok(()),
                Ok(_) => Err("replay differs".into()),
                Err(e) => Err(format!("replay: {e}")),
            }
        });
        if let Err(e) = res {
            failures.push(format!(
                "{base_ty} + t={t} ({}): {e}",
                if by_digons { "digons" } else { "cycle" }
            ));
        }
    }
    within(Duration::from_secs(300), start)?;
    check_all(
        failures,
        50,
        &format!("extensions ({long} by a cycle, {digons} by digons, {resampled} bases resampled)"),
    )
}

fn oracle_agreement() -> Outcome {
    let solver = Solver::new(SearchBudget::default());
    let types = cycle_types(9);
    let failures: Vec<String> = types
        .par_iter()
        .filter_map(|t| {
            let ours = solver.solve(t).verdict();
            let oracle = brute_force_search(
                t,
                SearchBudget {
                    nodes: u64::MAX,
                    seed: 0,
                },
            )
            .verdict();
            (ours != oracle).then(|| format!("{t}: dispatcher {ours}, exhaustive {oracle}"))
        })
        .collect();
    check_all(failures, types.len(), "types")
}

/// Changes exactly one arc of one factor in its arc list.
fn mutate_arc(lists: &mut [Vec<(usize, usize)>], n: usize, rng: &mut ChaCha8Rng) {
    let f = rng.gen_range(0..lists.len());
    let i = rng.gen_range(0..lists[f].len());
    let (u, v) = lists[f][i];
    match rng.gen_range(0..4) {
        0 => {
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && w != v {
                    break w;
                }
            };
            lists[f][i] = (u, w);
        }
        1 => {
            lists[f].remove(i);
        }
        2 => lists[f][i] = (v, u),
        _ => {
            let g = (f + rng.gen_range(1..lists.len())) % lists.len();
            let arc = lists[f].remove(i);
            lists[g].push(arc);
        }
    }
}

/// Changes the cycle listing of one factor.
fn mutate_cycles(d: &mut Decomposition, rng: &mut ChaCha8Rng) {
    let n = d.n;
    let f = rng.gen_range(0..d.factors.len());
    if rng.gen_range(0..3) == 0 {
        let g = (f + rng.gen_range(1..d.factors.len())) % d.factors.len();
        d.factors[g] = d.factors[f].clone();
        return;
    }
    let factor = &mut d.factors[f];
    let c = rng.gen_range(0..factor.cycles.len());
    let mut vs: Vec<Vertex> = factor.cycles[c].vertices().to_vec();
    let i = rng.gen_range(0..vs.len());
    if vs.len() > 2 && rng.gen_bool(0.5) {
        vs.remove(i);
    } else {
        let w = (vs[i].index(n) + rng.gen_range(1..n)) % n;
        vs[i] = Vertex::Finite(w);
    }
    factor.cycles[c] = DirectedCycle::new_unchecked(vs);
}

fn mutations() -> Outcome {
    let solver = Solver::new(SearchBudget::default());
    let bases: Vec<(CycleType, Decomposition)> = [
        "2,3,4", "4,5", "3,3,3", "2,2,2,2", "8", "5,5", "3,4,5", "2,2,3,5", "4,4,4", "7,7",
    ]
    .iter()
    .map(|s| {
        let t = ty(s);
        let d = solver
            .solve(&t)
            .solution()
            .expect("sample solves")
            .decomposition
            .clone();
        (t, d)
    })
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut accepted = Vec::new();
    for k in 0..1000 {
        let (t, d) = &bases[k % bases.len()];
        let ok = if k % 2 == 0 {
            let mut lists: Vec<Vec<(usize, usize)>> = d
                .factors
                .iter()
                .map(|f| f.arcs().map(|a| a.indices(d.n)).collect())
                .collect();
            mutate_arc(&mut lists, d.n, &mut rng);
            verify_arc_factors(d.n, &lists, t).ok
        } else {
            let mut m = d.clone();
            mutate_cycles(&mut m, &mut rng);
            verify_decomposition(&m, t).ok
        };
        if ok {
            accepted.push(format!("mutation {k} of {t}"));
        }
    }
    check_all(accepted, 1000, "mutations")
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("every type with n <= 13 decided", small_orders),
        ("exhaustive nonexistence proofs", nonexistence_proofs),
        ("catalog entries certify", catalog),
        ("two-cycle table up to 24", two_cycle_table),
        ("orthogonal path sweep, t <= 40", path_sweep),
        ("orthogonal digon sweep, t <= 40", digon_sweep),
        (
            "circulant factorizations, t <= 30",
            circulant_factorizations,
        ),
        ("50 sampled extensions, n <= 60", extensions),
        (
            "dispatcher agrees with exact cover, n <= 9",
            oracle_agreement,
        ),
        ("1000 mutations rejected", mutations),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
