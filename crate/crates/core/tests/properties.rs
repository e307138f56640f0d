use proptest::prelude::*;

use oberwolfach::orthogonal::walk_p;
use oberwolfach::rotational::catalog::{catalog_lookup, catalog_types, CatalogEntry};
use oberwolfach::rotational::expand_starters;
use oberwolfach::solver::trace::replay;
use oberwolfach::solver::{delta, extend_by_long_cycle, solve, SearchBudget, SolveOutcome};
use oberwolfach::verify::verify_arc_factors;
use oberwolfach::{verify_decomposition, ConnectionSet, CycleType, Decomposition, TwoFactor};

fn solved(ty: &str) -> Decomposition {
    let ty: CycleType = ty.parse().unwrap();
    match solve(&ty, SearchBudget::default()) {
        SolveOutcome::Solved(s) => s.decomposition,
        other => panic!("{ty}: {other:?}"),
    }
}

const SAMPLES: [&str; 8] = [
    "2,3,4", "4,5", "3,3,3", "2,2,2,2", "2,6", "5,5", "3,4,5", "2,2,3,5",
];

fn arc_lists(d: &Decomposition) -> Vec<Vec<(usize, usize)>> {
    d.factors
        .iter()
        .map(|f| f.arcs().map(|a| a.indices(d.n)).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabelling_preserves_certificates(which in 0..SAMPLES.len(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let ty: CycleType = SAMPLES[which].parse().unwrap();
        let d = solved(SAMPLES[which]);
        let mut perm: Vec<usize> = (0..d.n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(verify_decomposition(&d.relabel(&perm), &ty).ok);
    }

    #[test]
    fn single_arc_mutations_are_rejected(
        which in 0..SAMPLES.len(),
        f in any::<prop::sample::Index>(),
        a in any::<prop::sample::Index>(),
        w in any::<prop::sample::Index>(),
        kind in 0..3u8,
    ) {
        let ty: CycleType = SAMPLES[which].parse().unwrap();
        let d = solved(SAMPLES[which]);
        let mut lists = arc_lists(&d);
        let fi = f.index(lists.len());
        let ai = a.index(lists[fi].len());
        let (u, v) = lists[fi][ai];
        match kind {
            0 => {
                let others: Vec<usize> = (0..d.n).filter(|&x| x != u && x != v).collect();
                lists[fi][ai] = (u, others[w.index(others.len())]);
            }
            1 => {
                lists[fi].remove(ai);
            }
            _ => lists[fi][ai] = (v, u),
        }
        prop_assert!(!verify_arc_factors(d.n, &lists, &ty).ok);
    }

    #[test]
    fn starters_generate_rotation_invariant_sets(which in 0..catalog_types().len(), j in 1usize..40) {
        let ty = &catalog_types()[which];
        let Some(CatalogEntry::Starters(set)) = catalog_lookup(ty) else { return Ok(()) };
        let d = expand_starters(&set);
        let n = d.n;
        let m = n - 1;
        let shift = set.q() * (j % (m / set.q()));
        let rotate = |x: usize| if x == m { m } else { (x + shift) % m };
        let canon = |f: &TwoFactor| f.normalized().canonical();
        let mut before: Vec<_> = d.factors.iter().map(canon).collect();
        let mut after: Vec<_> = d
            .factors
            .iter()
            .map(|f| {
                let cycles: Vec<Vec<usize>> = f.index_cycles().iter().map(|c| c.iter().map(|&x| rotate(x)).collect()).collect();
                canon(&TwoFactor::from_index_cycles(n, &cycles).unwrap())
            })
            .collect();
        before.sort_by_key(|f| f.index_cycles());
        after.sort_by_key(|f| f.index_cycles());
        prop_assert_eq!(before, after);
    }

    #[test]
    fn zigzag_walk_spans_its_differences(t in 3usize..80, l_frac in 0.0f64..1.0, k in -100i64..100) {
        let m = t / 2;
        let l = ((m as f64 - 1.0) * l_frac) as usize;
        let mut vals: Vec<i64> = (1..=l as i64).flat_map(|d| [d, -d]).collect();
        vals.push(m as i64);
        let r = ConnectionSet::new(t, vals).unwrap();
        let walk = walk_p(&r, k, t).unwrap();
        prop_assert_eq!(walk.len(), 2 * l + 2);
        prop_assert_eq!(walk[0], k.rem_euclid(t as i64) as usize);
        prop_assert_eq!(*walk.last().unwrap(), (k + m as i64).rem_euclid(t as i64) as usize);
        let diffs: std::collections::BTreeSet<usize> = walk.windows(2).map(|w| (w[1] + t - w[0]) % t).collect();
        prop_assert_eq!(&diffs, r.residues());
        prop_assert_eq!(diffs.len(), walk.len() - 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Chains where each new length beats everything before it extend
    /// cycle by cycle.
    #[test]
    fn long_cycle_chains(first in prop::sample::select(vec![2usize, 3, 5, 7, 9]), gaps in prop::collection::vec(0usize..4, 1..4)) {
        let mut sol = match solve(&CycleType::new(vec![first]).unwrap(), SearchBudget::default()) {
            SolveOutcome::Solved(s) => s,
            other => panic!("({first}): {other:?}"),
        };
        for g in gaps {
            let floor: usize = sol.cycle_type.lengths().iter().map(|&m| m + delta(m)).sum();
            let mut t = floor + 1 + g;
            if t - delta(t) <= floor {
                t += 1;
            }
            if sol.cycle_type.order() + t > 60 {
                break;
            }
            sol = extend_by_long_cycle(&sol, t).unwrap();
            prop_assert!(sol.report.ok);
        }
        prop_assert_eq!(replay(&sol.trace).unwrap(), sol.decomposition);
    }
}
