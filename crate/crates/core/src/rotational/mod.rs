//! Base-`q` differences, starter sets and 1-rotational expansion.
//!
//! The ground set is `Z_{n-1}` plus a point at infinity. A starter set of `q`
//! 2-factors that jointly contains every base-`q` difference exactly once
//! expands, under the rotation `x -> x + q`, into a full decomposition.

pub mod catalog;

pub use catalog::{catalog_lookup, catalog_types, CatalogEntry};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{
    cycle_type_of, rotate, Arc, CycleType, Decomposition, Orbit, TwoFactor, Vertex,
};
use crate::error::{Error, Result};
use crate::verify::verify_two_factor;

/// Base-`q` difference of an arc on `Z_{n-1}` plus infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BaseQDifference {
    Finite { d: usize, r: usize },
    PlusInf(usize),
    MinusInf(usize),
}

impl fmt::Display for BaseQDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseQDifference::Finite { d, r } => write!(f, "{d}_{r}"),
            BaseQDifference::PlusInf(r) => write!(f, "inf_{r}"),
            BaseQDifference::MinusInf(r) => write!(f, "-inf_{r}"),
        }
    }
}

fn check_modulus(n: usize, q: usize) -> Result<()> {
    if n < 3 || q == 0 || (n - 1) % q != 0 {
        return Err(Error::BadModulus(format!(
            "q = {q} does not divide n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Base-`q` difference of `arc` in the ground set of size `n`.
pub fn base_q_difference(arc: &Arc, n: usize, q: usize) -> Result<BaseQDifference> {
    check_modulus(n, q)?;
    let m = n - 1;
    let check = |i: usize| {
        if i < m {
            Ok(i)
        } else {
            Err(Error::BadStarter(format!("vertex u_{i} outside Z_{m}")))
        }
    };
    match (arc.tail, arc.head) {
        (Vertex::Finite(i), Vertex::Finite(j)) => {
            let (i, j) = (check(i)?, check(j)?);
            Ok(BaseQDifference::Finite {
                d: (j + m - i) % m,
                r: i % q,
            })
        }
        (Vertex::Finite(i), Vertex::Infinity) => Ok(BaseQDifference::PlusInf(check(i)? % q)),
        (Vertex::Infinity, Vertex::Finite(i)) => Ok(BaseQDifference::MinusInf(check(i)? % q)),
        (Vertex::Infinity, Vertex::Infinity) => Err(Error::BadStarter("loop at infinity".into())),
    }
}

/// Every base-`q` difference that a starter set must contain once.
pub fn required_differences(n: usize, q: usize) -> Result<Vec<BaseQDifference>> {
    check_modulus(n, q)?;
    let mut all = Vec::new();
    for r in 0..q {
        for d in 1..n - 1 {
            all.push(BaseQDifference::Finite { d, r });
        }
        all.push(BaseQDifference::PlusInf(r));
        all.push(BaseQDifference::MinusInf(r));
    }
    Ok(all)
}

/// For even `n` with every cycle length at least 3 no single starter
/// exists: the differences along the path through infinity would have to
/// sum to zero, forcing infinity into a digon.
pub fn single_starter_obstructed(ty: &CycleType) -> bool {
    ty.order() % 2 == 0 && ty.lengths()[0] >= 3
}

/// A validated set of `q` starter 2-factors for the given type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarterSet {
    n: usize,
    q: usize,
    cycle_type: CycleType,
    starters: Vec<TwoFactor>,
}

impl StarterSet {
    pub fn new(cycle_type: CycleType, q: usize, starters: Vec<TwoFactor>) -> Result<Self> {
        let n = cycle_type.order();
        check_modulus(n, q)?;
        if starters.len() != q {
            return Err(Error::BadStarter(format!(
                "{} starters given, q = {q}",
                starters.len()
            )));
        }
        let mut seen: BTreeMap<BaseQDifference, usize> = BTreeMap::new();
        for (j, f) in starters.iter().enumerate() {
            if f.n != n {
                return Err(Error::BadStarter(format!(
                    "starter {j} lives on {} vertices, not {n}",
                    f.n
                )));
            }
            if f.arcs()
                .any(|a| a.tail == Vertex::Finite(n - 1) || a.head == Vertex::Finite(n - 1))
            {
                return Err(Error::BadStarter(format!(
                    "starter {j} uses u_{} instead of infinity",
                    n - 1
                )));
            }
            let report = verify_two_factor(f, n, &cycle_type);
            if !report.ok {
                return Err(Error::BadStarter(format!("starter {j}: {report}")));
            }
            for arc in f.arcs() {
                *seen.entry(base_q_difference(&arc, n, q)?).or_default() += 1;
            }
        }
        if let Some((d, k)) = seen.iter().find(|(_, &k)| k > 1) {
            return Err(Error::BadStarter(format!(
                "difference {d} occurs {k} times"
            )));
        }
        if let Some(d) = required_differences(n, q)?
            .into_iter()
            .find(|d| !seen.contains_key(d))
        {
            return Err(Error::BadStarter(format!("difference {d} is missing")));
        }
        Ok(StarterSet {
            n,
            q,
            cycle_type,
            starters,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn cycle_type(&self) -> &CycleType {
        &self.cycle_type
    }

    pub fn starters(&self) -> &[TwoFactor] {
        &self.starters
    }
}

/// All `n - 1` images `rho^{qi}(F_j)`, with infinity relabelled `n - 1`.
pub fn expand_starters(set: &StarterSet) -> Decomposition {
    let n = set.n;
    let orbit = Orbit::new(0, n - 1);
    let mut factors = Vec::with_capacity(n - 1);
    for f in &set.starters {
        for i in 0..(n - 1) / set.q {
            factors.push(rotate(f, set.q * i, orbit).normalized());
        }
    }
    Decomposition::new(n, factors)
}

/// Parses the compact listing used by the catalog: cycles separated by `|`,
/// vertices by spaces, `i` for infinity.
pub fn parse_factor(n: usize, text: &str) -> Result<TwoFactor> {
    let mut cycles = Vec::new();
    for part in text.split('|') {
        let vertices = part
            .split_whitespace()
            .map(|tok| match tok {
                "i" => Ok(Vertex::Infinity),
                _ => tok
                    .parse()
                    .map(Vertex::Finite)
                    .map_err(|_| Error::BadStarter(format!("bad vertex {tok:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        cycles.push(crate::digraph::DirectedCycle::new(vertices)?);
    }
    let f = TwoFactor::new(n, cycles);
    cycle_type_of(&f)?;
    Ok(f)
}

/// The listing [`parse_factor`] reads.
pub fn format_factor(f: &TwoFactor) -> String {
    f.cycles
        .iter()
        .map(|c| {
            c.vertices()
                .iter()
                .map(|v| match v {
                    Vertex::Infinity => "i".to_string(),
                    Vertex::Finite(i) => i.to_string(),
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_round_trip() {
        let text = "0 1 5 3 | 2 4 7 6 i";
        let f = parse_factor(9, text).unwrap();
        assert_eq!(format_factor(&f), text);
    }

    #[test]
    fn difference_examples() {
        let d = base_q_difference(&Arc::finite(2, 7), 10, 3).unwrap();
        assert_eq!(d, BaseQDifference::Finite { d: 5, r: 2 });
        let d = base_q_difference(&Arc::new(6, Vertex::Infinity).unwrap(), 9, 1).unwrap();
        assert_eq!(d, BaseQDifference::PlusInf(0));
        let d = base_q_difference(&Arc::new(Vertex::Infinity, 4).unwrap(), 10, 3).unwrap();
        assert_eq!(d, BaseQDifference::MinusInf(1));
        assert!(matches!(
            base_q_difference(&Arc::finite(0, 1), 10, 4),
            Err(Error::BadModulus(_))
        ));
    }

    #[test]
    fn single_starter_for_4_5() {
        let ty: CycleType = "4,5".parse().unwrap();
        let f = parse_factor(9, "0 1 5 3 | 2 4 7 6 i").unwrap();
        let set = StarterSet::new(ty.clone(), 1, vec![f]).unwrap();
        let d = expand_starters(&set);
        assert_eq!(d.factors.len(), 8);
        assert!(crate::verify::verify_decomposition(&d, &ty).ok);
    }

    #[test]
    fn broken_starter_names_the_difference() {
        let ty: CycleType = "4,5".parse().unwrap();
        let f = parse_factor(9, "0 1 5 3 | 2 4 6 7 i").unwrap();
        match StarterSet::new(ty, 1, vec![f]) {
            Err(Error::BadStarter(msg)) => assert!(msg.contains("difference"), "{msg}"),
            other => panic!("expected BadStarter, got {other:?}"),
        }
    }

    #[test]
    fn obstruction_for_even_order() {
        assert!(single_starter_obstructed(&"4,4".parse().unwrap()));
        assert!(single_starter_obstructed(&"3,3,4".parse().unwrap()));
        assert!(!single_starter_obstructed(&"2,3,3".parse().unwrap()));
        assert!(!single_starter_obstructed(&"4,5".parse().unwrap()));
    }
}
