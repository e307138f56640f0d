//! Strategy traces and their replay.
//!
//! A trace is the construction tree listed in pre-order. Each step names
//! the rule that produced a solution for its cycle type; the steps one
//! level deeper that follow it are its inputs. Search results are stored
//! as witnesses so replay never searches.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{CycleType, Decomposition, TwoFactor};
use crate::error::{Error, Result};
use crate::recursion::{bipartite_double, extend_by_digons, extend_by_long_cycle, special_224};
use crate::rotational::{
    catalog::catalog_lookup, expand_starters, format_factor, parse_factor, StarterSet,
};
use crate::verify::verify_decomposition;

use super::direct::{round_robin, walecki};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Rule {
    /// Hard-coded table entry.
    Catalog,
    /// The dedicated `(2,2,4)` join.
    Special224,
    /// Digon factors from a 1-factorization.
    RoundRobin,
    /// Doubled zigzag Hamilton cycles.
    Walecki,
    /// Two all-even inputs of equal order joined bipartitely.
    Double,
    /// One input extended by a cycle of length `t`.
    LongCycle { t: usize },
    /// One input extended by `t/2` digons.
    Digons { t: usize },
    /// Rotational starters found by search, in the catalog listing.
    Starters { q: usize, starters: Vec<String> },
    /// A full decomposition found by search.
    Explicit {
        kernel: String,
        factors: Vec<Vec<Vec<usize>>>,
    },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Catalog => "catalog",
            Rule::Special224 => "special-224",
            Rule::RoundRobin => "round-robin",
            Rule::Walecki => "walecki",
            Rule::Double => "double",
            Rule::LongCycle { .. } => "long-cycle",
            Rule::Digons { .. } => "digons",
            Rule::Starters { .. } => "starters",
            Rule::Explicit { .. } => "explicit",
        }
    }

    /// Short parameter summary; witnesses are left out.
    pub fn params(&self) -> String {
        match self {
            Rule::LongCycle { t } | Rule::Digons { t } => format!("t={t}"),
            Rule::Starters { q, .. } => format!("q={q}"),
            Rule::Explicit { kernel, .. } => format!("kernel={kernel}"),
            _ => String::new(),
        }
    }

    fn inputs(&self) -> usize {
        match self {
            Rule::Double => 2,
            Rule::LongCycle { .. } | Rule::Digons { .. } => 1,
            _ => 0,
        }
    }

    pub fn starters(set: &StarterSet) -> Rule {
        Rule::Starters {
            q: set.q(),
            starters: set.starters().iter().map(format_factor).collect(),
        }
    }

    pub fn explicit(kernel: &str, d: &Decomposition) -> Rule {
        Rule::Explicit {
            kernel: kernel.to_string(),
            factors: d.factors.iter().map(TwoFactor::index_cycles).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub depth: usize,
    pub cycle_type: CycleType,
    #[serde(flatten)]
    pub rule: Rule,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyTrace {
    pub steps: Vec<TraceStep>,
}

impl StrategyTrace {
    pub fn leaf(ty: &CycleType, rule: Rule) -> Self {
        StrategyTrace {
            steps: vec![TraceStep {
                depth: 0,
                cycle_type: ty.clone(),
                rule,
            }],
        }
    }

    /// `rule` applied to the solutions traced by `inputs`.
    pub fn node(ty: &CycleType, rule: Rule, inputs: &[&StrategyTrace]) -> Self {
        let mut steps = vec![TraceStep {
            depth: 0,
            cycle_type: ty.clone(),
            rule,
        }];
        for input in inputs {
            steps.extend(input.steps.iter().map(|s| TraceStep {
                depth: s.depth + 1,
                ..s.clone()
            }));
        }
        StrategyTrace { steps }
    }

    pub fn root(&self) -> Option<&TraceStep> {
        self.steps.first()
    }

    pub fn rule_names(&self) -> Vec<&'static str> {
        self.steps.iter().map(|s| s.rule.name()).collect()
    }
}

impl fmt::Display for StrategyTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            let params = step.rule.params();
            write!(
                f,
                "{}{} {}",
                "  ".repeat(step.depth),
                step.rule.name(),
                step.cycle_type
            )?;
            if !params.is_empty() {
                write!(f, " {params}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Builds the solution for `ty` by `rule` from already built inputs.
pub(crate) fn apply(
    ty: &CycleType,
    rule: &Rule,
    inputs: &[(&CycleType, &Decomposition)],
) -> Result<Decomposition> {
    let n = ty.order();
    let d = match (rule, inputs) {
        (Rule::Catalog, []) => catalog_lookup(ty)
            .ok_or_else(|| Error::ReplayDiverged(format!("{ty} is not in the catalog")))?
            .expand(),
        (Rule::Special224, []) => special_224()?,
        (Rule::RoundRobin, []) => round_robin(n / 2)?,
        (Rule::Walecki, []) => walecki(n)?,
        (Rule::Double, [(tx, x), (ty2, y)]) => bipartite_double(x, tx, y, ty2)?,
        (Rule::LongCycle { t }, [(tb, b)]) => extend_by_long_cycle(b, tb, *t)?,
        (Rule::Digons { t }, [(tb, b)]) => extend_by_digons(b, tb, *t)?,
        (Rule::Starters { q, starters }, []) => {
            let factors = starters
                .iter()
                .map(|s| parse_factor(n, s))
                .collect::<Result<Vec<_>>>()?;
            expand_starters(&StarterSet::new(ty.clone(), *q, factors)?)
        }
        (Rule::Explicit { factors, .. }, []) => Decomposition::new(
            n,
            factors
                .iter()
                .map(|f| TwoFactor::from_index_cycles(n, f))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => {
            return Err(Error::ReplayDiverged(format!(
                "rule {} got {} inputs",
                rule.name(),
                inputs.len()
            )))
        }
    };
    Ok(d.canonical())
}

/// Rebuilds the decomposition a trace describes and certifies it.
pub fn replay(trace: &StrategyTrace) -> Result<Decomposition> {
    let (d, used) = replay_from(&trace.steps, 0)?;
    if used != trace.steps.len() {
        return Err(Error::ReplayDiverged(format!(
            "{} trailing steps after the root",
            trace.steps.len() - used
        )));
    }
    Ok(d)
}

fn replay_from(steps: &[TraceStep], at: usize) -> Result<(Decomposition, usize)> {
    let step = steps
        .get(at)
        .ok_or_else(|| Error::ReplayDiverged("trace ended early".into()))?;
    let mut next = at + 1;
    let mut built = Vec::new();
    for _ in 0..step.rule.inputs() {
        let child = steps
            .get(next)
            .ok_or_else(|| Error::ReplayDiverged("missing input step".into()))?;
        if child.depth != step.depth + 1 {
            return Err(Error::ReplayDiverged(format!(
                "step {next} has depth {} under depth {}",
                child.depth, step.depth
            )));
        }
        let (d, after) = replay_from(steps, next)?;
        built.push((child.cycle_type.clone(), d));
        next = after;
    }
    let inputs: Vec<(&CycleType, &Decomposition)> = built.iter().map(|(t, d)| (t, d)).collect();
    let d = apply(&step.cycle_type, &step.rule, &inputs)?;
    let report = verify_decomposition(&d, &step.cycle_type);
    if !report.ok {
        return Err(Error::NotCertified(report));
    }
    Ok((d, next))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_shape() {
        let ty: CycleType = "3,5".parse().unwrap();
        let base = StrategyTrace::leaf(&"3".parse().unwrap(), Rule::Walecki);
        let t = StrategyTrace::node(&ty, Rule::LongCycle { t: 5 }, &[&base]);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"[{"depth":0,"cycle_type":[3,5],"rule":"long-cycle","t":5},{"depth":1,"cycle_type":[3],"rule":"walecki"}]"#
        );
        let back: StrategyTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let d = replay(&t).unwrap();
        assert!(verify_decomposition(&d, &ty).ok);
    }

    #[test]
    fn malformed_traces() {
        let ty: CycleType = "3,5".parse().unwrap();
        let lone = StrategyTrace::leaf(&ty, Rule::LongCycle { t: 5 });
        assert!(matches!(replay(&lone), Err(Error::ReplayDiverged(_))));
        let wrong = StrategyTrace::leaf(&ty, Rule::Walecki);
        assert!(replay(&wrong).is_err());
        let mut extra = StrategyTrace::leaf(&"3".parse().unwrap(), Rule::Walecki);
        extra.steps.push(extra.steps[0].clone());
        assert!(matches!(replay(&extra), Err(Error::ReplayDiverged(_))));
    }
}
