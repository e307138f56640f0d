//! Closed-form solutions for the uniform base cases.

use crate::digraph::{Decomposition, TwoFactor};
use crate::error::{Error, Result};

/// `2^b` on `2b` vertices: each perfect matching of the circle method
/// becomes a factor of digons.
pub fn round_robin(b: usize) -> Result<Decomposition> {
    if b == 0 {
        return Err(Error::InstanceTooSmall("round robin needs b >= 1".into()));
    }
    let n = 2 * b;
    let m = n - 1;
    let inf = n - 1;
    let factors = (0..m)
        .map(|r| {
            let mut cycles = vec![vec![inf, r]];
            for i in 1..b {
                cycles.push(vec![(r + i) % m, (r + m - i) % m]);
            }
            TwoFactor::from_index_cycles(n, &cycles)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition::new(n, factors))
}

/// A single `n`-cycle for odd `n`: the zigzag Hamilton cycles of `K_n`,
/// each traversed in both directions.
pub fn walecki(n: usize) -> Result<Decomposition> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InstanceTooSmall(format!(
            "zigzag cycles need odd n >= 3, got {n}"
        )));
    }
    let h = (n - 1) / 2;
    let m = 2 * h;
    let inf = n - 1;
    let mut factors = Vec::with_capacity(n - 1);
    for j in 0..h {
        let mut cycle = vec![inf, j];
        for i in 1..=h {
            cycle.push((j + i) % m);
            if i < h {
                cycle.push((j + m - i) % m);
            }
        }
        let back: Vec<usize> = cycle.iter().rev().copied().collect();
        factors.push(TwoFactor::from_index_cycles(n, &[cycle])?);
        factors.push(TwoFactor::from_index_cycles(n, &[back])?);
    }
    Ok(Decomposition::new(n, factors))
}
