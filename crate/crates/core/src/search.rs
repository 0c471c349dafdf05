//! Bounded depth-first search over finite assignments.
//!
//! Every enumeration oracle in the crate is phrased as a constraint problem:
//! variables `0..n`, a domain per variable that may depend on the values
//! already chosen, and a consistency predicate that is evaluated right after
//! each assignment. Domains are visited in ascending order, so solutions come
//! out lexicographically ordered by variable index.

use crate::error::{Error, Result};

/// Default number of search nodes an enumeration may visit.
pub const DEFAULT_BOUND: u64 = 1_000_000;

/// Counts search nodes and aborts once `limit` is exceeded.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::SizeBound { bound: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

/// Runs the search. `on_solution` returns `false` to stop early.
pub(crate) fn solve<D, C, S>(
    n: usize,
    budget: &mut Budget,
    mut domain: D,
    mut consistent: C,
    mut on_solution: S,
) -> Result<()>
where
    D: FnMut(usize, &[usize]) -> Vec<usize>,
    C: FnMut(usize, &[usize]) -> bool,
    S: FnMut(&[usize]) -> bool,
{
    let mut assignment: Vec<usize> = Vec::with_capacity(n);
    let mut stack: Vec<(Vec<usize>, usize)> = Vec::with_capacity(n + 1);
    if n == 0 {
        budget.tick()?;
        on_solution(&assignment);
        return Ok(());
    }
    stack.push((domain(0, &assignment), 0));
    while let Some((values, pos)) = stack.last_mut() {
        if *pos >= values.len() {
            stack.pop();
            assignment.pop();
            continue;
        }
        let value = values[*pos];
        *pos += 1;
        let depth = stack.len() - 1;
        assignment.truncate(depth);
        assignment.push(value);
        budget.tick()?;
        if !consistent(depth, &assignment) {
            assignment.pop();
            continue;
        }
        if depth + 1 == n {
            if !on_solution(&assignment) {
                return Ok(());
            }
            assignment.pop();
        } else {
            let next = domain(depth + 1, &assignment);
            stack.push((next, 0));
        }
    }
    Ok(())
}
