//! Exact sparse Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{add_into, Q};

/// Column index reserved for the right-hand side.
const RHS: usize = usize::MAX;

/// Incremental row-echelon form of `A x = b`.
///
/// Rows are added one at a time and reduced against the pivots found so far.
/// Each stored pivot row has leading entry 1.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    unknowns: usize,
    pivots: BTreeMap<usize, BTreeMap<usize, Q>>,
    inconsistent: Option<usize>,
    rows_seen: usize,
}

impl SparseSystem {
    pub fn new(unknowns: usize) -> Self {
        SparseSystem { unknowns, ..Default::default() }
    }

    /// Adds the equation `Σ coeffs[j] x_j = rhs`.
    pub fn add_equation(&mut self, coeffs: impl IntoIterator<Item = (usize, Q)>, rhs: Q) -> Result<()> {
        let mut row = BTreeMap::new();
        for (j, c) in coeffs {
            if j >= self.unknowns {
                return Err(Error::InvalidInput(format!("unknown {j} out of range")));
            }
            add_into(&mut row, j, c);
        }
        add_into(&mut row, RHS, rhs);
        self.rows_seen += 1;
        loop {
            let lead = match row.keys().next() {
                None => return Ok(()),
                Some(&RHS) => {
                    self.inconsistent.get_or_insert(self.rows_seen - 1);
                    return Ok(());
                }
                Some(&j) => j,
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let f = -row[&lead].clone();
                    for (k, c) in p {
                        add_into(&mut row, *k, c * &f);
                    }
                }
                None => {
                    let inv = Q::one() / &row[&lead];
                    for c in row.values_mut() {
                        *c *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return Ok(());
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.unknowns - self.rank()
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent.is_none()
    }

    /// One solution, with every free unknown set to zero.
    pub fn solve(&self) -> Result<Vec<Q>> {
        if let Some(row) = self.inconsistent {
            return Err(Error::Infeasible(format!("equation {row} reduces to 0 = nonzero")));
        }
        let mut x = vec![Q::zero(); self.unknowns];
        for (&p, row) in self.pivots.iter().rev() {
            let mut v = row.get(&RHS).cloned().unwrap_or_else(Q::zero);
            for (&k, c) in row.range(p + 1..RHS) {
                v -= c * &x[k];
            }
            x[p] = v;
        }
        Ok(x)
    }
}

/// Rank of a list of sparse vectors.
pub fn rank<K: Ord + Clone>(vectors: &[BTreeMap<K, Q>]) -> usize {
    let keys: BTreeMap<K, usize> = vectors
        .iter()
        .flat_map(|v| v.keys().cloned())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let mut sys = SparseSystem::new(keys.len());
    for v in vectors {
        sys.add_equation(v.iter().map(|(k, c)| (keys[k], c.clone())), Q::zero())
            .expect("indices are in range");
    }
    sys.rank()
}
