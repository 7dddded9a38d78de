//! Sweeps over every triple `(n, I, J, K)` of a given size.

use rayon::prelude::*;

use crate::hive::{enumerate_measures, subsets};
use crate::measure::{BoundaryData, SetTriple, TriMeasure};
use crate::trilattice::Chirality;

/// Every triple of equal-size subsets of `1..=n`, for `r` in `0..=n`.
pub fn all_triples(n: u32) -> Vec<SetTriple> {
    let mut out = Vec::new();
    for r in 0..=n {
        let subs = subsets(n, r);
        for i in &subs {
            for j in &subs {
                for k in &subs {
                    out.push(SetTriple { n, i: i.clone(), j: j.clone(), k: k.clone() });
                }
            }
        }
    }
    out
}

/// Triples passing the trace identity, the only ones that can carry measures.
pub fn balanced_triples(n: u32) -> Vec<SetTriple> {
    all_triples(n).into_iter().filter(SetTriple::trace_identity).collect()
}

/// One census row: a problem and every integer measure solving it.
#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub triple: SetTriple,
    pub measures: Vec<TriMeasure>,
}

impl CensusEntry {
    pub fn lr(&self) -> u64 {
        self.measures.len() as u64
    }
}

/// All nonempty problems with `1 <= n <= n_max`, in a deterministic order.
pub fn measure_census(n_max: u32) -> Vec<CensusEntry> {
    (1..=n_max)
        .flat_map(balanced_triples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|triple| {
            let measures = enumerate_measures(&BoundaryData::from_sets(&triple, Chirality::Plus));
            CensusEntry { triple, measures }
        })
        .filter(|e| !e.measures.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_counts() {
        // Σ_r C(3,r)^3 = 1 + 27 + 27 + 1.
        assert_eq!(all_triples(3).len(), 56);
        assert!(balanced_triples(3).iter().all(|t| t.trace_identity()));
    }

    #[test]
    fn small_census_is_consistent() {
        for e in measure_census(3) {
            for m in &e.measures {
                assert_eq!(m.sets().unwrap(), e.triple);
            }
        }
    }
}
