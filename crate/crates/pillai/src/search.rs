//! Exhaustive search for integers with repeated representations as a
//! difference of convergent denominators.
//!
//! Within a window `N <= n_max`, `M <= m_max`, the integer
//! `c = q_{alpha,N} - q_{beta,M}` qualifies when two index pairs represent
//! it with BOTH coordinates different. Pairs sharing an index are cheap
//! coincidences (the denominator sequences repeat the value 1 at indices
//! 0 and 1, for instance) and do not count as distinct representations;
//! requiring both coordinates to differ is what makes the reported sets
//! finite and matches the published witness lists.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cfrac::ContinuedFraction;
use crate::convergents::q_sequence;
use crate::real::NumResult;

/// An integer with at least two distinct representations, listing every
/// index pair in the window that produces it, sorted by `(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRepRecord {
    pub c: BigInt,
    pub reps: Vec<(usize, usize)>,
}

impl MultiRepRecord {
    /// True when some listed pair matches in neither coordinate with
    /// another, i.e. the record's qualification re-derived from its reps.
    pub fn has_distinct_pair(&self) -> bool {
        let mut n_seen = self.reps.iter().map(|r| r.0).collect::<Vec<_>>();
        let mut m_seen = self.reps.iter().map(|r| r.1).collect::<Vec<_>>();
        n_seen.sort_unstable();
        n_seen.dedup();
        m_seen.sort_unstable();
        m_seen.dedup();
        // two pairs differing in both coordinates exist iff neither
        // coordinate is constant across the record
        n_seen.len() > 1 && m_seen.len() > 1
    }
}

/// All integers in the window with two distinct representations
/// `q_{alpha,N} - q_{beta,M}`, sorted by value.
pub fn multi_rep_search(
    cf_a: &ContinuedFraction,
    cf_b: &ContinuedFraction,
    n_max: usize,
    m_max: usize,
) -> Vec<MultiRepRecord> {
    let qa = q_sequence(cf_a, n_max);
    let qb = q_sequence(cf_b, m_max);
    let qa = qa.values();
    let qb = qb.values();

    let grouped: HashMap<BigInt, Vec<(usize, usize)>> = qa
        .par_iter()
        .enumerate()
        .fold(HashMap::new, |mut acc: HashMap<BigInt, Vec<(usize, usize)>>, (n, qan)| {
            for (m, qbm) in qb.iter().enumerate() {
                acc.entry(qan - qbm).or_default().push((n, m));
            }
            acc
        })
        .reduce(HashMap::new, |mut left, right| {
            for (c, mut reps) in right {
                left.entry(c).or_default().append(&mut reps);
            }
            left
        });

    let mut records: Vec<MultiRepRecord> = grouped
        .into_iter()
        .filter_map(|(c, mut reps)| {
            reps.sort_unstable();
            let record = MultiRepRecord { c, reps };
            record.has_distinct_pair().then_some(record)
        })
        .collect();
    records.sort_unstable_by(|x, y| x.c.cmp(&y.c));
    records
}

/// Check a single claimed representation `q_{alpha,n} - q_{beta,m} = c`.
pub fn verify_representation(
    cf_a: &ContinuedFraction,
    cf_b: &ContinuedFraction,
    c: &BigInt,
    n: usize,
    m: usize,
) -> NumResult<bool> {
    let qa = q_sequence(cf_a, n);
    let qb = q_sequence(cf_b, m);
    Ok(qa.value(n)? - qb.value(m)? == *c)
}
