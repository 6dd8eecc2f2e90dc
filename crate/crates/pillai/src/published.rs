//! Published reference values bundled with the crate.
//!
//! The reproduction suite compares recomputed quantities against this data
//! rather than against constants scattered through test code. Every claim
//! in the file carries a `relation` describing how the printed value sits
//! relative to a certified recomputation: most are exact or truncations;
//! the known divergences (a misprinted coefficient, four bounds printed
//! one above the tight floor) are tagged so tests can assert them
//! precisely instead of papering over them.

use std::sync::LazyLock;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::reduction::{Ladder, RowSpec, TableId};

const RAW: &str = include_str!("../data/published_values.json");

/// Parsed bundle, loaded once.
pub static PUBLISHED: LazyLock<Published> =
    LazyLock::new(|| serde_json::from_str(RAW).expect("bundled reference data parses"));

#[derive(Debug, Deserialize)]
pub struct Published {
    pub pair: (i64, i64),
    pub m_decimal: String,
    pub m_sci: String,
    pub gamma_cf_prefix: Vec<i64>,
    pub ladder_first_admissible: LadderStart,
    pub matveev: MatveevClaim,
    pub chain: ChainClaim,
    pub petho: PethoClaim,
    pub theorem12: Theorem12Claim,
    pub legendre: LegendreClaim,
    pub tables: Vec<TableClaim>,
    pub search_window: SearchWindow,
    pub solution_sets: Vec<SolutionSet>,
}

#[derive(Debug, Deserialize)]
pub struct LadderStart {
    pub direct: usize,
    pub reciprocal: usize,
}

#[derive(Debug, Deserialize)]
pub struct MatveevClaim {
    pub t: u32,
    pub d: u32,
    pub c_window: (String, String),
}

#[derive(Debug, Deserialize)]
pub struct ChainClaim {
    pub first: ChainEntry,
    pub second: ChainEntry,
    pub third: ChainEntry,
    pub rounded: RoundedChain,
}

#[derive(Debug, Deserialize)]
pub struct ChainEntry {
    pub printed: String,
    pub certified_5sig: String,
    pub relation: String,
}

#[derive(Debug, Deserialize)]
pub struct RoundedChain {
    pub first: String,
    pub second: String,
    pub third: String,
    pub absorbed: String,
    pub cube_root: String,
}

#[derive(Debug, Deserialize)]
pub struct PethoClaim {
    pub p: u32,
    pub c: u32,
    pub factor_small: i64,
    pub factor_large: String,
    pub product: String,
}

#[derive(Debug, Deserialize)]
pub struct Theorem12Claim {
    pub n1_printed: String,
    pub n1_certified_window: (String, String),
    pub max_certified_window: (String, String),
    pub inner_constant: String,
    pub outer_constant: String,
}

#[derive(Debug, Deserialize)]
pub struct LegendreClaim {
    pub prev_index: usize,
    pub last_index: usize,
    pub gap_floor: String,
    pub n1_bound: u64,
    pub m1_bound: u64,
    pub n1_from_m1: u64,
    pub n1_final: u64,
    pub big_n_final: u64,
}

#[derive(Debug, Deserialize)]
pub struct TableClaim {
    pub id: String,
    pub a1_hundredths: i64,
    pub a1_theta_alpha_factor: bool,
    pub num_tail: Option<i64>,
    pub den_tail: Option<i64>,
    pub bounds: Vec<BoundClaim>,
    pub rows: Vec<RowClaim>,
}

#[derive(Debug, Deserialize)]
pub struct BoundClaim {
    pub quantity: String,
    pub a2: String,
}

#[derive(Debug, Deserialize)]
pub struct RowClaim {
    pub c: Vec<usize>,
    pub sign: String,
    pub ladder: String,
    pub q_index: usize,
    pub smallest_certifying: usize,
    pub epsilon: String,
    pub cells: Vec<CellClaim>,
    #[serde(default)]
    pub excluded_cells: Vec<(i64, i64)>,
}

#[derive(Debug, Deserialize)]
pub struct CellClaim {
    pub printed_k: i64,
    pub relation: String,
    pub x_window: (f64, f64),
}

#[derive(Debug, Deserialize)]
pub struct SearchWindow {
    pub n_max: usize,
    pub m_max: usize,
}

#[derive(Debug, Deserialize)]
pub struct SolutionSet {
    pub pair: (i64, i64),
    pub c_set: Vec<i64>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Deserialize)]
pub struct Witness {
    pub c: i64,
    pub reps: Vec<(usize, usize)>,
    pub values: Vec<(i64, i64)>,
}

impl Published {
    /// The solution-count bound `M` as an exact integer.
    pub fn m(&self) -> BigInt {
        self.m_decimal.parse().expect("bundled M is a decimal integer")
    }

    pub fn table(&self, id: &str) -> Option<&TableClaim> {
        self.tables.iter().find(|t| t.id == id)
    }

    pub fn solution_set(&self, a: i64, b: i64) -> Option<&SolutionSet> {
        self.solution_sets.iter().find(|s| s.pair == (a, b))
    }
}

impl TableClaim {
    pub fn table_id(&self) -> TableId {
        match self.id.as_str() {
            "1" => TableId::One,
            "2.1" => TableId::TwoOne,
            "2.2" => TableId::TwoTwo,
            "3" => TableId::Three,
            other => panic!("unknown table id {other:?} in bundled data"),
        }
    }
}

impl RowClaim {
    pub fn is_minus(&self) -> bool {
        self.sign == "-"
    }

    pub fn ladder(&self) -> Ladder {
        match self.ladder.as_str() {
            "direct" => Ladder::Direct,
            "reciprocal" => Ladder::Reciprocal,
            other => panic!("unknown ladder {other:?} in bundled data"),
        }
    }

    pub fn spec(&self, table: &TableClaim) -> RowSpec {
        RowSpec {
            table: table.table_id(),
            c: self.c.clone(),
            minus: self.is_minus(),
            ladder: self.ladder(),
        }
    }

    /// Decimal places of the printed correction.
    pub fn epsilon_decimals(&self) -> u32 {
        self.epsilon.split('.').nth(1).map_or(0, |d| d.len() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::standard_ladder;
    use num_traits::Zero;

    #[test]
    fn bundle_parses_with_expected_shape() {
        let p = &*PUBLISHED;
        assert_eq!(p.pair, (2, 3));
        let row_counts: Vec<usize> = p.tables.iter().map(|t| t.rows.len()).collect();
        assert_eq!(row_counts, vec![8, 16, 16, 32]);
        let cells: usize = p.tables.iter().flat_map(|t| &t.rows).map(|r| r.cells.len()).sum();
        assert_eq!(cells, 80);
        let slack: Vec<(&str, &[usize], &str)> = p
            .tables
            .iter()
            .flat_map(|t| t.rows.iter().map(move |r| (t, r)))
            .filter(|(_, r)| r.cells.iter().any(|c| c.relation == "printed_exceeds_tight_by_one"))
            .map(|(t, r)| (t.id.as_str(), r.c.as_slice(), r.sign.as_str()))
            .collect();
        assert_eq!(
            slack,
            vec![
                ("2.2", &[0usize, 0, 0][..], "-"),
                ("2.2", &[0, 1, 0][..], "-"),
                ("3", &[0, 0, 0, 0][..], "-"),
                ("3", &[0, 1, 0, 0][..], "+"),
            ]
        );
    }

    #[test]
    fn m_parses_and_matches_scientific_form() {
        let m = PUBLISHED.m();
        assert_eq!(m, BigInt::from(39) * BigInt::from(10).pow(50));
        assert_eq!(PUBLISHED.m_sci, "3.9e51");
        assert!(!m.is_zero());
    }

    #[test]
    fn ladder_column_follows_the_sign_rule() {
        for table in &PUBLISHED.tables {
            for row in &table.rows {
                assert_eq!(
                    row.ladder(),
                    standard_ladder(table.table_id(), row.is_minus()),
                    "table {} row {:?} {}",
                    table.id,
                    row.c,
                    row.sign
                );
            }
        }
    }

    #[test]
    fn witness_lists_are_internally_consistent() {
        for set in &PUBLISHED.solution_sets {
            assert!(set.c_set.windows(2).all(|w| w[0] < w[1]), "c sets are sorted");
            let listed: Vec<i64> = set.witnesses.iter().map(|w| w.c).collect();
            let mut sorted = listed.clone();
            sorted.sort();
            assert_eq!(sorted, set.c_set, "one witness entry per c");
            for w in &set.witnesses {
                assert_eq!(w.reps.len(), 2);
                assert_eq!(w.values.len(), 2);
                let (n1, m1) = w.reps[0];
                let (n2, m2) = w.reps[1];
                assert!(n1 != n2 && m1 != m2, "displayed pairs differ in both indices");
                for ((_, _), (va, vb)) in w.reps.iter().zip(&w.values) {
                    assert_eq!(va - vb, w.c);
                }
            }
        }
    }

    #[test]
    fn excluded_cells_appear_only_on_the_all_ones_row() {
        for table in &PUBLISHED.tables {
            for row in &table.rows {
                if row.excluded_cells.is_empty() {
                    continue;
                }
                assert_eq!(table.id, "3");
                assert_eq!(row.c, vec![1, 1, 1, 1]);
                assert_eq!(row.excluded_cells, vec![(2, 2)]);
            }
        }
    }

    #[test]
    fn smallest_certifying_never_exceeds_published_choice() {
        for table in &PUBLISHED.tables {
            for row in &table.rows {
                assert!(
                    row.smallest_certifying <= row.q_index,
                    "table {} row {:?}",
                    table.id,
                    row.c
                );
            }
        }
    }
}
