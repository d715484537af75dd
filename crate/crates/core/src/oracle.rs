//! Brute-force reference for the identity-submatrix counts.
//!
//! Nothing here goes through P-sets, bitset intersections, or pruning: every
//! combination of one unit per group is tested pair by pair. Only usable on
//! small instances.

use crate::error::{Error, Result};
use crate::matrix::{check_consistent, Grouping, ZeroPattern};

/// Maximum number of tuple tests an oracle call may perform.
pub const DEFAULT_TUPLE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Size guard on the number of tuples enumerated.
    pub tuple_limit: u128,
    /// How many identity tuples [`oracle_maxima`] keeps in its report.
    pub max_listed_tuples: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            tuple_limit: DEFAULT_TUPLE_LIMIT,
            max_listed_tuples: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMaximum {
    /// Largest count in the group (0 if no unit takes part in any tuple).
    pub count: u64,
    /// Units reaching `count`, ascending; empty when `count` is 0.
    pub units: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Exact count for every unit.
    pub unit_counts: Vec<u64>,
    /// Identity tuples in lexicographic group order, one unit per group.
    pub tuples: Vec<Vec<usize>>,
    /// True when more than `max_listed_tuples` tuples exist.
    pub truncated: bool,
    pub total_tuples: u64,
    pub group_maxima: Vec<GroupMaximum>,
}

fn guard(product: u128, limit: u128) -> Result<()> {
    if product > limit {
        return Err(Error::OracleTooLarge {
            tuples: product,
            limit,
        });
    }
    Ok(())
}

/// Calls `visit` on every tuple with one unit from each of `groups`.
fn for_each_tuple(groups: &[&[usize]], mut visit: impl FnMut(&[usize])) {
    if groups.iter().any(|g| g.is_empty()) {
        return;
    }
    let mut odometer = vec![0usize; groups.len()];
    let mut tuple: Vec<usize> = groups.iter().map(|g| g[0]).collect();
    loop {
        visit(&tuple);
        let mut pos = groups.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < groups[pos].len() {
                tuple[pos] = groups[pos][odometer[pos]];
                break;
            }
            odometer[pos] = 0;
            tuple[pos] = groups[pos][0];
        }
    }
}

fn all_pairs_zero(z: &ZeroPattern, units: &[usize]) -> bool {
    for a in 0..units.len() {
        for b in 0..units.len() {
            if a != b && !z.is_zero(units[a], units[b]) {
                return false;
            }
        }
    }
    true
}

/// Exact count of identity submatrices containing `unit`, by exhaustive
/// enumeration over the full other groups.
pub fn oracle_count(z: &ZeroPattern, g: &Grouping, unit: usize) -> Result<u64> {
    oracle_count_with(z, g, unit, DEFAULT_TUPLE_LIMIT)
}

pub fn oracle_count_with(z: &ZeroPattern, g: &Grouping, unit: usize, limit: u128) -> Result<u64> {
    check_consistent(z, g)?;
    if unit >= z.n() {
        return Err(Error::UnitOutOfRange {
            unit: unit + 1,
            n: z.n(),
        });
    }
    let own = g.group_of(unit);
    let others: Vec<&[usize]> = (0..g.k()).filter(|&l| l != own).map(|l| g.members(l)).collect();
    guard(others.iter().map(|m| m.len() as u128).product(), limit)?;

    let mut count = 0u64;
    let mut full = Vec::with_capacity(g.k());
    for_each_tuple(&others, |tuple| {
        full.clear();
        full.push(unit);
        full.extend_from_slice(tuple);
        if all_pairs_zero(z, &full) {
            count += 1;
        }
    });
    Ok(count)
}

/// Enumerates every one-unit-per-group tuple, tallies per-unit counts, and
/// reports each group's argmax set over all of its units.
pub fn oracle_maxima(z: &ZeroPattern, g: &Grouping, opts: OracleOptions) -> Result<OracleReport> {
    check_consistent(z, g)?;
    let groups: Vec<&[usize]> = (0..g.k()).map(|l| g.members(l)).collect();
    guard(groups.iter().map(|m| m.len() as u128).product(), opts.tuple_limit)?;

    let mut unit_counts = vec![0u64; z.n()];
    let mut tuples = Vec::new();
    let mut total_tuples = 0u64;
    for_each_tuple(&groups, |tuple| {
        if all_pairs_zero(z, tuple) {
            total_tuples += 1;
            for &u in tuple {
                unit_counts[u] += 1;
            }
            if tuples.len() < opts.max_listed_tuples {
                tuples.push(tuple.to_vec());
            }
        }
    });

    let group_maxima = groups
        .iter()
        .map(|members| {
            let count = members.iter().map(|&u| unit_counts[u]).max().unwrap_or(0);
            let units = if count == 0 {
                Vec::new()
            } else {
                members.iter().copied().filter(|&u| unit_counts[u] == count).collect()
            };
            GroupMaximum { count, units }
        })
        .collect();

    Ok(OracleReport {
        unit_counts,
        truncated: total_tuples as usize > tuples.len(),
        tuples,
        total_tuples,
        group_maxima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matrix::{SymmetricMatrix, Tolerance};

    #[test]
    fn fig1_unit_counts() {
        let z = ZeroPattern::build(&fixtures::fig1_matrix(), Tolerance::EXACT);
        let g = fixtures::fig1_grouping();
        assert_eq!(oracle_count(&z, &g, 5).unwrap(), 6);
        assert_eq!(oracle_count(&z, &g, 6).unwrap(), 0);
        let report = oracle_maxima(&z, &g, OracleOptions::default()).unwrap();
        assert_eq!(report.unit_counts, vec![2, 3, 3, 2, 0, 6, 0, 3, 5]);
        assert_eq!(report.group_maxima[0].units, vec![1, 2]);
        assert_eq!(report.group_maxima[0].count, 3);
        assert_eq!(report.group_maxima[1].units, vec![5]);
        assert_eq!(report.group_maxima[2].units, vec![8]);
        assert_eq!(report.group_maxima[2].count, 5);
    }

    #[test]
    fn tennis_maxima_sets() {
        let z = ZeroPattern::build(&fixtures::tennis_matrix(), Tolerance::EXACT);
        let g = fixtures::tennis_grouping();
        let report = oracle_maxima(&z, &g, OracleOptions::default()).unwrap();
        assert_eq!(report.group_maxima[0], GroupMaximum { count: 3, units: vec![5, 6] });
        assert_eq!(report.group_maxima[1], GroupMaximum { count: 5, units: vec![7] });
    }

    #[test]
    fn all_ones_has_no_tuples() {
        let m = SymmetricMatrix::from_dense(5, vec![1.0; 25]).unwrap();
        let z = ZeroPattern::build(&m, Tolerance::EXACT);
        let g = Grouping::from_labels(vec![0, 1, 0, 1, 1]).unwrap();
        for u in 0..5 {
            assert_eq!(oracle_count(&z, &g, u).unwrap(), 0);
        }
        let report = oracle_maxima(&z, &g, OracleOptions::default()).unwrap();
        assert!(report.group_maxima.iter().all(|m| m.units.is_empty() && m.count == 0));
        assert!(report.tuples.is_empty());
    }

    #[test]
    fn truncation_flag() {
        let z = ZeroPattern::from_zero_pairs(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let g = Grouping::from_labels(vec![0, 0, 1, 1]).unwrap();
        let opts = OracleOptions {
            max_listed_tuples: 3,
            ..OracleOptions::default()
        };
        let report = oracle_maxima(&z, &g, opts).unwrap();
        assert_eq!(report.total_tuples, 4);
        assert_eq!(report.tuples.len(), 3);
        assert!(report.truncated);
    }

    #[test]
    fn size_guard() {
        let z = ZeroPattern::from_zero_pairs(1000, []).unwrap();
        let g = Grouping::from_labels((0..1000).map(|i| i % 4).collect()).unwrap();
        let err = oracle_maxima(&z, &g, OracleOptions::default()).unwrap_err();
        assert!(matches!(err, Error::OracleTooLarge { .. }));
        let err = oracle_count_with(&z, &g, 0, 1000).unwrap_err();
        assert!(matches!(err, Error::OracleTooLarge { tuples: 15_625_000, limit: 1000 }));
    }
}
