//! Candidate selection, identity-submatrix counting, and per-group maxima.

use std::cmp::Reverse;

use rayon::prelude::*;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::matrix::{check_consistent, cross_group_zeros, Grouping, ZeroPattern};

/// A unit together with its number of zeros toward the other groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub unit: usize,
    pub cross_zeros: usize,
}

/// Per group, up to `m_bar` candidate units ordered by cross-group zero
/// count (descending), ties by unit index (ascending). Units without any
/// cross-group zero are never candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    m_bar: usize,
    groups: Vec<Vec<Candidate>>,
}

impl CandidateSet {
    pub fn m_bar(&self) -> usize {
        self.m_bar
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, group: usize) -> &[Candidate] {
        &self.groups[group]
    }

    pub fn groups(&self) -> &[Vec<Candidate>] {
        &self.groups
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn units(&self, group: usize) -> Vec<usize> {
        self.groups[group].iter().map(|c| c.unit).collect()
    }
}

fn check_m_bar(m_bar: usize) -> Result<()> {
    if m_bar == 0 {
        return Err(Error::InvalidMBar);
    }
    Ok(())
}

pub fn select_candidates(z: &ZeroPattern, g: &Grouping, m_bar: usize) -> Result<CandidateSet> {
    check_m_bar(m_bar)?;
    check_consistent(z, g)?;
    let groups = (0..g.k())
        .map(|group| {
            let mut ranked: Vec<Candidate> = g
                .members(group)
                .iter()
                .map(|&unit| Candidate {
                    unit,
                    cross_zeros: cross_group_zeros(z, g, unit),
                })
                .filter(|c| c.cross_zeros > 0)
                .collect();
            ranked.sort_by_key(|c| (Reverse(c.cross_zeros), c.unit));
            ranked.truncate(m_bar);
            ranked
        })
        .collect();
    Ok(CandidateSet { m_bar, groups })
}

/// Units of the other groups that have a zero against `candidate`, split by
/// group. The candidate's own group holds an empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSet {
    candidate: usize,
    group: usize,
    members: Vec<Bitset>,
}

impl PSet {
    pub fn candidate(&self) -> usize {
        self.candidate
    }

    pub fn group(&self) -> usize {
        self.group
    }

    pub fn members(&self, group: usize) -> &Bitset {
        &self.members[group]
    }

    /// Member sets of the other groups, in group order.
    pub fn other_groups(&self) -> impl Iterator<Item = (usize, &Bitset)> {
        self.members
            .iter()
            .enumerate()
            .filter(move |&(l, _)| l != self.group)
    }

    pub fn len(&self) -> usize {
        self.members.iter().map(Bitset::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().all(Bitset::is_empty)
    }
}

pub fn build_p_set(z: &ZeroPattern, g: &Grouping, candidate: usize) -> Result<PSet> {
    check_consistent(z, g)?;
    z.check_unit(candidate)?;
    Ok(p_set(z, g, candidate))
}

fn p_set(z: &ZeroPattern, g: &Grouping, candidate: usize) -> PSet {
    let own = g.group_of(candidate);
    let row = z.zeros(candidate);
    let members = (0..g.k())
        .map(|l| {
            if l == own {
                Bitset::new(z.n())
            } else {
                let mut set = row.clone();
                set.intersect_with(g.member_set(l));
                set
            }
        })
        .collect();
    PSet {
        candidate,
        group: own,
        members,
    }
}

/// Number of identity submatrices containing the P-set's candidate: tuples
/// with one member from each other group's set such that every pair in the
/// tuple (not only pairs with the candidate) is a zero.
pub fn count_identity_submatrices(z: &ZeroPattern, g: &Grouping, p: &PSet) -> u64 {
    debug_assert_eq!(z.n(), g.n());
    let mut sets: Vec<&Bitset> = p.other_groups().map(|(_, s)| s).collect();
    if sets.iter().any(|s| s.is_empty()) {
        return 0;
    }
    // Smallest sets first: fewer branches near the root, earlier pruning.
    sets.sort_by_key(|s| s.count());

    match sets.len() {
        0 => 0,
        1 => sets[0].count() as u64,
        _ => {
            let (first, rest) = sets.split_first().expect("at least two sets");
            let rest: Vec<Bitset> = rest.iter().map(|&s| s.clone()).collect();
            let depth = rest.len().saturating_sub(1);
            let mut scratch: Vec<Vec<Bitset>> = (0..depth)
                .map(|d| vec![Bitset::new(z.n()); rest.len() - 1 - d])
                .collect();
            extend_tuples(z, first, &rest, &mut scratch)
        }
    }
}

/// Counts tuples choosing `u` from `first` and one compatible unit from each
/// of `rest`, where compatibility is narrowed by `Z(u)` at every level.
fn extend_tuples(z: &ZeroPattern, first: &Bitset, rest: &[Bitset], scratch: &mut [Vec<Bitset>]) -> u64 {
    if rest.len() == 1 {
        let last = &rest[0];
        return first
            .iter()
            .map(|u| last.intersection_count(z.zeros(u)) as u64)
            .sum();
    }
    let (buf, deeper) = scratch
        .split_first_mut()
        .expect("scratch sized to tuple depth");
    let (next, tail) = rest.split_first().expect("rest has at least two sets");
    let mut total = 0;
    let mut next_narrowed = Bitset::new(z.n());
    'units: for u in first {
        let zu = z.zeros(u);
        if !next_narrowed.assign_intersection(next, zu) {
            continue;
        }
        for (dst, src) in buf.iter_mut().zip(tail) {
            if !dst.assign_intersection(src, zu) {
                continue 'units;
            }
        }
        total += extend_tuples(z, &next_narrowed, buf, deeper);
    }
    total
}

/// A candidate with its identity-submatrix count `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoredCandidate {
    pub unit: usize,
    pub cross_zeros: usize,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Found,
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupOutcome {
    pub group: usize,
    /// Every examined candidate, in candidate order.
    pub candidates: Vec<ScoredCandidate>,
    /// The argmax of `count` (lowest unit index on ties), if its count is positive.
    pub maximum: Option<ScoredCandidate>,
}

impl GroupOutcome {
    pub fn status(&self) -> Status {
        if self.maximum.is_some() {
            Status::Found
        } else {
            Status::NotFound
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotResult {
    pub m_bar: usize,
    pub groups: Vec<GroupOutcome>,
    /// Whether the selected units form an identity submatrix. Always false
    /// unless every group was found.
    pub identity_verified: bool,
}

impl PivotResult {
    pub fn all_found(&self) -> bool {
        self.groups.iter().all(|g| g.maximum.is_some())
    }

    /// The selected unit of every group, when all were found.
    pub fn maxima(&self) -> Option<Vec<usize>> {
        self.groups
            .iter()
            .map(|g| g.maximum.map(|m| m.unit))
            .collect()
    }

    pub fn selected(&self, group: usize) -> Option<usize> {
        self.groups[group].maximum.map(|m| m.unit)
    }

    pub fn candidate_lengths(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.candidates.len()).collect()
    }
}

fn score(z: &ZeroPattern, g: &Grouping, c: &Candidate) -> ScoredCandidate {
    let p = p_set(z, g, c.unit);
    ScoredCandidate {
        unit: c.unit,
        cross_zeros: c.cross_zeros,
        count: count_identity_submatrices(z, g, &p),
    }
}

fn assemble(z: &ZeroPattern, m_bar: usize, scored: Vec<Vec<ScoredCandidate>>) -> PivotResult {
    let groups: Vec<GroupOutcome> = scored
        .into_iter()
        .enumerate()
        .map(|(group, candidates)| {
            let maximum = candidates
                .iter()
                .filter(|c| c.count > 0)
                .max_by_key(|c| (c.count, Reverse(c.unit)))
                .copied();
            GroupOutcome {
                group,
                candidates,
                maximum,
            }
        })
        .collect();
    let identity_verified = groups
        .iter()
        .map(|g| g.maximum.map(|m| m.unit))
        .collect::<Option<Vec<usize>>>()
        .is_some_and(|units| is_identity(z, &units));
    PivotResult {
        m_bar,
        groups,
        identity_verified,
    }
}

/// Runs candidate selection, counting, and per-group argmax.
pub fn select_maxima(z: &ZeroPattern, g: &Grouping, m_bar: usize) -> Result<PivotResult> {
    let candidates = select_candidates(z, g, m_bar)?;
    let scored = candidates
        .groups
        .iter()
        .map(|group| group.iter().map(|c| score(z, g, c)).collect())
        .collect();
    Ok(assemble(z, m_bar, scored))
}

/// Same result as [`select_maxima`], with candidates counted on the rayon pool.
pub fn select_maxima_par(z: &ZeroPattern, g: &Grouping, m_bar: usize) -> Result<PivotResult> {
    let candidates = select_candidates(z, g, m_bar)?;
    let flat: Vec<(usize, Candidate)> = candidates
        .groups
        .iter()
        .enumerate()
        .flat_map(|(group, cs)| cs.iter().map(move |&c| (group, c)))
        .collect();
    let counted: Vec<(usize, ScoredCandidate)> = flat
        .par_iter()
        .map(|(group, c)| (*group, score(z, g, c)))
        .collect();
    let mut scored = vec![Vec::new(); g.k()];
    for (group, s) in counted {
        scored[group].push(s);
    }
    Ok(assemble(z, m_bar, scored))
}

fn is_identity(z: &ZeroPattern, units: &[usize]) -> bool {
    units
        .iter()
        .enumerate()
        .all(|(i, &a)| units[i + 1..].iter().all(|&b| z.is_zero(a, b)))
}

/// Whether the submatrix on `units` (one per group) has only zeros off the
/// diagonal.
pub fn verify_identity(z: &ZeroPattern, g: &Grouping, units: &[usize]) -> Result<bool> {
    check_consistent(z, g)?;
    for (i, &a) in units.iter().enumerate() {
        z.check_unit(a)?;
        for &b in &units[..i] {
            if a == b {
                return Err(Error::DuplicateUnit(a + 1));
            }
            if g.group_of(a) == g.group_of(b) {
                return Err(Error::SharedGroup {
                    first: b + 1,
                    second: a + 1,
                });
            }
        }
    }
    Ok(is_identity(z, units))
}
