//! Symmetric input matrices, their zero pattern, and the group partition.

use std::collections::BTreeMap;

use crate::bitset::Bitset;
use crate::error::{Error, Result};

/// A real-valued symmetric `n x n` matrix.
///
/// Symmetry is checked on construction. Dense storage is row-major; sparse
/// storage keeps only the upper triangle (including the diagonal) and treats
/// every missing entry as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    storage: Storage,
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    Dense(Vec<f64>),
    Sparse(BTreeMap<(usize, usize), f64>),
}

impl SymmetricMatrix {
    /// Builds from row-major entries. The first asymmetric pair in row-major
    /// order over the strict upper triangle is reported.
    pub fn from_dense(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        assert_eq!(entries.len(), n * n, "dense storage needs n*n entries");
        for i in 0..n {
            for j in 0..n {
                let v = entries[i * n + j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i + 1, col: j + 1 });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::Asymmetric { row: i + 1, col: j + 1 });
                }
            }
        }
        Ok(SymmetricMatrix {
            n,
            storage: Storage::Dense(entries),
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i + 1,
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::from_dense(n, entries)
    }

    /// Builds sparse storage from 0-based `(i, j, value)` triplets. A pair may
    /// be given once or in both orientations; both orientations must agree.
    pub fn from_triplets<I>(n: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut map = BTreeMap::new();
        for (i, j, v) in triplets {
            for unit in [i, j] {
                if unit >= n {
                    return Err(Error::UnitOutOfRange { unit: unit + 1, n });
                }
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i + 1, col: j + 1 });
            }
            let key = (i.min(j), i.max(j));
            if let Some(&prev) = map.get(&key) {
                if prev != v {
                    return Err(Error::Asymmetric {
                        row: key.0 + 1,
                        col: key.1 + 1,
                    });
                }
            }
            map.insert(key, v);
        }
        Ok(SymmetricMatrix {
            n,
            storage: Storage::Sparse(map),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index ({i},{j}) out of range");
        match &self.storage {
            Storage::Dense(entries) => entries[i * self.n + j],
            Storage::Sparse(map) => map.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Relabels units: unit `i` becomes unit `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> SymmetricMatrix {
        assert_eq!(perm.len(), self.n);
        let mut entries = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[perm[i] * self.n + perm[j]] = self.get(i, j);
            }
        }
        SymmetricMatrix {
            n: self.n,
            storage: Storage::Dense(entries),
        }
    }
}

/// Absolute threshold at or below which an entry counts as zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance(0.0);

    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::InvalidTolerance(epsilon));
        }
        Ok(Tolerance(epsilon))
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self, value: f64) -> bool {
        value.abs() <= self.0
    }
}

/// For each unit `i`, the set `Z(i)` of units `j != i` with a zero entry
/// `(i, j)`. Symmetric, diagonal never set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPattern {
    rows: Vec<Bitset>,
}

impl ZeroPattern {
    pub fn build(matrix: &SymmetricMatrix, tol: Tolerance) -> ZeroPattern {
        let n = matrix.n;
        match &matrix.storage {
            Storage::Dense(entries) => {
                let mut rows = vec![Bitset::new(n); n];
                for i in 0..n {
                    for j in i + 1..n {
                        if tol.is_zero(entries[i * n + j]) {
                            rows[i].insert(j);
                            rows[j].insert(i);
                        }
                    }
                }
                ZeroPattern { rows }
            }
            Storage::Sparse(map) => {
                let mut rows: Vec<Bitset> = (0..n)
                    .map(|i| {
                        let mut row = Bitset::full(n);
                        row.remove(i);
                        row
                    })
                    .collect();
                for (&(i, j), &v) in map {
                    if i != j && !tol.is_zero(v) {
                        rows[i].remove(j);
                        rows[j].remove(i);
                    }
                }
                ZeroPattern { rows }
            }
        }
    }

    /// Builds directly from 0-based zero pairs. Diagonal pairs are ignored.
    pub fn from_zero_pairs<I>(n: usize, pairs: I) -> Result<ZeroPattern>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut rows = vec![Bitset::new(n); n];
        for (i, j) in pairs {
            for unit in [i, j] {
                if unit >= n {
                    return Err(Error::UnitOutOfRange { unit: unit + 1, n });
                }
            }
            if i != j {
                rows[i].insert(j);
                rows[j].insert(i);
            }
        }
        Ok(ZeroPattern { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// `Z(i)`.
    #[inline]
    pub fn zeros(&self, i: usize) -> &Bitset {
        &self.rows[i]
    }

    #[inline]
    pub fn is_zero(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// Total number of unordered zero pairs.
    pub fn zero_pairs(&self) -> usize {
        self.rows.iter().map(Bitset::count).sum::<usize>() / 2
    }

    pub fn permuted(&self, perm: &[usize]) -> ZeroPattern {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut rows = vec![Bitset::new(n); n];
        for (i, row) in self.rows.iter().enumerate() {
            for j in row {
                rows[perm[i]].insert(perm[j]);
            }
        }
        ZeroPattern { rows }
    }

    pub(crate) fn check_unit(&self, unit: usize) -> Result<()> {
        if unit >= self.n() {
            return Err(Error::UnitOutOfRange {
                unit: unit + 1,
                n: self.n(),
            });
        }
        Ok(())
    }
}

/// A partition of units `0..n` into `k >= 2` nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    labels: Vec<usize>,
    members: Vec<Vec<usize>>,
    member_sets: Vec<Bitset>,
}

impl Grouping {
    /// `labels[i]` is the 0-based group of unit `i`.
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Grouping> {
        if k < 2 {
            return Err(Error::TooFewGroups(k));
        }
        let n = labels.len();
        let mut members = vec![Vec::new(); k];
        for (unit, &label) in labels.iter().enumerate() {
            if label >= k {
                return Err(Error::InvalidLabel {
                    unit: unit + 1,
                    label: label + 1,
                    k,
                });
            }
            members[label].push(unit);
        }
        if let Some(empty) = members.iter().position(Vec::is_empty) {
            return Err(Error::EmptyGroup(empty + 1));
        }
        let member_sets = members
            .iter()
            .map(|m| Bitset::from_indices(n, m.iter().copied()))
            .collect();
        Ok(Grouping {
            labels,
            members,
            member_sets,
        })
    }

    /// Infers `k` as the largest label plus one.
    pub fn from_labels(labels: Vec<usize>) -> Result<Grouping> {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        Grouping::new(labels, k)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn group_of(&self, unit: usize) -> usize {
        self.labels[unit]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn members(&self, group: usize) -> &[usize] {
        &self.members[group]
    }

    pub fn member_set(&self, group: usize) -> &Bitset {
        &self.member_sets[group]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    pub fn permuted(&self, perm: &[usize]) -> Grouping {
        assert_eq!(perm.len(), self.n());
        let mut labels = vec![0; self.n()];
        for (i, &label) in self.labels.iter().enumerate() {
            labels[perm[i]] = label;
        }
        Grouping::new(labels, self.k()).expect("permutation preserves a valid partition")
    }
}

pub(crate) fn check_consistent(z: &ZeroPattern, g: &Grouping) -> Result<()> {
    if z.n() != g.n() {
        return Err(Error::SizeMismatch {
            matrix: z.n(),
            grouping: g.n(),
        });
    }
    Ok(())
}

/// Number of zeros of unit `i` toward units of the other groups.
pub fn zeros_toward_other_groups(z: &ZeroPattern, g: &Grouping, i: usize) -> Result<usize> {
    check_consistent(z, g)?;
    z.check_unit(i)?;
    Ok(cross_group_zeros(z, g, i))
}

#[inline]
pub(crate) fn cross_group_zeros(z: &ZeroPattern, g: &Grouping, i: usize) -> usize {
    let row = z.zeros(i);
    row.count() - row.intersection_count(g.member_set(g.group_of(i)))
}
