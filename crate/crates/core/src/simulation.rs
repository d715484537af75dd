//! Seeded Bernoulli instances and the `(N, K, m_bar, p)` benchmark grid.
//!
//! Every random draw comes from `ChaCha8Rng` seeded with a 64-bit sub-seed.
//! Sub-seeds are derived from the master seed with a splitmix64 fold:
//!
//! * matrix:   `fold(master, [MATRIX_TAG, n, p_index, repetition])`
//! * grouping: `fold(master, [GROUPING_TAG, n, k, repetition])`
//!
//! so a given `(n, p, repetition)` matrix is shared by every `K` and `m_bar`
//! column, and a grouping by every `p` and `m_bar`. Any cell can be
//! recomputed in isolation.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::{Grouping, SymmetricMatrix, Tolerance, ZeroPattern};
use crate::search::select_maxima;

/// Redraws allowed before [`random_grouping`] gives up on an empty group.
pub const GROUPING_RETRIES: usize = 1000;

const MATRIX_TAG: u64 = 0x6d61_7472_6978; // "matrix"
const GROUPING_TAG: u64 = 0x6772_6f75_7073; // "groups"

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fold_seed(master: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(master), |acc, &part| splitmix64(acc ^ part))
}

pub fn matrix_seed(master: u64, n: usize, p_index: usize, repetition: usize) -> u64 {
    fold_seed(master, &[MATRIX_TAG, n as u64, p_index as u64, repetition as u64])
}

pub fn grouping_seed(master: u64, n: usize, k: usize, repetition: usize) -> u64 {
    fold_seed(master, &[GROUPING_TAG, n as u64, k as u64, repetition as u64])
}

fn check_probability(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// Symmetric 0/1 matrix: each strict-upper-triangle entry, filled row-major,
/// is 1 with probability `p` (one uniform `f64` draw per entry); the diagonal
/// is 1.
pub fn generate_bernoulli_matrix(n: usize, p: f64, seed: u64) -> Result<SymmetricMatrix> {
    check_probability(p)?;
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
        for j in i + 1..n {
            let v = if rng.gen::<f64>() < p { 1.0 } else { 0.0 };
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    SymmetricMatrix::from_dense(n, entries)
}

/// Assigns each unit a uniform label in `0..k`, redrawing the whole
/// assignment while any group is empty.
pub fn random_grouping(n: usize, k: usize, seed: u64) -> Result<Grouping> {
    if k < 2 {
        return Err(Error::TooFewGroups(k));
    }
    if k > n {
        return Err(Error::TooManyGroups { n, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GROUPING_RETRIES {
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        if seen.iter().all(|&s| s) {
            return Grouping::new(labels, k);
        }
    }
    Err(Error::GroupingRetriesExhausted(GROUPING_RETRIES))
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub m_bar_values: Vec<usize>,
    pub p_values: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub repetitions: usize,
}

fn one() -> usize {
    1
}

impl ScenarioConfig {
    /// Parses TOML such as
    ///
    /// ```toml
    /// n_values = [100, 500]
    /// k_values = [2, 3, 4]
    /// m_bar_values = [1, 5, 10, 20]
    /// p_values = [0.8, 0.5, 0.2]
    /// seed = 42
    /// repetitions = 1
    /// ```
    pub fn from_toml_str(text: &str) -> Result<ScenarioConfig> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let lists = [
            ("n_values", self.n_values.is_empty()),
            ("k_values", self.k_values.is_empty()),
            ("m_bar_values", self.m_bar_values.is_empty()),
            ("p_values", self.p_values.is_empty()),
        ];
        for (name, empty) in lists {
            if empty {
                return Err(Error::InvalidConfig(format!("{name} is empty")));
            }
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidConfig(format!("n_values contains {n}; N must be positive")));
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k < 2) {
            return Err(Error::InvalidConfig(format!("k_values contains {k}; K must be at least 2")));
        }
        if self.m_bar_values.contains(&0) {
            return Err(Error::InvalidConfig("m_bar_values contains 0; m_bar must be at least 1".into()));
        }
        for &p in &self.p_values {
            check_probability(p)?;
        }
        for &n in &self.n_values {
            for &k in &self.k_values {
                if k > n {
                    return Err(Error::TooManyGroups { n, k });
                }
            }
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig("repetitions must be at least 1".into()));
        }
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.n_values.len() * self.k_values.len() * self.m_bar_values.len() * self.p_values.len()
    }
}

/// One grid cell for one repetition. Unit indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRecord {
    pub n: usize,
    pub k: usize,
    pub m_bar: usize,
    pub p: f64,
    pub p_index: usize,
    pub repetition: usize,
    pub matrix_seed: u64,
    pub grouping_seed: u64,
    /// Selected unit per group, `None` where no identity submatrix was found.
    pub maxima: Vec<Option<usize>>,
    /// Count of the selected unit per group (0 where not found).
    pub counts: Vec<u64>,
    pub candidate_lengths: Vec<usize>,
    pub identity_verified: bool,
    pub elapsed_seconds: f64,
}

impl ScenarioRecord {
    pub fn all_found(&self) -> bool {
        self.maxima.iter().all(Option::is_some)
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub config: ScenarioConfig,
    /// Ordered by `n`, `k`, `m_bar`, `p`, repetition (config order).
    pub records: Vec<ScenarioRecord>,
}

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "k",
    "m_bar",
    "p",
    "repetition",
    "matrix_seed",
    "grouping_seed",
    "maxima",
    "counts",
    "candidate_lengths",
    "identity_verified",
    "elapsed_seconds",
];

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn format_maxima(maxima: &[Option<usize>], separator: &str, missing: &str) -> String {
    maxima
        .iter()
        .map(|m| m.map_or_else(|| missing.to_string(), |u| (u + 1).to_string()))
        .collect::<Vec<_>>()
        .join(separator)
}

pub fn run_scenario_grid(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.cell_count() * cfg.repetitions);
    for &n in &cfg.n_values {
        let mut patterns: HashMap<(usize, usize), (u64, ZeroPattern)> = HashMap::new();
        for p_index in 0..cfg.p_values.len() {
            for rep in 0..cfg.repetitions {
                let seed = matrix_seed(cfg.seed, n, p_index, rep);
                let m = generate_bernoulli_matrix(n, cfg.p_values[p_index], seed)?;
                patterns.insert((p_index, rep), (seed, ZeroPattern::build(&m, Tolerance::EXACT)));
            }
        }
        for &k in &cfg.k_values {
            let mut groupings = Vec::with_capacity(cfg.repetitions);
            for rep in 0..cfg.repetitions {
                let seed = grouping_seed(cfg.seed, n, k, rep);
                groupings.push((seed, random_grouping(n, k, seed)?));
            }
            for &m_bar in &cfg.m_bar_values {
                for (p_index, &p) in cfg.p_values.iter().enumerate() {
                    for (rep, (g_seed, grouping)) in groupings.iter().enumerate() {
                        let (m_seed, z) = &patterns[&(p_index, rep)];
                        let start = Instant::now();
                        let result = select_maxima(z, grouping, m_bar)?;
                        let elapsed_seconds = start.elapsed().as_secs_f64();
                        records.push(ScenarioRecord {
                            n,
                            k,
                            m_bar,
                            p,
                            p_index,
                            repetition: rep,
                            matrix_seed: *m_seed,
                            grouping_seed: *g_seed,
                            maxima: result.groups.iter().map(|g| g.maximum.map(|m| m.unit)).collect(),
                            counts: result
                                .groups
                                .iter()
                                .map(|g| g.maximum.map_or(0, |m| m.count))
                                .collect(),
                            candidate_lengths: result.candidate_lengths(),
                            identity_verified: result.identity_verified,
                            elapsed_seconds,
                        });
                    }
                }
            }
        }
    }
    Ok(ScenarioReport {
        config: cfg.clone(),
        records,
    })
}

/// Aggregate of one `(n, k, m_bar, p)` cell over its repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub n: usize,
    pub k: usize,
    pub m_bar: usize,
    pub p: f64,
    /// Maxima of the first repetition.
    pub maxima: Vec<Option<usize>>,
    pub mean_seconds: f64,
    pub mean_count: f64,
}

impl ScenarioReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let io_err = |e: csv::Error| Error::Io(e.into());
        writer.write_record(CSV_HEADER).map_err(io_err)?;
        for r in &self.records {
            writer
                .write_record([
                    r.n.to_string(),
                    r.k.to_string(),
                    r.m_bar.to_string(),
                    r.p.to_string(),
                    (r.repetition + 1).to_string(),
                    r.matrix_seed.to_string(),
                    r.grouping_seed.to_string(),
                    format_maxima(&r.maxima, ";", "-"),
                    join(&r.counts),
                    join(&r.candidate_lengths),
                    r.identity_verified.to_string(),
                    format!("{:.6}", r.elapsed_seconds),
                ])
                .map_err(io_err)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn summarize(&self) -> Vec<CellSummary> {
        let mut summaries: Vec<CellSummary> = Vec::new();
        for chunk in self.records.chunks(self.config.repetitions) {
            let first = &chunk[0];
            let reps = chunk.len() as f64;
            let mean_seconds = chunk.iter().map(|r| r.elapsed_seconds).sum::<f64>() / reps;
            let mean_count = chunk
                .iter()
                .map(|r| r.counts.iter().sum::<u64>() as f64 / r.counts.len() as f64)
                .sum::<f64>()
                / reps;
            summaries.push(CellSummary {
                n: first.n,
                k: first.k,
                m_bar: first.m_bar,
                p: first.p,
                maxima: first.maxima.clone(),
                mean_seconds,
                mean_count,
            });
        }
        summaries
    }

    pub fn cell(&self, n: usize, k: usize, m_bar: usize, p_index: usize) -> Option<CellSummary> {
        let p = *self.config.p_values.get(p_index)?;
        self.summarize()
            .into_iter()
            .find(|c| c.n == n && c.k == k && c.m_bar == m_bar && c.p == p)
    }

    /// One table per `p`: rows `(N, m_bar)`, columns `K`, cells showing the
    /// first repetition's maxima (1-based, `–` where not found) and the mean
    /// time in seconds in brackets.
    pub fn markdown_table(&self) -> String {
        let summaries = self.summarize();
        let lookup: HashMap<(usize, usize, usize, u64), &CellSummary> = summaries
            .iter()
            .map(|c| ((c.n, c.k, c.m_bar, c.p.to_bits()), c))
            .collect();
        let cfg = &self.config;
        let mut md = String::new();
        for (i, &p) in cfg.p_values.iter().enumerate() {
            if i > 0 {
                md.push('\n');
            }
            writeln!(md, "### p = {p}\n").unwrap();
            let header: Vec<String> = cfg.k_values.iter().map(|k| format!("K={k}")).collect();
            writeln!(md, "| N | m_bar | {} |", header.join(" | ")).unwrap();
            writeln!(md, "|---|---|{}", "---|".repeat(cfg.k_values.len())).unwrap();
            for &n in &cfg.n_values {
                for &m_bar in &cfg.m_bar_values {
                    let cells: Vec<String> = cfg
                        .k_values
                        .iter()
                        .map(|&k| {
                            let c = lookup[&(n, k, m_bar, p.to_bits())];
                            format!(
                                "{} ({:.4})",
                                format_maxima(&c.maxima, ", ", "–"),
                                c.mean_seconds
                            )
                        })
                        .collect();
                    writeln!(md, "| {n} | {m_bar} | {} |", cells.join(" | ")).unwrap();
                }
            }
        }
        md
    }
}
