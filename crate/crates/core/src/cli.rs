//! Command-line front end. `main.rs` only parses arguments and forwards to
//! [`execute`], so every command is testable in-process.
//!
//! Exit codes: 0 success, 1 input/usage error, 2 some group has no maximum
//! (`run`), 3 the oracle disagrees with the search (`oracle`).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::io::{read_grouping, read_matrix};
use crate::matrix::{Grouping, Tolerance, ZeroPattern};
use crate::oracle::{oracle_maxima, OracleOptions};
use crate::search::{select_maxima, PivotResult};
use crate::simulation::{run_scenario_grid, ScenarioConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mus", version, about = "Maxima Units Search over sparse symmetric matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select one pivotal unit per group.
    Run(RunOptions),
    /// Exhaustive per-unit counts, checked against `run` at full precision.
    Oracle(RunOptions),
    /// Run a benchmark grid described by a TOML config.
    Simulate(SimulateOptions),
    /// List the bundled example instances, or write them to a directory.
    Fixtures(FixturesOptions),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunOptions {
    /// Dense CSV matrix or `i j value` triplet file.
    #[arg(long)]
    pub matrix: PathBuf,
    /// CSV of `unit_index,group_label` lines.
    #[arg(long)]
    pub groups: PathBuf,
    /// Candidate units examined per group.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub m_bar: u64,
    /// Entries with absolute value at or below this count as zero.
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateOptions {
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for `report.csv` and `report.md`.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct FixturesOptions {
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match cli.command {
        Command::Run(opts) => cmd_run(&opts, out),
        Command::Oracle(opts) => cmd_oracle(&opts, out),
        Command::Simulate(opts) => cmd_simulate(&opts, out),
        Command::Fixtures(opts) => cmd_fixtures(&opts, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

struct Instance {
    grouping: Grouping,
    zeros: ZeroPattern,
}

fn load(opts: &RunOptions) -> Result<Instance> {
    let tol = Tolerance::new(opts.epsilon)?;
    let grouping = read_grouping(&opts.groups)?;
    let matrix = read_matrix(&opts.matrix, Some(grouping.n()))?;
    if matrix.n() != grouping.n() {
        return Err(Error::SizeMismatch {
            matrix: matrix.n(),
            grouping: grouping.n(),
        });
    }
    Ok(Instance {
        zeros: ZeroPattern::build(&matrix, tol),
        grouping,
    })
}

#[derive(Debug, Serialize)]
pub struct CandidateReport {
    pub unit: usize,
    pub cross_zeros: usize,
    pub count: u64,
}

#[derive(Debug, Serialize)]
pub struct GroupReport {
    pub group: usize,
    pub status: &'static str,
    pub maximum: Option<usize>,
    pub count: u64,
    pub candidates: Vec<CandidateReport>,
}

/// 1-based view of a [`PivotResult`], shared by all output formats.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub n: usize,
    pub k: usize,
    pub m_bar: usize,
    pub epsilon: f64,
    pub groups: Vec<GroupReport>,
    pub maxima: Option<Vec<usize>>,
    pub identity_verified: bool,
}

impl RunReport {
    pub fn new(result: &PivotResult, n: usize, epsilon: f64) -> RunReport {
        let groups = result
            .groups
            .iter()
            .map(|g| GroupReport {
                group: g.group + 1,
                status: if g.maximum.is_some() { "found" } else { "not_found" },
                maximum: g.maximum.map(|m| m.unit + 1),
                count: g.maximum.map_or(0, |m| m.count),
                candidates: g
                    .candidates
                    .iter()
                    .map(|c| CandidateReport {
                        unit: c.unit + 1,
                        cross_zeros: c.cross_zeros,
                        count: c.count,
                    })
                    .collect(),
            })
            .collect();
        RunReport {
            n,
            k: result.groups.len(),
            m_bar: result.m_bar,
            epsilon,
            groups,
            maxima: result
                .maxima()
                .map(|units| units.into_iter().map(|u| u + 1).collect()),
            identity_verified: result.identity_verified,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Json => {
                serde_json::to_string_pretty(self).expect("report serializes") + "\n"
            }
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut s = format!(
            "n = {}, K = {}, m_bar = {}, epsilon = {}\n",
            self.n, self.k, self.m_bar, self.epsilon
        );
        for g in &self.groups {
            match g.maximum {
                Some(unit) => s += &format!("group {}: found, maximum {unit} (M = {})\n", g.group, g.count),
                None => s += &format!("group {}: not found\n", g.group),
            }
            if g.candidates.is_empty() {
                s += "  no candidates\n";
            }
            for c in &g.candidates {
                s += &format!(
                    "  candidate {:>6}  cross-group zeros {:>6}  M = {}\n",
                    c.unit, c.cross_zeros, c.count
                );
            }
        }
        match &self.maxima {
            Some(units) => {
                let units: Vec<String> = units.iter().map(usize::to_string).collect();
                s += &format!("maxima: {}\n", units.join(", "));
            }
            None => s += "maxima: incomplete\n",
        }
        s += &format!("identity_verified: {}\n", self.identity_verified);
        s
    }

    fn render_csv(&self) -> String {
        let mut s = String::from("group,status,unit,cross_zeros,count,selected,identity_verified\n");
        for g in &self.groups {
            if g.candidates.is_empty() {
                s += &format!("{},{},,,,false,{}\n", g.group, g.status, self.identity_verified);
            }
            for c in &g.candidates {
                s += &format!(
                    "{},{},{},{},{},{},{}\n",
                    g.group,
                    g.status,
                    c.unit,
                    c.cross_zeros,
                    c.count,
                    g.maximum == Some(c.unit),
                    self.identity_verified
                );
            }
        }
        s
    }
}

pub fn cmd_run(opts: &RunOptions, out: &mut dyn Write) -> Result<i32> {
    let inst = load(opts)?;
    let result = select_maxima(&inst.zeros, &inst.grouping, opts.m_bar as usize)?;
    let report = RunReport::new(&result, inst.zeros.n(), opts.epsilon);
    out.write_all(report.render(opts.format).as_bytes())?;
    Ok(if result.all_found() {
        EXIT_OK
    } else {
        EXIT_NOT_FOUND
    })
}

#[derive(Debug, Serialize)]
struct OracleUnit {
    unit: usize,
    group: usize,
    count: u64,
}

#[derive(Debug, Serialize)]
struct OracleGroup {
    group: usize,
    max_count: u64,
    argmax: Vec<usize>,
    mus_selected: Option<usize>,
    mus_count: u64,
    agrees: bool,
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    m_bar_checked: usize,
    total_tuples: u64,
    units: Vec<OracleUnit>,
    groups: Vec<OracleGroup>,
    agreement: bool,
}

pub fn cmd_oracle(opts: &RunOptions, out: &mut dyn Write) -> Result<i32> {
    let inst = load(opts)?;
    let (z, g) = (&inst.zeros, &inst.grouping);
    let report = oracle_maxima(z, g, OracleOptions::default())?;
    let full_m_bar = g.sizes().into_iter().max().unwrap_or(1);
    let mus = select_maxima(z, g, full_m_bar)?;

    let groups: Vec<OracleGroup> = report
        .group_maxima
        .iter()
        .zip(&mus.groups)
        .enumerate()
        .map(|(group, (best, outcome))| {
            let selected = outcome.maximum;
            let agrees = match selected {
                Some(s) => best.units.contains(&s.unit) && s.count == best.count,
                None => best.units.is_empty(),
            };
            OracleGroup {
                group: group + 1,
                max_count: best.count,
                argmax: best.units.iter().map(|u| u + 1).collect(),
                mus_selected: selected.map(|s| s.unit + 1),
                mus_count: selected.map_or(0, |s| s.count),
                agrees,
            }
        })
        .collect();
    let output = OracleOutput {
        m_bar_checked: full_m_bar,
        total_tuples: report.total_tuples,
        units: report
            .unit_counts
            .iter()
            .enumerate()
            .map(|(u, &count)| OracleUnit {
                unit: u + 1,
                group: g.group_of(u) + 1,
                count,
            })
            .collect(),
        agreement: groups.iter().all(|gr| gr.agrees),
        groups,
    };

    let text = match opts.format {
        OutputFormat::Json => serde_json::to_string_pretty(&output).expect("serializes") + "\n",
        OutputFormat::Csv => {
            let mut s = String::from("unit,group,count\n");
            for u in &output.units {
                s += &format!("{},{},{}\n", u.unit, u.group, u.count);
            }
            s
        }
        OutputFormat::Text => {
            let mut s = format!("identity submatrices: {}\n", output.total_tuples);
            for u in &output.units {
                s += &format!("unit {:>6}  group {:>3}  M = {}\n", u.unit, u.group, u.count);
            }
            for gr in &output.groups {
                let argmax: Vec<String> = gr.argmax.iter().map(usize::to_string).collect();
                s += &format!(
                    "group {}: argmax {{{}}} with M = {}; search at m_bar = {} selected {}{}\n",
                    gr.group,
                    argmax.join(", "),
                    gr.max_count,
                    output.m_bar_checked,
                    gr.mus_selected.map_or("none".to_string(), |u| u.to_string()),
                    if gr.agrees { "" } else { "  DISAGREEMENT" }
                );
            }
            s += &format!("agreement: {}\n", output.agreement);
            s
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(if output.agreement {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    })
}

pub fn cmd_simulate(opts: &SimulateOptions, out: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(&opts.config)?;
    let mut cfg = ScenarioConfig::from_toml_str(&text)?;
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    let report = run_scenario_grid(&cfg)?;
    fs::create_dir_all(&opts.out_dir)?;
    let markdown = report.markdown_table();
    report.write_csv(fs::File::create(opts.out_dir.join("report.csv"))?)?;
    fs::write(opts.out_dir.join("report.md"), &markdown)?;
    out.write_all(markdown.as_bytes())?;
    Ok(EXIT_OK)
}

fn write_fixtures(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for f in fixtures::ALL {
        for (name, body) in [
            (f.matrix_file_name(), f.matrix_csv),
            (f.groups_file_name(), f.groups_csv),
        ] {
            let path = dir.join(name);
            fs::write(&path, body)?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn cmd_fixtures(opts: &FixturesOptions, out: &mut dyn Write) -> Result<i32> {
    match &opts.out_dir {
        Some(dir) => {
            for path in write_fixtures(dir)? {
                writeln!(out, "wrote {}", path.display())?;
            }
        }
        None => {
            for f in fixtures::ALL {
                writeln!(
                    out,
                    "{:<8} {} ({}, {})",
                    f.name,
                    f.description,
                    f.matrix_file_name(),
                    f.groups_file_name()
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}
