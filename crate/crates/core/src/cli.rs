//! `castlist` command-line frontend.
//!
//! Exit codes: 0 success, 1 usage, 2 input format, 3 I/O.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytics::{self, PeriodSpec, RankedRole, YearCounts};
use crate::census;
use crate::error::{Error, Result};
use crate::output::{write_atomic, Cell, Format, Table};
use crate::pipeline::{self, IngestStats};
use crate::professions::{self, ProfessionGroup};
use crate::store::AggregateStore;
use crate::MAX_YEAR;

pub const DEFAULT_YEAR_CAP: u16 = 2014;

#[derive(Debug, Parser)]
#[command(name = "castlist", version, about = "Role and gender statistics from cast-list dumps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse actors/actresses dumps (plain or gzip) into a snapshot CSV.
    Build(BuildArgs),
    /// Most common roles per period. Columns: period_start,period_end,rank,role,count.
    Top(TopArgs),
    /// Top roles absent from the previous period's top list. Same columns as `top`.
    Emerging(EmergingArgs),
    /// Yearly female/male totals. Columns: year,count_f,count_m,p_f.
    Gender(GenderArgs),
    /// Frequent roles split into five p(F) bins, sampled. Columns: bin,role,count_f,count_m,p_f.
    Bins(BinsArgs),
    /// Counts pooled by profession keyword group. Columns: profession,count_f,count_m,p_f.
    Professions(ProfessionsArgs),
    /// Yearly totals over roles containing a query. Columns: year,count_f,count_m,p_f.
    Timeseries(TimeseriesArgs),
    /// Onscreen p(F) against census shares. Columns:
    /// occupation,query,mode,matched,onscreen_count_f,onscreen_count_m,onscreen_p_f,census_p_f,delta.
    Census(CensusArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Tsv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Tsv => Format::Tsv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Snapshot CSV written by `build`.
    #[arg(long, value_name = "PATH")]
    pub snapshot: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Output file (written atomically); standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// actors.list or actors.list.gz
    #[arg(long, value_name = "PATH")]
    pub actors: PathBuf,
    /// actresses.list or actresses.list.gz
    #[arg(long, value_name = "PATH")]
    pub actresses: PathBuf,
    /// Snapshot CSV to write.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TopArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// START:END (end exclusive); every 20-year period from 1900 when omitted.
    #[arg(long)]
    pub period: Option<String>,
    /// Roles per period.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct EmergingArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// START:END (end exclusive); every 20-year period from 1900 when omitted.
    #[arg(long)]
    pub period: Option<String>,
    /// Roles per period.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Size of the previous period's top list that disqualifies a role.
    #[arg(long, default_value_t = 50)]
    pub prev_window: usize,
}

#[derive(Debug, Args)]
pub struct GenderArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Last year emitted (at most 2020).
    #[arg(long, default_value_t = DEFAULT_YEAR_CAP)]
    pub year_cap: u16,
}

#[derive(Debug, Args)]
pub struct BinsArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Roles need an all-years count strictly above this.
    #[arg(long, default_value_t = 1000)]
    pub min_count: u64,
    /// File of names to exclude, one per line.
    #[arg(long, value_name = "PATH")]
    pub exclude_names: Option<PathBuf>,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Roles sampled from each bin.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ProfessionsArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Profession group CSV (`name,keywords`); built-in groups when omitted.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TimeseriesArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Substring matched against role text.
    #[arg(long)]
    pub query: String,
    /// Last year emitted (at most 2020).
    #[arg(long, default_value_t = DEFAULT_YEAR_CAP)]
    pub year_cap: u16,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Census CSV (`occupation,percent_female`).
    #[arg(long, value_name = "PATH")]
    pub census: PathBuf,
    /// Mapping CSV (`occupation,query,mode`); built-in example when omitted.
    #[arg(long, value_name = "PATH")]
    pub mapping: Option<PathBuf>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io_at(path, e))
}

fn load_store(path: &Path) -> Result<AggregateStore> {
    AggregateStore::load_snapshot(open(path)?, &path.display().to_string())
}

fn check_year_cap(cap: u16) -> Result<()> {
    if cap > MAX_YEAR {
        return Err(Error::InvalidArgument(format!(
            "--year-cap {cap} is after {MAX_YEAR}"
        )));
    }
    Ok(())
}

fn periods(period: Option<&str>) -> Result<Vec<PeriodSpec>> {
    match period {
        Some(p) => Ok(vec![p.parse()?]),
        None => Ok(PeriodSpec::twenty_year_periods()),
    }
}

fn ranked_table(rows: impl IntoIterator<Item = (PeriodSpec, Vec<RankedRole>)>) -> Table {
    let mut table = Table::new(&["period_start", "period_end", "rank", "role", "count"]);
    for (period, ranked) in rows {
        for r in ranked {
            table.push(vec![
                u64::from(period.start()).into(),
                u64::from(period.end()).into(),
                (r.rank as u64).into(),
                r.role.into(),
                r.count.into(),
            ]);
        }
    }
    table
}

fn yearly_table(rows: &[YearCounts], cap: u16) -> Table {
    let mut table = Table::new(&["year", "count_f", "count_m", "p_f"]);
    for row in rows.iter().filter(|r| r.year <= cap) {
        table.push(vec![
            u64::from(row.year).into(),
            row.counts.female.into(),
            row.counts.male.into(),
            Cell::Prop(row.p_female()),
        ]);
    }
    table
}

fn read_name_list(path: &Path) -> Result<HashSet<String>> {
    let text = fs::read(path).map_err(|e| Error::io_at(path, e))?;
    Ok(String::from_utf8_lossy(&text)
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}

fn format_stats(label: &str, stats: &IngestStats) -> String {
    let p = &stats.parse;
    format!(
        "{label}: title_lines={} emitted={} skipped_malformed={} excluded_alternative_name={} \
         excluded_no_year={} without_role={} role_filtered={} role_records={}",
        p.title_lines(),
        p.records_emitted,
        p.lines_skipped_malformed,
        p.records_excluded_alternative_name,
        p.records_excluded_no_year,
        stats.appearances_without_role,
        stats.appearances_role_filtered,
        stats.role_records,
    )
}

fn build(args: &BuildArgs, stderr: &mut dyn Write) -> Result<()> {
    let (store, actors, actresses) = pipeline::build_store(&args.actors, &args.actresses)?;
    let mut bytes = Vec::new();
    store.save_snapshot(&mut bytes)?;
    write_atomic(&args.out, &bytes)?;
    let _ = writeln!(stderr, "{}", format_stats("actors", &actors));
    let _ = writeln!(stderr, "{}", format_stats("actresses", &actresses));
    let _ = writeln!(stderr, "total_records={} keys={}", store.total_records(), store.len());
    Ok(())
}

/// Computes the table for an analysis subcommand.
fn analysis_table(command: &Command) -> Result<Table> {
    Ok(match command {
        Command::Build(_) => unreachable!("build has no table"),
        Command::Top(a) => {
            let periods = periods(a.period.as_deref())?;
            let store = load_store(&a.output.snapshot)?;
            let rows = periods
                .into_iter()
                .map(|p| Ok((p, analytics::top_roles(&store, p, a.k)?)))
                .collect::<Result<Vec<_>>>()?;
            ranked_table(rows)
        }
        Command::Emerging(a) => {
            let periods = periods(a.period.as_deref())?;
            let store = load_store(&a.output.snapshot)?;
            let rows = periods
                .into_iter()
                .map(|p| Ok((p, analytics::emerging_roles(&store, p, a.k, a.prev_window)?)))
                .collect::<Result<Vec<_>>>()?;
            ranked_table(rows)
        }
        Command::Gender(a) => {
            check_year_cap(a.year_cap)?;
            let store = load_store(&a.output.snapshot)?;
            yearly_table(&analytics::gender_totals_by_year(&store), a.year_cap)
        }
        Command::Timeseries(a) => {
            check_year_cap(a.year_cap)?;
            if a.query.trim().is_empty() {
                return Err(Error::InvalidArgument("--query must not be empty".into()));
            }
            let store = load_store(&a.output.snapshot)?;
            yearly_table(&analytics::role_timeseries(&store, &a.query)?, a.year_cap)
        }
        Command::Bins(a) => {
            if a.min_count == 0 {
                return Err(Error::InvalidArgument("--min-count must be at least 1".into()));
            }
            let exclude = match &a.exclude_names {
                Some(path) => read_name_list(path)?,
                None => HashSet::new(),
            };
            let store = load_store(&a.output.snapshot)?;
            let binned = analytics::bin_roles(&store, a.min_count, &exclude, a.seed, a.samples)?;
            let mut table = Table::new(&["bin", "role", "count_f", "count_m", "p_f"]);
            for b in binned {
                table.push(vec![
                    b.bin.name().into(),
                    Cell::Text(b.role.clone()),
                    b.counts.female.into(),
                    b.counts.male.into(),
                    Cell::Prop(Some(b.p_female())),
                ]);
            }
            table
        }
        Command::Professions(a) => {
            let groups: Vec<ProfessionGroup> = match &a.config {
                Some(path) => professions::parse_professions(open(path)?, &path.display().to_string())?,
                None => professions::default_professions(),
            };
            let store = load_store(&a.output.snapshot)?;
            let mut table = Table::new(&["profession", "count_f", "count_m", "p_f"]);
            for g in &groups {
                let stats = professions::profession_stats(&store, g);
                table.push(vec![
                    Cell::Text(g.name.clone()),
                    stats.counts.female.into(),
                    stats.counts.male.into(),
                    Cell::Prop(stats.p_female()),
                ]);
            }
            table
        }
        Command::Census(a) => {
            let census_rows = census::load_census(open(&a.census)?, &a.census.display().to_string())?;
            let (mapping, mapping_name) = match &a.mapping {
                Some(path) => {
                    let name = path.display().to_string();
                    (census::load_mapping(open(path)?, &name)?, name)
                }
                None => (
                    census::load_mapping(census::EXAMPLE_MAPPING.as_bytes(), "example mapping")?,
                    "example mapping".to_string(),
                ),
            };
            let occupations = census::join(&census_rows, &mapping, &mapping_name)?;
            let store = load_store(&a.output.snapshot)?;
            let mut table = Table::new(&[
                "occupation",
                "query",
                "mode",
                "matched",
                "onscreen_count_f",
                "onscreen_count_m",
                "onscreen_p_f",
                "census_p_f",
                "delta",
            ]);
            for c in census::compare(&store, &occupations)? {
                let occ = &c.occupation;
                table.push(vec![
                    Cell::Text(occ.occupation.clone()),
                    Cell::Text(occ.query.clone()),
                    occ.query_mode.name().into(),
                    Cell::Bool(c.onscreen.total() > 0),
                    c.onscreen.female.into(),
                    c.onscreen.male.into(),
                    Cell::Prop(c.onscreen_p_female()),
                    Cell::Float(Some(occ.female_share)),
                    Cell::Float(c.delta()),
                ]);
            }
            table
        }
    })
}

fn output_args(command: &Command) -> Option<&OutputArgs> {
    match command {
        Command::Build(_) => None,
        Command::Top(a) => Some(&a.output),
        Command::Emerging(a) => Some(&a.output),
        Command::Gender(a) => Some(&a.output),
        Command::Bins(a) => Some(&a.output),
        Command::Professions(a) => Some(&a.output),
        Command::Timeseries(a) => Some(&a.output),
        Command::Census(a) => Some(&a.output),
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let Some(output) = output_args(&cli.command) else {
        let Command::Build(args) = &cli.command else {
            unreachable!()
        };
        return build(args, stderr);
    };
    let table = analysis_table(&cli.command)?;
    let bytes = table.render(output.format.into())?;
    match &output.out {
        Some(path) => write_atomic(path, &bytes),
        None => stdout
            .write_all(&bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| Error::io("stdout", e)),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "castlist: {e}");
            e.exit_code()
        }
    }
}
