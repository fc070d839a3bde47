//! Period rankings, gender time series, p(F) binning and role-query sums
//! computed over an [`AggregateStore`].
//!
//! Every top-k ranking orders by count descending, then role text ascending,
//! and numbers ranks densely from 1.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::store::{AggregateStore, GenderCounts, Proportion};
use crate::{Gender, MAX_YEAR, MIN_YEAR};

pub const PERIOD_LENGTH: u16 = 20;
pub const BIN_COUNT: usize = 5;

/// Half-open year interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodSpec {
    start: u16,
    end: u16,
}

impl PeriodSpec {
    pub fn new(start: u16, end: u16) -> Result<Self> {
        if start >= end {
            return Err(Error::InvalidArgument(format!(
                "period start {start} must be before end {end}"
            )));
        }
        Ok(PeriodSpec { start, end })
    }

    pub fn start(&self) -> u16 {
        self.start
    }

    pub fn end(&self) -> u16 {
        self.end
    }

    /// Number of years covered.
    pub fn years(&self) -> u16 {
        self.end - self.start
    }

    pub fn contains(&self, year: u16) -> bool {
        (self.start..self.end).contains(&year)
    }

    /// The adjacent window of equal length ending where this one starts.
    pub fn previous(&self) -> PeriodSpec {
        PeriodSpec {
            start: self.start.saturating_sub(self.years()),
            end: self.start,
        }
    }

    /// `[1900,1920)`, `[1920,1940)`, ..., `[2000,2020)`.
    pub fn twenty_year_periods() -> Vec<PeriodSpec> {
        (MIN_YEAR..MAX_YEAR)
            .step_by(PERIOD_LENGTH as usize)
            .map(|start| PeriodSpec {
                start,
                end: start + PERIOD_LENGTH,
            })
            .collect()
    }
}

impl fmt::Display for PeriodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl std::str::FromStr for PeriodSpec {
    type Err = Error;

    /// Parses `START:END`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("period {s:?} is not START:END"));
        let (start, end) = s.split_once(':').ok_or_else(bad)?;
        let start = start.trim().parse().map_err(|_| bad())?;
        let end = end.trim().parse().map_err(|_| bad())?;
        PeriodSpec::new(start, end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedRole {
    pub role: String,
    pub count: u64,
    pub rank: usize,
}

/// Sorts by count descending then role ascending, keeping the first `k`.
fn rank<'a>(totals: impl IntoIterator<Item = (&'a str, u64)>, k: usize) -> Vec<RankedRole> {
    let mut all: Vec<(&str, u64)> = totals.into_iter().filter(|&(_, c)| c > 0).collect();
    all.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    all.truncate(k);
    all.into_iter()
        .enumerate()
        .map(|(i, (role, count))| RankedRole {
            role: role.to_string(),
            count,
            rank: i + 1,
        })
        .collect()
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(())
}

/// Gender-combined count per role over the years of `period`.
fn period_totals(store: &AggregateStore, period: PeriodSpec) -> BTreeMap<&str, u64> {
    let mut totals = BTreeMap::new();
    for (key, counts) in store.iter().filter(|(k, _)| period.contains(k.year)) {
        *totals.entry(key.role.as_str()).or_insert(0) += counts.total();
    }
    totals
}

pub fn top_roles(store: &AggregateStore, period: PeriodSpec, k: usize) -> Result<Vec<RankedRole>> {
    check_k(k)?;
    Ok(rank(period_totals(store, period), k))
}

/// Top `k` roles of `period` that were not in the top `prev_window` of the
/// preceding period.
pub fn emerging_roles(
    store: &AggregateStore,
    period: PeriodSpec,
    k: usize,
    prev_window: usize,
) -> Result<Vec<RankedRole>> {
    check_k(k)?;
    let previous: HashSet<String> = if prev_window == 0 {
        HashSet::new()
    } else {
        top_roles(store, period.previous(), prev_window)?
            .into_iter()
            .map(|r| r.role)
            .collect()
    };
    let totals = period_totals(store, period);
    Ok(rank(
        totals.into_iter().filter(|(role, _)| !previous.contains(*role)),
        k,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearCounts {
    pub year: u16,
    pub counts: GenderCounts,
}

impl YearCounts {
    pub fn p_female(&self) -> Option<Proportion> {
        self.counts.p_female()
    }
}

fn yearly<'a>(rows: impl Iterator<Item = (u16, &'a GenderCounts)>) -> Vec<YearCounts> {
    let mut by_year: BTreeMap<u16, GenderCounts> = BTreeMap::new();
    for (year, counts) in rows {
        by_year.entry(year).or_default().absorb(counts);
    }
    by_year
        .into_iter()
        .map(|(year, counts)| YearCounts { year, counts })
        .collect()
}

/// Female and male totals for every year present in the store.
pub fn gender_totals_by_year(store: &AggregateStore) -> Vec<YearCounts> {
    yearly(store.iter().map(|(k, c)| (k.year, c)))
}

/// Top `k` roles counting only `gender`'s appearances, over all years.
pub fn top_roles_by_gender(store: &AggregateStore, gender: Gender, k: usize) -> Result<Vec<RankedRole>> {
    check_k(k)?;
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for (key, counts) in store.iter() {
        *totals.entry(key.role.as_str()).or_insert(0) += counts.get(gender);
    }
    Ok(rank(totals, k))
}

/// Per-year sums over every role containing `query` (lower-cased).
pub fn role_timeseries(store: &AggregateStore, query: &str) -> Result<Vec<YearCounts>> {
    let query = query.trim().to_lowercase();
    if query.is_empty() {
        return Err(Error::InvalidArgument("query must not be empty".into()));
    }
    Ok(yearly(
        store
            .iter()
            .filter(|(k, _)| k.role.as_str().contains(query.as_str()))
            .map(|(k, c)| (k.year, c)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenderBin {
    StronglyMale,
    ModeratelyMale,
    Neutral,
    ModeratelyFemale,
    StronglyFemale,
}

impl GenderBin {
    pub const ALL: [GenderBin; BIN_COUNT] = [
        GenderBin::StronglyMale,
        GenderBin::ModeratelyMale,
        GenderBin::Neutral,
        GenderBin::ModeratelyFemale,
        GenderBin::StronglyFemale,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GenderBin::StronglyMale => "strongly-male",
            GenderBin::ModeratelyMale => "moderately-male",
            GenderBin::Neutral => "neutral",
            GenderBin::ModeratelyFemale => "moderately-female",
            GenderBin::StronglyFemale => "strongly-female",
        }
    }
}

impl fmt::Display for GenderBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinnedRole {
    pub role: String,
    pub counts: GenderCounts,
    pub bin: GenderBin,
}

impl BinnedRole {
    pub fn p_female(&self) -> Proportion {
        self.counts
            .p_female()
            .expect("binned roles have a nonzero total")
    }
}

/// Roles with an all-years total strictly above `min_count` whose text is
/// not in `exclude_names`, ordered by p(F) ascending then role text.
pub fn eligible_roles(
    store: &AggregateStore,
    min_count: u64,
    exclude_names: &HashSet<String>,
) -> Vec<(String, GenderCounts)> {
    let mut totals: BTreeMap<&str, GenderCounts> = BTreeMap::new();
    for (key, counts) in store.iter() {
        totals.entry(key.role.as_str()).or_default().absorb(counts);
    }
    let mut eligible: Vec<(String, GenderCounts)> = totals
        .into_iter()
        .filter(|(role, c)| c.total() > min_count && !exclude_names.contains(*role))
        .map(|(role, c)| (role.to_string(), c))
        .collect();
    eligible.sort_by(|a, b| {
        let (pa, pb) = (a.1.p_female().unwrap(), b.1.p_female().unwrap());
        pa.cmp_exact(&pb).then_with(|| a.0.cmp(&b.0))
    });
    eligible
}

/// Sizes of five contiguous bins over `n` items; the remainder goes to the
/// lowest bins.
pub fn bin_sizes(n: usize) -> [usize; BIN_COUNT] {
    let base = n / BIN_COUNT;
    let extra = n % BIN_COUNT;
    std::array::from_fn(|i| base + usize::from(i < extra))
}

/// Splits p(F)-sorted roles into the five bins.
pub fn partition_bins(sorted: Vec<(String, GenderCounts)>) -> Result<[Vec<BinnedRole>; BIN_COUNT]> {
    if sorted.len() < BIN_COUNT {
        return Err(Error::TooFewEligible {
            eligible: sorted.len(),
            required: BIN_COUNT,
        });
    }
    let sizes = bin_sizes(sorted.len());
    let mut items = sorted.into_iter();
    Ok(std::array::from_fn(|i| {
        items
            .by_ref()
            .take(sizes[i])
            .map(|(role, counts)| BinnedRole {
                role,
                counts,
                bin: GenderBin::ALL[i],
            })
            .collect()
    }))
}

/// Draws up to `samples_per_bin` roles from each bin without replacement.
/// Samples keep the bin's p(F) order.
pub fn sample_bins(bins: &[Vec<BinnedRole>; BIN_COUNT], seed: u64, samples_per_bin: usize) -> Vec<BinnedRole> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for bin in bins {
        let amount = samples_per_bin.min(bin.len());
        let mut picked = index::sample(&mut rng, bin.len(), amount).into_vec();
        picked.sort_unstable();
        out.extend(picked.into_iter().map(|i| bin[i].clone()));
    }
    out
}

pub fn bin_roles(
    store: &AggregateStore,
    min_count: u64,
    exclude_names: &HashSet<String>,
    seed: u64,
    samples_per_bin: usize,
) -> Result<Vec<BinnedRole>> {
    if min_count == 0 {
        return Err(Error::InvalidArgument("min_count must be at least 1".into()));
    }
    let bins = partition_bins(eligible_roles(store, min_count, exclude_names))?;
    Ok(sample_bins(&bins, seed, samples_per_bin))
}
