//! Dump files to [`AggregateStore`]: parse, clean roles, count.

use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::thread;

use crate::error::{Error, Result};
use crate::listfile::{parse_list_stream, ParseReport, RawAppearance};
use crate::normalize::clean_role;
use crate::store::{AggregateStore, RoleRecord};
use crate::Gender;

/// Counters for one ingested list file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub parse: ParseReport,
    /// Appearances without a bracketed role.
    pub appearances_without_role: u64,
    /// Appearances whose role cleaned to nothing (`n/a`, self-references).
    pub appearances_role_filtered: u64,
    /// Role records counted into the store.
    pub role_records: u64,
}

impl IngestStats {
    pub fn absorb(&mut self, other: &IngestStats) {
        self.parse.absorb(&other.parse);
        self.appearances_without_role += other.appearances_without_role;
        self.appearances_role_filtered += other.appearances_role_filtered;
        self.role_records += other.role_records;
    }
}

/// Counts one appearance: one record per cleaned role. Returns how many
/// records were added.
pub fn ingest_appearance(store: &mut AggregateStore, appearance: &RawAppearance) -> Result<usize> {
    let Some(raw) = appearance.raw_role.as_deref() else {
        return Ok(0);
    };
    let roles = clean_role(raw);
    for role in &roles {
        store.ingest(&RoleRecord::new(role.clone(), appearance.year, appearance.gender)?);
    }
    Ok(roles.len())
}

/// Parses one list stream into `store`.
pub fn ingest_list<R: Read>(input: R, gender: Gender, name: &str, store: &mut AggregateStore) -> Result<IngestStats> {
    let mut parser = parse_list_stream(input, gender, name)?;
    let mut stats = IngestStats::default();
    for appearance in parser.by_ref() {
        let appearance = appearance?;
        if appearance.raw_role.is_none() {
            stats.appearances_without_role += 1;
            continue;
        }
        match ingest_appearance(store, &appearance)? {
            0 => stats.appearances_role_filtered += 1,
            n => stats.role_records += n as u64,
        }
    }
    stats.parse = *parser.report();
    Ok(stats)
}

pub fn ingest_path(path: &Path, gender: Gender) -> Result<(AggregateStore, IngestStats)> {
    let file = File::open(path).map_err(|e| Error::io_at(path, e))?;
    let mut store = AggregateStore::new();
    let stats = ingest_list(file, gender, &path.display().to_string(), &mut store)?;
    Ok((store, stats))
}

/// Parses both dumps concurrently and merges the two stores.
pub fn build_store(actors: &Path, actresses: &Path) -> Result<(AggregateStore, IngestStats, IngestStats)> {
    let (male, female) = thread::scope(|s| {
        let male = s.spawn(|| ingest_path(actors, Gender::Male));
        let female = ingest_path(actresses, Gender::Female);
        (male.join().expect("actors parser panicked"), female)
    });
    let (male_store, male_stats) = male?;
    let (female_store, female_stats) = female?;
    Ok((male_store.merge(female_store), male_stats, female_stats))
}
