//! Onscreen p(F) against census female shares.
//!
//! Two CSV inputs: the census table (`occupation,percent_female`, percent in
//! `[0, 100]`) and a mapping from census occupations to role queries
//! (`occupation,query,mode`, mode `substring` or `exact`). Occupation names
//! are matched case-insensitively after trimming.

use std::collections::HashMap;
use std::io::Read;

use crate::error::{Error, Result};
use crate::professions::MatchMode;
use crate::store::{AggregateStore, GenderCounts, Proportion};

/// Example mapping for common occupations.
pub const EXAMPLE_MAPPING: &str = include_str!("../data/census_mapping.csv");

#[derive(Debug, Clone, PartialEq)]
pub struct CensusOccupation {
    pub occupation: String,
    /// Census female share as a probability.
    pub female_share: f64,
    pub query: String,
    pub query_mode: MatchMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub occupation: CensusOccupation,
    pub onscreen: GenderCounts,
}

impl Comparison {
    /// Absent when no role matched the query.
    pub fn onscreen_p_female(&self) -> Option<Proportion> {
        self.onscreen.p_female()
    }

    /// Onscreen minus census share; positive means women are
    /// over-represented onscreen.
    pub fn delta(&self) -> Option<f64> {
        self.onscreen_p_female()
            .map(|p| p.to_f64() - self.occupation.female_share)
    }
}

/// Pairs each occupation with its onscreen counts, preserving input order.
pub fn compare(store: &AggregateStore, occupations: &[CensusOccupation]) -> Result<Vec<Comparison>> {
    if occupations.is_empty() {
        return Err(Error::InvalidArgument("no occupations to compare".into()));
    }
    let mut out: Vec<Comparison> = occupations
        .iter()
        .map(|o| Comparison {
            occupation: o.clone(),
            onscreen: GenderCounts::default(),
        })
        .collect();
    for (key, counts) in store.iter() {
        for cmp in out.iter_mut() {
            let occ = &cmp.occupation;
            if occ.query_mode.matches(key.role.as_str(), &occ.query) {
                cmp.onscreen.absorb(counts);
            }
        }
    }
    Ok(out)
}

fn occupation_key(name: &str) -> String {
    name.trim().to_lowercase()
}

fn csv_rows<R: Read>(
    source: R,
    input: &str,
    header: &[&str],
) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let found = reader
        .headers()
        .map_err(|e| Error::format(input, 1, e.to_string()))?
        .clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::format(
            input,
            1,
            format!("expected header `{}`", header.join(",")),
        ));
    }
    reader
        .records()
        .map(|row| {
            let row = row.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                match e.kind() {
                    csv::ErrorKind::Io(_) => Error::io(input, e.into()),
                    _ => Error::format(input, line, e.to_string()),
                }
            })?;
            Ok((row.position().map_or(0, |p| p.line()), row))
        })
        .collect()
}

/// Reads `occupation,percent_female` into occupation -> share in `[0, 1]`.
pub fn load_census<R: Read>(source: R, input: &str) -> Result<Vec<(String, f64)>> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for (line, row) in csv_rows(source, input, &["occupation", "percent_female"])? {
        let bad = |msg: String| Error::format(input, line, msg);
        let occupation = row[0].to_string();
        if occupation.is_empty() {
            return Err(bad("empty occupation".into()));
        }
        let percent: f64 = row[1]
            .parse()
            .map_err(|_| bad(format!("invalid percent {:?}", &row[1])))?;
        if !(0.0..=100.0).contains(&percent) {
            return Err(bad(format!("percent {percent} outside [0, 100]")));
        }
        if seen.insert(occupation_key(&occupation), line).is_some() {
            return Err(bad(format!("duplicate occupation {occupation:?}")));
        }
        out.push((occupation, percent / 100.0));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingRow {
    pub line: u64,
    pub occupation: String,
    pub query: String,
    pub mode: MatchMode,
}

pub fn load_mapping<R: Read>(source: R, input: &str) -> Result<Vec<MappingRow>> {
    let mut out = Vec::new();
    for (line, row) in csv_rows(source, input, &["occupation", "query", "mode"])? {
        let bad = |msg: String| Error::format(input, line, msg);
        let query = row[1].to_lowercase();
        if row[0].is_empty() || query.is_empty() {
            return Err(bad("empty occupation or query".into()));
        }
        let mode: MatchMode = row[2].parse().map_err(|e: Error| bad(e.to_string()))?;
        if mode == MatchMode::SubstringNotSuffix {
            return Err(bad("mapping mode must be substring or exact".into()));
        }
        out.push(MappingRow {
            line,
            occupation: row[0].to_string(),
            query,
            mode,
        });
    }
    Ok(out)
}

/// Joins mapping rows to census shares, in mapping order. Every mapped
/// occupation must exist in the census table.
pub fn join(census: &[(String, f64)], mapping: &[MappingRow], mapping_input: &str) -> Result<Vec<CensusOccupation>> {
    let shares: HashMap<String, f64> = census
        .iter()
        .map(|(name, share)| (occupation_key(name), *share))
        .collect();
    mapping
        .iter()
        .map(|row| {
            let share = shares.get(&occupation_key(&row.occupation)).ok_or_else(|| {
                Error::format(
                    mapping_input,
                    row.line,
                    format!("occupation {:?} not in census table", row.occupation),
                )
            })?;
            Ok(CensusOccupation {
                occupation: row.occupation.clone(),
                female_share: *share,
                query: row.query.clone(),
                query_mode: row.mode,
            })
        })
        .collect()
}
