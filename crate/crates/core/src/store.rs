//! `(role, year) -> (female, male)` counts and their CSV snapshot form.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::normalize::NormalizedRole;
use crate::{Gender, MAX_YEAR, MIN_YEAR};

pub const SNAPSHOT_HEADER: [&str; 4] = ["role", "year", "count_f", "count_m"];

/// A female share kept as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Proportion {
    pub numerator: u64,
    pub denominator: u64,
}

impl Proportion {
    /// `None` when `denominator` is zero.
    pub fn new(numerator: u64, denominator: u64) -> Option<Self> {
        (denominator > 0 && numerator <= denominator).then_some(Proportion {
            numerator,
            denominator,
        })
    }

    pub fn complement(self) -> Self {
        Proportion {
            numerator: self.denominator - self.numerator,
            denominator: self.denominator,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Exact comparison without going through floating point.
    pub fn cmp_exact(&self, other: &Proportion) -> std::cmp::Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenderCounts {
    pub female: u64,
    pub male: u64,
}

impl GenderCounts {
    pub fn new(female: u64, male: u64) -> Self {
        GenderCounts { female, male }
    }

    pub fn total(&self) -> u64 {
        self.female + self.male
    }

    pub fn get(&self, gender: Gender) -> u64 {
        match gender {
            Gender::Female => self.female,
            Gender::Male => self.male,
        }
    }

    pub fn add(&mut self, gender: Gender, n: u64) {
        match gender {
            Gender::Female => self.female += n,
            Gender::Male => self.male += n,
        }
    }

    pub fn absorb(&mut self, other: &GenderCounts) {
        self.female += other.female;
        self.male += other.male;
    }

    /// p(F); absent for an empty pair.
    pub fn p_female(&self) -> Option<Proportion> {
        Proportion::new(self.female, self.total())
    }

    /// p(M) = 1 - p(F).
    pub fn p_male(&self) -> Option<Proportion> {
        self.p_female().map(Proportion::complement)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoleYearKey {
    pub role: NormalizedRole,
    pub year: u16,
}

/// One cleaned appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleRecord {
    role: NormalizedRole,
    year: u16,
    gender: Gender,
}

impl RoleRecord {
    pub fn new(role: NormalizedRole, year: u16, gender: Gender) -> Result<Self> {
        if !(MIN_YEAR..=MAX_YEAR).contains(&year) {
            return Err(Error::InvalidArgument(format!(
                "year {year} outside {MIN_YEAR}..={MAX_YEAR}"
            )));
        }
        Ok(RoleRecord { role, year, gender })
    }

    pub fn role(&self) -> &NormalizedRole {
        &self.role
    }

    pub fn year(&self) -> u16 {
        self.year
    }

    pub fn gender(&self) -> Gender {
        self.gender
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AggregateStore {
    entries: BTreeMap<RoleYearKey, GenderCounts>,
    total_records: u64,
}

impl AggregateStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ingest(&mut self, record: &RoleRecord) {
        let key = RoleYearKey {
            role: record.role.clone(),
            year: record.year,
        };
        self.entries.entry(key).or_default().add(record.gender, 1);
        self.total_records += 1;
    }

    /// Pointwise sum of `other` into `self`.
    pub fn merge_from(&mut self, other: &AggregateStore) {
        for (key, counts) in &other.entries {
            self.entries.entry(key.clone()).or_default().absorb(counts);
        }
        self.total_records += other.total_records;
    }

    pub fn merge(mut self, other: AggregateStore) -> AggregateStore {
        if self.entries.len() < other.entries.len() {
            let mut other = other;
            other.merge_from(&self);
            return other;
        }
        self.merge_from(&other);
        self
    }

    pub fn total_records(&self) -> u64 {
        self.total_records
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, role: &str, year: u16) -> Option<&GenderCounts> {
        let role = NormalizedRole::parse(role)?;
        self.entries.get(&RoleYearKey { role, year })
    }

    /// Entries in `(role, year)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&RoleYearKey, &GenderCounts)> {
        self.entries.iter()
    }

    /// p(F|role, year), absent for an unseen key.
    pub fn gender_distribution(&self, role: &str, year: u16) -> Option<Proportion> {
        self.get(role, year).and_then(GenderCounts::p_female)
    }

    /// Counts for `role` summed over all years.
    pub fn role_totals(&self, role: &str) -> GenderCounts {
        let mut total = GenderCounts::default();
        if let Some(role) = NormalizedRole::parse(role) {
            let first = RoleYearKey {
                role: role.clone(),
                year: 0,
            };
            let last = RoleYearKey {
                role,
                year: u16::MAX,
            };
            for counts in self.entries.range(first..=last).map(|(_, c)| c) {
                total.absorb(counts);
            }
        }
        total
    }

    pub fn save_snapshot<W: Write>(&self, sink: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(sink);
        let io_err = |e: csv::Error| Error::io("snapshot", e.into());
        writer.write_record(SNAPSHOT_HEADER).map_err(io_err)?;
        for (key, counts) in &self.entries {
            writer
                .write_record([
                    key.role.as_str(),
                    &key.year.to_string(),
                    &counts.female.to_string(),
                    &counts.male.to_string(),
                ])
                .map_err(io_err)?;
        }
        writer.flush().map_err(|e| Error::io("snapshot", e))
    }

    /// Reads a snapshot written by [`save_snapshot`](Self::save_snapshot).
    /// `input` names the source in error messages.
    pub fn load_snapshot<R: Read>(source: R, input: &str) -> Result<AggregateStore> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(source);
        let mut store = AggregateStore::new();
        let mut record = csv::StringRecord::new();
        let mut saw_header = false;
        loop {
            let line = reader.position().line();
            let more = reader.read_record(&mut record).map_err(|e| match e.kind() {
                csv::ErrorKind::Io(_) => Error::io(input, e.into()),
                _ => Error::format(input, line, e.to_string()),
            })?;
            if !more {
                break;
            }
            let line = record.position().map_or(line, |p| p.line());
            if !saw_header {
                if record.iter().ne(SNAPSHOT_HEADER) {
                    return Err(Error::format(
                        input,
                        line,
                        format!("expected header `{}`", SNAPSHOT_HEADER.join(",")),
                    ));
                }
                saw_header = true;
                continue;
            }
            let bad = |msg: String| Error::format(input, line, msg);
            if record.len() != 4 {
                return Err(bad(format!("expected 4 fields, found {}", record.len())));
            }
            let role = NormalizedRole::parse(&record[0])
                .ok_or_else(|| bad(format!("role {:?} is not normalized", &record[0])))?;
            let year: u16 = record[1]
                .parse()
                .map_err(|_| bad(format!("invalid year {:?}", &record[1])))?;
            if !(MIN_YEAR..=MAX_YEAR).contains(&year) {
                return Err(bad(format!("year {year} outside {MIN_YEAR}..={MAX_YEAR}")));
            }
            let parse_count = |field: &str| {
                field
                    .parse::<u64>()
                    .map_err(|_| bad(format!("invalid count {field:?}")))
            };
            let counts = GenderCounts::new(parse_count(&record[2])?, parse_count(&record[3])?);
            if counts.total() == 0 {
                return Err(bad("both counts are zero".into()));
            }
            match store.entries.entry(RoleYearKey { role, year }) {
                Entry::Occupied(e) => {
                    return Err(bad(format!("duplicate key ({}, {})", e.key().role, year)));
                }
                Entry::Vacant(e) => {
                    e.insert(counts);
                }
            }
            store.total_records += counts.total();
        }
        if !saw_header {
            return Err(Error::format(input, 1, "empty snapshot (missing header)"));
        }
        Ok(store)
    }
}

impl<'a> Extend<&'a RoleRecord> for AggregateStore {
    fn extend<T: IntoIterator<Item = &'a RoleRecord>>(&mut self, iter: T) {
        for record in iter {
            self.ingest(record);
        }
    }
}
