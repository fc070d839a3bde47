//! Keyword groups that pool counts across related roles.
//!
//! Config format (CSV, header `name,keywords`): one group per row, keywords
//! separated by `;`, each written `keyword:mode` where mode is `substring`,
//! `exact` or `substring-not-suffix`.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::store::{AggregateStore, GenderCounts, Proportion};

/// Groups and keywords used by default.
pub const DEFAULT_PROFESSIONS: &str = include_str!("../data/professions.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchMode {
    /// The role contains the keyword anywhere.
    Substring,
    /// The role is exactly the keyword.
    Exact,
    /// The role equals the keyword, or contains it without ending with it
    /// (`bishop` and `bishop of york` match, `mr. bishop` does not).
    SubstringNotSuffix,
}

impl MatchMode {
    pub fn name(&self) -> &'static str {
        match self {
            MatchMode::Substring => "substring",
            MatchMode::Exact => "exact",
            MatchMode::SubstringNotSuffix => "substring-not-suffix",
        }
    }

    pub fn matches(&self, role: &str, keyword: &str) -> bool {
        match self {
            MatchMode::Substring => role.contains(keyword),
            MatchMode::Exact => role == keyword,
            MatchMode::SubstringNotSuffix => {
                role == keyword || (role.contains(keyword) && !role.ends_with(keyword))
            }
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "substring" => Ok(MatchMode::Substring),
            "exact" => Ok(MatchMode::Exact),
            "substring-not-suffix" => Ok(MatchMode::SubstringNotSuffix),
            other => Err(Error::InvalidArgument(format!("unknown match mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Keyword {
    pub text: String,
    pub mode: MatchMode,
}

impl Keyword {
    pub fn new(text: &str, mode: MatchMode) -> Self {
        Keyword {
            text: text.trim().to_lowercase(),
            mode,
        }
    }

    pub fn matches(&self, role: &str) -> bool {
        self.mode.matches(role, &self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfessionGroup {
    pub name: String,
    pub keywords: Vec<Keyword>,
}

impl ProfessionGroup {
    pub fn matches(&self, role: &str) -> bool {
        self.keywords.iter().any(|k| k.matches(role))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfessionStats {
    pub counts: GenderCounts,
}

impl ProfessionStats {
    /// Absent when nothing matched.
    pub fn p_female(&self) -> Option<Proportion> {
        self.counts.p_female()
    }
}

/// Sums all-years counts over every store role the group matches. Each
/// `(role, year)` entry contributes once, however many keywords hit it.
pub fn profession_stats(store: &AggregateStore, group: &ProfessionGroup) -> ProfessionStats {
    let mut counts = GenderCounts::default();
    for (key, c) in store.iter() {
        if group.matches(key.role.as_str()) {
            counts.absorb(c);
        }
    }
    ProfessionStats { counts }
}

pub fn parse_professions<R: Read>(source: R, input: &str) -> Result<Vec<ProfessionGroup>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::format(input, 1, e.to_string()))?
        .clone();
    if headers.iter().ne(["name", "keywords"]) {
        return Err(Error::format(input, 1, "expected header `name,keywords`"));
    }
    let mut groups = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::format(input, line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |msg: String| Error::format(input, line, msg);
        let name = row[0].to_string();
        if name.is_empty() {
            return Err(bad("empty group name".into()));
        }
        let mut keywords = Vec::new();
        for spec in row[1].split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (text, mode) = spec
                .rsplit_once(':')
                .ok_or_else(|| bad(format!("keyword {spec:?} is not keyword:mode")))?;
            let mode: MatchMode = mode.parse().map_err(|e: Error| bad(e.to_string()))?;
            if text.trim().is_empty() {
                return Err(bad(format!("empty keyword in {spec:?}")));
            }
            keywords.push(Keyword::new(text, mode));
        }
        if keywords.is_empty() {
            return Err(bad(format!("group {name:?} has no keywords")));
        }
        groups.push(ProfessionGroup { name, keywords });
    }
    Ok(groups)
}

pub fn default_professions() -> Vec<ProfessionGroup> {
    parse_professions(DEFAULT_PROFESSIONS.as_bytes(), "default professions")
        .expect("bundled profession config parses")
}
