//! Streaming reader for the plain-text `actors.list` / `actresses.list` dumps.
//!
//! A dump is a prose preamble, a banner (`THE ACTORS LIST`), a rule line,
//! a `Name  Titles` column header, then performer blocks. A block opens with
//! `Bridges, Jeff<TAB><TAB>The Big Lebowski (1998)  [The Dude]  <1>`; further
//! titles sit on tab-indented lines such as
//! `<TAB><TAB><TAB>"Show" (1990) {Finale (2005) (#16.9)}  (voice)  [Narrator]`,
//! and a blank line ends the block.
//!
//! Every non-blank line in the data region is a *title line*. Each one is
//! either emitted as a [`RawAppearance`] or attributed to exactly one of the
//! exclusion/skip counters in [`ParseReport`].

use std::io::{self, BufRead, BufReader, Chain, Cursor, Read};
use std::sync::OnceLock;

use flate2::bufread::MultiGzDecoder;
use regex::Regex;

use crate::error::{Error, Result};
use crate::{Gender, MAX_YEAR, MIN_YEAR};

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];
const FOOTER_RULE: &str = "-----------------------------";
const FOOTER_LITERAL: &str = "SUBMITTING UPDATES";

/// One title line of a performer block, after record-level filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawAppearance {
    /// Surname-first, exactly as listed.
    pub performer: String,
    /// Title without the surrounding quotes used for series.
    pub title: String,
    /// Episode year when the episode carries one, else the title year.
    pub year: u16,
    pub is_episode: bool,
    /// Bracketed character name, unmodified.
    pub raw_role: Option<String>,
    pub billing: Option<u32>,
    /// Parenthesized attributes after the year, without parentheses.
    pub attributes: Vec<String>,
    pub gender: Gender,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub records_emitted: u64,
    pub lines_skipped_malformed: u64,
    pub records_excluded_alternative_name: u64,
    /// Missing (`????`) years and years outside the retained range.
    pub records_excluded_no_year: u64,
}

impl ParseReport {
    /// Number of title lines seen in the data region.
    pub fn title_lines(&self) -> u64 {
        self.records_emitted
            + self.lines_skipped_malformed
            + self.records_excluded_alternative_name
            + self.records_excluded_no_year
    }

    pub fn absorb(&mut self, other: &ParseReport) {
        self.records_emitted += other.records_emitted;
        self.lines_skipped_malformed += other.lines_skipped_malformed;
        self.records_excluded_alternative_name += other.records_excluded_alternative_name;
        self.records_excluded_no_year += other.records_excluded_no_year;
    }
}

/// A parsed `TitleEntry`, before any record-level exclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TitleEntry {
    pub title: String,
    /// The title was quoted, which marks a television series.
    pub is_series: bool,
    /// `None` for `(????)`.
    pub title_year: Option<u16>,
    /// Roman-numeral disambiguator such as `II` in `(1998/II)`.
    pub disambiguator: Option<String>,
    /// Text between the episode braces.
    pub episode: Option<String>,
    pub attributes: Vec<String>,
    pub role: Option<String>,
    pub billing: Option<u32>,
}

fn year_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\((\d{4}|\?{4})(?:/([IVXL]+))?\)").unwrap())
}

fn episode_date_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\((\d{4})(?:-\d{2}-\d{2})?\)").unwrap())
}

fn banner_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"THE ACT(?:ORS|RESSES) LIST").unwrap())
}

fn column_header_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^Name\s+Titles").unwrap())
}

/// Splits `s` (starting with `open`) at its matching `close`, honouring
/// nesting. Returns the inner text and the remainder.
fn take_balanced(s: &str, open: char, close: char) -> Option<(&str, &str)> {
    debug_assert!(s.starts_with(open));
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        if c == open {
            depth += 1;
        } else if c == close {
            depth -= 1;
            if depth == 0 {
                return Some((&s[open.len_utf8()..i], &s[i + close.len_utf8()..]));
            }
        }
    }
    None
}

fn is_gap(c: char) -> bool {
    c == ' ' || c == '\t'
}

/// Parses the part of a title line after the performer column.
/// Returns `None` when the text does not follow the entry grammar.
pub fn parse_title_entry(entry: &str) -> Option<TitleEntry> {
    let entry = entry.trim_matches(is_gap);
    let caps = year_re().captures_iter(entry).find(|c| {
        let start = c.get(0).unwrap().start();
        let before = &entry[..start];
        before.ends_with(is_gap) && !before.trim_matches(is_gap).is_empty()
    })?;
    let whole = caps.get(0).unwrap();

    let raw_title = entry[..whole.start()].trim_matches(is_gap);
    let is_series = raw_title.len() >= 2 && raw_title.starts_with('"') && raw_title.ends_with('"');
    let title = if is_series {
        &raw_title[1..raw_title.len() - 1]
    } else {
        raw_title
    };
    if title.is_empty() {
        return None;
    }

    let title_year = caps[1].parse::<u16>().ok();
    let disambiguator = caps.get(2).map(|m| m.as_str().to_string());

    let mut parsed = TitleEntry {
        title: title.to_string(),
        is_series,
        title_year,
        disambiguator,
        episode: None,
        attributes: Vec::new(),
        role: None,
        billing: None,
    };

    let mut rest = &entry[whole.end()..];
    loop {
        let trimmed = rest.trim_start_matches(is_gap);
        if trimmed.is_empty() {
            break;
        }
        if trimmed.len() == rest.len() {
            // tokens must be separated by whitespace
            return None;
        }
        let locked = parsed.role.is_some() || parsed.billing.is_some();
        rest = match trimmed.chars().next()? {
            '{' if parsed.episode.is_none() && !locked => {
                let (inner, tail) = take_balanced(trimmed, '{', '}')?;
                parsed.episode = Some(inner.to_string());
                tail
            }
            '(' if !locked => {
                let (inner, tail) = take_balanced(trimmed, '(', ')')?;
                parsed.attributes.push(inner.to_string());
                tail
            }
            '[' if !locked => {
                let (inner, tail) = take_balanced(trimmed, '[', ']')?;
                parsed.role = Some(inner.to_string());
                tail
            }
            '<' if parsed.billing.is_none() => {
                let end = trimmed.find('>')?;
                let digits = &trimmed[1..end];
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                let billing: u32 = digits.parse().ok()?;
                if billing == 0 {
                    return None;
                }
                parsed.billing = Some(billing);
                &trimmed[end + 1..]
            }
            _ => return None,
        };
    }
    Some(parsed)
}

/// Year used for the record: a `(YYYY)` or `(YYYY-MM-DD)` date inside the
/// episode braces wins over the title year.
pub fn episode_year(entry: &TitleEntry) -> Option<u16> {
    entry
        .episode
        .as_deref()
        .and_then(|ep| episode_date_re().captures(ep))
        .and_then(|c| c[1].parse().ok())
        .or(entry.title_year)
}

/// The sniffed magic bytes put back in front of the rest of the stream.
type Rejoined<R> = BufReader<Chain<Cursor<Vec<u8>>, R>>;

/// Byte source with gzip detected from the first two bytes.
pub enum ListInput<R: Read> {
    Plain(Rejoined<R>),
    Gzip(BufReader<MultiGzDecoder<Rejoined<R>>>),
}

impl<R: Read> ListInput<R> {
    pub fn detect(mut inner: R) -> io::Result<Self> {
        let mut magic = Vec::with_capacity(2);
        (&mut inner).take(2).read_to_end(&mut magic)?;
        let is_gzip = magic == GZIP_MAGIC;
        let joined = BufReader::new(Cursor::new(magic).chain(inner));
        Ok(if is_gzip {
            ListInput::Gzip(BufReader::new(MultiGzDecoder::new(joined)))
        } else {
            ListInput::Plain(joined)
        })
    }
}

impl<R: Read> Read for ListInput<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        match self {
            ListInput::Plain(r) => r.read(buf),
            ListInput::Gzip(r) => r.read(buf),
        }
    }
}

impl<R: Read> BufRead for ListInput<R> {
    fn fill_buf(&mut self) -> io::Result<&[u8]> {
        match self {
            ListInput::Plain(r) => r.fill_buf(),
            ListInput::Gzip(r) => r.fill_buf(),
        }
    }

    fn consume(&mut self, amt: usize) {
        match self {
            ListInput::Plain(r) => r.consume(amt),
            ListInput::Gzip(r) => r.consume(amt),
        }
    }
}

fn decode_latin1(bytes: &[u8]) -> String {
    bytes.iter().map(|&b| b as char).collect()
}

enum Outcome {
    Emit(RawAppearance),
    Malformed,
    AlternativeName,
    NoYear,
}

/// Iterator over the appearances of one list file.
///
/// Construction consumes the preamble up to the start of the data region.
pub struct ListParser<R: BufRead> {
    reader: R,
    name: String,
    gender: Gender,
    performer: Option<String>,
    pending: Option<String>,
    report: ParseReport,
    buf: Vec<u8>,
    done: bool,
}

/// Opens a list stream, decompressing gzip input transparently.
pub fn parse_list_stream<R: Read>(
    input: R,
    gender: Gender,
    name: impl Into<String>,
) -> Result<ListParser<ListInput<R>>> {
    let name = name.into();
    let input = ListInput::detect(input).map_err(|e| Error::io(name.clone(), e))?;
    ListParser::new(input, gender, name)
}

impl<R: BufRead> ListParser<R> {
    pub fn new(reader: R, gender: Gender, name: impl Into<String>) -> Result<Self> {
        let mut parser = ListParser {
            reader,
            name: name.into(),
            gender,
            performer: None,
            pending: None,
            report: ParseReport::default(),
            buf: Vec::new(),
            done: false,
        };
        parser.seek_data_region()?;
        Ok(parser)
    }

    pub fn gender(&self) -> Gender {
        self.gender
    }

    /// Counters so far; final once the iterator is exhausted.
    pub fn report(&self) -> &ParseReport {
        &self.report
    }

    fn read_line(&mut self) -> Result<Option<String>> {
        self.buf.clear();
        let n = self
            .reader
            .read_until(b'\n', &mut self.buf)
            .map_err(|e| Error::io(self.name.clone(), e))?;
        if n == 0 {
            return Ok(None);
        }
        let mut line: &[u8] = &self.buf;
        if let Some(stripped) = line.strip_suffix(b"\n") {
            line = stripped;
        }
        if let Some(stripped) = line.strip_suffix(b"\r") {
            line = stripped;
        }
        Ok(Some(decode_latin1(line)))
    }

    fn seek_data_region(&mut self) -> Result<()> {
        #[derive(Clone, Copy)]
        enum Stage {
            Banner,
            Rule,
            Columns,
        }
        let mut stage = Stage::Banner;
        let mut furthest = 0;
        loop {
            let Some(line) = self.read_line()? else {
                return Err(Error::MissingSentinel {
                    input: self.name.clone(),
                    sentinel: match furthest {
                        0 => "THE ACTORS LIST / THE ACTRESSES LIST banner",
                        1 => "==== or ---- rule line after the banner",
                        _ => "Name/Titles column header",
                    },
                });
            };
            if line.trim().is_empty() && !matches!(stage, Stage::Banner) {
                continue;
            }
            stage = match stage {
                Stage::Rule if line.starts_with("====") || line.starts_with("----") => {
                    furthest = furthest.max(2);
                    Stage::Columns
                }
                Stage::Columns if column_header_re().is_match(&line) => break,
                _ if banner_re().is_match(&line) => {
                    furthest = furthest.max(1);
                    Stage::Rule
                }
                _ => Stage::Banner,
            };
        }
        // The column header is usually underlined with dashes.
        if let Some(line) = self.read_line()? {
            let underline = line.contains('-')
                && line.chars().all(|c| c == '-' || c.is_whitespace())
                && !line.starts_with(FOOTER_RULE);
            if !underline {
                self.pending = Some(line);
            }
        }
        Ok(())
    }

    fn classify(&mut self, line: &str) -> Outcome {
        let entry_text = if line.starts_with('\t') {
            if self.performer.is_none() {
                return Outcome::Malformed;
            }
            line.trim_start_matches('\t')
        } else {
            let Some((name, entry)) = line.split_once('\t') else {
                self.performer = None;
                return Outcome::Malformed;
            };
            let name = name.trim();
            if name.is_empty() {
                self.performer = None;
                return Outcome::Malformed;
            }
            self.performer = Some(name.to_string());
            entry
        };

        let Some(entry) = parse_title_entry(entry_text) else {
            return Outcome::Malformed;
        };
        if entry.attributes.iter().any(|a| a.starts_with("as ")) {
            return Outcome::AlternativeName;
        }
        let year = match episode_year(&entry) {
            Some(y) if (MIN_YEAR..=MAX_YEAR).contains(&y) => y,
            _ => return Outcome::NoYear,
        };
        Outcome::Emit(RawAppearance {
            performer: self.performer.clone().unwrap_or_default(),
            title: entry.title,
            year,
            is_episode: entry.episode.is_some(),
            raw_role: entry.role,
            billing: entry.billing,
            attributes: entry.attributes,
            gender: self.gender,
        })
    }
}

impl<R: BufRead> Iterator for ListParser<R> {
    type Item = Result<RawAppearance>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let line = match self.pending.take().map(|l| Ok(Some(l))).unwrap_or_else(|| self.read_line()) {
                Ok(Some(line)) => line,
                Ok(None) => {
                    self.done = true;
                    break;
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            };
            if line.starts_with(FOOTER_RULE) || line.starts_with(FOOTER_LITERAL) {
                self.done = true;
                break;
            }
            if line.trim().is_empty() {
                self.performer = None;
                continue;
            }
            match self.classify(&line) {
                Outcome::Emit(rec) => {
                    self.report.records_emitted += 1;
                    return Some(Ok(rec));
                }
                Outcome::Malformed => self.report.lines_skipped_malformed += 1,
                Outcome::AlternativeName => self.report.records_excluded_alternative_name += 1,
                Outcome::NoYear => self.report.records_excluded_no_year += 1,
            }
        }
        None
    }
}
