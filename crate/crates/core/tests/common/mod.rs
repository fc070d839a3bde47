//! Generators and brute-force reference implementations shared by the
//! integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use castlist::normalize::NormalizedRole;
use castlist::store::{AggregateStore, RoleRecord};
use castlist::Gender;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn goldens() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub const LIST_HEADER: &str = "CRC: 0x0BADF00D  File: actors.list  Date: Fri Oct 24 00:00:00 2014\n\
\n\
Copyright 1990-2014 The Internet Movie Database, Inc.  All rights reserved.\n\
\n\
THE ACTORS LIST\n\
===============\n\
\n\
Name\t\t\tTitles \n\
----\t\t\t------\n";

pub const LIST_FOOTER: &str = "\n-----------------------------------------------------------------------------\n\
SUBMITTING UPDATES\n\
==================\n\
Late, Entry\t\tAfter The Footer (2000)  [Ghost]\n";

/// Number of nonblank lines between the column header (and its underline)
/// and the footer: every such line is one title line.
pub fn count_title_lines(text: &str) -> u64 {
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
    for line in lines.by_ref() {
        if line.starts_with("Name") && line[4..].starts_with(char::is_whitespace) && line.contains("Titles") {
            break;
        }
    }
    let mut count = 0;
    let mut first = true;
    for line in lines {
        if first {
            first = false;
            if line.contains('-') && line.chars().all(|c| c == '-' || c.is_whitespace()) && !line.starts_with(&"-".repeat(29)) {
                continue;
            }
        }
        if line.starts_with(&"-".repeat(29)) || line.starts_with("SUBMITTING UPDATES") {
            break;
        }
        if !line.trim().is_empty() {
            count += 1;
        }
    }
    count
}

/// What a generated data line should be classified as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Emit,
    Malformed,
    AltName,
    NoYear,
    /// Random text; only counted, not classified.
    Unknown,
    Blank,
}

const WORDS: &[&str] = &[
    "host", "nurse", "the", "dude", "doctor", "model", "police", "officer", "reporter", "judge", "mary",
    "zombie", "girl", "man", "cook", "voice", "bartender", "priest", "engineer", "walter",
];

fn words(rng: &mut ChaCha8Rng, n: usize) -> String {
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

fn title(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(1..4);
    let base = words(rng, n);
    if rng.gen_bool(0.3) {
        format!("\"{base}\"")
    } else {
        base
    }
}

fn role(rng: &mut ChaCha8Rng) -> String {
    match rng.gen_range(0..8) {
        0 => "Himself".into(),
        1 => "n/a".into(),
        2 => format!("{}/{}", words(rng, 1), words(rng, 2)),
        3 => format!("{} ({})", words(rng, 1), words(rng, 1)),
        4 => format!("2nd {}", words(rng, 1)),
        _ => {
            let n = rng.gen_range(1..3);
            words(rng, n)
        }
    }
}

/// One title entry (the part after the performer/tab prefix) and its
/// expected classification.
fn entry(rng: &mut ChaCha8Rng) -> (String, Expect) {
    let t = title(rng);
    let role_part = if rng.gen_bool(0.85) {
        format!("  [{}]", role(rng))
    } else {
        String::new()
    };
    let billing = if rng.gen_bool(0.3) {
        format!("  <{}>", rng.gen_range(1..60))
    } else {
        String::new()
    };
    match rng.gen_range(0..10) {
        0 => (format!("{t} (????){role_part}"), Expect::NoYear),
        1 => {
            let y = if rng.gen_bool(0.5) { rng.gen_range(1874..1900) } else { rng.gen_range(2021..2030) };
            (format!("{t} ({y}){role_part}"), Expect::NoYear)
        }
        2 => (
            format!("{t} ({})  (as {}){role_part}", rng.gen_range(1900..=2020), words(rng, 2)),
            Expect::AltName,
        ),
        3 => (format!("{} without a year{role_part}", t), Expect::Malformed),
        4 => (
            format!(
                "\"{}\" ({}) {{{} (#{}.{})}}{role_part}{billing}",
                words(rng, 2),
                rng.gen_range(1950..=2020),
                words(rng, 2),
                rng.gen_range(1..20),
                rng.gen_range(1..30)
            ),
            Expect::Emit,
        ),
        5 => (
            format!("{t} ({})  (uncredited){role_part}{billing}", rng.gen_range(1900..=2020)),
            Expect::Emit,
        ),
        6 => (
            format!("{t} ({}/II)  (TV){role_part}", rng.gen_range(1900..=2020)),
            Expect::Emit,
        ),
        _ => (format!("{t} ({}){role_part}{billing}", rng.gen_range(1900..=2020)), Expect::Emit),
    }
}

fn garbage(rng: &mut ChaCha8Rng) -> String {
    const ALPHABET: &[u8] = b"abcXYZ019 \t()[]{}<>?/\"'-=#.,:;";
    let len = rng.gen_range(1..60);
    let mut s: String = (0..len).map(|_| *ALPHABET.choose(rng).unwrap() as char).collect();
    // Keep random text from looking like the end of the data region.
    if s.starts_with("-----") {
        s.insert(0, 'x');
    }
    s
}

/// A full list file with a random data region. Returns the text and the
/// expected class of every data line, in order.
pub fn fuzz_list(rng: &mut ChaCha8Rng) -> (String, Vec<Expect>) {
    let mut text = String::from(LIST_HEADER);
    let mut expect = Vec::new();
    let mut in_block = false;
    for _ in 0..rng.gen_range(0..80) {
        match rng.gen_range(0..20) {
            0 | 1 => {
                text.push('\n');
                expect.push(Expect::Blank);
                in_block = false;
            }
            2 => {
                let g = garbage(rng);
                text.push_str(&g);
                text.push('\n');
                if g.trim().is_empty() {
                    expect.push(Expect::Blank);
                    in_block = false;
                } else {
                    expect.push(Expect::Unknown);
                    // Garbage may or may not open a performer block.
                    in_block = false;
                    text.push('\n');
                    expect.push(Expect::Blank);
                }
            }
            3 => {
                // A name with no tab separator is never a valid line.
                text.push_str(&format!("Nobody, {}\n", words(rng, 1)));
                expect.push(Expect::Malformed);
                in_block = false;
            }
            4..=9 => {
                let (e, x) = entry(rng);
                text.push_str(&format!("{}, {}\t\t{e}\n", words(rng, 1), words(rng, 1)));
                expect.push(x);
                in_block = true;
            }
            _ => {
                let (e, x) = entry(rng);
                text.push_str(&format!("\t\t\t{e}\n"));
                expect.push(if in_block { x } else { Expect::Malformed });
            }
        }
    }
    text.push_str(LIST_FOOTER);
    (text, expect)
}

pub type Tally = BTreeMap<(String, u16), (u64, u64)>;

/// A random role text that is already in normalized form.
pub fn random_role(rng: &mut ChaCha8Rng, vocab: usize) -> String {
    let i = rng.gen_range(0..vocab);
    let base = WORDS[i % WORDS.len()];
    if i < WORDS.len() {
        base.to_string()
    } else {
        format!("{base} {}", i / WORDS.len())
    }
}

pub fn random_records(rng: &mut ChaCha8Rng, n: usize, vocab: usize) -> Vec<RoleRecord> {
    (0..n)
        .map(|_| {
            let role = NormalizedRole::parse(&random_role(rng, vocab)).expect("generated roles are normalized");
            let year = rng.gen_range(castlist::MIN_YEAR..=castlist::MAX_YEAR);
            let gender = if rng.gen_bool(0.4) { Gender::Female } else { Gender::Male };
            RoleRecord::new(role, year, gender).unwrap()
        })
        .collect()
}

pub fn store_from(records: &[RoleRecord]) -> AggregateStore {
    let mut store = AggregateStore::new();
    for r in records {
        store.ingest(r);
    }
    store
}

/// A random store with at most `max_keys` keys.
pub fn random_store(rng: &mut ChaCha8Rng, max_keys: usize) -> AggregateStore {
    let mut store = AggregateStore::new();
    let vocab = rng.gen_range(1..=60);
    let n = rng.gen_range(0..=max_keys);
    for r in random_records(rng, n, vocab) {
        if store.len() >= max_keys && store.get(r.role().as_str(), r.year()).is_none() {
            continue;
        }
        store.ingest(&r);
    }
    store
}

pub fn tally(records: &[RoleRecord]) -> Tally {
    let mut t = Tally::new();
    for r in records {
        let e = t.entry((r.role().as_str().to_string(), r.year())).or_default();
        match r.gender() {
            Gender::Female => e.0 += 1,
            Gender::Male => e.1 += 1,
        }
    }
    t
}

pub fn store_as_tally(store: &AggregateStore) -> Tally {
    store
        .iter()
        .map(|(k, c)| ((k.role.as_str().to_string(), k.year), (c.female, c.male)))
        .collect()
}

/// `(role, count)` sorted by count descending, role ascending, first `k`.
pub fn oracle_rank(totals: BTreeMap<String, u64>, k: usize) -> Vec<(String, u64)> {
    let mut v: Vec<(String, u64)> = totals.into_iter().filter(|(_, c)| *c > 0).collect();
    // Bubble-free but independent: order by (-count, role) via a key tuple.
    v.sort_by_key(|(r, c)| (std::cmp::Reverse(*c), r.clone()));
    v.truncate(k);
    v
}

pub fn oracle_period_totals(t: &Tally, start: u16, end: u16) -> BTreeMap<String, u64> {
    let mut m = BTreeMap::new();
    for ((role, year), (f, male)) in t {
        if *year >= start && *year < end {
            *m.entry(role.clone()).or_insert(0) += f + male;
        }
    }
    m
}

pub fn oracle_top(t: &Tally, start: u16, end: u16, k: usize) -> Vec<(String, u64)> {
    oracle_rank(oracle_period_totals(t, start, end), k)
}

pub fn oracle_emerging(t: &Tally, start: u16, end: u16, k: usize, window: usize) -> Vec<(String, u64)> {
    let len = end - start;
    let prev: BTreeSet<String> = if window == 0 {
        BTreeSet::new()
    } else {
        oracle_top(t, start.saturating_sub(len), start, window)
            .into_iter()
            .map(|(r, _)| r)
            .collect()
    };
    let cur = oracle_period_totals(t, start, end)
        .into_iter()
        .filter(|(r, _)| !prev.contains(r))
        .collect();
    oracle_rank(cur, k)
}

pub fn oracle_top_by_gender(t: &Tally, female: bool, k: usize) -> Vec<(String, u64)> {
    let mut m = BTreeMap::new();
    for ((role, _), (f, male)) in t {
        *m.entry(role.clone()).or_insert(0) += if female { *f } else { *male };
    }
    oracle_rank(m, k)
}

/// Yearly `(year, female, male)` over roles accepted by `pred`, years with
/// no matching records omitted.
pub fn oracle_yearly(t: &Tally, pred: impl Fn(&str) -> bool) -> Vec<(u16, u64, u64)> {
    let mut m: BTreeMap<u16, (u64, u64)> = BTreeMap::new();
    for ((role, year), (f, male)) in t {
        if pred(role) {
            let e = m.entry(*year).or_default();
            e.0 += f;
            e.1 += male;
        }
    }
    m.into_iter().map(|(y, (f, male))| (y, f, male)).collect()
}

/// Keyword match semantics written out longhand.
pub fn oracle_match(mode: &str, role: &str, kw: &str) -> bool {
    let found = role.find(kw).is_some();
    match mode {
        "substring" => found,
        "exact" => role == kw,
        "substring-not-suffix" => {
            role == kw || (found && !(role.len() >= kw.len() && &role[role.len() - kw.len()..] == kw))
        }
        other => panic!("unknown mode {other}"),
    }
}

pub fn oracle_profession(t: &Tally, keywords: &[(String, String)]) -> (u64, u64) {
    let mut out = (0, 0);
    for ((role, _), (f, m)) in t {
        if keywords.iter().any(|(kw, mode)| oracle_match(mode, role, kw)) {
            out.0 += f;
            out.1 += m;
        }
    }
    out
}

/// Exact half-even 4-decimal rendering of `num / den`, done with decimal
/// long division rather than scaled integer rounding.
pub fn oracle_format(num: u64, den: u64) -> String {
    assert!(den > 0 && num <= den);
    let mut digits = Vec::new();
    let mut rem = num;
    let int = rem / den;
    rem %= den;
    for _ in 0..5 {
        rem *= 10;
        digits.push(rem / den);
        rem %= den;
    }
    let fifth = digits.pop().unwrap();
    let exact_half = fifth == 5 && rem == 0;
    let mut value = int * 10_000 + digits.iter().fold(0, |a, d| a * 10 + d);
    if fifth > 5 || (fifth == 5 && !exact_half) || (exact_half && value % 2 == 1) {
        value += 1;
    }
    format!("{}.{:04}", value / 10_000, value % 10_000)
}
