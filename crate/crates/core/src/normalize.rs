//! Role-string cleaning.
//!
//! A raw bracketed role becomes zero or more lower-cased role strings:
//! parenthesized text is dropped, multi-role strings are split on `/`,
//! ordinal markers (`1st`..`5th`, `first`..`fifth`) are stripped, and
//! `n/a` and self-references (`himself`, `herself`, `themselves`) are
//! filtered out entirely.

use std::fmt;

const ORDINALS: [&str; 10] = [
    "first", "second", "third", "fourth", "fifth", "1st", "2nd", "3rd", "4th", "5th",
];

const SELF_ROLES: [&str; 3] = ["himself", "herself", "themselves"];

/// A cleaned role string. Always a fixed point of [`clean_role`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedRole(String);

impl NormalizedRole {
    /// Accepts `text` only if it is already in normalized form.
    pub fn parse(text: &str) -> Option<Self> {
        let mut cleaned = clean_role(text);
        match cleaned.pop() {
            Some(role) if cleaned.is_empty() && role.0 == text => Some(role),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for NormalizedRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for NormalizedRole {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Exact (whole-string) match against the self-reference list.
pub fn is_self_role(raw: &str) -> bool {
    let lowered = raw.trim().to_lowercase();
    SELF_ROLES.contains(&lowered.as_str())
}

fn is_not_applicable(text: &str) -> bool {
    text.trim().eq_ignore_ascii_case("n/a")
}

/// Removes every parenthesized segment, including nested ones. An
/// unmatched `(` removes through the end of the text; a stray `)` is dropped.
pub fn strip_parentheticals(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '(' => {
                if depth == 0 {
                    out.push(' ');
                }
                depth += 1;
            }
            ')' => depth = depth.saturating_sub(1),
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Strips leading ordinal markers. Expects collapsed, lower-cased text.
fn strip_ordinal_prefixes(mut text: &str) -> &str {
    'outer: loop {
        for ord in ORDINALS {
            if let Some(rest) = text.strip_prefix(ord).and_then(|r| r.strip_prefix(' ')) {
                text = rest;
                continue 'outer;
            }
        }
        return text;
    }
}

/// Cleans a raw role into its normalized roles, in order of appearance.
pub fn clean_role(raw: &str) -> Vec<NormalizedRole> {
    if is_not_applicable(raw) || is_self_role(raw) {
        return Vec::new();
    }
    let stripped = strip_parentheticals(raw);
    if is_not_applicable(&collapse_whitespace(&stripped)) {
        return Vec::new();
    }
    stripped
        .split('/')
        .filter_map(|fragment| {
            let collapsed = collapse_whitespace(&fragment.to_lowercase());
            let role = strip_ordinal_prefixes(&collapsed);
            if role.is_empty() || is_self_role(role) {
                None
            } else {
                Some(NormalizedRole(role.to_string()))
            }
        })
        .collect()
}
