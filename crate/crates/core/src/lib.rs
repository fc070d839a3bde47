//! Role and gender statistics mined from the plain-text `actors.list` and
//! `actresses.list` cast-list dumps.
//!
//! The pipeline is [`listfile`] (raw appearances) → [`normalize`] (cleaned
//! role strings) → [`store`] (`(role, year)` gender counts, persisted as a
//! CSV snapshot) → [`analytics`], [`professions`] and [`census`].

pub mod analytics;
pub mod census;
pub mod cli;
pub mod error;
pub mod listfile;
pub mod normalize;
pub mod output;
pub mod pipeline;
pub mod professions;
pub mod store;

pub use error::{Error, Result};

use std::fmt;

/// Earliest retained year.
pub const MIN_YEAR: u16 = 1900;
/// Latest retained year.
pub const MAX_YEAR: u16 = 2020;

/// Performer gender, taken from which list file the record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gender {
    Female,
    Male,
}

impl Gender {
    pub fn code(&self) -> &'static str {
        match self {
            Gender::Female => "F",
            Gender::Male => "M",
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}
