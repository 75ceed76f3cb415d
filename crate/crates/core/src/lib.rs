//! German morphology without the operating system.
//!
//! `morphkit-core` holds the algorithmic half of morphkit: a compact stem
//! lexicon with declarative inflection paradigms, a generator and an
//! analyzer built on top of it (affix stripping, mutation reversal,
//! verification by regeneration, compound splitting, a suffix guesser), a
//! feature-bundle tag set with a coarse 51-tag projection, a trigram tagger
//! and a tag-driven lemmatizer.
//!
//! The crate is `no_std` and only needs `alloc`. All text formats are parsed
//! from and rendered to in-memory strings; reading files, the command line
//! and the HTTP service live in the `morphkit` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analyze;
pub mod corpus;
pub mod data;
pub mod inflect;
pub mod lemmatize;
pub mod lexicon;
pub mod tagger;
pub mod tagset;
pub mod text;

pub use analyze::{analyze, Analysis, Provenance, Segment};
pub use inflect::{Paradigm, ParadigmRegistry, Slot};
pub use lexicon::{EntryId, Lexicon, StemEntry};
pub use tagger::TrigramModel;
pub use tagset::{Tag, TagsetMapping, TagsetMode};

/// Header line carried by every registry file.
pub const FORMAT_HEADER: &str = "#morphkit-v1";
