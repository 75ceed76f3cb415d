//! Analysis of word forms.
//!
//! Analysis runs generation backwards. A form is cut into candidate roots by
//! removing participle and infinitive markers and paradigm suffixes and by
//! undoing umlaut, ß/ss and e-omission. Each root found in the lexicon is
//! regenerated, and only the slots that reproduce the form are kept. Forms
//! without a direct reading go to the compound splitter and then to the
//! suffix guesser.

mod compound;
mod guesser;

pub use compound::Segmentation;
pub use guesser::{GuesserError, GuesserModel, DEFAULT_SUFFIX_LEN, GUESSER_HEADER};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::inflect::{generate, reinsert_e, reverse_umlaut, ss_shift, SsDirection};
use crate::lexicon::{EntryId, Lexicon};
use crate::tagset::{Pos, Tag};
use crate::text::{lower_first, nfc, surface_matches, upper_first};

/// Where a reading comes from. The derived order is the output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Lexicon,
    Compound,
    Guesser,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Lexicon => "LEXICON",
            Provenance::Compound => "COMPOUND",
            Provenance::Guesser => "GUESSER",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One piece of a (possibly trivial) segmentation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    /// The substring of the surface form this piece covers, linker excluded.
    pub piece: String,
    pub lemma: String,
    /// Linking letters following the piece; empty on the last segment.
    pub linker: String,
}

impl Segment {
    pub fn whole(surface: &str, lemma: &str) -> Self {
        Segment {
            piece: surface.to_string(),
            lemma: lemma.to_string(),
            linker: String::new(),
        }
    }
}

/// Renders segments as `Schwein(e)+Bauch`: piece lemmas joined by `+`,
/// linkers in parentheses.
pub fn render_segments(segments: &[Segment]) -> String {
    let parts: Vec<String> = segments
        .iter()
        .map(|s| {
            if s.linker.is_empty() {
                s.lemma.clone()
            } else {
                format!("{}({})", s.lemma, s.linker)
            }
        })
        .collect();
    parts.join("+")
}

/// One reading of a surface form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub surface: String,
    pub lemma: String,
    pub tag: Tag,
    pub segments: Vec<Segment>,
    pub provenance: Provenance,
}

impl Analysis {
    fn sort_key(&self) -> (Provenance, String, &str, &[Segment]) {
        (self.provenance, self.tag.render(), &self.lemma, &self.segments)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyzeError {
    #[error("empty word form")]
    EmptyForm,
    #[error(transparent)]
    Guesser(#[from] GuesserError),
}

/// Default linking letters tried between compound pieces (ε is always tried).
pub const DEFAULT_LINKERS: [&str; 6] = ["e", "s", "es", "en", "er", "n"];

/// Shortest compound piece, in characters.
pub const MIN_PIECE_LEN: usize = 3;

/// Default number of guesser readings kept for an unknown form.
pub const DEFAULT_TOP_K: usize = 10;

/// An analyzer bound to a lexicon and, optionally, a guesser.
#[derive(Debug, Clone)]
pub struct Analyzer<'a> {
    lexicon: &'a Lexicon,
    guesser: Option<&'a GuesserModel>,
    suffixes: Vec<String>,
    linkers: Vec<String>,
    top_k: usize,
}

impl<'a> Analyzer<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        Self {
            lexicon,
            guesser: None,
            suffixes: lexicon.paradigms().suffixes(),
            linkers: DEFAULT_LINKERS.iter().map(|s| s.to_string()).collect(),
            top_k: DEFAULT_TOP_K,
        }
    }

    pub fn with_guesser(mut self, guesser: &'a GuesserModel) -> Self {
        self.guesser = Some(guesser);
        self
    }

    /// Replaces the linker set; the empty linker is always tried.
    pub fn with_linkers<S: AsRef<str>>(mut self, linkers: &[S]) -> Self {
        let set: BTreeSet<String> = linkers
            .iter()
            .map(|s| s.as_ref().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        self.linkers = set.into_iter().collect();
        self
    }

    pub fn with_top_k(mut self, k: usize) -> Self {
        self.top_k = k;
        self
    }

    pub fn lexicon(&self) -> &'a Lexicon {
        self.lexicon
    }

    pub fn guesser(&self) -> Option<&'a GuesserModel> {
        self.guesser
    }

    pub fn linkers(&self) -> &[String] {
        &self.linkers
    }

    /// Every string that might be the lexicon key behind `form`.
    pub fn candidate_roots(&self, form: &str) -> Result<Vec<String>, AnalyzeError> {
        if form.is_empty() {
            return Err(AnalyzeError::EmptyForm);
        }
        let form = nfc(form);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |s: String, out: &mut Vec<String>| {
            if !s.is_empty() && seen.insert(s.clone()) {
                out.push(s);
            }
        };
        let mut shapes = Vec::new();
        for v in [form.clone(), lower_first(&form), upper_first(&form)] {
            if !shapes.contains(&v) {
                shapes.push(v);
            }
        }
        let mut unmarked = Vec::new();
        for v in &shapes {
            unmarked.push(v.clone());
            for marker in ["ge", "zu"] {
                for (i, _) in v.match_indices(marker) {
                    let rest = format!("{}{}", &v[..i], &v[i + marker.len()..]);
                    if i + marker.len() < v.len() {
                        unmarked.push(rest);
                    }
                }
            }
        }
        for u in &unmarked {
            for suffix in &self.suffixes {
                let Some(root) = u.strip_suffix(suffix.as_str()) else {
                    continue;
                };
                if root.is_empty() {
                    continue;
                }
                for r in reverse_umlaut(root) {
                    let eszett = ss_shift(&r, SsDirection::SsToEszett);
                    let e_back = reinsert_e(&r);
                    push(r, &mut out);
                    push(eszett, &mut out);
                    if let Some(e) = e_back {
                        push(e, &mut out);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Readings verified by regeneration from lexicon entries.
    pub fn direct(&self, form: &str) -> Result<Vec<Analysis>, AnalyzeError> {
        let form = nfc(form);
        let mut ids: BTreeSet<EntryId> = BTreeSet::new();
        for root in self.candidate_roots(&form)? {
            ids.extend(self.lexicon.lookup_ids(&root).iter().copied());
        }
        let mut out = Vec::new();
        for id in ids {
            let entry = self.lexicon.entry(id).expect("indexed ids resolve");
            let Some(paradigm) = self.lexicon.paradigm_of(entry) else {
                continue;
            };
            let Ok(forms) = generate(entry, paradigm) else {
                continue;
            };
            for (generated, tag) in forms {
                if surface_matches(&generated, &form) {
                    out.push(Analysis {
                        surface: form.clone(),
                        lemma: entry.lemma.clone(),
                        tag,
                        segments: alloc::vec![Segment::whole(&form, &entry.lemma)],
                        provenance: Provenance::Lexicon,
                    });
                }
            }
        }
        sort_dedup(&mut out);
        Ok(out)
    }

    /// Direct readings restricted to the given parts of speech.
    fn direct_with_pos(&self, form: &str, allowed: &[Pos]) -> Vec<Analysis> {
        let mut out = self.direct(form).unwrap_or_default();
        out.retain(|a| allowed.contains(&a.tag.pos));
        out
    }

    /// Guesser readings for `form`: the `top_k` likeliest tags, lemma = form.
    pub fn guessed(&self, form: &str) -> Result<Vec<Analysis>, AnalyzeError> {
        let form = nfc(form);
        let Some(g) = self.guesser else {
            return Ok(Vec::new());
        };
        let mut out: Vec<Analysis> = g
            .top_k(&form, self.top_k)?
            .into_iter()
            .map(|(tag, _)| Analysis {
                surface: form.clone(),
                lemma: form.clone(),
                tag,
                segments: alloc::vec![Segment::whole(&form, &form)],
                provenance: Provenance::Guesser,
            })
            .collect();
        sort_dedup(&mut out);
        Ok(out)
    }

    /// All readings of `form`: direct, else compound, else guessed.
    pub fn analyze(&self, form: &str) -> Result<Vec<Analysis>, AnalyzeError> {
        if form.is_empty() {
            return Err(AnalyzeError::EmptyForm);
        }
        let direct = self.direct(form)?;
        if !direct.is_empty() {
            return Ok(direct);
        }
        let compounds = self.compound_analyses(form);
        if !compounds.is_empty() {
            return Ok(compounds);
        }
        self.guessed(form)
    }
}

fn sort_dedup(out: &mut Vec<Analysis>) {
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out.dedup();
}

/// Analyzes `form` against `lexicon` with the default linkers, falling back
/// to `guesser` for unknown forms.
pub fn analyze(form: &str, lexicon: &Lexicon, guesser: &GuesserModel) -> Result<Vec<Analysis>, AnalyzeError> {
    Analyzer::new(lexicon).with_guesser(guesser).analyze(form)
}

#[cfg(test)]
mod tests;
