//! The stem lexicon.
//!
//! Only citation forms are stored, each with its inflection class. Every
//! entry is indexed under its lemma, its base stem and each of its named
//! alternant stems so that the analyzer can go from a stripped root back to
//! the entry.

mod acquire;
mod fullform;

pub use acquire::{next_question, Answer, QuestionNode, QuestionTree, Skeleton, Step, TreeError};
pub use fullform::{export_fullforms, fullform_lines, ExportError, FullFormLine, FullFormTable};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::inflect::{base_stem, generate, GenerationError, Paradigm, ParadigmRegistry};
use crate::tagset::Pos;
use crate::text::nfc;

/// Lexically conditioned stem alternations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StemFlags {
    /// Umlaut in the slots that allow it (*Haus - Häuser*).
    pub umlaut: bool,
    /// Final ß becomes ss in the slots that allow it (*Faß - Fässer*).
    pub ss_shift: bool,
}

impl StemFlags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.umlaut {
            out.push("umlaut");
        }
        if self.ss_shift {
            out.push("ss_shift");
        }
        out
    }

    /// Parses a comma- or semicolon-separated flag list; `-` is the empty list.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut flags = StemFlags::default();
        for raw in text.split([',', ';']) {
            match raw.trim() {
                "" | "-" => {}
                "umlaut" | "UMLAUT" => flags.umlaut = true,
                "ss_shift" | "SS_SHIFT" => flags.ss_shift = true,
                other => return Err(other.to_string()),
            }
        }
        Ok(flags)
    }
}

/// One lexicon record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemEntry {
    pub lemma: String,
    pub pos: Pos,
    pub paradigm_id: String,
    /// Named stem variants such as `past=ging`, `part=gang`.
    pub alternants: BTreeMap<String, String>,
    pub flags: StemFlags,
    pub separable_prefix: Option<String>,
    pub gloss: Option<String>,
}

impl StemEntry {
    pub fn new(lemma: &str, pos: Pos, paradigm_id: &str) -> Self {
        Self {
            lemma: lemma.to_string(),
            pos,
            paradigm_id: paradigm_id.to_string(),
            alternants: BTreeMap::new(),
            flags: StemFlags::default(),
            separable_prefix: None,
            gloss: None,
        }
    }

    fn key(&self) -> (&str, Pos, &str) {
        (&self.lemma, self.pos, &self.paradigm_id)
    }

    fn normalized(mut self) -> Self {
        self.lemma = nfc(&self.lemma);
        self.alternants = self.alternants.into_iter().map(|(k, v)| (k, nfc(&v))).collect();
        self.separable_prefix = self.separable_prefix.map(|p| nfc(&p));
        self
    }

    /// Renders the `flag=value;...` column of the lexicon file.
    pub fn render_attributes(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if let Some(p) = &self.separable_prefix {
            parts.push(format!("prefix={p}"));
        }
        for (k, v) in &self.alternants {
            parts.push(format!("{k}={v}"));
        }
        parts.extend(self.flags.names().into_iter().map(String::from));
        if let Some(g) = &self.gloss {
            parts.push(format!("gloss={g}"));
        }
        parts.join(";")
    }
}

impl fmt::Display for StemEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.lemma, self.pos, self.paradigm_id)?;
        let attrs = self.render_attributes();
        if !attrs.is_empty() {
            write!(f, "\t{attrs}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntryId(pub u32);

impl fmt::Display for EntryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("duplicate entry {lemma} {pos} {paradigm}")]
    DuplicateEntry { lemma: String, pos: Pos, paradigm: String },
    #[error("unknown paradigm `{0}`")]
    UnknownParadigm(String),
    #[error("malformed lemma `{0}`")]
    MalformedLemma(String),
    #[error(transparent)]
    Generation(#[from] GenerationError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Entry { line: usize, source: LexiconError },
}

/// Stem entries plus the paradigm registry they refer to.
#[derive(Debug, Clone)]
pub struct Lexicon {
    paradigms: ParadigmRegistry,
    entries: Vec<StemEntry>,
    index: BTreeMap<String, Vec<EntryId>>,
    keys: BTreeSet<(String, Pos, String)>,
    version: String,
}

impl Lexicon {
    pub fn new(paradigms: ParadigmRegistry) -> Self {
        Self {
            paradigms,
            entries: Vec::new(),
            index: BTreeMap::new(),
            keys: BTreeSet::new(),
            version: String::from(&crate::FORMAT_HEADER[1..]),
        }
    }

    /// The shipped fixture lexicon over the shipped paradigms.
    pub fn fixture() -> Self {
        Self::parse(crate::data::FIXTURE_LEXICON, ParadigmRegistry::fixture())
            .expect("shipped fixture lexicon is valid")
    }

    pub fn paradigms(&self) -> &ParadigmRegistry {
        &self.paradigms
    }

    pub fn paradigm_of(&self, entry: &StemEntry) -> Option<&Paradigm> {
        self.paradigms.get(&entry.paradigm_id)
    }

    pub fn entries(&self) -> &[StemEntry] {
        &self.entries
    }

    pub fn entry(&self, id: EntryId) -> Option<&StemEntry> {
        self.entries.get(id.0 as usize)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Validates, stores and indexes a new entry.
    pub fn add_stem(&mut self, entry: StemEntry) -> Result<EntryId, LexiconError> {
        let entry = entry.normalized();
        if entry.lemma.is_empty() || entry.lemma.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(LexiconError::MalformedLemma(entry.lemma));
        }
        let paradigm = self
            .paradigms
            .get(&entry.paradigm_id)
            .ok_or_else(|| LexiconError::UnknownParadigm(entry.paradigm_id.clone()))?;
        let (lemma, pos, pid) = entry.key();
        let key = (lemma.to_string(), pos, pid.to_string());
        if self.keys.contains(&key) {
            return Err(LexiconError::DuplicateEntry {
                lemma: key.0,
                pos: key.1,
                paradigm: key.2,
            });
        }
        // proves every alternant the paradigm needs is present
        generate(&entry, paradigm)?;
        let id = EntryId(self.entries.len() as u32);
        for k in index_keys(&entry, paradigm)? {
            self.index.entry(k).or_default().push(id);
        }
        self.keys.insert(key);
        self.entries.push(entry);
        Ok(id)
    }

    /// Every entry whose lemma, stem or alternant equals `root`, ordered by
    /// (lemma, pos, paradigm).
    pub fn lookup_stem(&self, root: &str) -> Vec<&StemEntry> {
        let mut out: Vec<&StemEntry> = self
            .lookup_ids(root)
            .iter()
            .map(|id| &self.entries[id.0 as usize])
            .collect();
        out.sort_by(|a, b| a.key().cmp(&b.key()));
        out
    }

    pub fn lookup_ids(&self, root: &str) -> &[EntryId] {
        self.index.get(root).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Whether some entry is indexed under `root`.
    pub fn has_key(&self, root: &str) -> bool {
        self.index.contains_key(root)
    }

    /// Recomputes the index from the entries alone.
    pub fn rebuild_index(&self) -> BTreeMap<String, Vec<EntryId>> {
        let mut index: BTreeMap<String, Vec<EntryId>> = BTreeMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            let p = self.paradigm_of(e).expect("entries resolve");
            for k in index_keys(e, p).expect("entries were validated") {
                index.entry(k).or_default().push(EntryId(i as u32));
            }
        }
        index
    }

    pub fn index(&self) -> &BTreeMap<String, Vec<EntryId>> {
        &self.index
    }

    /// Parses the lexicon file format:
    /// `lemma<TAB>pos<TAB>paradigm_id[<TAB>flag=value;...]`.
    pub fn parse(text: &str, paradigms: ParadigmRegistry) -> Result<Self, LexiconFileError> {
        let mut lexicon = Lexicon::new(paradigms);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let entry = parse_entry_line(raw).map_err(|message| LexiconFileError::Syntax { line, message })?;
            lexicon
                .add_stem(entry)
                .map_err(|source| LexiconFileError::Entry { line, source })?;
        }
        Ok(lexicon)
    }

    /// Renders the lexicon in its file format, entries in insertion order.
    pub fn render(&self) -> String {
        let mut out = String::from(crate::FORMAT_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses one lexicon line.
pub fn parse_entry_line(raw: &str) -> Result<StemEntry, String> {
    let fields: Vec<&str> = raw.split('\t').collect();
    if fields.len() < 3 {
        return Err("expected `lemma<TAB>pos<TAB>paradigm_id[<TAB>attributes]`".into());
    }
    let pos = Pos::from_code(fields[1].trim()).ok_or_else(|| format!("unknown part of speech `{}`", fields[1]))?;
    let mut entry = StemEntry::new(fields[0].trim(), pos, fields[2].trim());
    if let Some(attrs) = fields.get(3) {
        for item in attrs.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some(("prefix", v)) => entry.separable_prefix = Some(v.trim().to_string()),
                Some(("gloss", v)) => entry.gloss = Some(v.trim().to_string()),
                Some((k, v)) if !k.trim().is_empty() && !v.trim().is_empty() => {
                    entry.alternants.insert(k.trim().to_string(), v.trim().to_string());
                }
                Some(_) => return Err(format!("malformed attribute `{item}`")),
                None => {
                    let flag = StemFlags::parse(item).map_err(|f| format!("unknown flag `{f}`"))?;
                    entry.flags.umlaut |= flag.umlaut;
                    entry.flags.ss_shift |= flag.ss_shift;
                }
            }
        }
    }
    Ok(entry)
}

/// Strings under which `entry` is indexed: lemma, prefixed base stem, and
/// every prefixed alternant.
pub fn index_keys(entry: &StemEntry, paradigm: &Paradigm) -> Result<BTreeSet<String>, GenerationError> {
    let prefix = entry.separable_prefix.as_deref().unwrap_or("");
    let mut keys = BTreeSet::new();
    keys.insert(entry.lemma.clone());
    keys.insert(format!("{prefix}{}", base_stem(entry, paradigm)?));
    for alt in entry.alternants.values() {
        keys.insert(format!("{prefix}{alt}"));
    }
    Ok(keys)
}
