//! Paradigm-driven generation of inflected forms.
//!
//! A [`Paradigm`] is data: an ordered list of slots, each pairing a tag with
//! a suffix and a set of transformation flags. Generation takes the stem of a
//! lexicon entry (its lemma minus separable prefix and the paradigm's citation
//! ending), applies the flagged transformations and attaches the suffix.
//!
//! Stem transformations gated by the entry: `UMLAUT` and `SS_SHIFT` only fire
//! when the entry carries the matching flag, so one paradigm serves both
//! *Wind - Winde* and *Bauch - Bäuche*.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::lexicon::StemEntry;
use crate::tagset::{parse_tag, Pos, Tag, TagError, VerbForm};

/// Transformations applied when realizing one slot.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotFlags {
    pub umlaut: bool,
    pub ss_shift: bool,
    pub e_omit: bool,
    pub ge_participle: bool,
    pub zu_infix: bool,
    /// Realize the slot from this named alternant stem instead of the base stem.
    pub alternant: Option<String>,
}

impl SlotFlags {
    fn parse(text: &str) -> Result<Self, String> {
        let mut flags = SlotFlags::default();
        for raw in text.split(',') {
            let flag = raw.trim();
            match flag {
                "" => {}
                "UMLAUT" => flags.umlaut = true,
                "SS_SHIFT" => flags.ss_shift = true,
                "E_OMIT" => flags.e_omit = true,
                "GE_PARTICIPLE" => flags.ge_participle = true,
                "ZU_INFIX" => flags.zu_infix = true,
                _ => match flag.strip_prefix("ALT:") {
                    Some(name) if !name.is_empty() => flags.alternant = Some(name.to_string()),
                    _ => return Err(flag.to_string()),
                },
            }
        }
        Ok(flags)
    }
}

impl fmt::Display for SlotFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(name) = &self.alternant {
            parts.push(format!("ALT:{name}"));
        }
        for (on, name) in [
            (self.ss_shift, "SS_SHIFT"),
            (self.umlaut, "UMLAUT"),
            (self.e_omit, "E_OMIT"),
            (self.ge_participle, "GE_PARTICIPLE"),
            (self.zu_infix, "ZU_INFIX"),
        ] {
            if on {
                parts.push(name.to_string());
            }
        }
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub tag: Tag,
    pub suffix: String,
    pub flags: SlotFlags,
}

/// An inflection class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paradigm {
    pub id: String,
    pub pos: Pos,
    /// Citation-form ending removed from the lemma to obtain the stem (`en` for *gehen*).
    pub strip: String,
    pub slots: Vec<Slot>,
}

impl Paradigm {
    /// Names of every alternant stem some slot refers to.
    pub fn alternant_names(&self) -> BTreeSet<&str> {
        self.slots.iter().filter_map(|s| s.flags.alternant.as_deref()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParadigmError {
    #[error("missing `{0}` header line")]
    MissingHeader(&'static str),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Tag { line: usize, source: TagError },
    #[error("duplicate paradigm `{0}`")]
    DuplicateParadigm(String),
    #[error("paradigm `{0}` has no slots")]
    Empty(String),
    #[error("paradigm `{paradigm}`: tag {tag} appears in two slots")]
    DuplicateSlot { paradigm: String, tag: String },
    #[error("paradigm `{paradigm}`: slot {tag} does not have part of speech {pos}")]
    SlotPos { paradigm: String, tag: String, pos: Pos },
    #[error("paradigm `{paradigm}`: {flag} is only allowed on verb paradigms")]
    VerbOnlyFlag { paradigm: String, flag: &'static str },
}

/// All paradigms known to a lexicon, keyed by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParadigmRegistry {
    paradigms: BTreeMap<String, Paradigm>,
}

impl ParadigmRegistry {
    /// Parses the line-oriented registry format.
    ///
    /// ```text
    /// #morphkit-v1
    /// paradigm<TAB>noun-mas-e<TAB>SUB
    /// slot<TAB>SUB GEN SIN MAS<TAB>es
    /// slot<TAB>SUB NOM PLU MAS<TAB>e<TAB>UMLAUT
    /// ```
    ///
    /// A suffix of `-` stands for the empty suffix. Verb paradigms declare
    /// the citation ending with a trailing `strip=en` field.
    pub fn parse(text: &str) -> Result<Self, ParadigmError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, first)) if first.trim() == crate::FORMAT_HEADER => {}
            _ => return Err(ParadigmError::MissingHeader(crate::FORMAT_HEADER)),
        }
        let mut registry = ParadigmRegistry::default();
        let mut current: Option<Paradigm> = None;
        for (idx, raw) in lines {
            let line = idx + 1;
            if raw.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let syntax = |message: &str| ParadigmError::Syntax {
                line,
                message: message.to_string(),
            };
            match fields[0] {
                "paradigm" => {
                    if let Some(done) = current.take() {
                        registry.insert(done)?;
                    }
                    if fields.len() < 3 {
                        return Err(syntax("expected `paradigm<TAB>id<TAB>POS`"));
                    }
                    let pos = Pos::from_code(fields[2]).ok_or_else(|| syntax("unknown part of speech"))?;
                    let mut strip = String::new();
                    for extra in &fields[3..] {
                        match extra.strip_prefix("strip=") {
                            Some(s) => strip = s.to_string(),
                            None if extra.is_empty() => {}
                            None => return Err(syntax("unknown paradigm attribute")),
                        }
                    }
                    current = Some(Paradigm {
                        id: fields[1].to_string(),
                        pos,
                        strip,
                        slots: Vec::new(),
                    });
                }
                "slot" => {
                    let paradigm = current.as_mut().ok_or_else(|| syntax("slot outside of a paradigm"))?;
                    if fields.len() < 3 {
                        return Err(syntax("expected `slot<TAB>tag<TAB>suffix[<TAB>flags]`"));
                    }
                    let tag = parse_tag(fields[1]).map_err(|source| ParadigmError::Tag { line, source })?;
                    let suffix = match fields[2] {
                        "-" => String::new(),
                        s => crate::text::nfc(s),
                    };
                    let flags = SlotFlags::parse(fields.get(3).copied().unwrap_or(""))
                        .map_err(|flag| syntax(&format!("unknown slot flag `{flag}`")))?;
                    paradigm.slots.push(Slot { tag, suffix, flags });
                }
                _ => return Err(syntax("expected `paradigm` or `slot`")),
            }
        }
        if let Some(done) = current.take() {
            registry.insert(done)?;
        }
        Ok(registry)
    }

    /// The paradigms shipped with the fixture lexicon.
    pub fn fixture() -> Self {
        Self::parse(crate::data::PARADIGMS).expect("shipped paradigm registry is valid")
    }

    pub fn insert(&mut self, paradigm: Paradigm) -> Result<(), ParadigmError> {
        validate(&paradigm)?;
        if self.paradigms.contains_key(&paradigm.id) {
            return Err(ParadigmError::DuplicateParadigm(paradigm.id));
        }
        self.paradigms.insert(paradigm.id.clone(), paradigm);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&Paradigm> {
        self.paradigms.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Paradigm> {
        self.paradigms.values()
    }

    pub fn len(&self) -> usize {
        self.paradigms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paradigms.is_empty()
    }

    /// Every suffix used by some slot, longest first, including the empty suffix.
    pub fn suffixes(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .paradigms
            .values()
            .flat_map(|p| p.slots.iter().map(|s| s.suffix.as_str()))
            .chain(core::iter::once(""))
            .collect();
        let mut out: Vec<String> = set.into_iter().map(String::from).collect();
        out.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
        out
    }

    /// Renders the registry back to its text format.
    pub fn render(&self) -> String {
        let mut out = String::from(crate::FORMAT_HEADER);
        out.push('\n');
        for p in self.paradigms.values() {
            out.push_str(&format!("paradigm\t{}\t{}", p.id, p.pos));
            if !p.strip.is_empty() {
                out.push_str(&format!("\tstrip={}", p.strip));
            }
            out.push('\n');
            for s in &p.slots {
                let suffix = if s.suffix.is_empty() { "-" } else { &s.suffix };
                out.push_str(&format!("slot\t{}\t{}", s.tag, suffix));
                let flags = s.flags.to_string();
                if !flags.is_empty() {
                    out.push('\t');
                    out.push_str(&flags);
                }
                out.push('\n');
            }
        }
        out
    }
}

fn validate(p: &Paradigm) -> Result<(), ParadigmError> {
    if p.slots.is_empty() {
        return Err(ParadigmError::Empty(p.id.clone()));
    }
    let mut seen = BTreeSet::new();
    for slot in &p.slots {
        if slot.tag.pos != p.pos {
            return Err(ParadigmError::SlotPos {
                paradigm: p.id.clone(),
                tag: slot.tag.render(),
                pos: p.pos,
            });
        }
        if !seen.insert(slot.tag) {
            return Err(ParadigmError::DuplicateSlot {
                paradigm: p.id.clone(),
                tag: slot.tag.render(),
            });
        }
        if p.pos != Pos::Ver {
            let flag = if slot.flags.zu_infix {
                Some("ZU_INFIX")
            } else if slot.flags.ge_participle {
                Some("GE_PARTICIPLE")
            } else {
                None
            };
            if let Some(flag) = flag {
                return Err(ParadigmError::VerbOnlyFlag {
                    paradigm: p.id.clone(),
                    flag,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerationError {
    #[error("entry `{lemma}` is {entry} but paradigm `{paradigm}` inflects {expected}")]
    PosMismatch {
        lemma: String,
        entry: Pos,
        paradigm: String,
        expected: Pos,
    },
    #[error("lemma `{lemma}` does not start with its separable prefix `{prefix}`")]
    PrefixMismatch { lemma: String, prefix: String },
    #[error("lemma `{lemma}` does not end in `{strip}` required by paradigm `{paradigm}`")]
    StripMismatch {
        lemma: String,
        strip: String,
        paradigm: String,
    },
    #[error("entry `{lemma}` lacks alternant stem `{name}`")]
    MissingAlternant { lemma: String, name: String },
    #[error("`{0}` is not a verb")]
    NotAVerb(String),
    #[error("paradigm `{0}` has no participle slot")]
    NoParticipleSlot(String),
    #[error("unknown paradigm `{0}`")]
    UnknownParadigm(String),
}

/// The lemma without its separable prefix.
pub fn base_lemma(entry: &StemEntry) -> Result<&str, GenerationError> {
    match &entry.separable_prefix {
        None => Ok(&entry.lemma),
        Some(prefix) => entry
            .lemma
            .strip_prefix(prefix.as_str())
            .filter(|rest| !rest.is_empty())
            .ok_or_else(|| GenerationError::PrefixMismatch {
                lemma: entry.lemma.clone(),
                prefix: prefix.clone(),
            }),
    }
}

/// The stem suffixes attach to: base lemma minus the paradigm's citation ending.
pub fn base_stem<'a>(entry: &'a StemEntry, paradigm: &Paradigm) -> Result<&'a str, GenerationError> {
    let base = base_lemma(entry)?;
    base.strip_suffix(paradigm.strip.as_str())
        .filter(|stem| !stem.is_empty())
        .ok_or_else(|| GenerationError::StripMismatch {
            lemma: entry.lemma.clone(),
            strip: paradigm.strip.clone(),
            paradigm: paradigm.id.clone(),
        })
}

fn check_pos(entry: &StemEntry, paradigm: &Paradigm) -> Result<(), GenerationError> {
    if entry.pos != paradigm.pos {
        return Err(GenerationError::PosMismatch {
            lemma: entry.lemma.clone(),
            entry: entry.pos,
            paradigm: paradigm.id.clone(),
            expected: paradigm.pos,
        });
    }
    Ok(())
}

fn realize(entry: &StemEntry, stem: &str, slot: &Slot) -> Result<String, GenerationError> {
    let mut base = match &slot.flags.alternant {
        Some(name) => entry
            .alternants
            .get(name)
            .cloned()
            .ok_or_else(|| GenerationError::MissingAlternant {
                lemma: entry.lemma.clone(),
                name: name.clone(),
            })?,
        None => stem.to_string(),
    };
    if slot.flags.ss_shift && entry.flags.ss_shift {
        base = ss_shift(&base, SsDirection::EszettToSs);
    }
    if slot.flags.umlaut && entry.flags.umlaut {
        base = apply_umlaut(&base);
    }
    if slot.flags.e_omit {
        base = e_omit(&base);
    }
    let mut form = base;
    form.push_str(&slot.suffix);
    if slot.flags.ge_participle {
        form.insert_str(0, "ge");
    }
    let prefix = entry.separable_prefix.as_deref().unwrap_or("");
    if slot.flags.zu_infix {
        form.insert_str(0, if prefix.is_empty() { "zu " } else { "zu" });
    }
    form.insert_str(0, prefix);
    Ok(form)
}

/// All inflected forms of `entry`, one per paradigm slot, in slot order.
pub fn generate(entry: &StemEntry, paradigm: &Paradigm) -> Result<Vec<(String, Tag)>, GenerationError> {
    check_pos(entry, paradigm)?;
    let stem = base_stem(entry, paradigm)?;
    paradigm
        .slots
        .iter()
        .map(|slot| Ok((realize(entry, stem, slot)?, slot.tag)))
        .collect()
}

fn umlaut_of(c: char) -> Option<char> {
    Some(match c {
        'a' => 'ä',
        'o' => 'ö',
        'u' => 'ü',
        'A' => 'Ä',
        'O' => 'Ö',
        'U' => 'Ü',
        _ => return None,
    })
}

fn plain_of(c: char) -> Option<char> {
    Some(match c {
        'ä' => 'a',
        'ö' => 'o',
        'ü' => 'u',
        'Ä' => 'A',
        'Ö' => 'O',
        'Ü' => 'U',
        _ => return None,
    })
}

/// Mutates the last umlautable vowel: a→ä, o→ö, u→ü, au→äu.
///
/// The `u` of the diphthong `eu` is not umlautable.
pub fn apply_umlaut(stem: &str) -> String {
    let mut chars: Vec<char> = stem.chars().collect();
    let mut i = chars.len();
    while i > 0 {
        i -= 1;
        let c = chars[i];
        if matches!(c, 'u' | 'U') && i > 0 {
            match chars[i - 1] {
                'a' | 'A' => {
                    chars[i - 1] = umlaut_of(chars[i - 1]).unwrap();
                    return chars.into_iter().collect();
                }
                'e' | 'E' => {
                    i -= 1;
                    continue;
                }
                _ => {}
            }
        }
        if let Some(m) = umlaut_of(c) {
            chars[i] = m;
            return chars.into_iter().collect();
        }
    }
    chars.into_iter().collect()
}

/// Rightmost umlaut positions considered by [`reverse_umlaut`].
const MAX_REVERSED_UMLAUTS: usize = 8;

/// Every string obtained by de-mutating any subset of the umlauts, input first.
///
/// Subsets are enumerated in binary counting order over the umlaut positions
/// (leftmost position is the lowest bit). Only the rightmost eight umlauts
/// are considered.
pub fn reverse_umlaut(stem: &str) -> Vec<String> {
    let chars: Vec<char> = stem.chars().collect();
    let mut positions: Vec<usize> = chars
        .iter()
        .enumerate()
        .filter(|(_, c)| plain_of(**c).is_some())
        .map(|(i, _)| i)
        .collect();
    if positions.len() > MAX_REVERSED_UMLAUTS {
        positions.drain(..positions.len() - MAX_REVERSED_UMLAUTS);
    }
    let mut out: Vec<String> = Vec::with_capacity(1 << positions.len());
    for mask in 0u32..(1 << positions.len()) {
        let mut variant = chars.clone();
        for (bit, &pos) in positions.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                variant[pos] = plain_of(variant[pos]).unwrap();
            }
        }
        let s: String = variant.into_iter().collect();
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsDirection {
    EszettToSs,
    SsToEszett,
}

/// Word-final ß/ss alternation.
pub fn ss_shift(stem: &str, direction: SsDirection) -> String {
    match direction {
        SsDirection::EszettToSs => match stem.strip_suffix('ß') {
            Some(rest) => format!("{rest}ss"),
            None => stem.to_string(),
        },
        SsDirection::SsToEszett => match stem.strip_suffix("ss") {
            Some(rest) => format!("{rest}ß"),
            None => stem.to_string(),
        },
    }
}

/// Drops the schwa of a final -el/-er: *segel* → *segl*.
pub fn e_omit(stem: &str) -> String {
    for tail in ["el", "er"] {
        if let Some(rest) = stem.strip_suffix(tail) {
            if rest.chars().count() >= 2 {
                return format!("{rest}{}", &tail[1..]);
            }
        }
    }
    stem.to_string()
}

/// Undoes [`e_omit`] on a candidate root: *segl* → *segel*.
pub fn reinsert_e(root: &str) -> Option<String> {
    let mut chars: Vec<char> = root.chars().collect();
    let n = chars.len();
    if n < 3 {
        return None;
    }
    let last = chars[n - 1];
    let before = chars[n - 2];
    if matches!(last, 'l' | 'r') && !matches!(before, 'a' | 'e' | 'i' | 'o' | 'u' | 'ä' | 'ö' | 'ü') {
        chars.insert(n - 1, 'e');
        Some(chars.into_iter().collect())
    } else {
        None
    }
}

/// The infinitive with *zu*: infixed after a separable prefix, otherwise a
/// separate particle (`zu gehen`).
pub fn zu_infinitive(entry: &StemEntry) -> Result<String, GenerationError> {
    if entry.pos != Pos::Ver {
        return Err(GenerationError::NotAVerb(entry.lemma.clone()));
    }
    let base = base_lemma(entry)?;
    Ok(match &entry.separable_prefix {
        Some(prefix) => format!("{prefix}zu{base}"),
        None => format!("zu {}", entry.lemma),
    })
}

/// The past participle as realized by the paradigm's `VER PA2` slot.
pub fn participle(entry: &StemEntry, paradigm: &Paradigm) -> Result<String, GenerationError> {
    if entry.pos != Pos::Ver {
        return Err(GenerationError::NotAVerb(entry.lemma.clone()));
    }
    check_pos(entry, paradigm)?;
    let slot = paradigm
        .slots
        .iter()
        .find(|s| s.tag.form == Some(VerbForm::Pa2))
        .ok_or_else(|| GenerationError::NoParticipleSlot(paradigm.id.clone()))?;
    let stem = base_stem(entry, paradigm)?;
    realize(entry, stem, slot)
}
