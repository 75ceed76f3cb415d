//! Trigram part-of-speech tagger.
//!
//! Each sentence gets the tag sequence that maximizes the product of
//! lexical probabilities P(tag | word) and contextual probabilities
//! P(Z | X, Y). The contextual estimate interpolates trigram, bigram and
//! unigram relative frequencies and never drops below a floor.

mod eval;
mod lattice;
mod viterbi;

pub use eval::{ambiguity_rate, evaluate, project_sentences, EvalReport};
pub use lattice::LatticeBuilder;
pub use viterbi::{decode, path_score, LatticeToken, TagLattice};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::analyze::AnalyzeError;
use crate::corpus::Sentence;
use crate::tagset::{parse_tag, Tag, TagsetMapping, TagsetMode};
use crate::text::{lower_first, starts_uppercase};

/// Header line of the model file.
pub const MODEL_HEADER: &str = "#morphkit-model-v1";

/// Default probability floor.
pub const DEFAULT_FLOOR: f64 = 1e-6;

/// Interpolation weights used when the corpus gives no evidence.
pub const DEFAULT_LAMBDAS: [f64; 3] = [0.1, 0.3, 0.6];

/// A tag or the sentence boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TagSym {
    Boundary,
    Tag(Tag),
}

impl fmt::Display for TagSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagSym::Boundary => f.write_str("<S>"),
            TagSym::Tag(t) => t.fmt(f),
        }
    }
}

fn parse_sym(s: &str) -> Result<TagSym, String> {
    if s == "<S>" {
        Ok(TagSym::Boundary)
    } else {
        parse_tag(s).map(TagSym::Tag).map_err(|e| e.to_string())
    }
}

/// How lexical probabilities are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LexicalMode {
    /// Corpus word/tag counts, guesser for unseen words.
    #[default]
    Corpus,
    /// Every candidate of a word equally likely.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TaggerError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("sentence {0} is empty")]
    EmptySentence(usize),
    #[error("no candidate tags for `{0}`")]
    NoCandidates(String),
    #[error("lattice has {lattice} tokens but the sentence has {tokens}")]
    LatticeMismatch { tokens: usize, lattice: usize },
    #[error("token {index}: {message}")]
    InvalidLattice { index: usize, message: String },
    #[error("tag {tag} is not a {mode} tag")]
    ModeMismatch { tag: String, mode: &'static str },
    #[error("no input")]
    EmptyInput,
    #[error("interpolation weights must be non-negative and sum to 1")]
    BadLambdas,
    #[error("floor must lie in (0, 1]")]
    BadFloor,
    #[error("model line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Analyze(#[from] AnalyzeError),
}

/// N-gram tables over padded tag sequences.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Counts {
    f1: BTreeMap<TagSym, u64>,
    f2: BTreeMap<(TagSym, TagSym), u64>,
    f3: BTreeMap<(TagSym, TagSym, TagSym), u64>,
    total: u64,
}

/// `B B t1 .. tn B`
fn padded(tags: &[Tag]) -> Vec<TagSym> {
    let mut seq = Vec::with_capacity(tags.len() + 3);
    seq.push(TagSym::Boundary);
    seq.push(TagSym::Boundary);
    seq.extend(tags.iter().map(|t| TagSym::Tag(*t)));
    seq.push(TagSym::Boundary);
    seq
}

fn ratio(num: u64, den: u64) -> f64 {
    if num == 0 || den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Counts {
    fn add(&mut self, seq: &[TagSym]) {
        for &s in seq {
            *self.f1.entry(s).or_default() += 1;
            self.total += 1;
        }
        for w in seq.windows(2) {
            *self.f2.entry((w[0], w[1])).or_default() += 1;
        }
        for w in seq.windows(3) {
            *self.f3.entry((w[0], w[1], w[2])).or_default() += 1;
        }
    }

    fn c1(&self, z: &TagSym) -> u64 {
        self.f1.get(z).copied().unwrap_or(0)
    }

    fn c2(&self, y: &TagSym, z: &TagSym) -> u64 {
        self.f2.get(&(*y, *z)).copied().unwrap_or(0)
    }

    fn c3(&self, x: &TagSym, y: &TagSym, z: &TagSym) -> u64 {
        self.f3.get(&(*x, *y, *z)).copied().unwrap_or(0)
    }
}

/// Credits each held-out trigram to the order whose estimate from the
/// training part is highest; ties go to the higher order.
fn held_out_lambdas(train: &Counts, held: &[Vec<TagSym>]) -> Option<[f64; 3]> {
    let mut votes = [0u64; 3];
    for seq in held {
        for w in seq.windows(3) {
            let (x, y, z) = (&w[0], &w[1], &w[2]);
            let p3 = ratio(train.c3(x, y, z), train.c2(x, y));
            let p2 = ratio(train.c2(y, z), train.c1(y));
            let p1 = ratio(train.c1(z), train.total);
            vote(&mut votes, p1, p2, p3, 1);
        }
    }
    normalize_votes(votes)
}

/// Deleted interpolation on the full counts: each trigram type is removed
/// once from its own counts before comparing estimates.
fn leave_one_out_lambdas(c: &Counts) -> Option<[f64; 3]> {
    let mut votes = [0u64; 3];
    for (&(x, y, z), &n) in &c.f3 {
        let p3 = ratio(n - 1, c.c2(&x, &y) - 1);
        let p2 = ratio(c.c2(&y, &z) - 1, c.c1(&y) - 1);
        let p1 = ratio(c.c1(&z) - 1, c.total - 1);
        vote(&mut votes, p1, p2, p3, n);
    }
    normalize_votes(votes)
}

fn vote(votes: &mut [u64; 3], p1: f64, p2: f64, p3: f64, weight: u64) {
    if p1 == 0.0 && p2 == 0.0 && p3 == 0.0 {
        return;
    }
    if p3 >= p2 && p3 >= p1 {
        votes[2] += weight;
    } else if p2 >= p1 {
        votes[1] += weight;
    } else {
        votes[0] += weight;
    }
}

fn normalize_votes(votes: [u64; 3]) -> Option<[f64; 3]> {
    let total: u64 = votes.iter().sum();
    (total > 0).then(|| votes.map(|v| v as f64 / total as f64))
}

/// Trained trigram model.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigramModel {
    mode: TagsetMode,
    counts: Counts,
    lex: BTreeMap<String, BTreeMap<Tag, u64>>,
    wordcount: BTreeMap<String, u64>,
    lambdas: [f64; 3],
    floor: f64,
}

impl TrigramModel {
    /// Trains on tagged sentences, projecting every tag to `mode`.
    pub fn train(sentences: &[Sentence], mode: TagsetMode, mapping: &TagsetMapping) -> Result<Self, TaggerError> {
        Self::train_with_floor(sentences, mode, mapping, DEFAULT_FLOOR)
    }

    pub fn train_with_floor(
        sentences: &[Sentence],
        mode: TagsetMode,
        mapping: &TagsetMapping,
        floor: f64,
    ) -> Result<Self, TaggerError> {
        if sentences.is_empty() {
            return Err(TaggerError::EmptyCorpus);
        }
        if !(floor > 0.0 && floor <= 1.0) {
            return Err(TaggerError::BadFloor);
        }
        let mut seqs = Vec::with_capacity(sentences.len());
        let mut lex: BTreeMap<String, BTreeMap<Tag, u64>> = BTreeMap::new();
        let mut wordcount: BTreeMap<String, u64> = BTreeMap::new();
        for (i, s) in sentences.iter().enumerate() {
            if s.is_empty() {
                return Err(TaggerError::EmptySentence(i));
            }
            let tags: Vec<Tag> = s.iter().map(|t| mode.project(&t.tag, mapping)).collect();
            for (tok, tag) in s.iter().zip(&tags) {
                *lex.entry(tok.word.clone()).or_default().entry(*tag).or_default() += 1;
                *wordcount.entry(tok.word.clone()).or_default() += 1;
            }
            seqs.push(padded(&tags));
        }
        let mut full = Counts::default();
        let mut train = Counts::default();
        let mut held = Vec::new();
        for (i, seq) in seqs.iter().enumerate() {
            full.add(seq);
            if i % 10 == 9 {
                held.push(seq.clone());
            } else {
                train.add(seq);
            }
        }
        let lambdas = held_out_lambdas(&train, &held)
            .or_else(|| leave_one_out_lambdas(&full))
            .unwrap_or(DEFAULT_LAMBDAS);
        Ok(Self {
            mode,
            counts: full,
            lex,
            wordcount,
            lambdas,
            floor,
        })
    }

    pub fn mode(&self) -> TagsetMode {
        self.mode
    }

    /// `[λ1, λ2, λ3]` for unigram, bigram and trigram terms.
    pub fn lambdas(&self) -> [f64; 3] {
        self.lambdas
    }

    /// Replaces the interpolation weights.
    pub fn set_lambdas(&mut self, lambdas: [f64; 3]) -> Result<(), TaggerError> {
        let sum: f64 = lambdas.iter().sum();
        if lambdas.iter().any(|l| *l < 0.0 || !l.is_finite()) || (sum - 1.0).abs() > 1e-9 {
            return Err(TaggerError::BadLambdas);
        }
        self.lambdas = lambdas;
        Ok(())
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn total(&self) -> u64 {
        self.counts.total
    }

    pub fn f1(&self, z: &TagSym) -> u64 {
        self.counts.c1(z)
    }

    pub fn f2(&self, y: &TagSym, z: &TagSym) -> u64 {
        self.counts.c2(y, z)
    }

    pub fn f3(&self, x: &TagSym, y: &TagSym, z: &TagSym) -> u64 {
        self.counts.c3(x, y, z)
    }

    pub fn unigrams(&self) -> impl Iterator<Item = (&TagSym, &u64)> {
        self.counts.f1.iter()
    }

    pub fn bigrams(&self) -> impl Iterator<Item = (&(TagSym, TagSym), &u64)> {
        self.counts.f2.iter()
    }

    pub fn trigrams(&self) -> impl Iterator<Item = (&(TagSym, TagSym, TagSym), &u64)> {
        self.counts.f3.iter()
    }

    /// Tags seen in training, in tag order.
    pub fn tags(&self) -> impl Iterator<Item = Tag> + '_ {
        self.counts.f1.keys().filter_map(|s| match s {
            TagSym::Tag(t) => Some(*t),
            TagSym::Boundary => None,
        })
    }

    pub fn word_tags(&self, word: &str) -> Option<&BTreeMap<Tag, u64>> {
        self.lex.get(word)
    }

    pub fn word_count(&self, word: &str) -> u64 {
        self.wordcount.get(word).copied().unwrap_or(0)
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, &BTreeMap<Tag, u64>)> {
        self.lex.iter().map(|(w, m)| (w.as_str(), m))
    }

    /// Corpus tag counts of `word`, falling back to its lowercase variant
    /// for a capitalized word never seen as such.
    pub fn lookup_word(&self, word: &str) -> Option<&BTreeMap<Tag, u64>> {
        self.lex.get(word).or_else(|| {
            if starts_uppercase(word) {
                self.lex.get(&lower_first(word))
            } else {
                None
            }
        })
    }

    /// λ3·f(XYZ)/f(XY) + λ2·f(YZ)/f(Y) + λ1·f(Z)/T, at least the floor.
    pub fn contextual_prob(&self, x: &TagSym, y: &TagSym, z: &TagSym) -> f64 {
        let c = &self.counts;
        let [l1, l2, l3] = self.lambdas;
        let p = l3 * ratio(c.c3(x, y, z), c.c2(x, y)) + l2 * ratio(c.c2(y, z), c.c1(y)) + l1 * ratio(c.c1(z), c.total);
        if p < self.floor {
            self.floor
        } else {
            p
        }
    }

    /// P(tag | word) over `candidates`. Known words use corpus counts,
    /// unknown words the `fallback` weights; zero weights get the floor and
    /// the result is renormalized.
    pub fn lexical_prob(
        &self,
        word: &str,
        candidates: &[Tag],
        fallback: &BTreeMap<Tag, f64>,
        mode: LexicalMode,
    ) -> Result<Vec<(Tag, f64)>, TaggerError> {
        let mut cands: Vec<Tag> = candidates.to_vec();
        cands.sort();
        cands.dedup();
        if cands.is_empty() {
            return Err(TaggerError::NoCandidates(word.to_string()));
        }
        let raw: Vec<f64> = match (mode, self.lookup_word(word)) {
            (LexicalMode::Uniform, _) => cands.iter().map(|_| 1.0).collect(),
            (LexicalMode::Corpus, Some(counts)) => {
                let n: u64 = counts.values().sum();
                cands
                    .iter()
                    .map(|t| ratio(counts.get(t).copied().unwrap_or(0), n))
                    .collect()
            }
            (LexicalMode::Corpus, None) => cands.iter().map(|t| fallback.get(t).copied().unwrap_or(0.0)).collect(),
        };
        let raw: Vec<f64> = raw.into_iter().map(|p| if p > 0.0 { p } else { self.floor }).collect();
        let sum: f64 = raw.iter().sum();
        Ok(cands.into_iter().zip(raw).map(|(t, p)| (t, p / sum)).collect())
    }

    /// Serializes the model; parsing the result gives back an equal model.
    pub fn render(&self) -> String {
        let mut out = String::from(MODEL_HEADER);
        out.push_str("\n[params]\n");
        out.push_str(&format!("mode\t{}\n", self.mode.name()));
        for (i, l) in self.lambdas.iter().enumerate() {
            out.push_str(&format!("lambda{}\t{l:?}\n", i + 1));
        }
        out.push_str(&format!("floor\t{:?}\n", self.floor));
        out.push_str(&format!("total\t{}\n", self.counts.total));
        out.push_str("[f1]\n");
        for (z, n) in &self.counts.f1 {
            out.push_str(&format!("{z}\t{n}\n"));
        }
        out.push_str("[f2]\n");
        for ((y, z), n) in &self.counts.f2 {
            out.push_str(&format!("{y}\t{z}\t{n}\n"));
        }
        out.push_str("[f3]\n");
        for ((x, y, z), n) in &self.counts.f3 {
            out.push_str(&format!("{x}\t{y}\t{z}\t{n}\n"));
        }
        out.push_str("[lex]\n");
        for (w, tags) in &self.lex {
            for (t, n) in tags {
                out.push_str(&format!("{w}\t{t}\t{n}\n"));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TaggerError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == MODEL_HEADER => {}
            _ => {
                return Err(TaggerError::Syntax {
                    line: 1,
                    message: format!("missing `{MODEL_HEADER}` header"),
                })
            }
        }
        let mut mode = None;
        let mut lambdas = [f64::NAN; 3];
        let mut floor = None;
        let mut total = None;
        let mut counts = Counts::default();
        let mut lex: BTreeMap<String, BTreeMap<Tag, u64>> = BTreeMap::new();
        let mut section = "";
        for (idx, raw) in lines {
            let line = idx + 1;
            let err = |message: String| TaggerError::Syntax { line, message };
            if raw.starts_with('[') {
                section = match raw.trim() {
                    "[params]" => "params",
                    "[f1]" => "f1",
                    "[f2]" => "f2",
                    "[f3]" => "f3",
                    "[lex]" => "lex",
                    other => return Err(err(format!("unknown section {other}"))),
                };
                continue;
            }
            let f: Vec<&str> = raw.split('\t').collect();
            let num = |s: &str| s.parse::<u64>().map_err(|_| err(format!("bad count `{s}`")));
            let real = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad number `{s}`")));
            let sym = |s: &str| parse_sym(s).map_err(err);
            match (section, f.as_slice()) {
                ("params", ["mode", m]) => {
                    mode = Some(TagsetMode::from_name(m).ok_or_else(|| err(format!("bad mode `{m}`")))?)
                }
                ("params", ["lambda1", v]) => lambdas[0] = real(v)?,
                ("params", ["lambda2", v]) => lambdas[1] = real(v)?,
                ("params", ["lambda3", v]) => lambdas[2] = real(v)?,
                ("params", ["floor", v]) => floor = Some(real(v)?),
                ("params", ["total", v]) => total = Some(num(v)?),
                ("f1", [z, n]) => {
                    counts.f1.insert(sym(z)?, num(n)?);
                }
                ("f2", [y, z, n]) => {
                    counts.f2.insert((sym(y)?, sym(z)?), num(n)?);
                }
                ("f3", [x, y, z, n]) => {
                    counts.f3.insert((sym(x)?, sym(y)?, sym(z)?), num(n)?);
                }
                ("lex", [w, t, n]) => {
                    let tag = parse_tag(t).map_err(|e| err(e.to_string()))?;
                    lex.entry(w.to_string()).or_default().insert(tag, num(n)?);
                }
                _ => return Err(err("unrecognized line".to_string())),
            }
        }
        let missing = |what: &str| TaggerError::Syntax {
            line: 0,
            message: format!("missing {what}"),
        };
        counts.total = total.ok_or_else(|| missing("total"))?;
        let floor = floor.ok_or_else(|| missing("floor"))?;
        if !(floor > 0.0 && floor <= 1.0) {
            return Err(TaggerError::BadFloor);
        }
        let wordcount = lex.iter().map(|(w, m)| (w.clone(), m.values().sum())).collect();
        let mut model = TrigramModel {
            mode: mode.ok_or_else(|| missing("mode"))?,
            counts,
            lex,
            wordcount,
            lambdas: DEFAULT_LAMBDAS,
            floor,
        };
        model.set_lambdas(lambdas)?;
        Ok(model)
    }
}
