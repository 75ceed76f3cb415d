//! Compound splitting, right to left with linking letters.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Analysis, Analyzer, Provenance, Segment, MIN_PIECE_LEN};
use crate::tagset::{Pos, Tag};
use crate::text::{lower_first, upper_first};

const MODIFIER_POS: [Pos; 3] = [Pos::Sub, Pos::Ver, Pos::Adj];

/// One way of cutting a form into modifiers and a noun head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    /// Modifiers followed by the head; only the head has an empty linker
    /// by necessity.
    pub segments: Vec<Segment>,
    /// Tags of the head under the head lemma.
    pub head_tags: Vec<Tag>,
}

impl Segmentation {
    pub fn head(&self) -> &Segment {
        self.segments.last().expect("segmentations are non-empty")
    }

    /// The compound's lemma: modifier pieces and linkers as written, then the
    /// head lemma.
    pub fn lemma(&self) -> String {
        let mut out = String::new();
        let n = self.segments.len();
        for s in &self.segments[..n - 1] {
            out.push_str(&s.piece);
            out.push_str(&s.linker);
        }
        out.push_str(&lower_first(&self.head().lemma));
        out
    }

    fn head_len(&self) -> usize {
        self.head().piece.chars().count()
    }
}

/// Char-boundary byte offsets of `s`, excluding 0 and `s.len()`.
fn inner_boundaries(s: &str) -> Vec<usize> {
    s.char_indices().map(|(i, _)| i).filter(|&i| i > 0).collect()
}

impl<'a> Analyzer<'a> {
    /// Lemmas under which `piece` is a bare noun, verb or adjective stem.
    fn stem_lemmas(&self, piece: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for key in [piece.to_string(), upper_first(piece), lower_first(piece)] {
            for e in self.lexicon.lookup_stem(&key) {
                if MODIFIER_POS.contains(&e.pos) {
                    out.insert(e.lemma.clone());
                }
            }
        }
        out
    }

    /// Lemmas under which `piece` is an inflected noun, verb or adjective form.
    fn inflected_lemmas(&self, piece: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for v in [piece.to_string(), upper_first(piece)] {
            for a in self.direct_with_pos(&v, &MODIFIER_POS) {
                out.insert(a.lemma);
            }
        }
        out
    }

    /// Readings of `span` as one modifier: a piece plus an optional linker.
    fn modifier_readings(&self, span: &str, memo: &mut BTreeMap<String, Vec<Segment>>) -> Vec<Segment> {
        if let Some(hit) = memo.get(span) {
            return hit.clone();
        }
        let mut stems = Vec::new();
        let mut inflected = Vec::new();
        let linkers = core::iter::once("").chain(self.linkers.iter().map(String::as_str));
        for linker in linkers {
            let Some(piece) = span.strip_suffix(linker) else {
                continue;
            };
            if piece.chars().count() < MIN_PIECE_LEN {
                continue;
            }
            for lemma in self.stem_lemmas(piece) {
                stems.push(Segment {
                    piece: piece.to_string(),
                    lemma,
                    linker: linker.to_string(),
                });
            }
            for lemma in self.inflected_lemmas(piece) {
                inflected.push(Segment {
                    piece: piece.to_string(),
                    lemma,
                    linker: linker.to_string(),
                });
            }
        }
        // a stem plus linking letters beats reading the same letters as an
        // inflection: Schwein-e-bauch, not Schweine-bauch
        let linked_stem = stems.iter().any(|s| !s.linker.is_empty());
        inflected.retain(|s| !(linked_stem && s.linker.is_empty()));
        let mut out: Vec<Segment> = stems.into_iter().chain(inflected).collect();
        out.sort();
        out.dedup();
        memo.insert(span.to_string(), out.clone());
        out
    }

    /// All ways to read `prefix` as a sequence of modifiers.
    fn modifier_chains(&self, prefix: &str, memo: &mut BTreeMap<String, Vec<Segment>>) -> Vec<Vec<Segment>> {
        let mut out = Vec::new();
        for reading in self.modifier_readings(prefix, memo) {
            out.push(alloc::vec![reading]);
        }
        for cut in inner_boundaries(prefix) {
            let (left, right) = prefix.split_at(cut);
            let heads = self.modifier_readings(left, memo);
            if heads.is_empty() {
                continue;
            }
            for tail in self.modifier_chains(right, memo) {
                for h in &heads {
                    let mut chain = alloc::vec![h.clone()];
                    chain.extend(tail.iter().cloned());
                    out.push(chain);
                }
            }
        }
        out
    }

    /// Every segmentation of `form` into modifiers and a noun head, longest
    /// head first, then fewest segments, then lexicographically.
    pub fn split_compound(&self, form: &str) -> Vec<Segmentation> {
        let form = crate::text::nfc(form);
        let mut memo = BTreeMap::new();
        let mut out = Vec::new();
        for cut in inner_boundaries(&form) {
            let (prefix, head) = form.split_at(cut);
            if head.chars().count() < MIN_PIECE_LEN || prefix.chars().count() < MIN_PIECE_LEN {
                continue;
            }
            let mut by_lemma: BTreeMap<String, Vec<Tag>> = BTreeMap::new();
            for a in self.direct_with_pos(&upper_first(head), &[Pos::Sub]) {
                by_lemma.entry(a.lemma).or_default().push(a.tag);
            }
            if by_lemma.is_empty() {
                continue;
            }
            let chains = self.modifier_chains(prefix, &mut memo);
            for (lemma, tags) in &by_lemma {
                for chain in &chains {
                    let mut segments = chain.clone();
                    segments.push(Segment {
                        piece: head.to_string(),
                        lemma: lemma.clone(),
                        linker: String::new(),
                    });
                    out.push(Segmentation {
                        segments,
                        head_tags: tags.clone(),
                    });
                }
            }
        }
        out.sort_by(|a, b| {
            b.head_len()
                .cmp(&a.head_len())
                .then(a.segments.len().cmp(&b.segments.len()))
                .then_with(|| a.segments.cmp(&b.segments))
        });
        out.dedup();
        out
    }

    /// Compound readings: one per segmentation and head tag.
    pub fn compound_analyses(&self, form: &str) -> Vec<Analysis> {
        let surface = crate::text::nfc(form);
        let mut out = Vec::new();
        for seg in self.split_compound(&surface) {
            let lemma = seg.lemma();
            for tag in &seg.head_tags {
                out.push(Analysis {
                    surface: surface.clone(),
                    lemma: lemma.clone(),
                    tag: *tag,
                    segments: seg.segments.clone(),
                    provenance: Provenance::Compound,
                });
            }
        }
        super::sort_dedup(&mut out);
        out
    }
}
