//! Ambiguity and accuracy measurements.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{LatticeBuilder, TagLattice, TaggerError};
use crate::corpus::{Sentence, TaggedToken};
use crate::tagset::{Tag, TagsetMapping, TagsetMode};

/// Mean number of candidate tags per token.
pub fn ambiguity_rate(lattices: &[TagLattice]) -> Result<f64, TaggerError> {
    let tokens: usize = lattices.iter().map(TagLattice::len).sum();
    if tokens == 0 {
        return Err(TaggerError::EmptyInput);
    }
    let cands: usize = lattices
        .iter()
        .flat_map(|l| l.tokens.iter())
        .map(|t| t.candidates.len())
        .sum();
    Ok(cands as f64 / tokens as f64)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalReport {
    pub total: u64,
    pub correct: u64,
    /// (gold, predicted) → count, mistakes and hits alike.
    pub confusion: BTreeMap<(Tag, Tag), u64>,
}

impl EvalReport {
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

/// Projects gold tags to `mode`.
pub fn project_sentences(sentences: &[Sentence], mode: TagsetMode, mapping: &TagsetMapping) -> Vec<Sentence> {
    sentences
        .iter()
        .map(|s| {
            s.iter()
                .map(|t| TaggedToken {
                    tag: mode.project(&t.tag, mapping),
                    ..t.clone()
                })
                .collect()
        })
        .collect()
}

/// Tags the words of `gold` and compares against its tags, which must
/// already be at the model's granularity.
pub fn evaluate(builder: &LatticeBuilder<'_>, gold: &[Sentence]) -> Result<EvalReport, TaggerError> {
    let mode = builder.model().mode();
    if gold.iter().all(|s| s.is_empty()) {
        return Err(TaggerError::EmptyInput);
    }
    for t in gold.iter().flatten() {
        if mode.project(&t.tag, builder.mapping()) != t.tag {
            return Err(TaggerError::ModeMismatch {
                tag: t.tag.render(),
                mode: mode.name(),
            });
        }
    }
    let mut report = EvalReport::default();
    for s in gold.iter().filter(|s| !s.is_empty()) {
        let words: Vec<&str> = s.iter().map(|t| t.word.as_str()).collect();
        let predicted = builder.tag(&words)?;
        for (t, p) in s.iter().zip(predicted) {
            report.total += 1;
            if t.tag == p {
                report.correct += 1;
            }
            *report.confusion.entry((t.tag, p)).or_default() += 1;
        }
    }
    Ok(report)
}
