//! Building tag lattices from analyzer output.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

use super::{LatticeToken, LexicalMode, TagLattice, TaggerError, TrigramModel};
use crate::analyze::{Analysis, Analyzer, Provenance};
use crate::tagset::{Tag, TagsetMapping, TagsetMode};

/// Turns sentences into lattices for one model.
///
/// Candidates of a word are the mode projections of its lexicon and
/// compound readings. Words without such readings take their corpus tags,
/// then guesser tags, then the most frequent tags of the model.
#[derive(Debug, Clone)]
pub struct LatticeBuilder<'a> {
    analyzer: &'a Analyzer<'a>,
    model: &'a TrigramModel,
    mapping: &'a TagsetMapping,
    lexical_mode: LexicalMode,
    top_k: usize,
}

impl<'a> LatticeBuilder<'a> {
    pub fn new(analyzer: &'a Analyzer<'a>, model: &'a TrigramModel, mapping: &'a TagsetMapping) -> Self {
        Self {
            analyzer,
            model,
            mapping,
            lexical_mode: LexicalMode::Corpus,
            top_k: crate::analyze::DEFAULT_TOP_K,
        }
    }

    pub fn with_lexical_mode(mut self, mode: LexicalMode) -> Self {
        self.lexical_mode = mode;
        self
    }

    pub fn model(&self) -> &'a TrigramModel {
        self.model
    }

    pub fn analyzer(&self) -> &'a Analyzer<'a> {
        self.analyzer
    }

    pub fn mapping(&self) -> &'a TagsetMapping {
        self.mapping
    }

    fn mode(&self) -> TagsetMode {
        self.model.mode()
    }

    /// Large tags seen in training whose small image is `small`, or `small`
    /// itself when there are none.
    fn expand(&self, small: Tag) -> Vec<Tag> {
        match self.mode() {
            TagsetMode::Small => alloc::vec![small],
            TagsetMode::Large => {
                let hits: Vec<Tag> = self.model.tags().filter(|t| self.mapping.map(t) == small).collect();
                if hits.is_empty() {
                    alloc::vec![small]
                } else {
                    hits
                }
            }
        }
    }

    fn candidate_tags(&self, word: &str, analyses: &[Analysis]) -> Vec<Tag> {
        let mode = self.mode();
        let known: BTreeSet<Tag> = analyses
            .iter()
            .filter(|a| a.provenance != Provenance::Guesser)
            .map(|a| mode.project(&a.tag, self.mapping))
            .collect();
        if !known.is_empty() {
            return known.into_iter().collect();
        }
        if let Some(seen) = self.model.lookup_word(word) {
            return seen.keys().copied().collect();
        }
        let guessed: BTreeSet<Tag> = analyses
            .iter()
            .filter(|a| a.provenance == Provenance::Guesser)
            .flat_map(|a| self.expand(self.mapping.map(&a.tag)))
            .collect();
        if !guessed.is_empty() {
            return guessed.into_iter().collect();
        }
        let mut frequent: Vec<(Tag, u64)> = self
            .model
            .unigrams()
            .filter_map(|(s, n)| match s {
                super::TagSym::Tag(t) => Some((*t, *n)),
                super::TagSym::Boundary => None,
            })
            .collect();
        frequent.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.render().cmp(&b.0.render())));
        frequent.into_iter().take(self.top_k).map(|(t, _)| t).collect()
    }

    /// Guesser weights spread over `cands`: each small tag's probability is
    /// shared equally by the candidates projecting onto it.
    fn fallback_weights(&self, word: &str, cands: &[Tag]) -> Result<BTreeMap<Tag, f64>, TaggerError> {
        let mut out = BTreeMap::new();
        let Some(g) = self.analyzer.guesser() else {
            return Ok(out);
        };
        let dist = g.guess(word).map_err(crate::analyze::AnalyzeError::from)?;
        let mut share: BTreeMap<Tag, usize> = BTreeMap::new();
        for c in cands {
            *share.entry(self.mapping.map(c)).or_default() += 1;
        }
        for c in cands {
            let small = self.mapping.map(c);
            let p = dist.get(&small).copied().unwrap_or(0.0);
            out.insert(*c, p / share[&small] as f64);
        }
        Ok(out)
    }

    /// Candidates with lexical probabilities for one word, plus its analyses.
    pub fn token(&self, word: &str) -> Result<(LatticeToken, Vec<Analysis>), TaggerError> {
        let analyses = self.analyzer.analyze(word)?;
        let cands = self.candidate_tags(word, &analyses);
        if cands.is_empty() {
            return Err(TaggerError::NoCandidates(word.to_string()));
        }
        let fallback = if self.lexical_mode == LexicalMode::Corpus && self.model.lookup_word(word).is_none() {
            self.fallback_weights(word, &cands)?
        } else {
            BTreeMap::new()
        };
        let candidates = self.model.lexical_prob(word, &cands, &fallback, self.lexical_mode)?;
        Ok((
            LatticeToken {
                word: word.to_string(),
                candidates,
            },
            analyses,
        ))
    }

    /// The lattice of a sentence and the analyses of each token.
    pub fn build_with_analyses<S: AsRef<str>>(
        &self,
        words: &[S],
    ) -> Result<(TagLattice, Vec<Vec<Analysis>>), TaggerError> {
        let mut lattice = TagLattice::default();
        let mut all = Vec::with_capacity(words.len());
        for w in words {
            let (tok, analyses) = self.token(w.as_ref())?;
            lattice.tokens.push(tok);
            all.push(analyses);
        }
        Ok((lattice, all))
    }

    pub fn build<S: AsRef<str>>(&self, words: &[S]) -> Result<TagLattice, TaggerError> {
        self.build_with_analyses(words).map(|(l, _)| l)
    }

    /// Builds the lattice and decodes it.
    pub fn tag<S: AsRef<str>>(&self, words: &[S]) -> Result<Vec<Tag>, TaggerError> {
        let lattice = self.build(words)?;
        self.model.tag_sentence(words, &lattice)
    }
}
