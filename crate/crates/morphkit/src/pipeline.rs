//! Loading resources and running analysis, tagging and lemmatization.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use morphkit_core::analyze::{Analyzer, GuesserModel, DEFAULT_LINKERS, DEFAULT_SUFFIX_LEN, DEFAULT_TOP_K};
use morphkit_core::corpus::{parse_tagged, Sentence};
use morphkit_core::inflect::generate;
use morphkit_core::lemmatize::{lemma_frequencies, lemmatize, LemmaDecision};
use morphkit_core::lexicon::FullFormTable;
use morphkit_core::tagger::{LatticeBuilder, LexicalMode, TagLattice};
use morphkit_core::tagset::Pos;
use morphkit_core::text::{lower_first, nfc, starts_uppercase};
use morphkit_core::{
    data, Analysis, Lexicon, ParadigmRegistry, Provenance, Segment, Tag, TagsetMapping, TagsetMode, TrigramModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Where the pipeline's resources come from. Unset paths fall back to the
/// data shipped with morphkit.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub lexicon_path: Option<PathBuf>,
    pub paradigm_path: Option<PathBuf>,
    pub mapping_path: Option<PathBuf>,
    pub guesser_path: Option<PathBuf>,
    pub model_path: Option<PathBuf>,
    pub lemma_corpus_path: Option<PathBuf>,
    pub tagset_mode: Option<TagsetMode>,
    pub linker_set: Vec<String>,
    pub guesser_suffix_len: usize,
    pub top_k_unknown: usize,
    pub lexical_mode: LexicalMode,
    pub output_format: OutputFormat,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            lexicon_path: None,
            paradigm_path: None,
            mapping_path: None,
            guesser_path: None,
            model_path: None,
            lemma_corpus_path: None,
            tagset_mode: None,
            linker_set: DEFAULT_LINKERS.iter().map(|s| s.to_string()).collect(),
            guesser_suffix_len: DEFAULT_SUFFIX_LEN,
            top_k_unknown: DEFAULT_TOP_K,
            lexical_mode: LexicalMode::Corpus,
            output_format: OutputFormat::Text,
        }
    }
}

/// Reads a UTF-8 file.
pub fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    String::from_utf8(bytes).map_err(|_| anyhow::anyhow!("{}: invalid UTF-8", path.display()))
}

fn read_or(path: Option<&Path>, default: &str) -> Result<String> {
    match path {
        Some(p) => read_text(p),
        None => Ok(default.to_string()),
    }
}

pub fn load_registry(path: Option<&Path>) -> Result<ParadigmRegistry> {
    let text = read_or(path, data::PARADIGMS)?;
    ParadigmRegistry::parse(&text).context("paradigm registry")
}

pub fn load_mapping(path: Option<&Path>) -> Result<TagsetMapping> {
    let text = read_or(path, data::TAGSET_MAPPING)?;
    TagsetMapping::parse(&text).context("tag set mapping")
}

pub fn load_lexicon(path: Option<&Path>, registry: ParadigmRegistry) -> Result<Lexicon> {
    let text = read_or(path, data::FIXTURE_LEXICON)?;
    Lexicon::parse(&text, registry).context("lexicon")
}

pub fn load_model(path: &Path) -> Result<TrigramModel> {
    TrigramModel::parse(&read_text(path)?).with_context(|| format!("model {}", path.display()))
}

pub fn load_corpus(path: &Path) -> Result<Vec<Sentence>> {
    parse_tagged(&read_text(path)?).with_context(|| format!("corpus {}", path.display()))
}

/// Everything the batch commands and the HTTP service work with.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub lexicon: Lexicon,
    pub mapping: TagsetMapping,
    pub guesser: GuesserModel,
    pub model: Option<TrigramModel>,
    pub lemma_freq: BTreeMap<String, u64>,
    pub linkers: Vec<String>,
    pub top_k: usize,
    pub lexical_mode: LexicalMode,
}

impl Pipeline {
    pub fn load(config: &PipelineConfig) -> Result<Self> {
        let registry = load_registry(config.paradigm_path.as_deref())?;
        let lexicon = load_lexicon(config.lexicon_path.as_deref(), registry)?;
        let mapping = load_mapping(config.mapping_path.as_deref())?;
        let guesser = match &config.guesser_path {
            Some(p) => GuesserModel::parse(&read_text(p)?).with_context(|| format!("guesser {}", p.display()))?,
            None => GuesserModel::from_lexicon(&lexicon, config.guesser_suffix_len, &mapping)
                .context("training the default guesser")?,
        };
        let model = match &config.model_path {
            Some(p) => Some(load_model(p)?),
            None => None,
        };
        if let (Some(m), Some(mode)) = (&model, config.tagset_mode) {
            if m.mode() != mode {
                bail!("model is a {} model, not {}", m.mode().name(), mode.name());
            }
        }
        let lemma_freq = match &config.lemma_corpus_path {
            Some(p) => lemma_frequencies(&load_corpus(p)?),
            None => BTreeMap::new(),
        };
        Ok(Self {
            lexicon,
            mapping,
            guesser,
            model,
            lemma_freq,
            linkers: config.linker_set.clone(),
            top_k: config.top_k_unknown,
            lexical_mode: config.lexical_mode,
        })
    }

    pub fn analyzer(&self) -> Analyzer<'_> {
        Analyzer::new(&self.lexicon)
            .with_guesser(&self.guesser)
            .with_linkers(&self.linkers)
            .with_top_k(self.top_k)
    }

    pub fn analyze(&self, form: &str) -> Result<Vec<Analysis>> {
        Ok(self.analyzer().analyze(form)?)
    }

    pub fn model(&self) -> Result<&TrigramModel> {
        self.model.as_ref().context("no tagger model loaded")
    }

    /// Forms of every entry with this lemma (and part of speech).
    pub fn generate(&self, lemma: &str, pos: Option<Pos>) -> Result<Vec<(String, Tag)>> {
        let lemma = nfc(lemma);
        let mut out = Vec::new();
        let mut found = false;
        for e in self.lexicon.lookup_stem(&lemma) {
            if e.lemma != lemma || pos.is_some_and(|p| p != e.pos) {
                continue;
            }
            found = true;
            let paradigm = self.lexicon.paradigm_of(e).context("entry without paradigm")?;
            out.extend(generate(e, paradigm)?);
        }
        if !found {
            bail!("no entry for lemma `{lemma}`");
        }
        Ok(out)
    }

    /// Sentence lattices plus the analyses behind them.
    pub fn lattices<S: AsRef<str>>(&self, sentences: &[Vec<S>]) -> Result<Vec<(TagLattice, Vec<Vec<Analysis>>)>> {
        let model = self.model()?;
        let analyzer = self.analyzer();
        let builder = LatticeBuilder::new(&analyzer, model, &self.mapping).with_lexical_mode(self.lexical_mode);
        sentences.iter().map(|s| Ok(builder.build_with_analyses(s)?)).collect()
    }

    pub fn tag<S: AsRef<str>>(&self, sentences: &[Vec<S>]) -> Result<Vec<Vec<Tag>>> {
        let model = self.model()?;
        let mut out = Vec::with_capacity(sentences.len());
        for (s, (lattice, _)) in sentences.iter().zip(self.lattices(sentences)?) {
            out.push(model.tag_sentence(s, &lattice)?);
        }
        Ok(out)
    }

    /// One lemma decision per token of already tagged sentences.
    pub fn lemmatize(&self, tagged: &[Sentence], mode: TagsetMode) -> Result<Vec<Vec<LemmaDecision>>> {
        let analyzer = self.analyzer();
        let mut out = Vec::with_capacity(tagged.len());
        for s in tagged {
            let mut decisions = Vec::with_capacity(s.len());
            for t in s {
                let mut analyses = analyzer.analyze(&t.word)?;
                if analyses.is_empty() {
                    // a word nothing knows about is its own lemma
                    analyses.push(Analysis {
                        surface: t.word.clone(),
                        lemma: t.word.clone(),
                        tag: t.tag,
                        segments: vec![Segment::whole(&t.word, &t.word)],
                        provenance: Provenance::Guesser,
                    });
                }
                let chosen = mode.project(&t.tag, &self.mapping);
                decisions.push(lemmatize(&analyses, &chosen, mode, &self.mapping, &self.lemma_freq)?);
            }
            out.push(decisions);
        }
        Ok(out)
    }
}

/// Readings from a full-form table, shaped like lexicon readings.
pub fn fullform_analyses(table: &FullFormTable, form: &str) -> Vec<Analysis> {
    let form = nfc(form);
    let mut keys = vec![form.clone()];
    if starts_uppercase(&form) {
        keys.push(lower_first(&form));
    }
    let mut out: Vec<Analysis> = keys
        .iter()
        .flat_map(|k| table.get(k).iter())
        .map(|(tag, lemma)| Analysis {
            surface: form.clone(),
            lemma: lemma.clone(),
            tag: *tag,
            segments: vec![Segment::whole(&form, lemma)],
            provenance: Provenance::Lexicon,
        })
        .collect();
    out.sort_by(|a, b| (a.tag.render(), &a.lemma).cmp(&(b.tag.render(), &b.lemma)));
    out.dedup();
    out
}
