//! The `morphkit` command line.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use morphkit_core::analyze::{render_segments, GuesserModel, DEFAULT_SUFFIX_LEN, DEFAULT_TOP_K};
use morphkit_core::corpus::{parse_tagged, Sentence, TaggedToken};
use morphkit_core::lemmatize::{evaluate_lemmatizer, LemmaDecision};
use morphkit_core::lexicon::{
    export_fullforms, next_question, FullFormTable, QuestionTree, StemEntry, StemFlags, Step,
};
use morphkit_core::tagger::{ambiguity_rate, evaluate, project_sentences, LatticeBuilder, LexicalMode};
use morphkit_core::tagset::Pos;
use morphkit_core::{Analysis, Provenance, Tag, TagsetMode, TrigramModel};
use serde::Serialize;

use crate::payload;
use crate::pipeline::{self, fullform_analyses, OutputFormat, Pipeline, PipelineConfig};
use crate::serve::{self, AppState};
use crate::tokenize::Tokenizer;

#[derive(Parser, Debug)]
#[command(
    name = "morphkit",
    version,
    about = "German morphological analysis, tagging and lemmatization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every reading of word forms
    Analyze(AnalyzeArgs),
    /// Print the forms of a lemma
    Generate(GenerateArgs),
    /// Tag running text
    Tag(TagArgs),
    /// Choose lemmas for tagged text
    Lemmatize(LemmatizeArgs),
    /// Train a tagger model from a tagged corpus
    Train(TrainArgs),
    /// Train the unknown-word guesser
    TrainGuesser(TrainGuesserArgs),
    /// Write the full-form lexicon
    Export(ExportArgs),
    /// Score tagging and lemmatization against a gold corpus
    Eval(EvalArgs),
    /// Add an entry to a lexicon file
    LexiconAdd(LexiconAddArgs),
    /// Run the local HTTP service for the lexicon wizard
    Serve(ServeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Tagset {
    Large,
    Small,
}

impl From<Tagset> for TagsetMode {
    fn from(t: Tagset) -> Self {
        match t {
            Tagset::Large => TagsetMode::Large,
            Tagset::Small => TagsetMode::Small,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct LexiconArgs {
    /// Lexicon file (default: the bundled fixture lexicon)
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Paradigm registry (default: bundled)
    #[arg(long)]
    paradigms: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct AnalyzerArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    /// Small tag set mapping (default: bundled)
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Guesser model (default: trained from the lexicon)
    #[arg(long)]
    guesser: Option<PathBuf>,
    /// Compound linking letters, comma separated
    #[arg(long, value_delimiter = ',')]
    linkers: Option<Vec<String>>,
    /// Longest suffix used by the default guesser
    #[arg(long, default_value_t = DEFAULT_SUFFIX_LEN)]
    suffix_len: usize,
    /// Guesser readings kept for unknown words
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    top_k: usize,
}

impl AnalyzerArgs {
    fn config(&self) -> PipelineConfig {
        let mut c = PipelineConfig {
            lexicon_path: self.lex.lexicon.clone(),
            paradigm_path: self.lex.paradigms.clone(),
            mapping_path: self.mapping.clone(),
            guesser_path: self.guesser.clone(),
            guesser_suffix_len: self.suffix_len,
            top_k_unknown: self.top_k,
            ..PipelineConfig::default()
        };
        if let Some(l) = &self.linkers {
            c.linker_set = l.clone();
        }
        c
    }
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    analyzer: AnalyzerArgs,
    /// Word forms to analyze; read from standard input when absent
    #[arg(long = "word")]
    words: Vec<String>,
    /// Look forms up in an exported full-form lexicon instead
    #[arg(long)]
    fullform: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    #[arg(long)]
    lemma: String,
    /// Part of speech code, e.g. SUB or VER
    #[arg(long)]
    pos: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[command(flatten)]
    analyzer: AnalyzerArgs,
    /// Tagger model
    #[arg(long)]
    model: PathBuf,
    /// Tag set the model must use
    #[arg(long, value_enum)]
    tagset: Option<Tagset>,
    /// Give every candidate tag of a word the same lexical probability
    #[arg(long)]
    uniform: bool,
    /// Lemmatized corpus whose lemma counts break lemma ties
    #[arg(long)]
    lemma_corpus: Option<PathBuf>,
}

impl ModelArgs {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            model_path: Some(self.model.clone()),
            tagset_mode: self.tagset.map(Into::into),
            lexical_mode: if self.uniform {
                LexicalMode::Uniform
            } else {
                LexicalMode::Corpus
            },
            lemma_corpus_path: self.lemma_corpus.clone(),
            ..self.analyzer.config()
        }
    }
}

#[derive(Args, Debug)]
struct TagArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Text to tag (default: standard input)
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LemmatizeArgs {
    #[command(flatten)]
    analyzer: AnalyzerArgs,
    /// Tagged input `token<TAB>tag` (default: standard input)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Tag set of the input tags
    #[arg(long, value_enum)]
    tagset: Option<Tagset>,
    /// Tag raw text with this model first
    #[arg(long)]
    with_tagger: Option<PathBuf>,
    /// With --with-tagger: equal lexical probabilities for all candidates
    #[arg(long)]
    uniform: bool,
    /// Lemmatized corpus whose lemma counts break lemma ties
    #[arg(long)]
    lemma_corpus: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// Tagged training corpus
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum)]
    tagset: Tagset,
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Lowest contextual probability
    #[arg(long, default_value_t = morphkit_core::tagger::DEFAULT_FLOOR)]
    floor: f64,
    /// Model file (default: standard output)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainGuesserArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    /// Train on this full-form file instead of the lexicon export
    #[arg(long)]
    fullform: Option<PathBuf>,
    #[arg(long)]
    mapping: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SUFFIX_LEN)]
    suffix_len: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Gold corpus `token<TAB>tag<TAB>lemma`
    #[arg(long)]
    gold: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct LexiconAddArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    /// Lexicon file to extend (default: print the new lexicon)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    lemma: String,
    /// Comma separated answers to the acquisition questions
    #[arg(long, value_delimiter = ',')]
    answers: Option<Vec<String>>,
    /// Question tree (default: bundled)
    #[arg(long)]
    questions: Option<PathBuf>,
    #[arg(long)]
    pos: Option<String>,
    #[arg(long)]
    paradigm: Option<String>,
    /// Entry flags, e.g. `umlaut,ss_shift`
    #[arg(long)]
    flags: Option<String>,
    /// Stem alternant `name=value`, repeatable
    #[arg(long = "alternant")]
    alternants: Vec<String>,
    #[arg(long)]
    prefix: Option<String>,
    #[arg(long)]
    gloss: Option<String>,
}

#[derive(Args, Debug)]
struct ServeArgs {
    #[command(flatten)]
    analyzer: AnalyzerArgs,
    /// Question tree (default: bundled)
    #[arg(long)]
    questions: Option<PathBuf>,
    /// Address to listen on
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    /// Allow a non-loopback bind address
    #[arg(long)]
    allow_remote: bool,
    /// Keep commits in memory only
    #[arg(long)]
    no_persist: bool,
}

enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn input(&mut self, path: Option<&Path>) -> Result<String> {
        match path {
            Some(p) => pipeline::read_text(p),
            None => {
                let mut bytes = Vec::new();
                self.stdin.read_to_end(&mut bytes).context("reading standard input")?;
                String::from_utf8(bytes).map_err(|_| anyhow!("standard input: invalid UTF-8"))
            }
        }
    }

    fn print(&mut self, text: &str) -> Result<()> {
        self.stdout.write_all(text.as_bytes()).context("writing output")
    }
}

fn write_output(io: &mut Io<'_>, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => io.print(text),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let mut io = Io { stdin, stdout };
    match dispatch(cli.command, &mut io) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "morphkit: {msg}");
            1
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(stderr, "morphkit: {e:#}");
            2
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<(), Failure> {
    match command {
        Command::Analyze(a) => analyze(a, io),
        Command::Generate(a) => generate(a, io),
        Command::Tag(a) => tag(a, io),
        Command::Lemmatize(a) => lemmatize(a, io),
        Command::Train(a) => train(a, io),
        Command::TrainGuesser(a) => train_guesser(a, io),
        Command::Export(a) => export(a, io),
        Command::Eval(a) => eval(a, io),
        Command::LexiconAdd(a) => lexicon_add(a, io),
        Command::Serve(a) => serve_command(a),
    }
}

/// `surface<TAB>lemma<TAB>tag<TAB>segments`, one reading per line.
pub fn render_analyses(form: &str, analyses: &[Analysis]) -> String {
    let mut out = String::new();
    for a in analyses {
        let _ = writeln!(out, "{form}\t{}\t{}\t{}", a.lemma, a.tag, render_segments(&a.segments));
    }
    out
}

fn analyze(args: AnalyzeArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let words = if args.words.is_empty() {
        let text = io.input(None)?;
        Tokenizer::default().tokens(&text)
    } else {
        args.words.clone()
    };
    if words.iter().any(String::is_empty) {
        return Err(Failure::Data(anyhow!("empty word form")));
    }
    let config = PipelineConfig {
        output_format: args.format.into(),
        ..args.analyzer.config()
    };
    let readings: Vec<Vec<Analysis>> = match &args.fullform {
        Some(path) => {
            let table = FullFormTable::parse(&pipeline::read_text(path)?).context("full-form lexicon")?;
            words.iter().map(|w| fullform_analyses(&table, w)).collect()
        }
        None => {
            let p = Pipeline::load(&config)?;
            words.iter().map(|w| p.analyze(w)).collect::<Result<_>>()?
        }
    };
    let mut out = String::new();
    for (i, (w, a)) in words.iter().zip(&readings).enumerate() {
        match config.output_format {
            OutputFormat::Json => {
                out.push_str(&payload::analyses_json(a));
                out.push('\n');
            }
            OutputFormat::Text => {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&render_analyses(w, a));
            }
        }
    }
    io.print(&out)?;
    Ok(())
}

fn parse_pos(code: &str) -> Result<Pos, Failure> {
    Pos::from_code(code).ok_or_else(|| usage(format!("unknown part of speech `{code}`")))
}

fn generate(args: GenerateArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let pos = args.pos.as_deref().map(parse_pos).transpose()?;
    let config = PipelineConfig {
        lexicon_path: args.lex.lexicon,
        paradigm_path: args.lex.paradigms,
        ..PipelineConfig::default()
    };
    let p = Pipeline::load(&config)?;
    let forms = p.generate(&args.lemma, pos)?;
    let out = match args.format {
        Format::Json => payload::forms_json(&forms) + "\n",
        Format::Text => forms.iter().map(|(f, t)| format!("{f}\t{t}\n")).collect(),
    };
    io.print(&out)?;
    Ok(())
}

fn render_tagged_lines(sentences: &[Vec<String>], tags: &[Vec<Tag>]) -> String {
    let mut out = String::new();
    for (i, (s, t)) in sentences.iter().zip(tags).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (w, tag) in s.iter().zip(t) {
            let _ = writeln!(out, "{w}\t{tag}");
        }
    }
    out
}

type Tagged = (Vec<Vec<String>>, Vec<Vec<Tag>>);

fn tag_text(p: &Pipeline, text: &str) -> Result<Tagged> {
    let sentences = Tokenizer::default().sentences(text);
    if sentences.is_empty() {
        bail!("empty corpus");
    }
    let tags = p.tag(&sentences)?;
    Ok((sentences, tags))
}

fn tag(args: TagArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let text = io.input(args.input.as_deref())?;
    let p = Pipeline::load(&args.model.config())?;
    let (sentences, tags) = tag_text(&p, &text)?;
    io.print(&render_tagged_lines(&sentences, &tags))?;
    Ok(())
}

fn render_lemmatized(tagged: &[Sentence], decisions: &[Vec<LemmaDecision>]) -> String {
    let mut out = String::new();
    for (i, (s, d)) in tagged.iter().zip(decisions).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (t, d) in s.iter().zip(d) {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", t.word, t.tag, d.lemma, d.status);
        }
    }
    out
}

fn to_sentences(words: &[Vec<String>], tags: &[Vec<Tag>]) -> Vec<Sentence> {
    words
        .iter()
        .zip(tags)
        .map(|(w, t)| {
            w.iter()
                .zip(t)
                .map(|(word, tag)| TaggedToken {
                    word: word.clone(),
                    tag: *tag,
                    lemma: None,
                })
                .collect()
        })
        .collect()
}

fn lemmatize(args: LemmatizeArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let text = io.input(args.input.as_deref())?;
    let mut config = PipelineConfig {
        lexical_mode: if args.uniform {
            LexicalMode::Uniform
        } else {
            LexicalMode::Corpus
        },
        lemma_corpus_path: args.lemma_corpus.clone(),
        tagset_mode: args.tagset.map(Into::into),
        ..args.analyzer.config()
    };
    let (tagged, mode) = match &args.with_tagger {
        Some(model) => {
            config.model_path = Some(model.clone());
            let p = Pipeline::load(&config)?;
            let (words, tags) = tag_text(&p, &text)?;
            let mode = p.model()?.mode();
            let tagged = to_sentences(&words, &tags);
            let decisions = p.lemmatize(&tagged, mode)?;
            io.print(&render_lemmatized(&tagged, &decisions))?;
            return Ok(());
        }
        None => {
            let mode: TagsetMode = args
                .tagset
                .ok_or_else(|| usage("--tagset is required unless --with-tagger is given"))?
                .into();
            (parse_tagged(&text).context("tagged input")?, mode)
        }
    };
    let p = Pipeline::load(&config)?;
    let decisions = p.lemmatize(&tagged, mode)?;
    io.print(&render_lemmatized(&tagged, &decisions))?;
    Ok(())
}

fn train(args: TrainArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let corpus = pipeline::load_corpus(&args.corpus)?;
    let mapping = pipeline::load_mapping(args.mapping.as_deref())?;
    let model = TrigramModel::train_with_floor(&corpus, args.tagset.into(), &mapping, args.floor)
        .context("training the tagger")?;
    write_output(io, args.output.as_deref(), &model.render())?;
    Ok(())
}

fn train_guesser(args: TrainGuesserArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let mapping = pipeline::load_mapping(args.mapping.as_deref())?;
    let model = match &args.fullform {
        Some(path) => {
            let table = FullFormTable::parse(&pipeline::read_text(path)?).context("full-form lexicon")?;
            let pairs: Vec<(&str, Tag)> = table
                .iter()
                .flat_map(|(form, readings)| readings.iter().map(move |(t, _)| (form, *t)))
                .collect();
            GuesserModel::train(pairs, args.suffix_len, &mapping)
        }
        None => {
            let registry = pipeline::load_registry(args.lex.paradigms.as_deref())?;
            let lexicon = pipeline::load_lexicon(args.lex.lexicon.as_deref(), registry)?;
            GuesserModel::from_lexicon(&lexicon, args.suffix_len, &mapping)
        }
    }
    .context("training the guesser")?;
    write_output(io, args.output.as_deref(), &model.render())?;
    Ok(())
}

fn export(args: ExportArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let registry = pipeline::load_registry(args.lex.paradigms.as_deref())?;
    let lexicon = pipeline::load_lexicon(args.lex.lexicon.as_deref(), registry)?;
    let mut text = String::new();
    export_fullforms(&lexicon, &mut text).context("export")?;
    write_output(io, args.output.as_deref(), &text)?;
    Ok(())
}

#[derive(Serialize)]
struct EvalSummary {
    mode: String,
    tokens: u64,
    tagging_accuracy: f64,
    ambiguity_rate: f64,
    coverage: f64,
    lemma_accuracy: Option<f64>,
    ambiguous_lemma_tokens: Option<u64>,
    ambiguous_lemma_accuracy: Option<f64>,
}

fn eval(args: EvalArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let p = Pipeline::load(&args.model.config())?;
    let model = p.model()?;
    let mode = model.mode();
    let gold = project_sentences(&pipeline::load_corpus(&args.gold)?, mode, &p.mapping);
    let analyzer = p.analyzer();
    let builder = LatticeBuilder::new(&analyzer, model, &p.mapping).with_lexical_mode(p.lexical_mode);
    let report = evaluate(&builder, &gold).context("tagging evaluation")?;

    let words: Vec<Vec<String>> = gold
        .iter()
        .map(|s| s.iter().map(|t| t.word.clone()).collect())
        .collect();
    let built = p.lattices(&words)?;
    let lattices: Vec<_> = built.iter().map(|(l, _)| l.clone()).collect();
    let rate = ambiguity_rate(&lattices).context("ambiguity")?;
    let known = built
        .iter()
        .flat_map(|(_, a)| a.iter())
        .filter(|a| a.iter().any(|r| r.provenance != Provenance::Guesser))
        .count();
    let coverage = known as f64 / report.total as f64;

    let mut summary = EvalSummary {
        mode: mode.name().to_string(),
        tokens: report.total,
        tagging_accuracy: report.accuracy(),
        ambiguity_rate: rate,
        coverage,
        lemma_accuracy: None,
        ambiguous_lemma_tokens: None,
        ambiguous_lemma_accuracy: None,
    };
    let gold_lemmas: Option<Vec<String>> = gold.iter().flatten().map(|t| t.lemma.clone()).collect();
    if let Some(gold_lemmas) = gold_lemmas {
        let tags = p.tag(&words)?;
        let decisions: Vec<LemmaDecision> = p
            .lemmatize(&to_sentences(&words, &tags), mode)?
            .into_iter()
            .flatten()
            .collect();
        let e = evaluate_lemmatizer(&decisions, &gold_lemmas).context("lemma evaluation")?;
        summary.lemma_accuracy = Some(e.accuracy());
        summary.ambiguous_lemma_tokens = Some(e.ambiguous);
        summary.ambiguous_lemma_accuracy = Some(e.ambiguous_accuracy());
    }
    let out = match args.format {
        Format::Json => payload::json(&summary) + "\n",
        Format::Text => {
            let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4}"));
            let mut s = String::new();
            let _ = writeln!(s, "tagset\t{}", summary.mode);
            let _ = writeln!(s, "tokens\t{}", summary.tokens);
            let _ = writeln!(s, "tagging accuracy\t{:.4}", summary.tagging_accuracy);
            let _ = writeln!(s, "ambiguity rate\t{:.4}", summary.ambiguity_rate);
            let _ = writeln!(s, "coverage\t{:.4}", summary.coverage);
            let _ = writeln!(s, "lemma accuracy\t{}", opt(summary.lemma_accuracy));
            let _ = writeln!(
                s,
                "ambiguous-lemma tokens\t{}",
                summary
                    .ambiguous_lemma_tokens
                    .map_or("n/a".to_string(), |n| n.to_string())
            );
            let _ = writeln!(s, "ambiguous-lemma accuracy\t{}", opt(summary.ambiguous_lemma_accuracy));
            s
        }
    };
    io.print(&out)?;
    Ok(())
}

fn lexicon_add(args: LexiconAddArgs, io: &mut Io<'_>) -> Result<(), Failure> {
    let registry = pipeline::load_registry(args.lex.paradigms.as_deref())?;
    let mut lexicon = pipeline::load_lexicon(args.lex.lexicon.as_deref(), registry.clone())?;
    let mut entry = match (&args.answers, &args.pos, &args.paradigm) {
        (Some(answers), None, None) => {
            let tree = match &args.questions {
                Some(p) => QuestionTree::parse(&pipeline::read_text(p)?, &registry).context("question tree")?,
                None => QuestionTree::fixture(),
            };
            match next_question(&tree, answers).map_err(|e| usage(e.to_string()))? {
                Step::Inferred(s) => s.entry(&args.lemma),
                Step::Ask(q) => {
                    let keys: Vec<&str> = q.keys().collect();
                    return Err(usage(format!("{} ({})", q.prompt, keys.join("/"))));
                }
            }
        }
        (None, Some(pos), Some(paradigm)) => {
            let mut e = StemEntry::new(&args.lemma, parse_pos(pos)?, paradigm);
            if let Some(f) = &args.flags {
                e.flags = StemFlags::parse(f).map_err(usage)?;
            }
            e
        }
        _ => return Err(usage("give either --answers or both --pos and --paradigm")),
    };
    for a in &args.alternants {
        let (k, v) = a
            .split_once('=')
            .ok_or_else(|| usage(format!("alternant `{a}` is not name=value")))?;
        entry.alternants.insert(k.to_string(), v.to_string());
    }
    entry.separable_prefix = args.prefix.clone();
    entry.gloss = args.gloss.clone();
    let id = lexicon.add_stem(entry).context("adding the entry")?;
    let target = args.output.as_deref().or(args.lex.lexicon.as_deref());
    write_output(io, target, &lexicon.render())?;
    if target.is_some() {
        io.print(&format!("entry {}\n", id.0))?;
    }
    Ok(())
}

fn serve_command(args: ServeArgs) -> Result<(), Failure> {
    let p = Pipeline::load(&args.analyzer.config())?;
    let tree = match &args.questions {
        Some(path) => {
            QuestionTree::parse(&pipeline::read_text(path)?, p.lexicon.paradigms()).context("question tree")?
        }
        None => QuestionTree::fixture(),
    };
    let persist = if args.no_persist {
        None
    } else {
        args.analyzer.lex.lexicon.clone()
    };
    let state = Arc::new(AppState::new(p, tree, persist));
    let runtime = tokio::runtime::Runtime::new().context("starting the runtime")?;
    runtime
        .block_on(serve::serve(state, args.bind, args.allow_remote))
        .map_err(|e| match e {
            serve::ServeError::NotLoopback(_) => usage(e.to_string()),
            other => Failure::Data(other.into()),
        })
}
