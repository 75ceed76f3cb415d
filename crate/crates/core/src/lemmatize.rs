//! Choosing one lemma per token from its analyses and its tag.
//!
//! Analyses whose tag, brought to the tagger's granularity, differs from the
//! chosen tag are dropped. What remains usually names one lemma.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::analyze::Analysis;
use crate::corpus::Sentence;
use crate::tagset::{Tag, TagsetMapping, TagsetMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LemmaStatus {
    /// All analyses share one lemma.
    Unambiguous,
    /// The tag left exactly one lemma.
    Resolved,
    /// The tag left several lemmas; frequency picked one.
    UnresolvedTie,
    /// No analysis carries the tag; frequency picked among all lemmas.
    NoSurvivor,
}

impl LemmaStatus {
    pub fn name(self) -> &'static str {
        match self {
            LemmaStatus::Unambiguous => "UNAMBIGUOUS",
            LemmaStatus::Resolved => "RESOLVED",
            LemmaStatus::UnresolvedTie => "UNRESOLVED_TIE",
            LemmaStatus::NoSurvivor => "NO_SURVIVOR",
        }
    }
}

impl fmt::Display for LemmaStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaDecision {
    pub lemma: String,
    pub status: LemmaStatus,
    /// Distinct lemmas of all analyses, sorted.
    pub candidates: Vec<String>,
    /// Lemmas compatible with the chosen tag, sorted.
    pub survivors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LemmatizeError {
    #[error("token has no analyses")]
    NoAnalyses,
    #[error("no tokens")]
    EmptyInput,
    #[error("{predicted} decisions against {gold} gold lemmas")]
    AlignmentError { predicted: usize, gold: usize },
}

/// Lemma counts of a lemmatized corpus.
pub fn lemma_frequencies(sentences: &[Sentence]) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for t in sentences.iter().flatten() {
        if let Some(l) = &t.lemma {
            *out.entry(l.clone()).or_default() += 1;
        }
    }
    out
}

/// Most frequent of `lemmas`, ties broken by string order.
fn most_frequent(lemmas: &[String], freq: &BTreeMap<String, u64>) -> String {
    let mut best = &lemmas[0];
    let mut best_n = freq.get(best).copied().unwrap_or(0);
    for l in &lemmas[1..] {
        let n = freq.get(l).copied().unwrap_or(0);
        if n > best_n {
            best = l;
            best_n = n;
        }
    }
    best.clone()
}

/// Picks the lemma of a token tagged `chosen`.
pub fn lemmatize(
    analyses: &[Analysis],
    chosen: &Tag,
    mode: TagsetMode,
    mapping: &TagsetMapping,
    freq: &BTreeMap<String, u64>,
) -> Result<LemmaDecision, LemmatizeError> {
    if analyses.is_empty() {
        return Err(LemmatizeError::NoAnalyses);
    }
    let candidates: Vec<String> = analyses
        .iter()
        .map(|a| a.lemma.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let survivors: Vec<String> = analyses
        .iter()
        .filter(|a| mode.project(&a.tag, mapping) == *chosen)
        .map(|a| a.lemma.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (lemma, status) = if candidates.len() == 1 {
        (candidates[0].clone(), LemmaStatus::Unambiguous)
    } else {
        match survivors.len() {
            0 => (most_frequent(&candidates, freq), LemmaStatus::NoSurvivor),
            1 => (survivors[0].clone(), LemmaStatus::Resolved),
            _ => (most_frequent(&survivors, freq), LemmaStatus::UnresolvedTie),
        }
    };
    Ok(LemmaDecision {
        lemma,
        status,
        candidates,
        survivors,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaAmbiguityReport {
    pub tokens: u64,
    /// Number of distinct lemmas → number of tokens.
    pub by_degree: BTreeMap<usize, u64>,
}

impl LemmaAmbiguityReport {
    /// Tokens with more than one candidate lemma.
    pub fn ambiguous(&self) -> u64 {
        self.by_degree.iter().filter(|(d, _)| **d > 1).map(|(_, n)| n).sum()
    }

    pub fn ambiguous_share(&self) -> f64 {
        if self.tokens == 0 {
            0.0
        } else {
            self.ambiguous() as f64 / self.tokens as f64
        }
    }
}

/// How many tokens have 1, 2, 3... candidate lemmas.
pub fn lemma_ambiguity_report(tokens: &[Vec<Analysis>]) -> Result<LemmaAmbiguityReport, LemmatizeError> {
    if tokens.is_empty() {
        return Err(LemmatizeError::EmptyInput);
    }
    let mut report = LemmaAmbiguityReport::default();
    for analyses in tokens {
        let degree = analyses.iter().map(|a| &a.lemma).collect::<BTreeSet<_>>().len();
        report.tokens += 1;
        *report.by_degree.entry(degree).or_default() += 1;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaEval {
    pub total: u64,
    pub correct: u64,
    /// Tokens whose analyses name more than one lemma.
    pub ambiguous: u64,
    pub ambiguous_correct: u64,
}

impl LemmaEval {
    pub fn accuracy(&self) -> f64 {
        ratio(self.correct, self.total)
    }

    pub fn ambiguous_accuracy(&self) -> f64 {
        ratio(self.ambiguous_correct, self.ambiguous)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Scores decisions against gold lemmas, token by token.
pub fn evaluate_lemmatizer<S: AsRef<str>>(
    decisions: &[LemmaDecision],
    gold: &[S],
) -> Result<LemmaEval, LemmatizeError> {
    if decisions.len() != gold.len() {
        return Err(LemmatizeError::AlignmentError {
            predicted: decisions.len(),
            gold: gold.len(),
        });
    }
    if decisions.is_empty() {
        return Err(LemmatizeError::EmptyInput);
    }
    let mut e = LemmaEval::default();
    for (d, g) in decisions.iter().zip(gold) {
        let hit = d.lemma == g.as_ref();
        e.total += 1;
        e.correct += hit as u64;
        if d.status != LemmaStatus::Unambiguous {
            e.ambiguous += 1;
            e.ambiguous_correct += hit as u64;
        }
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::Analyzer;
    use crate::lexicon::Lexicon;
    use crate::tagset::parse_tag;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn analyses(lex: &Lexicon, form: &str) -> Vec<Analysis> {
        Analyzer::new(lex).analyze(form).unwrap()
    }

    fn decide(lex: &Lexicon, form: &str, tag: &str, mode: TagsetMode) -> LemmaDecision {
        let mapping = TagsetMapping::default_small();
        lemmatize(
            &analyses(lex, form),
            &parse_tag(tag).unwrap(),
            mode,
            &mapping,
            &BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn meine_follows_its_tag() {
        let lex = Lexicon::fixture();
        let d = decide(&lex, "meine", "VER", TagsetMode::Small);
        assert_eq!((d.lemma.as_str(), d.status), ("meinen", LemmaStatus::Resolved));
        let d = decide(&lex, "meine", "POS ATT", TagsetMode::Small);
        assert_eq!((d.lemma.as_str(), d.status), ("mein", LemmaStatus::Resolved));
        assert_eq!(d.candidates, ["mein", "meinen"]);
    }

    #[test]
    fn winde_dative_is_wind() {
        let lex = Lexicon::fixture();
        let d = decide(&lex, "Winde", "SUB DAT SIN MAS", TagsetMode::Large);
        assert_eq!((d.lemma.as_str(), d.status), ("Wind", LemmaStatus::Resolved));
        let d = decide(&lex, "Winde", "SUB NOM SIN FEM", TagsetMode::Large);
        assert_eq!(d.lemma, "Winde");
    }

    #[test]
    fn ambiguous_forms_have_expected_lemma_sets() {
        let lex = Lexicon::fixture();
        let cases: [(&str, &[&str]); 6] = [
            ("Begriffen", &["Begriff", "begreifen"]),
            ("Dank", &["Dank", "danken", "dank"]),
            ("Garten", &["Garten", "garen"]),
            ("Trotz", &["Trotz", "trotz", "trotzen"]),
            ("Weise", &["Weise", "weise", "weisen"]),
            ("Wunder", &["Wunder", "wund", "wundern"]),
        ];
        for (form, want) in cases {
            let got: BTreeSet<String> = analyses(&lex, form).into_iter().map(|a| a.lemma).collect();
            let want: BTreeSet<String> = want.iter().map(|s| s.to_string()).collect();
            assert_eq!(got, want, "{form}");
        }
    }

    #[test]
    fn ties_and_missing_survivors_use_frequency() {
        let lex = Lexicon::fixture();
        let mapping = TagsetMapping::default_small();
        let a = analyses(&lex, "Weise");
        let mut freq = BTreeMap::new();
        freq.insert("weisen".to_string(), 5);
        // no reading of Weise is a preposition
        let d = lemmatize(&a, &parse_tag("PRP").unwrap(), TagsetMode::Small, &mapping, &freq).unwrap();
        assert_eq!((d.lemma.as_str(), d.status), ("weisen", LemmaStatus::NoSurvivor));
        let d = lemmatize(
            &a,
            &parse_tag("PRP").unwrap(),
            TagsetMode::Small,
            &mapping,
            &BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(d.lemma, "Weise");
        assert_eq!(
            lemmatize(&[], &parse_tag("PRP").unwrap(), TagsetMode::Small, &mapping, &freq),
            Err(LemmatizeError::NoAnalyses)
        );
    }

    #[test]
    fn report_and_evaluation() {
        let lex = Lexicon::fixture();
        let toks: Vec<Vec<Analysis>> = ["Wind", "Dank", "Garten"].iter().map(|f| analyses(&lex, f)).collect();
        let r = lemma_ambiguity_report(&toks).unwrap();
        assert_eq!(r.tokens, 3);
        assert_eq!(r.ambiguous(), 2);
        assert_eq!(lemma_ambiguity_report(&[]), Err(LemmatizeError::EmptyInput));

        let d1 = decide(&lex, "Wind", "SUB", TagsetMode::Small);
        let d2 = decide(&lex, "Garten", "VER", TagsetMode::Small);
        let e = evaluate_lemmatizer(&[d1.clone(), d2.clone()], &["Wind", "garen"]).unwrap();
        assert_eq!((e.total, e.correct, e.ambiguous, e.ambiguous_correct), (2, 2, 1, 1));
        assert!(matches!(
            evaluate_lemmatizer(&[d1], &["Wind", "x"]),
            Err(LemmatizeError::AlignmentError { predicted: 1, gold: 2 })
        ));
    }

    const FORMS: [&str; 12] = [
        "meine",
        "Winde",
        "Begriffen",
        "Dank",
        "Garten",
        "Trotz",
        "Weise",
        "Wunder",
        "ging",
        "Wind",
        "wies",
        "Frauen",
    ];

    proptest! {
        // a finer tag can only keep fewer lemmas
        #[test]
        fn large_survivors_within_small(i in 0..FORMS.len(), j in 0usize..64) {
            let lex = Lexicon::fixture();
            let mapping = TagsetMapping::default_small();
            let a = analyses(&lex, FORMS[i]);
            let tag = a[j % a.len()].tag;
            let large = TagsetMode::Large.project(&tag, &mapping);
            let small = TagsetMode::Small.project(&tag, &mapping);
            let dl = lemmatize(&a, &large, TagsetMode::Large, &mapping, &BTreeMap::new()).unwrap();
            let ds = lemmatize(&a, &small, TagsetMode::Small, &mapping, &BTreeMap::new()).unwrap();
            prop_assert!(!dl.survivors.is_empty());
            prop_assert!(dl.survivors.iter().all(|l| ds.survivors.contains(l)));
        }
    }
}
