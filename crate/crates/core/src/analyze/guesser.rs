//! Suffix-frequency guesser for word forms the lexicon does not know.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::tagset::{parse_tag, Tag, TagsetMapping};
use crate::text::starts_uppercase;

/// Header line of the guesser file.
pub const GUESSER_HEADER: &str = "#morphkit-guesser-v1";

/// Default longest suffix the guesser looks at.
pub const DEFAULT_SUFFIX_LEN: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GuesserError {
    #[error("guesser has no statistics")]
    UntrainedGuesser,
    #[error("no training data")]
    EmptyTrainingData,
    #[error("suffix length must be at least 1")]
    ZeroSuffixLength,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Tag counts per lowercase word-final suffix, plus per-capitalization priors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuesserModel {
    max_suffix_len: usize,
    suffix_stats: BTreeMap<String, BTreeMap<Tag, u64>>,
    /// Index 0: lowercase-initial forms, index 1: capitalized forms.
    capitalization_prior: [BTreeMap<Tag, u64>; 2],
}

fn suffixes(form: &str, max_len: usize) -> impl Iterator<Item = String> + '_ {
    let chars: Vec<char> = form.chars().flat_map(char::to_lowercase).collect();
    let n = chars.len();
    (1..=max_len.min(n)).map(move |k| chars[n - k..].iter().collect())
}

fn normalize(counts: &BTreeMap<Tag, u64>) -> BTreeMap<Tag, f64> {
    let total: u64 = counts.values().sum();
    counts.iter().map(|(t, c)| (*t, *c as f64 / total as f64)).collect()
}

impl GuesserModel {
    /// Counts every suffix of length 1..=`max_suffix_len` of every form
    /// toward the form's tag, projected to the small tag set.
    pub fn train<'a, I>(pairs: I, max_suffix_len: usize, mapping: &TagsetMapping) -> Result<Self, GuesserError>
    where
        I: IntoIterator<Item = (&'a str, Tag)>,
    {
        if max_suffix_len == 0 {
            return Err(GuesserError::ZeroSuffixLength);
        }
        let mut model = GuesserModel {
            max_suffix_len,
            suffix_stats: BTreeMap::new(),
            capitalization_prior: [BTreeMap::new(), BTreeMap::new()],
        };
        let mut seen = false;
        for (form, tag) in pairs {
            if form.is_empty() {
                continue;
            }
            seen = true;
            let small = mapping.map(&tag);
            for s in suffixes(form, max_suffix_len) {
                *model.suffix_stats.entry(s).or_default().entry(small).or_default() += 1;
            }
            let cap = usize::from(starts_uppercase(form));
            *model.capitalization_prior[cap].entry(small).or_default() += 1;
        }
        if !seen {
            return Err(GuesserError::EmptyTrainingData);
        }
        Ok(model)
    }

    /// Trains on the full-form export of `lexicon`.
    pub fn from_lexicon(
        lexicon: &crate::lexicon::Lexicon,
        max_suffix_len: usize,
        mapping: &TagsetMapping,
    ) -> Result<Self, GuesserError> {
        let lines = crate::lexicon::fullform_lines(lexicon).map_err(|_| GuesserError::EmptyTrainingData)?;
        Self::train(lines.iter().map(|l| (l.form.as_str(), l.tag)), max_suffix_len, mapping)
    }

    pub fn max_suffix_len(&self) -> usize {
        self.max_suffix_len
    }

    pub fn suffix_counts(&self, suffix: &str) -> Option<&BTreeMap<Tag, u64>> {
        self.suffix_stats.get(suffix)
    }

    pub fn prior(&self, capitalized: bool) -> &BTreeMap<Tag, u64> {
        &self.capitalization_prior[usize::from(capitalized)]
    }

    pub fn is_trained(&self) -> bool {
        !self.suffix_stats.is_empty()
    }

    /// Tag distribution for `form`: relative frequencies at the longest known
    /// suffix, else the prior for its capitalization.
    pub fn guess(&self, form: &str) -> Result<BTreeMap<Tag, f64>, GuesserError> {
        if !self.is_trained() {
            return Err(GuesserError::UntrainedGuesser);
        }
        let mut known: Vec<String> = suffixes(form, self.max_suffix_len).collect();
        known.reverse();
        if let Some(counts) = known.iter().find_map(|s| self.suffix_stats.get(s)) {
            return Ok(normalize(counts));
        }
        let prior = self.prior(starts_uppercase(form));
        if !prior.is_empty() {
            return Ok(normalize(prior));
        }
        let mut both = self.capitalization_prior[0].clone();
        for (t, c) in &self.capitalization_prior[1] {
            *both.entry(*t).or_default() += c;
        }
        Ok(normalize(&both))
    }

    /// The `k` most probable tags, by descending probability then tag rendering.
    pub fn top_k(&self, form: &str, k: usize) -> Result<Vec<(Tag, f64)>, GuesserError> {
        let mut ranked: Vec<(Tag, f64)> = self.guess(form)?.into_iter().collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.render().cmp(&b.0.render())));
        ranked.truncate(k);
        Ok(ranked)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{GUESSER_HEADER}\nmax_suffix_len\t{}\n", self.max_suffix_len);
        for (s, counts) in &self.suffix_stats {
            for (t, c) in counts {
                out.push_str(&format!("suffix\t{s}\t{t}\t{c}\n"));
            }
        }
        for (cap, name) in [(1, "upper"), (0, "lower")] {
            for (t, c) in &self.capitalization_prior[cap] {
                out.push_str(&format!("prior\t{name}\t{t}\t{c}\n"));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, GuesserError> {
        let syntax = |line: usize, message: &str| GuesserError::Syntax {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == GUESSER_HEADER => {}
            _ => return Err(syntax(1, "missing guesser header")),
        }
        let mut model = GuesserModel {
            max_suffix_len: DEFAULT_SUFFIX_LEN,
            suffix_stats: BTreeMap::new(),
            capitalization_prior: [BTreeMap::new(), BTreeMap::new()],
        };
        for (idx, raw) in lines {
            let line = idx + 1;
            let f: Vec<&str> = raw.split('\t').collect();
            let count = |s: &str| s.parse::<u64>().map_err(|_| syntax(line, "bad count"));
            let tag = |s: &str| parse_tag(s).map_err(|e| syntax(line, &e.to_string()));
            match f.as_slice() {
                ["max_suffix_len", n] => {
                    model.max_suffix_len = n.parse().map_err(|_| syntax(line, "bad suffix length"))?;
                }
                ["suffix", s, t, c] => {
                    model
                        .suffix_stats
                        .entry(s.to_string())
                        .or_default()
                        .insert(tag(t)?, count(c)?);
                }
                ["prior", which, t, c] => {
                    let cap = match *which {
                        "upper" => 1,
                        "lower" => 0,
                        _ => return Err(syntax(line, "prior must be `upper` or `lower`")),
                    };
                    model.capitalization_prior[cap].insert(tag(t)?, count(c)?);
                }
                _ => return Err(syntax(line, "unrecognized line")),
            }
        }
        if model.max_suffix_len == 0 {
            return Err(GuesserError::ZeroSuffixLength);
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;
    use proptest::prelude::*;

    fn t(s: &str) -> Tag {
        parse_tag(s).unwrap()
    }

    fn small() -> TagsetMapping {
        TagsetMapping::default_small()
    }

    #[test]
    fn single_pair_generalizes_by_suffix() {
        let g = GuesserModel::train([("Haus", t("SUB NOM SIN NEU"))], 5, &small()).unwrap();
        let out = g.guess("Maus").unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[&t("SUB")], 1.0);
    }

    #[test]
    fn relative_frequency_at_best_suffix() {
        let pairs = [
            ("laufen", t("VER INF")),
            ("rufen", t("VER PLU 1PE PRÄ")),
            ("kaufen", t("VER PLU 3PE PRÄ")),
            ("Hufen", t("SUB DAT PLU FEM")),
        ];
        let g = GuesserModel::train(pairs, 5, &small()).unwrap();
        // "ufen" is the longest stored suffix of "stufen": VER INF x1, VER x2, SUB x1
        let out = g.guess("stufen").unwrap();
        assert_eq!(out[&t("VER")], 0.5);
        assert_eq!(out[&t("VER INF")], 0.25);
        assert_eq!(out[&t("SUB")], 0.25);
    }

    #[test]
    fn unseen_suffix_uses_capitalization_prior() {
        let pairs = [("Haus", t("SUB NOM SIN NEU")), ("gut", t("ADJ PRD GRU"))];
        let g = GuesserModel::train(pairs, 3, &small()).unwrap();
        assert_eq!(g.guess("Qxy").unwrap()[&t("SUB")], 1.0);
        assert_eq!(g.guess("qxy").unwrap()[&t("ADJ PRD")], 1.0);
    }

    #[test]
    fn errors() {
        let empty: [(&str, Tag); 0] = [];
        assert_eq!(
            GuesserModel::train(empty, 5, &small()),
            Err(GuesserError::EmptyTrainingData)
        );
        let g = GuesserModel::parse(&alloc::format!("{GUESSER_HEADER}\nmax_suffix_len\t5\n")).unwrap();
        assert_eq!(g.guess("x"), Err(GuesserError::UntrainedGuesser));
    }

    #[test]
    fn counts_match_an_independent_recount() {
        // oracle: recount suffixes of the fixture export by hand
        let lex = Lexicon::fixture();
        let map = small();
        let g = GuesserModel::from_lexicon(&lex, 5, &map).unwrap();
        let lines = crate::lexicon::fullform_lines(&lex).unwrap();
        let mut en: BTreeMap<Tag, u64> = BTreeMap::new();
        for l in &lines {
            let lower: String = l.form.to_lowercase();
            if lower.ends_with("en") {
                *en.entry(map.map(&l.tag)).or_default() += 1;
            }
        }
        assert_eq!(g.suffix_counts("en"), Some(&en));
        for l in &lines {
            let dist = g.guess(&l.form).unwrap();
            assert!(dist.contains_key(&map.map(&l.tag)), "{}", l.form);
        }
    }

    #[test]
    fn file_round_trip() {
        let g = GuesserModel::from_lexicon(&Lexicon::fixture(), 5, &small()).unwrap();
        let text = g.render();
        let again = GuesserModel::parse(&text).unwrap();
        assert_eq!(again, g);
        assert_eq!(again.render(), text);
    }

    proptest! {
        #[test]
        fn guesses_are_distributions(word in "[a-zA-ZäöüßÄÖÜ]{1,12}") {
            let g = GuesserModel::from_lexicon(&Lexicon::fixture(), 5, &small()).unwrap();
            let out = g.guess(&word).unwrap();
            prop_assert!(!out.is_empty());
            let sum: f64 = out.values().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
            prop_assert!(out.values().all(|p| *p >= 0.0));
        }
    }
}
