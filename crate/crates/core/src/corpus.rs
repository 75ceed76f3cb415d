//! Tagged corpus files: `token<TAB>tag[<TAB>lemma]` per line, a blank line
//! between sentences.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::tagset::{parse_tag, Tag, TagError};
use crate::text::nfc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub word: String,
    pub tag: Tag,
    pub lemma: Option<String>,
}

pub type Sentence = Vec<TaggedToken>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("line {line}: expected `token<TAB>tag[<TAB>lemma]`")]
    Malformed { line: usize },
    #[error("line {line}: {source}")]
    Tag { line: usize, source: TagError },
}

/// Parses a tagged corpus. Lines starting with `#` are comments.
pub fn parse_tagged(text: &str) -> Result<Vec<Sentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(core::mem::take(&mut current));
            }
            continue;
        }
        if raw.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = raw.split('\t').collect();
        if !(2..=3).contains(&f.len()) || f[0].is_empty() {
            return Err(CorpusError::Malformed { line });
        }
        let tag = parse_tag(f[1]).map_err(|source| CorpusError::Tag { line, source })?;
        current.push(TaggedToken {
            word: nfc(f[0]),
            tag,
            lemma: f.get(2).map(|l| nfc(l.trim())).filter(|l| !l.is_empty()),
        });
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    if sentences.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(sentences)
}

/// Renders sentences back to the corpus format.
pub fn render_tagged(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for (i, s) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for t in s {
            out.push_str(&t.word);
            out.push('\t');
            out.push_str(&t.tag.render());
            if let Some(l) = &t.lemma {
                out.push('\t');
                out.push_str(l);
            }
            out.push('\n');
        }
    }
    out
}

/// The words of each sentence.
pub fn words(sentences: &[Sentence]) -> Vec<Vec<String>> {
    sentences
        .iter()
        .map(|s| s.iter().map(|t| t.word.to_string()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentences_split_on_blank_lines() {
        let text = "Ich\tPRO PER NOM SIN 1PE\tich\n.\tSZE\n\n\nWind\tSUB NOM SIN MAS\n";
        let s = parse_tagged(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0][0].lemma.as_deref(), Some("ich"));
        assert_eq!(s[1][0].lemma, None);
        assert_eq!(parse_tagged(&render_tagged(&s)).unwrap(), s);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_tagged(""), Err(CorpusError::EmptyCorpus));
        assert_eq!(parse_tagged("\n\n"), Err(CorpusError::EmptyCorpus));
        assert_eq!(parse_tagged("Wind\n"), Err(CorpusError::Malformed { line: 1 }));
        assert!(matches!(
            parse_tagged("Wind\tSUB IMP\n"),
            Err(CorpusError::Tag { line: 1, .. })
        ));
    }

    #[test]
    fn shipped_corpora_parse() {
        assert!(parse_tagged(crate::data::TRAINING_CORPUS).unwrap().len() >= 20);
        assert!(!parse_tagged(crate::data::GOLD_CORPUS).unwrap().is_empty());
    }
}
