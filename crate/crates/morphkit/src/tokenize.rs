//! Whitespace tokenization and sentence splitting.

use std::collections::BTreeSet;

/// Abbreviations shipped with morphkit.
pub const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

const LEADING: &[char] = &['(', '[', '"', '„', '‚', '\'', '»', '«'];
const TRAILING: &[char] = &['.', ',', ';', ':', '!', '?', ')', ']', '"', '“', '‘', '\'', '«', '»'];
const TERMINAL: [&str; 3] = [".", "!", "?"];

#[derive(Debug, Clone)]
pub struct Tokenizer {
    abbreviations: BTreeSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::with_abbreviations(DEFAULT_ABBREVIATIONS)
    }
}

impl Tokenizer {
    /// `list` holds one abbreviation per line; `#` starts a comment line.
    pub fn with_abbreviations(list: &str) -> Self {
        let abbreviations = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect();
        Self { abbreviations }
    }

    fn split_word(&self, chunk: &str, out: &mut Vec<String>) {
        let mut rest = chunk;
        while let Some(c) = rest.chars().next().filter(|c| LEADING.contains(c)) {
            out.push(c.to_string());
            rest = &rest[c.len_utf8()..];
        }
        let mut tail = Vec::new();
        while !rest.is_empty() && !self.abbreviations.contains(rest) {
            match rest.chars().last().filter(|c| TRAILING.contains(c)) {
                Some(c) => {
                    tail.push(c.to_string());
                    rest = &rest[..rest.len() - c.len_utf8()];
                }
                None => break,
            }
        }
        if !rest.is_empty() {
            out.push(rest.to_string());
        }
        out.extend(tail.into_iter().rev());
    }

    pub fn tokens(&self, text: &str) -> Vec<String> {
        let mut out = Vec::new();
        for chunk in text.split_whitespace() {
            self.split_word(chunk, &mut out);
        }
        out
    }

    /// Splits `text` into sentences of tokens. A sentence ends at `.`, `!`
    /// or `?` followed by a capitalized token or the end of the text.
    pub fn sentences(&self, text: &str) -> Vec<Vec<String>> {
        let tokens = self.tokens(text);
        let mut out = Vec::new();
        let mut current = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            current.push(tok.clone());
            let ends = TERMINAL.contains(&tok.as_str())
                && tokens
                    .get(i + 1)
                    .is_none_or(|next| next.chars().next().is_some_and(|c| c.is_uppercase()));
            if ends {
                out.push(std::mem::take(&mut current));
            }
        }
        if !current.is_empty() {
            out.push(current);
        }
        out
    }
}
