//! Fixture data compiled into the crate.

/// The shipped paradigm registry.
pub const PARADIGMS: &str = include_str!("../data/paradigms.txt");

/// The default large-to-small tag mapping (51 small tags).
pub const TAGSET_MAPPING: &str = include_str!("../data/tagset-small.map");

/// The fixture stem lexicon.
pub const FIXTURE_LEXICON: &str = include_str!("../data/fixture.lex");

/// The acquisition questionnaire.
pub const QUESTION_TREE: &str = include_str!("../data/questions.txt");

/// Tagged training corpus (large tags, with lemmas).
pub const TRAINING_CORPUS: &str = include_str!("../data/train.tsv");

/// Held-out gold standard (large tags, with lemmas).
pub const GOLD_CORPUS: &str = include_str!("../data/gold.tsv");
