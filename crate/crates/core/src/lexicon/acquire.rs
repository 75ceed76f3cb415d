//! The acquisition questionnaire: a decision tree that asks a native
//! speaker just enough questions to pin down a new word's inflection class.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{StemEntry, StemFlags};
use crate::inflect::ParadigmRegistry;
use crate::tagset::Pos;

/// What a complete answer path determines about a new entry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Skeleton {
    pub pos: Pos,
    pub paradigm_id: String,
    pub flags: StemFlags,
}

impl Skeleton {
    /// A lexicon entry for `lemma` with this skeleton's class and flags.
    pub fn entry(&self, lemma: &str) -> StemEntry {
        let mut e = StemEntry::new(lemma, self.pos, &self.paradigm_id);
        e.flags = self.flags;
        e
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Node(String),
    Leaf(Skeleton),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionNode {
    pub id: String,
    pub prompt: String,
    pub rationale: String,
    /// Answer keys in file order.
    pub answers: Vec<(String, Answer)>,
}

impl QuestionNode {
    pub fn answer(&self, key: &str) -> Option<&Answer> {
        self.answers.iter().find(|(k, _)| k == key).map(|(_, a)| a)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.answers.iter().map(|(k, _)| k.as_str())
    }
}

/// Result of replaying an answer history.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step<'t> {
    Ask(&'t QuestionNode),
    Inferred(&'t Skeleton),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("missing `{0}` header line")]
    MissingHeader(&'static str),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("question tree has no nodes")]
    Empty,
    #[error("node `{0}` is declared twice")]
    DuplicateNode(String),
    #[error("node `{node}` offers answer `{key}` twice")]
    DuplicateAnswer { node: String, key: String },
    #[error("answer refers to unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` offers no answers")]
    NoAnswers(String),
    #[error("node `{0}` lies on a cycle")]
    Cycle(String),
    #[error("node `{0}` cannot be reached from the root")]
    UnreachableNode(String),
    #[error("leaf names unknown paradigm `{0}`")]
    UnknownParadigm(String),
    #[error("leaf pairs {pos} with paradigm `{paradigm}`")]
    LeafPosMismatch { pos: Pos, paradigm: String },
    #[error("no answer path reaches paradigm `{0}`")]
    UnreachableParadigm(String),
    #[error("every answer at node `{0}` leads to the same class")]
    NotMinimal(String),
    #[error("answer `{key}` is not offered at `{node}`")]
    InvalidAnswer { node: String, key: String },
}

/// A validated questionnaire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionTree {
    root: String,
    nodes: BTreeMap<String, QuestionNode>,
}

impl QuestionTree {
    /// The shipped questionnaire, validated against the shipped paradigms.
    pub fn fixture() -> Self {
        Self::parse(crate::data::QUESTION_TREE, &ParadigmRegistry::fixture()).expect("shipped question tree is valid")
    }

    /// Parses and validates a question-tree file against `paradigms`.
    pub fn parse(text: &str, paradigms: &ParadigmRegistry) -> Result<Self, TreeError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, first)) if first.trim() == crate::FORMAT_HEADER => {}
            _ => return Err(TreeError::MissingHeader(crate::FORMAT_HEADER)),
        }
        let mut root = None;
        let mut nodes: BTreeMap<String, QuestionNode> = BTreeMap::new();
        let mut answers: Vec<(usize, String, String, Answer)> = Vec::new();
        for (idx, raw) in lines {
            let line = idx + 1;
            if raw.trim_start().starts_with('#') {
                continue;
            }
            let f: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let syntax = |message: &str| TreeError::Syntax {
                line,
                message: message.to_string(),
            };
            match (f[0], f.len()) {
                ("node", 4) => {
                    let id = f[1].to_string();
                    if nodes.contains_key(&id) {
                        return Err(TreeError::DuplicateNode(id));
                    }
                    root.get_or_insert_with(|| id.clone());
                    nodes.insert(
                        id.clone(),
                        QuestionNode {
                            id,
                            prompt: f[2].to_string(),
                            rationale: f[3].to_string(),
                            answers: Vec::new(),
                        },
                    );
                }
                ("answer", 5) if f[3] == "node" => {
                    answers.push((line, f[1].to_string(), f[2].to_string(), Answer::Node(f[4].to_string())));
                }
                ("answer", 7) if f[3] == "leaf" => {
                    let pos = Pos::from_code(f[4]).ok_or_else(|| syntax("unknown part of speech"))?;
                    let flags = StemFlags::parse(f[6]).map_err(|flag| syntax(&format!("unknown flag `{flag}`")))?;
                    let skeleton = Skeleton {
                        pos,
                        paradigm_id: f[5].to_string(),
                        flags,
                    };
                    answers.push((line, f[1].to_string(), f[2].to_string(), Answer::Leaf(skeleton)));
                }
                _ => return Err(syntax("expected a `node` or `answer` line")),
            }
        }
        for (_, node, key, answer) in answers {
            let owner = nodes
                .get_mut(&node)
                .ok_or_else(|| TreeError::UnknownNode(node.clone()))?;
            if owner.answer(&key).is_some() {
                return Err(TreeError::DuplicateAnswer { node, key });
            }
            owner.answers.push((key, answer));
        }
        let tree = QuestionTree {
            root: root.ok_or(TreeError::Empty)?,
            nodes,
        };
        tree.validate(paradigms)?;
        Ok(tree)
    }

    fn validate(&self, paradigms: &ParadigmRegistry) -> Result<(), TreeError> {
        for node in self.nodes.values() {
            if node.answers.is_empty() {
                return Err(TreeError::NoAnswers(node.id.clone()));
            }
            for (_, answer) in &node.answers {
                match answer {
                    Answer::Node(next) if !self.nodes.contains_key(next) => {
                        return Err(TreeError::UnknownNode(next.clone()));
                    }
                    Answer::Leaf(s) => {
                        let p = paradigms
                            .get(&s.paradigm_id)
                            .ok_or_else(|| TreeError::UnknownParadigm(s.paradigm_id.clone()))?;
                        if p.pos != s.pos {
                            return Err(TreeError::LeafPosMismatch {
                                pos: s.pos,
                                paradigm: s.paradigm_id.clone(),
                            });
                        }
                    }
                    Answer::Node(_) => {}
                }
            }
        }
        // leaf sets per node, computed depth first; a node met again while on
        // the stack closes a cycle
        let mut leaves: BTreeMap<&str, BTreeSet<&Skeleton>> = BTreeMap::new();
        let mut on_stack = BTreeSet::new();
        self.collect_leaves(&self.root, &mut leaves, &mut on_stack)?;
        if let Some(id) = self.nodes.keys().find(|id| !leaves.contains_key(id.as_str())) {
            return Err(TreeError::UnreachableNode(id.clone()));
        }
        for (id, set) in &leaves {
            if set.len() < 2 {
                return Err(TreeError::NotMinimal(id.to_string()));
            }
        }
        let reached: BTreeSet<&str> = leaves[self.root.as_str()]
            .iter()
            .map(|s| s.paradigm_id.as_str())
            .collect();
        if let Some(p) = paradigms.iter().find(|p| !reached.contains(p.id.as_str())) {
            return Err(TreeError::UnreachableParadigm(p.id.clone()));
        }
        Ok(())
    }

    fn collect_leaves<'a>(
        &'a self,
        id: &'a str,
        memo: &mut BTreeMap<&'a str, BTreeSet<&'a Skeleton>>,
        on_stack: &mut BTreeSet<&'a str>,
    ) -> Result<(), TreeError> {
        if memo.contains_key(id) {
            return Ok(());
        }
        if !on_stack.insert(id) {
            return Err(TreeError::Cycle(id.to_string()));
        }
        let node = &self.nodes[id];
        let mut set = BTreeSet::new();
        for (_, answer) in &node.answers {
            match answer {
                Answer::Leaf(s) => {
                    set.insert(s);
                }
                Answer::Node(next) => {
                    self.collect_leaves(next, memo, on_stack)?;
                    set.extend(memo[next.as_str()].iter().copied());
                }
            }
        }
        on_stack.remove(id);
        memo.insert(id, set);
        Ok(())
    }

    pub fn root(&self) -> &QuestionNode {
        &self.nodes[&self.root]
    }

    pub fn node(&self, id: &str) -> Option<&QuestionNode> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &QuestionNode> {
        self.nodes.values()
    }
}

/// Replays `history` from the root and returns the next question, or the
/// inferred skeleton once a leaf is reached.
pub fn next_question<'t, S: AsRef<str>>(tree: &'t QuestionTree, history: &[S]) -> Result<Step<'t>, TreeError> {
    let mut step = Step::Ask(tree.root());
    for key in history {
        let key = key.as_ref();
        let node = match step {
            Step::Ask(node) => node,
            Step::Inferred(s) => {
                return Err(TreeError::InvalidAnswer {
                    node: format!("leaf {}", s.paradigm_id),
                    key: key.to_string(),
                })
            }
        };
        step = match node.answer(key) {
            Some(Answer::Node(next)) => Step::Ask(&tree.nodes[next]),
            Some(Answer::Leaf(s)) => Step::Inferred(s),
            None => {
                return Err(TreeError::InvalidAnswer {
                    node: node.id.clone(),
                    key: key.to_string(),
                })
            }
        };
    }
    Ok(step)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk<'t>(
        tree: &'t QuestionTree,
        node: &'t QuestionNode,
        path: &mut Vec<String>,
        out: &mut Vec<(Vec<String>, &'t Skeleton)>,
    ) {
        for (key, answer) in &node.answers {
            path.push(key.clone());
            match answer {
                Answer::Leaf(s) => out.push((path.clone(), s)),
                Answer::Node(next) => walk(tree, tree.node(next).unwrap(), path, out),
            }
            path.pop();
        }
    }

    #[test]
    fn empty_history_asks_the_root() {
        let tree = QuestionTree::fixture();
        match next_question::<&str>(&tree, &[]).unwrap() {
            Step::Ask(node) => {
                assert_eq!(node.id, "pos");
                assert_eq!(node.keys().collect::<Vec<_>>(), ["noun", "verb", "adjective", "other"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_answer_is_rejected() {
        let tree = QuestionTree::fixture();
        assert!(matches!(
            next_question(&tree, &["purple"]),
            Err(TreeError::InvalidAnswer { .. })
        ));
        assert!(matches!(
            next_question(&tree, &["other", "preposition", "more"]),
            Err(TreeError::InvalidAnswer { .. })
        ));
    }

    #[test]
    fn noun_path_infers_a_complete_skeleton() {
        let tree = QuestionTree::fixture();
        let step = next_question(&tree, &["noun", "das", "er", "yes", "yes"]).unwrap();
        assert_eq!(
            step,
            Step::Inferred(&Skeleton {
                pos: Pos::Sub,
                paradigm_id: "noun-neu-er".into(),
                flags: StemFlags {
                    umlaut: true,
                    ss_shift: true
                },
            })
        );
    }

    #[test]
    fn exhaustive_walk_reaches_complete_leaves() {
        // every root-to-leaf path replays to a generable skeleton
        let tree = QuestionTree::fixture();
        let registry = ParadigmRegistry::fixture();
        let mut leaves = Vec::new();
        walk(&tree, tree.root(), &mut Vec::new(), &mut leaves);
        let mut reached = BTreeSet::new();
        for (path, skeleton) in &leaves {
            assert_eq!(next_question(&tree, path).unwrap(), Step::Inferred(skeleton));
            let p = registry.get(&skeleton.paradigm_id).unwrap();
            assert_eq!(p.pos, skeleton.pos);
            reached.insert(skeleton.paradigm_id.clone());
        }
        let all: BTreeSet<String> = registry.iter().map(|p| p.id.clone()).collect();
        assert_eq!(reached, all);
    }

    #[test]
    fn no_node_is_redundant() {
        let tree = QuestionTree::fixture();
        for node in tree.nodes() {
            let mut leaves = Vec::new();
            walk(&tree, node, &mut Vec::new(), &mut leaves);
            let distinct: BTreeSet<&Skeleton> = leaves.iter().map(|(_, s)| *s).collect();
            assert!(distinct.len() >= 2, "{}", node.id);
        }
    }

    fn tree(body: &str) -> Result<QuestionTree, TreeError> {
        let mut text = String::from("#morphkit-v1\n");
        text.push_str(body);
        let registry =
            ParadigmRegistry::parse("#morphkit-v1\nparadigm\ta\tPRP\nslot\tPRP\t-\nparadigm\tb\tSZE\nslot\tSZE\t-\n")
                .unwrap();
        QuestionTree::parse(&text, &registry)
    }

    #[test]
    fn validation_errors() {
        let ok = "node\tr\tq\tw\nanswer\tr\tx\tleaf\tPRP\ta\t-\nanswer\tr\ty\tleaf\tSZE\tb\t-\n";
        assert!(tree(ok).is_ok());
        let same = "node\tr\tq\tw\nanswer\tr\tx\tleaf\tPRP\ta\t-\nanswer\tr\ty\tleaf\tPRP\ta\t-\n";
        assert!(matches!(tree(same), Err(TreeError::NotMinimal(_))));
        let missing = "node\tr\tq\tw\nanswer\tr\tx\tleaf\tPRP\ta\t-\nanswer\tr\ty\tleaf\tPRP\ta\tumlaut\n";
        assert_eq!(tree(missing), Err(TreeError::UnreachableParadigm("b".into())));
        let cyclic = "node\tr\tq\tw\nnode\ts\tq\tw\nanswer\tr\tx\tnode\ts\nanswer\ts\tx\tnode\tr\nanswer\ts\ty\tleaf\tSZE\tb\t-\n";
        assert!(matches!(tree(cyclic), Err(TreeError::Cycle(_))));
        let wrong_pos = "node\tr\tq\tw\nanswer\tr\tx\tleaf\tSUB\ta\t-\nanswer\tr\ty\tleaf\tSZE\tb\t-\n";
        assert!(matches!(tree(wrong_pos), Err(TreeError::LeafPosMismatch { .. })));
        let orphan = format!("{ok}node\tz\tq\tw\nanswer\tz\tk\tleaf\tSZE\tb\t-\nanswer\tz\tl\tleaf\tPRP\ta\t-\n");
        assert!(matches!(tree(&orphan), Err(TreeError::UnreachableNode(_))));
        let dup = format!("{ok}answer\tr\tx\tleaf\tSZE\tb\t-\n");
        assert!(matches!(tree(&dup), Err(TreeError::DuplicateAnswer { .. })));
        assert!(matches!(tree(""), Err(TreeError::Empty)));
    }
}
