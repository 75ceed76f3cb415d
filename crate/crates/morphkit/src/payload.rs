//! JSON bodies shared by `--format json` and the HTTP service.

use std::collections::BTreeMap;

use morphkit_core::analyze::render_segments;
use morphkit_core::lexicon::{QuestionNode, Skeleton};
use morphkit_core::{Analysis, Tag};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisItem {
    pub lemma: String,
    pub tag: String,
    pub segments: String,
    pub provenance: String,
}

impl From<&Analysis> for AnalysisItem {
    fn from(a: &Analysis) -> Self {
        AnalysisItem {
            lemma: a.lemma.clone(),
            tag: a.tag.render(),
            segments: render_segments(&a.segments),
            provenance: a.provenance.name().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysesPayload {
    pub analyses: Vec<AnalysisItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormItem {
    pub form: String,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormsPayload {
    pub forms: Vec<FormItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionPayload {
    pub id: String,
    pub prompt: String,
    pub rationale: String,
    pub answers: Vec<String>,
}

impl From<&QuestionNode> for QuestionPayload {
    fn from(q: &QuestionNode) -> Self {
        QuestionPayload {
            id: q.id.clone(),
            prompt: q.prompt.clone(),
            rationale: q.rationale.clone(),
            answers: q.keys().map(String::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferredPayload {
    pub pos: String,
    pub paradigm: String,
    pub flags: Vec<String>,
}

impl From<&Skeleton> for InferredPayload {
    fn from(s: &Skeleton) -> Self {
        InferredPayload {
            pos: s.pos.to_string(),
            paradigm: s.paradigm_id.clone(),
            flags: s.flags.names().into_iter().map(String::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionPayload {
    pub session_id: String,
    pub question: QuestionPayload,
}

/// `{"question": ...}` or `{"inferred": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepPayload {
    Question(QuestionPayload),
    Inferred(InferredPayload),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerRequest {
    pub key: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CommitRequest {
    pub lemma: String,
    #[serde(default)]
    pub alternants: BTreeMap<String, String>,
    #[serde(default)]
    pub prefix: Option<String>,
    #[serde(default)]
    pub gloss: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitPayload {
    pub entry_id: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorPayload {
    pub error: String,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("payloads serialize")
}

/// The body answering an analysis query.
pub fn analyses_json(analyses: &[Analysis]) -> String {
    to_json(&AnalysesPayload {
        analyses: analyses.iter().map(AnalysisItem::from).collect(),
    })
}

/// The body answering a generation query.
pub fn forms_json(forms: &[(String, Tag)]) -> String {
    to_json(&FormsPayload {
        forms: forms
            .iter()
            .map(|(form, tag)| FormItem {
                form: form.clone(),
                tag: tag.render(),
            })
            .collect(),
    })
}

pub fn error_json(message: impl ToString) -> String {
    to_json(&ErrorPayload {
        error: message.to_string(),
    })
}

pub fn json<T: Serialize>(value: &T) -> String {
    to_json(value)
}
