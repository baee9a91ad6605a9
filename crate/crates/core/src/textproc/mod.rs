//! Tokenization, universal part-of-speech tagging and lemmatization.

mod lemma;
mod tagger;
mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lemma::Lemmatizer;
pub use tagger::{read_tagged_corpus, tagging_accuracy, train_tagger, TaggedSentence, TaggerModel, TrainConfig};
pub use tokenize::tokenize;

/// Coarse universal part-of-speech tags. Declaration order breaks scoring ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Tag {
    Noun,
    Pron,
    Adj,
    Adp,
    Verb,
    Other,
}

impl Tag {
    pub const COUNT: usize = 6;
    pub const ALL: [Tag; Tag::COUNT] = [Tag::Noun, Tag::Pron, Tag::Adj, Tag::Adp, Tag::Verb, Tag::Other];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Noun => "NOUN",
            Tag::Pron => "PRON",
            Tag::Adj => "ADJ",
            Tag::Adp => "ADP",
            Tag::Verb => "VERB",
            Tag::Other => "OTHER",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NOUN" => Ok(Tag::Noun),
            "PRON" => Ok(Tag::Pron),
            "ADJ" => Ok(Tag::Adj),
            "ADP" => Ok(Tag::Adp),
            "VERB" => Ok(Tag::Verb),
            "OTHER" | "X" => Ok(Tag::Other),
            _ => Err(Error::InvalidParameter(format!("unknown tag `{s}`"))),
        }
    }
}

impl TryFrom<String> for Tag {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Tag> for String {
    fn from(t: Tag) -> String {
        t.as_str().to_string()
    }
}

/// Parallel token / tag / lemma lists for one utterance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenizedUtterance {
    tokens: Vec<String>,
    tags: Vec<Tag>,
    lemmas: Vec<String>,
}

impl TokenizedUtterance {
    pub fn new(tokens: Vec<String>, tags: Vec<Tag>, lemmas: Vec<String>) -> Result<Self> {
        if tokens.len() != tags.len() || tokens.len() != lemmas.len() {
            return Err(Error::InvalidParameter(format!(
                "token/tag/lemma lengths differ: {}/{}/{}",
                tokens.len(),
                tags.len(),
                lemmas.len()
            )));
        }
        if let Some(t) = tokens.iter().find(|t| t.is_empty() || t.chars().any(char::is_whitespace)) {
            return Err(Error::InvalidParameter(format!("bad token `{t}`")));
        }
        Ok(TokenizedUtterance { tokens, tags, lemmas })
    }

    /// Build from pre-tagged tokens, lemmatizing with `lemmatizer`.
    pub fn from_tagged(tokens: Vec<String>, tags: Vec<Tag>, lemmatizer: &Lemmatizer) -> Result<Self> {
        let lemmas = tokens
            .iter()
            .zip(&tags)
            .map(|(t, &g)| lemmatizer.lemmatize(t, g))
            .collect();
        TokenizedUtterance::new(tokens, tags, lemmas)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn lemmas(&self) -> &[String] {
        &self.lemmas
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn count(&self, tag: Tag) -> usize {
        self.tags.iter().filter(|&&t| t == tag).count()
    }
}

/// Tokenizer + tagger + lemmatizer bundled for per-utterance processing.
#[derive(Clone, Copy)]
pub struct TextPipeline<'a> {
    pub tagger: &'a TaggerModel,
    pub lemmatizer: &'a Lemmatizer,
}

impl<'a> TextPipeline<'a> {
    pub fn new(tagger: &'a TaggerModel, lemmatizer: &'a Lemmatizer) -> Self {
        TextPipeline { tagger, lemmatizer }
    }

    pub fn process(&self, text: &str) -> TokenizedUtterance {
        let tokens = tokenize(text);
        let tags = self.tagger.tag(&tokens);
        let lemmas = tokens
            .iter()
            .zip(&tags)
            .map(|(t, &g)| self.lemmatizer.lemmatize(t, g))
            .collect();
        TokenizedUtterance { tokens, tags, lemmas }
    }
}
