//! Rule + exception lemmatizer for nouns, verbs and adjectives.
//!
//! Lookup order: irregular exception table, suffix rules whose output is a
//! known base form, the token itself if it is a known base form, a
//! conservative suffix fallback for unknown words, identity.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use super::Tag;

/// (suffix, replacement) rules tried in order; the first producing a known base form wins.
const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("ves", "f"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];
const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];
const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

const CLITIC_LEMMAS: &[(&str, &str)] = &[
    ("n't", "not"),
    ("'s", "be"),
    ("'re", "be"),
    ("'m", "be"),
    ("'ve", "have"),
    ("'ll", "will"),
];

pub struct Lemmatizer {
    exceptions: HashMap<(Tag, String), String>,
    index: HashSet<(Tag, String)>,
}

impl Lemmatizer {
    /// Build from `TAG\tform\tlemma` exception rows and `TAG\tbase` index rows.
    pub fn from_tables(exceptions: &str, index: &str) -> Lemmatizer {
        let mut exc = HashMap::new();
        for line in exceptions.lines() {
            let mut it = line.split('\t');
            if let (Some(tag), Some(form), Some(lemma)) = (it.next(), it.next(), it.next()) {
                if let Ok(tag) = tag.parse::<Tag>() {
                    exc.insert((tag, form.to_string()), lemma.to_string());
                }
            }
        }
        let mut idx = HashSet::new();
        for line in index.lines() {
            if let Some((tag, word)) = line.split_once('\t') {
                if let Ok(tag) = tag.parse::<Tag>() {
                    idx.insert((tag, word.to_string()));
                }
            }
        }
        Lemmatizer {
            exceptions: exc,
            index: idx,
        }
    }

    /// An empty lemmatizer: only the fallback suffix rules apply.
    pub fn rules_only() -> Lemmatizer {
        Lemmatizer {
            exceptions: HashMap::new(),
            index: HashSet::new(),
        }
    }

    pub fn bundled() -> &'static Lemmatizer {
        static LEM: OnceLock<Lemmatizer> = OnceLock::new();
        LEM.get_or_init(|| {
            Lemmatizer::from_tables(
                include_str!("../../data/lemma/exceptions.tsv"),
                include_str!("../../data/lemma/index.tsv"),
            )
        })
    }

    fn known(&self, tag: Tag, word: &str) -> bool {
        self.index.contains(&(tag, word.to_string()))
    }

    pub fn lemmatize(&self, token: &str, tag: Tag) -> String {
        if let Some((_, l)) = CLITIC_LEMMAS.iter().find(|(c, _)| *c == token) {
            if tag == Tag::Verb || token == "n't" {
                return (*l).to_string();
            }
        }
        let rules = match tag {
            Tag::Noun => NOUN_RULES,
            Tag::Verb => VERB_RULES,
            Tag::Adj => ADJ_RULES,
            _ => return token.to_string(),
        };
        if let Some(l) = self.exceptions.get(&(tag, token.to_string())) {
            return l.clone();
        }
        for (old, new) in rules {
            if let Some(stem) = token.strip_suffix(old) {
                if stem.is_empty() {
                    continue;
                }
                let cand = format!("{stem}{new}");
                if self.known(tag, &cand) {
                    return cand;
                }
            }
        }
        if self.known(tag, token) {
            return token.to_string();
        }
        fallback(token, tag).unwrap_or_else(|| token.to_string())
    }
}

fn undouble(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && !matches!(b[n - 1], b'l' | b's' | b'z' | b'e' | b'o') && b[n - 1].is_ascii_alphabetic() {
        stem[..n - 1].to_string()
    } else {
        stem.to_string()
    }
}

fn has_alpha(s: &str) -> bool {
    s.chars().any(char::is_alphabetic)
}

/// Suffix stripping for words absent from the base-form index.
fn fallback(token: &str, tag: Tag) -> Option<String> {
    let t = token;
    let out = match tag {
        Tag::Noun => {
            if let Some(s) = t.strip_suffix("ies").filter(|s| s.len() >= 2) {
                format!("{s}y")
            } else if let Some(s) = ["ches", "shes", "sses", "xes", "zes"]
                .iter()
                .find_map(|suf| t.strip_suffix(suf).map(|s| (s, suf)))
                .map(|(s, suf)| format!("{s}{}", &suf[..suf.len() - 2]))
            {
                s
            } else if t.ends_with('s') && !t.ends_with("ss") && !t.ends_with("us") && !t.ends_with("is") && t.len() > 3 {
                t[..t.len() - 1].to_string()
            } else {
                return None;
            }
        }
        Tag::Verb => {
            if let Some(s) = t.strip_suffix("ies").filter(|s| s.len() >= 2) {
                format!("{s}y")
            } else if let Some(s) = t.strip_suffix("ing").filter(|s| s.len() >= 3) {
                undouble(s)
            } else if let Some(s) = t.strip_suffix("ied").filter(|s| s.len() >= 2) {
                format!("{s}y")
            } else if let Some(s) = t.strip_suffix("ed").filter(|s| s.len() >= 3) {
                undouble(s)
            } else if let Some(s) = ["ches", "shes", "sses", "xes", "zes"]
                .iter()
                .find_map(|suf| t.strip_suffix(suf).map(|s| format!("{s}{}", &suf[..suf.len() - 2])))
            {
                s
            } else if t.ends_with('s') && !t.ends_with("ss") && t.len() > 3 {
                t[..t.len() - 1].to_string()
            } else {
                return None;
            }
        }
        Tag::Adj => {
            if let Some(s) = t.strip_suffix("iest").filter(|s| s.len() >= 2) {
                format!("{s}y")
            } else if let Some(s) = t.strip_suffix("ier").filter(|s| s.len() >= 2) {
                format!("{s}y")
            } else if let Some(s) = t.strip_suffix("est").filter(|s| s.len() >= 3) {
                undouble(s)
            } else if let Some(s) = t.strip_suffix("er").filter(|s| s.len() >= 3) {
                undouble(s)
            } else {
                return None;
            }
        }
        _ => return None,
    };
    (!out.is_empty() && has_alpha(&out)).then_some(out)
}
