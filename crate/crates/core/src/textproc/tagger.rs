//! Averaged-perceptron part-of-speech tagger.
//!
//! Greedy left-to-right decoding over contextual features (word, neighbouring
//! words, affixes, previous tags). Frequent words that only ever carried one
//! tag in training bypass the perceptron through a tag dictionary.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::hash::{BuildHasherDefault, Hasher};
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Tag;
use crate::error::{Error, Result};

pub const MODEL_VERSION: &str = "emocap-tagger/1";

const START: [&str; 2] = ["-START-", "-START2-"];
const END: [&str; 2] = ["-END-", "-END2-"];

/// Averaged weights are rounded to this many decimal places when stored.
const WEIGHT_DECIMALS: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<String>,
    pub tags: Vec<Tag>,
}

#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub epochs: usize,
    pub seed: u64,
    /// Minimum training frequency for a single-tag word to enter the tag dictionary.
    pub dict_min_count: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 5,
            seed: 0,
            dict_min_count: 20,
        }
    }
}

/// Parse the `token_TAG token_TAG ...` one-sentence-per-line format.
pub fn read_tagged_corpus<R: BufRead>(reader: R, name: &str) -> Result<Vec<TaggedSentence>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::row(name, i + 1, "*", e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut s = TaggedSentence {
            tokens: Vec::new(),
            tags: Vec::new(),
        };
        for (col, item) in line.split_whitespace().enumerate() {
            let (tok, tag) = item
                .rsplit_once('_')
                .filter(|(t, _)| !t.is_empty())
                .ok_or_else(|| Error::row(name, i + 1, format!("token {}", col + 1), format!("`{item}` is not token_TAG")))?;
            let tag: Tag = tag
                .parse()
                .map_err(|e: Error| Error::row(name, i + 1, format!("token {}", col + 1), e.to_string()))?;
            s.tokens.push(tok.to_lowercase());
            s.tags.push(tag);
        }
        out.push(s);
    }
    Ok(out)
}

#[derive(Default)]
struct IdHasher(u64);

impl Hasher for IdHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 << 8) | b as u64;
        }
    }
    fn write_u64(&mut self, n: u64) {
        self.0 = n;
    }
}

type HashedWeights = HashMap<u64, [f64; Tag::COUNT], BuildHasherDefault<IdHasher>>;

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in s.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn normalize(word: &str) -> Cow<'_, str> {
    let mut chars = word.chars();
    let first = chars.next();
    if word.contains('-') && first != Some('-') {
        Cow::Borrowed("!HYPHEN")
    } else if word.len() == 4 && word.bytes().all(|b| b.is_ascii_digit()) {
        Cow::Borrowed("!YEAR")
    } else if first.is_some_and(|c| c.is_ascii_digit()) {
        Cow::Borrowed("!DIGITS")
    } else {
        Cow::Borrowed(word)
    }
}

fn suffix(s: &str, n: usize) -> &str {
    match s.char_indices().rev().nth(n.saturating_sub(1)) {
        Some((i, _)) if n > 0 => &s[i..],
        _ => s,
    }
}

fn prefix(s: &str, n: usize) -> &str {
    match s.char_indices().nth(n) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

fn context<'a>(tokens: &'a [String]) -> Vec<Cow<'a, str>> {
    let mut ctx = Vec::with_capacity(tokens.len() + 4);
    ctx.extend(START.iter().map(|s| Cow::Borrowed(*s)));
    ctx.extend(tokens.iter().map(|t| normalize(t)));
    ctx.extend(END.iter().map(|s| Cow::Borrowed(*s)));
    ctx
}

/// Calls `f` once per feature string of token `i` (0-based, unpadded).
fn for_each_feature(ctx: &[Cow<'_, str>], i: usize, prev: &str, prev2: &str, mut f: impl FnMut(&str)) {
    let j = i + 2;
    let w = ctx[j].as_ref();
    let mut buf = String::with_capacity(48);
    let mut emit = |parts: &[&str]| {
        buf.clear();
        for p in parts {
            buf.push_str(p);
        }
        f(&buf);
    };
    emit(&["bias"]);
    emit(&["s1 ", suffix(w, 1)]);
    emit(&["s2 ", suffix(w, 2)]);
    emit(&["s3 ", suffix(w, 3)]);
    emit(&["p1 ", prefix(w, 1)]);
    emit(&["p2 ", prefix(w, 2)]);
    emit(&["p3 ", prefix(w, 3)]);
    emit(&["t-1 ", prev]);
    emit(&["t-2 ", prev2]);
    emit(&["t-1t-2 ", prev, " ", prev2]);
    emit(&["w ", w]);
    emit(&["t-1w ", prev, " ", w]);
    emit(&["w-1 ", &ctx[j - 1]]);
    emit(&["w-1s3 ", suffix(&ctx[j - 1], 3)]);
    emit(&["w-2 ", &ctx[j - 2]]);
    emit(&["w+1 ", &ctx[j + 1]]);
    emit(&["w+1s3 ", suffix(&ctx[j + 1], 3)]);
    emit(&["w+2 ", &ctx[j + 2]]);
}

fn argmax(scores: &[f64; Tag::COUNT]) -> Tag {
    let mut best = 0;
    for k in 1..Tag::COUNT {
        if scores[k] > scores[best] {
            best = k;
        }
    }
    Tag::ALL[best]
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: String,
    tags: Vec<Tag>,
    tag_dict: BTreeMap<String, Tag>,
    weights: BTreeMap<String, [f64; Tag::COUNT]>,
}

/// A trained tagger. Immutable; safe to share across threads.
#[derive(Clone, Debug)]
pub struct TaggerModel {
    version: String,
    tag_dict: BTreeMap<String, Tag>,
    weights: BTreeMap<String, [f64; Tag::COUNT]>,
    lookup: HashedWeights,
    dict_lookup: HashMap<String, Tag>,
}

impl PartialEq for TaggerModel {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version && self.tag_dict == other.tag_dict && self.weights == other.weights
    }
}

impl TaggerModel {
    fn from_parts(tag_dict: BTreeMap<String, Tag>, weights: BTreeMap<String, [f64; Tag::COUNT]>) -> Self {
        let mut lookup = HashedWeights::default();
        for (feat, w) in &weights {
            let slot = lookup.entry(fnv1a(feat)).or_insert([0.0; Tag::COUNT]);
            for k in 0..Tag::COUNT {
                slot[k] += w[k];
            }
        }
        let dict_lookup = tag_dict.iter().map(|(k, v)| (k.clone(), *v)).collect();
        TaggerModel {
            version: MODEL_VERSION.to_string(),
            tag_dict,
            weights,
            lookup,
            dict_lookup,
        }
    }

    /// The model shipped with the crate, trained on the bundled tagged corpus.
    pub fn bundled() -> &'static TaggerModel {
        static MODEL: std::sync::OnceLock<TaggerModel> = std::sync::OnceLock::new();
        MODEL.get_or_init(|| {
            TaggerModel::from_json(include_bytes!("../../data/tagger/model.json"))
                .expect("bundled tagger model is valid")
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn tag_dict(&self) -> &BTreeMap<String, Tag> {
        &self.tag_dict
    }

    pub fn feature_count(&self) -> usize {
        self.weights.len()
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let file: ModelFile = serde_json::from_slice(bytes)?;
        if file.version != MODEL_VERSION {
            return Err(Error::InvalidModel(format!(
                "tagger version `{}`, expected `{MODEL_VERSION}`",
                file.version
            )));
        }
        if file.tags != Tag::ALL {
            return Err(Error::InvalidModel("tag set does not match".into()));
        }
        if let Some((f, _)) = file.weights.iter().find(|(_, w)| w.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidModel(format!("non-finite weight for `{f}`")));
        }
        Ok(TaggerModel::from_parts(file.tag_dict, file.weights))
    }

    /// Sorted-key compact JSON; identical bytes for identical models.
    pub fn to_json(&self) -> Result<Vec<u8>> {
        let file = ModelFile {
            version: self.version.clone(),
            tags: Tag::ALL.to_vec(),
            tag_dict: self.tag_dict.clone(),
            weights: self.weights.clone(),
        };
        let value = serde_json::to_value(&file)?;
        let mut out = serde_json::to_vec(&value)?;
        out.push(b'\n');
        Ok(out)
    }

    /// Tag a token sequence (tokens as produced by [`super::tokenize`]).
    pub fn tag(&self, tokens: &[String]) -> Vec<Tag> {
        let ctx = context(tokens);
        let mut out = Vec::with_capacity(tokens.len());
        let (mut prev, mut prev2) = (START[0], START[1]);
        for (i, tok) in tokens.iter().enumerate() {
            let tag = match self.dict_lookup.get(tok.as_str()) {
                Some(&t) => t,
                None => {
                    let mut scores = [0.0; Tag::COUNT];
                    for_each_feature(&ctx, i, prev, prev2, |feat| {
                        if let Some(w) = self.lookup.get(&fnv1a(feat)) {
                            for k in 0..Tag::COUNT {
                                scores[k] += w[k];
                            }
                        }
                    });
                    argmax(&scores)
                }
            };
            out.push(tag);
            prev2 = prev;
            prev = tag.as_str();
        }
        out
    }
}

struct Perceptron {
    ids: HashMap<String, usize>,
    names: Vec<String>,
    weights: Vec<[f64; Tag::COUNT]>,
    totals: Vec<[f64; Tag::COUNT]>,
    stamps: Vec<[u64; Tag::COUNT]>,
    instances: u64,
}

impl Perceptron {
    fn new() -> Self {
        Perceptron {
            ids: HashMap::new(),
            names: Vec::new(),
            weights: Vec::new(),
            totals: Vec::new(),
            stamps: Vec::new(),
            instances: 0,
        }
    }

    fn id_or_insert(&mut self, feat: &str) -> usize {
        if let Some(&id) = self.ids.get(feat) {
            return id;
        }
        let id = self.names.len();
        self.ids.insert(feat.to_string(), id);
        self.names.push(feat.to_string());
        self.weights.push([0.0; Tag::COUNT]);
        self.totals.push([0.0; Tag::COUNT]);
        self.stamps.push([0; Tag::COUNT]);
        id
    }

    fn bump(&mut self, id: usize, k: usize, delta: f64) {
        let elapsed = (self.instances - self.stamps[id][k]) as f64;
        self.totals[id][k] += elapsed * self.weights[id][k];
        self.stamps[id][k] = self.instances;
        self.weights[id][k] += delta;
    }

    fn averaged(self) -> BTreeMap<String, [f64; Tag::COUNT]> {
        let scale = 10f64.powi(WEIGHT_DECIMALS);
        let n = self.instances.max(1) as f64;
        let mut out = BTreeMap::new();
        for (id, name) in self.names.into_iter().enumerate() {
            let mut avg = [0.0; Tag::COUNT];
            for k in 0..Tag::COUNT {
                let total = self.totals[id][k] + (self.instances - self.stamps[id][k]) as f64 * self.weights[id][k];
                avg[k] = (total / n * scale).round() / scale + 0.0;
            }
            if avg.iter().any(|&w| w != 0.0) {
                out.insert(name, avg);
            }
        }
        out
    }
}

/// Train an averaged perceptron. Deterministic for a fixed corpus and seed.
pub fn train_tagger(corpus: &[TaggedSentence], cfg: &TrainConfig) -> Result<TaggerModel> {
    if corpus.iter().all(|s| s.tokens.is_empty()) {
        return Err(Error::Empty("tagged corpus".into()));
    }
    if let Some(s) = corpus.iter().find(|s| s.tokens.len() != s.tags.len()) {
        return Err(Error::InvalidParameter(format!(
            "sentence with {} tokens and {} tags",
            s.tokens.len(),
            s.tags.len()
        )));
    }

    let mut counts: HashMap<&str, [usize; Tag::COUNT]> = HashMap::new();
    for s in corpus {
        for (tok, tag) in s.tokens.iter().zip(&s.tags) {
            counts.entry(tok.as_str()).or_default()[tag.index()] += 1;
        }
    }
    let tag_dict: BTreeMap<String, Tag> = counts
        .iter()
        .filter_map(|(w, c)| {
            let total: usize = c.iter().sum();
            let distinct = c.iter().filter(|&&n| n > 0).count();
            (total >= cfg.dict_min_count && distinct == 1)
                .then(|| (w.to_string(), Tag::ALL[c.iter().position(|&n| n > 0).unwrap()]))
        })
        .collect();

    let mut p = Perceptron::new();
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut feats: Vec<String> = Vec::with_capacity(32);
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &si in &order {
            let sent = &corpus[si];
            let ctx = context(&sent.tokens);
            let (mut prev, mut prev2) = (START[0], START[1]);
            for (i, (tok, &truth)) in sent.tokens.iter().zip(&sent.tags).enumerate() {
                let guess = match tag_dict.get(tok.as_str()) {
                    Some(&t) => t,
                    None => {
                        feats.clear();
                        for_each_feature(&ctx, i, prev, prev2, |f| feats.push(f.to_string()));
                        let mut scores = [0.0; Tag::COUNT];
                        for f in &feats {
                            if let Some(&id) = p.ids.get(f.as_str()) {
                                for k in 0..Tag::COUNT {
                                    scores[k] += p.weights[id][k];
                                }
                            }
                        }
                        let guess = argmax(&scores);
                        p.instances += 1;
                        if guess != truth {
                            for f in &feats {
                                let id = p.id_or_insert(f);
                                p.bump(id, truth.index(), 1.0);
                                p.bump(id, guess.index(), -1.0);
                            }
                        }
                        guess
                    }
                };
                prev2 = prev;
                prev = guess.as_str();
            }
        }
    }
    Ok(TaggerModel::from_parts(tag_dict, p.averaged()))
}

/// Token-level accuracy of `model` against gold tags.
pub fn tagging_accuracy(model: &TaggerModel, gold: &[TaggedSentence]) -> f64 {
    let (mut right, mut total) = (0usize, 0usize);
    for s in gold {
        let pred = model.tag(&s.tokens);
        right += pred.iter().zip(&s.tags).filter(|(a, b)| a == b).count();
        total += s.tags.len();
    }
    if total == 0 {
        0.0
    } else {
        right as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sent(s: &str) -> TaggedSentence {
        read_tagged_corpus(s.as_bytes(), "t").unwrap().remove(0)
    }

    #[test]
    fn parses_token_tag_format() {
        let s = sent("a_OTHER bird_NOUN in_ADP a_OTHER tree_NOUN");
        assert_eq!(s.tokens, ["a", "bird", "in", "a", "tree"]);
        assert_eq!(s.tags[1], Tag::Noun);
        let err = read_tagged_corpus("a_OTHER bird".as_bytes(), "t.txt").unwrap_err();
        assert!(err.to_string().contains("row 1"));
        assert!(read_tagged_corpus("a_FOO".as_bytes(), "t.txt").is_err());
        // Underscores inside the token survive; the tag is after the last one.
        assert_eq!(sent("snake_case_NOUN").tokens, ["snake_case"]);
    }

    #[test]
    fn memorizes_a_single_sentence() {
        let s = sent("the_OTHER old_ADJ man_NOUN sat_VERB on_ADP his_PRON chair_NOUN");
        let model = train_tagger(std::slice::from_ref(&s), &TrainConfig::default()).unwrap();
        assert_eq!(model.tag(&s.tokens), s.tags);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(train_tagger(&[], &TrainConfig::default()).is_err());
    }

    #[test]
    fn training_is_bit_identical_for_fixed_seed() {
        let corpus = read_tagged_corpus(
            "the_OTHER dog_NOUN runs_VERB\na_OTHER red_ADJ bird_NOUN sings_VERB\nshe_PRON sees_VERB the_OTHER bird_NOUN in_ADP a_OTHER tree_NOUN\n"
                .as_bytes(),
            "t",
        )
        .unwrap();
        let cfg = TrainConfig { epochs: 4, seed: 11, dict_min_count: 2 };
        let a = train_tagger(&corpus, &cfg).unwrap();
        let b = train_tagger(&corpus, &cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let back = TaggerModel::from_json(&a.to_json().unwrap()).unwrap();
        assert_eq!(a, back);
        // "the" occurs twice with one tag.
        assert_eq!(a.tag_dict().get("the"), Some(&Tag::Other));
    }

    #[test]
    fn dictionary_words_ignore_context() {
        let mut dict = BTreeMap::new();
        dict.insert("run".to_string(), Tag::Noun);
        let model = TaggerModel::from_parts(dict, BTreeMap::new());
        let toks: Vec<String> = ["they", "run", "fast"].iter().map(|s| s.to_string()).collect();
        assert_eq!(model.tag(&toks)[1], Tag::Noun);
        assert!(model.tag(&[]).is_empty());
    }

    #[test]
    fn affixes_count_chars() {
        assert_eq!(suffix("café", 2), "fé");
        assert_eq!(prefix("ab", 3), "ab");
        assert_eq!(suffix("ab", 3), "ab");
    }

    #[test]
    fn rejects_foreign_model_versions() {
        let bad = br#"{"version":"other/9","tags":["NOUN","PRON","ADJ","ADP","VERB","OTHER"],"tag_dict":{},"weights":{}}"#;
        assert!(TaggerModel::from_json(bad).is_err());
    }
}
