//! Corpus-level statistics: caption richness, per-image diversity, emotion
//! histogram, agreement measures and affect distributions.
//!
//! Per-item work runs on the rayon pool; results are collected in corpus order
//! and folded sequentially, so outputs do not depend on the thread count.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::affect::{affect_scores, concreteness, AffectLexicons, AffectScores, SentimentClass};
use crate::corpus::Corpus;
use crate::emotion::{Emotion, SentimentGroup};
use crate::error::{Error, Result};
use crate::textproc::{Tag, TextPipeline, TokenizedUtterance};

/// Tokenize, tag and lemmatize every annotation, in annotation order.
pub fn process_corpus(corpus: &Corpus, pipeline: TextPipeline<'_>) -> Vec<TokenizedUtterance> {
    corpus
        .annotations()
        .par_iter()
        .map(|a| pipeline.process(&a.utterance))
        .collect()
}

/// Per-caption counts of the five counted part-of-speech categories.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PosMeans {
    pub nouns: f64,
    pub pronouns: f64,
    pub adjectives: f64,
    pub adpositions: f64,
    pub verbs: f64,
}

const COUNTED: [Tag; 5] = [Tag::Noun, Tag::Pron, Tag::Adj, Tag::Adp, Tag::Verb];

impl PosMeans {
    fn from_sums(sums: [usize; 5], n: usize) -> Self {
        let d = n.max(1) as f64;
        PosMeans {
            nouns: sums[0] as f64 / d,
            pronouns: sums[1] as f64 / d,
            adjectives: sums[2] as f64 / d,
            adpositions: sums[3] as f64 / d,
            verbs: sums[4] as f64 / d,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.nouns, self.pronouns, self.adjectives, self.adpositions, self.verbs]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CaptionStats {
    pub captions: usize,
    pub mean_words: f64,
    #[serde(flatten)]
    pub pos: PosMeans,
}

/// Means over captions of word count and counted POS categories.
pub fn caption_stats(utterances: &[TokenizedUtterance]) -> CaptionStats {
    let mut words = 0usize;
    let mut sums = [0usize; 5];
    for u in utterances {
        words += u.len();
        for (s, tag) in sums.iter_mut().zip(COUNTED) {
            *s += u.count(tag);
        }
    }
    let n = utterances.len();
    CaptionStats {
        captions: n,
        mean_words: words as f64 / n.max(1) as f64,
        pos: PosMeans::from_sums(sums, n),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ImageDiversityStats {
    pub artworks: usize,
    /// Mean number of distinct lemmas per category over an artwork's captions.
    pub unique: PosMeans,
    /// Same, each artwork's count divided by its caption count before averaging.
    pub normalized: PosMeans,
}

/// Distinct lemmas per counted POS category, pooled over each artwork's captions.
/// `utterances` must be parallel to `corpus.annotations()`.
pub fn image_diversity_stats(corpus: &Corpus, utterances: &[TokenizedUtterance]) -> Result<ImageDiversityStats> {
    if utterances.len() != corpus.annotations().len() {
        return Err(Error::InvalidParameter(format!(
            "{} processed utterances for {} annotations",
            utterances.len(),
            corpus.annotations().len()
        )));
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); corpus.artworks().len()];
    for (i, a) in corpus.annotations().iter().enumerate() {
        members[a.artwork].push(i);
    }
    let per_artwork: Vec<Option<([usize; 5], usize)>> = members
        .par_iter()
        .map(|ids| {
            if ids.is_empty() {
                return None;
            }
            let mut sets: [HashSet<&str>; 5] = Default::default();
            for &i in ids {
                let u = &utterances[i];
                for (lemma, tag) in u.lemmas().iter().zip(u.tags()) {
                    if let Some(k) = COUNTED.iter().position(|t| t == tag) {
                        sets[k].insert(lemma);
                    }
                }
            }
            Some((sets.map(|s| s.len()), ids.len()))
        })
        .collect();

    let mut n = 0usize;
    let mut unique = [0usize; 5];
    let mut normalized = [0.0f64; 5];
    for (counts, captions) in per_artwork.into_iter().flatten() {
        n += 1;
        for k in 0..5 {
            unique[k] += counts[k];
            normalized[k] += counts[k] as f64 / captions as f64;
        }
    }
    let d = n.max(1) as f64;
    Ok(ImageDiversityStats {
        artworks: n,
        unique: PosMeans::from_sums(unique, n),
        normalized: PosMeans {
            nouns: normalized[0] / d,
            pronouns: normalized[1] / d,
            adjectives: normalized[2] / d,
            adpositions: normalized[3] / d,
            verbs: normalized[4] / d,
        },
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmotionHistogram {
    pub total: usize,
    pub counts: BTreeMap<Emotion, usize>,
    pub fractions: BTreeMap<Emotion, f64>,
    pub positive: f64,
    pub negative: f64,
    pub other: f64,
}

impl EmotionHistogram {
    pub fn count(&self, e: Emotion) -> usize {
        self.counts[&e]
    }

    pub fn fraction(&self, e: Emotion) -> f64 {
        self.fractions[&e]
    }
}

pub fn emotion_histogram(corpus: &Corpus) -> Result<EmotionHistogram> {
    let counts = corpus.emotion_counts();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(Error::Empty("corpus".into()));
    }
    let mut group = [0usize; 3];
    for e in Emotion::ALL {
        let g = match e.sentiment_group() {
            SentimentGroup::Positive => 0,
            SentimentGroup::Negative => 1,
            SentimentGroup::Other => 2,
        };
        group[g] += counts[e.index()];
    }
    let t = total as f64;
    Ok(EmotionHistogram {
        total,
        counts: Emotion::ALL.iter().map(|&e| (e, counts[e.index()])).collect(),
        fractions: Emotion::ALL.iter().map(|&e| (e, counts[e.index()] as f64 / t)).collect(),
        positive: group[0] as f64 / t,
        negative: group[1] as f64 / t,
        other: group[2] as f64 / t,
    })
}

fn annotated_artworks(corpus: &Corpus) -> impl Iterator<Item = (usize, [usize; Emotion::COUNT])> + '_ {
    (0..corpus.artworks().len())
        .map(|i| (i, corpus.emotion_counts_of(i)))
        .filter(|(_, c)| c.iter().any(|&n| n > 0))
}

/// Fraction of annotated artworks whose annotations mix sentiment groups:
/// positive and negative both present, or (with `treat_other_as_third`) at least
/// two of positive, negative and something-else present.
pub fn polarity_cooccurrence(corpus: &Corpus, treat_other_as_third: bool) -> f64 {
    let (mut hit, mut n) = (0usize, 0usize);
    for (_, counts) in annotated_artworks(corpus) {
        n += 1;
        let mut present = [false; 3];
        for e in Emotion::ALL {
            if counts[e.index()] > 0 {
                present[match e.sentiment_group() {
                    SentimentGroup::Positive => 0,
                    SentimentGroup::Negative => 1,
                    SentimentGroup::Other => 2,
                }] = true;
            }
        }
        let mixed = if treat_other_as_third {
            present.iter().filter(|&&p| p).count() >= 2
        } else {
            present[0] && present[1]
        };
        hit += mixed as usize;
    }
    if n == 0 {
        0.0
    } else {
        hit as f64 / n as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StrongMajority {
    pub fraction: f64,
    pub annotated_artworks: usize,
    /// Qualifying artwork indices in corpus order.
    pub artworks: Vec<usize>,
    /// Majority emotion of each qualifying artwork.
    pub majority: Vec<Emotion>,
}

/// The emotion holding strictly more than half of `counts`, if any.
pub fn strict_majority(counts: &[usize; Emotion::COUNT]) -> Option<Emotion> {
    let total: usize = counts.iter().sum();
    Emotion::ALL.into_iter().find(|e| 2 * counts[e.index()] > total)
}

pub fn strong_majority_fraction(corpus: &Corpus) -> StrongMajority {
    let mut out = StrongMajority::default();
    for (i, counts) in annotated_artworks(corpus) {
        out.annotated_artworks += 1;
        if let Some(e) = strict_majority(&counts) {
            out.artworks.push(i);
            out.majority.push(e);
        }
    }
    if out.annotated_artworks > 0 {
        out.fraction = out.artworks.len() as f64 / out.annotated_artworks as f64;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupBy {
    Genre,
    ArtStyle,
}

impl std::str::FromStr for GroupBy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "genre" => Ok(GroupBy::Genre),
            "art_style" | "style" => Ok(GroupBy::ArtStyle),
            _ => Err(Error::InvalidParameter(format!("unknown grouping `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GroupEntropy {
    pub artworks: usize,
    pub mean_entropy_bits: f64,
}

/// Mean per-artwork emotion entropy (bits) within each group. Artworks without
/// the grouping field or without annotations are skipped.
pub fn genre_entropy(corpus: &Corpus, group_by: GroupBy) -> Result<BTreeMap<String, GroupEntropy>> {
    let mut acc: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for (i, counts) in annotated_artworks(corpus) {
        let art = corpus.artwork(i);
        let key = match group_by {
            GroupBy::Genre => art.genre.as_deref(),
            GroupBy::ArtStyle => Some(art.art_style.as_str()).filter(|s| !s.is_empty()),
        };
        let Some(key) = key else { continue };
        let h = crate::emotion::EmotionDistribution::from_counts(&counts)
            .map(|d| d.entropy_bits())
            .unwrap_or(0.0);
        let slot = acc.entry(key.to_string()).or_default();
        slot.0 += 1;
        slot.1 += h;
    }
    if acc.is_empty() {
        return Err(Error::Empty(format!("{group_by:?} metadata")));
    }
    Ok(acc
        .into_iter()
        .map(|(k, (n, sum))| {
            (
                k,
                GroupEntropy {
                    artworks: n,
                    mean_entropy_bits: sum / n as f64,
                },
            )
        })
        .collect())
}

/// Emotion entropy (bits) of every annotated artwork, in corpus order.
pub fn artwork_entropies(corpus: &Corpus) -> Vec<(usize, f64)> {
    annotated_artworks(corpus)
        .map(|(i, c)| {
            let h = crate::emotion::EmotionDistribution::from_counts(&c)
                .map(|d| d.entropy_bits())
                .unwrap_or(0.0);
            (i, h)
        })
        .collect()
}

// ---------------------------------------------------------------------------

/// Fixed-width bins over `[lo, hi]`; the top edge falls in the last bin and
/// out-of-range values are clamped into the end bins.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Histogram {
            lo,
            hi,
            counts: vec![0; bins],
        }
    }

    pub fn add(&mut self, x: f64) {
        let n = self.counts.len();
        let k = ((x - self.lo) / (self.hi - self.lo) * n as f64).floor();
        let k = if k.is_nan() { 0 } else { (k.max(0.0) as usize).min(n - 1) };
        self.counts[k] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn bin_edges(&self, k: usize) -> (f64, f64) {
        let n = self.counts.len() as f64;
        let at = |j: usize| self.lo + (self.hi - self.lo) * j as f64 / n;
        (at(k), at(k + 1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffectDistributions {
    pub utterances: usize,
    /// Over every lexicon-covered word.
    pub concreteness: Histogram,
    pub covered_words: usize,
    pub mean_concreteness: Option<f64>,
    pub subjectivity: Histogram,
    pub mean_subjectivity: f64,
    pub sentiment: Histogram,
    pub mean_compound: f64,
    pub neutral_fraction: f64,
    pub positive_fraction: f64,
    pub negative_fraction: f64,
    pub simile_prevalence: f64,
}

/// Per-utterance affect scores in annotation order.
pub fn score_utterances(
    corpus: &Corpus,
    utterances: &[TokenizedUtterance],
    lex: AffectLexicons<'_>,
) -> Vec<AffectScores> {
    corpus
        .annotations()
        .par_iter()
        .zip(utterances.par_iter())
        .map(|(a, u)| affect_scores(&a.utterance, u, lex))
        .collect()
}

pub fn affect_distributions(
    utterances: &[TokenizedUtterance],
    scores: &[AffectScores],
    lex: AffectLexicons<'_>,
) -> AffectDistributions {
    let per_word: Vec<Vec<f64>> = utterances
        .par_iter()
        .map(|u| concreteness(u, lex.concreteness).per_word.into_iter().flatten().collect())
        .collect();
    let mut conc = Histogram::new(1.0, 5.0, 20);
    let (mut covered, mut conc_sum) = (0usize, 0.0f64);
    for r in per_word.iter().flatten() {
        conc.add(*r);
        covered += 1;
        conc_sum += r;
    }
    let mut subj = Histogram::new(0.0, 1.0, 20);
    let mut sent = Histogram::new(-1.0, 1.0, 40);
    let (mut subj_sum, mut comp_sum) = (0.0f64, 0.0f64);
    let mut classes = [0usize; 3];
    let mut similes = 0usize;
    for s in scores {
        subj.add(s.subjectivity);
        subj_sum += s.subjectivity;
        sent.add(s.sentiment_compound);
        comp_sum += s.sentiment_compound;
        classes[match s.sentiment_class {
            SentimentClass::Positive => 0,
            SentimentClass::Negative => 1,
            SentimentClass::Neutral => 2,
        }] += 1;
        similes += s.has_simile as usize;
    }
    let n = scores.len();
    let d = n.max(1) as f64;
    AffectDistributions {
        utterances: n,
        concreteness: conc,
        covered_words: covered,
        mean_concreteness: (covered > 0).then(|| conc_sum / covered as f64),
        subjectivity: subj,
        mean_subjectivity: subj_sum / d,
        sentiment: sent,
        mean_compound: comp_sum / d,
        positive_fraction: classes[0] as f64 / d,
        negative_fraction: classes[1] as f64 / d,
        neutral_fraction: classes[2] as f64 / d,
        simile_prevalence: similes as f64 / d,
    }
}
