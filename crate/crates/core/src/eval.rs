//! Caption evaluation: BLEU, ROUGE-L, METEOR, LCS novelty, emotional alignment,
//! simile rate, and the image-level emotion prediction protocol.
//!
//! All text metrics are word-level over [`tokenize`] output.

use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rust_stemmers::{Algorithm, Stemmer};
use serde::Serialize;

use crate::affect::detect_simile;
use crate::analytics::strict_majority;
use crate::classifier::EmotionPredictor;
use crate::corpus::{Corpus, Split};
use crate::emotion::{Emotion, EmotionDistribution};
use crate::error::{Error, Result};
use crate::lexicons::SimileLemmaList;
use crate::textproc::tokenize;

pub const ROUGE_BETA: f64 = 1.2;
pub const METEOR_ALPHA: f64 = 0.9;
pub const METEOR_BETA: f64 = 3.0;
pub const METEOR_GAMMA: f64 = 0.5;
pub const KL_EPSILON: f64 = 1e-8;
pub const DEFAULT_LCS_SUBSAMPLE: usize = 20_000;

/// One generated utterance per artwork id.
pub type GenerationSet = BTreeMap<String, String>;
/// Reference utterances per artwork id.
pub type References = BTreeMap<String, Vec<String>>;

type Tokens = Vec<String>;

// ---------------------------------------------------------------------------
// longest common subsequence

/// Word-level LCS length in O(|a|·|b|) time and O(min(|a|, |b|)) space.
pub fn lcs<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut row = vec![0usize; short.len() + 1];
    for x in long {
        let mut diag = 0;
        for (j, y) in short.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[short.len()]
}

// ---------------------------------------------------------------------------
// pairing generations with references

/// Tokenized `(hypothesis, references)` pairs in artwork-id order.
pub fn pair_up(generations: &GenerationSet, references: &References) -> Result<Vec<(Tokens, Vec<Tokens>)>> {
    if generations.is_empty() {
        return Err(Error::Empty("generation set".into()));
    }
    generations
        .iter()
        .map(|(id, hyp)| {
            let refs = references
                .get(id)
                .filter(|r| !r.is_empty())
                .ok_or_else(|| Error::MissingReferences(id.clone()))?;
            Ok((tokenize(hyp), refs.iter().map(|r| tokenize(r)).collect()))
        })
        .collect()
}

/// Every annotation of each artwork as its references, optionally restricted to one split.
pub fn references_from_corpus(corpus: &Corpus, split: Option<Split>) -> References {
    let mut out = References::new();
    for (i, art) in corpus.artworks().iter().enumerate() {
        if split.is_some() && corpus.split_of(i) != split {
            continue;
        }
        let refs: Vec<String> = corpus.annotations_of(i).map(|a| a.utterance.clone()).collect();
        if !refs.is_empty() {
            out.insert(art.id.clone(), refs);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// BLEU

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut m = HashMap::new();
    if n <= tokens.len() {
        for w in tokens.windows(n) {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

/// Corpus-level BLEU-`n` without smoothing.
pub fn bleu_tokens(pairs: &[(Tokens, Vec<Tokens>)], n: usize) -> Result<f64> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidParameter(format!("BLEU order must be 1..=4, got {n}")));
    }
    let per_pair: Vec<([usize; 4], [usize; 4], usize, usize)> = pairs
        .par_iter()
        .map(|(hyp, refs)| {
            let mut clipped = [0usize; 4];
            let mut total = [0usize; 4];
            for k in 1..=n {
                let h = ngram_counts(hyp, k);
                let mut max_ref: HashMap<&[String], usize> = HashMap::new();
                for r in refs {
                    for (g, c) in ngram_counts(r, k) {
                        let e = max_ref.entry(g).or_insert(0);
                        *e = (*e).max(c);
                    }
                }
                for (g, c) in &h {
                    clipped[k - 1] += (*c).min(max_ref.get(g).copied().unwrap_or(0));
                    total[k - 1] += c;
                }
            }
            let c = hyp.len();
            let r = refs
                .iter()
                .map(|r| r.len())
                .min_by_key(|&len| (len.abs_diff(c), len))
                .unwrap_or(0);
            (clipped, total, c, r)
        })
        .collect();
    let mut clipped = [0usize; 4];
    let mut total = [0usize; 4];
    let (mut c, mut r) = (0usize, 0usize);
    for (cl, to, hc, rc) in per_pair {
        for k in 0..4 {
            clipped[k] += cl[k];
            total[k] += to[k];
        }
        c += hc;
        r += rc;
    }
    if c == 0 || (0..n).any(|k| clipped[k] == 0) {
        return Ok(0.0);
    }
    let log_p: f64 = (0..n).map(|k| (clipped[k] as f64 / total[k] as f64).ln()).sum::<f64>() / n as f64;
    let bp = if c < r { (1.0 - r as f64 / c as f64).exp() } else { 1.0 };
    Ok(bp * log_p.exp())
}

pub fn bleu(generations: &GenerationSet, references: &References, n: usize) -> Result<f64> {
    bleu_tokens(&pair_up(generations, references)?, n)
}

// ---------------------------------------------------------------------------
// ROUGE-L

pub fn rouge_l_pair(hyp: &[String], reference: &[String], beta: f64) -> f64 {
    let l = lcs(hyp, reference);
    if l == 0 {
        return 0.0;
    }
    let p = l as f64 / hyp.len() as f64;
    let r = l as f64 / reference.len() as f64;
    let b2 = beta * beta;
    (1.0 + b2) * p * r / (r + b2 * p)
}

pub fn rouge_l_tokens(pairs: &[(Tokens, Vec<Tokens>)]) -> f64 {
    mean_of_max(pairs, |h, r| rouge_l_pair(h, r, ROUGE_BETA))
}

pub fn rouge_l(generations: &GenerationSet, references: &References) -> Result<f64> {
    Ok(rouge_l_tokens(&pair_up(generations, references)?))
}

fn mean_of_max<F>(pairs: &[(Tokens, Vec<Tokens>)], score: F) -> f64
where
    F: Fn(&[String], &[String]) -> f64 + Sync,
{
    if pairs.is_empty() {
        return 0.0;
    }
    let best: Vec<f64> = pairs
        .par_iter()
        .map(|(h, refs)| refs.iter().map(|r| score(h, r)).fold(0.0, f64::max))
        .collect();
    best.iter().sum::<f64>() / best.len() as f64
}

// ---------------------------------------------------------------------------
// METEOR

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeteorParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for MeteorParams {
    fn default() -> Self {
        MeteorParams {
            alpha: METEOR_ALPHA,
            beta: METEOR_BETA,
            gamma: METEOR_GAMMA,
        }
    }
}

/// Alignment as `(hyp index, ref index)` pairs sorted by hypothesis position.
///
/// Stage one matches identical words, stage two matches equal stems among the
/// words left over. Within a stage each hypothesis word, left to right, takes the
/// leftmost unmatched reference word that qualifies.
pub fn meteor_alignment(hyp: &[String], reference: &[String]) -> Vec<(usize, usize)> {
    let stemmer = Stemmer::create(Algorithm::English);
    let mut used_h = vec![false; hyp.len()];
    let mut used_r = vec![false; reference.len()];
    let mut out = Vec::new();
    let hs: Vec<String> = hyp.iter().map(|w| stemmer.stem(w).into_owned()).collect();
    let rs: Vec<String> = reference.iter().map(|w| stemmer.stem(w).into_owned()).collect();
    for stage in 0..2 {
        for i in 0..hyp.len() {
            if used_h[i] {
                continue;
            }
            let hit = (0..reference.len()).find(|&j| {
                !used_r[j] && if stage == 0 { hyp[i] == reference[j] } else { hs[i] == rs[j] }
            });
            if let Some(j) = hit {
                used_h[i] = true;
                used_r[j] = true;
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of runs of matches contiguous in both hypothesis and reference.
pub fn chunk_count(alignment: &[(usize, usize)]) -> usize {
    if alignment.is_empty() {
        return 0;
    }
    1 + alignment
        .windows(2)
        .filter(|w| !(w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1))
        .count()
}

pub fn meteor_pair(hyp: &[String], reference: &[String], p: MeteorParams) -> f64 {
    let a = meteor_alignment(hyp, reference);
    let m = a.len();
    if m == 0 {
        return 0.0;
    }
    let precision = m as f64 / hyp.len() as f64;
    let recall = m as f64 / reference.len() as f64;
    let fmean = precision * recall / (p.alpha * precision + (1.0 - p.alpha) * recall);
    let penalty = p.gamma * (chunk_count(&a) as f64 / m as f64).powf(p.beta);
    fmean * (1.0 - penalty)
}

pub fn meteor_tokens(pairs: &[(Tokens, Vec<Tokens>)], p: MeteorParams) -> f64 {
    mean_of_max(pairs, |h, r| meteor_pair(h, r, p))
}

pub fn meteor(generations: &GenerationSet, references: &References) -> Result<f64> {
    Ok(meteor_tokens(&pair_up(generations, references)?, MeteorParams::default()))
}

// ---------------------------------------------------------------------------
// novelty

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LcsNovelty {
    pub max_lcs: f64,
    pub mean_lcs: f64,
    pub generations: usize,
    pub sampled: usize,
}

/// Indices of a seeded subsample without replacement, in ascending order.
pub fn subsample_indices(len: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k == 0 || k > len {
        return Err(Error::InvalidParameter(format!("subsample {k} must be in 1..={len}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, len, k).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

pub fn lcs_novelty_tokens(generations: &[Tokens], pool: &[&Tokens]) -> Result<LcsNovelty> {
    if generations.is_empty() {
        return Err(Error::Empty("generation set".into()));
    }
    if pool.is_empty() {
        return Err(Error::Empty("training utterances".into()));
    }
    let per: Vec<(usize, f64)> = generations
        .par_iter()
        .map(|g| {
            let (mut max, mut sum) = (0usize, 0usize);
            for t in pool {
                let l = lcs(g, t);
                max = max.max(l);
                sum += l;
            }
            (max, sum as f64 / pool.len() as f64)
        })
        .collect();
    let n = per.len() as f64;
    Ok(LcsNovelty {
        max_lcs: per.iter().map(|p| p.0 as f64).sum::<f64>() / n,
        mean_lcs: per.iter().map(|p| p.1).sum::<f64>() / n,
        generations: per.len(),
        sampled: pool.len(),
    })
}

pub fn lcs_novelty(generations: &[String], training: &[String], subsample: usize, seed: u64) -> Result<LcsNovelty> {
    if training.is_empty() {
        return Err(Error::Empty("training utterances".into()));
    }
    let gens: Vec<Tokens> = generations.iter().map(|g| tokenize(g)).collect();
    let idx = subsample_indices(training.len(), subsample, seed)?;
    let pool: Vec<Tokens> = idx.par_iter().map(|&i| tokenize(&training[i])).collect();
    let refs: Vec<&Tokens> = pool.iter().collect();
    lcs_novelty_tokens(&gens, &refs)
}

// ---------------------------------------------------------------------------
// emotional alignment and similes

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmoAlign {
    pub value: f64,
    pub qualifying: usize,
}

/// Fraction of generations on strong-majority artworks whose predicted emotion
/// equals the annotators' majority emotion.
pub fn emo_align<P: EmotionPredictor>(generations: &GenerationSet, corpus: &Corpus, predictor: &P) -> Result<EmoAlign> {
    let mut items: Vec<(&str, Emotion)> = Vec::new();
    for (id, text) in generations {
        let idx = corpus
            .artwork_index(id)
            .ok_or_else(|| Error::UnknownArtwork(id.clone()))?;
        if let Some(e) = strict_majority(&corpus.emotion_counts_of(idx)) {
            items.push((text, e));
        }
    }
    if items.is_empty() {
        return Err(Error::Empty("set of strong-majority artworks among the generations".into()));
    }
    let hits: Vec<bool> = items.par_iter().map(|(t, e)| predictor.predict_argmax(t) == *e).collect();
    Ok(EmoAlign {
        value: hits.iter().filter(|&&h| h).count() as f64 / hits.len() as f64,
        qualifying: hits.len(),
    })
}

pub fn similes_percent<'a, I>(generations: I, list: &SimileLemmaList) -> f64
where
    I: IntoIterator<Item = &'a str>,
{
    let (mut hit, mut n) = (0usize, 0usize);
    for g in generations {
        n += 1;
        hit += detect_simile(g, list).is_some() as usize;
    }
    if n == 0 {
        0.0
    } else {
        hit as f64 / n as f64
    }
}

// ---------------------------------------------------------------------------
// image-level predictions

/// KL(p ‖ q) in nats; zero entries of `q` are replaced by [`KL_EPSILON`].
pub fn kl_divergence(p: &EmotionDistribution, q: &EmotionDistribution) -> f64 {
    p.probs()
        .iter()
        .zip(q.probs())
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * (pi / if qi > 0.0 { qi } else { KL_EPSILON }).ln())
        .sum::<f64>()
        .max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImagePredictionEval {
    pub artworks: usize,
    pub mean_kl: f64,
    pub qualifying: usize,
    pub qualifying_fraction: f64,
    pub dominant_accuracy: f64,
}

/// Score per-artwork predicted distributions against the empirical annotation
/// distributions of `artworks` (every annotated artwork when `None`).
pub fn evaluate_image_predictions(
    predictions: &BTreeMap<String, EmotionDistribution>,
    corpus: &Corpus,
    artworks: Option<&[usize]>,
) -> Result<ImagePredictionEval> {
    let all: Vec<usize>;
    let ids = match artworks {
        Some(a) => a,
        None => {
            all = (0..corpus.artworks().len())
                .filter(|&i| corpus.annotation_count_of(i) > 0)
                .collect();
            &all
        }
    };
    if ids.is_empty() {
        return Err(Error::Empty("set of evaluated artworks".into()));
    }
    let (mut kl, mut qualifying, mut correct) = (0.0f64, 0usize, 0usize);
    for &i in ids {
        let id = &corpus.artwork(i).id;
        let pred = predictions
            .get(id)
            .ok_or_else(|| Error::MissingPrediction(id.clone()))?;
        let emp = corpus.empirical_distribution_at(i)?;
        kl += kl_divergence(&emp, pred);
        if let Some(mode) = strict_majority(&corpus.emotion_counts_of(i)) {
            qualifying += 1;
            correct += (pred.argmax() == mode) as usize;
        }
    }
    let n = ids.len();
    Ok(ImagePredictionEval {
        artworks: n,
        mean_kl: kl / n as f64,
        qualifying,
        qualifying_fraction: qualifying as f64 / n as f64,
        dominant_accuracy: if qualifying == 0 { 0.0 } else { correct as f64 / qualifying as f64 },
    })
}

// ---------------------------------------------------------------------------
// input files

#[derive(serde::Deserialize)]
struct GenerationRow {
    painting: String,
    utterance: String,
}

/// CSV with `painting,utterance` columns; one row per artwork.
pub fn read_generations<R: Read>(reader: R, name: &str) -> Result<GenerationSet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::Headers).from_reader(reader);
    let mut out = GenerationSet::new();
    for (i, row) in rdr.deserialize::<GenerationRow>().enumerate() {
        let row_no = i + 2;
        let row = row.map_err(|e| Error::Row {
            file: name.into(),
            row: row_no,
            column: "painting,utterance".into(),
            message: e.to_string(),
        })?;
        if out.insert(row.painting.clone(), row.utterance).is_some() {
            return Err(Error::Row {
                file: name.into(),
                row: row_no,
                column: "painting".into(),
                message: format!("duplicate generation for `{}`", row.painting),
            });
        }
    }
    Ok(out)
}

/// CSV with a `painting` column followed by nine probabilities in fixed emotion order.
pub fn read_predictions<R: Read>(reader: R, name: &str) -> Result<BTreeMap<String, EmotionDistribution>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() != 1 + Emotion::COUNT || headers.get(0).map(str::trim) != Some("painting") {
        return Err(Error::Row {
            file: name.into(),
            row: 1,
            column: "painting".into(),
            message: format!("expected `painting` plus {} probability columns", Emotion::COUNT),
        });
    }
    let mut out = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 2;
        let rec = rec?;
        let mut probs = [0.0; Emotion::COUNT];
        for (k, p) in probs.iter_mut().enumerate() {
            let cell = rec.get(k + 1).unwrap_or("").trim();
            *p = cell.parse().map_err(|_| Error::Row {
                file: name.into(),
                row,
                column: headers.get(k + 1).unwrap_or("").into(),
                message: format!("`{cell}` is not a number"),
            })?;
        }
        let d = EmotionDistribution::new(probs).map_err(|e| Error::Row {
            file: name.into(),
            row,
            column: "probabilities".into(),
            message: e.to_string(),
        })?;
        let id = rec.get(0).unwrap_or("").trim().to_string();
        if out.insert(id.clone(), d).is_some() {
            return Err(Error::Row {
                file: name.into(),
                row,
                column: "painting".into(),
                message: format!("duplicate prediction for `{id}`"),
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// report

pub const METRIC_NAMES: [&str; 10] = [
    "BLEU-1",
    "BLEU-2",
    "BLEU-3",
    "BLEU-4",
    "METEOR",
    "ROUGE-L",
    "max-LCS",
    "mean-LCS",
    "Emo-Align",
    "Similes-percent",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricReport {
    pub metrics: BTreeMap<String, f64>,
    pub counts: BTreeMap<String, usize>,
    pub config: BTreeMap<String, serde_json::Value>,
}

pub struct EvalInputs<'a, P: EmotionPredictor> {
    pub generations: &'a GenerationSet,
    pub references: &'a References,
    pub training: &'a [String],
    pub corpus: &'a Corpus,
    pub predictor: &'a P,
    pub similes: &'a SimileLemmaList,
    pub lcs_subsample: usize,
    pub seed: u64,
}

pub fn metric_report<P: EmotionPredictor>(inp: &EvalInputs<'_, P>) -> Result<MetricReport> {
    let pairs = pair_up(inp.generations, inp.references)?;
    let mut metrics = BTreeMap::new();
    for n in 1..=4 {
        metrics.insert(format!("BLEU-{n}"), bleu_tokens(&pairs, n)?);
    }
    let mp = MeteorParams::default();
    metrics.insert("METEOR".into(), meteor_tokens(&pairs, mp));
    metrics.insert("ROUGE-L".into(), rouge_l_tokens(&pairs));
    let subsample = inp.lcs_subsample.min(inp.training.len());
    let gens: Vec<String> = inp.generations.values().cloned().collect();
    let nov = lcs_novelty(&gens, inp.training, subsample, inp.seed)?;
    metrics.insert("max-LCS".into(), nov.max_lcs);
    metrics.insert("mean-LCS".into(), nov.mean_lcs);
    let ea = emo_align(inp.generations, inp.corpus, inp.predictor)?;
    metrics.insert("Emo-Align".into(), ea.value);
    metrics.insert(
        "Similes-percent".into(),
        similes_percent(inp.generations.values().map(String::as_str), inp.similes),
    );

    let n = pairs.len();
    let mut counts = BTreeMap::new();
    for name in METRIC_NAMES {
        counts.insert(name.to_string(), n);
    }
    counts.insert("Emo-Align".into(), ea.qualifying);
    counts.insert("lcs-sampled".into(), nov.sampled);

    let mut config = BTreeMap::new();
    config.insert("bleu_smoothing".into(), "none".into());
    config.insert("rouge_beta".into(), ROUGE_BETA.into());
    config.insert("meteor_alpha".into(), mp.alpha.into());
    config.insert("meteor_beta".into(), mp.beta.into());
    config.insert("meteor_gamma".into(), mp.gamma.into());
    config.insert("lcs_subsample".into(), subsample.into());
    config.insert("seed".into(), inp.seed.into());
    Ok(MetricReport { metrics, counts, config })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tokens {
        tokenize(s)
    }

    #[test]
    fn lcs_basics() {
        assert_eq!(lcs(&t("a b c d"), &t("a x c")), 2);
        assert_eq!(lcs(&t("a x c"), &t("a b c d")), 2);
        assert_eq!(lcs::<String>(&[], &t("a")), 0);
        assert_eq!(lcs(&t("a b c"), &t("a b c")), 3);
        assert_eq!(lcs(&t("a b c"), &t("c b a")), 1);
    }

    #[test]
    fn bleu_examples() {
        let pairs = vec![(t("the cat"), vec![t("the dog")])];
        assert!((bleu_tokens(&pairs, 1).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(bleu_tokens(&pairs, 2).unwrap(), 0.0);
        let same = vec![(t("a small red bird"), vec![t("a small red bird"), t("x")])];
        for n in 1..=4 {
            assert!((bleu_tokens(&same, n).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(bleu_tokens(&same, 5).is_err());
    }

    #[test]
    fn rouge_examples() {
        assert!((rouge_l_pair(&t("the cat sat"), &t("the cat ran"), ROUGE_BETA) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(rouge_l_pair(&t("a b"), &t("c d"), ROUGE_BETA), 0.0);
    }

    #[test]
    fn meteor_identity_four_words() {
        let s = t("a small red bird");
        assert!((meteor_pair(&s, &s, MeteorParams::default()) - (1.0 - 0.5 / 64.0)).abs() < 1e-12);
    }

    #[test]
    fn meteor_stem_stage() {
        let a = meteor_alignment(&t("birds flying"), &t("bird flies"));
        assert_eq!(a, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn kl_examples() {
        let mut p = [0.0; 9];
        p[0] = 0.6;
        p[1] = 0.4;
        let mut q = [0.0; 9];
        q[0] = 0.5;
        q[1] = 0.5;
        let (p, q) = (EmotionDistribution::new(p).unwrap(), EmotionDistribution::new(q).unwrap());
        let want = 0.6 * (0.6f64 / 0.5).ln() + 0.4 * (0.4f64 / 0.5).ln();
        assert!((kl_divergence(&p, &q) - want).abs() < 1e-12);
        assert!((want - 0.020136).abs() < 1e-6);
        assert_eq!(kl_divergence(&p, &p), 0.0);
        let one = EmotionDistribution::one_hot(Emotion::Awe);
        assert!((kl_divergence(&one, &p) - (1.0 / KL_EPSILON).ln()).abs() < 1e-9);
    }

    #[test]
    fn subsample_is_seeded() {
        let a = subsample_indices(100, 10, 7).unwrap();
        assert_eq!(a, subsample_indices(100, 10, 7).unwrap());
        assert_ne!(a, subsample_indices(100, 10, 8).unwrap());
        assert!(subsample_indices(5, 6, 0).is_err());
        assert!(subsample_indices(5, 0, 0).is_err());
    }

    #[test]
    fn generation_file_parsing() {
        let g = read_generations("painting,utterance\np1,a bird\np2,\"a tree, green\"\n".as_bytes(), "g.csv").unwrap();
        assert_eq!(g["p2"], "a tree, green");
        let err = read_generations("painting,utterance\np1,a\np1,b\n".as_bytes(), "g.csv").unwrap_err();
        assert!(err.to_string().contains("row 3"));
    }

    #[test]
    fn prediction_file_parsing() {
        let head = "painting,anger,disgust,fear,sadness,amusement,awe,contentment,excitement,something-else\n";
        let ok = format!("{head}p1,0,0,0,0,0,1,0,0,0\n");
        let p = read_predictions(ok.as_bytes(), "p.csv").unwrap();
        assert_eq!(p["p1"].argmax(), Emotion::Awe);
        let bad = format!("{head}p1,0,0,0,0,0,0.5,0,0,0\n");
        assert!(read_predictions(bad.as_bytes(), "p.csv").is_err());
    }
}
