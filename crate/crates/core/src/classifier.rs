//! Multinomial naive Bayes over word n-grams for the nine-way emotion task.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::emotion::{Emotion, EmotionDistribution, SentimentGroup};
use crate::error::{Error, Result};
use crate::textproc::tokenize;

pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_ORDERS: [usize; 2] = [1, 2];

/// Anything that maps an utterance to an emotion distribution.
pub trait EmotionPredictor: Sync {
    fn predict(&self, utterance: &str) -> EmotionDistribution;

    fn predict_argmax(&self, utterance: &str) -> Emotion {
        self.predict(utterance).argmax()
    }
}

/// All n-grams of the given orders, joined with single spaces.
pub fn ngrams(tokens: &[String], orders: &BTreeSet<usize>) -> Vec<String> {
    let mut out = Vec::new();
    for &n in orders {
        if n == 0 || n > tokens.len() {
            continue;
        }
        out.extend(tokens.windows(n).map(|w| w.join(" ")));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NbModel {
    alpha: f64,
    orders: BTreeSet<usize>,
    /// `None` marks a class absent from training (probability zero).
    log_priors: [Option<f64>; Emotion::COUNT],
    log_likelihoods: BTreeMap<String, [f64; Emotion::COUNT]>,
}

impl NbModel {
    /// Train on `(utterance, label)` pairs.
    pub fn train<'a, I>(docs: I, alpha: f64, orders: &BTreeSet<usize>) -> Result<NbModel>
    where
        I: IntoIterator<Item = (&'a str, Emotion)>,
    {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::InvalidParameter("n-gram orders must be a non-empty set of positive integers".into()));
        }
        let mut doc_counts = [0u64; Emotion::COUNT];
        let mut counts: HashMap<String, [u64; Emotion::COUNT]> = HashMap::new();
        let mut totals = [0u64; Emotion::COUNT];
        for (text, label) in docs {
            let c = label.index();
            doc_counts[c] += 1;
            for g in ngrams(&tokenize(text), orders) {
                counts.entry(g).or_default()[c] += 1;
                totals[c] += 1;
            }
        }
        let n_docs: u64 = doc_counts.iter().sum();
        if n_docs == 0 {
            return Err(Error::Empty("training split".into()));
        }
        let v = counts.len() as f64;
        let log_priors = doc_counts.map(|d| (d > 0).then(|| (d as f64 / n_docs as f64).ln()));
        let denom = totals.map(|t| (t as f64 + alpha * v).ln());
        let log_likelihoods = counts
            .into_iter()
            .map(|(g, cs)| {
                let mut ll = [0.0; Emotion::COUNT];
                for k in 0..Emotion::COUNT {
                    ll[k] = (cs[k] as f64 + alpha).ln() - denom[k];
                }
                (g, ll)
            })
            .collect();
        Ok(NbModel {
            alpha,
            orders: orders.clone(),
            log_priors,
            log_likelihoods,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn orders(&self) -> &BTreeSet<usize> {
        &self.orders
    }

    pub fn vocabulary_size(&self) -> usize {
        self.log_likelihoods.len()
    }

    pub fn priors(&self) -> EmotionDistribution {
        let p = self.log_priors.map(|lp| lp.map_or(0.0, f64::exp));
        renormalize(p)
    }

    pub fn log_likelihood(&self, ngram: &str) -> Option<&[f64; Emotion::COUNT]> {
        self.log_likelihoods.get(ngram)
    }

    /// Unnormalized log posteriors; absent classes are `-inf`.
    pub fn log_posteriors(&self, utterance: &str) -> [f64; Emotion::COUNT] {
        let mut lp = self.log_priors.map(|p| p.unwrap_or(f64::NEG_INFINITY));
        for g in ngrams(&tokenize(utterance), &self.orders) {
            if let Some(ll) = self.log_likelihoods.get(&g) {
                for (a, b) in lp.iter_mut().zip(ll) {
                    *a += b;
                }
            }
        }
        lp
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&serde_json::to_value(self)?)?)
    }

    pub fn from_json(s: &str) -> Result<NbModel> {
        let m: NbModel = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::InvalidModel("alpha must be positive".into()));
        }
        let s: f64 = self.log_priors.iter().flatten().map(|p| p.exp()).sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidModel(format!("priors sum to {s}")));
        }
        if let Some((g, _)) = self.log_likelihoods.iter().find(|(_, ll)| ll.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidModel(format!("non-finite likelihood for `{g}`")));
        }
        Ok(())
    }
}

fn renormalize(mut p: [f64; Emotion::COUNT]) -> EmotionDistribution {
    let s: f64 = p.iter().sum();
    for x in &mut p {
        *x /= s;
    }
    EmotionDistribution::new(p).expect("normalized")
}

impl EmotionPredictor for NbModel {
    fn predict(&self, utterance: &str) -> EmotionDistribution {
        let lp = self.log_posteriors(utterance);
        let m = lp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        renormalize(lp.map(|x| (x - m).exp()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifierEval {
    pub n: usize,
    pub accuracy: f64,
    /// Rows are gold labels, columns predictions, both in fixed emotion order.
    pub confusion: [[usize; Emotion::COUNT]; Emotion::COUNT],
    /// Items whose gold label is not something-else.
    pub coarse_n: usize,
    pub coarse_accuracy: f64,
    /// Accuracy of always predicting the most frequent gold label.
    pub majority_baseline: f64,
}

/// Collapse an emotion to its sentiment group.
pub fn coarse(e: Emotion) -> SentimentGroup {
    e.sentiment_group()
}

pub fn evaluate_classifier<P: EmotionPredictor>(model: &P, items: &[(&str, Emotion)]) -> Result<ClassifierEval> {
    if items.is_empty() {
        return Err(Error::Empty("test split".into()));
    }
    let preds: Vec<Emotion> = items.par_iter().map(|(t, _)| model.predict_argmax(t)).collect();
    let mut confusion = [[0usize; Emotion::COUNT]; Emotion::COUNT];
    let (mut correct, mut coarse_n, mut coarse_ok) = (0usize, 0usize, 0usize);
    for ((_, gold), pred) in items.iter().zip(&preds) {
        confusion[gold.index()][pred.index()] += 1;
        correct += (gold == pred) as usize;
        if gold.sentiment_group() != SentimentGroup::Other {
            coarse_n += 1;
            coarse_ok += (coarse(*gold) == coarse(*pred)) as usize;
        }
    }
    let n = items.len();
    let majority = confusion.iter().map(|row| row.iter().sum::<usize>()).max().unwrap_or(0);
    Ok(ClassifierEval {
        n,
        accuracy: correct as f64 / n as f64,
        confusion,
        coarse_n,
        coarse_accuracy: if coarse_n == 0 { 0.0 } else { coarse_ok as f64 / coarse_n as f64 },
        majority_baseline: majority as f64 / n as f64,
    })
}
