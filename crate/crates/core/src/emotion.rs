//! The nine-way emotion taxonomy and distributions over it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the eight listed emotions or the catch-all `something-else`.
///
/// Declaration order is the fixed emotion order used for probability
/// columns, confusion matrices and argmax tie-breaking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Emotion {
    Anger,
    Disgust,
    Fear,
    Sadness,
    Amusement,
    Awe,
    Contentment,
    Excitement,
    SomethingElse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentGroup {
    Positive,
    Negative,
    Other,
}

/// Two-valued sentiment used as an injection target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Emotion {
    pub const COUNT: usize = 9;

    pub const ALL: [Emotion; Emotion::COUNT] = [
        Emotion::Anger,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Sadness,
        Emotion::Amusement,
        Emotion::Awe,
        Emotion::Contentment,
        Emotion::Excitement,
        Emotion::SomethingElse,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Emotion> {
        Emotion::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Amusement => "amusement",
            Emotion::Awe => "awe",
            Emotion::Contentment => "contentment",
            Emotion::Excitement => "excitement",
            Emotion::Anger => "anger",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Sadness => "sadness",
            Emotion::SomethingElse => "something-else",
        }
    }

    pub fn sentiment_group(self) -> SentimentGroup {
        match self {
            Emotion::Amusement | Emotion::Awe | Emotion::Contentment | Emotion::Excitement => {
                SentimentGroup::Positive
            }
            Emotion::Anger | Emotion::Disgust | Emotion::Fear | Emotion::Sadness => {
                SentimentGroup::Negative
            }
            Emotion::SomethingElse => SentimentGroup::Other,
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Emotion {
    type Err = Error;

    /// Case-insensitive. The release spells the ninth option "something else";
    /// the hyphenated and underscored forms are accepted too.
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .map(|c| match c {
                '-' | '_' => ' ',
                c => c.to_ascii_lowercase(),
            })
            .collect();
        let e = match norm.as_str() {
            "amusement" => Emotion::Amusement,
            "awe" => Emotion::Awe,
            "contentment" => Emotion::Contentment,
            "excitement" => Emotion::Excitement,
            "anger" => Emotion::Anger,
            "disgust" => Emotion::Disgust,
            "fear" => Emotion::Fear,
            "sadness" => Emotion::Sadness,
            "something else" | "somethingelse" => Emotion::SomethingElse,
            _ => return Err(Error::UnknownEmotion(s.to_string())),
        };
        Ok(e)
    }
}

impl TryFrom<String> for Emotion {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Emotion> for String {
    fn from(e: Emotion) -> String {
        e.as_str().to_string()
    }
}

impl fmt::Display for SentimentGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SentimentGroup::Positive => "positive",
            SentimentGroup::Negative => "negative",
            SentimentGroup::Other => "something-else",
        })
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "POSITIVE",
            Polarity::Negative => "NEGATIVE",
        })
    }
}

impl FromStr for Polarity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "POSITIVE" | "POS" => Ok(Polarity::Positive),
            "NEGATIVE" | "NEG" => Ok(Polarity::Negative),
            _ => Err(Error::InvalidParameter(format!("unknown sentiment `{s}`"))),
        }
    }
}

const SUM_TOLERANCE: f64 = 1e-9;

/// A probability distribution over the nine emotions, indexed by [`Emotion::index`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 9]", into = "[f64; 9]")]
pub struct EmotionDistribution {
    probs: [f64; Emotion::COUNT],
}

impl TryFrom<[f64; Emotion::COUNT]> for EmotionDistribution {
    type Error = Error;
    fn try_from(probs: [f64; Emotion::COUNT]) -> Result<Self> {
        EmotionDistribution::new(probs)
    }
}

impl From<EmotionDistribution> for [f64; Emotion::COUNT] {
    fn from(d: EmotionDistribution) -> Self {
        d.probs
    }
}

impl EmotionDistribution {
    pub fn new(probs: [f64; Emotion::COUNT]) -> Result<Self> {
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("component {p} is negative or not finite")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("components sum to {sum}")));
        }
        Ok(EmotionDistribution { probs })
    }

    /// Normalize raw non-negative counts.
    pub fn from_counts(counts: &[usize; Emotion::COUNT]) -> Option<Self> {
        let total: usize = counts.iter().sum();
        if total == 0 {
            return None;
        }
        let mut probs = [0.0; Emotion::COUNT];
        for (p, &c) in probs.iter_mut().zip(counts) {
            *p = c as f64 / total as f64;
        }
        Some(EmotionDistribution { probs })
    }

    pub fn uniform() -> Self {
        EmotionDistribution {
            probs: [1.0 / Emotion::COUNT as f64; Emotion::COUNT],
        }
    }

    pub fn one_hot(e: Emotion) -> Self {
        let mut probs = [0.0; Emotion::COUNT];
        probs[e.index()] = 1.0;
        EmotionDistribution { probs }
    }

    pub fn probs(&self) -> &[f64; Emotion::COUNT] {
        &self.probs
    }

    pub fn prob(&self, e: Emotion) -> f64 {
        self.probs[e.index()]
    }

    /// Highest-probability emotion; ties go to the earliest emotion in the fixed order.
    pub fn argmax(&self) -> Emotion {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate().skip(1) {
            if p > self.probs[best] {
                best = i;
            }
        }
        Emotion::ALL[best]
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum::<f64>()
            .max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_deserialization_validates() {
        let d: EmotionDistribution = serde_json::from_str("[0.5,0,0,0,0,0.5,0,0,0]").unwrap();
        assert_eq!(d.argmax(), Emotion::Anger);
        assert!(serde_json::from_str::<EmotionDistribution>("[0.5,0,0,0,0,0.6,0,0,0]").is_err());
        assert!(serde_json::from_str::<EmotionDistribution>("[1.5,-0.5,0,0,0,0,0,0,0]").is_err());
    }

    #[test]
    fn nine_distinct_values_round_trip_case_insensitively() {
        let mut seen = std::collections::HashSet::new();
        for e in Emotion::ALL {
            assert!(seen.insert(e));
            assert_eq!(e.as_str().parse::<Emotion>().unwrap(), e);
            assert_eq!(e.as_str().to_uppercase().parse::<Emotion>().unwrap(), e);
        }
        assert_eq!(seen.len(), 9);
        assert_eq!("Something Else".parse::<Emotion>().unwrap(), Emotion::SomethingElse);
    }

    #[test]
    fn unknown_emotion_names_the_string() {
        let err = "joy".parse::<Emotion>().unwrap_err();
        assert!(err.to_string().contains("joy"));
    }

    #[test]
    fn sentiment_groups() {
        use SentimentGroup::*;
        for e in [Emotion::Anger, Emotion::Disgust, Emotion::Fear, Emotion::Sadness] {
            assert_eq!(e.sentiment_group(), Negative);
        }
        for e in [Emotion::Amusement, Emotion::Awe, Emotion::Contentment, Emotion::Excitement] {
            assert_eq!(e.sentiment_group(), Positive);
        }
        assert_eq!(Emotion::SomethingElse.sentiment_group(), Other);
    }

    #[test]
    fn distribution_validation() {
        assert!(EmotionDistribution::new([0.5, 0.5, 0., 0., 0., 0., 0., 0., 0.]).is_ok());
        assert!(EmotionDistribution::new([0.5, 0.4, 0., 0., 0., 0., 0., 0., 0.]).is_err());
        assert!(EmotionDistribution::new([1.5, -0.5, 0., 0., 0., 0., 0., 0., 0.]).is_err());
    }

    #[test]
    fn argmax_ties_take_fixed_order() {
        let d = EmotionDistribution::uniform();
        assert_eq!(d.argmax(), Emotion::Anger);
        let mut c = [0usize; 9];
        c[Emotion::Fear.index()] = 2;
        c[Emotion::Awe.index()] = 2;
        assert_eq!(EmotionDistribution::from_counts(&c).unwrap().argmax(), Emotion::Fear);
    }

    #[test]
    fn entropy_extremes() {
        assert_eq!(EmotionDistribution::one_hot(Emotion::Fear).entropy_bits(), 0.0);
        assert!((EmotionDistribution::uniform().entropy_bits() - 9f64.log2()).abs() < 1e-12);
    }
}
