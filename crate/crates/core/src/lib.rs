//! Emotion-caption corpus analytics and evaluation.

pub mod affect;
pub mod analytics;
pub mod anp;
pub mod classifier;
pub mod corpus;
pub mod emotion;
pub mod eval;
pub mod error;
pub mod lexicons;
pub mod report;
pub mod textproc;

pub use corpus::{Corpus, CorpusFormat, Split};
pub use emotion::{Emotion, EmotionDistribution, Polarity, SentimentGroup};
pub use error::{Error, Result};
