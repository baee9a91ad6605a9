//! Sentiment injection: insert a polar adjective in front of a caption noun.

use rand::Rng;
use serde::Serialize;

use crate::emotion::{Emotion, EmotionDistribution, Polarity, SentimentGroup};
use crate::lexicons::{AnpEntry, AnpLexicon};
use crate::textproc::{Tag, TokenizedUtterance};

/// Sentiment of the argmax emotion; something-else is settled by a fair coin.
pub fn resolve_sentiment<R: Rng + ?Sized>(dist: &EmotionDistribution, rng: &mut R) -> Polarity {
    resolve_emotion(dist.argmax(), rng)
}

pub fn resolve_emotion<R: Rng + ?Sized>(e: Emotion, rng: &mut R) -> Polarity {
    match e.sentiment_group() {
        SentimentGroup::Positive => Polarity::Positive,
        SentimentGroup::Negative => Polarity::Negative,
        SentimentGroup::Other => {
            if rng.random_bool(0.5) {
                Polarity::Positive
            } else {
                Polarity::Negative
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectionResult {
    pub tokens: Vec<String>,
    pub utterance: String,
    pub injected: bool,
    /// Chosen `(adjective, noun)` when injected.
    pub anp: Option<(String, String)>,
    /// Index of the inserted adjective in `tokens`.
    pub position: Option<usize>,
    pub sentiment: Polarity,
}

/// Highest-frequency entry; ties go to the lexicographically smallest adjective.
fn best_entry<'a>(lex: &'a AnpLexicon, noun: &'a str, target: Polarity) -> Option<&'a AnpEntry> {
    lex.for_noun(noun, target)
        .min_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.adjective.cmp(&b.adjective)))
}

/// Insert the adjective of the most frequent target-sentiment ANP before one
/// noun chosen uniformly among the caption's eligible nouns. A noun is eligible
/// when its token, or failing that its lemma, is the noun of such an ANP.
pub fn inject_anp<R: Rng + ?Sized>(
    caption: &TokenizedUtterance,
    target: Polarity,
    lex: &AnpLexicon,
    rng: &mut R,
) -> InjectionResult {
    let tokens = caption.tokens();
    let unchanged = || InjectionResult {
        tokens: tokens.to_vec(),
        utterance: tokens.join(" "),
        injected: false,
        anp: None,
        position: None,
        sentiment: target,
    };
    let candidates: Vec<(usize, &AnpEntry)> = (0..tokens.len())
        .filter(|&i| caption.tags()[i] == Tag::Noun)
        .filter_map(|i| {
            best_entry(lex, &tokens[i], target)
                .or_else(|| best_entry(lex, &caption.lemmas()[i], target))
                .map(|e| (i, e))
        })
        .collect();
    if candidates.is_empty() {
        return unchanged();
    }
    let (pos, entry) = candidates[rng.random_range(0..candidates.len())];
    if pos > 0 && tokens[pos - 1] == entry.adjective {
        return unchanged();
    }
    let mut out = tokens.to_vec();
    out.insert(pos, entry.adjective.clone());
    InjectionResult {
        utterance: out.join(" "),
        tokens: out,
        injected: true,
        anp: Some((entry.adjective.clone(), entry.noun.clone())),
        position: Some(pos),
        sentiment: target,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::Lemmatizer;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn entry(a: &str, n: &str, s: Polarity, f: u64) -> AnpEntry {
        AnpEntry {
            adjective: a.into(),
            noun: n.into(),
            sentiment: s,
            frequency: f,
        }
    }

    fn lexicon() -> AnpLexicon {
        AnpLexicon::from_entries(vec![
            entry("beautiful", "bird", Polarity::Positive, 10),
            entry("dead", "bird", Polarity::Negative, 7),
        ])
    }

    fn caption(words: &[(&str, Tag)]) -> TokenizedUtterance {
        TokenizedUtterance::from_tagged(
            words.iter().map(|w| w.0.to_string()).collect(),
            words.iter().map(|w| w.1).collect(),
            Lemmatizer::bundled(),
        )
        .unwrap()
    }

    fn bird_on_tree() -> TokenizedUtterance {
        caption(&[
            ("a", Tag::Other),
            ("bird", Tag::Noun),
            ("on", Tag::Adp),
            ("a", Tag::Other),
            ("tree", Tag::Noun),
        ])
    }

    #[test]
    fn resolves_by_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d = |e| EmotionDistribution::one_hot(e);
        assert_eq!(resolve_sentiment(&d(Emotion::Contentment), &mut rng), Polarity::Positive);
        assert_eq!(resolve_sentiment(&d(Emotion::Fear), &mut rng), Polarity::Negative);
    }

    #[test]
    fn coin_flip_is_fair_and_seeded() {
        let se = EmotionDistribution::one_hot(Emotion::SomethingElse);
        let draw = |s| resolve_sentiment(&se, &mut ChaCha8Rng::seed_from_u64(s));
        assert_eq!(draw(42), draw(42));
        let pos = (0..10_000u64).filter(|&s| draw(s) == Polarity::Positive).count();
        let frac = pos as f64 / 10_000.0;
        assert!((frac - 0.5).abs() <= 0.02, "{frac}");
    }

    #[test]
    fn injects_target_adjective() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = inject_anp(&bird_on_tree(), Polarity::Positive, &lexicon(), &mut rng);
        assert_eq!(r.utterance, "a beautiful bird on a tree");
        assert!(r.injected);
        assert_eq!(r.anp, Some(("beautiful".into(), "bird".into())));
        let r = inject_anp(&bird_on_tree(), Polarity::Negative, &lexicon(), &mut rng);
        assert_eq!(r.utterance, "a dead bird on a tree");
        assert_eq!(r.position, Some(1));
    }

    #[test]
    fn no_candidate_leaves_caption() {
        let c = caption(&[("red", Tag::Adj), ("and", Tag::Other), ("blue", Tag::Adj), ("shapes", Tag::Noun)]);
        let r = inject_anp(&c, Polarity::Positive, &lexicon(), &mut ChaCha8Rng::seed_from_u64(0));
        assert!(!r.injected);
        assert_eq!(r.utterance, "red and blue shapes");
        assert_eq!(r.anp, None);
    }

    #[test]
    fn duplicate_adjective_guard() {
        let c = caption(&[("a", Tag::Other), ("beautiful", Tag::Adj), ("bird", Tag::Noun)]);
        let r = inject_anp(&c, Polarity::Positive, &lexicon(), &mut ChaCha8Rng::seed_from_u64(0));
        assert!(!r.injected);
        assert_eq!(r.tokens, c.tokens());
    }

    #[test]
    fn frequency_then_lexicographic_choice() {
        let lex = AnpLexicon::from_entries(vec![
            entry("pretty", "sky", Polarity::Positive, 3),
            entry("bright", "sky", Polarity::Positive, 5),
            entry("clear", "sky", Polarity::Positive, 5),
        ]);
        let c = caption(&[("the", Tag::Other), ("sky", Tag::Noun)]);
        let r = inject_anp(&c, Polarity::Positive, &lex, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(r.utterance, "the bright sky");
    }

    #[test]
    fn plural_noun_matches_through_lemma() {
        let c = caption(&[("two", Tag::Other), ("birds", Tag::Noun)]);
        let r = inject_anp(&c, Polarity::Negative, &lexicon(), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(r.utterance, "two dead birds");
    }
}
