use emocap::affect::{sentiment, SentimentClass};
use emocap::lexicons::SentimentLexicon;
use proptest::prelude::*;

const GOLDEN: &str = include_str!("fixtures/sentiment_golden.tsv");

fn golden() -> Vec<(f64, &'static str)> {
    GOLDEN
        .lines()
        .skip(1)
        .map(|l| {
            let (c, s) = l.split_once('\t').unwrap();
            (c.parse().unwrap(), s)
        })
        .collect()
}

#[test]
fn fifty_sentences_match_reference_within_1e4() {
    let lex = SentimentLexicon::bundled();
    let rows = golden();
    assert_eq!(rows.len(), 50);
    let mut worst = 0.0f64;
    for (want, text) in rows {
        let got = sentiment(text, lex).compound;
        let d = (got - want).abs();
        worst = worst.max(d);
        assert!(d <= 1e-4, "{text:?}: got {got}, reference {want}");
    }
    eprintln!("max |delta| = {worst:e}");
}

#[test]
fn reference_example_sign() {
    let s = sentiment("the painting is beautiful", SentimentLexicon::bundled());
    assert!(s.compound > 0.05);
    assert_eq!(s.class, SentimentClass::Positive);
}

/// Words whose handling is sign-symmetric. Excluded: idiom and bigram-booster
/// parts, capitals, and "no", whose rule can zero a valence that a booster then
/// shifts by a sign-independent amount.
const VOCAB: &[&str] = &[
    "the", "a", "painting", "sky", "is", "looks", "and", "of", "beautiful", "sad", "happy", "dark", "calm",
    "horrible", "lovely", "angry", "very", "extremely", "barely", "slightly", "not", "never", "isn't",
    "but", "least", "at", "so", "this", "nor", "or", "without", "doubt", "!", "?", "love", "hate",
];

proptest! {
    #[test]
    fn compound_is_antisymmetric_under_lexicon_negation(
        idx in prop::collection::vec(0..VOCAB.len(), 0..14),
        bang in 0usize..6,
        qm in 0usize..5,
    ) {
        let lex = SentimentLexicon::bundled();
        let neg = lex.negated();
        let mut text = idx.iter().map(|&i| VOCAB[i]).collect::<Vec<_>>().join(" ");
        text.push_str(&"!".repeat(bang));
        text.push_str(&"?".repeat(qm));
        let a = sentiment(&text, lex).compound;
        let b = sentiment(&text, &neg).compound;
        prop_assert!((a + b).abs() < 1e-12, "{text:?}: {a} vs {b}");
    }
}
