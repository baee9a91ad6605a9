//! Per-utterance affect scores: concreteness, rule-based sentiment,
//! subjectivity and simile detection.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicons::{simile_words, ConcretenessLexicon, SentimentLexicon, SimileLemmaList, SubjectivityLexicon};
use crate::textproc::{Tag, TokenizedUtterance};

// ---------------------------------------------------------------------------
// Concreteness

#[derive(Clone, Debug, PartialEq)]
pub struct ConcretenessScores {
    /// Rating per token, `None` where neither lemma nor token is in the lexicon.
    pub per_word: Vec<Option<f64>>,
    pub mean: Option<f64>,
    /// Covered content words (NOUN, VERB, ADJ) over all content words.
    pub coverage: f64,
}

fn is_content(tag: Tag) -> bool {
    matches!(tag, Tag::Noun | Tag::Verb | Tag::Adj)
}

pub fn concreteness(utt: &TokenizedUtterance, lex: &ConcretenessLexicon) -> ConcretenessScores {
    let per_word: Vec<Option<f64>> = utt
        .lemmas()
        .iter()
        .zip(utt.tokens())
        .map(|(l, t)| lex.get(l).or_else(|| lex.get(t)))
        .collect();
    let hits: Vec<f64> = per_word.iter().flatten().copied().collect();
    let mean = (!hits.is_empty()).then(|| hits.iter().sum::<f64>() / hits.len() as f64);
    let (mut content, mut covered) = (0usize, 0usize);
    for (r, &tag) in per_word.iter().zip(utt.tags()) {
        if is_content(tag) {
            content += 1;
            covered += r.is_some() as usize;
        }
    }
    let coverage = if content == 0 { 0.0 } else { covered as f64 / content as f64 };
    ConcretenessScores { per_word, mean, coverage }
}

// ---------------------------------------------------------------------------
// Sentiment

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SentimentClass {
    Positive,
    Negative,
    Neutral,
}

impl SentimentClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentClass::Positive => "POSITIVE",
            SentimentClass::Negative => "NEGATIVE",
            SentimentClass::Neutral => "NEUTRAL",
        }
    }
}

impl fmt::Display for SentimentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SentimentScore {
    pub compound: f64,
    pub class: SentimentClass,
}

fn py_space(c: char) -> bool {
    c.is_whitespace() || ('\u{1c}'..='\u{1f}').contains(&c)
}

/// Python `str.isupper`: at least one cased character and no lowercase ones.
fn is_upper(s: &str) -> bool {
    let mut cased = false;
    for c in s.chars() {
        if c.is_lowercase() {
            return false;
        }
        cased |= c.is_uppercase();
    }
    cased
}

fn strip_punc_if_word(token: &str) -> &str {
    let stripped = token.trim_matches(|c: char| c.is_ascii_punctuation());
    if stripped.chars().count() <= 2 {
        token
    } else {
        stripped
    }
}

struct Words<'a> {
    raw: Vec<&'a str>,
    lower: Vec<String>,
    cap_diff: bool,
}

impl<'a> Words<'a> {
    fn new(text: &'a str) -> Self {
        let raw: Vec<&str> = text.split(py_space).filter(|w| !w.is_empty()).map(strip_punc_if_word).collect();
        let lower = raw.iter().map(|w| w.to_lowercase()).collect();
        let caps = raw.iter().filter(|w| is_upper(w)).count();
        let diff = raw.len() - caps;
        Words {
            cap_diff: diff > 0 && diff < raw.len(),
            raw,
            lower,
        }
    }

    fn l(&self, i: usize) -> &str {
        &self.lower[i]
    }
}

struct Scorer<'a> {
    lex: &'a SentimentLexicon,
}

impl Scorer<'_> {
    fn negated(&self, w: &str) -> bool {
        self.lex.rules.negations.iter().any(|n| n == w) || w.contains("n't")
    }

    fn scalar_inc_dec(&self, word: &str, lower: &str, valence: f64, cap_diff: bool) -> f64 {
        let r = &self.lex.rules;
        let Some(mut scalar) = r.booster_value(lower) else {
            return 0.0;
        };
        if valence < 0.0 {
            scalar = -scalar;
        }
        if is_upper(word) && cap_diff {
            if valence > 0.0 {
                scalar += r.caps_increment;
            } else {
                scalar -= r.caps_increment;
            }
        }
        scalar
    }

    fn negation_check(&self, mut valence: f64, w: &Words<'_>, start_i: usize, i: usize) -> f64 {
        let r = &self.lex.rules;
        let so_this = |s: &str| s == "so" || s == "this";
        match start_i {
            0 => {
                if self.negated(w.l(i - 1)) {
                    valence *= r.negation_scalar;
                }
            }
            1 => {
                if w.l(i - 2) == "never" && so_this(w.l(i - 1)) {
                    valence *= r.never_so_multiplier;
                } else if w.l(i - 2) == "without" && w.l(i - 1) == "doubt" {
                } else if self.negated(w.l(i - 2)) {
                    valence *= r.negation_scalar;
                }
            }
            _ => {
                if (w.l(i - 3) == "never" && so_this(w.l(i - 2))) || so_this(w.l(i - 1)) {
                    valence *= r.never_so_multiplier;
                } else if w.l(i - 3) == "without" && (w.l(i - 2) == "doubt" || w.l(i - 1) == "doubt") {
                } else if self.negated(w.l(i - 3)) {
                    valence *= r.negation_scalar;
                }
            }
        }
        valence
    }

    fn special_idioms_check(&self, mut valence: f64, w: &Words<'_>, i: usize) -> f64 {
        let r = &self.lex.rules;
        let onezero = format!("{} {}", w.l(i - 1), w.l(i));
        let twoonezero = format!("{} {} {}", w.l(i - 2), w.l(i - 1), w.l(i));
        let twoone = format!("{} {}", w.l(i - 2), w.l(i - 1));
        let threetwoone = format!("{} {} {}", w.l(i - 3), w.l(i - 2), w.l(i - 1));
        let threetwo = format!("{} {}", w.l(i - 3), w.l(i - 2));
        for seq in [&onezero, &twoonezero, &twoone, &threetwoone, &threetwo] {
            if let Some(&v) = r.special_cases.get(seq.as_str()) {
                valence = v;
                break;
            }
        }
        let n = w.lower.len();
        if n - 1 > i {
            let zeroone = format!("{} {}", w.l(i), w.l(i + 1));
            if let Some(&v) = r.special_cases.get(&zeroone) {
                valence = v;
            }
        }
        if n - 1 > i + 1 {
            let zeroonetwo = format!("{} {} {}", w.l(i), w.l(i + 1), w.l(i + 2));
            if let Some(&v) = r.special_cases.get(&zeroonetwo) {
                valence = v;
            }
        }
        for gram in [&threetwoone, &threetwo, &twoone] {
            if let Some(b) = r.booster_value(gram) {
                valence += b;
            }
        }
        valence
    }

    fn least_check(&self, mut valence: f64, w: &Words<'_>, i: usize) -> f64 {
        let n = self.lex.rules.negation_scalar;
        if i > 1 && !self.lex.contains(w.l(i - 1)) && w.l(i - 1) == "least" {
            if w.l(i - 2) != "at" && w.l(i - 2) != "very" {
                valence *= n;
            }
        } else if i > 0 && !self.lex.contains(w.l(i - 1)) && w.l(i - 1) == "least" {
            valence *= n;
        }
        valence
    }

    fn valence(&self, w: &Words<'_>, i: usize) -> f64 {
        let r = &self.lex.rules;
        let item = w.l(i);
        let Some(base) = self.lex.valence(item) else {
            return 0.0;
        };
        let n = w.lower.len();
        let mut valence = base;
        if item == "no" && i != n - 1 && self.lex.contains(w.l(i + 1)) {
            valence = 0.0;
        }
        if (i > 0 && w.l(i - 1) == "no")
            || (i > 1 && w.l(i - 2) == "no")
            || (i > 2 && w.l(i - 3) == "no" && (w.l(i - 1) == "or" || w.l(i - 1) == "nor"))
        {
            valence = base * r.negation_scalar;
        }
        if is_upper(w.raw[i]) && w.cap_diff {
            if valence > 0.0 {
                valence += r.caps_increment;
            } else {
                valence -= r.caps_increment;
            }
        }
        for start_i in 0..3 {
            if i > start_i && !self.lex.contains(w.l(i - (start_i + 1))) {
                let j = i - (start_i + 1);
                let mut s = self.scalar_inc_dec(w.raw[j], w.l(j), valence, w.cap_diff);
                if s != 0.0 {
                    s *= r.scope_dampening[start_i];
                }
                valence += s;
                valence = self.negation_check(valence, w, start_i, i);
                if start_i == 2 {
                    valence = self.special_idioms_check(valence, w, i);
                }
            }
        }
        self.least_check(valence, w, i)
    }

    fn but_check(&self, w: &Words<'_>, s: &mut [f64]) {
        let r = &self.lex.rules;
        let Some(bi) = w.lower.iter().position(|x| x == "but") else {
            return;
        };
        // Each value is rescaled at the first position holding an equal value.
        for j in 0..s.len() {
            let v = s[j];
            let si = s.iter().position(|&x| x == v).unwrap_or(j);
            if si < bi {
                s[si] = v * r.but_before;
            } else if si > bi {
                s[si] = v * r.but_after;
            }
        }
    }

    fn punctuation_emphasis(&self, text: &str) -> f64 {
        let r = &self.lex.rules;
        let ep = text.matches('!').count().min(r.exclamation_max) as f64 * r.exclamation_increment;
        let qm_count = text.matches('?').count();
        let qm = if qm_count > 1 {
            if qm_count <= r.question_max_count {
                qm_count as f64 * r.question_increment
            } else {
                r.question_cap
            }
        } else {
            0.0
        };
        ep + qm
    }
}

/// Rule-based compound sentiment of raw text in [-1, 1].
pub fn sentiment(text: &str, lex: &SentimentLexicon) -> SentimentScore {
    let mut clean = String::with_capacity(text.len());
    let mut prev_space = true;
    for c in text.chars() {
        match lex.emoji_description(c) {
            Some(d) => {
                if !prev_space {
                    clean.push(' ');
                }
                clean.push_str(d);
                prev_space = false;
            }
            None => {
                clean.push(c);
                prev_space = c == ' ';
            }
        }
    }
    let text = clean.trim_matches(py_space);
    let words = Words::new(text);
    let sc = Scorer { lex };

    let mut sentiments = Vec::with_capacity(words.raw.len());
    for i in 0..words.raw.len() {
        let item = words.l(i);
        if lex.rules.booster_value(item).is_some()
            || (i + 1 < words.raw.len() && item == "kind" && words.l(i + 1) == "of")
        {
            sentiments.push(0.0);
            continue;
        }
        sentiments.push(sc.valence(&words, i));
    }
    sc.but_check(&words, &mut sentiments);

    let compound = if sentiments.is_empty() {
        0.0
    } else {
        let mut sum: f64 = sentiments.iter().sum();
        let punct = sc.punctuation_emphasis(text);
        if sum > 0.0 {
            sum += punct;
        } else if sum < 0.0 {
            sum -= punct;
        }
        (sum / (sum * sum + lex.rules.alpha).sqrt()).clamp(-1.0, 1.0)
    };
    SentimentScore {
        compound,
        class: classify_compound(compound, lex.rules.neutral_threshold),
    }
}

pub fn classify_compound(compound: f64, threshold: f64) -> SentimentClass {
    if compound.abs() < threshold {
        SentimentClass::Neutral
    } else if compound > 0.0 {
        SentimentClass::Positive
    } else {
        SentimentClass::Negative
    }
}

// ---------------------------------------------------------------------------
// Subjectivity

const NEGATIONS: [&str; 4] = ["no", "not", "n't", "never"];

/// Mean subjectivity of lexicon hits in [0, 1]; 0 = objective. An intensifier
/// multiplies the subjectivity of the next hit and the two merge into one
/// assessment. Unknown words of at most two characters keep a pending intensifier.
pub fn subjectivity(utt: &TokenizedUtterance, lex: &SubjectivityLexicon) -> f64 {
    struct Assessment {
        s: f64,
        i: f64,
    }
    let mut a: Vec<Assessment> = Vec::new();
    let mut modifier: Option<&str> = None;
    let mut negation = false;
    for ((tok, lemma), &tag) in utt.tokens().iter().zip(utt.lemmas()).zip(utt.tags()) {
        let hit = lex
            .lookup(lemma, tag)
            .map(|h| (lemma.as_str(), h))
            .or_else(|| lex.lookup(tok, tag).map(|h| (tok.as_str(), h)));
        match hit {
            Some((w, (e, is_mod))) => {
                match (modifier, a.last_mut()) {
                    (Some(_), Some(last)) => {
                        last.s = (e.subjectivity * last.i).clamp(-1.0, 1.0);
                        last.i = e.intensity;
                    }
                    _ => a.push(Assessment {
                        s: e.subjectivity,
                        i: e.intensity,
                    }),
                }
                if negation {
                    if let Some(last) = a.last_mut() {
                        last.i = 1.0 / last.i;
                    }
                }
                modifier = is_mod.then_some(w);
                negation = NEGATIONS.contains(&w);
            }
            None => {
                let w = lemma.as_str();
                if NEGATIONS.contains(&w) || NEGATIONS.contains(&tok.as_str()) {
                    negation = true;
                } else if negation && w.trim_matches('\'').chars().count() > 1 {
                    negation = false;
                }
                if negation && modifier.is_some_and(|m| m.ends_with("ly")) {
                    negation = false;
                } else if modifier.is_some() && w.chars().count() > 2 {
                    modifier = None;
                }
            }
        }
    }
    if a.is_empty() {
        0.0
    } else {
        a.iter().map(|x| x.s).sum::<f64>() / a.len() as f64
    }
}

// ---------------------------------------------------------------------------
// Similes

/// First pattern (in list order) found as a contiguous run of whole words.
pub fn detect_simile<'a>(text: &str, list: &'a SimileLemmaList) -> Option<&'a [String]> {
    let words = simile_words(text);
    list.patterns()
        .iter()
        .find(|p| words.windows(p.len()).any(|w| w == p.as_slice()))
        .map(Vec::as_slice)
}

// ---------------------------------------------------------------------------

/// Lexicons consumed by [`affect_scores`].
#[derive(Clone, Copy)]
pub struct AffectLexicons<'a> {
    pub concreteness: &'a ConcretenessLexicon,
    pub sentiment: &'a SentimentLexicon,
    pub subjectivity: &'a SubjectivityLexicon,
    pub similes: &'a SimileLemmaList,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffectScores {
    pub mean_concreteness: Option<f64>,
    pub sentiment_compound: f64,
    pub sentiment_class: SentimentClass,
    pub subjectivity: f64,
    pub has_simile: bool,
    pub simile: Option<String>,
    pub covered_word_fraction: f64,
}

pub fn affect_scores(text: &str, utt: &TokenizedUtterance, lex: AffectLexicons<'_>) -> AffectScores {
    let conc = concreteness(utt, lex.concreteness);
    let sent = sentiment(text, lex.sentiment);
    let simile = detect_simile(text, lex.similes).map(|p| p.join(" "));
    AffectScores {
        mean_concreteness: conc.mean,
        sentiment_compound: sent.compound,
        sentiment_class: sent.class,
        subjectivity: subjectivity(utt, lex.subjectivity),
        has_simile: simile.is_some(),
        simile,
        covered_word_fraction: conc.coverage,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::{Lemmatizer, TaggerModel, TextPipeline};

    fn pipe() -> TextPipeline<'static> {
        TextPipeline::new(TaggerModel::bundled(), Lemmatizer::bundled())
    }

    fn utt(words: &[(&str, Tag)]) -> TokenizedUtterance {
        TokenizedUtterance::from_tagged(
            words.iter().map(|(w, _)| w.to_string()).collect(),
            words.iter().map(|(_, t)| *t).collect(),
            Lemmatizer::bundled(),
        )
        .unwrap()
    }

    #[test]
    fn concreteness_examples() {
        let lex = ConcretenessLexicon::bundled_seed();
        let c = concreteness(&utt(&[("banana", Tag::Noun)]), &lex);
        assert_eq!(c.mean, Some(5.0));
        assert_eq!(c.coverage, 1.0);
        let c = concreteness(&utt(&[("love", Tag::Noun), ("psyche", Tag::Noun)]), &lex);
        assert!((c.mean.unwrap() - 1.705).abs() < 1e-12);
        let c = concreteness(&utt(&[("red", Tag::Adj), ("sky", Tag::Noun)]), &lex);
        assert_eq!((c.mean, c.coverage), (None, 0.0));
        let c = concreteness(&utt(&[("bananas", Tag::Noun), ("the", Tag::Other)]), &lex);
        assert_eq!(c.per_word, vec![Some(5.0), None]);
    }

    #[test]
    fn sentiment_basics() {
        let lex = SentimentLexicon::bundled();
        assert_eq!(
            sentiment("", lex),
            SentimentScore {
                compound: 0.0,
                class: SentimentClass::Neutral
            }
        );
        let s = sentiment("the painting is beautiful", lex);
        assert_eq!(s.class, SentimentClass::Positive);
        let s = sentiment("the painting is not beautiful", lex);
        assert_eq!(s.class, SentimentClass::Negative);
        assert_eq!(sentiment("a red sky", lex).class, SentimentClass::Neutral);
    }

    #[test]
    fn sentiment_single_word_arithmetic() {
        let lex = SentimentLexicon::bundled();
        let v = 2.9;
        let want = v / (v * v + 15.0f64).sqrt();
        assert!((sentiment("beautiful", lex).compound - want).abs() < 1e-12);
        let v = 2.9 + 0.293;
        let want = v / (v * v + 15.0f64).sqrt();
        assert!((sentiment("very beautiful", lex).compound - want).abs() < 1e-12);
    }

    #[test]
    fn but_check_rescales_first_equal_value() {
        let lex = SentimentLexicon::bundled();
        let mut s = vec![1.0, 0.0, 1.0, 0.0];
        Scorer { lex }.but_check(&Words::new("good but good x"), &mut s);
        assert_eq!(s, vec![0.5, 0.0, 1.5, 0.0]);
        // After halving, index 0 holds 0.5, so the 0.5 at index 1 rescales index 0 again.
        let mut s = vec![1.0, 0.5, 0.0];
        Scorer { lex }.but_check(&Words::new("x y but"), &mut s);
        assert_eq!(s, vec![0.25, 0.5, 0.0]);
    }

    #[test]
    fn subjectivity_examples() {
        let lex = SubjectivityLexicon::bundled();
        let p = pipe();
        let nice = subjectivity(&p.process("the painting is nice"), lex);
        let red = subjectivity(&p.process("the painting is red"), lex);
        assert!(nice > red, "{nice} vs {red}");
        assert_eq!(red, 0.0);
        assert_eq!(subjectivity(&p.process("a b c"), lex), 0.0);
    }

    #[test]
    fn subjectivity_single_hit_and_intensifier() {
        let csv = "lemma,tag,polarity,subjectivity,intensity\nbright,ADJ,0.5,0.8,1\nvery,ADV,0.2,0.3,1.3\nwarm,ADJ,0.5,0.4,1\n";
        let lex = SubjectivityLexicon::from_reader(csv.as_bytes(), "t").unwrap();
        let u = utt(&[("a", Tag::Other), ("bright", Tag::Adj), ("sky", Tag::Noun)]);
        assert_eq!(subjectivity(&u, &lex), 0.8);
        // very (0.3, x1.3) merges with bright: min(0.8 * 1.3, 1) = 1.0
        let u = utt(&[("very", Tag::Other), ("bright", Tag::Adj)]);
        assert_eq!(subjectivity(&u, &lex), 1.0);
        // intensifier survives "a", then merges: 0.4 * 1.3 = 0.52; plus bright 0.8
        let u = utt(&[("very", Tag::Other), ("a", Tag::Other), ("warm", Tag::Adj), ("bright", Tag::Adj)]);
        assert!((subjectivity(&u, &lex) - (0.52 + 0.8) / 2.0).abs() < 1e-12);
        // a longer unknown word drops the pending intensifier
        let u = utt(&[("very", Tag::Other), ("much", Tag::Other), ("warm", Tag::Adj)]);
        assert!((subjectivity(&u, &lex) - (0.3 + 0.4) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn simile_examples() {
        let list = SimileLemmaList::bundled();
        assert_eq!(detect_simile("it looks like blood", list).unwrap().join(" "), "looks like");
        assert!(detect_simile("a red sky", list).is_none());
        assert!(detect_simile("he looks likeable", list).is_none());
        assert!(detect_simile("  It LOOKS like blood.  ", list).is_some());
        assert_eq!(
            detect_simile("This reminds me of... home", list).unwrap().join(" "),
            "reminds me of"
        );
    }

    #[test]
    fn affect_scores_combines() {
        let lex = AffectLexicons {
            concreteness: &ConcretenessLexicon::bundled_seed(),
            sentiment: SentimentLexicon::bundled(),
            subjectivity: SubjectivityLexicon::bundled(),
            similes: SimileLemmaList::bundled(),
        };
        let text = "the banana looks like a beautiful moon";
        let s = affect_scores(text, &pipe().process(text), lex);
        assert_eq!(s.mean_concreteness, Some(5.0));
        assert!(s.has_simile);
        assert_eq!(s.simile.as_deref(), Some("looks like"));
        assert_eq!(s.sentiment_class, SentimentClass::Positive);
        assert!(s.subjectivity > 0.0 && s.subjectivity <= 1.0);
        assert!(s.covered_word_fraction > 0.0 && s.covered_word_fraction < 1.0);
    }
}
