//! Loaders for the concreteness, sentiment, subjectivity, simile and ANP lexicons.
//!
//! Keys are lowercased at load. Duplicate keys keep the last row; the number of
//! overridden rows is logged and available from each lexicon.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::emotion::Polarity;
use crate::error::{Error, Result};
use crate::textproc::Tag;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn name_of(path: &Path) -> String {
    path.display().to_string()
}

fn reader_builder(delimiter: u8) -> csv::ReaderBuilder {
    let mut b = csv::ReaderBuilder::new();
    b.delimiter(delimiter).flexible(true).has_headers(true);
    if delimiter == b'\t' {
        b.quoting(false);
    }
    b
}

struct Columns {
    file: String,
    idx: Vec<usize>,
}

impl Columns {
    fn find(file: &str, headers: &csv::StringRecord, wanted: &[&str]) -> Result<Columns> {
        let mut idx = Vec::with_capacity(wanted.len());
        for w in wanted {
            let pos = headers
                .iter()
                .position(|h| h.trim().eq_ignore_ascii_case(w))
                .ok_or_else(|| Error::row(file, 1, *w, "missing column"))?;
            idx.push(pos);
        }
        Ok(Columns {
            file: file.to_string(),
            idx,
        })
    }

    fn get<'r>(&self, rec: &'r csv::StringRecord, row: usize, k: usize, name: &str) -> Result<&'r str> {
        rec.get(self.idx[k])
            .map(str::trim)
            .ok_or_else(|| Error::row(&self.file, row, name, "missing value"))
    }

    fn real(&self, rec: &csv::StringRecord, row: usize, k: usize, name: &str, lo: f64, hi: f64) -> Result<f64> {
        let raw = self.get(rec, row, k, name)?;
        let v: f64 = raw
            .parse()
            .map_err(|_| Error::row(&self.file, row, name, format!("`{raw}` is not a number")))?;
        if !(lo..=hi).contains(&v) {
            return Err(Error::row(&self.file, row, name, format!("{v} outside [{lo}, {hi}]")));
        }
        Ok(v)
    }
}

/// Data rows are numbered from 2 (the header is row 1).
fn records<'a, R: Read>(
    rdr: &'a mut csv::Reader<R>,
    file: &str,
) -> impl Iterator<Item = Result<(usize, csv::StringRecord)>> + 'a {
    let file = file.to_string();
    rdr.records().enumerate().map(move |(i, r)| {
        r.map(|rec| (i + 2, rec))
            .map_err(|e| Error::row(&file, i + 2, "*", e.to_string()))
    })
}

fn note_duplicates(what: &str, file: &str, n: usize) {
    if n > 0 {
        log::info!("{file}: {n} duplicate {what} entries overridden by later rows");
    }
}

// ---------------------------------------------------------------------------

/// Word → concreteness rating in [1, 5].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConcretenessLexicon {
    ratings: HashMap<String, f64>,
    duplicates: usize,
}

impl ConcretenessLexicon {
    /// Reads a TSV with at least the columns `Word` and `Conc.M`.
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_reader(open(path)?, &name_of(path))
    }

    pub fn from_reader<R: Read>(reader: R, name: &str) -> Result<Self> {
        let mut rdr = reader_builder(b'\t').from_reader(reader);
        let cols = Columns::find(name, rdr.headers()?, &["Word", "Conc.M"])?;
        let mut lex = ConcretenessLexicon::default();
        for r in records(&mut rdr, name) {
            let (row, rec) = r?;
            let word = cols.get(&rec, row, 0, "Word")?.to_lowercase();
            if word.is_empty() {
                return Err(Error::row(name, row, "Word", "empty word"));
            }
            let rating = cols.real(&rec, row, 1, "Conc.M", 1.0, 5.0)?;
            if lex.ratings.insert(word, rating).is_some() {
                lex.duplicates += 1;
            }
        }
        note_duplicates("concreteness", name, lex.duplicates);
        Ok(lex)
    }

    /// The handful of published ratings shipped with the crate.
    pub fn bundled_seed() -> Self {
        Self::from_reader(include_str!("../data/concreteness_seed.tsv").as_bytes(), "concreteness_seed.tsv")
            .expect("bundled concreteness seed is valid")
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.ratings.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoosterKind {
    Incr,
    Decr,
}

/// Rule constants and closed word lists of the rule-based sentiment scorer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentimentRules {
    pub version: u32,
    pub booster_increment: f64,
    pub booster_decrement: f64,
    pub caps_increment: f64,
    pub negation_scalar: f64,
    pub alpha: f64,
    pub neutral_threshold: f64,
    /// Multiplier applied to a modifier 1, 2, 3 words before the scored word.
    /// Its length is the negation/booster scope.
    pub scope_dampening: Vec<f64>,
    pub never_so_multiplier: f64,
    pub but_before: f64,
    pub but_after: f64,
    pub exclamation_increment: f64,
    pub exclamation_max: usize,
    pub question_increment: f64,
    pub question_max_count: usize,
    pub question_cap: f64,
    pub negations: Vec<String>,
    pub boosters: BTreeMap<String, BoosterKind>,
    pub special_cases: BTreeMap<String, f64>,
}

impl SentimentRules {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let mut r: SentimentRules = serde_json::from_slice(bytes)?;
        let positive = [
            ("booster_increment", r.booster_increment),
            ("caps_increment", r.caps_increment),
            ("alpha", r.alpha),
            ("neutral_threshold", r.neutral_threshold),
            ("never_so_multiplier", r.never_so_multiplier),
            ("but_before", r.but_before),
            ("but_after", r.but_after),
            ("exclamation_increment", r.exclamation_increment),
            ("question_increment", r.question_increment),
            ("question_cap", r.question_cap),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidModel(format!("sentiment rule `{name}` must be positive, got {v}")));
            }
        }
        if !(r.booster_decrement < 0.0 && r.negation_scalar < 0.0) {
            return Err(Error::InvalidModel(
                "sentiment rules `booster_decrement` and `negation_scalar` must be negative".into(),
            ));
        }
        if r.scope_dampening.len() != 3 || r.scope_dampening.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::InvalidModel("sentiment rule `scope_dampening` needs 3 positive factors".into()));
        }
        for n in &mut r.negations {
            *n = n.to_lowercase();
        }
        r.boosters = std::mem::take(&mut r.boosters)
            .into_iter()
            .map(|(k, v)| (k.to_lowercase(), v))
            .collect();
        r.special_cases = std::mem::take(&mut r.special_cases)
            .into_iter()
            .map(|(k, v)| (k.to_lowercase(), v))
            .collect();
        Ok(r)
    }

    pub fn booster_value(&self, word: &str) -> Option<f64> {
        self.boosters.get(word).map(|k| match k {
            BoosterKind::Incr => self.booster_increment,
            BoosterKind::Decr => self.booster_decrement,
        })
    }
}

/// Token → valence in [-4, 4], plus rule constants and emoji descriptions.
#[derive(Clone, Debug, PartialEq)]
pub struct SentimentLexicon {
    valences: HashMap<String, f64>,
    pub rules: SentimentRules,
    emoji: HashMap<char, String>,
    duplicates: usize,
}

impl SentimentLexicon {
    /// Reads the `token\tvalence` TSV and the rules JSON.
    pub fn load(lexicon: &Path, rules: &Path) -> Result<Self> {
        let rules_bytes = std::fs::read(rules).map_err(|e| Error::io(rules, e))?;
        let rules = SentimentRules::from_json(&rules_bytes)?;
        Self::from_reader(open(lexicon)?, &name_of(lexicon), rules)
    }

    pub fn from_reader<R: Read>(reader: R, name: &str, rules: SentimentRules) -> Result<Self> {
        let mut rdr = reader_builder(b'\t').from_reader(reader);
        let cols = Columns::find(name, rdr.headers()?, &["token", "valence"])?;
        let mut valences = HashMap::new();
        let mut duplicates = 0;
        for r in records(&mut rdr, name) {
            let (row, rec) = r?;
            let token = cols.get(&rec, row, 0, "token")?.to_lowercase();
            if token.is_empty() {
                return Err(Error::row(name, row, "token", "empty token"));
            }
            let v = cols.real(&rec, row, 1, "valence", -4.0, 4.0)?;
            if valences.insert(token, v).is_some() {
                duplicates += 1;
            }
        }
        note_duplicates("sentiment", name, duplicates);
        Ok(SentimentLexicon {
            valences,
            rules,
            emoji: HashMap::new(),
            duplicates,
        })
    }

    /// Replace single-character emoji with these textual descriptions before scoring.
    pub fn with_emoji_descriptions(mut self, tsv: &str) -> Self {
        self.emoji = tsv
            .lines()
            .filter_map(|l| {
                let (e, d) = l.split_once('\t')?;
                let mut chars = e.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Some((c, d.trim().to_string())),
                    _ => None,
                }
            })
            .collect();
        self
    }

    pub fn bundled() -> &'static SentimentLexicon {
        static LEX: std::sync::OnceLock<SentimentLexicon> = std::sync::OnceLock::new();
        LEX.get_or_init(|| {
            let rules = SentimentRules::from_json(include_bytes!("../data/sentiment/rules.json"))
                .expect("bundled sentiment rules are valid");
            SentimentLexicon::from_reader(
                include_str!("../data/sentiment/vader_lexicon.tsv").as_bytes(),
                "vader_lexicon.tsv",
                rules,
            )
            .expect("bundled sentiment lexicon is valid")
            .with_emoji_descriptions(include_str!("../data/sentiment/emoji_descriptions.tsv"))
        })
    }

    pub fn valence(&self, token: &str) -> Option<f64> {
        self.valences.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.valences.contains_key(token)
    }

    pub fn emoji_description(&self, c: char) -> Option<&str> {
        self.emoji.get(&c).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.valences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valences.is_empty()
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    /// The same lexicon with every valence negated.
    pub fn negated(&self) -> SentimentLexicon {
        let mut out = self.clone();
        for v in out.valences.values_mut() {
            *v = -*v;
        }
        for v in out.rules.special_cases.values_mut() {
            *v = -*v;
        }
        out
    }
}

// ---------------------------------------------------------------------------

/// Polarity, subjectivity and intensity of one lexicon entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubjectivityEntry {
    pub polarity: f64,
    pub subjectivity: f64,
    pub intensity: f64,
}

/// Tag column value `ANY` marks entries valid for every part of speech.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SubjectivityLexicon {
    entries: HashMap<String, Vec<(Option<SubjTag>, SubjectivityEntry)>>,
    duplicates: usize,
}

/// Part of speech of a subjectivity entry. `Adv` entries act as intensifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubjTag {
    Adj,
    Noun,
    Verb,
    Adv,
}

impl SubjTag {
    fn parse(s: &str) -> Option<Option<SubjTag>> {
        match s.to_ascii_uppercase().as_str() {
            "ADJ" => Some(Some(SubjTag::Adj)),
            "NOUN" => Some(Some(SubjTag::Noun)),
            "VERB" => Some(Some(SubjTag::Verb)),
            "ADV" => Some(Some(SubjTag::Adv)),
            "ANY" | "" => Some(None),
            _ => None,
        }
    }

    fn of(tag: Tag) -> Option<SubjTag> {
        match tag {
            Tag::Adj => Some(SubjTag::Adj),
            Tag::Noun => Some(SubjTag::Noun),
            Tag::Verb => Some(SubjTag::Verb),
            _ => None,
        }
    }
}

impl SubjectivityLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_reader(open(path)?, &name_of(path))
    }

    pub fn from_reader<R: Read>(reader: R, name: &str) -> Result<Self> {
        let mut rdr = reader_builder(b',').from_reader(reader);
        let cols = Columns::find(
            name,
            rdr.headers()?,
            &["lemma", "tag", "polarity", "subjectivity", "intensity"],
        )?;
        let mut lex = SubjectivityLexicon::default();
        for r in records(&mut rdr, name) {
            let (row, rec) = r?;
            let lemma = cols.get(&rec, row, 0, "lemma")?.to_lowercase();
            if lemma.is_empty() {
                return Err(Error::row(name, row, "lemma", "empty lemma"));
            }
            let raw_tag = cols.get(&rec, row, 1, "tag")?;
            let tag = SubjTag::parse(raw_tag)
                .ok_or_else(|| Error::row(name, row, "tag", format!("unknown tag `{raw_tag}`")))?;
            let entry = SubjectivityEntry {
                polarity: cols.real(&rec, row, 2, "polarity", -1.0, 1.0)?,
                subjectivity: cols.real(&rec, row, 3, "subjectivity", 0.0, 1.0)?,
                intensity: cols.real(&rec, row, 4, "intensity", f64::MIN_POSITIVE, 10.0)?,
            };
            let senses = lex.entries.entry(lemma).or_default();
            match senses.iter_mut().find(|(t, _)| *t == tag) {
                Some(slot) => {
                    slot.1 = entry;
                    lex.duplicates += 1;
                }
                None => senses.push((tag, entry)),
            }
        }
        note_duplicates("subjectivity", name, lex.duplicates);
        Ok(lex)
    }

    pub fn bundled() -> &'static SubjectivityLexicon {
        static LEX: std::sync::OnceLock<SubjectivityLexicon> = std::sync::OnceLock::new();
        LEX.get_or_init(|| {
            SubjectivityLexicon::from_reader(include_str!("../data/subjectivity.csv").as_bytes(), "subjectivity.csv")
                .expect("bundled subjectivity lexicon is valid")
        })
    }

    /// Entry for `word` under `tag`; when the tag has no entry, the mean over all
    /// of the word's entries. The flag is true when the word can act as an intensifier.
    pub fn lookup(&self, word: &str, tag: Tag) -> Option<(SubjectivityEntry, bool)> {
        let senses = self.entries.get(word)?;
        let modifier = senses.iter().any(|(t, _)| *t == Some(SubjTag::Adv));
        let want = SubjTag::of(tag);
        if want.is_some() {
            if let Some((_, e)) = senses.iter().find(|(t, _)| *t == want) {
                return Some((*e, modifier));
            }
        }
        let n = senses.len() as f64;
        let mean = SubjectivityEntry {
            polarity: senses.iter().map(|(_, e)| e.polarity).sum::<f64>() / n,
            subjectivity: senses.iter().map(|(_, e)| e.subjectivity).sum::<f64>() / n,
            intensity: senses.iter().map(|(_, e)| e.intensity).sum::<f64>() / n,
        };
        Some((mean, modifier))
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }
}

// ---------------------------------------------------------------------------

/// Lowercase, split on whitespace and trim punctuation from both ends of each word.
pub(crate) fn simile_words(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.to_lowercase().replace('\u{2019}', "'"))
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()).to_string())
        .filter(|w| !w.is_empty())
        .collect()
}

/// Ordered multi-word patterns signalling a simile.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimileLemmaList {
    patterns: Vec<Vec<String>>,
    duplicates: usize,
}

impl SimileLemmaList {
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_reader(open(path)?, &name_of(path))
    }

    /// One pattern per line; blank lines and lines starting with `#` are skipped.
    /// A repeated pattern keeps its first position.
    pub fn from_reader<R: Read>(reader: R, name: &str) -> Result<Self> {
        let mut list = SimileLemmaList::default();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::row(name, i + 1, "pattern", e.to_string()))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let words = simile_words(t);
            if words.is_empty() {
                return Err(Error::row(name, i + 1, "pattern", format!("`{t}` has no words")));
            }
            if list.patterns.contains(&words) {
                list.duplicates += 1;
            } else {
                list.patterns.push(words);
            }
        }
        note_duplicates("simile", name, list.duplicates);
        Ok(list)
    }

    pub fn from_patterns<I, S>(patterns: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let text: Vec<String> = patterns.into_iter().map(|s| s.as_ref().to_string()).collect();
        Self::from_reader(text.join("\n").as_bytes(), "patterns")
    }

    pub fn bundled() -> &'static SimileLemmaList {
        static LIST: std::sync::OnceLock<SimileLemmaList> = std::sync::OnceLock::new();
        LIST.get_or_init(|| {
            SimileLemmaList::from_reader(include_str!("../data/similes.txt").as_bytes(), "similes.txt")
                .expect("bundled simile list is valid")
        })
    }

    pub fn patterns(&self) -> &[Vec<String>] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnpEntry {
    pub adjective: String,
    pub noun: String,
    pub sentiment: Polarity,
    pub frequency: u64,
}

/// Adjective-noun pairs with a known polarity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnpLexicon {
    entries: Vec<AnpEntry>,
    by_pair: HashMap<(String, String), usize>,
    duplicates: usize,
}

impl AnpLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        Self::from_reader(open(path)?, &name_of(path))
    }

    pub fn from_reader<R: Read>(reader: R, name: &str) -> Result<Self> {
        let mut rdr = reader_builder(b',').from_reader(reader);
        let cols = Columns::find(name, rdr.headers()?, &["adjective", "noun", "sentiment", "frequency"])?;
        let mut lex = AnpLexicon::default();
        for r in records(&mut rdr, name) {
            let (row, rec) = r?;
            let adjective = cols.get(&rec, row, 0, "adjective")?.to_lowercase();
            let noun = cols.get(&rec, row, 1, "noun")?.to_lowercase();
            for (col, v) in [("adjective", &adjective), ("noun", &noun)] {
                if v.is_empty() || v.chars().any(char::is_whitespace) {
                    return Err(Error::row(name, row, col, format!("`{v}` is not a single word")));
                }
            }
            let raw = cols.get(&rec, row, 2, "sentiment")?;
            let sentiment: Polarity = raw
                .parse()
                .map_err(|_| Error::row(name, row, "sentiment", format!("`{raw}` is not POSITIVE or NEGATIVE")))?;
            let raw = cols.get(&rec, row, 3, "frequency")?;
            let frequency: u64 = raw
                .parse()
                .map_err(|_| Error::row(name, row, "frequency", format!("`{raw}` is not a non-negative integer")))?;
            lex.insert(AnpEntry {
                adjective,
                noun,
                sentiment,
                frequency,
            });
        }
        note_duplicates("ANP", name, lex.duplicates);
        Ok(lex)
    }

    pub fn from_entries(entries: impl IntoIterator<Item = AnpEntry>) -> Self {
        let mut lex = AnpLexicon::default();
        for e in entries {
            lex.insert(e);
        }
        lex
    }

    fn insert(&mut self, e: AnpEntry) {
        let key = (e.adjective.clone(), e.noun.clone());
        match self.by_pair.get(&key) {
            Some(&i) => {
                self.entries[i] = e;
                self.duplicates += 1;
            }
            None => {
                self.by_pair.insert(key, self.entries.len());
                self.entries.push(e);
            }
        }
    }

    pub fn bundled_seed() -> Self {
        Self::from_reader(include_str!("../data/anps.csv").as_bytes(), "anps.csv").expect("bundled ANP seed is valid")
    }

    pub fn entries(&self) -> &[AnpEntry] {
        &self.entries
    }

    pub fn get(&self, adjective: &str, noun: &str) -> Option<&AnpEntry> {
        self.by_pair
            .get(&(adjective.to_string(), noun.to_string()))
            .map(|&i| &self.entries[i])
    }

    /// Entries whose noun is `noun` and whose sentiment is `sentiment`, in file order.
    pub fn for_noun<'a>(&'a self, noun: &'a str, sentiment: Polarity) -> impl Iterator<Item = &'a AnpEntry> + 'a {
        self.entries
            .iter()
            .filter(move |e| e.noun == noun && e.sentiment == sentiment)
    }

    /// Replace every frequency with the number of times the pair occurs as
    /// adjacent tokens in `utterances`.
    pub fn recount<'a, I>(&mut self, utterances: I)
    where
        I: IntoIterator<Item = &'a [String]>,
    {
        let mut counts = vec![0u64; self.entries.len()];
        let mut key = (String::new(), String::new());
        for toks in utterances {
            for w in toks.windows(2) {
                key.0.clone_from(&w[0]);
                key.1.clone_from(&w[1]);
                if let Some(&i) = self.by_pair.get(&key) {
                    counts[i] += 1;
                }
            }
        }
        for (e, c) in self.entries.iter_mut().zip(counts) {
            e.frequency = c;
        }
    }

    /// Writes the lexicon back in its CSV form.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["adjective", "noun", "sentiment", "frequency"])?;
        for e in &self.entries {
            wtr.write_record([
                e.adjective.as_str(),
                e.noun.as_str(),
                &e.sentiment.to_string(),
                &e.frequency.to_string(),
            ])?;
        }
        wtr.flush().map_err(|e| Error::io("<output>", e))?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }
}
