//! Emotion-annotated caption corpora: ingestion, serialization and splits.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::emotion::{Emotion, EmotionDistribution};
use crate::error::{Error, Result};

/// Required columns of the release CSV, in release order.
pub const CORPUS_COLUMNS: [&str; 4] = ["art_style", "painting", "emotion", "utterance"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// Guess from the file extension; anything but `.jsonl`/`.json` is CSV.
    pub fn from_path(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => CorpusFormat::Jsonl,
            _ => CorpusFormat::Csv,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            _ => Err(Error::InvalidParameter(format!("unknown corpus format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artwork {
    pub id: String,
    pub art_style: String,
    pub genre: Option<String>,
    pub painter: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    /// Position of the artwork in [`Corpus::artworks`].
    pub artwork: usize,
    pub emotion: Emotion,
    pub utterance: String,
    pub annotator_id: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "val" | "validation" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            _ => Err(Error::InvalidParameter(format!("unknown split `{s}`"))),
        }
    }
}

/// An immutable corpus. Artworks keep first-appearance order; annotations keep row order.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    artworks: Vec<Artwork>,
    annotations: Vec<Annotation>,
    index: HashMap<String, usize>,
    by_artwork: Vec<Vec<usize>>,
    split: Option<Vec<Split>>,
}

/// One input record before it is attached to a corpus.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub art_style: String,
    pub painting: String,
    pub emotion: String,
    pub utterance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genre: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub painter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator_id: Option<String>,
}

#[derive(Default)]
pub struct CorpusBuilder {
    corpus: Corpus,
}

impl CorpusBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one annotation, creating its artwork on first sight.
    pub fn push(
        &mut self,
        artwork: Artwork,
        emotion: Emotion,
        utterance: impl Into<String>,
        annotator_id: Option<String>,
    ) -> Result<()> {
        let utterance = utterance.into();
        if utterance.trim().is_empty() {
            return Err(Error::InvalidParameter(format!(
                "empty utterance for artwork `{}`",
                artwork.id
            )));
        }
        if artwork.id.is_empty() {
            return Err(Error::InvalidParameter("empty artwork id".into()));
        }
        let c = &mut self.corpus;
        let idx = match c.index.get(&artwork.id) {
            Some(&i) => i,
            None => {
                let i = c.artworks.len();
                c.index.insert(artwork.id.clone(), i);
                c.artworks.push(artwork);
                c.by_artwork.push(Vec::new());
                i
            }
        };
        c.by_artwork[idx].push(c.annotations.len());
        c.annotations.push(Annotation {
            artwork: idx,
            emotion,
            utterance,
            annotator_id,
        });
        Ok(())
    }

    pub fn build(self) -> Corpus {
        self.corpus
    }
}

fn record_to_parts(rec: Record) -> Result<(Artwork, Emotion, String, Option<String>)> {
    let emotion: Emotion = rec.emotion.parse()?;
    let nonempty = |s: Option<String>| s.filter(|v| !v.trim().is_empty());
    Ok((
        Artwork {
            id: rec.painting,
            art_style: rec.art_style,
            genre: nonempty(rec.genre),
            painter: nonempty(rec.painter),
        },
        emotion,
        rec.utterance,
        nonempty(rec.annotator_id),
    ))
}

impl Corpus {
    pub fn load(path: &Path, format: CorpusFormat) -> Result<Corpus> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let name = path.display().to_string();
        match format {
            CorpusFormat::Csv => Corpus::read_csv(file, &name),
            CorpusFormat::Jsonl => Corpus::read_jsonl(BufReader::new(file), &name),
        }
    }

    /// Read the release CSV. Extra columns (e.g. `repetition`) are ignored;
    /// `genre`, `painter` and `annotator_id` are picked up when present.
    pub fn read_csv<R: Read>(reader: R, name: &str) -> Result<Corpus> {
        let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
        let headers = match rdr.headers() {
            Ok(h) if !h.is_empty() && !(h.len() == 1 && h[0].trim().is_empty()) => h.clone(),
            Ok(_) => return Err(Error::Empty(name.to_string())),
            Err(e) => return Err(Error::row(name, 1, "header", e.to_string())),
        };
        let col = |want: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(want));
        let mut required = [0usize; 4];
        for (slot, want) in required.iter_mut().zip(CORPUS_COLUMNS) {
            *slot = col(want)
                .ok_or_else(|| Error::row(name, 1, want, "missing required column"))?;
        }
        let [c_style, c_painting, c_emotion, c_utt] = required;
        let (c_genre, c_painter, c_annotator) = (col("genre"), col("painter"), col("annotator_id"));

        let mut builder = CorpusBuilder::new();
        for (i, row) in rdr.records().enumerate() {
            let rowno = i + 2;
            let row = row.map_err(|e| Error::row(name, rowno, "*", e.to_string()))?;
            let get = |c: usize| row.get(c).unwrap_or("").to_string();
            let rec = Record {
                art_style: get(c_style),
                painting: get(c_painting),
                emotion: get(c_emotion),
                utterance: get(c_utt),
                genre: c_genre.map(get),
                painter: c_painter.map(get),
                annotator_id: c_annotator.map(get),
            };
            builder_push(&mut builder, rec, name, rowno)?;
        }
        let corpus = builder.build();
        if corpus.annotations.is_empty() {
            return Err(Error::Empty(name.to_string()));
        }
        Ok(corpus)
    }

    pub fn read_jsonl<R: BufRead>(reader: R, name: &str) -> Result<Corpus> {
        let mut builder = CorpusBuilder::new();
        for (i, line) in reader.lines().enumerate() {
            let rowno = i + 1;
            let line = line.map_err(|e| Error::row(name, rowno, "*", e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)
                .map_err(|e| Error::row(name, rowno, "*", e.to_string()))?;
            builder_push(&mut builder, rec, name, rowno)?;
        }
        let corpus = builder.build();
        if corpus.annotations.is_empty() {
            return Err(Error::Empty(name.to_string()));
        }
        Ok(corpus)
    }

    /// Write in the release CSV layout; `genre`/`painter`/`annotator_id`
    /// columns are added only when some row carries them.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let has_genre = self.artworks.iter().any(|a| a.genre.is_some());
        let has_painter = self.artworks.iter().any(|a| a.painter.is_some());
        let has_annotator = self.annotations.iter().any(|a| a.annotator_id.is_some());
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = CORPUS_COLUMNS.to_vec();
        if has_genre {
            header.push("genre");
        }
        if has_painter {
            header.push("painter");
        }
        if has_annotator {
            header.push("annotator_id");
        }
        w.write_record(&header)?;
        for ann in &self.annotations {
            let art = &self.artworks[ann.artwork];
            let mut row = vec![
                art.art_style.as_str(),
                art.id.as_str(),
                ann.emotion.as_str(),
                ann.utterance.as_str(),
            ];
            if has_genre {
                row.push(art.genre.as_deref().unwrap_or(""));
            }
            if has_painter {
                row.push(art.painter.as_deref().unwrap_or(""));
            }
            if has_annotator {
                row.push(ann.annotator_id.as_deref().unwrap_or(""));
            }
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut writer: W) -> Result<()> {
        for ann in &self.annotations {
            let art = &self.artworks[ann.artwork];
            let rec = Record {
                art_style: art.art_style.clone(),
                painting: art.id.clone(),
                emotion: ann.emotion.as_str().to_string(),
                utterance: ann.utterance.clone(),
                genre: art.genre.clone(),
                painter: art.painter.clone(),
                annotator_id: ann.annotator_id.clone(),
            };
            serde_json::to_writer(&mut writer, &rec)?;
            writer.write_all(b"\n").map_err(|e| Error::io("<jsonl output>", e))?;
        }
        Ok(())
    }

    pub fn artworks(&self) -> &[Artwork] {
        &self.artworks
    }

    pub fn annotations(&self) -> &[Annotation] {
        &self.annotations
    }

    pub fn artwork_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn artwork(&self, idx: usize) -> &Artwork {
        &self.artworks[idx]
    }

    /// Annotation positions for the artwork at `idx`, in row order.
    pub fn annotations_of(&self, idx: usize) -> impl Iterator<Item = &Annotation> + '_ {
        self.by_artwork[idx].iter().map(move |&a| &self.annotations[a])
    }

    pub fn annotation_count_of(&self, idx: usize) -> usize {
        self.by_artwork[idx].len()
    }

    pub fn emotion_counts_of(&self, idx: usize) -> [usize; Emotion::COUNT] {
        let mut counts = [0usize; Emotion::COUNT];
        for a in self.annotations_of(idx) {
            counts[a.emotion.index()] += 1;
        }
        counts
    }

    /// Global per-emotion annotation counts.
    pub fn emotion_counts(&self) -> [usize; Emotion::COUNT] {
        let mut counts = [0usize; Emotion::COUNT];
        for a in &self.annotations {
            counts[a.emotion.index()] += 1;
        }
        counts
    }

    pub fn empirical_distribution(&self, artwork_id: &str) -> Result<EmotionDistribution> {
        let idx = self
            .artwork_index(artwork_id)
            .ok_or_else(|| Error::UnknownArtwork(artwork_id.to_string()))?;
        self.empirical_distribution_at(idx)
    }

    pub fn empirical_distribution_at(&self, idx: usize) -> Result<EmotionDistribution> {
        EmotionDistribution::from_counts(&self.emotion_counts_of(idx))
            .ok_or_else(|| Error::NoAnnotations(self.artworks[idx].id.clone()))
    }

    pub fn split(&self) -> Option<&[Split]> {
        self.split.as_deref()
    }

    pub fn split_of(&self, idx: usize) -> Option<Split> {
        self.split.as_ref().map(|s| s[idx])
    }

    /// Artwork indices in the given split (empty when no split is assigned).
    pub fn artworks_in(&self, split: Split) -> Vec<usize> {
        match &self.split {
            Some(s) => (0..self.artworks.len()).filter(|&i| s[i] == split).collect(),
            None => Vec::new(),
        }
    }

    /// Annotations whose artwork lies in `split`, in row order.
    pub fn annotations_in(&self, split: Split) -> Vec<&Annotation> {
        match &self.split {
            Some(s) => self.annotations.iter().filter(|a| s[a.artwork] == split).collect(),
            None => Vec::new(),
        }
    }

    /// Shuffle artworks with a seeded generator and cut them by `ratios`
    /// (train, val, test). Sizes use largest-remainder apportionment.
    pub fn assign_splits(&self, ratios: [f64; 3], seed: u64) -> Result<Corpus> {
        let sizes = split_sizes(self.artworks.len(), ratios)?;
        let mut order: Vec<usize> = (0..self.artworks.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
        let mut split = vec![Split::Train; self.artworks.len()];
        let mut cursor = 0;
        for (s, &n) in Split::ALL.iter().zip(&sizes) {
            for &a in &order[cursor..cursor + n] {
                split[a] = *s;
            }
            cursor += n;
        }
        self.with_split(split)
    }

    /// Attach an explicit per-artwork split; it must cover every artwork.
    pub fn with_split(&self, split: Vec<Split>) -> Result<Corpus> {
        if split.len() != self.artworks.len() {
            return Err(Error::InvalidParameter(format!(
                "split covers {} of {} artworks",
                split.len(),
                self.artworks.len()
            )));
        }
        let mut c = self.clone();
        c.split = Some(split);
        Ok(c)
    }

    /// Attach a split read from a `painting,split` CSV.
    pub fn with_split_csv<R: Read>(&self, reader: R, name: &str) -> Result<Corpus> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut split: Vec<Option<Split>> = vec![None; self.artworks.len()];
        for (i, row) in rdr.records().enumerate() {
            let rowno = i + 2;
            let row = row.map_err(|e| Error::row(name, rowno, "*", e.to_string()))?;
            let id = row.get(0).unwrap_or("");
            let idx = self
                .artwork_index(id)
                .ok_or_else(|| Error::row(name, rowno, "painting", format!("unknown artwork `{id}`")))?;
            let s: Split = row
                .get(1)
                .unwrap_or("")
                .parse()
                .map_err(|e: Error| Error::row(name, rowno, "split", e.to_string()))?;
            split[idx] = Some(s);
        }
        let split = split
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::row(name, 0, "painting", format!("no split for `{}`", self.artworks[i].id))))
            .collect::<Result<Vec<_>>>()?;
        self.with_split(split)
    }

    pub fn write_split_csv<W: Write>(&self, writer: W) -> Result<()> {
        let split = self
            .split
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("corpus has no split".into()))?;
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["painting", "split"])?;
        for (art, s) in self.artworks.iter().zip(split) {
            w.write_record([art.id.as_str(), s.as_str()])?;
        }
        w.flush().map_err(|e| Error::io("<split output>", e))?;
        Ok(())
    }
}

fn builder_push(builder: &mut CorpusBuilder, rec: Record, name: &str, rowno: usize) -> Result<()> {
    if rec.painting.trim().is_empty() {
        return Err(Error::row(name, rowno, "painting", "empty painting id"));
    }
    if rec.utterance.trim().is_empty() {
        return Err(Error::row(name, rowno, "utterance", "empty utterance"));
    }
    let (art, emotion, utt, annot) = record_to_parts(rec)
        .map_err(|e| Error::row(name, rowno, "emotion", e.to_string()))?;
    builder.push(art, emotion, utt, annot)
}

/// Largest-remainder apportionment of `n` items over `ratios`.
/// Ties in the fractional part go to the earlier slot.
pub fn split_sizes(n: usize, ratios: [f64; 3]) -> Result<[usize; 3]> {
    if ratios.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(Error::InvalidParameter(format!("split ratios must be positive: {ratios:?}")));
    }
    let sum: f64 = ratios.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("split ratios sum to {sum}, not 1")));
    }
    let quotas: Vec<f64> = ratios.iter().map(|r| r * n as f64).collect();
    let mut sizes = [0usize; 3];
    for (s, q) in sizes.iter_mut().zip(&quotas) {
        *s = q.floor() as usize;
    }
    let assigned: usize = sizes.iter().sum();
    let mut by_remainder: Vec<usize> = (0..3).collect();
    by_remainder.sort_by(|&a, &b| {
        let (fa, fb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &slot in by_remainder.iter().take(n.saturating_sub(assigned)) {
        sizes[slot] += 1;
    }
    Ok(sizes)
}
