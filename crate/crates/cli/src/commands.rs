use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use emocap::affect::AffectLexicons;
use emocap::analytics::{self, GroupBy};
use emocap::anp::{inject_anp, resolve_sentiment};
use emocap::classifier::{evaluate_classifier, EmotionPredictor, NbModel};
use emocap::eval::{self, EvalInputs};
use emocap::lexicons::{
    AnpLexicon, ConcretenessLexicon, SentimentLexicon, SimileLemmaList, SubjectivityLexicon,
};
use emocap::report::{self, fmt_float};
use emocap::textproc::{
    read_tagged_corpus, tagging_accuracy, train_tagger, Lemmatizer, TaggerModel, TextPipeline, TrainConfig,
};
use emocap::{Corpus, Emotion, EmotionDistribution, Polarity, Split};

use crate::config::RunConfig;
use crate::Failure;

// ---------------------------------------------------------------------------
// helpers

fn internal(what: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Internal(format!("{what}: {e}"))
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn name(path: &Path) -> String {
    path.display().to_string()
}

fn leak<T>(x: T) -> &'static T {
    Box::leak(Box::new(x))
}

fn load_corpus(cfg: &RunConfig) -> Result<Corpus, Failure> {
    let (path, format) = cfg.require_corpus()?;
    let t = Instant::now();
    let corpus = Corpus::load(path, format)?;
    log::info!(
        "loaded {} annotations on {} artworks in {:.2?}",
        corpus.annotations().len(),
        corpus.artworks().len(),
        t.elapsed()
    );
    Ok(corpus)
}

/// Corpus with a split attached: the split file when given, otherwise a seeded draw.
fn load_split_corpus(cfg: &RunConfig) -> Result<Corpus, Failure> {
    let corpus = load_corpus(cfg)?;
    Ok(match &cfg.split_file {
        Some(p) => corpus.with_split_csv(open(p)?, &name(p))?,
        None => corpus.assign_splits(cfg.split_ratios, cfg.seed)?,
    })
}

fn out_path(cfg: &RunConfig, file: &str) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| internal(&cfg.out_dir.display().to_string(), e))?;
    Ok(cfg.out_dir.join(file))
}

fn create(cfg: &RunConfig, file: &str) -> Result<std::io::BufWriter<File>, Failure> {
    let p = out_path(cfg, file)?;
    let f = File::create(&p).map_err(|e| internal(&p.display().to_string(), e))?;
    Ok(std::io::BufWriter::new(f))
}

/// Write `value` as `<stem>.<ext>` for every requested format.
fn write_report(cfg: &RunConfig, stem: &str, value: &Value) -> Result<(), Failure> {
    for &emit in &cfg.emit {
        let file = format!("{stem}.{}", emit.extension());
        let mut w = create(cfg, &file)?;
        report::write_report(value, emit, &mut w).map_err(|e| internal(&file, e))?;
        w.flush().map_err(|e| internal(&file, e))?;
    }
    Ok(())
}

fn to<T: serde::Serialize + ?Sized>(x: &T) -> Result<Value, Failure> {
    report::to_value(x).map_err(|e| internal("report", e))
}

fn csv_writer(cfg: &RunConfig, file: &str) -> Result<csv::Writer<std::io::BufWriter<File>>, Failure> {
    Ok(csv::Writer::from_writer(create(cfg, file)?))
}

fn finish_csv<W: Write>(mut w: csv::Writer<W>, file: &str) -> Result<(), Failure> {
    w.flush().map_err(|e| internal(file, e))
}

fn csv_err(file: &str) -> impl Fn(csv::Error) -> Failure + '_ {
    move |e| internal(file, e)
}

fn tagger(cfg: &RunConfig) -> Result<&'static TaggerModel, Failure> {
    match &cfg.tagger_model {
        Some(p) => {
            let bytes = std::fs::read(p).map_err(|e| Failure::Data(format!("{}: {e}", p.display())))?;
            Ok(leak(TaggerModel::from_json(&bytes)?))
        }
        None => Ok(TaggerModel::bundled()),
    }
}

fn affect_lexicons(cfg: &RunConfig) -> Result<AffectLexicons<'static>, Failure> {
    let l = &cfg.lexicons;
    let concreteness = match &l.concreteness {
        Some(p) => leak(ConcretenessLexicon::load(p)?),
        None => {
            log::warn!("no concreteness lexicon configured; using the small bundled seed");
            leak(ConcretenessLexicon::bundled_seed())
        }
    };
    let sentiment = match (&l.sentiment, &l.sentiment_rules) {
        (Some(lex), Some(rules)) => leak(SentimentLexicon::load(lex, rules)?),
        _ => SentimentLexicon::bundled(),
    };
    let subjectivity = match &l.subjectivity {
        Some(p) => leak(SubjectivityLexicon::load(p)?),
        None => SubjectivityLexicon::bundled(),
    };
    Ok(AffectLexicons {
        concreteness,
        sentiment,
        subjectivity,
        similes: similes(cfg)?,
    })
}

fn similes(cfg: &RunConfig) -> Result<&'static SimileLemmaList, Failure> {
    Ok(match &cfg.lexicons.similes {
        Some(p) => leak(SimileLemmaList::load(p)?),
        None => SimileLemmaList::bundled(),
    })
}

fn nb_orders(cfg: &RunConfig) -> BTreeSet<usize> {
    cfg.nb_orders.iter().copied().collect()
}

fn annotations_in(corpus: &Corpus, split: Split) -> Vec<(&str, Emotion)> {
    corpus
        .annotations_in(split)
        .into_iter()
        .map(|a| (a.utterance.as_str(), a.emotion))
        .collect()
}

fn train_model(cfg: &RunConfig, corpus: &Corpus) -> Result<NbModel, Failure> {
    let train = annotations_in(corpus, Split::Train);
    let t = Instant::now();
    let m = NbModel::train(train.iter().copied(), cfg.nb_alpha, &nb_orders(cfg))?;
    log::info!("trained on {} utterances in {:.2?}", train.len(), t.elapsed());
    Ok(m)
}

fn load_model(path: &Path) -> Result<NbModel, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    NbModel::from_json(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn probs_record(id: &str, d: &EmotionDistribution) -> Vec<String> {
    let mut row = vec![id.to_string(), d.argmax().to_string()];
    row.extend(d.probs().iter().map(|&p| fmt_float(p)));
    row
}

fn emotion_header(first: &[&str]) -> Vec<String> {
    first
        .iter()
        .map(|s| s.to_string())
        .chain(Emotion::ALL.iter().map(|e| e.as_str().replace(' ', "-")))
        .collect()
}

// ---------------------------------------------------------------------------
// ingest

pub fn ingest(cfg: &RunConfig) -> Result<(), Failure> {
    let corpus = load_split_corpus(cfg)?;
    let counts = corpus.emotion_counts();
    let mut splits = BTreeMap::new();
    for s in Split::ALL {
        splits.insert(
            s.as_str(),
            json!({
                "artworks": corpus.artworks_in(s).len(),
                "annotations": corpus.annotations_in(s).len(),
            }),
        );
    }
    let emotions: BTreeMap<&str, usize> = Emotion::ALL.iter().map(|e| (e.as_str(), counts[e.index()])).collect();
    let styles: BTreeSet<&str> = corpus.artworks().iter().map(|a| a.art_style.as_str()).collect();
    let summary = json!({
        "config": cfg.echo(),
        "annotations": corpus.annotations().len(),
        "artworks": corpus.artworks().len(),
        "art_styles": styles.len(),
        "with_genre": corpus.artworks().iter().filter(|a| a.genre.is_some()).count(),
        "emotions": emotions,
        "splits": splits,
    });
    write_report(cfg, "summary", &summary)?;
    let mut w = create(cfg, "split.csv")?;
    corpus.write_split_csv(&mut w).map_err(|e| internal("split.csv", e))?;
    w.flush().map_err(|e| internal("split.csv", e))
}

// ---------------------------------------------------------------------------
// analyze

pub fn analyze(cfg: &RunConfig) -> Result<(), Failure> {
    let corpus = load_corpus(cfg)?;
    let lex = affect_lexicons(cfg)?;
    let pipeline = TextPipeline::new(tagger(cfg)?, Lemmatizer::bundled());

    let t = Instant::now();
    let utts = analytics::process_corpus(&corpus, pipeline);
    let captions = analytics::caption_stats(&utts);
    let diversity = analytics::image_diversity_stats(&corpus, &utts)?;
    let histogram = analytics::emotion_histogram(&corpus)?;
    let majority = analytics::strong_majority_fraction(&corpus);
    let entropies = analytics::artwork_entropies(&corpus);
    let by_genre = analytics::genre_entropy(&corpus, GroupBy::Genre).ok();
    let by_style = analytics::genre_entropy(&corpus, GroupBy::ArtStyle).ok();
    let scores = analytics::score_utterances(&corpus, &utts, lex);
    let affect = analytics::affect_distributions(&utts, &scores, lex);
    log::info!("analysis took {:.2?}", t.elapsed());

    let mean_entropy = if entropies.is_empty() {
        0.0
    } else {
        entropies.iter().map(|e| e.1).sum::<f64>() / entropies.len() as f64
    };
    let mut majority_emotions: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &majority.majority {
        *majority_emotions.entry(e.as_str()).or_default() += 1;
    }
    let out = json!({
        "config": cfg.echo(),
        "corpus": {
            "annotations": corpus.annotations().len(),
            "artworks": corpus.artworks().len(),
        },
        "captions": to(&captions)?,
        "image_diversity": to(&diversity)?,
        "emotion_histogram": to(&histogram)?,
        "polarity_cooccurrence": {
            "positive_negative": analytics::polarity_cooccurrence(&corpus, false),
            "with_something_else": analytics::polarity_cooccurrence(&corpus, true),
        },
        "strong_majority": {
            "fraction": majority.fraction,
            "qualifying": majority.artworks.len(),
            "annotated_artworks": majority.annotated_artworks,
            "by_emotion": majority_emotions,
        },
        "entropy": {
            "mean_bits": mean_entropy,
            "by_genre": by_genre.map(|g| to(&g)).transpose()?,
            "by_art_style": by_style.map(|g| to(&g)).transpose()?,
        },
        "affect": to(&affect)?,
    });
    write_report(cfg, "analysis", &out)?;

    let file = "utterances.csv";
    let mut w = csv_writer(cfg, file)?;
    w.write_record([
        "index",
        "painting",
        "emotion",
        "words",
        "mean_concreteness",
        "covered_word_fraction",
        "sentiment_compound",
        "sentiment_class",
        "subjectivity",
        "simile",
    ])
    .map_err(csv_err(file))?;
    for (i, ((a, u), s)) in corpus.annotations().iter().zip(&utts).zip(&scores).enumerate() {
        w.write_record([
            i.to_string(),
            corpus.artwork(a.artwork).id.clone(),
            a.emotion.to_string(),
            u.len().to_string(),
            s.mean_concreteness.map(fmt_float).unwrap_or_default(),
            fmt_float(s.covered_word_fraction),
            fmt_float(s.sentiment_compound),
            s.sentiment_class.to_string(),
            fmt_float(s.subjectivity),
            s.simile.clone().unwrap_or_default(),
        ])
        .map_err(csv_err(file))?;
    }
    finish_csv(w, file)?;

    let file = "artworks.csv";
    let mut w = csv_writer(cfg, file)?;
    w.write_record(["painting", "art_style", "genre", "annotations", "entropy_bits", "strong_majority"])
        .map_err(csv_err(file))?;
    let majority_of: BTreeMap<usize, Emotion> =
        majority.artworks.iter().copied().zip(majority.majority.iter().copied()).collect();
    for (i, h) in entropies {
        let art = corpus.artwork(i);
        w.write_record([
            art.id.clone(),
            art.art_style.clone(),
            art.genre.clone().unwrap_or_default(),
            corpus.annotation_count_of(i).to_string(),
            fmt_float(h),
            majority_of.get(&i).map(|e| e.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err(file))?;
    }
    finish_csv(w, file)
}

// ---------------------------------------------------------------------------
// classify

#[derive(Args)]
pub struct ClassifyArgs {
    /// Use a saved model instead of training one.
    #[arg(long)]
    model: Option<PathBuf>,

    /// Utterances to label, one per line (`-` for stdin).
    #[arg(long)]
    input: Option<PathBuf>,
}

pub fn classify(cfg: &RunConfig, args: ClassifyArgs) -> Result<(), Failure> {
    let model = match &args.model {
        Some(p) => load_model(p)?,
        None => {
            let corpus = load_split_corpus(cfg)?;
            let m = train_model(cfg, &corpus)?;
            let test = annotations_in(&corpus, Split::Test);
            let ev = evaluate_classifier(&m, &test)?;
            let mut confusion = BTreeMap::new();
            for g in Emotion::ALL {
                let row: BTreeMap<&str, usize> = Emotion::ALL
                    .iter()
                    .map(|p| (p.as_str(), ev.confusion[g.index()][p.index()]))
                    .collect();
                confusion.insert(g.as_str(), row);
            }
            let out = json!({
                "config": cfg.echo(),
                "train_utterances": corpus.annotations_in(Split::Train).len(),
                "test_utterances": ev.n,
                "vocabulary": m.vocabulary_size(),
                "accuracy": ev.accuracy,
                "coarse_accuracy": ev.coarse_accuracy,
                "coarse_utterances": ev.coarse_n,
                "majority_baseline": ev.majority_baseline,
                "confusion": confusion,
            });
            write_report(cfg, "classifier", &out)?;
            let mut w = create(cfg, "nb_model.json")?;
            w.write_all(m.to_json()?.as_bytes())
                .and_then(|_| w.write_all(b"\n"))
                .and_then(|_| w.flush())
                .map_err(|e| internal("nb_model.json", e))?;
            m
        }
    };

    if let Some(input) = &args.input {
        let text = if input.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Data(format!("stdin: {e}")))?;
            s
        } else {
            let mut s = String::new();
            open(input)?
                .read_to_string(&mut s)
                .map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
            s
        };
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l))
            .collect();
        let preds: Vec<EmotionDistribution> = lines.par_iter().map(|(_, l)| model.predict(l)).collect();
        let file = "predictions.csv";
        let mut w = csv_writer(cfg, file)?;
        w.write_record(emotion_header(&["utterance_id", "argmax"])).map_err(csv_err(file))?;
        for ((id, _), d) in lines.iter().zip(&preds) {
            w.write_record(probs_record(&id.to_string(), d)).map_err(csv_err(file))?;
        }
        finish_csv(w, file)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// eval

#[derive(Args)]
pub struct EvalArgs {
    /// `painting,utterance` CSV, one generation per artwork.
    #[arg(long)]
    generations: PathBuf,

    /// Split whose artworks are evaluated (train, val, test or all).
    #[arg(long, default_value = "test")]
    split: String,

    /// Saved classifier for Emo-Align; trained on the train split otherwise.
    #[arg(long)]
    model: Option<PathBuf>,

    /// Per-artwork emotion distributions (`painting` + nine probabilities).
    #[arg(long)]
    predictions: Option<PathBuf>,
}

pub fn eval(cfg: &RunConfig, args: EvalArgs) -> Result<(), Failure> {
    let split: Option<Split> = match args.split.as_str() {
        "all" => None,
        s => Some(s.parse().map_err(|e| Failure::Config(format!("--split: {e}")))?),
    };
    let corpus = load_split_corpus(cfg)?;
    let all_gens = eval::read_generations(open(&args.generations)?, &name(&args.generations))?;
    for id in all_gens.keys() {
        if corpus.artwork_index(id).is_none() {
            return Err(emocap::Error::UnknownArtwork(id.clone()).into());
        }
    }
    let artworks: Vec<usize> = match split {
        Some(s) => corpus.artworks_in(s),
        None => (0..corpus.artworks().len()).collect(),
    };
    let mut generations = eval::GenerationSet::new();
    for &i in &artworks {
        let id = &corpus.artwork(i).id;
        let g = all_gens
            .get(id)
            .ok_or_else(|| emocap::Error::MissingGeneration(id.clone()))?;
        generations.insert(id.clone(), g.clone());
    }
    if generations.is_empty() {
        return Err(Failure::Data(format!("split `{}` has no artworks", args.split)));
    }
    let references = eval::references_from_corpus(&corpus, None);
    let training: Vec<String> = corpus
        .annotations_in(Split::Train)
        .into_iter()
        .map(|a| a.utterance.clone())
        .collect();
    let model = match &args.model {
        Some(p) => load_model(p)?,
        None => train_model(cfg, &corpus)?,
    };
    let t = Instant::now();
    let rep = eval::metric_report(&EvalInputs {
        generations: &generations,
        references: &references,
        training: &training,
        corpus: &corpus,
        predictor: &model,
        similes: similes(cfg)?,
        lcs_subsample: cfg.lcs_subsample,
        seed: cfg.seed,
    })?;
    log::info!("metrics took {:.2?}", t.elapsed());

    let image = match &args.predictions {
        Some(p) => {
            let preds = eval::read_predictions(open(p)?, &name(p))?;
            let r = eval::evaluate_image_predictions(&preds, &corpus, Some(&artworks))?;
            Some(to(&r)?)
        }
        None => None,
    };
    let mut config = cfg.echo();
    if let Value::Object(m) = &mut config {
        m.insert("eval_split".into(), args.split.clone().into());
        for (k, v) in &rep.config {
            m.insert(k.clone(), v.clone());
        }
    }
    let out = json!({
        "config": config,
        "metrics": rep.metrics,
        "counts": rep.counts,
        "image_predictions": image,
    });
    write_report(cfg, "eval", &out)
}

// ---------------------------------------------------------------------------
// inject

#[derive(Args)]
pub struct InjectArgs {
    /// `painting,utterance` CSV of captions to rewrite.
    #[arg(long)]
    captions: PathBuf,

    /// Per-artwork emotion distributions deciding each target sentiment.
    #[arg(long, conflicts_with = "target")]
    distributions: Option<PathBuf>,

    /// One sentiment for every caption (POSITIVE or NEGATIVE).
    #[arg(long)]
    target: Option<String>,

    /// Recount ANP frequencies on the corpus before choosing adjectives.
    #[arg(long)]
    recount: bool,
}

#[derive(serde::Deserialize)]
struct CaptionRow {
    painting: String,
    utterance: String,
}

pub fn inject(cfg: &RunConfig, args: InjectArgs) -> Result<(), Failure> {
    let mut lex = match &cfg.lexicons.anps {
        Some(p) => AnpLexicon::load(p)?,
        None => AnpLexicon::bundled_seed(),
    };
    let tagger = tagger(cfg)?;
    let pipeline = TextPipeline::new(tagger, Lemmatizer::bundled());
    if args.recount {
        let corpus = load_corpus(cfg)?;
        let toks: Vec<Vec<String>> = corpus
            .annotations()
            .par_iter()
            .map(|a| emocap::textproc::tokenize(&a.utterance))
            .collect();
        lex.recount(toks.iter().map(|t| t.as_slice()));
    }

    let fixed: Option<Polarity> = args
        .target
        .as_deref()
        .map(|t| t.parse().map_err(|e| Failure::Config(format!("--target: {e}"))))
        .transpose()?;
    let dists = match (&args.distributions, fixed) {
        (Some(p), _) => Some(eval::read_predictions(open(p)?, &name(p))?),
        (None, Some(_)) => None,
        (None, None) => return Err(Failure::Config("inject: one of --distributions or --target is required".into())),
    };

    let cap_name = name(&args.captions);
    let mut rdr = csv::Reader::from_reader(open(&args.captions)?);
    let mut rows = Vec::new();
    for (i, r) in rdr.deserialize::<CaptionRow>().enumerate() {
        rows.push(r.map_err(|e| Failure::Data(format!("{cap_name}: row {}: {e}", i + 2)))?);
    }

    let results = rows
        .par_iter()
        .enumerate()
        .map(|(i, row)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let target = match (&dists, fixed) {
                (Some(d), _) => {
                    let dist = d
                        .get(&row.painting)
                        .ok_or_else(|| emocap::Error::MissingPrediction(row.painting.clone()))?;
                    resolve_sentiment(dist, &mut rng)
                }
                (None, Some(t)) => t,
                (None, None) => unreachable!(),
            };
            let utt = pipeline.process(&row.utterance);
            Ok(inject_anp(&utt, target, &lex, &mut rng))
        })
        .collect::<Result<Vec<_>, emocap::Error>>()?;

    let file = "injected.csv";
    let mut w = csv_writer(cfg, file)?;
    w.write_record(["painting", "utterance", "original", "injected", "adjective", "noun", "sentiment"])
        .map_err(csv_err(file))?;
    for (row, r) in rows.iter().zip(&results) {
        let (adj, noun) = r.anp.clone().unwrap_or_default();
        w.write_record([
            row.painting.as_str(),
            r.utterance.as_str(),
            row.utterance.as_str(),
            if r.injected { "true" } else { "false" },
            adj.as_str(),
            noun.as_str(),
            &r.sentiment.to_string(),
        ])
        .map_err(csv_err(file))?;
    }
    finish_csv(w, file)?;
    let injected = results.iter().filter(|r| r.injected).count();
    let summary = json!({
        "config": cfg.echo(),
        "captions": results.len(),
        "injected": injected,
        "recount": args.recount,
    });
    write_report(cfg, "inject", &summary)
}

// ---------------------------------------------------------------------------
// tag-train

#[derive(Args)]
pub struct TagTrainArgs {
    /// Tagged sentences, one per line as `word/TAG` tokens.
    #[arg(long)]
    tagged: PathBuf,

    #[arg(long, default_value_t = 5)]
    epochs: usize,

    /// Sentences held out from the end for an accuracy check.
    #[arg(long, default_value_t = 0)]
    holdout: usize,
}

pub fn tag_train(cfg: &RunConfig, args: TagTrainArgs) -> Result<(), Failure> {
    let sents = read_tagged_corpus(BufReader::new(open(&args.tagged)?), &name(&args.tagged))?;
    if args.holdout >= sents.len() {
        return Err(Failure::Config(format!(
            "--holdout {} leaves no training sentences out of {}",
            args.holdout,
            sents.len()
        )));
    }
    let (train, test) = sents.split_at(sents.len() - args.holdout);
    let tc = TrainConfig {
        epochs: args.epochs,
        seed: cfg.seed,
        ..TrainConfig::default()
    };
    let t = Instant::now();
    let m = train_tagger(train, &tc)?;
    log::info!("trained in {:.2?}: {} features", t.elapsed(), m.feature_count());
    let mut out = json!({
        "config": cfg.echo(),
        "sentences": train.len(),
        "epochs": args.epochs,
        "features": m.feature_count(),
        "dictionary": m.tag_dict().len(),
    });
    if !test.is_empty() {
        out["holdout_accuracy"] = tagging_accuracy(&m, test).into();
    }
    let mut w = create(cfg, "tagger.json")?;
    w.write_all(&m.to_json()?).and_then(|_| w.flush()).map_err(|e| internal("tagger.json", e))?;
    write_report(cfg, "tag_train", &out)
}
