//! Acceptance criteria 1-7, one status line each.
//!
//! Criterion 6 needs the public corpus release: set `EMOCAP_RELEASE_CSV` to the
//! release CSV and, for the concreteness check, `CONCRETENESS_TSV` to the
//! 40k-lemma concreteness norms (`Word`, `Conc.M` columns).
//!
//! Run with: `cargo test -p emocap-cli --test acceptance`

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use emocap::affect::AffectLexicons;
use emocap::analytics::{self, strict_majority};
use emocap::classifier::{evaluate_classifier, EmotionPredictor, NbModel};
use emocap::eval::{
    self, bleu_tokens, evaluate_image_predictions, lcs, meteor_tokens, rouge_l_tokens, EvalInputs, MeteorParams,
};
use emocap::lexicons::{ConcretenessLexicon, SentimentLexicon, SimileLemmaList, SubjectivityLexicon};
use emocap::textproc::{tokenize, Lemmatizer, TaggerModel, TextPipeline};
use emocap::{Corpus, CorpusFormat, Emotion, EmotionDistribution, Split};

enum Status {
    Pass(String),
    Fail(String),
    NotRun(String),
}

type Check = Result<String, String>;

type Pairs = Vec<(Vec<String>, Vec<Vec<String>>)>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(got: f64, want: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{what}: got {got}, want {want} (tol {tol})"))
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture_corpus() -> Corpus {
    Corpus::load(&root().join("fixtures/corpus_200.csv"), CorpusFormat::Csv).unwrap()
}

fn toks(s: &str) -> Vec<String> {
    tokenize(s)
}

fn pair(h: &str, refs: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    (toks(h), refs.iter().map(|r| toks(r)).collect())
}

// ---------------------------------------------------------------------------
// 1. metric oracles

fn lcs_cases() -> Result<usize, String> {
    // (a, b, hand-traced LCS length)
    let cases: [(&str, &str, usize); 11] = [
        ("a b c d", "a x c", 2),
        ("the cat sat on the mat", "the cat on the mat", 5),
        ("a b c", "c b a", 1),
        ("a b c d e", "", 0),
        ("a a a", "a", 1),
        ("x y z", "a b c", 0),
        ("a b a b", "b a b a", 3),
        ("one two three four five", "one three five", 3),
        ("the dark sky over the sea", "a sea under the dark sky", 3),
        ("a b c d e f", "a c e b d f", 4),
        ("i like the blue sky", "i like the blue sky", 5),
    ];
    for (a, b, want) in cases {
        let got = lcs(&toks(a), &toks(b));
        ensure(got == want, || format!("LCS({a:?}, {b:?}) = {got}, want {want}"))?;
        ensure(lcs(&toks(b), &toks(a)) == want, || format!("LCS not symmetric on {a:?}"))?;
    }
    Ok(cases.len())
}

fn bleu_cases() -> Result<usize, String> {
    let e1 = (-1.0f64).exp();
    // (pairs, order, hand-traced value)
    let cases: Vec<(Pairs, usize, f64)> = vec![
        // clip(the)=1 of 2 unigrams, c = r
        (vec![pair("the cat", &["the dog"])], 1, 0.5),
        (vec![pair("a small red bird", &["a small red bird"])], 4, 1.0),
        (vec![pair("a small red bird", &["a small red bird"])], 2, 1.0),
        (vec![pair("green apples", &["a dark storm"])], 1, 0.0),
        // the x4 clipped to 1
        (vec![pair("the the the the", &["the cat"])], 1, 0.25),
        // p1 = p2 = 1, c = 3 < r = 6: BP = exp(1 - 2)
        (vec![pair("the cat sat", &["the cat sat on the mat"])], 2, e1),
        // p1 = 4/6 (second "a" unmatched), p2 = 1/5 ("bird on"), c = 6 > r = 5
        (vec![pair("a red bird on a tree", &["a bird on the tree"])], 2, (4.0f64 / 6.0 * 0.2).sqrt()),
        // closest reference lengths 2 and 6 tie at distance 2; shorter wins, c = 4 > 2
        (vec![pair("a b c d", &["a b", "a b c d e f"])], 2, 1.0),
        // corpus level: unigrams (2 + 0) / 4, bigrams (1 + 0) / 2
        (vec![pair("the cat", &["the cat"]), pair("a dog", &["the bird"])], 1, 0.5),
        (vec![pair("the cat", &["the cat"]), pair("a dog", &["the bird"])], 2, 0.5),
        // p1 = 1, c = 2, r = 4
        (vec![pair("the cat", &["the cat is here"])], 1, e1),
        // p1 = 4/5, p2 = 2/4, p3 = 1/3, p4 = 0
        (vec![pair("a b c d e", &["a b c x e"])], 3, (4.0f64 / 5.0 * 0.5 / 3.0).cbrt()),
        (vec![pair("a b c d e", &["a b c x e"])], 4, 0.0),
        // max reference counts: the 2, cat 1; bigrams "the the" and "the cat" each found once
        (vec![pair("the the cat", &["the cat", "the the dog"])], 2, 1.0),
    ];
    for (i, (pairs, n, want)) in cases.iter().enumerate() {
        let got = bleu_tokens(pairs, *n).map_err(|e| e.to_string())?;
        close(got, *want, 1e-9, &format!("BLEU-{n} case {i}"))?;
    }
    Ok(cases.len())
}

fn rouge_cases() -> Result<usize, String> {
    let f = |p: f64, r: f64| {
        let b2 = 1.2f64 * 1.2;
        (1.0 + b2) * p * r / (r + b2 * p)
    };
    // (pairs, hand-traced P and R per artwork, reduced by max over refs then mean)
    let cases: Vec<(Pairs, f64)> = vec![
        (vec![pair("a small red bird", &["a small red bird"])], 1.0),
        (vec![pair("the cat sat", &["the cat ran"])], 2.0 / 3.0),
        (vec![pair("green apples", &["a dark storm"])], 0.0),
        // LCS 2: P = 2/4, R = 2/3
        (vec![pair("a b c d", &["a x c"])], f(0.5, 2.0 / 3.0)),
        // LCS 5: P = 5/6, R = 1
        (vec![pair("the cat sat on the mat", &["the cat on the mat"])], f(5.0 / 6.0, 1.0)),
        // ref "a": P = 1/2, R = 1; ref "a b c": P = 1, R = 2/3
        (vec![pair("a b", &["a", "a b c"])], f(0.5, 1.0).max(f(1.0, 2.0 / 3.0))),
        (vec![pair("x y", &["x y"]), pair("x y", &["p q"])], 0.5),
        // LCS 3 of 4 both ways
        (vec![pair("a b a b", &["b a b a"])], 0.75),
        // LCS 3: P = 3/5, R = 1
        (vec![pair("one two three four five", &["one three five"])], f(0.6, 1.0)),
        // LCS 1: P = 1, R = 1/4
        (vec![pair("x", &["x y z w"])], f(1.0, 0.25)),
    ];
    for (i, (pairs, want)) in cases.iter().enumerate() {
        close(rouge_l_tokens(pairs), *want, 1e-9, &format!("ROUGE-L case {i}"))?;
    }
    Ok(cases.len())
}

fn meteor_cases() -> Result<usize, String> {
    let fmean = |p: f64, r: f64| p * r / (0.9 * p + 0.1 * r);
    let pen = |chunks: f64, m: f64| 0.5 * (chunks / m).powi(3);
    let cases: Vec<(Pairs, f64)> = vec![
        // identical 4 words: 1 chunk
        (vec![pair("a small red bird", &["a small red bird"])], 1.0 - 0.5 / 64.0),
        (vec![pair("green apples", &["a dark storm"])], 0.0),
        // left-to-right exact matches (0,1) (1,4) (2,5) (3,0) (4,3) (5,2): 5 chunks of 6
        (vec![pair("the cat sat on the mat", &["on the mat the cat sat"])], 1.0 - pen(5.0, 6.0)),
        // stem stage only: birds~bird (0,1), fly~flies (1,2); 1 chunk, P = 1, R = 2/3
        (vec![pair("birds fly", &["a bird flies"])], fmean(1.0, 2.0 / 3.0) * (1.0 - pen(1.0, 2.0))),
        // one match of two each side
        (vec![pair("the cat", &["the dog"])], fmean(0.5, 0.5) * (1.0 - pen(1.0, 1.0))),
        // (0,0) (1,1) (2,3) (3,4): 2 chunks, P = 1, R = 4/5
        (vec![pair("a b c d", &["a b x c d"])], fmean(1.0, 0.8) * (1.0 - pen(2.0, 4.0))),
        // the->0, the->2, cat->1: 3 chunks
        (vec![pair("the the cat", &["the cat the"])], 1.0 - pen(3.0, 3.0)),
        // ref "a b" is identical (1 chunk of 2); ref "a" scores lower
        (
            vec![pair("a b", &["a", "a b"])],
            (1.0 - pen(1.0, 2.0)).max(fmean(0.5, 1.0) * (1.0 - pen(1.0, 1.0))),
        ),
        (vec![pair("x y", &["x y"]), pair("x y", &["p q"])], (1.0 - pen(1.0, 2.0)) / 2.0),
        // (0,0) (2,1) (4,2): 3 chunks, P = 3/5, R = 1
        (vec![pair("one two three four five", &["one three five"])], fmean(0.6, 1.0) * (1.0 - pen(3.0, 3.0))),
        // exact trees, stem painted~painting; contiguous
        (vec![pair("painted trees", &["painting trees"])], 1.0 - pen(1.0, 2.0)),
    ];
    for (i, (pairs, want)) in cases.iter().enumerate() {
        close(meteor_tokens(pairs, MeteorParams::default()), *want, 1e-9, &format!("METEOR case {i}"))?;
    }
    close(1.0 - 0.5 / 64.0, 0.9922, 5e-5, "METEOR identical 4-word value")?;
    Ok(cases.len())
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let n = [lcs_cases()?, bleu_cases()?, rouge_cases()?, meteor_cases()?];
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2}s"))?;
    ensure(n.iter().all(|&k| k >= 10), || format!("fewer than 10 cases: {n:?}"))?;
    Ok(format!(
        "LCS {} / BLEU {} / ROUGE-L {} / METEOR {} hand traces within 1e-9 in {secs:.3}s",
        n[0], n[1], n[2], n[3]
    ))
}

// ---------------------------------------------------------------------------
// 2. sentiment parity

fn criterion_2() -> Check {
    let path = root().join("crates/core/tests/fixtures/sentiment_golden.tsv");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let lex = SentimentLexicon::bundled();
    let mut n = 0;
    let mut worst = 0.0f64;
    for line in text.lines().skip(1) {
        let (want, sentence) = line.split_once('\t').ok_or("malformed golden line")?;
        let want: f64 = want.parse().map_err(|_| format!("bad number {want}"))?;
        let got = emocap::affect::sentiment(sentence, lex).compound;
        worst = worst.max((got - want).abs());
        n += 1;
    }
    ensure(n == 50, || format!("{n} golden sentences, want 50"))?;
    ensure(worst <= 1e-4, || format!("max |diff| {worst:e}"))?;
    Ok(format!("{n} sentences, max |diff| {worst:.1e} vs reference implementation"))
}

// ---------------------------------------------------------------------------
// 3. analytics identities

fn corpus_of(rows: &[(&str, Emotion)]) -> Corpus {
    let mut csv = String::from("art_style,painting,emotion,utterance\n");
    for (art, e) in rows {
        csv.push_str(&format!("Style,{art},{},some words\n", e.as_str()));
    }
    Corpus::read_csv(csv.as_bytes(), "inline").unwrap()
}

fn criterion_3() -> Check {
    let max_h = 9f64.log2();
    let fixture = fixture_corpus();
    for (i, h) in analytics::artwork_entropies(&fixture) {
        ensure((0.0..=max_h + 1e-12).contains(&h), || format!("artwork {i} entropy {h}"))?;
    }

    let mut rows: Vec<(&str, Emotion)> = vec![("unanimous", Emotion::Awe); 5];
    rows.extend(Emotion::ALL.iter().map(|&e| ("uniform", e)));
    let h = analytics::artwork_entropies(&corpus_of(&rows));
    close(h[0].1, 0.0, 0.0, "unanimous entropy")?;
    close(h[1].1, 3.1699, 5e-5, "uniform entropy")?;

    let hist = analytics::emotion_histogram(&fixture).map_err(|e| e.to_string())?;
    let sum: f64 = hist.fractions.values().sum();
    close(sum, 1.0, 1e-12, "histogram fractions")?;
    close(hist.positive + hist.negative + hist.other, 1.0, 1e-12, "group fractions")?;

    // 3 of 5 is a strict majority, 3 of 6 and 2-2-1 are not
    let ties = corpus_of(&[
        ("five", Emotion::Fear),
        ("five", Emotion::Fear),
        ("five", Emotion::Fear),
        ("five", Emotion::Awe),
        ("five", Emotion::Sadness),
        ("six", Emotion::Fear),
        ("six", Emotion::Fear),
        ("six", Emotion::Fear),
        ("six", Emotion::Awe),
        ("six", Emotion::Awe),
        ("six", Emotion::Awe),
        ("plural", Emotion::Fear),
        ("plural", Emotion::Fear),
        ("plural", Emotion::Awe),
        ("plural", Emotion::Awe),
        ("plural", Emotion::Anger),
    ]);
    let sm = analytics::strong_majority_fraction(&ties);
    ensure(sm.artworks == vec![0] && sm.majority == vec![Emotion::Fear], || format!("strict majority picked {:?}", sm.artworks))?;
    close(sm.fraction, 1.0 / 3.0, 1e-12, "strong-majority fraction")?;

    let positive = corpus_of(&[
        ("p1", Emotion::Awe),
        ("p1", Emotion::Amusement),
        ("p2", Emotion::Contentment),
        ("p2", Emotion::Excitement),
    ]);
    let negative = corpus_of(&[("n1", Emotion::Fear), ("n1", Emotion::Sadness), ("n2", Emotion::Anger)]);
    for (name, c) in [("positive", &positive), ("negative", &negative)] {
        close(analytics::polarity_cooccurrence(c, false), 0.0, 0.0, &format!("{name} co-occurrence"))?;
        close(analytics::polarity_cooccurrence(c, true), 0.0, 0.0, &format!("{name} co-occurrence, three groups"))?;
    }
    Ok(format!(
        "entropy in [0, log2 9] on {} fixture artworks, uniform {:.4}, fractions sum {sum}, tie fixtures, single-sentiment co-occurrence 0",
        fixture.artworks().len(),
        h[1].1
    ))
}

// ---------------------------------------------------------------------------
// 4. classifier

struct MajorityOracle(HashMap<String, Emotion>);

impl EmotionPredictor for MajorityOracle {
    fn predict(&self, utterance: &str) -> EmotionDistribution {
        EmotionDistribution::one_hot(self.0.get(utterance).copied().unwrap_or(Emotion::SomethingElse))
    }
}

fn criterion_4() -> Check {
    let docs = [
        ("warm sun", Emotion::Contentment),
        ("sun sky", Emotion::Contentment),
        ("dark storm", Emotion::Fear),
        ("storm sky", Emotion::Fear),
    ];
    let m = NbModel::train(docs, 1.0, &[1].into()).map_err(|e| e.to_string())?;
    // each class: 4 tokens over a 5-type vocabulary, denominator 9
    let c = 0.5 * (3.0 / 9.0) * (2.0 / 9.0) * (2.0 / 9.0);
    let f = 0.5 * (1.0 / 9.0) * (2.0 / 9.0) * (1.0 / 9.0);
    let d = m.predict("sun sky warm");
    close(d.prob(Emotion::Contentment), c / (c + f), 1e-9, "hand posterior")?;
    close(d.prob(Emotion::Fear), f / (c + f), 1e-9, "hand posterior")?;

    let mut sep = Vec::new();
    for (e, ws) in [
        (Emotion::Anger, ["rage", "fury", "furious"]),
        (Emotion::Awe, ["majestic", "vast", "sublime"]),
        (Emotion::Sadness, ["tears", "grief", "mourning"]),
    ] {
        for i in 0..3 {
            sep.push((format!("{} {}", ws[i], ws[(i + 1) % 3]), e));
        }
    }
    let items: Vec<(&str, Emotion)> = sep.iter().map(|(t, e)| (t.as_str(), *e)).collect();
    let m = NbModel::train(items.iter().copied(), 1.0, &[1, 2].into()).map_err(|e| e.to_string())?;
    let ev = evaluate_classifier(&m, &items).map_err(|e| e.to_string())?;
    close(ev.accuracy, 1.0, 0.0, "separable accuracy")?;

    let oov = m.predict("zebra quantum");
    for e in Emotion::ALL {
        close(oov.prob(e), m.priors().prob(e), 1e-12, "all-OOV prior")?;
    }

    let corpus = fixture_corpus();
    let mut gens = eval::GenerationSet::new();
    let mut oracle = HashMap::new();
    for (i, art) in corpus.artworks().iter().enumerate() {
        let text = format!("caption for {}", art.id);
        if let Some(e) = strict_majority(&corpus.emotion_counts_of(i)) {
            oracle.insert(text.clone(), e);
        }
        gens.insert(art.id.clone(), text);
    }
    let ea = eval::emo_align(&gens, &corpus, &MajorityOracle(oracle)).map_err(|e| e.to_string())?;
    close(ea.value, 1.0, 0.0, "majority-oracle Emo-Align")?;
    Ok(format!(
        "hand posterior {:.6}, separable accuracy 1.0, all-OOV = priors, oracle Emo-Align 1.0 over {} artworks",
        d.prob(Emotion::Contentment),
        ea.qualifying
    ))
}

// ---------------------------------------------------------------------------
// 5. determinism

fn run_analyze(out: &Path, workers: usize) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_emocap"))
        .arg("analyze")
        .arg("--config")
        .arg(root().join("fixtures/analyze.toml"))
        .args(["--emit", "json,csv,text", "--workers", &workers.to_string(), "--out"])
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("analyze exited with {status}"))?;
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(out).map_err(|e| e.to_string())? {
        let p = entry.map_err(|e| e.to_string())?.path();
        let bytes = std::fs::read(&p).map_err(|e| e.to_string())?;
        files.insert(p.file_name().unwrap().to_string_lossy().into_owned(), bytes);
    }
    Ok(files)
}

fn criterion_5() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = run_analyze(&dir.path().join("w1a"), 1)?;
    let b = run_analyze(&dir.path().join("w1b"), 1)?;
    let c = run_analyze(&dir.path().join("w4"), 4)?;
    ensure(a.len() >= 5, || format!("only {} output files", a.len()))?;
    for (name, other) in [("second run", &b), ("--workers 4", &c)] {
        ensure(a.keys().eq(other.keys()), || format!("{name}: different file sets"))?;
        for (f, bytes) in &a {
            ensure(bytes == &other[f], || format!("{name}: {f} differs"))?;
        }
    }
    let total: usize = a.values().map(Vec::len).sum();
    Ok(format!("{} files ({total} bytes) identical across two runs and --workers 1/4", a.len()))
}

// ---------------------------------------------------------------------------
// 6. full corpus

struct Band {
    name: &'static str,
    got: f64,
    want: f64,
    tol: f64,
}

fn criterion_6() -> Status {
    let Some(csv) = std::env::var_os("EMOCAP_RELEASE_CSV").map(PathBuf::from) else {
        return Status::NotRun("set EMOCAP_RELEASE_CSV to the public release CSV (not bundled; no network access at test time)".into());
    };
    match full_corpus(&csv) {
        Ok((bands, skipped)) => {
            let bad: Vec<String> = bands
                .iter()
                .filter(|b| (b.got - b.want).abs() > b.tol)
                .map(|b| format!("{} {:.4} vs {} ± {}", b.name, b.got, b.want, b.tol))
                .collect();
            let summary: Vec<String> = bands.iter().map(|b| format!("{} {:.4}", b.name, b.got)).collect();
            let mut msg = summary.join(", ");
            if !skipped.is_empty() {
                msg.push_str(&format!("; not checked: {}", skipped.join(", ")));
            }
            if bad.is_empty() {
                Status::Pass(msg)
            } else {
                Status::Fail(format!("out of band: {}; {msg}", bad.join("; ")))
            }
        }
        Err(e) => Status::Fail(e),
    }
}

fn full_corpus(csv: &Path) -> Result<(Vec<Band>, Vec<String>), String> {
    let corpus = Corpus::load(csv, CorpusFormat::Csv).map_err(|e| e.to_string())?;
    let mut skipped = Vec::new();
    let conc = match std::env::var_os("CONCRETENESS_TSV") {
        Some(p) => Some(ConcretenessLexicon::load(Path::new(&p)).map_err(|e| e.to_string())?),
        None => {
            skipped.push("mean concreteness (CONCRETENESS_TSV unset)".to_string());
            None
        }
    };
    let seed = ConcretenessLexicon::bundled_seed();
    let lex = AffectLexicons {
        concreteness: conc.as_ref().unwrap_or(&seed),
        sentiment: SentimentLexicon::bundled(),
        subjectivity: SubjectivityLexicon::bundled(),
        similes: SimileLemmaList::bundled(),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().map_err(|e| e.to_string())?;
    let t = Instant::now();
    let (caps, hist, co2, co3, sm, affect) = pool.install(|| {
        let pipeline = TextPipeline::new(TaggerModel::bundled(), Lemmatizer::bundled());
        let utts = analytics::process_corpus(&corpus, pipeline);
        let caps = analytics::caption_stats(&utts);
        let hist = analytics::emotion_histogram(&corpus);
        let co2 = analytics::polarity_cooccurrence(&corpus, false);
        let co3 = analytics::polarity_cooccurrence(&corpus, true);
        let sm = analytics::strong_majority_fraction(&corpus);
        let scores = analytics::score_utterances(&corpus, &utts, lex);
        let affect = analytics::affect_distributions(&utts, &scores, lex);
        (caps, hist, co2, co3, sm, affect)
    });
    let secs = t.elapsed().as_secs_f64();
    let hist = hist.map_err(|e| e.to_string())?;
    let mut bands = vec![
        Band { name: "annotations", got: corpus.annotations().len() as f64, want: 439_121.0, tol: 0.0 },
        Band { name: "positive", got: hist.positive, want: 0.619, tol: 0.002 },
        Band { name: "negative", got: hist.negative, want: 0.263, tol: 0.002 },
        Band { name: "something-else", got: hist.other, want: 0.117, tol: 0.002 },
        Band { name: "co-occurrence", got: co2, want: 0.61, tol: 0.01 },
        Band { name: "co-occurrence (3 groups)", got: co3, want: 0.79, tol: 0.01 },
        Band { name: "strong majority", got: sm.fraction, want: 0.456, tol: 0.005 },
        Band { name: "words", got: caps.mean_words, want: 15.8, tol: 0.5 },
        Band { name: "nouns", got: caps.pos.nouns, want: 4.0, tol: 0.3 },
        Band { name: "pronouns", got: caps.pos.pronouns, want: 0.9, tol: 0.3 },
        Band { name: "adjectives", got: caps.pos.adjectives, want: 1.6, tol: 0.3 },
        Band { name: "adpositions", got: caps.pos.adpositions, want: 1.9, tol: 0.3 },
        Band { name: "verbs", got: caps.pos.verbs, want: 3.0, tol: 0.3 },
        Band { name: "neutral sentiment", got: affect.neutral_fraction, want: 0.165, tol: 0.02 },
        Band { name: "similes", got: affect.simile_prevalence, want: 0.205, tol: 0.03 },
        Band { name: "seconds (4 workers)", got: secs, want: 0.0, tol: 60.0 },
    ];
    if conc.is_some() {
        bands.push(Band {
            name: "concreteness",
            got: affect.mean_concreteness.unwrap_or(f64::NAN),
            want: 2.80,
            tol: 0.1,
        });
    }
    Ok((bands, skipped))
}

// ---------------------------------------------------------------------------
// 7. protocol-only checks

fn criterion_7() -> Check {
    let corpus = fixture_corpus().assign_splits([0.7, 0.1, 0.2], 7).map_err(|e| e.to_string())?;

    let perfect: BTreeMap<String, EmotionDistribution> = (0..corpus.artworks().len())
        .map(|i| (corpus.artwork(i).id.clone(), corpus.empirical_distribution_at(i).unwrap()))
        .collect();
    let img = evaluate_image_predictions(&perfect, &corpus, None).map_err(|e| e.to_string())?;
    close(img.mean_kl, 0.0, 1e-12, "perfect-prediction KL")?;
    close(img.dominant_accuracy, 1.0, 0.0, "perfect-prediction dominant accuracy")?;

    let file = root().join("fixtures/predictions.csv");
    let preds = eval::read_predictions(std::fs::File::open(&file).map_err(|e| e.to_string())?, "predictions.csv")
        .map_err(|e| e.to_string())?;
    let synthetic = evaluate_image_predictions(&preds, &corpus, None).map_err(|e| e.to_string())?;
    ensure(synthetic.mean_kl > 0.0 && synthetic.dominant_accuracy == 1.0, || {
        format!("smoothed synthetic predictions: KL {} accuracy {}", synthetic.mean_kl, synthetic.dominant_accuracy)
    })?;

    let train: Vec<(&str, Emotion)> = corpus
        .annotations_in(Split::Train)
        .into_iter()
        .map(|a| (a.utterance.as_str(), a.emotion))
        .collect();
    let test: Vec<(&str, Emotion)> = corpus
        .annotations_in(Split::Test)
        .into_iter()
        .map(|a| (a.utterance.as_str(), a.emotion))
        .collect();
    let model = NbModel::train(train.iter().copied(), 1.0, &[1, 2].into()).map_err(|e| e.to_string())?;
    let ev = evaluate_classifier(&model, &test).map_err(|e| e.to_string())?;
    ensure(ev.accuracy > ev.majority_baseline, || {
        format!("NB accuracy {} not above majority baseline {}", ev.accuracy, ev.majority_baseline)
    })?;

    let gens = eval::read_generations(
        std::fs::File::open(root().join("fixtures/generations.csv")).map_err(|e| e.to_string())?,
        "generations.csv",
    )
    .map_err(|e| e.to_string())?;
    let refs = eval::references_from_corpus(&corpus, None);
    let training: Vec<String> = train.iter().map(|(t, _)| t.to_string()).collect();
    let rep = eval::metric_report(&EvalInputs {
        generations: &gens,
        references: &refs,
        training: &training,
        corpus: &corpus,
        predictor: &model,
        similes: SimileLemmaList::bundled(),
        lcs_subsample: 50,
        seed: 7,
    })
    .map_err(|e| e.to_string())?;
    for name in eval::METRIC_NAMES {
        ensure(rep.metrics.contains_key(name), || format!("report lacks {name}"))?;
    }
    Ok(format!(
        "perfect image predictions KL 0 / accuracy 1.0; NB fixture accuracy {:.3} > majority {:.3}; report has all {} metric names (speaker rows, neural accuracies and the CNN number are not reproducible here)",
        ev.accuracy,
        ev.majority_baseline,
        eval::METRIC_NAMES.len()
    ))
}

// ---------------------------------------------------------------------------

fn main() {
    let lift = |r: Check| match r {
        Ok(m) => Status::Pass(m),
        Err(m) => Status::Fail(m),
    };
    let results = [
        ("metric oracles", lift(criterion_1())),
        ("sentiment parity", lift(criterion_2())),
        ("analytics identities", lift(criterion_3())),
        ("classifier correctness", lift(criterion_4())),
        ("determinism", lift(criterion_5())),
        ("full-corpus reproduction", criterion_6()),
        ("protocol-only checks", lift(criterion_7())),
    ];
    let mut failed = Vec::new();
    for (i, (name, status)) in results.iter().enumerate() {
        let (tag, msg) = match status {
            Status::Pass(m) => ("PASS", m),
            Status::Fail(m) => {
                failed.push(i + 1);
                ("FAIL", m)
            }
            Status::NotRun(m) => ("NOT RUN", m),
        };
        println!("criterion {} [{name}]: {tag}: {msg}", i + 1);
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
