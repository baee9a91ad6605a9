//! Run configuration: TOML file, then flag overrides, then validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use emocap::eval::DEFAULT_LCS_SUBSAMPLE;
use emocap::report::Emit;
use emocap::CorpusFormat;

use crate::Failure;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LexiconPaths {
    pub concreteness: Option<PathBuf>,
    pub sentiment: Option<PathBuf>,
    pub sentiment_rules: Option<PathBuf>,
    pub subjectivity: Option<PathBuf>,
    pub similes: Option<PathBuf>,
    pub anps: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct TaggerSection {
    model: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct MetricsSection {
    lcs_subsample: Option<usize>,
    nb_alpha: Option<f64>,
    nb_orders: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    corpus: Option<PathBuf>,
    format: Option<String>,
    split_file: Option<PathBuf>,
    split_ratios: Option<[f64; 3]>,
    seed: Option<u64>,
    workers: Option<usize>,
    emit: Option<Vec<String>>,
    out_dir: Option<PathBuf>,
    lexicons: LexiconPaths,
    tagger: TaggerSection,
    metrics: MetricsSection,
}

/// Values given on the command line; each wins over the config file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub corpus: Option<PathBuf>,
    pub format: Option<String>,
    pub split_file: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub emit: Vec<String>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub format: Option<CorpusFormat>,
    pub split_file: Option<PathBuf>,
    pub split_ratios: [f64; 3],
    pub seed: u64,
    pub workers: usize,
    pub emit: Vec<Emit>,
    pub out_dir: PathBuf,
    pub lexicons: LexiconPaths,
    pub tagger_model: Option<PathBuf>,
    pub lcs_subsample: usize,
    pub nb_alpha: f64,
    pub nb_orders: Vec<usize>,
}

fn config_err(field: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Config(format!("{field}: {msg}"))
}

fn rebase(base: Option<&Path>, p: Option<PathBuf>) -> Option<PathBuf> {
    match (base, p) {
        (Some(b), Some(p)) if p.is_relative() => Some(b.join(p)),
        (_, p) => p,
    }
}

impl RunConfig {
    /// Load `config` (if any), apply `over`, validate. Relative paths in the
    /// file resolve against the file's directory.
    pub fn resolve(config: Option<&Path>, over: Overrides) -> Result<RunConfig, Failure> {
        let file: FileConfig = match config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| config_err("--config", format!("{}: {e}", p.display())))?;
                toml::from_str(&text).map_err(|e| config_err("--config", format!("{}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        let base = config.and_then(Path::parent);
        let lex = file.lexicons;
        let lexicons = LexiconPaths {
            concreteness: rebase(base, lex.concreteness),
            sentiment: rebase(base, lex.sentiment),
            sentiment_rules: rebase(base, lex.sentiment_rules),
            subjectivity: rebase(base, lex.subjectivity),
            similes: rebase(base, lex.similes),
            anps: rebase(base, lex.anps),
        };

        let format_str = over.format.or(file.format);
        let format = format_str
            .map(|f| f.parse::<CorpusFormat>().map_err(|e| config_err("format", e)))
            .transpose()?;

        let emit_src = if over.emit.is_empty() {
            file.emit.unwrap_or_else(|| vec!["json".into()])
        } else {
            over.emit
        };
        let mut emit = Vec::new();
        for e in emit_src.iter().flat_map(|s| s.split(',')) {
            let e: Emit = e.parse().map_err(|err| config_err("emit", err))?;
            if !emit.contains(&e) {
                emit.push(e);
            }
        }
        if emit.is_empty() {
            return Err(config_err("emit", "no output format given"));
        }

        let workers = over
            .workers
            .or(file.workers)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers == 0 {
            return Err(config_err("workers", "must be at least 1"));
        }

        let split_ratios = file.split_ratios.unwrap_or([0.85, 0.05, 0.10]);
        emocap::corpus::split_sizes(1, split_ratios).map_err(|e| config_err("split_ratios", e))?;

        let nb_alpha = file.metrics.nb_alpha.unwrap_or(emocap::classifier::DEFAULT_ALPHA);
        if !(nb_alpha > 0.0 && nb_alpha.is_finite()) {
            return Err(config_err("metrics.nb_alpha", "must be a positive number"));
        }
        let nb_orders = file.metrics.nb_orders.unwrap_or_else(|| emocap::classifier::DEFAULT_ORDERS.to_vec());
        if nb_orders.is_empty() || nb_orders.contains(&0) {
            return Err(config_err("metrics.nb_orders", "must be a non-empty list of positive integers"));
        }
        let lcs_subsample = file.metrics.lcs_subsample.unwrap_or(DEFAULT_LCS_SUBSAMPLE);
        if lcs_subsample == 0 {
            return Err(config_err("metrics.lcs_subsample", "must be at least 1"));
        }

        let cfg = RunConfig {
            corpus: over.corpus.or(rebase(base, file.corpus)),
            format,
            split_file: over.split_file.or(rebase(base, file.split_file)),
            split_ratios,
            seed: over.seed.or(file.seed).unwrap_or(0),
            workers,
            emit,
            out_dir: over.out_dir.or(rebase(base, file.out_dir)).unwrap_or_else(|| PathBuf::from("out")),
            lexicons,
            tagger_model: rebase(base, file.tagger.model),
            lcs_subsample,
            nb_alpha,
            nb_orders,
        };
        cfg.check_paths()?;
        Ok(cfg)
    }

    fn check_paths(&self) -> Result<(), Failure> {
        let l = &self.lexicons;
        let fields: [(&str, &Option<PathBuf>); 9] = [
            ("corpus", &self.corpus),
            ("split_file", &self.split_file),
            ("lexicons.concreteness", &l.concreteness),
            ("lexicons.sentiment", &l.sentiment),
            ("lexicons.sentiment_rules", &l.sentiment_rules),
            ("lexicons.subjectivity", &l.subjectivity),
            ("lexicons.similes", &l.similes),
            ("lexicons.anps", &l.anps),
            ("tagger.model", &self.tagger_model),
        ];
        for (field, p) in fields {
            if let Some(p) = p {
                if !p.is_file() {
                    return Err(config_err(field, format!("{}: no such file", p.display())));
                }
            }
        }
        if l.sentiment.is_some() != l.sentiment_rules.is_some() {
            return Err(config_err("lexicons.sentiment_rules", "sentiment and sentiment_rules must be given together"));
        }
        Ok(())
    }

    pub fn require_corpus(&self) -> Result<(&Path, CorpusFormat), Failure> {
        let p = self
            .corpus
            .as_deref()
            .ok_or_else(|| config_err("corpus", "required by this subcommand"))?;
        Ok((p, self.format.unwrap_or_else(|| CorpusFormat::from_path(p))))
    }

    /// Parameters echoed into reports. Worker count and output location are
    /// left out so reports do not depend on them.
    pub fn echo(&self) -> Value {
        let show = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let l = &self.lexicons;
        let mut lex = BTreeMap::new();
        for (k, v) in [
            ("concreteness", &l.concreteness),
            ("sentiment", &l.sentiment),
            ("sentiment_rules", &l.sentiment_rules),
            ("subjectivity", &l.subjectivity),
            ("similes", &l.similes),
            ("anps", &l.anps),
        ] {
            lex.insert(k, show(v).unwrap_or_else(|| "bundled".into()));
        }
        json!({
            "corpus": show(&self.corpus),
            "split_file": show(&self.split_file),
            "split_ratios": self.split_ratios,
            "seed": self.seed,
            "lexicons": lex,
            "tagger_model": show(&self.tagger_model).unwrap_or_else(|| "bundled".into()),
            "lcs_subsample": self.lcs_subsample,
            "nb_alpha": self.nb_alpha,
            "nb_orders": self.nb_orders,
        })
    }
}
