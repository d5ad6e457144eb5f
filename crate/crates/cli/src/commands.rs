use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use gutcheck::corpus::{emit_to_path, generate_synthetic, ingest as read_corpus, split};
use gutcheck::eval::{ablation_sweep, experiment_matrix, run_experiment, ReportRow};
use gutcheck::model::train as fit;
use gutcheck::preprocess::preprocess_record;
use gutcheck::{
    DatasetSplit, EmotionMode, Model, NamedDataset, Pipeline, RawLabel, Report, Source,
    TextContext, VeracityLabel,
};

use crate::config::RunConfig;

/// Writes log lines to stderr and to the run's log file.
struct Tee(Mutex<File>);

impl Write for Tee {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        std::io::stderr().write_all(buf)?;
        self.0.lock().unwrap().write_all(buf)?;
        Ok(buf.len())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.0.lock().unwrap().flush()
    }
}

fn sub(config: &RunConfig, dir: &str, file: &str) -> PathBuf {
    config.out.join(dir).join(file)
}

/// Create the output layout, echo the config and start logging.
pub fn prepare_out(config: &RunConfig) -> Result<()> {
    for dir in ["checkpoints", "reports", "logs"] {
        let path = config.out.join(dir);
        fs::create_dir_all(&path).with_context(|| format!("creating {}", path.display()))?;
    }
    let echo = config.out.join("config.toml");
    fs::write(&echo, config.to_toml()?).with_context(|| format!("writing {}", echo.display()))?;

    let log_path = sub(config, "logs", &format!("{}.log", config.command));
    let file =
        File::create(&log_path).with_context(|| format!("creating {}", log_path.display()))?;
    let _ = env_logger::Builder::new()
        .filter_level(log::LevelFilter::Info)
        .parse_default_env()
        .target(env_logger::Target::Pipe(Box::new(Tee(Mutex::new(file)))))
        .try_init();
    log::info!(
        "{} with seed {}, output in {}",
        config.command,
        config.seed,
        config.out.display()
    );
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_split(config: &RunConfig) -> Result<NamedDataset> {
    let input = config.input()?;
    let records = read_corpus(input)?;
    let parts: DatasetSplit = split(&records, config.data.split, config.seed)?;
    log::info!(
        "{}: {} train, {} dev, {} test",
        input.display(),
        parts.train.len(),
        parts.dev.len(),
        parts.test.len()
    );
    Ok(NamedDataset::new(config.dataset_name(), parts))
}

pub fn ingest(config: &RunConfig, stats: bool) -> Result<()> {
    let records = read_corpus(config.input()?)?;
    let out = config.out.join("corpus.jsonl");
    emit_to_path(&records, &out)?;
    println!("records {}", records.len());
    let mut sources: BTreeMap<Source, usize> = BTreeMap::new();
    for r in &records {
        *sources.entry(r.source).or_default() += 1;
    }
    for (source, n) in sources {
        println!("source {source} {n}");
    }
    if stats {
        for label in VeracityLabel::ALL {
            let n = records.iter().filter(|r| r.label == label).count();
            println!("label {label} {n}");
        }
        for raw in RawLabel::ALL {
            let n = records.iter().filter(|r| r.raw_label == raw).count();
            println!("raw {raw} {n}");
        }
    }
    Ok(())
}

pub fn preprocess(config: &RunConfig) -> Result<()> {
    let records = read_corpus(config.input()?)?;
    let resources = config.resources()?;
    let pipeline = &config.preprocess.pipeline;
    pipeline.check_resources(&resources)?;
    let out: Vec<_> = records
        .iter()
        .map(|r| preprocess_record(r, pipeline, &resources, config.preprocess.apply_to))
        .collect::<gutcheck::Result<_>>()?;
    let path = config.out.join("preprocessed.jsonl");
    emit_to_path(&out, &path)?;
    println!("wrote {} records to {}", out.len(), path.display());
    Ok(())
}

pub fn synth(config: &RunConfig) -> Result<()> {
    let records = generate_synthetic(config.synth.n, config.synth.vocab, config.seed)?;
    let path = config.out.join("synthetic.jsonl");
    emit_to_path(&records, &path)?;
    println!("wrote {} records to {}", records.len(), path.display());
    Ok(())
}

pub fn train(config: &RunConfig) -> Result<()> {
    let dataset = load_split(config)?;
    let resources = config.resources()?;
    let lexicon = config.required_lexicon(config.emotion.mode)?;
    let trained = fit(
        &dataset.split,
        lexicon.as_ref(),
        &config.preprocess.pipeline,
        &resources,
        &config.train,
    )?;
    let checkpoint = sub(config, "checkpoints", "model.json");
    trained.model.save(&checkpoint)?;

    let mut history = String::from("epoch,train_loss,dev_f1\n");
    for e in &trained.history.epochs {
        history.push_str(&format!("{},{},{}\n", e.epoch, e.train_loss, e.dev_f1));
        log::info!(
            "epoch {:>3}  loss {:.4}  dev f1 {:.4}",
            e.epoch,
            e.train_loss,
            e.dev_f1
        );
    }
    write(&sub(config, "reports", "history.csv"), &history)?;

    let best = &trained.history.epochs[trained.history.best_epoch - 1];
    println!(
        "best epoch {} dev_f1 {:.4} checkpoint {}",
        best.epoch,
        best.dev_f1,
        checkpoint.display()
    );
    Ok(())
}

/// `f1_ce=.. f1_e=.. delta=..`, taken from the CSV so the three agree.
fn score_line(row: &ReportRow) -> Result<String> {
    let csv = Report::new(vec![row.clone()]).to_csv()?;
    let line = csv.lines().nth(1).unwrap_or_default();
    let fields: Vec<&str> = line.rsplitn(4, ',').collect();
    Ok(format!(
        "f1_ce={} f1_e={} delta={}",
        fields[2], fields[1], fields[0]
    ))
}

pub fn eval(config: &RunConfig, checkpoint: Option<&Path>) -> Result<()> {
    let dataset = load_split(config)?;
    let resources = config.resources()?;
    if let Some(path) = checkpoint {
        let model = Model::load(path)?;
        let lexicon = config.required_lexicon(model.config.emotion_mode)?;
        let f1 = model.score(
            &dataset.split.test,
            TextContext::new(&resources, lexicon.as_ref()),
        )?;
        println!("f1={f1:.4}");
        return Ok(());
    }
    let lexicon = config.required_lexicon(config.emotion.mode)?;
    let result = run_experiment(
        &dataset,
        &config.preprocess.pipeline,
        config.emotion.mode,
        &config.train,
        TextContext::new(&resources, lexicon.as_ref()),
    )?;
    let report = Report::new(vec![ReportRow::from(&result)]);
    write(&sub(config, "reports", "eval.csv"), &report.to_csv()?)?;
    println!("{}", score_line(&report.rows[0])?);
    Ok(())
}

pub fn ablate(config: &RunConfig) -> Result<()> {
    let dataset = load_split(config)?;
    let resources = config.resources()?;
    let lexicon = config.required_lexicon(config.emotion.mode)?;
    let results = ablation_sweep(
        &dataset,
        &config.preprocess.pipeline,
        config.emotion.mode,
        &config.train,
        TextContext::new(&resources, lexicon.as_ref()),
        &config.ablate.ks,
    )?;
    let report = Report::new(results.iter().map(ReportRow::from).collect());
    write(&sub(config, "reports", "ablation.csv"), &report.to_csv()?)?;
    print!("{}", report.to_text());
    Ok(())
}

pub fn matrix(config: &RunConfig) -> Result<()> {
    let pipelines = Pipeline::parse_list(&config.matrix.pipelines)?;
    let modes = EmotionMode::parse_list(&config.matrix.emotion_modes)?;
    let dataset = load_split(config)?;
    let resources = config.resources()?;
    // Cells that need a missing lexicon fail on their own.
    let lexicon = config.lexicon()?;
    let report = experiment_matrix(
        &dataset,
        &pipelines,
        &modes,
        &config.train,
        TextContext::new(&resources, lexicon.as_ref()),
    )?;
    write(&sub(config, "reports", "matrix.csv"), &report.to_csv()?)?;
    print!("{}", report.to_text());
    let failed = report.rows.iter().filter(|r| r.is_failed()).count();
    if failed > 0 {
        bail!("{failed} of {} matrix cells failed", report.rows.len());
    }
    Ok(())
}
