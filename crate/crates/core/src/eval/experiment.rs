use serde::{Deserialize, Serialize};

use super::metrics::delta;
use super::report::{Report, ReportRow};
use crate::corpus::{DatasetSplit, MAX_SNIPPETS};
use crate::emolex::EmotionMode;
use crate::error::{Error, Result};
use crate::model::{train, InputMode, TextContext, TrainConfig, Trained};
use crate::preprocess::Pipeline;

/// A split with the name it is reported under.
#[derive(Clone, Debug)]
pub struct NamedDataset {
    pub name: String,
    pub split: DatasetSplit,
}

impl NamedDataset {
    pub fn new(name: impl Into<String>, split: DatasetSplit) -> Self {
        NamedDataset {
            name: name.into(),
            split,
        }
    }
}

/// `delta` is recomputed from the two scores when deserialized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "StoredResult")]
pub struct ExperimentResult {
    pub dataset: String,
    pub pipeline: Pipeline,
    pub emotion_mode: EmotionMode,
    pub snippet_count: usize,
    pub seed: u64,
    /// Test macro-F1 with claim and evidence.
    pub score_ce: f64,
    /// Test macro-F1 with evidence only.
    pub score_e: f64,
    pub delta: f64,
}

#[derive(Deserialize)]
struct StoredResult {
    dataset: String,
    pipeline: Pipeline,
    emotion_mode: EmotionMode,
    snippet_count: usize,
    seed: u64,
    score_ce: f64,
    score_e: f64,
}

impl From<StoredResult> for ExperimentResult {
    fn from(s: StoredResult) -> Self {
        ExperimentResult {
            dataset: s.dataset,
            pipeline: s.pipeline,
            emotion_mode: s.emotion_mode,
            snippet_count: s.snippet_count,
            seed: s.seed,
            score_ce: s.score_ce,
            score_e: s.score_e,
            delta: delta(s.score_ce, s.score_e),
        }
    }
}

/// Both models behind one [`ExperimentResult`].
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub result: ExperimentResult,
    pub claim_and_evidence: Trained,
    pub evidence_only: Trained,
}

/// Train the claim-and-evidence and evidence-only models with the same
/// seed and configuration and score both on the test split.
pub fn run_experiment_full(
    dataset: &NamedDataset,
    pipeline: &Pipeline,
    emotion_mode: EmotionMode,
    config: &TrainConfig,
    ctx: TextContext<'_>,
) -> Result<ExperimentRun> {
    if emotion_mode != EmotionMode::None && ctx.lexicon.is_none() {
        return Err(Error::MissingResource {
            step: "emotion attention",
            resource: "affect lexicon",
        });
    }
    pipeline.check_resources(ctx.resources)?;
    let fit = |mode: InputMode| -> Result<(Trained, f64)> {
        let cfg = TrainConfig {
            mode,
            emotion_mode,
            ..config.clone()
        };
        let trained = train(&dataset.split, ctx.lexicon, pipeline, ctx.resources, &cfg)?;
        let score = trained.model.score(&dataset.split.test, ctx)?;
        Ok((trained, score))
    };
    let (ce, score_ce) = fit(InputMode::ClaimAndEvidence)?;
    let (e, score_e) = fit(InputMode::EvidenceOnly)?;
    Ok(ExperimentRun {
        result: ExperimentResult {
            dataset: dataset.name.clone(),
            pipeline: pipeline.clone(),
            emotion_mode,
            snippet_count: MAX_SNIPPETS,
            seed: config.seed,
            score_ce,
            score_e,
            delta: delta(score_ce, score_e),
        },
        claim_and_evidence: ce,
        evidence_only: e,
    })
}

pub fn run_experiment(
    dataset: &NamedDataset,
    pipeline: &Pipeline,
    emotion_mode: EmotionMode,
    config: &TrainConfig,
    ctx: TextContext<'_>,
) -> Result<ExperimentResult> {
    Ok(run_experiment_full(dataset, pipeline, emotion_mode, config, ctx)?.result)
}

/// One experiment per `k`, each on records cut down to their top-k
/// snippets by rank in every split.
pub fn ablation_sweep(
    dataset: &NamedDataset,
    pipeline: &Pipeline,
    emotion_mode: EmotionMode,
    config: &TrainConfig,
    ctx: TextContext<'_>,
    ks: &[usize],
) -> Result<Vec<ExperimentResult>> {
    if let Some(k) = ks.iter().find(|&&k| !(1..=MAX_SNIPPETS).contains(&k)) {
        return Err(Error::InvalidArgument(format!(
            "snippet count {k} outside 1..={MAX_SNIPPETS}"
        )));
    }
    ks.iter()
        .map(|&k| {
            let truncated = NamedDataset {
                name: dataset.name.clone(),
                split: dataset.split.map_records(|r| r.truncated(k)),
            };
            let mut result = run_experiment(&truncated, pipeline, emotion_mode, config, ctx)?;
            result.snippet_count = k;
            Ok(result)
        })
        .collect()
}

/// Every pipeline against every emotion mode. A failing cell becomes a
/// failed report row; the other cells still run.
pub fn experiment_matrix(
    dataset: &NamedDataset,
    pipelines: &[Pipeline],
    emotion_modes: &[EmotionMode],
    config: &TrainConfig,
    ctx: TextContext<'_>,
) -> Result<Report> {
    if pipelines.is_empty() || emotion_modes.is_empty() {
        return Err(Error::InvalidArgument(
            "experiment matrix needs at least one pipeline and one emotion mode".into(),
        ));
    }
    let mut rows = Vec::with_capacity(pipelines.len() * emotion_modes.len());
    for pipeline in pipelines {
        for &mode in emotion_modes {
            let row = match run_experiment(dataset, pipeline, mode, config, ctx) {
                Ok(result) => ReportRow::from(&result),
                Err(e) => {
                    log::warn!("cell {pipeline} / {mode} failed: {e}");
                    ReportRow::failed(
                        &dataset.name,
                        pipeline,
                        mode,
                        MAX_SNIPPETS,
                        config.seed,
                        e.to_string(),
                    )
                }
            };
            rows.push(row);
        }
    }
    let mut report = Report::new(rows);
    report.sort();
    Ok(report)
}
