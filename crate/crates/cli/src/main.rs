//! `gutcheck`: ingest, preprocess and synthesize claim corpora, train the
//! claim/evidence classifier and run the evidence-only comparison.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "gutcheck", version, about = "Claim/evidence veracity lab")]
struct Cli {
    /// Seed for corpus generation, splitting and training.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (config echo, checkpoints/, reports/, logs/).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// TOML run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a corpus, re-emit it and print counts.
    Ingest {
        input: PathBuf,
        /// Also print the per-class label histogram.
        #[arg(long)]
        stats: bool,
    },
    /// Run a preprocessing pipeline over every claim and snippet.
    Preprocess {
        input: Option<PathBuf>,
        /// Comma-separated steps from neg, pos, stop, stem ("" or "none" for none).
        #[arg(long)]
        pipeline: Option<String>,
        /// both, claim or evidence.
        #[arg(long)]
        apply_to: Option<String>,
    },
    /// Generate a synthetic corpus.
    Synth {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        vocab: Option<usize>,
    },
    /// Train one model and save its checkpoint.
    Train {
        #[command(flatten)]
        run: RunArgs,
        /// claim-and-evidence, evidence-only or claim-only.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Train the claim-and-evidence and evidence-only models and report
    /// both test scores, or score an existing checkpoint.
    Eval {
        #[command(flatten)]
        run: RunArgs,
        /// Score this checkpoint on the test split instead of training.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Repeat the comparison with snippets cut to the top k.
    Ablate {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated snippet counts.
        #[arg(long, value_delimiter = ',')]
        ks: Option<Vec<usize>>,
    },
    /// Every pipeline against every emotion mode.
    Matrix {
        #[command(flatten)]
        run: RunArgs,
        /// Semicolon-separated pipelines, e.g. "none;pos;stop;pos,stop".
        #[arg(long)]
        pipelines: Option<String>,
        /// Comma-separated emotion modes, e.g. "none,lexi,int".
        #[arg(long)]
        emotions: Option<String>,
    },
}

/// Options shared by the training commands.
#[derive(Args, Debug, Default)]
struct RunArgs {
    input: Option<PathBuf>,
    #[arg(long)]
    pipeline: Option<String>,
    /// none, lexi or int.
    #[arg(long)]
    emotion: Option<String>,
    /// Affect lexicon file, or "fixture" for the bundled miniature one.
    #[arg(long)]
    lexicon: Option<String>,
    /// Train/dev/test ratios, e.g. 0.8,0.1,0.1.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    split: Option<Vec<f64>>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    /// Dataset name in reports; defaults to the input file stem.
    #[arg(long)]
    name: Option<String>,
}

impl RunArgs {
    fn apply(&self, c: &mut RunConfig) -> anyhow::Result<()> {
        if let Some(v) = &self.input {
            c.data.input = Some(v.clone());
        }
        if let Some(v) = &self.name {
            c.data.name = Some(v.clone());
        }
        if let Some(v) = &self.pipeline {
            c.preprocess.pipeline = v.parse()?;
        }
        if let Some(v) = &self.emotion {
            c.emotion.mode = v.parse()?;
        }
        if let Some(v) = &self.lexicon {
            c.emotion.lexicon = Some(v.clone());
        }
        if let Some(v) = &self.split {
            c.data.split = [v[0], v[1], v[2]];
        }
        if let Some(v) = self.epochs {
            c.train.epochs = v;
        }
        if let Some(v) = self.learning_rate {
            c.train.learning_rate = v;
        }
        if let Some(v) = self.batch_size {
            c.train.batch_size = v;
        }
        Ok(())
    }
}

fn resolve(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut c = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        c.seed = seed;
    }
    if let Some(out) = &cli.out {
        c.out = out.clone();
    }
    match &cli.command {
        Command::Ingest { input, .. } => {
            c.command = "ingest".into();
            c.data.input = Some(input.clone());
        }
        Command::Preprocess {
            input,
            pipeline,
            apply_to,
        } => {
            c.command = "preprocess".into();
            if let Some(v) = input {
                c.data.input = Some(v.clone());
            }
            if let Some(v) = pipeline {
                c.preprocess.pipeline = v.parse()?;
            }
            if let Some(v) = apply_to {
                c.preprocess.apply_to = v.parse()?;
            }
        }
        Command::Synth { n, vocab } => {
            c.command = "synth".into();
            if let Some(v) = n {
                c.synth.n = *v;
            }
            if let Some(v) = vocab {
                c.synth.vocab = *v;
            }
        }
        Command::Train { run, mode } => {
            c.command = "train".into();
            run.apply(&mut c)?;
            if let Some(v) = mode {
                c.train.mode = v.parse()?;
            }
        }
        Command::Eval { run, .. } => {
            c.command = "eval".into();
            run.apply(&mut c)?;
        }
        Command::Ablate { run, ks } => {
            c.command = "ablate".into();
            run.apply(&mut c)?;
            if let Some(v) = ks {
                c.ablate.ks = v.clone();
            }
        }
        Command::Matrix {
            run,
            pipelines,
            emotions,
        } => {
            c.command = "matrix".into();
            run.apply(&mut c)?;
            if let Some(v) = pipelines {
                c.matrix.pipelines = v.clone();
            }
            if let Some(v) = emotions {
                c.matrix.emotion_modes = v.clone();
            }
        }
    }
    c.train.seed = c.seed;
    c.train.emotion_mode = c.emotion.mode;
    Ok(c)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = resolve(&cli)?;
    commands::prepare_out(&config)?;
    match &cli.command {
        Command::Ingest { stats, .. } => commands::ingest(&config, *stats),
        Command::Preprocess { .. } => commands::preprocess(&config),
        Command::Synth { .. } => commands::synth(&config),
        Command::Train { .. } => commands::train(&config),
        Command::Eval { checkpoint, .. } => commands::eval(&config, checkpoint.as_deref()),
        Command::Ablate { .. } => commands::ablate(&config),
        Command::Matrix { .. } => commands::matrix(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let causes: Vec<String> = e.chain().map(ToString::to_string).collect();
            eprintln!("error: {}", causes.join(": "));
            ExitCode::FAILURE
        }
    }
}
