//! Run configuration: built-in defaults, then the `--config` file, then
//! command-line flags. The resolved result is echoed to `<out>/config.toml`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gutcheck::emolex::AffectLexicon;
use gutcheck::preprocess::{AntonymLexicon, ApplyTo, Stoplist, TagLexicon};
use gutcheck::{EmotionMode, Pipeline, Resources, TrainConfig};
use serde::{Deserialize, Serialize};

/// Passing this instead of a path selects the bundled 40-term lexicon.
pub const FIXTURE_LEXICON: &str = "fixture";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Which subcommand produced the echo; informational.
    pub command: String,
    /// The only source of randomness: corpus generation, splits and
    /// training all derive from it.
    pub seed: u64,
    pub out: PathBuf,
    pub data: DataConfig,
    pub preprocess: PreprocessConfig,
    pub emotion: EmotionConfig,
    pub resources: ResourceConfig,
    pub train: TrainConfig,
    pub synth: SynthConfig,
    pub ablate: AblateConfig,
    pub matrix: MatrixConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: String::new(),
            seed: 0,
            out: PathBuf::from("out"),
            data: DataConfig::default(),
            preprocess: PreprocessConfig::default(),
            emotion: EmotionConfig::default(),
            resources: ResourceConfig::default(),
            train: TrainConfig::default(),
            synth: SynthConfig::default(),
            ablate: AblateConfig::default(),
            matrix: MatrixConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    pub input: Option<PathBuf>,
    /// Dataset column of reports; defaults to the input file stem.
    pub name: Option<String>,
    pub split: [f64; 3],
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            input: None,
            name: None,
            split: [0.8, 0.1, 0.1],
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    pub pipeline: Pipeline,
    pub apply_to: ApplyTo,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmotionConfig {
    pub mode: EmotionMode,
    /// Affect lexicon file, or `fixture`.
    pub lexicon: Option<String>,
}

/// Replacements for the bundled preprocessing resources.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResourceConfig {
    pub stoplist: Option<PathBuf>,
    pub antonyms: Option<PathBuf>,
    pub tagger: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub n: usize,
    pub vocab: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n: 300,
            vocab: gutcheck::corpus::SYNTHETIC_DEFAULT_VOCAB,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AblateConfig {
    pub ks: Vec<usize>,
}

impl Default for AblateConfig {
    fn default() -> Self {
        AblateConfig {
            ks: vec![10, 7, 4, 1],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatrixConfig {
    /// Semicolon-separated pipelines.
    pub pipelines: String,
    /// Comma-separated emotion modes.
    pub emotion_modes: String,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        MatrixConfig {
            pipelines: "none;pos;stop;pos,stop".into(),
            emotion_modes: "none,lexi,int".into(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn input(&self) -> Result<&Path> {
        match &self.data.input {
            Some(p) => Ok(p),
            None => bail!("no input corpus given (pass INPUT or set data.input)"),
        }
    }

    pub fn dataset_name(&self) -> String {
        self.data.name.clone().unwrap_or_else(|| {
            self.data
                .input
                .as_deref()
                .and_then(Path::file_stem)
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into())
        })
    }

    pub fn resources(&self) -> Result<Resources> {
        let mut r = Resources::bundled();
        if let Some(p) = &self.resources.stoplist {
            r.stoplist = Some(Stoplist::load(p)?);
        }
        if let Some(p) = &self.resources.antonyms {
            r.antonyms = Some(AntonymLexicon::load(p)?);
        }
        if let Some(p) = &self.resources.tagger {
            r.tagger = Some(TagLexicon::load(p)?);
        }
        Ok(r)
    }

    /// The affect lexicon, if one is configured.
    pub fn lexicon(&self) -> Result<Option<AffectLexicon>> {
        match self.emotion.lexicon.as_deref() {
            None => Ok(None),
            Some(FIXTURE_LEXICON) => Ok(Some(AffectLexicon::fixture())),
            Some(path) => Ok(Some(AffectLexicon::load(path)?)),
        }
    }

    /// Like [`lexicon`](Self::lexicon), but an error when emotions are on
    /// and nothing is configured.
    pub fn required_lexicon(&self, mode: EmotionMode) -> Result<Option<AffectLexicon>> {
        let lex = self.lexicon()?;
        if mode != EmotionMode::None && lex.is_none() {
            bail!("emotion mode {mode} needs --lexicon (a file or \"{FIXTURE_LEXICON}\")");
        }
        Ok(lex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trips() {
        let mut c = RunConfig::default();
        c.preprocess.pipeline = "pos,stop".parse().unwrap();
        c.emotion.mode = EmotionMode::Int;
        c.train.learning_rate = 0.01;
        let text = c.to_toml().unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.to_toml().unwrap(), text);
        assert_eq!(back.train.learning_rate, 0.01);
    }

    #[test]
    fn partial_files_fill_defaults() {
        let c: RunConfig = toml::from_str("seed = 3\n[train]\nepochs = 2\n").unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.train.epochs, 2);
        assert_eq!(c.ablate.ks, [10, 7, 4, 1]);
        assert!(toml::from_str::<RunConfig>("sed = 3\n").is_err());
    }
}
