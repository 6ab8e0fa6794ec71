//! Run configuration: a TOML file with `[code]`, `[channel]`, `[chase]` and
//! `[sim]` sections, overridable from the command line.

use std::path::Path;
use std::sync::Arc;

use grs_chase::{ChannelModel, ChaseConfig, FieldCtx, Gf, GrsCode, KernelKind, StopMode, UpdateRule};
use serde::{Deserialize, Serialize};

/// Configuration error with the offending field in the message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn field_err(field: &str, msg: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("{field}: {msg}"))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub code: CodeSection,
    pub channel: ChannelSection,
    pub chase: ChaseSection,
    pub sim: SimSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeSection {
    pub m: u32,
    pub d: usize,
    /// Field polynomial as an integer bit pattern; the built-in table is used when absent.
    pub prim_poly: Option<u32>,
    /// Column multipliers; all ones (a Reed-Solomon code) when absent.
    pub a_tilde: Option<Vec<u32>>,
}

impl Default for CodeSection {
    fn default() -> Self {
        CodeSection {
            m: 4,
            d: 5,
            prim_poly: None,
            a_tilde: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Symmetric,
    Soft,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub kind: ChannelKind,
    /// Symbol error probability (symmetric) or noise deviation (soft) per sweep point.
    pub sweep: Vec<f64>,
}

impl Default for ChannelSection {
    fn default() -> Self {
        ChannelSection {
            kind: ChannelKind::Symmetric,
            sweep: vec![0.05],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum RuleName {
    Inversion,
    CrossScaled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StopName {
    Exhaustive,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChaseSection {
    pub eta: usize,
    pub mu: usize,
    pub r_max: usize,
    pub kernel: String,
    pub rule: RuleName,
    pub stop: StopName,
    pub gmd: bool,
}

impl Default for ChaseSection {
    fn default() -> Self {
        ChaseSection {
            eta: 4,
            mu: 2,
            r_max: 2,
            kernel: "B".into(),
            rule: RuleName::Inversion,
            stop: StopName::Exhaustive,
            gmd: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub trials: usize,
    pub seed: u64,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection { trials: 1000, seed: 1 }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Single-line JSON echo of the resolved configuration.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn build_code(&self) -> Result<GrsCode, ConfigError> {
        self.code.build()
    }

    pub fn build_chase(&self) -> Result<ChaseConfig, ConfigError> {
        self.chase.build()
    }

    pub fn channel_points(&self) -> Result<Vec<(f64, ChannelModel)>, ConfigError> {
        self.channel
            .sweep
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let model = match self.channel.kind {
                    ChannelKind::Symmetric => ChannelModel::Symmetric { p: x },
                    ChannelKind::Soft => ChannelModel::Soft { sigma: x },
                };
                model.validate().map_err(|e| field_err(&format!("channel.sweep[{i}]"), e))?;
                Ok((x, model))
            })
            .collect()
    }

    /// Checks every section and returns the objects a run needs.
    pub fn validate(&self) -> Result<(GrsCode, ChaseConfig), ConfigError> {
        let code = self.build_code()?;
        let chase = self.build_chase()?;
        if chase.eta > code.n() {
            return Err(field_err("chase.eta", format!("{} exceeds code length {}", chase.eta, code.n())));
        }
        self.channel_points()?;
        Ok((code, chase))
    }
}

impl CodeSection {
    pub fn build(&self) -> Result<GrsCode, ConfigError> {
        let field = match self.prim_poly {
            Some(p) => FieldCtx::new(self.m, p),
            None => FieldCtx::with_default_poly(self.m),
        }
        .map_err(|e| field_err(if self.prim_poly.is_some() { "code.prim_poly" } else { "code.m" }, e))?;
        let field = Arc::new(field);
        match &self.a_tilde {
            None => GrsCode::reed_solomon(field, self.d),
            Some(a) => {
                let a = a
                    .iter()
                    .map(|&v| field.elem(v))
                    .collect::<grs_chase::Result<Vec<Gf>>>()
                    .map_err(|e| field_err("code.a_tilde", e))?;
                GrsCode::new(field, self.d, a)
            }
        }
        .map_err(|e| field_err("code.d", e))
    }
}

impl ChaseSection {
    pub fn build(&self) -> Result<ChaseConfig, ConfigError> {
        let kernel: KernelKind = self.kernel.parse().map_err(|e| field_err("chase.kernel", e))?;
        let cfg = ChaseConfig {
            eta: self.eta,
            mu: self.mu,
            r_max: self.r_max,
            kernel,
            rule: match self.rule {
                RuleName::Inversion => UpdateRule::Inversion,
                RuleName::CrossScaled => UpdateRule::CrossScaled,
            },
            stop: match self.stop {
                StopName::Exhaustive => StopMode::Exhaustive,
                StopName::Heuristic => StopMode::Heuristic,
            },
            gmd: self.gmd,
        };
        cfg.validate().map_err(|e| field_err("chase", e))?;
        Ok(cfg)
    }
}

/// Command-line overrides shared by all subcommands.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct CodeArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    /// Field extension degree, GF(2^m).
    #[arg(long)]
    pub m: Option<u32>,
    /// Minimum distance (odd).
    #[arg(long)]
    pub d: Option<usize>,
    /// Field polynomial as an integer, e.g. 19 or 0x13.
    #[arg(long, value_parser = parse_u32)]
    pub prim_poly: Option<u32>,
    /// Comma separated column multipliers.
    #[arg(long, value_delimiter = ',', value_parser = parse_u32)]
    pub a_tilde: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Default, clap::Args)]
pub struct ChaseArgs {
    #[arg(long)]
    pub eta: Option<usize>,
    #[arg(long)]
    pub mu: Option<usize>,
    #[arg(long)]
    pub r_max: Option<usize>,
    /// A, A2, B or C.
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, value_enum)]
    pub rule: Option<RuleName>,
    /// Enable the heuristic stopping criterion.
    #[arg(long)]
    pub heuristic: bool,
    /// Erasure-only decoding of the unreliable coordinates.
    #[arg(long)]
    pub gmd: bool,
}

impl CodeArgs {
    pub fn base(&self) -> Result<Config, ConfigError> {
        match &self.config {
            Some(p) => Config::load(p),
            None => Ok(Config::default()),
        }
    }

    pub fn apply(&self, cfg: &mut Config) {
        if let Some(m) = self.m {
            cfg.code.m = m;
        }
        if let Some(d) = self.d {
            cfg.code.d = d;
        }
        if self.prim_poly.is_some() {
            cfg.code.prim_poly = self.prim_poly;
        }
        if self.a_tilde.is_some() {
            cfg.code.a_tilde = self.a_tilde.clone();
        }
    }
}

impl ChaseArgs {
    pub fn apply(&self, cfg: &mut Config) {
        let c = &mut cfg.chase;
        if let Some(v) = self.eta {
            c.eta = v;
        }
        if let Some(v) = self.mu {
            c.mu = v;
        }
        if let Some(v) = self.r_max {
            c.r_max = v;
        }
        if let Some(v) = &self.kernel {
            c.kernel = v.clone();
        }
        if let Some(v) = self.rule {
            c.rule = v;
        }
        if self.heuristic {
            c.stop = StopName::Heuristic;
        }
        if self.gmd {
            c.gmd = true;
        }
    }
}

/// Decimal or `0x` hexadecimal.
pub fn parse_u32(s: &str) -> Result<u32, String> {
    let s = s.trim();
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u32::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad number {s:?}: {e}"))
}
