//! Experiment configuration: a flat key=value file merged with command-line
//! overrides. Flags win over file entries, file entries win over defaults.

use crate::error::CliError;
use oger_core::mask::{BlockRect, MaskSpec};
use oger_core::oger::OgerParams;
use oger_core::solver::SolverConfig;
use oger_core::surrogate::RankSurrogate;
use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

/// Everything one `complete` run needs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub input_path: PathBuf,
    pub mask: MaskSpec,
    pub solver: SolverConfig,
    pub ground_truth_path: Option<PathBuf>,
    pub output_dir: PathBuf,
}

/// Raw settings before validation; every field mirrors a flag and a config
/// file key of the same name.
#[derive(Debug, Clone, Default)]
pub struct RawSettings {
    pub input: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub ground_truth: Option<PathBuf>,
    pub mask: Option<String>,
    pub eta: Option<f64>,
    pub seed: Option<u64>,
    pub blocks: Option<String>,
    pub mask_image: Option<PathBuf>,
    pub surrogate: Option<String>,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
    pub k: Option<usize>,
    pub inner_n: Option<usize>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub p: Option<f64>,
    pub tau: Option<f64>,
    pub weights: Option<String>,
}

/// Parses a `key=value` file; `#` starts a comment, blank lines are skipped.
pub fn parse_config_file(path: &PathBuf) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("failed to read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!(
                "{}:{}: expected key=value, got `{raw}`",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parsed<T: FromStr>(map: &HashMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| CliError::usage(format!("config key `{key}` has invalid value `{raw}`"))),
    }
}

impl RawSettings {
    /// Fills every unset field from the config file map.
    pub fn merge_file(&mut self, map: &HashMap<String, String>) -> Result<(), CliError> {
        fn fill<T>(slot: &mut Option<T>, value: Option<T>) {
            if slot.is_none() {
                *slot = value;
            }
        }
        fill(&mut self.input, map.get("input").map(PathBuf::from));
        fill(&mut self.output_dir, map.get("output_dir").map(PathBuf::from));
        fill(&mut self.ground_truth, map.get("ground_truth").map(PathBuf::from));
        fill(&mut self.mask, map.get("mask").cloned());
        fill(&mut self.eta, parsed(map, "eta")?);
        fill(&mut self.seed, parsed(map, "seed")?);
        fill(&mut self.blocks, map.get("blocks").cloned());
        fill(&mut self.mask_image, map.get("mask_image").map(PathBuf::from));
        fill(&mut self.surrogate, map.get("surrogate").cloned());
        fill(&mut self.alpha, parsed(map, "alpha")?);
        fill(&mut self.lambda, parsed(map, "lambda")?);
        fill(&mut self.rho, parsed(map, "rho")?);
        fill(&mut self.k, parsed(map, "k")?);
        fill(&mut self.inner_n, parsed(map, "inner_n")?);
        fill(&mut self.tol, parsed(map, "tol")?);
        fill(&mut self.max_iter, parsed(map, "max_iter")?);
        fill(&mut self.p, parsed(map, "p")?);
        fill(&mut self.tau, parsed(map, "tau")?);
        fill(&mut self.weights, map.get("weights").cloned());
        Ok(())
    }

    pub fn build_mask_spec(&self) -> Result<MaskSpec, CliError> {
        let kind = self.mask.as_deref().unwrap_or("random");
        match kind {
            "random" => Ok(MaskSpec::Random {
                missing_fraction: self.eta.unwrap_or(0.2),
                seed: self.seed.unwrap_or(0),
            }),
            "blocks" => {
                let text = self
                    .blocks
                    .as_deref()
                    .ok_or_else(|| CliError::usage("mask `blocks` needs --blocks r,c,h,w[;...]"))?;
                Ok(MaskSpec::Blocks { rectangles: parse_blocks(text)? })
            }
            "image" => {
                let path = self
                    .mask_image
                    .clone()
                    .ok_or_else(|| CliError::usage("mask `image` needs --mask-image <path>"))?;
                Ok(MaskSpec::FromImage { path })
            }
            other => Err(CliError::usage(format!(
                "unknown mask kind `{other}` (expected random, blocks, or image)"
            ))),
        }
    }

    pub fn build_surrogate(&self) -> Result<RankSurrogate, CliError> {
        let name = self.surrogate.as_deref().unwrap_or("nuclear");
        let p = self.p.unwrap_or(0.5);
        let tau = self.tau.unwrap_or(1.0);
        let surrogate = match name {
            "nuclear" => RankSurrogate::Nuclear,
            "schatten_p" => RankSurrogate::SchattenP { p },
            "weighted_nuclear" => {
                RankSurrogate::WeightedNuclear { weights: self.parse_weights()? }
            }
            "weighted_schatten_p" => {
                RankSurrogate::WeightedSchattenP { p, weights: self.parse_weights()? }
            }
            "schatten_capped_p" => RankSurrogate::SchattenCappedP { p, tau },
            other => {
                return Err(CliError::usage(format!(
                    "unknown surrogate `{other}` (expected nuclear, schatten_p, \
                     weighted_nuclear, weighted_schatten_p, or schatten_capped_p)"
                )))
            }
        };
        surrogate.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(surrogate)
    }

    fn parse_weights(&self) -> Result<Vec<f64>, CliError> {
        let text = self
            .weights
            .as_deref()
            .ok_or_else(|| CliError::usage("weighted surrogates need --weights w1,w2,..."))?;
        text.split(',')
            .map(|tok| {
                tok.trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("invalid weight `{tok}`")))
            })
            .collect()
    }

    pub fn build_solver_config(&self) -> Result<SolverConfig, CliError> {
        let mut cfg = SolverConfig::new(
            self.alpha.unwrap_or(1.0),
            self.lambda.unwrap_or(0.1),
            self.build_surrogate()?,
        );
        if let Some(rho) = self.rho {
            cfg.rho = rho;
        }
        if let Some(k) = self.k {
            cfg.oger = OgerParams::new(k).map_err(|e| CliError::usage(e.to_string()))?;
        }
        if let Some(n) = self.inner_n {
            cfg.inner_iterations = n;
        }
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(max_iter) = self.max_iter {
            cfg.max_iterations = max_iter;
        }
        cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(cfg)
    }

    /// Validates everything a `complete` run needs.
    pub fn build_experiment(&self) -> Result<ExperimentConfig, CliError> {
        let input_path =
            self.input.clone().ok_or_else(|| CliError::usage("missing --input <image.pgm>"))?;
        let output_dir = self
            .output_dir
            .clone()
            .ok_or_else(|| CliError::usage("missing --output-dir <dir>"))?;
        Ok(ExperimentConfig {
            input_path,
            mask: self.build_mask_spec()?,
            solver: self.build_solver_config()?,
            ground_truth_path: self.ground_truth.clone(),
            output_dir,
        })
    }
}

/// Parses `r,c,h,w` rectangles separated by `;`.
pub fn parse_blocks(text: &str) -> Result<Vec<BlockRect>, CliError> {
    text.split(';')
        .filter(|chunk| !chunk.trim().is_empty())
        .map(|chunk| {
            let parts: Vec<_> = chunk.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(CliError::usage(format!(
                    "block `{chunk}` must be row,col,height,width"
                )));
            }
            let mut nums = [0usize; 4];
            for (slot, tok) in nums.iter_mut().zip(&parts) {
                *slot = tok
                    .parse()
                    .map_err(|_| CliError::usage(format!("invalid block number `{tok}`")))?;
            }
            Ok(BlockRect { row: nums[0], col: nums[1], height: nums[2], width: nums[3] })
        })
        .collect()
}
