//! Experiment CLI around the completion library: image and mask I/O,
//! configuration, solver invocation, and trace export.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod imageio;
pub mod trace_csv;

use args::{Cli, Command};
use config::RawSettings;
use error::CliError;
use oger_core::mask::MaskSpec;

/// Dispatches a parsed invocation.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Complete(args) => {
            let (config_path, mut settings) = args.into_settings();
            if let Some(path) = config_path {
                let map = config::parse_config_file(&path)?;
                settings.merge_file(&map)?;
            }
            let experiment = settings.build_experiment()?;
            commands::run_complete(&experiment)
        }
        Command::Decompose(args) => {
            let k_list = parse_k_list(&args.k_list)?;
            commands::run_decompose(&args.input, &k_list, &args.output_dir)
        }
        Command::Maskgen(args) => {
            let settings = RawSettings {
                mask: Some(args.mask.clone()),
                eta: args.eta,
                seed: args.seed,
                blocks: args.blocks.clone(),
                ..Default::default()
            };
            let spec = settings.build_mask_spec()?;
            if matches!(spec, MaskSpec::FromImage { .. }) {
                return Err(CliError::usage("maskgen only supports random or blocks masks"));
            }
            commands::run_maskgen(&spec, args.rows, args.cols, &args.output)
        }
        Command::Metrics(args) => commands::run_metrics(&args.reference, &args.estimate),
    }
}

fn parse_k_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("invalid truncation rank `{tok}`")))
        })
        .collect()
}
