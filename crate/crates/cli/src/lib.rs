//! Command-line driver and annotation service.

pub mod args;
pub mod commands;
pub mod service;

use std::sync::Arc;

use anyhow::{Context, Result};

use hybridlink_core::benchmark::GoldStore;

use args::{BenchCommand, Cli, Command, ServeArgs};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Link(args) => {
            for (id, path) in commands::link(&args)? {
                println!("{id}\t{}", path.display());
            }
        }
        Command::Bench(BenchCommand::Sample(args)) => {
            let sample = commands::sample(&args)?;
            println!("sampled {} scenes", sample.len());
        }
        Command::Bench(BenchCommand::Pool(args)) => {
            let phrases = commands::pool(&args)?;
            println!("pooled {} phrases", phrases.len());
        }
        Command::Bench(BenchCommand::Combine(args)) => {
            let combined = commands::combine(&args)?;
            println!("combined {} annotations", combined.len());
        }
        Command::Bench(BenchCommand::Evaluate(args)) => {
            print!("{}", commands::format_reports(&commands::evaluate_files(&args)?));
        }
        Command::Bench(BenchCommand::Stats(args)) => {
            print!("{}", commands::format_stats(&commands::stats(&args)?));
        }
        Command::Serve(args) => serve(&args)?,
    }
    Ok(())
}

pub fn app_state(args: &ServeArgs) -> Result<service::AppState> {
    let corpus = commands::read_corpus(&args.corpus)?;
    let phrases = commands::read_pool(&args.pool)?;
    let kb = commands::read_kb(&args.kb)?;
    let sample = args.sample.as_deref().map(commands::read_sample).transpose()?;
    let store = GoldStore::open(&args.gold).with_context(|| format!("opening gold log {}", args.gold.display()))?;
    service::AppState::new(corpus, phrases, sample.as_deref(), &kb, args.candidates, store)
}

fn serve(args: &ServeArgs) -> Result<()> {
    let state = Arc::new(app_state(args)?);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(service::serve(state, args.bind))
}
